"""W(k, E) for subfields E of k(zeta_M): classes containing primes that split
completely in E, found by sampling degree-1 primes with prescribed Frobenius."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .arith import PrimeStream, prime_factors
from .classgroup import (
    ClassGroup,
    ClassSubgroup,
    Field,
    enumerate_class_group,
    full_subgroup,
    prime_to_class,
    subgroup_generated,
    subgroup_power,
)
from .cyclo import FixedFieldDescriptor, cyclotomic_descriptor, e_descriptor, galois_group
from .errors import PreconditionError, SamplingExhaustedError
from .lgroups import GroupSpec, power

FIRST_BOUND = 10**4
MIN_PRIMES = 25
HARD_CAP = 10**7


class Certificate(str, enum.Enum):
    INDEX_FORCED = "INDEX_FORCED"
    STABILIZED = "STABILIZED"


@dataclass(frozen=True)
class WComputation:
    field: Field
    target: FixedFieldDescriptor
    result: ClassSubgroup
    certificate: Certificate
    bound: int = 0
    prime_count: int = 0

    @property
    def exact(self) -> bool:
        return self.certificate is Certificate.INDEX_FORCED

    def as_dict(self) -> dict:
        return {
            "modulus": self.target.modulus,
            "fixing": sorted(self.target.fixing.elements),
            "cyclotomic_level": self.target.cyclotomic_level,
            "elements": [list(f) for f in self.result.elements],
            "order": self.result.order,
            "index": self.result.index,
            "certificate": self.certificate.value,
            "bound": self.bound,
            "sampled_primes": self.prime_count,
        }


def _forced(index: int, galois_index: int) -> bool:
    # Cl/W is a quotient of both Cl/S and Gal(E/k)
    return gcd(index, galois_index) == 1


@lru_cache(maxsize=None)
def _sample(d: int, modulus: int, fixing: frozenset, galois_index: int,
            first_bound: int, min_primes: int, hard_cap: int):
    field = Field(d)
    group: ClassGroup = enumerate_class_group(field)
    if _forced(group.h, galois_index):
        return full_subgroup(group), Certificate.INDEX_FORCED, 0, 0
    classes: set = set()
    sub = subgroup_generated(group, [])
    lower, upper = 2, first_bound
    count = 0
    while True:
        stream = PrimeStream(modulus, fixing, field.D, lower, upper)
        before = sub.order
        fresh = []
        for p in stream:
            count += 1
            for conj in (False, True):
                cls = prime_to_class(field, p, conj)[1]
                if cls not in classes:
                    classes.add(cls)
                    fresh.append(cls)
        if fresh:
            sub = subgroup_generated(group, list(sub.generators) + fresh)
        if _forced(sub.index, galois_index):
            return sub, Certificate.INDEX_FORCED, upper, count
        if sub.order == before and count >= min_primes and lower > 2:
            return sub, Certificate.STABILIZED, upper, count
        if upper >= hard_cap:
            raise SamplingExhaustedError(
                f"W sampling for d={d}, M={modulus} reached {hard_cap} without stabilizing"
            )
        lower, upper = upper + 1, min(2 * upper, hard_cap)


def w_group_of_descriptor(field: Field, desc: FixedFieldDescriptor, *,
                          first_bound: int = FIRST_BOUND, min_primes: int = MIN_PRIMES,
                          hard_cap: int = HARD_CAP) -> WComputation:
    """Subgroup of Cl(k) generated by split primes whose Frobenius p mod M lies
    in the subgroup fixing E."""
    M = desc.modulus
    gal = galois_group(field, M)
    if not desc.fixing.elements <= gal.elements:
        raise PreconditionError("fixing subgroup is not inside Gal(k(zeta_M)/k)")
    galois_index = len(gal) // len(desc.fixing)
    sub, cert, bound, count = _sample(field.d, M, desc.fixing.elements, galois_index,
                                      first_bound, min_primes, hard_cap)
    return WComputation(field, desc, sub, cert, bound, count)


def w_group(field: Field, M: int, **kwargs) -> WComputation:
    """W(k, M): classes containing a prime that splits completely in k(zeta_M)."""
    if M < 1:
        raise PreconditionError("M must be >= 1")
    return w_group_of_descriptor(field, cyclotomic_descriptor(field, M), **kwargs)


def wexp_check(field: Field, m: int, n: int) -> bool:
    """Whether W(k, m)^n is contained in W(k, mn)."""
    if m < 1 or n < 1:
        raise PreconditionError("m and n must be positive")
    bad = [q for q in prime_factors(n) if m % q]
    if bad:
        raise PreconditionError(f"primes {bad} divide n={n} but not m={m}")
    return subgroup_power(w_group(field, m).result, n) <= w_group(field, m * n).result


def troppo_check(field: Field, l: int, n: int, c: int) -> bool:
    """Whether W(k, E_{tau^(l^c)})^(l^c) is contained in W(k, l^(n-1))."""
    if not 0 < c < n:
        raise PreconditionError("need 0 < c < n")
    spec = GroupSpec.semidirect(l, n)
    t = power(spec, spec.tau(), l**c)
    left = subgroup_power(w_group_of_descriptor(field, e_descriptor(field, spec, t)).result, l**c)
    return left <= w_group(field, l ** (n - 1)).result


def anti_containment_check(field: Field, m1: int, m2: int) -> bool:
    """Whether W(k, m2) is contained in W(k, m1) for m1 | m2."""
    if m1 < 1 or m2 % m1:
        raise PreconditionError(f"{m1} does not divide {m2}")
    return w_group(field, m2).result <= w_group(field, m1).result
