"""Gal(k(zeta_M)/k) as a subgroup of (Z/M)*, action subgroups and fixed fields."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable

from .arith import kronecker, lifted_power_congruence
from .classgroup import Field
from .errors import PreconditionError
from .lgroups import Element, GroupSpec, action_exponent_set, order, power


@dataclass(frozen=True)
class ResidueSubgroup:
    modulus: int
    elements: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "elements", frozenset(x % self.modulus for x in self.elements))

    def __contains__(self, x: int) -> bool:
        return x % self.modulus in self.elements

    def __iter__(self):
        return iter(sorted(self.elements))

    def __len__(self):
        return len(self.elements)

    def __le__(self, other: "ResidueSubgroup") -> bool:
        return self.modulus == other.modulus and self.elements <= other.elements

    def is_subgroup(self) -> bool:
        M = self.modulus
        if 1 % M not in self.elements:
            return False
        for x in self.elements:
            if gcd(x, M) != 1 or pow(x, -1, M) not in self.elements:
                return False
            if any(x * y % M not in self.elements for y in self.elements):
                return False
        return True

    def reduce(self, j: int) -> frozenset[int]:
        """Image under (Z/M)* -> (Z/j)*."""
        return frozenset(x % j for x in self.elements)

    def power_image(self, e: int) -> frozenset[int]:
        return frozenset(pow(x, e, self.modulus) for x in self.elements)


def units(M: int) -> list[int]:
    if M == 1:
        return [0]
    return [x for x in range(1, M) if gcd(x, M) == 1]


def galois_group(field: Field, M: int) -> ResidueSubgroup:
    """Gal(k(zeta_M)/k) inside Gal(Q(zeta_M)/Q) = (Z/M)*.

    k lies in Q(zeta_M) exactly when |D| divides M; then the Galois group is
    the kernel of the quadratic character of k.
    """
    if M < 1:
        raise PreconditionError("M must be >= 1")
    D = field.D
    elems = units(M)
    if M % abs(D) == 0:
        elems = [x for x in elems if kronecker(D, x) == 1]
    return ResidueSubgroup(M, frozenset(elems))


def degree(field: Field, M: int) -> int:
    """[k(zeta_M) : k]."""
    return len(galois_group(field, M))


def g_group(field: Field, spec: GroupSpec, t: Element) -> ResidueSubgroup:
    """Elements of Gal(k(zeta_o(t))/k) whose cyclotomic exponent is realised by
    conjugation on t."""
    t = spec.check(t)
    if t == spec.identity():
        raise PreconditionError("t must be nontrivial")
    M = order(spec, t)
    realised = action_exponent_set(spec, t)
    gal = galois_group(field, M)
    return ResidueSubgroup(M, frozenset(g for g in gal.elements if g in realised))


def kernel_level(field: Field, H: ResidueSubgroup) -> int | None:
    """Least j | M with H = {g in Gal(k(zeta_M)/k) : g = 1 mod j}, if any.

    When it exists, the fixed field of H is k(zeta_j).
    """
    M = H.modulus
    gal = galois_group(field, M)
    for j in range(1, M + 1):
        if M % j:
            continue
        kernel = frozenset(g for g in gal.elements if g % j == 1 % j)
        if kernel == H.elements:
            return j
    return None


@dataclass(frozen=True)
class FixedFieldDescriptor:
    """Subfield E of k(zeta_M)/k, given by the subgroup H fixing it."""

    modulus: int
    fixing: ResidueSubgroup
    cyclotomic_level: int | None = None

    def as_dict(self) -> dict:
        return {
            "modulus": self.modulus,
            "fixing": sorted(self.fixing.elements),
            "cyclotomic_level": self.cyclotomic_level,
        }


def descriptor(field: Field, H: ResidueSubgroup) -> FixedFieldDescriptor:
    return FixedFieldDescriptor(H.modulus, H, kernel_level(field, H))


def cyclotomic_descriptor(field: Field, j: int) -> FixedFieldDescriptor:
    """k(zeta_j) itself, fixed by the trivial subgroup of Gal(k(zeta_j)/k)."""
    return FixedFieldDescriptor(j, ResidueSubgroup(j, frozenset({1 % j})), j)


def e_descriptor(field: Field, spec: GroupSpec, t: Element) -> FixedFieldDescriptor:
    """The fixed field of g_group(field, spec, t) in k(zeta_o(t))."""
    return descriptor(field, g_group(field, spec, t))


def potenzagalois_check(field: Field, l: int, n: int, c: int) -> bool:
    """Whether every lift to Gal(k(zeta_{l^n})/k) of an element of the action
    group of tau^(l^c), raised to the l^c, lands in the action group of tau."""
    if not 0 < c < n:
        raise PreconditionError("need 0 < c < n")
    spec = GroupSpec.semidirect(l, n)
    tau = spec.tau()
    small = g_group(field, spec, power(spec, tau, l**c))
    big = g_group(field, spec, tau)
    mod_small, mod_big = small.modulus, big.modulus
    gal = galois_group(field, mod_big)
    for g in small.elements:
        for lift in gal.elements:
            if lift % mod_small != g % mod_small:
                continue
            # the lift and g agree mod l^(n-c), so their l^c powers agree mod l^n
            if not lifted_power_congruence(lift, g, mod_small, l**c):
                return False
            if pow(lift, l**c, mod_big) not in big:
                return False
    return True


def subgroup_of(field: Field, M: int, residues: Iterable[int]) -> ResidueSubgroup:
    """Subgroup of Gal(k(zeta_M)/k) generated by the given residues."""
    gal = galois_group(field, M)
    sub = {1 % M}
    frontier = list(sub)
    gens = [r % M for r in residues]
    for g in gens:
        if g not in gal:
            raise PreconditionError(f"{g} is not in Gal(k(zeta_{M})/k)")
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g % M
                if y not in sub:
                    sub.add(y)
                    nxt.append(y)
        frontier = nxt
    return ResidueSubgroup(M, frozenset(sub))

