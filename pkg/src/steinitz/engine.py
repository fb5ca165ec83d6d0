"""Steinitz classes of tame extensions from ramification data, and the groups
R_t(k, G) of realizable classes for the semidirect and Heisenberg families."""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Iterable

from .arith import PrimeStream, is_prime, kronecker
from .classgroup import (
    ClassSubgroup,
    Field,
    Form,
    PrimeIdealRep,
    compose,
    enumerate_class_group,
    form_inverse,
    form_power,
    prime_ideal,
    principal_form,
    reduce_form,
    subgroup_power,
)
from .errors import (
    PreconditionError,
    SearchExhaustedError,
    UnsupportedFamilyError,
)
from .lgroups import Family, GroupSpec
from .wgroups import Certificate, WComputation, w_group

MAX_WITNESS_SIZE = 6


def steinitz_exponent(e: int, m: int) -> int:
    """Exponent of a prime with ramification index e in the Steinitz ideal of a
    tame extension of odd degree m: ((e - 1)/2) * (m / e)."""
    if e < 2 or m % e:
        raise PreconditionError(f"need e >= 2 dividing m, got e={e}, m={m}")
    if m % 2 == 0:
        raise PreconditionError(f"degree must be odd, got {m}")
    return (e - 1) // 2 * (m // e)


@dataclass(frozen=True)
class RamDatum:
    """A degree-1 prime above p (least root, or its conjugate) with index e."""

    p: int
    e: int
    conjugate: bool = False

    def prime(self, field: Field) -> PrimeIdealRep:
        return prime_ideal(field, self.p, self.conjugate)

    def as_dict(self) -> dict:
        return {"p": self.p, "e": self.e, "conjugate": self.conjugate}


def ram_datum(field: Field, p: int, e: int, conjugate: bool = False) -> RamDatum:
    """Build a datum, rejecting primes that do not split in the field."""
    prime_ideal(field, p, conjugate)
    return RamDatum(p, e, conjugate)


@dataclass(frozen=True)
class RamData:
    field: Field
    spec: GroupSpec
    data: tuple[RamDatum, ...] = ()

    def __add__(self, other: "RamData") -> "RamData":
        if (self.field, self.spec) != (other.field, other.spec):
            raise PreconditionError("cannot join ramification data of different fields or groups")
        return RamData(self.field, self.spec, self.data + other.data)

    def as_list(self) -> list[dict]:
        return [d.as_dict() for d in self.data]


def prime_class(field: Field, datum: RamDatum) -> Form:
    return reduce_form(datum.prime(field).form(field.D))


def admissible_indices(spec: GroupSpec) -> list[int]:
    """Possible tame ramification indices: orders of nontrivial cyclic subgroups."""
    l = spec.l
    if spec.family is Family.SEMIDIRECT:
        return [l**j for j in range(1, spec.n + 1)]
    return [l]


def datum_class(field: Field, spec: GroupSpec, datum: RamDatum) -> Form:
    """Class of p^steinitz_exponent(e, |G|)."""
    return form_power(prime_class(field, datum), steinitz_exponent(datum.e, spec.order))


def _rt_parameters(spec: GroupSpec) -> tuple[int, int]:
    """(W modulus, exponent) with R_t(k, G) = W(k, modulus)^exponent."""
    l = spec.l
    if spec.family is Family.SEMIDIRECT:
        return l ** (spec.n - 1), (l - 1) * l // 2
    if spec.family is Family.HEISENBERG:
        return l, (l - 1) * l * l // 2
    raise UnsupportedFamilyError("realizable classes for the cyclic family are not computed")


@dataclass
class Check:
    datum: RamDatum
    passed: bool
    clause: str | None = None
    reason: str = ""

    def as_dict(self) -> dict:
        return {**self.datum.as_dict(), "passed": self.passed, "clause": self.clause, "reason": self.reason}


@dataclass
class ValidationReport:
    checks: list[Check] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def as_dict(self) -> dict:
        return {"ok": self.ok, "checks": [c.as_dict() for c in self.checks]}


def _check_datum(field: Field, spec: GroupSpec, datum: RamDatum) -> Check:
    p, e, l = datum.p, datum.e, spec.l
    D = field.D
    # shape of the inertia group first, then arithmetic of p, then W membership
    if e not in admissible_indices(spec):
        clause = "ii" if spec.family is Family.HEISENBERG else "index"
        return Check(datum, False, clause, f"{e} is not the order of a cyclic subgroup of {spec.label()}")
    if (p - 1) % e:
        return Check(datum, False, "i", f"{p} is not 1 mod {e}")
    if not is_prime(p) or D % p == 0 or kronecker(D, p) != 1:
        return Check(datum, False, "prime", f"{p} is not a rational prime splitting in {field}")
    cls = prime_class(field, datum)
    if spec.family is Family.HEISENBERG:
        if cls not in w_group(field, l).result:
            return Check(datum, False, "ii", f"class not in W(k,{l})")
    elif e % (l * l) == 0:
        if cls not in w_group(field, e // l).result:
            return Check(datum, False, "iii", f"class not in W(k,{e // l})")
    elif cls not in w_group(field, l).result:
        return Check(datum, False, "iv", f"class not in W(k,{l})")
    return Check(datum, True)


def validate_ram_data(ram: RamData) -> ValidationReport:
    return ValidationReport([_check_datum(ram.field, ram.spec, d) for d in ram.data])


def steinitz_class(ram: RamData, validate: bool = True) -> Form:
    """Class of prod p^((e_p - 1)/2 * |G|/e_p) in Cl(k)."""
    if validate:
        report = validate_ram_data(ram)
        if not report.ok:
            bad = report.failures[0]
            raise PreconditionError(f"invalid ramification datum {bad.datum.as_dict()}: ({bad.clause}) {bad.reason}")
    result = principal_form(ram.field.D)
    for datum in ram.data:
        result = compose(result, datum_class(ram.field, ram.spec, datum))
    return result


@dataclass(frozen=True)
class RealizableResult:
    spec: GroupSpec
    exponent: int
    w: WComputation
    result: ClassSubgroup

    @property
    def w_modulus(self) -> int:
        return self.w.target.modulus

    @property
    def certificate(self) -> Certificate:
        return self.w.certificate

    def __contains__(self, x) -> bool:
        return x in self.result


def realizable(field: Field, spec: GroupSpec) -> RealizableResult:
    """R_t(k, G) = W(k, l^(n-1))^((l-1)l/2) for the semidirect family and
    W(k, l)^((l-1)l^2/2) for the Heisenberg group."""
    modulus, exponent = _rt_parameters(spec)
    w = w_group(field, modulus)
    return RealizableResult(spec, exponent, w, subgroup_power(w.result, exponent))


def membership(field: Field, spec: GroupSpec, x) -> bool:
    group = enumerate_class_group(field)
    return group.element(x) in realizable(field, spec).result


def tower_compose(x, deg: int, norm_class) -> Form:
    """st(K/k) from st(k1/k) = x, the degree exponent and N_{k1/k}(st(K/k1))."""
    if deg < 1:
        raise PreconditionError("degree must be >= 1")
    return compose(form_power(x, deg), norm_class)


def _candidate_primes(field: Field, spec: GroupSpec, avoid: int, lower: int, upper: int):
    """Valid (datum, contribution class) options grouped per prime ideal."""
    l = spec.l
    avoid = abs(avoid) or 1
    stream = PrimeStream(l, frozenset({1}), field.D, lower, upper)
    for p in stream:
        if avoid % p == 0:
            continue
        for conj in (False, True):
            options = []
            for e in admissible_indices(spec):
                datum = RamDatum(p, e, conj)
                if _check_datum(field, spec, datum).passed:
                    options.append((datum, datum_class(field, spec, datum)))
            if options:
                yield options


def witness_search(field: Field, spec: GroupSpec, target, avoid: int = 1, *,
                   max_size: int = MAX_WITNESS_SIZE, budget: int = 2 * 10**5) -> RamData:
    """Validated ramification data with Steinitz class ``target``, using only
    primes coprime to avoid * D.

    Dynamic programming over Cl(k): valid prime ideals are added one at a time
    (each with one ramification index), keeping the shortest datum tuple that
    reaches every class, until the target appears or primes run past budget.
    """
    group = enumerate_class_group(field)
    target = group.element(target)
    if target not in realizable(field, spec).result:
        raise PreconditionError(f"{target} is not a realizable class for {spec.label()}")
    identity = group.identity
    if target == identity:
        return RamData(field, spec, ())
    # reach[class] = shortest datum tuple found so far with that Steinitz class
    reach: dict[Form, tuple[RamDatum, ...]] = {identity: ()}
    lower, upper = 2, 1000
    while lower <= budget:
        for options in _candidate_primes(field, spec, avoid, lower, min(upper, budget)):
            update: dict[Form, tuple[RamDatum, ...]] = {}
            for cls, data in reach.items():
                if len(data) >= max_size:
                    continue
                for datum, contrib in options:
                    new = compose(cls, contrib)
                    best = update.get(new, reach.get(new))
                    if best is None or len(best) > len(data) + 1:
                        update[new] = data + (datum,)
            reach.update(update)
            if target in reach:
                return RamData(field, spec, reach[target])
        lower, upper = upper + 1, upper * 2
    raise SearchExhaustedError(f"no witness for {target} with primes below {budget}")


def random_ram_data(field: Field, spec: GroupSpec, rng: random.Random, *,
                    max_primes: int = 4, bound: int = 5000) -> RamData:
    """Random validated ramification data with distinct prime ideals."""
    pool = _prime_pool(field.d, spec, bound)
    k = rng.randint(0, max_primes)
    chosen = rng.sample(pool, min(k, len(pool)))
    data = []
    for p, conj in chosen:
        indices = [e for e in admissible_indices(spec) if (p - 1) % e == 0]
        data.append(RamDatum(p, rng.choice(indices), conj))
    return RamData(field, spec, tuple(data))


_POOLS: dict = {}


def _prime_pool(d: int, spec: GroupSpec, bound: int) -> list[tuple[int, bool]]:
    key = (d, spec.l, bound)
    if key not in _POOLS:
        field = Field(d)
        stream = PrimeStream(spec.l, frozenset({1}), field.D, 2, bound)
        _POOLS[key] = [(p, conj) for p in stream for conj in (False, True)]
    return _POOLS[key]


@dataclass
class PropertyResult:
    name: str
    passed: bool = True
    checked: int = 0
    counterexamples: list = dc_field(default_factory=list)
    note: str = ""

    def fail(self, example) -> None:
        self.passed = False
        if len(self.counterexamples) < 10:
            self.counterexamples.append(example)

    def as_dict(self) -> dict:
        out = {"passed": self.passed, "checked": self.checked, "counterexamples": self.counterexamples}
        if self.note:
            out["note"] = self.note
        return out


def good_group_report(field: Field, spec: GroupSpec, *, seed: int = 0, samples: int = 200,
                      avoids: Iterable[int] | None = None) -> dict[str, PropertyResult]:
    """Class-level checks of the four properties defining a good group."""
    rt = realizable(field, spec).result
    m = spec.order
    l = spec.l

    p1 = PropertyResult("closed")
    for x in rt:
        p1.checked += 1
        if form_inverse(x) not in rt:
            p1.fail({"inverse_of": list(x)})
        for y in rt:
            if compose(x, y) not in rt:
                p1.fail({"product_of": [list(x), list(y)]})

    rng = random.Random(seed)
    p2 = PropertyResult("prime_steinitz_parts")
    p3 = PropertyResult("l_part_powers", note="e_p(l) is read as the l-part of e_p")
    for _ in range(samples):
        ram = random_ram_data(field, spec, rng)
        for datum in ram.data:
            p2.checked += 1
            if datum_class(field, spec, datum) not in rt:
                p2.fail(datum.as_dict())
            cls = prime_class(field, datum)
            e_l = _l_part(datum.e, l)
            p3.checked += 1
            full = form_power(cls, (l - 1) * (m // e_l))
            half = form_power(cls, (l - 1) // 2 * (m // e_l))
            if full not in rt or half not in rt:
                p3.fail(datum.as_dict())

    p4 = PropertyResult("witnesses")
    for a in (avoids if avoids is not None else (1, 4, l)):
        for x in rt:
            p4.checked += 1
            try:
                ram = witness_search(field, spec, x, a)
            except SearchExhaustedError:
                p4.fail({"target": list(x), "avoid": a})
                continue
            if steinitz_class(ram) != x or any(a % d.p == 0 for d in ram.data):
                p4.fail({"target": list(x), "avoid": a, "witness": ram.as_list()})

    return {"1": p1, "2": p2, "3": p3, "4": p4}


def _l_part(e: int, l: int) -> int:
    out = 1
    while e % l == 0:
        e //= l
        out *= l
    return out
