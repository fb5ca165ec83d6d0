"""Property suites, each replayed over a finite grid of fields and groups."""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Callable, Sequence

from .arith import lifted_power_congruence, prime_factors
from .classgroup import Field
from .cyclo import e_descriptor, g_group, galois_group, potenzagalois_check
from .engine import random_ram_data, realizable, steinitz_class, validate_ram_data
from .lgroups import (
    GroupSpec,
    conj_power_exponent,
    cyclic_subgroup_generators,
    mul,
    order,
    semidirect_pow_closed_form,
    verify_presentation_uniqueness,
)
from .wgroups import anti_containment_check, troppo_check, wexp_check

GRID_FIELDS = (-23, -47, -71, -5, -163)
TAU_ACTION_FIELDS = (-23, -47, -71)
SOUNDNESS_FIELDS = (-23, -47, -71)
W_MODULI = (1, 3, 5, 9, 27)
MAX_DETAILS = 20


@dataclass
class SuiteResult:
    suite: str
    cases: int = 0
    violations: int = 0
    details: list = dc_field(default_factory=list)

    def record(self, ok: bool, case) -> None:
        self.cases += 1
        if not ok:
            self.violations += 1
            if len(self.details) < MAX_DETAILS:
                self.details.append(case)

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def as_dict(self) -> dict:
        return {"suite": self.suite, "cases": self.cases, "violations": self.violations, "details": self.details}


def random_congruence_instance(rng: random.Random) -> tuple[int, int, int, int]:
    """Random (x, y, m, n) with x = y mod m and every prime of n dividing m."""
    m = rng.randint(1, 1000)
    primes = prime_factors(m)
    n = 1
    if primes:
        for _ in range(rng.randint(0, 6)):
            q = rng.choice(primes)
            if n * q > 1000:
                break
            n *= q
    x = rng.randint(-10**6, 10**6)
    k_lo = -((10**6 + x) // m)
    k_hi = (10**6 - x) // m
    y = x + m * rng.randint(k_lo, k_hi)
    return x, y, m, n


def suite_congruenza(fields: Sequence[int], seed: int, count: int = 10**4) -> SuiteResult:
    res = SuiteResult("congruenza")
    rng = random.Random(seed)
    for _ in range(count):
        x, y, m, n = random_congruence_instance(rng)
        res.record(lifted_power_congruence(x, y, m, n), {"x": x, "y": y, "m": m, "n": n})
    return res


def wexp_grid(limit: int = 27) -> list[tuple[int, int]]:
    out = []
    for m in range(1, limit + 1):
        for n in range(1, limit // m + 1):
            if all(m % q == 0 for q in prime_factors(n)):
                out.append((m, n))
    return out


def suite_wexp(fields: Sequence[int], seed: int) -> SuiteResult:
    res = SuiteResult("wexp")
    for d in fields:
        field = Field(d)
        for m, n in wexp_grid():
            res.record(wexp_check(field, m, n), {"d": d, "m": m, "n": n})
        for m1 in W_MODULI:
            for m2 in W_MODULI:
                if m2 % m1 == 0:
                    res.record(anti_containment_check(field, m1, m2), {"d": d, "m1": m1, "m2": m2})
    return res


def _lift_grid():
    for l in (3, 5):
        for n in (2, 3):
            for c in range(1, n):
                yield l, n, c


def suite_potenzagalois(fields: Sequence[int], seed: int) -> SuiteResult:
    res = SuiteResult("potenzagalois")
    for d in fields:
        for l, n, c in _lift_grid():
            res.record(potenzagalois_check(Field(d), l, n, c), {"d": d, "l": l, "n": n, "c": c})
    return res


def suite_troppo(fields: Sequence[int], seed: int) -> SuiteResult:
    res = SuiteResult("troppo")
    for d in fields:
        for l, n, c in _lift_grid():
            res.record(troppo_check(Field(d), l, n, c), {"d": d, "l": l, "n": n, "c": c})
    return res


def tau_action_expected(field: Field, l: int, n: int) -> frozenset:
    M, j = l**n, l ** (n - 1)
    return frozenset(g for g in galois_group(field, M).elements if g % j == 1 % j)


def suite_eciclo(fields: Sequence[int], seed: int) -> SuiteResult:
    res = SuiteResult("eciclo")
    for d in fields:
        field = Field(d)
        for l in (3, 5):
            for n in (2, 3):
                spec = GroupSpec.semidirect(l, n)
                got = g_group(field, spec, spec.tau()).elements
                res.record(got == tau_action_expected(field, l, n), {"d": d, "l": l, "n": n, "got": sorted(got)})
    return res


def _soundness(res: SuiteResult, fields: Sequence[int], specs, seed: int, samples: int) -> None:
    for d in fields:
        field = Field(d)
        for spec in specs:
            rng = random.Random(f"{seed}:{d}:{spec.family.value}:{spec.l}:{spec.n}")
            rt = realizable(field, spec).result
            for _ in range(samples):
                ram = random_ram_data(field, spec, rng)
                ok = validate_ram_data(ram).ok and steinitz_class(ram, validate=False) in rt
                res.record(ok, {"d": d, "group": spec.label(), "ram": ram.as_list()})


def power_formula_cases(res: SuiteResult, l: int, n: int) -> None:
    """Closed-form powers of tau^a sigma^b against iterated multiplication, for
    every a, b and 1 <= m <= l^(n+1)."""
    spec = GroupSpec.semidirect(l, n)
    for a in range(l**n):
        for b in range(l):
            g = (a, b)
            acc = spec.identity()
            for m in range(1, l ** (n + 1) + 1):
                acc = mul(spec, acc, g)
                ok = semidirect_pow_closed_form(l, n, a, b, m) == acc
                res.record(ok, {"l": l, "n": n, "a": a, "b": b, "m": m})


def suite_ln1(fields: Sequence[int], seed: int, samples: int = 1000) -> SuiteResult:
    res = SuiteResult("ln1")
    for l, n in ((3, 2), (3, 3), (5, 2), (5, 3)):
        power_formula_cases(res, l, n)
    spec = GroupSpec.semidirect(3, 3)
    l, n = 3, 3
    for t in spec.elements():
        e = order(spec, t)
        if e % (l * l):
            continue
        a = t[0]
        beta = 0
        while a % l ** (beta + 1) == 0 and beta < n:
            beta += 1
        ok = (
            e == l ** (n - beta)
            and conj_power_exponent(spec, t, spec.sigma()) == spec.twist % e
            and (conj_power_exponent(spec, t, spec.tau()) - 1) % l ** (n - 1 - beta) == 0
        )
        res.record(ok, {"t": list(t), "order": e})
    specs = [GroupSpec.semidirect(3, 2), GroupSpec.semidirect(3, 3)]
    _soundness(res, fields, specs, seed, samples)
    return res


def suite_ramifl(fields: Sequence[int], seed: int, samples: int = 1000) -> SuiteResult:
    res = SuiteResult("ramifl")
    for l in (3, 5):
        spec = GroupSpec.heisenberg(l)
        for g in spec.elements():
            if g != spec.identity():
                res.record(order(spec, g) == l, {"l": l, "g": list(g)})
        gens = cyclic_subgroup_generators(spec)
        res.record(len(gens) == (l**3 - 1) // (l - 1), {"l": l, "subgroups": len(gens)})
        for d in fields:
            field = Field(d)
            for t, _ in gens:
                desc = e_descriptor(field, spec, t)
                trivial = desc.fixing.elements == {1 % l}
                level_ok = desc.cyclotomic_level is not None and l % desc.cyclotomic_level == 0
                res.record(trivial and level_ok, {"d": d, "l": l, "t": list(t)})
    _soundness(res, fields, [GroupSpec.heisenberg(3)], seed, samples)
    return res


def suite_presentation(fields: Sequence[int], seed: int) -> SuiteResult:
    res = SuiteResult("presentation")
    for l, n in ((3, 2), (3, 3), (5, 2)):
        report = verify_presentation_uniqueness(l, n)
        res.cases += report.qualifying
        res.violations += len(report.violations)
        res.details.extend(report.violations[:MAX_DETAILS])
    return res


SUITES: dict[str, tuple[Callable[..., SuiteResult], Sequence[int]]] = {
    "congruenza": (suite_congruenza, ()),
    "wexp": (suite_wexp, GRID_FIELDS),
    "potenzagalois": (suite_potenzagalois, GRID_FIELDS),
    "troppo": (suite_troppo, GRID_FIELDS),
    "eciclo": (suite_eciclo, TAU_ACTION_FIELDS),
    "ln1": (suite_ln1, SOUNDNESS_FIELDS),
    "ramifl": (suite_ramifl, SOUNDNESS_FIELDS),
    "presentation": (suite_presentation, ()),
}


def run_suite(name: str, seed: int = 0, d: int | None = None) -> list[SuiteResult]:
    """Run one suite (or every suite for name == "all"), optionally on one field."""
    names = list(SUITES) if name == "all" else [name]
    out = []
    for key in names:
        fn, fields = SUITES[key]
        out.append(fn((d,) if d is not None else fields, seed))
    return out
