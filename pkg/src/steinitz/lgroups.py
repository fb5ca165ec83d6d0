"""Normal-form arithmetic for the three l-group families.

Elements are plain tuples:

* ``SEMIDIRECT(l, n)``: ``(a, b)`` standing for tau^a sigma^b, with
  sigma tau sigma^-1 = tau^(l^(n-1) + 1);
* ``HEISENBERG(l)``: ``(a, b, c)`` standing for x^a y^b sigma^c, with
  yx = xy sigma and sigma central;
* ``CYCLIC(l)``: ``(a,)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable

from .arith import is_prime
from .errors import PreconditionError, ShapeMismatchError

MAX_L = 7
MAX_N = 4

Element = tuple


class Family(str, enum.Enum):
    SEMIDIRECT = "semidirect"
    HEISENBERG = "heisenberg"
    CYCLIC = "cyclic"


@dataclass(frozen=True)
class GroupSpec:
    family: Family
    l: int
    n: int = 1

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.l < 3 or not is_prime(self.l):
            raise PreconditionError(f"l must be an odd prime, got {self.l}")
        if self.l > MAX_L:
            raise PreconditionError(f"l={self.l} exceeds the cap {MAX_L}")
        if self.family is Family.SEMIDIRECT:
            if not 2 <= self.n <= MAX_N:
                raise PreconditionError(f"n must lie in [2, {MAX_N}], got {self.n}")
        elif self.n != 1:
            object.__setattr__(self, "n", 1)

    @classmethod
    def semidirect(cls, l: int, n: int) -> "GroupSpec":
        return cls(Family.SEMIDIRECT, l, n)

    @classmethod
    def heisenberg(cls, l: int) -> "GroupSpec":
        return cls(Family.HEISENBERG, l)

    @classmethod
    def cyclic(cls, l: int) -> "GroupSpec":
        return cls(Family.CYCLIC, l)

    @property
    def order(self) -> int:
        if self.family is Family.SEMIDIRECT:
            return self.l ** (self.n + 1)
        if self.family is Family.HEISENBERG:
            return self.l ** 3
        return self.l

    @property
    def exponent(self) -> int:
        if self.family is Family.SEMIDIRECT:
            return self.l ** self.n
        return self.l

    @property
    def twist(self) -> int:
        """The power by which sigma acts on tau in the semidirect family."""
        return self.l ** (self.n - 1) + 1

    @property
    def moduli(self) -> tuple[int, ...]:
        if self.family is Family.SEMIDIRECT:
            return (self.l ** self.n, self.l)
        if self.family is Family.HEISENBERG:
            return (self.l,) * 3
        return (self.l,)

    def identity(self) -> Element:
        return (0,) * len(self.moduli)

    def elements(self) -> list[Element]:
        return [tuple(e) for e in product(*(range(m) for m in self.moduli))]

    def check(self, g: Element) -> Element:
        g = tuple(g)
        if len(g) != len(self.moduli):
            raise ShapeMismatchError(f"{g} is not an element of {self.label()}")
        return tuple(x % m for x, m in zip(g, self.moduli))

    def label(self) -> str:
        if self.family is Family.SEMIDIRECT:
            return f"C({self.l}^{self.n}) x| C({self.l})"
        if self.family is Family.HEISENBERG:
            return f"Heis({self.l})"
        return f"C({self.l})"

    # named generators
    def tau(self) -> Element:
        return (1, 0)

    def sigma(self) -> Element:
        return (0, 1) if self.family is Family.SEMIDIRECT else (0, 0, 1)

    def x(self) -> Element:
        return (1, 0, 0)

    def y(self) -> Element:
        return (0, 1, 0)


def mul(spec: GroupSpec, g: Element, h: Element) -> Element:
    g, h = spec.check(g), spec.check(h)
    l = spec.l
    if spec.family is Family.SEMIDIRECT:
        mod = l ** spec.n
        return ((g[0] + h[0] * pow(spec.twist, g[1], mod)) % mod, (g[1] + h[1]) % l)
    if spec.family is Family.HEISENBERG:
        return ((g[0] + h[0]) % l, (g[1] + h[1]) % l, (g[2] + h[2] + g[1] * h[0]) % l)
    return ((g[0] + h[0]) % l,)


def inverse(spec: GroupSpec, g: Element) -> Element:
    g = spec.check(g)
    l = spec.l
    if spec.family is Family.SEMIDIRECT:
        mod = l ** spec.n
        # twist has multiplicative order l modulo l^n
        return ((-g[0] * pow(spec.twist, (l - g[1]) % l, mod)) % mod, (-g[1]) % l)
    if spec.family is Family.HEISENBERG:
        a, b, c = g
        return ((-a) % l, (-b) % l, (a * b - c) % l)
    return ((-g[0]) % l,)


def power(spec: GroupSpec, g: Element, m: int) -> Element:
    """m-fold product of g (square and multiply)."""
    if m < 0:
        raise PreconditionError("exponent must be nonnegative")
    result = spec.identity()
    base = spec.check(g)
    while m:
        if m & 1:
            result = mul(spec, result, base)
        base = mul(spec, base, base)
        m >>= 1
    return result


def semidirect_pow_closed_form(l: int, n: int, a: int, b: int, m: int) -> Element:
    """(tau^a sigma^b)^m via the explicit exponent formula, no iteration."""
    mod = l ** n
    return ((a * m + a * b * l ** (n - 1) * (m - 1) * m // 2) % mod, (b * m) % l)


def order(spec: GroupSpec, g: Element) -> int:
    g = spec.check(g)
    e = identity = spec.identity()
    k = 0
    while True:
        e = mul(spec, e, g)
        k += 1
        if e == identity:
            return k


def conjugate(spec: GroupSpec, g: Element, t: Element) -> Element:
    """g t g^-1."""
    return mul(spec, mul(spec, g, t), inverse(spec, g))


def conj_power_exponent(spec: GroupSpec, t: Element, g: Element) -> int | None:
    """Least nu >= 0 with g t g^-1 = t^nu, or None when the conjugate is not a
    power of t."""
    t = spec.check(t)
    if t == spec.identity():
        raise PreconditionError("t must be nontrivial")
    target = conjugate(spec, g, t)
    acc, k = spec.identity(), 0
    while True:
        if acc == target:
            return k
        acc = mul(spec, acc, t)
        k += 1
        if acc == spec.identity():
            return None


def generated(spec: GroupSpec, gens: Iterable[Element]) -> frozenset:
    """Subgroup generated by gens (closure under right multiplication)."""
    gens = [spec.check(g) for g in gens]
    seen = {spec.identity()}
    frontier = [spec.identity()]
    while frontier:
        nxt = []
        for s in frontier:
            for g in gens:
                p = mul(spec, s, g)
                if p not in seen:
                    seen.add(p)
                    nxt.append(p)
        frontier = nxt
    return frozenset(seen)


def action_exponent_set(spec: GroupSpec, t: Element, actors: Iterable[Element] | None = None) -> frozenset:
    """Residues nu modulo order(t) realized as g t g^-1 = t^nu for g in actors.

    ``actors`` is an iterable of group elements; ``None`` means the whole group.
    """
    t = spec.check(t)
    if t == spec.identity():
        raise PreconditionError("t must be nontrivial")
    if actors is None:
        actors = spec.elements()
    # exponent of each power of t, built once
    powers, acc, k = {}, spec.identity(), 0
    while acc not in powers:
        powers[acc] = k
        acc = mul(spec, acc, t)
        k += 1
    out = {1}
    for g in actors:
        nu = powers.get(conjugate(spec, g, t))
        if nu is not None:
            out.add(nu)
    return frozenset(out)


def cyclic_subgroup_generators(spec: GroupSpec) -> list[tuple[Element, int]]:
    """One (generator, order) pair per nontrivial cyclic subgroup."""
    seen: set[frozenset] = set()
    out = []
    for g in spec.elements():
        if g == spec.identity():
            continue
        sub = generated(spec, [g])
        if sub not in seen:
            seen.add(sub)
            out.append((g, len(sub)))
    return out


@dataclass
class PresentationReport:
    l: int
    n: int
    candidates: int = 0
    qualifying: int = 0
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {
            "l": self.l,
            "n": self.n,
            "candidates": self.candidates,
            "qualifying": self.qualifying,
            "violations": self.violations,
        }


def verify_presentation_uniqueness(l: int, n: int) -> PresentationReport:
    """Replay the normalisation argument for C(l^n) x| C(l) inside the presented group.

    For every x mapping to a generator of the order-l quotient and acting on
    tau by the twist, check that x^l = tau^a with l | a, and that
    sigma' = tau^-b x (a = b l) has order dividing l and the same action.
    """
    spec = GroupSpec.semidirect(l, n)
    tau = spec.tau()
    mod = l ** n
    report = PresentationReport(l, n)
    for x in spec.elements():
        report.candidates += 1
        if x[1] == 0:
            continue
        if conjugate(spec, x, tau) != power(spec, tau, spec.twist):
            continue
        report.qualifying += 1
        xl = power(spec, x, l)
        if xl[1] != 0:
            report.violations.append({"x": x, "clause": "x^l not in <tau>"})
            continue
        if power(spec, x, mod) != spec.identity():
            report.violations.append({"x": x, "clause": "x^(l^n) != 1"})
        a = xl[0]
        if a % l:
            report.violations.append({"x": x, "clause": "l does not divide a", "a": a})
            continue
        b = a // l
        s = mul(spec, power(spec, inverse(spec, tau), b), x)
        if power(spec, s, l) != spec.identity():
            report.violations.append({"x": x, "clause": "sigma'^l != 1"})
        if conjugate(spec, s, tau) != power(spec, tau, spec.twist):
            report.violations.append({"x": x, "clause": "sigma' acts wrongly on tau"})
        if generated(spec, [s, tau]) != frozenset(spec.elements()):
            report.violations.append({"x": x, "clause": "sigma', tau do not generate"})
        for m in range(1, l ** (n + 1) + 1):
            lhs = power(spec, s, m)
            rhs = mul(spec, (-b * m - b * l ** (n - 1) * (m - 1) * m // 2, 0), power(spec, x, m))
            if lhs != rhs:
                report.violations.append({"x": x, "clause": "power identity", "m": m})
                break
    return report
