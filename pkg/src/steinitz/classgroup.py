"""Class groups of imaginary quadratic fields as groups of reduced binary forms."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt
from pathlib import Path
from typing import Iterable, NamedTuple

from .arith import is_prime, is_squarefree, kronecker, prime_factors, sqrt_mod_prime
from .errors import (
    CapExceededError,
    DiscriminantMismatchError,
    NonSplitPrimeError,
    PreconditionError,
)

DEFAULT_CAP = 10**6
CACHE_ENV = "STEINITZ_CACHE"


@dataclass(frozen=True)
class Field:
    """k = Q(sqrt(d)) for a squarefree d < 0."""

    d: int

    def __post_init__(self):
        if self.d >= 0 or not is_squarefree(self.d):
            raise PreconditionError(f"d must be a squarefree negative integer, got {self.d}")

    @property
    def D(self) -> int:
        return self.d if self.d % 4 == 1 else 4 * self.d

    def __str__(self):
        return f"Q(sqrt({self.d}))"


class Form(NamedTuple):
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def __str__(self):
        return f"({self.a},{self.b},{self.c})"


def is_reduced(f: Form) -> bool:
    a, b, c = f
    if not (abs(b) <= a <= c):
        return False
    return b >= 0 or (abs(b) != a and a != c)


def normalize(f: Form) -> Form:
    a, b, c = f
    if -a < b <= a:
        return f
    r = (a - b) // (2 * a)
    return Form(a, b + 2 * r * a, a * r * r + b * r + c)


def reduce_form(f: Form) -> Form:
    """Reduced representative of the proper equivalence class of a positive
    definite form."""
    a, b, c = normalize(Form(*f))
    while a > c or (a == c and b < 0):
        s = (c + b) // (2 * c)
        a, b, c = c, -b + 2 * s * c, c * s * s - b * s + a
    return normalize(Form(a, b, c))


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def compose(f: Form, g: Form) -> Form:
    """Reduced Dirichlet composition of two primitive forms of equal discriminant."""
    f, g = Form(*f), Form(*g)
    D = f.discriminant
    if g.discriminant != D:
        raise DiscriminantMismatchError(f"{f} has discriminant {D}, {g} has {g.discriminant}")
    a1, b1, _ = f
    a2, b2, c2 = g
    if a1 > a2:
        a1, b1, a2, b2, c2 = g.a, g.b, f.a, f.b, f.c
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, _ = _xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, x2, v = _xgcd(s, d)
        y2 = -v
    v1, v2 = a1 // d1, a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (b3 * b3 - D) // (4 * a3)
    return reduce_form(Form(a3, b3, c3))


def form_inverse(f: Form) -> Form:
    return reduce_form(Form(f.a, -f.b, f.c))


def principal_form(D: int) -> Form:
    return Form(1, D % 2, (D % 2 - D) // 4)


def form_power(f: Form, e: int) -> Form:
    """f^e for any integer e."""
    f = Form(*f)
    if e < 0:
        f, e = form_inverse(f), -e
    result = principal_form(f.discriminant)
    while e:
        if e & 1:
            result = compose(result, f)
        f = compose(f, f)
        e >>= 1
    return result


def reduced_forms(D: int) -> list[Form]:
    """All primitive reduced forms of discriminant D < 0 by direct search."""
    out = []
    for a in range(1, isqrt(-D // 3) + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            out.append(Form(a, b, c))
    return out


class ClassGroup:
    """Cl(k) as the finite abelian group of reduced forms of discriminant D."""

    def __init__(self, field: Field, forms: Iterable[Form]):
        self.field = field
        self.D = field.D
        self.elements: list[Form] = sorted(Form(*f) for f in forms)
        self._index = {f: i for i, f in enumerate(self.elements)}
        self.identity = principal_form(self.D)
        self._orders: dict[Form, int] = {}
        self.invariants = self._invariant_factors()
        self.generators = self._greedy_generators()

    @property
    def h(self) -> int:
        return len(self.elements)

    def __len__(self):
        return self.h

    def __contains__(self, f) -> bool:
        return Form(*f) in self._index

    def __repr__(self):
        return f"ClassGroup(d={self.field.d}, h={self.h}, invariants={self.invariants})"

    def element(self, f) -> Form:
        f = Form(*f)
        if f not in self._index:
            raise PreconditionError(f"{f} is not a reduced form of discriminant {self.D}")
        return f

    def mul(self, f: Form, g: Form) -> Form:
        return compose(f, g)

    def pow(self, f: Form, e: int) -> Form:
        return form_power(f, e % self.exponent if self.exponent else e)

    def inverse(self, f: Form) -> Form:
        return form_inverse(f)

    def order(self, f: Form) -> int:
        f = Form(*f)
        if f not in self._orders:
            o = self.h
            for p in prime_factors(self.h):
                while o % p == 0 and form_power(f, o // p) == self.identity:
                    o //= p
            self._orders[f] = o
        return self._orders[f]

    @property
    def exponent(self) -> int:
        return self.invariants[-1] if self.invariants else 1

    def _invariant_factors(self) -> list[int]:
        # p-primary structure from the counts |G[p^k]| = prod p^min(k, e_i)
        h = self.h
        orders = [self.order(f) for f in self.elements]
        cyclic_parts: list[list[int]] = []
        for p in prime_factors(h):
            v = 0
            while h % p ** (v + 1) == 0:
                v += 1
            logs = [0]
            k = 0
            while logs[-1] < v:
                k += 1
                count = sum(1 for o in orders if (p**k) % o == 0)
                logs.append(_ilog(count, p))
            # at_least[k] = number of cyclic factors of order >= p^k
            at_least = [logs[i] - logs[i - 1] for i in range(1, len(logs))]
            exps = []
            for k in range(len(at_least)):
                nxt = at_least[k + 1] if k + 1 < len(at_least) else 0
                exps += [k + 1] * (at_least[k] - nxt)
            cyclic_parts.append(sorted((p**e for e in exps), reverse=True))
        width = max((len(c) for c in cyclic_parts), default=0)
        invariants = []
        for i in range(width):
            d = 1
            for c in cyclic_parts:
                if i < len(c):
                    d *= c[i]
            invariants.append(d)
        return sorted(invariants)

    def _greedy_generators(self) -> list[Form]:
        gens: list[Form] = []
        sub = {self.identity}
        for f in sorted(self.elements, key=lambda f: (-self.order(f), f)):
            if len(sub) == self.h:
                break
            if f in sub:
                continue
            gens.append(f)
            sub = _closure(sub, [f])
        return gens

    def prime_class(self, p: int, conjugate: bool = False) -> Form:
        return prime_to_class(self.field, p, conjugate)[1]

    def to_json(self) -> dict:
        return {
            "d": self.field.d,
            "D": self.D,
            "h": self.h,
            "forms": [list(f) for f in self.elements],
            "invariants": list(self.invariants),
        }


def _ilog(n: int, p: int) -> int:
    k = 0
    while n % p == 0 and n > 1:
        n //= p
        k += 1
    if n != 1:
        raise ArithmeticError("count is not a prime power")
    return k


def _closure(sub: set, gens: Iterable[Form]) -> set:
    """Smallest subgroup containing the subgroup ``sub`` and ``gens``."""
    sub = set(sub)
    for g in gens:
        if g in sub:
            continue
        coset_rep = g
        base = list(sub)
        while coset_rep not in sub:
            sub.update(compose(coset_rep, s) for s in base)
            coset_rep = compose(coset_rep, g)
    return sub


def _cache_path(D: int) -> Path | None:
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    return Path(root) / f"D{abs(D)}.json"


@lru_cache(maxsize=None)
def _class_group(d: int, cap: int) -> ClassGroup:
    field = Field(d)
    D = field.D
    if abs(D) > cap:
        raise CapExceededError(f"|D| = {abs(D)} exceeds the cap {cap}")
    path = _cache_path(D)
    if path is not None and path.exists():
        data = json.loads(path.read_text())
        if data.get("D") == D:
            return ClassGroup(field, (Form(*f) for f in data["forms"]))
    group = ClassGroup(field, reduced_forms(D))
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(group.to_json(), sort_keys=True))
    return group


def enumerate_class_group(field: Field | int, cap: int = DEFAULT_CAP) -> ClassGroup:
    """Cl(k) for k = Q(sqrt(d)); results are memoised per process and, when
    STEINITZ_CACHE names a directory, on disk."""
    d = field.d if isinstance(field, Field) else field
    return _class_group(d, cap)


@dataclass(frozen=True)
class PrimeIdealRep:
    """Degree-1 prime ideal above p, as the form (p, b, (b^2 - D)/4p)."""

    p: int
    b: int

    def form(self, D: int) -> Form:
        return Form(self.p, self.b, (self.b * self.b - D) // (4 * self.p))


def prime_ideal(field: Field, p: int, conjugate: bool = False) -> PrimeIdealRep:
    """The prime above a split p with the least root b (or its conjugate)."""
    D = field.D
    if not is_prime(p):
        raise NonSplitPrimeError(f"{p} is not prime")
    if D % p == 0 or kronecker(D, p) != 1:
        raise NonSplitPrimeError(f"{p} does not split in {field}")
    if p == 2:
        b = min(x for x in range(4) if (x * x - D) % 8 == 0)
    else:
        r = sqrt_mod_prime(D, p)
        # each of +-r has exactly one lift to [0, 2p) with b = D mod 2
        lifts = [x if (x - D) % 2 == 0 else x + p for x in (r, p - r)]
        b = min(lifts)
    if conjugate:
        b = (-b) % (2 * p)
    return PrimeIdealRep(p, b)


def prime_to_class(field: Field, p: int, conjugate: bool = False) -> tuple[PrimeIdealRep, Form]:
    rep = prime_ideal(field, p, conjugate)
    return rep, reduce_form(rep.form(field.D))


class ClassSubgroup:
    """A subgroup of Cl(k), stored as its sorted element tuple plus generators."""

    def __init__(self, group: ClassGroup, elements: Iterable[Form], generators: Iterable[Form] = ()):
        self.group = group
        self.elements: tuple[Form, ...] = tuple(sorted(Form(*f) for f in elements))
        self.generators: tuple[Form, ...] = tuple(Form(*f) for f in generators)
        self._set = frozenset(self.elements)

    def __contains__(self, f) -> bool:
        return Form(*f) in self._set

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __le__(self, other: "ClassSubgroup") -> bool:
        return self._set <= other._set

    def __eq__(self, other) -> bool:
        if not isinstance(other, ClassSubgroup):
            return NotImplemented
        return self.group.D == other.group.D and self._set == other._set

    def __hash__(self):
        return hash((self.group.D, self._set))

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def index(self) -> int:
        return self.group.h // len(self.elements)

    @property
    def is_trivial(self) -> bool:
        return len(self.elements) == 1

    @property
    def is_full(self) -> bool:
        return len(self.elements) == self.group.h

    def __repr__(self):
        return f"ClassSubgroup(D={self.group.D}, elements={[tuple(f) for f in self.elements]})"


def subgroup_generated(group: ClassGroup, classes: Iterable) -> ClassSubgroup:
    classes = [group.element(f) for f in classes]
    sub = _closure({group.identity}, classes)
    gens = []
    acc = {group.identity}
    for f in classes:
        if f not in acc:
            gens.append(f)
            acc = _closure(acc, [f])
    return ClassSubgroup(group, sub, gens)


def full_subgroup(group: ClassGroup) -> ClassSubgroup:
    return ClassSubgroup(group, group.elements, group.generators)


def subgroup_power(S: ClassSubgroup, e: int) -> ClassSubgroup:
    """Image of the e-th power map on S."""
    if e < 0:
        raise PreconditionError("exponent must be nonnegative")
    return subgroup_generated(S.group, (form_power(g, e) for g in S.generators))
