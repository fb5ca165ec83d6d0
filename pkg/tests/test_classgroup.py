import json
import random
from math import prod

import pytest
from hypothesis import given, settings, strategies as st

from oracles import (
    analytic_class_number,
    brute_reduced_forms,
    fundamental_discriminant,
    ideal_product_class,
    naive_reduce,
    represents,
    squarefree,
)
from steinitz.arith import kronecker, is_prime
from steinitz.classgroup import (
    CACHE_ENV,
    Field,
    Form,
    _class_group,
    compose,
    enumerate_class_group,
    form_inverse,
    form_power,
    prime_to_class,
    reduce_form,
    subgroup_generated,
    subgroup_power,
)
from steinitz.errors import CapExceededError, DiscriminantMismatchError, NonSplitPrimeError

SMALL_D = [d for d in range(-1, -126, -1) if squarefree(d)]  # |D| <= 500


def _split_primes(field, count):
    out, p = [], 2
    while len(out) < count:
        if is_prime(p) and kronecker(field.D, p) == 1:
            out.append(p)
        p += 1
    return out


@pytest.mark.parametrize("d,h,forms,inv", [
    (-23, 3, {(1, 1, 6), (2, 1, 3), (2, -1, 3)}, [3]),
    (-1, 1, {(1, 0, 1)}, []),
    (-47, 5, {(1, 1, 12), (2, 1, 6), (2, -1, 6), (3, 1, 4), (3, -1, 4)}, [5]),
])
def test_enumeration_examples(d, h, forms, inv):
    g = enumerate_class_group(Field(d))
    assert g.h == h and set(g.elements) == forms and list(g.invariants) == inv


def test_field_validation():
    for bad in (0, 1, 4, -4, 3, -12):
        with pytest.raises(ValueError):
            Field(bad)


@pytest.mark.parametrize("d", [d for d in range(-1, -700, -1) if squarefree(d)])
def test_forms_match_brute_force_and_analytic_formula(d):
    D = fundamental_discriminant(d)
    g = enumerate_class_group(Field(d))
    assert g.elements and {tuple(f) for f in g.elements} == brute_reduced_forms(D)
    assert g.h == analytic_class_number(D)
    assert prod(g.invariants) == g.h
    assert all(b % a == 0 for a, b in zip(g.invariants, g.invariants[1:]))


@pytest.mark.parametrize("d", SMALL_D)
def test_group_axioms_exhaustive(d):
    g = enumerate_class_group(Field(d))
    els, e = g.elements, g.identity
    for x in els:
        assert compose(e, x) == x
        assert compose(x, form_inverse(x)) == e
        for y in els:
            xy = compose(x, y)
            assert xy in g and xy == compose(y, x)
            for z in els:
                assert compose(xy, z) == compose(x, compose(y, z))


@pytest.mark.parametrize("d", SMALL_D + [-71, -199, -239, -401])
def test_compose_matches_ideal_multiplication(d):
    field = Field(d)
    g = enumerate_class_group(field)
    for x in g.elements:
        for y in g.elements:
            assert tuple(compose(x, y)) == ideal_product_class(x, y, field.D)


def test_invariants_match_element_order_counts():
    # the number of elements of order dividing k is prod gcd(k, n_i)
    from math import gcd
    for d in [-56, -84, -105, -195, -231, -420, -1155, -3315]:
        if not squarefree(d):
            continue
        g = enumerate_class_group(Field(d))
        for k in range(1, 13):
            count = sum(1 for x in g.elements if g.order(x) and k % g.order(x) == 0)
            assert count == prod(gcd(k, n) for n in g.invariants), (d, k)


def test_generators_generate():
    for d in [-23, -47, -65, -105, -1155, -5 * 7 * 11 * 13]:
        g = enumerate_class_group(Field(d))
        assert subgroup_generated(g, g.generators).order == g.h


def test_compose_examples():
    a, b, p = Form(2, 1, 3), Form(2, -1, 3), Form(1, 1, 6)
    assert compose(a, b) == p
    assert compose(a, a) == b
    assert compose(p, a) == a
    with pytest.raises(DiscriminantMismatchError):
        compose(a, Form(1, 1, 12))


def test_reduce_against_naive():
    rng = random.Random(5)
    for _ in range(2000):
        a = rng.randint(1, 500)
        b = rng.randint(-1000, 1000)
        # choose c so that the form is positive definite
        c = (b * b) // (4 * a) + rng.randint(1, 500)
        assert tuple(reduce_form(Form(a, b, c))) == naive_reduce((a, b, c))


def test_form_power_matches_repeated_compose():
    g = enumerate_class_group(Field(-1155))
    for x in g.elements:
        acc = g.identity
        for e in range(0, 10):
            assert form_power(x, e) == acc
            assert form_power(x, -e) == form_inverse(acc)
            acc = compose(acc, x)


@pytest.mark.parametrize("d,p,b,cls", [(-23, 13, 9, (2, -1, 3)), (-47, 7, 3, (2, 1, 6))])
def test_prime_to_class_examples(d, p, b, cls):
    rep, f = prime_to_class(Field(d), p)
    assert (rep.p, rep.b) == (p, b)
    assert tuple(f) == cls
    # p is represented by the inverse class
    assert represents(form_inverse(f), p) and represents(f, p)


def test_prime_59_principal():
    _, f = prime_to_class(Field(-23), 59)
    assert represents((1, 1, 6), 59)
    assert f == Form(1, 1, 6)


@pytest.mark.parametrize("d,p", [(-23, 5), (-23, 23), (-47, 13), (-1, 3)])
def test_prime_to_class_rejects_nonsplit(d, p):
    with pytest.raises(NonSplitPrimeError):
        prime_to_class(Field(d), p)


@pytest.mark.parametrize("d,h", [(-23, 3), (-47, 5), (-71, 7), (-163, 1), (-5, 2)])
def test_split_primes_generate(d, h):
    field = Field(d)
    g = enumerate_class_group(field)
    classes = [prime_to_class(field, p)[1] for p in _split_primes(field, 50)]
    assert g.h == h == subgroup_generated(g, classes).order


@pytest.mark.parametrize("d", [-23, -47, -71, -5, -65, -1155, -3])
def test_prime_times_conjugate_is_principal(d):
    field = Field(d)
    g = enumerate_class_group(field)
    for p in _split_primes(field, 40):
        a = prime_to_class(field, p)[1]
        b = prime_to_class(field, p, conjugate=True)[1]
        assert compose(a, b) == g.identity
        # the class represents p: a form of the class takes the value p
        assert represents(a, p)


def test_subgroup_examples():
    g23 = enumerate_class_group(Field(-23))
    g47 = enumerate_class_group(Field(-47))
    assert subgroup_generated(g23, [g23.identity]).order == 1
    assert subgroup_generated(g23, [Form(2, 1, 3)]).order == 3
    for x in g47.elements:
        if x != g47.identity:
            assert subgroup_generated(g47, [x]).is_full
    full23 = subgroup_generated(g23, g23.elements)
    full47 = subgroup_generated(g47, g47.elements)
    assert subgroup_power(full23, 3).is_trivial
    assert subgroup_power(full47, 3) == full47
    assert subgroup_power(full47, 1) == full47


@given(st.sampled_from([-1155, -3315, -65, -71, -5 * 7 * 11 * 13]), st.integers(0, 30), st.integers(0, 30),
       st.integers(0, 10**6))
@settings(max_examples=150, deadline=None)
def test_subgroup_power_properties(d, e1, e2, seed):
    g = enumerate_class_group(Field(d))
    rng = random.Random(seed)
    S = subgroup_generated(g, rng.sample(g.elements, min(2, g.h)))
    # image of the power map, element by element
    assert set(subgroup_power(S, e1)) == {form_power(x, e1) for x in S}
    assert subgroup_power(subgroup_power(S, e1), e2) == subgroup_power(S, e1 * e2)
    assert subgroup_power(S, e1) <= S


def test_cap_exceeded():
    with pytest.raises(CapExceededError):
        enumerate_class_group(Field(-10**6 - 3), cap=10**6)


def test_large_discriminant_fast():
    import time
    t = time.perf_counter()
    g = enumerate_class_group(Field(-999_983))
    assert g.h == len(g.elements) == prod(g.invariants) > 0
    assert time.perf_counter() - t < 5


def test_disk_cache(tmp_path, monkeypatch):
    monkeypatch.setenv(CACHE_ENV, str(tmp_path))
    _class_group.cache_clear()
    try:
        g = enumerate_class_group(Field(-71))
        path = tmp_path / "D71.json"
        data = json.loads(path.read_text())
        assert set(data) == {"d", "D", "h", "forms", "invariants"}
        assert data["h"] == 7 and data["D"] == -71 and len(data["forms"]) == 7
        _class_group.cache_clear()
        again = enumerate_class_group(Field(-71))
        assert again.elements == g.elements and again.invariants == g.invariants
    finally:
        _class_group.cache_clear()
