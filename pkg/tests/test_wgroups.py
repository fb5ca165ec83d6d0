import pytest

from oracles import genus_w_subgroup, prime_discriminants, represents
from steinitz.arith import PrimeStream
from steinitz.classgroup import Field, enumerate_class_group, prime_to_class, subgroup_power
from steinitz.cyclo import (
    ResidueSubgroup,
    cyclotomic_descriptor,
    degree,
    descriptor,
    e_descriptor,
    galois_group,
    subgroup_of,
)
from steinitz.errors import PreconditionError, SamplingExhaustedError
from steinitz.lgroups import GroupSpec, power
from steinitz.verify import wexp_grid
from steinitz.wgroups import (
    Certificate,
    anti_containment_check,
    troppo_check,
    w_group,
    w_group_of_descriptor,
    wexp_check,
)

GRID = [-23, -47, -71, -5, -163]
MODULI = [1, 3, 5, 9, 27]
# fields with composite discriminant, where W(k, M) can be proper
RICH = [-5, -65, -87, -105, -195, -110, -21, -30, -15, -1155]


def test_prime_discriminants_oracle_sane():
    assert prime_discriminants(-20) == [5, -4]
    assert prime_discriminants(-1155) == [-3, 5, -7, -11]
    assert prime_discriminants(-120) == [-3, 5, 8]


def test_examples():
    w = w_group(Field(-47), 3)
    assert w.result.is_full and w.result.order == 5 and w.certificate is Certificate.INDEX_FORCED
    w = w_group(Field(-23), 3)
    assert w.result.is_full and w.certificate is Certificate.INDEX_FORCED
    _, cls = prime_to_class(Field(-23), 13)
    assert cls in w.result and cls != w.result.group.identity
    for d in GRID + RICH:
        assert w_group(Field(d), 1).result.is_full


@pytest.mark.parametrize("d", GRID + RICH)
@pytest.mark.parametrize("M", [1, 3, 4, 5, 7, 8, 9, 12, 15, 20, 24, 27, 40, 60])
def test_w_group_matches_genus_theory(d, M):
    field = Field(d)
    w = w_group(field, M)
    oracle = genus_w_subgroup(enumerate_class_group(field).elements, field.D, M)
    assert {tuple(x) for x in w.result} == oracle
    # the index divides the degree [k(zeta_M):k]
    assert degree(field, M) % w.result.index == 0


def test_proper_w_exists():
    # p = 1 mod 20 forces p = x^2 + 5y^2, so W(Q(sqrt -5), 5) is trivial
    w = w_group(Field(-5), 5)
    assert w.result.is_trivial and w.certificate is Certificate.STABILIZED
    for p in PrimeStream(20, frozenset({1}), -20, 2, 5000):
        assert represents((1, 0, 5), p)
    assert w_group(Field(-65), 5).result.index == 2


@pytest.mark.parametrize("d", [-23, -47, -65, -105])
@pytest.mark.parametrize("M", [3, 5, 9, 15])
def test_sampled_primes_land_in_w(d, M):
    field = Field(d)
    w = w_group(field, M).result
    for p in PrimeStream(M, frozenset({1}), field.D, 10**5, 10**5 + 20000):
        for conj in (False, True):
            assert prime_to_class(field, p, conj)[1] in w


@pytest.mark.parametrize("d", GRID)
def test_anti_containment(d):
    field = Field(d)
    for m1 in MODULI:
        for m2 in MODULI:
            if m2 % m1 == 0:
                assert anti_containment_check(field, m1, m2)


def test_anti_containment_precondition():
    with pytest.raises(PreconditionError):
        anti_containment_check(Field(-47), 3, 5)


@pytest.mark.parametrize("d", GRID + [-65, -87, -105])
def test_wexp_grid(d):
    field = Field(d)
    for m, n in wexp_grid():
        assert wexp_check(field, m, n), (m, n)


def test_wexp_examples():
    assert wexp_check(Field(-47), 3, 3)
    assert wexp_check(Field(-23), 3, 3)
    assert subgroup_power(w_group(Field(-23), 3).result, 3).is_trivial
    with pytest.raises(PreconditionError):
        wexp_check(Field(-47), 3, 2)


@pytest.mark.parametrize("d", GRID + [-65, -87])
@pytest.mark.parametrize("l,n,c", [(3, 2, 1), (3, 3, 1), (3, 3, 2), (5, 2, 1), (5, 3, 1), (5, 3, 2)])
def test_lifted_w_containment(d, l, n, c):
    assert troppo_check(Field(d), l, n, c)


def test_lifted_w_precondition():
    with pytest.raises(PreconditionError):
        troppo_check(Field(-47), 3, 2, 2)


@pytest.mark.parametrize("d", [-47, -23, -65, -87])
def test_descriptor_consistency(d):
    field = Field(d)
    for j in (3, 5, 9):
        assert w_group_of_descriptor(field, cyclotomic_descriptor(field, j)).result == w_group(field, j).result
    # E = k: fixing group is the whole Galois group
    for M in (9, 15, 27):
        gal = galois_group(field, M)
        assert w_group_of_descriptor(field, descriptor(field, gal)).result.is_full
    # a fixed field with a declared level j behaves like k(zeta_j)
    for M in (9, 27, 45):
        gal = galois_group(field, M)
        for j in [j for j in range(1, M + 1) if M % j == 0]:
            H = ResidueSubgroup(M, frozenset(g for g in gal.elements if g % j == 1 % j))
            desc = descriptor(field, H)
            assert w_group_of_descriptor(field, desc).result == w_group(field, desc.cyclotomic_level).result


def test_tau_descriptor_matches_w3():
    field = Field(-47)
    spec = GroupSpec.semidirect(3, 2)
    desc = e_descriptor(field, spec, spec.tau())
    assert w_group_of_descriptor(field, desc).result == w_group(field, 3).result


def test_non_level_descriptor():
    # H = <-1> in (Z/5)* fixes the real subfield of Q(zeta_5); for d = -65 it
    # is not of the form k(zeta_j), and W is computed from H directly
    field = Field(-65)
    H = subgroup_of(field, 5, [4])
    desc = descriptor(field, H)
    assert desc.cyclotomic_level is None
    w = w_group_of_descriptor(field, desc)
    oracle = w_group(field, 5).result
    assert oracle <= w.result


def test_descriptor_rejects_foreign_subgroup():
    field = Field(-3)
    H = ResidueSubgroup(3, frozenset({1, 2}))
    with pytest.raises(PreconditionError):
        w_group_of_descriptor(field, descriptor(field, H))


def test_sampling_exhausted():
    with pytest.raises(SamplingExhaustedError):
        w_group(Field(-65), 5, first_bound=50, min_primes=10**6, hard_cap=200)


def test_as_dict_keys():
    out = w_group(Field(-65), 5).as_dict()
    assert out["index"] == 2 and out["certificate"] == "STABILIZED"
    assert set(out) >= {"modulus", "fixing", "cyclotomic_level", "elements", "order", "bound", "sampled_primes"}


def test_power_of_tau_descriptor_level():
    field = Field(-23)
    spec = GroupSpec.semidirect(3, 3)
    # sigma acts trivially on tau^3 and tau^9, so E is all of k(zeta_o(t))
    assert e_descriptor(field, spec, power(spec, spec.tau(), 3)).cyclotomic_level == 9
    assert e_descriptor(field, spec, power(spec, spec.tau(), 9)).cyclotomic_level == 3
