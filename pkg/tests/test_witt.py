import numpy as np
import pytest
from hypothesis import given, strategies as st

from wittext.errors import IndexOutOfRange, NotInPrimeField, UnsupportedHeight, WrongFieldContext
from wittext.gfield import make_artin_schreier_field, make_prime_field
from wittext.witt import (PCharacter, WittAlgebra, bracket, canonical_rep, height, standard_character,
                          weight_set)


def test_bracket_examples():
    assert bracket(7, 1, 2) == (1, 3)
    assert bracket(7, 3, 3) is None
    assert bracket(7, -1, 0) == (1, -1)
    assert bracket(5, 2, 3) is None    # e_5 is outside the basis


def test_bracket_index_check():
    with pytest.raises(IndexOutOfRange):
        bracket(5, 4, 0)


def _ad(algebra, i):
    return algebra.ad_matrix(i)


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19])
def test_jacobi_exhaustive(p):
    W = WittAlgebra(p)
    ads = {i: _ad(W, i) for i in W.indices}
    # ad is a Lie homomorphism iff the Jacobi identity holds on the basis
    for i in W.indices:
        for j in W.indices:
            comm = (ads[i] @ ads[j] - ads[j] @ ads[i]) % p
            br = W.bracket(i, j)
            expected = np.zeros_like(comm) if br is None else br[0] * ads[br[1]] % p
            assert np.array_equal(comm, expected)


@pytest.mark.parametrize("p", [5, 7, 11])
def test_restricted_structure(p):
    W = WittAlgebra(p)
    ad0 = W.ad_matrix(0)
    assert np.array_equal(np.linalg.matrix_power(ad0, p) % p, ad0 % p)
    for i in W.indices:
        if i:
            assert not (np.linalg.matrix_power(W.ad_matrix(i), p) % p).any()
            assert W.p_map(i) is None
    assert W.p_map(0) == 0


def test_height_examples():
    F = make_prime_field(7)
    assert height(PCharacter.zero(F)) == -1
    assert height(PCharacter(F, {-1: 1})) == 0
    assert height(PCharacter(F, {0: 2})) == 1
    assert height(PCharacter(F, {-1: 3, 4: 1})) == 5


def test_character_values_must_be_prime_field():
    ctx = make_artin_schreier_field(5, 1)
    with pytest.raises(NotInPrimeField):
        PCharacter(ctx, {0: ctx.gen})


def test_character_json_round_trip():
    chi = standard_character(7, 1, chi_em1=2)
    obj = chi.to_json()
    assert obj["p"] == 7
    assert set(obj["values"]) == {"-1", "0"}
    assert PCharacter.from_json(obj) == chi


@pytest.mark.parametrize("p", [5, 7, 11])
@pytest.mark.parametrize("h", [-1, 0, 1, 2, 4])
def test_standard_character_height(p, h):
    assert standard_character(p, h).height == h


def test_weight_set_prime_field():
    ws = weight_set(PCharacter.zero(make_prime_field(5)))
    assert [int(x) for x in ws] == [0, 1, 2, 3, 4]
    F7 = make_prime_field(7)
    assert [int(x) for x in weight_set(PCharacter(F7, {-1: 3}))] == list(range(7))


@pytest.mark.parametrize("p,c", [(5, 1), (5, 2), (7, 1), (7, 3), (11, 1), (13, 4)])
def test_weight_set_artin_schreier(p, c):
    chi = standard_character(p, 1, chi_e0=c)
    ws = weight_set(chi)
    target = chi(0) ** p
    elems = list(ws)
    assert len(set(elems)) == p
    for lam in elems:
        assert lam ** p - lam == target
        assert not lam.in_prime_field()
    diffs = sorted(canonical_rep(lam - elems[0]) for lam in elems)
    assert diffs == list(range(p))
    for a in elems:
        for b in elems:
            assert not (a + b).in_prime_field()


def test_weight_set_wrong_context():
    chi = PCharacter(make_prime_field(5), {0: 1})
    with pytest.raises(WrongFieldContext):
        weight_set(chi)


def test_weight_set_unsupported_height():
    with pytest.raises(UnsupportedHeight):
        weight_set(standard_character(7, 3))


def test_canonical_rep_examples():
    F = make_prime_field(5)
    assert canonical_rep(F.zero) == 0
    assert canonical_rep(F(-3)) == 2
    ctx = make_artin_schreier_field(7, 1)
    assert canonical_rep((ctx.gen + 5) - (ctx.gen + 1)) == 4
    with pytest.raises(NotInPrimeField):
        canonical_rep(ctx.gen)


@given(st.sampled_from([5, 7, 11, 13]), st.integers(-1, 12), st.integers(-1, 12))
def test_bracket_antisymmetric(p, i, j):
    i, j = min(i, p - 2), min(j, p - 2)
    a, b = bracket(p, i, j), bracket(p, j, i)
    if a is None:
        assert b is None
    else:
        assert b == ((-a[0]) % p, a[1])
