import numpy as np
import pytest
from hypothesis import given, strategies as st

from wittext.errors import NonzeroCharacter, NotClassified, UnsupportedHeight, WeightNotInLambda
from wittext.gfield import Matrix
from wittext.modules import (SIMPLE_S, SYMBOLIC_L, TRIVIAL, ModuleRep, ModuleSpec, build_k_lambda,
                             build_module, build_S, build_trivial, build_verma, check_module, dual_rep,
                             dualize, evaluate, p_power_element, quotient_by_coordinates, restrict_to_W0,
                             simple_modules, verma_spec)
from wittext.oracle import hom_dim
from wittext.witt import standard_character, weight_set


def verma_by_commutation(p, lam, shift_scalar):
    """Action of e_j (j >= 0) on v_i = e_{-1}^i v_0 from e_j v_0 = delta_j0 lam v_0
    and e_j e_{-1} = e_{-1} e_j - (j + 1) e_{j-1}."""
    def shift(vec):
        out = [0] * p
        for k, c in enumerate(vec):
            if k + 1 < p:
                out[k + 1] = (out[k + 1] + c) % p
            else:
                out[0] = (out[0] + c * shift_scalar) % p
        return out

    act = {}   # (j, i) -> coefficient vector
    basis = [[int(k == i) for k in range(p)] for i in range(p)]
    for j in range(0, p - 1):
        act[j, 0] = [lam % p if (j == 0 and k == 0) else 0 for k in range(p)]
    for i in range(1, p):
        for j in range(0, p - 1):
            lower = basis[i] if j == 0 else act[j - 1, i - 1]
            s = shift(act[j, i - 1])
            act[j, i] = [(a - (j + 1) * b) % p for a, b in zip(s, lower)]
    return act


@pytest.mark.parametrize("p", [5, 7, 11])
@pytest.mark.parametrize("h", [-1, 0])
def test_verma_matches_commutation_oracle(p, h):
    chi = standard_character(p, h)
    scalar = int(chi(-1) ** p)
    for lam in range(p):
        rep = build_verma(chi, lam)
        act = verma_by_commutation(p, lam, scalar)
        for j in range(0, p - 1):
            cols = np.array([act[j, i] for i in range(p)]).T
            assert np.array_equal(rep[j].data[:, :, 0], cols)


def test_verma_examples():
    chi = standard_character(5, -1)
    V = build_verma(chi, 1)
    assert V[1][0, 1] == 3
    assert all(not V[2][r, 1] for r in range(5))


@pytest.mark.parametrize("p", [5, 7])
@pytest.mark.parametrize("h", [-1, 0, 1])
def test_verma_is_module_with_weights(p, h):
    chi = standard_character(p, h)
    for lam in weight_set(chi):
        rep = build_verma(chi, lam)
        assert check_module(rep) == []
        assert rep.weights() == [lam - i for i in range(p)]
        assert len(set(rep.weights())) == p


def test_constructors_are_modules():
    chi = standard_character(7, -1)
    assert check_module(build_trivial(chi)) == []
    assert check_module(build_S(chi)) == []
    assert check_module(dual_rep(build_S(chi))) == []
    for lam in range(7):
        assert check_module(build_k_lambda(chi, lam)) == []
        assert check_module(dual_rep(build_verma(chi, lam))) == []
    chi1 = standard_character(5, 1)
    for lam in weight_set(chi1):
        assert check_module(build_k_lambda(chi1, lam)) == []


def test_trivial_needs_zero_character():
    with pytest.raises(NonzeroCharacter):
        build_trivial(standard_character(5, 0))
    with pytest.raises(NonzeroCharacter):
        build_S(standard_character(5, 0))


def test_verma_weight_validation():
    with pytest.raises(WeightNotInLambda):
        build_verma(standard_character(5, 1), 0)
    with pytest.raises(UnsupportedHeight):
        verma_spec(standard_character(5, 2), 0)


def test_S_examples():
    S = build_S(standard_character(5, -1))
    assert S.dim == 4
    assert S[1][0, 1] == 2
    assert S[3][0, 3] == 4


@pytest.mark.parametrize("p", [5, 7, 11])
def test_S_is_quotient_of_top_verma(p):
    chi = standard_character(p, -1)
    V = build_verma(chi, p - 1)
    for j in range(-1, p - 1):
        col = V[j].data[:, p - 1]
        assert not col.any()
    assert quotient_by_coordinates(V, [p - 1]) == build_S(chi)


def test_S_has_no_trivial_submodule():
    S = build_S(standard_character(7, -1))
    stacked = Matrix(S.ctx, np.concatenate([S[i].data for i in S.indices]))
    from wittext.linalg import nullspace
    assert nullspace(stacked).rows == 0


def test_check_module_reports_violation():
    chi = standard_character(5, -1)
    V = build_verma(chi, 2)
    broken = dict(V.actions)
    broken[1] = Matrix.zeros(V.ctx, 5, 5)
    bad = check_module(ModuleRep(V.ctx, chi, broken))
    pairs = {v.indices for v in bad if v.kind == "bracket"}
    assert (-1, 1) in pairs or (1, 2) in pairs


def test_height_zero_p_character():
    chi = standard_character(7, 0, chi_em1=3)
    V = build_verma(chi, 2)
    assert V[-1].power(7) == Matrix.identity(V.ctx, 7).scale(chi(-1) ** 7)


@given(st.lists(st.integers(0, 4), min_size=5, max_size=5), st.integers(0, 4), st.sampled_from([-1, 0, 1]))
def test_p_character_on_random_elements(coeffs, lam, h):
    chi = standard_character(5, h)
    ctx = chi.ctx
    lam = weight_set(chi).base_root + lam
    x = {i: ctx(c) for i, c in zip(range(-1, 4), coeffs)}
    xp = p_power_element(5, x, ctx)
    chi_x = sum((chi(i) * c for i, c in x.items()), ctx.zero)
    for rep in (build_verma(chi, lam),) + ((build_S(chi),) if h == -1 else ()):
        lhs = evaluate(rep, x).power(5)
        rhs = evaluate(rep, xp) + Matrix.identity(ctx, rep.dim).scale(chi_x ** 5)
        assert lhs == rhs


def test_dualize_specs():
    chi = standard_character(7, -1)
    assert dualize(verma_spec(chi, 2)) == verma_spec(chi, 4)
    assert dualize(ModuleSpec(TRIVIAL, chi)).kind == TRIVIAL
    for s in simple_modules(chi):
        assert dualize(dualize(s)) == s
    with pytest.raises(UnsupportedHeight):
        dualize(verma_spec(standard_character(7, 0), 1))


@pytest.mark.parametrize("p", [5, 7])
def test_dual_verma_isomorphic_to_reflected_weight(p):
    chi = standard_character(p, -1)
    for lam in range(p):
        assert hom_dim(dual_rep(build_verma(chi, lam)), build_verma(chi, p - 1 - lam)) >= 1
    S = build_S(chi)
    assert hom_dim(dual_rep(S), S) == 1


def test_simple_module_catalogue():
    assert [s.label for s in simple_modules(standard_character(5, -1))] == ["K", "S", "V1", "V2", "V3"]
    assert [s.label for s in simple_modules(standard_character(5, 0))] == ["V0", "V1", "V2", "V3"]
    h1 = simple_modules(standard_character(5, 1))
    assert len(h1) == 5 and all(not s.weight.in_prime_field() for s in h1)
    assert [s.kind for s in simple_modules(standard_character(5, 4))] == [SYMBOLIC_L]
    with pytest.raises(NotClassified):
        simple_modules(standard_character(7, 3))


@pytest.mark.parametrize("p", [5, 7])
@pytest.mark.parametrize("h", [-1, 0, 1])
def test_schur(p, h):
    for spec in simple_modules(standard_character(p, h)):
        rep = build_module(spec)
        assert hom_dim(rep, rep) == 1


def test_symbolic_L_has_no_matrices():
    with pytest.raises(UnsupportedHeight):
        build_module(ModuleSpec(SYMBOLIC_L, standard_character(5, 4)))
    with pytest.raises(UnsupportedHeight):
        ModuleSpec(SYMBOLIC_L, standard_character(5, 1))
    with pytest.raises(NonzeroCharacter):
        ModuleSpec(SIMPLE_S, standard_character(5, 0))


def test_restriction():
    chi = standard_character(5, 0)
    V = build_verma(chi, 3)
    R = restrict_to_W0(V)
    assert R.indices == [0, 1, 2, 3] and R.algebra == "W0"
    assert R.weights() == V.weights()
    assert check_module(R) == []
    T = restrict_to_W0(build_trivial(standard_character(5, -1)))
    assert T.dim == 1 and all(T[i].is_zero() for i in T.indices)


def test_k_lambda():
    chi = standard_character(7, -1)
    K = build_k_lambda(chi, 4)
    assert K.indices == list(range(6))
    assert K[0][0, 0] == 4 and all(K[i].is_zero() for i in range(1, 6))


@pytest.mark.parametrize("h", [-1, 1])
def test_rep_json_round_trip(h):
    chi = standard_character(5, h)
    rep = build_verma(chi, weight_set(chi).base_root + 2)
    again = ModuleRep.from_json(rep.to_json())
    assert again == rep
    assert check_module(again) == []
