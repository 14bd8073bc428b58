"""One test per acceptance criterion; each prints a PASS/FAIL line."""

import time
from functools import lru_cache

import pytest

from wittext import cli
from wittext.extform import (build_Ma, check_conditions, classify_ext_simple, classify_w0_ext, coeff_A, coeff_B,
                             ext_table, extend_adatum, theta_membership)
from wittext.errors import UnsupportedHeight
from wittext.modules import (SYMBOLIC_L, ModuleSpec, build_k_lambda, build_module, build_S, build_trivial,
                             build_verma, check_module, dual_rep, dualize, restrict_to_W0, simple_modules)
from wittext.oracle import (build_extension, cocycle_from_adatum, ext_dim_full, ext_dim_reduced, is_split)
from wittext.witt import standard_character, weight_set


def _chi(p, h):
    return standard_character(p, h)


@lru_cache(maxsize=None)
def _rep(p, h, label):
    chi = _chi(p, h)
    spec = cli.parse_label(chi, label)
    return build_module(spec)


@lru_cache(maxsize=None)
def dense_w(p, h, m, n):
    """ext_dim_full over W, dense solver, modules named by label."""
    return ext_dim_full(_rep(p, h, m), _rep(p, h, n), "W").dim


@lru_cache(maxsize=None)
def graded_w(p, h, m, n):
    return ext_dim_full(_rep(p, h, m), _rep(p, h, n), "W", graded=True).dim


def _labels(p, h):
    return [s.label for s in simple_modules(_chi(p, h))]


def _verma_labels(p):
    return [f"V{i}" for i in range(p)]


# -- 1 ----------------------------------------------------------------------

@pytest.mark.parametrize("p,limit", [(5, 60), (7, 60), (11, 900)])
def test_criterion_1_height_minus_one_table(p, limit, criterion):
    chi = _chi(p, -1)
    start = time.perf_counter()
    simples = simple_modules(chi)
    bad = []
    oracle = {}
    for M in simples:
        for N in simples:
            got = dense_w(p, -1, M.label, N.label)
            oracle[M.label, N.label] = got
            if got != classify_ext_simple(M, N).dim:
                bad.append((M.label, N.label))
    elapsed = time.perf_counter() - start
    expected = {("K", "S"): 2, ("S", "K"): 2, ("K", "K"): 0, ("S", "S"): 0,
                (f"V{p - 2}", "K"): 1, ("K", "V1"): 1}
    for lam in range(1, p - 1):
        expected[f"V{lam}", "S"] = int(lam in (p - 3, p - 4, p - 5))
        expected["S", f"V{lam}"] = int(lam in (2, 3, 4))
        expected[f"V{lam}", "K"] = int(lam == p - 2)
        expected["K", f"V{lam}"] = int(lam == 1)
    wrong = [k for k, v in expected.items() if oracle[k] != v]
    ok = not bad and not wrong and elapsed < limit
    criterion(1, ok, f"p={p}: {len(oracle)} pairs, mismatches={bad}, named-value errors={wrong}, "
                     f"{elapsed:.1f}s (limit {limit}s)")
    assert ok


# -- 2 ----------------------------------------------------------------------

def test_criterion_2_heights_zero_and_one(criterion):
    start = time.perf_counter()
    bad = []
    checked = 0
    for p in (5, 7):
        for h in (0, 1):
            chi = _chi(p, h)
            ws = list(weight_set(chi))
            for i, lam in enumerate(ws):
                VW0 = restrict_to_W0(build_verma(chi, lam))
                for j, lamp in enumerate(ws):
                    closed = classify_w0_ext(lam, lamp, chi, witnesses=False).dim
                    full_w = dense_w(p, h, f"V{j}", f"V{i}")
                    full_w0 = ext_dim_full(build_k_lambda(chi, lamp), VW0, "W0").dim
                    red = ext_dim_reduced(lam, lamp, chi).dim
                    checked += 1
                    if not closed == full_w == full_w0 == red:
                        bad.append((p, h, i, j, closed, full_w, full_w0, red))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 300
    criterion(2, ok, f"{checked} Verma pairs at heights 0,1 for p=5,7 (height 1 over F_p^p), "
                     f"mismatches={bad}, {elapsed:.1f}s (limit 300s)")
    assert ok


# -- 3 ----------------------------------------------------------------------

def test_criterion_3_reduced_sweeps(criterion):
    start = time.perf_counter()
    bad = []
    dims = {}
    for p in (11, 13, 17, 19):
        for h in (-1, 0):
            chi = _chi(p, h)
            for lam in range(p):
                for lamp in range(p):
                    got = ext_dim_reduced(lam, lamp, chi).dim
                    dims[p, h, lam, lamp] = got
                    if got != classify_w0_ext(lam, lamp, chi, witnesses=False).dim:
                        bad.append((p, h, lam, lamp))
    elapsed = time.perf_counter() - start
    named = []
    for h in (-1, 0):
        named += [dims[17, h, 14, 8] == 1, dims[17, h, 8, 2] == 1, dims[19, h, 12, 6] == 1]
        for p in (11, 13):
            named += [dims[p, h, lam, (lam - 6) % p] == 0 for lam in range(p)]
        for lam in range(19):
            lamp = (18 - lam) % 19
            if (lam - lamp) % 19 in (2, 3, 4):
                named.append(dims[19, h, lam, lamp] == 1)
    ok = not bad and all(named) and elapsed < 120
    criterion(3, ok, f"{len(dims)} reduced solves, mismatches={bad}, "
                     f"named values {sum(named)}/{len(named)}, {elapsed:.1f}s (limit 120s)")
    assert ok


# -- 4 ----------------------------------------------------------------------

def test_criterion_4_self_extensions(criterion):
    bad = []
    for p in (5, 7, 11):
        for h in (-1, 0, 1):
            chi = _chi(p, h)
            graded = p == 11 and h == 1   # dense would exceed the size guard here
            for i, lam in enumerate(weight_set(chi)):
                law = int(h <= 0 and i in (0, p - 1))
                full = (graded_w if graded else dense_w)(p, h, f"V{i}", f"V{i}")
                red = ext_dim_reduced(lam, lam, chi).dim
                if not law == full == red == classify_w0_ext(lam, lam, chi, witnesses=False).dim:
                    bad.append((p, h, i, full, red))
    ok = not bad
    criterion(4, ok, f"Ext(V,V) law at p=5,7,11, heights -1,0,1; mismatches={bad}")
    assert ok


# -- 5 ----------------------------------------------------------------------

def _module_axioms():
    failures = []
    for p in (5, 7):
        for h in (-1, 0, 1):
            chi = _chi(p, h)
            reps = []
            for lam in weight_set(chi):
                reps += [build_verma(chi, lam), build_k_lambda(chi, lam), restrict_to_W0(build_verma(chi, lam))]
                for lamp in weight_set(chi):
                    reps += [build_Ma(a) for a in classify_w0_ext(lam, lamp, chi).witnesses]
            if h == -1:
                reps += [build_trivial(chi), build_S(chi), dual_rep(build_S(chi))]
                reps += [dual_rep(build_verma(chi, lam)) for lam in range(p)]
            failures += [(p, h) for r in reps if check_module(r)]
    return failures


def _coefficients():
    failures = []
    for p in (5, 7, 11, 13):
        chi = _chi(p, -1)
        ctx = chi.ctx
        for lam in range(p):
            for lamp in range(p):
                ea, eb = extend_adatum(1, 0, lam, lamp, chi), extend_adatum(0, 1, lam, lamp, chi)
                for j in range(3, p - 1):
                    if ea(j) != coeff_A(j, ctx(lam), ctx(lamp)) or eb(j) != coeff_B(j, ctx(lam), ctx(lamp)):
                        failures.append((p, lam, lamp, j))
    return failures


def _duality():
    failures = []
    for p in (5, 7, 11):
        chi = _chi(p, -1)
        simples = simple_modules(chi)
        if any(dualize(dualize(s)) != s for s in simples):
            failures.append((p, "involution"))
        duals = {s.label: dual_rep(build_module(s)) for s in simples}
        for M in simples:
            for N in simples:
                lhs = dense_w(p, -1, M.label, N.label)
                rhs = ext_dim_full(duals[N.label], duals[M.label], "W", graded=p == 11).dim
                if lhs != rhs:
                    failures.append((p, M.label, N.label))
    return failures


def _bounds():
    failures = []
    for p in (5, 7, 11, 13):
        for h in (-1, 0, 1):
            chi = _chi(p, h)
            ws = list(weight_set(chi))
            for lam in ws:
                for lamp in ws:
                    d = ext_dim_reduced(lam, lamp, chi).dim
                    if d > 2 or (d > 1 and not theta_membership(lam, lamp, chi)):
                        failures.append((p, h, lam, lamp, d))
    for p in (5, 7):
        for h in (-1, 0, 1):
            for m in _labels(p, h):
                for n in _labels(p, h):
                    if dense_w(p, h, m, n) > 2:
                        failures.append((p, h, m, n))
    return failures


def _witnesses():
    failures = []
    count = 0
    for p in (5, 7):
        for h in (-1, 0, 1):
            chi = _chi(p, h)
            ws = list(weight_set(chi))
            for lam in ws:
                V = restrict_to_W0(build_verma(chi, lam))
                for lamp in ws:
                    K = build_k_lambda(chi, lamp)
                    for a in classify_w0_ext(lam, lamp, chi).witnesses:
                        count += 1
                        if check_conditions(a) or is_split(K, V, cocycle_from_adatum(a)):
                            failures.append((p, h, lam, lamp))
    for h in (-1, 0, 1):
        chi = _chi(5, h)
        for M in simple_modules(chi):
            for N in simple_modules(chi):
                rM, rN = build_module(M), build_module(N)
                res = ext_dim_full(rM, rN, witnesses=True)
                for w in res.witnesses:
                    count += 1
                    if is_split(rM, rN, w) or check_module(build_extension(rM, rN, w)):
                        failures.append((5, h, M.label, N.label))
    return failures, count


def _graded_vs_dense():
    failures = []
    for p in (5, 7):
        for h in (-1, 0, 1):
            labels = _labels(p, h) if h == -1 else _verma_labels(p)
            for m in labels:
                for n in labels:
                    if graded_w(p, h, m, n) != dense_w(p, h, m, n):
                        failures.append((p, h, m, n))
            chi = _chi(p, h)
            for lam in weight_set(chi):
                V = restrict_to_W0(build_verma(chi, lam))
                for lamp in weight_set(chi):
                    K = build_k_lambda(chi, lamp)
                    if ext_dim_full(K, V, "W0").dim != ext_dim_full(K, V, "W0", graded=True).dim:
                        failures.append((p, h, "W0"))
    return failures


def test_criterion_5_structural_suite(criterion):
    axioms = _module_axioms()
    coeffs = _coefficients()
    duality = _duality()
    bounds = _bounds()
    wit, n_wit = _witnesses()
    graded = _graded_vs_dense()
    ok = not (axioms or coeffs or duality or bounds or wit or graded)
    criterion(5, ok, f"module axioms {len(axioms)} failures; coefficient identity {len(coeffs)}; "
                     f"duality {len(duality)}; dimension bounds {len(bounds)}; "
                     f"witnesses non-split {n_wit - len(wit)}/{n_wit}; graded vs dense {len(graded)}")
    assert ok


# -- 6 ----------------------------------------------------------------------

def test_criterion_6_top_height(criterion):
    results = []
    for p in (5, 7, 11, 13):
        chi = _chi(p, p - 1)
        L = ModuleSpec(SYMBOLIC_L, chi)
        results.append(classify_ext_simple(L, L).dim == 1)
        results.append(ext_table(chi).dims == [[1]])
        with pytest.raises(UnsupportedHeight):
            build_module(L)
    ok = all(results)
    criterion(6, ok, "Ext(L,L)=1 and L-only table at p=5,7,11,13 (closed form only, no matrix model)")
    assert ok


# -- 7 ----------------------------------------------------------------------

def test_criterion_7_cli_contract(criterion, capsys, monkeypatch):
    code_ok = cli.main(["verify", "--p", "5", "--heights", "-1,0,1", "--oracle", "both"])
    capsys.readouterr()

    real = cli.classify_ext_simple

    def corrupted(M, N, witnesses=False):
        res = real(M, N, witnesses=witnesses)
        if (M.label, N.label) == ("K", "S"):
            res.dim = 1 - min(res.dim, 1)
        return res

    monkeypatch.setattr(cli, "classify_ext_simple", corrupted)
    code_bad = cli.main(["verify", "--p", "5", "--heights", "-1,0,1", "--oracle", "both"])
    err = capsys.readouterr().err
    named = "(K, S)" in err
    ok = code_ok == 0 and code_bad == 1 and named
    criterion(7, ok, f"verify exits {code_ok} on the true table and {code_bad} on a corrupted one "
                     f"(pair named: {named})")
    assert ok
