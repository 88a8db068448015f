import itertools
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from lauricella import (DomainError, LauricellaParams, ParameterError, SeriesControl,
                        decomposed_shell_terms, fa_decomposed, fa_direct, fa_left_shifted,
                        fa_recursive, gauss_2f1, pochhammer)
from lauricella.multiindex import weight_matrices

from conftest import rel

EVALUATORS = (fa_direct, fa_recursive, fa_decomposed)


def test_params_validation():
    with pytest.raises(ParameterError):
        LauricellaParams(1.0, (0.5, 0.5), (1.0, -2.0))
    with pytest.raises(ParameterError):
        LauricellaParams(1.0, (0.5,), (1.0, 2.0))
    with pytest.raises(ParameterError):
        LauricellaParams(1.0, (), ())


@pytest.mark.parametrize("fn", EVALUATORS)
def test_zero_argument_gives_one(fn):
    p = LauricellaParams(1.3, (0.2, -0.7, 2.1), (1.5, 0.3, 2.2))
    assert fn(p, (0.0, 0.0, 0.0)).value == 1.0


def test_single_variable_is_gauss():
    for z in (0.4, -0.6):
        p = LauricellaParams(0.8, (1.3,), (2.1,))
        assert rel(fa_direct(p, (z,)).value, gauss_2f1(0.8, 1.3, 2.1, z).value) <= 1e-12


@pytest.mark.parametrize("fn", EVALUATORS)
def test_collapse_example(fn):
    p = LauricellaParams(1.0, (0.4, 0.9), (0.4, 0.9))
    assert rel(fn(p, (0.25, 0.25)).value, 2.0) <= 1e-12


@given(st.floats(0.1, 3), st.lists(st.floats(0.1, 3), min_size=2, max_size=3),
       st.lists(st.floats(-1, 1), min_size=3, max_size=3), st.floats(0.05, 0.9))
def test_collapse_law(a, b, raw, radius):
    n = len(b)
    raw = raw[:n]
    if sum(abs(v) for v in raw) == 0:
        return
    z = [v * radius / sum(abs(v) for v in raw) for v in raw]
    p = LauricellaParams(a, b, b)
    assert rel(fa_direct(p, z).value, (1 - sum(z)) ** (-a)) <= 1e-10


def test_recursive_examples():
    p2 = LauricellaParams(1.7, (0.6, 1.2), (2.3, 0.8))
    assert rel(fa_recursive(p2, (0.2, 0.1)).value, fa_direct(p2, (0.2, 0.1)).value) <= 1e-10
    p3 = LauricellaParams(0.9, (0.2, 0.3, 0.4), (1.1, 1.2, 1.3))
    z = (0.1, 0.15, 0.2)
    assert rel(fa_recursive(p3, z).value, fa_direct(p3, z).value) <= 1e-9
    assert rel(fa_recursive(p3, (0.3, 0.0, 0.0)).value,
               gauss_2f1(0.9, 0.2, 1.1, 0.3).value) <= 1e-12


def test_decomposed_example():
    p = LauricellaParams(1.1, (0.25, 0.35, 0.15), (0.9, 1.4, 2.0))
    z = (0.1, 0.1, 0.1)
    assert rel(fa_decomposed(p, z).value, fa_direct(p, z).value) <= 1e-9


def test_strict_domain():
    p = LauricellaParams(1.0, (1.0, 1.0), (1.0, 1.0))
    for fn in EVALUATORS:
        with pytest.raises(DomainError):
            fn(p, (0.6, 0.6))
    with pytest.raises(DomainError):
        fa_decomposed(p, (1.2, 0.1), strict=False)


def test_unchecked_mode_reports_honestly():
    p = LauricellaParams(1.0, (1.0, 1.0), (1.0, 1.0))
    r = fa_direct(p, (0.6, 0.6), SeriesControl(max_weight=60), strict=False)
    assert not r.converged


def test_oracle_floor(oracle_cases):
    for case in oracle_cases:
        if case["kind"] == "fa_direct":
            p = LauricellaParams(case["a"], case["b"], case["c"])
            assert rel(fa_direct(p, case["z"]).value, float(case["value"])) <= 1e-11


def test_error_estimate_covers_true_remainder(oracle_cases):
    tails = [c for c in oracle_cases if c["kind"] == "fa_tail"]
    assert len(tails) >= 20
    ctl = SeriesControl(rel_tol=1e-6)
    for case in tails:
        p = LauricellaParams(case["a"], case["b"], case["c"])
        r = fa_direct(p, case["z"], ctl)
        assert r.converged
        assert abs(r.value - float(case["value"])) <= r.est_error


@given(st.integers(0, 5))
def test_permutation_symmetry(seed):
    rng = np.random.default_rng(seed)
    n = 3
    p = LauricellaParams(rng.uniform(0.1, 2), rng.uniform(0.1, 2, n), rng.uniform(0.5, 3, n))
    z = rng.dirichlet(np.ones(n)) * 0.4
    for fn in (fa_direct, fa_decomposed):
        base = fn(p, z).value
        for order in itertools.permutations(range(n)):
            assert rel(fn(p.permuted(order), z[list(order)]).value, base) <= 1e-12


def test_zeroing_last_argument_drops_variable():
    p3 = LauricellaParams(1.4, (0.3, 1.1, 0.6), (1.2, 2.5, 0.7))
    p2 = LauricellaParams(1.4, (0.3, 1.1), (1.2, 2.5))
    # zero terms do not change a running float sum
    assert fa_direct(p3, (0.2, -0.3, 0.0)).value == fa_direct(p2, (0.2, -0.3)).value


# ---- two-variable expansion

def printed_f2_term(a, b, c, x, y, i):
    coef = (pochhammer(a, i) * pochhammer(b[0], i) * pochhammer(b[1], i)
            / (math.factorial(i) * pochhammer(c[0], i) * pochhammer(c[1], i)))
    return (coef * x ** i * y ** i * gauss_2f1(a + i, b[0] + i, c[0] + i, x).value
            * gauss_2f1(a + i, b[1] + i, c[1] + i, y).value)


def test_two_variable_weights_collapse():
    ma, mb = weight_matrices(2)
    E = np.arange(11).reshape(-1, 1)
    assert np.array_equal(E @ ma, np.hstack([E, E]))
    assert np.array_equal(E @ mb, np.hstack([E, E]))


def test_two_variable_term_level_match():
    a, b, c, z = 1.3, (0.7, 1.9), (2.2, 0.6), (0.3, -0.2)
    p = LauricellaParams(a, b, c)
    for w in range(11):
        E, A, B, terms = decomposed_shell_terms(p, z, w)
        assert E.tolist() == [[w]] and A.tolist() == [[w, w]] and B.tolist() == [[w, w]]
        expect = printed_f2_term(a, b, c, z[0], z[1], w)
        assert abs(terms[0] - expect) <= 1e-13 * abs(expect)


def test_two_variable_against_independent_appell():
    rng = np.random.default_rng(7)
    mp.mp.dps = 30
    for _ in range(10):
        a = rng.uniform(0.1, 2)
        b = rng.uniform(0.1, 2, 2)
        c = rng.uniform(0.5, 3, 2)
        z = rng.dirichlet(np.ones(2)) * rng.uniform(0.05, 0.5)
        ref = float(mp.appellf2(a, b[0], b[1], c[0], c[1], z[0], z[1]))
        assert rel(fa_decomposed(LauricellaParams(a, b, c), z).value, ref) <= 1e-10


# ---- transformed evaluation

def test_left_shifted_examples():
    p2 = LauricellaParams(2.5, (0.3, 0.4), (1.5, 1.7))
    assert fa_left_shifted(p2, (1.0, 1.0)).value == pytest.approx(1.0, abs=0)
    got = fa_left_shifted(p2, (0.8, 0.9)).value
    assert rel(got, fa_direct(p2, (-0.25, -1 / 9)).value) <= 1e-12
    p1 = LauricellaParams(1.2, (0.7,), (2.3,))
    assert rel(fa_left_shifted(p1, (0.5,)).value, gauss_2f1(1.2, 0.7, 2.3, -1.0).value) <= 1e-12


def test_left_shifted_matches_direct_on_overlap():
    rng = np.random.default_rng(3)
    for n in (2, 3):
        for _ in range(4):
            p = LauricellaParams(rng.uniform(0.1, 2), rng.uniform(0.1, 2, n),
                                 rng.uniform(0.5, 3, n))
            z = -rng.dirichlet(np.ones(n)) * rng.uniform(0.05, 0.6)
            t = 1.0 / (1.0 - z)
            assert rel(fa_left_shifted(p, t).value, fa_direct(p, z).value) <= 1e-10


def test_left_shifted_domain():
    p = LauricellaParams(1.0, (0.5, 0.5), (1.5, 1.5))
    for t in ((0.0, 0.5), (1.2, 0.5), (-0.3, 0.5)):
        with pytest.raises(DomainError):
            fa_left_shifted(p, t)


def euler_integral_f2(a, b, c, x, y):
    """Double Euler integral; valid for 0 < b_k < c_k and x, y <= 0."""
    mp.mp.dps = 20
    b1, b2 = b
    c1, c2 = c
    pref = (mp.gamma(c1) * mp.gamma(c2)
            / (mp.gamma(b1) * mp.gamma(b2) * mp.gamma(c1 - b1) * mp.gamma(c2 - b2)))
    f = lambda u, v: (u ** (b1 - 1) * v ** (b2 - 1) * (1 - u) ** (c1 - b1 - 1)
                      * (1 - v) ** (c2 - b2 - 1) * (1 - u * x - v * y) ** (-a))
    return float(pref * mp.quad(f, [0, 1], [0, 1]))


def test_left_shifted_beyond_direct_domain():
    # z = (-3, -1) is far outside the region of the defining series
    a, b, c = 1.5, (0.5, 0.8), (1.2, 2.5)
    got = fa_left_shifted(LauricellaParams(a, b, c), (0.25, 0.5))
    assert got.converged
    assert rel(got.value, euler_integral_f2(a, b, c, -3.0, -1.0)) <= 1e-8
