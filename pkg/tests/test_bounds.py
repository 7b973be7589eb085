import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from belreg import bounds, mc_sim
from belreg.bounds import (
    bound_unary,
    compare_sweep,
    expected_err_johnson,
    expected_tf,
    expected_tl,
    gaussian_models,
    sweep_cell,
)
from belreg.codebook import gen_johnson, gen_unary
from belreg.errors import InvalidConvention, InvalidModel


def uniform(N: int, M: int, eps: float) -> np.ndarray:
    return np.full((N - 1, M), eps)


# --- brute-force oracles ------------------------------------------------------

def johnson_word(N: int, n: int) -> list[int]:
    M = N // 2
    return [1 if M - n < k <= N - n else 0 for k in range(1, M + 1)]


def first_last(word):
    ones = [k for k, b in enumerate(word, start=1) if b]
    return (ones[0], ones[-1]) if ones else (None, None)


def terms(word):
    # Tf and Tl of a word; the all-zero word contributes 0 to both
    M = len(word)
    first, last = first_last(word)
    if first is None:
        return 0, 0
    return M + 1 - first, -last


def enumerate_johnson(e: np.ndarray, N: int):
    """Exact per-label E|dTf|, E|dTl| and E|Tf + Tl - (Tf0 + Tl0)| over all flip patterns."""
    M = N // 2
    out = []
    for n in range(1, N):
        word = johnson_word(N, n)
        tf0, tl0 = terms(word)
        p = e[n - 1]
        etf = etl = esum = 0.0
        for flips in itertools.product((0, 1), repeat=M):
            prob = float(np.prod([p[k] if f else 1 - p[k] for k, f in enumerate(flips)]))
            tf, tl = terms([b ^ f for b, f in zip(word, flips)])
            etf += prob * abs(tf - tf0)
            etl += prob * abs(tl - tl0)
            esum += prob * abs(tf + tl - tf0 - tl0)
        out.append((etf, etl, esum))
    return np.array(out)


# --- unary ------------------------------------------------------------------

def test_unary_three_level_example():
    e = np.array([[0.1], [0.2]])
    rep = bound_unary(e, 3)
    np.testing.assert_allclose(rep.per_label, [0.1, 0.2])
    assert rep.aggregate == pytest.approx(0.15)
    # one flip always moves a single-bit unary code by exactly one level
    C = gen_unary(2)
    for decoder in ("custom", "gen"):
        r = mc_sim.simulate(C, decoder, e, 100_000, seed=11)
        assert abs(r.mean_abs_error - 0.15) <= 3 * r.std_error


def test_unary_zero_scale():
    m, _ = gaussian_models(16, 0.0, 1.0)
    assert bound_unary(m, 16).aggregate == 0.0


@pytest.mark.parametrize("N, r, sigma", [(8, 0.3, 1.0), (16, 0.5, 2.0), (32, 0.1, 0.5)])
def test_unary_bound_above_mc(N, r, sigma):
    C = gen_unary(N - 1)
    m, _ = gaussian_models(N, r, sigma)
    v = mc_sim.validate_bound(C, m, 100_000, seed=5)
    assert v.passed and v.analytic == pytest.approx(bound_unary(m, N).aggregate)


def test_unary_convention_errors():
    with pytest.raises(InvalidConvention):
        bound_unary(uniform(16, 10, 0.1), 16)
    with pytest.raises(InvalidConvention):
        bound_unary(np.zeros((1, 0)), 2)
    with pytest.raises(InvalidModel):
        bound_unary(uniform(8, 6, 1.5), 8)


# --- Johnson closed-form terms ------------------------------------------------

def test_tf_tl_zero_when_error_free():
    e = uniform(16, 8, 0.0)
    for n in range(1, 9):
        assert expected_tf(e, n, 16) == 0.0
        assert expected_tl(e, n, 16) == 0.0
    assert expected_err_johnson(e, 16).aggregate == 0.0


def test_four_level_terms_at_small_error():
    eps = 0.05
    e = uniform(4, 2, eps)
    # first sum contributes eps (k = 1), second sum eps (k = 2)
    assert expected_tf(e, 1, 4) == pytest.approx(2 * eps)
    # eps from the last bit plus eps * (1 - eps) from the run behind it
    assert expected_tl(e, 1, 4) == pytest.approx(2 * eps - eps**2)
    exact = enumerate_johnson(e, 4)[0]
    assert exact[0] == pytest.approx(2 * eps - eps**2)
    assert exact[1] == pytest.approx(2 * eps - eps**2)


def mc_terms(N: int, n: int, eps: float, samples: int, seed: int):
    rng = np.random.default_rng(seed)
    M = N // 2
    word = np.array(johnson_word(N, n))
    flips = rng.random((samples, M)) < eps
    words = word ^ flips
    tf0, tl0 = terms(word)
    dtf = np.empty(samples)
    dtl = np.empty(samples)
    for i, w in enumerate(words):
        tf, tl = terms(w)
        dtf[i] = abs(tf - tf0)
        dtl[i] = abs(tl - tl0)
    se = lambda x: x.std(ddof=1) / np.sqrt(samples)
    return dtf.mean(), se(dtf), dtl.mean(), se(dtl)


def test_four_level_terms_against_mc():
    eps = 0.05
    e = uniform(4, 2, eps)
    tf_mc, tf_se, tl_mc, tl_se = mc_terms(4, 1, eps, 100_000, seed=2)
    assert abs(expected_tl(e, 1, 4) - tl_mc) <= 3 * tl_se
    # the Tf expression counts the all-ones-flipped path twice, overshooting by eps^2
    assert expected_tf(e, 1, 4) >= tf_mc - 3 * tf_se
    assert expected_tf(e, 1, 4) - tf_mc <= eps**2 + 3 * tf_se


@pytest.mark.parametrize("N", [4, 8, 16])
def test_tl_with_certain_flips(N):
    M = N // 2
    e = uniform(N, M, 1.0)
    for n in range(1, M):
        assert expected_tl(e, n, N) <= M - 1
    # every bit of the all-ones word flips: the last one leaves entirely
    assert expected_tl(e, M, N) == M


@pytest.mark.parametrize("N", [4, 6, 8, 10])
def test_terms_upper_bound_exact_enumeration(N):
    rng = np.random.default_rng(N)
    M = N // 2
    for _ in range(5):
        e = rng.uniform(0, 0.6, (N - 1, M))
        exact = enumerate_johnson(e, N)
        for n in range(1, M + 1):
            assert expected_tl(e, n, N) == pytest.approx(exact[n - 1, 1], abs=1e-12)
            assert expected_tf(e, n, N) >= exact[n - 1, 0] - 1e-12
        # the per-label sum bounds the error of Tf + Tl (triangle inequality)
        rep = expected_err_johnson(e, N)
        assert np.all(rep.per_label >= exact[:, 2] - 1e-12)


@settings(max_examples=100, deadline=None)
@given(
    half=st.integers(2, 8),
    seed=st.integers(0, 2**32 - 1),
    data=st.data(),
)
def test_tf_monotone_in_each_error(half, seed, data):
    N = 2 * half
    rng = np.random.default_rng(seed)
    e = rng.uniform(0, 1, (N - 1, half))
    n = data.draw(st.integers(1, half))
    j = data.draw(st.integers(0, half - 1))
    bumped = e.copy()
    bumped[n - 1, j] = min(1.0, e[n - 1, j] + rng.uniform(0, 0.3))
    assert expected_tf(bumped, n, N) >= expected_tf(e, n, N) - 1e-12


@settings(max_examples=50, deadline=None)
@given(half=st.integers(2, 8), seed=st.integers(0, 2**32 - 1))
def test_terms_continuous(half, seed):
    N = 2 * half
    rng = np.random.default_rng(seed)
    e = rng.uniform(0, 1, (N - 1, half))
    d = e + rng.uniform(-1e-9, 1e-9, e.shape)
    d = np.clip(d, 0, 1)
    for n in range(1, half + 1):
        assert abs(expected_tf(e, n, N) - expected_tf(d, n, N)) < 1e-6
        assert abs(expected_tl(e, n, N) - expected_tl(d, n, N)) < 1e-6


def test_johnson_mirror_symmetry():
    N = 16
    _, m = gaussian_models(N, 0.4, 1.3)
    rep = expected_err_johnson(m, N)
    np.testing.assert_allclose(rep.per_label, rep.per_label[::-1], rtol=1e-12)
    assert rep.aggregate == pytest.approx(rep.per_label.mean())
    assert np.all(rep.per_label >= 0)


def test_johnson_mirror_matches_mc_per_half():
    # an asymmetric table: the mirrored upper half must still track MC
    N = 8
    rng = np.random.default_rng(1)
    e = rng.uniform(0, 0.15, (N - 1, N // 2))
    C = gen_johnson(N - 1)
    v = mc_sim.validate_bound(C, e, 200_000, seed=3)
    assert v.passed
    assert abs(v.analytic - v.mc_mean) <= 3 * v.std_error + 0.1 * v.mc_mean


def test_johnson_reference_point_against_mc():
    N = 16
    C = gen_johnson(N - 1)
    _, m = gaussian_models(N, 0.5, 1.0)
    v = mc_sim.validate_bound(C, m, 100_000, seed=0)
    assert v.passed
    assert abs(v.analytic - v.mc_mean) <= 3 * v.std_error + 0.1 * v.mc_mean


def test_johnson_convention_errors():
    with pytest.raises(InvalidConvention):
        expected_err_johnson(uniform(15, 8, 0.1), 15)
    with pytest.raises(InvalidConvention):
        expected_tf(uniform(16, 8, 0.1), 9, 16)
    with pytest.raises(InvalidConvention):
        expected_tl(uniform(16, 8, 0.1), 0, 16)


def test_report_dict_round_trip():
    rep = bound_unary(uniform(6, 4, 0.1), 6)
    d = rep.to_dict()
    assert d["kind"] == "unary" and d["N"] == 6
    assert d["aggregate"] == pytest.approx(0.4)
    assert len(d["per_label"]) == 5


# --- sweep --------------------------------------------------------------------

def test_sweep_statuses():
    grid = compare_sweep(16, [0.0, 0.2, 1.0], [0.25, 2.0])
    status = {(r, s): st_ for _, _, r, s, _, st_ in grid.cells()}
    assert status[(0.0, 0.25)] == bounds.STATUS_DEGENERATE
    assert status[(0.0, 2.0)] == bounds.STATUS_DEGENERATE
    # peak density 1 / (0.25 sqrt(2 pi)) > 1
    assert status[(1.0, 0.25)] == bounds.STATUS_INVALID
    assert status[(0.2, 2.0)] == bounds.STATUS_OK
    for _, _, r, s, pct, st_ in grid.cells():
        assert (pct is None) == (st_ != bounds.STATUS_OK)


def test_invalid_cells_exactly_where_probability_exceeds_one():
    r_grid, s_grid = bounds.default_grid()
    grid = compare_sweep(16, r_grid, s_grid)
    for _, _, r, s, _, status in grid.cells():
        u, j = gaussian_models(16, r, s)
        too_big = u.peak()[0] > 1 or j.peak()[0] > 1
        assert (status == bounds.STATUS_INVALID) == too_big


def test_sweep_cell_matches_direct_computation():
    pct, status = sweep_cell(16, 0.3, 1.0)
    u, j = gaussian_models(16, 0.3, 1.0)
    ua = bound_unary(u, 16).aggregate
    ja = expected_err_johnson(j, 16).aggregate
    assert status == "ok"
    assert pct == pytest.approx(100 * (ua - ja) / ja)


def test_sweep_parallel_matches_serial():
    r, s = np.linspace(0.05, 1, 5), np.linspace(0.25, 4, 4)
    assert compare_sweep(16, r, s, workers=4).to_csv() == compare_sweep(16, r, s).to_csv()


def test_sweep_csv_header():
    text = compare_sweep(8, [0.1], [1.0]).to_csv()
    lines = text.splitlines()
    assert lines[0] == "r,sigma,pct_increase,status"
    assert lines[1].startswith("0.1,1.0,") and lines[1].endswith(",ok")


def test_sweep_rejects_empty_grid():
    with pytest.raises(ValueError):
        compare_sweep(16, [], [1.0])
