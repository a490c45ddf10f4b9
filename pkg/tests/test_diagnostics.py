import math
from collections import Counter
from fractions import Fraction as F

import mpmath
import numpy as np
import pytest

from mahonian.core import Composition, inversion_number, major_index
from mahonian.diagnostics import (
    CHUNK_SIZE,
    convergence_scan,
    empirical_moments,
    exact_polynomial_fit,
    lemma_interpolation_check,
    marginal_normality_stat,
    normal_cdf,
    sample_stats,
    sample_word,
)
from mahonian.gaussian import standardized_moment
from mahonian.moments import ResourceBudgetExceeded, central_moments


def test_sample_word_examples():
    assert sample_word((1, 0), 11) == (1,)
    assert sample_word((0, 0), 11) == ()
    assert sample_word((2, 1), 5) == sample_word((2, 1), 5)


@pytest.mark.parametrize("a", [(3, 2, 4), (1, 1, 1, 1, 1), (10, 0, 3)])
def test_sample_word_multiplicities(a):
    for seed in range(20):
        w = sample_word(a, seed)
        assert Counter(w) == Counter({k + 1: c for k, c in enumerate(a) if c})


def test_sample_word_uniform_chi_square():
    draws = 10_000
    counts = Counter(sample_word((2, 1), seed) for seed in range(draws))
    assert set(counts) == {(1, 1, 2), (1, 2, 1), (2, 1, 1)}
    expected = draws / 3
    chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
    # 2 degrees of freedom, 0.1% upper quantile
    assert chi2 < 13.82


def test_sample_stats_deterministic_across_workers_and_backends(backend):
    a = (7, 5, 9)
    inv1, maj1 = sample_stats(a, 3 * CHUNK_SIZE + 17, seed=99, workers=1)
    inv4, maj4 = sample_stats(a, 3 * CHUNK_SIZE + 17, seed=99, workers=4, backend=backend)
    assert np.array_equal(inv1, inv4) and np.array_equal(maj1, maj4)
    inv5, _ = sample_stats(a, 3 * CHUNK_SIZE + 17, seed=100)
    assert not np.array_equal(inv1, inv5)


def test_sample_stats_values_are_word_statistics():
    # inv/maj from the batch kernel match a direct recomputation
    from mahonian.diagnostics import _stream, _swap_draws, _sorted_letters
    from mahonian import kernels

    a = Composition((4, 3, 2))
    inv, maj = sample_stats(a, 50, seed=3)
    base = _sorted_letters(a)
    swaps = _swap_draws(_stream(3, 0), base.size, 50)
    for row in range(50):
        w = tuple(int(x) for x in kernels.shuffle(base, swaps[row]))
        assert inversion_number(w) == inv[row]
        assert major_index(w) == maj[row]


def test_empirical_examples():
    rep = empirical_moments((2, 2), [(1, 1), (0, 0)], 100_000, seed=1)
    cov, one = rep.rows
    assert rep.scaling == "exact" and rep.centering == "exact"
    assert cov.exact == F(3, 5)
    assert abs(cov.estimate - 0.6) < 3 * cov.stderr
    assert one.estimate == 1.0 and one.stderr == 0.0

    rep = empirical_moments((1, 1), [(2, 0)], 1000, seed=2)
    # (inv - 1/2)^2 is always 1/4 and sigma^2 = 1/4
    assert rep.rows[0].estimate == 1.0 and rep.rows[0].stderr == 0.0
    assert rep.sigma ** 2 == 0.25


def test_empirical_sample_modes():
    rep = empirical_moments((3, 4), [(2, 0)], 5000, seed=5, center="sample", scale="sample")
    assert rep.centering == "sample" and rep.scaling == "sample"
    assert rep.rows[0].exact is None
    assert abs(rep.rows[0].estimate - 1) < 1e-9
    with pytest.raises(ValueError):
        empirical_moments((3, 4), [(1, 1)], 1, seed=0)


def test_empirical_falls_back_to_sample_sigma_over_budget():
    rep = empirical_moments((20, 20), [(1, 1)], 2000, seed=4, budget=10)
    assert rep.scaling == "sample"


@pytest.mark.parametrize("a", [(3, 5), (2, 3, 4), (6, 2, 1, 3)])
def test_empirical_within_four_standard_errors(a):
    orders = [(1, 1), (2, 0), (2, 1), (2, 2), (1, 3)]
    rep = empirical_moments(a, orders, 100_000, seed=17)
    for row in rep.rows:
        assert abs(row.estimate - float(row.exact)) <= 4 * row.stderr


def test_convergence_examples():
    rep = convergence_scan((1, 1), [(1, 1), (2, 0)], [1, 2])
    cov = rep.series(1, 1)
    assert [row.exact for row in cov] == [F(1), F(3, 5)]
    assert all(row.limit == 0 for row in cov)
    assert cov[0].abs_error > cov[1].abs_error
    assert all(row.limit == 1 for row in rep.series(2, 0))
    rep = convergence_scan((1, 2), [(1, 1), (2, 1)], [1])
    assert rep.series(1, 1)[0].limit == F(1, 3)
    assert rep.series(2, 1)[0].limit == 0


def test_convergence_limits_come_from_gaussian_module():
    rep = convergence_scan((1, 2, 1), [(1, 1), (2, 2), (3, 1)], [1, 2])
    for row in rep.rows:
        assert row.limit == standardized_moment(row.r, row.s, rep.rho)


def test_convergence_parallel_matches_serial():
    serial = convergence_scan((1, 2), [(1, 1), (2, 1)], [2, 3, 4])
    parallel = convergence_scan((1, 2), [(1, 1), (2, 1)], [2, 3, 4], workers=2)
    assert serial.rows == parallel.rows


def test_convergence_budget_names_scale():
    with pytest.raises(ResourceBudgetExceeded, match="scale 50"):
        convergence_scan((1, 1), [(1, 1)], [2, 50], budget=100)


def test_lemma_examples():
    rep = lemma_interpolation_check(2, 0, 0, 4)
    assert rep.exact_fit and rep.fitted_degree == 0 and rep.coefficients == {(0, 0): 1}
    rep = lemma_interpolation_check(2, 1, 0, 6)
    assert rep.exact_fit and rep.fitted_degree == -1 and not rep.coefficients


def test_lemma_underdetermined_grid():
    with pytest.raises(ValueError, match="points"):
        lemma_interpolation_check(2, 1, 1, 5)
    # 25 points exceed the 21 monomials of degree 5, but a 5x5 grid cannot see x^5
    with pytest.raises(ValueError, match="determine"):
        lemma_interpolation_check(2, 1, 0, 5)


def test_exact_fit_detects_wrong_degree():
    pts = [(x, y) for x in range(1, 6) for y in range(1, 6)]
    vals = [x**3 * y for x, y in pts]
    monos = [(i, j) for i in range(3) for j in range(3) if i + j <= 2]
    coef, used = exact_polynomial_fit(pts, vals, monos)
    held = [t for t in range(len(pts)) if t not in used]
    assert any(vals[t] != sum(c * pts[t][0] ** i * pts[t][1] ** j for (i, j), c in coef.items()) for t in held)
    monos4 = [(i, j) for i in range(5) for j in range(5) if i + j <= 4]
    coef, _ = exact_polynomial_fit(pts, vals, monos4)
    assert {k: v for k, v in coef.items() if v} == {(3, 1): 1}


def test_normal_cdf_accuracy():
    for x in np.linspace(-8, 8, 161):
        assert abs(normal_cdf(float(x)) - float(mpmath.ncdf(x))) < 1e-10


def test_marginal_normality():
    assert marginal_normality_stat((1, 1)) == pytest.approx(0.5 - normal_cdf(-1.0), abs=1e-15)
    assert marginal_normality_stat((50, 50)) < marginal_normality_stat((5, 5))
    with pytest.raises(ValueError):
        marginal_normality_stat((6, 0))
