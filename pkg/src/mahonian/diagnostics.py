"""Convergence scans, polynomial-fit checks, normality distance and Monte Carlo."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from . import kernels
from .core import Composition, CompositionLike, as_composition, multinomial
from .gaussian import standardized_moment
from .genpoly import q_multinomial
from .moments import (
    STATE_BUDGET,
    ResourceBudgetExceeded,
    all_sub_jets,
    asymptotic_correlation,
    central_moments,
    class_mean,
    centralize,
    check_budget,
    falling,
    mean,
    table_from_jets,
    to_factorial,
)

#: Samples per independent generator stream.  Streams are tied to chunks,
#: not workers, so results do not depend on the worker count.
CHUNK_SIZE = 4096

NORMAL_CDF_METHOD = "Phi(x) = erfc(-x/sqrt(2))/2 via C99 libm erfc (double precision, abs error < 1e-15)"


def _stream(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(chunk,))))


def _sorted_letters(a: Composition) -> np.ndarray:
    return np.repeat(np.arange(1, a.d + 1, dtype=np.int64), a.counts)


def _swap_draws(rng: np.random.Generator, n: int, size=None) -> np.ndarray:
    # entry t is uniform on 0..n-1-t: the partner of position n-1-t
    highs = np.arange(n, 1, -1, dtype=np.int64)
    shape = highs.shape if size is None else (size, highs.size)
    return np.ascontiguousarray(rng.integers(0, highs, size=shape, dtype=np.int64))


def sample_word(a: CompositionLike, seed: int) -> tuple:
    """Uniform random word of ``S_A``.

    Fisher-Yates shuffle of the sorted word, with swap partners drawn from
    numpy's PCG64 generator seeded by ``SeedSequence(seed)``.
    """
    a = as_composition(a)
    base = _sorted_letters(a)
    if base.size < 2:
        return tuple(int(x) for x in base)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    return tuple(int(x) for x in kernels.shuffle(base, _swap_draws(rng, base.size)))


def sample_stats(a: CompositionLike, samples: int, seed: int, workers: int = 1, backend=None):
    """(inv, maj) arrays for ``samples`` uniform words of ``S_A``.

    Deterministic in ``(a, samples, seed)`` for any worker count.
    """
    a = as_composition(a)
    impl = backend or kernels.impl
    base = _sorted_letters(a)
    n = base.size
    sizes = [min(CHUNK_SIZE, samples - lo) for lo in range(0, samples, CHUNK_SIZE)]

    def run(k):
        if n < 2:
            return np.zeros(sizes[k], np.int64), np.zeros(sizes[k], np.int64)
        swaps = _swap_draws(_stream(seed, k), n, sizes[k])
        return impl.sample_stats(base, swaps, a.d)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(k) for k in range(len(sizes))]
    if not parts:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


@dataclass
class EmpiricalEstimate:
    r: int
    s: int
    estimate: float
    stderr: float
    exact: Fraction | None = None


@dataclass
class EmpiricalReport:
    composition: tuple
    samples: int
    seed: int
    centering: str
    scaling: str
    sigma: float
    rows: list = field(default_factory=list)


def empirical_moments(
    a: CompositionLike,
    orders,
    samples: int,
    seed: int,
    workers: int = 1,
    center: str = "exact",
    scale: str = "exact",
    budget: int = STATE_BUDGET,
    backend=None,
) -> EmpiricalReport:
    """Monte Carlo standardized mixed moments with standard errors.

    Centres at the exact mean ``e_2(a)/2`` (``center="sample"`` uses the
    sample mean instead).  Scales by the exact sigma from the jet DP when
    ``a`` fits the budget, otherwise by the sample sigma; the report records
    which.  Sums are accumulated in exact integers.
    """
    if samples < 2:
        raise ValueError("need at least two samples")
    a = as_composition(a)
    inv, maj = sample_stats(a, samples, seed, workers, backend)
    e2x2 = 2 * mean(a)
    if center == "exact":
        mu2 = e2x2
    elif center == "sample":
        mu2 = Fraction(int(inv.sum()) + int(maj.sum()), samples)
    else:
        raise ValueError(f"unknown centering {center!r}")
    # doubled deviations keep a half-integer mean in the integers
    dx = [2 * x * mu2.denominator - mu2.numerator for x in inv.tolist()]
    dy = [2 * y * mu2.denominator - mu2.numerator for y in maj.tolist()]
    unit = 2 * mu2.denominator

    var_exact = None
    if scale == "exact":
        try:
            check_budget(a, budget)
            var_exact = central_moments(a, 2, budget)[2, 0]
        except ResourceBudgetExceeded:
            var_exact = None
    elif scale != "sample":
        raise ValueError(f"unknown scaling {scale!r}")
    if var_exact is not None:
        variance = var_exact
        scaling = "exact"
    else:
        variance = Fraction(sum(x * x for x in dx), samples * unit * unit)
        scaling = "sample"
    sigma = math.sqrt(variance) if variance else 0.0

    report = EmpiricalReport(a.counts, samples, seed, center, scaling, sigma)
    exact_table = None
    if var_exact is not None and center == "exact":
        exact_table = central_moments(a, max([2] + [r + s for r, s in orders]), budget)
    for r, s in orders:
        z = [x**r * y**s for x, y in zip(dx, dy)] if (r or s) else [1] * samples
        s1 = sum(z)
        s2 = sum(v * v for v in z)
        m = Fraction(s1, samples)
        var_z = (Fraction(s2, 1) - s1 * m) / (samples - 1)
        norm = unit ** (r + s)
        denom = sigma ** (r + s) if (r + s) else 1.0
        if denom == 0:
            raise ValueError(f"class {a.counts} has zero variance")
        est = float(m / norm) / denom
        se = math.sqrt(float(var_z / samples) / norm**2) / denom
        exact = None
        if exact_table is not None:
            exact = _standardize(exact_table[r, s], var_exact, r + s) if r + s else Fraction(1)
        report.rows.append(EmpiricalEstimate(r, s, est, se, exact))
    return report


def _standardize(value: Fraction, variance: Fraction, k: int):
    """``value / variance**(k/2)``: a Fraction for even ``k``, a float for odd."""
    if k % 2 == 0:
        return value / variance ** (k // 2)
    return float(value / variance ** (k // 2)) / math.sqrt(variance)


# --------------------------------------------------------------------------
# convergence toward the bivariate normal


@dataclass
class ScanRow:
    scale: int
    r: int
    s: int
    exact: object  # Fraction for even r+s, float for odd
    limit: Fraction
    abs_error: float


@dataclass
class ConvergenceReport:
    multiplicities: tuple
    scales: list
    rho: Fraction
    rows: list = field(default_factory=list)

    def series(self, r: int, s: int) -> list:
        return [row for row in self.rows if (row.r, row.s) == (r, s)]


def convergence_scan(m, orders, scales, budget: int = STATE_BUDGET, workers: int = 1) -> ConvergenceReport:
    """Exact standardized moments of (inv, maj) on ``S_{a m}`` against the limit.

    With ``workers > 1`` the scales are computed in separate processes.
    """
    m = tuple(int(x) for x in m)
    orders = [tuple(o) for o in orders]
    rho = asymptotic_correlation(m)
    order = max(2, max(r + s for r, s in orders))
    report = ConvergenceReport(m, list(scales), rho)
    comps = []
    for a in scales:
        comp = Composition(tuple(a * x for x in m))
        try:
            check_budget(comp, budget)
        except ResourceBudgetExceeded as exc:
            raise ResourceBudgetExceeded(f"scale {a}: {exc}") from None
        comps.append(comp)
    if workers > 1 and len(comps) > 1:
        with ProcessPoolExecutor(workers) as pool:
            tables = list(pool.map(central_moments, comps, [order] * len(comps), [budget] * len(comps)))
    else:
        tables = [central_moments(comp, order, budget) for comp in comps]
    for a, c in zip(scales, tables):
        var = c[2, 0]
        for r, s in orders:
            exact = _standardize(c[r, s], var, r + s) if r + s else Fraction(1)
            limit = standardized_moment(r, s, rho)
            report.rows.append(ScanRow(a, r, s, exact, limit, abs(float(exact) - float(limit))))
    return report


# --------------------------------------------------------------------------
# exact polynomial fits of the factorial moments


@dataclass
class FitReport:
    r: int
    s: int
    d: int
    ending: int
    grid: int
    degree_bound: int
    points: int
    monomials: int
    exact_fit: bool
    fitted_degree: int
    residuals: list
    is_polynomial: bool
    coefficients: dict = field(default_factory=dict)


def _monomials(d: int, degree: int) -> list:
    return [e for e in product(range(degree + 1), repeat=d) if sum(e) <= degree]


def _reduce(row: list) -> list:
    g = 0
    for v in row:
        g = math.gcd(g, v)
    if g > 1:
        row = [v // g for v in row]
    return row


def exact_polynomial_fit(points, values, monomials):
    """Fit ``values`` at ``points`` by the given monomials with exact arithmetic.

    Rows are taken greedily, in order, until the monomial matrix has full
    column rank (fraction-free elimination on integer rows); the square
    system is then back-substituted.  Returns ``(coefficients, fit_rows)``.
    """
    ncols = len(monomials)
    basis = []  # (lead column, integer row incl. rhs)
    chosen = []
    for idx, (pt, val) in enumerate(zip(points, values)):
        val = Fraction(val)
        row = [math.prod(x**e for x, e in zip(pt, mono)) * val.denominator for mono in monomials]
        row.append(val.numerator)
        for lead, b in basis:
            if row[lead]:
                f, g = b[lead], row[lead]
                row = [f * x - g * y for x, y in zip(row, b)]
        lead = next((c for c in range(ncols) if row[c]), None)
        if lead is None:
            continue
        basis.append((lead, _reduce(row)))
        chosen.append(idx)
        if len(basis) == ncols:
            break
    if len(basis) < ncols:
        raise ValueError(
            f"grid of {len(points)} points does not determine {ncols} monomials"
        )
    coef = [Fraction(0)] * ncols
    for lead, row in reversed(basis):
        acc = Fraction(row[-1])
        for c in range(ncols):
            if c != lead and row[c]:
                acc -= row[c] * coef[c]
        coef[lead] = acc / row[lead]
    return dict(zip(monomials, coef)), chosen


def _evaluate(coef: dict, pt) -> Fraction:
    return sum((c * math.prod(x**e for x, e in zip(pt, mono)) for mono, c in coef.items() if c), Fraction(0))


def lemma_interpolation_check(
    d: int, r: int, s: int, grid: int, ending: int = 1, budget: int = STATE_BUDGET
) -> FitReport:
    """Fit FM * (n-1)^(4(r+s) falling) by a polynomial of degree <= 11(r+s)/2.

    FM is the centred mixed factorial moment on words ending in ``ending``,
    evaluated on every composition in ``{1..grid}^d``.  Points not used by
    the fit are held out and their residuals must be exactly zero.  The same
    is tried for FM itself with the degree bound lowered by ``4(r+s)``; that
    succeeding is reported as ``is_polynomial``.
    """
    if not 1 <= ending <= d:
        raise ValueError(f"ending letter {ending} outside 1..{d}")
    k = r + s
    bound = (11 * k) // 2
    monos = _monomials(d, bound)
    pts = list(product(range(1, grid + 1), repeat=d))
    if len(pts) <= len(monos):
        raise ValueError(
            f"grid {grid}^{d} has {len(pts)} points, need more than {len(monos)} for degree {bound}"
        )
    top = Composition((grid,) * d)
    order = max(k, 1)
    fm_values = []
    states = all_sub_jets(top, order, budget)
    for pt in pts:
        state = states[pt]
        table = to_factorial(centralize(table_from_jets(state, ending), class_mean(pt, ending)))
        fm_values.append(table[r, s])
    scaled = [v * falling(sum(pt) - 1, 4 * k) for v, pt in zip(fm_values, pts)]

    coef, used = exact_polynomial_fit(pts, scaled, monos)
    used_set = set(used)
    residuals = [scaled[t] - _evaluate(coef, pts[t]) for t in range(len(pts)) if t not in used_set]
    exact_fit = all(x == 0 for x in residuals)
    nonzero = [sum(mono) for mono, c in coef.items() if c]
    fitted_degree = max(nonzero) if nonzero else -1

    is_poly = False
    low = bound - 4 * k
    if low >= 0:
        monos_low = _monomials(d, low)
        if len(pts) > len(monos_low):
            coef_low, used_low = exact_polynomial_fit(pts, fm_values, monos_low)
            is_poly = all(fm_values[t] == _evaluate(coef_low, pts[t]) for t in range(len(pts)))
    return FitReport(
        r, s, d, ending, grid, bound, len(pts), len(monos), exact_fit,
        fitted_degree, residuals, is_poly, {mono: c for mono, c in coef.items() if c},
    )


# --------------------------------------------------------------------------
# marginal normality


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def marginal_normality_stat(a: CompositionLike) -> float:
    """Largest gap between the standardized maj CDF and the normal CDF.

    The exact CDF comes from the q-multinomial coefficients and is compared
    at every support point.
    """
    a = as_composition(a)
    poly = q_multinomial(a).dense()
    total = multinomial(a)
    mu = mean(a)
    second = Fraction(sum(k * k * c for k, c in enumerate(poly)), total)
    var = second - mu * mu
    if var == 0:
        raise ValueError(f"class {a.counts} is degenerate (zero variance)")
    sigma = math.sqrt(var)
    muf = float(mu)
    worst = 0.0
    cum = 0
    for k, c in enumerate(poly):
        if not c:
            continue
        cum += c
        gap = abs(cum / total - normal_cdf((k - muf) / sigma))
        worst = max(worst, gap)
    return worst
