"""Exact mixed moments of (inv, maj).

Power sums ``T(a, i, r, s) = sum over words ending in i of inv^r maj^s`` are
carried through the last-letter-removal recursion as "jets" (one vector of
power sums per ending letter).  Because the recursion only adds integers to
inv and maj, shifting a jet is a binomial transform with integer
coefficients and all arithmetic stays in Python ints.  Centering happens at
the very end with exact fractions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, prod

from .core import Composition, CompositionLike, as_composition, multinomial
from .genpoly import JointPolynomial, removal_dp

DEFAULT_ORDER = 4
MAX_ORDER = 8
#: Ceiling on prod(a_j + 1), the number of sub-compositions the jet DP visits.
STATE_BUDGET = 2_000_000


class ResourceBudgetExceeded(RuntimeError):
    """The requested computation would visit too many DP states."""


def state_count(a: CompositionLike) -> int:
    return prod(x + 1 for x in a)


def check_budget(a: CompositionLike, budget: int = STATE_BUDGET) -> None:
    count = state_count(a)
    if count > budget:
        raise ResourceBudgetExceeded(
            f"composition {tuple(a)} needs {count} DP states, budget is {budget}"
        )


def index_pairs(order: int) -> list:
    """All ``(r, s)`` with ``r + s <= order``, in jet storage order."""
    return [(r, s) for r in range(order + 1) for s in range(order + 1 - r)]


@dataclass
class MomentTable:
    order: int
    entries: dict
    kind: str = "raw"
    scope: str = "class"

    def __getitem__(self, rs):
        return self.entries[rs]

    def complete(self) -> bool:
        return all(rs in self.entries for rs in index_pairs(self.order))

    def to_records(self) -> list:
        return [
            {"r": r, "s": s, "kind": self.kind, "value": _frac_str(self.entries[r, s])}
            for r, s in index_pairs(self.order)
            if (r, s) in self.entries
        ]


def _frac_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# --------------------------------------------------------------------------
# jet transport


class _Shifter:
    """Binomial shift of flat jets in one coordinate."""

    def __init__(self, order: int, axis: int):
        pairs = index_pairs(order)
        pos = {rs: k for k, rs in enumerate(pairs)}
        self.plan = []
        for r, s in pairs:
            m = (r, s)[axis]
            terms = []
            for m2 in range(m + 1):
                src = (m2, s) if axis == 0 else (r, m2)
                terms.append((pos[src], comb(m, m2), m - m2))
            self.plan.append(terms)
        self.order = order

    def __call__(self, jet: list, c: int) -> list:
        if c == 0:
            return jet
        cp = [1]
        for _ in range(self.order):
            cp.append(cp[-1] * c)
        return [
            sum(b * cp[k] * jet[src] for src, b, k in terms) if len(terms) > 1
            else jet[terms[0][0]]
            for terms in self.plan
        ]


def _add(x: list, y: list) -> list:
    return [u + v for u, v in zip(x, y)]


def _jet_algebra(order: int):
    size = len(index_pairs(order))
    inv_shift = _Shifter(order, 0)
    maj_shift = _Shifter(order, 1)
    unit = [1] + [0] * (size - 1)

    def base(i):
        return list(unit)

    def step(b, i, below, c, e):
        low = None
        high = None
        for j, jet in below.items():
            if j <= i:
                low = jet if low is None else _add(low, jet)
            else:
                high = jet if high is None else _add(high, jet)
        if high is not None:
            high = maj_shift(high, e)
            low = high if low is None else _add(low, high)
        return inv_shift(low, c)

    return base, step


@dataclass
class JetState:
    """Power sums ``T(a, i, r, s)`` for every ending letter ``i`` of ``a``."""

    composition: Composition
    order: int
    jets: dict = field(default_factory=dict)

    def value(self, i: int, r: int, s: int) -> int:
        jet = self.jets.get(i)
        if jet is None:
            return 0
        return jet[index_pairs(self.order).index((r, s))]

    def as_dicts(self) -> dict:
        pairs = index_pairs(self.order)
        return {i: dict(zip(pairs, jet)) for i, jet in self.jets.items()}


def _check_order(order: int) -> None:
    if not 0 <= order <= MAX_ORDER:
        raise ValueError(f"moment order must lie in 0..{MAX_ORDER}, got {order}")


def raw_moment_jets(
    a: CompositionLike,
    order: int = DEFAULT_ORDER,
    budget: int = STATE_BUDGET,
    keep=None,
) -> JetState:
    """Exact power sums of (inv, maj) per ending letter, up to total ``order``.

    ``keep(b, {i: jet})`` is forwarded to the DP driver to retain
    intermediate sub-compositions.
    """
    a = as_composition(a)
    _check_order(order)
    check_budget(a, budget)
    base, step = _jet_algebra(order)
    jets = removal_dp(a, step, base, keep=keep)
    return JetState(a, order, jets)


def all_sub_jets(a: CompositionLike, order: int, budget: int = STATE_BUDGET) -> dict:
    """``{b: JetState}`` for every nonempty sub-composition ``b <= a``."""
    a = as_composition(a)
    out = {}

    def keep(b, values):
        out[b] = JetState(Composition(b), order, values)

    raw_moment_jets(a, order, budget, keep=keep)
    return out


def _normalize(pairs, sums: dict, total: int, order: int, scope: str) -> MomentTable:
    entries = {rs: Fraction(sums.get(rs, 0), total) for rs in pairs}
    return MomentTable(order, entries, "raw", scope)


def table_from_jets(state: JetState, ending: int | None = None) -> MomentTable:
    """Raw moments on ``S_A`` (``ending=None``) or on the words ending in ``ending``."""
    a = state.composition
    pairs = index_pairs(state.order)
    if a.n == 0:
        return MomentTable(state.order, {rs: Fraction(int(rs == (0, 0))) for rs in pairs})
    if ending is None:
        sums = dict.fromkeys(pairs, 0)
        for jet in state.jets.values():
            for rs, v in zip(pairs, jet):
                sums[rs] += v
        return _normalize(pairs, sums, multinomial(a), state.order, "class")
    if ending not in state.jets:
        raise ValueError(f"no word of {a.counts} ends in letter {ending}")
    sums = dict(zip(pairs, state.jets[ending]))
    return _normalize(pairs, sums, multinomial(a.remove(ending)), state.order, f"ending:{ending}")


def class_moments(a: CompositionLike, order: int = DEFAULT_ORDER, budget: int = STATE_BUDGET) -> MomentTable:
    """Raw mixed moments ``E(inv^r maj^s)`` on ``S_A`` for ``r + s <= order``."""
    return table_from_jets(raw_moment_jets(a, order, budget))


def ending_class_moments(a: CompositionLike, i: int, order: int = DEFAULT_ORDER, budget: int = STATE_BUDGET) -> MomentTable:
    return table_from_jets(raw_moment_jets(a, order, budget), ending=i)


def moments_from_polynomial(f: JointPolynomial, order: int, scope: str = "class") -> MomentTable:
    """Raw moments read directly off the coefficients of a joint polynomial."""
    total = f(1, 1)
    pairs = index_pairs(order)
    entries = {
        (r, s): Fraction(sum(v * x**r * y**s for (x, y), v in f.coeffs.items()), total)
        for r, s in pairs
    }
    return MomentTable(order, entries, "raw", scope)


# --------------------------------------------------------------------------
# means and moment transforms


def e2(a) -> int:
    """Second elementary symmetric polynomial of the multiplicities."""
    total = 0
    acc = 0
    for x in a:
        total += acc * x
        acc += x
    return total


def mean(a: CompositionLike) -> Fraction:
    """Common mean of inv and maj on ``S_A``."""
    return Fraction(e2(tuple(a)), 2)


def class_mean(a: CompositionLike, i: int) -> Fraction:
    """Common mean of inv and maj over the words of ``a`` ending in ``i``."""
    a = as_composition(a)
    rest = a.remove(i) if 1 <= i <= a.d else None
    if rest is None:
        raise ValueError(f"letter {i} outside 1..{a.d}")
    return Fraction(e2(rest.counts), 2) + sum(a.counts[i:])


def _require(t: MomentTable, kind: str) -> None:
    if t.kind != kind:
        raise ValueError(f"expected a {kind} table, got {t.kind}")
    if not t.complete():
        raise ValueError(f"moment table is missing entries below order {t.order}")


def centralize(t: MomentTable, mu) -> MomentTable:
    """``E((X - mu)^r (Y - mu)^s)`` from raw moments, both coordinates centred at ``mu``."""
    _require(t, "raw")
    mu = Fraction(mu)
    neg = [Fraction(1)]
    for _ in range(t.order):
        neg.append(neg[-1] * -mu)
    out = {}
    for r, s in index_pairs(t.order):
        out[r, s] = sum(
            comb(r, r2) * comb(s, s2) * neg[r - r2 + s - s2] * t.entries[r2, s2]
            for r2 in range(r + 1)
            for s2 in range(s + 1)
        )
    return MomentTable(t.order, out, "central", t.scope)


def stirling1(n: int, k: int) -> int:
    """Signed Stirling numbers of the first kind."""
    return _stirling_rows(n, 1)[k] if 0 <= k <= n else 0


def stirling2(n: int, k: int) -> int:
    return _stirling_rows(n, 2)[k] if 0 <= k <= n else 0


_STIRLING_CACHE: dict = {}


def _stirling_rows(n: int, kind: int) -> list:
    key = (n, kind)
    if key not in _STIRLING_CACHE:
        row = [1]
        for m in range(n):
            nxt = [0] * (m + 2)
            for k, v in enumerate(row):
                if kind == 1:
                    nxt[k + 1] += v
                    nxt[k] -= m * v
                else:
                    nxt[k + 1] += v
                    nxt[k] += k * v
            row = nxt
        _STIRLING_CACHE[key] = row
    return _STIRLING_CACHE[key]


def _stirling_transform(t: MomentTable, kind: int, new_kind: str) -> MomentTable:
    out = {}
    for r, s in index_pairs(t.order):
        sr = _stirling_rows(r, kind)
        ss = _stirling_rows(s, kind)
        out[r, s] = sum(
            sr[k] * ss[m] * t.entries[k, m]
            for k in range(r + 1)
            for m in range(s + 1)
            if sr[k] and ss[m]
        )
        out[r, s] = Fraction(out[r, s])
    return MomentTable(t.order, out, new_kind, t.scope)


def to_factorial(t: MomentTable) -> MomentTable:
    """Mixed factorial moments ``E(X^(r falling) Y^(s falling))`` of a central table."""
    _require(t, "central")
    return _stirling_transform(t, 1, "factorial")


def from_factorial(t: MomentTable) -> MomentTable:
    """Inverse of :func:`to_factorial` via Stirling numbers of the second kind."""
    _require(t, "factorial")
    return _stirling_transform(t, 2, "central")


def central_moments(a: CompositionLike, order: int = DEFAULT_ORDER, budget: int = STATE_BUDGET) -> MomentTable:
    a = as_composition(a)
    return centralize(class_moments(a, order, budget), mean(a))


def factorial_moments_by_ending(state: JetState) -> dict:
    """``{i: FM table}`` for each ending letter, centred at the ending-class mean."""
    a = state.composition
    return {
        i: to_factorial(centralize(table_from_jets(state, i), class_mean(a, i)))
        for i in state.jets
    }


def exact_correlation(a: CompositionLike, budget: int = STATE_BUDGET) -> Fraction:
    """Cov(inv, maj) / Var(inv) on ``S_A``, exactly."""
    c = central_moments(a, 2, budget)
    if c[2, 0] == 0:
        raise ValueError(f"class {tuple(a)} is degenerate (zero variance)")
    return c[1, 1] / c[2, 0]


# --------------------------------------------------------------------------
# limiting covariance structure


def _cubic_parts(m):
    m = [Fraction(x) for x in m]
    d = len(m)
    upper = sum(m[i] * m[j] ** 2 for i in range(d) for j in range(i + 1, d))
    lower = sum(m[i] ** 2 * m[j] for i in range(d) for j in range(i + 1, d))
    triple = sum(
        m[i] * m[j] * m[k]
        for i in range(d)
        for j in range(i + 1, d)
        for k in range(j + 1, d)
    )
    return upper, lower, triple


def asymptotic_variance(m) -> Fraction:
    """Leading coefficient of Var(inv) = Var(maj) on ``S_{a m}``, per ``a^3``."""
    upper, lower, triple = _cubic_parts(m)
    return (upper + lower + 2 * triple) / 12


def asymptotic_covariance(m) -> Fraction:
    upper, lower, _ = _cubic_parts(m)
    return (upper - lower) / 12


def asymptotic_correlation(m) -> Fraction:
    upper, lower, triple = _cubic_parts(m)
    den = upper + lower + 2 * triple
    if den == 0:
        raise ValueError(f"multiplicities {tuple(m)} give a degenerate limit")
    return (upper - lower) / den


# --------------------------------------------------------------------------
# factorial-moment recurrence check


def gen_binomial(h, k: int) -> Fraction:
    """``h (h-1) ... (h-k+1) / k!`` for rational ``h``."""
    h = Fraction(h)
    out = Fraction(1)
    for t in range(k):
        out = out * (h - t) / (t + 1)
    return out


def falling(x, k: int):
    out = 1
    for t in range(k):
        out *= x - t
    return out


def recurrence_exponents(a, i: int, j: int, inv_rule: str = "corrected"):
    """Half-integer exponents of ``(1+p)`` and ``(1+q)`` linking ``G(a+e_i, i)`` to ``G(a, j)``.

    With ``inv_rule="typo"`` the inv increment of the last letter is taken
    as ``(d - i) * (a_i + 1)`` instead of the number of larger letters.
    """
    a = tuple(a)
    d = len(a)
    above_j = sum(a[j:])
    below_j = sum(a[:j - 1])
    alpha = Fraction(above_j - below_j, 2)
    if j <= i:
        beta = Fraction(sum(a[j:i]) - below_j - sum(a[i:]), 2)
    else:
        beta = Fraction(above_j + sum(a[:i]) - sum(a[i:j - 1]), 2)
    if inv_rule == "typo":
        alpha += (d - i) * (a[i - 1] + 1) - sum(a[i:])
    elif inv_rule != "corrected":
        raise ValueError(f"unknown inv_rule {inv_rule!r}")
    return alpha, beta


def fm_recurrence_residual(
    a: CompositionLike,
    i: int,
    r: int,
    s: int,
    inv_rule: str = "corrected",
    fm: dict | None = None,
) -> Fraction:
    """Left side minus right side of the factorial-moment recurrence.

    Relates FM on the words of ``a + e_i`` ending in ``i`` to FM on the
    words of ``a`` ending in each ``j``.  ``fm`` may carry precomputed
    ``{composition: {letter: factorial MomentTable}}`` (see
    :func:`factorial_moment_cache`).
    """
    a = as_composition(a)
    if not 1 <= i <= a.d:
        raise ValueError(f"letter {i} outside 1..{a.d}")
    n = a.n
    if n == 0:
        return Fraction(0)
    up = list(a.counts)
    up[i - 1] += 1
    up = tuple(up)
    if fm is None:
        fm = factorial_moment_cache(up, r + s)
    top = fm[up][i]
    here = fm[a.counts]
    lhs = n * top[r, s] - sum(a[j - 1] * here[j][r, s] for j in here)
    rhs = Fraction(0)
    for j, table in here.items():
        alpha, beta = recurrence_exponents(a.counts, i, j, inv_rule)
        inner = Fraction(0)
        for r2 in range(r + 1):
            cr = gen_binomial(alpha, r - r2) * falling(r, r - r2)
            for s2 in range(s + 1):
                if r2 == r and s2 == s:
                    continue
                inner += cr * gen_binomial(beta, s - s2) * falling(s, s - s2) * table[r2, s2]
        rhs += a[j - 1] * inner
    return lhs - rhs


def factorial_moment_cache(a: CompositionLike, order: int, budget: int = STATE_BUDGET) -> dict:
    """Per-ending factorial moment tables for every sub-composition of ``a``."""
    return {
        b: factorial_moments_by_ending(state)
        for b, state in all_sub_jets(a, order, budget).items()
    }
