"""q-multinomials and the joint (inv, maj) generating polynomial.

The joint polynomial of a rearrangement class is built by removing the last
letter of a word: if the word ends in ``i`` then dropping that letter lowers
inv by the number of letters greater than ``i`` and lowers maj by ``n - 1``
exactly when the new last letter is greater than ``i``.  :func:`removal_dp`
runs this recursion over all sub-compositions, one total-size layer at a
time, with a pluggable value algebra so that the moment module can reuse it.
"""
from __future__ import annotations

from typing import Callable, Iterator

from .core import Composition, CompositionLike, as_composition, multinomial


class UniPolynomial:
    """Sparse univariate polynomial with integer coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {int(k): int(v) for k, v in (coeffs or {}).items() if v}

    @classmethod
    def from_dense(cls, dense) -> "UniPolynomial":
        return cls({k: c for k, c in enumerate(dense) if c})

    def dense(self) -> list:
        if not self.coeffs:
            return []
        out = [0] * (self.degree + 1)
        for k, c in self.coeffs.items():
            out[k] = c
        return out

    @property
    def degree(self) -> int:
        return max(self.coeffs, default=-1)

    def __call__(self, x):
        return sum(c * x**k for k, c in self.coeffs.items())

    def __eq__(self, other):
        if isinstance(other, UniPolynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        return f"UniPolynomial({dict(sorted(self.coeffs.items()))})"

    def to_string(self, var: str = "q") -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in sorted(self.coeffs):
            c = self.coeffs[k]
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms)

    def to_records(self) -> list:
        return [{"degree": k, "count": str(c)} for k, c in sorted(self.coeffs.items())]


class JointPolynomial:
    """Sparse polynomial in ``p`` (inv) and ``q`` (maj)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {(int(i), int(j)): int(v) for (i, j), v in (coeffs or {}).items() if v}

    @classmethod
    def one(cls) -> "JointPolynomial":
        return cls({(0, 0): 1})

    def __add__(self, other: "JointPolynomial") -> "JointPolynomial":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return JointPolynomial(out)

    def shift(self, di: int, dj: int) -> "JointPolynomial":
        """Multiply by the monomial ``p**di * q**dj``."""
        res = JointPolynomial()
        res.coeffs = {(i + di, j + dj): v for (i, j), v in self.coeffs.items()}
        return res

    def __call__(self, p, q):
        return sum(v * p**i * q**j for (i, j), v in self.coeffs.items())

    def __eq__(self, other):
        if isinstance(other, JointPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, dict):
            return self.coeffs == {k: v for k, v in other.items() if v}
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        return f"JointPolynomial({dict(sorted(self.coeffs.items()))})"

    def to_records(self) -> list:
        return [
            {"inv": i, "maj": j, "count": str(v)}
            for (i, j), v in sorted(self.coeffs.items())
        ]

    @classmethod
    def from_records(cls, records) -> "JointPolynomial":
        return cls({(int(r["inv"]), int(r["maj"])): int(r["count"]) for r in records})


def marginal(f: JointPolynomial, axis: str) -> UniPolynomial:
    """Collapse ``f`` onto the inv axis or the maj axis."""
    if axis not in ("inv", "maj"):
        raise ValueError(f"axis must be 'inv' or 'maj', got {axis!r}")
    k = 0 if axis == "inv" else 1
    out: dict = {}
    for key, v in f.coeffs.items():
        out[key[k]] = out.get(key[k], 0) + v
    return UniPolynomial(out)


class InexactDivision(ArithmeticError):
    """Polynomial division left a remainder (an internal arithmetic bug)."""


def _times_one_minus(c: list, k: int) -> list:
    # c * (1 - q^k)
    out = c + [0] * k
    for m in range(len(c)):
        out[m + k] -= c[m]
    return out


def _div_one_minus(c: list, k: int) -> list:
    # c / (1 - q^k): out[m] = c[m] + out[m - k]
    out = list(c)
    for m in range(k, len(out)):
        out[m] += out[m - k]
    if any(out[len(out) - k:]):
        raise InexactDivision(f"(1 - q^{k}) does not divide the polynomial")
    return out[:len(out) - k]


def q_multinomial(a: CompositionLike) -> UniPolynomial:
    """``[n]_q! / prod_j [a_j]_q!`` as an exact integer polynomial.

    Built as a product of q-binomials, each grown one factor at a time so
    that every intermediate quotient is itself a polynomial.
    """
    a = as_composition(a)
    c = [1]
    total = 0
    for part in a.counts:
        for t in range(1, part + 1):
            c = _times_one_minus(c, total + t)
            c = _div_one_minus(c, t)
        total += part
    return UniPolynomial.from_dense(c)


def sub_compositions(a: Composition, total: int) -> Iterator[tuple]:
    """All ``b <= a`` (componentwise) with ``sum(b) == total``."""
    counts = a.counts
    d = len(counts)
    suffix = [0] * (d + 1)
    for k in range(d - 1, -1, -1):
        suffix[k] = suffix[k + 1] + counts[k]

    def rec(k, left, prefix):
        if k == d - 1:
            if left <= counts[k]:
                yield prefix + (left,)
            return
        lo = max(0, left - suffix[k + 1])
        for x in range(lo, min(counts[k], left) + 1):
            yield from rec(k + 1, left - x, prefix + (x,))

    if total > suffix[0]:
        return
    yield from rec(0, total, ())


def removal_dp(
    a: CompositionLike,
    step: Callable,
    base: Callable,
    keep: Callable | None = None,
) -> dict:
    """Run the last-letter-removal recursion up to ``a``.

    ``base(i)`` gives the value for the one-letter word ``(i,)``.
    ``step(b, i, below, inv_shift, maj_shift)`` gives the value for
    compositions ``b`` ending in ``i``; ``below`` maps each letter ``j`` to
    the value of ``b - e_i`` ending in ``j`` and the two shifts are the inv
    increment and the maj increment that applies to every ``j > i``.
    Letters are 1-indexed.

    Returns ``{i: value}`` for ``a`` itself.  Layers are dropped once the
    next one is built; ``keep(b, values)`` is called for every computed
    composition if the caller wants to retain something.
    """
    a = as_composition(a)
    d = a.d
    n = a.n
    if n == 0:
        return {}
    layer: dict = {}
    for b in sub_compositions(a, 1):
        i = b.index(1) + 1
        layer[b] = {i: base(i)}
        if keep is not None:
            keep(b, layer[b])
    for t in range(2, n + 1):
        nxt: dict = {}
        for b in sub_compositions(a, t):
            values = {}
            greater = 0
            for i in range(d, 0, -1):
                if b[i - 1]:
                    lower = list(b)
                    lower[i - 1] -= 1
                    values[i] = step(b, i, layer[tuple(lower)], greater, t - 1)
                greater += b[i - 1]
            nxt[b] = values
            if keep is not None:
                keep(b, values)
        layer = nxt
    return layer[a.counts]


def _joint_step(b, i, below, inv_shift, maj_shift):
    low = JointPolynomial()
    high = JointPolynomial()
    for j, f in below.items():
        if j <= i:
            low = low + f
        else:
            high = high + f
    return (low + high.shift(0, maj_shift)).shift(inv_shift, 0)


def joint_gf_all_endings(a: CompositionLike) -> dict:
    """``{i: F(a, i)}`` for every letter ``i`` that occurs in ``a``."""
    return removal_dp(a, _joint_step, lambda i: JointPolynomial.one())


def joint_gf_by_ending(a: CompositionLike, i: int) -> JointPolynomial:
    """Joint (inv, maj) polynomial over the words of ``a`` ending in ``i``."""
    a = as_composition(a)
    if not 1 <= i <= a.d or a[i - 1] == 0:
        raise ValueError(f"no word of {a.counts} ends in letter {i}")
    return joint_gf_all_endings(a)[i]


def joint_gf(a: CompositionLike) -> JointPolynomial:
    """Joint (inv, maj) polynomial over the whole class ``S_A``."""
    a = as_composition(a)
    if a.n == 0:
        return JointPolynomial.one()
    total = JointPolynomial()
    for f in joint_gf_all_endings(a).values():
        total = total + f
    return total


def check_total(f: JointPolynomial, a: CompositionLike) -> bool:
    return f(1, 1) == multinomial(a)
