"""Words, compositions and the two Mahonian statistics.

Positions are 1-indexed wherever they are reported (descent sets, the major
index), so that ``maj`` of a word is the plain sum of its descent positions.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import factorial
from typing import Iterator, Sequence, Union

#: Default ceiling on the size of a rearrangement class that the brute-force
#: oracles are willing to walk through.
ENUMERATION_CAP = 10**7


class EnumerationCapExceeded(ValueError):
    """The rearrangement class is larger than the enumeration cap."""


@dataclass(frozen=True)
class Word:
    """A word over the alphabet ``1..d``."""

    letters: tuple
    d: int

    def __post_init__(self):
        letters = tuple(int(x) for x in self.letters)
        if self.d < 1:
            raise ValueError(f"alphabet size must be positive, got {self.d}")
        for x in letters:
            if not 1 <= x <= self.d:
                raise ValueError(f"letter {x} outside alphabet 1..{self.d}")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def of(cls, letters: Sequence[int], d: int | None = None) -> "Word":
        letters = tuple(letters)
        if d is None:
            d = max(letters, default=1)
        return cls(letters, d)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, k):
        return self.letters[k]

    def composition(self) -> "Composition":
        c = Counter(self.letters)
        return Composition(tuple(c.get(k, 0) for k in range(1, self.d + 1)))


@dataclass(frozen=True)
class Composition:
    """Multiplicity vector ``(a_1, ..., a_d)`` of a rearrangement class."""

    counts: tuple

    def __post_init__(self):
        counts = tuple(int(x) for x in self.counts)
        if not counts:
            raise ValueError("a composition needs at least one part")
        if any(x < 0 for x in counts):
            raise ValueError(f"negative multiplicity in {counts}")
        object.__setattr__(self, "counts", counts)

    @property
    def d(self) -> int:
        return len(self.counts)

    @property
    def n(self) -> int:
        return sum(self.counts)

    def __iter__(self):
        return iter(self.counts)

    def __len__(self):
        return len(self.counts)

    def __getitem__(self, k):
        return self.counts[k]

    def remove(self, letter: int) -> "Composition":
        """Composition with one copy of ``letter`` (1-indexed) taken out."""
        if self.counts[letter - 1] == 0:
            raise ValueError(f"letter {letter} does not occur in {self.counts}")
        c = list(self.counts)
        c[letter - 1] -= 1
        return Composition(tuple(c))

    def scaled(self, a: int) -> "Composition":
        return Composition(tuple(a * x for x in self.counts))


WordLike = Union[Word, Sequence[int]]
CompositionLike = Union[Composition, Sequence[int]]


def as_composition(a: CompositionLike) -> Composition:
    return a if isinstance(a, Composition) else Composition(tuple(a))


def _letters(w: WordLike) -> tuple:
    return w.letters if isinstance(w, Word) else tuple(w)


def inversion_number_naive(w: WordLike) -> int:
    """Count pairs ``i < j`` with ``w[i] > w[j]`` by looking at every pair."""
    x = _letters(w)
    n = len(x)
    return sum(1 for i in range(n) for j in range(i + 1, n) if x[i] > x[j])


def inversion_number_fenwick(w: WordLike) -> int:
    """O(n log d) inversion count with a Fenwick tree over letter values."""
    x = _letters(w)
    if not x:
        return 0
    size = max(x)
    tree = [0] * (size + 1)
    seen = 0
    inv = 0
    for v in x:
        # letters already seen that are <= v
        k = v
        le = 0
        while k > 0:
            le += tree[k]
            k -= k & -k
        inv += seen - le
        k = v
        while k <= size:
            tree[k] += 1
            k += k & -k
        seen += 1
    return inv


def inversion_number(w: WordLike, method: str = "fast") -> int:
    """Inversion number of a word.

    ``method`` is ``"fast"`` (Fenwick tree) or ``"naive"`` (the O(n^2)
    definition); both always agree.
    """
    if method == "fast":
        return inversion_number_fenwick(w)
    if method == "naive":
        return inversion_number_naive(w)
    raise ValueError(f"unknown method {method!r}")


def descent_set(w: WordLike) -> frozenset:
    x = _letters(w)
    return frozenset(i + 1 for i in range(len(x) - 1) if x[i] > x[i + 1])


def major_index(w: WordLike) -> int:
    x = _letters(w)
    return sum(i + 1 for i in range(len(x) - 1) if x[i] > x[i + 1])


def multinomial(a: CompositionLike) -> int:
    counts = tuple(a)
    out = factorial(sum(counts))
    for c in counts:
        out //= factorial(c)
    return out


def enumerate_words(a: CompositionLike, cap: int = ENUMERATION_CAP) -> Iterator[tuple]:
    """Yield every rearrangement of the multiset ``a`` in lexicographic order.

    Words are produced as tuples of letters.  Raises
    :class:`EnumerationCapExceeded` up front if the class is larger than
    ``cap``.
    """
    a = as_composition(a)
    size = multinomial(a)
    if size > cap:
        raise EnumerationCapExceeded(
            f"class {a.counts} has {size} words, cap is {cap}"
        )
    return _lex_words(a)


def _lex_words(a: Composition) -> Iterator[tuple]:
    word = [k + 1 for k, c in enumerate(a.counts) for _ in range(c)]
    n = len(word)
    while True:
        yield tuple(word)
        # classic next-permutation step; handles repeated letters
        i = n - 2
        while i >= 0 and word[i] >= word[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while word[j] <= word[i]:
            j -= 1
        word[i], word[j] = word[j], word[i]
        word[i + 1:] = reversed(word[i + 1:])


def brute_force_joint(a: CompositionLike, cap: int = ENUMERATION_CAP) -> dict:
    """Joint frequency table ``{(inv, maj): count}`` by enumerating ``S_A``."""
    table: Counter = Counter()
    for w in enumerate_words(a, cap):
        table[inversion_number_fenwick(w), major_index(w)] += 1
    return dict(table)


def brute_force_joint_by_ending(a: CompositionLike, cap: int = ENUMERATION_CAP) -> dict:
    """Like :func:`brute_force_joint` but split by last letter."""
    out: dict = {}
    for w in enumerate_words(a, cap):
        if not w:
            continue
        t = out.setdefault(w[-1], Counter())
        t[inversion_number_fenwick(w), major_index(w)] += 1
    return {k: dict(v) for k, v in out.items()}
