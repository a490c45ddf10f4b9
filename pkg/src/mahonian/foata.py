"""Foata's second fundamental transformation, extended to words.

``foata_transform`` maps maj to inv inside every rearrangement class and
keeps the last letter in place; ``foata_inverse`` undoes it step by step.
"""
from __future__ import annotations

from .core import Word, WordLike, _letters


def _rewrap(w: WordLike, letters: list):
    if isinstance(w, Word):
        return Word(tuple(letters), w.d)
    return tuple(letters)


def _cut_and_rotate(v: list, x: int) -> list:
    if not v:
        return []
    if v[-1] <= x:
        ends_block = [y <= x for y in v]
    else:
        ends_block = [y > x for y in v]
    out = []
    start = 0
    for k, end in enumerate(ends_block):
        if end:
            block = v[start:k + 1]
            out.append(block[-1])
            out.extend(block[:-1])
            start = k + 1
    # v[-1] always closes a block, so nothing is left over
    return out


def _uncut(v: list, x: int) -> list:
    if not v:
        return []
    if v[0] <= x:
        starts_block = [y <= x for y in v]
    else:
        starts_block = [y > x for y in v]
    starts = [k for k, s in enumerate(starts_block) if s]
    starts.append(len(v))
    out = []
    for lo, hi in zip(starts, starts[1:]):
        block = v[lo:hi]
        out.extend(block[1:])
        out.append(block[0])
    return out


def foata_transform(w: WordLike):
    """Image of ``w`` under Foata's bijection; ``inv(phi(w)) == maj(w)``."""
    x = _letters(w)
    gamma: list = []
    for letter in x:
        gamma = _cut_and_rotate(gamma, letter)
        gamma.append(letter)
    return _rewrap(w, gamma)


def foata_inverse(w: WordLike):
    """Inverse of :func:`foata_transform`."""
    u = list(_letters(w))
    out = []
    while u:
        x = u.pop()
        out.append(x)
        u = _uncut(u, x)
    out.reverse()
    return _rewrap(w, out)
