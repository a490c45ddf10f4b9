from collections import Counter

import pytest
from hypothesis import given, strategies as st

from mahonian.core import (
    Composition,
    EnumerationCapExceeded,
    Word,
    brute_force_joint,
    descent_set,
    enumerate_words,
    inversion_number,
    major_index,
    multinomial,
)

from conftest import compositions, words_by_permutation


@pytest.mark.parametrize("w, expected", [((1, 2, 3), 0), ((2, 1, 1, 2), 2), ((2, 2, 1, 1), 4), ((), 0)])
def test_inversion_examples(w, expected):
    assert inversion_number(w) == expected
    assert inversion_number(w, method="naive") == expected


@pytest.mark.parametrize("w, expected", [((1, 2, 3), set()), ((2, 1, 2, 1), {1, 3}), ((1, 2, 1), {2})])
def test_descent_set(w, expected):
    assert descent_set(w) == expected


@pytest.mark.parametrize("w, expected", [((1, 1, 2, 2), 0), ((2, 1, 2, 1), 4), ((2, 2, 1, 1), 2)])
def test_major_index(w, expected):
    assert major_index(w) == expected


@given(st.lists(st.integers(1, 5), max_size=10))
def test_fast_inversions_match_definition(letters):
    assert inversion_number(letters) == inversion_number(letters, method="naive")


def test_unknown_method():
    with pytest.raises(ValueError):
        inversion_number((1, 2), method="quick")


def test_word_validation():
    with pytest.raises(ValueError):
        Word((1, 4), 3)
    with pytest.raises(ValueError):
        Word((0,), 2)
    w = Word((), 2)
    assert inversion_number(w) == major_index(w) == 0
    assert Word.of((2, 1, 3)).composition() == Composition((1, 1, 1))


def test_composition_validation():
    with pytest.raises(ValueError):
        Composition((1, -1))
    with pytest.raises(ValueError):
        Composition(())
    with pytest.raises(ValueError):
        Composition((0, 2)).remove(1)
    assert Composition((2, 1)).n == 3


@pytest.mark.parametrize("a, expected", [
    ((1, 1), [(1, 2), (2, 1)]),
    ((2, 1), [(1, 1, 2), (1, 2, 1), (2, 1, 1)]),
    ((0, 0), [()]),
])
def test_enumerate_examples(a, expected):
    assert list(enumerate_words(a)) == expected


@pytest.mark.parametrize("a", list(compositions(8, 4)))
def test_enumeration_against_permutations(a):
    words = list(enumerate_words(a))
    assert len(words) == multinomial(a)
    assert words == words_by_permutation(a)


def test_enumeration_cap():
    with pytest.raises(EnumerationCapExceeded):
        enumerate_words((5, 5), cap=100)
    with pytest.raises(EnumerationCapExceeded):
        brute_force_joint((5, 5), cap=100)


@pytest.mark.parametrize("a, expected", [((2, 1), 3), ((2, 2), 6), ((1, 1, 1), 6)])
def test_multinomial(a, expected):
    assert multinomial(a) == expected


@pytest.mark.parametrize("a, expected", [
    ((1, 1), {(0, 0): 1, (1, 1): 1}),
    ((2, 1), {(0, 0): 1, (1, 2): 1, (2, 1): 1}),
    ((2, 2), {(0, 0): 1, (1, 2): 1, (2, 3): 1, (2, 1): 1, (3, 4): 1, (4, 2): 1}),
])
def test_brute_force_joint_examples(a, expected):
    assert brute_force_joint(a) == expected


@pytest.mark.parametrize("a", list(compositions(7, 3, min_n=1)))
def test_macmahon_equidistribution_and_bounds(a):
    table = brute_force_joint(a)
    inv_marg = Counter()
    maj_marg = Counter()
    for (i, j), c in table.items():
        inv_marg[i] += c
        maj_marg[j] += c
    assert inv_marg == maj_marg
    n = sum(a)
    e2 = sum(a[i] * a[j] for i in range(len(a)) for j in range(i + 1, len(a)))
    assert max(j for _, j in table) <= n * (n - 1) // 2
    assert max(i for i, _ in table) <= e2
