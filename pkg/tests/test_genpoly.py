import pytest

from mahonian.core import brute_force_joint, multinomial
from mahonian.core import brute_force_joint_by_ending
from mahonian.genpoly import (
    InexactDivision,
    JointPolynomial,
    UniPolynomial,
    _div_one_minus,
    joint_gf,
    joint_gf_all_endings,
    joint_gf_by_ending,
    marginal,
    q_multinomial,
    sub_compositions,
)
from mahonian.core import Composition

from conftest import compositions


@pytest.mark.parametrize("a, dense", [
    ((1, 1), [1, 1]),
    ((2, 1), [1, 1, 1]),
    ((2, 2), [1, 1, 2, 1, 1]),
    ((0, 0), [1]),
])
def test_q_multinomial_examples(a, dense):
    assert q_multinomial(a) == UniPolynomial.from_dense(dense)


def test_q_multinomial_against_product_formula():
    # [n]_q! / prod [a_j]_q! by plain long division as an independent route
    def qfact(n):
        out = [1]
        for k in range(1, n + 1):
            qk = [1] * k
            out = [sum(out[i] * qk[m - i] for i in range(len(out)) if 0 <= m - i < k)
                   for m in range(len(out) + k - 1)]
        return out

    def divide(num, den):
        num = list(num)
        quo = [0] * (len(num) - len(den) + 1)
        for k in range(len(quo) - 1, -1, -1):
            quo[k] = num[k + len(den) - 1] // den[-1]
            for t, c in enumerate(den):
                num[k + t] -= quo[k] * c
        assert not any(num)
        return quo

    for a in [(3, 2), (1, 2, 3), (4, 0, 2), (2, 2, 2)]:
        c = qfact(sum(a))
        for x in a:
            c = divide(c, qfact(x))
        assert q_multinomial(a).dense() == c


def test_inexact_division_detected():
    with pytest.raises(InexactDivision):
        _div_one_minus([1, 1], 2)


@pytest.mark.parametrize("a, i, expected", [
    ((2, 1), 1, {(1, 2): 1, (2, 1): 1}),
    ((2, 1), 2, {(0, 0): 1}),
    ((1, 1), 2, {(0, 0): 1}),
])
def test_joint_by_ending_examples(a, i, expected):
    assert joint_gf_by_ending(a, i) == expected


def test_joint_by_ending_rejects_absent_letter():
    with pytest.raises(ValueError):
        joint_gf_by_ending((2, 0), 2)
    with pytest.raises(ValueError):
        joint_gf_by_ending((2, 1), 3)


@pytest.mark.parametrize("a, expected", [
    ((1, 1), {(0, 0): 1, (1, 1): 1}),
    ((2, 1), {(0, 0): 1, (1, 2): 1, (2, 1): 1}),
    ((2, 2), {(0, 0): 1, (1, 2): 1, (2, 3): 1, (2, 1): 1, (3, 4): 1, (4, 2): 1}),
    ((0, 0), {(0, 0): 1}),
])
def test_joint_examples(a, expected):
    assert joint_gf(a) == expected


def test_marginal_examples():
    assert marginal(JointPolynomial({(0, 0): 1, (1, 1): 1}), "inv") == UniPolynomial({0: 1, 1: 1})
    assert marginal(joint_gf((2, 2)), "maj") == q_multinomial((2, 2))
    assert marginal(joint_gf((2, 1)), "inv") == UniPolynomial.from_dense([1, 1, 1])
    with pytest.raises(ValueError):
        marginal(joint_gf((1, 1)), "des")


@pytest.mark.parametrize("a", list(compositions(7, 3, min_n=1)))
def test_per_ending_against_enumeration(a):
    brute = brute_force_joint_by_ending(a)
    got = joint_gf_all_endings(a)
    assert set(got) == set(brute)
    for i, f in got.items():
        assert f == brute[i]
        assert f(1, 1) == multinomial(Composition(a).remove(i))
        assert marginal(f, "inv") == marginal(f, "maj")


def test_totals_and_layers():
    a = Composition((3, 2, 2))
    assert joint_gf(a)(1, 1) == multinomial(a)
    layer = sorted(sub_compositions(a, 3))
    assert all(sum(b) == 3 and all(x <= y for x, y in zip(b, a)) for b in layer)
    assert len(layer) == len(set(layer)) == 8


def test_records_round_trip():
    f = joint_gf((3, 3))
    recs = f.to_records()
    assert all(isinstance(r["count"], str) for r in recs)
    assert JointPolynomial.from_records(recs) == f


def test_large_coefficients_exact():
    f = joint_gf((6, 6, 6))
    assert f(1, 1) == multinomial((6, 6, 6))
    assert marginal(f, "maj") == q_multinomial((6, 6, 6))
