import cmath
from fractions import Fraction
from itertools import product
from math import sqrt

import pytest
from hypothesis import given, settings, strategies as st

from rtinvariants import gauss, lie
from rtinvariants.errors import InvalidInput, PreconditionError

A1, A2, B2 = (lie.build_algebra(*t) for t in [("A", 1), ("A", 2), ("B", 2)])
ZERO1, ZERO2 = (Fraction(0),), (Fraction(0), Fraction(0))


def brute_lhs(alg, r, n, psi):
    """Plain Fraction arithmetic over X/rX."""
    total = 0
    for lam in product(range(r), repeat=alg.rank):
        v = lie.weight(*lam)
        ex = n * lie.inner_product(alg, v, v) / r + 2 * lie.rational_inner(alg, lam, psi)
        total += cmath.exp(1j * cmath.pi * float(ex))
    return alg.vol_coroot * total


def test_a1_r2_f2():
    inst = gauss.GaussInstance(A1, 2, 2, ZERO1)
    # X/2X = {0, lambda_1}, |lambda_1|^2 = 1/2, so the sum is 1 + exp(pi i/2)
    assert abs(gauss.gauss_lhs(inst) - sqrt(2) * (1 + 1j)) < 1e-12
    assert gauss.reciprocity_residual(inst) < 1e-12


def test_negative_f():
    inst = gauss.GaussInstance(A1, 2, -2, ZERO1)
    assert abs(gauss.gauss_lhs(inst) - sqrt(2) * (1 - 1j)) < 1e-12
    assert gauss.reciprocity_residual(inst) < 1e-12


def test_admissible_instances_match_brute_force():
    for alg in (A1, A2, B2):
        for r in range(1, 5):
            for n in (1, -1, 2, -2, 3, 4):
                for psi in gauss.admissible_psi(alg, r, n)[:3]:
                    inst = gauss.GaussInstance(alg, r, n, psi)
                    assert abs(gauss.gauss_lhs(inst) - brute_lhs(alg, r, n, inst.psi)) < 1e-10


def test_inadmissible_instances_rejected():
    # (r/2)|lambda_1|^2 = 1/4 for A1, r = 1, f = 1
    with pytest.raises(PreconditionError, match="r/2"):
        gauss.GaussInstance(A1, 1, 1, ZERO1)
    # <lambda_1, lambda_2> = 1/3 for A2
    with pytest.raises(PreconditionError, match="f eta"):
        gauss.GaussInstance(A2, 3, 1, ZERO2)
    with pytest.raises(PreconditionError, match="psi"):
        gauss.GaussInstance(A1, 2, 2, (Fraction(1, 3),))
    with pytest.raises(InvalidInput):
        gauss.GaussInstance(A1, 0, 2, ZERO1)
    with pytest.raises(InvalidInput):
        gauss.GaussInstance(A1, 2, 0, ZERO1)


def test_unchecked_evaluation():
    # outside the assumptions the two sides need not agree: sqrt(2) against exp(pi i/4)
    inst = gauss.GaussInstance(A1, 1, 1, ZERO1, checked=False)
    assert abs(gauss.gauss_lhs(inst) - sqrt(2)) < 1e-14
    assert abs(gauss.gauss_rhs(inst) - cmath.exp(1j * cmath.pi / 4)) < 1e-14
    assert gauss.reciprocity_residual(inst) > 0.1
    # A2, r = 3, f = 1: the nine-term sum itself
    inst = gauss.GaussInstance(A2, 3, 1, ZERO2, checked=False)
    assert abs(gauss.gauss_lhs(inst) - brute_lhs(A2, 3, 1, ZERO2)) < 1e-12


def test_scalar_root_branch():
    assert abs(gauss.scalar_root_factor(1, 1) - cmath.exp(1j * cmath.pi / 4)) < 1e-15
    assert abs(gauss.scalar_root_factor(-4, 2) - 0.25 * cmath.exp(-1j * cmath.pi / 2)) < 1e-15


@pytest.mark.parametrize("alg", [A1, A2, B2], ids=["A1", "A2", "B2"])
def test_reciprocity_grid(alg):
    worst, count = 0.0, 0
    for r in range(1, 7):
        for n in [s * k for k in range(1, 5) for s in (1, -1)]:
            for psi in gauss.admissible_psi(alg, r, n):
                worst = max(worst, gauss.reciprocity_residual(gauss.GaussInstance(alg, r, n, psi)))
                count += 1
    assert count > 0
    assert worst < 1e-9


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(A1, 2, 2), (A1, 4, 1), (A2, 3, 3), (B2, 2, 2), (B2, 4, 1)]), st.data())
def test_lhs_summands_depend_on_class(case, data):
    alg, r, n = case
    psis = gauss.admissible_psi(alg, r, n)
    if not psis:
        return
    psi = psis[data.draw(st.integers(0, len(psis) - 1))]
    inst = gauss.GaussInstance(alg, r, n, psi)
    lam = data.draw(st.lists(st.integers(-5, 5), min_size=alg.rank, max_size=alg.rank))
    eta = data.draw(st.lists(st.integers(-3, 3), min_size=alg.rank, max_size=alg.rank))
    shifted = [a + r * b for a, b in zip(lam, eta)]
    diff = gauss.lhs_summand_num(inst, shifted) - gauss.lhs_summand_num(inst, lam)
    # exponents are in units of pi i, so the summand is unchanged iff diff is even
    assert diff.denominator == 1 and diff % 2 == 0
