from fractions import Fraction
from math import gcd, pi, sin

import numpy as np
import pytest

from rtinvariants import asymptotics as A
from rtinvariants import lie
from rtinvariants.errors import InvalidInput
from rtinvariants.invariants import tau_lens, tqft_constants
from rtinvariants.sl2rep import make_context

A1, A2, B2 = (lie.build_algebra(*t) for t in [("A", 1), ("A", 2), ("B", 2)])


def sizes(alg, p):
    return [len(m) for m in A.partition_levels(alg, p).levels]


def test_strata_a1():
    for p in (1, 3, 5, 7, -9, 11):
        st = A.partition_levels(A1, p)
        assert st.levels[1] == ((0,),)
        assert len(st.levels[0]) == abs(p) - 1
    for p in (2, 4, 6, -8, 12):
        st = A.partition_levels(A1, p)
        assert st.levels[1] == ((0,), (abs(p) // 2,))
        assert len(st.levels[0]) == abs(p) - 2


def test_strata_a2():
    for l in (1, 2, -3, 4):
        st = A.partition_levels(A2, 3 * l)
        n = abs(l)
        assert set(st.levels[3]) == {(0, 0), (n, 2 * n), (2 * n, n)}
        assert st.levels[2] == ()
    assert sizes(A2, 3) == [6, 0, 0, 3]
    assert sizes(A2, 4) == [6, 9, 0, 1]


@pytest.mark.parametrize("family,rank", [("A", 1), ("A", 2), ("A", 3), ("B", 2), ("B", 3), ("C", 3), ("G", 2)])
def test_strata_partition(family, rank):
    alg = lie.build_algebra(family, rank)
    for p in range(1, 13 if rank < 3 else 7):
        st = A.partition_levels(alg, p)
        assert sum(len(m) for m in st.levels) == p**rank
        assert len({v for m in st.levels for v in m}) == p**rank
        assert (0,) * rank in st.levels[alg.n_positive]
    with pytest.raises(InvalidInput):
        A.partition_levels(A1, 0)


def test_coefficient_b():
    assert A.coefficient_b(A1, 5, (0,)) == 1
    assert A.coefficient_b(A2, 3, (0, 0)) == 2
    assert A.coefficient_b(A1, 5, (1,)) == pytest.approx(sin(2 * pi / 5), abs=1e-15)
    # <alpha^vee, alpha>/p = 1 for p = 2
    assert A.coefficient_b(A1, 2, (1,)) == -1
    b2_rho = np.prod([float(x) for x in lie.root_pairings(B2, B2.rho)])
    assert A.coefficient_b(B2, 4, (0, 0)) == pytest.approx(b2_rho)


def test_cs_values_examples():
    assert A.cs_values(A1, 5, 1).values == (0, Fraction(1, 5), Fraction(4, 5))
    assert A.cs_values(A1, 5, 1).sign_ambiguous
    for k in (2, 3):
        assert 0 in A.cs_values(A1, k * k, 1).values
    for alg in (A1, A2, B2):
        assert A.cs_values(alg, 1, 0).values == (0,)
    with pytest.raises(InvalidInput):
        A.cs_values(A1, 6, 3)


def test_cs_values_match_sl2_set():
    for p in range(1, 13):
        for q in range(1, max(p, 2)):
            if gcd(p, q) != 1:
                continue
            qs = pow(q, -1, p) if p > 1 else 0
            expected = sorted({Fraction(qs * n * n, p) % 1 for n in range(p)})
            assert list(A.cs_values(A1, p, q).values) == expected


def test_resum_examples():
    assert A.resum_check(make_context(A1, 5), 5, 1) < 1e-10
    assert A.resum_check(make_context(A2, 4), 5, 2) < 1e-10
    assert A.resum_check(make_context(A1, 50), 3, 1) < 1e-9


@pytest.mark.parametrize("alg", [A1, A2], ids=["A1", "A2"])
def test_resum_grid(alg):
    worst = 0.0
    for k in range(alg.dual_coxeter, 9):
        ctx = make_context(alg, k)
        for p in range(-8, 9):
            for q in range(-8, 9):
                if p != 0 and gcd(p, q) == 1:
                    worst = max(worst, A.resum_check(ctx, p, q))
    assert worst < 1e-9


def test_leading_matches_sl2_display():
    for k in (5, 17, 50):
        for p, q in [(3, 1), (5, 2), (7, 3), (-4, 1), (8, 3)]:
            assert abs(A.leading_term(A1, k, p, q) - A.leading_term_sl2(k, p, q)) < 1e-9


def test_leading_ratio_trend():
    errs = []
    for k in (50, 100, 200, 400):
        tau = tau_lens(make_context(A1, k), 3, 1).value
        errs.append(abs(tau / A.leading_term(A1, k, 3, 1) - 1))
    assert all(a > b for a, b in zip(errs, errs[1:]))
    scaled = [e * k for e, k in zip(errs, (50, 100, 200, 400))]
    # fitted constant C is about 1.209
    assert max(scaled) < 1.25
    assert max(scaled) - min(scaled) < 1e-3


def test_leading_p_one_is_s3_shape():
    for alg in (A1, A2):
        ratios = []
        for k in (100, 200, 400):
            D = tqft_constants(make_context(alg, k)).rank_D
            ratios.append(abs(A.leading_term(alg, k, 1, 0)) * D)
        assert all(abs(r - 1) < 5 / k for r, k in zip(ratios, (100, 200, 400)))
        assert abs(ratios[-1] - 1) < abs(ratios[0] - 1)


def _plain_stratum_sum(alg, kappa, p, q):
    """Lowest stratum with the raw (unsymmetrized) angle phase, b_nu from coefficient_b."""
    st = A.partition_levels(alg, p)
    j = next(i for i, m in enumerate(st.levels) if m)
    pairs, gauss, ang = A._strata_terms(A._LightContext(alg, kappa), p, q)
    coords = [tuple(c) for c in np.array(list(np.ndindex(*(abs(p),) * alg.rank)))]
    idx = {c: i for i, c in enumerate(coords)}
    total = sum(A.coefficient_b(alg, p, nu) * gauss[idx[nu]] * ang[idx[nu]] for nu in st.levels[j])
    return A._lens_pref(alg, kappa, p, q) * (pi / (p * kappa)) ** j * total


def test_symmetrization_is_exact():
    for alg in (A1, A2, B2):
        for p, q in [(1, 0), (2, 1), (3, 1), (4, 1), (-5, 2), (6, 5)]:
            assert abs(A.leading_term(alg, 30, p, q) - _plain_stratum_sum(alg, 30, p, q)) < 1e-13
