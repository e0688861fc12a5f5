"""Cross-method agreement grid behind ``rt-invariants selftest``.

Each check returns the largest residual it saw; callers compare against a tolerance.
"""

import random
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import gcd

import numpy as np

from . import asymptotics, gauss, invariants, lie
from .modular import SL2Matrix, THETA, XI
from .sl2rep import make_context, rep_matrix_closed, rep_matrix_word, rep_theta_diag, rep_xi

SEED = 20240611

# Seifert presentations with pairwise coprime alpha_j
COPRIME_PRESENTATIONS = (
    invariants.SeifertPresentation("o", 0, -1, ((2, 1), (3, 1), (5, 1))),
    invariants.SeifertPresentation("o", 0, -1, ((2, 1), (3, 1), (7, 1))),
    invariants.SeifertPresentation("o", 0, 0, ((2, 1), (3, 2), (5, 3))),
    invariants.SeifertPresentation("o", 1, -2, ((2, 1), (3, 1))),
    invariants.SeifertPresentation("o", 0, 1, ((3, 1), (4, 1), (5, 2))),
    invariants.SeifertPresentation("n", 2, -1, ((2, 1), (3, 1))),
    invariants.SeifertPresentation("o", 0, -2, ((2, 1), (5, 2))),
)


def random_sl2(rng, bound=10, nonzero_c=True):
    """Uniformly drawn |a|, |c| <= bound with a completion whose entries stay within bound."""
    while True:
        a, c = rng.randint(-bound, bound), rng.randint(-bound, bound)
        if (nonzero_c and c == 0) or gcd(a, c) != 1:
            continue
        sols = [(b, d) for b in range(-bound, bound + 1) for d in range(-bound, bound + 1) if a * d - b * c == 1]
        if sols:
            b, d = rng.choice(sols)
            return SL2Matrix(a, b, c, d)


def rep_grid(families=(("A", 1), ("A", 2)), kappa_max=6, samples=30, seed=SEED):
    """(closed vs word, unitarity, (Xi Theta)^3 = Xi^2) maxima over the grid."""
    rng = random.Random(seed)
    closed = unitary = relation = 0.0
    for fam, rank in families:
        alg = lie.build_algebra(fam, rank)
        for kappa in range(alg.dual_coxeter, kappa_max + 1):
            ctx = make_context(alg, kappa)
            n = len(ctx.index_set)
            xi = rep_xi(ctx).entries
            th = rep_theta_diag(ctx).entries
            lhs = np.linalg.matrix_power(xi @ th, 3)
            relation = max(relation, np.max(np.abs(lhs - xi @ xi)))
            for _ in range(samples):
                U = random_sl2(rng)
                word = rep_matrix_word(ctx, U).entries
                cf = rep_matrix_closed(ctx, U).entries
                closed = max(closed, np.max(np.abs(cf - word)))
                unitary = max(unitary, np.max(np.abs(cf @ cf.conj().T - np.eye(n))))
    return {"rep_closed_vs_word": closed, "rep_unitarity": unitary, "rep_relation": relation}


def gauss_grid(families=(("A", 1), ("A", 2), ("B", 2)), r_max=6, f_max=4):
    worst, count = 0.0, 0
    for fam, rank in families:
        alg = lie.build_algebra(fam, rank)
        for r in range(1, r_max + 1):
            for n in [s * k for k in range(1, f_max + 1) for s in (1, -1)]:
                for psi in gauss.admissible_psi(alg, r, n):
                    worst = max(worst, gauss.reciprocity_residual(gauss.GaussInstance(alg, r, n, psi)))
                    count += 1
    return {"gauss_reciprocity": worst, "gauss_instances": count}


def lens_four_way(families=(("A", 1), ("A", 2)), kappa_max=6, p_max=12, threads=1):
    def one(job):
        fam, rank, kappa = job
        ctx = make_context(lie.build_algebra(fam, rank), kappa)
        worst = 0.0
        for p in range(-p_max, p_max + 1):
            for q in range(-p_max, p_max + 1):
                if gcd(p, q) != 1:
                    continue
                base = invariants.tau_lens(ctx, p, q).value
                vals = [
                    invariants.tau_lens_rep(ctx, p, q).value,
                    invariants.tau_seifert_general(ctx, invariants.lens_as_seifert(p, q)).value,
                ]
                if p != 0 and gcd(ctx.r, p) == 1:
                    vals.append(invariants.tau_lens_coprime(ctx, p, q).value)
                worst = max([worst] + [abs(v - base) for v in vals])
        return worst

    jobs = []
    for fam, rank in families:
        alg = lie.build_algebra(fam, rank)
        jobs += [(fam, rank, k) for k in range(alg.dual_coxeter, kappa_max + 1)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return {"lens_four_way": max(pool.map(one, jobs))}


def seifert_agreement(families=(("A", 1), ("A", 2)), kappa_max=6, presentations=COPRIME_PRESENTATIONS):
    coprime = compact = 0.0
    for fam, rank in families:
        alg = lie.build_algebra(fam, rank)
        for kappa in range(alg.dual_coxeter, kappa_max + 1):
            ctx = make_context(alg, kappa)
            for M in presentations:
                ref = invariants.tau_seifert_general(ctx, M).value
                coprime = max(coprime, abs(invariants.tau_seifert_coprime(ctx, M).value - ref))
                compact = max(compact, abs(invariants.tau_seifert_compact(ctx, M).value - ref))
    return {"seifert_coprime_vs_general": coprime, "seifert_compact_vs_general": compact}


def homeomorphism_grid(families=(("A", 1), ("A", 2)), kappa_max=6, p_max=12):
    worst = 0.0
    for fam, rank in families:
        alg = lie.build_algebra(fam, rank)
        for kappa in range(alg.dual_coxeter, kappa_max + 1):
            ctx = make_context(alg, kappa)
            for p in range(2, p_max + 1):
                for sp in (p, -p):
                    for q in range(1, p):
                        if gcd(p, q) != 1:
                            continue
                        qq = pow(q, -1, p)
                        a = invariants.tau_lens(ctx, sp, q).value
                        worst = max(worst, abs(a - invariants.tau_lens(ctx, sp, qq).value))
                        # q -> q + p gives the same space
                        worst = max(worst, abs(a - invariants.tau_lens(ctx, sp, q + p).value))
    return {"lens_homeomorphism": worst}


def resum_grid(families=(("A", 1), ("A", 2)), kappa_max=8, p_max=8):
    worst = 0.0
    for fam, rank in families:
        alg = lie.build_algebra(fam, rank)
        for kappa in range(alg.dual_coxeter, kappa_max + 1):
            ctx = make_context(alg, kappa)
            for p in range(-p_max, p_max + 1):
                if p == 0:
                    continue
                for q in range(-p_max, p_max + 1):
                    if q != 0 and gcd(p, q) == 1:
                        worst = max(worst, asymptotics.resum_check(ctx, p, q))
    return {"asymptotic_resummation": worst}


def anchors():
    """S^1 x S^2, S^3 and the two Dedekind symbols, as residuals."""
    from .modular import dedekind_symbol

    worst = 0.0
    for fam, rank in (("A", 1), ("A", 2), ("B", 2), ("G", 2)):
        alg = lie.build_algebra(fam, rank)
        for kappa in range(alg.dual_coxeter, alg.dual_coxeter + 3):
            ctx = make_context(alg, kappa)
            worst = max(worst, abs(invariants.tau_lens(ctx, 0, 1).value - 1))
            D = invariants.tqft_constants(ctx).rank_D
            worst = max(worst, abs(invariants.tau_lens_rep(ctx, 1, 1).value - 1 / D))
    exact = dedekind_symbol(9, 64) == dedekind_symbol(25, 64) == Fraction(-63, 32)
    return {"exact_anchors": worst if exact else float("inf")}


def run_grid(quick=False, threads=1):
    """Every agreement check; quick mode trims the level and p ranges."""
    k6, p12, k8, p8 = (4, 6, 5, 5) if quick else (6, 12, 8, 8)
    report = {}
    report.update(rep_grid(kappa_max=k6, samples=10 if quick else 30))
    g = gauss_grid(r_max=3 if quick else 6)
    g.pop("gauss_instances")
    report.update(g)
    report.update(lens_four_way(kappa_max=k6, p_max=p12, threads=threads))
    report.update(seifert_agreement(kappa_max=k6))
    report.update(homeomorphism_grid(kappa_max=k6, p_max=p12))
    report.update(resum_grid(kappa_max=k8, p_max=p8))
    report.update(anchors())
    return report
