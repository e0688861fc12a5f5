"""Large-level structure of lens space invariants.

The sine-product lens formula is rewritten with q replaced by its inverse
q* mod p (allowed since L(p,q) and L(p,q*) are homeomorphic and
S(q/p) = S(q*/p)).  Expanding each sine by angle addition splits the
nu-sum into strata M_j according to how many roots have <nu, alpha> in pZ.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import pi
from itertools import product

import numpy as np

from . import lie
from .errors import InvalidInput
from .invariants import LensSpace, tau_lens
from .modular import dedekind_symbol
from .phases import expi_pi, expi_pi_array, sign


@dataclass(frozen=True)
class Stratification:
    p: int
    levels: tuple  # levels[j] = coroot coordinates of the nu in M_j


@dataclass(frozen=True)
class CSValues:
    values: tuple  # sorted Fractions in [0, 1)
    sign_ambiguous: bool = True  # overall sign convention is not fixed


def _coset_pairings(alg, p):
    """(coroot coords, <nu, alpha> for positive roots) over Y^vee / pY^vee; both integer arrays."""
    coords = np.array(list(product(range(abs(p)), repeat=alg.rank)), dtype=np.int64).reshape(-1, alg.rank)
    nu = coords @ alg.coroot_matrix
    pairs = nu @ alg.root_pairing_num
    assert np.all(pairs % alg.gram_den == 0)
    return coords, nu, pairs // alg.gram_den


def partition_levels(alg, p):
    if p == 0:
        raise InvalidInput("p must be nonzero")
    coords, _, pairs = _coset_pairings(alg, p)
    count = np.sum(pairs % abs(p) == 0, axis=1)
    levels = tuple(tuple(tuple(int(x) for x in coords[i]) for i in np.nonzero(count == j)[0]) for j in range(alg.n_positive + 1))
    assert sum(len(m) for m in levels) == abs(p) ** alg.rank
    return Stratification(p, levels)


def _rho_root_pairings(alg):
    """<rho, alpha> for positive roots as Fractions."""
    return lie.root_pairings(alg, alg.rho)


def coefficient_b(alg, p, nu):
    """prod over divisible roots of (-1)^{<nu,alpha>/p} <rho, alpha>, times prod of sin(pi <nu, alpha>/p) over the rest."""
    vec = lie.LatticeVector(nu, lie.COROOT) if not isinstance(nu, lie.LatticeVector) else nu
    pairs = lie.root_pairings(alg, vec)
    out = 1.0
    for x, rho_a in zip(pairs, _rho_root_pairings(alg)):
        k = x / p
        if k.denominator == 1:
            out *= (-1) ** int(k) * float(rho_a)
        else:
            out *= np.sin(pi * float(x) / p)
    return out


def cs_values(alg, p, q):
    """{q* |nu|^2/(2p) mod 1 : nu in Y^vee / pY^vee}, exact."""
    LensSpace(p, q)
    if p == 0:
        raise InvalidInput("p must be nonzero")
    qs = pow(q, -1, abs(p)) if abs(p) > 1 else 0
    _, nu, _ = _coset_pairings(alg, p)
    norms = np.einsum("ki,ij,kj->k", nu, alg.gram_num, nu)
    vals = set()
    for n in norms:
        x = Fraction(int(n), alg.gram_den) * qs / (2 * p)
        vals.add(x - (x.numerator // x.denominator))
    return CSValues(tuple(sorted(vals)))


def _strata_terms(ctx, p, q):
    """Per-nu data for the q*-form of the sine-product lens formula."""
    alg, kappa = ctx.alg, ctx.kappa
    P = abs(p)
    qs = pow(q, -1, P) if P > 1 else 0
    coords, nu, pairs = _coset_pairings(alg, p)
    norms = np.einsum("ki,ij,kj->k", nu, alg.gram_num, nu)
    nu_rho = pairs.sum(axis=1) // 2  # <nu, rho> = (1/2) sum_alpha <nu, alpha>
    assert np.all(pairs.sum(axis=1) % 2 == 0)
    # exp(2 pi i kappa q*|nu|^2/(2p)) exp(2 pi i q* <nu, rho>/p), |nu|^2 = norms/gram_den
    s = sign(p)
    gauss = expi_pi_array(s * qs * kappa * norms, alg.gram_den * P)
    angle = expi_pi_array(s * 2 * qs * nu_rho, P)
    return pairs, gauss, angle


def _lens_pref(alg, kappa, p, q):
    mag = (kappa * abs(p)) ** (alg.rank / 2) * alg.vol_coroot
    return (2 * sign(p)) ** alg.n_positive / mag


def resum_check(ctx, p, q):
    """|tau_lens - sum over strata of the angle-addition terms|.

    With x = pi <rho, alpha>/(p kappa) and y = pi <nu, alpha>/p each sine
    factor is sin(x + y).  When y = k pi it equals (-1)^k <rho, alpha> (pi/(p kappa)) sin(x)/x,
    otherwise sin(y) (cos x + sin x cot y).  Collecting gives the nu-term
    (pi/(p kappa))^j b_nu F_nu(kappa).
    """
    LensSpace(p, q)
    if p == 0:
        raise InvalidInput("p must be nonzero")
    alg, kappa = ctx.alg, ctx.kappa
    pairs, gauss, angle = _strata_terms(ctx, p, q)
    phase = gauss * angle
    rho_a = np.array([float(x) for x in _rho_root_pairings(alg)])
    x = pi * rho_a / (p * kappa)
    total = 0j
    strat = np.sum(pairs % abs(p) == 0, axis=1)
    for i in range(len(pairs)):
        divisible = pairs[i] % abs(p) == 0
        y = pi * pairs[i] / p
        j = int(strat[i])
        b_nu = np.prod(np.where(divisible, (-1.0) ** (pairs[i] // p) * rho_a, np.sin(y)))
        with np.errstate(divide="ignore", invalid="ignore"):
            tail = np.where(divisible, np.sin(x) / x, np.cos(x) + np.sin(x) * np.cos(y) / np.sin(y))
        total += (pi / (p * kappa)) ** j * b_nu * np.prod(tail) * phase[i]
    value = _lens_pref(alg, kappa, p, q) * expi_pi(dedekind_symbol(q, p) * alg.rho_norm / kappa) * total
    return abs(tau_lens(ctx, p, q).value - value)


def leading_term(alg, kappa, p, q):
    """Lowest nonempty stratum M_j at its kappa-order: (pi/(p kappa))^j b_nu times the nu-phase.

    That is M_0 whenever |p| > 1; for p = +-1 only nu = 0 remains, giving the S^3 shape.
    The angle phase is symmetrized under nu -> -nu, which flips b_nu by (-1)^{|Delta+| - j}.
    """
    LensSpace(p, q)
    if p == 0:
        raise InvalidInput("p must be nonzero")
    pairs, gauss, ang = _strata_terms(_LightContext(alg, kappa), p, q)
    P = abs(p)
    divisible = pairs % P == 0
    strat = divisible.sum(axis=1)
    j = int(strat.min())
    sym = (ang + (-1) ** (alg.n_positive - j) * np.conj(ang)) / 2
    rho_a = np.array([float(x) for x in _rho_root_pairings(alg)])
    total = 0j
    for i in np.nonzero(strat == j)[0]:
        b_nu = np.prod(np.where(divisible[i], (-1.0) ** (pairs[i] // p) * rho_a, np.sin(pi * pairs[i] / p)))
        total += b_nu * gauss[i] * sym[i]
    return _lens_pref(alg, kappa, p, q) * (pi / (p * kappa)) ** j * total


def leading_term_sl2(kappa, p, q):
    """i sign(p) sqrt(2/(|p| kappa)) sum_{n=1}^{|p|-1} e^{2 pi i kappa q* n^2/p} sin(2 pi q* n/p) sin(2 pi n/p)."""
    qs = pow(q, -1, abs(p)) if abs(p) > 1 else 0
    total = 0j
    for n in range(1, abs(p)):
        total += expi_pi(Fraction(2 * kappa * qs * n * n, p)) * np.sin(2 * pi * qs * n / p) * np.sin(2 * pi * n / p)
    return 1j * sign(p) * np.sqrt(2 / (abs(p) * kappa)) * total


class _LightContext:
    """Just alg and kappa; the strata sums never need the alcove index set."""

    def __init__(self, alg, kappa):
        self.alg = alg
        self.kappa = kappa
