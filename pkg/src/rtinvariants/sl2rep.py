"""The level-kappa representation R of SL(2,Z) on the alcove index set.

All exponents are rational multiples of pi*i.  Inner products are carried
as integer numerators over ``alg.gram_den`` so the phases can be reduced
exactly before exponentiation.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import sqrt

import numpy as np

from . import lie
from .errors import InvalidInput, PreconditionError
from .lie import LatticeVector, WEIGHT
from .modular import SL2Matrix, expansion_to_matrix, rademacher_phi
from .phases import expi_pi, expi_pi_array, sign, sin_pi_array

MATRIX_SIZE_LIMIT = 20000


@dataclass(frozen=True, eq=False)
class RepContext:
    alg: lie.AlgebraData
    kappa: int
    index_set: tuple
    r: int

    @cached_property
    def index_array(self):
        a = np.array([v.coords for v in self.index_set], dtype=np.int64).reshape(-1, self.alg.rank)
        a.setflags(write=False)
        return a

    @cached_property
    def position(self):
        return {v.coords: i for i, v in enumerate(self.index_set)}

    @cached_property
    def dual_permutation(self):
        """perm[i] = index of the dual of the i-th weight."""
        return np.array([self.position[lie.dual_weight(self.alg, v).coords] for v in self.index_set])


def make_context(alg, kappa):
    index = tuple(lie.alcove_interior_weights(alg, kappa))
    return RepContext(alg, kappa, index, alg.lacing * kappa)


@dataclass(frozen=True, eq=False)
class RepMatrix:
    entries: np.ndarray
    label: object


def _norms(alg, x):
    """Integer numerators of |x|^2 for the rows of x."""
    return np.einsum("...i,ij,...j->...", x, alg.gram_num, x)


def _pairs(alg, x, y):
    """Integer numerators of <x_i, y_j> as a matrix."""
    return x @ alg.gram_num @ y.T


def _weights(v, alg):
    return np.array(lie.to_weight_coords(alg, v), dtype=np.int64)


def rep_xi(ctx):
    """R(Xi)_{lambda mu} = i^{|Delta+|} kappa^{-l/2} vol(Y^vee)^{-1} sum_w det(w) exp(-2 pi i <w lambda, mu>/kappa)."""
    alg, kappa = ctx.alg, ctx.kappa
    mats, dets = lie.weyl_arrays(alg)
    lam = ctx.index_array
    wl = np.einsum("wij,nj->wni", mats, lam)
    num = -2 * np.einsum("wni,ij,mj->wnm", wl, alg.gram_num, lam)
    total = np.tensordot(dets.astype(float), expi_pi_array(num, alg.gram_den * kappa), axes=1)
    pref = 1j**alg.n_positive / (kappa ** (alg.rank / 2) * alg.vol_coroot)
    return RepMatrix(pref * total, "Xi")


def theta_phase(ctx, lam_norm, power=1):
    """Exponent (in units of pi*i) of R(Theta)^power at a weight with |lambda|^2 = lam_norm."""
    alg = ctx.alg
    return power * (Fraction(lam_norm) / ctx.kappa - alg.rho_norm / alg.dual_coxeter)


def rep_theta_diag(ctx, power=1):
    """Diagonal matrix exp(power * (pi i |lambda|^2/kappa - pi i |rho|^2/h^vee))."""
    alg = ctx.alg
    norms = _norms(alg, ctx.index_array)
    diag = [expi_pi(theta_phase(ctx, Fraction(int(n), alg.gram_den), power)) for n in norms]
    return RepMatrix(np.diag(np.array(diag, dtype=complex)), ("Theta", power))


def rep_word(ctx, entries):
    """R(Theta)^{m_t} R(Xi) ... R(Theta)^{m_1} R(Xi) as a dense matrix."""
    size = len(ctx.index_set)
    if size > MATRIX_SIZE_LIMIT:
        raise PreconditionError(f"index set has {size} elements, above the matrix limit {MATRIX_SIZE_LIMIT}")
    xi = rep_xi(ctx).entries
    out = np.eye(size, dtype=complex)
    for m in entries:
        th = np.diag(rep_theta_diag(ctx, m).entries)
        out = th[:, None] * (xi @ out)
    return RepMatrix(out, tuple(entries))


def _prefactor(alg, kappa, U, two_sine=False):
    """(i sign c)^{|Delta+|} (or (2 sign c)^{|Delta+|}) / ((kappa|c|)^{l/2} vol) * exp(-pi i Phi(U)|rho|^2/h^vee)."""
    s = sign(U.c)
    base = (2 * s) ** alg.n_positive if two_sine else (1j * s) ** alg.n_positive
    mag = (kappa * abs(U.c)) ** (alg.rank / 2) * alg.vol_coroot
    return base / mag * expi_pi(-rademacher_phi(U) * alg.rho_norm / alg.dual_coxeter)


def _signed(num, den):
    """Normalize a (numerator array, integer denominator) pair to a positive denominator."""
    return (num, den) if den > 0 else (-num, -den)


def _parabolic_entry(ctx, U, lam, mu):
    alg = ctx.alg
    red_l = lie.reduce_to_alcove(alg, ctx.kappa, lam)
    red_m = lie.reduce_to_alcove(alg, ctx.kappa, mu)
    if red_l is None or red_m is None:
        return 0j
    (lb, sl), (mb, sm) = red_l, red_m
    # U = eps Theta^n; -1 acts as lambda -> lambda*
    eps, n = U.a, U.b * U.a
    target = lb if eps == 1 else lie.dual_weight(alg, lb)
    if target.coords != mb.coords:
        return 0j
    return sl * sm * expi_pi(theta_phase(ctx, lie.inner_product(alg, mb, mb), n))


def rep_entry(ctx, U, lam, mu, method="dc"):
    """Single entry R(U)_{lambda mu} for lambda, mu in X.

    method selects the closed form for c != 0:
      "dc"  sum over lambda + kappa nu, d/c phase on mu (the primary path)
      "ba"  completed-square form with b/a phase on mu (needs a != 0)
      "ac"  transposed form through unitarity, a/c phase on lambda
      "bd"  completed-square transposed form with b/d phase on lambda (needs d != 0)
    """
    if not isinstance(U, SL2Matrix):
        U = SL2Matrix(*U)
    if U.c == 0:
        return _parabolic_entry(ctx, U, lam, mu)
    alg, kappa = ctx.alg, ctx.kappa
    a, b, c, d = U.a, U.b, U.c, U.d
    mats, dets = lie.weyl_arrays(alg)
    lam_w, mu_w = _weights(lam, alg), _weights(mu, alg)
    grid = lie.coset_grid(alg, c)
    den = alg.gram_den * kappa
    if method == "dc":
        x = lam_w + kappa * grid
        wmu = mats @ mu_w
        num = (d * int(_norms(alg, mu_w)) + a * _norms(alg, x))[:, None] - 2 * _pairs(alg, x, wmu)
        num, dd = _signed(num, den * c)
    elif method == "ac":
        y = mu_w + kappa * grid
        wlam = mats @ lam_w
        num = (a * int(_norms(alg, lam_w)) + d * _norms(alg, y))[:, None] - 2 * _pairs(alg, y, wlam)
        num, dd = _signed(num, den * c)
    elif method == "ba":
        if a == 0:
            raise PreconditionError("the b/a form needs a != 0")
        x = a * (lam_w + kappa * grid)
        wmu = mats @ mu_w
        diff = x[:, None, :] - wmu[None, :, :]
        num = b * c * int(_norms(alg, mu_w)) + _norms(alg, diff)
        num, dd = _signed(num, den * a * c)
    elif method == "bd":
        if d == 0:
            raise PreconditionError("the b/d form needs d != 0")
        y = d * (mu_w + kappa * grid)
        wlam = mats @ lam_w
        diff = y[:, None, :] - wlam[None, :, :]
        num = b * c * int(_norms(alg, lam_w)) + _norms(alg, diff)
        num, dd = _signed(num, den * d * c)
    else:
        raise InvalidInput(f"unknown method {method!r}")
    total = (expi_pi_array(num, dd) @ dets.astype(float)).sum()
    return _prefactor(alg, kappa, U) * total


def rep_entry_rho(ctx, U, lam, side="row"):
    """R(U)_{lambda rho} (side="row") or R(U)_{rho lambda} (side="column") in sine-product form."""
    if not isinstance(U, SL2Matrix):
        U = SL2Matrix(*U)
    if U.c == 0:
        raise PreconditionError("the sine-product form needs c != 0; use rep_entry")
    alg, kappa = ctx.alg, ctx.kappa
    a, c, d = U.a, U.c, U.d
    if side == "column":
        a, d = d, a
    elif side != "row":
        raise InvalidInput(f"side must be 'row' or 'column', not {side!r}")
    den = alg.gram_den * kappa
    x = _weights(lam, alg) + kappa * lie.coset_grid(alg, c)
    # exp(pi i (d/c)|rho|^2/kappa) exp(pi i (a/c)|x|^2/kappa)
    rho_part = expi_pi(Fraction(d, c) * alg.rho_norm / kappa)
    num, dd = _signed(a * _norms(alg, x), den * c)
    snum, sden = _signed(x @ alg.root_pairing_num, den * c)
    terms = expi_pi_array(num, dd) * np.prod(sin_pi_array(snum, sden), axis=1)
    return _prefactor(alg, kappa, U, two_sine=True) * rho_part * terms.sum()


def rep_matrix_closed(ctx, U, method="dc"):
    """R(U) over the index set, entry by entry from the closed forms."""
    n = len(ctx.index_set)
    out = np.empty((n, n), dtype=complex)
    for i, lam in enumerate(ctx.index_set):
        for j, mu in enumerate(ctx.index_set):
            out[i, j] = rep_entry(ctx, U, lam, mu, method)
    return RepMatrix(out, U)


def rep_matrix_word(ctx, U):
    """R(U) from the generator product of an exact expansion of U."""
    from .modular import word_for

    return rep_word(ctx, word_for(U))
