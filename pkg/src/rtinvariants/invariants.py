"""Quantum invariants of Seifert fibered spaces and lens spaces.

Conventions frozen here and tested against each other:
  * L(p, q) is surgery on the unknot with coefficient -p/q.
  * The SL(2,Z) matrix attached to L(p, q) has first column (q, p).
  * For a Seifert presentation the matrix attached to the fiber
    (alpha, beta) has first column (-beta, alpha).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, prod
import time

import numpy as np

from . import lie
from .errors import CostGuardExceeded, InvalidInput, PreconditionError
from .modular import (
    SL2Matrix,
    THETA,
    XI,
    complete_column,
    dedekind_symbol,
    rademacher_phi,
    theta_power,
    _egcd,
)
from .phases import expi_pi, expi_pi_array, sign, sin_pi_array
from .sl2rep import RepContext, make_context, rep_entry, rep_entry_rho

DEFAULT_TERM_LIMIT = 10**9


@dataclass(frozen=True)
class SeifertPresentation:
    """(epsilon; g | b; (alpha_1, beta_1), ...) or, with normalized=False, {epsilon; g; (alpha_j, beta_j)}."""

    epsilon: str
    genus: int
    b: object
    fibers: tuple
    normalized: bool = True

    def __post_init__(self):
        object.__setattr__(self, "fibers", tuple((int(a), int(b)) for a, b in self.fibers))
        if self.epsilon not in ("o", "n"):
            raise InvalidInput("epsilon must be 'o' or 'n'")
        if not isinstance(self.genus, int) or self.genus < 0:
            raise InvalidInput("genus must be a nonnegative integer")
        if self.epsilon == "n" and self.genus == 0:
            raise InvalidInput("a non-orientable base needs genus g > 0")
        for a, b in self.fibers:
            if a <= 0:
                raise InvalidInput(f"fiber ({a}, {b}) needs alpha > 0")
            if gcd(a, b) != 1:
                raise InvalidInput(f"fiber ({a}, {b}) is not a coprime pair")
        if self.normalized:
            if not isinstance(self.b, int):
                raise InvalidInput("normalized presentations carry an integer b")
            for a, b in self.fibers:
                if not 0 < b < a:
                    raise InvalidInput(f"normalized fiber ({a}, {b}) needs 0 < beta < alpha")
        elif self.b is not None:
            raise InvalidInput("non-normalized presentations have no b")

    @property
    def a_eps(self):
        return 2 if self.epsilon == "o" else 1

    @property
    def b_value(self):
        return self.b if self.normalized else 0


@dataclass(frozen=True)
class LensSpace:
    p: int
    q: int

    def __post_init__(self):
        if gcd(self.p, self.q) != 1:
            raise InvalidInput(f"L({self.p}, {self.q}) needs gcd(p, q) = 1")


@dataclass
class InvariantResult:
    value: complex
    method: str
    kappa: int
    r: int
    term_count: int
    runtime: float
    algebra: str = ""
    details: dict = field(default_factory=dict)


@dataclass(frozen=True)
class TqftConstants:
    rank_D: float
    omega: complex
    delta_over_D: complex


def _context(ctx_or_alg, kappa=None):
    if isinstance(ctx_or_alg, RepContext):
        return ctx_or_alg
    return make_context(ctx_or_alg, kappa)


def _positive_sine_product(alg, kappa, lam_coords):
    """prod_{alpha > 0} sin(pi <lambda, alpha>/kappa) for the rows of lam_coords."""
    num = np.asarray(lam_coords, dtype=np.int64) @ alg.root_pairing_num
    return np.prod(sin_pi_array(num, alg.gram_den * kappa), axis=-1)


def _norm_num(alg, x):
    return np.einsum("...i,ij,...j->...", x, alg.gram_num, x)


def omega_power(alg, kappa, x):
    """omega^x := exp(pi i x |rho|^2/h^vee - pi i x |rho|^2/kappa) for rational x."""
    return expi_pi(Fraction(x) * alg.rho_norm * (Fraction(1, alg.dual_coxeter) - Fraction(1, kappa)))


def tqft_constants(ctx):
    alg, kappa = ctx.alg, ctx.kappa
    if kappa < alg.dual_coxeter:
        raise PreconditionError("level below the dual Coxeter number")
    # vol(Y^vee)/vol(X) under the square root is vol(Y^vee)^2
    sines = float(_positive_sine_product(alg, kappa, alg.rho_array[None, :])[0]) * 2**alg.n_positive
    rank_D = kappa ** (alg.rank / 2) * alg.vol_coroot / sines
    omega = omega_power(alg, kappa, 1)
    return TqftConstants(rank_D, omega, omega_power(alg, kappa, -3))


def quantum_dimension(ctx, lam):
    """dim(lambda) = D R(Xi)_{lambda rho}."""
    alg, kappa = ctx.alg, ctx.kappa
    coords = np.array(lie.to_weight_coords(alg, lam), dtype=np.int64)
    sines = float(_positive_sine_product(alg, kappa, coords[None, :])[0]) * 2**alg.n_positive
    return tqft_constants(ctx).rank_D * sines / (kappa ** (alg.rank / 2) * alg.vol_coroot)


def seifert_euler(M):
    """E = -(b + sum beta_j/alpha_j), with b absent in the non-normalized form."""
    return -(Fraction(M.b_value) + sum((Fraction(b, a) for a, b in M.fibers), Fraction(0)))


def _b_eps_weights(ctx, M, indicator, lams=None):
    """b_lambda * eps_lambda^{a g} on the index set (or on arbitrary weights via alcove reduction)."""
    alg, kappa = ctx.alg, ctx.kappa
    exponent = M.a_eps * M.genus
    if lams is None:
        lams = ctx.index_set
    if M.epsilon == "n" and exponent % 2 == 1:
        if indicator is None:
            raise PreconditionError(
                "odd genus over a non-orientable base needs a Frobenius-Schur indicator table for the self-dual weights"
            )
        bad = {k: v for k, v in indicator.items() if v not in (1, -1)}
        if bad:
            raise InvalidInput(f"indicator values must be +-1, got {bad}")
    if isinstance(lams, np.ndarray):
        arr = lams
    else:
        arr = np.array([lie.to_weight_coords(alg, v) for v in lams], dtype=np.int64).reshape(-1, alg.rank)
    base, det, wall = lie.reduce_to_alcove_batch(alg, kappa, arr)
    out = np.where(wall, 0, det**exponent).astype(float)
    if M.epsilon == "o":
        return out
    dual = -(base @ alg.longest_element.T)
    self_dual = np.all(dual == base, axis=1)
    out[~self_dual] = 0
    if exponent % 2 == 1:
        for i in np.nonzero(self_dual & ~wall)[0]:
            key = tuple(int(x) for x in base[i])
            if key not in indicator:
                raise PreconditionError(f"indicator table has no entry for the self-dual weight {key}")
            out[i] *= indicator[key]
    return out


def _seifert_prefactor(ctx, M, extra_n, weyl_order=1):
    """Common prefactor of the general and the coprime formulas (without the i^{n|Delta+|} / 2-power parts)."""
    alg, kappa = ctx.alg, ctx.kappa
    a, g = M.a_eps, M.genus
    E = seifert_euler(M)
    sE = sign(E)
    S = sum((dedekind_symbol(b, al) for al, b in M.fibers), Fraction(0))
    A = prod(al for al, _ in M.fibers)
    rho2 = alg.rho_norm
    ph = expi_pi((3 * (a - 1) * sE - E - S) * rho2 / kappa) * expi_pi(3 * (1 - a) * sE * rho2 / alg.dual_coxeter)
    l = alg.rank
    mag = kappa ** (l * (a * g / 2 - 1)) / (2 ** (alg.n_positive * extra_n) * alg.vol_coroot ** (2 - a * g) * weyl_order)
    return ph * mag * A ** (-l / 2)


def general_term_estimate(ctx, M):
    alg = ctx.alg
    return len(ctx.index_set) * alg.weyl_order ** len(M.fibers) * prod(al**alg.rank for al, _ in M.fibers)


def tau_seifert_general(ctx, M, indicator=None, max_terms=DEFAULT_TERM_LIMIT, bstar_offsets=None):
    """Nested lambda / Weyl / coset sum for an arbitrary Seifert presentation.

    The sum over (w_j, nu_j) factorizes fiber by fiber once lambda is fixed,
    so it is evaluated as a product of per-fiber sums.  beta_j* is taken in
    0..alpha_j-1, shifted by bstar_offsets[j] * alpha_j when given.
    """
    t0 = time.perf_counter()
    alg, kappa = ctx.alg, ctx.kappa
    estimate = general_term_estimate(ctx, M)
    if estimate > max_terms:
        raise CostGuardExceeded(f"about {estimate:.3g} terms exceed the limit {max_terms:.3g}", estimate)
    n, a, g = len(M.fibers), M.a_eps, M.genus
    E = seifert_euler(M)
    lam = ctx.index_array
    den = alg.gram_den * kappa
    weights = _b_eps_weights(ctx, M, indicator)
    sines = _positive_sine_product(alg, kappa, lam)
    E_phase = expi_pi_array(E.numerator * _norm_num(alg, lam), E.denominator * den)
    summand = weights * sines ** (2 - n - a * g) * E_phase
    if n:
        mats, dets = lie.weyl_arrays(alg)
        wrho = mats @ alg.rho_array  # (W, l)
        G = alg.gram_num
        offsets = bstar_offsets or (0,) * n
        for (al, be), off in zip(M.fibers, offsets):
            bstar = (pow(be, -1, al) if al > 1 else 0) + off * al
            nu = lie.coset_grid(alg, al)  # (V, l)
            nu_norm = _norm_num(alg, nu)  # (V,)
            wrho_nu = wrho @ G @ nu.T  # (W, V)
            lam_nu = lam @ G @ nu.T  # (I, V)
            lam_wrho = lam @ G @ wrho.T  # (I, W)
            # -beta*/alpha (kappa|nu|^2 + 2<w rho, nu>) - 2<lambda, kappa nu + w rho>/(kappa alpha)
            num = (-bstar * kappa * (kappa * nu_norm[None, :] + 2 * wrho_nu))[None, :, :] - 2 * (
                kappa * lam_nu[:, None, :] + lam_wrho[:, :, None]
            )
            fiber = np.einsum("iwv,w->i", expi_pi_array(num, den * al), dets.astype(float))
            summand = summand * fiber
    Z = summand.sum()
    value = (1j ** (n * alg.n_positive)) * _seifert_prefactor(ctx, M, n + a * g - 2) * Z
    return InvariantResult(value, "seifert-general", kappa, ctx.r, estimate, time.perf_counter() - t0, alg.name)


def fiber_matrix(alpha, beta, shift=0):
    """An SL(2,Z) matrix with first column (-beta, alpha), right-multiplied by Theta^shift."""
    return complete_column(-beta, alpha) @ theta_power(shift)


def tau_seifert_compact(ctx, M, indicator=None, completions=None):
    """gamma * sum_lambda b eps exp(-pi i b|lambda|^2/kappa) R(Xi)_{lambda rho}^{2-n-ag} prod R(N_i)_{lambda rho}."""
    t0 = time.perf_counter()
    alg, kappa = ctx.alg, ctx.kappa
    n, a, g = len(M.fibers), M.a_eps, M.genus
    b = M.b_value
    if completions is None:
        completions = [fiber_matrix(al, be) for al, be in M.fibers]
    for N, (al, be) in zip(completions, M.fibers):
        if (N.a, N.c) != (-be, al):
            raise InvalidInput(f"completion {N.rows()} does not have first column ({-be}, {al})")
    E = seifert_euler(M)
    sE = sign(E)
    phi = sum((rademacher_phi(N) for N in completions), Fraction(0))
    rho2 = alg.rho_norm
    gamma = expi_pi((3 * (1 - a) * sE + phi) * rho2 / alg.dual_coxeter) * expi_pi(
        (3 * (a - 1) * sE + b - phi) * rho2 / kappa
    )
    weights = _b_eps_weights(ctx, M, indicator)
    lam = ctx.index_array
    b_phase = expi_pi_array(-b * _norm_num(alg, lam), alg.gram_den * kappa)
    total = 0j
    for i, vec in enumerate(ctx.index_set):
        if weights[i] == 0:
            continue
        xi_entry = rep_entry_rho(ctx, XI, vec)
        assert abs(xi_entry) > 1e-300, "R(Xi)_{lambda rho} vanishes only on walls"
        term = weights[i] * b_phase[i] * xi_entry ** (2 - n - a * g)
        for N in completions:
            term *= rep_entry_rho(ctx, N, vec)
        total += term
    terms = len(ctx.index_set) * (1 + sum(al**alg.rank for al, _ in M.fibers))
    return InvariantResult(gamma * total, "seifert-compact", kappa, ctx.r, terms, time.perf_counter() - t0, alg.name)


def enumerate_J(ctx, A):
    """Weights of the kappa*A coroot box P_{kappa A} cap X that are off the walls H^kappa."""
    if A < 1:
        raise InvalidInput("A must be a positive integer")
    return [lie.LatticeVector(tuple(int(x) for x in row)) for row in _J_array(ctx, A)]


def _J_array(ctx, A):
    alg, kappa = ctx.alg, ctx.kappa
    box = lie.box_weights(alg, kappa * A)
    pair = box @ alg.root_pairing_num
    off = np.all(pair % (alg.gram_den * kappa) != 0, axis=1)
    return box[off]


def tau_seifert_coprime(ctx, M, indicator=None):
    """Sum over J for pairwise coprime alpha_j; no Weyl group enumeration needed."""
    t0 = time.perf_counter()
    alg, kappa = ctx.alg, ctx.kappa
    alphas = [al for al, _ in M.fibers]
    for i in range(len(alphas)):
        for j in range(i + 1, len(alphas)):
            if gcd(alphas[i], alphas[j]) != 1:
                raise PreconditionError(f"alpha values {alphas[i]} and {alphas[j]} are not coprime")
    n, a, g = len(M.fibers), M.a_eps, M.genus
    E = seifert_euler(M)
    A = prod(alphas)
    lam = _J_array(ctx, A)
    den = alg.gram_den * kappa
    weights = _b_eps_weights(ctx, M, indicator, lam)
    summand = weights * _positive_sine_product(alg, kappa, lam) ** (2 - n - a * g)
    summand = summand * expi_pi_array(E.numerator * _norm_num(alg, lam), E.denominator * den)
    pair = lam @ alg.root_pairing_num
    for al in alphas:
        summand = summand * np.prod(sin_pi_array(pair, den * al), axis=1)
    value = _seifert_prefactor(ctx, M, a * g - 2, alg.weyl_order) * summand.sum()
    return InvariantResult(value, "seifert-coprime", kappa, ctx.r, len(lam), time.perf_counter() - t0, alg.name)


def _lens_trivial(ctx, p, q, method, t0):
    if p == 0:
        return InvariantResult(1 + 0j, method, ctx.kappa, ctx.r, 1, time.perf_counter() - t0, ctx.alg.name)
    return InvariantResult(
        1 / tqft_constants(ctx).rank_D + 0j, method, ctx.kappa, ctx.r, 1, time.perf_counter() - t0, ctx.alg.name
    )


def _lens_prefactor(alg, kappa, p, q, two_sine):
    base = (2 * sign(p)) if two_sine else (1j * sign(p))
    mag = (kappa * abs(p)) ** (alg.rank / 2) * alg.vol_coroot
    return base**alg.n_positive / mag * expi_pi(dedekind_symbol(q, p) * alg.rho_norm / kappa)


def lens_weyl_form(ctx, p, q):
    """Weyl-sum form: sum_w det w exp(-2 pi i <rho, w rho>/(p kappa)) sum_nu exp(pi i q kappa|nu|^2/p) exp(2 pi i <nu, q rho - w rho>/p)."""
    alg, kappa = ctx.alg, ctx.kappa
    mats, dets = lie.weyl_arrays(alg)
    G = alg.gram_num
    rho = alg.rho_array
    nu = lie.coset_grid(alg, p)
    nu_norm = _norm_num(alg, nu)
    nu_rho = nu @ G @ rho
    base = q * kappa * kappa * nu_norm + 2 * kappa * q * nu_rho
    den = alg.gram_den * abs(p) * kappa
    s = sign(p)
    total = 0j
    for w, det in zip(mats, dets):
        wr = w @ rho
        num = base - 2 * kappa * (nu @ G @ wr) - 2 * int(rho @ G @ wr)
        total += det * expi_pi_array(s * num, den).sum()
    return _lens_prefactor(alg, kappa, p, q, False) * total


def lens_sine_form(ctx, p, q):
    """Sine form: sum_nu exp(pi i q kappa|nu|^2/p) exp(2 pi i q <nu, rho>/p) prod sin(pi <rho + kappa nu, alpha>/(p kappa))."""
    alg, kappa = ctx.alg, ctx.kappa
    G = alg.gram_num
    nu = lie.coset_grid(alg, p)
    num = q * kappa * kappa * _norm_num(alg, nu) + 2 * kappa * q * (nu @ G @ alg.rho_array)
    den = alg.gram_den * abs(p) * kappa
    s = sign(p)
    x = alg.rho_array[None, :] + kappa * nu
    sines = np.prod(sin_pi_array(s * (x @ alg.root_pairing_num), den), axis=1)
    return _lens_prefactor(alg, kappa, p, q, True) * (expi_pi_array(s * num, den) * sines).sum()


def tau_lens(ctx, p, q):
    t0 = time.perf_counter()
    LensSpace(p, q)
    if p == 0 or abs(p) == 1:
        return _lens_trivial(ctx, p, q, "lens", t0)
    sine = lens_sine_form(ctx, p, q)
    weyl = lens_weyl_form(ctx, p, q)
    gap = abs(sine - weyl)
    res = InvariantResult(sine, "lens", ctx.kappa, ctx.r, abs(p) ** ctx.alg.rank, time.perf_counter() - t0, ctx.alg.name)
    res.details["weyl_form_residual"] = gap
    return res


def lens_completion(p, q, shift=0):
    """U in SL(2,Z) with first column (q, p), times Theta^shift."""
    return complete_column(q, p) @ theta_power(shift)


def tau_lens_rep(ctx, p, q, completion=None):
    """omega^{Phi(U)} R(U)_{rho rho} for U with first column (q, p)."""
    t0 = time.perf_counter()
    LensSpace(p, q)
    U = lens_completion(p, q) if completion is None else completion
    if (U.a, U.c) != (q, p):
        raise InvalidInput(f"completion {U.rows()} does not have first column ({q}, {p})")
    alg = ctx.alg
    value = omega_power(alg, ctx.kappa, rademacher_phi(U)) * rep_entry(ctx, U, alg.rho, alg.rho)
    terms = abs(p) ** alg.rank * alg.weyl_order if p else 1
    return InvariantResult(value, "lens-rep", ctx.kappa, ctx.r, terms, time.perf_counter() - t0, alg.name)


def lens_coprime_data(ctx, p, q):
    """(c, exponent of the global phase in units of pi*i) for the coprime lens formula."""
    alg, r = ctx.alg, ctx.r
    two_m_rho = 2 * alg.lacing * alg.rho_norm
    assert two_m_rho.denominator == 1
    two_m_rho = int(two_m_rho)
    P = abs(p)
    if p % 2:
        c = pow(p, -1, 4 * r)
        k = pow(4, -1, P) * (q + pow(q, -1, P)) * pow(r, -1, P) if P > 1 else 0
        return c, Fraction(-2 * k * two_m_rho, p), 1
    # 4 p c + q r a = 1
    g, c, _ = _egcd(4 * p, q * r)
    c *= g
    k = (q + pow(q, -1, 4 * P)) * pow(r, -1, 4 * P)
    return c, Fraction(-2 * k * two_m_rho, 4 * p), 4


def tau_lens_coprime(ctx, p, q, form="sine"):
    """Closed form when r = m kappa is coprime to p (remaining Gauss sum over Y^vee/pY^vee only)."""
    t0 = time.perf_counter()
    LensSpace(p, q)
    alg, kappa = ctx.alg, ctx.kappa
    if p == 0:
        raise PreconditionError("p = 0 is S^1 x S^2; use tau_lens")
    if gcd(ctx.r, p) != 1:
        raise PreconditionError(f"gcd(r, p) = gcd({ctx.r}, {p}) != 1; use tau_lens instead")
    c, phase, mult = lens_coprime_data(ctx, p, q)
    nu = lie.coset_grid(alg, p)
    s = sign(p)
    gauss = expi_pi_array(s * q * kappa * _norm_num(alg, nu), alg.gram_den * abs(p)).sum()
    if form == "sine":
        rho_pairs = alg.rho_array @ alg.root_pairing_num
        weyl = np.prod(sin_pi_array(mult * c * rho_pairs, alg.gram_den * kappa))
        pref = _lens_prefactor(alg, kappa, p, q, True)
    elif form == "weyl":
        mats, dets = lie.weyl_arrays(alg)
        rr = (mats @ alg.rho_array) @ alg.gram_num @ alg.rho_array
        weyl = (dets * expi_pi_array(-2 * mult * c * rr, alg.gram_den * kappa)).sum()
        pref = _lens_prefactor(alg, kappa, p, q, False)
    else:
        raise InvalidInput(f"unknown form {form!r}")
    value = pref * expi_pi(phase) * weyl * gauss
    return InvariantResult(value, "lens-coprime", kappa, ctx.r, abs(p) ** alg.rank, time.perf_counter() - t0, alg.name)


def lens_as_seifert(p, q):
    """A presentation over S^2 with at most one exceptional fiber: (o; 0 | b; (alpha, beta)) = L(b alpha + beta, alpha)."""
    LensSpace(p, q)
    if q < 0:
        p, q = -p, -q
    if q == 0:
        # L(+-1, 0) is S^3 = L(1, 1)
        return SeifertPresentation("o", 0, 1, ())
    if q == 1:
        return SeifertPresentation("o", 0, p, ())
    beta = p % q
    return SeifertPresentation("o", 0, (p - beta) // q, ((q, beta),))


def two_fiber_lens(b, fiber1, fiber2):
    """(p, q) with (o; 0 | b; (alpha_1, beta_1), (alpha_2, beta_2)) homeomorphic to L(p, q)."""
    (a1, b1), (a2, b2) = fiber1, fiber2
    # a2 y - b2 x = 1
    g, y, x = _egcd(a2, -b2)
    y, x = y * g, x * g
    p = b * a1 * a2 + b1 * a2 + b2 * a1
    q = a1 * y + (b1 + b * a1) * x
    return p, q
