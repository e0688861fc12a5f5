"""Both sides of the multi-dimensional Gauss sum reciprocity formula.

Lambda is the weight lattice X, its dual is the coroot lattice Y^vee and
f = n * identity.  The left side sums over X / rX, the right side over
Y^vee / nY^vee.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import sqrt

import numpy as np

from . import lie
from .errors import InvalidInput, PreconditionError
from .phases import expi_pi, expi_pi_array, sign


@dataclass(frozen=True, eq=False)
class GaussInstance:
    alg: lie.AlgebraData
    r: int
    f_scalar: int
    psi: tuple  # rational weight-basis coordinates
    checked: bool = True  # False evaluates both sides even when the integrality clauses fail

    def __post_init__(self):
        if not isinstance(self.r, int) or self.r <= 0:
            raise InvalidInput("r must be a positive integer")
        if not isinstance(self.f_scalar, int) or self.f_scalar == 0:
            raise InvalidInput("f must be a nonzero integer multiple of the identity")
        psi = tuple(Fraction(x) for x in self.psi)
        if len(psi) != self.alg.rank:
            raise InvalidInput("psi has the wrong length")
        object.__setattr__(self, "psi", psi)
        failed = assumption_failures(self.alg, self.r, self.f_scalar, psi)
        if failed and self.checked:
            raise PreconditionError("integrality assumptions fail: " + "; ".join(failed))


def assumption_failures(alg, r, n, psi):
    """List the violated integrality clauses (empty when the instance is admissible).

    The quadratic clauses are checked on a basis: (r/2)<x, f x> in Z on a
    lattice follows from (r/2) n <e_i, e_i> in Z and r n <e_i, e_j> in Z.
    """
    g = alg.gram_weights
    gc = alg.gram_coroots
    l = alg.rank
    out = []
    half = Fraction(r * n, 2)
    if not all((half * g[i][i]).denominator == 1 for i in range(l)) or not all(
        (r * n * g[i][j]).denominator == 1 for i in range(l) for j in range(l)
    ):
        out.append("(r/2)<lambda, f lambda> not integral on X")
    if not all((n * g[i][j]).denominator == 1 for i in range(l) for j in range(l)):
        out.append("<lambda, f eta> not integral on X")
    # r<lambda_i, psi> in Z: r psi lies in Y^vee
    pair_x = [sum((g[i][j] * psi[j] for j in range(l)), Fraction(0)) for i in range(l)]
    if not all((r * v).denominator == 1 for v in pair_x):
        out.append("r<lambda, psi> not integral on X")
    if not all((half * gc[i][i]).denominator == 1 for i in range(l)) or not all(
        (r * n * gc[i][j]).denominator == 1 for i in range(l) for j in range(l)
    ):
        out.append("(r/2)<mu, f mu> not integral on Y^vee")
    # <alpha_i^vee, psi> is the i-th weight coordinate of psi
    if not all((r * v).denominator == 1 for v in psi):
        out.append("r<mu, psi> not integral on Y^vee")
    return out


def is_admissible(alg, r, n, psi):
    return not assumption_failures(alg, r, n, tuple(Fraction(x) for x in psi))


def _psi_num(inst):
    """psi as an integer weight vector over a common denominator."""
    den = 1
    for x in inst.psi:
        den = den * x.denominator // np.gcd(den, x.denominator)
    return np.array([int(x * den) for x in inst.psi], dtype=np.int64), den


def gauss_lhs(inst):
    """vol(Y^vee) sum_{lambda in X/rX} exp(pi i n <lambda, lambda>/r) exp(2 pi i <lambda, psi>)."""
    alg, r, n = inst.alg, inst.r, inst.f_scalar
    lam = np.array(list(product(range(r), repeat=alg.rank)), dtype=np.int64).reshape(-1, alg.rank)
    pnum, pden = _psi_num(inst)
    g = alg.gram_num
    norms = np.einsum("ki,ij,kj->k", lam, g, lam)
    pairs = lam @ g @ pnum
    # common denominator gram_den * r * pden
    num = n * norms * pden + 2 * r * pairs
    return alg.vol_coroot * expi_pi_array(num, alg.gram_den * r * pden).sum()


def scalar_root_factor(n, l):
    """det(f/i)^{-1/2} for f = n * id: (|n|^{-1/2} exp(pi i sign(n)/4))^l on the principal branch."""
    return (abs(n) ** -0.5 * expi_pi(Fraction(sign(n), 4))) ** l


def gauss_rhs(inst):
    """det(f/i)^{-1/2} r^{l/2} sum_{mu in Y^vee/nY^vee} exp(-pi i r <mu+psi, mu+psi>/n)."""
    alg, r, n = inst.alg, inst.r, inst.f_scalar
    l = alg.rank
    mu = lie.coset_grid(alg, n)
    pnum, pden = _psi_num(inst)
    shifted = mu * pden + pnum  # pden * (mu + psi)
    norms = np.einsum("ki,ij,kj->k", shifted, alg.gram_num, shifted)
    den = alg.gram_den * pden * pden * abs(n)
    num = -r * norms * sign(n)
    return scalar_root_factor(n, l) * r ** (l / 2) * expi_pi_array(num, den).sum()


def reciprocity_residual(inst):
    return abs(gauss_lhs(inst) - gauss_rhs(inst))


def lhs_summand_num(inst, lam):
    """Exact exponent (units of pi*i) of the left summand at an integer weight vector."""
    lam = lie.LatticeVector(tuple(lam))
    psi = inst.psi
    return inst.f_scalar * lie.inner_product(inst.alg, lam, lam) / inst.r + 2 * lie.rational_inner(
        inst.alg, lam.coords, psi
    )


def admissible_psi(alg, r, n, max_steps=None):
    """Multiples t*rho (t = k/(2r), 0 <= t < 2) that pass the integrality checks."""
    steps = 4 * r if max_steps is None else max_steps
    out = []
    for k in range(steps):
        t = Fraction(k, 2 * r)
        psi = tuple(t for _ in range(alg.rank))
        if is_admissible(alg, r, n, psi):
            out.append(psi)
    return out
