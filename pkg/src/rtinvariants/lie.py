"""Root systems, the weight and coroot lattices and their Weyl groups.

Everything is built from the Cartan matrix.  The Cartan matrix is stored
as ``cartan[i][j] = <alpha_i^vee, alpha_j>``, so the simple root alpha_j
has fundamental-weight coordinates given by column j.  Inner products are
normalized so that long roots have squared length 2.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import factorial, gcd, lcm, prod, sqrt

import numpy as np
import sympy

from .errors import InvalidInput, PreconditionError

WEIGHT = "weight"
COROOT = "coroot"

# E6 is the largest Weyl group we are willing to list element by element.
WEYL_GROUP_LIMIT = 51840


@dataclass(frozen=True)
class LatticeVector:
    """Integer coordinates in the fundamental-weight basis or the simple-coroot basis."""

    coords: tuple
    basis: str = WEIGHT

    def __post_init__(self):
        if self.basis not in (WEIGHT, COROOT):
            raise InvalidInput(f"unknown basis tag {self.basis!r}")
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    def __len__(self):
        return len(self.coords)


def weight(*coords):
    return LatticeVector(tuple(coords), WEIGHT)


def coroot(*coords):
    return LatticeVector(tuple(coords), COROOT)


@dataclass(frozen=True)
class WeylElement:
    matrix: tuple  # rows; acts on weight coordinates as column vectors
    det: int
    length: int

    def act(self, coords):
        return tuple(sum(m * c for m, c in zip(row, coords)) for row in self.matrix)


def _cartan_matrix(family, rank):
    """Cartan matrix in the convention cartan[i][j] = <alpha_i^vee, alpha_j> (Bourbaki numbering)."""
    n = rank
    c = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def bond(i, j):
        c[i][j] = c[j][i] = -1

    if family == "A":
        for i in range(n - 1):
            bond(i, i + 1)
    elif family in ("B", "C"):
        for i in range(n - 1):
            bond(i, i + 1)
        # B: alpha_n short, C: alpha_n long
        if family == "B":
            c[n - 1][n - 2] = -2
        else:
            c[n - 2][n - 1] = -2
    elif family == "D":
        for i in range(n - 2):
            bond(i, i + 1)
        bond(n - 3, n - 1)
    elif family == "E":
        bond(0, 2)
        bond(1, 3)
        for i in range(2, n - 1):
            bond(i, i + 1)
    elif family == "F":
        bond(0, 1)
        bond(1, 2)
        bond(2, 3)
        c[2][1] = -2
    elif family == "G":
        bond(0, 1)
        c[0][1] = -3  # alpha_1 short
    return c


def _check_type(family, rank):
    ok = {
        "A": rank >= 1,
        "B": rank >= 2,
        "C": rank >= 2,
        "D": rank >= 3,
        "E": rank in (6, 7, 8),
        "F": rank == 4,
        "G": rank == 2,
    }
    if not isinstance(rank, int) or family not in ok or not ok[family]:
        raise InvalidInput(f"{family}{rank} is not a simple Lie algebra type")


def weyl_group_order(family, rank):
    if family == "A":
        return factorial(rank + 1)
    if family in ("B", "C"):
        return 2**rank * factorial(rank)
    if family == "D":
        return 2 ** (rank - 1) * factorial(rank)
    return {("E", 6): 51840, ("E", 7): 2903040, ("E", 8): 696729600, ("F", 4): 1152, ("G", 2): 12}[
        (family, rank)
    ]


def _root_lengths(cartan):
    """Squared lengths of the simple roots, long roots normalized to 2."""
    n = len(cartan)
    d = [None] * n
    d[0] = Fraction(1)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if j != i and cartan[i][j] != 0 and d[j] is None:
                # <alpha_i, alpha_j> = cartan[i][j] d_i / 2 is symmetric
                d[j] = d[i] * Fraction(cartan[i][j], cartan[j][i])
                stack.append(j)
    top = max(d)
    return tuple(2 * x / top for x in d)


def _positive_roots(cartan):
    """Positive roots in simple-root coordinates, by height then lexicographically."""
    n = len(cartan)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    roots = set(simple)
    layer = list(simple)
    while layer:
        nxt = set()
        for beta in layer:
            for i in range(n):
                # alpha_i-string through beta: beta - q alpha_i, ..., beta + p alpha_i
                q = 0
                down = list(beta)
                while True:
                    down[i] -= 1
                    if tuple(down) in roots:
                        q += 1
                    else:
                        break
                pairing = sum(cartan[i][j] * beta[j] for j in range(n))
                if q - pairing > 0:
                    up = list(beta)
                    up[i] += 1
                    nxt.add(tuple(up))
        nxt -= roots
        roots |= nxt
        layer = sorted(nxt)
    return tuple(sorted(roots, key=lambda r: (sum(r), r)))


def _frac_matrix(rows):
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


@dataclass(frozen=True, eq=False)
class AlgebraData:
    """Root-system payload of a simple Lie algebra with exact rational inner products."""

    family: str
    rank: int
    cartan: tuple
    gram_weights: tuple
    gram_coroots: tuple
    lacing: int
    dual_coxeter: int
    dim_g: int
    positive_roots: tuple
    rho: LatticeVector
    theta: LatticeVector
    integer_D: int
    vol_coroot: float
    root_lengths: tuple = field(repr=False)
    positive_roots_simple: tuple = field(repr=False)

    @property
    def name(self):
        return f"{self.family}{self.rank}"

    @property
    def n_positive(self):
        return len(self.positive_roots)

    @property
    def weyl_order(self):
        return weyl_group_order(self.family, self.rank)

    # integer forms used by the vectorized sums: <x, y> = x @ gram_num @ y / gram_den
    @cached_property
    def gram_den(self):
        return lcm(*(x.denominator for row in self.gram_weights for x in row))

    @cached_property
    def gram_num(self):
        den = self.gram_den
        return _readonly(np.array([[int(x * den) for x in row] for row in self.gram_weights], dtype=np.int64))

    @cached_property
    def coroot_matrix(self):
        """Row i holds the weight coordinates of alpha_i^vee."""
        return _readonly(np.array(self.gram_coroots, dtype=np.int64))

    @cached_property
    def root_matrix(self):
        """Row k holds the weight coordinates of the k-th positive root."""
        return _readonly(np.array([a.coords for a in self.positive_roots], dtype=np.int64))

    @cached_property
    def rho_array(self):
        return _readonly(np.ones(self.rank, dtype=np.int64))

    @cached_property
    def rho_norm(self):
        """|rho|^2 as an exact rational."""
        return inner_product(self, self.rho, self.rho)

    @cached_property
    def root_pairing_num(self):
        """Integer matrix P with <lambda, alpha_k> = (lambda @ P)[k] / gram_den."""
        return _readonly(self.gram_num @ self.root_matrix.T)

    @cached_property
    def longest_element(self):
        """Matrix of w0 on weight coordinates, found by walking rho to -rho."""
        n = self.rank
        mat = np.eye(n, dtype=np.int64)
        vec = np.ones(n, dtype=np.int64)
        length = 0
        while True:
            pos = np.nonzero(vec > 0)[0]
            if len(pos) == 0:
                break
            s = _simple_reflection(self.cartan, int(pos[0]))
            vec = s @ vec
            mat = s @ mat
            length += 1
        assert length == self.n_positive
        return _readonly(mat)


def _readonly(a):
    a.setflags(write=False)
    return a


def _simple_reflection(cartan, i):
    """s_i(lambda) = lambda - <lambda, alpha_i^vee> alpha_i on weight coordinates."""
    n = len(cartan)
    s = np.eye(n, dtype=np.int64)
    for k in range(n):
        s[k, i] -= cartan[k][i]
    return s


_ALGEBRAS = {}


def build_algebra(family, rank):
    """Root-system data for the simple type family+rank, built from its Cartan matrix."""
    family = str(family).upper()
    _check_type(family, rank)
    key = (family, rank)
    if key in _ALGEBRAS:
        return _ALGEBRAS[key]

    cartan = _cartan_matrix(family, rank)
    lengths = _root_lengths(cartan)
    n = rank
    # <alpha_i^vee, alpha_j^vee> = 2 cartan[i][j] / d_j, an integer matrix
    gc = [[Fraction(2 * cartan[i][j]) / lengths[j] for j in range(n)] for i in range(n)]
    assert all(x.denominator == 1 for row in gc for x in row)
    gc_int = tuple(tuple(int(x) for x in row) for row in gc)
    gc_sym = sympy.Matrix(gc_int)
    inv = gc_sym.inv()
    gw = tuple(tuple(Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(n)) for i in range(n))
    det = int(gc_sym.det())

    roots_simple = _positive_roots(cartan)
    cart = np.array(cartan, dtype=np.int64)
    roots_weight = tuple(LatticeVector(tuple(int(x) for x in cart @ np.array(r)), WEIGHT) for r in roots_simple)
    theta_simple = roots_simple[-1]
    theta = roots_weight[-1]

    # <rho, theta> = sum_i theta_i d_i / 2 since <lambda_k, alpha_i> = d_i/2 delta_ki
    rho_theta = sum(Fraction(t) * lengths[i] / 2 for i, t in enumerate(theta_simple))
    assert rho_theta.denominator == 1
    h_dual = int(rho_theta) + 1

    den = lcm(*(x.denominator for row in gw for x in row))
    D = den if all((den * gw[i][i]) % 2 == 0 for i in range(n)) else 2 * den

    alg = AlgebraData(
        family=family,
        rank=rank,
        cartan=tuple(tuple(row) for row in cartan),
        gram_weights=gw,
        gram_coroots=gc_int,
        lacing=int(2 / min(lengths)),
        dual_coxeter=h_dual,
        dim_g=2 * len(roots_simple) + n,
        positive_roots=roots_weight,
        rho=LatticeVector((1,) * n, WEIGHT),
        theta=theta,
        integer_D=D,
        vol_coroot=sqrt(det),
        root_lengths=lengths,
        positive_roots_simple=roots_simple,
    )
    _ALGEBRAS[key] = alg
    return alg


def to_weight_coords(alg, x):
    """Weight-basis coordinates of a LatticeVector (coroots re-expressed exactly)."""
    if x.basis == WEIGHT:
        return x.coords
    return tuple(int(v) for v in np.array(x.coords, dtype=np.int64) @ alg.coroot_matrix)


def to_coroot_coords(alg, x):
    """Coordinates in the simple-coroot basis as rationals (integral iff x lies in Y^vee)."""
    if x.basis == COROOT:
        return tuple(Fraction(c) for c in x.coords)
    w = x.coords
    # coefficient of alpha_i^vee in lambda is <lambda, lambda_i>
    return tuple(sum(Fraction(w[j]) * alg.gram_weights[j][i] for j in range(alg.rank)) for i in range(alg.rank))


def in_coroot_lattice(alg, x):
    return all(c.denominator == 1 for c in to_coroot_coords(alg, x))


def inner_product(alg, x, y):
    """Exact <x, y> for lattice vectors in either basis."""
    if len(x) != alg.rank or len(y) != alg.rank:
        raise InvalidInput("vector length does not match the rank")
    if x.basis == COROOT and y.basis == COROOT:
        g = alg.gram_coroots
        return Fraction(sum(x.coords[i] * g[i][j] * y.coords[j] for i in range(alg.rank) for j in range(alg.rank)))
    if x.basis == COROOT:
        # <alpha_i^vee, lambda> is the i-th weight coordinate of lambda
        return Fraction(sum(a * b for a, b in zip(x.coords, to_weight_coords(alg, y))))
    if y.basis == COROOT:
        return inner_product(alg, y, x)
    g = alg.gram_weights
    return sum(
        (x.coords[i] * g[i][j] * y.coords[j] for i in range(alg.rank) for j in range(alg.rank)),
        Fraction(0),
    )


def rational_inner(alg, x, y):
    """<x, y> for rational weight-coordinate sequences."""
    g = alg.gram_weights
    n = alg.rank
    return sum((Fraction(x[i]) * g[i][j] * Fraction(y[j]) for i in range(n) for j in range(n)), Fraction(0))


_WEYL = {}


def weyl_group(alg):
    """All elements of W by breadth-first closure under simple reflections, ordered by length."""
    key = (alg.family, alg.rank)
    if key in _WEYL:
        return _WEYL[key]
    if alg.weyl_order > WEYL_GROUP_LIMIT:
        raise PreconditionError(
            f"Weyl group of {alg.name} has {alg.weyl_order} elements, above the limit {WEYL_GROUP_LIMIT}"
        )
    n = alg.rank
    gens = [_simple_reflection(alg.cartan, i) for i in range(n)]
    ident = np.eye(n, dtype=np.int64)
    seen = {ident.tobytes()}
    elements = [WeylElement(_as_rows(ident), 1, 0)]
    layer = [ident]
    length = 0
    while layer:
        length += 1
        nxt = []
        for w in layer:
            for s in gens:
                m = s @ w
                key_m = m.tobytes()
                if key_m not in seen:
                    seen.add(key_m)
                    nxt.append(m)
        nxt.sort(key=lambda m: tuple(m.ravel()))
        elements.extend(WeylElement(_as_rows(m), (-1) ** length, length) for m in nxt)
        layer = nxt
    assert len(elements) == alg.weyl_order
    result = tuple(elements)
    _WEYL[key] = result
    return result


def _as_rows(m):
    return tuple(tuple(int(x) for x in row) for row in m)


_WEYL_ARRAYS = {}


def weyl_arrays(alg):
    """(matrices, dets) stacked as numpy arrays for vectorized Weyl sums."""
    key = (alg.family, alg.rank)
    if key not in _WEYL_ARRAYS:
        group = weyl_group(alg)
        mats = _readonly(np.array([w.matrix for w in group], dtype=np.int64))
        dets = _readonly(np.array([w.det for w in group], dtype=np.int64))
        _WEYL_ARRAYS[key] = (mats, dets)
    return _WEYL_ARRAYS[key]


def dual_weight(alg, lam):
    """lambda* = -w0(lambda)."""
    coords = to_weight_coords(alg, lam)
    out = -(alg.longest_element @ np.array(coords, dtype=np.int64))
    return LatticeVector(tuple(int(x) for x in out), WEIGHT)


def comarks(alg):
    """<lambda_i, theta> for each fundamental weight."""
    t = alg.positive_roots_simple[-1]
    marks = [Fraction(t[i]) * alg.root_lengths[i] / 2 for i in range(alg.rank)]
    assert all(x.denominator == 1 for x in marks)
    return tuple(int(x) for x in marks)


def alcove_interior_weights(alg, kappa):
    """int(C_kappa) cap X: all c_i >= 1 and <lambda, theta> <= kappa - 1, lexicographic."""
    if kappa < alg.dual_coxeter:
        raise PreconditionError(f"level {kappa} is below the dual Coxeter number {alg.dual_coxeter} of {alg.name}")
    marks = comarks(alg)
    n = alg.rank
    out = []

    def rec(prefix, used):
        i = len(prefix)
        if i == n:
            out.append(LatticeVector(tuple(prefix), WEIGHT))
            return
        # leave room for coefficient 1 on every later coordinate
        rest = sum(marks[i + 1 :])
        c = 1
        while used + c * marks[i] + rest <= kappa - 1:
            rec(prefix + [c], used + c * marks[i])
            c += 1

    rec([], 0)
    return out


def coroot_coset_reps(alg, c):
    """Representatives sum n_i alpha_i^vee of Y^vee / c Y^vee with 0 <= n_i < |c|."""
    if c == 0:
        raise InvalidInput("Y^vee / 0 Y^vee is not finite")
    return [LatticeVector(t, COROOT) for t in product(range(abs(c)), repeat=alg.rank)]


def coset_grid(alg, c):
    """Weight coordinates of coroot_coset_reps(alg, c) as an integer array of shape (|c|^l, l)."""
    n = np.array(list(product(range(abs(c)), repeat=alg.rank)), dtype=np.int64).reshape(-1, alg.rank)
    return n @ alg.coroot_matrix


def root_pairings(alg, lam):
    """Exact <lambda, alpha> for every positive root alpha."""
    coords = to_weight_coords(alg, lam)
    den = alg.gram_den
    row = np.array(coords, dtype=np.int64) @ alg.root_pairing_num
    return tuple(Fraction(int(v), den) for v in row)


def on_wall(alg, kappa, lam):
    """True iff <lambda, alpha> lies in kappa*Z for some positive root alpha."""
    return any((x / kappa).denominator == 1 for x in root_pairings(alg, lam))


def reduce_to_alcove(alg, kappa, lam):
    """Write lambda = w(mu) + kappa*x with mu in int(C_kappa), x in Y^vee.

    Returns (mu, det(w)), or None when lambda lies on a wall.  Walks by
    simple reflections and the affine reflection in the wall <., theta> = kappa.
    """
    vec = np.array(to_weight_coords(alg, lam), dtype=np.int64)
    theta = np.array(alg.theta.coords, dtype=np.int64)
    marks = np.array(comarks(alg), dtype=np.int64)
    sgn = 1
    while True:
        neg = np.nonzero(vec < 0)[0]
        if len(neg):
            vec = _simple_reflection(alg.cartan, int(neg[0])) @ vec
            sgn = -sgn
            continue
        level = int(vec @ marks)  # <vec, theta>, theta is long so theta^vee = theta
        if level > kappa:
            # s_0(x) = x - (<x, theta> - kappa) theta
            vec = vec - (level - kappa) * theta
            sgn = -sgn
            continue
        break
    if np.any(vec == 0) or int(vec @ marks) == kappa:
        return None
    return LatticeVector(tuple(int(x) for x in vec), WEIGHT), sgn


def reduce_to_alcove_batch(alg, kappa, lams):
    """Vectorized reduce_to_alcove for the rows of an integer weight array.

    Returns (reduced rows, det(w) per row, on-wall mask); rows on a wall keep
    whatever partial reduction they reached and should be ignored.
    """
    x = np.array(lams, dtype=np.int64).reshape(-1, alg.rank).copy()
    sgn = np.ones(len(x), dtype=np.int64)
    cartan = np.array(alg.cartan, dtype=np.int64)
    theta = np.array(alg.theta.coords, dtype=np.int64)
    marks = np.array(comarks(alg), dtype=np.int64)
    while True:
        changed = False
        for i in range(alg.rank):
            m = x[:, i] < 0
            if m.any():
                x[m] -= x[m, i][:, None] * cartan[:, i][None, :]
                sgn[m] = -sgn[m]
                changed = True
        level = x @ marks
        m = level > kappa
        if m.any():
            x[m] -= (level[m] - kappa)[:, None] * theta[None, :]
            sgn[m] = -sgn[m]
            changed = True
        if not changed:
            break
    wall = np.any(x == 0, axis=1) | (x @ marks == kappa)
    return x, sgn, wall


def coroot_classes(alg):
    """Fractional coroot coordinates of representatives of X / Y^vee, sorted."""
    n = alg.rank
    det = round(alg.vol_coroot**2)
    seen = set()
    for w in product(range(det), repeat=n):
        frac = tuple(c - (c.numerator // c.denominator) for c in to_coroot_coords(alg, LatticeVector(w)))
        seen.add(frac)
    assert len(seen) == det
    return sorted(seen)


def box_weights(alg, size):
    """Weights with every coroot coordinate in [0, size), i.e. P_size cap X, in weight coordinates."""
    classes = coroot_classes(alg)
    gc = alg.coroot_matrix
    pts = []
    base = np.array(list(product(range(size), repeat=alg.rank)), dtype=np.int64).reshape(-1, alg.rank)
    for frac in classes:
        # frac @ gram_coroots is integral because frac comes from an integral weight
        shift = [sum(f * row[k] for f, row in zip(frac, alg.gram_coroots)) for k in range(alg.rank)]
        assert all(v.denominator == 1 for v in shift)
        shift = np.array([int(v) for v in shift], dtype=np.int64)
        pts.append(base @ gc + shift)
    out = np.concatenate(pts, axis=0)
    order = np.lexsort(out.T[::-1])
    return out[order]


def is_integer_D(alg, D):
    """D<mu, xi> in Z and D<mu, mu> in 2Z on X (checked on the basis)."""
    g = alg.gram_weights
    n = alg.rank
    return all((D * g[i][j]).denominator == 1 for i in range(n) for j in range(n)) and all(
        (D * g[i][i]) % 2 == 0 for i in range(n)
    )


__all__ = [
    "LatticeVector",
    "WeylElement",
    "AlgebraData",
    "build_algebra",
    "inner_product",
    "weyl_group",
    "dual_weight",
    "alcove_interior_weights",
    "coroot_coset_reps",
    "on_wall",
    "weight",
    "coroot",
]
