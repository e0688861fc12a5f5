"""SL(2,Z) words, negative continued fractions, Dedekind sums and Rademacher's Phi."""

from dataclasses import dataclass
from fractions import Fraction
from math import floor, gcd

from .errors import InvalidInput
from .phases import sign


@dataclass(frozen=True)
class SL2Matrix:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, int(getattr(self, name)))
        if self.a * self.d - self.b * self.c != 1:
            raise InvalidInput(f"determinant of {self.rows()} is not 1")

    def rows(self):
        return ((self.a, self.b), (self.c, self.d))

    def __matmul__(self, other):
        return SL2Matrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self):
        return SL2Matrix(-self.a, -self.b, -self.c, -self.d)

    def inverse(self):
        return SL2Matrix(self.d, -self.b, -self.c, self.a)

    def __pow__(self, n):
        base = self if n >= 0 else self.inverse()
        out = IDENTITY
        for _ in range(abs(n)):
            out = out @ base
        return out


IDENTITY = SL2Matrix(1, 0, 0, 1)
XI = SL2Matrix(0, -1, 1, 0)
THETA = SL2Matrix(1, 1, 0, 1)


def theta_power(n):
    return SL2Matrix(1, n, 0, 1)


def expansion_to_matrix(entries):
    """B^C = Theta^{m_t} Xi ... Theta^{m_1} Xi through the partial-quotient recurrences."""
    a, b, c, d = 1, 0, 0, 1
    for m in entries:
        a, b, c, d = m * a - c, m * b - d, a, b
    return SL2Matrix(a, b, c, d)


def partial_numerators(entries):
    """a_1, ..., a_t of the expansion."""
    out = []
    a, c = 1, 0
    for m in entries:
        a, c = m * a - c, a
        out.append(a)
    return out


def continued_fraction(p, q):
    """C with first column of B^C equal to +-(p, q), via p/q = m_t - 1/(m_{t-1} - ...).

    Uses the ceiling rule m = ceil(p/q) at every step.
    """
    if q == 0:
        raise InvalidInput("q = 0 has no continued fraction expansion; use the Xi Theta^n branch")
    if gcd(p, q) != 1:
        raise InvalidInput(f"gcd({p}, {q}) != 1")
    if q < 0:
        p, q = -p, -q
    tail = []
    while q != 1:
        m = -((-p) // q)
        tail.append(m)
        p, q = q, m * q - p
    tail.append(p)
    return tuple(reversed(tail))


def word_for(U):
    """An expansion C with B^C = U exactly (not only up to sign)."""
    if U == IDENTITY:
        return ()
    if U.c == 0:
        # Theta^n = -B^(0, n) and -1 = B^(0, 0)
        n = U.b * U.a
        return (0, n) if U.a == -1 else (0, 0, 0, n)
    head = continued_fraction(U.a, U.c)
    rest = expansion_to_matrix(head).inverse() @ U
    assert rest.c == 0
    full = word_for(rest) + head
    assert expansion_to_matrix(full) == U
    return full


@dataclass(frozen=True)
class Decomposition:
    """sign * U = V Theta^n with V = Xi (kind 'xi') or V = B^C with all a_k != 0 (kind 'word').

    kind 'parabolic' marks U = +-Theta^b, which has no such decomposition and is
    handled by the c = 0 formulas.
    """

    kind: str
    expansion: tuple
    n: int
    sign: int

    def v_matrix(self):
        return XI if self.kind == "xi" else expansion_to_matrix(self.expansion)


def decompose_nonvanishing(U):
    """Follow the constructive splitting: cut the word after the last vanishing a_i."""
    if U.c == 0:
        return Decomposition("parabolic", (), U.b * U.a, U.a)
    if U.a == 0:
        # U = [[0, -c], [c, d]] = c * Xi Theta^{c d}
        return Decomposition("xi", (), U.c * U.d, U.c)
    full = word_for(U)
    nums = partial_numerators(full)
    zeros = [i for i, a in enumerate(nums, start=1) if a == 0]
    if not zeros:
        return Decomposition("word", full, 0, 1)
    i = zeros[-1]
    t = len(full)
    assert i < t - 1
    head = expansion_to_matrix(full[:i])  # = eps * Xi Theta^j with a_i = 0
    eps = head.c
    j = head.d * head.c
    n = full[i] + j  # m_{i+1} + j
    rest = full[i + 1 :]  # (m_{i+2}, ..., m_t)
    dec = Decomposition("word", rest, n, -eps)
    assert all(a != 0 for a in partial_numerators(rest))
    assert dec.v_matrix() @ theta_power(n) == (U if dec.sign == 1 else -U)
    return dec


def sawtooth(x):
    """((x)) = x - floor(x) - 1/2 off the integers, 0 on them."""
    x = Fraction(x)
    if x.denominator == 1:
        return Fraction(0)
    return x - floor(x) - Fraction(1, 2)


def dedekind_sum(d, c):
    """s(d, c) = sum_{j=1}^{|c|-1} ((j/c)) ((d j/c)), exact."""
    if c == 0:
        raise InvalidInput("Dedekind sum needs c != 0")
    if gcd(d, c) != 1:
        raise InvalidInput(f"gcd({d}, {c}) != 1")
    n = abs(c)
    # ((x)) is odd, so the two sign flips for c < 0 cancel
    total = Fraction(0)
    for j in range(1, n):
        r = (d * j) % n
        if r:
            total += (Fraction(j, n) - Fraction(1, 2)) * (Fraction(r, n) - Fraction(1, 2))
    return total


def dedekind_sum_cot(d, c):
    """Floating-point cotangent form (1/4|c|) sum cot(pi j/c) cot(pi d j/c)."""
    import math

    total = 0.0
    for j in range(1, abs(c)):
        total += 1 / math.tan(math.pi * j / c) / math.tan(math.pi * d * j / c)
    return total / (4 * abs(c))


def dedekind_symbol(a, b):
    """S(a/b) = 12 sign(b) s(a, b)."""
    if a == 0 and abs(b) != 1:
        raise InvalidInput("Dedekind symbol needs gcd(a, b) = 1")
    return 12 * sign(b) * dedekind_sum(a, b)


def rademacher_phi(U):
    """Phi(U) = (a+d)/c - 12 sign(c) s(d, c) for c != 0, and b/d for c = 0."""
    if U.c == 0:
        return Fraction(U.b, U.d)
    return Fraction(U.a + U.d, U.c) - 12 * sign(U.c) * dedekind_sum(U.d, U.c)


def complete_column(top, bottom):
    """Some U in SL(2,Z) whose first column is (top, bottom)."""
    if gcd(top, bottom) != 1:
        raise InvalidInput(f"gcd({top}, {bottom}) != 1")
    # top*d - b*bottom = 1
    g, x, y = _egcd(top, bottom)
    d, b = x * g, -y * g
    return SL2Matrix(top, b, bottom, d)


def _egcd(a, b):
    """(g, x, y) with a x + b y = g and g = +-1 for coprime input."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0
