"""Complex exponentials and sines of rational multiples of pi.

Every phase in the invariant formulas has the form exp(pi*i*x) with x
rational.  The argument is reduced modulo 2 in exact arithmetic before
any floating point is involved, so long sums do not drift.
"""

from fractions import Fraction
import cmath
import math

import numpy as np


def expi_pi(x):
    """exp(pi*i*x) for a rational (or integer) x."""
    x = Fraction(x)
    num = x.numerator % (2 * x.denominator)
    return cmath.exp(1j * math.pi * num / x.denominator)


def sin_pi(x):
    """sin(pi*x) for a rational x, exactly zero at integers."""
    x = Fraction(x)
    num = x.numerator % (2 * x.denominator)
    if num % x.denominator == 0:
        return 0.0
    return math.sin(math.pi * num / x.denominator)


def expi_pi_array(num, den):
    """exp(pi*i*num/den) elementwise for integer arrays num and a positive integer den."""
    if den <= 0:
        raise ValueError("denominator must be positive")
    red = np.mod(np.asarray(num, dtype=np.int64), 2 * den)
    return np.exp(1j * np.pi * red / den)


def sin_pi_array(num, den):
    """sin(pi*num/den) elementwise, with exact zeros where num/den is an integer."""
    if den <= 0:
        raise ValueError("denominator must be positive")
    red = np.mod(np.asarray(num, dtype=np.int64), 2 * den)
    out = np.sin(np.pi * red / den)
    out[red % den == 0] = 0.0
    return out


def sign(x):
    return (x > 0) - (x < 0)
