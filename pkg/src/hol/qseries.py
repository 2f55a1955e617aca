"""Truncated Laurent series in q with exact-rational or W-digit complex coefficients.

A series stores coefficients for the exponents n/alpha with v <= n <= order;
exponents below the valuation v are exactly zero, exponents above the order
are unknown.  The order is part of the value: every arithmetic result carries
the minimum reliable order of its inputs, and silent precision loss is a bug.

The exponent denominator alpha houses the cusp width of an expansion, so a
width-11 cusp series lives on the q^(1/11) grid with integer numerators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath as mp

from .errors import EmptyWindow, NotAUnit

EXACT = "exact"
FLOAT = "float"


def _is_zero(c) -> bool:
    return c == 0


def as_mpc(c):
    """mpmath complex from Fraction / int / float / mpc at the current precision."""
    if isinstance(c, Fraction):
        return mp.mpc(mp.mpf(c.numerator) / c.denominator)
    return mp.mpc(c)


@dataclass(frozen=True)
class QSeries:
    """Immutable truncated Laurent series.

    valuation, order : window endpoints, in units of 1/alpha
    alpha            : positive exponent denominator
    coeffs           : tuple of length order - valuation + 1
    domain           : EXACT (Fraction) or FLOAT (mpmath mpc)
    prec             : decimal digits of float coefficients (0 for exact)
    """

    valuation: int
    order: int
    alpha: int
    coeffs: tuple
    domain: str = EXACT
    prec: int = 0

    def __post_init__(self):
        if self.alpha < 1:
            raise ValueError("alpha must be >= 1")
        if self.order < self.valuation:
            raise EmptyWindow(f"order {self.order} < valuation {self.valuation}")
        if len(self.coeffs) != self.order - self.valuation + 1:
            raise ValueError("coefficient count does not match the window")
        if self.domain == FLOAT and self.prec <= 0:
            raise ValueError("float series must record their precision")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_terms(cls, terms: dict, order: int, alpha: int = 1, domain: str = EXACT, prec: int = 0):
        """Series with given {exponent-numerator: coefficient} and trust window up to ``order``."""
        nz = [n for n, c in terms.items() if not _is_zero(c)]
        v = min(nz) if nz else 0
        if v > order:
            raise EmptyWindow("all terms beyond the requested order")
        zero = Fraction(0) if domain == EXACT else mp.mpc(0)
        coeffs = [zero] * (order - v + 1)
        for n, c in terms.items():
            if n < v or _is_zero(c):
                continue
            if n > order:
                raise ValueError(f"term q^{n}/{alpha} outside the order window")
            coeffs[n - v] = Fraction(c) if domain == EXACT else as_mpc(c)
        return cls(v, order, alpha, tuple(coeffs), domain, prec)

    @classmethod
    def zero(cls, order: int, alpha: int = 1, domain: str = EXACT, prec: int = 0):
        z = Fraction(0) if domain == EXACT else mp.mpc(0)
        return cls(0, order, alpha, tuple([z] * (order + 1)), domain, prec)

    @classmethod
    def one(cls, order: int, alpha: int = 1, domain: str = EXACT, prec: int = 0):
        return cls.from_terms({0: 1}, order, alpha, domain, prec)

    @classmethod
    def from_list(cls, valuation: int, coeffs: Sequence, alpha: int = 1,
                  domain: str = EXACT, prec: int = 0):
        conv = Fraction if domain == EXACT else as_mpc
        return cls(valuation, valuation + len(coeffs) - 1, alpha,
                   tuple(conv(c) for c in coeffs), domain, prec)

    # -- accessors ---------------------------------------------------------

    def c(self, n: int, alpha: int = 1):
        """Coefficient of q^(n/alpha); raises beyond the trust window."""
        num = n * self.alpha
        if num % alpha:
            # exponent off our grid: exactly zero if inside the window
            if Fraction(n, alpha) > Fraction(self.order, self.alpha):
                raise EmptyWindow(f"exponent {n}/{alpha} beyond order {self.order}/{self.alpha}")
            return Fraction(0) if self.domain == EXACT else mp.mpc(0)
        idx = num // alpha
        if idx > self.order:
            raise EmptyWindow(f"exponent {idx}/{self.alpha} beyond order {self.order}")
        if idx < self.valuation:
            return Fraction(0) if self.domain == EXACT else mp.mpc(0)
        return self.coeffs[idx - self.valuation]

    def support(self):
        """Sorted exponent numerators with nonzero stored coefficient."""
        return [self.valuation + i for i, c in enumerate(self.coeffs) if not _is_zero(c)]

    def is_zero(self) -> bool:
        return all(_is_zero(c) for c in self.coeffs)

    def terms(self):
        return {self.valuation + i: c for i, c in enumerate(self.coeffs) if not _is_zero(c)}

    # -- window bookkeeping --------------------------------------------------

    def normalized(self) -> "QSeries":
        """Trim exactly-zero leading coefficients (valuation rises, order fixed)."""
        i = 0
        while i < len(self.coeffs) - 1 and _is_zero(self.coeffs[i]):
            i += 1
        if i == 0:
            return self
        return QSeries(self.valuation + i, self.order, self.alpha,
                       self.coeffs[i:], self.domain, self.prec)

    def truncated(self, order: int) -> "QSeries":
        if order >= self.order:
            return self
        if order < self.valuation:
            raise EmptyWindow("truncation below the valuation")
        return QSeries(self.valuation, order, self.alpha,
                       self.coeffs[: order - self.valuation + 1], self.domain, self.prec)

    def rescaled(self, new_alpha: int) -> "QSeries":
        """Re-express on the finer 1/new_alpha grid (new_alpha a multiple of alpha)."""
        if new_alpha == self.alpha:
            return self
        if new_alpha % self.alpha:
            raise ValueError("new alpha must be a multiple of the current one")
        k = new_alpha // self.alpha
        zero = Fraction(0) if self.domain == EXACT else mp.mpc(0)
        coeffs = [zero] * ((self.order - self.valuation) * k + 1)
        for i, c in enumerate(self.coeffs):
            coeffs[i * k] = c
        return QSeries(self.valuation * k, self.order * k, new_alpha,
                       tuple(coeffs), self.domain, self.prec)

    def alpha_reduced(self, k: int) -> "QSeries":
        """Divide all exponents by k (k | alpha; support must lie on the k-grid)."""
        if self.alpha % k:
            raise ValueError("k must divide alpha")
        if any(n % k for n in self.support()):
            raise ValueError("support not divisible; cannot coarsen the grid")
        v = -((-self.valuation) // k)  # ceil
        m = self.order // k            # floor
        zero = Fraction(0) if self.domain == EXACT else mp.mpc(0)
        coeffs = [zero] * (m - v + 1)
        for n, c in self.terms().items():
            coeffs[n // k - v] = c
        return QSeries(v, m, self.alpha // k, tuple(coeffs), self.domain, self.prec)

    # -- arithmetic ----------------------------------------------------------

    def _promote_pair(self, other: "QSeries"):
        a, b = self, other
        if a.domain != b.domain:
            w = max(a.prec, b.prec)
            a = to_float(a, w) if a.domain == EXACT else a
            b = to_float(b, w) if b.domain == EXACT else b
        if a.alpha != b.alpha:
            al = _lcm(a.alpha, b.alpha)
            a, b = a.rescaled(al), b.rescaled(al)
        return a, b

    def __add__(self, other):
        if not isinstance(other, QSeries):
            return self._add_scalar(other)
        a, b = self._promote_pair(other)
        v = min(a.valuation, b.valuation)
        m = min(a.order, b.order)
        if m < v:
            raise EmptyWindow("windows do not overlap")
        zero = Fraction(0) if a.domain == EXACT else mp.mpc(0)
        coeffs = [zero] * (m - v + 1)
        for s in (a, b):
            for i, c in enumerate(s.coeffs):
                n = s.valuation + i
                if n > m:
                    break
                coeffs[n - v] += c
        prec = max(a.prec, b.prec)
        return QSeries(v, m, a.alpha, tuple(coeffs), a.domain, prec).normalized()

    def _add_scalar(self, x):
        if _is_zero(x) or self.order < 0:
            # a scalar lives at exponent 0; beyond a negative-order window it is unknown
            return self
        exact = self.domain == EXACT and isinstance(x, (int, Fraction))
        s = QSeries.from_terms({0: x}, self.order, self.alpha,
                               EXACT if exact else FLOAT,
                               0 if exact else (self.prec or mp.mp.dps))
        return self + s

    def __radd__(self, other):
        return self + other

    def __neg__(self):
        return QSeries(self.valuation, self.order, self.alpha,
                       tuple(-c for c in self.coeffs), self.domain, self.prec)

    def __sub__(self, other):
        if isinstance(other, QSeries):
            return self + (-other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return self.scaled(other)
        a, b = self._promote_pair(other)
        v = a.valuation + b.valuation
        m = min(a.order + b.valuation, b.order + a.valuation)
        if m < v:
            raise EmptyWindow("product window empty")
        zero = Fraction(0) if a.domain == EXACT else mp.mpc(0)
        coeffs = [zero] * (m - v + 1)
        for i, ca in enumerate(a.coeffs):
            if _is_zero(ca):
                continue
            na = a.valuation + i
            top = m - na - b.valuation
            for j, cb in enumerate(b.coeffs[: top + 1]):
                if _is_zero(cb):
                    continue
                coeffs[na + b.valuation + j - v] += ca * cb
        prec = max(a.prec, b.prec)
        return QSeries(v, m, a.alpha, tuple(coeffs), a.domain, prec).normalized()

    def __rmul__(self, other):
        return self * other

    def scaled(self, x) -> "QSeries":
        if self.domain == EXACT and isinstance(x, (int, Fraction)):
            return QSeries(self.valuation, self.order, self.alpha,
                           tuple(Fraction(x) * c for c in self.coeffs), EXACT, 0)
        xm = as_mpc(x)
        s = self if self.domain == FLOAT else to_float(self, mp.mp.dps)
        return QSeries(s.valuation, s.order, s.alpha,
                       tuple(xm * c for c in s.coeffs), FLOAT, s.prec)

    def window_equal(self, other: "QSeries", tol=0) -> bool:
        """Compare on the overlap of the trust windows."""
        a, b = self._promote_pair(other)
        m = min(a.order, b.order)
        v = min(a.valuation, b.valuation)
        for n in range(v, m + 1):
            ca, cb = a.c(n, a.alpha), b.c(n, b.alpha)
            if tol == 0:
                if ca != cb:
                    return False
            elif abs(as_mpc(ca) - as_mpc(cb)) > tol:
                return False
        return True


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


# -- spec operations ---------------------------------------------------------

def arith(a: QSeries, b: QSeries, op: str) -> QSeries:
    """Dispatch wrapper: op in {add, sub, mul, neg} (neg ignores b)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    raise ValueError(f"unknown op {op!r}")


def invert(a: QSeries) -> QSeries:
    """Multiplicative inverse within the window; valuation flips sign."""
    a = a.normalized()
    lead = a.coeffs[0]
    if _is_zero(lead):
        raise NotAUnit("leading coefficient is zero")
    L = a.order - a.valuation
    inv_lead = Fraction(1) / lead if a.domain == EXACT else mp.mpc(1) / lead
    out = [inv_lead]
    for k in range(1, L + 1):
        acc = 0
        for j in range(1, k + 1):
            cj = a.coeffs[j] if j < len(a.coeffs) else 0
            if _is_zero(cj):
                continue
            acc += cj * out[k - j]
        out.append(-inv_lead * acc)
    return QSeries(-a.valuation, -a.valuation + L, a.alpha, tuple(out),
                   a.domain, a.prec)


def power(a: QSeries, n: int) -> QSeries:
    """a**n by square-and-multiply; negative n through invert."""
    if n == 0:
        L = a.order - a.normalized().valuation
        return QSeries.one(L, a.alpha, a.domain, a.prec)
    if n < 0:
        return power(invert(a), -n)
    result = None
    base = a
    while n:
        if n & 1:
            result = base if result is None else result * base
        n >>= 1
        if n:
            base = base * base
    return result


def theta_derivative(a: QSeries) -> QSeries:
    """theta = q d/dq: coefficient at exponent n/alpha is multiplied by n/alpha."""
    if a.domain == EXACT:
        coeffs = tuple(c * Fraction(a.valuation + i, a.alpha)
                       for i, c in enumerate(a.coeffs))
    else:
        coeffs = tuple(c * mp.mpf(a.valuation + i) / a.alpha
                       for i, c in enumerate(a.coeffs))
    return QSeries(a.valuation, a.order, a.alpha, coeffs, a.domain, a.prec).normalized()


def to_float(a: QSeries, digits: int) -> QSeries:
    """Render an exact series at the given decimal precision."""
    with mp.workdps(digits + 5):
        coeffs = tuple(as_mpc(c) for c in a.coeffs)
    return QSeries(a.valuation, a.order, a.alpha, coeffs, FLOAT, digits)


def to_complex128(a: QSeries):
    """(coeffs ndarray, valuation, alpha) for the float64 quadrature kernels."""
    import numpy as np

    out = np.empty(len(a.coeffs), dtype=np.complex128)
    for i, c in enumerate(a.coeffs):
        out[i] = complex(c) if a.domain == EXACT else complex(mp.mpc(c))
    return out, a.valuation, a.alpha
