"""Upper half plane points, SL2 reduction, Hecke orbits, divisors, evaluation.

Points carry W-digit mpmath coordinates plus an optional exact CM quadratic
(a, b, c) with a tau^2 + b tau + c = 0, a > 0, gcd 1, b^2 - 4ac < 0.  Orbit
points are built unreduced (faithful to the coset definition); reduction
happens inside evaluation.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .errors import NonConvergent, PoleOnSupport, Unsupported
from .qseries import QSeries, as_mpc

CUSP_INF = "inf"
CUSP_ZERO = "zero"

_I = ((1, 0), (0, 1))


@dataclass(frozen=True)
class HPoint:
    """A point x + iy, y > 0, with optional exact CM data."""

    x: object
    y: object
    cm: tuple | None = None

    def __post_init__(self):
        if not (self.y > 0):
            raise ValueError("point must lie in the upper half plane")
        if self.cm is not None:
            a, b, c = self.cm
            if a <= 0 or math.gcd(math.gcd(abs(a), abs(b)), abs(c)) != 1:
                raise ValueError("CM triple must be primitive with a > 0")
            if b * b - 4 * a * c >= 0:
                raise ValueError("CM discriminant must be negative")

    @classmethod
    def make(cls, z, cm=None) -> "HPoint":
        zc = mp.mpc(z)
        return cls(zc.real, zc.imag, cm)

    @classmethod
    def from_quadratic(cls, a: int, b: int, c: int, dps: int | None = None) -> "HPoint":
        """Root (-b + sqrt(b^2-4ac)) / 2a in the upper half plane."""
        disc = b * b - 4 * a * c
        if disc >= 0:
            raise ValueError("discriminant must be negative")
        g = math.gcd(math.gcd(abs(a), abs(b)), abs(c))
        a, b, c = a // g, b // g, c // g
        if a < 0:
            a, b, c = -a, -b, -c
        with mp.workdps(dps or mp.mp.dps):
            x = mp.mpf(-b) / (2 * a)
            y = mp.sqrt(mp.mpf(4 * a * c - b * b)) / (2 * a)
        return cls(x, y, (a, b, c))

    def as_mpc(self):
        return mp.mpc(self.x, self.y)

    def discriminant(self):
        if self.cm is None:
            return None
        a, b, c = self.cm
        return b * b - 4 * a * c

    def __repr__(self):
        cm = f", cm={self.cm}" if self.cm else ""
        return f"HPoint({mp.nstr(mp.mpf(self.x), 12)} + {mp.nstr(mp.mpf(self.y), 12)}i{cm})"


_SURD = re.compile(
    r"^\(?(?P<p>[+-]?\d+(?:/\d+)?)?\s*(?P<sign>[+-])?\s*"
    r"(?:(?P<r>\d+(?:/\d+)?)\s*\*?\s*)?sqrt\(\s*-\s*(?P<d>\d+)\s*\)\)?"
    r"(?:\s*/\s*(?P<s>\d+))?$"
)


def parse_tau(text: str, dps: int | None = None) -> HPoint:
    """Parse 'x+yi' decimals, 'a/b + c/d*sqrt(-e)', or '(p + r*sqrt(-d))/s'."""
    s = text.strip().replace(" ", "")
    m = _SURD.match(s)
    if m:
        p = Fraction(m.group("p") or 0)
        r = Fraction(m.group("r") or 1)
        if m.group("sign") == "-":
            r = -r
        d = int(m.group("d"))
        if m.group("s"):
            div = Fraction(int(m.group("s")))
            p, r = p / div, r / div
        if r <= 0:
            raise ValueError("surd part must place the point in the upper half plane")
        # tau = p + r sqrt(-d): (tau - p)^2 = -r^2 d
        # => tau^2 - 2p tau + p^2 + r^2 d = 0, cleared to integers
        den = (p.denominator * r.denominator) ** 2 * 1
        aa = Fraction(1)
        bb = -2 * p
        cc = p * p + r * r * d
        lcm = _lcm3(aa.denominator, bb.denominator, cc.denominator)
        a, b, c = int(aa * lcm), int(bb * lcm), int(cc * lcm)
        return HPoint.from_quadratic(a, b, c, dps)
    # decimal form: x+yi / x-yi / yi / i
    s2 = s.replace("I", "i").replace("j", "i")
    if s2 == "i":
        return HPoint.make(mp.mpc(0, 1), cm=(1, 0, 1))
    mm = re.match(r"^(?P<x>[+-]?\d*\.?\d+(?:[eE][+-]?\d+)?)?"
                  r"(?P<y>[+-]?(?:\d*\.?\d+(?:[eE][+-]?\d+)?)?)i$", s2)
    if mm and mm.group("y") is not None:
        xs, ys = mm.group("x"), mm.group("y")
        if ys == "" and xs:
            xs, ys = None, xs           # bare '2i' style: the number is the y part
        with mp.workdps(dps or mp.mp.dps):
            x = mp.mpf(xs) if xs else mp.mpf(0)
            y = mp.mpf(1) if ys in ("", "+") else (mp.mpf(-1) if ys == "-" else mp.mpf(ys))
        return HPoint(x, y)
    raise ValueError(f"cannot parse point {text!r}")


def _lcm3(a, b, c):
    return math.lcm(a, b, c)


# -- SL2 reduction -------------------------------------------------------------


def _matmul(m1, m2):
    (a, b), (c, d) = m1
    (e, f), (g, h) = m2
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def apply_moebius(m, z):
    (a, b), (c, d) = m
    return (a * z + b) / (c * z + d)


def reduce_sl2(tau, max_iter: int = 10000):
    """Reduce into |x| <= 1/2, |z| >= 1 (x = +1/2 and the right arc excluded).

    Returns (HPoint, matrix) with matrix . input = output.  Ties are broken at
    scale 10^(5-dps) of the working precision.
    """
    z = tau.as_mpc() if isinstance(tau, HPoint) else mp.mpc(tau)
    cm = tau.cm if isinstance(tau, HPoint) else None
    tol = mp.mpf(10) ** (5 - mp.mp.dps)
    m = _I
    for _ in range(max_iter):
        n = mp.nint(z.real)
        if n != 0:
            z -= n
            ni = int(n)
            m = _matmul(((1, -ni), (0, 1)), m)
        r2 = z.real**2 + z.imag**2
        if r2 < 1 - tol:
            z = -1 / z
            m = _matmul(((0, -1), (1, 0)), m)
            continue
        # boundary conventions
        if z.real > mp.mpf("0.5") - tol:
            z -= 1
            m = _matmul(((1, -1), (0, 1)), m)
        if abs(r2 - 1) <= tol and z.real > tol:
            z = -1 / z
            m = _matmul(((0, -1), (1, 0)), m)
            continue
        break
    out_cm = transform_cm(cm, m) if cm else None
    return HPoint(z.real, z.imag, out_cm), m


def transform_cm(cm, m):
    """CM triple of (a z + b)/(c z + d) given the triple of z."""
    (a, b), (c, d) = m
    a0, b0, c0 = cm
    # z = (d w - b)/(-c w + a); substitute into a0 z^2 + b0 z + c0
    A = a0 * d * d - b0 * c * d + c0 * c * c
    B = -2 * a0 * b * d + b0 * (a * d + b * c) - 2 * c0 * a * c
    C = a0 * b * b - b0 * a * b + c0 * a * a
    g = math.gcd(math.gcd(abs(A), abs(B)), abs(C))
    if g:
        A, B, C = A // g, B // g, C // g
    if A < 0:
        A, B, C = -A, -B, -C
    if A == 0:
        return None
    return (A, B, C)


def elliptic_order(tau) -> int:
    """1, 2 or 3: order of the PSL2(Z) isotropy (2 at i, 3 at rho), within 10^(-dps/2)."""
    pt, _ = reduce_sl2(tau)
    tol = mp.mpf(10) ** (-mp.mp.dps // 2)
    z = pt.as_mpc()
    if abs(z - mp.mpc(0, 1)) < tol:
        return 2
    rho = mp.mpc(-1, 0) / 2 + mp.sqrt(mp.mpf(3)) / 2 * mp.mpc(0, 1)
    if abs(z - rho) < tol:
        return 3
    return 1


# -- Hecke orbits --------------------------------------------------------------


def hecke_orbit(m: int, tau: HPoint, N: int = 1):
    """The sigma_1(m) points (a tau + b)/d, ad = m, 0 <= b < d, in (a, b) order."""
    from .errors import NotCoprime

    if math.gcd(m, N) != 1:
        raise NotCoprime(f"gcd({m},{N}) != 1")
    z = tau.as_mpc()
    out = []
    for a in range(1, m + 1):
        if m % a:
            continue
        d = m // a
        for b in range(d):
            w = (a * z + b) / d
            cm = transform_cm(tau.cm, ((a, b), (0, d))) if tau.cm else None
            out.append(HPoint(w.real, w.imag, cm))
    return out


# -- divisors ------------------------------------------------------------------


@dataclass(frozen=True)
class Divisor:
    """Formal integer combination of HPoints and cusps ('inf'/'zero')."""

    terms: tuple
    level: int = 1

    @property
    def degree(self) -> int:
        return sum(mult for _, mult in self.terms)

    def __iter__(self):
        return iter(self.terms)

    @classmethod
    def of(cls, *pairs, level: int = 1) -> "Divisor":
        return cls(tuple((p, int(k)) for p, k in pairs), level)


def eval_divisor(f, D: Divisor):
    """f(D) = sum n_P f(P); PoleOnSupport propagates from the callable."""
    total = mp.mpc(0)
    for p, mult in D:
        total += mult * f(p)
    return total


# -- series evaluation ---------------------------------------------------------


def eval_qseries(F: QSeries, tau, reduce_first: bool = False, growth_guard=1.5):
    """Partial sum of F at tau with a tail estimate.

    Returns (value, tail_bound).  Raises NonConvergent when |q^(1/alpha)| >= 0.9;
    callers evaluating level-1 weight-0 invariants should pass reduce_first=True.
    """
    pt = tau if isinstance(tau, HPoint) else HPoint.make(tau)
    if reduce_first:
        pt, _ = reduce_sl2(pt)
    z = pt.as_mpc()
    qa = mp.exp(2j * mp.pi * z / F.alpha)
    aq = abs(qa)
    if aq >= mp.mpf("0.9"):
        raise NonConvergent(f"|q^(1/alpha)| = {mp.nstr(aq, 6)} at y = {mp.nstr(mp.mpf(pt.y), 6)}")
    acc = mp.mpc(0)
    for c in reversed(F.coeffs):
        acc = acc * qa + as_mpc(c)
    value = acc * qa**F.valuation
    last = abs(as_mpc(F.coeffs[-1])) * aq**F.order
    rho = aq * mp.mpf(growth_guard)
    if rho >= 1:
        rho = mp.mpf("0.999")
    tail = last * rho / (1 - rho)
    return value, tail


class SeriesFunction:
    """Callable wrapper: evaluate a level-1 expansion at points and orbit points.

    weight-0 level-1 series are reduced before evaluation, so the wrapper is
    usable on unreduced Hecke-orbit points.
    """

    def __init__(self, series: QSeries, weight: int = 0, level: int = 1):
        self.series = series
        self.weight = weight
        self.level = level

    def __call__(self, p):
        if isinstance(p, str):
            if self.series.valuation < 0:
                raise PoleOnSupport(f"series has a pole at the cusp {p}")
            return as_mpc(self.series.c(0))
        reduce_first = self.weight == 0 and self.level == 1
        if not reduce_first:
            raise Unsupported("pointwise slashing for nonzero weight is not provided here")
        value, _ = eval_qseries(self.series, p, reduce_first=True)
        return value
