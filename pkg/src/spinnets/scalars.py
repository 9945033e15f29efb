"""Scalar backends for network evaluation.

Two evaluation modes are supported:

* classical (q = 1): exact arithmetic.  Recoupling coefficients live in
  real quadratic extensions of Q (a 6j symbol is a rational multiple of
  the square root of a rational), so plain :class:`~fractions.Fraction`
  is not enough.  :class:`Surd` stores finite Q-linear combinations of
  square roots of squarefree integers, which is closed under the ring
  operations the evaluator needs.
* numeric, q = exp(i*pi*t) on the unit circle with t rational: ordinary
  complex floating point.

Mixing values from different modes is an error; the two value types
(:class:`Surd` vs ``complex``/``float``) never interoperate silently.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational


def _split_square(n: int) -> tuple[int, int]:
    """Return (s, r) with n = s*s*r and r squarefree.  n must be >= 1."""
    s, r = 1, 1
    d = 2
    while d * d <= n:
        while n % (d * d) == 0:
            n //= d * d
            s *= d
        if n % d == 0:
            n //= d
            r *= d
        d += 1
    return s, r * n


class Surd:
    """Exact element of the ring Q[sqrt(r1), sqrt(r2), ...].

    Stored as a mapping {squarefree radicand -> rational coefficient};
    the represented value is sum(coeff * sqrt(radicand)).  Radicand 1 is
    the rational part.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: dict[int, Fraction] | None = None):
        self._terms = {r: c for r, c in (terms or {}).items() if c != 0}

    @staticmethod
    def from_rational(x) -> "Surd":
        f = Fraction(x)
        return Surd({1: f}) if f else Surd()

    @staticmethod
    def sqrt_rational(x) -> "Surd":
        """Exact square root of a non-negative rational."""
        f = Fraction(x)
        if f < 0:
            raise ValueError("classical-mode square roots must be of non-negative rationals")
        if f == 0:
            return Surd()
        s_n, r_n = _split_square(f.numerator)
        s_d, r_d = _split_square(f.denominator)
        # sqrt(n/d) = (s_n / (s_d * r_d)) * sqrt(r_n * r_d)
        coeff = Fraction(s_n, s_d * r_d)
        return Surd({r_n * r_d: coeff})

    def _coerce(self, other) -> "Surd":
        if isinstance(other, Surd):
            return other
        if isinstance(other, Rational):
            return Surd.from_rational(other)
        raise TypeError(
            f"cannot mix classical Surd arithmetic with {type(other).__name__}"
        )

    def __add__(self, other):
        o = self._coerce(other)
        out = dict(self._terms)
        for r, c in o._terms.items():
            out[r] = out.get(r, Fraction(0)) + c
        return Surd(out)

    __radd__ = __add__

    def __neg__(self):
        return Surd({r: -c for r, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        out: dict[int, Fraction] = {}
        for r1, c1 in self._terms.items():
            for r2, c2 in o._terms.items():
                g = math.gcd(r1, r2)
                # sqrt(r1)*sqrt(r2) = g * sqrt((r1/g)*(r2/g))
                rad = (r1 // g) * (r2 // g)
                coeff = c1 * c2 * g
                out[rad] = out.get(rad, Fraction(0)) + coeff
        return Surd(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Rational):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return Surd({r: c / Fraction(other) for r, c in self._terms.items()})
        o = self._coerce(other)
        if o.is_rational():
            return self / o.as_fraction()
        raise TypeError("classical division is only supported by rational values")

    def is_rational(self) -> bool:
        return all(r == 1 for r in self._terms)

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self._terms.get(1, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __float__(self):
        return float(sum(float(c) * math.sqrt(r) for r, c in self._terms.items()))

    def __repr__(self):
        if not self._terms:
            return "0"
        bits = []
        for r in sorted(self._terms):
            c = self._terms[r]
            bits.append(str(c) if r == 1 else f"{c}*sqrt({r})")
        return " + ".join(bits)


class DomainError(ArithmeticError):
    """A recoupling quantity is undefined at this deformation parameter.

    Raised when a vanishing quantum integer appears in a denominator at a
    root of unity (no level truncation is applied)."""


@dataclass(frozen=True)
class Deformation:
    """Deformation parameter q on the unit circle.

    ``phase is None`` selects the exact classical mode q = 1; otherwise
    q = exp(i*pi*phase) with ``phase`` rational, and A = q**2.
    """

    phase: Fraction | None = None
    tolerance: float = 1e-9

    @staticmethod
    def classical(tolerance: float = 1e-9) -> "Deformation":
        return Deformation(None, tolerance)

    @staticmethod
    def unit_phase(p: int, r: int, tolerance: float = 1e-9) -> "Deformation":
        return Deformation(Fraction(p, r), tolerance)

    @property
    def is_classical(self) -> bool:
        return self.phase is None

    def qint_vanishes(self, n: int) -> bool:
        """Exact test for [n] = 0 (sin(n*pi*phase) = 0)."""
        if self.phase is None:
            return n == 0
        return (n * self.phase).denominator == 1

    def quantum_integer(self, n: int):
        """[n] = (q^n - q^-n)/(q - q^-1), as a real scalar on the unit circle."""
        if self.phase is None:
            return Surd.from_rational(n)
        t = self.phase
        if t.denominator == 1:
            # q = +-1: analytic limit n*q^(n-1)
            q = 1.0 if t.numerator % 2 == 0 else -1.0
            return n * q ** ((n - 1) % 2)
        return math.sin(n * math.pi * t) / math.sin(math.pi * t)

    def a_power(self, quarter_exponent: int):
        """A**(quarter_exponent/4) with A = q**2.

        Exponents are tracked as integers over quarters so that spin
        arithmetic stays exact; the caller guarantees that the half-unit
        ambiguity never arises (quarter_exponent is always even here).
        """
        if quarter_exponent % 2 != 0:
            raise ValueError(f"A-exponent 4x={quarter_exponent} is not a half-integer multiple")
        if self.phase is None:
            return Surd.from_rational(1)
        # A^(e/4) = exp(i*pi*phase*e/2)
        ang = math.pi * float(self.phase) * quarter_exponent / 2
        return complex(math.cos(ang), math.sin(ang))

    def minus_one_power(self, doubled_exponent: int):
        """(-1)**(doubled_exponent/2); doubled_exponent must be even."""
        if doubled_exponent % 2 != 0:
            raise ValueError(
                f"phase exponent {doubled_exponent}/2 is not an integer; "
                "inadmissible spins in a sign factor"
            )
        s = -1 if (doubled_exponent // 2) % 2 else 1
        return self.scalar(s)

    def scalar(self, x):
        """Embed a rational constant into this mode's scalar type."""
        return Surd.from_rational(x) if self.phase is None else complex(Fraction(x))

    @property
    def zero(self):
        return self.scalar(0)

    @property
    def one(self):
        return self.scalar(1)

    def sqrt(self, x):
        """Square root of an exact rational in this mode (used for triangle factors)."""
        f = Fraction(x)
        if self.phase is None:
            return Surd.sqrt_rational(f)
        v = float(f)
        return math.sqrt(v) if v >= 0 else complex(0.0, math.sqrt(-v))

    def is_zero(self, value) -> bool:
        if isinstance(value, Surd):
            return value.is_zero()
        return abs(value) <= self.tolerance

    def close(self, a, b) -> bool:
        """Mode-appropriate equality: exact for classical, tolerance otherwise."""
        if isinstance(a, Surd) or isinstance(b, Surd):
            if not (isinstance(a, Surd) and isinstance(b, Surd)):
                raise TypeError("cannot compare classical and numeric scalars")
            return a == b
        return abs(a - b) <= self.tolerance

    def label(self) -> str:
        return "q=1" if self.phase is None else f"q=exp(i*pi*{self.phase})"


@lru_cache(maxsize=None)
def _qfact_cached(phase: Fraction | None, n: int):
    d = Deformation(phase)
    if n == 0:
        return d.one
    prev = _qfact_cached(phase, n - 1)
    if d.qint_vanishes(n):
        # exact zero at roots of unity (float sin would leave ~1e-16 noise)
        return d.scalar(0)
    return prev * d.quantum_integer(n)


def quantum_factorial(n: int, d: Deformation):
    """[n]! = [1][2]...[n]."""
    if n < 0:
        raise ValueError("negative quantum factorial")
    return _qfact_cached(d.phase, n)
