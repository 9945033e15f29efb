"""Quantum recoupling coefficients for trivalent spin networks.

Spins are passed around as doubled integers (``2j``), so all arithmetic
on labels is integer arithmetic.  The 6j symbol is the Racah single sum
with quantum integers substituted for integers; at q = 1 it reduces to
the classical Wigner 6j symbol.  Together with theta-normalized vertices
(theta nets evaluate to 1) this is the normalization in which the
crossing identity carries weight Delta_x * {6j} and the usual identity
suite holds:

* orthogonality     sum_mu [2x+1][2mu+1] {a b mu; c d x}{a b mu; c d lam} = delta(x,lam)
* Biedenharn-Elliott (pentagon), tetrahedral symmetries
* theta and bigon normalization used by the reduction engine.

Phase conventions: A = q**2.  Exponents of A are quarter-integer
multiples of j(j+1)-type quantities; they are tracked as the integer
``4*j*(j+1) = (2j)*(2j+2)`` and only halved where admissibility proves
the result integral.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .scalars import Deformation, DomainError, quantum_factorial


@dataclass(frozen=True, order=True)
class Spin:
    """Half-integer spin stored as 2j."""

    twice: int

    def __post_init__(self):
        if self.twice < 0:
            raise ValueError(f"negative spin 2j={self.twice}")

    @property
    def j(self) -> Fraction:
        return Fraction(self.twice, 2)

    @staticmethod
    def parse(text: str) -> "Spin":
        """Parse '2', '3/2' (j-values) or a bare doubled integer is not accepted."""
        text = text.strip()
        if "/" in text:
            num, den = text.split("/")
            f = Fraction(int(num), int(den))
        else:
            f = Fraction(int(text))
        tw = f * 2
        if tw.denominator != 1 or tw < 0:
            raise ValueError(f"not a non-negative half-integer spin: {text}")
        return Spin(int(tw))

    def __str__(self):
        return str(self.j) if self.twice % 2 else str(self.twice // 2)


def _tw(x) -> int:
    """Accept Spin or doubled-integer int."""
    if isinstance(x, Spin):
        return x.twice
    if isinstance(x, int):
        if x < 0:
            raise ValueError(f"negative spin 2j={x}")
        return x
    raise TypeError(f"spin expected, got {type(x).__name__}")


def admissible(a, b, c) -> bool:
    """Triangle inequalities plus integer total spin."""
    a, b, c = _tw(a), _tw(b), _tw(c)
    return (a + b + c) % 2 == 0 and abs(a - b) <= c <= a + b


def quantum_integer(n: int, d: Deformation):
    """[n] = (q^n - q^-n)/(q - q^-1); [n] = n at q = 1 and at q = -1 up to sign."""
    return d.quantum_integer(n)


def loop_value(x, d: Deformation):
    """Closed-loop evaluation Delta_x = (-1)^(2x) [2x+1]."""
    x = _tw(x)
    v = d.quantum_integer(x + 1)
    return -v if x % 2 else v


def theta(a, b, c, d: Deformation | None = None):
    """Theta-net value: 1 for an admissible triple, else 0 (normalized vertices)."""
    ok = admissible(a, b, c)
    if d is None:
        return 1 if ok else 0
    return d.one if ok else d.zero


def chi4(a) -> int:
    """4*j*(j+1) as an integer: (2j)(2j+2)."""
    a = _tw(a)
    return a * (a + 2)


def _triangle_factor(a: int, b: int, c: int, d: Deformation):
    """sqrt([x]![y]![z]! / [S+1]!) for the triad; DomainError on vanishing denominator."""
    x = (-a + b + c) // 2
    y = (a - b + c) // 2
    z = (a + b - c) // 2
    s1 = (a + b + c) // 2 + 1
    if not d.is_classical and d.phase is not None:
        r = d.phase.denominator
        if r > 1 and s1 >= r:
            raise DomainError(
                f"quantum integer [{r}] vanishes at {d.label()} "
                f"(triangle denominator [{s1}]! for triad 2j=({a},{b},{c}))"
            )
    num = quantum_factorial(x, d) * quantum_factorial(y, d) * quantum_factorial(z, d)
    den = quantum_factorial(s1, d)
    if d.is_classical:
        return d.sqrt(num.as_fraction() / den.as_fraction())
    return _numeric_sqrt(num / den)


def _numeric_sqrt(v):
    import math

    if isinstance(v, complex):
        v = v.real  # quantum factorials are real on the unit circle
    return math.sqrt(v) if v >= 0 else complex(0.0, math.sqrt(-v))


def _sixj_key_compute(phase, a, b, c, dd, e, f):
    d = Deformation(phase)
    if not (admissible(a, b, c) and admissible(a, e, f)
            and admissible(dd, b, f) and admissible(dd, e, c)):
        return d.zero
    S = [(a + b + c) // 2, (a + e + f) // 2, (dd + b + f) // 2, (dd + e + c) // 2]
    P = [(a + b + dd + e) // 2, (b + c + e + f) // 2, (a + c + dd + f) // 2]
    if not d.is_classical:
        r = d.phase.denominator
        if r > 1:
            # vanishing quantum integers are allowed in numerators only
            worst = max(min(P) - min(S), max(P) - max(S))
            if worst >= r:
                raise DomainError(
                    f"quantum integer [{r}] vanishes at {d.label()} "
                    f"(Racah-sum denominator for 6j 2j={(a, b, c, dd, e, f)})"
                )
    total = d.zero
    for z in range(max(S), min(P) + 1):
        term = quantum_factorial(z + 1, d)
        for s in S:
            term = term / quantum_factorial(z - s, d)
        for p in P:
            term = term / quantum_factorial(p - z, d)
        total = total - term if z % 2 else total + term
    pre = (_triangle_factor(a, b, c, d) * _triangle_factor(a, e, f, d)
           * _triangle_factor(dd, b, f, d) * _triangle_factor(dd, e, c, d))
    return pre * total


_sixj_cached = lru_cache(maxsize=None)(_sixj_key_compute)


def sixj(a, b, c, dd, e, f, d: Deformation):
    """Symmetric 6j symbol {a b c; d e f}, triads (abc), (aef), (dbf), (dec).

    Inadmissible arguments give 0.  Vanishing Racah denominators at a
    root of unity raise DomainError (spins are never truncated).
    """
    args = tuple(_tw(x) for x in (a, b, c, dd, e, f))
    return _sixj_cached(d.phase, *args)


def coupling_coefficient(a, b, x, c, dd, j, d: Deformation):
    """Crossing-identity weight Delta_x * {a b x; c d j}."""
    return loop_value(x, d) * sixj(a, b, x, c, dd, j, d)


def _phase_sign(doubled: int, d: Deformation):
    return d.minus_one_power(doubled)


def twist_factor(a, b, j, d: Deformation, crossing: str = "over"):
    """Vertex untwisting factor (-1)^(a+b-j) A^(+-2[a(a+1)+b(b+1)-j(j+1)]).

    ``crossing`` selects the sign of the exponent: 'over' is +, 'under'
    replaces A by 1/A.  Requires an admissible triple.
    """
    a, b, j = _tw(a), _tw(b), _tw(j)
    if not admissible(a, b, j):
        raise ValueError(f"twist factor needs an admissible triple, got 2j={(a, b, j)}")
    if crossing not in ("over", "under"):
        raise ValueError(f"crossing must be 'over' or 'under', got {crossing!r}")
    sign = 1 if crossing == "over" else -1
    quarter = sign * 2 * (chi4(a) + chi4(b) - chi4(j))
    return _phase_sign(a + b - j, d) * d.a_power(quarter)


def a_factor(a, b, third, d: Deformation, sign: int = +1):
    """Toroidal phase factor A^sign_{a,b,third}.

    ``third`` is a single spin x, giving
    (-1)^(a+b-x) A^(sign*2[a(a+1)+b(b+1)-x(x+1)]), or a pair (c, d2),
    which replaces x(x+1) by c(c+1)+d2(d2+1) and x by c+d2 in the sign
    (composite-index form).
    """
    a, b = _tw(a), _tw(b)
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    if isinstance(third, tuple):
        c, d2 = (_tw(t) for t in third)
        doubled = a + b - c - d2
        quarter = sign * 2 * (chi4(a) + chi4(b) - chi4(c) - chi4(d2))
    else:
        x = _tw(third)
        doubled = a + b - x
        quarter = sign * 2 * (chi4(a) + chi4(b) - chi4(x))
    return _phase_sign(doubled, d) * d.a_power(quarter)


# Toroidal symbol.  The grid is indexed g[row][col] as displayed; the
# summation variable pairs with the anti-diagonal entries, every other
# entry appears in exactly two of the three 6j symbols.  The two index
# labels (carrying the A-factor) must sit in one of the three pair slots
# below: these are exactly the label pairs that share a triangle with
# the summation variable.
PAIR_SLOTS = (((0, 0), (2, 2)), ((1, 0), (2, 1)), ((0, 1), (1, 2)))
DEFAULT_INDICES = PAIR_SLOTS[1]


def t6_product(grid, x, d: Deformation):
    """Product of the three 6j symbols of the toroidal expansion at internal spin x."""
    g = [[_tw(v) for v in row] for row in grid]
    s1 = sixj(g[0][0], g[1][0], g[2][0], g[2][1], g[2][2], x, d)
    if d.is_zero(s1):
        return d.zero
    s2 = sixj(g[0][1], g[1][1], g[2][1], g[1][0], x, g[1][2], d)
    if d.is_zero(s2):
        return d.zero
    s3 = sixj(g[0][2], g[1][2], g[2][2], x, g[0][0], g[0][1], d)
    return s1 * s2 * s3


def internal_range(grid) -> list[int]:
    """Admissible values of the summation variable of the toroidal expansion."""
    g = [[_tw(v) for v in row] for row in grid]
    pairs = [(g[r1][c1], g[r2][c2]) for (r1, c1), (r2, c2) in PAIR_SLOTS]
    parities = {(a + b) % 2 for a, b in pairs}
    if len(parities) != 1:
        return []
    lo = max(abs(a - b) for a, b in pairs)
    hi = min(a + b for a, b in pairs)
    return list(range(lo, hi + 1, 2))


def toroidal_symbol(grid, d: Deformation, sign: int = +1,
                    indices: tuple[tuple[int, int], tuple[int, int]] = DEFAULT_INDICES):
    """Nine-label toroidal symbol.

    sum_x Delta_x A^sign_{p,q,x} {g00 g10 g20; g21 g22 x}
                                 {g01 g11 g21; g10 x g12}
                                 {g02 g12 g22; x g00 g01}

    where (p, q) are the grid entries at the two ``indices`` positions.
    ``indices`` must be one of PAIR_SLOTS (the pairs admissible with the
    summation variable); the default is the ((1,0),(2,1)) pair.
    """
    slots = (tuple(indices[0]), tuple(indices[1]))
    if {slots[0], slots[1]} not in [set(s) for s in PAIR_SLOTS]:
        raise ValueError(f"indices {indices} are not a summation-variable pair slot")
    g = [[_tw(v) for v in row] for row in grid]
    p = g[slots[0][0]][slots[0][1]]
    q = g[slots[1][0]][slots[1][1]]
    total = d.zero
    for x in internal_range(g):
        prod = t6_product(g, x, d)
        if d.is_zero(prod):
            continue
        total = total + loop_value(x, d) * a_factor(p, q, x, d, sign) * prod
    return total


def ninej(grid, d: Deformation):
    """Classical 9j symbol (rows of ``grid`` as displayed).

    Computed as sum_x Delta_x * t6_product(grid, x); only defined in
    classical mode (the q-deformed analogue is the toroidal symbol).
    """
    if not d.is_classical:
        raise ValueError("ninej is a classical (q=1) quantity; use toroidal_symbol for q != 1")
    g = [[_tw(v) for v in row] for row in grid]
    total = d.zero
    for x in internal_range(g):
        prod = t6_product(g, x, d)
        if d.is_zero(prod):
            continue
        total = total + loop_value(x, d) * prod
    return total
