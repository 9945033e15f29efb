"""Independent oracles used to freeze expected values.

The Racah 6j oracle is a from-scratch classical implementation
(Fraction arithmetic, sign/radicand split of the single sum) kept
deliberately separate from the package's q-deformed code path; sympy's
wigner_6j/wigner_9j give a second independent cross-check where used.
"""

from fractions import Fraction


def _fact(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def _adm(a: int, b: int, c: int) -> bool:
    return (a + b + c) % 2 == 0 and abs(a - b) <= c <= a + b


def _tri_sq(a: int, b: int, c: int) -> Fraction:
    return Fraction(
        _fact((-a + b + c) // 2) * _fact((a - b + c) // 2) * _fact((a + b - c) // 2),
        _fact((a + b + c) // 2 + 1),
    )


def racah_sixj_exact_parts(a, b, c, d, e, f):
    """Classical {a/2 b/2 c/2; d/2 e/2 f/2} as (sign, squared value).

    Exact; the symbol equals sign * sqrt(squared value)."""
    if not (_adm(a, b, c) and _adm(a, e, f) and _adm(d, b, f) and _adm(d, e, c)):
        return 0, Fraction(0)
    S = [(a + b + c) // 2, (a + e + f) // 2, (d + b + f) // 2, (d + e + c) // 2]
    P = [(a + b + d + e) // 2, (b + c + e + f) // 2, (a + c + d + f) // 2]
    total = Fraction(0)
    for z in range(max(S), min(P) + 1):
        num = Fraction(_fact(z + 1))
        den = 1
        for s in S:
            den *= _fact(z - s)
        for p in P:
            den *= _fact(p - z)
        total += (-1) ** z * num / den
    pre_sq = _tri_sq(a, b, c) * _tri_sq(a, e, f) * _tri_sq(d, b, f) * _tri_sq(d, e, c)
    sign = 0 if total == 0 else (1 if total > 0 else -1)
    return sign, pre_sq * total * total


def racah_sixj_float(a, b, c, d, e, f) -> float:
    import math

    sign, sq = racah_sixj_exact_parts(a, b, c, d, e, f)
    return sign * math.sqrt(float(sq))


def brute_toroidal_symbol(grid, p, q, d, sign=+1, max_two=24):
    """Direct summation oracle for the toroidal symbol: explicit loop over
    every internal spin with no admissibility prefiltering."""
    from spinnets.recoupling import a_factor, loop_value, sixj

    g = grid
    total = d.zero
    for x in range(max_two + 1):
        s1 = sixj(g[0][0], g[1][0], g[2][0], g[2][1], g[2][2], x, d)
        s2 = sixj(g[0][1], g[1][1], g[2][1], g[1][0], x, g[1][2], d)
        s3 = sixj(g[0][2], g[1][2], g[2][2], x, g[0][0], g[0][1], d)
        prod = s1 * s2 * s3
        if d.is_zero(prod):
            continue
        total = total + loop_value(x, d) * a_factor(p, q, x, d, sign) * prod
    return total


# Hand-traced theta-graph faces (successor rule applied on paper):
# with the same cyclic order (a b c) at both endpoints the walk
# a+ b- c+ a- b+ c- closes after six sides (single toroidal face);
# with opposite orders the three bigons a+c-, a-b+, b-c+ appear.
THETA_FACES_SAME_ORIENTATION = (6,)
THETA_FACES_OPPOSITE_ORIENTATION = (2, 2, 2)
