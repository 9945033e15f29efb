import math
from fractions import Fraction

import pytest

from spinnets.scalars import Deformation, DomainError, Surd, quantum_factorial


def test_surd_rational_roundtrip():
    x = Surd.from_rational(Fraction(3, 4))
    assert x.is_rational()
    assert x.as_fraction() == Fraction(3, 4)
    assert float(x) == 0.75


def test_surd_sqrt_extracts_squares():
    s = Surd.sqrt_rational(Fraction(18))  # 3*sqrt(2)
    assert s == Surd({2: Fraction(3)})
    t = Surd.sqrt_rational(Fraction(1, 8))  # sqrt(2)/4
    assert t == Surd({2: Fraction(1, 4)})
    assert Surd.sqrt_rational(Fraction(49, 9)) == Surd.from_rational(Fraction(7, 3))


def test_surd_products_combine_radicands():
    a = Surd.sqrt_rational(6)
    b = Surd.sqrt_rational(10)
    assert a * b == Surd({15: Fraction(2)})  # sqrt(60) = 2 sqrt(15)
    assert (a * a).as_fraction() == 6


def test_surd_linear_combinations():
    x = Surd.sqrt_rational(2) + Surd.sqrt_rational(3)
    y = x - Surd.sqrt_rational(3)
    assert y == Surd.sqrt_rational(2)
    assert not (x - x)
    assert float(x) == pytest.approx(math.sqrt(2) + math.sqrt(3))


def test_surd_rejects_mixing_with_floats():
    with pytest.raises(TypeError):
        Surd.from_rational(1) + 0.5
    with pytest.raises(TypeError):
        Deformation.classical().close(Surd.from_rational(1), 1.0)


def test_surd_division_by_rational_only():
    x = Surd.sqrt_rational(2) / 2
    assert x == Surd({2: Fraction(1, 2)})
    with pytest.raises(TypeError):
        Surd.from_rational(1) / Surd.sqrt_rational(2)


def test_quantum_integer_classical():
    d = Deformation.classical()
    assert d.quantum_integer(5).as_fraction() == 5


def test_quantum_integer_phase_values():
    d = Deformation.unit_phase(1, 5)
    assert d.quantum_integer(1) == pytest.approx(1.0)
    # [2] = q + 1/q = 2 cos(pi/5)
    assert d.quantum_integer(2) == pytest.approx(2 * math.cos(math.pi / 5))
    assert d.qint_vanishes(5)
    assert not d.qint_vanishes(4)


def test_quantum_integer_limit_at_q_minus_one():
    d = Deformation(Fraction(1))  # q = exp(i pi) = -1
    # analytic limit n * q^(n-1)
    assert d.quantum_integer(3) == pytest.approx(3.0)
    assert d.quantum_integer(2) == pytest.approx(-2.0)


def test_quantum_factorial_exact_zero_at_root():
    d = Deformation.unit_phase(1, 5)
    assert quantum_factorial(4, d) != 0
    assert quantum_factorial(5, d) == 0
    assert quantum_factorial(7, d) == 0


def test_a_power_unit_circle():
    d = Deformation.unit_phase(1, 4)  # q = exp(i pi/4), A = i
    assert d.a_power(4) == pytest.approx(1j)      # A^1
    assert d.a_power(8) == pytest.approx(-1 + 0j)  # A^2
    with pytest.raises(ValueError):
        d.a_power(3)


def test_minus_one_power_parity_guard():
    d = Deformation.classical()
    assert d.minus_one_power(2).as_fraction() == -1
    assert d.minus_one_power(4).as_fraction() == 1
    with pytest.raises(ValueError):
        d.minus_one_power(3)


def test_close_modes():
    dc = Deformation.classical()
    assert dc.close(Surd.sqrt_rational(2), Surd.sqrt_rational(2))
    assert not dc.close(Surd.sqrt_rational(2), Surd.sqrt_rational(3))
    dn = Deformation.unit_phase(1, 7, tolerance=1e-9)
    assert dn.close(1.0 + 0j, 1.0 + 1e-12j)
    assert not dn.close(1.0, 1.0 + 1e-6)
