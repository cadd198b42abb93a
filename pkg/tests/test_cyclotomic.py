from fractions import Fraction

import pytest

from services.cyclotomic import CycloNumber, cyclo_arith, euler_phi, root_of_unity
from services.errors import ConductorMismatchError, CyclotomicZeroDivisionError


def test_power_basis_dimension():
    assert euler_phi(1) == 1
    assert euler_phi(4) == 2
    assert euler_phi(6) == 2
    assert euler_phi(12) == 4


def test_roots_of_unity():
    omega = root_of_unity(3, 1)
    assert omega**3 == 1
    assert omega != 1
    assert 1 + omega + omega**2 == 0
    assert root_of_unity(3, 4) == omega
    i = root_of_unity(4, 1)
    assert i * i == -1


def test_canonical_form_is_unique():
    zeta = root_of_unity(12, 1)
    # zeta^4 + zeta^8 = -1 in Q(zeta_12)
    assert zeta**4 + zeta**8 == CycloNumber.from_rational(12, -1)
    assert hash(zeta**6) == hash(CycloNumber.from_rational(12, -1))


def test_conjugation_and_galois():
    omega = root_of_unity(3, 1)
    assert omega.conj() == omega**2
    assert (omega * omega.conj()) == 1
    assert omega.galois(2) == omega**2
    with pytest.raises(ValueError):
        omega.galois(3)
    half = CycloNumber.from_rational(2, Fraction(1, 2))
    assert half.conj() == half


def test_inverse_and_division():
    zeta = root_of_unity(8, 1)
    x = 1 + zeta + 3 * zeta**3
    assert x * x.inverse() == 1
    assert (x / x) == 1
    assert (2 / x) * x == 2
    assert x.norm() > 0
    with pytest.raises(CyclotomicZeroDivisionError):
        CycloNumber.zero(8).inverse()
    with pytest.raises(CyclotomicZeroDivisionError):
        x / 0


def test_rational_queries():
    three = CycloNumber.from_rational(6, 3)
    assert three.is_integer()
    assert three.to_integer() == 3
    assert CycloNumber.from_rational(6, Fraction(3, 2)).to_rational() == Fraction(3, 2)
    with pytest.raises(ValueError):
        CycloNumber.from_rational(6, Fraction(3, 2)).to_integer()
    with pytest.raises(ValueError):
        root_of_unity(6, 1).to_rational()


def test_conductor_mismatch():
    with pytest.raises(ConductorMismatchError):
        root_of_unity(3, 1) + root_of_unity(4, 1)


def test_lift_preserves_values():
    omega = root_of_unity(3, 1)
    lifted = omega.lift(6)
    assert lifted == root_of_unity(6, 2)
    assert lifted.lift(12) == root_of_unity(12, 4)
    with pytest.raises(ConductorMismatchError):
        omega.lift(4)


def test_json_form():
    value = root_of_unity(3, 1) * Fraction(-2, 3)
    payload = value.to_json()
    assert payload["conductor"] == 3
    assert CycloNumber.from_json(payload) == value
    assert CycloNumber.from_json(CycloNumber.from_rational(3, 5).to_json()) == 5


def test_named_operations():
    a, b = root_of_unity(4, 1), CycloNumber.from_rational(4, 2)
    assert cyclo_arith("add", a, b) == a + 2
    assert cyclo_arith("mul", a, b) == 2 * a
    assert cyclo_arith("neg", a) == -a
    assert cyclo_arith("inv", a) == -a
    assert cyclo_arith("conj", a) == -a
    with pytest.raises(ValueError):
        cyclo_arith("pow", a, b)


def test_rational_values_hash_like_numbers():
    half = CycloNumber.from_rational(6, Fraction(1, 2))
    assert {half: "half"}[Fraction(1, 2)] == "half"
    assert CycloNumber.from_rational(4, 3) in {3}
    assert len({CycloNumber.one(5), 1}) == 1
    assert root_of_unity(3, 1) not in {1}
