"""Exact arithmetic in the cyclotomic field Q(zeta_e).

Numbers are stored on the power basis 1, zeta, ..., zeta^(phi(e)-1) modulo the
e-th cyclotomic polynomial, so every value has a unique canonical form and
equality is exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Any, Dict, List, Sequence, Tuple, Union

import numpy as np
from sympy import Symbol, cyclotomic_poly

from services.errors import ConductorMismatchError, CyclotomicZeroDivisionError

Scalar = Union[int, Fraction]


class _Field:
    """Reduction data for one conductor."""

    def __init__(self, conductor: int):
        self.conductor = conductor
        x = Symbol("x")
        # lowest degree first; Phi_e is monic with integer coefficients
        coeffs = [int(c) for c in cyclotomic_poly(conductor, x, polys=True).all_coeffs()][::-1]
        self.phi = len(coeffs) - 1
        self.modulus = coeffs
        # powers[k] = x^k reduced mod Phi_e, for 0 <= k < max(e, 2*phi - 1)
        limit = max(conductor, 2 * self.phi - 1)
        powers: List[Tuple[int, ...]] = []
        current = [0] * self.phi
        current[0] = 1
        for _ in range(limit):
            powers.append(tuple(current))
            # multiply by x and reduce the overflow coefficient
            top = current[-1]
            current = [0] + current[:-1]
            if top:
                for i in range(self.phi):
                    current[i] -= top * coeffs[i]
        self.powers = powers
        self.units = [k for k in range(conductor) if math.gcd(k, conductor) == 1]


@lru_cache(maxsize=None)
def _field(conductor: int) -> _Field:
    if conductor < 1:
        raise ValueError(f"conductor must be positive, got {conductor}")
    return _Field(conductor)


def _reduce(conductor: int, raw: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    """Reduce a coefficient vector of any length to the power basis."""
    field = _field(conductor)
    out = [Fraction(0)] * field.phi
    for k, c in enumerate(raw):
        if not c:
            continue
        if k < field.phi:
            out[k] += c
        else:
            power = field.powers[k] if k < len(field.powers) else _power_row(field, k)
            for i, p in enumerate(power):
                if p:
                    out[i] += c * p
    return tuple(out)


def _power_row(field: _Field, k: int) -> Tuple[int, ...]:
    return field.powers[k % field.conductor]


class CycloNumber:
    """An exact element of Q(zeta_e)."""

    __slots__ = ("conductor", "coeffs", "_hash")

    def __init__(self, conductor: int, coeffs: Sequence[Scalar]):
        """
        Initialize from power-basis coefficients.

        Args:
            conductor: e, the field is Q(zeta_e)
            coeffs: Coefficients on 1, zeta, zeta^2, ...; longer vectors are reduced
        """
        fractions = [Fraction(c) for c in coeffs]
        if len(fractions) != _field(conductor).phi:
            normalized = _reduce(conductor, fractions)
        else:
            normalized = tuple(fractions)
        self.conductor = conductor
        self.coeffs: Tuple[Fraction, ...] = normalized
        self._hash = None

    # Constructors

    @classmethod
    def from_rational(cls, conductor: int, value: Scalar) -> CycloNumber:
        phi = _field(conductor).phi
        return cls(conductor, [Fraction(value)] + [Fraction(0)] * (phi - 1))

    @classmethod
    def zero(cls, conductor: int) -> CycloNumber:
        return cls.from_rational(conductor, 0)

    @classmethod
    def one(cls, conductor: int) -> CycloNumber:
        return cls.from_rational(conductor, 1)

    # Predicates

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def to_integer(self) -> int:
        value = self.to_rational()
        if value.denominator != 1:
            raise ValueError(f"{self!r} is not an integer")
        return value.numerator

    def is_integer(self) -> bool:
        return self.is_rational() and self.coeffs[0].denominator == 1

    # Arithmetic

    def _coerce(self, other: Any) -> CycloNumber:
        if isinstance(other, CycloNumber):
            if other.conductor != self.conductor:
                raise ConductorMismatchError(
                    f"conductor mismatch: {self.conductor} vs {other.conductor}"
                )
            return other
        if isinstance(other, (int, Rational)):
            return CycloNumber.from_rational(self.conductor, Fraction(other))
        raise TypeError(f"cannot combine CycloNumber with {type(other).__name__}")

    def __add__(self, other: Any) -> CycloNumber:
        if isinstance(other, (int, Rational)) and not isinstance(other, CycloNumber):
            coeffs = list(self.coeffs)
            coeffs[0] += Fraction(other)
            return CycloNumber(self.conductor, coeffs)
        other = self._coerce(other)
        return CycloNumber(self.conductor, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self) -> CycloNumber:
        return CycloNumber(self.conductor, [-a for a in self.coeffs])

    def __sub__(self, other: Any) -> CycloNumber:
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> CycloNumber:
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> CycloNumber:
        if isinstance(other, (int, Rational)) and not isinstance(other, CycloNumber):
            scale = Fraction(other)
            return CycloNumber(self.conductor, [a * scale for a in self.coeffs])
        other = self._coerce(other)
        phi = len(self.coeffs)
        raw = [Fraction(0)] * (2 * phi - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    raw[i + j] += a * b
        return CycloNumber(self.conductor, _reduce(self.conductor, raw))

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> CycloNumber:
        if isinstance(other, (int, Rational)) and not isinstance(other, CycloNumber):
            if other == 0:
                raise CyclotomicZeroDivisionError("division by zero")
            return self * (Fraction(1) / Fraction(other))
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other: Any) -> CycloNumber:
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int) -> CycloNumber:
        if k < 0:
            return self.inverse() ** (-k)
        result = CycloNumber.one(self.conductor)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def galois(self, k: int) -> CycloNumber:
        """Image under the automorphism zeta -> zeta^k, gcd(k, e) = 1."""
        field = _field(self.conductor)
        if math.gcd(k, self.conductor) != 1:
            raise ValueError(f"{k} is not a unit modulo {self.conductor}")
        raw = [Fraction(0)] * self.conductor
        for j, c in enumerate(self.coeffs):
            if c:
                raw[(j * k) % self.conductor] += c
        return CycloNumber(self.conductor, _reduce(field.conductor, raw))

    def conj(self) -> CycloNumber:
        """Complex conjugation, the automorphism zeta -> zeta^-1."""
        return self.galois(-1 % self.conductor) if self.conductor > 2 else self

    def norm(self) -> Fraction:
        """Field norm: product of all Galois conjugates."""
        product = CycloNumber.one(self.conductor)
        for k in _field(self.conductor).units:
            product = product * self.galois(k)
        return product.to_rational()

    def inverse(self) -> CycloNumber:
        """
        Multiplicative inverse via the product of the nontrivial conjugates.

        a * prod_{k != 1} sigma_k(a) = N(a) is rational, so that product
        divided by N(a) is the inverse.
        """
        if self.is_zero():
            raise CyclotomicZeroDivisionError("inversion of zero in a cyclotomic field")
        cofactor = CycloNumber.one(self.conductor)
        for k in _field(self.conductor).units:
            if k != 1 % self.conductor:
                cofactor = cofactor * self.galois(k)
        norm = (self * cofactor).to_rational()
        return cofactor * (Fraction(1) / norm)

    def lift(self, conductor: int) -> CycloNumber:
        """Embed into Q(zeta_m) for a multiple m of the conductor."""
        if conductor % self.conductor:
            raise ConductorMismatchError(f"{self.conductor} does not divide {conductor}")
        step = conductor // self.conductor
        raw = [Fraction(0)] * (len(self.coeffs) * step)
        for j, c in enumerate(self.coeffs):
            raw[j * step] = c
        return CycloNumber(conductor, _reduce(conductor, raw))

    # Comparison and hashing

    def __eq__(self, other: object) -> bool:
        if isinstance(other, CycloNumber):
            return self.conductor == other.conductor and self.coeffs == other.coeffs
        if isinstance(other, (int, Rational)):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            # rational values hash like the int or Fraction they compare equal to
            rational = self.is_rational()
            self._hash = hash(self.coeffs[0]) if rational else hash((self.conductor, self.coeffs))
        return self._hash

    def sort_key(self) -> Tuple[Fraction, ...]:
        return self.coeffs

    # Rendering

    def to_complex(self) -> complex:
        """Double-precision value at zeta = exp(2 pi i / e); for reporting only."""
        phi = len(self.coeffs)
        basis = np.exp(2j * np.pi * np.arange(phi) / self.conductor)
        weights = np.array([float(c) for c in self.coeffs])
        return complex(np.dot(weights, basis))

    def to_json(self) -> Dict[str, Any]:
        value = self.to_complex()
        return {
            "conductor": self.conductor,
            "coeffs": [[str(c.numerator), str(c.denominator)] for c in self.coeffs],
            "approx": [_round(value.real), _round(value.imag)],
        }

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> CycloNumber:
        coeffs = [Fraction(int(num), int(den)) for num, den in payload["coeffs"]]
        return cls(int(payload["conductor"]), coeffs)

    def __repr__(self) -> str:
        return f"CycloNumber({self.conductor}, {self})"

    def __str__(self) -> str:
        terms = []
        for j, c in enumerate(self.coeffs):
            if not c:
                continue
            if j == 0:
                terms.append(str(c))
            else:
                base = "z" if j == 1 else f"z^{j}"
                terms.append(base if c == 1 else f"-{base}" if c == -1 else f"{c}*{base}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def _round(value: float) -> str:
    rounded = round(value, 12)
    return repr(0.0 if rounded == 0 else rounded)


def root_of_unity(conductor: int, k: int) -> CycloNumber:
    """zeta_e^k in canonical form; k is reduced modulo e."""
    field = _field(conductor)
    return CycloNumber(conductor, field.powers[k % conductor])


def cyclo_arith(op: str, a: CycloNumber, b: CycloNumber = None) -> CycloNumber:
    """
    Dispatch a named field operation.

    Args:
        op: add, mul, neg, inv or conj
        a: First operand
        b: Second operand for binary operations

    Returns:
        The exact result in canonical form
    """
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    if op == "conj":
        return a.conj()
    raise ValueError(f"unknown cyclotomic operation: {op}")


def euler_phi(conductor: int) -> int:
    return _field(conductor).phi
