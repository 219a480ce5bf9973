from fractions import Fraction

import mpmath
from sympy import Rational, sympify
from sympy.core.sympify import SympifyError

from stein_algebra.src.exceptions import InvalidParameter


def to_scalar(value, name: str = "value") -> Rational:
    """
    Converts a user value to an exact rational Scalar.

    :param value: an int, a string such as "3/2" or "-4", a Fraction or a sympy rational
    :param name: parameter name used in error messages
    :return: the value as a sympy Rational in lowest terms
    """

    if isinstance(value, bool):
        raise InvalidParameter(f"{name} must be a rational number, got {value!r}")
    if isinstance(value, float):
        raise InvalidParameter(f"{name} must be given exactly (e.g. '3/10'), floats are rejected: {value!r}")
    if isinstance(value, Fraction):
        return Rational(value.numerator, value.denominator)
    if isinstance(value, str):
        value = value.strip()
        if not value or any(ch in value for ch in ".eE"):
            raise InvalidParameter(f"{name} must be an integer or a fraction p/q, got {value!r}")

    try:
        converted = sympify(value, rational=True)
    except (SympifyError, TypeError) as e:
        raise InvalidParameter(f"{name} is not a number: {value!r} ({e})")

    if not isinstance(converted, Rational):
        raise InvalidParameter(f"{name} must be rational, got {converted}")
    return converted


def to_positive_integer(value, name: str = "value") -> int:
    scalar = to_scalar(value, name)
    if not scalar.is_Integer or scalar <= 0:
        raise InvalidParameter(f"{name} must be a positive integer, got {scalar}")
    return int(scalar)


def scalar_to_str(value: Rational) -> str:
    return str(Rational(value))


def scalar_to_json(value: Rational) -> dict:
    value = Rational(value)
    return {"num": int(value.p), "den": int(value.q)}


def scalar_to_mpf(value: Rational) -> mpmath.mpf:
    """
    Converts an exact rational to an mpmath float at the current working precision.
    """

    value = Rational(value)
    return mpmath.mpf(int(value.p)) / int(value.q)
