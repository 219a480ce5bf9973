"""
Moments of distribution expressions: exact rationals where the closed forms allow it, extended-precision
values otherwise.

Atoms whose absolute value has a Mellin transform made of gamma ratios are described by a GammaTable; the
table gives E|X|^t for every rational t, which covers positive atoms, the symmetric atoms (odd moments
vanish) and rational powers of positive expressions. Normal laws with μ ≠ 0 and VG laws with θ ≠ 0 use
their own recurrences.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple, Union

import mpmath
from sympy import Rational, binomial, factorial2, rf

from stein_algebra.src.catalog.atoms import Atom, DistExpr, IidSum, Power, Product, Scale, Shift, is_positive
from stein_algebra.src.catalog.operators import gamma_parameters
from stein_algebra.src.config import EngineSettings, DEFAULT_SETTINGS
from stein_algebra.src.exceptions import MomentUnavailable, UnsupportedExpression
from stein_algebra.src.operator_core.scalars import to_scalar, scalar_to_mpf, scalar_to_str

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MomentValue:
    """
    An exact rational, an extended-precision approximation, or the statement that the moment does not exist.
    """

    exact: Optional[Rational] = None
    approx: Optional[mpmath.mpf] = None
    reason: Optional[str] = None

    @staticmethod
    def of(value) -> "MomentValue":
        if isinstance(value, mpmath.mpf):
            return MomentValue(approx=value)
        return MomentValue(exact=Rational(value))

    @staticmethod
    def does_not_exist(reason: str) -> "MomentValue":
        return MomentValue(reason=reason)

    @property
    def exists(self) -> bool:
        return self.reason is None

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def as_mpf(self) -> mpmath.mpf:
        if not self.exists:
            raise ValueError(f"moment does not exist: {self.reason}")
        return self.approx if self.approx is not None else scalar_to_mpf(self.exact)

    def __mul__(self, other: Union["MomentValue", Rational, int]) -> "MomentValue":
        if not isinstance(other, MomentValue):
            other = MomentValue.of(to_scalar(other))
        if not self.exists:
            return self
        if not other.exists:
            return other
        if self.is_exact and other.is_exact:
            return MomentValue(exact=self.exact * other.exact)
        return MomentValue(approx=self.as_mpf() * other.as_mpf())

    __rmul__ = __mul__

    def __add__(self, other: "MomentValue") -> "MomentValue":
        if not self.exists:
            return self
        if not other.exists:
            return other
        if self.is_exact and other.is_exact:
            return MomentValue(exact=self.exact + other.exact)
        return MomentValue(approx=self.as_mpf() + other.as_mpf())

    def render(self) -> str:
        if not self.exists:
            return f"does not exist ({self.reason})"
        if self.is_exact:
            return scalar_to_str(self.exact)
        return mpmath.nstr(self.approx, 20)

    def to_json(self) -> dict:
        if not self.exists:
            return {"kind": "DoesNotExist", "reason": self.reason}
        if self.is_exact:
            return {"kind": "ExactRational", "value": scalar_to_str(self.exact)}
        return {"kind": "Approx", "value": mpmath.nstr(self.approx, 30)}


@dataclass(frozen=True)
class GammaTable:
    """
    E|X|^t = Π base^(w·t) · Π [Γ(u + v·t) / Γ(u)]^sign.
    """

    scales: Tuple[Tuple[Rational, Rational], ...]  # (base, w)
    ratios: Tuple[Tuple[Rational, Rational, int], ...]  # (u, v, sign)
    symmetric: bool = False


def gamma_table(a: Atom) -> Optional[GammaTable]:
    """
    The gamma-ratio description of E|X|^t for an atom; None for Normal with μ ≠ 0 and VG with θ ≠ 0.
    """

    kind, p = a.kind, a.parameters
    half = Rational(1, 2)
    if kind in ("Gamma", "Exponential", "ChiSq"):
        r, lam = gamma_parameters(a)
        return GammaTable(((1 / lam, Rational(1)),), ((r, Rational(1), 1),))
    if kind == "Beta":
        return GammaTable((), ((p["a"], Rational(1), 1), (p["a"] + p["b"], Rational(1), -1)))
    if kind == "InverseGamma":
        return GammaTable(((p["beta"], Rational(1)),), ((p["alpha"], Rational(-1), 1),))
    if kind == "FDist":
        d1, d2 = p["d1"], p["d2"]
        return GammaTable(((d2 / d1, Rational(1)),), ((d1 / 2, Rational(1), 1), (d2 / 2, Rational(-1), 1)))
    if kind == "GenGamma":
        return GammaTable(((1 / p["lambda"], Rational(1)),), ((p["r"] / p["q"], 1 / p["q"], 1),))
    if kind == "PRR":
        # sqrt(2s·Beta(1, s-1)·Gamma(1/2, 1))
        s = p["s"]
        return GammaTable(((2 * s, half),), ((Rational(1), half, 1), (half, half, 1), (s, half, -1)))
    if kind == "Normal" and p["mu"] == 0:
        return GammaTable(((2 * p["sigma2"], half),), ((half, half, 1),), symmetric=True)
    if kind == "StudentT":
        nu = p["nu"]
        return GammaTable(((nu, half),), ((half, half, 1), (nu / 2, -half, 1)), symmetric=True)
    if kind == "VGSym" or (kind == "VG" and p["theta"] == 0):
        # σ·sqrt(V)·X with V ~ Gamma(r/2, 1/2) and X standard normal
        return GammaTable(((2 * p["sigma"], Rational(1)),), ((half, half, 1), (p["r"] / 2, half, 1)),
                          symmetric=True)
    return None


def _gamma_ratio(u: Rational, shift: Rational) -> Rational:
    n = int(shift)
    return rf(u, n) if n >= 0 else 1 / rf(u + n, -n)


def table_moment(table: GammaTable, t: Rational, digits: int) -> MomentValue:
    """
    E|X|^t from a gamma table: exact when every gamma shift is an integer and every power is rational.
    """

    for u, v, sign in table.ratios:
        argument = u + v * t
        if sign > 0 and argument <= 0:
            return MomentValue.does_not_exist(f"Γ({argument}) diverges: the absolute moment of order {t} is infinite")
        if sign < 0 and argument <= 0 and argument.is_Integer:
            return MomentValue.of(0)

    exact = Rational(1)
    for base, w in table.scales:
        value = base ** (w * t)
        if not value.is_Rational:
            exact = None
            break
        exact *= value
    if exact is not None and all((v * t).is_Integer for _, v, _ in table.ratios):
        for u, v, sign in table.ratios:
            exact *= _gamma_ratio(u, v * t) ** sign
        return MomentValue.of(exact)

    with mpmath.workdps(digits):
        value = mpmath.mpf(1)
        for base, w in table.scales:
            value *= mpmath.power(scalar_to_mpf(base), scalar_to_mpf(w * t))
        for u, v, sign in table.ratios:
            ratio = mpmath.gamma(scalar_to_mpf(u + v * t)) / mpmath.gamma(scalar_to_mpf(u))
            value *= ratio if sign > 0 else 1 / ratio
        return MomentValue.of(+value)


def _normal_moments(mu: Rational, sigma2: Rational, k: int) -> Rational:
    # μ_k = μ·μ_{k-1} + (k-1)·σ²·μ_{k-2}
    previous, current = Rational(0), Rational(1)
    for n in range(1, k + 1):
        previous, current = current, mu * current + (n - 1) * sigma2 * previous
    return current


def _vg_moment(r: Rational, theta: Rational, sigma: Rational, k: int) -> Rational:
    # θ·V + σ·sqrt(V)·X with V ~ Gamma(r/2, 1/2), so E V^n = 2^n (r/2)_n
    total = Rational(0)
    for j in range(0, k + 1, 2):
        v_moment = rf(r / 2, k - j // 2) * 2 ** (k - j // 2)
        x_moment = factorial2(j - 1) if j else 1
        total += binomial(k, j) * theta ** (k - j) * sigma ** j * v_moment * x_moment
    return Rational(total)


def absolute_moment(e: DistExpr, t, settings: EngineSettings = DEFAULT_SETTINGS) -> MomentValue:
    """
    E|e|^t for a rational t, for expressions built from tabled atoms with products, powers and scalings.
    """
    return _absolute_moment(e, to_scalar(t, "moment order"), settings.precision_digits)


@lru_cache(maxsize=None)
def _absolute_moment(e: DistExpr, t: Rational, digits: int) -> MomentValue:
    if t == 0:
        return MomentValue.of(1)
    if isinstance(e, Atom):
        table = gamma_table(e)
        if table is None:
            raise UnsupportedExpression(f"no closed form for E|X|^{t} of {e.kind}", e)
        return table_moment(table, t, digits)
    if isinstance(e, Product):
        value = MomentValue.of(1)
        for factor in e.factors:
            value = value * _absolute_moment(factor, t, digits)
        return value
    if isinstance(e, Power):
        return _absolute_moment(e.base, e.gamma * t, digits)
    if isinstance(e, Scale):
        return _absolute_moment(e.base, t, digits) * _power_value(abs(e.c), t, digits)
    if t.is_Integer and t % 2 == 0:
        return _raw_moment(e, int(t), digits)
    if t.is_Integer and is_positive(e):
        return _raw_moment(e, int(t), digits)
    raise UnsupportedExpression(f"no closed form for absolute moments of order {t}", e)


def _power_value(c: Rational, t: Rational, digits: int) -> MomentValue:
    value = c ** t
    if value.is_Rational:
        return MomentValue.of(value)
    with mpmath.workdps(digits):
        return MomentValue.of(mpmath.power(scalar_to_mpf(c), scalar_to_mpf(t)))


def moments(e: DistExpr, k, settings: EngineSettings = DEFAULT_SETTINGS) -> MomentValue:
    """
    The moment E[e^k].

    :param e: the distribution expression
    :param k: an integer order (negative orders allowed where they exist), or a rational order for a.s.
        positive expressions
    :param settings: the working precision of approximate values
    :return: the MomentValue
    """

    k = to_scalar(k, "moment order")
    if not k.is_Integer:
        if not is_positive(e):
            raise UnsupportedExpression(f"moments of non-integer order {k} need an a.s. positive expression", e)
        return _absolute_moment(e, k, settings.precision_digits)
    return _raw_moment(e, int(k), settings.precision_digits)


@lru_cache(maxsize=None)
def _raw_moment(e: DistExpr, k: int, digits: int) -> MomentValue:
    if k == 0:
        return MomentValue.of(1)

    if isinstance(e, Atom):
        return _atom_moment(e, k, digits)

    if isinstance(e, Product):
        value = MomentValue.of(1)
        for factor in e.factors:
            value = value * _raw_moment(factor, k, digits)
        return value

    if isinstance(e, Power):
        order = e.gamma * k
        if order.is_Integer:
            return _raw_moment(e.base, int(order), digits)
        return _absolute_moment(e.base, order, digits)

    if isinstance(e, Scale):
        return _raw_moment(e.base, k, digits) * e.c ** k

    if k < 0:
        raise MomentUnavailable(k, f"negative moments of {type(e).__name__} expressions have no closed form")

    if isinstance(e, Shift):
        value = MomentValue.of(0)
        for j in range(k + 1):
            value = value + _raw_moment(e.base, j, digits) * (binomial(k, j) * e.mu ** (k - j))
        return value

    if isinstance(e, IidSum):
        return _iid_sum_moment(e.base, e.n, k, digits)

    raise TypeError(f"not a distribution expression: {e!r}")


@lru_cache(maxsize=None)
def _iid_sum_moment(base: DistExpr, n: int, k: int, digits: int) -> MomentValue:
    if n == 1:
        return _raw_moment(base, k, digits)
    # E(S + X)^k = Σ_j C(k, j) E S^j E X^(k-j)
    value = MomentValue.of(0)
    for j in range(k + 1):
        term = _iid_sum_moment(base, n - 1, j, digits) * _raw_moment(base, k - j, digits)
        value = value + term * binomial(k, j)
    return value


def _atom_moment(a: Atom, k: int, digits: int) -> MomentValue:
    table = gamma_table(a)
    if table is not None:
        value = table_moment(table, Rational(k), digits)
        if table.symmetric and k % 2 and value.exists:
            return MomentValue.of(0)
        return value

    if k < 0:
        return MomentValue.does_not_exist(f"{a.kind} has no negative moments")
    if a.kind == "Normal":
        return MomentValue.of(_normal_moments(a.param("mu"), a.param("sigma2"), k))
    if a.kind == "VG":
        return MomentValue.of(_vg_moment(a.param("r"), a.param("theta"), a.param("sigma"), k))
    raise UnsupportedExpression(f"no moments are known for {a.kind}", a)


def moment_sequence(e: DistExpr, kmax: int, settings: EngineSettings = DEFAULT_SETTINGS) -> Tuple[MomentValue, ...]:
    """
    (E e^0, ..., E e^kmax).
    """
    return tuple(moments(e, k, settings) for k in range(kmax + 1))
