"""
Polynomials in the Euler operator θ = MD. They form a commutative subalgebra; T_r = θ + r.
"""
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple, Union

from sympy import Poly, QQ, Rational, Symbol, ff
from sympy.functions.combinatorial.numbers import stirling

from stein_algebra.src.exceptions import ShapeError
from stein_algebra.src.operator_core.expanded import ExpandedOp, render_coefficient
from stein_algebra.src.operator_core.scalars import to_scalar, scalar_to_str

THETA = Symbol("theta")


@dataclass(frozen=True)
class TFactor:
    """
    T_r = MD + rI when shift is a rational r, or the identity (the scaled r -> inf limit of r^-1 T_r) when
    shift is None.
    """

    shift: Optional[Rational] = None

    @staticmethod
    def finite(r) -> "TFactor":
        return TFactor(to_scalar(r, "T-factor parameter"))

    @staticmethod
    def identity() -> "TFactor":
        return TFactor(None)

    @property
    def is_identity(self) -> bool:
        return self.shift is None

    def shifted(self, c) -> "TFactor":
        """
        T_{r+c}; the identity factor absorbs finite shifts.
        """
        if self.is_identity:
            return self
        return TFactor(self.shift + to_scalar(c))

    def as_euler(self) -> "EulerPoly":
        if self.is_identity:
            return EulerPoly.constant(1)
        return EulerPoly.from_coefficients((self.shift, 1))

    def as_expanded(self) -> ExpandedOp:
        return euler_to_expanded(self.as_euler())

    def render(self) -> str:
        if self.is_identity:
            return "I"
        return f"T_{_render_index(self.shift)}"


def _render_index(r: Rational) -> str:
    text = scalar_to_str(r)
    return text if len(text) == 1 else "{" + text + "}"


@dataclass(frozen=True)
class FactoredEuler:
    """
    leading · Π T-factors · Π blocks, where blocks are the monic factors that are irreducible over Q and of
    degree ≥ 2.
    """

    leading: Rational
    factors: Tuple[TFactor, ...]
    blocks: Tuple["EulerPoly", ...] = ()

    @property
    def is_complete(self) -> bool:
        return not self.blocks


@dataclass(frozen=True)
class EulerPoly:
    """
    A polynomial Σ c_n θ^n, stored as its ascending coefficient tuple without trailing zeros.
    """

    coefficients: Tuple[Rational, ...] = ()

    @staticmethod
    def from_coefficients(coefficients: Iterable) -> "EulerPoly":
        values = [to_scalar(c, "coefficient") for c in coefficients]
        while values and values[-1] == 0:
            values.pop()
        return EulerPoly(tuple(values))

    @staticmethod
    def constant(c) -> "EulerPoly":
        return EulerPoly.from_coefficients((c,))

    @staticmethod
    def theta() -> "EulerPoly":
        return EulerPoly.from_coefficients((0, 1))

    @staticmethod
    def from_poly(poly: Poly) -> "EulerPoly":
        return EulerPoly.from_coefficients(reversed(poly.all_coeffs()))

    @staticmethod
    def from_t_factors(factors: Iterable[Union[TFactor, Rational, int]], leading=1) -> "EulerPoly":
        result = EulerPoly.constant(leading)
        for factor in factors:
            if not isinstance(factor, TFactor):
                factor = TFactor.finite(factor)
            result = result * factor.as_euler()
        return result

    def to_poly(self) -> Poly:
        return Poly(list(reversed(self.coefficients)) or [0], THETA, domain=QQ)

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def degree(self) -> int:
        """
        Degree in θ; -1 for the zero polynomial.
        """
        return len(self.coefficients) - 1

    @property
    def leading_coefficient(self) -> Rational:
        return self.coefficients[-1] if self.coefficients else Rational(0)

    def monic(self) -> "EulerPoly":
        if self.is_zero:
            return self
        return self * (1 / self.leading_coefficient)

    def __add__(self, other: "EulerPoly") -> "EulerPoly":
        return EulerPoly.from_poly(self.to_poly() + other.to_poly())

    def __sub__(self, other: "EulerPoly") -> "EulerPoly":
        return EulerPoly.from_poly(self.to_poly() - other.to_poly())

    def __neg__(self) -> "EulerPoly":
        return self * -1

    def __mul__(self, other) -> "EulerPoly":
        if isinstance(other, EulerPoly):
            return EulerPoly.from_poly(self.to_poly() * other.to_poly())
        c = to_scalar(other, "factor")
        return EulerPoly.from_coefficients(c * coefficient for coefficient in self.coefficients)

    __rmul__ = __mul__

    def compose_affine(self, scale, shift) -> "EulerPoly":
        """
        P(scale·θ + shift).
        """
        scale, shift = to_scalar(scale), to_scalar(shift)
        if self.degree <= 0:
            return self
        return EulerPoly.from_poly(self.to_poly().compose(Poly(scale * THETA + shift, THETA, domain=QQ)))

    def shift(self, c) -> "EulerPoly":
        """
        P(θ + c); a T-factor T_r becomes T_{r+c}.
        """
        return self.compose_affine(1, c)

    def reflect(self, c) -> "EulerPoly":
        """
        P(c - θ).
        """
        return self.compose_affine(-1, c)

    def evaluate(self, x) -> Rational:
        x = to_scalar(x)
        value = Rational(0)
        for coefficient in reversed(self.coefficients):
            value = value * x + coefficient
        return value

    def gcd(self, other: "EulerPoly") -> "EulerPoly":
        return EulerPoly.from_poly(self.to_poly().gcd(other.to_poly()))

    def exquo(self, other: "EulerPoly") -> "EulerPoly":
        """
        Exact division; raises ShapeError when other does not divide self.
        """
        quotient, remainder = self.to_poly().div(other.to_poly())
        if not remainder.is_zero:
            raise ShapeError("polynomial division is not exact")
        return EulerPoly.from_poly(quotient)

    def factored(self) -> FactoredEuler:
        """
        Factorization over Q: linear factors a·θ + c become T-factors T_{c/a}, with a absorbed in the leading
        constant; irreducible factors of higher degree are kept as monic blocks.
        """

        if self.is_zero:
            raise ShapeError("the zero polynomial has no factorization")

        leading, factor_list = self.to_poly().factor_list()
        leading = Rational(leading)
        factors = []
        blocks = []
        for factor, multiplicity in factor_list:
            coefficients = factor.all_coeffs()
            if factor.degree() == 1:
                a, c = Rational(coefficients[0]), Rational(coefficients[1])
                leading *= a ** multiplicity
                factors += [TFactor.finite(c / a)] * multiplicity
            else:
                monic_block = EulerPoly.from_poly(factor).monic()
                leading *= Rational(coefficients[0]) ** multiplicity
                blocks += [monic_block] * multiplicity

        factors.sort(key=lambda t: t.shift)
        blocks.sort(key=lambda b: b.coefficients)
        return FactoredEuler(leading, tuple(factors), tuple(blocks))

    def render(self) -> str:
        return render_euler(self)

    def to_json(self) -> list:
        return [scalar_to_str(c) for c in self.coefficients]

    def __str__(self) -> str:
        return self.render()


def _render_poly_block(p: EulerPoly) -> str:
    parts = []
    for power in range(p.degree, -1, -1):
        c = p.coefficients[power]
        if c == 0:
            continue
        monomial = "I" if power == 0 else ("θ" if power == 1 else f"θ^{power}")
        parts.append(render_coefficient(c, monomial, not parts))
    return "(" + "".join(parts) + ")"


def render_euler(p: EulerPoly, unit: str = "I") -> str:
    """
    Renders an EulerPoly as a product of T-factors when it factors over Q, e.g. 2T_{1/2}, T_1^2T_r.

    :param p: the polynomial
    :param unit: text used for a bare constant (e.g. "I" for the identity operator)
    :return: the rendered text
    """

    if p.is_zero:
        return "0"
    factored = p.factored()
    counts = {}
    for factor in factored.factors:
        counts[factor] = counts.get(factor, 0) + 1
    body = "".join(factor.render() + (f"^{count}" if count > 1 else "") for factor, count in counts.items())
    body += "".join(_render_poly_block(block) for block in factored.blocks)
    if not body:
        body = unit
    return render_coefficient(factored.leading, body, True)


def euler_to_expanded(p: EulerPoly) -> ExpandedOp:
    """
    Expands a polynomial in θ = MD using θ^n = Σ_k S(n, k) M^k D^k (Stirling numbers of the second kind).

    :param p: the EulerPoly
    :return: its canonical ExpandedOp (diagonal: only M^l D^l terms)
    """

    total = {}
    for n, c in enumerate(p.coefficients):
        if c == 0:
            continue
        for k in range(n + 1):
            s = stirling(n, k)
            if s:
                total[(k, k)] = total.get((k, k), 0) + c * s
    return ExpandedOp.from_mapping(total)


def expanded_group_to_euler(terms: Union[ExpandedOp, Sequence[Tuple[int, object]]]) -> EulerPoly:
    """
    Converts a diagonal operator Σ c_l M^l D^l to a polynomial in θ using M^l D^l = θ(θ-1)...(θ-l+1).

    :param terms: a diagonal ExpandedOp, or a list of (l, c) pairs
    :return: the EulerPoly
    """

    if isinstance(terms, ExpandedOp):
        pairs = []
        for (i, j), c in terms.terms:
            if i != j:
                raise ShapeError(f"non-diagonal term M^{j}D^{i} cannot be written in θ alone")
            pairs.append((i, c))
    else:
        pairs = list(terms)

    result = Poly(0, THETA, domain=QQ)
    for level, c in pairs:
        result += Poly(to_scalar(c) * ff(THETA, int(level)), THETA, domain=QQ)
    return EulerPoly.from_poly(result)
