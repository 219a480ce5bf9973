"""
Symbolic products of gamma functions, powers and constants in one complex variable s, the shape every Mellin
transform of the engine takes. Expressions are kept in a canonical form so that equal expressions built along
different routes compare equal as dataclasses.
"""
import enum
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Sequence, Tuple

import mpmath
from sympy import Rational, ceiling, factorrat, rf

from stein_algebra.src.config import EngineSettings, DEFAULT_SETTINGS
from stein_algebra.src.exceptions import ShapeError
from stein_algebra.src.operator_core.scalars import to_scalar, scalar_to_str, scalar_to_mpf

logger = logging.getLogger(__name__)

Affine = Tuple[Rational, Rational]  # (α, β) meaning α·s + β

HALF = Rational(1, 2)


class ComparisonResult(enum.Enum):
    STRUCTURALLY_EQUAL = "StructurallyEqual"
    NUMERICALLY_EQUAL = "NumericallyEqual"
    DIFFERENT = "Different"


@dataclass(frozen=True)
class GammaProductExpr:
    """
    sign · Π p^(α_p·s + β_p) · π^pi_exponent · Π Γ(e·s + f)^power

    Constant and s-dependent powers are merged per prime, constant gamma values are reduced to a rational times
    Γ(f0) with f0 in (0, 1) (Γ(1/2) becoming π^(1/2)), and gamma factors with the same argument are merged.
    Build instances through the helpers below rather than the constructor.
    """

    sign: int = 1
    primes: Tuple[Tuple[int, Affine], ...] = ()
    pi_exponent: Rational = Rational(0)
    gammas: Tuple[Tuple[Affine, int], ...] = ()

    @staticmethod
    def one() -> "GammaProductExpr":
        return GammaProductExpr()

    @staticmethod
    def constant(c) -> "GammaProductExpr":
        c = to_scalar(c, "constant")
        if c == 0:
            raise ShapeError("a gamma product cannot be zero")
        return _build(-1 if c < 0 else 1, _factor_base(abs(c), Rational(0), Rational(1)), Rational(0), {})

    @staticmethod
    def power(base, alpha, beta) -> "GammaProductExpr":
        """
        base^(α·s + β) for a positive rational base.
        """
        base = to_scalar(base, "power base")
        if base <= 0:
            raise ShapeError(f"power bases must be positive, got {base}")
        return _build(1, _factor_base(base, to_scalar(alpha), to_scalar(beta)), Rational(0), {})

    @staticmethod
    def pi_power(exponent) -> "GammaProductExpr":
        return _build(1, {}, to_scalar(exponent), {})

    @staticmethod
    def gamma(e, f, power: int = 1) -> "GammaProductExpr":
        """
        Γ(e·s + f)^power.
        """
        return _build(1, {}, Rational(0), {(to_scalar(e), to_scalar(f)): int(power)})

    @property
    def is_constant(self) -> bool:
        return all(alpha == 0 for _, (alpha, _) in self.primes) and all(e == 0 for (e, _), _ in self.gammas)

    def __mul__(self, other: "GammaProductExpr") -> "GammaProductExpr":
        primes = _merge_affine(self.primes, other.primes)
        gammas = dict(self.gammas)
        for argument, power in other.gammas:
            gammas[argument] = gammas.get(argument, 0) + power
        return _build(self.sign * other.sign, primes, self.pi_exponent + other.pi_exponent, gammas)

    def __pow__(self, n: int) -> "GammaProductExpr":
        n = int(n)
        return _build(self.sign ** (abs(n) % 2),
                      {p: (alpha * n, beta * n) for p, (alpha, beta) in self.primes},
                      self.pi_exponent * n,
                      {argument: power * n for argument, power in self.gammas})

    def inverse(self) -> "GammaProductExpr":
        return self ** -1

    def __truediv__(self, other: "GammaProductExpr") -> "GammaProductExpr":
        return self * other.inverse()

    def substitute(self, a, b) -> "GammaProductExpr":
        """
        The expression with s replaced by a·s + b.
        """

        a, b = to_scalar(a), to_scalar(b)
        primes = {p: (alpha * a, alpha * b + beta) for p, (alpha, beta) in self.primes}
        gammas = {}
        for (e, f), power in self.gammas:
            argument = (e * a, e * b + f)
            gammas[argument] = gammas.get(argument, 0) + power
        return _build(self.sign, primes, self.pi_exponent, gammas)

    def gamma_arguments(self, s) -> Iterable[Rational]:
        s = to_scalar(s)
        return [e * s + f for (e, f), _ in self.gammas]

    def log_abs_value(self, s, settings: EngineSettings = DEFAULT_SETTINGS) -> Optional[mpmath.mpf]:
        """
        log|value| at a rational point s, in extended precision. None when some gamma argument is not
        positive, i.e. the point lies outside the region where the comparison is carried out.
        """

        s = to_scalar(s)
        with mpmath.workdps(settings.precision_digits):
            total = mpmath.mpf(0)
            for (e, f), power in self.gammas:
                argument = e * s + f
                if argument <= 0:
                    return None
                total += power * mpmath.loggamma(scalar_to_mpf(argument))
            for p, (alpha, beta) in self.primes:
                total += scalar_to_mpf(alpha * s + beta) * mpmath.log(p)
            total += scalar_to_mpf(self.pi_exponent) * mpmath.log(mpmath.pi)
            return total

    def evaluate(self, s, settings: EngineSettings = DEFAULT_SETTINGS) -> Optional[mpmath.mpf]:
        log_value = self.log_abs_value(s, settings)
        if log_value is None:
            return None
        with mpmath.workdps(settings.precision_digits):
            return self.sign * mpmath.exp(log_value)

    def render(self) -> str:
        return render_gamma_product(self)

    def to_json(self) -> dict:
        return {"sign": self.sign,
                "powers": [{"base": p, "s": scalar_to_str(alpha), "const": scalar_to_str(beta)}
                           for p, (alpha, beta) in self.primes],
                "pi_exponent": scalar_to_str(self.pi_exponent),
                "gammas": [{"s": scalar_to_str(e), "const": scalar_to_str(f), "power": power}
                           for (e, f), power in self.gammas],
                "rendered": self.render()}

    def __str__(self) -> str:
        return self.render()


def _factor_base(base: Rational, alpha: Rational, beta: Rational) -> Dict[int, Affine]:
    return {int(p): (alpha * e, beta * e) for p, e in factorrat(base).items()}


def _merge_affine(x: Sequence[Tuple[int, Affine]], y) -> Dict[int, Affine]:
    merged = dict(x)
    for p, (alpha, beta) in (y.items() if isinstance(y, dict) else y):
        old_alpha, old_beta = merged.get(p, (Rational(0), Rational(0)))
        merged[p] = (old_alpha + alpha, old_beta + beta)
    return merged


def _constant_gamma(f: Rational) -> Tuple[Rational, Rational, Optional[Rational]]:
    """
    Γ(f) = ratio · π^pi_exponent · Γ(f0) with f0 in (0, 1); f0 is None when no gamma factor remains.
    """

    if f.is_Integer:
        if f <= 0:
            raise ShapeError(f"Γ has a pole at {f}")
        return rf(1, f - 1), Rational(0), None
    f0 = f - ceiling(f) + 1
    n = f - f0
    ratio = rf(f0, n) if n >= 0 else 1 / rf(f, -n)
    if f0 == HALF:
        return Rational(ratio), HALF, None
    return Rational(ratio), Rational(0), f0


def _build(sign: int, primes: Dict[int, Affine], pi_exponent: Rational,
           gammas: Dict[Affine, int]) -> GammaProductExpr:
    """
    Canonicalizes the parts of a gamma product.
    """

    constant = Rational(1)
    kept = {}
    for (e, f), power in gammas.items():
        if power == 0:
            continue
        if e != 0:
            kept[(e, f)] = kept.get((e, f), 0) + power
            continue
        ratio, pi_part, f0 = _constant_gamma(f)
        constant *= ratio ** power
        pi_exponent += pi_part * power
        if f0 is not None:
            kept[(Rational(0), f0)] = kept.get((Rational(0), f0), 0) + power

    if constant < 0:
        sign, constant = -sign, -constant
    primes = _merge_affine(primes, _factor_base(constant, Rational(0), Rational(1)))

    return GammaProductExpr(
        sign=sign,
        primes=tuple(sorted((p, affine) for p, affine in primes.items() if affine != (0, 0))),
        pi_exponent=Rational(pi_exponent),
        gammas=tuple(sorted((argument, power) for argument, power in kept.items() if power != 0)),
    )


def _render_affine(alpha: Rational, beta: Rational) -> str:
    if alpha == 0:
        return scalar_to_str(beta)
    s_part = "s" if alpha == 1 else ("-s" if alpha == -1 else f"{scalar_to_str(alpha)}s")
    if beta == 0:
        return s_part
    return f"{s_part}{'+' if beta > 0 else '-'}{scalar_to_str(abs(beta))}"


def render_gamma_product(g: GammaProductExpr) -> str:
    """
    Renders e.g. "2^{s-1} π^{-1/2} Γ(1/2s)^2 Γ(1/2s+1)".
    """

    parts = []
    for p, (alpha, beta) in g.primes:
        parts.append(f"{p}^{{{_render_affine(alpha, beta)}}}")
    if g.pi_exponent != 0:
        parts.append(f"π^{{{scalar_to_str(g.pi_exponent)}}}")
    for (e, f), power in g.gammas:
        parts.append(f"Γ({_render_affine(e, f)})" + (f"^{{{power}}}" if power != 1 else ""))
    text = " ".join(parts) or "1"
    return text if g.sign > 0 else f"-{text}"


def gamma_expr_equal(x: GammaProductExpr, y: GammaProductExpr,
                     settings: EngineSettings = DEFAULT_SETTINGS) -> ComparisonResult:
    """
    Compares two gamma products: first their canonical structures, then their log-values at the configured
    probe points (points where a gamma argument is not positive are skipped).

    :param x: the first expression
    :param y: the second expression
    :param settings: probe points, tolerance and working precision
    :return: the comparison verdict
    """

    if x == y:
        return ComparisonResult.STRUCTURALLY_EQUAL
    if x.sign != y.sign:
        return ComparisonResult.DIFFERENT

    compared = 0
    with mpmath.workdps(settings.precision_digits):
        for s in settings.probe_points:
            log_x, log_y = x.log_abs_value(s, settings), y.log_abs_value(s, settings)
            if log_x is None or log_y is None:
                logger.warning("skipping Mellin probe at s = %s: a gamma argument is not positive", s)
                continue
            compared += 1
            if abs(log_x - log_y) > settings.relative_tolerance * max(1, abs(log_x), abs(log_y)):
                return ComparisonResult.DIFFERENT

    if not compared:
        logger.warning("no probe point was usable; the gamma products are reported as different")
        return ComparisonResult.DIFFERENT
    return ComparisonResult.NUMERICALLY_EQUAL
