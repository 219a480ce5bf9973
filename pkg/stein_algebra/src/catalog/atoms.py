"""
Distribution expressions: catalog atoms combined by independent products, powers, shifts, scalings and iid sums.

The node constructors below (product, power, shift, scale, iid_sum) keep every tree in a normal form: nested
products are flattened, constants are pulled out of products, trivial powers, shifts, scalings and sums are
dropped. Parsing and rendering rely on this to be mutually inverse.
"""
from dataclasses import dataclass
from typing import Dict, Tuple, Union

from sympy import Rational

from stein_algebra.src.constants import ATOM_PARAMETERS, POSITIVE_ATOMS
from stein_algebra.src.exceptions import InvalidParameter
from stein_algebra.src.operator_core.scalars import to_scalar, to_positive_integer, scalar_to_str

# parameters that may take any rational value; all others must be positive
_UNRESTRICTED = {("Normal", "mu"), ("VG", "theta")}


@dataclass(frozen=True)
class Atom:
    kind: str
    params: Tuple[Rational, ...]

    def __post_init__(self):
        if self.kind not in ATOM_PARAMETERS:
            raise InvalidParameter(f"unknown distribution {self.kind!r}")
        names = ATOM_PARAMETERS[self.kind]
        if len(self.params) != len(names):
            raise InvalidParameter(f"{self.kind} takes {len(names)} parameter(s) ({', '.join(names)}), "
                                   f"got {len(self.params)}")

        params = tuple(to_scalar(value, f"{self.kind} parameter {name}") for name, value in zip(names, self.params))
        for name, value in zip(names, params):
            if (self.kind, name) not in _UNRESTRICTED and value <= 0:
                raise InvalidParameter(f"{self.kind} parameter {name} must be positive, got {value}")
        if self.kind == "PRR" and params[0] <= Rational(1, 2):
            raise InvalidParameter(f"PRR parameter s must exceed 1/2, got {params[0]}")
        if self.kind == "GenGamma":
            to_positive_integer(params[2], "GenGamma parameter q")
        object.__setattr__(self, "params", params)

    def param(self, name: str) -> Rational:
        return self.params[ATOM_PARAMETERS[self.kind].index(name)]

    @property
    def parameters(self) -> Dict[str, Rational]:
        return dict(zip(ATOM_PARAMETERS[self.kind], self.params))


def atom(kind: str, *params) -> Atom:
    return Atom(kind, tuple(params))


@dataclass(frozen=True)
class Product:
    """
    Product of independent factors.
    """
    factors: Tuple["DistExpr", ...]


@dataclass(frozen=True)
class Power:
    base: "DistExpr"
    gamma: Rational


@dataclass(frozen=True)
class Shift:
    base: "DistExpr"
    mu: Rational


@dataclass(frozen=True)
class Scale:
    """
    c·X for a nonzero rational c.
    """
    base: "DistExpr"
    c: Rational


@dataclass(frozen=True)
class IidSum:
    """
    Sum of n independent copies of base.
    """
    base: "DistExpr"
    n: int


DistExpr = Union[Atom, Product, Power, Shift, Scale, IidSum]


def product(*factors: DistExpr) -> DistExpr:
    flat = []
    constant = Rational(1)
    for factor in factors:
        if isinstance(factor, Scale):
            constant *= factor.c
            factor = factor.base
        if isinstance(factor, Product):
            flat.extend(factor.factors)
        else:
            flat.append(factor)
    if not flat:
        raise InvalidParameter("a product needs at least one factor")
    body = flat[0] if len(flat) == 1 else Product(tuple(flat))
    return scale(body, constant)


def power(base: DistExpr, gamma) -> DistExpr:
    gamma = to_scalar(gamma, "exponent")
    if gamma == 0:
        raise InvalidParameter("the exponent of a power must be nonzero")
    if gamma == 1:
        return base
    if not gamma.is_Integer and not is_positive(base):
        raise InvalidParameter("non-integer powers need an a.s. positive base")
    if isinstance(base, Power) and (gamma.is_Integer and base.gamma.is_Integer or is_positive(base.base)):
        return power(base.base, base.gamma * gamma)
    return Power(base, gamma)


def shift(base: DistExpr, mu) -> DistExpr:
    mu = to_scalar(mu, "shift")
    if mu == 0:
        return base
    if isinstance(base, Shift):
        return shift(base.base, base.mu + mu)
    return Shift(base, mu)


def scale(base: DistExpr, c) -> DistExpr:
    c = to_scalar(c, "scale factor")
    if c == 0:
        raise InvalidParameter("the scale factor must be nonzero")
    if isinstance(base, Scale):
        return scale(base.base, base.c * c)
    if c == 1:
        return base
    return Scale(base, c)


def iid_sum(base: DistExpr, n) -> DistExpr:
    n = to_positive_integer(n, "number of summands")
    if n == 1:
        return base
    return IidSum(base, n)


def is_positive(e: DistExpr) -> bool:
    """
    True when the expression is a.s. positive (or a.s. nonnegative, for even powers of symmetric laws).
    """

    if isinstance(e, Atom):
        return e.kind in POSITIVE_ATOMS
    if isinstance(e, Product):
        return all(is_positive(factor) for factor in e.factors)
    if isinstance(e, Power):
        return is_positive(e.base) or (e.gamma.is_Integer and e.gamma % 2 == 0)
    if isinstance(e, Scale):
        return e.c > 0 and is_positive(e.base)
    if isinstance(e, Shift):
        return e.mu > 0 and is_positive(e.base)
    if isinstance(e, IidSum):
        return is_positive(e.base)
    raise TypeError(f"not a distribution expression: {e!r}")


def is_symmetric(e: DistExpr) -> bool:
    """
    True when the expression is known to be symmetric about 0.
    """

    if isinstance(e, Atom):
        if e.kind == "Normal":
            return e.param("mu") == 0
        if e.kind == "VG":
            return e.param("theta") == 0
        return e.kind in ("StudentT", "VGSym")
    if isinstance(e, Product):
        return any(is_symmetric(factor) for factor in e.factors) and \
            all(is_symmetric(factor) or is_positive(factor) for factor in e.factors)
    if isinstance(e, Power):
        return is_symmetric(e.base) and e.gamma.is_Integer and e.gamma % 2 != 0
    if isinstance(e, (Scale, IidSum)):
        return is_symmetric(e.base)
    return False


def _render_exponent(gamma: Rational) -> str:
    return scalar_to_str(gamma) if gamma.is_Integer else f"({scalar_to_str(gamma)})"


def _render_scalar(c: Rational) -> str:
    return scalar_to_str(c) if c.is_Integer and c > 0 else f"({scalar_to_str(c)})"


def render_expression(e: DistExpr) -> str:
    """
    Renders an expression in the grammar read by the expression parser, e.g. "Gamma(2,1/2)*Beta(1,3)^-1".
    """

    if isinstance(e, Atom):
        return f"{e.kind}({','.join(scalar_to_str(value) for value in e.params)})"
    if isinstance(e, Product):
        return "*".join(render_expression(factor) for factor in e.factors)
    if isinstance(e, Power):
        base = render_expression(e.base)
        if not isinstance(e.base, Atom):
            base = f"({base})"
        return f"{base}^{_render_exponent(e.gamma)}"
    if isinstance(e, Shift):
        return f"shift({render_expression(e.base)},{scalar_to_str(e.mu)})"
    if isinstance(e, Scale):
        return f"{_render_scalar(e.c)}*{render_expression(e.base)}"
    if isinstance(e, IidSum):
        return f"sum({render_expression(e.base)},{e.n})"
    raise TypeError(f"not a distribution expression: {e!r}")


def expression_to_json(e: DistExpr) -> dict:
    if isinstance(e, Atom):
        return {"atom": e.kind, "params": {name: scalar_to_str(value) for name, value in e.parameters.items()}}
    if isinstance(e, Product):
        return {"product": [expression_to_json(factor) for factor in e.factors]}
    if isinstance(e, Power):
        return {"power": expression_to_json(e.base), "gamma": scalar_to_str(e.gamma)}
    if isinstance(e, Shift):
        return {"shift": expression_to_json(e.base), "mu": scalar_to_str(e.mu)}
    if isinstance(e, Scale):
        return {"scale": expression_to_json(e.base), "c": scalar_to_str(e.c)}
    if isinstance(e, IidSum):
        return {"sum": expression_to_json(e.base), "n": e.n}
    raise TypeError(f"not a distribution expression: {e!r}")
