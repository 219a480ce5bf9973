"""
Stein operators of the catalog distributions, written with T_r = MD + rI and the M power that puts them in
Assumption-1 shape, plus the generic constructions from a Pearson-type or rational score function.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from sympy import Rational

from stein_algebra.src.exceptions import InvalidParameter, ShapeError
from stein_algebra.src.catalog.atoms import Atom, DistExpr, Shift
from stein_algebra.src.constants import SHIFTABLE_ATOMS
from stein_algebra.src.operator_core.assumption_one import AssumptionOneForm, detect_assumption1
from stein_algebra.src.operator_core.euler import EulerPoly, TFactor, euler_to_expanded
from stein_algebra.src.operator_core.expanded import ExpandedOp, compose, d_power, m_power
from stein_algebra.src.operator_core.scalars import to_scalar

logger = logging.getLogger(__name__)

SteinOperator = Union[AssumptionOneForm, ExpandedOp]


def _t(*shifts, leading=1) -> EulerPoly:
    return EulerPoly.from_t_factors(shifts, leading)


def _gamma_form(r, lam) -> AssumptionOneForm:
    # T_r - λM
    return AssumptionOneForm(_t(r), lam, 1, _t())


def stein_operator(a: Atom) -> SteinOperator:
    """
    Returns the classical Stein operator of a catalog atom, as an AssumptionOneForm whenever it has that shape.

    :param a: the atom
    :return: AssumptionOneForm, or ExpandedOp for Normal with μ ≠ 0 and VG with θ ≠ 0
    """

    kind, p = a.kind, a.parameters
    if kind == "Normal":
        mu, sigma2 = p["mu"], p["sigma2"]
        if mu == 0:
            return AssumptionOneForm(_t(1, leading=sigma2), 1, 2, _t())
        # σ²T_1 + μM - M²
        return euler_to_expanded(_t(1, leading=sigma2)) + m_power(1) * mu - m_power(2)
    if kind == "Gamma":
        return _gamma_form(p["r"], p["lambda"])
    if kind == "Exponential":
        return _gamma_form(1, p["lambda"])
    if kind == "ChiSq":
        return _gamma_form(p["d"] / 2, Rational(1, 2))
    if kind == "Beta":
        return AssumptionOneForm(_t(p["a"]), 1, 1, _t(p["a"] + p["b"]))
    if kind == "StudentT":
        nu = p["nu"]
        return AssumptionOneForm(_t(1, leading=nu), -1, 2, _t(2 - nu))
    if kind == "InverseGamma":
        return AssumptionOneForm(_t(leading=p["beta"]), -1, 1, _t(1 - p["alpha"]))
    if kind == "FDist":
        d1, d2 = p["d1"], p["d2"]
        return AssumptionOneForm(_t(d1 / 2, leading=d2), -d1, 1, _t(1 - d2 / 2))
    if kind == "PRR":
        s = p["s"]
        return AssumptionOneForm(_t(1, 2, leading=s), 1, 2, _t(2 * s))
    if kind == "VGSym" or (kind == "VG" and p["theta"] == 0):
        r, sigma = p["r"], p["sigma"]
        return AssumptionOneForm(_t(1, r, leading=sigma ** 2), 1, 2, _t())
    if kind == "VG":
        r, theta, sigma = p["r"], p["theta"], p["sigma"]
        # σ²T_1T_r + 2θMT_{r/2+1} - M²
        return euler_to_expanded(_t(1, r, leading=sigma ** 2)) \
            + compose(m_power(1), euler_to_expanded(_t(r / 2 + 1, leading=2 * theta))) - m_power(2)
    if kind == "GenGamma":
        r, lam, q = p["r"], p["lambda"], int(p["q"])
        return AssumptionOneForm(_t(r), q * lam ** q, q, _t())
    raise InvalidParameter(f"no Stein operator is known for {kind}")


def as_expanded(a: SteinOperator) -> ExpandedOp:
    return a.expand() if isinstance(a, AssumptionOneForm) else a


def scale_operator(a: SteinOperator, c) -> SteinOperator:
    """
    Stein operator of c·X from one of X: the coefficient of M^j D^i is multiplied by c^(i-j). On
    Assumption-1 forms this only rescales b by c^-q.
    """

    c = to_scalar(c, "scale factor")
    if c == 0:
        raise InvalidParameter("the scale factor must be nonzero")
    if isinstance(a, AssumptionOneForm):
        return AssumptionOneForm(a.L, a.b / c ** a.q, a.q, a.K)
    return ExpandedOp.from_mapping({(i, j): coefficient * c ** (i - j) for (i, j), coefficient in a.terms})


def score_operator(num: Sequence, den: Sequence) -> ExpandedOp:
    """
    The operator D∘den(M) + num(M) of a distribution with score p'/p = num/den.

    :param num: ascending coefficients of the numerator polynomial
    :param den: ascending coefficients of the denominator polynomial
    :return: the ExpandedOp
    """

    den = [to_scalar(c, "denominator coefficient") for c in den]
    num = [to_scalar(c, "numerator coefficient") for c in num]
    if not any(den):
        raise InvalidParameter("the denominator of the score must not vanish")

    den_operator = ExpandedOp.from_mapping({(0, j): c for j, c in enumerate(den)})
    num_operator = ExpandedOp.from_mapping({(0, i): c for i, c in enumerate(num)})
    return compose(d_power(1), den_operator) + num_operator


def score_assumption_one(num: Sequence, den: Sequence) -> Optional[AssumptionOneForm]:
    """
    The Assumption-1 form of score_operator(num, den), or None when the score does not lead to one.
    """

    try:
        return detect_assumption1(score_operator(num, den))
    except ShapeError as e:
        logger.debug("score %s / %s gives no Assumption-1 operator: %s", num, den, e)
        return None


def pearson_operator(a, ell, delta0, delta1, delta2) -> ExpandedOp:
    """
    Stein operator of a Pearson distribution with score -(a·x - ℓ)/(δ2·x² + δ1·x + δ0). When δ0 ≠ 0 the operator
    is applied to x·f, which keeps it in Assumption-1 shape.
    """

    a, ell, delta0, delta1, delta2 = (to_scalar(v, name) for v, name in
                                      ((a, "a"), (ell, "l"), (delta0, "delta0"), (delta1, "delta1"),
                                       (delta2, "delta2")))
    if delta0 == delta1 == delta2 == 0:
        raise InvalidParameter("the Pearson denominator must not vanish")
    operator = score_operator((ell, -a), (delta0, delta1, delta2))
    if delta0 != 0:
        operator = compose(operator, m_power(1))
    return operator


@dataclass(frozen=True)
class Prop314Shape:
    """
    Parameters of a first-order operator M - α·T_a - β·T_b·D; an identity factor stands for an infinite
    parameter.
    """

    alpha: Rational
    beta: Rational
    a: TFactor
    b: TFactor


def prop314_shape(e: DistExpr) -> Optional[Prop314Shape]:
    """
    Writes the first-order Stein operator of an expression as M - α·T_a - β·T_b·D when possible: normal laws,
    variance-gamma laws and (shifted) gamma laws.
    """

    if isinstance(e, Atom) and e.kind == "Normal":
        return Prop314Shape(e.param("mu"), e.param("sigma2"), TFactor.identity(), TFactor.identity())
    if isinstance(e, Atom) and e.kind in ("VG", "VGSym"):
        p = e.parameters
        theta = p.get("theta", Rational(0))
        return Prop314Shape(2 * theta, p["sigma"] ** 2, TFactor.finite(p["r"] / 2), TFactor.finite(p["r"]))

    mu = Rational(0)
    if isinstance(e, Shift):
        e, mu = e.base, e.mu
    if isinstance(e, Atom) and e.kind in SHIFTABLE_ATOMS:
        r, lam = gamma_parameters(e)
        # T_{r+λμ} - μD - λM, divided by -λ
        return Prop314Shape(1 / lam, -mu / lam, TFactor.finite(r + lam * mu), TFactor.identity())
    return None


def gamma_parameters(a: Atom):
    """
    (r, λ) of a gamma-family atom.
    """

    if a.kind == "Gamma":
        return a.param("r"), a.param("lambda")
    if a.kind == "Exponential":
        return Rational(1), a.param("lambda")
    if a.kind == "ChiSq":
        return a.param("d") / 2, Rational(1, 2)
    raise InvalidParameter(f"{a.kind} is not a gamma distribution")
