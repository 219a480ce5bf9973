"""
Meijer G-function candidates for densities: parameters read off a density ODE, the standard G identities, and
the Mellin transform of x -> z^w·G(z), z = prefactor·x^power, used to normalize and verify candidates.
"""
import logging
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

from sympy import Rational

from stein_algebra.src.config import EngineSettings, DEFAULT_SETTINGS
from stein_algebra.src.constants import G_ORDER_ALL_LOWER, SUPPORT_POSITIVE, SUPPORT_SYMMETRIC
from stein_algebra.src.duality_mellin.duality import DensityODE
from stein_algebra.src.duality_mellin.gamma_product import GammaProductExpr
from stein_algebra.src.exceptions import RefusedTransform, ShapeError
from stein_algebra.src.operator_core.assumption_one import AssumptionOneForm
from stein_algebra.src.operator_core.euler import EulerPoly
from stein_algebra.src.operator_core.scalars import to_scalar, scalar_to_str

logger = logging.getLogger(__name__)

IDENTITY_SHIFT = "shift"
IDENTITY_INVERT = "invert"
IDENTITY_REDUCE = "reduce"


@dataclass(frozen=True)
class GParams:
    """
    The candidate z^w · G^{m,n}_{p,q}(z | upper; lower) with z = prefactor · x^power.

    Within the upper parameters the first n, and within the lower parameters the first m, form the blocks that
    enter the numerator of the Mellin-Barnes integrand; each block is kept sorted.
    """

    m: int
    n: int
    p: int
    q: int
    upper: Tuple[Rational, ...]
    lower: Tuple[Rational, ...]
    prefactor: Rational
    power: Rational
    outer_exponent: Rational = Rational(0)
    alternatives: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(to_scalar(a, "upper parameter") for a in self.upper))
        object.__setattr__(self, "lower", tuple(to_scalar(b, "lower parameter") for b in self.lower))
        for name in ("prefactor", "power", "outer_exponent"):
            object.__setattr__(self, name, to_scalar(getattr(self, name), name))
        if len(self.upper) != self.p or len(self.lower) != self.q:
            raise ShapeError(f"G^{self.m},{self.n}_{self.p},{self.q} needs {self.p} upper and {self.q} lower "
                             f"parameters, got {len(self.upper)} and {len(self.lower)}")
        if not (0 <= self.m <= self.q and 0 <= self.n <= self.p):
            raise ShapeError(f"orders must satisfy 0 ≤ m ≤ q and 0 ≤ n ≤ p, got m={self.m}, n={self.n}, "
                             f"p={self.p}, q={self.q}")
        if self.power == 0:
            raise ShapeError("the argument power must be nonzero")

    def effective_upper(self) -> List[Rational]:
        return [a + self.outer_exponent for a in self.upper]

    def effective_lower(self) -> List[Rational]:
        return [b + self.outer_exponent for b in self.lower]

    def render(self) -> str:
        argument = f"{scalar_to_str(self.prefactor)}·x^{scalar_to_str(self.power)}"
        outer = f"z^{scalar_to_str(self.outer_exponent)}·" if self.outer_exponent != 0 else ""
        upper = ", ".join(scalar_to_str(a) for a in self.upper) or "-"
        lower = ", ".join(scalar_to_str(b) for b in self.lower) or "-"
        return f"{outer}G^{{{self.m},{self.n}}}_{{{self.p},{self.q}}}(z = {argument} | {upper} ; {lower})"

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "p": self.p, "q": self.q,
                "upper": [scalar_to_str(a) for a in self.upper],
                "lower": [scalar_to_str(b) for b in self.lower],
                "arg": {"prefactor": scalar_to_str(self.prefactor), "power": scalar_to_str(self.power)},
                "outer_exponent": scalar_to_str(self.outer_exponent),
                "alternatives": [list(orders) for orders in self.alternatives],
                "rendered": self.render()}

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class MellinValidity:
    """
    Convergence bookkeeping of the Mellin transform of a G candidate. The strip is given in s; None stands for
    an unbounded side.
    """

    strip: Tuple[Optional[Rational], Optional[Rational]]
    conditions: Tuple[str, ...]

    @property
    def valid(self) -> bool:
        return "positive_prefactor" in self.conditions and "nonempty_strip" in self.conditions and \
            any(c in self.conditions for c in ("balanced_orders", "exponential_decay", "compact_support"))

    def contains(self, s) -> bool:
        s = to_scalar(s)
        low, high = self.strip
        return (low is None or low < s) and (high is None or s < high)

    def to_json(self) -> dict:
        return {"strip": [None if x is None else scalar_to_str(x) for x in self.strip],
                "conditions": list(self.conditions), "valid": self.valid}


def _sort_blocks(params: Sequence[Rational], k: int) -> Tuple[Rational, ...]:
    return tuple(sorted(params[:k])) + tuple(sorted(params[k:]))


def _split_t_factors(p: EulerPoly, side: str) -> List[Rational]:
    factored = p.factored()
    if not factored.is_complete:
        raise ShapeError(f"the {side} side of the density ODE does not split into T-factors over Q")
    return [factor.shift for factor in factored.factors]


def _prefactor(c: Rational, h: int, p: int, q: int, m: int, n: int) -> Rational:
    return Rational(-1) ** (p - m - n) * c * Rational(h) ** (p - q)


def gparams_from_ode(o: DensityODE, support: str = SUPPORT_POSITIVE,
                     settings: EngineSettings = DEFAULT_SETTINGS) -> GParams:
    """
    Reads a Meijer G candidate off a density ODE L̃(θ)p - c'·x^h·K̃(θ)p = 0 with both sides split into T-factors.
    With c = c'/LC(L̃), the G equation in z = αx^h turns T_ρ into the lower parameter -ρ/h, T_κ into the upper
    parameter 1 - κ/h and fixes α = (-1)^(p-m-n)·c·h^(p-q).

    :param o: the density ODE
    :param support: "positive" picks orders (q, 0); "symmetric" picks (q, p) (overridden by the all_lower rule)
    :param settings: supplies the order selection rule
    :return: the candidate parameters, with every (m, n) choice giving a positive prefactor in alternatives
    """

    h = o.q
    c = o.coefficient / o.L.leading_coefficient
    lower = [-rho / h for rho in _split_t_factors(o.L, "left")]
    upper = [1 - kappa / h for kappa in _split_t_factors(o.K, "right")]
    p, q = len(upper), len(lower)

    if settings.g_order_rule == G_ORDER_ALL_LOWER or support == SUPPORT_POSITIVE:
        m, n = q, 0
    elif support == SUPPORT_SYMMETRIC:
        m, n = q, p
    else:
        raise ValueError(f"unknown support {support!r}")

    alternatives = tuple((mm, nn) for mm in range(q + 1) for nn in range(p + 1)
                         if _prefactor(c, h, p, q, mm, nn) > 0)
    if _prefactor(c, h, p, q, m, n) <= 0:
        if not alternatives:
            raise ShapeError("no choice of orders gives a positive argument prefactor")
        logger.warning("orders (%d, %d) give a negative prefactor; using (%d, %d) instead", m, n,
                       *alternatives[-1])
        m, n = alternatives[-1]

    g = GParams(m=m, n=n, p=p, q=q, upper=_sort_blocks(upper, n), lower=_sort_blocks(lower, m),
                prefactor=_prefactor(c, h, p, q, m, n), power=Rational(h), alternatives=alternatives)

    expected = AssumptionOneForm(o.L.monic(), c, h, o.K)
    if meijer_ode(g) != expected:
        raise ShapeError(f"the G candidate {g} does not reproduce the ODE {o}")
    logger.debug("G candidate %s", g)
    return g


def meijer_ode(g: GParams) -> AssumptionOneForm:
    """
    The Euler-type equation satisfied by z^w·G(z), z = αx^h (inverted first when h < 0):
        Π T_{-h·b_j} - (-1)^(p-m-n)·α·h^(q-p)·x^h·Π T_{h(1-a_j)}
    with the parameters taken after absorbing w.
    """

    if g.power < 0:
        g = g_identities(g, IDENTITY_INVERT)
    if not g.power.is_Integer:
        raise ShapeError(f"the argument power must be an integer to write the ODE, got {g.power}")
    h = int(g.power)
    L = EulerPoly.from_t_factors([-h * b for b in g.effective_lower()])
    K = EulerPoly.from_t_factors([h * (1 - a) for a in g.effective_upper()])
    return AssumptionOneForm(L, Rational(-1) ** (g.p - g.m - g.n) * g.prefactor * Rational(h) ** (g.q - g.p), h, K)


def _reduce_once(g: GParams) -> Optional[GParams]:
    upper, lower = list(g.upper), list(g.lower)
    # an upper parameter of the first block against a lower one outside the first block
    for j in range(g.n):
        for k in range(g.m, g.q):
            if upper[j] == lower[k]:
                del upper[j], lower[k]
                return replace(g, n=g.n - 1, p=g.p - 1, q=g.q - 1, upper=tuple(upper), lower=tuple(lower),
                               alternatives=())
    # an upper parameter outside the first block against a lower one of the first block
    for j in range(g.n, g.p):
        for k in range(g.m):
            if upper[j] == lower[k]:
                del upper[j], lower[k]
                return replace(g, m=g.m - 1, p=g.p - 1, q=g.q - 1, upper=tuple(upper), lower=tuple(lower),
                               alternatives=())
    return None


def g_identities(g: GParams, which: str, c=None) -> GParams:
    """
    Applies one G-function identity exactly on the parameters:
        shift   z^c·G(z | a; b) = G(z | a+c; b+c), so the outer exponent drops by c
        invert  G^{m,n}_{p,q}(z | a; b) = G^{n,m}_{q,p}(1/z | 1-b; 1-a)
        reduce  cancel equal upper/lower parameters lying in opposite blocks, lowering the orders

    :param g: the candidate
    :param which: "shift", "invert" or "reduce"
    :param c: the shift amount (shift only)
    :return: the transformed candidate; reduce without a matching pair returns g unchanged with a warning
    """

    if which == IDENTITY_SHIFT:
        if c is None:
            raise ValueError("shift needs an amount c")
        c = to_scalar(c, "shift")
        return replace(g, upper=tuple(a + c for a in g.upper), lower=tuple(b + c for b in g.lower),
                       outer_exponent=g.outer_exponent - c)

    if which == IDENTITY_INVERT:
        return GParams(m=g.n, n=g.m, p=g.q, q=g.p,
                       upper=_sort_blocks([1 - b for b in g.lower], g.m),
                       lower=_sort_blocks([1 - a for a in g.upper], g.n),
                       prefactor=1 / g.prefactor, power=-g.power, outer_exponent=-g.outer_exponent,
                       alternatives=tuple((n, m) for m, n in g.alternatives))

    if which == IDENTITY_REDUCE:
        reduced, result = _reduce_once(g), g
        while reduced is not None:
            result, reduced = reduced, _reduce_once(reduced)
        if result is g:
            logger.warning("no upper/lower parameter pair cancels in %s; reduce left it unchanged", g)
        return result

    raise ValueError(f"unknown G identity {which!r}")


def mellin_validity(g: GParams) -> MellinValidity:
    """
    Checks the conditions under which ∫ x^(s-1) z^w G(z) dx over (0, ∞) equals the gamma ratio of g_mellin.
    """

    upper, lower = g.effective_upper(), g.effective_lower()
    # strip in v = s/h, where the numerator gamma factors Γ(b + v), Γ(1 - a - v) (w absorbed) are finite
    v_low = max((-b for b in lower[:g.m]), default=None)
    v_high = min((1 - a for a in upper[:g.n]), default=None)

    conditions = []
    if g.prefactor > 0:
        conditions.append("positive_prefactor")
    if v_low is None or v_high is None or v_low < v_high:
        conditions.append("nonempty_strip")
    if g.p + g.q < 2 * (g.m + g.n):
        conditions.append("balanced_orders")
    if g.n == 0 and g.p + 1 <= g.m <= g.q:
        conditions.append("exponential_decay")
    if g.n == 0 and g.p == g.q == g.m:
        conditions.append("compact_support")

    to_s = [None if v is None else g.power * v for v in (v_low, v_high)]
    strip = tuple(to_s) if g.power > 0 else (to_s[1], to_s[0])
    return MellinValidity(strip=strip, conditions=tuple(conditions))


def g_mellin(g: GParams, support: str = SUPPORT_POSITIVE, override: bool = False) -> GammaProductExpr:
    """
    Mellin transform of x -> z^w·G(z), z = αx^h, over (0, ∞):
        α^(-s/h) / |h| · Π_{j≤m} Γ(b_j + u) Π_{j≤n} Γ(1 - a_j - u) / (Π_{j>m} Γ(1 - b_j - u) Π_{j>n} Γ(a_j + u))
    with u = s/h + w, doubled for a density symmetric about 0.

    :param g: the candidate
    :param support: "positive" or "symmetric"
    :param override: proceed even when the convergence conditions fail
    :return: the transform as a gamma product
    """

    validity = mellin_validity(g)
    if g.prefactor <= 0:
        raise RefusedTransform(f"the argument prefactor of {g} is not positive")
    if not validity.valid:
        if not override:
            raise RefusedTransform(f"the Mellin transform of {g} is not known to converge "
                                   f"(conditions met: {', '.join(validity.conditions) or 'none'})")
        logger.warning("computing the Mellin transform of %s outside its validity conditions", g)

    h, w = g.power, g.outer_exponent
    e = 1 / h
    result = GammaProductExpr.constant(1 / abs(h)) * GammaProductExpr.power(g.prefactor, -e, 0)
    for index, b in enumerate(g.lower):
        if index < g.m:
            result = result * GammaProductExpr.gamma(e, b + w)
        else:
            result = result * GammaProductExpr.gamma(-e, 1 - b - w, -1)
    for index, a in enumerate(g.upper):
        if index < g.n:
            result = result * GammaProductExpr.gamma(-e, 1 - a - w)
        else:
            result = result * GammaProductExpr.gamma(e, a + w, -1)

    if support == SUPPORT_SYMMETRIC:
        result = result * GammaProductExpr.constant(2)
    elif support != SUPPORT_POSITIVE:
        raise ValueError(f"unknown support {support!r}")
    return result


def normalization_constant(g: GParams, support: str = SUPPORT_POSITIVE,
                           override: bool = False) -> GammaProductExpr:
    """
    C with C·z^w·G(z) integrating to one: the reciprocal of the Mellin transform at s = 1.
    """

    if not override and not mellin_validity(g).contains(1):
        raise RefusedTransform(f"s = 1 lies outside the Mellin strip of {g}; the candidate is not integrable")
    return g_mellin(g, support, override).substitute(0, 1).inverse()


def density_mellin(g: GParams, support: str = SUPPORT_POSITIVE, override: bool = False) -> GammaProductExpr:
    """
    Mellin transform E|X|^(s-1) of the normalized candidate density.
    """

    return normalization_constant(g, support, override) * g_mellin(g, support, override)
