from stein_algebra.src.catalog.atoms import Atom, DistExpr, Power, Product, Scale
from stein_algebra.src.catalog.moments import gamma_table
from stein_algebra.src.duality_mellin.gamma_product import GammaProductExpr
from stein_algebra.src.exceptions import UnsupportedExpression


def mellin(e: DistExpr) -> GammaProductExpr:
    """
    Symbolic Mellin transform s ↦ E|X|^(s-1). For laws symmetric about 0 this is 2∫_0^∞ x^(s-1) p(x) dx.

    :param e: an expression built from positive or symmetric atoms with products, powers and scalings
    :return: the transform as a GammaProductExpr
    """

    if isinstance(e, Atom):
        table = gamma_table(e)
        if table is None:
            raise UnsupportedExpression(f"{e.kind} with these parameters is neither positive nor symmetric", e)
        result = GammaProductExpr.one()
        for base, w in table.scales:
            result = result * GammaProductExpr.power(base, w, -w)
        for u, v, sign in table.ratios:
            # Γ(u + v(s-1)) / Γ(u)
            result = result * GammaProductExpr.gamma(v, u - v, sign) * GammaProductExpr.gamma(0, u, -sign)
        return result

    if isinstance(e, Product):
        result = GammaProductExpr.one()
        for factor in e.factors:
            result = result * mellin(factor)
        return result

    if isinstance(e, Power):
        # s -> γ(s - 1) + 1
        return mellin(e.base).substitute(e.gamma, 1 - e.gamma)

    if isinstance(e, Scale):
        return mellin(e.base) * GammaProductExpr.power(abs(e.c), 1, -1)

    raise UnsupportedExpression(f"no Mellin transform for {type(e).__name__} expressions", e)
