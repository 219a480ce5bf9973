from dataclasses import dataclass

from sympy import Rational

from stein_algebra.src.operator_core.assumption_one import AssumptionOneForm, render_form
from stein_algebra.src.operator_core.euler import EulerPoly
from stein_algebra.src.operator_core.scalars import scalar_to_str


@dataclass(frozen=True)
class DensityODE:
    """
    The equation L(θ)p - sign·b·x^q·K(θ)p = 0 satisfied by the density p of a law with a given Stein operator.
    """

    L: EulerPoly
    b: Rational
    q: int
    K: EulerPoly
    sign: int

    @property
    def coefficient(self) -> Rational:
        return self.sign * self.b

    def as_form(self) -> AssumptionOneForm:
        return AssumptionOneForm(self.L, self.coefficient, self.q, self.K)

    def render(self) -> str:
        return render_form(self.L, self.coefficient, self.q, self.K).replace("M", "x") + " applied to p = 0"

    def to_json(self) -> dict:
        return {"L": self.L.to_json(), "b": scalar_to_str(self.b), "q": self.q, "K": self.K.to_json(),
                "sign": self.sign, "rendered": self.render()}

    def __str__(self) -> str:
        return self.render()


def dual_ode(a: AssumptionOneForm) -> DensityODE:
    """
    Integration by parts turns E[(L - b·M^q·K) f(X)] = 0 into an equation for the density, using θ* = -θ - 1:
        L̃ = (-1)^deg L · L(-θ-1),  K̃ = (-1)^deg K · K(-θ-q-1),  sign = (-1)^(deg L + deg K).
    On T-factors this is T_r -> T_{1-r} and T_a -> T_{q+1-a}.

    :param a: the Stein operator
    :return: the density ODE
    """

    sign_l, sign_k = (-1) ** a.L.degree, (-1) ** a.K.degree
    return DensityODE(L=a.L.reflect(-1) * sign_l, b=a.b, q=a.q, K=a.K.reflect(-a.q - 1) * sign_k,
                      sign=sign_l * sign_k)
