"""
Polynomial differential operators Σ c_ij M^j D^i in normal form (every M to the left of every D).

M is multiplication by x and D is differentiation, so DM = MD + I. Coefficients are exact rationals.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, Tuple

from sympy import Rational, binomial, ff

from stein_algebra.src.operator_core.scalars import to_scalar, scalar_to_json

Monomial = Tuple[int, int]  # (D-order i, M-degree j)


@lru_cache(maxsize=None)
def commute_d_past_m(s: int, t: int) -> Tuple[Tuple[Monomial, Rational], ...]:
    """
    Normal form of D^s M^t, the closed form of rewriting DM -> MD + I until no D stands left of an M:
        D^s M^t = Σ_k C(s, k) (t)_k M^(t-k) D^(s-k)

    :param s: power of D (on the left)
    :param t: power of M (on the right)
    :return: tuple of ((i, j), coefficient) pairs
    """

    return tuple(((s - k, t - k), Rational(binomial(s, k) * ff(t, k)))
                 for k in range(min(s, t) + 1))


@dataclass(frozen=True)
class ExpandedOp:
    """
    Canonical sparse form of a polynomial differential operator. The terms are stored sorted, without zero
    coefficients, so two operators are equal iff their term tuples are equal.
    """

    terms: Tuple[Tuple[Monomial, Rational], ...] = ()

    @staticmethod
    def from_mapping(mapping: Dict[Monomial, object]) -> "ExpandedOp":
        cleaned = {}
        for (i, j), coefficient in mapping.items():
            if i < 0 or j < 0:
                raise ValueError(f"negative power in monomial {(i, j)}")
            coefficient = to_scalar(coefficient, "coefficient")
            if coefficient != 0:
                cleaned[(int(i), int(j))] = coefficient
        return ExpandedOp(tuple(sorted(cleaned.items())))

    @staticmethod
    def zero() -> "ExpandedOp":
        return ExpandedOp()

    @staticmethod
    def identity(c=1) -> "ExpandedOp":
        return ExpandedOp.from_mapping({(0, 0): c})

    @staticmethod
    def monomial(d_order: int, m_degree: int, c=1) -> "ExpandedOp":
        return ExpandedOp.from_mapping({(d_order, m_degree): c})

    def as_dict(self) -> Dict[Monomial, Rational]:
        return dict(self.terms)

    def coefficient(self, d_order: int, m_degree: int) -> Rational:
        return self.as_dict().get((d_order, m_degree), Rational(0))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def order(self) -> int:
        """
        Highest power of D (-1 for the zero operator).
        """
        return max((i for (i, _), _ in self.terms), default=-1)

    @property
    def degree(self) -> int:
        return max((j for (_, j), _ in self.terms), default=-1)

    def level_set(self) -> set:
        """
        The set {j - i} over the nonzero terms.
        """
        return {j - i for (i, j), _ in self.terms}

    def __add__(self, other: "ExpandedOp") -> "ExpandedOp":
        return add(self, other)

    def __sub__(self, other: "ExpandedOp") -> "ExpandedOp":
        return add(self, scale(other, -1))

    def __neg__(self) -> "ExpandedOp":
        return scale(self, -1)

    def __mul__(self, other):
        if isinstance(other, ExpandedOp):
            return compose(self, other)
        return scale(self, other)

    def __rmul__(self, other):
        return scale(self, other)

    def monic(self) -> "ExpandedOp":
        """
        The representative of this operator's scalar class whose largest monomial has coefficient 1.
        """
        if self.is_zero:
            return self
        return scale(self, 1 / self.terms[-1][1])

    def render(self) -> str:
        return render_expanded(self)

    def to_json(self) -> dict:
        return {"terms": [dict(d=i, m=j, **scalar_to_json(c)) for (i, j), c in self.terms]}

    def __str__(self) -> str:
        return self.render()


def add(a: ExpandedOp, b: ExpandedOp) -> ExpandedOp:
    total = a.as_dict()
    for monomial, coefficient in b.terms:
        total[monomial] = total.get(monomial, 0) + coefficient
    return ExpandedOp.from_mapping(total)


def scale(a: ExpandedOp, c) -> ExpandedOp:
    c = to_scalar(c, "scale factor")
    return ExpandedOp.from_mapping({monomial: c * coefficient for monomial, coefficient in a.terms})


def compose(a: ExpandedOp, b: ExpandedOp) -> ExpandedOp:
    """
    Normal form of the operator product a∘b (b acts first).

    :param a: the left operator
    :param b: the right operator
    :return: the canonical ExpandedOp of a∘b
    """

    total = {}
    for (i1, j1), c1 in a.terms:
        for (i2, j2), c2 in b.terms:
            for (i, j), c in commute_d_past_m(i1, j2):
                monomial = (i + i2, j1 + j)
                total[monomial] = total.get(monomial, 0) + c1 * c2 * c
    return ExpandedOp.from_mapping(total)


def ring_ops(a: ExpandedOp, b: ExpandedOp = None, op: str = "add", factor=None) -> ExpandedOp:
    """
    Ring operations of the operator algebra.

    :param a: the first operand
    :param b: the second operand (unused for "scale")
    :param op: one of "add", "scale", "compose"
    :param factor: the Scalar of a "scale" operation
    :return: the canonical result
    """

    if op == "add":
        return add(a, b)
    if op == "scale":
        return scale(a, factor)
    if op == "compose":
        return compose(a, b)
    raise ValueError(f"unknown ring operation {op!r}")


def compose_all(operators: Iterable[ExpandedOp]) -> ExpandedOp:
    result = ExpandedOp.identity()
    for operator in operators:
        result = compose(result, operator)
    return result


def m_power(n: int) -> ExpandedOp:
    return ExpandedOp.monomial(0, n)


def d_power(n: int) -> ExpandedOp:
    return ExpandedOp.monomial(n, 0)


def t_operator(r) -> ExpandedOp:
    """
    T_r = MD + rI.
    """
    return ExpandedOp.from_mapping({(1, 1): 1, (0, 0): r})


def normalize_word(word: str) -> ExpandedOp:
    """
    Normalizes a word over the letters M and D by literal rewriting: every occurrence of "DM" is replaced by
    "MD" plus the word with that pair deleted, until no word contains "DM".

    :param word: e.g. "DDMDM"
    :return: the canonical ExpandedOp of the word
    """

    if set(word) - {"M", "D"}:
        raise ValueError(f"words may only contain M and D: {word!r}")

    pending = {word: Rational(1)}
    done = {}
    while pending:
        current, coefficient = pending.popitem()
        position = current.find("DM")
        if position < 0:
            done[current] = done.get(current, 0) + coefficient
            continue
        for rewritten in (current[:position] + "MD" + current[position + 2:],
                          current[:position] + current[position + 2:]):
            pending[rewritten] = pending.get(rewritten, 0) + coefficient

    return ExpandedOp.from_mapping({(w.count("D"), w.count("M")): c for w, c in done.items()})


def is_scalar_multiple(a: ExpandedOp, b: ExpandedOp) -> bool:
    """
    True iff a = c·b for some nonzero rational c (or both are zero).
    """
    return a.monic() == b.monic()


def _render_monomial(i: int, j: int) -> str:
    parts = []
    if j:
        parts.append("M" if j == 1 else f"M^{j}")
    if i:
        parts.append("D" if i == 1 else f"D^{i}")
    return "".join(parts) or "I"


def render_coefficient(c: Rational, monomial: str, first: bool) -> str:
    """
    Renders one signed term c·monomial of a sum.
    """

    sign = "-" if c < 0 else "+"
    magnitude = abs(c)
    if magnitude == 1 and monomial != "I":
        body = monomial
    elif magnitude.is_Integer:
        body = f"{magnitude}" if monomial == "I" else f"{magnitude}{monomial}"
    else:
        body = f"({magnitude})" if monomial == "I" else f"({magnitude}){monomial}"
    if first:
        return body if sign == "+" else f"-{body}"
    return f" {sign} {body}"


def render_expanded(a: ExpandedOp) -> str:
    """
    Renders Σ c M^j D^i with the highest D-order first, then the highest M-degree.
    """

    if a.is_zero:
        return "0"
    ordered = sorted(a.terms, key=lambda term: (-term[0][0], -term[0][1]))
    return "".join(render_coefficient(c, _render_monomial(i, j), index == 0)
                   for index, ((i, j), c) in enumerate(ordered))
