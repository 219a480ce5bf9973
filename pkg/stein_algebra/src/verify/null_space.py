"""
Exact search for polynomial Stein operators of a fixed shape Σ_{i ≤ order, j ≤ degree} c_ij M^j D^i: every
moment constraint Σ c_ij (k)_i μ_(k+j-i) = 0 is a linear equation in the unknown c_ij, and the operators of
that shape are the null space of the constraint matrix.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from joblib import Parallel, delayed
from sympy import Rational, ff
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix
from tqdm import tqdm

from stein_algebra.src.catalog.atoms import DistExpr
from stein_algebra.src.catalog.moments import moments
from stein_algebra.src.config import EngineSettings, DEFAULT_SETTINGS
from stein_algebra.src.exceptions import InvalidParameter, MomentUnavailable
from stein_algebra.src.operator_core.expanded import ExpandedOp, render_expanded
from stein_algebra.src.operator_core.scalars import scalar_to_str

logger = logging.getLogger(__name__)

UNIQUE_ZERO_ONLY = "UniqueZeroOnly"
FOUND_OPERATORS = "FoundOperators"


@dataclass(frozen=True)
class NullSpaceReport:
    unknowns: Tuple[Tuple[int, int], ...]  # (D-order i, M-degree j) of every column
    moments: Tuple[Rational, ...]
    matrix: Tuple[Tuple[Rational, ...], ...]
    rank: int
    determinant: Optional[Rational]
    basis: Tuple[ExpandedOp, ...]

    @property
    def verdict(self) -> str:
        return FOUND_OPERATORS if self.basis else UNIQUE_ZERO_ONLY

    def to_json(self) -> dict:
        return {"unknowns": [_column_label(i, j) for i, j in self.unknowns],
                "moments": [scalar_to_str(m) for m in self.moments],
                "rows": len(self.matrix),
                "columns": len(self.unknowns),
                "matrix": [[scalar_to_str(entry) for entry in row] for row in self.matrix],
                "rank": self.rank,
                "determinant": scalar_to_str(self.determinant) if self.determinant is not None else None,
                "verdict": self.verdict,
                "basis": [operator.to_json() | {"rendered": operator.render()} for operator in self.basis]}

    def render(self) -> str:
        lines = [f"unknowns: {', '.join(_column_label(i, j) for i, j in self.unknowns)}",
                 f"moments: {', '.join(scalar_to_str(m) for m in self.moments)}",
                 f"constraint matrix ({len(self.matrix)} x {len(self.unknowns)}), rank {self.rank}"]
        lines += ["  [" + ", ".join(scalar_to_str(entry) for entry in row) + "]" for row in self.matrix]
        if self.determinant is not None:
            lines.append(f"determinant: {scalar_to_str(self.determinant)}")
        if self.basis:
            lines.append(f"found {len(self.basis)} operator(s) of this shape:")
            lines += [f"  {render_expanded(operator)}" for operator in self.basis]
        else:
            lines.append("no nonzero operator of this shape")
        return "\n".join(lines)


def _column_label(i: int, j: int) -> str:
    return render_expanded(ExpandedOp.monomial(i, j))


def ansatz_unknowns(max_d_order: int, max_m_degree: int) -> Tuple[Tuple[int, int], ...]:
    """
    The unknown c_ij ordered by D-order, then M-degree, both descending (xD², D², xD, D, x, I for order 2,
    degree 1).
    """
    return tuple((i, j) for i in range(max_d_order, -1, -1) for j in range(max_m_degree, -1, -1))


def constraint_row(k: int, unknowns, moment_values) -> Tuple[Rational, ...]:
    """
    Coefficients of the unknowns in Σ c_ij (k)_i μ_(k+j-i) = 0.
    """
    return tuple(Rational(ff(k, i) * moment_values[k + j - i]) if i <= k else Rational(0) for i, j in unknowns)


def _exact_moments(oracle: DistExpr, count: int, settings: EngineSettings) -> List[Rational]:
    values = []
    for index in range(count):
        moment = moments(oracle, index, settings)
        if not moment.exists:
            raise MomentUnavailable(index, moment.reason)
        if not moment.is_exact:
            raise MomentUnavailable(index, "the null-space search needs exact rational moments")
        values.append(moment.exact)
    return values


def null_space_search(oracle: DistExpr, max_d_order: int, max_m_degree: int, rows: Optional[int] = None,
                      settings: EngineSettings = DEFAULT_SETTINGS) -> NullSpaceReport:
    """
    Finds all operators Σ c_ij M^j D^i with i ≤ max_d_order, j ≤ max_m_degree satisfying the first `rows`
    moment constraints of the oracle.

    :param oracle: the target distribution expression
    :param max_d_order: highest power of D
    :param max_m_degree: highest power of M
    :param rows: number of constraints f = x^k, k = 0..rows-1 (default: as many as unknowns)
    :param settings: n_jobs for parallel row construction, progress display
    :return: the NullSpaceReport (determinant only for square systems)
    """

    if max_d_order < 0 or max_m_degree < 0:
        raise InvalidParameter("order and degree must be non-negative")
    unknowns = ansatz_unknowns(max_d_order, max_m_degree)
    rows = len(unknowns) if rows is None else int(rows)
    if rows < 1:
        raise InvalidParameter("at least one constraint row is required")

    moment_values = _exact_moments(oracle, rows + max_m_degree, settings)
    ks = tqdm(range(rows), desc="constraint rows", disable=not settings.show_progress)
    if settings.n_jobs != 1:
        matrix = Parallel(n_jobs=settings.n_jobs, prefer="threads")(
            delayed(constraint_row)(k, unknowns, moment_values) for k in ks)
    else:
        matrix = [constraint_row(k, unknowns, moment_values) for k in ks]
    matrix = tuple(tuple(row) for row in matrix)

    domain_matrix = DomainMatrix.from_list_sympy(rows, len(unknowns), [list(row) for row in matrix]).convert_to(QQ)
    determinant = QQ.to_sympy(domain_matrix.det()) if rows == len(unknowns) else None
    rank = domain_matrix.rank()

    basis = []
    for vector in domain_matrix.nullspace().to_Matrix().tolist():
        operator = ExpandedOp.from_mapping({monomial: value for monomial, value in zip(unknowns, vector)})
        basis.append(operator.monic())
    logger.debug("null space of the %d x %d system has dimension %d", rows, len(unknowns), len(basis))

    return NullSpaceReport(unknowns=unknowns, moments=tuple(moment_values), matrix=matrix, rank=rank,
                           determinant=determinant, basis=tuple(basis))
