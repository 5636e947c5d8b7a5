"""Structured systems on ``X`` and their Khovanskii-Macaulay matrices."""
import logging
from dataclasses import dataclass
from math import comb
from typing import Dict, Mapping, Sequence, Tuple

from . import linalg
from .exceptions import MembershipError, NotKhovanskiiError
from .khov import (Parameterization, check_khovanskii_truncated, expand_form, expansion_table,
                   graded_basis, graded_support, subduct)
from .poly import Exponent, FieldSpec, MultiPoly

logger = logging.getLogger(__name__)

TABLE = 'table'
SUBDUCT = 'subduct'
STRATEGIES = (TABLE, SUBDUCT)


@dataclass(frozen=True)
class Equation:
    """``poly`` in ``K[X]_degree``; ``coeff_form`` maps x-exponents ``alpha`` with ``|alpha| = degree``."""
    poly: MultiPoly
    degree: int
    coeff_form: Dict[Exponent, object]

    @property
    def is_zero(self) -> bool:
        return not any(self.coeff_form.values())


def _membership_failure(par: Parameterization, degree: int, what: str):
    report = check_khovanskii_truncated(par, degree)
    if not report.passed:
        return NotKhovanskiiError(
            f"{what}: generators stop being a Khovanskii basis at degree {report.failed_degree}", report)
    return MembershipError(f"{what} does not lie in K[X]_{degree}")


def equation_from_poly(par: Parameterization, poly: MultiPoly, degree: int) -> Equation:
    if degree < 1:
        raise ValueError("equation degrees are positive")
    result = subduct(par, poly, degree)
    if not result.is_member:
        raise _membership_failure(par, degree, "equation")
    monomials = graded_support(par, degree).monomials
    form = {monomials[beta]: c for beta, c in result.coeffs.items() if c}
    return Equation(poly, degree, form)


def equation_from_form(par: Parameterization, form: Mapping[Sequence[int], object], degree: int) -> Equation:
    if degree < 1:
        raise ValueError("equation degrees are positive")
    clean = {}
    for alpha, c in form.items():
        alpha = tuple(int(a) for a in alpha)
        if len(alpha) != len(par.phi) or sum(alpha) != degree or min(alpha) < 0:
            raise ValueError(f"exponent {alpha} is not a degree {degree} monomial in {len(par.phi)} generators")
        c = par.field.coerce(c)
        if c:
            clean[alpha] = par.field.add(clean.get(alpha, par.field.zero), c)
    return Equation(expand_form(par, clean), degree, clean)


@dataclass(frozen=True, eq=False)
class StructuredSystem:
    par: Parameterization
    equations: Tuple[Equation, ...]
    label: str = ''

    @property
    def field(self) -> FieldSpec:
        return self.par.field

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(e.degree for e in self.equations)

    @property
    def s(self) -> int:
        return len(self.equations)


def structured_system(par: Parameterization, equations: Sequence[Equation], label: str = '') -> StructuredSystem:
    for i, equation in enumerate(equations):
        if expand_form(par, equation.coeff_form) != equation.poly:
            raise MembershipError(f"coefficient form of equation {i} does not expand to its polynomial")
        if equation.is_zero:
            logger.warning("equation %d is identically zero", i)
    return StructuredSystem(par, tuple(equations), label)


@dataclass(frozen=True)
class KMMatrix:
    degree: int
    field: FieldSpec
    row_labels: Tuple[Tuple[int, Tuple[int, ...]], ...]
    col_labels: Tuple[Tuple[int, ...], ...]
    entries: Tuple[Tuple[object, ...], ...]
    reduced: bool = False

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.entries), len(self.col_labels)


def _split_form(form: Dict[Exponent, object]):
    """Groups ``sum c_alpha x^alpha`` as ``sum_j x_j * F_j`` by the first nonzero index of alpha."""
    if all(sum(alpha) == 0 for alpha in form):
        return sum(form.values())
    groups: Dict[int, Dict[Exponent, object]] = {}
    for alpha, c in form.items():
        j = next(i for i, a in enumerate(alpha) if a)
        rest = list(alpha)
        rest[j] -= 1
        groups.setdefault(j, {})[tuple(rest)] = c
    return {j: _split_form(sub) for j, sub in sorted(groups.items())}


def _times_generator(par, vector: Dict[int, object], degree: int, j: int) -> Dict[int, object]:
    field = par.field
    rows = expansion_table(par, degree).entries
    out: Dict[int, object] = {}
    for k, c in vector.items():
        for col, v in rows[k][j].items():
            out[col] = field.add(out.get(col, field.zero), field.mul(c, v))
    return {col: v for col, v in out.items() if v}


def _apply_form(par, tree, vector: Dict[int, object], degree: int) -> Dict[int, object]:
    """``b * F`` for ``b`` given as a sparse vector over ``degree * A``."""
    field = par.field
    if not isinstance(tree, dict):
        c = field.coerce(tree)
        return {k: field.mul(v, c) for k, v in vector.items()} if c else {}
    total: Dict[int, object] = {}
    for j, sub in tree.items():
        partial = _apply_form(par, sub, vector, degree)
        inner_degree = degree + _tree_degree(sub)
        for col, v in _times_generator(par, partial, inner_degree, j).items():
            total[col] = field.add(total.get(col, field.zero), v)
    return {col: v for col, v in total.items() if v}


def _tree_degree(tree) -> int:
    depth = 0
    while isinstance(tree, dict):
        tree = next(iter(tree.values()))
        depth += 1
    return depth


def _table_rows(par, equation: Equation, d: int):
    tree = _split_form(equation.coeff_form) if equation.coeff_form else {}
    lower = graded_support(par, d - equation.degree)
    for k in range(len(lower)):
        if not equation.coeff_form:
            yield {}
            continue
        yield _apply_form(par, tree, {k: par.field.one}, lower.degree)


def _subduct_rows(par, equation: Equation, d: int):
    target = graded_support(par, d)
    lower = graded_basis(par, d - equation.degree)
    for gamma, b in zip(lower.support.points, lower.elements):
        result = subduct(par, b * equation.poly, d)
        if not result.is_member:
            raise _membership_failure(par, d, f"row {gamma}")
        yield result.sparse(target)


def km_matrix(system: StructuredSystem, d: int, reduce: bool = False, strategy: str = TABLE) -> KMMatrix:
    """Rows ``(i, gamma)`` hold ``b_{d - d_i, gamma} * f_i`` in the basis of ``K[X]_d``.

    Equations outer, ``gamma`` in support order inner; equations with ``d_i > d``
    contribute no rows.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    par = system.par
    field = par.field
    columns = graded_support(par, d)
    if strategy == TABLE:
        used = {e for di in system.degrees if di <= d for e in range(d - di, d)}
        for degree in sorted(used):
            table = expansion_table(par, degree)
            if not table.complete:
                gamma, j, _ = table.failures[0]
                raise NotKhovanskiiError(
                    f"b_{{{degree},{gamma}}} * phi_{j} leaves a remainder in degree {degree + 1}",
                    check_khovanskii_truncated(par, degree + 1))
    labels, rows = [], []
    for i, equation in enumerate(system.equations):
        if equation.degree > d:
            continue
        lower = graded_support(par, d - equation.degree)
        build = _table_rows if strategy == TABLE else _subduct_rows
        for gamma, sparse in zip(lower.points, build(par, equation, d)):
            row = [field.zero] * len(columns)
            for col, v in sparse.items():
                row[col] = v
            labels.append((i, gamma))
            rows.append(tuple(row))
    matrix = KMMatrix(d, field, tuple(labels), columns.points, tuple(rows))
    logger.info("KM matrix at degree %d: %d x %d", d, *matrix.shape)
    if reduce:
        return reduce_rows(matrix)
    return matrix


def reduce_rows(matrix: KMMatrix) -> KMMatrix:
    keep = linalg.independent_rows(matrix.entries, len(matrix.col_labels), matrix.field)
    logger.info("kept %d of %d rows", len(keep), len(matrix.entries))
    return KMMatrix(matrix.degree, matrix.field, tuple(matrix.row_labels[i] for i in keep), matrix.col_labels,
                    tuple(matrix.entries[i] for i in keep), reduced=True)


def km_shape(system: StructuredSystem, d: int) -> Tuple[int, int]:
    par = system.par
    rows = sum(len(graded_support(par, d - di)) for di in system.degrees if di <= d)
    return rows, len(graded_support(par, d))


def km_shape_for_degrees(par: Parameterization, degrees: Sequence[int], d: int) -> Tuple[int, int]:
    rows = sum(len(graded_support(par, d - di)) for di in degrees if di <= d)
    return rows, len(graded_support(par, d))


def ambient_macaulay_shape(degrees: Sequence[int], d: int, n: int) -> Tuple[int, int]:
    """Shape of the classical Macaulay matrix of dense equations on ``P^n`` in degree ``d``."""
    rows = sum(comb(d - di + n, n) for di in degrees if di <= d)
    return rows, comb(d + n, n)


def row_residual(system: StructuredSystem, matrix: KMMatrix, r: int) -> MultiPoly:
    """``sum_beta M[r, beta] b_{d, beta} - b_{d - d_i, gamma} f_i``; zero for every row."""
    par = system.par
    i, gamma = matrix.row_labels[r]
    equation = system.equations[i]
    basis = graded_basis(par, matrix.degree)
    total = graded_basis(par, matrix.degree - equation.degree).element(gamma) * equation.poly
    for b, c in zip(basis.elements, matrix.entries[r]):
        if c:
            total = total - b.scale(c)
    return total
