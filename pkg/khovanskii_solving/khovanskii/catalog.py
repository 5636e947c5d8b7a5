"""Named problem families: Duffing, del Pezzo, Bott-Samelson, Grassmannian charts
and Schubert problems on them.
"""
import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg
from .conf import get_setting
from .exceptions import DuplicateLeadingTermError, MembershipError, NotKhovanskiiError, SchubertConditionError
from .khov import (Parameterization, build_parameterization, check_khovanskii_truncated, graded_support,
                   subduct)
from .km import Equation, StructuredSystem, equation_from_form, structured_system
from .poly import QQ, FieldSpec, MultiPoly, WeightOrder, default_varnames, parse_polynomial

logger = logging.getLogger(__name__)

SCHUBERT_PRIME = 9716633


@dataclass(frozen=True)
class SchubertCondition:
    alpha: Tuple[int, ...]
    flag: Tuple[Tuple[object, ...], ...]

    def __post_init__(self):
        alpha = tuple(int(a) for a in self.alpha)
        if any(b <= a for a, b in zip(alpha, alpha[1:])) or (alpha and alpha[0] < 1):
            raise SchubertConditionError(f"alpha {alpha} is not strictly increasing in 1..m")
        object.__setattr__(self, 'alpha', alpha)
        object.__setattr__(self, 'flag', tuple(tuple(row) for row in self.flag))

    @property
    def dimension(self) -> int:
        return sum(a - i for i, a in enumerate(self.alpha, 1))


@dataclass(frozen=True)
class ProblemInstance:
    system: StructuredSystem
    expected_count: Optional[int] = None
    recommended_dreg: Optional[int] = None
    provenance: str = ''
    raw_equation_count: Optional[int] = None

    @property
    def par(self) -> Parameterization:
        return self.system.par


def _parameterization(texts: Sequence[str], varnames, omega, field) -> Parameterization:
    phi = [parse_polynomial(text, varnames, field) for text in texts]
    return build_parameterization(phi, WeightOrder(omega), field)


@lru_cache(maxsize=None)
def duffing_parameterization(field: FieldSpec = QQ) -> Parameterization:
    return _parameterization(['1', 't1', 't2', 't1*(t1^2 + t2^2)', 't2*(t1^2 + t2^2)'],
                             ('t1', 't2'), (0, -1), field)


DUFFING_COEFFS = ((1, 3, 5, 7), (11, 13, 17, 19))


def duffing(coeffs: Sequence[Sequence] = DUFFING_COEFFS, field: FieldSpec = QQ) -> ProblemInstance:
    """``f_i = c_i0 + c_i1 t1 + c_i2 t2 + c_i3 phi_{2+i}``."""
    par = duffing_parameterization(field)
    equations = []
    for i, row in enumerate(coeffs):
        if len(row) != 4:
            raise ValueError("each Duffing equation takes four coefficients")
        last = 3 + i
        exponents = [(1, 0, 0, 0, 0), (0, 1, 0, 0, 0), (0, 0, 1, 0, 0),
                     tuple(int(j == last) for j in range(5))]
        equations.append(equation_from_form(par, dict(zip(exponents, row)), 1))
    return ProblemInstance(structured_system(par, equations, 'duffing'), 5, 3, "Duffing oscillator steady states")


@lru_cache(maxsize=None)
def del_pezzo(field: FieldSpec = QQ) -> Parameterization:
    return _parameterization(['t1 - t2', 't2^2 - t2', 't1*t2 - t2', 't1^2 - t2', 't1*t2^2 - t2', 't1^2*t2 - t2'],
                             ('t1', 't2'), (-2, -1), field)


def degree_monomials(count: int, degree: int) -> List[Tuple[int, ...]]:
    """Exponents of all degree ``degree`` monomials in ``count`` variables, lexicographically descending."""
    out = []
    for combo in itertools.combinations_with_replacement(range(count), degree):
        exponent = [0] * count
        for j in combo:
            exponent[j] += 1
        out.append(tuple(exponent))
    return out


def random_dense_system(par: Parameterization, degrees: Sequence[int], seed: int,
                        masks: Optional[Sequence[Iterable[Sequence[int]]]] = None,
                        label: str = '') -> StructuredSystem:
    """Seeded generic coefficients on every ``x^alpha`` with ``|alpha| = d_i``; ``masks`` zero some out."""
    rng = np.random.default_rng(seed)
    field = par.field
    equations = []
    for i, degree in enumerate(degrees):
        masked = {tuple(a) for a in masks[i]} if masks else set()
        form = {}
        for alpha in degree_monomials(len(par.phi), degree):
            c = field.random_element(rng, 1, 100)
            if alpha not in masked:
                form[alpha] = c
        equations.append(equation_from_form(par, form, degree))
    return structured_system(par, equations, label)


def del_pezzo_system(d: int, seed: int = 1, field: FieldSpec = FieldSpec.prime(SCHUBERT_PRIME)) -> ProblemInstance:
    system = random_dense_system(del_pezzo(field), (d, d), seed, label=f'delpezzo:{d}')
    return ProblemInstance(system, 5 * d * d, 2 * d + 1, "random equations on the quintic del Pezzo surface")


@lru_cache(maxsize=None)
def bott_samelson_parameterization(field: FieldSpec = QQ) -> Parameterization:
    return _parameterization(['1', 't1', 't2', 't3', 't1*t3', 't2*t3', 't1*(t1*t3 + t2)', 't2*(t1*t3 + t2)'],
                             ('t1', 't2', 't3'), (0, -1, 0), field)


BOTT_SAMELSON_COEFFS = ((1, 1, 1, 1, 1, 1, 1, 1), (1, -2, 3, -4, 5, -6, 7, -8), (2, 3, 5, 7, 11, 13, 17, 19))


def bott_samelson(field: FieldSpec = QQ) -> ProblemInstance:
    par = bott_samelson_parameterization(field)
    units = [tuple(int(i == j) for i in range(len(par.phi))) for j in range(len(par.phi))]
    equations = [equation_from_form(par, dict(zip(units, row)), 1) for row in BOTT_SAMELSON_COEFFS]
    return ProblemInstance(structured_system(par, equations, 'bottsamelson'), 6, 3,
                           "three linear sections of a Bott-Samelson threefold")


def _determinant(rows: Sequence[Sequence[MultiPoly]], cols: Sequence[int], cache) -> MultiPoly:
    """Laplace expansion along the first row, memoized on (row offset, column subset)."""
    def minor(r, subset):
        key = (r, subset)
        if key in cache:
            return cache[key]
        if r == len(rows):
            value = None
        else:
            value = None
            for position, c in enumerate(subset):
                entry = rows[r][c]
                if entry.is_zero():
                    continue
                rest = minor(r + 1, subset[:position] + subset[position + 1:])
                if rest is None or rest.is_zero():
                    continue
                term = entry * rest
                if position % 2:
                    term = -term
                value = term if value is None else value + term
        if value is None:
            if r == len(rows):
                value = MultiPoly.constant(1, rows[0][0].varnames, rows[0][0].field)
            else:
                value = MultiPoly.zero(rows[0][0].varnames, rows[0][0].field)
        cache[key] = value
        return value

    return minor(0, tuple(cols))


def chart_rows(k: int, m: int, field: FieldSpec = QQ) -> List[List[MultiPoly]]:
    """``H = [I_k | T]`` with ``T[a][b] = t_{a(m-k)+b+1}``."""
    varnames = default_varnames(k * (m - k))
    rows = []
    for a in range(k):
        row = [MultiPoly.constant(int(a == c), varnames, field) for c in range(k)]
        row += [MultiPoly.variable(varnames[a * (m - k) + b], varnames, field) for b in range(m - k)]
        rows.append(row)
    return rows


def _chart_weight(k: int, m: int, base: int) -> Tuple[int, ...]:
    return tuple(-(base ** (a + 1)) * (b + 1) for a in range(k) for b in range(m - k))


@lru_cache(maxsize=None)
def pluecker_chart(k: int, m: int, field: FieldSpec = QQ, validate_degree: Optional[int] = None) -> Parameterization:
    """All ``k x k`` minors of ``H`` in lexicographic column order.

    The weight ``-(base^(a+1) * (b+1))`` on ``t_{a,b}`` makes each minor lead with its
    diagonal term; it is checked up to ``validate_degree`` and other bases are
    tried before giving up. ``solve`` checks again through its working degree.
    """
    if not 1 <= k < m:
        raise ValueError(f"need 1 <= k < m, got k={k}, m={m}")
    rows = chart_rows(k, m, field)
    cache = {}
    phi = [_determinant(rows, cols, cache) for cols in itertools.combinations(range(m), k)]
    validate_degree = validate_degree or get_setting('PLUECKER_VALIDATION_DEGREE')
    report = None
    for base in (3, 2, 4, 5, 6):
        try:
            par = build_parameterization(phi, WeightOrder(_chart_weight(k, m, base)), field, grassmannian=(k, m))
        except DuplicateLeadingTermError as error:
            logger.info("weight base %d rejected: %s", base, error)
            continue
        report = check_khovanskii_truncated(par, validate_degree)
        if report.passed:
            return par
        logger.warning("weight base %d fails the Khovanskii check at degree %d", base, report.failed_degree)
    raise NotKhovanskiiError(f"no diagonal weight validated the Pluecker coordinates of Gr({k},{m})", report)


def pluecker_labels(k: int, m: int) -> List[Tuple[int, ...]]:
    return [tuple(c + 1 for c in cols) for cols in itertools.combinations(range(m), k)]


def osculating_flag(s, m: int, field: FieldSpec = QQ) -> Tuple[Tuple[object, ...], ...]:
    """Row ``i`` is the ``i``-th derivative of ``(1, s, ..., s^(m-1))``."""
    s = field.coerce(s)
    rows = []
    for i in range(m):
        row = []
        for c in range(m):
            if c < i:
                row.append(field.zero)
            else:
                power = s ** (c - i) if not field.modulus else pow(s, c - i, field.modulus)
                row.append(field.mul(field.coerce(factorial(c) // factorial(c - i)), power))
        rows.append(tuple(row))
    return tuple(rows)


def random_flag(m: int, rng, field: FieldSpec = QQ) -> Tuple[Tuple[object, ...], ...]:
    """Integer entries in ``-10..10``, resampled until invertible."""
    while True:
        rows = [[field.coerce(int(v)) for v in rng.integers(-10, 11, size=m)] for _ in range(m)]
        if linalg.rank(rows, m, field) == m:
            return tuple(tuple(row) for row in rows)


def schubert_minors(k: int, m: int, condition: SchubertCondition, field: FieldSpec) -> List[MultiPoly]:
    """The ``(k + alpha_i - i + 1)``-minors of ``(H; F_{alpha_i})``; impossible sizes are skipped."""
    h_rows = chart_rows(k, m, field)
    varnames = h_rows[0][0].varnames
    minors = []
    for i, a in enumerate(condition.alpha, 1):
        size = k + a - i + 1
        stacked = h_rows + [[MultiPoly.constant(v, varnames, field) for v in condition.flag[r]] for r in range(a)]
        if size > min(len(stacked), m):
            continue
        for row_subset in itertools.combinations(range(len(stacked)), size):
            sub = [stacked[r] for r in row_subset]
            cache = {}
            for cols in itertools.combinations(range(m), size):
                minors.append(_determinant(sub, cols, cache))
    return minors


def schubert_equations(k: int, m: int, conditions: Sequence[SchubertCondition], field: FieldSpec = QQ,
                       expected_count: Optional[int] = None, recommended_dreg: Optional[int] = None,
                       label: str = '') -> ProblemInstance:
    n = k * (m - k)
    codimension = sum(n - c.dimension for c in conditions)
    if codimension != n:
        raise SchubertConditionError(f"conditions impose codimension {codimension}, expected {n}")
    for condition in conditions:
        if len(condition.alpha) != k or condition.alpha[-1] > m:
            raise SchubertConditionError(f"alpha {condition.alpha} is not a {k}-subset of 1..{m}")
        if len(condition.flag) != m or linalg.rank(condition.flag, m, field) != m:
            raise SchubertConditionError("flag matrix is not invertible")
    par = pluecker_chart(k, m, field)
    support = graded_support(par, 1)
    raw, vectors = [], []
    for condition in conditions:
        for poly in schubert_minors(k, m, condition, field):
            result = subduct(par, poly, 1)
            if not result.is_member:
                raise MembershipError("a Schubert minor is not linear in the Pluecker coordinates")
            raw.append((poly, result))
            vectors.append(result.vector(support, field))
    keep = linalg.independent_rows(vectors, len(support), field)
    equations = []
    for index in keep:
        poly, result = raw[index]
        form = {support.monomials[beta]: c for beta, c in result.coeffs.items() if c}
        equations.append(Equation(poly, 1, form))
    logger.info("Schubert problem on Gr(%d,%d): %d raw equations, %d independent", k, m, len(raw), len(keep))
    system = StructuredSystem(par, tuple(equations), label or f'schubert:gr{k}{m}')
    return ProblemInstance(system, expected_count, recommended_dreg, "Schubert problem", len(raw))


def random_schubert_problem(k: int, m: int, alphas: Sequence[Sequence[int]], seed: int = 1,
                            field: FieldSpec = QQ, **kwargs) -> ProblemInstance:
    rng = np.random.default_rng(seed)
    conditions = [SchubertCondition(tuple(alpha), random_flag(m, rng, field)) for alpha in alphas]
    return schubert_equations(k, m, conditions, field, **kwargs)


OSCULATING_POINTS = (1, -1, 2, -2, 3, -3)


def osculating_problem(field: FieldSpec = QQ) -> ProblemInstance:
    """Lines meeting the osculating 2-planes of the rational normal curve at six points."""
    conditions = [SchubertCondition((3, 5), osculating_flag(s, 5, field)) for s in OSCULATING_POINTS]
    return schubert_equations(2, 5, conditions, field, expected_count=5, recommended_dreg=3,
                              label='osculating')


GR36_ALPHA1 = (3, 5, 6)
GR36_ALPHA2 = (2, 5, 6)
# (copies of alpha1, copies of alpha2, solutions, regularity degree)
GR36_TABLE = {
    1: (9, 0, 42, 5),
    2: (7, 1, 21, 4),
    3: (5, 2, 11, 3),
    4: (3, 3, 6, 3),
    5: (1, 4, 3, 2),
}


def gr36_problem(row: int, seed: int = 1, field: FieldSpec = FieldSpec.prime(SCHUBERT_PRIME)) -> ProblemInstance:
    ones, twos, count, dreg = GR36_TABLE[row]
    alphas = [GR36_ALPHA1] * ones + [GR36_ALPHA2] * twos
    return random_schubert_problem(3, 6, alphas, seed, field, expected_count=count, recommended_dreg=dreg,
                                   label=f'schubert:gr36:{row}')


def grassmannian(k: int, m: int, field: FieldSpec = QQ) -> ProblemInstance:
    return ProblemInstance(StructuredSystem(pluecker_chart(k, m, field), (), f'grassmannian:{k},{m}'),
                           provenance="Pluecker embedding, no equations")


def chart_matrix(k: int, m: int, coords: Sequence[complex]) -> np.ndarray:
    """Rebuilds ``[I_k | T]`` from Pluecker coordinates ordered as ``pluecker_labels``."""
    labels = [tuple(c - 1 for c in label) for label in pluecker_labels(k, m)]
    value = dict(zip(labels, coords))
    identity = tuple(range(k))
    base = value[identity]
    if abs(base) == 0:
        raise ZeroDivisionError("solution lies outside the standard chart")
    h = np.zeros((k, m), dtype=complex)
    h[:, :k] = np.eye(k)
    for a in range(k):
        for b in range(m - k):
            cols = tuple(sorted(set(identity) - {a} | {k + b}))
            # p_S = (-1)^(k-1-a) t_{a,b} for S = [k] - {a} + {k+b}
            h[a, k + b] = (-1) ** (k - 1 - a) * value[cols] / base
    return h


def pluecker_residual(k: int, m: int, coords: Sequence[complex]) -> float:
    """Largest gap between the normalized coordinates and the minors of the rebuilt chart matrix."""
    h = chart_matrix(k, m, coords)
    labels = [tuple(c - 1 for c in label) for label in pluecker_labels(k, m)]
    base = coords[labels.index(tuple(range(k)))]
    return max(abs(np.linalg.det(h[:, list(cols)]) - c / base) for cols, c in zip(labels, coords))


def get_instance(name: str, seed: int = 1, field: Optional[FieldSpec] = None) -> ProblemInstance:
    """Looks up ``duffing``, ``delpezzo[:d]``, ``bottsamelson``, ``grassmannian:k,m``, ``schubert``,
    ``schubert:gr36:<row>`` or ``osculating``."""
    head, _, rest = name.partition(':')
    if head == 'duffing':
        return duffing(field=field or QQ)
    if head == 'delpezzo':
        return del_pezzo_system(int(rest or 1), seed, field or FieldSpec.prime(SCHUBERT_PRIME))
    if head == 'bottsamelson':
        return bott_samelson(field or QQ)
    if head == 'grassmannian':
        k, m = (int(v) for v in rest.split(','))
        return grassmannian(k, m, field or QQ)
    if head == 'schubert':
        if rest.startswith('gr36:'):
            return gr36_problem(int(rest.split(':')[1]), seed, field or FieldSpec.prime(SCHUBERT_PRIME))
        if rest:
            raise KeyError(name)
        return random_schubert_problem(3, 6, [(2, 4, 6)] * 3, seed, field or QQ, expected_count=2,
                                       recommended_dreg=2, label='schubert')
    if head == 'osculating':
        return osculating_problem(field or QQ)
    raise KeyError(name)


CATALOG_NAMES = ('duffing', 'delpezzo', 'bottsamelson', 'grassmannian:k,m', 'schubert', 'schubert:gr36:<1-5>',
                 'osculating')
