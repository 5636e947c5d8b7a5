"""Khovanskii bases: the graded support, its monomial basis, subduction and the
expansion tables that write ``b_{d,gamma} * phi_j`` in the degree ``d + 1`` basis.
"""
import heapq
import logging
import operator
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .conf import get_setting
from .exceptions import DuplicateLeadingTermError, FieldMismatchError, NotKhovanskiiError
from .poly import Exponent, FieldSpec, MultiPoly, WeightOrder

logger = logging.getLogger(__name__)

Point = Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Parameterization:
    """Generators ``phi_0..phi_l`` of a graded algebra with their leading exponent matrix.

    ``columns[j]`` is ``(1, alpha_j)``, the j-th column of ``A``. ``grassmannian`` is
    ``(k, m)`` when the generators are the Pluecker coordinates of a chart of ``Gr(k, m)``.
    """
    field: FieldSpec
    phi: Tuple[MultiPoly, ...]
    order: WeightOrder
    columns: Tuple[Point, ...]
    grassmannian: Optional[Tuple[int, int]] = None
    _cache: Dict = field(default_factory=dict, repr=False)
    _lock: threading.RLock = field(default_factory=threading.RLock, repr=False)

    @property
    def n(self) -> int:
        return len(self.order.omega)

    @property
    def ell(self) -> int:
        return len(self.phi) - 1

    @property
    def varnames(self) -> Tuple[str, ...]:
        return self.phi[0].varnames

    @property
    def matrix(self) -> Tuple[Tuple[int, ...], ...]:
        """``A`` as rows, ``(n + 1) x (l + 1)``."""
        return tuple(zip(*self.columns))

    def cached(self, key, build):
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        value = build()
        with self._lock:
            return self._cache.setdefault(key, value)


def build_parameterization(phi: Sequence[MultiPoly], order: WeightOrder, field: Optional[FieldSpec] = None,
                           grassmannian: Optional[Tuple[int, int]] = None) -> Parameterization:
    if not phi:
        raise ValueError("at least one generator is required")
    field = field or phi[0].field
    varnames = phi[0].varnames
    if len(order.omega) != len(varnames):
        raise ValueError(f"weight vector has {len(order.omega)} entries for {len(varnames)} variables")
    columns = []
    for j, f in enumerate(phi):
        if f.field != field or f.varnames != varnames:
            raise FieldMismatchError(f"generator {j} lives over {f.field} in {f.varnames}")
        if f.is_zero():
            raise ValueError(f"generator {j} is zero")
        if not order.initial_is_monomial(f):
            logger.warning("initial form of generator %d is not a monomial; the tie is broken by degree", j)
        columns.append((1,) + order.leading_exponent(f))
    seen = {}
    for j, column in enumerate(columns):
        if column in seen:
            raise DuplicateLeadingTermError(
                f"generators {seen[column]} and {j} share the leading exponent {column[1:]}")
        seen[column] = j
    logger.debug("leading exponents %s", [c[1:] for c in columns])
    return Parameterization(field=field, phi=tuple(phi), order=order, columns=tuple(columns),
                           grassmannian=grassmannian)


def support_key(point: Point):
    return (sum(point[1:]), point[1:])


@dataclass(frozen=True)
class GradedSupport:
    """Points of ``d * A`` in support order.

    ``witness[beta] = (gamma, i)`` with ``gamma`` in ``(d - 1) * A`` is kept for ``d >= 2``;
    ``monomials[beta]`` is the x-exponent that produced ``beta``.
    """
    degree: int
    points: Tuple[Point, ...]
    witness: Dict[Point, Tuple[Point, int]]
    monomials: Dict[Point, Exponent]
    index: Dict[Point, int]

    def __len__(self):
        return len(self.points)


def graded_support(par: Parameterization, d: int) -> GradedSupport:
    if d < 0:
        raise ValueError("degree must be nonnegative")
    return par.cached(('support', d), lambda: _build_support(par, d))


def _build_support(par: Parameterization, d: int) -> GradedSupport:
    ncols = len(par.columns)
    if d == 0:
        origin = (0,) * (par.n + 1)
        return GradedSupport(0, (origin,), {}, {origin: (0,) * ncols}, {origin: 0})
    previous = graded_support(par, d - 1)
    found: Dict[Point, Tuple[Point, int]] = {}
    for gamma in previous.points:
        for i, alpha in enumerate(par.columns):
            beta = tuple(map(operator.add, gamma, alpha))
            if beta not in found:
                found[beta] = (gamma, i)
    points = tuple(sorted(found, key=support_key))
    monomials = {}
    for beta, (gamma, i) in found.items():
        exponent = list(previous.monomials[gamma])
        exponent[i] += 1
        monomials[beta] = tuple(exponent)
    witness = found if d >= 2 else {}
    return GradedSupport(d, points, witness, monomials, {beta: k for k, beta in enumerate(points)})


@dataclass(frozen=True)
class GradedBasis:
    degree: int
    support: GradedSupport
    elements: Tuple[MultiPoly, ...]
    leading: Tuple[object, ...]

    def element(self, beta: Point) -> MultiPoly:
        return self.elements[self.support.index[beta]]


def graded_basis(par: Parameterization, d: int) -> GradedBasis:
    return par.cached(('basis', d), lambda: _build_basis(par, d))


def _build_basis(par: Parameterization, d: int) -> GradedBasis:
    support = graded_support(par, d)
    if d == 0:
        elements = (MultiPoly.constant(1, par.varnames, par.field),)
    elif d == 1:
        by_point = {column: f for column, f in zip(par.columns, par.phi)}
        elements = tuple(by_point[beta] for beta in support.points)
    else:
        previous = graded_basis(par, d - 1)
        elements = []
        for beta in support.points:
            gamma, i = support.witness[beta]
            elements.append(previous.element(gamma) * par.phi[i])
        elements = tuple(elements)
    leading = []
    for beta, b in zip(support.points, elements):
        exponent, coeff = par.order.leading_term(b)
        assert exponent == beta[1:], f"leading exponent {exponent} of basis element {beta} is off"
        leading.append(coeff)
    return GradedBasis(d, support, elements, tuple(leading))


@dataclass(frozen=True)
class SubductionResult:
    degree: int
    coeffs: Dict[Point, object]
    remainder: MultiPoly

    @property
    def is_member(self) -> bool:
        return self.remainder.is_zero()

    def vector(self, support: GradedSupport, field: FieldSpec) -> List:
        vector = [field.zero] * len(support)
        for beta, c in self.coeffs.items():
            vector[support.index[beta]] = c
        return vector

    def sparse(self, support: GradedSupport) -> Dict[int, object]:
        return {support.index[beta]: c for beta, c in self.coeffs.items()}


def subduct(par: Parameterization, g: MultiPoly, d: int) -> SubductionResult:
    """Writes ``g = sum coeffs[beta] * b_{d,beta} + remainder``.

    The remainder collects terms whose exponent is not in ``d * A``; it is zero
    exactly when ``g`` lies in the span of the degree ``d`` basis.
    """
    field = par.field
    if g.field != field or g.varnames != par.varnames:
        raise FieldMismatchError("polynomial does not live in the parameterization's ring")
    basis = graded_basis(par, d)
    index = basis.support.index
    key = par.order.key
    work = dict(g.terms)
    heap = [(key(e), e) for e in work]
    heapq.heapify(heap)
    coeffs: Dict[Point, object] = {}
    remainder: Dict[Exponent, object] = {}
    while heap:
        _, mu = heapq.heappop(heap)
        c = work.get(mu)
        if c is None:
            continue
        beta = (d,) + mu
        k = index.get(beta)
        if k is None:
            remainder[mu] = work.pop(mu)
            continue
        factor = field.div(c, basis.leading[k])
        coeffs[beta] = field.add(coeffs.get(beta, field.zero), factor)
        for e, v in basis.elements[k].terms.items():
            value = field.sub(work.get(e, field.zero), field.mul(factor, v))
            if value:
                if e not in work:
                    heapq.heappush(heap, (key(e), e))
                work[e] = value
            else:
                work.pop(e, None)
    return SubductionResult(d, coeffs, MultiPoly(remainder, par.varnames, field, normalized=True))


@dataclass(frozen=True)
class ExpansionTable:
    """``entries[k][j]`` is ``b_{d, gamma_k} * phi_j`` as a sparse vector over ``(d + 1) * A``.

    ``failures`` lists ``(gamma, j, remainder)`` for products outside the span.
    """
    degree: int
    entries: Tuple[Tuple[Dict[int, object], ...], ...]
    failures: Tuple[Tuple[Point, int, MultiPoly], ...]

    @property
    def complete(self) -> bool:
        return not self.failures


def _expand_products(par, basis, d, k):
    b = basis.elements[k]
    target = graded_support(par, d + 1)
    row, failures = [], []
    for j, f in enumerate(par.phi):
        result = subduct(par, b * f, d + 1)
        row.append(result.sparse(target))
        if not result.is_member:
            failures.append((basis.support.points[k], j, result.remainder))
    return tuple(row), failures


def expansion_table(par: Parameterization, d: int) -> ExpansionTable:
    return par.cached(('table', d), lambda: _build_table(par, d))


def _build_table(par: Parameterization, d: int) -> ExpansionTable:
    basis = graded_basis(par, d)
    graded_basis(par, d + 1)
    threads = max(1, int(get_setting('THREADS')))
    indices = range(len(basis.elements))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda k: _expand_products(par, basis, d, k), indices))
    else:
        rows = [_expand_products(par, basis, d, k) for k in indices]
    failures = tuple(f for _, fs in rows for f in fs)
    logger.debug("expansion table at degree %d: %d rows, %d failures", d, len(rows), len(failures))
    return ExpansionTable(d, tuple(r for r, _ in rows), failures)


@dataclass(frozen=True)
class DegreeCheck:
    degree: int
    support_size: int
    rank: int
    passed: bool


@dataclass(frozen=True)
class KhovanskiiReport:
    checks: Tuple[DegreeCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed_degree(self) -> Optional[int]:
        return next((c.degree for c in self.checks if not c.passed), None)


def check_khovanskii_truncated(par: Parameterization, dmax: int) -> KhovanskiiReport:
    """Compares ``|d * A|`` with ``dim R_d`` for ``1 <= d <= dmax``, stopping at the first failure.

    ``R_d`` is spanned by ``b_{d-1,gamma} * phi_j``; it has dimension ``|d * A|``
    plus the rank of the subduction remainders of those products.
    """
    checks = [DegreeCheck(1, len(graded_support(par, 1)), len(par.phi), True)]
    for d in range(2, dmax + 1):
        table = expansion_table(par, d - 1)
        size = len(graded_support(par, d))
        extra = 0
        if table.failures:
            monomials = sorted({e for _, _, r in table.failures for e in r.terms})
            position = {e: i for i, e in enumerate(monomials)}
            rows = []
            for _, _, r in table.failures:
                row = [par.field.zero] * len(monomials)
                for e, c in r.terms.items():
                    row[position[e]] = c
                rows.append(row)
            extra = linalg.rank(rows, len(monomials), par.field)
        check = DegreeCheck(d, size, size + extra, extra == 0)
        checks.append(check)
        logger.info("degree %d: |dA| = %d, dim R_d = %d", d, check.support_size, check.rank)
        if not check.passed:
            break
    return KhovanskiiReport(tuple(checks))


def require_khovanskii(par: Parameterization, dmax: int) -> KhovanskiiReport:
    report = check_khovanskii_truncated(par, dmax)
    if not report.passed:
        raise NotKhovanskiiError(
            f"generators are not a Khovanskii basis up to degree {dmax}: "
            f"the check fails at degree {report.failed_degree}", report)
    return report


def monomial_product(par: Parameterization, exponent: Exponent) -> MultiPoly:
    """``prod phi_j^{exponent_j}``, memoized on the parameterization."""
    exponent = tuple(exponent)

    def build():
        j = next((i for i, k in enumerate(exponent) if k), None)
        if j is None:
            return MultiPoly.constant(1, par.varnames, par.field)
        rest = list(exponent)
        rest[j] -= 1
        return monomial_product(par, tuple(rest)) * par.phi[j]

    return par.cached(('xmono', exponent), build)


def expand_form(par: Parameterization, form: Dict[Exponent, object]) -> MultiPoly:
    result = MultiPoly.zero(par.varnames, par.field)
    for exponent, c in form.items():
        if c:
            result = result + monomial_product(par, exponent).scale(c)
    return result


def affine_chart(par: Parameterization):
    """Finds ``phi_{j0} = c0`` and ``phi_{j_v} = c_v * t_v`` for every variable, or ``None``."""
    n = par.n
    constant = None
    linear = [None] * n
    for j, f in enumerate(par.phi):
        if len(f.terms) != 1:
            continue
        (exponent, c), = f.terms.items()
        if sum(exponent) == 0 and constant is None:
            constant = (j, c)
        elif sum(exponent) == 1:
            v = exponent.index(1)
            if linear[v] is None:
                linear[v] = (j, c)
    if constant is None or any(entry is None for entry in linear):
        return None
    return constant, tuple(linear)
