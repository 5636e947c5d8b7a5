"""From KM kernels to multiplication matrices and numerical solutions."""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg as sla

from . import linalg
from .conf import get_setting
from .exceptions import (ChartError, CommutationError, RegularityError, ScanSizeError, SingularSelectionError,
                         UnsupportedFieldError)
from .hilbert import certified_hilbert_data, regularity_bound
from .khov import affine_chart, expansion_table, graded_support, require_khovanskii
from .km import KMMatrix, StructuredSystem, km_matrix
from .poly import FieldSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KernelBasis:
    degree: int
    field: FieldSpec
    vectors: Tuple[Tuple[object, ...], ...]
    col_labels: Tuple[Tuple[int, ...], ...]
    rank: int

    @property
    def nullity(self) -> int:
        return len(self.vectors)


def kernel_basis(matrix: KMMatrix) -> KernelBasis:
    vectors, rank = linalg.kernel(matrix.entries, len(matrix.col_labels), matrix.field)
    logger.info("degree %d: rank %d, nullity %d", matrix.degree, rank, len(vectors))
    return KernelBasis(matrix.degree, matrix.field, tuple(map(tuple, vectors)), matrix.col_labels, rank)


@dataclass(frozen=True)
class MultiplicationSystem:
    """``mats[j] = (N_h|B)^-1 (N_{x_j})|B`` for the random form ``h = sum h_coeffs[j] x_j``."""
    system: StructuredSystem
    degree: int
    delta: int
    h_coeffs: Tuple[object, ...]
    b_cols: Tuple[Tuple[int, ...], ...]
    mats: Tuple[Tuple[Tuple[object, ...], ...], ...]
    seed: int
    e: int = 1

    @property
    def field(self) -> FieldSpec:
        return self.system.field


def _scaled_rows(kernel: KernelBasis) -> List[List]:
    if kernel.field.is_prime_field:
        return [list(v) for v in kernel.vectors]
    return [linalg.clear_denominators(v) for v in kernel.vectors]


def _shifted_kernels(system: StructuredSystem, kernel: KernelBasis, d: int) -> List[List[List]]:
    """``N_{x_j}``: column ``gamma`` is ``N`` applied to ``b_{d,gamma} * phi_j``."""
    par = system.par
    field = par.field
    table = expansion_table(par, d)
    rows = _scaled_rows(kernel)
    supports = [{c: v for c, v in enumerate(row) if v} for row in rows]
    gammas = len(graded_support(par, d))
    shifted = []
    for j in range(len(par.phi)):
        mat = [[field.zero] * gammas for _ in rows]
        for k in range(gammas):
            entry = table.entries[k][j]
            for r, support in enumerate(supports):
                total = 0
                for col, v in entry.items():
                    w = support.get(col)
                    if w:
                        total += v * w
                mat[r][k] = field.coerce(total)
        shifted.append(mat)
    return shifted


def _sample_h(field: FieldSpec, count: int, delta: int, rng) -> List:
    if field.is_prime_field:
        return [field.random_element(rng) for _ in range(count)]
    return [field.random_element(rng, 1, 2 * delta * delta) for _ in range(count)]


def _commute(a, b, field) -> bool:
    return linalg.matmul(a, b, field) == linalg.matmul(b, a, field)


def multiplication_matrices(system: StructuredSystem, kernel: KernelBasis, d: int,
                            seed: Optional[int] = None, rng=None) -> MultiplicationSystem:
    """Needs ``kernel`` at degree ``d + 1``, with ``d`` and ``d + 1`` both in the regularity.

    ``h`` is drawn from ``rng`` when given, else from a generator seeded with ``seed``.
    """
    if kernel.degree != d + 1:
        raise ValueError(f"kernel is at degree {kernel.degree}, expected {d + 1}")
    seed = get_setting('DEFAULT_SEED') if seed is None else seed
    field = system.field
    delta = kernel.nullity
    shifted = _shifted_kernels(system, kernel, d)
    labels = graded_support(system.par, d).points
    rng = np.random.default_rng(seed) if rng is None else rng
    for attempt in range(get_setting('RETRIES')):
        h = _sample_h(field, len(shifted), delta, rng)
        n_h = [[field.zero] * len(labels) for _ in range(delta)]
        for c, mat in zip(h, shifted):
            for r in range(delta):
                row, out = mat[r], n_h[r]
                for k, v in enumerate(row):
                    if v:
                        out[k] = field.add(out[k], field.mul(c, v))
        cols = linalg.independent_columns(n_h, len(labels), field)[:delta]
        if len(cols) < delta:
            logger.info("attempt %d: N_h has rank %d < %d, resampling h", attempt + 1, len(cols), delta)
            continue
        inverse = linalg.inverse([[row[c] for c in cols] for row in n_h], field)
        mats = tuple(tuple(map(tuple, linalg.matmul(inverse, [[row[c] for c in cols] for row in mat], field)))
                     for mat in shifted)
        for a, b in itertools.combinations(mats, 2):
            if not _commute(a, b, field):
                raise CommutationError("multiplication matrices do not commute: "
                                       "degrees not in the regularity or scheme non-reduced")
        return MultiplicationSystem(system, d, delta, tuple(h), tuple(labels[c] for c in cols), mats, seed)
    raise SingularSelectionError("h vanishes on a solution or delta overcounted")


def h_combination(ms: MultiplicationSystem):
    field = ms.field
    total = [[field.zero] * ms.delta for _ in range(ms.delta)]
    for c, mat in zip(ms.h_coeffs, ms.mats):
        for r in range(ms.delta):
            for k in range(ms.delta):
                if mat[r][k]:
                    total[r][k] = field.add(total[r][k], field.mul(c, mat[r][k]))
    return total


@dataclass(frozen=True)
class SolutionSet:
    coords: np.ndarray
    residuals: Tuple[float, ...] = ()
    diagnostics: Dict[str, object] = field(default_factory=dict)
    warnings: Tuple[str, ...] = ()
    dreg: Optional[int] = None
    multiplication: Optional[MultiplicationSystem] = None

    @property
    def delta(self) -> int:
        return len(self.coords)

    def normalized(self, mode: str = 'first') -> np.ndarray:
        return normalize(self.coords, mode)


def normalize(coords: np.ndarray, mode: str = 'first', tolerance: float = 1e-12) -> np.ndarray:
    if mode == 'raw':
        return coords.copy()
    if mode != 'first':
        raise ValueError(f"unknown normalization {mode!r}")
    out = coords.astype(complex)
    for row in out:
        scale = np.max(np.abs(row)) if row.size else 0.0
        nonzero = np.nonzero(np.abs(row) > tolerance * max(scale, 1.0))[0]
        if nonzero.size:
            row /= row[nonzero[0]]
    return out


def _cluster_gap(values: np.ndarray) -> float:
    if len(values) < 2:
        return np.inf
    scale = max(1.0, float(np.max(np.abs(values))))
    gaps = np.abs(values[:, None] - values[None, :])
    np.fill_diagonal(gaps, np.inf)
    return float(np.min(gaps)) / scale


def extract_solutions(ms: MultiplicationSystem, seed: Optional[int] = None, rng=None) -> SolutionSet:
    """Eigenvalue readout; the combination weights come from ``rng``, continuing after the ``h`` draws in ``solve``."""
    if ms.field.is_prime_field:
        raise UnsupportedFieldError(
            f"eigenvalues over {ms.field.label} are not computed; use the multiplication matrices "
            f"or the brute-force scan")
    seed = get_setting('DEFAULT_SEED') if seed is None else seed
    mats = [np.array([[float(v) for v in row] for row in mat], dtype=float).reshape(ms.delta, ms.delta)
            for mat in ms.mats]
    rng = np.random.default_rng(seed) if rng is None else rng
    warnings = []
    cluster_tolerance = get_setting('CLUSTER_TOLERANCE')
    for attempt in range(get_setting('RETRIES')):
        r = rng.standard_normal(len(mats))
        combined = sum(c * m for c, m in zip(r, mats))
        values, vectors = sla.eig(combined)
        if _cluster_gap(values) > cluster_tolerance:
            break
        logger.info("attempt %d: eigenvalues cluster, drawing a new combination", attempt + 1)
    else:
        warnings.append("eigenvalues cluster: possibly non-reduced")
        logger.warning(warnings[-1])
    coords = np.empty((ms.delta, len(mats)), dtype=complex)
    offdiag = 0.0
    for j, m in enumerate(mats):
        diagonalized = sla.solve(vectors, m @ vectors)
        coords[:, j] = np.diag(diagonalized)
        off = diagonalized - np.diag(np.diag(diagonalized))
        scale = max(1.0, float(np.max(np.abs(np.diag(diagonalized)))) if ms.delta else 1.0)
        offdiag = max(offdiag, float(np.max(np.abs(off))) / scale if ms.delta else 0.0)
    if offdiag > get_setting('EIGEN_TOLERANCE'):
        warnings.append(f"joint diagonalization residue {offdiag:.3g}")
        logger.warning(warnings[-1])
    commutator = 0.0
    for a, b in itertools.combinations(mats, 2):
        commutator = max(commutator, float(np.max(np.abs(a @ b - b @ a))) if ms.delta else 0.0)
    normal = normalize(coords)
    real = [bool(np.all(np.abs(row.imag) < get_setting('EIGEN_TOLERANCE'))) for row in normal]
    diagnostics = {'commutator_norm': commutator, 'offdiag': offdiag, 'real': real}
    res = tuple(residuals(ms.system, coords)) if ms.system.equations else ()
    return SolutionSet(coords, res, diagnostics, tuple(warnings), ms.degree + 1, ms)


def _evaluate_form(form, point: np.ndarray) -> complex:
    total = 0j
    for alpha, c in form.items():
        term = complex(float(c))
        for x, k in zip(point, alpha):
            if k:
                term *= x ** k
        total += term
    return total


def residuals(system: StructuredSystem, coords: np.ndarray, chart: bool = False) -> List[float]:
    """Largest scaled ``|F_i|`` per solution.

    Homogeneous evaluation divides by ``||c||_1 * ||x||_inf^{d_i}``; with ``chart``
    the affine ``t`` is recovered from ``phi`` and ``f_i(t)`` is scaled by ``||f_i||_1``.
    """
    out = []
    if chart:
        points = chart_points(system.par, coords)
        for t in points:
            worst = 0.0
            for equation in system.equations:
                norm = sum(abs(float(c)) for c in equation.poly.terms.values()) or 1.0
                size = max(1.0, float(np.max(np.abs(t)))) ** equation.poly.total_degree()
                worst = max(worst, abs(equation.poly.evaluate(list(t))) / (norm * size))
            out.append(worst)
        return out
    for x in coords:
        worst = 0.0
        size = float(np.max(np.abs(x))) if len(x) else 0.0
        for equation in system.equations:
            norm = sum(abs(float(c)) for c in equation.coeff_form.values())
            if not norm:
                continue
            worst = max(worst, abs(_evaluate_form(equation.coeff_form, x)) / (norm * size ** equation.degree))
        out.append(worst)
    return out


def chart_points(par, coords: np.ndarray, tolerance: float = 1e-12) -> np.ndarray:
    """Affine ``t`` for each homogeneous row, through generators equal to ``c`` and ``c * t_v``."""
    chart = affine_chart(par)
    if chart is None:
        raise ChartError("generators contain no affine chart")
    (j0, c0), linear = chart
    points = []
    for x in coords:
        scale = max(1.0, float(np.max(np.abs(x))))
        if abs(x[j0]) <= tolerance * scale:
            raise ChartError("solution lies outside the affine chart")
        base = x[j0] / float(c0)
        points.append([x[j] / (float(c) * base) for j, c in linear])
    return np.array(points, dtype=complex).reshape(len(points), par.n)


def nullity_at(system: StructuredSystem, d: int, reduce: bool = False) -> int:
    return kernel_basis(km_matrix(system, d, reduce=reduce)).nullity


def _adaptive_degree(system: StructuredSystem, dreg_max: int) -> int:
    start = max(system.degrees) + 1
    previous = nullity_at(system, start - 1)
    for d in range(start, dreg_max + 1):
        current = nullity_at(system, d)
        logger.info("adaptive search: nullity %d at degree %d", current, d)
        if current == previous and current > 0:
            return d
        previous = current
    raise RegularityError(f"nullity did not stabilize by degree {dreg_max}: positive-dimensional or irregular")


def choose_dreg(system: StructuredSystem, adaptive: bool = False, dreg_max: Optional[int] = None,
                hreg: Optional[int] = None) -> int:
    par = system.par
    if system.s < par.n:
        raise RegularityError(f"{system.s} equations on a {par.n}-dimensional variety: positive-dimensional")
    bound = None
    if hreg is None and system.s == par.n:
        try:
            hreg = certified_hilbert_data(par).hreg
        except RegularityError as error:
            if not adaptive:
                raise
            logger.info("%s; falling back to the adaptive search", error)
    if hreg is not None:
        bound = regularity_bound(hreg, system.degrees, par.n)
    if bound is not None and bound.usable:
        return max(bound.value + 1, max(system.degrees))
    if not adaptive:
        raise RegularityError("overdetermined system: pass a regularity degree or use the adaptive search")
    dreg_max = dreg_max or sum(system.degrees) + get_setting('ADAPTIVE_EXTRA_DEGREES')
    return _adaptive_degree(system, dreg_max)


def solve(system: StructuredSystem, dreg: Optional[int] = None, seed: Optional[int] = None,
          adaptive: bool = False, reduce: bool = False, dreg_max: Optional[int] = None,
          hreg: Optional[int] = None, count_only: bool = False) -> SolutionSet:
    """``km_matrix(dreg) -> kernel_basis -> multiplication_matrices(dreg - 1) -> extract_solutions``."""
    if not system.equations:
        raise RegularityError("no equations: the solution set is positive-dimensional")
    seed = get_setting('DEFAULT_SEED') if seed is None else seed
    if dreg is None:
        dreg = choose_dreg(system, adaptive, dreg_max, hreg)
    if dreg < max(system.degrees):
        raise ValueError(f"dreg {dreg} is below the largest equation degree")
    logger.info("solving %s at degree %d", system.label or 'system', dreg)
    require_khovanskii(system.par, dreg)
    kernel = kernel_basis(km_matrix(system, dreg, reduce=reduce))
    if kernel.nullity == 0:
        return SolutionSet(np.zeros((0, len(system.par.phi)), dtype=complex), warnings=("no solutions",),
                           dreg=dreg)
    rng = np.random.default_rng(seed)
    ms = multiplication_matrices(system, kernel, dreg - 1, seed, rng=rng)
    if count_only:
        return SolutionSet(np.zeros((ms.delta, 0), dtype=complex), dreg=dreg, multiplication=ms)
    return extract_solutions(ms, seed, rng=rng)


def _scan_values(equation, grid: np.ndarray, p: int) -> np.ndarray:
    values = np.zeros(len(grid), dtype=np.int64)
    for exponent, c in equation.poly.terms.items():
        term = np.full(len(grid), int(c) % p, dtype=np.int64)
        for v, k in enumerate(exponent):
            for _ in range(k):
                term = term * grid[:, v] % p
        values = (values + term) % p
    return values


def brute_force_affine(system: StructuredSystem) -> List[Tuple[int, ...]]:
    """All ``t`` in ``F_p^n`` with every ``f_i(t) = 0``, scanned in vectorized chunks."""
    field = system.field
    if not field.is_prime_field:
        raise UnsupportedFieldError("the exhaustive scan needs a prime field")
    p, n = field.modulus, system.par.n
    total = p ** n
    if (p > get_setting('BRUTE_FORCE_MAX_PRIME') or n > get_setting('BRUTE_FORCE_MAX_VARS')
            or total > get_setting('BRUTE_FORCE_MAX_POINTS')):
        raise ScanSizeError(f"scan of F_{p}^{n} is too large")
    chunk = get_setting('BRUTE_FORCE_CHUNK')
    found = []
    for start in range(0, total, chunk):
        flat = np.arange(start, min(start + chunk, total), dtype=np.int64)
        grid = np.stack(np.unravel_index(flat, (p,) * n), axis=-1).astype(np.int64)
        for equation in system.equations:
            grid = grid[_scan_values(equation, grid, p) == 0]
        found.extend(tuple(int(v) for v in row) for row in grid)
    return found


def image_point(par, t: Sequence[int]) -> Tuple[int, ...]:
    return tuple(f.evaluate(list(t)) for f in par.phi)


def kernel_annihilates(kernel: KernelBasis, par, x: Sequence[int]) -> bool:
    """Whether evaluation at ``x`` lies in the span of the kernel functionals."""
    field = kernel.field
    support = graded_support(par, kernel.degree)
    values = []
    for beta in support.points:
        exponent = support.monomials[beta]
        value = field.one
        for xj, k in zip(x, exponent):
            if k:
                value = field.mul(value, pow(xj, k, field.modulus) if field.modulus else xj ** k)
        values.append(value)
    rows = [list(v) for v in kernel.vectors]
    return linalg.rank(rows + [values], len(values), field) == len(rows)
