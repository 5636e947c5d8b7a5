"""Hilbert functions of ``K[X]``, the numerator of their series and what follows from it."""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from math import comb, factorial, prod
from typing import Callable, Optional, Sequence, Tuple

from .conf import get_setting
from .exceptions import RegularityError
from .khov import Parameterization, graded_support

logger = logging.getLogger(__name__)


def hilbert_function(par: Parameterization, d: int) -> int:
    """``HF(d) = |d * A|``, valid while ``phi`` is a Khovanskii basis through degree ``d``."""
    return len(graded_support(par, d))


@dataclass(frozen=True)
class HilbertData:
    """``HS(t) = (c_a t^a + ... + c_b t^b) / (1 - t)^(n + 1)``."""
    hf: Tuple[int, ...]
    n: int
    a: int
    numerator: Tuple[int, ...]
    certified: bool

    @property
    def b(self) -> int:
        return self.a + len(self.numerator) - 1

    @property
    def hreg(self) -> int:
        return self.b - self.n

    @property
    def degree(self) -> int:
        return sum(self.numerator)

    @property
    def warnings(self) -> Tuple[str, ...]:
        if self.certified:
            return ()
        return (f"numerator not certified: HF known to degree {len(self.hf) - 1}, "
                f"needs degree {self.b + self.n + 2}",)


def hilbert_data(hf: Sequence[int], n: int) -> HilbertData:
    """Multiplies ``sum HF(d) t^d`` by ``(1 - t)^(n + 1)`` and truncates.

    Coefficient ``k`` of the product is exact for ``k < len(hf)``; the numerator
    is certified when ``len(hf) > b + n + 1``.
    """
    hf = tuple(int(v) for v in hf)
    dmax = len(hf) - 1
    if dmax < n + 2:
        raise ValueError(f"Dmax too small: need at least {n + 2}, got {dmax}")
    coeffs = []
    for k in range(dmax + 1):
        coeffs.append(sum((-1) ** i * comb(n + 1, i) * hf[k - i] for i in range(min(k, n + 1) + 1)))
    nonzero = [k for k, c in enumerate(coeffs) if c]
    if not nonzero:
        raise ValueError("Hilbert series vanishes")
    a, b = nonzero[0], nonzero[-1]
    certified = dmax >= b + n + 2
    data = HilbertData(hf, n, a, tuple(coeffs[a:b + 1]), certified)
    if not certified:
        logger.warning(data.warnings[0])
    return data


def hilbert_numerator(par: Parameterization, dmax: int) -> HilbertData:
    n = par.n
    if dmax < n + 2:
        raise ValueError(f"Dmax too small: need at least {n + 2}, got {dmax}")
    return hilbert_data([hilbert_function(par, d) for d in range(dmax + 1)], n)


def hilbert_regularity(data: HilbertData) -> int:
    if not data.certified:
        logger.warning("regularity index read from an uncertified numerator")
    return data.hreg


def variety_degree(data: HilbertData) -> int:
    if not data.certified:
        logger.warning("degree read from an uncertified numerator")
    return data.degree


COMPLETE_INTERSECTION = 'complete_intersection'
OVERDETERMINED = 'overdetermined'
UNDERDETERMINED = 'underdetermined'


@dataclass(frozen=True)
class RegularityBound:
    value: Optional[int]
    status: str

    @property
    def usable(self) -> bool:
        return self.value is not None


def regularity_bound(hreg: int, degrees: Sequence[int], n: int) -> RegularityBound:
    """``sum d_i + hreg`` for a square system; other shapes go to the adaptive search."""
    if len(degrees) == n:
        return RegularityBound(sum(degrees) + hreg, COMPLETE_INTERSECTION)
    return RegularityBound(None, OVERDETERMINED if len(degrees) > n else UNDERDETERMINED)


def _grassmannian_polynomial(k: int, m: int, t: int) -> int:
    numerator = prod(factorial(i) for i in range(1, k))
    denominator = prod(factorial(j) for j in range(m - k, m))
    value = Fraction(numerator, denominator) * prod(t + i + j for i in range(1, k + 1) for j in range(m - k))
    assert value.denominator == 1
    return int(value)


def grassmannian_closed_forms(k: int, m: int) -> Tuple[Callable[[int], int], int]:
    """Hilbert polynomial of the Pluecker embedding of ``Gr(k, m)`` and its regularity index."""
    if not 0 < k < m:
        raise ValueError(f"need 0 < k < m, got k={k}, m={m}")
    return partial(_grassmannian_polynomial, k, m), -m + 1


def grassmannian_hilbert_data(k: int, m: int) -> HilbertData:
    """Numerator from closed-form values; no enumeration of lattice points."""
    hp, hreg = grassmannian_closed_forms(k, m)
    n = k * (m - k)
    dmax = max(n + 2, hreg + 2 * n + 3)
    return hilbert_data([hp(d) for d in range(dmax + 1)], n)


def certified_hilbert_data(par: Parameterization) -> HilbertData:
    """Numerator of ``HS_X`` for the solver's regularity bound.

    Pluecker charts use the closed forms. Otherwise ``HF`` is enumerated degree
    by degree, widening the window until the numerator is certified; a degree
    whose point count could exceed ``HILBERT_MAX_POINTS`` is not enumerated.
    """
    if par.grassmannian is not None:
        return grassmannian_hilbert_data(*par.grassmannian)
    budget = get_setting('HILBERT_MAX_POINTS')
    n = par.n
    hf = []
    dmax = n + 2
    data = None
    for _ in range(get_setting('RETRIES')):
        while len(hf) <= dmax:
            if hf and hf[-1] * len(par.phi) > budget:
                raise RegularityError(
                    f"Hilbert function beyond degree {len(hf) - 1} exceeds {budget} points; "
                    f"pass a regularity degree or use the adaptive search")
            hf.append(hilbert_function(par, len(hf)))
        data = hilbert_data(hf, n)
        if data.certified:
            return data
        dmax = data.b + n + 2
    return data
