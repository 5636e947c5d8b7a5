"""Exact coefficient fields, sparse multivariate polynomials and their text form.

Scalars are plain Python values interpreted by a ``FieldSpec``: ``Fraction``
for the rationals and ``int`` residues in ``[0, p)`` for a prime field.
"""
import logging
import operator
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping, Optional, Sequence, Tuple

from .exceptions import FieldMismatchError, PolynomialSyntaxError, UnknownVariableError

logger = logging.getLogger(__name__)

RATIONALS = 'QQ'
PRIME_FIELD = 'Fp'
MAX_MODULUS = 2 ** 62

Exponent = Tuple[int, ...]

_MILLER_RABIN_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MILLER_RABIN_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MILLER_RABIN_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    kind: str = RATIONALS
    modulus: Optional[int] = None

    def __post_init__(self):
        if self.kind == RATIONALS:
            if self.modulus is not None:
                raise ValueError("the rationals take no modulus")
        elif self.kind == PRIME_FIELD:
            if self.modulus is None or not 2 <= self.modulus < MAX_MODULUS:
                raise ValueError(f"modulus must lie in [2, 2^62), got {self.modulus}")
            if not is_prime(self.modulus):
                raise ValueError(f"{self.modulus} is not prime")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rationals(cls) -> 'FieldSpec':
        return cls(RATIONALS)

    @classmethod
    def prime(cls, p: int) -> 'FieldSpec':
        return cls(PRIME_FIELD, int(p))

    @classmethod
    def from_label(cls, label) -> 'FieldSpec':
        """Accepts ``"QQ"``, ``"Fp(p)"``, a bare prime, or a ``{"kind", "modulus"}`` dict."""
        if isinstance(label, FieldSpec):
            return label
        if isinstance(label, Mapping):
            return cls(label.get('kind', RATIONALS), label.get('modulus'))
        if isinstance(label, int):
            return cls.prime(label)
        text = str(label).strip()
        if text.upper() in ('QQ', 'Q'):
            return cls.rationals()
        match = re.fullmatch(r'(?:F[pP]?\(?)?\s*(\d+)\s*\)?', text)
        if match is None:
            raise ValueError(f"cannot read a field from {label!r}")
        return cls.prime(int(match.group(1)))

    def __str__(self) -> str:
        return self.label

    @property
    def label(self) -> str:
        return RATIONALS if self.kind == RATIONALS else f"Fp({self.modulus})"

    @property
    def is_prime_field(self) -> bool:
        return self.kind == PRIME_FIELD

    @property
    def zero(self):
        return Fraction(0) if self.kind == RATIONALS else 0

    @property
    def one(self):
        return Fraction(1) if self.kind == RATIONALS else 1

    def coerce(self, value):
        if self.kind == RATIONALS:
            if isinstance(value, str):
                return Fraction(value.strip())
            return Fraction(value)
        p = self.modulus
        if isinstance(value, str):
            value = Fraction(value.strip())
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise FieldMismatchError(f"{value} has no image in {self.label}")
            return value.numerator * pow(value.denominator, -1, p) % p
        return int(value) % p

    def add(self, a, b):
        return a + b if self.modulus is None else (a + b) % self.modulus

    def sub(self, a, b):
        return a - b if self.modulus is None else (a - b) % self.modulus

    def mul(self, a, b):
        return a * b if self.modulus is None else a * b % self.modulus

    def neg(self, a):
        return -a if self.modulus is None else -a % self.modulus

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a) if self.modulus is None else pow(a, -1, self.modulus)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def to_float(self, a) -> float:
        if self.is_prime_field:
            raise FieldMismatchError(f"{self.label} elements have no floating point value")
        return float(a)

    def random_element(self, rng, low=1, high=None):
        """Draws from ``rng``: uniform residues, or integers in ``[low, high]`` over the rationals."""
        if self.is_prime_field:
            return int(rng.integers(0, self.modulus))
        return Fraction(int(rng.integers(low, (high or 100) + 1)))


QQ = FieldSpec.rationals()


@dataclass(frozen=True)
class WeightOrder:
    """Order on exponents: ascending ``(omega . alpha, |alpha|, alpha)``; smallest leads."""
    omega: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'omega', tuple(int(w) for w in self.omega))

    def key(self, exponent: Exponent):
        return (sum(map(operator.mul, self.omega, exponent)), sum(exponent), exponent)

    def weight(self, exponent: Exponent) -> int:
        return sum(map(operator.mul, self.omega, exponent))

    def leading_exponent(self, poly: 'MultiPoly') -> Exponent:
        if poly.is_zero():
            raise ValueError("the zero polynomial has no leading term")
        return min(poly.terms, key=self.key)

    def leading_term(self, poly: 'MultiPoly'):
        exponent = self.leading_exponent(poly)
        return exponent, poly.terms[exponent]

    def initial_is_monomial(self, poly: 'MultiPoly') -> bool:
        weights = [self.weight(e) for e in poly.terms]
        return weights.count(min(weights)) == 1


class MultiPoly:
    """Sparse polynomial over a ``FieldSpec``; treat instances as immutable."""

    __slots__ = ('terms', 'varnames', 'field')

    def __init__(self, terms: Mapping[Exponent, object], varnames: Sequence[str], field: FieldSpec = QQ,
                 normalized=False):
        self.varnames = tuple(varnames)
        self.field = field
        if normalized:
            self.terms = dict(terms)
            return
        n = len(self.varnames)
        clean = {}
        for exponent, coeff in terms.items():
            exponent = tuple(exponent)
            if len(exponent) != n or any(e < 0 for e in exponent):
                raise ValueError(f"exponent {exponent} does not fit {n} variables")
            coeff = field.coerce(coeff)
            if coeff:
                clean[exponent] = field.add(clean.get(exponent, field.zero), coeff)
                if not clean[exponent]:
                    del clean[exponent]
        self.terms = clean

    @classmethod
    def zero(cls, varnames, field=QQ) -> 'MultiPoly':
        return cls({}, varnames, field, normalized=True)

    @classmethod
    def constant(cls, value, varnames, field=QQ) -> 'MultiPoly':
        return cls({(0,) * len(varnames): value}, varnames, field)

    @classmethod
    def variable(cls, name, varnames, field=QQ) -> 'MultiPoly':
        varnames = tuple(varnames)
        if name not in varnames:
            raise UnknownVariableError(f"unknown variable {name!r}")
        exponent = tuple(int(v == name) for v in varnames)
        return cls({exponent: field.one}, varnames, field, normalized=True)

    @property
    def nvars(self) -> int:
        return len(self.varnames)

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def _check(self, other: 'MultiPoly'):
        if other.field != self.field:
            raise FieldMismatchError(f"cannot combine {self.field} with {other.field}")
        if other.varnames != self.varnames:
            raise FieldMismatchError(f"variables {self.varnames} and {other.varnames} differ")

    def _lift(self, other) -> 'MultiPoly':
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.constant(other, self.varnames, self.field)

    def add(self, other) -> 'MultiPoly':
        other = self._lift(other)
        field = self.field
        terms = dict(self.terms)
        for e, c in other.terms.items():
            value = field.add(terms.get(e, field.zero), c)
            if value:
                terms[e] = value
            else:
                terms.pop(e, None)
        return MultiPoly(terms, self.varnames, field, normalized=True)

    def scale(self, c) -> 'MultiPoly':
        field = self.field
        c = field.coerce(c)
        if not c:
            return MultiPoly.zero(self.varnames, field)
        return MultiPoly({e: field.mul(v, c) for e, v in self.terms.items()}, self.varnames, field,
                         normalized=True)

    def mul(self, other) -> 'MultiPoly':
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._check(other)
        field = self.field
        terms: Dict[Exponent, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(map(operator.add, e1, e2))
                terms[e] = field.add(terms.get(e, field.zero), field.mul(c1, c2))
        return MultiPoly({e: c for e, c in terms.items() if c}, self.varnames, field, normalized=True)

    def power(self, k: int) -> 'MultiPoly':
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = MultiPoly.constant(1, self.varnames, self.field)
        base = self
        while k:
            if k & 1:
                result = result.mul(base)
            k >>= 1
            if k:
                base = base.mul(base)
        return result

    __add__ = add
    __radd__ = add
    __mul__ = mul
    __rmul__ = mul
    __pow__ = power

    def __neg__(self) -> 'MultiPoly':
        return self.scale(-1)

    def __sub__(self, other) -> 'MultiPoly':
        return self.add(-self._lift(other))

    def __rsub__(self, other) -> 'MultiPoly':
        return self._lift(other).add(-self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (self.field, self.varnames, self.terms) == (other.field, other.varnames, other.terms)

    def __hash__(self):
        return hash((self.field, self.varnames, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"MultiPoly({self.to_text()!r}, field={self.field.label})"

    def __str__(self) -> str:
        return self.to_text()

    def evaluate(self, point: Sequence):
        """Evaluates at exact field points, or at numbers when ``point`` holds floats/complex."""
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {len(point)}")
        exact = all(isinstance(v, (int, Fraction)) for v in point)
        if exact:
            field = self.field
            point = [field.coerce(v) for v in point]
            total = field.zero
            for e, c in self.terms.items():
                value = c
                for v, k in zip(point, e):
                    if k:
                        value = field.mul(value, pow(v, k, field.modulus) if field.modulus else v ** k)
                total = field.add(total, value)
            return total
        total = 0
        for e, c in self.terms.items():
            value = complex(self.field.to_float(c))
            for v, k in zip(point, e):
                if k:
                    value *= v ** k
            total += value
        return total

    def to_text(self) -> str:
        if not self.terms:
            return '0'
        pieces = []
        for exponent in sorted(self.terms, key=lambda e: (-sum(e), tuple(-k for k in e))):
            coeff = self.terms[exponent]
            if isinstance(coeff, Fraction) and coeff.denominator != 1:
                raise ValueError(f"coefficient {coeff} has no integer literal form")
            coeff = int(coeff)
            factors = [name if k == 1 else f"{name}^{k}" for name, k in zip(self.varnames, exponent) if k]
            sign = '-' if coeff < 0 else '+'
            magnitude = abs(coeff)
            if not factors:
                body = str(magnitude)
            elif magnitude == 1:
                body = '*'.join(factors)
            else:
                body = '*'.join([str(magnitude)] + factors)
            pieces.append((sign, body))
        first_sign, first_body = pieces[0]
        text = ('-' if first_sign == '-' else '') + first_body
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text


_TOKEN = re.compile(r'\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^()]))')


def _tokenize(text: str):
    tokens = []
    pos = 0
    length = len(text)
    while pos < length:
        if text[pos:].strip() == '':
            break
        match = _TOKEN.match(text, pos)
        if match is None:
            offset = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise PolynomialSyntaxError(f"unexpected character {text[offset]!r}", text, offset)
        kind = match.lastgroup
        start = match.start(kind)
        tokens.append((kind, match.group(kind), start))
        pos = match.end()
    tokens.append(('end', '', length))
    return tokens


class _Parser:

    def __init__(self, text, varnames, field):
        self.text = text
        self.varnames = tuple(varnames)
        self.field = field
        self.tokens = _tokenize(text)
        self.index = 0

    def peek(self):
        return self.tokens[self.index]

    def take(self):
        token = self.tokens[self.index]
        self.index += 1
        return token

    def fail(self, message, token=None):
        token = token or self.peek()
        raise PolynomialSyntaxError(message, self.text, token[2])

    def parse(self) -> MultiPoly:
        if self.peek()[0] == 'end':
            self.fail("empty polynomial")
        poly = self.expr()
        if self.peek()[0] != 'end':
            self.fail(f"unexpected {self.peek()[1]!r}")
        return poly

    def expr(self) -> MultiPoly:
        negate = False
        if self.peek()[0] == 'op' and self.peek()[1] == '-':
            self.take()
            negate = True
        poly = self.term()
        if negate:
            poly = -poly
        while self.peek()[0] == 'op' and self.peek()[1] in '+-':
            op = self.take()[1]
            rhs = self.term()
            poly = poly + rhs if op == '+' else poly - rhs
        return poly

    def term(self) -> MultiPoly:
        poly = self.factor()
        while self.peek()[0] == 'op' and self.peek()[1] == '*':
            self.take()
            poly = poly * self.factor()
        return poly

    def factor(self) -> MultiPoly:
        base = self.base()
        if self.peek()[0] == 'op' and self.peek()[1] == '^':
            self.take()
            token = self.take()
            if token[0] != 'int':
                self.fail("exponent not a natural number", token)
            base = base.power(int(token[1]))
        return base

    def base(self) -> MultiPoly:
        token = self.take()
        kind, value, _ = token
        if kind == 'int':
            return MultiPoly.constant(int(value), self.varnames, self.field)
        if kind == 'name':
            if value not in self.varnames:
                raise UnknownVariableError(f"unknown variable {value!r}", self.text, token[2])
            return MultiPoly.variable(value, self.varnames, self.field)
        if kind == 'op' and value == '(':
            poly = self.expr()
            closing = self.take()
            if closing[1] != ')':
                self.fail("unbalanced parentheses", closing)
            return poly
        if kind == 'end':
            self.fail("unexpected end of input", token)
        self.fail(f"unexpected {value!r}", token)


def parse_polynomial(text: str, varnames: Sequence[str], field: FieldSpec = QQ) -> MultiPoly:
    """Parses ``expr := term (("+"|"-") term)*`` with integer literals, ``*`` and ``^``."""
    return _Parser(text, varnames, field).parse()


def default_varnames(n: int, prefix: str = 't') -> Tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(1, n + 1))
