"""Closed-form real sequences and tail estimation for ratio sequences.

Sequences are immutable expression trees indexed from 0.  The supported
shapes are monomials n^s, logarithms, iterated logarithms, exponentials
e^{c*n}, linear combinations, pointwise products and maxima, composition,
and explicit tables with a generated tail.  Evaluation is exact-precision
mpmath arithmetic; where a value is rational it can also be recovered as a
Fraction, which the criterion layer uses to keep grade arithmetic exact.

The module also provides the certified-at-resolution limsup/liminf
machinery for ratio sequences: when a ratio simplifies structurally to a
constant the result is exact, otherwise it is a tail-window estimate over
geometric checkpoints, tagged as such and never presented as a limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Union

import mpmath
from mpmath import mpf

from ._mp import INF, to_mpf
from .errors import DomainError, ParseError, RangeError

Scalar = Union[Fraction, mpf]


def _scalar(x) -> Scalar:
    """Normalise a numeric literal to Fraction when exact, else mpf."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float) and float(x).is_integer():
        return Fraction(int(x))
    return to_mpf(x)


def _scalar_mul(a: Scalar, b: Scalar) -> Scalar:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a * b
    return to_mpf(a) * to_mpf(b)


def _scalar_div(a: Scalar, b: Scalar) -> Scalar:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a / b
    return to_mpf(a) / to_mpf(b)


class SymbolicSequence:
    """Base class; concrete nodes are frozen dataclasses below."""

    def eval(self, n: int) -> mpf:
        """Value at index n >= 0, as an mpf at the working precision."""
        if n < 0:
            raise DomainError(f"sequence index must be >= 0, got {n}")
        value = self._at(to_mpf(n), n)
        if not mpmath.isfinite(value):
            raise RangeError(f"{self!r} is not finite at index {n}")
        return value

    def _at(self, x: mpf, n: Optional[int]) -> mpf:
        """Evaluate at real argument x; n is the integer index if exact."""
        raise NotImplementedError

    def eval_fraction(self, n: int) -> Optional[Fraction]:
        """Exact rational value at n, or None when not derivable."""
        return None

    def limit(self) -> Optional[Scalar]:
        """Limit as the index tends to infinity: Fraction/mpf, INF, or None."""
        return None

    def is_zero(self) -> bool:
        return False

    def scalar_split(self) -> tuple[Scalar, "SymbolicSequence"]:
        """Write self as c * core with a canonical-ish core."""
        return Fraction(1), self

    def text(self) -> str:
        """Expression in the sequence grammar (inverse of parse_sequence)."""
        raise NotImplementedError

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"{type(self).__name__}({self.text()})"


@dataclass(frozen=True)
class Poly(SymbolicSequence):
    """n ** power.  Convention 0**0 = 1; negative powers are undefined at 0."""

    power: Fraction

    def _at(self, x, n=None):
        if x == 0:
            if self.power > 0:
                return mpf(0)
            if self.power == 0:
                return mpf(1)
            raise DomainError("negative power at index 0")
        return mpmath.power(x, to_mpf(self.power))

    def eval_fraction(self, n):
        if self.power.denominator != 1:
            return None
        s = self.power.numerator
        if s >= 0:
            return Fraction(n**s)
        if n == 0:
            return None
        return Fraction(1, n ** (-s))

    def limit(self):
        if self.power > 0:
            return INF
        if self.power == 0:
            return Fraction(1)
        return Fraction(0)

    def text(self):
        return f"poly({self.power})"


@dataclass(frozen=True)
class Log(SymbolicSequence):
    """log(max(n, 1)); finite at every index."""

    def _at(self, x, n=None):
        if x <= 1:
            return mpf(0)
        return mpmath.log(x)

    def eval_fraction(self, n):
        return Fraction(0) if n <= 1 else None

    def limit(self):
        return INF

    def text(self):
        return "log"


@dataclass(frozen=True)
class LogLog(SymbolicSequence):
    """log(max(log(max(n, 1)), 1))."""

    def _at(self, x, n=None):
        if x <= 1:
            return mpf(0)
        inner = mpmath.log(x)
        if inner <= 1:
            return mpf(0)
        return mpmath.log(inner)

    def eval_fraction(self, n):
        # log log n == 0 for all n with log n <= 1, i.e. n <= e.
        return Fraction(0) if n <= 2 else None

    def limit(self):
        return INF

    def text(self):
        return "loglog"


@dataclass(frozen=True)
class ExpLinear(SymbolicSequence):
    """exp(rate * n)."""

    rate: Fraction

    def _at(self, x, n=None):
        return mpmath.exp(to_mpf(self.rate) * x)

    def eval_fraction(self, n):
        if self.rate == 0 or n == 0:
            return Fraction(1)
        return None

    def limit(self):
        if self.rate > 0:
            return INF
        if self.rate == 0:
            return Fraction(1)
        return Fraction(0)

    def text(self):
        return f"exp({self.rate})"


@dataclass(frozen=True)
class Combo(SymbolicSequence):
    """Linear combination sum_i coeff_i * seq_i."""

    terms: tuple[tuple[Scalar, SymbolicSequence], ...]

    def _at(self, x, n=None):
        total = mpf(0)
        for coeff, seq in self.terms:
            if coeff == 0:
                continue
            total += to_mpf(coeff) * seq._at(x, n)
        return total

    def eval_fraction(self, n):
        total = Fraction(0)
        for coeff, seq in self.terms:
            if coeff == 0:
                continue
            if not isinstance(coeff, Fraction):
                return None
            part = seq.eval_fraction(n)
            if part is None:
                return None
            total += coeff * part
        return total

    def limit(self):
        total: Scalar = Fraction(0)
        sign = 0  # running infinity sign: 0 none, +1, -1
        for coeff, seq in self.terms:
            if coeff == 0:
                continue
            lim = seq.limit()
            if lim is None:
                return None
            if isinstance(lim, mpf) and mpmath.isinf(lim):
                term_sign = 1 if (lim > 0) == (coeff > 0) else -1
                if sign and sign != term_sign:
                    return None  # inf - inf: undetermined
                sign = term_sign
            else:
                total = (
                    total + coeff * lim
                    if isinstance(total, Fraction)
                    and isinstance(coeff, Fraction)
                    and isinstance(lim, Fraction)
                    else to_mpf(total) + to_mpf(coeff) * to_mpf(lim)
                )
        if sign:
            return INF if sign > 0 else -INF
        return total

    def is_zero(self):
        return all(c == 0 or s.is_zero() for c, s in self.terms)

    def scalar_split(self):
        split = [(c, *s.scalar_split()) for c, s in self.terms]
        parts = [(_scalar_mul(c, k), core) for c, k, core in split]
        live = [(c, core) for c, core in parts if c != 0 and not core.is_zero()]
        if not live:
            return Fraction(0), ZERO
        lead = live[0][0]
        if len(live) == 1:
            return lead, live[0][1]
        scaled = tuple((_scalar_div(c, lead), core) for c, core in live)
        return lead, Combo(scaled)

    def text(self):
        chunks = []
        for coeff, seq in self.terms:
            chunks.append(f"{coeff}*{_maybe_paren(seq)}")
        return " + ".join(chunks) if chunks else "0"


@dataclass(frozen=True)
class Product(SymbolicSequence):
    """Pointwise product of two sequences."""

    left: SymbolicSequence
    right: SymbolicSequence

    def _at(self, x, n=None):
        return self.left._at(x, n) * self.right._at(x, n)

    def eval_fraction(self, n):
        a = self.left.eval_fraction(n)
        b = self.right.eval_fraction(n)
        if a is None or b is None:
            return None
        return a * b

    def limit(self):
        a = self.left.limit()
        b = self.right.limit()
        if a is None or b is None:
            return None
        a_inf = isinstance(a, mpf) and mpmath.isinf(a)
        b_inf = isinstance(b, mpf) and mpmath.isinf(b)
        if a_inf or b_inf:
            if (not a_inf and a == 0) or (not b_inf and b == 0):
                return None  # 0 * inf
            negative = (a_inf and a < 0) != (b_inf and b < 0)
            if not a_inf and a < 0:
                negative = not negative
            if not b_inf and b < 0:
                negative = not negative
            return -INF if negative else INF
        if isinstance(a, Fraction) and isinstance(b, Fraction):
            return a * b
        return to_mpf(a) * to_mpf(b)

    def is_zero(self):
        return self.left.is_zero() or self.right.is_zero()

    def scalar_split(self):
        ka, ca = self.left.scalar_split()
        kb, cb = self.right.scalar_split()
        return _scalar_mul(ka, kb), Product(ca, cb)

    def text(self):
        return f"{_maybe_paren(self.left)} * {_maybe_paren(self.right)}"


@dataclass(frozen=True)
class PointwiseMax(SymbolicSequence):
    left: SymbolicSequence
    right: SymbolicSequence

    def _at(self, x, n=None):
        return max(self.left._at(x, n), self.right._at(x, n))

    def eval_fraction(self, n):
        a = self.left.eval_fraction(n)
        b = self.right.eval_fraction(n)
        if a is None or b is None:
            return None
        return max(a, b)

    def limit(self):
        a = self.left.limit()
        b = self.right.limit()
        if a is None or b is None:
            return None
        if isinstance(a, mpf) and mpmath.isinf(a) and a > 0:
            return INF
        if isinstance(b, mpf) and mpmath.isinf(b) and b > 0:
            return INF
        if isinstance(a, Fraction) and isinstance(b, Fraction):
            return max(a, b)
        return max(to_mpf(a), to_mpf(b))

    def scalar_split(self):
        ka, ca = self.left.scalar_split()
        kb, cb = self.right.scalar_split()
        if ka == kb and (not isinstance(ka, Fraction) or ka > 0):
            return ka, PointwiseMax(ca, cb)
        return Fraction(1), self

    def text(self):
        return f"max({self.left.text()}, {self.right.text()})"


@dataclass(frozen=True)
class Compose(SymbolicSequence):
    """outer evaluated at the (real, nonnegative) values of inner."""

    outer: SymbolicSequence
    inner: SymbolicSequence

    def __post_init__(self):
        if isinstance(self.outer, (Table, Lazy)):
            raise ParseError("table/computed sequences cannot be composed as outer")

    def _at(self, x, n=None):
        value = self.inner._at(x, n)
        if value < 0:
            raise DomainError("composition requires nonnegative inner values")
        return self.outer._at(value, None)

    def eval_fraction(self, n):
        inner = self.inner.eval_fraction(n)
        if inner is None or inner.denominator != 1 or inner < 0:
            return None
        return self.outer.eval_fraction(int(inner))

    def limit(self):
        inner = self.inner.limit()
        if inner is None:
            return None
        if isinstance(inner, mpf) and mpmath.isinf(inner):
            return self.outer.limit() if inner > 0 else None
        if inner < 0:
            return None
        return self.outer._at(to_mpf(inner), None)

    def text(self):
        outer = self.outer
        if isinstance(outer, ExpLinear):
            return f"exp({outer.rate}, {self.inner.text()})"
        if isinstance(outer, Log):
            return f"log({self.inner.text()})"
        if isinstance(outer, LogLog):
            return f"loglog({self.inner.text()})"
        if isinstance(outer, Poly):
            return f"poly({outer.power}, {self.inner.text()})"
        raise ParseError(f"composition with {type(outer).__name__} has no text form")


@dataclass(frozen=True)
class Table(SymbolicSequence):
    """Explicit prefix values; the tail generator takes over beyond them."""

    prefix: tuple[Scalar, ...]
    tail: Optional[SymbolicSequence] = None

    def _at(self, x, n=None):
        if n is None:
            raise DomainError("table sequences are defined at integer indices only")
        if n < len(self.prefix):
            return to_mpf(self.prefix[n])
        if self.tail is None:
            raise DomainError(f"index {n} beyond table prefix of length {len(self.prefix)}")
        return self.tail._at(x, n)

    def eval_fraction(self, n):
        if n < len(self.prefix):
            v = self.prefix[n]
            return v if isinstance(v, Fraction) else None
        if self.tail is None:
            return None
        return self.tail.eval_fraction(n)

    def limit(self):
        return self.tail.limit() if self.tail is not None else None

    def is_zero(self):
        if any(v != 0 for v in self.prefix):
            return False
        return self.tail is not None and self.tail.is_zero()

    def text(self):
        values = ", ".join(str(v) for v in self.prefix)
        if self.tail is None:
            return f"table([{values}])"
        return f"table([{values}], tail={self.tail.text()})"


@dataclass(frozen=True)
class Lazy(SymbolicSequence):
    """Deterministic computed sequence (e.g. log-diameters of a table space).

    Not expressible in the grammar; carries a label for reports.  The cache
    makes repeated tail scans cheap and is invisible to callers.
    """

    fn: Callable[[int], mpf]
    label: str
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return id(self)

    def _at(self, x, n=None):
        if n is None:
            raise DomainError("computed sequences are defined at integer indices only")
        if n not in self._cache:
            self._cache[n] = to_mpf(self.fn(n))
        return self._cache[n]

    def text(self):
        return f"<computed:{self.label}>"


ZERO = Combo(())
ONE = Poly(Fraction(0))


def constant(value) -> SymbolicSequence:
    return Combo(((_scalar(value), ONE),))


def scale(coeff, seq: SymbolicSequence) -> SymbolicSequence:
    return Combo(((_scalar(coeff), seq),))


def combo(*terms) -> SymbolicSequence:
    return Combo(tuple((_scalar(c), s) for c, s in terms))


def square(seq: SymbolicSequence) -> SymbolicSequence:
    return Product(seq, seq)


def _maybe_paren(seq: SymbolicSequence) -> str:
    text = seq.text()
    return f"({text})" if " + " in text or " - " in text else text


# ---------------------------------------------------------------------------
# Grammar
#
#   expr   := term (('+'|'-') term)*
#   term   := factor ('*' factor)*
#   factor := NUMBER | atom
#   atom   := poly(r[, expr]) | log[(expr)] | loglog[(expr)] | exp(r[, expr])
#           | max(expr, expr) | table([v0, ...][, tail=expr]) | (expr)
#
# NUMBER is an integer, decimal, or rational a/b; a bare NUMBER denotes the
# constant sequence.  exp(c, S) means e^{c * S_n}, poly(r, S) means S_n^r.
# ---------------------------------------------------------------------------


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        self.skip_ws()
        if not self.text.startswith(ch, self.pos):
            raise ParseError(f"expected {ch!r} at position {self.pos} in {self.text!r}")
        self.pos += len(ch)

    def match_word(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        return self.text[start : self.pos]

    def match_number(self) -> Optional[Fraction]:
        self.skip_ws()
        start = self.pos
        i = self.pos
        if i < len(self.text) and self.text[i] in "+-":
            i += 1
        digits = i
        while i < len(self.text) and (self.text[i].isdigit() or self.text[i] == "."):
            i += 1
        if i == digits:
            return None
        self.pos = i
        token = self.text[start:i]
        self.skip_ws()
        if self.peek() == "/":
            save = self.pos
            self.pos += 1
            denom = self.match_number()
            if denom is None:
                self.pos = save
            else:
                return Fraction(token) / denom
        try:
            return Fraction(token)
        except ValueError as exc:
            raise ParseError(f"bad number {token!r}") from exc


def parse_sequence(text: str) -> SymbolicSequence:
    """Parse an expression in the sequence grammar."""
    tokens = _Tokens(text)
    seq = _parse_expr(tokens)
    tokens.skip_ws()
    if tokens.pos != len(tokens.text):
        raise ParseError(f"trailing input at position {tokens.pos} in {text!r}")
    return seq


def _parse_expr(tokens: _Tokens) -> SymbolicSequence:
    terms = [(Fraction(1), _parse_term(tokens))]
    while tokens.peek() and tokens.peek() in "+-":
        sign = Fraction(1) if tokens.peek() == "+" else Fraction(-1)
        tokens.pos += 1
        terms.append((sign, _parse_term(tokens)))
    if len(terms) == 1 and terms[0][0] == 1:
        return terms[0][1]
    flat: list[tuple[Scalar, SymbolicSequence]] = []
    for sign, part in terms:
        if isinstance(part, Combo) and len(part.terms) == 1:
            coeff, core = part.terms[0]
            flat.append((_scalar_mul(sign, coeff), core))
        else:
            flat.append((sign, part))
    return Combo(tuple(flat))


def _parse_term(tokens: _Tokens) -> SymbolicSequence:
    factors = [_parse_factor(tokens)]
    while tokens.peek() == "*":
        tokens.pos += 1
        factors.append(_parse_factor(tokens))
    result = factors[0]
    for factor in factors[1:]:
        scalar = _as_constant(result)
        if scalar is not None:
            result = Combo(((scalar, factor),)) if not isinstance(factor, Combo) else scale_combo(scalar, factor)
            continue
        scalar = _as_constant(factor)
        if scalar is not None:
            result = Combo(((scalar, result),))
            continue
        result = Product(result, factor)
    return result


def scale_combo(coeff: Scalar, seq: Combo) -> SymbolicSequence:
    return Combo(tuple((_scalar_mul(coeff, c), s) for c, s in seq.terms))


def _as_constant(seq: SymbolicSequence) -> Optional[Scalar]:
    if isinstance(seq, Poly) and seq.power == 0:
        return Fraction(1)
    if isinstance(seq, Combo) and len(seq.terms) == 1:
        coeff, core = seq.terms[0]
        if isinstance(core, Poly) and core.power == 0:
            return coeff
    return None


def _parse_factor(tokens: _Tokens) -> SymbolicSequence:
    if tokens.peek() == "(":
        tokens.expect("(")
        inner = _parse_expr(tokens)
        tokens.expect(")")
        return inner
    number = tokens.match_number()
    if number is not None:
        return constant(number)
    word = tokens.match_word()
    if not word:
        raise ParseError(f"expected a sequence atom at position {tokens.pos} in {tokens.text!r}")
    if word == "poly":
        tokens.expect("(")
        power = tokens.match_number()
        if power is None:
            raise ParseError("poly() requires a rational exponent")
        inner = None
        if tokens.peek() == ",":
            tokens.expect(",")
            inner = _parse_expr(tokens)
        tokens.expect(")")
        node: SymbolicSequence = Poly(power)
        return node if inner is None else Compose(node, inner)
    if word in ("log", "loglog"):
        node = Log() if word == "log" else LogLog()
        if tokens.peek() == "(":
            tokens.expect("(")
            inner = _parse_expr(tokens)
            tokens.expect(")")
            return Compose(node, inner)
        return node
    if word == "exp":
        tokens.expect("(")
        rate = tokens.match_number()
        if rate is None:
            raise ParseError("exp() requires a rational rate")
        inner = None
        if tokens.peek() == ",":
            tokens.expect(",")
            inner = _parse_expr(tokens)
        tokens.expect(")")
        node = ExpLinear(rate)
        return node if inner is None else Compose(node, inner)
    if word == "max":
        tokens.expect("(")
        left = _parse_expr(tokens)
        tokens.expect(",")
        right = _parse_expr(tokens)
        tokens.expect(")")
        return PointwiseMax(left, right)
    if word == "table":
        tokens.expect("(")
        tokens.expect("[")
        values: list[Scalar] = []
        while tokens.peek() != "]":
            value = tokens.match_number()
            if value is None:
                raise ParseError("table prefix values must be numbers")
            values.append(value)
            if tokens.peek() == ",":
                tokens.expect(",")
        tokens.expect("]")
        tail = None
        if tokens.peek() == ",":
            tokens.expect(",")
            tokens.expect("tail")
            tokens.expect("=")
            tail = _parse_expr(tokens)
        tokens.expect(")")
        return Table(tuple(values), tail)
    raise ParseError(f"unknown sequence atom {word!r}")


# ---------------------------------------------------------------------------
# Exponent sequences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExponentSequence:
    """Nonnegative, non-decreasing, unbounded sequence (checked at resolution)."""

    base: SymbolicSequence

    def eval(self, n: int) -> mpf:
        return self.base.eval(n)

    def eval_fraction(self, n: int) -> Optional[Fraction]:
        return self.base.eval_fraction(n)

    def text(self) -> str:
        return self.base.text()


def validate_exponents(seq: SymbolicSequence, resolution: int) -> ExponentSequence:
    """Check the exponent-sequence invariants on [0, resolution]."""
    previous = seq.eval(0)
    if previous < 0:
        raise DomainError("exponent sequence must be nonnegative at index 0")
    scan_to = min(resolution, 512)
    for n in range(1, scan_to + 1):
        current = seq.eval(n)
        if current < previous:
            raise DomainError(f"exponent sequence decreases at index {n}")
        previous = current
    top = previous
    for n in geometric_ladder(resolution, lo=max(8, scan_to)):
        current = seq.eval(n)
        if current < top:
            raise DomainError(f"exponent sequence decreases near index {n}")
        top = current
    anchor = seq.eval(scan_to // 2) if scan_to >= 2 else previous
    if not top > anchor:
        raise DomainError("exponent sequence does not increase toward the resolution bound")
    return ExponentSequence(seq)


# ---------------------------------------------------------------------------
# limsup / liminf at resolution
# ---------------------------------------------------------------------------

MIN_RESOLUTION = 64
DIVERGENCE_FACTOR = 2  # growth across three consecutive ladder points
ZERO_LIMIT_THRESHOLD = mpf("1e-6")


def geometric_ladder(n: int, lo: int = 8) -> list[int]:
    """Doubling checkpoints lo, 2*lo, ... capped and terminated at n."""
    if n <= lo:
        return [n]
    points = []
    current = lo
    while current < n:
        points.append(current)
        current *= 2
    points.append(n)
    return points


def tail_window(n: int) -> list[int]:
    """Deterministic index sample of the tail window [n/2, n]."""
    picks = {n, max(0, n // 2), max(0, (3 * n) // 4)}
    picks.update(range(max(0, n - 31), n + 1))
    picks.update(p for p in geometric_ladder(n) if p >= n // 2)
    return sorted(picks)


@dataclass(frozen=True)
class CriterionValue:
    """Extended-real criterion output with its evaluation provenance."""

    value: mpf
    mode: str  # "exact" | "estimated"
    resolution: int
    checkpoints: tuple[tuple[int, mpf], ...] = ()
    divergent: bool = False
    exact_value: Optional[Fraction] = None

    @property
    def is_infinite(self) -> bool:
        return bool(mpmath.isinf(self.value))

    def scaled(self, factor: Scalar) -> "CriterionValue":
        exact = None
        if self.exact_value is not None and isinstance(factor, Fraction):
            exact = self.exact_value * factor
        return CriterionValue(
            value=self.value * to_mpf(factor),
            mode=self.mode,
            resolution=self.resolution,
            checkpoints=self.checkpoints,
            divergent=self.divergent,
            exact_value=exact,
        )


def exact_criterion_value(value: Scalar, resolution: int, divergent: bool = False) -> CriterionValue:
    exact = value if isinstance(value, Fraction) else None
    return CriterionValue(
        value=to_mpf(value),
        mode="exact",
        resolution=resolution,
        divergent=divergent,
        exact_value=exact,
    )


def constant_ratio(num: SymbolicSequence, den: SymbolicSequence) -> Optional[Scalar]:
    """The constant c with num = c * den, if that holds structurally."""
    if num.is_zero():
        return Fraction(0)
    k_num, core_num = num.scalar_split()
    k_den, core_den = den.scalar_split()
    if core_num == core_den and k_den != 0:
        return _scalar_div(k_num, k_den)
    return None


def detect_divergence(values: list[mpf]) -> bool:
    """Monotone growth by >= DIVERGENCE_FACTOR across three ladder points."""
    if len(values) < 3:
        return False
    a, b, c = values[-3], values[-2], values[-1]
    return a <= b <= c and c > 0 and c >= DIVERGENCE_FACTOR * a


def _ratio_points(num, den, indices):
    points = []
    for n in indices:
        denominator = den.eval(n)
        if denominator == 0:
            raise DomainError(f"denominator sequence vanishes at index {n}")
        points.append((n, num.eval(n) / denominator))
    return points


def _ratio_extremum(num, den, resolution, take_max: bool) -> CriterionValue:
    if resolution < MIN_RESOLUTION:
        raise DomainError(f"resolution must be >= {MIN_RESOLUTION}, got {resolution}")
    ratio = constant_ratio(num, den)
    if ratio is not None:
        return exact_criterion_value(ratio, resolution)
    ladder_points = _ratio_points(num, den, geometric_ladder(resolution))
    window_points = _ratio_points(num, den, tail_window(resolution))
    values = [v for _, v in window_points]
    value = max(values) if take_max else min(values)
    divergent = detect_divergence([v for _, v in ladder_points])
    return CriterionValue(
        value=value,
        mode="estimated",
        resolution=resolution,
        checkpoints=tuple(ladder_points),
        divergent=divergent,
    )


def limsup_ratio(num: SymbolicSequence, den: SymbolicSequence, resolution: int) -> CriterionValue:
    """Tail-window estimate (or exact constant) of limsup num_n / den_n."""
    return _ratio_extremum(num, den, resolution, take_max=True)


def liminf_ratio(num: SymbolicSequence, den: SymbolicSequence, resolution: int) -> CriterionValue:
    """Tail-window estimate (or exact constant) of liminf num_n / den_n."""
    return _ratio_extremum(num, den, resolution, take_max=False)
