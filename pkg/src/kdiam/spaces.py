"""Koethe matrices, power-series constructors, and structural checks.

A Koethe matrix a_n(k) > 0 (index n >= 0, grade k >= 1, non-decreasing in k)
defines a sequence space with norms sup_n |x_n| a_n(k) and unit balls
U_1 >= U_2 >= ...  Three shapes are supported:

* graded: a_n(k) = exp(f(k) * alpha_n) for a strictly increasing grade
  profile f and an exponent sequence alpha (finite type f(k) = -1/k,
  infinite type f(k) = k);
* table: one explicit sequence per grade;
* interleave: even indices from one matrix, odd from another.

Graded matrices admit exact grade arithmetic (profile values are kept as
Fractions when possible, and the profile's limit over grades resolves
grade-quantified suprema without truncation).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence as SeqType, Union

import mpmath
from mpmath import mpf

from ._mp import INF, to_mpf
from .errors import ConfigError, DegenerateMatrixError, DomainError, ParseError
from .seq import (
    ExponentSequence,
    Scalar,
    SymbolicSequence,
    geometric_ladder,
    parse_sequence,
    scale,
    validate_exponents,
)
from .verdicts import Resolution, Verdict, fails, holds, undetermined

DEFAULT_MAX_GRADE = 12
DEFAULT_INDEX_BOUND = 4096
CONSTANT_CAP = mpf(10) ** 6

DN_PROPERTY = "DN"
OMEGA_PROPERTY = "Omega"
NUCLEAR_PROPERTY = "nuclear"


# ---------------------------------------------------------------------------
# Grade profiles
# ---------------------------------------------------------------------------


class GradeProfile:
    """The function f mapping grades to exponent multipliers."""

    def value(self, k: int) -> Scalar:
        raise NotImplementedError

    def value_dense(self, k: Fraction) -> Scalar:
        """Profile at a rational grade, for the dense-grade refinement."""
        raise NotImplementedError

    def limit(self) -> Optional[Scalar]:
        """sup over all grades: Fraction/mpf, INF, or None when unknown."""
        raise NotImplementedError

    def text(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class FiniteTypeProfile(GradeProfile):
    """f(k) = -1/k; the exponents of a finite-type power series space."""

    def value(self, k):
        return Fraction(-1, k)

    def value_dense(self, k):
        return -1 / k

    def limit(self):
        return Fraction(0)

    def text(self):
        return "-1*poly(-1)"


@dataclass(frozen=True)
class InfiniteTypeProfile(GradeProfile):
    """f(k) = k; the exponents of an infinite-type power series space."""

    def value(self, k):
        return Fraction(k)

    def value_dense(self, k):
        return k

    def limit(self):
        return INF

    def text(self):
        return "poly(1)"


@dataclass(frozen=True)
class GrammarProfile(GradeProfile):
    """Profile given as a sequence expression over the grade variable."""

    seq: SymbolicSequence

    def value(self, k):
        exact = self.seq.eval_fraction(k)
        return exact if exact is not None else self.seq.eval(k)

    def value_dense(self, k):
        exact = self.seq.eval_fraction(int(k)) if k.denominator == 1 else None
        if exact is not None:
            return exact
        return self.seq._at(to_mpf(k), None)

    def limit(self):
        return self.seq.limit()

    def text(self):
        return self.seq.text()


def _validate_profile(profile: GradeProfile, max_grade: int) -> None:
    values = [profile.value(k) for k in range(1, max_grade + 1)]
    for k in range(1, max_grade):
        if not to_mpf(values[k]) > to_mpf(values[k - 1]):
            raise ConfigError(f"grade profile not strictly increasing at grade {k + 1}")


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------


class KotheMatrix:
    """Base interface; see module docstring for the three shapes."""

    max_grade: int

    def weight(self, k: int, n: int) -> mpf:
        """a_n(k)."""
        return mpmath.exp(self.log_weight(k, n))

    def log_weight(self, k: int, n: int) -> mpf:
        raise NotImplementedError

    def _check_grade(self, k: int) -> None:
        if k < 1:
            raise ConfigError(f"grades start at 1, got {k}")

    @property
    def is_graded(self) -> bool:
        return False

    def quantifier_ceiling(self, requested: int) -> int:
        """Largest grade usable in a truncated quantifier search.

        Graded matrices extend beyond max_grade through their closed form;
        table and interleave matrices stop at the grades they define.
        """
        return min(requested, self.max_grade)

    def sup_log_combo(self, weights: dict[int, Scalar], index_bound: int) -> mpf:
        """sup over j <= index_bound of sum_k weights[k] * log a_j(k)."""
        raise NotImplementedError

    def validate(self, index_bound: int) -> None:
        """Check positivity and monotonicity in the grade, at resolution."""
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class GradedMatrix(KotheMatrix):
    profile: GradeProfile
    alpha: ExponentSequence
    max_grade: int = DEFAULT_MAX_GRADE

    def __post_init__(self):
        if self.max_grade < 1:
            raise ConfigError("max_grade must be >= 1")
        _validate_profile(self.profile, self.max_grade)

    @property
    def is_graded(self):
        return True

    def quantifier_ceiling(self, requested):
        return requested

    def grade_value(self, k: int) -> Scalar:
        self._check_grade(k)
        return self.profile.value(k)

    def grade_limit(self) -> Optional[Scalar]:
        return self.profile.limit()

    def log_weight(self, k, n):
        self._check_grade(k)
        return to_mpf(self.grade_value(k)) * self.alpha.eval(n)

    def sup_log_combo(self, weights, index_bound):
        coeff: Scalar = Fraction(0)
        exact = True
        for k, w in weights.items():
            v = self.grade_value(k)
            if isinstance(w, Fraction) and isinstance(v, Fraction) and isinstance(coeff, Fraction):
                coeff = coeff + w * v
            else:
                coeff = to_mpf(coeff) + to_mpf(w) * to_mpf(v)
                exact = False
        c = to_mpf(coeff)
        if c == 0:
            return mpf(0)
        # alpha is non-decreasing and nonnegative, so the sup sits at an end.
        anchor = self.alpha.eval(index_bound) if c > 0 else self.alpha.eval(0)
        return c * anchor

    def validate(self, index_bound):
        validate_exponents(self.alpha.base, index_bound)

    def describe(self):
        return {
            "shape": "graded",
            "f": self.profile.text(),
            "alpha": self.alpha.text(),
            "max_grade": self.max_grade,
        }


@dataclass(frozen=True)
class TableMatrix(KotheMatrix):
    columns: tuple[SymbolicSequence, ...]  # grade k -> columns[k - 1]
    max_grade: int = 0
    _log_cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not self.columns:
            raise ConfigError("a table matrix needs at least one grade")
        object.__setattr__(self, "max_grade", len(self.columns))

    def __hash__(self):
        return id(self)

    def log_weight(self, k, n):
        self._check_grade(k)
        if k > self.max_grade:
            raise ConfigError(f"grade {k} beyond table max_grade {self.max_grade}")
        column = self._log_cache.setdefault(k, {})
        if n not in column:
            value = self.columns[k - 1].eval(n)
            if not value > 0:
                raise DegenerateMatrixError(f"nonpositive weight at grade {k}, index {n}")
            column[n] = mpmath.log(value)
        return column[n]

    def sup_log_combo(self, weights, index_bound):
        best = None
        for j in range(index_bound + 1):
            total = mpf(0)
            for k, w in weights.items():
                total += to_mpf(w) * self.log_weight(k, j)
            if best is None or total > best:
                best = total
        return best

    def validate(self, index_bound):
        probe = set(range(min(index_bound, 128) + 1))
        probe.update(geometric_ladder(index_bound))
        for j in sorted(probe):
            for k in range(1, self.max_grade):
                if not self.weight(k, j) <= self.weight(k + 1, j):
                    raise ConfigError(f"weights decrease in grade at (k={k}, n={j})")

    def describe(self):
        return {
            "shape": "table",
            "grades": [c.text() for c in self.columns],
            "max_grade": self.max_grade,
        }


@dataclass(frozen=True)
class InterleaveMatrix(KotheMatrix):
    even: KotheMatrix
    odd: KotheMatrix
    max_grade: int = 0

    def __post_init__(self):
        object.__setattr__(self, "max_grade", min(self.even.max_grade, self.odd.max_grade))

    def log_weight(self, k, n):
        self._check_grade(k)
        if n % 2 == 0:
            return self.even.log_weight(k, n // 2)
        return self.odd.log_weight(k, (n - 1) // 2)

    def sup_log_combo(self, weights, index_bound):
        even_sup = self.even.sup_log_combo(weights, index_bound // 2)
        odd_sup = self.odd.sup_log_combo(weights, max((index_bound - 1) // 2, 0))
        return max(even_sup, odd_sup)

    def validate(self, index_bound):
        self.even.validate(max(index_bound // 2, 64))
        self.odd.validate(max(index_bound // 2, 64))

    def describe(self):
        return {
            "shape": "interleave",
            "even": self.even.describe(),
            "odd": self.odd.describe(),
            "max_grade": self.max_grade,
        }


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------


def power_series_finite(alpha: ExponentSequence, max_grade: int = DEFAULT_MAX_GRADE) -> GradedMatrix:
    """Finite-type matrix a_n(k) = exp(-alpha_n / k)."""
    return GradedMatrix(FiniteTypeProfile(), alpha, max_grade)


def power_series_infinite(alpha: ExponentSequence, max_grade: int = DEFAULT_MAX_GRADE) -> GradedMatrix:
    """Infinite-type matrix a_n(k) = exp(k * alpha_n)."""
    return GradedMatrix(InfiniteTypeProfile(), alpha, max_grade)


def graded(profile_seq: SymbolicSequence, alpha: ExponentSequence, max_grade: int = DEFAULT_MAX_GRADE) -> GradedMatrix:
    return GradedMatrix(GrammarProfile(profile_seq), alpha, max_grade)


def interleave(even: KotheMatrix, odd: KotheMatrix) -> InterleaveMatrix:
    return InterleaveMatrix(even, odd)


# ---------------------------------------------------------------------------
# Structural checks
# ---------------------------------------------------------------------------

_SUM_TOLERANCE = mpf("1e-6")

DEFAULT_TAU_GRID = tuple(Fraction(i, 16) for i in range(1, 16))
DEFAULT_THETA_GRID = DEFAULT_TAU_GRID


def is_nuclear(matrix: KotheMatrix, index_bound: int = DEFAULT_INDEX_BOUND) -> Verdict:
    """Summability test: each grade p admits q with sum_n a_n(p)/a_n(q) finite.

    Convergence at resolution means the partial sums are Cauchy across the
    trailing geometric checkpoints.
    """
    if matrix.max_grade < 2:
        raise ConfigError("nuclearity test needs at least two grades")
    resolution = (index_bound, matrix.max_grade)
    ladder = geometric_ladder(index_bound)
    witness_q: dict[int, int] = {}
    failures: dict[int, dict] = {}
    for p in range(1, matrix.max_grade):
        found = None
        evidence = {}
        for q in range(matrix.max_grade, p, -1):
            partials = _partial_sums(matrix, p, q, ladder)
            if _cauchy_at_resolution(partials):
                found = q
                break
            evidence[q] = {"last_increment": str(partials[-1][1] - partials[-2][1])}
        if found is None:
            failures[p] = evidence
            return fails({"grade": p, "tails": evidence}, resolution)
        witness_q[p] = found
    return holds({"q_for_p": witness_q}, resolution)


def _partial_sums(matrix, p, q, ladder):
    total = mpf(0)
    out = []
    position = 0
    for j in range(ladder[-1] + 1):
        total += mpmath.exp(matrix.log_weight(p, j) - matrix.log_weight(q, j))
        if position < len(ladder) and j == ladder[position]:
            out.append((j, total))
            position += 1
    return out


def _cauchy_at_resolution(partials) -> bool:
    if len(partials) < 3:
        return False
    s_prev2, s_prev, s_last = partials[-3][1], partials[-2][1], partials[-1][1]
    inc_prev = s_prev - s_prev2
    inc_last = s_last - s_prev
    return inc_last <= inc_prev and inc_last < _SUM_TOLERANCE * (1 + s_last)


def check_dn(
    matrix: KotheMatrix,
    index_bound: int = DEFAULT_INDEX_BOUND,
    tau_grid: SeqType[Fraction] = DEFAULT_TAU_GRID,
    constant_cap: mpf = CONSTANT_CAP,
) -> Verdict:
    """Dominating-norm interpolation check on the diagonal.

    Searches p such that every higher grade k interpolates between p and
    some n > k: a_j(k) <= C a_j(p)^(1-tau) a_j(n)^tau for all j at
    resolution, with tau from the grid and C capped.  Exhausting the grade
    search leaves the verdict undetermined (the quantifier is truncated).
    """
    if not tau_grid:
        raise ConfigError("tau grid must be nonempty")
    top = matrix.max_grade
    resolution = (index_bound, top)
    log_cap = mpmath.log(constant_cap)
    blocked: dict[int, int] = {}
    for p in range(1, top - 1):
        steps: dict[int, dict] = {}
        good = True
        for k in range(p + 1, top):
            hit = None
            for n in range(top, k, -1):
                for tau in sorted(tau_grid, reverse=True):
                    s = matrix.sup_log_combo({k: Fraction(1), p: -(1 - tau), n: -tau}, index_bound)
                    if s <= log_cap:
                        hit = {"n": n, "tau": str(tau), "C": str(mpmath.exp(max(s, mpf(0))))}
                        break
                if hit:
                    break
            if hit is None:
                blocked[p] = k
                good = False
                break
            steps[k] = hit
        if good and steps:
            return holds({"p": p, "steps": steps}, resolution)
    if top < 3:
        return undetermined(resolution, notes=("no grade k with p < k < n exists",))
    return undetermined(resolution, notes=("grade search exhausted",), witnesses={"blocked": blocked})


def check_omega(
    matrix: KotheMatrix,
    index_bound: int = DEFAULT_INDEX_BOUND,
    theta_grid: SeqType[Fraction] = DEFAULT_THETA_GRID,
    constant_cap: mpf = CONSTANT_CAP,
) -> Verdict:
    """Dual-norm interpolation check on the diagonal.

    For each p searches q > p such that every k > q interpolates the dual
    norms: a_j(p)^(1-theta) a_j(k)^theta <= C a_j(q) for all j at
    resolution.
    """
    if not theta_grid:
        raise ConfigError("theta grid must be nonempty")
    top = matrix.max_grade
    resolution = (index_bound, top)
    log_cap = mpmath.log(constant_cap)
    if top < 3:
        return undetermined(resolution, notes=("no grade pattern p < q < k exists",))
    per_p: dict[int, dict] = {}
    for p in range(1, top - 1):
        found = None
        for q in range(p + 1, top):
            steps = {}
            all_k = True
            for k in range(q + 1, top + 1):
                hit = None
                for theta in sorted(theta_grid):
                    s = matrix.sup_log_combo({p: 1 - theta, k: theta, q: Fraction(-1)}, index_bound)
                    if s <= log_cap:
                        hit = {"theta": str(theta), "C": str(mpmath.exp(max(s, mpf(0))))}
                        break
                if hit is None:
                    all_k = False
                    break
                steps[k] = hit
            if all_k:
                found = {"q": q, "steps": steps}
                break
        if found is None:
            return undetermined(resolution, notes=(f"no interpolation grade found above p={p}",))
        per_p[p] = found
    return holds({"per_p": per_p}, resolution)


def associated_exponents(
    matrix: KotheMatrix,
    index_bound: int = DEFAULT_INDEX_BOUND,
    verified_nuclear: bool = False,
) -> SymbolicSequence:
    """Canonical exponent-sequence representative eps_n = -log d_n(U_2, U_1).

    For graded matrices this is the closed form (f(2) - f(1)) * alpha.
    The representative is unique only up to equivalence; callers that need
    equivalence-class statements must test ratio bounds, not equality.
    """
    if not verified_nuclear:
        verdict = is_nuclear(matrix, index_bound)
        if not verdict.holds:
            raise ConfigError("associated exponents need a nuclear matrix at resolution")
    if isinstance(matrix, GradedMatrix):
        gap = matrix.grade_value(2) - matrix.grade_value(1)
        return scale(gap, matrix.alpha.base)
    from .diameters import log_diameters  # local import to avoid a cycle

    return log_diameters(matrix, 1, 2, index_bound)


# ---------------------------------------------------------------------------
# Space descriptors and definition files
# ---------------------------------------------------------------------------

VERIFIED = "verified-at-resolution"
ASSUMED = "assumed"
FAILED = "failed"
UNKNOWN = "unknown"


@dataclass
class SpaceDescriptor:
    matrix: KotheMatrix
    label: str
    claims: frozenset[str] = frozenset()
    status: dict = field(default_factory=dict)

    @property
    def hypothesis_ok(self) -> bool:
        """True when DN and Omega are verified or assumed (never failed)."""
        return all(
            self.status.get(prop) in (VERIFIED, ASSUMED)
            for prop in (DN_PROPERTY, OMEGA_PROPERTY)
        )


_POWER_SERIES_TYPES = {"lambda1": power_series_finite, "lambdainf": power_series_infinite}


def parse_space_text(text: str) -> dict:
    """Parse the TOML-like space definition format into a nested dict."""
    root: dict = {}
    section = root
    for raw_line in text.splitlines():
        line = _strip_comment(raw_line).strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if not name:
                raise ParseError("empty section name")
            section = root.setdefault(name, {})
            continue
        if "=" not in line:
            raise ParseError(f"expected key = value, got {line!r}")
        key, _, value = line.partition("=")
        section[key.strip()] = _parse_value(value.strip())
    return root


def _strip_comment(line: str) -> str:
    out = []
    in_string = False
    for ch in line:
        if ch == '"':
            in_string = not in_string
        if ch == "#" and not in_string:
            break
        out.append(ch)
    return "".join(out)


def _parse_value(value: str):
    if not value:
        raise ParseError("empty value")
    if value.startswith('"') and value.endswith('"') and len(value) >= 2:
        return value[1:-1]
    if value.startswith("[") and value.endswith("]"):
        inner = value[1:-1].strip()
        if not inner:
            return []
        return [_parse_value(part.strip()) for part in _split_list(inner)]
    try:
        return int(value)
    except ValueError:
        pass
    try:
        return float(value)
    except ValueError as exc:
        raise ParseError(f"cannot parse value {value!r}") from exc


def _split_list(inner: str) -> list[str]:
    parts = []
    depth = 0
    in_string = False
    current = []
    for ch in inner:
        if ch == '"':
            in_string = not in_string
        if ch in "[(" and not in_string:
            depth += 1
        if ch in ")]" and not in_string:
            depth -= 1
        if ch == "," and depth == 0 and not in_string:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    if current:
        parts.append("".join(current))
    return parts


def space_from_mapping(data: dict, index_bound: int = DEFAULT_INDEX_BOUND) -> SpaceDescriptor:
    kind = data.get("type")
    if kind not in ("lambda1", "lambdainf", "graded", "table", "interleave"):
        raise ParseError(f"unknown space type {kind!r}")
    label = data.get("label") or _default_label(data)
    max_grade = int(data.get("max_grade", DEFAULT_MAX_GRADE))
    claims = frozenset(data.get("assume", []))
    if kind in _POWER_SERIES_TYPES:
        alpha = validate_exponents(parse_sequence(_require(data, "alpha")), index_bound)
        matrix: KotheMatrix = _POWER_SERIES_TYPES[kind](alpha, max_grade)
        # Power-series spaces carry the classical interpolation properties.
        claims = claims | {DN_PROPERTY, OMEGA_PROPERTY}
    elif kind == "graded":
        alpha = validate_exponents(parse_sequence(_require(data, "alpha")), index_bound)
        matrix = graded(parse_sequence(_require(data, "f")), alpha, max_grade)
    elif kind == "table":
        grades = data.get("grades")
        if not grades:
            raise ParseError("table space needs a nonempty 'grades' list")
        matrix = TableMatrix(tuple(parse_sequence(g) for g in grades))
    else:  # interleave
        even = data.get("even")
        odd = data.get("odd")
        if not isinstance(even, dict) or not isinstance(odd, dict):
            raise ParseError("interleave space needs [even] and [odd] sections")
        matrix = interleave(
            space_from_mapping(even, index_bound).matrix,
            space_from_mapping(odd, index_bound).matrix,
        )
    matrix.validate(min(index_bound, 512))
    return SpaceDescriptor(matrix=matrix, label=label, claims=claims)


def _require(data: dict, key: str):
    if key not in data:
        raise ParseError(f"space definition is missing {key!r}")
    return data[key]


def _default_label(data: dict) -> str:
    kind = data.get("type", "?")
    alpha = data.get("alpha", "")
    return f"{kind}[{alpha}]" if alpha else str(kind)


def load_space(path, index_bound: int = DEFAULT_INDEX_BOUND) -> SpaceDescriptor:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ParseError(f"cannot read space file {path}: {exc}") from exc
    return space_from_mapping(parse_space_text(text), index_bound)


def dump_space(descriptor: SpaceDescriptor) -> str:
    """Serialize a descriptor back into the space definition format."""
    lines = ["schema_version = 1"]
    claims = sorted(descriptor.claims - {DN_PROPERTY, OMEGA_PROPERTY}) if _is_power_series(
        descriptor.matrix
    ) else sorted(descriptor.claims)
    if claims:
        rendered = ", ".join(f'"{c}"' for c in claims)
        lines.append(f"assume = [{rendered}]")
    # Matrix lines last: interleave serialization opens sections.
    lines.extend(_dump_matrix(descriptor.matrix, descriptor.label))
    return "\n".join(lines) + "\n"


def _is_power_series(matrix: KotheMatrix) -> bool:
    return isinstance(matrix, GradedMatrix) and isinstance(
        matrix.profile, (FiniteTypeProfile, InfiniteTypeProfile)
    )


def _dump_matrix(matrix: KotheMatrix, label: str) -> list[str]:
    lines = []
    if isinstance(matrix, GradedMatrix):
        if isinstance(matrix.profile, FiniteTypeProfile):
            lines.append('type = "lambda1"')
        elif isinstance(matrix.profile, InfiniteTypeProfile):
            lines.append('type = "lambdainf"')
        else:
            lines.append('type = "graded"')
            lines.append(f'f = "{matrix.profile.text()}"')
        lines.append(f'label = "{label}"')
        lines.append(f'alpha = "{matrix.alpha.text()}"')
        lines.append(f"max_grade = {matrix.max_grade}")
    elif isinstance(matrix, TableMatrix):
        lines.append('type = "table"')
        lines.append(f'label = "{label}"')
        rendered = ", ".join(f'"{c.text()}"' for c in matrix.columns)
        lines.append(f"grades = [{rendered}]")
    elif isinstance(matrix, InterleaveMatrix):
        lines.append('type = "interleave"')
        lines.append(f'label = "{label}"')
        lines.append("[even]")
        lines.extend(_dump_matrix(matrix.even, label + ".even"))
        lines.append("[odd]")
        lines.extend(_dump_matrix(matrix.odd, label + ".odd"))
    else:  # pragma: no cover - exhaustive over shapes
        raise ConfigError(f"cannot serialize {type(matrix).__name__}")
    return lines
