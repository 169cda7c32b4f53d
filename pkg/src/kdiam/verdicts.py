"""Tri-state verdicts and quantifier-truncation bounds.

Quantifiers over grades and indices are truncated at a declared Resolution,
so every decided outcome is an at-resolution statement.  A holds/fails
verdict always carries the witnesses that decided it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConfigError

HOLDS = "holds"
FAILS = "fails"
UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class Resolution:
    """Index bound (N) and grade bound (Kmax) for truncated quantifiers."""

    index_bound: int = 4096
    grade_bound: int = 12

    def __post_init__(self):
        if self.index_bound < 64:
            raise ConfigError(f"index bound must be >= 64, got {self.index_bound}")
        if self.grade_bound < 2:
            raise ConfigError(f"grade bound must be >= 2, got {self.grade_bound}")

    def with_grade_bound(self, grade_bound: int) -> "Resolution":
        return Resolution(self.index_bound, grade_bound)


@dataclass(frozen=True)
class Verdict:
    outcome: str
    witnesses: dict = field(default_factory=dict)
    resolution: tuple[int, int] = (0, 0)  # (index bound, grade bound) used
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if self.outcome not in (HOLDS, FAILS, UNDETERMINED):
            raise ConfigError(f"bad outcome {self.outcome!r}")
        if self.outcome != UNDETERMINED and not self.witnesses:
            raise ConfigError(f"{self.outcome} verdict requires witnesses")

    @property
    def decided(self) -> bool:
        return self.outcome != UNDETERMINED

    @property
    def holds(self) -> bool:
        return self.outcome == HOLDS


def holds(witnesses: dict, resolution: tuple[int, int], notes: tuple[str, ...] = ()) -> Verdict:
    return Verdict(HOLDS, witnesses, resolution, notes)


def fails(witnesses: dict, resolution: tuple[int, int], notes: tuple[str, ...] = ()) -> Verdict:
    return Verdict(FAILS, witnesses, resolution, notes)


def undetermined(resolution: tuple[int, int], notes: tuple[str, ...] = (), witnesses: dict | None = None) -> Verdict:
    return Verdict(UNDETERMINED, witnesses or {}, resolution, notes)
