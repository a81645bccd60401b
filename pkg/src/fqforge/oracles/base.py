from __future__ import annotations

import os
from dataclasses import dataclass
from enum import Enum
from typing import Hashable, Sequence

from ..presentations import EMPTY, Word, format_word, free_reduce, inverse

DEFAULT_BUDGET = 10**6


def default_budget() -> int:
    value = os.environ.get("FQFORGE_BUDGET")
    return int(value) if value else DEFAULT_BUDGET


class Verdict(Enum):
    EQUAL = "EQUAL"
    NOT_EQUAL = "NOT_EQUAL"
    INCONCLUSIVE = "INCONCLUSIVE"


class Inconclusive(Exception):
    """A bounded sub-procedure ran out of budget."""

    def __init__(self, where: str, budget: int):
        self.where = where
        self.budget = budget
        super().__init__(f"budget of {budget} steps exhausted in {where}")


class UnsupportedQuery(ValueError):
    """The oracle cannot answer this kind of question (precondition failure)."""


class Budget:
    __slots__ = ("limit", "left")

    def __init__(self, limit: int | None = None):
        self.limit = default_budget() if limit is None else int(limit)
        self.left = self.limit

    def spend(self, n: int = 1, where: str = "reduction") -> None:
        self.left -= n
        if self.left < 0:
            raise Inconclusive(where, self.limit)

    @property
    def used(self) -> int:
        return self.limit - self.left


def as_budget(budget: Budget | int | None) -> Budget:
    if isinstance(budget, Budget):
        return budget
    return Budget(budget)


@dataclass(frozen=True)
class Answer:
    """Outcome of a top-level query; ``detail`` explains INCONCLUSIVE answers."""

    verdict: Verdict
    steps: int
    detail: str = ""

    def __bool__(self):
        return self.verdict is Verdict.EQUAL


class GroupOracle:
    """Word-problem solver for one group over a fixed alphabet.

    Subclasses implement :meth:`trivial` (raising :class:`Inconclusive` when a
    bounded step gives up); everything else has generic fallbacks.
    """

    kind = "abstract"
    generators: tuple[str, ...] = ()

    def trivial(self, w: Word, budget: Budget) -> bool:
        raise NotImplementedError

    def reduce(self, w: Word, budget: Budget) -> Word:
        return free_reduce(w)

    def normal_form(self, w: Word) -> Hashable | None:
        """Canonical hashable form, or ``None`` if this oracle has none."""
        return None

    @property
    def has_normal_form(self) -> bool:
        return False

    def geodesic_length(self, w: Word) -> int | None:
        """Exact word length of ``w`` over the standard generators, when this
        oracle knows it without search."""
        return None

    def power_of(self, c: Word, w: Word, budget: Budget) -> int | None:
        raise UnsupportedQuery(f"{self.kind} oracle has no power membership")

    def descend(self, w: Word, level: GroupOracle, budget: Budget) -> Word | None:
        """Rewrite ``w`` as a word of the subgroup ``level`` on the tower below
        this oracle, or return ``None`` if ``w`` is not in it."""
        if level is self:
            return tuple(w)
        raise UnsupportedQuery(f"{level.kind} is not below {self.kind}")

    # -- top-level, three-valued API ------------------------------------

    def check(self, u: Sequence[int], v: Sequence[int] = EMPTY, budget: Budget | int | None = None) -> Answer:
        b = as_budget(budget)
        w = tuple(u) + inverse(v)
        try:
            result = self.trivial(free_reduce(w), b)
        except Inconclusive as exc:
            return Answer(Verdict.INCONCLUSIVE, b.used, str(exc))
        return Answer(Verdict.EQUAL if result else Verdict.NOT_EQUAL, b.used)

    def equal(self, u: Sequence[int], v: Sequence[int] = EMPTY, budget: Budget | int | None = None) -> Verdict:
        return self.check(u, v, budget).verdict

    def format(self, w: Sequence[int]) -> str:
        return format_word(w, self.generators)

    def __repr__(self):
        return f"<{type(self).__name__} on {len(self.generators)} generators>"


def equal(o: GroupOracle, u: Sequence[int], v: Sequence[int], budget: Budget | int | None = None) -> Verdict:
    return o.equal(u, v, budget)
