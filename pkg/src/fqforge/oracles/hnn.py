from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..presentations import Word, free_reduce, inverse, substitute
from .base import Budget, GroupOracle, UnsupportedQuery, as_budget


@dataclass(frozen=True)
class StableLetter:
    """``s^-1 a_j s = b_j``; ``a_member``/``b_member`` decide membership in
    ``<a_j>`` and ``<b_j>`` inside the base and return expressions over the
    abstract letters ``±(j+1)``."""

    name: str
    a_words: tuple[Word, ...]
    b_words: tuple[Word, ...]
    a_member: object
    b_member: object

    def __post_init__(self):
        if len(self.a_words) != len(self.b_words):
            raise ValueError(f"stable letter {self.name}: associated subgroups need matched generators")

    def a_images(self) -> dict[int, Word]:
        return {j: w for j, w in enumerate(self.a_words)}

    def b_images(self) -> dict[int, Word]:
        return {j: w for j, w in enumerate(self.b_words)}


class HnnOracle(GroupOracle):
    """HNN extension.  The alphabet is the base alphabet followed by the stable
    letters, so base words need no translation."""

    kind = "Hnn"

    def __init__(self, base: GroupOracle, stables: Sequence[StableLetter]):
        self.base = base
        self.stables = tuple(stables)
        self.nbase = len(base.generators)
        self.generators = tuple(base.generators) + tuple(s.name for s in self.stables)

    def stable_index(self, x: int) -> int | None:
        g = abs(x) - 1
        return g - self.nbase if g >= self.nbase else None

    def stable_count(self, w: Sequence[int]) -> int:
        return sum(1 for x in w if abs(x) > self.nbase)

    def split(self, w: Sequence[int], budget: Budget) -> tuple[list[Word], list[int]]:
        """Britton-reduce ``w``: return base segments ``h_0..h_m`` and stable
        letters ``x_1..x_m`` with ``w = h_0 x_1 h_1 ... x_m h_m`` and no pinch.

        Pinches are removed leftmost-innermost: each new stable letter is
        compared with the last surviving one.
        """
        segs: list[list[int]] = [[]]
        st: list[int] = []
        for x in w:
            budget.spend(1, "Britton reduction")
            if abs(x) <= self.nbase:
                seg = segs[-1]
                if seg and seg[-1] == -x:
                    seg.pop()
                else:
                    seg.append(x)
                continue
            if st and st[-1] == -x:
                s = self.stables[abs(x) - 1 - self.nbase]
                mid = self.base.reduce(tuple(segs[-1]), budget)
                if x > 0:  # s^-1 mid s with mid in A
                    ex = s.a_member.express(mid, budget)
                    repl = substitute(ex, s.b_images()) if ex is not None else None
                else:  # s mid s^-1 with mid in B
                    ex = s.b_member.express(mid, budget)
                    repl = substitute(ex, s.a_images()) if ex is not None else None
                if repl is not None:
                    st.pop()
                    segs.pop()
                    seg = segs[-1]
                    for y in repl:
                        if seg and seg[-1] == -y:
                            seg.pop()
                        else:
                            seg.append(y)
                    continue
            st.append(x)
            segs.append([])
        return [tuple(s) for s in segs], st

    def britton_reduce(self, w: Sequence[int], budget: Budget | int | None = None) -> Word:
        segs, st = self.split(tuple(w), as_budget(budget))
        out: list[int] = list(segs[0])
        for x, h in zip(st, segs[1:]):
            out.append(x)
            out.extend(h)
        return tuple(out)

    # -- GroupOracle -------------------------------------------------------

    def trivial(self, w, budget):
        segs, st = self.split(w, budget)
        if st:
            return False
        return self.base.trivial(segs[0], budget)

    def reduce(self, w, budget):
        segs, st = self.split(w, budget)
        out: list[int] = list(self.base.reduce(segs[0], budget))
        for x, h in zip(st, segs[1:]):
            out.append(x)
            out.extend(self.base.reduce(h, budget))
        return free_reduce(out)

    def descend(self, w, level, budget):
        if level is self:
            return tuple(w)
        segs, st = self.split(w, budget)
        if st:
            return None
        return self.base.descend(segs[0], level, budget)

    def power_of(self, c, w, budget):
        if self.stable_count(c):
            raise UnsupportedQuery("power membership in an HNN extension needs a base element")
        segs, st = self.split(w, budget)
        if st:
            return None
        return self.base.power_of(c, segs[0], budget)


def britton_reduce(o: HnnOracle, w: Sequence[int], budget: Budget | int | None = None) -> Word:
    return o.britton_reduce(w, budget)


def conjugate_by(w: Sequence[int], x: Sequence[int]) -> Word:
    """``x^-1 w x``."""
    return free_reduce(inverse(x) + tuple(w) + tuple(x))
