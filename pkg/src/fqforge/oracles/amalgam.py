from __future__ import annotations

from typing import Sequence

from ..presentations import Word, free_reduce, substitute
from .base import Budget, GroupOracle

Syllable = tuple[int, Word]  # (side 0/1, word over that side's alphabet)


class AmalgamOracle(GroupOracle):
    """``left *_F right`` where the edge group ``F`` has generators
    ``x_j`` mapped to ``left_words[j]`` and ``right_words[j]``.

    The alphabet is the left alphabet followed by the right one.  Membership
    oracles for the two images of ``F`` must express elements over the
    abstract letters ``±(j+1)``.
    """

    kind = "Amalgam"

    def __init__(self, left: GroupOracle, right: GroupOracle,
                 left_words: Sequence[Word], right_words: Sequence[Word],
                 left_member, right_member, generators: Sequence[str] | None = None):
        if len(left_words) != len(right_words):
            raise ValueError("edge generators must have an image on both sides")
        self.sides = (left, right)
        self.words = (tuple(map(tuple, left_words)), tuple(map(tuple, right_words)))
        self.members = (left_member, right_member)
        self.nleft = len(left.generators)
        names = tuple(left.generators) + tuple(right.generators)
        self.generators = tuple(generators) if generators is not None else names

    def syllables(self, w: Sequence[int]) -> list[tuple[int, list[int]]]:
        out: list[tuple[int, list[int]]] = []
        n = self.nleft
        for x in w:
            g = abs(x)
            side = 0 if g <= n else 1
            local = x if side == 0 else (x - n if x > 0 else x + n)
            if out and out[-1][0] == side:
                out[-1][1].append(local)
            else:
                out.append((side, [local]))
        return out

    def lift(self, side: int, local: Sequence[int]) -> Word:
        if side == 0:
            return tuple(local)
        n = self.nleft
        return tuple(x + n if x > 0 else x - n for x in local)

    def transport(self, side: int, expression: Word) -> Word:
        """Rewrite an edge-group expression as a word on the other side."""
        other = 1 - side
        return substitute(expression, {j: w for j, w in enumerate(self.words[other])})

    def reduced_syllables(self, w: Sequence[int], budget: Budget) -> list[Syllable]:
        """Alternating syllables, none lying in the edge group when there are
        at least two of them."""
        stack: list[Syllable] = []

        def push(side: int, s: Word):
            while True:
                budget.spend(1, "amalgam reduction")
                if stack and stack[-1][0] == side:
                    s = stack.pop()[1] + s
                o = self.sides[side]
                s = o.reduce(free_reduce(s), budget)
                if o.trivial(s, budget):
                    return
                if stack:
                    if len(stack) == 1:
                        # the bottom syllable gains a neighbour only now
                        bside, bword = stack[0]
                        ex = self.members[bside].express(bword, budget)
                        if ex is not None:
                            stack.pop()
                            s = self.transport(bside, ex) + s
                            continue
                    ex = self.members[side].express(s, budget)
                    if ex is not None:
                        side, s = 1 - side, self.transport(side, ex)
                        continue
                stack.append((side, s))
                return

        for side, s in self.syllables(w):
            push(side, tuple(s))
        return stack

    def trivial(self, w, budget):
        return not self.reduced_syllables(w, budget)

    def reduce(self, w, budget):
        out: list[int] = []
        for side, s in self.reduced_syllables(w, budget):
            out.extend(self.lift(side, s))
        return tuple(out)

    def alternating_length(self, w: Sequence[int]) -> int:
        return len(self.syllables(w))
