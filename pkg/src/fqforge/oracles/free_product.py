from __future__ import annotations

from typing import Sequence

from ..presentations import Word, free_reduce, inverse, power
from .base import Budget, GroupOracle, UnsupportedQuery

Syllable = tuple[int, Word]  # (factor index, word over the factor's own alphabet)


class FreeProductOracle(GroupOracle):
    """Free product of factor oracles.  The alphabet is the concatenation of
    the factor alphabets, in order."""

    kind = "FreeProduct"

    def __init__(self, factors: Sequence[GroupOracle], generators: Sequence[str] | None = None):
        self.factors = tuple(factors)
        self.owner: list[tuple[int, int]] = []
        self.offset: list[int] = []
        for f, o in enumerate(self.factors):
            self.offset.append(len(self.owner))
            self.owner.extend((f, k) for k in range(len(o.generators)))
        names = [n for o in self.factors for n in o.generators]
        self.generators = tuple(generators) if generators is not None else tuple(names)
        if len(self.generators) != len(self.owner):
            raise ValueError("generator count mismatch")

    # -- syllables ---------------------------------------------------------

    def syllables(self, w: Sequence[int]) -> list[Syllable]:
        out: list[tuple[int, list[int]]] = []
        for x in w:
            f, k = self.owner[abs(x) - 1]
            local = k + 1 if x > 0 else -(k + 1)
            if out and out[-1][0] == f:
                out[-1][1].append(local)
            else:
                out.append((f, [local]))
        return [(f, tuple(s)) for f, s in out]

    def lift(self, f: int, local: Sequence[int]) -> Word:
        off = self.offset[f]
        return tuple(x + off if x > 0 else x - off for x in local)

    def join(self, syllables: Sequence[Syllable]) -> Word:
        out: list[int] = []
        for f, s in syllables:
            out.extend(self.lift(f, s))
        return tuple(out)

    def reduced_syllables(self, w: Sequence[int], budget: Budget) -> list[Syllable]:
        """Alternating sequence of syllables, each nontrivial in its factor."""
        stack: list[Syllable] = []
        for f, s in self.syllables(w):
            budget.spend(1, "free product reduction")
            if stack and stack[-1][0] == f:
                s = stack.pop()[1] + s
            o = self.factors[f]
            s = o.reduce(free_reduce(s), budget)
            if o.trivial(s, budget):
                continue
            stack.append((f, s))
        return stack

    def syllable_length(self, w: Sequence[int], budget: Budget | None = None) -> int:
        return len(self.reduced_syllables(w, budget or Budget()))

    # -- GroupOracle -------------------------------------------------------

    def trivial(self, w, budget):
        return not self.reduced_syllables(w, budget)

    def reduce(self, w, budget):
        return self.join(self.reduced_syllables(w, budget))

    @property
    def has_normal_form(self):
        return all(o.has_normal_form for o in self.factors)

    def normal_form(self, w):
        if not self.has_normal_form:
            return None
        b = Budget()
        return tuple((f, self.factors[f].normal_form(s)) for f, s in self.reduced_syllables(w, b))

    def geodesic_length(self, w):
        total = 0
        for f, s in self.reduced_syllables(w, Budget()):
            k = self.factors[f].geodesic_length(s)
            if k is None:
                return None
            total += k
        return total

    def cyclic_syllables(self, c: Sequence[int], budget: Budget) -> tuple[list[Syllable], Word]:
        """``(core, u)`` with ``c = u core u^-1`` and ``core`` cyclically reduced
        in the free-product sense."""
        syl = self.reduced_syllables(c, budget)
        u: list[int] = []
        while len(syl) >= 2 and syl[0][0] == syl[-1][0]:
            f, p = syl[0]
            q = syl[-1][1]
            u.extend(self.lift(f, p))
            o = self.factors[f]
            merged = o.reduce(free_reduce(q + p), budget)
            syl = syl[1:-1]
            if not o.trivial(merged, budget):
                syl.append((f, merged))
        return syl, tuple(u)

    def power_of(self, c, w, budget):
        core, u = self.cyclic_syllables(c, budget)
        if not core:
            raise UnsupportedQuery("power membership of the trivial element")
        w2 = self.reduced_syllables(inverse(u) + tuple(w) + u, budget)
        if not w2:
            return 0
        if len(core) == 1:
            f, s = core[0]
            if len(w2) != 1 or w2[0][0] != f:
                return None
            return self.factors[f].power_of(s, w2[0][1], budget)
        if len(w2) % len(core):
            return None
        k = len(w2) // len(core)
        core_word, w2_word = self.join(core), self.join(w2)
        for cand in (k, -k):
            if self.trivial(w2_word + power(core_word, -cand), budget):
                return cand
        return None


def power_membership_free_product(o: FreeProductOracle, c: Sequence[int], w: Sequence[int], budget: Budget | int | None = None) -> int | None:
    """Return ``k`` with ``w = c^k`` in the free product, or ``None``.

    The cyclically reduced core of ``c`` must have syllable length at least 2
    or lie in a single factor whose oracle supports power membership;
    otherwise :class:`UnsupportedQuery` is raised.
    """
    from .base import as_budget

    return o.power_of(tuple(c), tuple(w), as_budget(budget))
