"""Subgroup membership procedures.

Every procedure answers with an *expression*: a word over abstract letters
``±(j+1)`` standing for the subgroup's ``j``-th generator.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from ..presentations import Word, free_reduce, inverse, power, substitute
from .base import Budget, GroupOracle, Inconclusive, UnsupportedQuery, as_budget


class Member(Enum):
    YES = "YES"
    NO = "NO"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class MembershipResult:
    status: Member
    expression: Word | None = None
    detail: str = ""

    @property
    def exponent(self) -> int | None:
        """Exponent for cyclic subgroups."""
        if self.expression is None:
            return None
        return sum(1 if x > 0 else -1 for x in self.expression)

    def __bool__(self):
        return self.status is Member.YES


class MembershipOracle:
    kind = "abstract"

    def __init__(self, ambient: GroupOracle, generators: Sequence[Word]):
        self.ambient = ambient
        self.generators = tuple(tuple(g) for g in generators)

    def evaluate(self, expression: Sequence[int]) -> Word:
        return substitute(expression, {j: g for j, g in enumerate(self.generators)})

    def express(self, w: Word, budget: Budget) -> Word | None:
        raise NotImplementedError

    def member(self, w: Sequence[int], budget: Budget | int | None = None) -> MembershipResult:
        b = as_budget(budget)
        try:
            ex = self.express(free_reduce(w), b)
            if ex is None:
                return MembershipResult(Member.NO)
            if not self.ambient.trivial(free_reduce(tuple(w) + inverse(self.evaluate(ex))), b):
                raise AssertionError(f"{self.kind} membership produced a wrong expression")
        except Inconclusive as exc:
            return MembershipResult(Member.INCONCLUSIVE, detail=str(exc))
        return MembershipResult(Member.YES, ex)

    def __repr__(self):
        return f"<{type(self).__name__} with {len(self.generators)} generators>"


def member(m: MembershipOracle, w: Sequence[int], budget: Budget | int | None = None) -> MembershipResult:
    return m.member(w, budget)


class TrivialSubgroup(MembershipOracle):
    kind = "Trivial"

    def __init__(self, ambient: GroupOracle):
        super().__init__(ambient, ())

    def express(self, w, budget):
        return () if self.ambient.trivial(w, budget) else None


class CyclicPower(MembershipOracle):
    """``<c>`` via the ambient oracle's power membership."""

    kind = "CyclicPower"

    def __init__(self, ambient: GroupOracle, c: Sequence[int]):
        super().__init__(ambient, (tuple(c),))
        self.c = tuple(c)

    def express(self, w, budget):
        k = self.ambient.power_of(self.c, w, budget)
        return None if k is None else power((1,), k)


class Retract(MembershipOracle):
    """Subgroup ``H`` with a retraction ``rho`` of ``level`` onto ``H``
    (``rho`` restricted to ``H`` is the identity).

    ``retraction`` maps generator indices of ``level`` to expressions over
    the subgroup letters; missing generators are killed.  When ``level`` is a
    subgroup lower in an HNN tower than ``ambient``, queries are first
    Britton-reduced down to it.
    """

    kind = "Retract"

    def __init__(self, ambient: GroupOracle, generators: Sequence[Word],
                 retraction: Mapping[int, Word], level: GroupOracle | None = None):
        super().__init__(ambient, generators)
        self.level = level or ambient
        nlevel = len(self.level.generators)
        self.rho = {g: tuple(retraction.get(g, ())) for g in range(nlevel)}

    def retract(self, w: Sequence[int]) -> Word:
        return substitute(w, self.rho)

    def candidate(self, w: Word, budget: Budget) -> tuple[Word, Word] | None:
        """``(w at level, rho(w))``, or ``None`` if ``w`` is not in ``level``."""
        w0 = self.ambient.descend(w, self.level, budget)
        if w0 is None:
            return None
        return w0, self.retract(w0)

    def express(self, w, budget):
        cand = self.candidate(w, budget)
        if cand is None:
            return None
        w0, ex = cand
        if self.level.trivial(free_reduce(w0 + inverse(self.evaluate(ex))), budget):
            return ex
        return None

    def split_off(self, c: Word, w: Word, budget: Budget) -> tuple[int, Word] | None:
        """Decide ``w in <c> H`` for ``c`` killed by the retraction: return
        ``(k, f)`` with ``w = c^k f``, ``f`` an expression in ``H``."""
        cand = self.candidate(w, budget)
        if cand is None:
            return None
        w0, ex = cand
        rest = free_reduce(w0 + inverse(self.evaluate(ex)))
        k = self.level.power_of(c, rest, budget)
        if k is None:
            return None
        return k, ex


class FreeFactor(MembershipOracle):
    """Free product of a subset of the factors of a free product."""

    kind = "FreeFactor"

    def __init__(self, ambient, factors: Sequence[int]):
        self.factor_set = frozenset(factors)
        letters = [ambient.offset[f] + k + 1 for f in sorted(self.factor_set)
                   for k in range(len(ambient.factors[f].generators))]
        super().__init__(ambient, [(x,) for x in letters])
        self.local = {x: j + 1 for j, x in enumerate(letters)}

    def express(self, w, budget):
        syl = self.ambient.reduced_syllables(w, budget)
        if any(f not in self.factor_set for f, _ in syl):
            return None
        word = self.ambient.join(syl)
        return tuple(self.local[x] if x > 0 else -self.local[-x] for x in word)


class StallingsGraph(MembershipOracle):
    """Finitely generated subgroup of a free group via a folded core graph.

    Each edge carries a weight in the free group on the subgroup generators;
    reading a word along the graph multiplies the weights, which yields the
    expression on a successful closed read.
    """

    kind = "StallingsGraph"

    def __init__(self, ambient: GroupOracle, generators: Sequence[Word]):
        super().__init__(ambient, [free_reduce(g) for g in generators])
        self._fold()

    def _fold(self):
        # edges[v][x] = (u, weight); the reverse edge carries the inverse weight
        edges: dict[int, dict[int, tuple[int, Word]]] = {0: {}}
        # alias[v] = (u, g): v was merged into u; arriving at v with weight W
        # means arriving at u with weight W g
        alias: dict[int, tuple[int, Word]] = {}
        work: list[tuple[int, int, int, Word]] = []
        n = 1
        for j, g in enumerate(self.generators):
            v = 0
            for i, x in enumerate(g):
                last = i == len(g) - 1
                u = 0 if last else n
                if not last:
                    edges[u] = {}
                    n += 1
                work.append((v, x, u, (j + 1,) if last else ()))
                v = u

        def resolve(v: int) -> tuple[int, Word]:
            g: Word = ()
            while v in alias:
                v, h = alias[v]
                g = g + h
            return v, free_reduce(g)

        while work:
            v, x, z, wt = work.pop()
            v, gv = resolve(v)
            z, gz = resolve(z)
            wt = free_reduce(inverse(gv) + wt + gz)
            old = edges[v].get(x)
            if old is None:
                if -x in edges[z]:
                    # the conflict sits at the other end; fold from there
                    work.append((z, -x, v, inverse(wt)))
                    continue
                edges[v][x] = (z, wt)
                edges[z][-x] = (v, inverse(wt))
                continue
            z2, wt2 = old
            if z2 == z:
                continue  # parallel edges: both weights evaluate to the same element
            if z == 0:
                gone, keep, g = z2, z, free_reduce(inverse(wt2) + wt)
            else:
                gone, keep, g = z, z2, free_reduce(inverse(wt) + wt2)
            alias[gone] = (keep, g)
            for y, (t, wy) in edges.pop(gone).items():
                if t != gone:
                    del edges[t][-y]
                work.append((gone, y, t, wy))
            work.append((v, x, z, wt))
        self.edges = edges

    def express(self, w, budget):
        v, acc = 0, []
        for x in w:
            budget.spend(1, "subgroup graph read")
            out = self.edges[v].get(x)
            if out is None:
                return None
            v, wt = out
            acc.extend(wt)
        if v != 0:
            return None
        return free_reduce(acc)


class CyclicStableMembership(MembershipOracle):
    """``<c, s>`` inside an HNN extension with a single stable letter ``s``
    and base element ``c`` such that no nontrivial power of ``c`` lies in
    either associated subgroup.

    ``a_splitter``/``b_splitter`` decide ``h in <c> A`` and ``h in <c> B``
    (see :meth:`Retract.split_off`).  The procedure is exact: Britton
    normal forms fix the stable-letter pattern, and the coset splits are
    unique under the hypothesis on ``c``.
    """

    kind = "CyclicStable"

    def __init__(self, ambient, stable: int, c: Sequence[int], a_splitter: Retract, b_splitter: Retract):
        if len(ambient.stables) <= stable:
            raise UnsupportedQuery("unknown stable letter")
        s = ambient.stables[stable]
        letter_s = ambient.nbase + stable + 1
        super().__init__(ambient, (tuple(c), (letter_s,)))
        self.c = tuple(c)
        self.s = s
        self.letter_s = letter_s
        self.splitters = {1: a_splitter, -1: b_splitter}

    def express(self, w, budget):
        o = self.ambient
        segs, st = o.split(w, budget)
        if any(abs(x) != self.letter_s for x in st):
            return None
        expr: list[int] = []
        carry: Word = ()
        for h, x in zip(segs, st):
            e = 1 if x > 0 else -1
            got = self.splitters[e].split_off(self.c, free_reduce(carry + h), budget)
            if got is None:
                return None
            k, f = got
            expr.extend(power((1,), k))
            expr.append(2 * e)
            images = self.s.b_images() if e == 1 else self.s.a_images()
            carry = substitute(f, images)
        k = o.base.power_of(self.c, free_reduce(carry + segs[-1]), budget)
        if k is None:
            return None
        expr.extend(power((1,), k))
        return free_reduce(expr)


class Relabeled(MembershipOracle):
    """Same subgroup with its generators listed in another order:
    new generator ``j`` is old generator ``order[j]``."""

    kind = "Relabeled"

    def __init__(self, inner: MembershipOracle, order: Sequence[int]):
        super().__init__(inner.ambient, [inner.generators[k] for k in order])
        self.inner = inner
        self.back = {k + 1: j + 1 for j, k in enumerate(order)}

    def express(self, w, budget):
        ex = self.inner.express(w, budget)
        if ex is None:
            return None
        return tuple(self.back[x] if x > 0 else -self.back[-x] for x in ex)
