"""Oracles for groups with canonical forms: free, free abelian, finite and
direct products of these."""

from __future__ import annotations

from typing import Sequence

from ..finite import FiniteTarget
from ..presentations import Word, cyclic_reduce, free_reduce, inverse, power
from .base import Budget, GroupOracle, UnsupportedQuery


class FreeOracle(GroupOracle):
    kind = "Free"

    def __init__(self, generators: Sequence[str]):
        self.generators = tuple(generators)

    def trivial(self, w, budget):
        budget.spend(len(w), "free reduction")
        return not free_reduce(w)

    def normal_form(self, w):
        return free_reduce(w)

    def geodesic_length(self, w):
        return len(free_reduce(w))

    @property
    def has_normal_form(self):
        return True

    def power_of(self, c, w, budget):
        core, u = cyclic_reduce(c)
        if not core:
            raise UnsupportedQuery("power membership of the trivial element")
        budget.spend(len(w) + len(c), "free power membership")
        w2 = free_reduce(inverse(u) + tuple(w) + u)
        if not w2:
            return 0
        if len(w2) % len(core):
            return None
        k = len(w2) // len(core)
        if w2 == power(core, k):
            return k
        if w2 == power(core, -k):
            return -k
        return None


class FreeAbelianOracle(GroupOracle):
    kind = "FreeAbelian"

    def __init__(self, generators: Sequence[str]):
        self.generators = tuple(generators)

    def vector(self, w) -> tuple[int, ...]:
        v = [0] * len(self.generators)
        for x in w:
            v[abs(x) - 1] += 1 if x > 0 else -1
        return tuple(v)

    def trivial(self, w, budget):
        budget.spend(len(w), "exponent sums")
        return not any(self.vector(w))

    def normal_form(self, w):
        return self.vector(w)

    def geodesic_length(self, w):
        return sum(abs(x) for x in self.vector(w))

    @property
    def has_normal_form(self):
        return True

    def reduce(self, w, budget):
        out = []
        for i, e in enumerate(self.vector(w)):
            out.extend(power((i + 1,), e))
        return tuple(out)

    def power_of(self, c, w, budget):
        vc, vw = self.vector(c), self.vector(w)
        budget.spend(len(c) + len(w), "abelian power membership")
        if not any(vc):
            raise UnsupportedQuery("power membership of the trivial element")
        if not any(vw):
            return 0
        i = next(i for i, x in enumerate(vc) if x)
        if vw[i] % vc[i]:
            return None
        k = vw[i] // vc[i]
        return k if all(k * a == b for a, b in zip(vc, vw)) else None


class FiniteOracle(GroupOracle):
    """Group given faithfully by generator images in a finite target."""

    kind = "FiniteTable"

    def __init__(self, generators: Sequence[str], target: FiniteTarget, images: Sequence[int]):
        self.generators = tuple(generators)
        self.target = target
        self.images = tuple(images)
        if len(self.images) != len(self.generators):
            raise ValueError("one image per generator required")

    def element(self, w) -> int:
        return self.target.evaluate(w, self.images)

    def trivial(self, w, budget):
        budget.spend(len(w), "table evaluation")
        return self.element(w) == 0

    def normal_form(self, w):
        return self.element(w)

    @property
    def has_normal_form(self):
        return True

    def power_of(self, c, w, budget):
        x, y = self.element(c), self.element(w)
        if x == 0:
            raise UnsupportedQuery("power membership of the trivial element")
        p = 0
        for k in range(self.target.element_order(x)):
            budget.spend(1, "finite power membership")
            if p == y:
                return k
            p = self.target.mul(p, x)
        return None


class DirectProductOracle(GroupOracle):
    """Direct product; the alphabet is the concatenation of factor alphabets
    and letters of different factors commute."""

    kind = "DirectProduct"

    def __init__(self, factors: Sequence[GroupOracle], generators: Sequence[str] | None = None):
        self.factors = tuple(factors)
        self.owner: list[tuple[int, int]] = []
        for f, o in enumerate(self.factors):
            self.owner.extend((f, k) for k in range(len(o.generators)))
        names = [n for o in self.factors for n in o.generators]
        self.generators = tuple(generators) if generators is not None else tuple(names)
        if len(self.generators) != len(self.owner):
            raise ValueError("generator count mismatch")

    def project(self, w) -> list[Word]:
        parts: list[list[int]] = [[] for _ in self.factors]
        for x in w:
            f, k = self.owner[abs(x) - 1]
            parts[f].append(k + 1 if x > 0 else -(k + 1))
        return [tuple(p) for p in parts]

    def trivial(self, w, budget):
        return all(o.trivial(p, budget) for o, p in zip(self.factors, self.project(w)))

    def normal_form(self, w):
        if not self.has_normal_form:
            return None
        return tuple(o.normal_form(p) for o, p in zip(self.factors, self.project(w)))

    @property
    def has_normal_form(self):
        return all(o.has_normal_form for o in self.factors)

    def geodesic_length(self, w):
        parts = [o.geodesic_length(p) for o, p in zip(self.factors, self.project(w))]
        return None if any(x is None for x in parts) else sum(parts)

    def power_of(self, c, w, budget):
        # the exponent is read off the first torsion-free factor where c is
        # nontrivial, then checked on the whole product
        pc, pw = self.project(c), self.project(w)
        for o, a, b in zip(self.factors, pc, pw):
            if o.kind == "FiniteTable" or o.trivial(a, budget):
                continue
            k = o.power_of(a, b, budget)
            if k is None:
                return None
            return k if self.trivial(tuple(w) + power(c, -k), budget) else None
        raise UnsupportedQuery("power membership needs a torsion-free factor where c is nontrivial")


class RelabeledOracle(GroupOracle):
    """Oracle over a new alphabet whose letters are words of ``inner``.

    Used after Tietze moves: ``images[i]`` is the inner word for generator ``i``.
    """

    kind = "Relabeled"

    def __init__(self, inner: GroupOracle, generators: Sequence[str], images: dict[int, Word]):
        self.inner = inner
        self.generators = tuple(generators)
        self.images = dict(images)

    def translate(self, w) -> Word:
        from ..presentations import substitute

        return substitute(w, self.images)

    def trivial(self, w, budget):
        return self.inner.trivial(self.translate(w), budget)

    def reduce(self, w, budget):
        return free_reduce(w)

    def normal_form(self, w):
        return self.inner.normal_form(self.translate(w))

    @property
    def has_normal_form(self):
        return self.inner.has_normal_form

    def letter_to_letter(self) -> bool:
        """Every generator maps to a single letter and every inner generator is hit."""
        imgs = [self.images.get(g, (g + 1,)) for g in range(len(self.generators))]
        if any(len(w) != 1 for w in imgs):
            return False
        return {abs(w[0]) for w in imgs} == set(range(1, len(self.inner.generators) + 1))

    def geodesic_length(self, w):
        # a letter-to-letter surjection preserves word length in both directions
        if not self.letter_to_letter():
            return None
        return self.inner.geodesic_length(self.translate(w))
