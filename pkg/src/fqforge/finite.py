"""Finite groups given by multiplication tables, used as quotient targets."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Sequence


@dataclass(frozen=True, eq=False)
class FiniteTarget:
    """Elements are ``0..order-1`` with ``0`` the identity."""

    name: str
    kind: str  # "cyclic" | "symmetric" | "table"
    table: tuple[tuple[int, ...], ...]
    inverses: tuple[int, ...]
    labels: tuple = ()

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def inv(self, x: int) -> int:
        return self.inverses[x]

    def evaluate(self, w: Sequence[int], images: Sequence[int]) -> int:
        t, inv = self.table, self.inverses
        x = 0
        for a in w:
            y = images[a - 1] if a > 0 else inv[images[-a - 1]]
            x = t[x][y]
        return x

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != 0:
            y = self.table[y][x]
            k += 1
        return k

    def subgroup_generated(self, elements: Sequence[int]) -> frozenset[int]:
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in elements:
                    y = self.table[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def __repr__(self):
        return f"FiniteTarget({self.name}, order={self.order})"


def _validated(name: str, kind: str, table, labels=()) -> FiniteTarget:
    n = len(table)
    table = tuple(tuple(int(v) for v in row) for row in table)
    if n == 0 or any(len(row) != n for row in table):
        raise ValueError("multiplication table must be square and nonempty")
    if any(not 0 <= v < n for row in table for v in row):
        raise ValueError("table is not closed")
    if any(table[0][x] != x or table[x][0] != x for x in range(n)):
        raise ValueError("element 0 must be the identity")
    inverses = []
    for x in range(n):
        row = [y for y in range(n) if table[x][y] == 0]
        if len(row) != 1 or table[row[0]][x] != 0:
            raise ValueError(f"element {x} has no two-sided inverse")
        inverses.append(row[0])
    for x in range(n):
        for y in range(n):
            xy = table[x][y]
            for z in range(n):
                if table[xy][z] != table[x][table[y][z]]:
                    raise ValueError("table is not associative")
    return FiniteTarget(name, kind, table, tuple(inverses), tuple(labels))


def from_table(table, name: str = "table") -> FiniteTarget:
    return _validated(name, "table", table)


def cyclic(m: int) -> FiniteTarget:
    if m < 1:
        raise ValueError("order must be positive")
    table = tuple(tuple((x + y) % m for y in range(m)) for x in range(m))
    return FiniteTarget(f"Z/{m}", "cyclic", table, tuple((-x) % m for x in range(m)), tuple(range(m)))


def symmetric(k: int) -> FiniteTarget:
    """``S_k`` acting on ``0..k-1``; composition is left-to-right
    (``(p*q)(i) = q(p(i))``) so words act on the right, like coset tables."""
    perms = sorted(permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    table = tuple(tuple(index[tuple(q[p[i]] for i in range(k))] for q in perms) for p in perms)
    inverses = []
    for p in perms:
        inv = [0] * k
        for i, pi in enumerate(p):
            inv[pi] = i
        inverses.append(index[tuple(inv)])
    return FiniteTarget(f"S{k}", "symmetric", table, tuple(inverses), tuple(perms))


def trivial_group() -> FiniteTarget:
    return FiniteTarget("1", "cyclic", ((0,),), (0,), (0,))


def default_targets() -> list[FiniteTarget]:
    return [cyclic(m) for m in range(2, 13)] + [symmetric(3), symmetric(4)]
