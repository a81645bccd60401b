"""Finite-quotient certification: abelianization, homomorphisms into finite
targets, low-index subgroups and dead-element checks."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import product
from math import factorial
from typing import Sequence

from .finite import FiniteTarget, cyclic, default_targets, symmetric
from .oracles import Budget, Inconclusive, Verdict, as_budget
from .presentations import GeneratorMap, Presentation, Word, exponent_sum

# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return ``(D, U, V)`` with ``U M V = D``, ``U`` and ``V`` unimodular and
    ``D`` diagonal with ``d_1 | d_2 | ...`` and nonnegative entries."""
    M = [list(map(int, row)) for row in matrix]
    m = len(M)
    n = len(M[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(a, b):
        M[a], M[b] = M[b], M[a]
        U[a], U[b] = U[b], U[a]

    def swap_cols(a, b):
        for row in M:
            row[a], row[b] = row[b], row[a]
        for row in V:
            row[a], row[b] = row[b], row[a]

    def add_row(dst, src, k):  # row dst += k * row src
        M[dst] = [x + k * y for x, y in zip(M[dst], M[src])]
        U[dst] = [x + k * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        for row in M:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(M[i][j]), i, j) for i in range(t, m) for j in range(t, n) if M[i][j]]
            if not entries:
                return M, U, V
            _, i, j = min(entries)
            swap_rows(t, i)
            swap_cols(t, j)
            p = M[t][t]
            done = True
            for i in range(t + 1, m):
                q = M[i][t] // p
                if q:
                    add_row(i, t, -q)
                if M[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = M[t][j] // p
                if q:
                    add_col(j, t, -q)
                if M[t][j]:
                    done = False
            if not done:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if M[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if M[t][t] < 0:
            M[t] = [-x for x in M[t]]
            U[t] = [-x for x in U[t]]
    return M, U, V


def relator_matrix(P: Presentation) -> list[list[int]]:
    return [[exponent_sum(r, g) for g in range(P.rank)] for r in P.relators]


def abelianization(P: Presentation) -> list[int]:
    """Invariant factors of ``H_1``: torsion coefficients ``d > 1`` in
    divisibility order, then one ``0`` per free factor."""
    if P.rank == 0:
        return []
    M = relator_matrix(P)
    if not M:
        return [0] * P.rank
    D, _, _ = smith_normal_form(M)
    diag = [D[i][i] for i in range(min(len(D), P.rank))]
    torsion = [d for d in diag if d > 1]
    free = P.rank - sum(1 for d in diag if d)
    return torsion + [0] * free


# ---------------------------------------------------------------------------
# homomorphisms into finite groups


@dataclass(frozen=True)
class HomReport:
    presentation: str
    target: str
    order: int
    homs: tuple[tuple[int, ...], ...]  # generator images, lexicographically sorted
    watched: tuple[tuple[int, ...], ...]  # per hom, image of each watched word
    complete: bool
    nodes: int

    @property
    def count(self) -> int:
        return len(self.homs)

    def nontrivial(self) -> list[tuple[int, ...]]:
        return [h for h in self.homs if any(h)]


def _commutative(Q: FiniteTarget) -> bool:
    if Q.kind == "cyclic":
        return True
    t = Q.table
    return all(t[x][y] == t[y][x] for x in range(Q.order) for y in range(x))


def _abelianized(r: Word, rank: int) -> Word:
    out: list[int] = []
    for g in range(rank):
        e = exponent_sum(r, g)
        out.extend([g + 1] * e if e > 0 else [-(g + 1)] * (-e))
    return tuple(out)


class _HomSearch:
    """Backtracking over generator images.  A relator with exactly one
    unassigned generator, occurring once, determines that generator."""

    def __init__(self, P: Presentation, Q: FiniteTarget):
        self.Q = Q
        self.n = P.rank
        rels = [tuple(r) for r in P.relators]
        if _commutative(Q):
            # only exponent sums matter in an abelian target
            rels = [w for w in (_abelianized(r, P.rank) for r in rels) if w]
        self.rels = rels
        self.rels_of: list[list[int]] = [[] for _ in range(self.n)]
        self.gens_of: list[tuple[int, ...]] = []
        self.solve: list[dict[int, tuple[int, Word]]] = []
        for k, r in enumerate(self.rels):
            gens = sorted({abs(x) - 1 for x in r})
            self.gens_of.append(tuple(gens))
            for g in gens:
                self.rels_of[g].append(k)
            count = {g: 0 for g in gens}
            for x in r:
                count[abs(x) - 1] += 1
            sol = {}
            for g in gens:
                if count[g] == 1:
                    i = next(i for i, x in enumerate(r) if abs(x) - 1 == g)
                    rot = r[i:] + r[:i]
                    sol[g] = (1 if rot[0] > 0 else -1, rot[1:])
            self.solve.append(sol)

    def evaluate(self, w, img) -> int:
        t, inv = self.Q.table, self.Q.inverses
        x = 0
        for a in w:
            y = img[a - 1] if a > 0 else inv[img[-a - 1]]
            x = t[x][y]
        return x

    def domain(self, h: int, k: int, img: list[int]) -> list[int]:
        """Values of ``h`` satisfying relator ``k``, all other generators fixed."""
        out = []
        for v in range(self.Q.order):
            img[h] = v
            if self.evaluate(self.rels[k], img) == 0:
                out.append(v)
        img[h] = -1
        return out

    def run(self, budget: Budget) -> tuple[list[tuple[int, ...]], bool, int]:
        n, Q = self.n, self.Q
        img = [-1] * n
        unk = [len(g) for g in self.gens_of]
        found: list[tuple[int, ...]] = []
        nodes = 0

        def assign(g0: int, v0: int, trail: list[int]) -> bool:
            todo = [(g0, v0)]
            while todo:
                g, v = todo.pop()
                if img[g] != -1:
                    if img[g] != v:
                        return False
                    continue
                img[g] = v
                trail.append(g)
                for k in self.rels_of[g]:
                    unk[k] -= 1
                for k in self.rels_of[g]:
                    if unk[k] == 0:
                        if self.evaluate(self.rels[k], img) != 0:
                            return False
                    elif unk[k] == 1:
                        h = next(h for h in self.gens_of[k] if img[h] == -1)
                        if h in self.solve[k]:
                            e, rest = self.solve[k][h]
                            val = self.evaluate(rest, img)
                            todo.append((h, Q.inverses[val] if e == 1 else val))
                        else:
                            vals = self.domain(h, k, img)
                            if not vals:
                                return False
                            if len(vals) == 1:
                                todo.append((h, vals[0]))
            return True

        def undo(trail):
            for g in reversed(trail):
                img[g] = -1
                for k in self.rels_of[g]:
                    unk[k] += 1

        def choose() -> tuple[int, Sequence[int]]:
            # a generator pinned by a relator with no other unknowns first
            best_dom = None
            for k in range(len(self.rels)):
                if unk[k] == 1:
                    h = next(h for h in self.gens_of[k] if img[h] == -1)
                    dom = self.domain(h, k, img)
                    if best_dom is None or len(dom) < len(best_dom[1]):
                        best_dom = (h, dom)
            if best_dom is not None:
                return best_dom
            best, best_score = -1, -1.0
            for g in range(n):
                if img[g] != -1:
                    continue
                score = sum(1.0 / unk[k] for k in self.rels_of[g])
                if score > best_score:
                    best, best_score = g, score
            return best, range(Q.order)

        def rec():
            nonlocal nodes
            nodes += 1
            budget.spend(1, "homomorphism search")
            g, values = choose()
            if g == -1:
                found.append(tuple(img))
                return
            for v in values:
                trail: list[int] = []
                if assign(g, v, trail):
                    rec()
                undo(trail)

        complete = True
        try:
            rec()
        except Inconclusive:
            complete = False
        return found, complete, nodes


def enumerate_homs(P: Presentation, Q: FiniteTarget, watched: Sequence[Word] = (),
                   budget: Budget | int | None = None) -> HomReport:
    """All homomorphisms ``P -> Q`` (complete unless the budget runs out)."""
    s = _HomSearch(P, Q)
    homs, complete, nodes = s.run(as_budget(budget))
    homs = sorted(homs)
    images = tuple(tuple(Q.evaluate(w, h) for w in watched) for h in homs)
    return HomReport(P.name, Q.name, Q.order, tuple(homs), images, complete, nodes)


def enumerate_homs_naive(P: Presentation, Q: FiniteTarget) -> list[tuple[int, ...]]:
    """Reference enumeration over all ``|Q|^rank`` image tuples."""
    out = []
    for img in product(range(Q.order), repeat=P.rank):
        if all(Q.evaluate(r, img) == 0 for r in P.relators):
            out.append(tuple(img))
    return out


# ---------------------------------------------------------------------------
# low-index subgroups via coset tables


@dataclass(frozen=True)
class CosetTable:
    """Action of the generators on the cosets ``0..index-1`` of a subgroup
    (coset ``0``); ``rows[c][g]`` is ``c`` times generator ``g``."""

    index: int
    rows: tuple[tuple[int, ...], ...]

    def act(self, c: int, w: Sequence[int]) -> int:
        for x in w:
            if x > 0:
                c = self.rows[c][x - 1]
            else:
                c = next(d for d in range(self.index) if self.rows[d][-x - 1] == c)
        return c

    def contains(self, w: Sequence[int]) -> bool:
        return self.act(0, w) == 0


@dataclass(frozen=True)
class LowIndexResult:
    max_index: int
    subgroups: tuple[CosetTable, ...]  # one per conjugacy class, proper subgroups only
    complete: bool
    nodes: int
    method: str = "cosets"

    def by_index(self, k: int) -> list[CosetTable]:
        return [s for s in self.subgroups if s.index == k]


def _standardize(rows: Sequence[Sequence[int]], base: int) -> tuple[tuple[int, ...], ...]:
    """Renumber cosets in order of first appearance scanning from ``base``."""
    order = {base: 0}
    queue = [base]
    i = 0
    while i < len(queue):
        c = queue[i]
        i += 1
        for d in rows[c]:
            if d not in order:
                order[d] = len(queue)
                queue.append(d)
    out = [None] * len(queue)
    for c, k in order.items():
        out[k] = tuple(order[d] for d in rows[c])
    return tuple(out)


class _CosetSearch:
    """Sims-style backtracking over partial coset tables: define the first
    undefined entry (row-major), then deduce entries by scanning relator
    cycles through each new entry."""

    def __init__(self, P: Presentation, max_index: int):
        self.k = P.rank
        self.N = max_index
        rels = [tuple(self.col(x) for x in r) for r in P.relators]
        rots: set[tuple[int, ...]] = set()
        for r in rels:
            inv = tuple(x ^ 1 for x in reversed(r))
            for w in (r, inv):
                rots.update(w[i:] + w[:i] for i in range(len(w)))
        self.through: list[list[tuple[int, ...]]] = [[] for _ in range(2 * self.k)]
        for w in sorted(rots):
            self.through[w[0]].append(w)

    @staticmethod
    def col(x: int) -> int:
        return 2 * (abs(x) - 1) + (1 if x < 0 else 0)

    @staticmethod
    def scan(T, c: int, r: tuple[int, ...]):
        """``True`` if consistent, ``False`` on a contradiction, or a deduced
        entry ``(f, x, b)``."""
        f, i, L = c, 0, len(r)
        while i < L and T[f][r[i]] != -1:
            f = T[f][r[i]]
            i += 1
        if i == L:
            return f == c
        b, j = c, L
        while j > i and T[b][r[j - 1] ^ 1] != -1:
            b = T[b][r[j - 1] ^ 1]
            j -= 1
        if j == i:
            return f == b
        if j == i + 1:
            if T[b][r[i] ^ 1] != -1:
                return False
            return (f, r[i], b)
        return True

    def deduce(self, T: list[list[int]], queue: list[tuple[int, int]]) -> bool:
        while queue:
            c, x = queue.pop()
            for start, col in ((c, x), (T[c][x], x ^ 1)):
                for r in self.through[col]:
                    got = self.scan(T, start, r)
                    if got is True:
                        continue
                    if got is False:
                        return False
                    f, y, b = got
                    T[f][y] = b
                    T[b][y ^ 1] = f
                    queue.append((f, y))
        return True

    def run(self, budget: Budget):
        width = 2 * self.k
        found: list[tuple[tuple[int, ...], ...]] = []
        nodes = 0

        def rec(T, n):
            nonlocal nodes
            nodes += 1
            budget.spend(1, "coset table search")
            slot = next(((c, x) for c in range(n) for x in range(width) if T[c][x] == -1), None)
            if slot is None:
                found.append(tuple(tuple(T[c][2 * g] for g in range(self.k)) for c in range(n)))
                return
            c, x = slot
            for d in range(min(n + 1, self.N)):
                if d < n and T[d][x ^ 1] != -1:
                    continue
                U = [row[:] for row in T]
                m = n
                if d == n:
                    U.append([-1] * width)
                    m = n + 1
                U[c][x] = d
                U[d][x ^ 1] = c
                if self.deduce(U, [(c, x)]):
                    rec(U, m)

        complete = True
        try:
            rec([[-1] * width], 1)
        except Inconclusive:
            complete = False
        return found, complete, nodes


def _permutation_tables(P: Presentation, max_index: int, budget: Budget) -> tuple[list, bool, int]:
    """Transitive actions on ``0..k-1`` for ``k <= max_index``, read off the
    homomorphisms into ``S_k``; each is the coset table of a point stabilizer."""
    tables, complete, nodes = [], True, 0
    for k in range(2, max_index + 1):
        Sk = symmetric(k)
        homs, ok, used = _HomSearch(P, Sk).run(budget)
        complete &= ok
        nodes += used
        for h in homs:
            perms = [Sk.labels[v] for v in h]
            rows = tuple(tuple(p[c] for p in perms) for c in range(k))
            if len(_standardize(rows, 0)) == k:  # transitive
                tables.append(rows)
    return tables, complete, nodes


def low_index_subgroups(P: Presentation, max_index: int, budget: Budget | int | None = None,
                        include_whole: bool = False, method: str = "permutations") -> LowIndexResult:
    """Subgroups of index ``<= max_index`` up to conjugacy, as coset tables.

    ``method="permutations"`` enumerates transitive permutation
    representations with the propagated homomorphism search;
    ``method="cosets"`` runs the partial coset-table backtrack.  Both are
    complete searches and return the same classes.
    """
    if max_index < 1:
        raise ValueError("max_index must be at least 1")
    bud = as_budget(budget)
    if method == "cosets":
        tables, complete, nodes = _CosetSearch(P, max_index).run(bud)
    elif method == "permutations":
        tables, complete, nodes = _permutation_tables(P, max_index, bud)
        tables.append(((0,) * P.rank,))
    else:
        raise ValueError(f"unknown method {method!r}")
    classes: dict = {}
    for rows in tables:
        n = len(rows)
        if n == 1 and not include_whole:
            continue
        canon = min(_standardize(rows, base) for base in range(n))
        classes.setdefault(canon, CosetTable(n, _standardize(rows, 0)))
    subs = sorted(classes.values(), key=lambda t: (t.index, t.rows))
    return LowIndexResult(max_index, tuple(subs), complete, nodes, method)


def count_subgroups(P: Presentation, index: int, budget: Budget | int | None = None) -> int:
    """Number of subgroups of exactly this index (not up to conjugacy)."""
    s = _CosetSearch(P, index)
    tables, complete, _ = s.run(as_budget(budget))
    if not complete:
        raise Inconclusive("coset table search", as_budget(budget).limit)
    return sum(1 for t in tables if len(t) == index)


# ---------------------------------------------------------------------------
# certificates


class Status(Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    PARTIAL = "PARTIAL"


def targets_up_to(order_bound: int, symmetric_groups: bool = True) -> list[FiniteTarget]:
    out = [cyclic(m) for m in range(2, order_bound + 1)]
    if symmetric_groups:
        k = 3
        while factorial(k) <= order_bound:
            out.append(symmetric(k))
            k += 1
    return out


@dataclass(frozen=True)
class QuotientCertificate:
    status: Status
    presentation: str
    abelianization: tuple[int, ...]
    reports: tuple[HomReport, ...]
    low_index: LowIndexResult | None
    witness: str = ""
    notes: tuple[str, ...] = ()

    def inventory(self) -> list[str]:
        lines = [f"abelianization {list(self.abelianization)}"]
        for r in self.reports:
            lines.append(f"{r.target}: {r.count} homomorphisms, {len(r.nontrivial())} nontrivial"
                         + ("" if r.complete else " (incomplete)"))
        if self.low_index is not None:
            li = self.low_index
            lines.append(f"index <= {li.max_index}: {len(li.subgroups)} proper subgroups up to conjugacy"
                         + ("" if li.complete else " (incomplete)"))
        return lines


def _hom_job(args):
    P, Q, watched, budget = args
    return enumerate_homs(P, Q, watched, budget=budget)


def _hom_reports(P, targets, watched, budget, jobs: int) -> list[HomReport]:
    work = [(P, Q, tuple(watched), budget) for Q in targets]
    if jobs <= 1 or len(work) <= 1:
        return [_hom_job(w) for w in work]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_hom_job, work))


def certify_no_finite_quotients(P: Presentation, order_bound: int = 6, targets: Sequence[FiniteTarget] | None = None,
                                max_index: int = 3, budget: int | None = None, jobs: int = 1) -> QuotientCertificate:
    """Bounded search for nontrivial finite quotients.

    PASS means none was found within the stated inventory; it is an
    empirical certificate, not a proof.
    """
    ab = tuple(abelianization(P))
    tlist = list(targets) if targets is not None else targets_up_to(order_bound)
    notes: list[str] = []
    reports = []
    witness = ""
    for Q, rep in zip(tlist, _hom_reports(P, tlist, (), budget, jobs)):
        reports.append(rep)
        if rep.nontrivial() and not witness:
            h = rep.nontrivial()[0]
            witness = f"{Q.name}: " + ", ".join(f"{g} -> {v}" for g, v in zip(P.generators, h))
    li = low_index_subgroups(P, max_index, budget=budget) if max_index >= 2 else None
    if li is not None and li.subgroups and not witness:
        sub = li.subgroups[0]
        witness = f"subgroup of index {sub.index}: coset table {sub.rows}"
    if ab and not witness:
        witness = f"abelianization {list(ab)}"
    incomplete = any(not r.complete for r in reports) or (li is not None and not li.complete)
    if witness:
        status = Status.FAIL
    elif incomplete:
        status = Status.PARTIAL
        notes.append("some search ran out of budget")
    else:
        status = Status.PASS
        notes.append(f"no nontrivial quotient among {', '.join(Q.name for Q in tlist)}; "
                     f"no proper subgroup of index <= {max_index}")
    return QuotientCertificate(status, P.name, ab, tuple(reports), li, witness, tuple(notes))


@dataclass(frozen=True)
class DeadElementReport:
    status: Status
    word: Word
    nontrivial: Verdict | None
    reports: tuple[HomReport, ...]
    survivors: tuple[str, ...]  # targets where the word has a nontrivial image
    notes: tuple[str, ...] = ()


def verify_dead_element(P: Presentation, w: Word, order_bound: int = 8, oracle=None,
                        targets: Sequence[FiniteTarget] | None = None, budget: int | None = None,
                        jobs: int = 1) -> DeadElementReport:
    """Check that ``w`` is nontrivial yet dies in every homomorphism found."""
    notes = []
    if not w:
        return DeadElementReport(Status.PASS, (), None, (), (), ("w is the empty word",))
    verdict = oracle.equal(w, (), budget) if oracle is not None else None
    tlist = list(targets) if targets is not None else targets_up_to(order_bound)
    reports = tuple(_hom_reports(P, tlist, [tuple(w)], budget, jobs))
    survivors = tuple(r.target for r in reports if any(img[0] for img in r.watched))
    complete = all(r.complete for r in reports)
    if survivors or verdict is Verdict.EQUAL:
        status = Status.FAIL
        if verdict is Verdict.EQUAL:
            notes.append("w is trivial in the group")
    elif not complete or verdict is not Verdict.NOT_EQUAL:
        status = Status.PARTIAL
        if verdict is not Verdict.NOT_EQUAL:
            notes.append("nontriviality of w not verified")
    else:
        status = Status.PASS
    return DeadElementReport(status, tuple(w), verdict, reports, survivors, tuple(notes))


@dataclass(frozen=True)
class HopfWitness:
    homomorphism: bool
    surjective: bool
    kernel_nontrivial: bool
    kernel_killed: bool

    @property
    def non_hopfian(self) -> bool:
        return self.homomorphism and self.surjective and self.kernel_nontrivial and self.kernel_killed


def hopf_witness(phi: GeneratorMap, preimages: dict[int, Word], kernel_word: Word, oracle,
                 budget: int | None = None) -> HopfWitness:
    """Executable non-Hopfian certificate for a self-map ``phi``:
    ``phi(preimages[g]) = g`` for every generator ``g``, ``kernel_word != 1``
    and ``phi(kernel_word) = 1``."""
    hom = phi.verify(oracle).verified or not phi.source.relators
    onto = all(oracle.equal(phi(preimages[g]), (g + 1,), budget) is Verdict.EQUAL for g in range(phi.source.rank))
    nontriv = oracle.equal(kernel_word, (), budget) is Verdict.NOT_EQUAL
    killed = oracle.equal(phi(kernel_word), (), budget) is Verdict.EQUAL
    return HopfWitness(hom, onto, nontriv, killed)


__all__ = [
    "smith_normal_form", "relator_matrix", "abelianization",
    "HomReport", "enumerate_homs", "enumerate_homs_naive",
    "CosetTable", "LowIndexResult", "low_index_subgroups", "count_subgroups",
    "Status", "targets_up_to", "QuotientCertificate", "certify_no_finite_quotients",
    "DeadElementReport", "verify_dead_element", "HopfWitness", "hopf_witness",
    "default_targets",
]
