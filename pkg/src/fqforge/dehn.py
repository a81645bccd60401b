"""Area and diameter estimates for null-homotopic words.

A filling of ``W`` is a list of factors ``(x_i, r_i, e_i)`` with
``W = prod x_i r_i^e_i x_i^-1`` after free reduction.  Its area is the number
of factors and its diameter is the longest conjugator ``|x_i|``; the longest
intermediate word met while replaying is reported alongside.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Mapping, Sequence

from .gog import Edge, GogError, GraphOfGroups, flatten_gog
from .oracles import GroupOracle, Verdict, default_budget
from .presentations import (
    Presentation,
    Word,
    cyclic_canonical,
    cyclic_reduce,
    exponent_sum,
    free_reduce,
    inverse,
    power,
    rotations,
    substitute,
)
from .quotients import smith_normal_form


@dataclass(frozen=True)
class Factor:
    conjugator: Word
    relator: int
    sign: int

    def word(self, relators: Sequence[Word]) -> Word:
        x = self.conjugator
        return free_reduce(x + power(relators[self.relator], self.sign) + inverse(x))


@dataclass(frozen=True)
class AreaCertificate:
    presentation: Presentation
    word: Word
    factors: tuple[Factor, ...]
    length_cap: int | None = None  # intermediate-length cap of the search, if any
    method: str = "search"

    @property
    def area(self) -> int:
        return len(self.factors)

    @property
    def diameter(self) -> int:
        return max((len(f.conjugator) for f in self.factors), default=0)

    def replay(self) -> list[Word]:
        """Intermediate words from ``W`` down to the empty word."""
        rels = self.presentation.relators
        w = free_reduce(self.word)
        trail = [w]
        for f in self.factors:
            w = free_reduce(inverse(f.word(rels)) + w)
            trail.append(w)
        return trail

    @property
    def max_intermediate(self) -> int:
        return max(len(w) for w in self.replay())

    def verify(self) -> bool:
        return self.replay()[-1] == ()


class AreaStatus(Enum):
    FILLED = "FILLED"
    NOT_NULLHOMOTOPIC = "NOT_NULLHOMOTOPIC"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class AreaResult:
    status: AreaStatus
    word: Word
    certificate: AreaCertificate | None = None
    reason: str = ""
    explored: int = 0

    @property
    def area(self) -> int | None:
        return self.certificate.area if self.certificate else None


# ---------------------------------------------------------------------------
# word bookkeeping: W = (prod of factors) * c ws c^-1


def _rotate(ws: Word, c: Word, k: int) -> tuple[Word, Word]:
    if not ws or k % len(ws) == 0:
        return ws, c
    k %= len(ws)
    alpha, beta = ws[:k], ws[k:]
    via_alpha, via_beta = free_reduce(c + alpha), free_reduce(c + inverse(beta))
    return beta + alpha, (via_alpha if len(via_alpha) <= len(via_beta) else via_beta)


def _replace_prefix(ws: Word, c: Word, n: int, q: Word, sub: Sequence[Factor]):
    """``ws = p u`` with ``|p| = n`` and ``p q^-1 = prod(sub)``; returns the
    next ``(ws, c)`` and the new global factors."""
    new = [Factor(free_reduce(c + f.conjugator), f.relator, f.sign) for f in sub]
    core, u = cyclic_reduce(q + ws[n:])
    return core, free_reduce(c + u), new


def _product(factors: Sequence[Factor], relators: Sequence[Word]) -> Word:
    out: list[int] = []
    for f in factors:
        out.extend(f.word(relators))
    return free_reduce(out)


# ---------------------------------------------------------------------------
# invariants that prove a word nontrivial


def _abelian_obstruction(p: Presentation, w: Word) -> bool:
    """True if the exponent-sum vector of ``w`` is outside the relator lattice."""
    v = [exponent_sum(w, g) for g in range(p.rank)]
    if not any(v):
        return False
    if not p.relators:
        return True
    M = [[exponent_sum(r, g) for g in range(p.rank)] for r in p.relators]
    D, _, V = smith_normal_form(M)
    z = [sum(v[i] * V[i][j] for i in range(p.rank)) for j in range(p.rank)]
    for j in range(p.rank):
        d = D[j][j] if j < len(D) else 0
        if (d == 0 and z[j] != 0) or (d and z[j] % d):
            return True
    return False


def _moves(p: Presentation) -> dict[Word, list[tuple[Word, tuple[Factor, ...]]]]:
    """Subword replacements ``p -> q`` with ``p q^-1`` a cyclic conjugate of a
    relator or its inverse, keyed by ``p`` (including the empty prefix)."""
    out: dict[Word, list[tuple[Word, tuple[Factor, ...]]]] = {}
    seen = set()
    for i, r in enumerate(p.relators):
        for s in (1, -1):
            R = power(r, s)
            for k in range(len(R)):
                rho = R[k:] + R[:k]
                sub = (Factor(free_reduce(inverse(R[:k])), i, s),)
                for j in range(len(rho) + 1):
                    a, b = rho[:j], inverse(rho[j:])
                    if (a, b) in seen:
                        continue
                    seen.add((a, b))
                    out.setdefault(a, []).append((b, sub))
    return out


def min_area(p: Presentation, w: Sequence[int], budget: int | None = None,
             oracle: GroupOracle | None = None, length_cap: int | None = None,
             max_area: int | None = None) -> AreaResult:
    """Least number of relator applications filling ``w``.

    Breadth-first over cyclic words; a move replaces a cyclic subword ``p`` by
    ``q`` where ``p q^-1`` is a cyclic conjugate of a relator or its inverse.
    Intermediate words are capped at ``|w| + max relator length`` unless
    ``length_cap`` says otherwise, and the cap is recorded in the certificate.
    """
    W = free_reduce(w)
    limit = default_budget() if budget is None else int(budget)
    if not W:
        return AreaResult(AreaStatus.FILLED, W, AreaCertificate(p, W, (), 0))
    if not p.relators:
        return AreaResult(AreaStatus.NOT_NULLHOMOTOPIC, W, reason="freely nontrivial and there are no relators")
    if _abelian_obstruction(p, W):
        return AreaResult(AreaStatus.NOT_NULLHOMOTOPIC, W, reason="nonzero image in the abelianization")
    if oracle is not None:
        v = oracle.equal(W, (), limit)
        if v is Verdict.NOT_EQUAL:
            return AreaResult(AreaStatus.NOT_NULLHOMOTOPIC, W, reason=f"{oracle.kind} equality oracle")
    longest = max(len(r) for r in p.relators)
    cap = length_cap if length_cap is not None else len(W) + longest
    moves = _moves(p)
    ws0, c0 = cyclic_reduce(W)
    # node: (ws, c, parent, new factors)
    nodes: list[tuple[Word, Word, int, tuple[Factor, ...]]] = [(ws0, c0, -1, ())]
    seen = {cyclic_canonical(ws0)}
    frontier = [0]
    area = 0
    explored = 0
    while frontier:
        if max_area is not None and area >= max_area:
            break
        area += 1
        nxt: list[int] = []
        for nid in frontier:
            ws, c, _, _ = nodes[nid]
            for k in range(max(len(ws), 1)):
                rws, rc = _rotate(ws, c, k)
                for j in range(min(len(rws), longest) + 1):
                    for q, sub in moves.get(rws[:j], ()):
                        explored += 1
                        if explored > limit:
                            return AreaResult(AreaStatus.INCONCLUSIVE, W,
                                              reason=f"search budget of {limit} moves exhausted at area {area}",
                                              explored=explored)
                        core, nc, new = _replace_prefix(rws, rc, j, q, sub)
                        if len(core) > cap:
                            continue
                        key = cyclic_canonical(core)
                        if key in seen:
                            continue
                        seen.add(key)
                        nodes.append((core, nc, nid, tuple(new)))
                        if not core:
                            cert = AreaCertificate(p, W, _chain(nodes, len(nodes) - 1), cap)
                            if not cert.verify():
                                raise AssertionError("area certificate failed to replay")
                            return AreaResult(AreaStatus.FILLED, W, cert, explored=explored)
                        nxt.append(len(nodes) - 1)
        frontier = nxt
    why = f"no filling with intermediate words of length <= {cap}"
    if max_area is not None:
        why += f" and area <= {max_area}"
    return AreaResult(AreaStatus.INCONCLUSIVE, W, reason=why, explored=explored)


def _chain(nodes, nid: int) -> tuple[Factor, ...]:
    parts = []
    while nid > 0:
        parts.append(nodes[nid][3])
        nid = nodes[nid][2]
    return tuple(f for part in reversed(parts) for f in part)


def transfer_certificate(cert: AreaCertificate, w: Sequence[int]) -> AreaCertificate:
    """Certificate for a word conjugate to ``cert.word`` by cyclic reduction
    and rotation, obtained by conjugating every factor."""
    w = free_reduce(w)
    core, u = cyclic_reduce(w)
    base, v = cyclic_reduce(cert.word)
    # cert.word = v base v^-1, base = alpha beta, core = beta alpha = alpha^-1 base alpha
    best = None
    for k, rot in enumerate(rotations(base)):
        if rot != core:
            continue
        # core = alpha^-1 base alpha = beta base beta^-1
        for x in (u + inverse(base[:k]), u + base[k:]):
            x = free_reduce(x + inverse(v))
            fs = tuple(Factor(free_reduce(x + f.conjugator), f.relator, f.sign) for f in cert.factors)
            d = max((len(f.conjugator) for f in fs), default=0)
            if best is None or d < best[0]:
                best = (d, fs)
    if best is None:
        raise ValueError("words are not cyclic conjugates")
    out = AreaCertificate(cert.presentation, w, best[1], cert.length_cap, cert.method)
    if not out.verify():
        raise AssertionError("transferred certificate failed to replay")
    return out


# ---------------------------------------------------------------------------
# sampling


def null_words(p: Presentation, length: int, oracle: GroupOracle, budget: int | None = None) -> Iterator[Word]:
    """Freely reduced words of exactly ``length`` equal to 1, found by a
    depth-first walk pruned by the oracle's geodesic lengths when available."""
    letters = [x for g in range(p.rank) for x in (g + 1, -(g + 1))]
    geo = oracle.geodesic_length(()) is not None

    def rec(prefix: tuple[int, ...]):
        if len(prefix) == length:
            if oracle.equal(prefix, (), budget) is Verdict.EQUAL:
                yield prefix
            return
        if geo and prefix:
            d = oracle.geodesic_length(prefix)
            if d is not None and d > length - len(prefix):
                return
        for x in letters:
            if prefix and prefix[-1] == -x:
                continue
            yield from rec(prefix + (x,))

    if length == 0:
        yield ()
        return
    yield from rec(())


@dataclass
class DehnSample:
    presentation: Presentation
    bound: int
    areas: list[int]  # f(l) for l = 0..bound, over all words of length <= l
    diameters: list[int]
    witnesses: list[Word | None]  # a word attaining f(l) exactly at length l, else None
    counts: list[int]  # null-homotopic freely reduced words of length exactly l
    complete: bool = True
    inconclusive: list[Word] = field(default_factory=list)

    def f(self, n: int) -> int:
        return self.areas[min(n, self.bound)]

    def phi(self, n: int) -> int:
        return self.diameters[min(n, self.bound)]


def dehn_sample(p: Presentation, bound: int = 12, oracle: GroupOracle | None = None,
                budget: int | None = None) -> DehnSample:
    """Largest minimal area and diameter over all null-homotopic words of each
    length up to ``bound``.  Areas are computed once per cyclic class."""
    if oracle is None:
        from .construct import oracle_for

        oracle = oracle_for(p)
    areas, diams, wits, counts = [0], [0], [None], [1]
    cache: dict[Word, AreaResult] = {}
    sample = DehnSample(p, bound, areas, diams, wits, counts)
    for n in range(1, bound + 1):
        top, best_d, witness, count = 0, diams[-1], None, 0
        for w in null_words(p, n, oracle, budget):
            count += 1
            key = cyclic_canonical(w)
            if key not in cache:
                cache[key] = min_area(p, key, budget)
            res = cache[key]
            if res.status is not AreaStatus.FILLED:
                sample.complete = False
                sample.inconclusive.append(w)
                continue
            cert = transfer_certificate(res.certificate, w)
            if cert.area > top or witness is None:
                top, witness = cert.area, w
            best_d = max(best_d, cert.diameter)
        best_a = max(areas[-1], top)
        if top < best_a:
            witness = None
        areas.append(best_a)
        diams.append(best_d)
        wits.append(witness)
        counts.append(count)
    return sample


# ---------------------------------------------------------------------------
# the alternating-length reduction


class NonIsometricError(GogError):
    """Edge data that the alternating reduction cannot use soundly."""


class AlternatingFailure(RuntimeError):
    def __init__(self, word: Word, message: str):
        self.witness = word
        super().__init__(message)


@dataclass(frozen=True)
class AlternatingCertificate:
    certificate: AreaCertificate
    alternating_length: int
    steps: tuple[str, ...]

    @property
    def area(self) -> int:
        return self.certificate.area

    @property
    def diameter(self) -> int:
        return self.certificate.diameter


class _Layout:
    """Letter and relator bookkeeping for a flattened graph of groups."""

    def __init__(self, g: GraphOfGroups, tree: Sequence[int]):
        self.g = g
        self.tree = tuple(tree)
        self.p = flatten_gog(g, tree)
        self.vertex_of: dict[int, str] = {}
        self.stable_of: dict[int, int] = {}
        self.offset: dict[str, int] = {}
        self.rel_offset: dict[str, int] = {}
        gen = rel = 0
        for v in g.vertices:
            self.offset[v.name], self.rel_offset[v.name] = gen, rel
            for _ in v.presentation.generators:
                gen += 1
                self.vertex_of[gen] = v.name
            rel += len(v.presentation.relators)
        self.edge_rel: dict[int, int] = {}
        for k, e in enumerate(g.edges):
            self.edge_rel[k] = rel
            rel += len(e.gens)
            if k not in self.tree:
                gen += 1
                self.stable_of[gen] = k
        self.stable_letter = {k: x for x, k in self.stable_of.items()}

    def lift(self, vname: str, w: Word) -> Word:
        off = self.offset[vname]
        return tuple(x + off if x > 0 else x - off for x in w)

    def local(self, vname: str, w: Word) -> Word:
        off = self.offset[vname]
        return tuple(x - off if x > 0 else x + off for x in w)

    def tokens(self, ws: Word) -> list[tuple[str | None, int, int]]:
        """Maximal single-vertex runs and single stable letters as
        ``(vertex or None, start, length)``."""
        out: list[tuple[str | None, int, int]] = []
        for i, x in enumerate(ws):
            v = self.vertex_of.get(abs(x))
            if v is not None and out and out[-1][0] == v:
                out[-1] = (v, out[-1][1], out[-1][2] + 1)
            else:
                out.append((v, i, 1))
        return out


def _edge_images(e: Edge) -> tuple[tuple[Word, ...], tuple[Word, ...]]:
    return e.into_source, tuple(e.into_target[j] for j in e.bijection())


def check_alternating_preconditions(g: GraphOfGroups) -> None:
    """Raise :class:`NonIsometricError` unless every edge image is a single
    letter of the vertex's standard generating set, which is what makes the
    short edge word ``omega`` exist for each syllable."""
    from .gog import _structural_errors

    errors = _structural_errors(g)
    if errors:
        raise GogError("; ".join(errors))
    for k, e in enumerate(g.edges):
        for end, words, vname in (("source", e.into_source, e.source), ("target", e.into_target, e.target)):
            v = g.vertex(vname)
            standard = {(x + 1,) for x in range(v.presentation.rank)}
            allowed = standard & set(v.generating_set())
            for w in words:
                if free_reduce(w) not in allowed:
                    raise NonIsometricError(
                        f"edge {k}: {end} image {v.presentation.format(w)} is not a generator of vertex "
                        f"{vname}; edge data is not isometric, so the alternating reduction would give "
                        "no sound area bound")
            imgs = [free_reduce(w) for w in words]
            if len(set(imgs)) != len(imgs):
                raise NonIsometricError(f"edge {k}: {end} images repeat a generator")


def alternating_certificate(g: GraphOfGroups, w: Sequence[int],
                            vertex_oracles: Mapping[str, GroupOracle] | None = None,
                            budget: int | None = None) -> AlternatingCertificate:
    """Fill a null-homotopic word of the flattened group by repeatedly
    pushing a short syllable across an edge.

    Each round picks the shortest syllable (leftmost on ties) that equals an
    edge word ``omega`` with ``|omega|`` at most its length, fills
    ``u omega^-1`` inside the vertex group, and spends ``|omega|`` edge
    relators to move ``omega`` to the other side.
    """
    check_alternating_preconditions(g)
    from .construct import oracle_for

    tree = g.tree if g.tree is not None else g.default_tree()
    lay = _Layout(g, tree)
    P = lay.p
    vo = {v.name: (vertex_oracles or {}).get(v.name) or oracle_for(v.presentation) for v in g.vertices}
    W = free_reduce(w)
    ws, c = cyclic_reduce(W)
    factors: list[Factor] = []
    steps: list[str] = []
    m0 = _alternating_length(lay, W)
    while ws:
        toks = lay.tokens(ws)
        if len(toks) > 1 and toks[0][0] is not None and toks[0][0] == toks[-1][0]:
            ws, c = _rotate(ws, c, toks[-1][1])
            continue
        if len(toks) == 1 and toks[0][0] is not None:
            vname = toks[0][0]
            res = min_area(g.vertex(vname).presentation, lay.local(vname, ws), budget, oracle=vo[vname])
            if res.status is not AreaStatus.FILLED:
                raise AlternatingFailure(W, f"syllable {P.format(ws)} is not filled in vertex {vname}: {res.reason}")
            sub = _lift_factors(lay, vname, res.certificate.factors)
            ws, c, new = _replace_prefix(ws, c, len(ws), (), sub)
            factors.extend(new)
            steps.append(f"fill {vname} area {len(new)}")
            continue
        move = _pick(lay, ws, toks, vo, budget)
        if move is None:
            raise AlternatingFailure(W, f"no syllable of {P.format(ws)} equals a short edge word; "
                                        "either the word is nontrivial or the isometry assumption fails")
        ws, c, new, note = _apply(lay, ws, c, move, vo, budget)
        factors.extend(new)
        steps.append(note)
    cert = AreaCertificate(P, W, tuple(factors), None, "alternating")
    if not cert.verify():
        raise AssertionError("alternating certificate failed to replay")
    return AlternatingCertificate(cert, m0, tuple(steps))


def _alternating_length(lay: _Layout, w: Word) -> int:
    """Number of vertex syllables of ``w`` read linearly."""
    return sum(1 for t in lay.tokens(w) if t[0] is not None)


def _lift_factors(lay: _Layout, vname: str, fs: Sequence[Factor]) -> list[Factor]:
    return [Factor(lay.lift(vname, f.conjugator), f.relator + lay.rel_offset[vname], f.sign) for f in fs]


def _find_omega(images: Sequence[Word], u: Word, oracle: GroupOracle, budget) -> Word | None:
    from .metrics import reduced_words

    for n in range(len(u) + 1):
        for om in reduced_words(len(images), n):
            if oracle.equal(substitute(om, dict(enumerate(images))), u, budget) is Verdict.EQUAL:
                return om
    return None


def _pick(lay: _Layout, ws: Word, toks, vo, budget):
    """Candidate moves ordered by syllable length, then position."""
    g = lay.g
    n = len(toks)
    cands = []
    for i, (v, start, length) in enumerate(toks):
        if v is None:
            continue
        prev, nxt = toks[(i - 1) % n], toks[(i + 1) % n]
        # pinch t^-1 u t or t u t^-1 around this run
        if prev[0] is None and nxt[0] is None and n >= 3:
            a, b = ws[prev[1]], ws[nxt[1]]
            if a == -b:
                k = lay.stable_of[abs(a)]
                e = g.edges[k]
                src, tgt = _edge_images(e)
                if a < 0 and e.source == v:
                    cands.append((length, start, "pinch", k, -1, src, tgt))
                elif a > 0 and e.target == v:
                    cands.append((length, start, "pinch", k, 1, tgt, src))
        for k in lay.tree:
            e = g.edges[k]
            if v not in (e.source, e.target):
                continue
            other = e.target if v == e.source else e.source
            if prev[0] == other or nxt[0] == other:
                src, tgt = _edge_images(e)
                here, there = (src, tgt) if v == e.source else (tgt, src)
                cands.append((length, start, "tree", k, 1 if v == e.source else -1, here, there))
    cands.sort(key=lambda t: (t[0], t[1]))
    for length, start, kind, k, orient, here, there in cands:
        vname = lay.vertex_of[abs(ws[start])]
        u = lay.local(vname, ws[start:start + length])
        om = _find_omega(here, u, vo[vname], budget)
        if om is not None:
            return (start, length, kind, k, orient, here, there, vname, om)
    return None


def _apply(lay: _Layout, ws: Word, c: Word, move, vo, budget):
    start, length, kind, k, orient, here, there, vname, om = move
    P = lay.p
    e = lay.g.edges[k]
    other = (e.target if vname == e.source else e.source) if kind == "tree" else (e.target if orient < 0 else e.source)
    out: list[Factor] = []
    # 1. fill u omega_here^-1 inside the vertex group
    ws, c = _rotate(ws, c, start)
    u = lay.local(vname, ws[:length])
    om_here = substitute(om, dict(enumerate(here)))
    res = min_area(lay.g.vertex(vname).presentation, free_reduce(u + inverse(om_here)), budget, oracle=vo[vname])
    if res.status is not AreaStatus.FILLED:
        raise AlternatingFailure(ws, f"could not fill a syllable against its edge word: {res.reason}")
    sub = _lift_factors(lay, vname, res.certificate.factors)
    lifted_here = lay.lift(vname, om_here)
    ws2 = lifted_here + ws[length:]
    if free_reduce(ws2) != ws2:
        raise AssertionError("edge word merged with its neighbours")
    new = [Factor(free_reduce(c + f.conjugator), f.relator, f.sign) for f in sub]
    out.extend(new)
    ws = ws2
    # 2. move omega to the other side, one edge letter at a time
    pieces = []
    base = lay.edge_rel[k]
    for y in om:
        j = abs(y) - 1
        h = lay.lift(vname, here[j])
        t = lay.lift(other, there[j])
        if kind == "tree":
            p_plus, q_plus = h, t
            sigma = orient
        else:
            s = (lay.stable_letter[k],)
            if orient < 0:  # t^-1 S t -> T
                p_plus, q_plus, sigma = inverse(s) + h + s, t, 1
            else:  # t T t^-1 -> S
                p_plus, q_plus, sigma = s + h + inverse(s), t, -1
        if kind == "tree" or orient < 0:
            elem = Factor((), base + j, sigma)
        else:
            elem = Factor(s, base + j, -1)
        if y > 0:
            pieces.append((p_plus, q_plus, elem))
        else:
            inv = inverse(p_plus)
            pieces.append((inv, inverse(q_plus), Factor(free_reduce(inv + elem.conjugator), elem.relator, -elem.sign)))
    sub = []
    prefix: Word = ()
    for p_i, _, elem in pieces:
        sub.append(Factor(free_reduce(prefix + elem.conjugator), elem.relator, elem.sign))
        prefix = free_reduce(prefix + p_i)
    sub.reverse()
    p_word = free_reduce(tuple(x for p_i, _, _ in pieces for x in p_i))
    q_word = free_reduce(tuple(x for _, q_i, _ in pieces for x in q_i))
    if kind == "pinch":
        ws, c = _rotate(ws, c, len(ws) - 1)
        n = len(lifted_here) + 2
        if not om:
            p_word = ws[:2]
    else:
        n = len(lifted_here)
    if ws[:n] != p_word:
        raise AssertionError("edge transport does not match the current word")
    if _product(sub, P.relators) != free_reduce(p_word + inverse(q_word)):
        raise AssertionError("edge transport factors do not multiply out")
    ws, c, new = _replace_prefix(ws, c, n, q_word, sub)
    out.extend(new)
    note = f"{kind} edge {k}: |u| = {length}, |omega| = {len(om)}"
    return ws, c, out, note


# ---------------------------------------------------------------------------
# composite bounds


@dataclass(frozen=True)
class BoundRow:
    word: Word
    area: int  # alternating certificate
    diameter: int
    min_area: int | None
    area_bound: int
    diameter_bound: int

    @property
    def ok(self) -> bool:
        return (self.area <= self.area_bound and self.diameter <= self.diameter_bound
                and (self.min_area is None or self.min_area <= self.area))


@dataclass
class BoundReport:
    graph: str
    bound: int
    vertex_samples: dict[str, DehnSample]
    rows: list[BoundRow]
    complete: bool
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.complete and not self.violations and not self.failures

    @property
    def violations(self) -> list[BoundRow]:
        return [r for r in self.rows if not r.ok]


def check_composite_bounds(g: GraphOfGroups, bound: int = 8, oracle: GroupOracle | None = None,
                           vertex_oracles: Mapping[str, GroupOracle] | None = None,
                           budget: int | None = None, exact: bool = True) -> BoundReport:
    """Pointwise for every null-homotopic freely reduced ``W`` with
    ``|W| <= bound``: certificate area ``<= n^2 + n max_i f_i(n)``, diameter
    ``<= n + max_i Phi_i(n)``, and (with ``exact``) exhaustive minimal area
    ``<=`` certificate area."""
    from .construct import gog_oracle, identification_oracle

    check_alternating_preconditions(g)
    tree = g.tree if g.tree is not None else g.default_tree()
    P = flatten_gog(g, tree)
    if oracle is None:
        oracle = identification_oracle(g) or gog_oracle(g, dict(vertex_oracles or {}))
    samples = {v.name: dehn_sample(v.presentation, bound, (vertex_oracles or {}).get(v.name), budget)
               for v in g.vertices}
    report = BoundReport(g.name, bound, samples, [], all(s.complete for s in samples.values()))
    cache: dict[Word, AreaResult] = {}
    for n in range(1, bound + 1):
        f = max(s.f(n) for s in samples.values())
        phi = max(s.phi(n) for s in samples.values())
        for w in null_words(P, n, oracle, budget):
            try:
                alt = alternating_certificate(g, w, vertex_oracles, budget)
            except AlternatingFailure as exc:
                report.failures.append(f"{P.format(w)}: {exc}")
                continue
            best = None
            if exact:
                key = cyclic_canonical(w)
                if key not in cache:
                    cache[key] = min_area(P, key, budget)
                res = cache[key]
                if res.status is AreaStatus.FILLED:
                    best = res.certificate.area
                else:
                    report.complete = False
            report.rows.append(BoundRow(w, alt.area, alt.diameter, best, n * n + n * f, n + phi))
    return report
