"""Embedding pipeline into a group without proper finite-index subgroups,
plus the fixture presentations.

Stages, each a single graph-of-groups flattening:

* ``G0 = G * T(n)`` from one vertex ``G * Z^2`` and two cyclic loop edges;
* ``G1 = G0 * <t>`` from a loop with trivial edge group;
* ``E1``: stable letters ``s_i`` with ``s_i^-1 a_i s_i = g0``;
* ``E2``: stable letters ``tau_i`` with ``tau_i^-1 s_i tau_i = g0``;
* ``E3``: one stable letter ``sigma`` with ``sigma^-1 s_i sigma = tau_i``;
* ``Ghat``: two copies of ``E3`` amalgamated along ``F(x, y)``,
  ``x -> (t, sigma)``, ``y -> (sigma, t)``.

Here ``g = [t_a (ab) t_a^-1, b]`` is a dead element of ``T(n)``,
``g0 = [g, t]``, ``a_0 = t`` and ``a_i = x_i t`` for the generators ``x_i``
of ``G0`` in order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Sequence

from .finite import cyclic
from .gog import Edge, GraphOfGroups, Vertex, flatten_gog
from .oracles import (
    AmalgamOracle,
    CyclicPower,
    CyclicStableMembership,
    FiniteOracle,
    FreeAbelianOracle,
    FreeOracle,
    FreeProductOracle,
    GroupOracle,
    HnnOracle,
    RelabeledOracle,
    Relabeled,
    Retract,
    StableLetter,
    StallingsGraph,
)
from .presentations import (
    GeneratorMap,
    Presentation,
    Word,
    commutator,
    eliminate_generator,
    free_reduce,
    inverse,
    power,
)

T_GENERATORS = ("a", "b", "t_a", "t_b")
FIXTURE_NAMES = ("bs23", "t2", "t3", "wise37", "double-LD")


class ConstructionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# fixture presentations


def bs23() -> Presentation:
    return Presentation.from_strings("BS(2,3)", ["a", "t"], ["t^-1 a^2 t a^-3"])


def t_group(n: int) -> Presentation:
    """``<a, b, t_a, t_b | [a,b], t_a^-1 a t_a = (ab)^n, t_b^-1 b t_b = (ab)^n>``."""
    return Presentation.from_strings(
        f"T({n})", T_GENERATORS,
        ["[a,b]", f"t_a^-1 a t_a (a b)^-{n}", f"t_b^-1 b t_b (a b)^-{n}"])


def dead_element_word(n: int = 2) -> Word:
    """``[t_a (ab) t_a^-1, b]`` over the ``T(n)`` alphabet."""
    return t_group(n).word("[t_a (a b) t_a^-1, b]")


def wise37() -> Presentation:
    p = ["a", "b", "s", "t", "alpha", "beta"]
    return Presentation.from_strings("wise37", p, [
        "alpha [s^-1 (a b) s, b]^-1",
        "[a,b]",
        "[alpha,beta]^2",
        "t^-1 b t (a b)^-2",
        "s^-1 a s (a b)^-2",
    ])


def direct_product_d() -> Presentation:
    """``F(a,b) x F(c,d)``."""
    return Presentation.from_strings("D", ["a", "b", "c", "d"], ["[a,c]", "[a,d]", "[b,c]", "[b,d]"])


def double_ld_gog() -> GraphOfGroups:
    d = direct_product_d()
    into = (d.word("a c"), d.word("b c"))
    return GraphOfGroups("double-LD", (Vertex("left", d), Vertex("right", d)),
                         (Edge("left", "right", ("x", "y"), into, into),))


def double_ld() -> Presentation:
    return flatten_gog(double_ld_gog(), name="double-LD")


def _builders():
    return {"bs23": bs23, "t2": lambda: t_group(2), "t3": lambda: t_group(3),
            "wise37": wise37, "double-LD": double_ld}


def fixture_text(name: str) -> str:
    return resources.files("fqforge").joinpath("data", f"{name}.grp").read_text(encoding="utf-8")


@dataclass(frozen=True)
class Fixtures:
    bs23: Presentation
    t2: Presentation
    t3: Presentation
    wise37: Presentation
    double_ld: Presentation

    def t(self, n: int) -> Presentation:
        return {2: self.t2, 3: self.t3}.get(n) or t_group(n)

    def get(self, name: str) -> Presentation:
        return getattr(self, name.replace("-", "_").replace("LD", "ld"))


def fixtures() -> Fixtures:
    """The frozen fixture presentations, parsed from the packaged files."""
    from .dsl import parse_presentation

    loaded = {name: parse_presentation(fixture_text(name)) for name in FIXTURE_NAMES}
    return Fixtures(loaded["bs23"], loaded["t2"], loaded["t3"], loaded["wise37"], loaded["double-LD"])


# ---------------------------------------------------------------------------
# oracles for fixtures and inputs


def tn_oracle(n: int) -> HnnOracle:
    base = FreeAbelianOracle(["a", "b"])
    ab_n = power((1, 2), n)
    stables = [
        StableLetter("t_a", ((1,),), (ab_n,), CyclicPower(base, (1,)), CyclicPower(base, ab_n)),
        StableLetter("t_b", ((2,),), (ab_n,), CyclicPower(base, (2,)), CyclicPower(base, ab_n)),
    ]
    return HnnOracle(base, stables)


def bs23_oracle() -> HnnOracle:
    base = FreeOracle(["a"])
    return HnnOracle(base, [StableLetter("t", ((1, 1),), ((1, 1, 1),),
                                         CyclicPower(base, (1, 1)), CyclicPower(base, (1, 1, 1)))])


def _is_free_abelian(p: Presentation) -> bool:
    n = p.rank
    want = {frozenset((i, j)) for i in range(n) for j in range(i + 1, n)}
    got = set()
    for r in p.relators:
        if len(r) != 4 or r[0] != -r[2] or r[1] != -r[3] or abs(r[0]) == abs(r[1]):
            return False
        got.add(frozenset((abs(r[0]) - 1, abs(r[1]) - 1)))
    return got == want


def oracle_for(p: Presentation) -> GroupOracle:
    """Equality oracle for free, free abelian, cyclic and fixture presentations."""
    if not p.relators:
        return FreeOracle(p.generators)
    if p.rank == 1:
        m = math.gcd(*(len(r) for r in p.relators))
        return FiniteOracle(p.generators, cyclic(m), (1 % m,))
    if _is_free_abelian(p):
        return FreeAbelianOracle(p.generators)
    if p.generators == T_GENERATORS:
        for n in range(2, 17):
            if p.relators == t_group(n).relators:
                return tn_oracle(n)
    if p.generators == ("a", "t") and p.relators == bs23().relators:
        return bs23_oracle()
    raise ConstructionError(f"no equality oracle available for {p.name} "
                            "(supported: free, free abelian, T(n), BS(2,3))")


# ---------------------------------------------------------------------------
# small graphs of groups used by the area estimates


def free_amalgam_gog() -> GraphOfGroups:
    """``F(a,b) *_{a=c} F(c,d)``."""
    left = Presentation("F(a,b)", ("a", "b"), ())
    right = Presentation("F(c,d)", ("c", "d"), ())
    return GraphOfGroups("F(a,b)*F(c,d)", (Vertex("L", left), Vertex("R", right)),
                         (Edge("L", "R", ("x",), ((1,),), ((1,),), isometric=True),))


def z2_loop_gog() -> GraphOfGroups:
    """``Z^2`` as ``<a>`` with one loop edge conjugating ``a`` to itself."""
    z = Presentation("Z", ("a",), ())
    return GraphOfGroups("Z2-loop", (Vertex("v", z),),
                         (Edge("v", "v", ("x",), ((1,),), ((1,),), isometric=True, stable="t"),))


def bs23_gog() -> GraphOfGroups:
    """``BS(2,3)`` as a loop over ``<a>`` with edge images ``a^2`` and ``a^3``."""
    z = Presentation("Z", ("a",), ())
    return GraphOfGroups("BS(2,3)", (Vertex("v", z),),
                         (Edge("v", "v", ("x",), ((1, 1),), ((1, 1, 1),), stable="t"),))


def _edge_member(o: GroupOracle, words: Sequence[Word]):
    if isinstance(o, FreeOracle):
        return StallingsGraph(o, words)
    if len(words) == 1:
        return CyclicPower(o, words[0])
    raise ConstructionError(f"no membership oracle for a {len(words)}-generator edge group in {o.kind}")


def gog_oracle(g: GraphOfGroups, vertex_oracles: dict[str, GroupOracle] | None = None) -> GroupOracle:
    """Equality oracle for the flattened group of a one-vertex graph with loops
    or a two-vertex graph with a single edge."""
    vo = {v.name: (vertex_oracles or {}).get(v.name) or oracle_for(v.presentation) for v in g.vertices}
    if len(g.vertices) == 1:
        base = vo[g.vertices[0].name]
        if not g.edges:
            return base
        stables = [StableLetter(g.stable_name(k), e.into_source, tuple(e.into_target[j] for j in e.bijection()),
                                _edge_member(base, e.into_source),
                                _edge_member(base, tuple(e.into_target[j] for j in e.bijection())))
                   for k, e in enumerate(g.edges)]
        return HnnOracle(base, stables)
    if len(g.vertices) == 2 and len(g.edges) == 1 and not g.edges[0].is_loop:
        e = g.edges[0]
        (u, w) = (e.into_source, tuple(e.into_target[j] for j in e.bijection()))
        if e.source != g.vertices[0].name:
            u, w = w, u
        L, R = vo[g.vertices[0].name], vo[g.vertices[1].name]
        return AmalgamOracle(L, R, u, w, _edge_member(L, u), _edge_member(R, w))
    raise ConstructionError("gog_oracle supports one vertex with loops or two vertices with one edge")


def identification_oracle(g: GraphOfGroups) -> RelabeledOracle | None:
    """For free vertex groups glued along single letters, the flattened group is
    free on the classes of identified letters; return that oracle, else ``None``."""
    if any(v.presentation.relators for v in g.vertices) or len(g.vertices) < 1:
        return None
    p = flatten_gog(g)
    if g.tree is None and len(g.edges) != len(g.default_tree()):
        return None
    parent = list(range(p.rank))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for r in p.relators:
        if len(r) != 2 or r[0] < 0 or r[1] > 0:
            return None
        parent[find(r[0] - 1)] = find(-r[1] - 1)
    roots = sorted({find(x) for x in range(p.rank)})
    names = tuple(p.generators[r] for r in roots)
    images = {x: (roots.index(find(x)) + 1,) for x in range(p.rank)}
    return RelabeledOracle(FreeOracle(names), p.generators, images)


# ---------------------------------------------------------------------------
# the pipeline


@dataclass(frozen=True)
class TowerRecord:
    input: Presentation
    n: int
    stages: dict[str, Presentation]
    graphs: dict[str, GraphOfGroups]
    g_word: Word  # dead element of G0, over G1
    g0_word: Word  # [g, t], over G1
    astar: tuple[Word, ...]  # a_0..a_m then g0, over G1
    astar_names: tuple[str, ...]
    s_names: tuple[str, ...]
    tau_names: tuple[str, ...]
    sigma: str = "sigma"
    t: str = "t"
    elimination: dict[int, Word] = field(default_factory=dict)  # doubled alphabet -> Ghat words
    embedding: GeneratorMap | None = None

    @property
    def ghat(self) -> Presentation:
        return self.stages["Ghat"]

    def stage(self, name: str) -> Presentation:
        return self.stages[name]

    def ledger(self) -> list[tuple[str, str]]:
        g1 = self.stages["G1"]
        return [
            ("input", self.input.name),
            ("n", str(self.n)),
            ("g", g1.format(self.g_word)),
            ("g0", g1.format(self.g0_word)),
            ("A*", "; ".join(g1.format(w) for w in self.astar)),
            ("A*-names", " ".join(self.astar_names)),
            ("s", " ".join(self.s_names)),
            ("tau", " ".join(self.tau_names)),
            ("sigma", self.sigma),
            ("p_i", "1"),
            ("embedding", "; ".join(f"{self.input.generators[g]} -> {self.ghat.format(w)}"
                                     for g, w in sorted(self.embedding.images.items()))
             if self.embedding else ""),
        ]


def _check_names(used: set[str], new: Sequence[str]):
    clash = used.intersection(new)
    if clash:
        raise ConstructionError(f"generator names clash with the construction: {sorted(clash)}")
    used.update(new)


def step0_attach(G: Presentation, n: int = 2):
    """``G0 = G * T(n)``, ``G1 = G0 * <t>``, the generating ledger ``A*`` and ``g0``.

    Returns ``(G0, G1, astar, g, g0, graphs)`` with words over ``G1``.
    """
    if n < 2:
        raise ConstructionError("n must be at least 2")
    used = set(G.generators)
    _check_names(used, T_GENERATORS + ("t",))
    k = G.rank
    # vertex G * Z^2
    vgens = G.generators + ("a", "b")
    a, b = k + 1, k + 2
    vertex = Presentation(f"{G.name}*Z2", vgens, G.relators + (commutator((a,), (b,)),))
    ab_n = power((a, b), n)
    attach = GraphOfGroups("G0", (Vertex("v", vertex),), (
        Edge("v", "v", ("x",), ((a,),), (ab_n,), stable="t_a"),
        Edge("v", "v", ("y",), ((b,),), (ab_n,), stable="t_b"),
    ))
    G0 = flatten_gog(attach, name="G0")
    star = GraphOfGroups("G1", (Vertex("v", G0),), (Edge("v", "v", (), (), (), stable="t"),))
    G1 = flatten_gog(star, name="G1")
    t = G1.index("t") + 1
    g = G1.word("[t_a (a b) t_a^-1, b]")
    g0 = commutator(g, (t,))
    a_prime = [(t,)] + [(x + 1, t) for x in range(G0.rank)]
    astar = tuple(a_prime) + (g0,)
    return G0, G1, astar, g, g0, {"G0": attach, "G1": star}


def build_tower(G: Presentation, n: int = 2) -> TowerRecord:
    """Stages up to ``E3`` (``Ghat`` is added by :func:`double_amalgam`)."""
    G0, G1, astar, g, g0, graphs = step0_attach(G, n)
    m = len(astar) - 1
    used = set(G1.generators)
    s_names = tuple(f"s{i}" for i in range(m))
    tau_names = tuple(f"tau{i}" for i in range(m))
    _check_names(used, s_names + tau_names + ("sigma",))

    e1g = GraphOfGroups("E1", (Vertex("v", G1, astar),), tuple(
        Edge("v", "v", ("x",), (astar[i],), (g0,), isometric=True, stable=s_names[i]) for i in range(m)))
    E1 = flatten_gog(e1g, name="E1")
    s_words = tuple((E1.index(s) + 1,) for s in s_names)

    e2gens = astar + s_words
    e2g = GraphOfGroups("E2", (Vertex("v", E1, e2gens),), tuple(
        Edge("v", "v", ("x",), (s_words[i],), (g0,), isometric=True, stable=tau_names[i]) for i in range(m)))
    E2 = flatten_gog(e2g, name="E2")
    tau_words = tuple((E2.index(x) + 1,) for x in tau_names)

    e3gens = e2gens + tau_words
    xs = tuple(f"x{i}" for i in range(m))
    e3g = GraphOfGroups("E3", (Vertex("v", E2, e3gens),), (
        Edge("v", "v", xs, s_words, tau_words, isometric=True, stable="sigma"),))
    E3 = flatten_gog(e3g, name="E3")
    graphs.update({"E1": e1g, "E2": e2g, "E3": e3g})
    names = ("t",) + tuple(f"{G0.generators[x]}t" for x in range(G0.rank)) + ("g0",)
    return TowerRecord(G, n, {"G0": G0, "G1": G1, "E1": E1, "E2": E2, "E3": E3}, graphs,
                       g, g0, astar, names, s_names, tau_names)


def double_amalgam(rec: TowerRecord) -> TowerRecord:
    """Add ``Ghat`` and the verified embedding ``G -> Ghat`` into the left copy."""
    E3 = rec.stages["E3"]
    t, sigma = (E3.index("t") + 1,), (E3.index("sigma") + 1,)
    e3gens = rec.graphs["E3"].vertices[0].generating + (sigma,)
    dg = GraphOfGroups("Ghat", (Vertex("left", E3, e3gens), Vertex("right", E3, e3gens)), (
        Edge("left", "right", ("x", "y"), (t, sigma), (sigma, t), isometric=True),))
    doubled = flatten_gog(dg, name="Ghat")
    # eliminate right.sigma := left.t, then right.t := left.sigma
    p1, m1 = eliminate_generator(doubled, "right.sigma", (doubled.index("left.t") + 1,))
    p2, m2 = eliminate_generator(p1, "right.t", (p1.index("left.sigma") + 1,))
    elim = {g: free_reduce(_sub(m1[g], m2)) for g in range(doubled.rank)}
    ghat = p2
    stages = dict(rec.stages, Ghat=ghat)
    graphs = dict(rec.graphs, Ghat=dg)
    G = rec.input
    emb = GeneratorMap(G, ghat, {g: (ghat.index(f"left.{x}") + 1,) for g, x in enumerate(G.generators)})
    return TowerRecord(G, rec.n, stages, graphs, rec.g_word, rec.g0_word, rec.astar, rec.astar_names,
                       rec.s_names, rec.tau_names, elimination=elim, embedding=emb)


def _sub(w: Word, images: dict[int, Word]) -> Word:
    from .presentations import substitute

    return substitute(w, images)


def construct_ghat(G: Presentation, n: int = 2) -> TowerRecord:
    return double_amalgam(build_tower(G, n))


# ---------------------------------------------------------------------------
# oracle tower


@dataclass
class TowerOracles:
    G: GroupOracle
    T: GroupOracle
    G1: FreeProductOracle
    E1: HnnOracle
    E2: HnnOracle
    E3: HnnOracle
    doubled: AmalgamOracle | None = None
    Ghat: GroupOracle | None = None
    exact: dict[str, str] = field(default_factory=dict)

    def stage(self, name: str) -> GroupOracle:
        return getattr(self, name)


def build_tower_oracle(rec: TowerRecord, base: GroupOracle | None = None) -> TowerOracles:
    """Compose the equality oracles for every stage.

    All membership sub-procedures used here are exact: cyclic power
    membership in free products and HNN bases, retractions for the free
    subgroups generated by the ``s_i`` and ``tau_i``, and Britton-segment
    splitting for the subgroup generated by ``t`` and ``sigma``.
    """
    G = rec.input
    gor = base if base is not None else oracle_for(G)
    if tuple(gor.generators) != G.generators:
        raise ConstructionError("base oracle alphabet differs from the input presentation")
    T = tn_oracle(rec.n)
    G1p = rec.stages["G1"]
    G1 = FreeProductOracle([gor, T, FreeOracle(["t"])], G1p.generators)
    m = len(rec.s_names)
    g0 = rec.g0_word
    E1 = HnnOracle(G1, [StableLetter(rec.s_names[i], (rec.astar[i],), (g0,),
                                     CyclicPower(G1, rec.astar[i]), CyclicPower(G1, g0)) for i in range(m)])
    nE1 = len(E1.generators)
    s_idx = [len(G1.generators) + i for i in range(m)]
    E2 = HnnOracle(E1, [StableLetter(rec.tau_names[i], ((s_idx[i] + 1,),), (g0,),
                                     Retract(E1, [(s_idx[i] + 1,)], {s_idx[i]: (1,)}),
                                     CyclicPower(E1, g0)) for i in range(m)])
    tau_idx = [nE1 + i for i in range(m)]
    s_words = [(i + 1,) for i in s_idx]
    tau_words = [(i + 1,) for i in tau_idx]
    a_sub = Retract(E2, s_words, {s_idx[j]: (j + 1,) for j in range(m)}, level=E1)
    b_sub = Retract(E2, tau_words, {tau_idx[j]: (j + 1,) for j in range(m)})
    E3 = HnnOracle(E2, [StableLetter("sigma", tuple(s_words), tuple(tau_words), a_sub, b_sub)])
    out = TowerOracles(gor, T, G1, E1, E2, E3, exact={
        "G1": "free product normal form", "E1": "Britton reduction, cyclic power membership",
        "E2": "Britton reduction, retraction onto <s_i>, cyclic power membership",
        "E3": "Britton reduction, retractions onto F(s) and F(tau)",
    })
    if "Ghat" in rec.stages:
        t = (G1p.index("t") + 1,)
        sigma = (len(E3.generators),)
        left = CyclicStableMembership(E3, 0, t, a_sub, b_sub)
        right = Relabeled(left, (1, 0))
        doubled = AmalgamOracle(E3, E3, [t, sigma], [sigma, t], left, right,
                                [f"left.{x}" for x in E3.generators] + [f"right.{x}" for x in E3.generators])
        ghat = rec.stages["Ghat"]
        # Ghat's letters back in the doubled alphabet
        names = list(doubled.generators)
        back = {ghat.index(x): (names.index(x) + 1,) for x in ghat.generators}
        out.doubled = doubled
        out.Ghat = RelabeledOracle(doubled, ghat.generators, back)
        out.exact["Ghat"] = "amalgam normal form, exact membership in <t, sigma>"
    return out


def stage_words(rec: TowerRecord, stage: str) -> dict[str, Word]:
    """Named elements of a stage, as words over that stage's alphabet."""
    p = rec.stages[stage]
    out: dict[str, Word] = {}
    if stage == "Ghat":
        for side in ("left", "right"):
            for k, w in enumerate(rec.astar):
                out[f"{side}.{rec.astar_names[k]}"] = _to_ghat(rec, side, w)
            for x in rec.s_names + rec.tau_names + ("sigma", "t"):
                out[f"{side}.{x}"] = _to_ghat(rec, side, (rec.stages["E3"].index(x) + 1,))
        return out
    for k, w in enumerate(rec.astar):
        out[rec.astar_names[k]] = w
    for x in p.generators:
        out.setdefault(x, (p.index(x) + 1,))
    out["g"] = rec.g_word
    return out


def _to_ghat(rec: TowerRecord, side: str, w: Word) -> Word:
    """Word over ``E3`` placed in one copy of ``Ghat``."""
    E3 = rec.stages["E3"]
    off = 0 if side == "left" else E3.rank
    lifted = tuple(x + off if x > 0 else x - off for x in w)
    return _sub(lifted, rec.elimination) if rec.elimination else lifted


def conjugacy_witnesses(rec: TowerRecord) -> list[tuple[str, Word, Word, Word]]:
    """For each generator ``h`` of the ledger generating set of ``Ghat``
    (a_i, s_i, tau_i, sigma on both sides): ``(name, h, c, g0)`` with
    ``h = c g0 c^-1`` where ``g0`` is the copy of the dead commutator on one side."""
    words = stage_words(rec, "Ghat")
    out = []
    m = len(rec.s_names)
    for side, other in (("left", "right"), ("right", "left")):
        g0 = words[f"{side}.g0"]
        for i in range(m):
            a, s, tau = words[f"{side}.{rec.astar_names[i]}"], words[f"{side}.s{i}"], words[f"{side}.tau{i}"]
            sigma = words[f"{side}.sigma"]
            out.append((f"{side}.{rec.astar_names[i]}", a, s, g0))
            out.append((f"{side}.s{i}", s, tau, g0))
            out.append((f"{side}.tau{i}", tau, free_reduce(inverse(sigma) + tau), g0))
        # sigma on this side is t = a_0 on the other side
        out.append((f"{side}.sigma", words[f"{side}.sigma"], words[f"{other}.s0"], words[f"{other}.g0"]))
    return out


@dataclass(frozen=True)
class AuditItem:
    name: str
    ok: bool
    detail: str = ""


def audit(rec: TowerRecord, oracles: TowerOracles | None = None, budget: int | None = None) -> list[AuditItem]:
    """Cheap structural and oracle checks on a finished pipeline."""
    from .oracles import Member, Verdict

    o = oracles or build_tower_oracle(rec)
    items: list[AuditItem] = []
    st = rec.stages
    nA = st["G0"].rank
    items.append(AuditItem("|A*| = |A| + 2", len(rec.astar) == nA + 2, f"{len(rec.astar)}"))
    items.append(AuditItem("gens(E1) = gens(G1) + |A*| - 1",
                           st["E1"].rank == st["G1"].rank + len(rec.astar) - 1, f"{st['E1'].rank}"))
    if "Ghat" in st:
        items.append(AuditItem("gens(Ghat) = 2 gens(E3) - 2", st["Ghat"].rank == 2 * st["E3"].rank - 2,
                               f"{st['Ghat'].rank}"))
    # every stage relator is trivial in its stage oracle
    for name in ("G1", "E1", "E2", "E3", "Ghat"):
        if name not in st:
            continue
        orc = o.stage(name)
        bad = [k for k, r in enumerate(st[name].relators) if orc.equal(r, (), budget) is not Verdict.EQUAL]
        items.append(AuditItem(f"{name} relators trivial in oracle", not bad, f"failing relators {bad}" if bad else ""))
    g1 = st["G1"]
    items.append(AuditItem("g nontrivial in G1", o.G1.equal(rec.g_word, (), budget) is Verdict.NOT_EQUAL))
    # retraction of E1 onto F(s) is a homomorphism
    fs = Presentation("F(s)", rec.s_names, ())
    E1p = st["E1"]
    rho = GeneratorMap(E1p, fs, {g: ((rec.s_names.index(x) + 1,) if x in rec.s_names else ())
                                 for g, x in enumerate(E1p.generators)}).verify(FreeOracle(rec.s_names))
    items.append(AuditItem("retraction E1 -> F(s) is a homomorphism", rho.verified))
    # membership hypothesis: no power of a_0 in F(s) or F(tau) (spot check)
    tw = (g1.index("t") + 1,)
    sig = o.E3.stables[0]
    hits = [k for k in range(1, 5) for mem in (sig.a_member, sig.b_member)
            if mem.member(power(tw, k), budget).status is Member.YES]
    items.append(AuditItem("t^k avoids F(s) and F(tau) for 1 <= k <= 4", not hits))
    if o.Ghat is not None:
        bad = []
        for name, h, c, g0 in conjugacy_witnesses(rec):
            if o.Ghat.equal(h, c + g0 + inverse(c), budget) is not Verdict.EQUAL:
                bad.append(name)
        items.append(AuditItem("every ledger generator of Ghat is conjugate to g0 on one side", not bad,
                               ", ".join(bad)))
        emb = rec.embedding.verify(o.Ghat)
        items.append(AuditItem("embedding G -> Ghat is a homomorphism", emb.verified or not rec.input.relators))
    return items


def manifest(rec: TowerRecord) -> str:
    """Every stage presentation followed by the ledger, in the text format."""
    from .dsl import Document, format_document

    doc = Document(groups={p.name: p for p in rec.stages.values()}, ledger=rec.ledger())
    return format_document(doc)
