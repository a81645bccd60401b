"""Graphs of groups: data model, validation and flattening to a presentation."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

from .presentations import Presentation, Word, free_reduce, inverse


class GogError(ValueError):
    """Structural violation in a graph of groups."""


@dataclass(frozen=True)
class Vertex:
    name: str
    presentation: Presentation
    generating: tuple[Word, ...] | None = None  # defaults to the presentation's generators

    def generating_set(self) -> tuple[Word, ...]:
        if self.generating is not None:
            return self.generating
        return tuple((g + 1,) for g in range(self.presentation.rank))


@dataclass(frozen=True)
class Edge:
    """Edge group generated by ``gens``; ``into_source[k]`` and
    ``into_target[phi[k]]`` are the two images of the ``k``-th generator."""

    source: str
    target: str
    gens: tuple[str, ...]
    into_source: tuple[Word, ...]
    into_target: tuple[Word, ...]
    isometric: bool = False
    stable: str | None = None
    phi: tuple[int, ...] | None = None
    phi_reverse: tuple[int, ...] | None = None

    @property
    def is_loop(self) -> bool:
        return self.source == self.target

    def bijection(self) -> tuple[int, ...]:
        return self.phi if self.phi is not None else tuple(range(len(self.gens)))

    def reverse_bijection(self) -> tuple[int, ...]:
        if self.phi_reverse is not None:
            return self.phi_reverse
        fwd = self.bijection()
        back = [0] * len(fwd)
        for k, j in enumerate(fwd):
            back[j] = k
        return tuple(back)

    def pairs(self) -> list[tuple[Word, Word]]:
        phi = self.bijection()
        return [(self.into_source[k], self.into_target[phi[k]]) for k in range(len(self.gens))]


@dataclass(frozen=True)
class GraphOfGroups:
    name: str
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...] = ()
    tree: tuple[int, ...] | None = None  # indices of spanning-tree edges

    def vertex(self, name: str) -> Vertex:
        for v in self.vertices:
            if v.name == name:
                return v
        raise GogError(f"unknown vertex {name!r}")

    def stable_name(self, k: int) -> str:
        return self.edges[k].stable or f"e{k}.t"

    def default_tree(self) -> tuple[int, ...]:
        """Greedy spanning tree in edge order."""
        comp = {v.name: v.name for v in self.vertices}

        def find(x):
            while comp[x] != x:
                x = comp[x]
            return x

        chosen = []
        for k, e in enumerate(self.edges):
            a, b = find(e.source), find(e.target)
            if a != b:
                comp[a] = b
                chosen.append(k)
        return tuple(chosen)


class IsometryStatus(Enum):
    DECLARED = "DECLARED"
    VERIFIED = "VERIFIED"
    REFUTED = "REFUTED"


@dataclass(frozen=True)
class IsometryFlag:
    edge: int
    end: str  # "source" | "target"
    status: IsometryStatus
    radius: int | None = None
    witness: Word | None = None
    certificate: object = field(default=None, compare=False)


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    errors: tuple[str, ...]
    flags: tuple[IsometryFlag, ...]

    def __bool__(self):
        return self.valid


def _structural_errors(g: GraphOfGroups) -> list[str]:
    errors = []
    names = [v.name for v in g.vertices]
    if not names:
        return ["graph has no vertices"]
    if len(set(names)) != len(names):
        errors.append("duplicate vertex names")
    known = set(names)
    for k, e in enumerate(g.edges):
        if e.source not in known or e.target not in known:
            errors.append(f"edge {k}: unknown endpoint")
            continue
        n = len(e.gens)
        if len(e.into_source) != n or len(e.into_target) != n:
            errors.append(f"edge {k}: need one image per edge generator on each end")
            continue
        phi, back = e.bijection(), e.reverse_bijection()
        if sorted(phi) != list(range(n)) or sorted(back) != list(range(n)):
            errors.append(f"edge {k}: phi is not a bijection")
        elif any(back[phi[j]] != j for j in range(n)):
            errors.append(f"edge {k}: phi and its reverse are not mutually inverse")
        for end, words in (("source", e.into_source), ("target", e.into_target)):
            v = g.vertex(e.source if end == "source" else e.target)
            for w in words:
                if any(abs(x) > v.presentation.rank for x in w):
                    errors.append(f"edge {k}: {end} image uses letters outside vertex {v.name}")
            if e.isometric:
                gens = set(v.generating_set())
                for w in words:
                    if free_reduce(w) not in gens:
                        errors.append(f"edge {k}: {end} image {v.presentation.format(w)} is not "
                                      f"in the generating set of {v.name} (isometric flag)")
    # connectivity
    adj: dict[str, set[str]] = {n: set() for n in names}
    for e in g.edges:
        if e.source in adj and e.target in adj:
            adj[e.source].add(e.target)
            adj[e.target].add(e.source)
    seen, todo = {names[0]}, [names[0]]
    while todo:
        for y in adj[todo.pop()]:
            if y not in seen:
                seen.add(y)
                todo.append(y)
    if len(seen) != len(set(names)):
        errors.append("underlying graph is disconnected")
    return errors


def _tree_errors(g: GraphOfGroups, tree: Sequence[int]) -> list[str]:
    if any(not 0 <= k < len(g.edges) for k in tree):
        return ["spanning tree names a missing edge"]
    if len(set(tree)) != len(g.vertices) - 1:
        return [f"spanning tree needs exactly {len(g.vertices) - 1} edges"]
    comp = {v.name: v.name for v in g.vertices}

    def find(x):
        while comp[x] != x:
            x = comp[x]
        return x

    for k in tree:
        e = g.edges[k]
        a, b = find(e.source), find(e.target)
        if a == b:
            return [f"spanning tree contains a cycle at edge {k}"]
        comp[a] = b
    return []


def validate_gog(g: GraphOfGroups, oracles: Mapping[str, object] | None = None, radius: int = 2) -> ValidationReport:
    """Structural checks plus, for vertices with an equality oracle in
    ``oracles``, a bounded isometry check of each edge end on the given radius."""
    errors = _structural_errors(g)
    if g.tree is not None:
        errors.extend(_tree_errors(g, g.tree))
    flags: list[IsometryFlag] = []
    if not errors:
        from .metrics import Embedding, EmbeddingVerdict, check_isometric

        for k, e in enumerate(g.edges):
            for end, words, vname in (("source", e.into_source, e.source), ("target", e.into_target, e.target)):
                o = (oracles or {}).get(vname)
                if o is None or not words:
                    flags.append(IsometryFlag(k, end, IsometryStatus.DECLARED))
                    continue
                v = g.vertex(vname)
                cert = check_isometric(Embedding(words, o, v.generating_set()), radius)
                if cert.verdict is EmbeddingVerdict.ISOMETRIC:
                    flags.append(IsometryFlag(k, end, IsometryStatus.VERIFIED, radius, certificate=cert))
                elif cert.verdict is EmbeddingVerdict.DISTORTED:
                    flags.append(IsometryFlag(k, end, IsometryStatus.REFUTED, radius, cert.witness, cert))
                    if e.isometric:
                        errors.append(f"edge {k}: {end} inclusion is not isometric")
                else:
                    flags.append(IsometryFlag(k, end, IsometryStatus.DECLARED, certificate=cert))
    return ValidationReport(not errors, tuple(errors), tuple(flags))


def flatten_gog(g: GraphOfGroups, spanning_tree: Sequence[int] | None = None, name: str | None = None) -> Presentation:
    """Presentation of the fundamental group.

    With several vertices, generators are namespaced ``<vertex>.<gen>``.
    Tree edges add relators identifying the two images; every other edge adds
    a stable letter ``t`` with relators ``t^-1 u t = v``.
    """
    errors = _structural_errors(g)
    if errors:
        raise GogError("; ".join(errors))
    tree = tuple(spanning_tree) if spanning_tree is not None else (g.tree if g.tree is not None else g.default_tree())
    errors = _tree_errors(g, tree)
    if errors:
        raise GogError("; ".join(errors))
    prefix = len(g.vertices) > 1
    gens: list[str] = []
    offset: dict[str, int] = {}
    for v in g.vertices:
        offset[v.name] = len(gens)
        gens.extend(f"{v.name}.{x}" if prefix else x for x in v.presentation.generators)

    def lift(vname: str, w: Word) -> Word:
        off = offset[vname]
        return tuple(x + off if x > 0 else x - off for x in w)

    rels: list[Word] = []
    for v in g.vertices:
        rels.extend(lift(v.name, r) for r in v.presentation.relators)
    for k, e in enumerate(g.edges):
        pairs = [(lift(e.source, u), lift(e.target, w)) for u, w in e.pairs()]
        if k in tree:
            rels.extend(u + inverse(w) for u, w in pairs)
            continue
        gens.append(g.stable_name(k))
        t = len(gens)
        rels.extend((-t,) + u + (t,) + inverse(w) for u, w in pairs)
    if len(set(gens)) != len(gens):
        raise GogError("generator name clash while flattening")
    return Presentation(name or g.name, tuple(gens), tuple(rels))
