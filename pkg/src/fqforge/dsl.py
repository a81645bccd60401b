"""Text format for presentations, graphs of groups and construction ledgers.

::

    # comment
    group BS(2,3)
    gens a t
    rel t^-1 a^2 t a^-3
    rel u = v = w            # relators u v^-1 and v w^-1

    gog doubled
    vertex v G                  # a group defined earlier in the file
    vertex w H gens a; b a      # explicit generating words
    edge v w gens x into_v a into_w b isometric stable e0.t
    tree 0

    ledger A* t; a t; b t

Each edge lists its generators, then the source images, then the target
images; images are separated by ``;``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .gog import Edge, GraphOfGroups, Vertex
from .presentations import ParseError, Presentation, Word, format_word, inverse, parse_word

KEYWORDS = ("group", "gens", "rel", "gog", "vertex", "edge", "tree", "ledger")


@dataclass
class Document:
    groups: dict[str, Presentation] = field(default_factory=dict)
    gogs: dict[str, GraphOfGroups] = field(default_factory=dict)
    ledger: list[tuple[str, str]] = field(default_factory=list)

    def group(self, name: str | None = None) -> Presentation:
        if name is None:
            if not self.groups:
                raise KeyError("document defines no group")
            return next(iter(self.groups.values()))
        return self.groups[name]


def _words(text: str, alphabet, line: int, column: int) -> tuple[Word, ...]:
    out = []
    for part in text.split(";"):
        if not part.strip():
            continue
        try:
            out.append(parse_word(part, alphabet))
        except ParseError as exc:
            raise ParseError(str(exc).split(" (")[0], column + (exc.position or 0), line) from None
    return tuple(out)


def _relators(text: str, alphabet, line: int, column: int) -> list[Word]:
    sides, pos = [], column
    for part in text.split("="):
        try:
            sides.append(parse_word(part, alphabet))
        except ParseError as exc:
            raise ParseError(str(exc).split(" (")[0], pos + (exc.position or 0), line) from None
        pos += len(part) + 1
    if len(sides) == 1:
        return sides
    return [u + inverse(v) for u, v in zip(sides, sides[1:])]


class _Builder:
    def __init__(self):
        self.doc = Document()
        self.group: list | None = None  # [name, gens, rels, line]
        self.gog: list | None = None  # [name, vertices, edges, tree]

    def close(self):
        if self.group is not None:
            name, gens, rels, line = self.group
            if gens is None:
                raise ParseError(f"group {name} has no gens line", None, line)
            self.doc.groups[name] = Presentation(name, tuple(gens), tuple(rels))
            self.group = None
        if self.gog is not None:
            name, vertices, edges, tree = self.gog
            self.doc.gogs[name] = GraphOfGroups(name, tuple(vertices), tuple(edges), tree)
            self.gog = None


def parse_document(text: str) -> Document:
    b = _Builder()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        stripped = body.lstrip()
        col0 = len(body) - len(stripped)
        key, _, rest = stripped.partition(" ")
        col = col0 + len(key) + 1
        rest_stripped = rest.strip()
        if key not in KEYWORDS:
            raise ParseError(f"unknown keyword {key!r}", col0, lineno)
        if key == "group":
            b.close()
            if not rest_stripped:
                raise ParseError("group needs a name", col, lineno)
            b.group = [rest_stripped, None, [], lineno]
        elif key == "gens":
            if b.group is None:
                raise ParseError("gens outside a group stanza", col0, lineno)
            b.group[1] = rest.split()
        elif key == "rel":
            if b.group is None or b.group[1] is None:
                raise ParseError("rel before gens", col0, lineno)
            b.group[2].extend(_relators(rest, b.group[1], lineno, col))
        elif key == "gog":
            b.close()
            b.gog = [rest_stripped, [], [], None]
        elif key == "vertex":
            if b.gog is None:
                raise ParseError("vertex outside a gog stanza", col0, lineno)
            parts = rest.split(None, 2)
            if len(parts) < 2:
                raise ParseError("vertex needs an id and a group name", col, lineno)
            vid, gname = parts[0], parts[1]
            if gname not in b.doc.groups:
                raise ParseError(f"unknown group {gname!r}", col, lineno)
            p = b.doc.groups[gname]
            generating = None
            if len(parts) == 3:
                kw, _, words = parts[2].partition(" ")
                if kw != "gens":
                    raise ParseError("expected 'gens' after the vertex group", col, lineno)
                generating = _words(words, p.generators, lineno, col)
            b.gog[1].append(Vertex(vid, p, generating))
        elif key == "edge":
            if b.gog is None:
                raise ParseError("edge outside a gog stanza", col0, lineno)
            b.gog[2].append(_parse_edge(rest, b.gog[1], lineno, col))
        elif key == "tree":
            if b.gog is None:
                raise ParseError("tree outside a gog stanza", col0, lineno)
            try:
                b.gog[3] = tuple(int(x) for x in rest.split())
            except ValueError:
                raise ParseError("tree expects edge indices", col, lineno) from None
        elif key == "ledger":
            b.close()
            k, sep, v = rest_stripped.partition(" ")
            b.doc.ledger.append((k, v.strip()))
    b.close()
    return b.doc


def _parse_edge(rest: str, vertices, line: int, col: int) -> Edge:
    toks = rest.split()
    if len(toks) < 3 or toks[2] != "gens":
        raise ParseError("edge syntax: edge <i> <j> gens <ids> into_<i> <words> into_<j> <words>", col, line)
    src, dst = toks[0], toks[1]
    lookup = {v.name: v for v in vertices}
    for v in (src, dst):
        if v not in lookup:
            raise ParseError(f"unknown vertex {v!r}", col, line)
    # split on the into_* / option keywords, keeping word text intact
    sections: list[tuple[str, str]] = []
    current, buf = "gens", []
    for tok in toks[3:]:
        if tok.startswith("into_") or tok in ("isometric", "stable"):
            sections.append((current, " ".join(buf)))
            current, buf = tok, []
        else:
            buf.append(tok)
    sections.append((current, " ".join(buf)))
    gens = tuple(sections[0][1].split())
    intos = [s for s in sections if s[0].startswith("into_")]
    if len(intos) != 2:
        raise ParseError("edge needs exactly two into_ sections", col, line)
    into_src = _words(intos[0][1], lookup[src].presentation.generators, line, col)
    into_dst = _words(intos[1][1], lookup[dst].presentation.generators, line, col)
    isometric = any(s[0] == "isometric" for s in sections)
    stable = next((s[1].strip() for s in sections if s[0] == "stable"), None) or None
    return Edge(src, dst, gens, into_src, into_dst, isometric, stable)


def format_presentation(p: Presentation) -> str:
    lines = [f"group {p.name}", "gens " + " ".join(p.generators)]
    lines.extend("rel " + format_word(r, p.generators) for r in p.relators)
    return "\n".join(lines) + "\n"


def format_gog(g: GraphOfGroups) -> str:
    lines = [f"gog {g.name}"]
    for v in g.vertices:
        line = f"vertex {v.name} {v.presentation.name}"
        if v.generating is not None:
            line += " gens " + "; ".join(format_word(w, v.presentation.generators) for w in v.generating)
        lines.append(line)
    for e in g.edges:
        sp, tp = g.vertex(e.source).presentation, g.vertex(e.target).presentation
        line = (f"edge {e.source} {e.target} gens {' '.join(e.gens)}"
                f" into_{e.source} " + "; ".join(format_word(w, sp.generators) for w in e.into_source)
                + f" into_{e.target} " + "; ".join(format_word(w, tp.generators) for w in e.into_target))
        if e.isometric:
            line += " isometric"
        if e.stable:
            line += f" stable {e.stable}"
        lines.append(line)
    if g.tree is not None:
        lines.append("tree " + " ".join(map(str, g.tree)))
    return "\n".join(lines) + "\n"


def format_document(doc: Document) -> str:
    parts = [format_presentation(p) for p in doc.groups.values()]
    parts.extend(format_gog(g) for g in doc.gogs.values())
    if doc.ledger:
        parts.append("".join(f"ledger {k} {v}\n" for k, v in doc.ledger))
    return "\n".join(parts)


def load(path) -> Document:
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read())


def parse_presentation(text: str) -> Presentation:
    return parse_document(text).group()
