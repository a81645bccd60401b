"""Words, finite presentations and generator maps.

A letter is a nonzero integer: generator ``i`` (0-based) is ``i + 1`` and its
inverse is ``-(i + 1)``.  A word is a tuple of letters.  Generator names live
only in the alphabet of the owning :class:`Presentation`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

Word = tuple[int, ...]

EMPTY: Word = ()


class ParseError(ValueError):
    """Malformed word or presentation text."""

    def __init__(self, message: str, position: int | None = None, line: int | None = None):
        self.position = position
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if position is not None:
            where.append(f"column {position + 1}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class UnknownGeneratorError(ParseError):
    pass


def letter(index: int, sign: int = 1) -> int:
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return sign * (index + 1)


def generator_of(x: int) -> int:
    return abs(x) - 1


def sign_of(x: int) -> int:
    return 1 if x > 0 else -1


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def free_reduce(w: Iterable[int]) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def is_freely_reduced(w: Sequence[int]) -> bool:
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def cyclic_reduce(w: Sequence[int]) -> tuple[Word, Word]:
    """Return ``(core, u)`` with ``w == u core u^-1`` freely and ``core``
    cyclically reduced."""
    w = free_reduce(w)
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return w[i:j + 1], w[:i]


def power(w: Sequence[int], k: int) -> Word:
    if k < 0:
        return tuple(inverse(w)) * (-k)
    return tuple(w) * k


def commutator(u: Sequence[int], v: Sequence[int]) -> Word:
    """``[u, v] = u v u^-1 v^-1``."""
    return tuple(u) + tuple(v) + inverse(u) + inverse(v)


def exponent_sum(w: Sequence[int], index: int) -> int:
    target = index + 1
    return sum(sign_of(x) for x in w if abs(x) == target)


def rotations(w: Sequence[int]) -> list[Word]:
    w = tuple(w)
    return [w[i:] + w[:i] for i in range(len(w))] or [EMPTY]


def cyclic_canonical(w: Sequence[int]) -> Word:
    """Least rotation of the cyclic reduction of ``w``."""
    core, _ = cyclic_reduce(w)
    return min(rotations(core))


def substitute(w: Sequence[int], images: Mapping[int, Sequence[int]]) -> Word:
    """Replace generator ``i`` by ``images[i]`` (inverses follow); letters whose
    generator is absent from ``images`` are kept."""
    out: list[int] = []
    for x in w:
        g = abs(x) - 1
        if g in images:
            img = images[g]
            out.extend(img if x > 0 else inverse(img))
        else:
            out.append(x)
    return free_reduce(out)


# ---------------------------------------------------------------------------
# word grammar
#
#   word := term+        term := atom ('^' integer)?
#   atom := identifier | '[' word ',' word ']' | '(' word ')'
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<id>[A-Za-z_][A-Za-z0-9_.]*)|(?P<int>-?\d+)|(?P<sym>[\^\[\],()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    return tokens


class _WordParser:
    def __init__(self, text: str, alphabet: Sequence[str]):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.lookup = {name: k for k, name in enumerate(alphabet)}

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def expect(self, sym: str):
        tok = self.peek()
        if tok is None or tok[1] != sym:
            pos = tok[2] if tok else len(self.text)
            raise ParseError(f"expected {sym!r}", pos)
        self.i += 1

    def word(self, stop: tuple[str, ...]) -> list[int]:
        out: list[int] = []
        while True:
            tok = self.peek()
            if tok is None or (tok[0] == "sym" and tok[1] in stop):
                return out
            out.extend(self.term())

    def term(self) -> list[int]:
        body = self.atom()
        tok = self.peek()
        if tok is not None and tok[1] == "^":
            self.i += 1
            tok = self.peek()
            if tok is None or tok[0] != "int":
                raise ParseError("expected integer exponent", tok[2] if tok else len(self.text))
            self.i += 1
            return list(power(body, int(tok[1])))
        return body

    def atom(self) -> list[int]:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of word", len(self.text))
        kind, value, pos = tok
        if kind == "id":
            self.i += 1
            if value in self.lookup:
                return [self.lookup[value] + 1]
            if value == "1":
                return []
            # juxtaposed one-character generator names, e.g. "ab"
            if all(ch in self.lookup for ch in value):
                return [self.lookup[ch] + 1 for ch in value]
            raise UnknownGeneratorError(f"unknown generator {value!r}", pos)
        if kind == "int" and value == "1":
            self.i += 1
            return []
        if value == "(":
            self.i += 1
            body = self.word((")",))
            self.expect(")")
            return body
        if value == "[":
            self.i += 1
            u = self.word((",",))
            self.expect(",")
            v = self.word(("]",))
            self.expect("]")
            return list(commutator(u, v))
        raise ParseError(f"unexpected token {value!r}", pos)


def parse_word(text: str, alphabet: Sequence[str]) -> Word:
    """Parse ``text`` into the literal (unreduced) word over ``alphabet``."""
    p = _WordParser(text, alphabet)
    w = p.word(())
    if p.peek() is not None:
        raise ParseError(f"unexpected token {p.peek()[1]!r}", p.peek()[2])
    return tuple(w)


def format_word(w: Sequence[int], alphabet: Sequence[str]) -> str:
    """Inverse of :func:`parse_word`; runs of one letter become powers."""
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        name = alphabet[abs(w[i]) - 1]
        k = (j - i) * sign_of(w[i])
        parts.append(name if k == 1 else f"{name}^{k}")
        i = j
    return " ".join(parts)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Presentation:
    """A finite presentation; relators are stored cyclically reduced."""

    name: str
    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        gens = tuple(self.generators)
        if len(set(gens)) != len(gens):
            raise ValueError(f"duplicate generator names in {self.name}")
        rels = []
        for r in self.relators:
            r = tuple(r)
            if any(x == 0 or abs(x) > len(gens) for x in r):
                raise ValueError(f"relator {r} uses letters outside {gens}")
            core, _ = cyclic_reduce(r)
            if core:
                rels.append(core)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", tuple(rels))

    @classmethod
    def from_strings(cls, name: str, generators: Sequence[str], relators: Sequence[str] = ()) -> Presentation:
        gens = tuple(generators)
        return cls(name, gens, tuple(parse_word(r, gens) for r in relators))

    @property
    def rank(self) -> int:
        return len(self.generators)

    def index(self, name: str) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise UnknownGeneratorError(f"unknown generator {name!r} in {self.name}") from None

    def gen(self, name: str, sign: int = 1) -> int:
        return letter(self.index(name), sign)

    def word(self, text: str) -> Word:
        return parse_word(text, self.generators)

    def format(self, w: Sequence[int]) -> str:
        return format_word(w, self.generators)

    def renamed(self, name: str) -> Presentation:
        return Presentation(name, self.generators, self.relators)


def eliminate_generator(p: Presentation, name: str, replacement: Sequence[int], new_name: str | None = None) -> tuple[Presentation, dict[int, Word]]:
    """Tietze move: drop generator ``name`` after substituting ``replacement``
    (a word avoiding ``name``) into every relator.

    Returns the new presentation and the letter map old-index -> new word.
    Relators that become trivial are dropped.
    """
    k = p.index(name)
    if any(abs(x) - 1 == k for x in replacement):
        raise ValueError("replacement must not involve the eliminated generator")
    gens = p.generators[:k] + p.generators[k + 1:]

    def shift(x: int) -> int:
        g = abs(x) - 1
        return x if g < k else (x - 1 if x > 0 else x + 1)

    images: dict[int, Word] = {}
    for g in range(p.rank):
        if g == k:
            images[g] = tuple(shift(x) for x in replacement)
        else:
            images[g] = (shift(g + 1),)
    rels = tuple(substitute(r, images) for r in p.relators)
    return Presentation(new_name or p.name, gens, rels), images


@dataclass(frozen=True)
class GeneratorMap:
    """Homomorphism candidate given by generator images."""

    source: Presentation
    target: Presentation
    images: Mapping[int, Word]
    certificate: tuple = field(default=(), compare=False)

    def __post_init__(self):
        missing = set(range(self.source.rank)) - set(self.images)
        if missing:
            raise ValueError(f"generator map not total: missing {sorted(missing)}")
        object.__setattr__(self, "images", {g: free_reduce(self.images[g]) for g in range(self.source.rank)})

    @classmethod
    def from_strings(cls, source: Presentation, target: Presentation, images: Mapping[str, str]) -> GeneratorMap:
        return cls(source, target, {source.index(k): target.word(v) for k, v in images.items()})

    @property
    def verified(self) -> bool:
        return bool(self.certificate) and all(ok for _, ok in self.certificate)

    def __call__(self, w: Sequence[int]) -> Word:
        return apply_map(self, w)

    def compose(self, first: GeneratorMap) -> GeneratorMap:
        """``self ∘ first``."""
        if first.target.generators != self.source.generators:
            raise ValueError("maps do not compose")
        return GeneratorMap(first.source, self.target, {g: apply_map(self, w) for g, w in first.images.items()})

    def verify(self, oracle) -> GeneratorMap:
        """Return a copy carrying a per-relator triviality certificate."""
        from .oracles import Verdict

        cert = []
        for r in self.source.relators:
            image = apply_map(self, r)
            cert.append((image, oracle.equal(image, EMPTY) is Verdict.EQUAL))
        return GeneratorMap(self.source, self.target, self.images, tuple(cert))


def apply_map(m: GeneratorMap, w: Sequence[int]) -> Word:
    return substitute(w, m.images)


def identity_map(p: Presentation) -> GeneratorMap:
    return GeneratorMap(p, p, {g: (g + 1,) for g in range(p.rank)})
