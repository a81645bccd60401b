"""Word metrics: Cayley balls and isometric-embedding checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterator, Sequence

from .oracles import Budget, GroupOracle, Inconclusive, Verdict, as_budget
from .presentations import Word, free_reduce, inverse, substitute


class BallError(RuntimeError):
    """An equality query needed for the ball came back inconclusive."""

    def __init__(self, u: Word, v: Word, detail: str):
        self.pair = (u, v)
        super().__init__(f"inconclusive comparison of {u} and {v}: {detail}")


def _evaluate(expression: Sequence[int], gens: Sequence[Word]) -> Word:
    return substitute(expression, {j: g for j, g in enumerate(gens)})


@dataclass
class CayleyBall:
    """Elements of the ``radius``-ball, each with the first-found geodesic
    over the generator letters ``±(j+1)``."""

    oracle: GroupOracle
    gens: tuple[Word, ...]
    radius: int
    expressions: list[Word] = field(default_factory=list)
    distances: list[int] = field(default_factory=list)

    def __len__(self):
        return len(self.expressions)

    def word(self, k: int) -> Word:
        return _evaluate(self.expressions[k], self.gens)

    def sphere_sizes(self) -> list[int]:
        out = [0] * (self.radius + 1)
        for d in self.distances:
            out[d] += 1
        return out

    def find(self, w: Sequence[int], budget: Budget | int | None = None) -> int | None:
        b = _per_query(budget)
        for k in range(len(self)):
            if _same(self.oracle, self.word(k), tuple(w), b):
                return k
        return None


def _per_query(budget: Budget | int | None) -> int:
    """Budgets here are per equality query, not shared across the whole run."""
    if isinstance(budget, Budget):
        return budget.limit
    return as_budget(budget).limit


def _same(o: GroupOracle, u: Word, v: Word, budget: int) -> bool:
    ans = o.check(u, v, budget)
    if ans.verdict is Verdict.INCONCLUSIVE:
        raise BallError(u, v, ans.detail)
    return ans.verdict is Verdict.EQUAL


def _letters(k: int) -> list[int]:
    out = []
    for j in range(k):
        out.extend((j + 1, -(j + 1)))
    return out


def cayley_ball(oracle: GroupOracle, gens: Sequence[Word], radius: int,
                budget: Budget | int | None = None) -> CayleyBall:
    """Breadth-first ball; identity is decided by hashing normal forms when
    the oracle has them, otherwise pairwise against the neighbouring layers."""
    b = _per_query(budget)
    gens = tuple(tuple(g) for g in gens)
    ball = CayleyBall(oracle, gens, radius, [()], [0])
    letters = _letters(len(gens))
    hashed = oracle.has_normal_form
    seen = {oracle.normal_form(()): 0} if hashed else None
    layers: list[list[int]] = [[0]]
    for d in range(radius):
        new: list[int] = []
        for k in layers[d]:
            ex = ball.expressions[k]
            for x in letters:
                if ex and ex[-1] == -x:
                    continue
                cand = ex + (x,)
                w = _evaluate(cand, gens)
                if hashed:
                    key = oracle.normal_form(w)
                    if key in seen:
                        continue
                    seen[key] = len(ball.expressions)
                else:
                    pool = (layers[d - 1] if d else []) + layers[d] + new
                    if any(_same(oracle, w, ball.word(j), b) for j in pool):
                        continue
                ball.expressions.append(cand)
                ball.distances.append(d + 1)
                new.append(len(ball.expressions) - 1)
        layers.append(new)
    return ball


def reduced_words(nletters: int, length: int) -> Iterator[Word]:
    """Freely reduced words of exactly this length over ``±1..±nletters``."""
    letters = _letters(nletters)

    def rec(prefix: tuple[int, ...]):
        if len(prefix) == length:
            yield prefix
            return
        for x in letters:
            if prefix and prefix[-1] == -x:
                continue
            yield from rec(prefix + (x,))

    yield from rec(())


class DistanceSearch:
    """Exact ambient distances by exhaustive search over short words.

    When the oracle knows geodesic lengths for its standard generators and
    ``gens`` are exactly those, the value is read off directly.
    """

    def __init__(self, oracle: GroupOracle, gens: Sequence[Word], budget: Budget | int | None = None):
        self.oracle = oracle
        self.gens = tuple(tuple(g) for g in gens)
        self.budget = _per_query(budget)
        n = len(oracle.generators)
        self.standard = sorted(self.gens) == [(j + 1,) for j in range(n)]

    def distances(self, targets: Sequence[Word], upper: Sequence[int]) -> list[int]:
        """Exact ``d(1, target)`` given an upper bound realised by some known word."""
        if self.standard:
            direct = [self.oracle.geodesic_length(w) for w in targets]
            if all(d is not None for d in direct):
                return direct
        out = list(upper)
        # d(1, h) = d(1, h^-1): search only one of each inverse pair
        first: dict[Word, int] = {}
        mirror: dict[int, int] = {}
        for k, w in enumerate(targets):
            w = free_reduce(w)
            back = first.get(free_reduce(inverse(w)))
            if back is not None:
                mirror[k] = back
                out[back] = min(out[back], out[k])
            else:
                first.setdefault(w, k)
        pending = {k for k in range(len(targets)) if upper[k] > 0 and k not in mirror}
        for k in list(pending):
            if _same(self.oracle, (), targets[k], self.budget):
                out[k] = 0
                pending.discard(k)
        length = 0
        while pending:
            length += 1
            pending = {k for k in pending if out[k] > length}
            if not pending:
                break
            for ex in reduced_words(len(self.gens), length):
                w = _evaluate(ex, self.gens)
                for k in [k for k in pending if _same(self.oracle, w, targets[k], self.budget)]:
                    out[k] = length
                    pending.discard(k)
                if not pending:
                    break
        for k, j in mirror.items():
            out[k] = out[j]
        return out

    def generator_bounds(self, words: Sequence[Word]) -> list[int]:
        """Upper bounds on the ambient length of each word."""
        amb = {g: 1 for g in self.gens}
        amb.update({inverse(g): 1 for g in self.gens})
        out = []
        for h in words:
            h = free_reduce(h)
            if not h:
                out.append(0)
            elif h in amb:
                out.append(1)
            elif self.standard:
                out.append(len(h))
            else:
                k = self._search_one(h, len(h))
                if k is None:
                    raise ValueError(f"no ambient word of length <= {len(h)} for {h}")
                out.append(k)
        return out

    def _search_one(self, h: Word, cap: int) -> int | None:
        for length in range(cap + 1):
            for ex in reduced_words(len(self.gens), length):
                if _same(self.oracle, _evaluate(ex, self.gens), h, self.budget):
                    return length
        return None


class EmbeddingVerdict(Enum):
    ISOMETRIC = "ISOMETRIC"
    DISTORTED = "DISTORTED"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class Embedding:
    """Subgroup generated by ``sub_gens`` (words over the ambient alphabet)
    inside the group of ``oracle`` with generating words ``ambient_gens``."""

    sub_gens: tuple[Word, ...]
    oracle: GroupOracle
    ambient_gens: tuple[Word, ...]

    def __post_init__(self):
        object.__setattr__(self, "sub_gens", tuple(tuple(g) for g in self.sub_gens))
        object.__setattr__(self, "ambient_gens", tuple(tuple(g) for g in self.ambient_gens))


@dataclass(frozen=True)
class EmbeddingCertificate:
    verdict: EmbeddingVerdict
    radius: int
    sub_gens: tuple[Word, ...]
    ambient_gens: tuple[Word, ...]
    table: tuple[tuple[Word, int, int], ...]  # (expression, d_H, d_G)
    witness: Word | None = None  # expression with d_H != d_G
    lam: Fraction | None = None  # max d_H / d_G
    eps: int | None = None  # max d_H - d_G
    detail: str = ""

    @property
    def isometric(self) -> bool:
        return self.verdict is EmbeddingVerdict.ISOMETRIC


def _measure(emb: Embedding, radius: int, budget: int):
    intrinsic = cayley_ball(emb.oracle, emb.sub_gens, radius, budget)
    search = DistanceSearch(emb.oracle, emb.ambient_gens, budget)
    step = search.generator_bounds(emb.sub_gens)
    upper = [sum(step[abs(x) - 1] for x in ex) for ex in intrinsic.expressions]
    words = [intrinsic.word(k) for k in range(len(intrinsic))]
    return intrinsic, search.distances(words, upper)


def check_isometric(emb: Embedding, radius: int, budget: Budget | int | None = None) -> EmbeddingCertificate:
    """Compare intrinsic and ambient distances on the intrinsic ``radius``-ball."""
    b = _per_query(budget)
    try:
        intrinsic, amb = _measure(emb, radius, b)
    except (BallError, Inconclusive) as exc:
        return EmbeddingCertificate(EmbeddingVerdict.INCONCLUSIVE, radius, emb.sub_gens, emb.ambient_gens,
                                    (), detail=str(exc))
    rows = tuple((intrinsic.expressions[k], intrinsic.distances[k], amb[k]) for k in range(len(intrinsic)))
    witness = next((ex for ex, dh, dg in rows if dg != dh), None)
    ratios = [Fraction(dh, dg) for _, dh, dg in rows if dg]
    lam = max(ratios, default=Fraction(1))
    eps = max((dh - dg for _, dh, dg in rows), default=0)
    verdict = EmbeddingVerdict.ISOMETRIC if witness is None else EmbeddingVerdict.DISTORTED
    return EmbeddingCertificate(verdict, radius, emb.sub_gens, emb.ambient_gens, rows, witness, lam, eps)


@dataclass(frozen=True)
class DistortionProfile:
    """Per radius ``R``: ``(R, lam, eps, mu)`` where ``lam`` is least with
    ``d_H <= lam d_G`` (``eps = 0``), ``eps`` least with ``d_H <= d_G + eps``
    (``lam = 1``) and ``mu`` least with ``d_G <= mu d_H``.  An isometric ball
    gives ``(1, 0, 1)``; ``mu > 1`` means the lower bound ``d_G <= d_H`` fails."""

    per_radius: tuple[tuple[int, Fraction, int, Fraction], ...]
    certificate: EmbeddingCertificate

    @property
    def constants(self) -> tuple[Fraction, int]:
        return self.per_radius[-1][1], 0


def distortion_profile(emb: Embedding, radius: int, budget: Budget | int | None = None) -> DistortionProfile:
    """Measured constants on balls of radius ``1..radius``."""
    cert = check_isometric(emb, radius, budget)
    if cert.verdict is EmbeddingVerdict.INCONCLUSIVE:
        return DistortionProfile((), cert)
    rows = []
    for R in range(1, radius + 1):
        sub = [(dh, dg) for _, dh, dg in cert.table if 0 < dh <= R]
        lam = max((Fraction(dh, dg) for dh, dg in sub if dg), default=Fraction(1))
        eps = max((dh - dg for dh, dg in sub), default=0)
        mu = max((Fraction(dg, dh) for dh, dg in sub), default=Fraction(1))
        rows.append((R, lam, eps, mu))
    return DistortionProfile(tuple(rows), cert)


def ball_distance(ball: CayleyBall, i: int, j: int, budget: Budget | int | None = None) -> int | None:
    """``d(u, v)`` for two ball elements, if ``u^-1 v`` lies in the ball."""
    w = free_reduce(inverse(ball.word(i)) + ball.word(j))
    k = ball.find(w, budget)
    return None if k is None else ball.distances[k]
