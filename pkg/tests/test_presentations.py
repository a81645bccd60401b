from itertools import product

import pytest
from hypothesis import given, strategies as st

from fqforge.presentations import (
    GeneratorMap, ParseError, Presentation, UnknownGeneratorError, apply_map, commutator,
    cyclic_canonical, cyclic_reduce, eliminate_generator, format_word, free_reduce, identity_map,
    inverse, is_freely_reduced, parse_word, power, rotations,
)

AB = ("a", "b")
ABT = ("a", "b", "t")


def words(k=3, max_size=12):
    return st.lists(st.sampled_from([x for g in range(1, k + 1) for x in (g, -g)]), max_size=max_size).map(tuple)


def brute_reduce(w):
    """Cancel adjacent inverse pairs until none is left."""
    w = list(w)
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            if w[i] == -w[i + 1]:
                del w[i:i + 2]
                changed = True
                break
    return tuple(w)


# --- parsing -----------------------------------------------------------------

def test_commutator_notation():
    assert parse_word("[a,b]", AB) == (1, 2, -1, -2)


def test_bs_relator():
    assert parse_word("t^-1 a^2 t a^-3", ("a", "t")) == (-2, 1, 1, 2, -1, -1, -1)


def test_zero_power_is_empty():
    assert parse_word("a^0", AB) == ()
    assert parse_word("1", AB) == ()


def test_nested_brackets_and_powers():
    assert parse_word("(a b)^2", AB) == (1, 2, 1, 2)
    assert parse_word("(a b)^-1", AB) == (-2, -1)
    assert parse_word("[a b, t]", ABT) == commutator((1, 2), (3,))


def test_unknown_generator():
    with pytest.raises(UnknownGeneratorError):
        parse_word("a c", AB)


@pytest.mark.parametrize("bad", ["a^", "(a b", "[a,b", "a ^ ^ 2", "[a]"])
def test_malformed(bad):
    with pytest.raises(ParseError):
        parse_word(bad, AB)


def test_format_powers():
    assert format_word((1, 1, -2), AB) == "a^2 b^-1"
    assert format_word((), AB) == "1"


@given(words())
def test_parse_format_round_trip(w):
    assert parse_word(format_word(w, ABT), ABT) == w


# --- reduction -----------------------------------------------------------------

def test_free_reduce_examples():
    assert free_reduce((1, -1)) == ()
    assert free_reduce((1, 2, -2, -1, 2)) == (2,)
    assert free_reduce((1, 2, -1)) == (1, 2, -1)


@given(words())
def test_free_reduce_matches_brute_force(w):
    r = free_reduce(w)
    assert r == brute_reduce(w)
    assert is_freely_reduced(r)


def test_cyclic_reduce_examples():
    assert cyclic_reduce((2, 1, 1, -2)) == ((1, 1), (2,))
    assert cyclic_reduce((1, 2, -1)) == ((2,), (1,))


def test_cyclic_reduce_exhaustive_short():
    letters = (1, -1, 2, -2)
    for n in range(9):
        for w in product(letters, repeat=n):
            core, u = cyclic_reduce(w)
            assert free_reduce(u + core + inverse(u)) == free_reduce(w)
            assert is_freely_reduced(core)
            assert len(core) < 2 or core[0] != -core[-1]


@given(words())
def test_inverse_cancels(w):
    assert free_reduce(w + inverse(w)) == ()


@given(words(max_size=8))
def test_cyclic_canonical_is_rotation_invariant(w):
    core, _ = cyclic_reduce(w)
    for r in rotations(core):
        assert cyclic_canonical(r) == cyclic_canonical(core)


def test_power_and_commutator():
    assert power((1, 2), -2) == (-2, -1, -2, -1)
    assert power((1,), 0) == ()
    assert commutator((1,), (2,)) == (1, 2, -1, -2)


# --- presentations and maps -------------------------------------------------------

def test_relators_stored_cyclically_reduced():
    p = Presentation("x", AB, ((2, 1, 1, -2), (1, -1)))
    assert p.relators == ((1, 1),)


def test_duplicate_generators_rejected():
    with pytest.raises(ValueError):
        Presentation("x", ("a", "a"), ())


def test_eliminate_generator():
    p = Presentation.from_strings("x", ABT, ["t a t^-1 b^-1"])
    q, images = eliminate_generator(p, "b", p.word("t a t^-1"))
    assert q.generators == ("a", "t")
    assert q.relators == ()
    assert images[1] == (2, 1, -2)


def test_map_of_bs_endomorphism():
    bs = Presentation.from_strings("BS(2,3)", ("a", "t"), ["t^-1 a^2 t a^-3"])
    phi = GeneratorMap.from_strings(bs, bs, {"a": "a^2", "t": "t"})
    assert phi(bs.word("[a, t^-1 a t]")) == bs.word("[a^2, t^-1 a^2 t]")


def test_map_must_be_total():
    p = Presentation("x", AB, ())
    with pytest.raises(ValueError):
        GeneratorMap(p, p, {0: (1,)})


@given(words(), words())
def test_apply_map_is_multiplicative(u, v):
    p = Presentation("F3", ABT, ())
    m = GeneratorMap(p, p, {0: (1, 2), 1: (-3,), 2: (2, 2, 1)})
    assert free_reduce(apply_map(m, u + v)) == free_reduce(apply_map(m, u) + apply_map(m, v))
    assert free_reduce(apply_map(m, inverse(u))) == free_reduce(inverse(apply_map(m, u)))


@given(words())
def test_identity_and_composition(w):
    p = Presentation("F3", ABT, ())
    m = GeneratorMap(p, p, {0: (2,), 1: (3, 1), 2: (-1,)})
    assert apply_map(identity_map(p), w) == free_reduce(w)
    assert free_reduce(apply_map(m.compose(m), w)) == free_reduce(apply_map(m, apply_map(m, w)))
