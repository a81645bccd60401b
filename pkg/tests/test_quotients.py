import random

import pytest
from hypothesis import given, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from fqforge import construct as C
from fqforge.finite import cyclic, symmetric, trivial_group
from fqforge.oracles import Verdict
from fqforge.presentations import GeneratorMap, Presentation
from fqforge.quotients import (
    Status, abelianization, certify_no_finite_quotients, count_subgroups, enumerate_homs,
    enumerate_homs_naive, hopf_witness, low_index_subgroups, smith_normal_form, targets_up_to,
    verify_dead_element,
)

F2 = Presentation("F2", ("a", "b"), ())
Z2 = Presentation.from_strings("Z2", ["a", "b"], ["[a,b]"])
BS = C.bs23()


def matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def det(M):
    return int(Matrix(M).det())


matrices = st.integers(1, 8).flatmap(lambda m: st.integers(1, 8).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=m, max_size=m)))


@given(matrices)
def test_smith_normal_form(M):
    D, U, V = smith_normal_form(M)
    assert matmul(matmul(U, M), V) == D
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)
    assert all(d >= 0 for d in diag)
    for x, y in zip(diag, diag[1:]):
        assert (y == 0) if x == 0 else (y % x == 0)
    ref = sympy_snf(Matrix(M), domain=ZZ)
    assert sorted(abs(int(ref[i, i])) for i in range(len(diag))) == sorted(diag)


def test_abelianization_examples():
    assert abelianization(Z2) == [0, 0]
    assert abelianization(BS) == [0]
    assert abelianization(Presentation.from_strings("C6", ["a"], ["a^6"])) == [6]
    assert abelianization(Presentation.from_strings("x", ["a", "b"], ["a^2", "b^3"])) == [6]


def test_hom_counts():
    r = enumerate_homs(BS, cyclic(5))
    assert r.count == 5 and r.complete
    assert all(h[0] == 0 for h in r.homs)
    for Q in (trivial_group(), cyclic(4), symmetric(3)):
        assert enumerate_homs(F2, trivial_group()).count == 1
        assert enumerate_homs(F2, Q).count == Q.order ** 2


def test_dead_element_watched_in_s3():
    r = enumerate_homs(C.t_group(2), symmetric(3), [C.dead_element_word(2)])
    assert r.complete and r.count > 1
    assert set(r.watched) == {(0,)}


def random_presentation(rng):
    k = rng.randint(1, 3)
    letters = [x for g in range(1, k + 1) for x in (g, -g)]
    rels = [tuple(rng.choice(letters) for _ in range(rng.randint(1, 6))) for _ in range(rng.randint(0, 3))]
    return Presentation("r", tuple("abc"[:k]), tuple(rels))


def small_targets():
    return [trivial_group()] + [cyclic(m) for m in range(2, 7)] + [symmetric(3)]


@given(st.integers(0, 10 ** 6))
def test_propagated_matches_naive(seed):
    rng = random.Random(seed)
    P = random_presentation(rng)
    Q = rng.choice(small_targets())
    assert list(enumerate_homs(P, Q).homs) == sorted(enumerate_homs_naive(P, Q))


def test_low_index_examples():
    li = low_index_subgroups(F2, 2)
    assert li.complete and len(li.by_index(2)) == 3
    assert len(low_index_subgroups(BS, 2).by_index(2)) == 1
    assert low_index_subgroups(Presentation("1", (), ()), 4).subgroups == ()
    in_sub = low_index_subgroups(BS, 2).by_index(2)[0]
    assert in_sub.contains(BS.word("a")) and not in_sub.contains(BS.word("t"))


@pytest.mark.parametrize("P,k", [(F2, 3), (BS, 3), (Z2, 4), (C.t_group(2), 3)])
def test_coset_and_permutation_methods_agree(P, k):
    a = low_index_subgroups(P, k, method="cosets")
    b = low_index_subgroups(P, k, method="permutations")
    assert a.complete and b.complete
    assert a.subgroups == b.subgroups


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_abelian_subgroup_counts(m):
    """Z^2 has sigma(m) subgroups of index m; for prime m they are the kernels
    of the m^2 - 1 surjections onto Z/m, identified up to Aut(Z/m)."""
    sigma = sum(d for d in range(1, m + 1) if m % d == 0)
    assert count_subgroups(Z2, m) == sigma
    if m in (2, 3, 5):
        onto = [h for h in enumerate_homs(Z2, cyclic(m)).homs if any(h)]
        assert len(onto) // (m - 1) == sigma


def test_certificates():
    t2 = certify_no_finite_quotients(C.t_group(2), order_bound=6, max_index=2)
    assert t2.status is Status.FAIL and t2.witness
    rec = C.build_tower(Presentation("1", (), ()), 2)
    e1 = certify_no_finite_quotients(rec.stages["E1"], order_bound=6, max_index=2)
    assert e1.status is Status.FAIL
    assert any("homomorphisms" in line for line in e1.inventory())


def test_targets_up_to():
    names = [Q.name for Q in targets_up_to(6)]
    assert len(names) == 6 and targets_up_to(6)[-1].order == 6
    assert [Q.order for Q in targets_up_to(24)][-2:] == [6, 24]


def test_dead_element_report():
    rep = verify_dead_element(C.t_group(2), C.dead_element_word(2), 8, oracle=C.tn_oracle(2))
    assert rep.status is Status.PASS and rep.nontrivial is Verdict.NOT_EQUAL
    assert verify_dead_element(F2, (), 4).status is Status.PASS
    live = verify_dead_element(C.t_group(2), C.t_group(2).word("a"), 4, oracle=C.tn_oracle(2))
    assert live.status is Status.FAIL and live.survivors


def test_bs_is_non_hopfian():
    phi = GeneratorMap.from_strings(BS, BS, {"a": "a^2", "t": "t"})
    pre = {0: BS.word("t^-1 a t a^-1"), 1: BS.word("t")}
    w = hopf_witness(phi, pre, BS.word("[a, t^-1 a t]"), C.bs23_oracle())
    assert w.non_hopfian
    # the identity is surjective but has trivial kernel on the same word
    ident = GeneratorMap.from_strings(BS, BS, {"a": "a", "t": "t"})
    assert not hopf_witness(ident, {0: (1,), 1: (2,)}, BS.word("[a, t^-1 a t]"), C.bs23_oracle()).non_hopfian
