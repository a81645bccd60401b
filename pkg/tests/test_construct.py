import pytest

from fqforge import construct as C
from fqforge.dsl import format_presentation, parse_document
from fqforge.metrics import Embedding, check_isometric, distortion_profile
from fqforge.oracles import Member, Verdict
from fqforge.presentations import Presentation, exponent_sum, inverse
from fqforge.quotients import abelianization

TRIVIAL = Presentation("1", (), ())
ZC = Presentation("Z", ("c",), ())


@pytest.fixture(scope="module")
def trivial_tower():
    rec = C.construct_ghat(TRIVIAL, 2)
    return rec, C.build_tower_oracle(rec)


@pytest.fixture(scope="module")
def z_tower():
    rec = C.construct_ghat(ZC, 2)
    return rec, C.build_tower_oracle(rec)


def test_ledger_sizes(trivial_tower, z_tower):
    rec, _ = trivial_tower
    assert rec.stages["G1"].generators == ("a", "b", "t_a", "t_b", "t")
    assert len(rec.astar) == 6
    assert len(z_tower[0].astar) == 7
    assert rec.astar[0] == (rec.stages["G1"].index("t") + 1,)


def test_generator_counts(trivial_tower):
    rec, _ = trivial_tower
    st = rec.stages
    assert st["E1"].rank == st["G1"].rank + len(rec.astar) - 1
    assert st["Ghat"].rank == 2 * st["E3"].rank - 2 == 30
    assert len(st["Ghat"].relators) == 36


def test_g0_shape(trivial_tower):
    rec, O = trivial_tower
    G1 = rec.stages["G1"]
    assert exponent_sum(rec.g0_word, G1.index("t")) == 0
    assert O.G1.syllable_length(rec.g0_word) == 4


def test_sigma_relation(trivial_tower):
    rec, O = trivial_tower
    E3 = rec.stages["E3"]
    sigma, s0, tau0 = (E3.word(x) for x in ("sigma", "s0", "tau0"))
    assert O.E3.equal(inverse(sigma) + s0 + sigma, tau0) is Verdict.EQUAL


def test_ghat_abelianization_trivial(trivial_tower):
    assert abelianization(trivial_tower[0].ghat) == []


def test_audit_passes(trivial_tower, z_tower):
    for rec, O in (trivial_tower, z_tower):
        items = C.audit(rec, O)
        assert all(i.ok for i in items), [i for i in items if not i.ok]


def test_conjugacy_witnesses_checked(trivial_tower):
    rec, O = trivial_tower
    wit = C.conjugacy_witnesses(rec)
    assert len(wit) == 2 * (3 * len(rec.s_names) + 1)
    for name, h, c, g0 in wit:
        assert O.Ghat.equal(h, c + g0 + inverse(c)) is Verdict.EQUAL, name


def test_embedding_map(z_tower):
    rec, O = z_tower
    assert rec.embedding.images == {0: (rec.ghat.index("left.c") + 1,)}
    assert O.Ghat.equal(rec.embedding.images[0]) is Verdict.NOT_EQUAL


def test_a0_not_in_free_subgroups(trivial_tower):
    rec, O = trivial_tower
    sig = O.E3.stables[0]
    for k in range(1, 4):
        w = rec.astar[0] * k
        assert sig.a_member.member(w).status is Member.NO
        assert sig.b_member.member(w).status is Member.NO


def test_previous_stage_isometric(z_tower):
    rec, O = z_tower
    G0, G1 = rec.stages["G0"], rec.stages["G1"]
    emb = Embedding([(j + 1,) for j in range(G0.rank)], O.G1, [(j + 1,) for j in range(G1.rank)])
    assert check_isometric(emb, 2).isometric


def test_embedding_distortion_regression(z_tower):
    rec, O = z_tower
    amb = [(j + 1,) for j in range(rec.ghat.rank)]
    prof = distortion_profile(Embedding([rec.embedding.images[0]], O.Ghat, amb), 3)
    # frozen measurement: the input generator stays a generator of Ghat
    assert [(R, float(lam), eps, float(mu)) for R, lam, eps, mu in prof.per_radius] == [
        (1, 1.0, 0, 1.0), (2, 1.0, 0, 1.0), (3, 1.0, 0, 1.0)]


def test_name_clash_rejected():
    with pytest.raises(C.ConstructionError):
        C.construct_ghat(Presentation("x", ("t",), ()), 2)
    with pytest.raises(C.ConstructionError):
        C.construct_ghat(TRIVIAL, 1)


def test_fixture_counts():
    fx = C.fixtures()
    assert len(fx.bs23.relators) == 1
    assert (fx.t(2).rank, len(fx.t(2).relators)) == (4, 3)
    assert fx.wise37.rank == 6
    assert fx.get("double-LD").rank == 8


@pytest.mark.parametrize("name", C.FIXTURE_NAMES)
def test_packaged_fixtures_match_builders(name):
    text = C.fixture_text(name)
    built = C._builders()[name]()
    assert text == format_presentation(built)
    assert parse_document(text).group() == built


def test_manifest_is_deterministic_and_parses(trivial_tower):
    rec, _ = trivial_tower
    text = C.manifest(rec)
    assert text == C.manifest(C.construct_ghat(TRIVIAL, 2))
    doc = parse_document(text)
    assert doc.group("Ghat") == rec.ghat
    assert ("p_i", "1") in doc.ledger
