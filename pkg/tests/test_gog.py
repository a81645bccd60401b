from itertools import product

import pytest

from fqforge import construct as C
from fqforge.dsl import format_document, parse_document, Document
from fqforge.gog import Edge, GogError, GraphOfGroups, IsometryStatus, Vertex, flatten_gog, validate_gog
from fqforge.oracles import Budget, FreeAbelianOracle, FreeOracle, FreeProductOracle
from fqforge.presentations import Presentation, cyclic_canonical, inverse
from fqforge.quotients import abelianization

Z2 = Presentation.from_strings("Z2", ["a", "b"], ["[a,b]"])
BS = C.bs23()


def relator_classes(p):
    return {min(cyclic_canonical(r), cyclic_canonical(inverse(r))) for r in p.relators}


def test_two_loop_graph_is_valid_and_flattens_to_tn():
    for n in (2, 3):
        G0, _, _, _, _, graphs = C.step0_attach(Presentation("1", (), ()), n)
        assert validate_gog(graphs["G0"]).valid
        T = C.t_group(n)
        assert G0.generators == T.generators
        assert relator_classes(G0) == relator_classes(T)


def test_trivial_loop_gives_free_product_with_z():
    g = GraphOfGroups("GxZ", (Vertex("v", BS),), (Edge("v", "v", (), (), (), stable="s"),))
    assert validate_gog(g).valid
    p = flatten_gog(g)
    assert p.generators == ("a", "t", "s")
    assert p.relators == BS.relators
    assert abelianization(p) == abelianization(BS) + [0]


def test_full_loop_gives_direct_product_with_z():
    gens = ("x", "y")
    g = GraphOfGroups("GxZ", (Vertex("v", BS),),
                      (Edge("v", "v", gens, ((1,), (2,)), ((1,), (2,)), stable="s"),))
    p = flatten_gog(g)
    assert p.rank == 3
    new = set(p.relators) - set(BS.relators)
    s = 3
    assert relator_classes(Presentation("r", p.generators, tuple(new))) == relator_classes(
        Presentation("r", p.generators, ((-s, 1, s, -1), (-s, 2, s, -2))))


def test_abelianization_of_free_product_with_z():
    for p in (Z2, BS, C.t_group(2)):
        g = GraphOfGroups("x", (Vertex("v", p),), (Edge("v", "v", (), (), ()),))
        assert abelianization(flatten_gog(g)) == abelianization(p) + [0]


def test_single_vertex_no_edges_is_verbatim():
    g = GraphOfGroups("x", (Vertex("v", BS),))
    p = flatten_gog(g)
    assert (p.generators, p.relators) == (BS.generators, BS.relators)


def test_two_vertices_are_namespaced():
    p = flatten_gog(C.free_amalgam_gog())
    assert p.generators == ("L.a", "L.b", "R.c", "R.d")
    assert p.relators == ((1, -3),)  # L.a R.c^-1


def test_inconsistent_phi_rejected():
    e = Edge("v", "v", ("x", "y"), ((1,), (2,)), ((1,), (2,)), phi=(1, 0), phi_reverse=(0, 1))
    g = GraphOfGroups("bad", (Vertex("v", Z2),), (e,))
    rep = validate_gog(g)
    assert not rep.valid
    assert any("mutually inverse" in x for x in rep.errors)
    with pytest.raises(GogError):
        flatten_gog(g)


def test_structural_errors():
    bad_end = GraphOfGroups("x", (Vertex("v", Z2),), (Edge("v", "w", ("x",), ((1,),), ((1,),)),))
    assert not validate_gog(bad_end).valid
    split = GraphOfGroups("x", (Vertex("v", Z2), Vertex("w", Z2)))
    assert "underlying graph is disconnected" in validate_gog(split).errors
    outside = GraphOfGroups("x", (Vertex("v", Z2),), (Edge("v", "v", ("x",), ((3,),), ((1,),)),))
    assert not validate_gog(outside).valid
    flagged = GraphOfGroups("x", (Vertex("v", Z2),), (Edge("v", "v", ("x",), ((1, 1),), ((1,),), isometric=True),))
    assert any("generating set" in x for x in validate_gog(flagged).errors)


def test_isometry_flags_are_bounded_checks():
    g = C.free_amalgam_gog()
    rep = validate_gog(g, {"L": FreeOracle(["a", "b"]), "R": FreeOracle(["c", "d"])}, radius=3)
    assert rep.valid
    assert {f.status for f in rep.flags} == {IsometryStatus.VERIFIED}
    assert all(f.radius == 3 for f in rep.flags)
    # <a^2> is distorted against the generating set {a, b}
    d = GraphOfGroups("x", (Vertex("v", Presentation("F", ("a", "b"), ())),),
                      (Edge("v", "v", ("x",), ((1, 1),), ((2,),)),))
    rep = validate_gog(d, {"v": FreeOracle(["a", "b"])}, radius=2)
    assert any(f.status is IsometryStatus.REFUTED for f in rep.flags)


def test_dsl_round_trip():
    text = """
group Z2
gens a b
rel [a,b]

gog loop
vertex v Z2
edge v v gens x y into_v a; b into_v b; a stable s

ledger note a remark
"""
    doc = parse_document(text)
    again = parse_document(format_document(doc))
    assert again.groups == doc.groups
    assert again.gogs == doc.gogs
    assert again.ledger == doc.ledger
    assert flatten_gog(doc.gogs["loop"]).rank == 3


def test_fixture_gog_round_trip():
    for g in (C.free_amalgam_gog(), C.double_ld_gog(), C.bs23_gog()):
        doc = Document(groups={v.presentation.name: v.presentation for v in g.vertices}, gogs={g.name: g})
        back = parse_document(format_document(doc))
        assert flatten_gog(back.gogs[g.name]) == flatten_gog(g)


def test_free_product_syllables_unique_on_small_ball():
    """Every element of Z * Z in the 4-ball has one syllable decomposition."""
    o = FreeProductOracle([FreeOracle(["a"]), FreeOracle(["b"])])
    seen = {}
    for n in range(5):
        for w in product((1, -1, 2, -2), repeat=n):
            key = o.normal_form(w)
            syl = tuple((f, tuple(u)) for f, u in o.reduced_syllables(w, Budget()))
            assert seen.setdefault(key, syl) == syl
    assert len(seen) == 1 + 4 + 12 + 36 + 108
