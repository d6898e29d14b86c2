import copy

import pytest
from hypothesis import given, strategies as st

from conftest import algebra, component

from arcover.algebra import Arrow
from arcover.representation import hom_dim, injective_at, projective_at
from arcover.translation_quiver import (
    BadFlags,
    BrokenMesh,
    TQError,
    TranslationQuiver,
    export_dot,
    mesh_hom,
    validate_tq,
)

PAIRS = [
    ("a2.alg", "a2.tq"),
    ("kronecker.alg", "kronecker.tq"),
    ("example_a.alg", "example_a.tq"),
    ("example_c.alg", "example_c.tq"),
    ("riedtmann.alg", "riedtmann.tq"),
]
_MODS = {"P": projective_at, "I": injective_at}


@pytest.mark.parametrize("tq", [t for _, t in PAIRS])
def test_fixture_components_validate(tq):
    rep = validate_tq(component(tq), strict=True)
    assert rep.valid
    assert rep.meshes


@pytest.mark.parametrize("alg, tq", PAIRS)
def test_mesh_hom_matches_module_hom(alg, tq):
    A, G = algebra(alg), component(tq)
    for u, (k, x) in G.labels.items():
        for v, (l, y) in G.labels.items():
            e = mesh_hom(G, u, v, A.F)
            assert e.status == "stabilized"
            assert e.total == hom_dim(_MODS[k](A, x), _MODS[l](A, y))


def test_a2_mesh_kills_the_long_path():
    G = component("a2.tq")
    assert mesh_hom(G, "P1", "P2").graded[:2] == [0, 1]
    assert mesh_hom(G, "P1", "I2").total == 0
    assert mesh_hom(G, "P2", "I2").total == 1


def _a2_copy():
    G = component("a2.tq")
    return TranslationQuiver(list(G.vertices), list(G.arrows), dict(G.tau), dict(G.sigma),
                             set(G.projective), set(G.injective), set(G.open), dict(G.labels))


def test_missing_sigma_is_a_broken_mesh():
    G = _a2_copy()
    G.sigma = {}
    rep = validate_tq(G)
    assert not rep.valid
    with pytest.raises(BrokenMesh):
        validate_tq(G, strict=True)


def test_projective_with_tau_is_bad_flags():
    G = _a2_copy()
    G.projective.discard("P2")
    G.injective.discard("P2")
    with pytest.raises(BadFlags):
        validate_tq(G, strict=True)


def test_unknown_names_rejected():
    with pytest.raises(TQError):
        TranslationQuiver(["x"], [], {"x": "y"})
    with pytest.raises(TQError):
        TranslationQuiver(["x"], [Arrow("u", "x", "z")], {})


@given(st.randoms(use_true_random=False))
def test_mesh_hom_ignores_vertex_order(rnd):
    G = component("riedtmann.tq")
    verts = list(G.vertices)
    rnd.shuffle(verts)
    arrows = list(G.arrows)
    rnd.shuffle(arrows)
    H = TranslationQuiver(verts, arrows, dict(G.tau), dict(G.sigma), set(G.projective),
                          set(G.injective), set(G.open), dict(G.labels))
    for u in ("Px", "Py"):
        for v in ("Px", "Py"):
            assert mesh_hom(H, u, v).graded == mesh_hom(G, u, v).graded


@pytest.mark.parametrize("tq", ["a2.tq", "riedtmann.tq"])
def test_dot_is_deterministic(tq):
    G = component(tq)
    text = export_dot(G)
    assert text == export_dot(copy.deepcopy(G))
    assert text.startswith("digraph")
    assert text.count("->") == len(G.arrows) + len(G.tau)
