import dataclasses

import pytest
from hypothesis import given, strategies as st

from conftest import algebra, workspace

from arcover.covering import (
    CoveringError,
    FibreEmpty,
    NotWellDefined,
    SupportOutsideInterior,
    UnbalancedRelation,
    functor_from_maps,
    functor_from_spec,
    identity_covering,
    path_voltage,
    pull_up,
    push_down,
    quotient_by_action,
    verify_covering_functor,
    voltage_cover_algebra,
    well_definedness_failures,
)
from arcover.graphiso import find_isomorphism
from arcover.groups import GroupSpec
from arcover.representation import (
    ar_translate,
    direct_sum,
    injective_at,
    is_isomorphic,
    projective_at,
    simple_module,
)


def _functor(name, ws="kronecker.alg"):
    w = workspace(ws)
    return functor_from_spec(w, w.functors[name])


@pytest.mark.parametrize("name, galois", [("kronecker_F", True), ("kronecker_p", False)])
def test_kronecker_functors(name, galois):
    rep = verify_covering_functor(_functor(name))
    assert rep.covering and not rep.local
    assert rep.galois is galois
    assert rep.checked == 16


@pytest.mark.parametrize("x, dims", [("1", (1, 0, 1, 0)), ("2", (2, 1, 2, 1))])
def test_pull_up_of_projectives(x, dims):
    F = _functor("kronecker_F")
    assert pull_up(F, projective_at(F.base, x)).dim_vector() == dims


@pytest.mark.parametrize("name", ["kronecker_F", "kronecker_p"])
def test_push_down_of_projectives(name):
    F = _functor(name)
    for x in F.cover.quiver.vertices:
        down = push_down(F, projective_at(F.cover, x))
        assert is_isomorphic(down, projective_at(F.base, F.object_map[x]))


def _cover_modules(E):
    for x in E.quiver.vertices:
        yield simple_module(E, x)
        yield projective_at(E, x)
        yield injective_at(E, x)


@given(st.lists(st.integers(0, 11), min_size=1, max_size=3))
def test_push_down_keeps_dimension(picks):
    F = _functor("kronecker_p")
    mods = list(_cover_modules(F.cover))
    M = direct_sum([mods[i] for i in picks])
    down = push_down(F, M)
    assert down.dim == M.dim
    assert down.check() == []


def test_push_down_commutes_with_tau_in_dimension():
    F = _functor("kronecker_F")
    for M in _cover_modules(F.cover):
        assert ar_translate(M).dim == ar_translate(push_down(F, M)).dim


def test_push_down_of_pull_up_doubles():
    F = _functor("kronecker_F")
    for x in F.base.quiver.vertices:
        N = projective_at(F.base, x)
        assert is_isomorphic(push_down(F, pull_up(F, N)), direct_sum([N, N]))


def test_identity_covering():
    A = algebra("example_c.alg")
    rep = verify_covering_functor(identity_covering(A))
    assert rep.covering and rep.galois


def _riedtmann_printed():
    ws = workspace("riedtmann_window.alg")
    fs = ws.functors["riedtmann_F"]
    maps = dict(fs.maps)
    for a in maps:
        if a.startswith("delta"):
            i = int(a[5:].replace("m", "-"))
            maps[a] = [(1, ("delta",)), (1, ("rho", "delta"))] if i % 4 in (0, 2) else [(1, ("delta",))]
    return dataclasses.replace(fs, maps=maps)


def test_riedtmann_printed_functor_is_not_well_defined():
    ws = workspace("riedtmann_window.alg")
    F = functor_from_spec(ws, _riedtmann_printed())
    assert well_definedness_failures(F)
    with pytest.raises(NotWellDefined):
        verify_covering_functor(F)


def test_riedtmann_corrected_functor():
    F = _functor("riedtmann_F", "riedtmann_window.alg")
    assert well_definedness_failures(F) == []
    rep = verify_covering_functor(F)
    assert rep.covering and rep.local
    assert rep.galois is False
    assert any("sigma" in n for n in rep.galois_notes)


def test_push_down_needs_interior_support():
    F = _functor("riedtmann_F", "riedtmann_window.alg")
    outside = next(x for x in F.cover.quiver.vertices if not F.is_interior(x))
    with pytest.raises(SupportOutsideInterior):
        push_down(F, simple_module(F.cover, outside))


def test_all_ones_voltage_is_unbalanced():
    A = algebra("riedtmann.alg")
    with pytest.raises(UnbalancedRelation):
        voltage_cover_algebra(A, {a.name: 1 for a in A.quiver.arrows}, GroupSpec("Z", window=3))


@pytest.mark.parametrize(
    "alg, voltage, group",
    [
        ("kronecker.alg", {"b": 1}, "Z/2"),
        ("kronecker.alg", {"b": 1}, "Z/3"),
        ("example_a.alg", {"l": 1}, "Z/2"),
        ("example_a.alg", {"l": 1, "a1": 1}, "Z/3"),
        ("example_c.alg", {}, "Z/2"),
    ],
)
def test_voltage_cover_round_trip(alg, voltage, group):
    A = algebra(alg)
    G = GroupSpec.parse(group)
    F = voltage_cover_algebra(A, voltage, G)
    E = F.cover
    assert len(E.quiver.vertices) == G.size * len(A.quiver.vertices)
    assert E.dim == G.size * A.dim
    rep = verify_covering_functor(F)
    assert rep.covering and rep.galois
    B, proj = quotient_by_action(E, F.action, F.arrow_action)
    assert B.dim == A.dim
    assert find_isomorphism(B.quiver.vertices, [(a.src, a.tgt) for a in B.quiver.arrows],
                            A.quiver.vertices, [(a.src, a.tgt) for a in A.quiver.arrows]) is not None


def test_zero_voltage_cover_is_disconnected_copies():
    A = algebra("a2.alg")
    F = voltage_cover_algebra(A, {}, GroupSpec.parse("Z/2"))
    assert len(F.cover.quiver.components()) == 2


def test_z_window_interior():
    A = algebra("kronecker.alg")
    F = voltage_cover_algebra(A, {"b": 1}, GroupSpec("Z", window=2))
    assert F.interior is not None and F.interior
    rep = verify_covering_functor(F)
    assert rep.covering


@given(st.data(), st.integers(2, 5))
def test_path_voltage_is_additive(data, n):
    G = GroupSpec("cyclic", order=n)
    v = {"a1": 1, "b": 2, "l": 3}
    Q = algebra("example_a.alg").quiver
    here, word = data.draw(st.sampled_from(Q.vertices)), []
    start = here
    for _ in range(data.draw(st.integers(0, 4))):
        outs = Q.out_arrows[here]
        if not outs:
            break
        a = data.draw(st.sampled_from(outs))
        word.insert(0, a.name)
        here = a.tgt
    p = Q.path(word, at=start)
    assert path_voltage(p, v, G) == sum(v.get(a, 0) for a in word) % n


def test_map_to_wrong_hom_space_rejected():
    A = algebra("kronecker.alg")
    with pytest.raises(CoveringError):
        functor_from_maps(A, A, {"1": "1", "2": "2"}, {"a": [(1, ("a",))]})


def test_identity_on_a_lazy_path_is_not_radical():
    A = algebra("a2.alg")
    F = functor_from_maps(A, algebra("kronecker.alg"), {"1": "1", "2": "1"}, {"a": [(1, ())]})
    assert any("not radical" in m for m in well_definedness_failures(F))
    with pytest.raises(NotWellDefined):
        verify_covering_functor(F)


def test_empty_fibre():
    # a2 embeds as the arrow a1 of example_a; vertices 3, 4, 5 have no preimage
    F = functor_from_maps(algebra("a2.alg"), algebra("example_a.alg"), {"1": "2", "2": "1"},
                          {"a": [(1, ("a1",))]})
    assert well_definedness_failures(F) == []
    with pytest.raises(FibreEmpty):
        verify_covering_functor(F)
