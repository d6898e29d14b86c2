import dataclasses

import pytest
from hypothesis import given, strategies as st

from conftest import component, workspace

from arcover.algebra import Arrow
from arcover.groups import GroupSpec, split_sheet
from arcover.translation_quiver import TranslationQuiver, validate_tq
from arcover.tq_covering import (
    BrokenLift,
    UnbalancedMesh,
    orbit_graph,
    pi1_rank,
    quotient_tq,
    tau_orbits,
    tq_isomorphism,
    verify_tq_covering,
    voltage_cohomology,
    voltage_cover_tq,
)


@pytest.mark.parametrize(
    "tq, nverts, rank, tree",
    [
        ("a2.tq", 2, 0, True),
        ("example_a.tq", 6, 3, False),
        ("example_c.tq", 9, 0, True),
        ("riedtmann.tq", 3, 1, False),
        ("kronecker.tq", 2, 1, False),
    ],
)
def test_orbit_graph_shapes(tq, nverts, rank, tree):
    G = component(tq)
    O = orbit_graph(G)
    r = pi1_rank(G, O)
    assert len(O.vertices) == nverts
    assert (r.rank_H, r.is_tree) == (rank, tree)
    assert r.rank_generic <= r.rank_H


def _cycle_rank_by_search(O) -> int:
    """Independent oracle: edges minus vertices plus components, components found by DFS."""
    adj = {v: set() for v in O.vertices}
    for e in O.edges:
        adj[e.a].add(e.b)
        adj[e.b].add(e.a)
    seen, comps = set(), 0
    for v in O.vertices:
        if v in seen:
            continue
        comps += 1
        stack = [v]
        while stack:
            x = stack.pop()
            if x not in seen:
                seen.add(x)
                stack.extend(adj[x] - seen)
    return len(O.edges) - len(O.vertices) + comps


@pytest.mark.parametrize("tq", ["a2.tq", "example_a.tq", "example_c.tq", "riedtmann.tq", "kronecker.tq"])
def test_rank_matches_search_oracle(tq):
    G = component(tq)
    O = orbit_graph(G)
    r = pi1_rank(G, O)
    assert r.rank_H == _cycle_rank_by_search(O)
    assert r.is_tree == (len(O.edges) == len(O.vertices) - 1 and not any(e.loop for e in O.edges))


def test_orbit_graph_partitions_orbits():
    G = component("example_c.tq")
    O = orbit_graph(G)
    assert set(O.vertex_of) == set(G.vertices)
    for orbit in tau_orbits(G):
        assert len({O.vertex_of[v] for v in orbit}) == 1


def _rename_arrows(G: TranslationQuiver, perm: list[int]) -> TranslationQuiver:
    names = [a.name for a in G.arrows]
    new = {n: f"e{perm[i]}" for i, n in enumerate(names)}
    return TranslationQuiver(
        list(G.vertices), [Arrow(new[a.name], a.src, a.tgt) for a in G.arrows], dict(G.tau),
        {new[u]: new[s] for u, s in G.sigma.items()}, set(G.projective), set(G.injective),
        set(G.open), dict(G.labels))


@given(st.data())
def test_rank_invariant_under_arrow_renaming(data):
    G = component("example_a.tq")
    perm = data.draw(st.permutations(range(len(G.arrows))))
    H = _rename_arrows(G, perm)
    assert validate_tq(H).valid
    assert pi1_rank(H) == pi1_rank(G)


def test_voltage_classes_on_closed_components():
    assert voltage_cohomology(component("a2.tq")) == []
    basis = voltage_cohomology(component("riedtmann.tq"))
    assert len(basis) == pi1_rank(component("riedtmann.tq")).rank_H == 1


@pytest.mark.parametrize("n", [2, 3, 4])
def test_cyclic_cover_of_riedtmann(n):
    G = component("riedtmann.tq")
    pi = voltage_cover_tq(G, voltage_cohomology(G)[0], GroupSpec("cyclic", order=n))
    assert len(pi.cover.vertices) == n * len(G.vertices)
    assert len(pi.cover.arrows) == n * len(G.arrows)
    assert validate_tq(pi.cover).valid
    rep = verify_tq_covering(pi)
    assert rep.covering and rep.galois
    Q, vproj, _ = quotient_tq(pi.cover, pi.vaction, pi.aaction)
    assert tq_isomorphism(Q, G) is not None
    for x in pi.cover.vertices:
        assert split_sheet(x)[0] == pi.vmap[x]


def test_fixture_z2_cover_of_example_a():
    ws = workspace("example_a.tq")
    c = ws.covers["example_a_z2"]
    pi = voltage_cover_tq(ws.first("tq"), c.voltage, GroupSpec.parse(c.group))
    assert len(pi.cover.vertices) == 34
    assert pi1_rank(pi.cover).rank_H == 5  # index-2 subgroup of a free group of rank 3


def test_z_window_cover_sizes():
    G = component("riedtmann.tq")
    pi = voltage_cover_tq(G, voltage_cohomology(G)[0], GroupSpec("Z", window=3))
    assert len(pi.cover.vertices) == 7 * len(G.vertices)
    rep = verify_tq_covering(pi)
    assert rep.covering
    assert pi.cover.open


def test_unbalanced_voltage_rejected():
    G = component("riedtmann.tq")
    with pytest.raises(UnbalancedMesh):
        voltage_cover_tq(G, {G.arrows[0].name: 1}, GroupSpec("cyclic", order=2))


def test_broken_lift_detected():
    G = component("riedtmann.tq")
    pi = voltage_cover_tq(G, voltage_cohomology(G)[0], GroupSpec("cyclic", order=2))
    a = pi.cover.arrows[0]
    other = next(b.name for b in G.arrows if b.name != pi.amap[a.name])
    bad = dataclasses.replace(pi, amap={**pi.amap, a.name: other})
    with pytest.raises(BrokenLift):
        verify_tq_covering(bad)
    rep = verify_tq_covering(bad, strict=False)
    assert not rep.covering and rep.galois is False


def test_collapsed_tau_detected():
    G = component("riedtmann.tq")
    pi = voltage_cover_tq(G, voltage_cohomology(G)[0], GroupSpec("cyclic", order=2))
    z = next(iter(pi.cover.tau))
    w = next(v for v in pi.cover.vertices if pi.vmap[v] != pi.vmap[pi.cover.tau[z]])
    tau = {**pi.cover.tau, z: w}
    # keep τ injective so only the covering condition breaks
    tau = {k: v for k, v in tau.items() if k == z or v != w}
    cover = dataclasses.replace(pi.cover, tau=tau)
    with pytest.raises(BrokenLift):
        verify_tq_covering(dataclasses.replace(pi, cover=cover))
