import dataclasses

import pytest
from hypothesis import given

from conftest import algebra, component
from strategies import acyclic_quivers

from arcover.algebra import Algebra, Arrow, Quiver, make_relation
from arcover.field import Field
from arcover.groups import GroupSpec
from arcover.hochschild import hh1_dim
from arcover.knitting import NotRepresentationFinite, knit_component
from arcover.laura import (
    NotStandardFlagged,
    OutOfImplementedCase,
    ProjectiveOutsideComponent,
    StepFailed,
    analyze_component,
    covering_algebra_from_cover,
    left_part,
    maximal_projectives,
    theorem1_report,
    verify_left_section,
    verify_maximal_filtration,
)
from arcover.tq_covering import pi1_rank, voltage_cover_tq


@pytest.mark.parametrize(
    "section, ok",
    [
        (["P2", "I2"], True),
        (["P1", "P2"], True),
        (["P1", "I2"], False),
        (["P1"], True),  # P1 is its own only predecessor
        (["nope"], False),
    ],
)
def test_left_sections_of_a2(section, ok):
    chk = verify_left_section(component("a2.tq"), section)
    assert chk.ok is ok
    assert bool(chk.reason) is not ok


def test_left_section_reasons():
    G = component("a2.tq")
    assert "convex" in verify_left_section(G, ["P1", "I2"]).reason
    assert verify_left_section(G, ["P2", "I2"]).n == {"P1": 1, "P2": 0, "I2": 0}


@given(acyclic_quivers(max_vertices=5, path_only=True))
def test_projectives_and_injectives_are_sections(Q):
    G = knit_component(Algebra(Field(0), Q, []))
    assert verify_left_section(G, sorted(G.projective)).ok
    assert verify_left_section(G, sorted(G.injective)).ok


def test_maximal_projectives_of_example_a():
    assert maximal_projectives(component("example_a.tq")) == (["P1"], ["I5"])


def test_filtration_of_example_a():
    rep = verify_maximal_filtration(algebra("example_a.alg"), ["2", "3", "4"], ["5", "1"],
                                    component("example_a.tq"))
    assert rep.ok
    assert "coextension at 5" in rep.steps[1]
    assert "extension at 1" in rep.steps[2]
    assert rep.steps[0].endswith("(9 indecomposables)")


@pytest.mark.parametrize(
    "base, added, step",
    [
        (["2", "4"], ["3", "5", "1"], 0),
        (["2", "3", "4"], ["1"], 0),
        (["3", "4", "5"], ["2", "1"], 0),  # the double arrow makes C representation-infinite
        (["3", "4"], ["2", "5", "1"], 1),
        (["2", "3"], ["4", "5", "1"], 1),
    ],
)
def test_filtration_failures(base, added, step):
    A = algebra("example_a.alg")
    rep = verify_maximal_filtration(A, base, added, component("example_a.tq"), cap=20)
    assert not rep.ok
    assert rep.failure.step == step
    with pytest.raises(StepFailed):
        verify_maximal_filtration(A, base, added, component("example_a.tq"), cap=20, strict=True)


def _loop_algebra():
    Q = Quiver(["1"], [Arrow("r", "1", "1")])
    return Algebra(Field(0), Q, [make_relation([(1, Q.path(("r", "r")))], Field(0))])


def test_left_parts():
    lp = left_part(algebra("a2.alg"))
    assert sorted(lp.members) == ["I2", "P1", "P2"]
    assert "I2" in lp.ext_injectives
    assert left_part(_loop_algebra()).members == []
    assert left_part(algebra("riedtmann.alg")).members == []
    with pytest.raises(NotRepresentationFinite):
        left_part(algebra("kronecker.alg"), cap=8)


def test_analyze_knitted_a2():
    rep = analyze_component(knit_component(algebra("a2.alg")))
    assert rep.non_semiregular and rep.faithful is True
    assert rep.cycle_vertices == []
    assert analyze_component(component("riedtmann.tq")).cycle_vertices


def _flag_standard(G):
    return dataclasses.replace(G, standard=True)


def test_trivial_cover_gives_back_the_algebra():
    A = algebra("a2.alg")
    G = _flag_standard(component("a2.tq"))
    res = covering_algebra_from_cover(A, voltage_cover_tq(G, {}, GroupSpec("trivial")))
    assert res.algebra.dim == A.dim
    assert len(res.algebra.quiver.arrows) == 1
    assert res.report.covering and res.report.galois

    A = algebra("example_a.alg")
    res = covering_algebra_from_cover(A, voltage_cover_tq(component("example_a.tq"), {}, GroupSpec("trivial")))
    assert res.mode == "voltage search"
    assert not any(res.voltage.values())
    assert res.algebra.dim == A.dim


def test_cover_algebra_errors():
    trivial = GroupSpec("trivial")
    with pytest.raises(NotStandardFlagged):
        covering_algebra_from_cover(algebra("riedtmann.alg"), voltage_cover_tq(component("riedtmann.tq"), {}, trivial))
    with pytest.raises(ProjectiveOutsideComponent):
        covering_algebra_from_cover(algebra("example_a.alg"),
                                    voltage_cover_tq(_flag_standard(component("a2.tq")), {}, trivial))
    pi = voltage_cover_tq(component("example_a.tq"), {"I3S3": 1, "I4S3": 1}, GroupSpec("Z", window=2))
    with pytest.raises(OutOfImplementedCase):
        covering_algebra_from_cover(algebra("example_a.alg"), pi)


def test_theorem1_on_non_standard_algebra():
    rep = theorem1_report(algebra("riedtmann.alg"), component("riedtmann.tq"))
    assert rep.passed
    assert rep.presentation.kind == "trivial"
    assert not rep.verdicts["tree"]
    assert any(line.startswith("pattern:") for line in rep.lines())


@pytest.mark.parametrize(
    "alg, tq",
    [
        ("a2.alg", "a2.tq"),
        ("kronecker.alg", "kronecker.tq"),
        ("example_a.alg", "example_a.tq"),
        ("example_c.alg", "example_c.tq"),
        ("riedtmann.alg", "riedtmann.tq"),
    ],
)
def test_rank_bounded_by_hh1(alg, tq):
    assert pi1_rank(component(tq)).rank_H <= hh1_dim(algebra(alg))[2]
