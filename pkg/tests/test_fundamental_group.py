import pytest
from hypothesis import given, strategies as st

from conftest import algebra
from strategies import monomial_algebras

from arcover.algebra import Algebra, Arrow, Quiver
from arcover.field import Field
from arcover.fundamental_group import (
    Disconnected,
    GroupPresentation,
    Verdict,
    abelianization,
    cycle_rank_oracle,
    cyclic_reduce,
    free_reduce,
    inverse,
    pi1_presentation,
    simplify_group,
    tietze_steps,
)

words = st.lists(st.tuples(st.sampled_from("abc"), st.sampled_from([1, -1])), max_size=12).map(tuple)


@pytest.mark.parametrize(
    "name, verdict",
    [
        ("a2.alg", "trivial"),
        ("kronecker.alg", "free(1)"),
        ("riedtmann.alg", "trivial"),
        ("example_a.alg", "free(3)"),
        ("example_c.alg", "trivial"),
    ],
)
def test_verdicts(name, verdict):
    assert str(simplify_group(pi1_presentation(algebra(name)))) == verdict


def test_riedtmann_presentation_has_two_relators():
    gp = pi1_presentation(algebra("riedtmann.alg"))
    assert len(gp.generators) == 2
    assert len(gp.relators) == 2


@given(monomial_algebras(max_vertices=6, max_arrows=9))
def test_monomial_is_free_of_cycle_rank(A):
    # length-two zero relations impose nothing on the group
    v = simplify_group(pi1_presentation(A))
    r = cycle_rank_oracle(A)
    if r == 0:
        assert v.kind == "trivial"
    else:
        assert v == Verdict("free", r)


@given(w=words)
def test_free_reduce_is_idempotent(w):
    r = free_reduce(w)
    assert free_reduce(r) == r
    assert free_reduce(w + inverse(w)) == ()
    assert all(not (a[0] == b[0] and a[1] == -b[1]) for a, b in zip(r, r[1:]))


@given(w=words)
def test_cyclic_reduce_preserves_exponent_sums(w):
    def sums(u):
        out = {}
        for g, e in u:
            out[g] = out.get(g, 0) + e
        return {g: s for g, s in out.items() if s}
    assert sums(cyclic_reduce(w)) == sums(w)


@given(rels=st.lists(words, max_size=4))
def test_tietze_preserves_abelianization(rels):
    gp = GroupPresentation(["a", "b", "c"], [free_reduce(r) for r in rels if free_reduce(r)])
    want = abelianization(gp)
    for step in tietze_steps(gp):
        assert abelianization(step) == want


@pytest.mark.parametrize(
    "gens, rels, expected",
    [
        (["a"], [(("a", 1),) * 2], (0, 2)),
        (["a", "b"], [(("a", 1), ("b", 1), ("a", -1), ("b", -1))], (2,)),
        (["a", "b"], [], (2,)),
    ],
)
def test_abelianization(gens, rels, expected):
    assert abelianization(GroupPresentation(gens, rels)) == expected


def test_unknown_verdict_reports_torsion():
    v = simplify_group(GroupPresentation(["a", "b"], [(("a", 1),) * 2, (("b", 1),) * 3 + (("a", 1),) * 2]))
    assert v == Verdict("unknown", invariants=(0, 6))
    assert str(v) == "unknown(abelianisation Z/6)"


def test_disconnected_rejected():
    A = Algebra(Field(0), Quiver(["1", "2"], []), [])
    with pytest.raises(Disconnected):
        pi1_presentation(A)
