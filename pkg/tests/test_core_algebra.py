import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import algebra
from strategies import monomial_algebras

from arcover.algebra import (
    Algebra,
    Arrow,
    DanglingName,
    NonAdmissible,
    NotConvex,
    NotFiniteDimensional,
    Quiver,
    make_relation,
    restrict_to_convex,
)
from arcover.field import Field, FieldError, parse_field


@pytest.mark.parametrize(
    "p, x, expected",
    [
        (2, 3, 1),
        (5, -1, 4),
        (7, "3", 3),
        (0, "2/6", Fraction(1, 3)),
        (0, 5, Fraction(5)),
    ],
)
def test_field_coercion(p, x, expected):
    assert Field(p)(x) == expected


@pytest.mark.parametrize("p", [4, 6, 9, 1])
def test_non_prime_modulus_rejected(p):
    with pytest.raises(FieldError):
        Field(p)


@pytest.mark.parametrize("text, p", [("Q", 0), ("GF(2)", 2), ("GF(13)", 13)])
def test_parse_field(text, p):
    assert parse_field(text) == Field(p)


@given(p=st.sampled_from([2, 3, 5, 7, 101]), a=st.integers(1, 10**6))
def test_gf_inverse(p, a):
    F = Field(p)
    x = F(a)
    if x:
        assert F.mul(x, F.inv(x)) == 1


@pytest.mark.parametrize(
    "name, dim",
    [
        ("a2.alg", 3),
        ("kronecker.alg", 4),
        ("example_a.alg", 12),
        ("example_c.alg", 25),
        ("riedtmann.alg", 10),
        ("example_a_prime.alg", 24),
    ],
)
def test_fixture_dimensions(name, dim):
    A = algebra(name)
    assert A.dim == dim
    assert A.validate().admissible
    assert sum(A.dim_pair(x, y) for x in A.quiver.vertices for y in A.quiver.vertices) == dim


def test_riedtmann_basis_is_normal_form():
    A = algebra("riedtmann.alg")
    words = {str(p) for p in A.basis}
    assert {"rho*rho*rho", "sigma*rho", "rho*delta"} <= words
    # rho^4 = 0 and delta*sigma = rho^2
    Q = A.quiver
    assert A.reduce_path(Q.path(("rho",) * 4)) == {}
    assert A.reduce_path(Q.path(("delta", "sigma"))) == A.reduce_path(Q.path(("rho", "rho")))


def test_identity_is_unit():
    A = algebra("riedtmann.alg")
    one = A.one()
    for k in range(A.dim):
        e = {k: 1}
        assert A.mul(one, e) == e
        assert A.mul(e, one) == e


def test_mul_is_function_order():
    A = algebra("a2.alg")
    a = A.arrow_element("a")
    e1, e2 = A.idempotent("1"), A.idempotent("2")
    # a: 1 -> 2, so a = e_2 a e_1
    assert A.mul(e2, A.mul(a, e1)) == a
    assert A.mul(e1, a) == {}


@pytest.mark.parametrize("name", ["example_a.alg", "example_c.alg", "riedtmann.alg", "kronecker.alg"])
def test_associativity_on_basis(name):
    A = algebra(name)
    n = A.dim
    for i, j, k in itertools.product(range(n), repeat=3):
        left = A.mul(A.basis_product(i, j), {k: 1})
        right = A.mul({i: 1}, A.basis_product(j, k))
        assert left == right


def _forbidden_free_paths(A: Algebra) -> int:
    """Count paths with no relation word as a contiguous subword (monomial oracle)."""
    Q = A.quiver
    bad = {r.terms[0][1].word for r in A.relations}
    count = len(Q.vertices)
    frontier = [(a.name,) for a in Q.arrows]
    while frontier:
        count += len(frontier)
        nxt = []
        for w in frontier:
            for a in Q.out_arrows[Q.arrow[w[0]].tgt]:
                nw = (a.name,) + w
                if nw[:2] not in bad:
                    nxt.append(nw)
        frontier = nxt
    return count


@given(monomial_algebras())
def test_monomial_dimension_oracle(A):
    assert A.dim == _forbidden_free_paths(A)


@given(monomial_algebras())
def test_basis_closed_under_multiplication(A):
    n = A.dim
    for i in range(n):
        for j in range(n):
            pr = A.basis_product(i, j)
            assert all(0 <= k < n for k in pr)
            bi, bj = A.basis[i], A.basis[j]
            if pr:
                # a nonzero product of paths is a path from bj.src to bi.tgt
                for k in pr:
                    assert (A.basis[k].src, A.basis[k].tgt) == (bj.src, bi.tgt)


@given(monomial_algebras(field=Field(0)))
def test_random_associativity(A):
    n = A.dim
    for i, j, k in itertools.product(range(min(n, 8)), repeat=3):
        assert A.mul(A.basis_product(i, j), {k: 1}) == A.mul({i: 1}, A.basis_product(j, k))


def test_length_one_relation_rejected():
    Q = Quiver(["1", "2"], [Arrow("a", "1", "2")])
    with pytest.raises(NonAdmissible):
        Algebra(Field(0), Q, [make_relation([(1, Q.path(("a",)))], Field(0))])


def test_unknown_arrow_and_duplicate_vertex():
    with pytest.raises(DanglingName):
        Quiver(["1", "1"], [])
    Q = Quiver(["1", "2"], [Arrow("a", "1", "2")])
    with pytest.raises(DanglingName):
        Q.path(("b",))


def test_nonparallel_relation_rejected():
    Q = Quiver(["1", "2", "3"], [Arrow("a", "1", "2"), Arrow("b", "2", "3"), Arrow("c", "1", "3"), Arrow("d", "3", "3")])
    with pytest.raises(NonAdmissible):
        make_relation([(1, Q.path(("b", "a"))), (1, Q.path(("d", "b")))], Field(0))


def test_free_loop_is_infinite():
    Q = Quiver(["1"], [Arrow("r", "1", "1")])
    with pytest.raises(NotFiniteDimensional):
        Algebra(Field(0), Q, [], cap=6)


def test_restrict_to_convex():
    A = algebra("example_c.alg")
    with pytest.raises(NotConvex):
        restrict_to_convex(A, _nonconvex_pair(A))
    B = restrict_to_convex(A, [A.quiver.vertices[0]])
    assert B.dim == 1


def _nonconvex_pair(A):
    """Ends of some length-two path with distinct endpoints; its middle vertex is left out."""
    Q = A.quiver
    for a in Q.arrows:
        for b in Q.out_arrows[a.tgt]:
            if len({a.src, a.tgt, b.tgt}) == 3:
                return [a.src, b.tgt]
    raise AssertionError("no path of length two")
