import pytest
from hypothesis import given, strategies as st

from conftest import algebra, workspace
from strategies import monomial_algebras

from arcover.algebra import Algebra, Quiver, make_relation
from arcover.field import Field
from arcover.hochschild import (
    WrongShape,
    derivation_space,
    diagonal_indices,
    hh0_dim,
    hh1_dim,
    inner_derivation,
    verify_derivation,
)


@pytest.mark.parametrize(
    "name, hh0, hh1",
    [
        ("a2.alg", 1, 0),
        ("kronecker.alg", 1, 3),
        ("example_a.alg", 2, 7),
        ("example_c.alg", 1, 0),
        ("riedtmann.alg", 4, 3),
        ("example_a_prime.alg", 1, 13),
    ],
)
def test_known_values(name, hh0, hh1):
    A = algebra(name)
    assert hh0_dim(A) == hh0
    assert hh1_dim(A)[2] == hh1


@pytest.mark.parametrize("name", ["kronecker.alg", "example_a.alg", "example_c.alg", "riedtmann.alg"])
def test_inner_dimension(name):
    A = algebra(name)
    der, inn, hh1 = hh1_dim(A)
    assert inn == A.dim - hh0_dim(A)
    assert der - inn == hh1


@given(monomial_algebras(field=Field(3)))
def test_inner_dimension_random(A):
    ds = derivation_space(A)
    assert ds.dim_inn == A.dim - ds.dim_hh0
    assert ds.dim_der >= ds.dim_inn


@pytest.mark.parametrize("name", ["example_a.alg", "riedtmann.alg"])
def test_basis_derivations_verify(name):
    A = algebra(name)
    ds = derivation_space(A)
    for d in ds.der:
        assert verify_derivation(A, d).derivation
    for d in ds.inner:
        chk = verify_derivation(A, d)
        assert chk.derivation and chk.inner


def test_commutator_is_inner():
    A = algebra("riedtmann.alg")
    # [z, -] kills the idempotents exactly when z lies in the diagonal part
    for k in diagonal_indices(A):
        chk = verify_derivation(A, inner_derivation(A, {k: 1}))
        assert chk.derivation and chk.inner


def test_rho_cubed_over_rationals():
    # the same assignment stays an outer derivation in characteristic zero
    A = workspace("riedtmann.alg").first("algebra").build(Field(0))
    chk = verify_derivation(A, {"rho": A.reduce_path(A.quiver.path(("rho",) * 3))})
    assert chk.derivation and chk.inner is False


def test_euler_on_one_arrow_is_not_a_derivation():
    A = workspace("riedtmann.alg").first("algebra").build(Field(0))
    chk = verify_derivation(A, {"rho": A.arrow_element("rho")})
    assert not chk.derivation
    assert chk.inner is None
    assert "Leibniz" in chk.witness


def test_value_outside_arrow_space_rejected():
    A = algebra("a2.alg")
    with pytest.raises(WrongShape):
        verify_derivation(A, {"a": A.idempotent("1")})
    with pytest.raises(WrongShape):
        verify_derivation(A, {"zz": {}})


def _relabel(A: Algebra, perm_v, perm_a) -> Algebra:
    Q = A.quiver
    Q2 = Quiver([Q.vertices[i] for i in perm_v], [Q.arrows[i] for i in perm_a])
    rels = [make_relation([(c, Q2.path(p.word)) for c, p in r.terms], A.F) for r in A.relations]
    return Algebra(A.F, Q2, rels)


@given(st.data())
def test_presentation_reordering_invariance(data):
    A = data.draw(monomial_algebras(field=Field(0)))
    pv = data.draw(st.permutations(range(len(A.quiver.vertices))))
    pa = data.draw(st.permutations(range(len(A.quiver.arrows))))
    B = _relabel(A, pv, pa)
    assert hh1_dim(B) == hh1_dim(A)
    assert hh0_dim(B) == hh0_dim(A)


@given(st.sampled_from([2, 3, 5]))
def test_kronecker_hh1_in_every_characteristic(p):
    A = workspace("kronecker.alg").first("algebra").build(Field(p))
    assert hh1_dim(A)[2] == 3
