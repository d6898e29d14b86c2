"""HH^0 (the centre) and HH^1 = Der(A)/Inn(A) by exact linear algebra.

A derivation is determined by its values on idempotents and arrows.  Modulo
inner derivations one may assume it kills every idempotent; such a
normalized derivation sends an arrow ``a: x -> y`` into ``e_y A e_x`` and
descends to kQ/I exactly when the Leibniz expansion of every relation
reduces to zero.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg as la
from .algebra import Algebra, Element, Path


class WrongShape(ValueError):
    pass


@dataclass
class DerivationSpace:
    """Normalized derivations (killing idempotents) and the inner ones among them.

    ``der`` and ``inner`` are bases of arrow-value tuples: each entry maps
    an arrow name to an element of ``e_{t(a)} A e_{s(a)}``.
    """

    der: list[dict[str, Element]]
    inner: list[dict[str, Element]]
    dim_der: int  # full Der(A)
    dim_inn: int  # full Inn(A)
    dim_hh0: int

    @property
    def dim_hh1(self) -> int:
        return len(self.der) - len(self.inner)


def _centralizer_rows(A: Algebra, support: list[int]):
    """Equations for z (supported on ``support``) commuting with all generators."""
    F = A.F
    gens = [A.idempotent(v) for v in A.quiver.vertices] + [A.arrow_element(a.name) for a in A.quiver.arrows]
    rows: list[dict] = []
    for g in gens:
        # zg - gz as a function of z's coordinates
        acc: dict[int, dict[int, object]] = {}
        for t, k in enumerate(support):
            e = {k: F.one}
            diff = A.add(A.mul(e, g), A.mul(g, e), -1)
            for out, c in diff.items():
                acc.setdefault(out, {})[t] = c
        rows.extend(acc.values())
    return rows


def hh0_dim(A: Algebra) -> int:
    """Dimension of the centre of A."""
    support = list(range(A.dim))
    return len(la.nullspace_sparse(_centralizer_rows(A, support), len(support), A.F))


def diagonal_indices(A: Algebra) -> list[int]:
    """Basis indices of ``⊕_x e_x A e_x``."""
    return [k for v in A.quiver.vertices for k in A.basis_of(v, v)]


def _unknowns(A: Algebra):
    cols: list[tuple[str, int]] = []
    for a in A.quiver.arrows:
        for k in A.basis_of(a.src, a.tgt):
            cols.append((a.name, k))
    return cols


def leibniz(A: Algebra, d: dict[str, Element], p: Path) -> Element:
    """``d(p)`` for a derivation killing idempotents, given on arrows."""
    out: Element = {}
    w = p.word
    Q = A.quiver
    for i, a in enumerate(w):
        val = d.get(a)
        if not val:
            continue
        left = w[:i]
        right = w[i + 1:]
        pre = A.reduce_path(Path(Q.arrow[a].tgt, p.tgt, left)) if left else A.idempotent(p.tgt)
        post = A.reduce_path(Path(p.src, Q.arrow[a].src, right)) if right else A.idempotent(p.src)
        out = A.add(out, A.mul(A.mul(pre, val), post))
    return out


def _leibniz_rows(A: Algebra, cols: list[tuple[str, int]]):
    """Linear equations on the arrow-value coordinates."""
    F = A.F
    rows = []
    for rel in A.relations:
        acc: dict[int, dict[int, object]] = {}
        for t, (a, k) in enumerate(cols):
            d = {a: {k: F.one}}
            val: Element = {}
            for c, p in rel.terms:
                if a in p.word:
                    val = A.add(val, leibniz(A, d, p), c)
            for out, c in val.items():
                acc.setdefault(out, {})[t] = c
        rows.extend(acc.values())
    return rows


def _vec_to_der(A: Algebra, cols, vec) -> dict[str, Element]:
    d: dict[str, Element] = {a.name: {} for a in A.quiver.arrows}
    for (a, k), c in zip(cols, vec):
        if c:
            d[a][k] = c
    return d


def _der_to_vec(A: Algebra, cols, d: dict[str, Element]) -> list:
    F = A.F
    return [d.get(a, {}).get(k, F.zero) for a, k in cols]


def inner_derivation(A: Algebra, z: Element) -> dict[str, Element]:
    """Arrow values of ``[z, -]``: ``a -> z a - a z``."""
    return {a.name: A.add(A.mul(z, A.arrow_element(a.name)), A.mul(A.arrow_element(a.name), z), -1)
            for a in A.quiver.arrows}


def derivation_space(A: Algebra) -> DerivationSpace:
    F = A.F
    cols = _unknowns(A)
    der_vecs = la.nullspace_sparse(_leibniz_rows(A, cols), len(cols), F)
    diag = diagonal_indices(A)
    inner_vecs = la.span_basis((_der_to_vec(A, cols, inner_derivation(A, {k: F.one})) for k in diag), F)
    z = hh0_dim(A)
    dim_der = len(der_vecs) + A.dim - len(diag)
    dim_inn = A.dim - z
    return DerivationSpace(
        [_vec_to_der(A, cols, v) for v in der_vecs],
        [_vec_to_der(A, cols, v) for v in inner_vecs],
        dim_der, dim_inn, z)


def hh1_dim(A: Algebra) -> tuple[int, int, int]:
    """``(dim Der, dim Inn, dim HH^1)``."""
    ds = derivation_space(A)
    return ds.dim_der, ds.dim_inn, ds.dim_hh1


@dataclass
class DerivationCheck:
    derivation: bool
    inner: bool | None  # None when not a derivation
    witness: str = ""


def verify_derivation(A: Algebra, d: dict[str, Element]) -> DerivationCheck:
    """Is the arrow assignment (idempotents sent to 0) a derivation, and is it inner?"""
    Q = A.quiver
    for a, val in d.items():
        if a not in Q.arrow:
            raise WrongShape(f"unknown arrow {a}")
        arr = Q.arrow[a]
        allowed = set(A.basis_of(arr.src, arr.tgt))
        if any(k not in allowed for k in val):
            raise WrongShape(f"d({a}) must lie in e_{arr.tgt} A e_{arr.src}")
    for i, rel in enumerate(A.relations):
        val: Element = {}
        for c, p in rel.terms:
            val = A.add(val, leibniz(A, d, p), c)
        if val:
            return DerivationCheck(False, None, f"Leibniz fails on relation {i}: {A.fmt_element(val)}")
    F = A.F
    cols = _unknowns(A)
    diag = diagonal_indices(A)
    rs = la.RowSpace(F)
    for k in diag:
        rs.add(la.to_sparse(_der_to_vec(A, cols, inner_derivation(A, {k: F.one}))))
    target = la.to_sparse(_der_to_vec(A, cols, d))
    return DerivationCheck(True, rs.contains(target))
