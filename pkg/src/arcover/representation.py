"""Right modules over a bound quiver algebra, as contravariant representations.

A right A-module M assigns a space M(x) to each vertex and, to an arrow
``a: x -> y``, a linear map ``M(a): M(y) -> M(x)`` stored as a
``dim M(x) x dim M(y)`` matrix.  So ``P_x(w) = e_x A e_w`` (paths w -> x) and
``I_x(w) = D(e_w A e_x)`` (dual of paths x -> w).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from . import linalg as la
from .algebra import Algebra, Arrow, NotConvex, Path, Quiver, Relation, convexity_witness, restrict_to_convex
from .field import Field
from .linalg import Matrix


class PresentationMismatch(ValueError):
    pass


class ZeroModule(ValueError):
    pass


class NotExtensionVertex(ValueError):
    pass


@dataclass
class Module:
    A: Algebra
    dims: dict[str, int]
    mats: dict[str, Matrix]
    name: str = ""

    @property
    def F(self) -> Field:
        return self.A.F

    @property
    def dim(self) -> int:
        return sum(self.dims.values())

    def dim_vector(self) -> tuple[int, ...]:
        return tuple(self.dims[v] for v in self.A.quiver.vertices)

    def is_zero(self) -> bool:
        return self.dim == 0

    def mat(self, arrow: str) -> Matrix:
        return self.mats[arrow]

    def path_matrix(self, p: Path) -> Matrix:
        """Action of a path: ``M(tgt) -> M(src)``."""
        F = self.F
        if not p.word:
            return la.identity(self.dims[p.src], F)
        m = self.mats[p.word[0]]
        cur_cols = self.dims[p.tgt]
        for a in p.word[1:]:
            m = la.matmul(self.mats[a], m, F, ncols=cur_cols)
        return m

    def element_matrix(self, u: dict, x: str, y: str) -> Matrix:
        """Action of an element of ``e_y A e_x``: ``M(y) -> M(x)``."""
        F = self.F
        out = la.zeros(self.dims[x], self.dims[y], F)
        for k, c in u.items():
            p = self.A.basis[k]
            if p.src != x or p.tgt != y:
                raise PresentationMismatch("element not in e_y A e_x")
            out = la.madd(out, la.mscale(c, self.path_matrix(p), F), F)
        return out

    def check(self) -> list[str]:
        """Problems with shapes and relations (empty when M is a module)."""
        errs = []
        Q = self.A.quiver
        for a in Q.arrows:
            m = self.mats.get(a.name)
            r, c = self.dims[a.src], self.dims[a.tgt]
            if m is None or len(m) != r or any(len(row) != c for row in m):
                errs.append(f"matrix of {a.name} should be {r}x{c}")
        if errs:
            return errs
        F = self.F
        for i, rel in enumerate(self.A.relations):
            tot = la.zeros(self.dims[rel.src], self.dims[rel.tgt], F)
            for c, p in rel.terms:
                tot = la.madd(tot, la.mscale(c, self.path_matrix(p), F), F)
            if not la.is_zero(tot):
                errs.append(f"relation {i} does not act as zero")
        return errs

    def __repr__(self) -> str:
        return f"Module({self.name or '?'}, dims={self.dim_vector()})"


Hom = dict[str, Matrix]  # vertex -> dim N(w) x dim M(w)


def zero_module(A: Algebra) -> Module:
    dims = {v: 0 for v in A.quiver.vertices}
    return Module(A, dims, {a.name: [] for a in A.quiver.arrows}, "0")


def simple_module(A: Algebra, x: str) -> Module:
    dims = {v: int(v == x) for v in A.quiver.vertices}
    mats = {a.name: la.zeros(dims[a.src], dims[a.tgt], A.F) for a in A.quiver.arrows}
    return Module(A, dims, mats, f"S_{x}")


def projective_at(A: Algebra, x: str) -> Module:
    """``P_x = e_x A``: at w the paths from w to x; arrows act by precomposition."""
    Q, F = A.quiver, A.F
    dims = {w: A.dim_pair(w, x) for w in Q.vertices}
    mats = {}
    for a in Q.arrows:
        u, v = a.src, a.tgt
        rows = A.basis_of(u, x)
        pos = {k: i for i, k in enumerate(rows)}
        m = la.zeros(len(rows), dims[v], F)
        ael = A.arrow_element(a.name)
        for j, k in enumerate(A.basis_of(v, x)):
            for kk, c in A.mul({k: F.one}, ael).items():
                m[pos[kk]][j] = c
        mats[a.name] = m
    return Module(A, dims, mats, f"P_{x}")


def injective_at(A: Algebra, x: str) -> Module:
    """``I_x = D(A e_x)``: at w the dual of the paths from x to w."""
    Q, F = A.quiver, A.F
    dims = {w: A.dim_pair(x, w) for w in Q.vertices}
    mats = {}
    for a in Q.arrows:
        u, v = a.src, a.tgt
        # left multiplication by a: e_u A e_x -> e_v A e_x, then transpose
        cols = A.basis_of(x, u)
        tgt = A.basis_of(x, v)
        pos = {k: i for i, k in enumerate(tgt)}
        L = la.zeros(len(tgt), len(cols), F)
        ael = A.arrow_element(a.name)
        for j, k in enumerate(cols):
            for kk, c in A.mul(ael, {k: F.one}).items():
                L[pos[kk]][j] = c
        mats[a.name] = la.transpose(L, nrows=len(cols))
    return Module(A, dims, mats, f"I_{x}")


def direct_sum(mods: Sequence[Module], name: str = "") -> Module:
    A = mods[0].A
    F = A.F
    dims = {v: sum(m.dims[v] for m in mods) for v in A.quiver.vertices}
    mats = {}
    for a in A.quiver.arrows:
        mats[a.name] = la.block_diag([(m.mats[a.name], m.dims[a.src], m.dims[a.tgt]) for m in mods], F)
    return Module(A, dims, mats, name or "+".join(m.name for m in mods))


# homomorphisms


def _unknown_index(M: Module, N: Module):
    idx = {}
    n = 0
    for w in M.A.quiver.vertices:
        idx[w] = n
        n += N.dims[w] * M.dims[w]
    return idx, n


def hom_space(M: Module, N: Module) -> list[Hom]:
    """Basis of Hom_A(M, N) by solving the intertwining equations exactly."""
    if M.A is not N.A:
        raise PresentationMismatch("modules over different algebras")
    A, F = M.A, M.F
    idx, n = _unknown_index(M, N)
    rows = []
    for a in A.quiver.arrows:
        u, v = a.src, a.tgt
        Ma, Na = M.mats[a.name], N.mats[a.name]
        # f_u Ma - Na f_v = 0, entries (i, j) with i < N(u), j < M(v)
        for i in range(N.dims[u]):
            for j in range(M.dims[v]):
                row = {}
                for k in range(M.dims[u]):
                    c = Ma[k][j]
                    if c:
                        col = idx[u] + i * M.dims[u] + k
                        row[col] = F.norm(row.get(col, 0) + c)
                for l in range(N.dims[v]):
                    c = Na[i][l]
                    if c:
                        col = idx[v] + l * M.dims[v] + j
                        row[col] = F.norm(row.get(col, 0) - c)
                row = {k: x for k, x in row.items() if x}
                if row:
                    rows.append(row)
    out = []
    for vec in la.nullspace_sparse(rows, n, F):
        f = {}
        for w in A.quiver.vertices:
            r, c = N.dims[w], M.dims[w]
            base = idx[w]
            f[w] = [[vec[base + i * c + j] for j in range(c)] for i in range(r)]
        out.append(f)
    return out


def hom_dim(M: Module, N: Module) -> int:
    return len(hom_space(M, N))


def hom_compose(g: Hom, f: Hom, M: Module, F: Field) -> Hom:
    """``g ∘ f`` for f: M -> N, g: N -> L."""
    return {w: la.matmul(g[w], f[w], F, ncols=M.dims[w]) for w in f}


def hom_apply(f: Hom, w: str, vec: Sequence, F: Field) -> list:
    return la.matvec(f[w], vec, F)


def is_homomorphism(f: Hom, M: Module, N: Module) -> bool:
    F = M.F
    for a in M.A.quiver.arrows:
        u, v = a.src, a.tgt
        lhs = la.matmul(f[u], M.mats[a.name], F, ncols=M.dims[v])
        rhs = la.matmul(N.mats[a.name], f[v], F, ncols=M.dims[v])
        if lhs != rhs:
            return False
    return True


def is_iso_map(f: Hom, M: Module, N: Module) -> bool:
    for w in M.A.quiver.vertices:
        if M.dims[w] != N.dims[w]:
            return False
        if M.dims[w] and la.inverse(f[w], M.F) is None:
            return False
    return True


def identity_hom(M: Module) -> Hom:
    return {w: la.identity(M.dims[w], M.F) for w in M.A.quiver.vertices}


# sub- and quotient modules


def submodule(M: Module, B: dict[str, list[list]], name: str = "") -> tuple[Module, Hom]:
    """Submodule spanned at each vertex by the column vectors ``B[w]``.

    Returns the module and its inclusion.  Raises if B is not stable.
    """
    A, F = M.A, M.F
    dims = {w: len(B[w]) for w in A.quiver.vertices}
    mats = {}
    for a in A.quiver.arrows:
        u, v = a.src, a.tgt
        Bu = la.transpose(B[u], nrows=M.dims[u]) if B[u] else la.zeros(M.dims[u], 0, F)
        m = la.zeros(dims[u], dims[v], F)
        for j, b in enumerate(B[v]):
            img = la.matvec(M.mats[a.name], b, F)
            if not any(img):
                continue
            x = la.solve(Bu, img, F, ncols=dims[u])
            if x is None:
                raise ValueError("subspace is not a submodule")
            for i in range(dims[u]):
                m[i][j] = x[i]
        mats[a.name] = m
    inc = {w: (la.transpose(B[w], nrows=M.dims[w]) if B[w] else la.zeros(M.dims[w], 0, F))
           for w in A.quiver.vertices}
    return Module(A, dims, mats, name), inc


def quotient_module(M: Module, B: dict[str, list[list]], name: str = "") -> tuple[Module, Hom]:
    """``M / sub`` with the canonical projection, ``B[w]`` spanning the submodule."""
    A, F = M.A, M.F
    comp = {w: la.complement_basis(B[w], M.dims[w], F) for w in A.quiver.vertices}
    dims = {w: len(comp[w]) for w in A.quiver.vertices}
    # coordinates in the basis B[w] + (standard vectors of comp[w]); keep the comp part
    proj = {}
    for w in A.quiver.vertices:
        n = M.dims[w]
        cols = [list(b) for b in B[w]]
        for j in comp[w]:
            e = [F.zero] * n
            e[j] = F.one
            cols.append(e)
        inv = la.inverse(la.transpose(cols, nrows=n), F) if n else []
        nb = len(B[w])
        proj[w] = [inv[nb + i] for i in range(dims[w])] if n else []
    mats = {}
    for a in A.quiver.arrows:
        u, v = a.src, a.tgt
        m = la.zeros(dims[u], dims[v], F)
        for j, c in enumerate(comp[v]):
            col = [row[c] for row in M.mats[a.name]]
            img = la.matvec(proj[u], col, F)
            for i in range(dims[u]):
                m[i][j] = img[i]
        mats[a.name] = m
    return Module(A, dims, mats, name), proj


def kernel(f: Hom, M: Module, N: Module, name: str = "") -> tuple[Module, Hom]:
    F = M.F
    B = {w: la.nullspace(f[w], F, ncols=M.dims[w]) if M.dims[w] else [] for w in M.A.quiver.vertices}
    return submodule(M, B, name)


def image_basis(f: Hom, M: Module, N: Module) -> dict[str, list[list]]:
    F = M.F
    return {w: la.column_basis(f[w], F) if M.dims[w] and N.dims[w] else [] for w in M.A.quiver.vertices}


def cokernel(f: Hom, M: Module, N: Module, name: str = "") -> tuple[Module, Hom]:
    return quotient_module(N, image_basis(f, M, N), name)


def radical_basis(M: Module) -> dict[str, list[list]]:
    """``rad M = M rad A``: at u, the sum of the images of arrows leaving u."""
    F = M.F
    out = {}
    for u in M.A.quiver.vertices:
        vecs = []
        for a in M.A.quiver.out_arrows[u]:
            if M.dims[a.tgt] and M.dims[u]:
                vecs.extend(la.column_basis(M.mats[a.name], F))
        out[u] = la.span_basis(vecs, F)
    return out


def socle_basis(M: Module) -> dict[str, list[list]]:
    """``soc M``: at u, the common kernel of the arrows entering u."""
    F = M.F
    out = {}
    for u in M.A.quiver.vertices:
        rows = []
        for a in M.A.quiver.in_arrows[u]:
            rows.extend(M.mats[a.name])
        out[u] = la.nullspace(rows, F, ncols=M.dims[u]) if M.dims[u] else []
    return out


def radical(M: Module) -> tuple[Module, Hom]:
    return submodule(M, radical_basis(M), f"rad {M.name}")


def top_dims(M: Module) -> dict[str, int]:
    rb = radical_basis(M)
    return {w: M.dims[w] - len(rb[w]) for w in M.A.quiver.vertices}


# projective covers and presentations


@dataclass
class ProjectiveCover:
    """``P = ⊕ P_{tops[i]} -> M`` sending the top of summand i to ``gens[i]``."""

    tops: list[str]
    gens: list[list]
    P: Module
    pi: Hom


def _proj_sum(A: Algebra, tops: Sequence[str]) -> Module:
    if not tops:
        return zero_module(A)
    return direct_sum([projective_at(A, x) for x in tops], "+".join(f"P_{x}" for x in tops))


def _proj_offsets(A: Algebra, tops: Sequence[str], w: str) -> list[int]:
    offs, o = [], 0
    for x in tops:
        offs.append(o)
        o += A.dim_pair(w, x)
    return offs


def map_from_projectives(A: Algebra, tops: Sequence[str], gens: Sequence[list], M: Module) -> Hom:
    """The map ``⊕ P_{tops[i]} -> M`` with ``e_{tops[i]} -> gens[i]``."""
    F = A.F
    P = _proj_sum(A, tops)
    f = {}
    for w in A.quiver.vertices:
        m = la.zeros(M.dims[w], P.dims[w], F)
        offs = _proj_offsets(A, tops, w)
        for i, x in enumerate(tops):
            for j, k in enumerate(A.basis_of(w, x)):
                col = la.matvec(M.path_matrix(A.basis[k]), gens[i], F)
                for r in range(M.dims[w]):
                    m[r][offs[i] + j] = col[r]
        f[w] = m
    return f


def projective_cover(M: Module) -> ProjectiveCover:
    A, F = M.A, M.F
    rb = radical_basis(M)
    tops, gens = [], []
    for x in A.quiver.vertices:
        for j in la.complement_basis(rb[x], M.dims[x], F):
            e = [F.zero] * M.dims[x]
            e[j] = F.one
            tops.append(x)
            gens.append(e)
    P = _proj_sum(A, tops)
    return ProjectiveCover(tops, gens, P, map_from_projectives(A, tops, gens, M))


def syzygy(M: Module) -> tuple[Module, ProjectiveCover, Hom]:
    pc = projective_cover(M)
    K, inc = kernel(pc.pi, pc.P, M, f"Ω{M.name}")
    return K, pc, inc


@dataclass
class Presentation:
    """Minimal projective presentation ``⊕P_{tops1} -> ⊕P_{tops0} -> M -> 0``.

    ``U[i][j]`` is the algebra element in ``e_{tops0[i]} A e_{tops1[j]}``
    giving the component ``P_{tops1[j]} -> P_{tops0[i]}``.
    """

    tops0: list[str]
    tops1: list[str]
    U: list[list[dict]]
    cover0: ProjectiveCover
    omega: Module
    omega_inc: Hom


def minimal_presentation(M: Module) -> Presentation:
    A, F = M.A, M.F
    K, pc0, inc = syzygy(M)
    pc1 = projective_cover(K)
    U = [[{} for _ in pc1.tops] for _ in pc0.tops]
    for j, (y, g) in enumerate(zip(pc1.tops, pc1.gens)):
        vec = la.matvec(inc[y], g, F)  # element of P0(y)
        offs = _proj_offsets(A, pc0.tops, y)
        for i, x in enumerate(pc0.tops):
            el = {}
            for t, k in enumerate(A.basis_of(y, x)):
                c = vec[offs[i] + t]
                if c:
                    el[k] = c
            U[i][j] = el
    return Presentation(pc0.tops, pc1.tops, U, pc0, K, inc)


def _right_mult_matrix(A: Algebra, u: dict, w: str, x: str, y: str) -> Matrix:
    """``z -> z ∘ u`` from ``e_w A e_x`` to ``e_w A e_y`` (u in e_x A e_y)."""
    F = A.F
    src = A.basis_of(x, w)
    dst = A.basis_of(y, w)
    pos = {k: i for i, k in enumerate(dst)}
    m = la.zeros(len(dst), len(src), F)
    for j, k in enumerate(src):
        for kk, c in A.mul({k: F.one}, u).items():
            m[pos[kk]][j] = c
    return m


def nakayama_map(A: Algebra, tops1: Sequence[str], tops0: Sequence[str], U) -> tuple[Module, Module, Hom]:
    """Apply ``ν = D Hom(-, A)`` to a map of projectives given by ``U``."""
    F = A.F
    I1 = direct_sum([injective_at(A, y) for y in tops1]) if tops1 else zero_module(A)
    I0 = direct_sum([injective_at(A, x) for x in tops0]) if tops0 else zero_module(A)
    f = {}
    for w in A.quiver.vertices:
        m = la.zeros(I0.dims[w], I1.dims[w], F)
        ro = 0
        for i, x in enumerate(tops0):
            co = 0
            nx = A.dim_pair(x, w)
            for j, y in enumerate(tops1):
                ny = A.dim_pair(y, w)
                if U[i][j] and nx and ny:
                    R = _right_mult_matrix(A, U[i][j], w, x, y)  # ny x nx
                    for r in range(nx):
                        for c in range(ny):
                            m[ro + r][co + c] = R[c][r]
                co += ny
            ro += nx
        f[w] = m
    return I1, I0, f


def ar_translate(M: Module) -> Module:
    """``τM = D Tr M``, computed as the kernel of ν applied to a minimal presentation."""
    if M.is_zero():
        return zero_module(M.A)
    pres = minimal_presentation(M)
    I1, I0, f = nakayama_map(M.A, pres.tops1, pres.tops0, pres.U)
    K, _ = kernel(f, I1, I0, f"τ{M.name}")
    return K


def opposite_algebra(A: Algebra) -> Algebra:
    """``A^op``: arrows reversed (same names), relation words reversed."""
    cached = getattr(A, "_opposite", None)
    if cached is not None:
        return cached
    Q = A.quiver
    Qop = Quiver(list(Q.vertices), [Arrow(a.name, a.tgt, a.src) for a in Q.arrows])
    rels = [Relation([(c, Path(p.tgt, p.src, tuple(reversed(p.word)))) for c, p in r.terms]) for r in A.relations]
    Aop = Algebra(A.F, Qop, rels, cap=A.cap, name=f"{A.name}^op")
    A._opposite = Aop
    Aop._opposite = A
    return Aop


def dual_module(M: Module, target: Algebra) -> Module:
    """``DM`` as a right module over the opposite algebra ``target``."""
    mats = {a: la.transpose(m, nrows=M.dims[M.A.quiver.arrow[a].tgt]) for a, m in M.mats.items()}
    return Module(target, dict(M.dims), mats, f"D{M.name}")


def ar_translate_inverse(M: Module) -> Module:
    """``τ⁻¹M = D τ_{A^op} D M``."""
    if M.is_zero():
        return zero_module(M.A)
    Aop = opposite_algebra(M.A)
    t = ar_translate(dual_module(M, Aop))
    out = dual_module(t, M.A)
    out.name = f"τ⁻¹{M.name}"
    return out


def proj_dim(M: Module, cap: int = 8) -> int | None:
    """Projective dimension, or None meaning ``>= cap``."""
    cur = M
    for n in range(cap):
        if cur.is_zero():
            return 0 if n == 0 else n - 1
        K, _, _ = syzygy(cur)
        if K.is_zero():
            return n
        cur = K
    return None


def inj_dim(M: Module, cap: int = 8) -> int | None:
    Aop = opposite_algebra(M.A)
    return proj_dim(dual_module(M, Aop), cap)


def is_projective(M: Module) -> bool:
    return M.is_zero() or syzygy(M)[0].is_zero()


def is_injective(M: Module) -> bool:
    return is_projective(dual_module(M, opposite_algebra(M.A)))


# endomorphism rings, locality and decomposition


def _hom_flat(f: Hom, verts: Sequence[str]) -> list:
    return [x for w in verts for row in f[w] for x in row]


def _block_matrix(f: Hom, M: Module) -> Matrix:
    """The endomorphism f as one square matrix on ``⊕ M(w)``."""
    blocks = [(f[w], M.dims[w], M.dims[w]) for w in M.A.quiver.vertices]
    return la.block_diag(blocks, M.F)


def _is_nilpotent(X: Matrix, F: Field) -> bool:
    n = len(X)
    if n == 0:
        return True
    P = X
    k = 1
    while k < n:
        P = la.matmul(P, P, F)
        k *= 2
    return la.is_zero(P)


def _poly_roots(coeffs: list, F: Field) -> list:
    """Roots in F of ``sum coeffs[i] t^i`` (coefficients low to high)."""
    import sympy

    t = sympy.Symbol("t")
    if F.p:
        if F.p <= 4096:
            out = []
            for lam in range(F.p):
                s = 0
                for c in reversed(coeffs):
                    s = (s * lam + c) % F.p
                if s == 0:
                    out.append(lam)
            return out
        poly = sympy.Poly(list(reversed([int(c) for c in coeffs])), t, modulus=F.p)
        return sorted({int(r) % F.p for r in poly.ground_roots()})
    poly = sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in coeffs])), t, domain="QQ")
    roots = []
    for r in poly.ground_roots():
        r = sympy.Rational(r)
        roots.append(F(f"{r.p}/{r.q}"))
    return sorted(roots)


def _min_poly(X: Matrix, F: Field) -> list:
    """Minimal polynomial of a square matrix (monic, low to high)."""
    n = len(X)
    rs = la.RowSpace(F, track=True)
    powers = []
    P = la.identity(n, F)
    for d in range(n + 1):
        flat = [x for row in P for x in row]
        sp = la.to_sparse(flat)
        ex = rs.express(sp)
        if ex is not None:
            coeffs = [F.zero] * (d + 1)
            for k, v in ex.items():
                coeffs[k] = F.neg(v)
            coeffs[d] = F.one
            return coeffs
        rs.add(sp)
        powers.append(P)
        P = la.matmul(P, X, F)
    raise AssertionError("Cayley-Hamilton violated")


def _splitting_shift(X: Matrix, F: Field):
    """Some eigenvalue λ in F with ``X - λ`` singular but not nilpotent."""
    n = len(X)
    for lam in _poly_roots(_min_poly(X, F), F):
        Y = [[F.norm(X[i][j] - (lam if i == j else 0)) for j in range(n)] for i in range(n)]
        if not _is_nilpotent(Y, F):
            return Y
    return None


@dataclass
class EndoInfo:
    basis: list[Hom]
    local: bool | None  # True: End M/J ≅ k; False: split found; None: undecided
    radical: list[Hom] = field(default_factory=list)  # basis of J when local
    splitter: Matrix | None = None  # block endomorphism for a Fitting split
    eigen: list = field(default_factory=list)


def _unblock(X: Matrix, M: Module) -> Hom:
    f, o = {}, 0
    for w in M.A.quiver.vertices:
        d = M.dims[w]
        f[w] = [row[o:o + d] for row in X[o:o + d]]
        o += d
    return f


def endomorphism_info(M: Module, seed: int = 0, tries: int = 24) -> EndoInfo:
    """Decide whether End(M) is local with residue field the base field.

    Either certifies locality (every basis element is a scalar plus a
    nilpotent, and the nilpotent parts span a nilpotent ideal) or finds a
    singular, non-nilpotent endomorphism to split M with.
    """
    if M.is_zero():
        raise ZeroModule("zero module")
    F = M.F
    E = hom_space(M, M)
    mats = [_block_matrix(f, M) for f in E]
    n = M.dim
    # candidates: basis, pairwise products and sums, then pseudo-random combinations
    def cands():
        yield from mats
        for i in range(len(mats)):
            for j in range(len(mats)):
                yield la.matmul(mats[i], mats[j], F)
                if i < j:
                    yield la.madd(mats[i], mats[j], F)
        rng = random.Random(seed)
        for _ in range(tries):
            X = la.zeros(n, n, F)
            for m in mats:
                c = F(rng.randrange(-7, 8)) if not F.p else rng.randrange(F.p)
                if c:
                    X = la.madd(X, la.mscale(c, m, F), F)
            yield X

    lams = []
    scalar_ok = True
    for m in mats:
        mp = _min_poly(m, F)
        roots = _poly_roots(mp, F)
        found = None
        for lam in roots:
            Y = [[F.norm(m[i][j] - (lam if i == j else 0)) for j in range(n)] for i in range(n)]
            if _is_nilpotent(Y, F):
                found = lam
            else:
                return EndoInfo(E, False, splitter=Y)
        if found is None:
            scalar_ok = False
            lams.append(None)
        else:
            lams.append(found)
    if scalar_ok:
        J = []
        for m, lam in zip(mats, lams):
            J.append([[F.norm(m[i][j] - (lam if i == j else 0)) for j in range(n)] for i in range(n)])
        rs = la.RowSpace(F)
        for X in J:
            rs.add(la.to_sparse([x for row in X for x in row]))
        Jb = [la.to_dense(r, n * n, F) for r in rs.basis()]
        Jm = [[b[i * n:(i + 1) * n] for i in range(n)] for b in Jb]
        closed = True
        for X in Jm:
            for Y in Jm:
                Z = la.matmul(X, Y, F)
                if not rs.contains(la.to_sparse([x for row in Z for x in row])):
                    closed = False
                    break
            if not closed:
                break
        if closed and len(Jm) == len(mats) - 1:
            # J closed under products and spanned by nilpotents: check J^k = 0
            cur = Jm
            for _ in range(n + 1):
                if not cur:
                    break
                nxt = la.RowSpace(F)
                for X in cur:
                    for Y in Jm:
                        nxt.add(la.to_sparse([x for row in la.matmul(X, Y, F) for x in row]))
                cur = [[la.to_dense(r, n * n, F)[i * n:(i + 1) * n] for i in range(n)] for r in nxt.basis()]
            if not cur:
                return EndoInfo(E, True, radical=[_unblock(X, M) for X in Jm], eigen=lams)
    for X in cands():
        Y = _splitting_shift(X, F)
        if Y is not None:
            return EndoInfo(E, False, splitter=Y)
    return EndoInfo(E, None)


def is_indecomposable(M: Module) -> str:
    """"yes", "no" or "unknown" (absolute indecomposability)."""
    info = endomorphism_info(M)
    return {True: "yes", False: "no", None: "unknown"}[info.local]


def trace_form_corank(M: Module) -> int:
    """Codimension of the trace-form radical of End(M) (meaningful in characteristic 0)."""
    F = M.F
    E = [_block_matrix(f, M) for f in hom_space(M, M)]
    d = len(E)
    G = [[F.zero] * d for _ in range(d)]
    for i in range(d):
        for j in range(d):
            P = la.matmul(E[i], E[j], F)
            G[i][j] = F.norm(sum((P[k][k] for k in range(len(P))), F.zero))
    return la.rank(G, F)


def fitting_split(M: Module, Y: Matrix) -> tuple[Module, Module]:
    """``M = ker Y^n ⊕ im Y^n`` for a block endomorphism Y."""
    F = M.F
    n = M.dim
    P = Y
    k = 1
    while k < n:
        P = la.matmul(P, P, F)
        k *= 2
    f = _unblock(P, M)
    K, _ = kernel(f, M, M)
    I, _ = submodule(M, image_basis(f, M, M))
    return K, I


@dataclass
class Summand:
    module: Module
    certified: bool  # End is local with residue field F


def decompose(M: Module) -> list[Summand]:
    """Split M into indecomposable summands (certified when End is local)."""
    if M.is_zero():
        return []
    # split off the vertexwise pieces first when the support is disconnected
    info = endomorphism_info(M)
    if info.local is True:
        return [Summand(M, True)]
    if info.local is None:
        return [Summand(M, False)]
    K, I = fitting_split(M, info.splitter)
    return decompose(K) + decompose(I)


def is_isomorphic_indec(M: Module, N: Module) -> bool:
    """Isomorphism test for indecomposables: some Hom basis element is invertible."""
    if M.dim_vector() != N.dim_vector():
        return False
    for f in hom_space(M, N):
        if is_iso_map(f, M, N):
            return True
    return False


def is_isomorphic(M: Module, N: Module) -> bool:
    if M.dim_vector() != N.dim_vector():
        return False
    ms = [s.module for s in decompose(M)]
    ns = [s.module for s in decompose(N)]
    if len(ms) != len(ns):
        return False
    used = [False] * len(ns)
    for m in ms:
        for j, n in enumerate(ns):
            if not used[j] and is_isomorphic_indec(m, n):
                used[j] = True
                break
        else:
            return False
    return True


# annihilators


def annihilator_basis(A: Algebra, mods: Sequence[Module]) -> list[dict]:
    """Basis (as elements of A) of the intersection of the annihilators."""
    F = A.F
    out = []
    for (x, y), idx in A.pair_basis.items():
        # element u = sum c_k b_k in e_y A e_x acts M(y) -> M(x); need all zero
        eqs = []
        for M in mods:
            mats = [M.path_matrix(A.basis[k]) for k in idx]
            for r in range(M.dims[x]):
                for c in range(M.dims[y]):
                    row = {t: m[r][c] for t, m in enumerate(mats) if m[r][c]}
                    if row:
                        eqs.append(row)
        for vec in la.nullspace_sparse(eqs, len(idx), F):
            out.append({idx[t]: v for t, v in enumerate(vec) if v})
    return out


def quotient_algebra(A: Algebra, ideal: Sequence[dict], name: str = "") -> Algebra:
    """Presentation of ``A / ideal`` for a two-sided ideal given by spanning elements.

    Vertices whose idempotent lies in the ideal are dropped.  Arrows are
    chosen among the original arrows where possible.
    """
    from .category import FinCategory, extract_presentation

    F = A.F
    Q = A.quiver
    pair_of = {}
    for key, idx in A.pair_basis.items():
        for k in idx:
            pair_of[k] = key
    rs = la.RowSpace(F)
    for u in ideal:
        parts: dict = {}
        for k, c in u.items():
            parts.setdefault(pair_of[k], {})[k] = c
        for part in parts.values():
            rs.add(part)
    keep = [v for v in Q.vertices if not rs.contains(A.idempotent(v))]
    free = {key: [k for k in idx if k not in rs.pivots] for key, idx in A.pair_basis.items()}
    pos = {k: t for idx in free.values() for t, k in enumerate(idx)}

    def down(u):
        return {pos[k]: c for k, c in rs.reduce(u).items()}

    def up(x, y, v):
        idx = free.get((x, y), [])
        return {idx[t]: c for t, c in v.items()}

    def compose(x, y, z, g, f):
        return down(A.mul(up(y, z, g), up(x, y, f)))

    def radical(x, y):
        out = []
        for k in A.basis_of(x, y):
            if A.basis[k].word:
                v = down({k: F.one})
                if v:
                    out.append(v)
        return out

    def hom_dim(x, y):
        return len(free.get((x, y), []))

    preferred = {}
    for a in Q.arrows:
        if a.src in keep and a.tgt in keep:
            v = down(A.arrow_element(a.name))
            if v:
                preferred.setdefault((a.src, a.tgt), []).append((a.name, v))
    C = FinCategory(F, keep, hom_dim, compose, radical, lambda x: down(A.idempotent(x)))
    B, _ = extract_presentation(C, name=name or f"{A.name}/I",
                                preferred={k: [v for _, v in vs] for k, vs in preferred.items()},
                                arrow_names=_original_names(preferred))
    return B


def _original_names(preferred):
    """Name extracted arrows after the original arrows they came from when possible."""
    def name(x, y, k):
        got = preferred.get((x, y), [])
        return got[k][0] if k < len(got) else f"{x}_{y}_{k}"
    return name


def annihilator_quotient(A: Algebra, mods: Sequence[Module], name: str = "") -> Algebra:
    return quotient_algebra(A, annihilator_basis(A, mods), name)


# one-point (co)extensions


def one_point_extension_split(A: Algebra, v: str) -> tuple[Algebra, Module]:
    """Write ``A = B[M]`` with ``M = rad P_v`` as a module over B = A minus v."""
    others = [w for w in A.quiver.vertices if w != v]
    w = convexity_witness(A.quiver, others)
    if w is not None:
        raise NotConvex(f"complement of {v} is not convex", w)
    if A.dim_pair(v, v) != 1 or any(A.dim_pair(v, u) for u in others):
        raise NotExtensionVertex(f"{v} is not an extension vertex (paths leave it)")
    B = restrict_to_convex(A, others, name=f"{A.name}-{v}")
    P = projective_at(A, v)
    return B, restrict_module(P, B)


def one_point_coextension_split(A: Algebra, v: str) -> tuple[Algebra, Module]:
    """Write ``A = [M]B`` with ``M = I_v / soc I_v`` as a module over B = A minus v."""
    others = [w for w in A.quiver.vertices if w != v]
    w = convexity_witness(A.quiver, others)
    if w is not None:
        raise NotConvex(f"complement of {v} is not convex", w)
    if A.dim_pair(v, v) != 1 or any(A.dim_pair(u, v) for u in others):
        raise NotExtensionVertex(f"{v} is not a coextension vertex (paths enter it)")
    B = restrict_to_convex(A, others, name=f"{A.name}-{v}")
    I = injective_at(A, v)
    return B, restrict_module(I, B)


def restrict_module(M: Module, B: Algebra) -> Module:
    """Restriction to a full subcategory B (vertices of B only)."""
    dims = {w: M.dims[w] for w in B.quiver.vertices}
    mats = {a.name: M.mats[a.name] for a in B.quiver.arrows}
    out = Module(B, dims, mats, M.name)
    return out


def module_from_matrices(A: Algebra, dims: dict[str, int], mats: dict[str, Matrix], name: str = "") -> Module:
    M = Module(A, {v: dims.get(v, 0) for v in A.quiver.vertices}, {}, name)
    F = A.F
    for a in A.quiver.arrows:
        m = mats.get(a.name)
        if m is None:
            m = la.zeros(M.dims[a.src], M.dims[a.tgt], F)
        M.mats[a.name] = [[F(x) for x in row] for row in m] if M.dims[a.src] else []
    errs = M.check()
    if errs:
        raise ValueError("; ".join(errs))
    return M
