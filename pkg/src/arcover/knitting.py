"""Auslander-Reiten components by knitting with explicit almost split sequences.

Starting from the indecomposable projectives, every non-injective vertex M
gets its almost split sequence ``0 -> M -> E -> τ⁻¹M -> 0`` built as a
pushout of a projective presentation of ``τ⁻¹M`` along a socle element of
``Ext¹(τ⁻¹M, M)``.  The summands of E are the direct successors of M.
Non-projective vertices also get their τ, so periodic parts are reached.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg as la
from .algebra import Algebra, Arrow
from .representation import (Hom, Module, ZeroModule, ar_translate, ar_translate_inverse, cokernel, decompose,
                             direct_sum, endomorphism_info, hom_compose, hom_space, is_injective,
                             is_isomorphic_indec, is_projective, quotient_module,
                             radical, socle_basis, syzygy, top_dims)
from .translation_quiver import CapExceeded, TQError, TranslationQuiver


class KnittingError(TQError):
    pass


class NoSeed(KnittingError):
    pass


class NotRepresentationFinite(KnittingError):
    pass


@dataclass
class ARSequence:
    left: Module
    middle: Module
    right: Module
    inclusion: Hom  # left -> middle
    summands: list[Module]


def _flat(f: Hom, verts) -> list:
    return [x for w in verts for row in f[w] for x in row]


def almost_split_sequence(M: Module) -> ARSequence:
    """The almost split sequence starting at an indecomposable non-injective M."""
    A, F = M.A, M.F
    verts = A.quiver.vertices
    N = ar_translate_inverse(M)
    if N.is_zero():
        raise KnittingError(f"{M.name} is injective")
    omega, pc, iota = syzygy(N)
    phis = hom_space(omega, M)
    triv = [hom_compose(h, iota, omega, F) for h in hom_space(pc.P, M)]
    info = endomorphism_info(M)
    if info.local is not True:
        raise KnittingError(f"End({M.name}) is not certified local")
    # unknowns: c over phis, then d_g over triv for each radical g
    rows: list[dict] = []
    nphi, ntriv = len(phis), len(triv)
    flat_trivial = [_flat(t, verts) for t in triv]
    for gi, g in enumerate(info.radical):
        cols = [_flat(hom_compose(g, p, omega, F), verts) for p in phis]
        base = nphi + gi * ntriv
        for r in range(len(cols[0]) if cols else 0):
            row = {i: cols[i][r] for i in range(nphi) if cols[i][r]}
            for j in range(ntriv):
                if flat_trivial[j][r]:
                    row[base + j] = F.neg(flat_trivial[j][r])
            if row:
                rows.append(row)
    nvars = nphi + len(info.radical) * ntriv
    sols = la.nullspace_sparse(rows, nvars, F) if rows else [
        [F.one if k == i else F.zero for k in range(nvars)] for i in range(nvars)]
    split = la.RowSpace(F)
    for t in flat_trivial:
        split.add(la.to_sparse(t))
    phi = None
    for s in sols:
        c = s[:nphi]
        if not any(c):
            continue
        cand = {w: la.zeros(M.dims[w], omega.dims[w], F) for w in verts}
        for i, ci in enumerate(c):
            if ci:
                for w in verts:
                    cand[w] = la.madd(cand[w], la.mscale(ci, phis[i][w], F), F)
        if not split.contains(la.to_sparse(_flat(cand, verts))):
            phi = cand
            break
    if phi is None:
        raise KnittingError(f"no almost split sequence found at {M.name}")
    S = direct_sum([M, pc.P])
    psi = {}
    for w in verts:
        top = phi[w]
        bot = [[F.neg(x) for x in row] for row in iota[w]]
        psi[w] = top + bot
    E, proj = cokernel(psi, omega, S, f"E({M.name})")
    inc = {w: [row[:M.dims[w]] for row in proj[w]] if proj[w] else [] for w in verts}
    parts = [s.module for s in decompose(E)]
    return ARSequence(M, E, N, inc, parts)


def _radical_summands(P: Module) -> list[Module]:
    R, _ = radical(P)
    return [] if R.is_zero() else [s.module for s in decompose(R)]


def _socle_quotient_summands(I: Module) -> list[Module]:
    Q, _ = quotient_module(I, socle_basis(I))
    return [] if Q.is_zero() else [s.module for s in decompose(Q)]


@dataclass
class _Vertex:
    name: str
    module: Module
    projective: bool
    injective: bool
    processed: bool = False
    tau_done: bool = False


@dataclass
class KnitState:
    A: Algebra
    vertices: list[_Vertex] = field(default_factory=list)
    arrows: dict[tuple[int, int], int] = field(default_factory=dict)  # (src, tgt) -> multiplicity
    tau: dict[int, int] = field(default_factory=dict)
    labels: dict[int, tuple[str, str]] = field(default_factory=dict)
    names: set[str] = field(default_factory=set)

    def find(self, M: Module) -> int | None:
        dv = M.dim_vector()
        for i, v in enumerate(self.vertices):
            if v.module.dim_vector() == dv and is_isomorphic_indec(v.module, M):
                return i
        return None

    def add(self, M: Module) -> tuple[int, bool]:
        i = self.find(M)
        if i is not None:
            return i, False
        A = self.A
        proj, inj = is_projective(M), is_injective(M)
        label = None
        if proj:
            tops = [x for x, d in top_dims(M).items() if d]
            label = ("P", tops[0])
        elif inj:
            soc = socle_basis(M)
            label = ("I", [x for x in A.quiver.vertices if soc[x]][0])
        if label:
            name = f"{label[0]}{label[1]}"
        else:
            dv = M.dim_vector()
            name = "M" + ("".join(map(str, dv)) if max(dv) < 10 else ".".join(map(str, dv)))
        while name in self.names:
            name += "'"
        self.names.add(name)
        M.name = name
        self.vertices.append(_Vertex(name, M, proj, inj))
        i = len(self.vertices) - 1
        if label:
            self.labels[i] = label
        return i, True

    def set_arrows(self, s: int, t: int, mult: int):
        old = self.arrows.get((s, t))
        if old is not None and old != mult:
            raise KnittingError(f"inconsistent multiplicity {self.vertices[s].name} -> {self.vertices[t].name}")
        self.arrows[(s, t)] = mult


def _multiplicities(st: KnitState, parts: list[Module], queue: list[int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for X in parts:
        j, new = st.add(X)
        if new:
            queue.append(j)
        out[j] = out.get(j, 0) + 1
    return out


def knit_component(A: Algebra, max_vertices: int = 80, max_dim: int | None = None,
                   on_cap: str = "raise", name: str | None = None) -> TranslationQuiver:
    """Knit the Auslander-Reiten quiver reachable from the projectives.

    With ``on_cap="window"`` a cap returns the partial component with its
    unfinished vertices flagged open; otherwise CapExceeded is raised with
    that partial component attached as ``.partial``.
    """
    from .representation import projective_at

    if not A.quiver.vertices:
        raise NoSeed("the algebra has no vertices")
    st = KnitState(A)
    queue: list[int] = []
    projs = sorted(A.quiver.vertices, key=lambda x: (projective_at(A, x).dim, A.quiver.vertex_index[x]))
    for x in projs:
        i, new = st.add(projective_at(A, x))
        if new:
            queue.append(i)
    capped = False
    while queue:
        if len(st.vertices) > max_vertices:
            capped = True
            break
        i = queue.pop(0)
        v = st.vertices[i]
        if max_dim is not None and v.module.dim > max_dim:
            capped = True
            queue.insert(0, i)
            break
        if v.projective:
            for j, m in _multiplicities(st, _radical_summands(v.module), queue).items():
                st.set_arrows(j, i, m)
        if v.injective:
            for j, m in _multiplicities(st, _socle_quotient_summands(v.module), queue).items():
                st.set_arrows(i, j, m)
        else:
            seq = almost_split_sequence(v.module)
            k, new = st.add(seq.right)
            if new:
                queue.append(k)
            st.tau[k] = i
            st.vertices[k].tau_done = True
            for j, m in _multiplicities(st, seq.summands, queue).items():
                st.set_arrows(i, j, m)
                st.set_arrows(j, k, m)
        if not v.projective and not v.tau_done:
            T = ar_translate(v.module)
            if T.is_zero():
                raise ZeroModule(f"tau of non-projective {v.name} vanished")
            k, new = st.add(T)
            if new:
                queue.append(k)
        v.processed = True
    if capped:
        # attach τ on the boundary when it is already in the window
        known = set(st.tau)
        for k, v in enumerate(st.vertices):
            if k in known or v.projective:
                continue
            j = st.find(ar_translate(v.module))
            if j is not None:
                st.tau[k] = j
    G = _to_tq(st, name or f"Gamma({A.name})", capped)
    if capped and on_cap != "window":
        err = CapExceeded(f"knitting stopped after {len(st.vertices)} vertices")
        err.partial = G
        raise err
    return G


def _to_tq(st: KnitState, name: str, capped: bool) -> TranslationQuiver:
    V = st.vertices
    verts = [v.name for v in V]
    arrows = []
    amap: dict[tuple[int, int], list[str]] = {}
    for (s, t), m in sorted(st.arrows.items()):
        for k in range(m):
            nm = f"{V[s].name}_{V[t].name}" + (f"_{k}" if m > 1 else "")
            arrows.append(Arrow(nm, V[s].name, V[t].name))
            amap.setdefault((s, t), []).append(nm)
    tau = {V[z].name: V[w].name for z, w in st.tau.items()}
    sigma = {}
    for z, w in st.tau.items():
        if capped and not V[w].processed:
            continue  # open mesh: arrows out of τz are not all known
        for (s, t), names in amap.items():
            if t != z:
                continue
            back = amap.get((w, s), [])
            if len(back) != len(names):
                raise KnittingError(f"mesh at {V[z].name} is not balanced")
            for u, b in zip(names, back):
                sigma[u] = b
    opened = set()
    if capped:
        for i, v in enumerate(V):
            if not v.processed:
                opened.add(v.name)
        for z, w in st.tau.items():
            if not V[w].processed:
                opened.add(V[z].name)
    G = TranslationQuiver(
        verts, arrows, tau, sigma,
        projective={v.name for v in V if v.projective},
        injective={v.name for v in V if v.injective},
        open=opened,
        labels={V[i].name: lab for i, lab in st.labels.items()},
        name=name,
        modules={v.name: v.module for v in V},
    )
    G.closed = not capped
    return G


def enumerate_indecomposables(A: Algebra, cap: int = 80) -> list[Module]:
    try:
        G = knit_component(A, max_vertices=cap)
    except CapExceeded as e:
        raise NotRepresentationFinite(f"more than {cap} indecomposables reachable from the projectives") from e
    return [G.modules[v] for v in G.vertices]


def mesh_additivity_failures(G: TranslationQuiver) -> list[str]:
    """Meshes whose dimension vectors are not additive."""
    out = []
    for z in G.meshes():
        t = G.tau[z]
        lhs = [a + b for a, b in zip(G.modules[z].dim_vector(), G.modules[t].dim_vector())]
        rhs = [0] * len(lhs)
        for a in G.in_arrows[z]:
            rhs = [x + y for x, y in zip(rhs, G.modules[a.src].dim_vector())]
        if lhs != rhs:
            out.append(f"mesh at {z}: {lhs} != {rhs}")
    return out


def hom_defect(G: TranslationQuiver, z: str, X: Module) -> int:
    """dim Hom(X, τz) - dim Hom(X, E) + dim Hom(X, z) for the mesh ending at z.

    For an almost split sequence this is 1 when X ≅ z and 0 otherwise.
    """
    E = [G.modules[a.src] for a in G.in_arrows[z]]
    hz = len(hom_space(X, G.modules[z]))
    he = sum(len(hom_space(X, m)) for m in E)
    ht = len(hom_space(X, G.modules[G.tau[z]]))
    return ht - he + hz


def sequence_is_exact(seq: ARSequence) -> bool:
    """Left map injective and dimensions additive."""
    F = seq.left.F
    for w in seq.left.A.quiver.vertices:
        if seq.left.dims[w] and la.rank(seq.inclusion[w], F) != seq.left.dims[w]:
            return False
    return seq.middle.dim == seq.left.dim + seq.right.dim

