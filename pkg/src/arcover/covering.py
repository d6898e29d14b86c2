"""Covering functors between bound quiver algebras.

A functor is stored as an object map on vertices plus, for every arrow of
the cover, an element of the base algebra.  Verification is exact linear
algebra on the normal-form bases.  Infinite covers are handled as finite
windows with a designated interior, and every covering check is restricted
to the interior.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable

from . import linalg as la
from .algebra import Algebra, Arrow, Element, Path, Quiver, make_relation
from .groups import GroupSpec, sheet_name, split_sheet
from .representation import Module


class CoveringError(ValueError):
    pass


class NotWellDefined(CoveringError):
    def __init__(self, msg: str, witnesses=()):
        super().__init__(msg)
        self.witnesses = list(witnesses)


class FibreEmpty(CoveringError):
    pass


class UnbalancedRelation(CoveringError):
    def __init__(self, msg: str, relation=None, voltages=()):
        super().__init__(msg)
        self.relation = relation
        self.voltages = list(voltages)


class NotFree(CoveringError):
    def __init__(self, msg: str, vertex: str | None = None):
        super().__init__(msg)
        self.vertex = vertex


class SupportOutsideInterior(CoveringError):
    pass


@dataclass
class AlgebraCoveringData:
    cover: Algebra
    base: Algebra
    object_map: dict[str, str]
    morphism_map: dict[str, Element]
    interior: set[str] | None = None  # None means every cover vertex
    group: GroupSpec | None = None
    action: dict[str, str] | None = None  # generator on cover vertices (partial on windows)
    arrow_action: dict[str, str] | None = None
    name: str = "F"
    _img: dict[int, Element] = field(default_factory=dict, repr=False)

    def is_interior(self, x: str) -> bool:
        return self.interior is None or x in self.interior

    def fibre(self, b: str) -> list[str]:
        return [x for x in self.cover.quiver.vertices if self.object_map[x] == b]

    def image_of_basis(self, k: int) -> Element:
        """F applied to the k-th normal-form path of the cover."""
        hit = self._img.get(k)
        if hit is None:
            hit = self.image_of_path(self.cover.basis[k])
            self._img[k] = hit
        return hit

    def image_of_path(self, p: Path) -> Element:
        B = self.base
        out = B.idempotent(self.object_map[p.src])
        for a in reversed(p.word):
            out = B.mul(self.morphism_map[a], out)
            if not out:
                break
        return out

    def image(self, u: Element) -> Element:
        out: Element = {}
        for k, c in u.items():
            out = self.base.add(out, self.image_of_basis(k), c)
        return out


def identity_covering(A: Algebra) -> AlgebraCoveringData:
    return AlgebraCoveringData(
        A, A, {v: v for v in A.quiver.vertices},
        {a.name: A.arrow_element(a.name) for a in A.quiver.arrows},
        group=GroupSpec("trivial"), action={v: v for v in A.quiver.vertices},
        arrow_action={a.name: a.name for a in A.quiver.arrows}, name="id")


def well_definedness_failures(F: AlgebraCoveringData) -> list[str]:
    """Reasons why F is not a functor (empty when it is one)."""
    E, B = F.cover, F.base
    out = []
    for x in E.quiver.vertices:
        if F.object_map.get(x) not in B.quiver.vertex_index:
            out.append(f"vertex {x} has no image")
    if out:
        return out
    for a in E.quiver.arrows:
        u = F.morphism_map.get(a.name)
        if u is None:
            out.append(f"arrow {a.name} has no image")
            continue
        fs, ft = F.object_map[a.src], F.object_map[a.tgt]
        for k in u:
            p = B.basis[k]
            if p.src != fs or p.tgt != ft:
                out.append(f"image of {a.name} leaves Hom({fs},{ft})")
                break
            if not p.word:
                out.append(f"image of {a.name} is not radical")
                break
    if out:
        return out
    for i, rel in enumerate(E.relations):
        img: Element = {}
        for c, p in rel.terms:
            img = B.add(img, F.image_of_path(p), c)
        if img:
            terms = " + ".join(f"{c}*{p}" for c, p in rel.terms)
            out.append(f"relation {i} ({terms}) maps to {B.fmt_element(img)}")
    return out


@dataclass
class CoveringFunctorReport:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    local: bool = False
    galois: bool | None = None
    galois_notes: list[str] = field(default_factory=list)

    @property
    def covering(self) -> bool:
        return not self.failures

    def lines(self) -> list[str]:
        scope = "local certificate on the interior" if self.local else "global"
        out = [f"functor {self.name}: {self.checked} Hom-sum maps checked ({scope})"]
        out += [f"  FAIL {f}" for f in self.failures]
        out.append(f"covering: {'yes' if self.covering else 'no'}")
        if self.galois is not None:
            out.append(f"galois: {'yes' if self.galois else 'no'}")
            out += [f"  {n}" for n in self.galois_notes]
        return out


def _sum_map_rank(F: AlgebraCoveringData, x: str, b: str, outgoing: bool) -> tuple[int, int, int]:
    """(rank, number of cover paths, dim of base Hom) for one Hom-sum map."""
    E, B = F.cover, F.base
    fx = F.object_map[x]
    cols = []
    for y in F.fibre(b):
        idx = E.basis_of(x, y) if outgoing else E.basis_of(y, x)
        cols += idx
    target = B.basis_of(fx, b) if outgoing else B.basis_of(b, fx)
    pos = {k: i for i, k in enumerate(target)}
    rows = []
    for k in cols:
        rows.append({pos[j]: c for j, c in F.image_of_basis(k).items()})
    rs = la.RowSpace(B.F)
    for r in rows:
        rs.add(r)
    return rs.dim, len(cols), len(target)


def verify_covering_functor(F: AlgebraCoveringData) -> CoveringFunctorReport:
    """Check both Hom-sum bijections at every interior cover vertex.

    Raises NotWellDefined when relations do not map into the base ideal and
    FibreEmpty when some base vertex has no preimage.
    """
    bad = well_definedness_failures(F)
    if bad:
        raise NotWellDefined(bad[0], bad)
    E, B = F.cover, F.base
    for b in B.quiver.vertices:
        if not F.fibre(b):
            raise FibreEmpty(f"no cover vertex lies over {b}")
    rep = CoveringFunctorReport(F.name, local=F.interior is not None)
    for x in E.quiver.vertices:
        if not F.is_interior(x):
            continue
        for b in B.quiver.vertices:
            for outgoing in (True, False):
                r, n, m = _sum_map_rank(F, x, b, outgoing)
                rep.checked += 1
                if not (r == n == m):
                    kind = f"Hom({x}, fibre of {b})" if outgoing else f"Hom(fibre of {b}, {x})"
                    rep.failures.append(f"{kind}: {n} paths, rank {r}, base dimension {m}")
    if F.action is not None:
        rep.galois, rep.galois_notes = _galois_certificate(F)
    return rep


def _galois_certificate(F: AlgebraCoveringData) -> tuple[bool, list[str]]:
    notes = []
    g, ga = F.action or {}, F.arrow_action or {}
    for x, y in g.items():
        if F.object_map[x] != F.object_map[y]:
            notes.append(f"F(g {x}) = {F.object_map[y]} differs from F({x}) = {F.object_map[x]}")
    for a, b in ga.items():
        if F.morphism_map[a] != F.morphism_map[b]:
            notes.append(f"F(g {a}) = {F.base.fmt_element(F.morphism_map[b])}"
                         f" differs from F({a}) = {F.base.fmt_element(F.morphism_map[a])}")
    # fibres must be single orbits of the generated action
    orbit = _orbits(F.cover.quiver.vertices, g)
    for b in F.base.quiver.vertices:
        fib = F.fibre(b)
        if len({orbit[x] for x in fib}) > 1:
            notes.append(f"fibre over {b} splits into several orbits")
    return not notes, notes


def _orbits(items: Iterable[str], g: dict[str, str]) -> dict[str, int]:
    parent = {x: x for x in items}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, y in g.items():
        parent[find(x)] = find(y)
    roots: dict[str, int] = {}
    return {x: roots.setdefault(find(x), len(roots)) for x in parent}


# Galois covers from voltages

def _lift(A: Algebra, p: Path, g: int, voltage: dict[str, int], G: GroupSpec) -> tuple[Path, int] | None:
    """Lift of p starting on sheet g, or None when it leaves the window."""
    cur = g
    word = []
    for a in reversed(p.word):
        word.append(sheet_name(a, cur))
        cur = G.op(cur, voltage.get(a, 0))
        if not G.contains(cur):
            return None
    return Path(sheet_name(p.src, g), sheet_name(p.tgt, cur), tuple(reversed(word))), cur


def path_voltage(p: Path, voltage: dict[str, int], G: GroupSpec) -> int:
    t = 0
    for a in p.word:
        t = G.op(t, voltage.get(a, 0))
    return t


def voltage_cover_algebra(A: Algebra, voltage: dict[str, int], G: GroupSpec,
                          name: str | None = None) -> AlgebraCoveringData:
    """Derived cover of A for a voltage assignment on its arrows.

    For the integers the cover is cut to the window of G; the interior then
    consists of the sheets from which every nonzero path stays inside.
    """
    for a in voltage:
        if a not in A.quiver.arrow:
            raise CoveringError(f"voltage on unknown arrow {a}")
    for i, rel in enumerate(A.relations):
        vs = [path_voltage(p, voltage, G) for _, p in rel.terms]
        if len(set(vs)) > 1:
            terms = " + ".join(f"{c}*{p}" for c, p in rel.terms)
            raise UnbalancedRelation(f"relation {i} ({terms}) has term voltages {vs}", i, vs)
    els = G.elements()
    verts = [sheet_name(v, g) for g in els for v in A.quiver.vertices]
    arrows = []
    mm: dict[str, Element] = {}
    for g in els:
        for a in A.quiver.arrows:
            h = G.op(g, voltage.get(a.name, 0))
            if not G.contains(h):
                continue
            nm = sheet_name(a.name, g)
            arrows.append(Arrow(nm, sheet_name(a.src, g), sheet_name(a.tgt, h)))
            mm[nm] = A.arrow_element(a.name)
    Q = Quiver(verts, arrows)
    rels = []
    for g in els:
        for rel in A.relations:
            lifted = [_lift(A, p, g, voltage, G) for _, p in rel.terms]
            if any(x is None for x in lifted):
                continue
            rels.append(make_relation([(c, lp[0]) for (c, _), lp in zip(rel.terms, lifted)], A.F))
    E = Algebra(A.F, Q, rels, name=name or f"{A.name}~", cap=A.cap)
    obj = {sheet_name(v, g): v for g in els for v in A.quiver.vertices}
    interior = None
    if not G.finite:
        reach = max((abs(v) for v in voltage.values()), default=0) * A.nilpotency
        interior = {sheet_name(v, g) for g in els for v in A.quiver.vertices if abs(g) + reach <= G.window}
    step = 1 if G.kind != "trivial" else 0
    act = {}
    aact = {}
    for g in els:
        h = G.op(g, step)
        if not G.contains(h):
            continue
        for v in A.quiver.vertices:
            act[sheet_name(v, g)] = sheet_name(v, h)
        for a in A.quiver.arrows:
            s, t = sheet_name(a.name, g), sheet_name(a.name, h)
            if s in Q.arrow and t in Q.arrow:
                aact[s] = t
    return AlgebraCoveringData(E, A, obj, mm, interior, G, act, aact, name=f"{E.name}->{A.name}")


def quotient_by_action(E: Algebra, action: dict[str, str], arrow_action: dict[str, str],
                       name: str | None = None) -> tuple[Algebra, AlgebraCoveringData]:
    """Orbit algebra of a free cyclic action, together with the projection.

    ``action`` is one generator permuting all cover vertices; its arrow part
    must be compatible with sources and targets.
    """
    Q = E.quiver
    for v in Q.vertices:
        if v not in action:
            raise CoveringError(f"the action is not defined on {v}")
    for a in Q.arrows:
        b = arrow_action.get(a.name)
        if b is None or b not in Q.arrow:
            raise CoveringError(f"the action is not defined on arrow {a.name}")
        bb = Q.arrow[b]
        if bb.src != action[a.src] or bb.tgt != action[a.tgt]:
            raise CoveringError(f"the action on {a.name} does not match its ends")
    vorb = _cycles(Q.vertices, action)
    n = max((len(c) for c in vorb), default=1)
    for c in vorb:
        if len(c) != n:
            raise NotFree(f"{c[0]} has stabiliser of order {n // len(c)}", c[0])
    aorb = _cycles([a.name for a in Q.arrows], arrow_action)
    vname = _orbit_names(vorb)
    aname = _orbit_names(aorb)
    vq = [vname[c[0]] for c in vorb]
    arrows = []
    for c in aorb:
        a = Q.arrow[c[0]]
        arrows.append(Arrow(aname[c[0]], vname[a.src], vname[a.tgt]))
    BQ = Quiver(vq, arrows)
    seen = set()
    rels = []
    for rel in E.relations:
        terms = [(c, BQ.path(tuple(aname[x] for x in p.word), at=vname[p.src])) for c, p in rel.terms]
        r = make_relation(terms, E.F)
        if not r.terms:
            continue
        lead = r.terms[0][0]
        key = tuple(sorted((str(p), E.F.norm(c * E.F.inv(lead))) for c, p in r.terms))
        if key in seen:
            continue
        seen.add(key)
        rels.append(r)
    B = Algebra(E.F, BQ, rels, name=name or f"{E.name}/G", cap=E.cap)
    obj = {v: vname[v] for v in Q.vertices}
    mm = {a.name: B.arrow_element(aname[a.name]) for a in Q.arrows}
    G = GroupSpec("trivial") if n == 1 else GroupSpec("cyclic", n)
    return B, AlgebraCoveringData(E, B, obj, mm, None, G, dict(action), dict(arrow_action),
                                  name=f"{E.name}->{B.name}")


def _cycles(items: list[str], g: dict[str, str]) -> list[list[str]]:
    seen: set[str] = set()
    out = []
    for x in items:
        if x in seen:
            continue
        c = [x]
        seen.add(x)
        y = g[x]
        while y != x:
            if y in seen:
                raise CoveringError("the action is not a permutation")
            c.append(y)
            seen.add(y)
            y = g[y]
        out.append(c)
    return out


def _orbit_names(orbits: list[list[str]]) -> dict[str, str]:
    """Drop sheet suffixes when an orbit shares one base name."""
    out = {}
    for c in orbits:
        bases = {split_sheet(x)[0] for x in c}
        nm = bases.pop() if len(bases) == 1 and split_sheet(c[0])[1] is not None else c[0]
        for x in c:
            out[x] = nm
    return out


# push-down and pull-up

def push_down(F: AlgebraCoveringData, M: Module) -> Module:
    """``F_lambda M``: fibre sums at each base vertex."""
    E, B = F.cover, F.base
    K = B.F
    if M.A is not E:
        raise CoveringError("module does not live on the cover")
    for x, d in M.dims.items():
        if d and not F.is_interior(x):
            raise SupportOutsideInterior(f"module is nonzero at {x}, outside the interior")
    fib = {b: F.fibre(b) for b in B.quiver.vertices}
    off: dict[str, int] = {}
    dims = {}
    for b, xs in fib.items():
        t = 0
        for x in xs:
            off[x] = t
            t += M.dims[x]
        dims[b] = t
    mats = {}
    for al in B.quiver.arrows:
        b1, b2 = al.src, al.tgt
        target = B.basis_of(b1, b2)
        pos = {k: i for i, k in enumerate(target)}
        aval = B.arrow_element(al.name)
        m = la.zeros(dims[b1], dims[b2], K)
        for x1 in fib[b1]:
            if not M.dims[x1]:
                continue
            cols = [(x2, k) for x2 in fib[b2] for k in E.basis_of(x1, x2)]
            rs = la.RowSpace(K, track=True)
            for x2, k in cols:
                rs.add({pos[j]: c for j, c in F.image_of_basis(k).items()})
            combo = rs.express({pos[j]: c for j, c in aval.items()})
            if combo is None:
                raise CoveringError(f"arrow {al.name} does not lift at {x1}")
            lift: dict[str, Element] = {}
            for i, c in combo.items():
                x2, k = cols[i]
                lift.setdefault(x2, {})[k] = c
            for x2, u in lift.items():
                blk = M.element_matrix(u, x1, x2)
                for r in range(M.dims[x1]):
                    for s in range(M.dims[x2]):
                        if blk[r][s]:
                            m[off[x1] + r][off[x2] + s] = K.norm(m[off[x1] + r][off[x2] + s] + blk[r][s])
        mats[al.name] = m
    return Module(B, dims, mats, f"push({M.name})")


def pull_up(F: AlgebraCoveringData, N: Module) -> Module:
    """``F.N = N o F``: the same space at every vertex of a fibre."""
    E = F.cover
    dims = {x: N.dims[F.object_map[x]] for x in E.quiver.vertices}
    mats = {}
    for a in E.quiver.arrows:
        mats[a.name] = N.element_matrix(F.morphism_map[a.name], F.object_map[a.src], F.object_map[a.tgt])
    return Module(E, dims, mats, f"pull({N.name})")


def functor_from_maps(E: Algebra, B: Algebra, objects: dict[str, str], maps: dict[str, list],
                      shift: dict[str, str] | None = None, name: str = "F") -> AlgebraCoveringData:
    """Build covering data from images given as (coefficient, word) terms."""
    mm = {}
    for a in E.quiver.arrows:
        if a.name not in maps:
            raise CoveringError(f"no image given for arrow {a.name}")
        s, t = objects[a.src], objects[a.tgt]
        terms = [(B.F(c), B.quiver.path(w, at=s)) for c, w in maps[a.name]]
        for _, p in terms:
            if p.src != s or p.tgt != t:
                raise CoveringError(f"image of {a.name} is not a path from {s} to {t}")
        mm[a.name] = B.reduce(terms)
    act = aact = None
    if shift:
        act = dict(shift)
        aact = {}
        for a in E.quiver.arrows:
            if a.src in act and a.tgt in act:
                cands = [b.name for b in E.quiver.out_arrows[act[a.src]] if b.tgt == act[a.tgt]]
                if len(cands) > 1:
                    cands = [b for b in cands if _stem(b) == _stem(a.name)]
                if len(cands) == 1:
                    aact[a.name] = cands[0]
    return AlgebraCoveringData(E, B, dict(objects), mm, None, None, act, aact, name=name)


def _stem(a: str) -> str:
    """Arrow name without its sheet or index suffix."""
    return re.sub(r"(@-?\d+|m?\d+)$", "", a)


def functor_from_spec(ws, fs) -> AlgebraCoveringData:
    """Covering data for a ``functor`` block of a parsed workspace."""
    E = ws.resolve("algebra", fs.source).build()
    B = ws.resolve("algebra", fs.target).build()
    F = functor_from_maps(E, B, fs.objects, fs.maps, fs.shift or None, name=fs.name)
    if fs.interior is not None:
        F.interior = set(fs.interior)
    return F
