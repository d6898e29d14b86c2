"""Orbit graphs, fundamental group ranks and Galois coverings of translation quivers."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from . import linalg as la
from .algebra import Arrow
from .field import Q
from .graphiso import find_isomorphism
from .groups import GroupSpec, sheet_name, split_sheet
from .translation_quiver import TranslationQuiver, TQError


class Disconnected(TQError):
    pass


class UnbalancedMesh(TQError):
    pass


class NotFree(TQError):
    pass


class BrokenLift(TQError):
    pass


class _DSU:
    def __init__(self, items):
        self.p = {x: x for x in items}

    def find(self, x):
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.p[rb] = ra
        return True


# orbit graph


@dataclass
class OGEdge:
    name: str
    a: str
    b: str
    arrows: list[str]  # the σ-orbit (empty for loops)
    loop: bool = False


@dataclass
class OrbitGraph:
    vertices: list[str]
    edges: list[OGEdge]
    vertex_of: dict[str, str]  # Γ vertex -> orbit graph vertex
    periodic: set[str] = field(default_factory=set)

    def lines(self) -> list[str]:
        out = [f"vertices: {len(self.vertices)}"]
        out += [f"  {v}" for v in self.vertices]
        out.append(f"edges: {len(self.edges)}")
        for e in self.edges:
            out.append(f"  {e.name}: {e.a} -- {e.b}" + (" (loop)" if e.loop else ""))
        return out


def tau_orbits(G: TranslationQuiver) -> list[list[str]]:
    d = _DSU(G.vertices)
    for z, w in G.tau.items():
        d.union(z, w)
    groups: dict[str, list[str]] = {}
    for v in G.vertices:
        groups.setdefault(d.find(v), []).append(v)
    return list(groups.values())


def periodic_vertices(G: TranslationQuiver) -> set[str]:
    out = set()
    for v in G.vertices:
        x, seen = v, 0
        while x in G.tau and seen <= len(G.vertices):
            x = G.tau[x]
            seen += 1
            if x == v:
                out.add(v)
                break
    return out


def sigma_orbits(G: TranslationQuiver) -> list[list[str]]:
    d = _DSU([a.name for a in G.arrows])
    for u, s in G.sigma.items():
        d.union(u, s)
    groups: dict[str, list[str]] = {}
    for a in G.arrows:
        groups.setdefault(d.find(a.name), []).append(a.name)
    return list(groups.values())


def orbit_graph(G: TranslationQuiver) -> OrbitGraph:
    per = periodic_vertices(G)
    # periodic components: periodic vertices joined by arrows among them and by x -> τx
    d = _DSU(sorted(per, key=G.vindex.get))
    for a in G.arrows:
        if a.src in per and a.tgt in per:
            d.union(a.src, a.tgt)
    for x in per:
        d.union(x, G.tau[x])
    vertex_of: dict[str, str] = {}
    names: list[str] = []
    comps: dict[str, list[str]] = {}
    for x in G.vertices:
        if x in per:
            comps.setdefault(d.find(x), []).append(x)
    for orb in tau_orbits(G):
        if orb[0] in per:
            continue
        nm = "{" + ",".join(orb) + "}"
        for x in orb:
            vertex_of[x] = nm
    for members in comps.values():
        nm = "per{" + ",".join(members) + "}"
        for x in members:
            vertex_of[x] = nm
    for x in G.vertices:
        if vertex_of[x] not in names:
            names.append(vertex_of[x])
    edges: list[OGEdge] = []
    for members in comps.values():
        v = vertex_of[members[0]]
        edges.append(OGEdge(f"loop:{v}", v, v, [], True))
    for orb in sigma_orbits(G):
        a = G.arrow[orb[0]]
        if a.src in per and a.tgt in per:
            continue
        edges.append(OGEdge(orb[0], vertex_of[a.src], vertex_of[a.tgt], list(orb)))
    return OrbitGraph(names, edges, vertex_of, per)


@dataclass
class Pi1Rank:
    rank_H: int
    rank_generic: int
    is_tree: bool

    def line(self) -> str:
        return f"tree: {'yes' if self.is_tree else 'no'}, rank: {self.rank_H}"


def _cycle_rank(vertices, edges) -> int:
    d = _DSU(vertices)
    comps = len(vertices)
    for a, b in edges:
        if d.union(a, b):
            comps -= 1
    return len(edges) - len(vertices) + comps


def pi1_rank(G: TranslationQuiver, O: OrbitGraph | None = None) -> Pi1Rank:
    if not G.is_connected():
        raise Disconnected("translation quiver is not connected")
    O = O or orbit_graph(G)
    rH = _cycle_rank(O.vertices, [(e.a, e.b) for e in O.edges])
    # generic covering: identify edges coming from parallel arrows of Γ
    d = _DSU(range(len(O.edges)))
    for i, e in enumerate(O.edges):
        for j in range(i):
            f = O.edges[j]
            if e.loop or f.loop or {e.a, e.b} != {f.a, f.b}:
                continue
            ends_e = {(G.arrow[u].src, G.arrow[u].tgt) for u in e.arrows}
            ends_f = {(G.arrow[u].src, G.arrow[u].tgt) for u in f.arrows}
            if ends_e & ends_f:
                d.union(i, j)
    merged = {d.find(i) for i in range(len(O.edges))}
    rG = _cycle_rank(O.vertices, [(O.edges[i].a, O.edges[i].b) for i in merged])
    has_loop = any(e.loop for e in O.edges)
    return Pi1Rank(rH, rG, rH == 0 and not has_loop)


def voltage_cohomology(G: TranslationQuiver) -> list[dict[str, int]]:
    """Integer representatives of a basis of balanced voltages modulo gauge.

    A balanced voltage gives every length-2 path of a complete mesh the same
    total; gauge voltages are differences of vertex potentials.  The number
    of classes is the rank of the abelianized fundamental group of Γ.
    """
    arrows = [a.name for a in G.arrows]
    meshes = [z for z in G.meshes() if G.in_arrows[z]]
    ncol = len(arrows) + len(meshes)
    ai = {a: i for i, a in enumerate(arrows)}
    mi = {z: len(arrows) + i for i, z in enumerate(meshes)}
    rows = []
    for z in meshes:
        for u in G.in_arrows[z]:
            s = G.sigma.get(u.name)
            if s is None:
                continue
            row = {ai[u.name]: 1}
            row[ai[s]] = row.get(ai[s], 0) + 1
            row[mi[z]] = -1
            rows.append({k: Fraction(v) for k, v in row.items() if v})
    sols = la.nullspace_sparse(rows, ncol, Q)
    gauge = []
    for x in G.vertices:
        vec = [Fraction(0)] * ncol
        for a in G.arrows:
            if a.tgt == x:
                vec[ai[a.name]] += 1
            if a.src == x:
                vec[ai[a.name]] -= 1
        for z in meshes:
            if z == x:
                vec[mi[z]] += 1
            if G.tau[z] == x:
                vec[mi[z]] -= 1
        gauge.append(vec)
    rs = la.RowSpace(Q)
    for g in gauge:
        rs.add(la.to_sparse(g))
    out = []
    for v in sols:
        if rs.add(la.to_sparse(v)):
            den = lcm(*[Fraction(c).denominator for c in v]) if v else 1
            out.append({a: int(v[ai[a]] * den) for a in arrows if v[ai[a]]})
    return out


# voltage covers


@dataclass
class TQCovering:
    cover: TranslationQuiver
    base: TranslationQuiver
    vmap: dict[str, str]
    amap: dict[str, str]
    group: GroupSpec | None = None
    vaction: dict[str, str] = field(default_factory=dict)  # generator on vertices (partial on windows)
    aaction: dict[str, str] = field(default_factory=dict)


def voltage_cover_tq(G: TranslationQuiver, voltage: dict[str, int], group: GroupSpec,
                     tauvoltage: dict[str, int] | None = None, name: str | None = None) -> TQCovering:
    """Derived translation quiver of a mesh-balanced voltage assignment.

    The arrow ``(u, g)`` runs from ``(src, g)`` to ``(tgt, g + v(u))`` and
    ``τ(z, g) = (τz, g - c_z)`` where ``c_z`` is the common voltage of the
    mesh paths ending at z.
    """
    tauvoltage = dict(tauvoltage or {})
    for a in voltage:
        if a not in G.arrow:
            raise TQError(f"voltage on unknown arrow {a}")
    v = {a.name: group.norm(voltage.get(a.name, 0)) for a in G.arrows}
    c: dict[str, int] = {}
    for z in G.vertices:
        if z not in G.tau:
            continue
        vals = set()
        for u in G.in_arrows[z]:
            s = G.sigma.get(u.name)
            if s is None:
                continue
            vals.add(group.op(v[s], v[u.name]))
        if len(vals) > 1:
            raise UnbalancedMesh(f"mesh at {z} carries voltages {sorted(vals)}")
        if vals:
            if z in tauvoltage and group.norm(tauvoltage[z]) not in vals:
                raise UnbalancedMesh(f"tauvoltage at {z} disagrees with its mesh")
            c[z] = vals.pop()
        else:
            c[z] = group.norm(tauvoltage.get(z, 0))
    els = group.elements()
    inside = set(els)
    verts, arrows, tau, sigma = [], [], {}, {}
    proj, inj, opn, labels = set(), set(), set(), {}
    vmap, amap = {}, {}
    for g in els:
        for x in G.vertices:
            nm = sheet_name(x, g)
            verts.append(nm)
            vmap[nm] = x
            if x in G.projective:
                proj.add(nm)
            if x in G.injective:
                inj.add(nm)
            if x in G.open:
                opn.add(nm)
            if x in G.labels:
                k, y = G.labels[x]
                labels[nm] = (k, sheet_name(y, g))
    for g in els:
        for a in G.arrows:
            h = group.op(g, v[a.name])
            if h not in inside:
                opn.add(sheet_name(a.src, g))
                continue
            nm = sheet_name(a.name, g)
            arrows.append(Arrow(nm, sheet_name(a.src, g), sheet_name(a.tgt, h)))
            amap[nm] = a.name
        for z, w in G.tau.items():
            h = group.op(g, group.inv(c[z]))
            if h in inside:
                tau[sheet_name(z, g)] = sheet_name(w, h)
            else:
                opn.add(sheet_name(z, g))
    arrow_names = {a.name for a in arrows}
    for g in els:
        for u, s in G.sigma.items():
            # (u, g): (m, g) -> (z, g + v(u)); σ(u, g) = (σu, g - v(σu))
            h = group.op(g, group.inv(v[s]))
            src, dst = sheet_name(u, g), sheet_name(s, h)
            if src in arrow_names and dst in arrow_names:
                sigma[src] = dst
    # vertices whose neighbourhood leaves the window are open
    if not group.finite:
        for g in els:
            for x in G.vertices:
                nm = sheet_name(x, g)
                for a in G.in_arrows[x]:
                    if group.op(g, group.inv(v[a.name])) not in inside:
                        opn.add(nm)
                if x in G.tau_inv and group.op(g, c[G.tau_inv[x]]) not in inside:
                    opn.add(nm)
    cover = TranslationQuiver(verts, arrows, tau, sigma, proj, inj, opn, labels, G.standard,
                              name or f"{G.name}~")
    vact: dict[str, str] = {}
    aact: dict[str, str] = {}
    gen = 1 if group.kind != "trivial" else 0
    for g in els:
        h = group.op(g, gen)
        if h in inside:
            for x in G.vertices:
                vact[sheet_name(x, g)] = sheet_name(x, h)
            for a in G.arrows:
                if sheet_name(a.name, g) in arrow_names and sheet_name(a.name, h) in arrow_names:
                    aact[sheet_name(a.name, g)] = sheet_name(a.name, h)
    return TQCovering(cover, G, vmap, amap, group, vact, aact)


def quotient_tq(Gp: TranslationQuiver, vaction: dict[str, str], aaction: dict[str, str],
                name: str | None = None) -> tuple[TranslationQuiver, dict[str, str], dict[str, str]]:
    """Orbit translation quiver of a free action given by one generator.

    Returns the quotient with the projections on vertices and arrows.
    Representative names drop a trailing ``@g`` sheet tag when present.
    """
    for x, y in vaction.items():
        if x == y:
            raise NotFree(f"generator fixes vertex {x}")
    dv = _DSU(Gp.vertices)
    for x, y in vaction.items():
        dv.union(x, y)
    da = _DSU([a.name for a in Gp.arrows])
    for x, y in aaction.items():
        da.union(x, y)
    # freeness: an orbit must not contain two vertices with the same base tag unless
    # the generator moves them (checked above); also check orbits are stable
    vrep: dict[str, str] = {}
    for x in Gp.vertices:
        r = dv.find(x)
        vrep.setdefault(r, split_sheet(x)[0])
    arep: dict[str, str] = {}
    for a in Gp.arrows:
        r = da.find(a.name)
        arep.setdefault(r, split_sheet(a.name)[0])
    pv = {x: vrep[dv.find(x)] for x in Gp.vertices}
    pa = {a.name: arep[da.find(a.name)] for a in Gp.arrows}
    verts: list[str] = []
    for x in Gp.vertices:
        if pv[x] not in verts:
            verts.append(pv[x])
    arrows: dict[str, Arrow] = {}
    tau: dict[str, str] = {}
    sigma: dict[str, str] = {}
    for a in Gp.arrows:
        new = Arrow(pa[a.name], pv[a.src], pv[a.tgt])
        old = arrows.setdefault(new.name, new)
        if old != new:
            raise BrokenLift(f"arrow orbit {new.name} has inconsistent endpoints")
    for z, w in Gp.tau.items():
        if tau.setdefault(pv[z], pv[w]) != pv[w]:
            raise BrokenLift(f"tau is not equivariant at {z}")
    for u, s in Gp.sigma.items():
        if sigma.setdefault(pa[u], pa[s]) != pa[s]:
            raise BrokenLift(f"sigma is not equivariant at {u}")
    proj = {pv[x] for x in Gp.projective}
    inj = {pv[x] for x in Gp.injective}
    opn = {pv[x] for x in Gp.open}
    labels = {}
    for x, (k, y) in Gp.labels.items():
        labels[pv[x]] = (k, split_sheet(y)[0])
    Q_ = TranslationQuiver(verts, list(arrows.values()), tau, sigma, proj, inj, opn, labels, Gp.standard,
                           name or f"{Gp.name}/G")
    return Q_, pv, pa


@dataclass
class CoveringReport:
    covering: bool
    galois: bool | None
    problems: list[str]
    interior: int

    def lines(self) -> list[str]:
        out = [f"covering: {'yes' if self.covering else 'no'} (checked at {self.interior} interior vertices)"]
        if self.galois is not None:
            out.append(f"galois: {'yes' if self.galois else 'no'}")
        return out + [f"problem: {p}" for p in self.problems]


def verify_tq_covering(pi: TQCovering, strict: bool = True) -> CoveringReport:
    """Check a covering of translation quivers and, with a group, the Galois property.

    Raises BrokenLift (strict mode) when the map is not a covering at some
    interior vertex and NotFree when the action has a fixed point.
    """
    Gp, G = pi.cover, pi.base
    problems = []
    for a in Gp.arrows:
        b = G.arrow.get(pi.amap.get(a.name, ""))
        if b is None or pi.vmap[a.src] != b.src or pi.vmap[a.tgt] != b.tgt:
            problems.append(f"arrow {a.name} is not mapped onto an arrow with matching ends")
    interior = [x for x in Gp.vertices if x not in Gp.open]
    for x in interior:
        y = pi.vmap[x]
        ins = sorted(pi.amap[a.name] for a in Gp.in_arrows[x])
        outs = sorted(pi.amap[a.name] for a in Gp.out_arrows[x])
        if ins != sorted(a.name for a in G.in_arrows[y]) or outs != sorted(a.name for a in G.out_arrows[y]):
            problems.append(f"arrows at {x} are not mapped bijectively onto arrows at {y}")
        if (x in Gp.projective) != (y in G.projective) or (x in Gp.injective) != (y in G.injective):
            problems.append(f"flags at {x} differ from {y}")
        if x in Gp.tau:
            if y not in G.tau or pi.vmap[Gp.tau[x]] != G.tau[y]:
                problems.append(f"tau is not preserved at {x}")
        elif y in G.tau:
            problems.append(f"tau of {x} is missing")
    for u, s in Gp.sigma.items():
        if G.sigma.get(pi.amap[u]) != pi.amap[s]:
            problems.append(f"sigma is not preserved at {u}")
    if problems and strict:
        raise BrokenLift(problems[0])
    galois = None
    if pi.group is not None:
        for x, y in pi.vaction.items():
            if x == y:
                raise NotFree(f"deck generator fixes {x}")
        galois = not problems
        for x, y in pi.vaction.items():
            if pi.vmap[x] != pi.vmap[y]:
                galois = False
                problems.append(f"deck generator moves {x} out of its fibre")
        for u, s in pi.aaction.items():
            if pi.amap[u] != pi.amap[s]:
                galois = False
        # fibres are single orbits
        d = _DSU(Gp.vertices)
        for x, y in pi.vaction.items():
            d.union(x, y)
        fib: dict[str, set] = {}
        for x in Gp.vertices:
            fib.setdefault(pi.vmap[x], set()).add(d.find(x))
        if any(len(s) != 1 for s in fib.values()):
            galois = False
            problems.append("some fibre contains several orbits")
        if pi.group.finite:
            sizes = {len([x for x in Gp.vertices if pi.vmap[x] == y]) for y in G.vertices}
            if sizes != {pi.group.size}:
                galois = False
                problems.append("fibres do not have the size of the group")
            # the generator has order exactly |G| on every vertex
            n = pi.group.size
            for x in Gp.vertices:
                y, k = x, 0
                while True:
                    y = pi.vaction.get(y, y)
                    k += 1
                    if y == x:
                        break
                if k != n:
                    raise NotFree(f"orbit of {x} has {k} elements, expected {n}")
    return CoveringReport(not problems, galois, problems, len(interior))


def tq_isomorphism(G1: TranslationQuiver, G2: TranslationQuiver) -> dict | None:
    """A vertex bijection preserving arrows (with multiplicity), τ and flags."""
    def colour(G):
        return {v: (v in G.projective, v in G.injective, v in G.open) for v in G.vertices}

    e1 = [(a.src, a.tgt, "a") for a in G1.arrows] + [(z, w, "t") for z, w in G1.tau.items()]
    e2 = [(a.src, a.tgt, "a") for a in G2.arrows] + [(z, w, "t") for z, w in G2.tau.items()]
    return find_isomorphism(G1.vertices, e1, G2.vertices, e2, colour(G1), colour(G2))
