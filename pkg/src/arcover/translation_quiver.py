"""Translation quivers with a polarization, mesh categories and DOT export.

``tau`` maps each non-projective vertex z to ``τz``; ``sigma`` maps each
arrow ``u: m -> z`` with z non-projective to an arrow ``σu: τz -> m``.
Vertices flagged ``open`` sit on the boundary of a finite window cut out of
an infinite component; their meshes and flags are not checked.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from . import linalg as la
from .algebra import Arrow
from .field import Field


class TQError(ValueError):
    pass


class BrokenMesh(TQError):
    pass


class BadFlags(TQError):
    pass


class CapExceeded(TQError):
    pass


@dataclass
class TranslationQuiver:
    vertices: list[str]
    arrows: list[Arrow]
    tau: dict[str, str]
    sigma: dict[str, str] = field(default_factory=dict)
    projective: set[str] = field(default_factory=set)
    injective: set[str] = field(default_factory=set)
    open: set[str] = field(default_factory=set)
    labels: dict[str, tuple[str, str]] = field(default_factory=dict)  # vertex -> ("P"|"I", algebra vertex)
    standard: bool = False
    name: str = "Gamma"
    modules: dict = field(default_factory=dict)  # vertex -> Module, optional

    def __post_init__(self):
        self.reindex()

    def reindex(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise TQError("duplicate vertex")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise TQError("duplicate arrow")
        vs = set(self.vertices)
        for a in self.arrows:
            if a.src not in vs or a.tgt not in vs:
                raise TQError(f"arrow {a.name} has an unknown endpoint")
        for z, w in self.tau.items():
            if z not in vs or w not in vs:
                raise TQError(f"tau {z} = {w} names an unknown vertex")
        self.arrow = {a.name: a for a in self.arrows}
        for u, s in self.sigma.items():
            if u not in self.arrow or s not in self.arrow:
                raise TQError(f"sigma {u} = {s} names an unknown arrow")
        self.vindex = {v: i for i, v in enumerate(self.vertices)}
        self.in_arrows: dict[str, list[Arrow]] = {v: [] for v in self.vertices}
        self.out_arrows: dict[str, list[Arrow]] = {v: [] for v in self.vertices}
        for a in self.arrows:
            self.out_arrows[a.src].append(a)
            self.in_arrows[a.tgt].append(a)
        self.tau_inv = {}
        for z, w in self.tau.items():
            self.tau_inv.setdefault(w, z)

    def meshes(self) -> list[str]:
        """Vertices z with a complete mesh (τz defined, z not open)."""
        return [z for z in self.vertices if z in self.tau and z not in self.open]

    def derive_sigma(self):
        """Fill in σ where every mesh is multiplicity free."""
        for z in self.vertices:
            if z not in self.tau:
                continue
            t = self.tau[z]
            for u in self.in_arrows[z]:
                if u.name in self.sigma:
                    continue
                cands = [b for b in self.out_arrows[t] if b.tgt == u.src]
                if len(cands) == 1 and len([a for a in self.in_arrows[z] if a.src == u.src]) == 1:
                    self.sigma[u.name] = cands[0].name

    def predecessors(self, v: str) -> set[str]:
        seen = {v}
        todo = deque([v])
        while todo:
            x = todo.popleft()
            for a in self.in_arrows[x]:
                if a.src not in seen:
                    seen.add(a.src)
                    todo.append(a.src)
        return seen

    def successors(self, v: str) -> set[str]:
        seen = {v}
        todo = deque([v])
        while todo:
            x = todo.popleft()
            for a in self.out_arrows[x]:
                if a.tgt not in seen:
                    seen.add(a.tgt)
                    todo.append(a.tgt)
        return seen

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj: dict[str, set[str]] = {v: set() for v in self.vertices}
        for a in self.arrows:
            adj[a.src].add(a.tgt)
            adj[a.tgt].add(a.src)
        seen = {self.vertices[0]}
        todo = [self.vertices[0]]
        while todo:
            x = todo.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return len(seen) == len(self.vertices)

    def label_of(self, kind: str, x: str) -> str | None:
        for v, (k, y) in self.labels.items():
            if k == kind and y == x:
                return v
        return None


@dataclass
class TQReport:
    valid: bool
    meshes: list[str]
    problems: list[str]

    def lines(self) -> list[str]:
        out = [f"valid: {'yes' if self.valid else 'no'}", f"meshes: {len(self.meshes)}"]
        return out + [f"problem: {p}" for p in self.problems]


def validate_tq(G: TranslationQuiver, strict: bool = False) -> TQReport:
    """Check τ injectivity, projective/injective flags and every mesh bijection.

    With ``strict`` the first problem raises (BrokenMesh or BadFlags).
    """
    problems: list[tuple[type, str]] = []
    seen: dict[str, str] = {}
    for z, w in G.tau.items():
        if w in seen:
            problems.append((BadFlags, f"tau is not injective: tau {seen[w]} = tau {z} = {w}"))
        seen[w] = z
    for v in G.vertices:
        if v in G.open:
            continue
        if (v in G.projective) == (v in G.tau):
            problems.append((BadFlags, f"{v}: tau must be defined exactly on non-projective vertices"))
        if (v in G.injective) == (v in G.tau_inv) and not (v in G.injective and v not in G.tau_inv):
            problems.append((BadFlags, f"{v}: injective vertices are exactly those outside the image of tau"))
    for u, s in G.sigma.items():
        a, b = G.arrow[u], G.arrow[s]
        if a.tgt not in G.tau or b.src != G.tau[a.tgt] or b.tgt != a.src:
            problems.append((BrokenMesh, f"sigma {u} = {s} does not run tau(z) -> m"))
    for z in G.meshes():
        t = G.tau[z]
        ins = G.in_arrows[z]
        outs = G.out_arrows[t]
        if len(ins) != len(outs):
            problems.append((BrokenMesh, f"mesh at {z}: {len(ins)} arrows in, {len(outs)} arrows out of {t}"))
            continue
        images = []
        for u in ins:
            if u.name not in G.sigma:
                problems.append((BrokenMesh, f"mesh at {z}: sigma({u.name}) undefined"))
                break
            images.append(G.sigma[u.name])
        else:
            if sorted(images) != sorted(b.name for b in outs):
                problems.append((BrokenMesh, f"mesh at {z}: sigma is not a bijection onto arrows out of {t}"))
    if strict and problems:
        cls, msg = problems[0]
        raise cls(msg)
    return TQReport(not problems, G.meshes(), [m for _, m in problems])


# mesh category


@dataclass
class _Level:
    summands: list[tuple[str, str, int]]  # (arrow into z, its source, offset)
    size: int
    rel: la.RowSpace
    free: list[int]  # quotient basis = these coordinates
    reps: list[tuple[str, ...]]  # a path word (function order) per basis element


class MeshTable:
    """Graded pieces ``k(Γ)_ℓ(a, z)`` of the mesh category from a fixed source a.

    Every basis element is represented by a single path, so morphisms out of
    ``a`` can be post-composed with arrows exactly.
    """

    def __init__(self, G: TranslationQuiver, a: str, F: Field, cap: int = 64):
        self.G, self.a, self.F, self.cap = G, a, F, cap
        self.levels: list[dict[str, _Level]] = []
        self.stable_at: int | None = None
        self._build()

    def _build(self):
        G, F = self.G, self.F
        lvl0 = {}
        for z in G.vertices:
            rs = la.RowSpace(F)
            if z == self.a:
                lvl0[z] = _Level([], 1, rs, [0], [()])
            else:
                lvl0[z] = _Level([], 0, rs, [], [])
        self.levels.append(lvl0)
        for ell in range(1, self.cap + 1):
            prev = self.levels[ell - 1]
            cur = {}
            total = 0
            for z in G.vertices:
                summands = []
                off = 0
                for u in G.in_arrows[z]:
                    d = len(prev[u.src].free)
                    summands.append((u.name, u.src, off))
                    off += d
                rs = la.RowSpace(F)
                if ell >= 2 and z in G.tau and z not in G.open:
                    t = G.tau[z]
                    before = self.levels[ell - 2][t]
                    for j in range(len(before.free)):
                        row = {}
                        for (uname, m, o) in summands:
                            s = G.sigma.get(uname)
                            if s is None:
                                continue
                            v = self.post_compose(ell - 2, t, {j: F.one}, s)
                            for k, c in v.items():
                                row[o + k] = F.norm(row.get(o + k, 0) + c)
                        row = {k: c for k, c in row.items() if c}
                        if row:
                            rs.add(row)
                free = [c for c in range(off) if c not in rs.pivots]
                reps = []
                for c in free:
                    for (uname, m, o) in reversed(summands):
                        if c >= o:
                            reps.append((uname,) + prev[m].reps[c - o])
                            break
                cur[z] = _Level(summands, off, rs, free, reps)
                total += len(free)
            self.levels.append(cur)
            if total == 0:
                self.stable_at = ell
                return

    def post_compose(self, ell: int, m: str, vec: dict[int, object], arrow: str) -> dict[int, object]:
        """``arrow ∘ f`` for f in degree ``ell`` at m (coordinates in the quotient basis)."""
        G = self.G
        u = G.arrow[arrow]
        if u.src != m:
            raise TQError("arrow does not start at the target of the morphism")
        if ell + 1 >= len(self.levels):
            return {}
        nxt = self.levels[ell + 1][u.tgt]
        off = None
        for (uname, src, o) in nxt.summands:
            if uname == arrow:
                off = o
                break
        raw = {off + k: c for k, c in vec.items() if c}
        red = nxt.rel.reduce(raw)
        pos = {c: i for i, c in enumerate(nxt.free)}
        return {pos[c]: v for c, v in red.items()}

    def dim(self, z: str, ell: int) -> int:
        if ell >= len(self.levels):
            return 0
        return len(self.levels[ell][z].free)

    def dims(self, z: str) -> list[int]:
        return [self.dim(z, ell) for ell in range(len(self.levels))]

    def total(self, z: str) -> int:
        return sum(self.dims(z))

    @property
    def stabilized(self) -> bool:
        return self.stable_at is not None

    def compose_path(self, ell: int, m: str, vec: dict[int, object], word: Sequence[str]) -> tuple[int, str, dict]:
        """Post-compose with a path given in function order (last arrow applied last)."""
        cur_ell, cur_v, cur = ell, m, vec
        for arrow in reversed(word):
            cur = self.post_compose(cur_ell, cur_v, cur, arrow)
            cur_v = self.G.arrow[arrow].tgt
            cur_ell += 1
        return cur_ell, cur_v, cur


@dataclass
class MeshHomEntry:
    x: str
    y: str
    graded: list[int]
    status: str  # "stabilized" or "capped"

    @property
    def total(self) -> int:
        return sum(self.graded)


def mesh_hom(G: TranslationQuiver, x: str, y: str, F: Field | None = None, degree_cap: int = 64) -> MeshHomEntry:
    """Graded dimensions of ``k(Γ)(x, y)``.

    The table stops exactly once a whole degree vanishes at every vertex,
    which forces all higher degrees to vanish.  Otherwise the heuristic
    window of ``|vertices|`` trailing zero degrees at y decides between
    "stabilized" and "capped"; capped tables raise no error but say so.
    """
    F = F or Field(2)
    T = MeshTable(G, x, F, cap=degree_cap)
    graded = T.dims(y)
    while len(graded) > 1 and graded[-1] == 0:
        graded.pop()
    if T.stabilized:
        status = "stabilized"
    else:
        tail = T.dims(y)
        zeros = 0
        for d in reversed(tail):
            if d:
                break
            zeros += 1
        status = "stabilized" if zeros >= len(G.vertices) else "capped"
    return MeshHomEntry(x, y, graded, status)


# DOT


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(obj, name: str | None = None) -> str:
    """Deterministic DOT text for a TranslationQuiver, OrbitGraph or Quiver."""
    from .algebra import Quiver

    lines = []
    if isinstance(obj, TranslationQuiver):
        lines.append(f"digraph {_q(name or obj.name)} {{")
        for v in sorted(obj.vertices):
            attrs = []
            if v in obj.projective and v in obj.injective:
                attrs.append("shape=doublebox")
            elif v in obj.projective:
                attrs.append("shape=box")
            elif v in obj.injective:
                attrs.append("shape=ellipse, peripheries=2")
            if v in obj.open:
                attrs.append("style=dotted")
            lines.append(f"  {_q(v)}" + (f" [{', '.join(attrs)}]" if attrs else "") + ";")
        for a in sorted(obj.arrows, key=lambda a: a.name):
            lines.append(f"  {_q(a.src)} -> {_q(a.tgt)} [label={_q(a.name)}];")
        for z in sorted(obj.tau):
            lines.append(f"  {_q(z)} -> {_q(obj.tau[z])} [style=dashed, constraint=false];")
        lines.append("}")
    elif isinstance(obj, Quiver):
        lines.append(f"digraph {_q(name or 'Q')} {{")
        for v in sorted(obj.vertices):
            lines.append(f"  {_q(v)};")
        for a in sorted(obj.arrows, key=lambda a: a.name):
            lines.append(f"  {_q(a.src)} -> {_q(a.tgt)} [label={_q(a.name)}];")
        lines.append("}")
    else:  # orbit graph
        lines.append(f"graph {_q(name or 'O')} {{")
        for v in sorted(obj.vertices):
            lines.append(f"  {_q(v)};")
        for e in sorted(obj.edges, key=lambda e: e.name):
            lines.append(f"  {_q(e.a)} -- {_q(e.b)} [label={_q(e.name)}];")
        lines.append("}")
    return "\n".join(lines) + "\n"
