"""Quivers, paths and finite dimensional bound quiver algebras kQ/I.

Paths compose in function order: the word ``(a, b)`` means "first b, then a",
so it runs from ``source(b)`` to ``target(a)``.  The basis of kQ/I is found by
degreewise linear algebra: once every path of some length N is certified to
lie in I, the algebra is the span of shorter paths modulo the truncated ideal.
Normal forms keep the smaller paths (degree, then arrow input order) and
rewrite the larger ones.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .field import Field
from .linalg import RowSpace


class AlgebraError(ValueError):
    """Base class for presentation errors (domain errors, exit status 1)."""


class DanglingName(AlgebraError):
    pass


class NonAdmissible(AlgebraError):
    pass


class NotFiniteDimensional(AlgebraError):
    pass


class NotConvex(AlgebraError):
    def __init__(self, msg: str, witness=None):
        super().__init__(msg)
        self.witness = witness


class Arrow(NamedTuple):
    name: str
    src: str
    tgt: str


class Path(NamedTuple):
    """A path ``src -> tgt``; ``word`` lists arrows in function order."""

    src: str
    tgt: str
    word: tuple[str, ...]

    def __len__(self) -> int:  # type: ignore[override]
        return len(self.word)

    @property
    def length(self) -> int:
        return len(self.word)

    def __str__(self) -> str:
        return "*".join(self.word) if self.word else f"e_{self.src}"


@dataclass
class Quiver:
    vertices: list[str]
    arrows: list[Arrow]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise DanglingName("duplicate vertex name")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise DanglingName("duplicate arrow name")
        if set(names) & set(self.vertices):
            raise DanglingName("an arrow and a vertex share a name")
        vs = set(self.vertices)
        for a in self.arrows:
            if a.src not in vs or a.tgt not in vs:
                raise DanglingName(f"arrow {a.name} has an unknown endpoint")
        self.arrow = {a.name: a for a in self.arrows}
        self.arrow_index = {a.name: i for i, a in enumerate(self.arrows)}
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}
        self.out_arrows: dict[str, list[Arrow]] = {v: [] for v in self.vertices}
        self.in_arrows: dict[str, list[Arrow]] = {v: [] for v in self.vertices}
        for a in self.arrows:
            self.out_arrows[a.src].append(a)
            self.in_arrows[a.tgt].append(a)

    def lazy(self, v: str) -> Path:
        return Path(v, v, ())

    def path(self, word: Sequence[str], at: str | None = None) -> Path:
        """Build a path from a function-order word (``at`` names a lazy path)."""
        word = tuple(word)
        if not word:
            if at is None:
                raise DanglingName("lazy path needs a vertex")
            return Path(at, at, ())
        for n in word:
            if n not in self.arrow:
                raise DanglingName(f"unknown arrow {n}")
        for left, right in zip(word, word[1:]):
            if self.arrow[right].tgt != self.arrow[left].src:
                raise DanglingName(f"{left}*{right} is not composable")
        return Path(self.arrow[word[-1]].src, self.arrow[word[0]].tgt, word)

    def compose(self, p: Path, q: Path) -> Path | None:
        """``p ∘ q`` (first q, then p) or None when not composable."""
        if q.tgt != p.src:
            return None
        return Path(q.src, p.tgt, p.word + q.word)

    def path_key(self, p: Path) -> tuple:
        return (len(p.word), tuple(self.arrow_index[a] for a in p.word), self.vertex_index[p.src])

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def components(self) -> list[list[str]]:
        adj: dict[str, list[str]] = {v: [] for v in self.vertices}
        for a in self.arrows:
            adj[a.src].append(a.tgt)
            adj[a.tgt].append(a.src)
        seen: set[str] = set()
        comps = []
        for v in self.vertices:
            if v in seen:
                continue
            comp, todo = [], deque([v])
            seen.add(v)
            while todo:
                u = todo.popleft()
                comp.append(u)
                for w in adj[u]:
                    if w not in seen:
                        seen.add(w)
                        todo.append(w)
            comps.append(comp)
        return comps

    def cycle_rank(self) -> int:
        return len(self.arrows) - len(self.vertices) + len(self.components())

    def is_acyclic(self) -> bool:
        indeg = {v: 0 for v in self.vertices}
        for a in self.arrows:
            indeg[a.tgt] += 1
        todo = deque(v for v in self.vertices if indeg[v] == 0)
        seen = 0
        while todo:
            v = todo.popleft()
            seen += 1
            for a in self.out_arrows[v]:
                indeg[a.tgt] -= 1
                if indeg[a.tgt] == 0:
                    todo.append(a.tgt)
        return seen == len(self.vertices)

    def reachable(self, start: Iterable[str], forward: bool = True) -> set[str]:
        seen = set(start)
        todo = deque(seen)
        while todo:
            v = todo.popleft()
            nbrs = self.out_arrows[v] if forward else self.in_arrows[v]
            for a in nbrs:
                w = a.tgt if forward else a.src
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return seen


Term = tuple[object, Path]


@dataclass
class Relation:
    """A linear combination of parallel paths ``sum c_i w_i`` (meaning ``= 0``)."""

    terms: list[Term]

    @property
    def src(self) -> str:
        return self.terms[0][1].src

    @property
    def tgt(self) -> str:
        return self.terms[0][1].tgt

    def lengths(self) -> list[int]:
        return [len(p.word) for _, p in self.terms]


def make_relation(terms: Iterable[tuple[object, Path]], F: Field) -> Relation:
    """Collect like paths, drop zero coefficients, check parallelism."""
    acc: dict[Path, object] = {}
    order: list[Path] = []
    for c, p in terms:
        c = F(c)
        if p not in acc:
            acc[p] = F.zero
            order.append(p)
        acc[p] = F.norm(acc[p] + c)
    out = [(acc[p], p) for p in order if acc[p]]
    if out:
        s, t = out[0][1].src, out[0][1].tgt
        for _, p in out:
            if p.src != s or p.tgt != t:
                raise NonAdmissible("relation terms are not parallel")
    return Relation(out)


@dataclass
class ValidationReport:
    admissible: bool
    nilpotency: int
    connected: bool
    dimension: int
    messages: list[str] = field(default_factory=list)

    def lines(self) -> list[str]:
        out = [
            f"admissible: {'yes' if self.admissible else 'no'}",
            f"nilpotency degree: {self.nilpotency} (all paths of length >= {self.nilpotency} vanish)",
            f"connected: {'yes' if self.connected else 'no'}",
            f"dimension: {self.dimension}",
        ]
        return out + self.messages


Element = dict[int, object]


class Algebra:
    """A finite dimensional bound quiver algebra with its normal-form basis.

    ``basis`` lists normal-form paths; elements of the algebra are sparse
    dicts from basis index to coefficient.  ``pair_basis[(x, y)]`` holds the
    indices spanning ``e_y A e_x`` (paths from x to y).
    """

    def __init__(self, F: Field, quiver: Quiver, relations: Sequence[Relation] = (), cap: int = 64,
                 name: str = "A", max_paths: int = 200_000):
        self.F = F
        self.max_paths = max_paths
        self.quiver = quiver
        self.relations = [r for r in relations if r.terms]
        self.cap = cap
        self.name = name
        for r in self.relations:
            for _, p in r.terms:
                if len(p.word) < 2:
                    raise NonAdmissible(f"relation term {p} has length < 2")
                quiver.path(p.word)
        self._compute_basis()
        self._prod_cache: dict[tuple[int, int], Element] = {}

    # path enumeration

    def _extend_paths(self, upto: int):
        while len(self._by_len) <= upto:
            prev = self._by_len[-1]
            new = []
            for q in prev:
                for a in self.quiver.out_arrows[q.tgt]:
                    new.append(Path(q.src, a.tgt, (a.name,) + q.word))
            self._by_len.append(new)
            self._path_count += len(new)
            if self._path_count > self.max_paths:
                raise NotFiniteDimensional(
                    f"more than {self.max_paths} paths of length <= {len(self._by_len) - 1} "
                    "without a nilpotency certificate")

    def _generators(self, M: int, trunc: int | None):
        """Products p*r*q.  With ``trunc`` given, terms of length >= trunc are
        dropped and products whose shortest term is already that long are
        skipped; otherwise products whose longest term reaches M are skipped."""
        ends_at: dict[tuple[str, int], list[Path]] = {}
        starts_at: dict[tuple[str, int], list[Path]] = {}
        for L, ps in enumerate(self._by_len):
            for p in ps:
                ends_at.setdefault((p.tgt, L), []).append(p)
                starts_at.setdefault((p.src, L), []).append(p)
        for r in self.relations:
            lens = r.lengths()
            budget = (trunc - min(lens)) if trunc is not None else (M - max(lens))
            for i in range(budget):
                for j in range(budget - i):
                    for q in ends_at.get((r.src, i), ()):
                        for p in starts_at.get((r.tgt, j), ()):
                            terms = []
                            for c, w in r.terms:
                                word = p.word + w.word + q.word
                                if trunc is not None and len(word) >= trunc:
                                    continue
                                terms.append((c, Path(q.src, p.tgt, word)))
                            if terms:
                                yield terms

    def _compute_basis(self):
        Q, F = self.quiver, self.F
        self._by_len = [[Q.lazy(v) for v in Q.vertices]]
        self._path_count = len(Q.vertices)
        N = None
        for M in range(3, self.cap + 2):
            self._extend_paths(M - 1)
            spaces: dict[tuple[str, str], RowSpace] = {}
            cols: dict[Path, int] = {}
            for L in range(M):
                for p in self._by_len[L]:
                    cols[p] = -len(cols)  # longer paths get smaller (pivot-preferred) columns
            for terms in self._generators(M, None):
                s, t = terms[0][1].src, terms[0][1].tgt
                rs = spaces.setdefault((s, t), RowSpace(F))
                rs.add({cols[w]: c for c, w in terms})
            for cand in range(2, M):
                ok = True
                for p in self._by_len[cand]:
                    rs = spaces.get((p.src, p.tgt))
                    if rs is None or not rs.contains({cols[p]: F.one}):
                        ok = False
                        break
                if ok:
                    N = cand
                    break
            if N is not None:
                break
        if N is None:
            raise NotFiniteDimensional(f"no nilpotency certificate below path length {self.cap}")
        self.nilpotency = N
        # truncated ideal in the span of paths of length < N
        pairs: dict[tuple[str, str], list[Path]] = {}
        for L in range(N):
            for p in self._by_len[L]:
                pairs.setdefault((p.src, p.tgt), []).append(p)
        col_of: dict[Path, int] = {}
        for key, ps in pairs.items():
            ps.sort(key=Q.path_key, reverse=True)
            for i, p in enumerate(ps):
                col_of[p] = i
        spaces = {}
        for terms in self._generators(N, N):
            s, t = terms[0][1].src, terms[0][1].tgt
            rs = spaces.setdefault((s, t), RowSpace(F))
            rs.add({col_of[w]: c for c, w in terms})
        self.basis: list[Path] = []
        self.index: dict[Path, int] = {}
        self.pair_basis: dict[tuple[str, str], list[int]] = {}
        order = sorted(pairs, key=lambda st: (Q.vertex_index[st[0]], Q.vertex_index[st[1]]))
        for key in order:
            ps = pairs[key]
            rs = spaces.get(key)
            piv = rs.pivots if rs else {}
            free = [p for i, p in enumerate(ps) if i not in piv]
            free.sort(key=Q.path_key)
            idx = []
            for p in free:
                self.index[p] = len(self.basis)
                idx.append(len(self.basis))
                self.basis.append(p)
            if idx:
                self.pair_basis[key] = idx
        self._nf: dict[Path, Element] = {}
        for key, ps in pairs.items():
            rs = spaces.get(key)
            piv = rs.pivots if rs else {}
            for i, p in enumerate(ps):
                if i in piv:
                    row = piv[i]
                    self._nf[p] = {self.index[ps[k]]: F.neg(v) for k, v in row.items() if k != i}
                else:
                    self._nf[p] = {self.index[p]: F.one}
        self._paths_by_pair = pairs

    # basic accessors

    @property
    def dim(self) -> int:
        return len(self.basis)

    def dim_pair(self, x: str, y: str) -> int:
        """dim e_y A e_x, the span of paths from x to y."""
        return len(self.pair_basis.get((x, y), ()))

    def basis_of(self, x: str, y: str) -> list[int]:
        return self.pair_basis.get((x, y), [])

    def paths_between(self, x: str, y: str) -> list[Path]:
        """All nonvanishing-length paths from x to y (length < nilpotency)."""
        return list(self._paths_by_pair.get((x, y), []))

    def idempotent(self, v: str) -> Element:
        return {self.index[self.quiver.lazy(v)]: self.F.one}

    def one(self) -> Element:
        return {self.index[self.quiver.lazy(v)]: self.F.one for v in self.quiver.vertices}

    def reduce_path(self, p: Path) -> Element:
        if len(p.word) >= self.nilpotency:
            return {}
        return dict(self._nf.get(p, {}))

    def reduce(self, terms: Iterable[tuple[object, Path]]) -> Element:
        out: Element = {}
        F = self.F
        for c, p in terms:
            if not c:
                continue
            for k, v in self.reduce_path(p).items():
                nv = F.norm(out.get(k, 0) + c * v)
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
        return out

    def arrow_element(self, name: str) -> Element:
        a = self.quiver.arrow[name]
        return self.reduce_path(Path(a.src, a.tgt, (name,)))

    def basis_product(self, i: int, j: int) -> Element:
        """Normal form of ``basis[i] ∘ basis[j]``."""
        key = (i, j)
        hit = self._prod_cache.get(key)
        if hit is None:
            p = self.quiver.compose(self.basis[i], self.basis[j])
            hit = {} if p is None else self.reduce_path(p)
            self._prod_cache[key] = hit
        return hit

    def mul(self, u: Element, v: Element) -> Element:
        """``u ∘ v``: first v, then u."""
        F = self.F
        out: Element = {}
        for i, a in u.items():
            for j, b in v.items():
                pr = self.basis_product(i, j)
                if not pr:
                    continue
                ab = a * b
                for k, c in pr.items():
                    nv = F.norm(out.get(k, 0) + ab * c)
                    if nv:
                        out[k] = nv
                    else:
                        out.pop(k, None)
        return out

    def add(self, u: Element, v: Element, c=1) -> Element:
        F = self.F
        out = dict(u)
        for k, b in v.items():
            nv = F.norm(out.get(k, 0) + c * b)
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
        return out

    def scale(self, c, u: Element) -> Element:
        F = self.F
        return {k: F.norm(c * v) for k, v in u.items() if F.norm(c * v)}

    def fmt_element(self, u: Element) -> str:
        if not u:
            return "0"
        parts = []
        for k in sorted(u):
            c = self.F.fmt(u[k])
            p = str(self.basis[k])
            parts.append(p if c == "1" else f"{c}*{p}")
        return " + ".join(parts)

    def radical_power(self, x: str, y: str, k: int) -> list[Element]:
        """Spanning elements of ``e_y rad^k e_x`` (images of paths of length >= k)."""
        return [self.reduce_path(p) for p in self._paths_by_pair.get((x, y), []) if len(p.word) >= k]

    def validate(self) -> ValidationReport:
        msgs = []
        if not self.quiver.is_connected():
            msgs.append("warning: quiver is not connected")
        return ValidationReport(True, self.nilpotency, self.quiver.is_connected(), self.dim, msgs)

    def summary(self) -> str:
        return f"{self.name}: {len(self.quiver.vertices)} vertices, {len(self.quiver.arrows)} arrows, dim {self.dim} over {self.F}"


def validate_presentation(F: Field, quiver: Quiver, relations: Sequence[Relation], cap: int = 64) -> ValidationReport:
    return Algebra(F, quiver, relations, cap=cap).validate()


def algebra_basis(A: Algebra) -> dict[tuple[str, str], list[Path]]:
    """Normal-form basis of every nonzero ``e_y A e_x``, keyed by ``(x, y)``."""
    return {k: [A.basis[i] for i in v] for k, v in A.pair_basis.items()}


def convexity_witness(quiver: Quiver, S: Iterable[str]) -> list[str] | None:
    """A walk ``x ~> v ~> y`` with x, y in S and v outside, or None if S is convex."""
    S = set(S)
    outside = [v for v in quiver.vertices if v not in S]
    for v in outside:
        # predecessors of v and successors of v that can be reached without staying in S? any path counts
        pre = quiver.reachable([v], forward=False)
        post = quiver.reachable([v], forward=True)
        xs = [x for x in quiver.vertices if x in S and x in pre]
        ys = [y for y in quiver.vertices if y in S and y in post]
        if xs and ys:
            return [xs[0], v, ys[0]]
    return None


def full_subquiver(quiver: Quiver, S: Iterable[str]) -> Quiver:
    S = set(S)
    return Quiver([v for v in quiver.vertices if v in S],
                  [a for a in quiver.arrows if a.src in S and a.tgt in S])


def restrict_to_convex(A: Algebra, S: Iterable[str], name: str | None = None) -> Algebra:
    """The full convex subcategory of A on the vertex set S."""
    S = list(S)
    w = convexity_witness(A.quiver, S)
    if w is not None:
        raise NotConvex(f"not convex: path {w[0]} ~> {w[1]} ~> {w[2]} leaves the subset", w)
    sub = full_subquiver(A.quiver, S)
    Sset = set(S)
    rels = [r for r in A.relations if r.src in Sset and r.tgt in Sset]
    return Algebra(A.F, sub, rels, cap=A.cap, name=name or f"{A.name}|S")
