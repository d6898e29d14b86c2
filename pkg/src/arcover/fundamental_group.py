"""Fundamental group of a bound quiver presentation.

Generators are the chords of a spanning tree of the underlying graph.
Each minimal relation contributes the homotopy of any two of its paths,
giving relators in the chords.  ``simplify_group`` applies Tietze moves
and falls back to the abelianisation when it cannot decide.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from .algebra import Algebra, Path, Relation

Letter = tuple[str, int]  # (generator, +1 or -1)
Word = tuple[Letter, ...]


class Disconnected(ValueError):
    pass


@dataclass
class GroupPresentation:
    generators: list[str]
    relators: list[Word] = field(default_factory=list)

    def lines(self) -> list[str]:
        out = ["generators: " + (", ".join(self.generators) if self.generators else "(none)")]
        if not self.relators:
            out.append("relators: (none)")
        for r in self.relators:
            out.append("relator: " + format_word(r))
        return out


@dataclass(frozen=True)
class Verdict:
    kind: str  # "trivial", "free" or "unknown"
    rank: int = 0
    invariants: tuple[int, ...] = ()  # abelianisation: free rank then torsion orders

    def __str__(self) -> str:
        if self.kind == "trivial":
            return "trivial"
        if self.kind == "free":
            return f"free({self.rank})"
        free, *tors = self.invariants
        parts = ([f"Z^{free}"] if free else []) + [f"Z/{t}" for t in tors]
        return f"unknown(abelianisation {' x '.join(parts) or '0'})"


def format_word(w: Word) -> str:
    if not w:
        return "1"
    return " ".join(g if e > 0 else f"{g}^-1" for g, e in w)


# homotopy pairs

def _in_ideal(A: Algebra, terms: list[tuple[object, Path]]) -> bool:
    return not A.reduce(terms)


def split_minimal(A: Algebra, rel: Relation, max_support: int = 14) -> list[list[tuple[object, Path]]]:
    """Write a relation as a sum of minimal relations with disjoint supports.

    A relation is minimal when no proper nonempty sub-sum lies in the ideal.
    """
    terms = list(rel.terms)
    if len(terms) > max_support:
        return [terms]
    out = []
    stack = [terms]
    while stack:
        t = stack.pop()
        found = None
        for k in range(1, len(t) // 2 + 1):
            for J in combinations(range(len(t)), k):
                part = [t[i] for i in J]
                if _in_ideal(A, part):
                    found = J
                    break
            if found:
                break
        if found is None:
            out.append(t)
        else:
            stack.append([t[i] for i in range(len(t)) if i not in found])
            stack.append([t[i] for i in found])
    return out


def minimal_relation_pairs(A: Algebra) -> list[tuple[Path, Path]]:
    """Homotopy pairs of paths coming from the minimal relations of the generators."""
    pairs = []
    seen = set()
    for rel in A.relations:
        for m in split_minimal(A, rel):
            ps = [p for _, p in m]
            for p, q in combinations(ps, 2):
                key = frozenset((p, q))
                if key not in seen:
                    seen.add(key)
                    pairs.append((p, q))
    return pairs


# presentation

def spanning_tree(A: Algebra, base: str | None = None) -> set[str]:
    """Arrows of a BFS spanning tree of the underlying graph, in input order."""
    Q = A.quiver
    base = base if base is not None else Q.vertices[0]
    if base not in Q.vertex_index:
        raise ValueError(f"unknown vertex {base}")
    adj: dict[str, list[tuple[str, str]]] = {v: [] for v in Q.vertices}
    for a in Q.arrows:
        adj[a.src].append((a.name, a.tgt))
        if a.tgt != a.src:
            adj[a.tgt].append((a.name, a.src))
    seen = {base}
    tree = set()
    dq = deque([base])
    while dq:
        v = dq.popleft()
        for name, w in adj[v]:
            if w not in seen:
                seen.add(w)
                tree.add(name)
                dq.append(w)
    if len(seen) != len(Q.vertices):
        raise Disconnected("the quiver is not connected")
    return tree


def path_word(p: Path, chords: set[str]) -> Word:
    return tuple((a, 1) for a in reversed(p.word) if a in chords)


def free_reduce(w: Word) -> Word:
    out: list[Letter] = []
    for g, e in w:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def cyclic_reduce(w: Word) -> Word:
    w = free_reduce(w)
    while len(w) >= 2 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
        w = w[1:-1]
    return w


def inverse(w: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def pi1_presentation(A: Algebra, base: str | None = None) -> GroupPresentation:
    tree = spanning_tree(A, base)
    chords = [a.name for a in A.quiver.arrows if a.name not in tree]
    cs = set(chords)
    rels = []
    for p, q in minimal_relation_pairs(A):
        r = free_reduce(path_word(p, cs) + inverse(path_word(q, cs)))
        if r:
            rels.append(r)
    return GroupPresentation(chords, rels)


# simplification

def _canonical(w: Word) -> Word:
    """Least rotation of w or its inverse, for deduplication."""
    if not w:
        return w
    cands = []
    for v in (w, inverse(w)):
        for i in range(len(v)):
            cands.append(v[i:] + v[:i])
    return min(cands)


def _tidy(gp: GroupPresentation) -> GroupPresentation:
    seen = set()
    rels = []
    for r in gp.relators:
        r = cyclic_reduce(r)
        if not r:
            continue
        c = _canonical(r)
        if c not in seen:
            seen.add(c)
            rels.append(r)
    return GroupPresentation(list(gp.generators), rels)


def _eliminate_once(gp: GroupPresentation) -> GroupPresentation | None:
    """Remove a generator occurring exactly once in some relator."""
    for i, r in enumerate(gp.relators):
        for g in gp.generators:
            pos = [j for j, (h, _) in enumerate(r) if h == g]
            if len(pos) != 1:
                continue
            j = pos[0]
            e = r[j][1]
            # r = u g^e v = 1  =>  g^e = u^-1 v^-1  =>  g = (v u)^(-e)
            u, v = r[:j], r[j + 1:]
            val = v + u
            img = inverse(val) if e > 0 else val
            rels = []
            for k, s in enumerate(gp.relators):
                if k == i:
                    continue
                new: list[Letter] = []
                for h, f in s:
                    if h == g:
                        new.extend(img if f > 0 else inverse(img))
                    else:
                        new.append((h, f))
                rels.append(tuple(new))
            return GroupPresentation([x for x in gp.generators if x != g], rels)
    return None


def tietze_steps(gp: GroupPresentation) -> Iterator[GroupPresentation]:
    """The sequence of presentations visited by the simplifier, starting with gp."""
    cur = gp
    yield cur
    while True:
        t = _tidy(cur)
        if t.relators != cur.relators:
            cur = t
            yield cur
        nxt = _eliminate_once(cur)
        if nxt is None:
            return
        cur = nxt
        yield cur


def abelianization(gp: GroupPresentation) -> tuple[int, ...]:
    """(free rank, torsion orders...) of the abelianised group."""
    n = len(gp.generators)
    if n == 0:
        return (0,)
    idx = {g: i for i, g in enumerate(gp.generators)}
    rows = []
    for r in gp.relators:
        row = [0] * n
        for g, e in r:
            row[idx[g]] += e
        if any(row):
            rows.append(row)
    if not rows:
        return (n,)
    S = smith_normal_form(Matrix(rows), domain=ZZ)
    diag = [abs(int(S[i, i])) for i in range(min(S.shape))]
    nz = [d for d in diag if d]
    return (n - len(nz),) + tuple(sorted(d for d in nz if d != 1))


def simplify_group(gp: GroupPresentation) -> Verdict:
    last = gp
    for last in tietze_steps(gp):
        pass
    last = _tidy(last)
    if not last.generators:
        return Verdict("trivial")
    if not last.relators:
        return Verdict("free", len(last.generators))
    return Verdict("unknown", invariants=abelianization(last))


def cycle_rank_oracle(A: Algebra) -> int:
    """Edges minus vertices plus components, by union-find."""
    Q = A.quiver
    parent = {v: v for v in Q.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = len(Q.vertices)
    for a in Q.arrows:
        ra, rb = find(a.src), find(a.tgt)
        if ra != rb:
            parent[ra] = rb
            comps -= 1
    return len(Q.arrows) - len(Q.vertices) + comps


def pi1_report(A: Algebra, base: str | None = None) -> list[str]:
    gp = pi1_presentation(A, base)
    v = simplify_group(gp)
    return gp.lines() + [f"verdict: {v}", "(fundamental group of this presentation only)"]

