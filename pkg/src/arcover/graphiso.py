"""Isomorphism of small directed multigraphs with vertex colours (backtracking)."""

from __future__ import annotations

from collections import Counter
from typing import Hashable, Sequence


def find_isomorphism(v1: Sequence[Hashable], e1: Sequence[tuple], v2: Sequence[Hashable], e2: Sequence[tuple],
                     colour1: dict | None = None, colour2: dict | None = None) -> dict | None:
    """A colour-preserving bijection of vertices carrying edge multiplicities, or None.

    Edges are ``(src, tgt)`` pairs or ``(src, tgt, label)`` triples; repeated
    entries are parallel edges and labels must be preserved.
    """
    if len(v1) != len(v2) or len(e1) != len(e2):
        return None
    c1 = colour1 or {}
    c2 = colour2 or {}
    m1 = Counter(_pair(e) for e in e1)
    m2 = Counter(_pair(e) for e in e2)
    p1: dict = {}
    p2: dict = {}
    for m, p in ((m1, p1), (m2, p2)):
        for (s, t, lab), c in m.items():
            p.setdefault((s, t), {})[lab] = c

    def signature(v, m, col):
        outs = sorted((repr(lab), c) for (s, t, lab), c in m.items() if s == v and t != v)
        ins = sorted((repr(lab), c) for (s, t, lab), c in m.items() if t == v and s != v)
        loops = sorted((repr(lab), c) for (s, t, lab), c in m.items() if s == v and t == v)
        return (col.get(v), tuple(loops), tuple(outs), tuple(ins))

    s1 = {v: signature(v, m1, c1) for v in v1}
    s2 = {v: signature(v, m2, c2) for v in v2}
    if Counter(s1.values()) != Counter(s2.values()):
        return None
    order = sorted(v1, key=lambda v: sum(1 for w in v1 if s1[w] == s1[v]))
    nb1: dict = {v: set() for v in v1}
    for s, t, _ in m1:
        nb1[s].add(t)
        nb1[t].add(s)
    # visit vertices adjacent to already placed ones first
    placed_order = []
    seen = set()
    for start in order:
        if start in seen:
            continue
        stack = [start]
        while stack:
            v = stack.pop(0)
            if v in seen:
                continue
            seen.add(v)
            placed_order.append(v)
            stack.extend(sorted(nb1[v] - seen, key=lambda w: order.index(w)))
    mapping: dict = {}
    used: set = set()

    def ok(v, w):
        for u, x in mapping.items():
            if p1.get((v, u), {}) != p2.get((w, x), {}) or p1.get((u, v), {}) != p2.get((x, w), {}):
                return False
        return p1.get((v, v), {}) == p2.get((w, w), {})

    def extend(i):
        if i == len(placed_order):
            return True
        v = placed_order[i]
        for w in v2:
            if w in used or s2[w] != s1[v] or not ok(v, w):
                continue
            mapping[v] = w
            used.add(w)
            if extend(i + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    return dict(mapping) if extend(0) else None


def _pair(e: tuple) -> tuple:
    return (e[0], e[1], e[2] if len(e) > 2 else None)
