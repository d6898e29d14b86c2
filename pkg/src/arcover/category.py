"""Finite k-linear categories and extraction of a bound quiver presentation.

A :class:`FinCategory` is given by Hom dimensions, a composition rule on
coordinate vectors and a spanning set of the radical.  Extraction picks
arrows as a complement of rad^2 in rad, evaluates paths of the new quiver,
takes generators of the kernel degree by degree and certifies the result
by comparing dimensions and checking that path images span every Hom space.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from . import linalg as la
from .algebra import Algebra, Arrow, NotFiniteDimensional, Path, Quiver, make_relation
from .field import Field

Vec = dict[int, object]


class ExtractionFailed(ValueError):
    pass


@dataclass
class FinCategory:
    F: Field
    objects: list[str]
    hom_dim: Callable[[str, str], int]
    compose: Callable[[str, str, str, Vec, Vec], Vec]  # (x, y, z, g in (y,z), f in (x,y)) -> g∘f
    radical: Callable[[str, str], list[Vec]]  # spanning vectors of rad(x, y)
    identity: Callable[[str], Vec]


def algebra_category(A: Algebra, objects: Sequence[str] | None = None) -> FinCategory:
    """The full subcategory of A on ``objects``; Hom(x, y) = e_y A e_x."""
    objs = list(objects) if objects is not None else list(A.quiver.vertices)
    pos = {}
    for (x, y), idx in A.pair_basis.items():
        for t, k in enumerate(idx):
            pos[k] = t

    def to_vec(u):
        return {pos[k]: c for k, c in u.items()}

    def from_vec(x, y, v):
        idx = A.basis_of(x, y)
        return {idx[t]: c for t, c in v.items()}

    def compose(x, y, z, g, f):
        return to_vec(A.mul(from_vec(y, z, g), from_vec(x, y, f)))

    def radical(x, y):
        return [{t: A.F.one} for t, k in enumerate(A.basis_of(x, y)) if A.basis[k].word]

    def identity(x):
        return to_vec(A.idempotent(x))

    return FinCategory(A.F, objs, A.dim_pair, compose, radical, identity)


def _preferred_arrow_vectors(C: FinCategory, x: str, y: str, preferred) -> list[Vec]:
    if preferred is None:
        return []
    return [v for v in preferred.get((x, y), [])]


def extract_presentation(C: FinCategory, name: str = "A", preferred: dict | None = None,
                         arrow_names: Callable[[str, str, int], str] | None = None,
                         cap: int = 64) -> tuple[Algebra, dict[str, Vec]]:
    """Bound quiver presentation of a finite category with nilpotent radical.

    ``preferred[(x, y)]`` lists candidate arrow vectors tried first; the
    returned dict maps each new arrow to its value in Hom(src, tgt).
    """
    F = C.F
    objs = C.objects
    hd = {(x, y): C.hom_dim(x, y) for x in objs for y in objs}
    rad = {(x, y): la.span_basis([la.to_dense(v, hd[x, y], F) for v in C.radical(x, y)], F)
           for x in objs for y in objs}
    arrows: list[Arrow] = []
    values: dict[str, Vec] = {}
    for x in objs:
        for y in objs:
            n = hd[x, y]
            if not rad[x, y]:
                continue
            sq = la.RowSpace(F)
            for w in objs:
                for f in rad[x, w]:
                    for g in rad[w, y]:
                        h = C.compose(x, w, y, la.to_sparse(g), la.to_sparse(f))
                        if h:
                            sq.add(h)
            cands = _preferred_arrow_vectors(C, x, y, preferred) + [la.to_sparse(v) for v in rad[x, y]]
            k = 0
            for v in cands:
                if sq.add(dict(v)):
                    nm = arrow_names(x, y, k) if arrow_names else f"{x}_{y}_{k}"
                    arrows.append(Arrow(nm, x, y))
                    values[nm] = dict(v)
                    k += 1
            if sq.dim != len(rad[x, y]):
                raise ExtractionFailed(f"radical of Hom({x},{y}) is not generated by rad and rad^2")
    Q = Quiver(list(objs), arrows)

    # evaluate paths degree by degree
    def ev(p: Path) -> Vec:
        cur = C.identity(p.src)
        at = p.src
        for a in reversed(p.word):
            arr = Q.arrow[a]
            cur = C.compose(p.src, at, arr.tgt, values[a], cur)
            at = arr.tgt
            if not cur:
                return {}
        return cur

    by_len: list[list[Path]] = [[Q.lazy(v) for v in objs]]
    while True:
        nxt = []
        for q in by_len[-1]:
            for a in Q.out_arrows[q.tgt]:
                nxt.append(Path(q.src, a.tgt, (a.name,) + q.word))
        by_len.append(nxt)
        if all(not ev(p) for p in nxt):
            break
        if len(by_len) > cap:
            raise ExtractionFailed("radical is not nilpotent below the cap")
    N = len(by_len) - 1  # all paths of length N vanish

    pairs: dict[tuple[str, str], list[Path]] = {}
    for L in range(2, N + 1):
        for p in by_len[L]:
            pairs.setdefault((p.src, p.tgt), []).append(p)

    relations = []
    for (x, y), ps in sorted(pairs.items(), key=lambda kv: (objs.index(kv[0][0]), objs.index(kv[0][1]))):
        # kernel vectors, shortest paths first, leading with short relations
        ps = sorted(ps, key=lambda p: (len(p.word), Q.path_key(p)))
        n = hd[x, y]
        cols = [ev(p) for p in ps]
        rows = [{j: c[i] for j, c in enumerate(cols) if c.get(i)} for i in range(n)]
        ker = la.nullspace_sparse([r for r in rows if r], len(ps), F)
        # prefer kernel vectors supported on short paths: re-sort by max length
        ker.sort(key=lambda v: (max(len(ps[j].word) for j, c in enumerate(v) if c), sum(1 for c in v if c)))
        for v in ker:
            relations.append((x, y, [(c, ps[j]) for j, c in enumerate(v) if c]))

    # greedy minimal generating set, certified by the truncated ideal
    relations.sort(key=lambda r: max(len(p.word) for _, p in r[2]))
    chosen = _greedy_generators(Q, F, relations, by_len, N)
    chosen += _missing_monomials(Q, F, chosen, by_len, N)
    rels = [make_relation(terms, F) for terms in chosen]
    try:
        A = Algebra(F, Q, rels, name=name, cap=2 * N + 2)
    except NotFiniteDimensional as e:  # pragma: no cover - excluded by the monomial check
        raise ExtractionFailed(str(e))
    total = sum(hd.values())
    if A.dim != total:
        raise ExtractionFailed(f"extracted algebra has dimension {A.dim}, category has {total}")
    for (x, y), idx in A.pair_basis.items():
        span = la.span_basis([la.to_dense(ev(A.basis[k]), hd[x, y], F) for k in idx], F)
        if len(span) != hd[x, y]:
            raise ExtractionFailed(f"paths do not span Hom({x},{y})")
    return A, values


def _greedy_generators(Q: Quiver, F: Field, relations, by_len, N):
    """Pick kernel vectors not already in the ideal generated by earlier picks."""
    starts: dict[str, list[Path]] = {}
    ends: dict[str, list[Path]] = {}
    for L, ps in enumerate(by_len):
        for p in ps:
            starts.setdefault(p.src, []).append(p)
            ends.setdefault(p.tgt, []).append(p)
    col: dict[tuple[str, str, tuple], int] = {}

    def cid(p: Path):
        key = (p.src, p.tgt, p.word)
        if key not in col:
            col[key] = len(col)
        return col[key]

    spaces: dict[tuple[str, str], la.RowSpace] = {}
    chosen = []
    for x, y, terms in relations:
        rs = spaces.setdefault((x, y), la.RowSpace(F))
        vec = {cid(p): c for c, p in terms}
        if rs.contains(vec):
            continue
        chosen.append(terms)
        # add p r q (terms longer than N dropped) to every affected space
        for q in ends.get(x, []):
            for p in starts.get(y, []):
                new = []
                for c, w in terms:
                    word = p.word + w.word + q.word
                    if len(word) > N:
                        continue
                    new.append((c, Path(q.src, p.tgt, word)))
                if new:
                    key = (q.src, p.tgt)
                    spaces.setdefault(key, la.RowSpace(F)).add({cid(w): c for c, w in new})
    return chosen


def _missing_monomials(Q: Quiver, F: Field, chosen, by_len, N):
    """Length-N paths not in the ideal of ``chosen`` (computed without truncation).

    Truncating at length N is only sound once every path of length N lies in
    the generated ideal; relations such as ``rho^2 - delta sigma`` can make a
    long path equal to a longer one without ever killing it.
    """
    M = 2 * N
    lens = [list(b) for b in by_len]
    while len(lens) <= M:
        nxt = []
        for q in lens[-1]:
            for a in Q.out_arrows[q.tgt]:
                nxt.append(Path(q.src, a.tgt, (a.name,) + q.word))
        lens.append(nxt)
    ends: dict[tuple[str, int], list[Path]] = {}
    starts: dict[tuple[str, int], list[Path]] = {}
    for L, ps in enumerate(lens):
        for p in ps:
            ends.setdefault((p.tgt, L), []).append(p)
            starts.setdefault((p.src, L), []).append(p)
    col: dict[tuple, int] = {}

    def cid(p: Path):
        key = (p.src, p.tgt, p.word)
        if key not in col:
            # longer paths first so that short terms end up expressed through long ones
            col[key] = -len(col) - 1 if len(p.word) > N else len(col) + 1
        return col[key]

    spaces: dict[tuple[str, str], la.RowSpace] = {}

    def absorb(terms):
        x, y = terms[0][1].src, terms[0][1].tgt
        budget = M - max(len(w.word) for _, w in terms)
        for i in range(budget + 1):
            for j in range(budget + 1 - i):
                for q in ends.get((x, i), []):
                    for p in starts.get((y, j), []):
                        vec = {}
                        for c, w in terms:
                            vec[cid(Path(q.src, p.tgt, p.word + w.word + q.word))] = c
                        spaces.setdefault((q.src, p.tgt), la.RowSpace(F)).add(vec)

    for terms in chosen:
        absorb(terms)
    out = []
    for p in by_len[N]:
        rs = spaces.get((p.src, p.tgt))
        if rs is None or not rs.contains({cid(p): F.one}):
            out.append([(F.one, p)])
            absorb(out[-1])
    return out
