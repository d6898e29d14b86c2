"""Hypothesis strategies for small bound quivers."""

from hypothesis import strategies as st

from arcover.algebra import Algebra, Arrow, Quiver, make_relation
from arcover.field import Field


@st.composite
def acyclic_quivers(draw, max_vertices=5, max_arrows=7, path_only=False):
    n = draw(st.integers(1, max_vertices))
    verts = [f"v{i}" for i in range(n)]
    arrows = []
    if n > 1:
        m = n - 1 if path_only else draw(st.integers(n - 1, max(n - 1, max_arrows)))
        # a spanning path keeps the quiver connected
        for i in range(n - 1):
            s, t = sorted((i, i + 1))
            if draw(st.booleans()):
                s, t = t, s
            arrows.append((s, t))
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
        for _ in range(m - (n - 1)):
            arrows.append(draw(st.sampled_from(pairs)))
    # orient from smaller to larger topological label to stay acyclic
    order = draw(st.permutations(list(range(n))))
    rank = {v: k for k, v in enumerate(order)}
    out = []
    for k, (s, t) in enumerate(arrows):
        if rank[s] > rank[t]:
            s, t = t, s
        out.append(Arrow(f"a{k}", verts[s], verts[t]))
    return Quiver(verts, out)


@st.composite
def monomial_algebras(draw, field=Field(2), max_vertices=5, max_arrows=7):
    """Acyclic quiver with a random set of length-two zero relations."""
    Q = draw(acyclic_quivers(max_vertices, max_arrows))
    rels = []
    for b in Q.arrows:
        for a in Q.out_arrows[b.tgt]:
            if draw(st.booleans()):
                rels.append(make_relation([(1, Q.path((a.name, b.name)))], field))
    return Algebra(field, Q, rels, name="mono")
