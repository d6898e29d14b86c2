"""Knit the Auslander-Reiten components shipped as .tq fixtures.

Usage: python3 scripts/make_components.py [fixtures-dir]
"""

import os
import sys
import time

from arcover import textformat as tf
from arcover.knitting import knit_component, mesh_additivity_failures
from arcover.translation_quiver import validate_tq

# (algebra fixture, output, knitting caps)
JOBS = [
    ("a2.alg", "a2.tq", dict()),
    ("riedtmann.alg", "riedtmann.tq", dict()),
    ("kronecker.alg", "kronecker.tq", dict(max_vertices=12, on_cap="window")),
    ("example_c.alg", "example_c.tq", dict(max_vertices=70, on_cap="window")),
]


def main(root: str = "fixtures") -> None:
    for src, dst, caps in JOBS:
        spec = tf.load(os.path.join(root, src)).first("algebra")
        A = spec.build()
        t = time.time()
        G = knit_component(A, name=f"{spec.name}_gamma", **caps)
        rep = validate_tq(G)
        bad = mesh_additivity_failures(G)
        if not rep.valid or bad:
            raise SystemExit(f"{src}: knitted component failed validation: {rep.problems or bad}")
        head = (f"# Auslander-Reiten component of {src} knitted from the projectives"
                + ("" if G.closed else " (window: open vertices are unfinished)") + "\n")
        with open(os.path.join(root, dst), "w") as fh:
            fh.write(head + tf.dump_tq(G))
        print(f"{dst}: {len(G.vertices)} vertices, {len(G.arrows)} arrows, "
              f"{'closed' if G.closed else 'window'} ({time.time() - t:.1f}s)")


if __name__ == "__main__":
    main(*sys.argv[1:])
