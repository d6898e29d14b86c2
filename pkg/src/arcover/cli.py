"""Command-line front end.

Exit status: 0 on success, 1 on a domain error (the input parsed but the
computation refused it), 2 on a parse or usage error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Callable

from . import textformat as tf
from .algebra import Algebra
from .covering import (CoveringError, functor_from_spec, push_down, quotient_by_action, verify_covering_functor,
                       voltage_cover_algebra, well_definedness_failures)
from .field import FieldError, parse_field
from .fundamental_group import pi1_report
from .graphiso import find_isomorphism
from .groups import GroupSpec
from .hochschild import hh0_dim, hh1_dim
from .knitting import knit_component
from .laura import (analyze_component, covering_algebra_from_cover, left_part, maximal_projectives,
                    theorem1_report, verify_left_section, verify_maximal_filtration)
from .representation import is_isomorphic, projective_at
from .tq_covering import (orbit_graph, pi1_rank, quotient_tq, tq_isomorphism, verify_tq_covering,
                          voltage_cohomology, voltage_cover_tq)
from .translation_quiver import TranslationQuiver, export_dot, validate_tq


class UsageError(Exception):
    pass


def _load(path: str) -> tf.Workspace:
    return tf.load(path)


def _algebra(ws: tf.Workspace, field: str | None = None, name: str | None = None) -> Algebra:
    spec = ws.algebras.get(name) if name else ws.first("algebra")
    if spec is None:
        raise UsageError(f"{ws.path}: no algebra block" + (f" named {name}" if name else ""))
    return spec.build(parse_field(field) if field else None)


def _tq(ws: tf.Workspace, name: str | None = None) -> TranslationQuiver:
    G = ws.tqs.get(name) if name else ws.first("tq")
    if G is None:
        raise UsageError(f"{ws.path}: no tq block" + (f" named {name}" if name else ""))
    return G


def _cover_spec(ws: tf.Workspace, name: str | None):
    c = ws.covers.get(name) if name else ws.first("cover")
    if c is None:
        raise UsageError(f"{ws.path}: no cover block" + (f" named {name}" if name else ""))
    return c


def _write_dot(text: str, path: str | None, out: list[str]):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        out.append(f"dot written to {path}")


def _tq_cover(ws: tf.Workspace, args):
    c = _cover_spec(ws, args.cover)
    G = ws.resolve("tq", c.of)
    group = GroupSpec.parse(c.group, c.window if c.window is not None else args.window)
    return voltage_cover_tq(G, c.voltage, group, c.tauvoltage), G


# subcommands

def cmd_validate(args, out):
    ws = _load(args.file)
    ok = True
    for kind, name in ws.order:
        if kind == "algebra":
            A = ws.algebras[name].build()
            rep = A.validate()
            out += [f"algebra {name}:"] + [f"  {l}" for l in rep.lines()]
            ok &= rep.admissible
        elif kind == "tq":
            rep = validate_tq(ws.tqs[name])
            out += [f"tq {name}:"] + [f"  {l}" for l in rep.lines()]
            ok &= rep.valid
        elif kind == "functor":
            fails = well_definedness_failures(functor_from_spec(ws, ws.functors[name]))
            out.append(f"functor {name}: " + ("well defined" if not fails else f"NOT well defined ({fails[0]})"))
            ok &= not fails
        else:
            out.append(f"{kind} {name}: parsed")
    return 0 if ok else 1


def cmd_basis(args, out):
    A = _algebra(_load(args.file), args.field)
    out.append(A.summary())
    for (x, y), idx in sorted(A.pair_basis.items(), key=lambda kv: (A.quiver.vertex_index[kv[0][0]],
                                                                    A.quiver.vertex_index[kv[0][1]])):
        out.append(f"{x} -> {y}: " + ", ".join(str(A.basis[k]) for k in idx))
    return 0


def cmd_hh(args, out):
    A = _algebra(_load(args.file), args.field)
    der, inn, h1 = hh1_dim(A)
    out += [f"HH0 = {hh0_dim(A)}", f"dim Der = {der}", f"dim Inn = {inn}", f"HH1 = {h1}"]
    return 0


def cmd_pi1(args, out):
    ws = _load(args.file)
    if ws.first("algebra") is not None and ws.first("tq") is None:
        out += pi1_report(_algebra(ws, args.field), args.base)
    else:
        G = _tq(ws)
        r = pi1_rank(G)
        out += [r.line(), f"rank (generic): {r.rank_generic}"]
    return 0


def cmd_knit(args, out):
    A = _algebra(_load(args.file), args.field)
    G = knit_component(A, max_vertices=args.cap, on_cap="window" if args.window_ok else "raise")
    out.append(tf.dump_tq(G).rstrip("\n"))
    if args.emit_modules:
        for v in G.vertices:
            M = G.modules[v]
            out.append("")
            out.append(f"module {v} of {A.name} at {v}")
            out += [f"dim {w} = {M.dims[w]}" for w in A.quiver.vertices]
            for a in A.quiver.arrows:
                mat = M.mats[a.name]
                body = "; ".join(" ".join(str(c) for c in row) for row in mat) if mat and mat[0] else "[]"
                out.append(f"mat {a.name} = {body}")
    _write_dot(export_dot(G), args.dot, out)
    return 0


def cmd_orbit_graph(args, out):
    G = _tq(_load(args.file))
    O = orbit_graph(G)
    out += O.lines()
    out.append(pi1_rank(G, O).line())
    _write_dot(export_dot(O, f"O({G.name})"), args.dot, out)
    return 0


def cmd_tqcover(args, out):
    ws = _load(args.file)
    pi, G = _tq_cover(ws, args)
    if args.action == "build":
        out.append(tf.dump_tq(pi.cover).rstrip("\n"))
        return 0
    rep = verify_tq_covering(pi, strict=False)
    out += rep.lines()
    if args.action == "verify":
        return 0 if rep.covering else 1
    Q, _, _ = quotient_tq(pi.cover, pi.vaction, pi.aaction)
    same = tq_isomorphism(Q, G) is not None
    out.append(f"quotient: {len(Q.vertices)} vertices, {len(Q.arrows)} arrows; isomorphic to {G.name}: "
               + ("yes" if same else "no"))
    return 0 if same else 1


def cmd_cover(args, out):
    ws = _load(args.file)
    if args.action in ("verify", "pushdown"):
        names = [args.functor] if args.functor else list(ws.functors)
        if not names:
            raise UsageError(f"{args.file}: no functor block")
        status = 0
        for n in names:
            F = functor_from_spec(ws, ws.functors[n])
            rep = verify_covering_functor(F)
            if args.action == "verify":
                out += rep.lines()
                status |= 0 if rep.covering else 1
                continue
            for x in F.cover.quiver.vertices:
                if not F.is_interior(x):
                    continue
                P = projective_at(F.cover, x)
                b = F.object_map[x]
                iso = is_isomorphic(push_down(F, P), projective_at(F.base, b))
                out.append(f"{n}: push-down of P_{x} is isomorphic to P_{b}: {'yes' if iso else 'no'}")
                status |= 0 if iso else 1
        return status
    c = _cover_spec(ws, args.cover)
    A = ws.resolve("algebra", c.of).build(parse_field(args.field) if args.field else None)
    group = GroupSpec.parse(c.group, c.window if c.window is not None else args.window)
    Fc = voltage_cover_algebra(A, c.voltage, group)
    E = Fc.cover
    out.append(f"cover {E.name}: {len(E.quiver.vertices)} vertices, {len(E.quiver.arrows)} arrows, dim {E.dim}")
    if args.action == "build":
        out.append(tf.dump(_single(tf.algebra_spec_from(E))).rstrip("\n"))
        return 0
    B, _ = quotient_by_action(E, Fc.action, Fc.arrow_action)
    iso = find_isomorphism(B.quiver.vertices, [(a.src, a.tgt) for a in B.quiver.arrows],
                           A.quiver.vertices, [(a.src, a.tgt) for a in A.quiver.arrows])
    same = iso is not None and B.dim == A.dim
    out.append(f"quotient: {len(B.quiver.vertices)} vertices, dim {B.dim}; matches {A.name}: "
               + ("yes" if same else "no"))
    return 0 if same else 1


def _single(spec: tf.AlgebraSpec) -> tf.Workspace:
    ws = tf.Workspace()
    ws.algebras[spec.name] = spec
    ws.order.append(("algebra", spec.name))
    return ws


def cmd_cover_algebra(args, out):
    ws = _load(args.file)
    G = _tq(ws)
    A = _algebra(_load(args.algebra), args.field)
    if ws.covers and not (args.window is not None and args.cover is None and not args.use_cover):
        pi, _ = _tq_cover(ws, args)
    else:
        if args.window is None:
            raise UsageError("no cover block: give --window to cover by the first voltage class")
        basis = voltage_cohomology(G)
        if not basis:
            raise CoveringError("the component has no nontrivial integer voltage")
        pi = voltage_cover_tq(G, basis[0], GroupSpec("Z", window=args.window))
    res = covering_algebra_from_cover(A, pi, forced=args.forced)
    out += res.lines()
    Ap = res.algebra
    out += [f"arrow {a.name}: {a.src} -> {a.tgt}" for a in Ap.quiver.arrows]
    for r in Ap.relations:
        out.append("relation " + tf.format_combination([(c, p.word) for c, p in r.terms]))
    return 0


def cmd_report(args, out):
    A = _algebra(_load(args.algebra), args.field)
    G = _tq(_load(args.tq))
    rep = theorem1_report(A, G, True if args.standard else None)
    out += rep.lines()
    return 0 if rep.passed else 1


def cmd_dot(args, out):
    ws = _load(args.file)
    G = ws.first("tq")
    text = export_dot(G) if G is not None else export_dot(_algebra(ws).quiver, ws.first("algebra").name)
    if args.dot:
        _write_dot(text, args.dot, out)
    else:
        out.append(text.rstrip("\n"))
    return 0


def cmd_analyze(args, out):
    G = _tq(_load(args.file))
    out += analyze_component(G).lines()
    mp, mi = maximal_projectives(G)
    out.append("maximal projectives: " + (" ".join(mp) or "(none)"))
    out.append("minimal injectives: " + (" ".join(mi) or "(none)"))
    return 0


def cmd_left_section(args, out):
    G = _tq(_load(args.file))
    chk = verify_left_section(G, args.vertices)
    out += chk.lines()
    return 0 if chk.ok else 1


def cmd_left_part(args, out):
    A = _algebra(_load(args.file), args.field)
    out += left_part(A, cap=args.cap).lines()
    return 0


def cmd_filtration(args, out):
    A = _algebra(_load(args.file), args.field)
    G = _tq(_load(args.tq)) if args.tq else None
    rep = verify_maximal_filtration(A, args.base.split(","), args.add.split(",") if args.add else [], G,
                                    cap=args.cap)
    out += rep.lines()
    return 0 if rep.ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="arcover", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    def add(name: str, fn: Callable, help: str, file: bool = True) -> argparse.ArgumentParser:
        s = sub.add_parser(name, help=help)
        if file:
            s.add_argument("file")
        s.add_argument("--field", help="override the field, e.g. Q or GF(2)")
        s.set_defaults(fn=fn)
        return s

    add("validate", cmd_validate, "parse and validate every block")
    add("basis", cmd_basis, "normal-form path basis")
    add("hh", cmd_hh, "centre and first Hochschild cohomology")
    s = add("pi1", cmd_pi1, "fundamental group of a presentation or rank of a component")
    s.add_argument("--base")
    s = add("knit", cmd_knit, "knit the component of the projectives")
    s.add_argument("--cap", "--max-vertices", type=int, default=80, dest="cap")
    s.add_argument("--window", action="store_true", dest="window_ok", help="return a window at the cap")
    s.add_argument("--emit-modules", action="store_true")
    s.add_argument("--dot")
    s = add("orbit-graph", cmd_orbit_graph, "orbit graph and its cycle rank")
    s.add_argument("--dot")
    s = sub.add_parser("tqcover", help="voltage covers of translation quivers")
    s.add_argument("action", choices=["build", "verify", "quotient"])
    s.add_argument("file")
    s.add_argument("--cover")
    s.add_argument("--window", type=int)
    s.set_defaults(fn=cmd_tqcover, field=None)
    s = sub.add_parser("cover", help="covering functors and voltage covers of algebras")
    s.add_argument("action", choices=["verify", "build", "quotient", "pushdown"])
    s.add_argument("file")
    s.add_argument("--functor")
    s.add_argument("--cover")
    s.add_argument("--window", type=int)
    s.add_argument("--field")
    s.set_defaults(fn=cmd_cover)
    s = add("cover-algebra", cmd_cover_algebra, "covering algebra of a cover of a component")
    s.add_argument("--algebra", required=True)
    s.add_argument("--cover")
    s.add_argument("--use-cover", action="store_true", help="prefer the cover block even with --window")
    s.add_argument("--window", type=int)
    s.add_argument("--forced", action="store_true", help="run on a component not flagged standard")
    s = sub.add_parser("report", help="consistency reports")
    s.add_argument("which", choices=["theorem1"])
    s.add_argument("algebra")
    s.add_argument("tq")
    s.add_argument("--standard", action="store_true")
    s.add_argument("--field")
    s.set_defaults(fn=cmd_report)
    s = add("dot", cmd_dot, "DOT text of a component or quiver")
    s.add_argument("--dot")
    add("analyze", cmd_analyze, "component report")
    s = add("left-section", cmd_left_section, "check a left section")
    s.add_argument("vertices", nargs="+")
    s = add("left-part", cmd_left_part, "left part of a representation-finite algebra")
    s.add_argument("--cap", type=int, default=80)
    s = add("filtration", cmd_filtration, "check a maximal filtration")
    s.add_argument("--base", required=True, help="comma-separated vertices of C")
    s.add_argument("--add", default="", help="comma-separated vertices in the order they are added")
    s.add_argument("--tq", help="component of the whole algebra")
    s.add_argument("--cap", type=int, default=80)
    return p


class _ArgError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgError(message)


def run(argv: list[str]) -> tuple[int, str]:
    """Run one command; returns the exit status and the report text."""
    p = build_parser()
    p.__class__ = _Parser
    for action in p._subparsers._group_actions:  # make subparsers raise too
        for sp in action.choices.values():
            sp.__class__ = _Parser
    out: list[str] = []
    try:
        args = p.parse_args(argv)
        status = args.fn(args, out)
    except _ArgError as e:
        return 2, f"usage error: {e}\n"
    except (tf.ParseError, UsageError, FieldError, OSError) as e:
        return 2, "\n".join(out + [f"error: {e}"]) + "\n"
    except ValueError as e:  # every domain error derives from ValueError
        return 1, "\n".join(out + [f"error: {type(e).__name__}: {e}"]) + "\n"
    return status, "\n".join(out) + "\n"


def main(argv: list[str] | None = None) -> int:
    status, text = run(sys.argv[1:] if argv is None else argv)
    (sys.stdout if status != 2 else sys.stderr).write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
