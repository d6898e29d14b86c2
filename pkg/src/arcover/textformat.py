"""Plain-text workspace format.

One file holds any number of blocks.  Each block starts with a header line
and runs until the next header.  ``#`` starts a comment.

    algebra <name>
    field Q | GF(p)
    vertex <v> [<v> ...]
    arrow <name>: <src> -> <tgt>
    relation <term> (+|- <term>)*        term = [coef*]arrow*arrow*...  (function order)

    tq <name>
    tqvertex <v> [proj] [inj] [open] [label P|I <algebra vertex>]
    tqarrow <name>: <src> -> <tgt>
    tau <z> = <w>
    sigma <arrow> = <arrow>
    standard

    module <name> of <algebra> [at <tq vertex>]
    dim <v> = <n>
    mat <arrow> = <row>; <row>; ...       rows of space-separated entries

    cover <name> of <algebra or tq> group trivial|Z/<n>|Z [window <r>]
    voltage <arrow> = <element>
    tauvoltage <vertex> = <element>

    functor <name> from <algebra> to <algebra>
    object <cover vertex> -> <base vertex>
    map <arrow> = <linear combination of base paths>
    shift <cover vertex> -> <cover vertex>
    interior <cover vertex> [<cover vertex> ...]

References after ``of``/``from``/``to`` name a block in the same file or a
path (relative to the file) whose first block of the right kind is used.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field as dfield
from fractions import Fraction

from .algebra import Algebra, Arrow, Quiver, make_relation
from .field import Field, FieldError, parse_field
from .translation_quiver import TranslationQuiver


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 0, path: str = ""):
        where = f"{path}:{line}: " if line else (f"{path}: " if path else "")
        super().__init__(where + msg)
        self.line = line


Term = tuple[object, tuple[str, ...]]  # (coefficient, word in function order)


@dataclass
class AlgebraSpec:
    name: str
    field: Field = dfield(default_factory=Field)
    vertices: list[str] = dfield(default_factory=list)
    arrows: list[Arrow] = dfield(default_factory=list)
    relations: list[list[Term]] = dfield(default_factory=list)
    line: int = 0

    def quiver(self) -> Quiver:
        return Quiver(list(self.vertices), list(self.arrows))

    def build(self, F: Field | None = None, cap: int = 64) -> Algebra:
        F = F or self.field
        Q = self.quiver()
        rels = [make_relation([(F(c), Q.path(w)) for c, w in r], F) for r in self.relations]
        return Algebra(F, Q, rels, cap=cap, name=self.name)


@dataclass
class ModuleSpec:
    name: str
    algebra: str
    at: str | None = None
    dims: dict[str, int] = dfield(default_factory=dict)
    mats: dict[str, list[list]] = dfield(default_factory=dict)
    line: int = 0


@dataclass
class CoverSpec:
    name: str
    of: str
    group: str = "trivial"
    window: int | None = None
    voltage: dict[str, int] = dfield(default_factory=dict)
    tauvoltage: dict[str, int] = dfield(default_factory=dict)
    line: int = 0


@dataclass
class FunctorSpec:
    name: str
    source: str
    target: str
    objects: dict[str, str] = dfield(default_factory=dict)
    maps: dict[str, list[Term]] = dfield(default_factory=dict)
    shift: dict[str, str] = dfield(default_factory=dict)
    interior: list[str] | None = None
    line: int = 0


@dataclass
class Workspace:
    path: str = ""
    algebras: dict[str, AlgebraSpec] = dfield(default_factory=dict)
    tqs: dict[str, TranslationQuiver] = dfield(default_factory=dict)
    modules: dict[str, ModuleSpec] = dfield(default_factory=dict)
    covers: dict[str, CoverSpec] = dfield(default_factory=dict)
    functors: dict[str, FunctorSpec] = dfield(default_factory=dict)
    order: list[tuple[str, str]] = dfield(default_factory=list)  # (kind, name)

    def first(self, kind: str):
        for k, n in self.order:
            if k == kind:
                return getattr(self, _STORE[k])[n]
        return None

    def resolve(self, kind: str, ref: str):
        """A block of ``kind`` named ``ref`` here, or the first one in file ``ref``."""
        store = getattr(self, _STORE[kind])
        if ref in store:
            return store[ref]
        path = ref if os.path.isabs(ref) else os.path.join(os.path.dirname(self.path), ref)
        if os.path.exists(path):
            other = load(path)
            got = other.first(kind)
            if got is not None:
                return got
        raise ParseError(f"no {kind} block named or stored at {ref!r}", path=self.path)


_STORE = {"algebra": "algebras", "tq": "tqs", "module": "modules", "cover": "covers", "functor": "functors"}

_NAME = r"[A-Za-z0-9_'.\[\]{}()⊕/]+"
_ARROW = re.compile(rf"^({_NAME})\s*:\s*({_NAME})\s*->\s*({_NAME})$")


def _parse_scalar(tok: str, line: int):
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad coefficient {tok!r}", line)


def _is_number(tok: str) -> bool:
    return bool(re.fullmatch(r"\d+(/\d+)?", tok))


def parse_combination(text: str, line: int = 0) -> list[Term]:
    """``2*a*b - c + 1/2*d*e`` as a list of (coefficient, word)."""
    s = text.replace(" ", "")
    if not s:
        raise ParseError("empty linear combination", line)
    if s[0] not in "+-":
        s = "+" + s
    parts = re.findall(r"([+-])([^+-]+)", s)
    if "".join(sg + body for sg, body in parts) != s:
        raise ParseError(f"cannot parse {text!r}", line)
    out: list[Term] = []
    for sign, body in parts:
        toks = body.split("*")
        coef: object = Fraction(1)
        if toks and _is_number(toks[0]):
            coef = _parse_scalar(toks[0], line)
            toks = toks[1:]
        if not toks or any(not t for t in toks):
            raise ParseError(f"missing arrow in term {body!r}", line)
        if sign == "-":
            coef = -coef
        out.append((coef, tuple(toks)))
    return out


def format_combination(terms: list[Term]) -> str:
    parts = []
    for i, (c, w) in enumerate(terms):
        c = Fraction(c)
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = "*".join(w)
        if mag != 1:
            body = f"{mag}*{body}"
        if i == 0:
            parts.append(("-" if sign == "-" else "") + body)
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)


def _kv(rest: str, line: int, sep: str = "=") -> tuple[str, str]:
    if sep not in rest:
        raise ParseError(f"expected '{sep}'", line)
    k, v = rest.split(sep, 1)
    k, v = k.strip(), v.strip()
    if not k or not v:
        raise ParseError("empty name or value", line)
    return k, v


def _group_elem(tok: str, line: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"bad group element {tok!r}", line)


def parse(text: str, path: str = "") -> Workspace:
    ws = Workspace(path=path)
    cur = None
    kind = None
    tqdata: dict = {}

    def close():
        nonlocal cur, kind
        if kind == "tq":
            d = tqdata
            try:
                G = TranslationQuiver(d["vertices"], d["arrows"], d["tau"], d["sigma"], d["proj"], d["inj"],
                                      d["open"], d["labels"], d["standard"], d["name"])
            except ValueError as e:
                raise ParseError(str(e), d["line"], path)
            G.derive_sigma()
            G.line = d["line"]
            ws.tqs[d["name"]] = G
        cur, kind = None, None

    for lineno, raw in enumerate(text.splitlines(), 1):
        s = raw.split("#", 1)[0].strip()
        if not s:
            continue
        head, _, rest = s.partition(" ")
        rest = rest.strip()
        try:
            if head in ("algebra", "tq", "module", "cover", "functor"):
                close()
                toks = rest.split()
                if not toks:
                    raise ParseError(f"{head} block needs a name", lineno)
                name = toks[0]
                if name in getattr(ws, _STORE[head]):
                    raise ParseError(f"duplicate {head} block {name!r}", lineno)
                kind = head
                ws.order.append((head, name))
                if head == "algebra":
                    cur = ws.algebras[name] = AlgebraSpec(name, line=lineno)
                elif head == "tq":
                    tqdata = dict(name=name, vertices=[], arrows=[], tau={}, sigma={}, proj=set(), inj=set(),
                                  open=set(), labels={}, standard=False, line=lineno)
                elif head == "module":
                    m = re.fullmatch(rf"({_NAME})\s+of\s+(\S+)(?:\s+at\s+(\S+))?", rest)
                    if not m:
                        raise ParseError("expected: module <name> of <algebra> [at <vertex>]", lineno)
                    cur = ws.modules[name] = ModuleSpec(name, m.group(2), m.group(3), line=lineno)
                elif head == "cover":
                    m = re.fullmatch(rf"({_NAME})\s+of\s+(\S+)\s+group\s+(trivial|Z/\d+|Z)(?:\s+window\s+(\d+))?", rest)
                    if not m:
                        raise ParseError("expected: cover <name> of <ref> group trivial|Z/n|Z [window r]", lineno)
                    g = m.group(3)
                    if g.startswith("Z/") and int(g[2:]) < 1:
                        raise ParseError("cyclic group order must be positive", lineno)
                    w = int(m.group(4)) if m.group(4) else None
                    if g == "Z" and w is None:
                        raise ParseError("the infinite cyclic group needs a window", lineno)
                    cur = ws.covers[name] = CoverSpec(name, m.group(2), g, w, line=lineno)
                else:
                    m = re.fullmatch(rf"({_NAME})\s+from\s+(\S+)\s+to\s+(\S+)", rest)
                    if not m:
                        raise ParseError("expected: functor <name> from <algebra> to <algebra>", lineno)
                    cur = ws.functors[name] = FunctorSpec(name, m.group(2), m.group(3), line=lineno)
                continue
            if kind is None:
                raise ParseError(f"{head!r} outside of a block", lineno)
            if kind == "algebra":
                if head == "field":
                    cur.field = parse_field(rest)
                elif head == "vertex":
                    for v in rest.split():
                        if v in cur.vertices:
                            raise ParseError(f"duplicate vertex {v}", lineno)
                        cur.vertices.append(v)
                elif head == "arrow":
                    m = _ARROW.fullmatch(rest)
                    if not m:
                        raise ParseError("expected: arrow <name>: <src> -> <tgt>", lineno)
                    cur.arrows.append(Arrow(*m.groups()))
                elif head == "relation":
                    cur.relations.append(parse_combination(rest, lineno))
                else:
                    raise ParseError(f"unknown algebra line {head!r}", lineno)
            elif kind == "tq":
                d = tqdata
                if head == "tqvertex":
                    toks = rest.split()
                    if not toks:
                        raise ParseError("tqvertex needs a name", lineno)
                    v = toks[0]
                    d["vertices"].append(v)
                    i = 1
                    while i < len(toks):
                        t = toks[i]
                        if t == "proj":
                            d["proj"].add(v)
                        elif t == "inj":
                            d["inj"].add(v)
                        elif t == "open":
                            d["open"].add(v)
                        elif t == "label" and i + 2 < len(toks) and toks[i + 1] in ("P", "I"):
                            d["labels"][v] = (toks[i + 1], toks[i + 2])
                            i += 2
                        else:
                            raise ParseError(f"unknown vertex flag {t!r}", lineno)
                        i += 1
                elif head == "tqarrow":
                    m = _ARROW.fullmatch(rest)
                    if not m:
                        raise ParseError("expected: tqarrow <name>: <src> -> <tgt>", lineno)
                    d["arrows"].append(Arrow(*m.groups()))
                elif head == "tau":
                    z, w = _kv(rest, lineno)
                    d["tau"][z] = w
                elif head == "sigma":
                    u, w = _kv(rest, lineno)
                    d["sigma"][u] = w
                elif head == "standard" and not rest:
                    d["standard"] = True
                else:
                    raise ParseError(f"unknown tq line {head!r}", lineno)
            elif kind == "module":
                if head == "dim":
                    v, n = _kv(rest, lineno)
                    if not n.isdigit():
                        raise ParseError("dimension must be a non-negative integer", lineno)
                    cur.dims[v] = int(n)
                elif head == "mat":
                    a, body = _kv(rest, lineno)
                    rows = [r.split() for r in body.split(";")]
                    if body.strip() == "[]":
                        rows = []
                    cur.mats[a] = [[_parse_scalar(t, lineno) for t in r] for r in rows]
                else:
                    raise ParseError(f"unknown module line {head!r}", lineno)
            elif kind == "cover":
                if head in ("voltage", "tauvoltage"):
                    a, g = _kv(rest, lineno)
                    getattr(cur, head)[a] = _group_elem(g, lineno)
                else:
                    raise ParseError(f"unknown cover line {head!r}", lineno)
            elif kind == "functor":
                if head == "object":
                    a, b = _kv(rest, lineno, "->")
                    cur.objects[a] = b
                elif head == "map":
                    a, comb = _kv(rest, lineno)
                    cur.maps[a] = parse_combination(comb, lineno)
                elif head == "shift":
                    a, b = _kv(rest, lineno, "->")
                    cur.shift[a] = b
                elif head == "interior":
                    cur.interior = (cur.interior or []) + rest.split()
                else:
                    raise ParseError(f"unknown functor line {head!r}", lineno)
        except ParseError as e:
            if not e.line:
                raise ParseError(str(e), lineno, path)
            if path and not str(e).startswith(path):
                raise ParseError(str(e).split(": ", 1)[-1], e.line, path)
            raise
        except FieldError as e:
            raise ParseError(str(e), lineno, path)
    close()
    if not ws.order:
        raise ParseError("no blocks found", 0, path or "<input>")
    return ws


def load(path: str) -> Workspace:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), path)


def _fmt_scalar(c) -> str:
    return str(Fraction(c))


def dump(ws: Workspace) -> str:
    """Canonical text of a workspace; ``parse(dump(parse(t)))`` equals ``parse(t)``."""
    out: list[str] = []
    for kind, name in ws.order:
        if out:
            out.append("")
        if kind == "algebra":
            a = ws.algebras[name]
            out.append(f"algebra {a.name}")
            out.append(f"field {a.field}")
            if a.vertices:
                out.append("vertex " + " ".join(a.vertices))
            out += [f"arrow {x.name}: {x.src} -> {x.tgt}" for x in a.arrows]
            out += ["relation " + format_combination(r) for r in a.relations]
        elif kind == "tq":
            out += dump_tq(ws.tqs[name]).rstrip("\n").split("\n")
        elif kind == "module":
            m = ws.modules[name]
            out.append(f"module {m.name} of {m.algebra}" + (f" at {m.at}" if m.at else ""))
            out += [f"dim {v} = {n}" for v, n in m.dims.items()]
            for a, mat in m.mats.items():
                body = "; ".join(" ".join(_fmt_scalar(c) for c in row) for row in mat) if mat else "[]"
                out.append(f"mat {a} = {body}")
        elif kind == "cover":
            c = ws.covers[name]
            out.append(f"cover {c.name} of {c.of} group {c.group}" + (f" window {c.window}" if c.window is not None else ""))
            out += [f"voltage {a} = {g}" for a, g in c.voltage.items()]
            out += [f"tauvoltage {a} = {g}" for a, g in c.tauvoltage.items()]
        else:
            f = ws.functors[name]
            out.append(f"functor {f.name} from {f.source} to {f.target}")
            out += [f"object {a} -> {b}" for a, b in f.objects.items()]
            out += [f"map {a} = {format_combination(t)}" for a, t in f.maps.items()]
            out += [f"shift {a} -> {b}" for a, b in f.shift.items()]
            if f.interior is not None:
                out.append("interior " + " ".join(f.interior))
    return "\n".join(out) + "\n"


def dump_tq(G: TranslationQuiver) -> str:
    out = [f"tq {G.name}"]
    for v in G.vertices:
        flags = []
        if v in G.projective:
            flags.append("proj")
        if v in G.injective:
            flags.append("inj")
        if v in G.open:
            flags.append("open")
        if v in G.labels:
            flags.append(f"label {G.labels[v][0]} {G.labels[v][1]}")
        out.append(" ".join(["tqvertex", v] + flags))
    out += [f"tqarrow {a.name}: {a.src} -> {a.tgt}" for a in G.arrows]
    out += [f"tau {z} = {w}" for z, w in G.tau.items()]
    out += [f"sigma {u} = {w}" for u, w in G.sigma.items()]
    if G.standard:
        out.append("standard")
    return "\n".join(out) + "\n"


def algebra_spec_from(A: Algebra) -> AlgebraSpec:
    """Text-format record of a computed algebra (coefficients as fractions)."""
    spec = AlgebraSpec(A.name, A.F, list(A.quiver.vertices), list(A.quiver.arrows))
    for r in A.relations:
        terms = []
        for c, p in r.terms:
            c = Fraction(c)
            if A.F.p and c > A.F.p // 2:
                c -= A.F.p
            terms.append((c, p.word))
        spec.relations.append(terms)
    return spec
