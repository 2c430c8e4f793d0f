"""Line-oriented matroid text format.

::

    matroid <name>
    type linear_gf2 dim=<d> | linear_gfp p=<prime> dim=<d> | graphic vertices=<V>
         | laminar | uniform r=<r> | free | explicit
    elements <n>
    col <id> <v_1> ... <v_d>     # linear types
    edge <id> <u> <v>            # graphic
    set cap=<c> <id> <id> ...    # laminar
    indep <id> <id> ...          # explicit, one line per basis
    order <id> <id> ...          # optional arrival order
    weight <id> <w>              # optional weights, default 0

``#`` starts a comment.  Element ids are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .gfp import check_prime
from .matroids import (
    ExplicitMatroid,
    FreeMatroid,
    GraphicMatroid,
    LaminarMatroid,
    LinearMatroid,
    Matroid,
    UniformMatroid,
    members,
)

__all__ = ["ParseError", "MatroidFile", "parse_matroid_text", "parse_matroid_file", "dump_matroid"]

TYPES = ("linear_gf2", "linear_gfp", "graphic", "laminar", "uniform", "free", "explicit")


class ParseError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


@dataclass
class MatroidFile:
    matroid: Matroid
    order: list[int] | None = None
    weights: list[float] | None = None


def _int(tok: str, line: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(line, f"{what} must be an integer, got {tok!r}") from None


def _options(tokens: list[str], line: int) -> dict[str, str]:
    out = {}
    for t in tokens:
        if "=" not in t:
            raise ParseError(line, f"expected key=value, got {t!r}")
        k, v = t.split("=", 1)
        out[k] = v
    return out


def parse_matroid_text(text: str) -> MatroidFile:
    name = "matroid"
    kind = None
    opts: dict[str, str] = {}
    n = None
    cols: dict[int, tuple[int, list[int]]] = {}
    edges: dict[int, tuple[int, int, int]] = {}
    sets: list[tuple[list[int], int]] = []
    bases: list[list[int]] = []
    order = None
    weights: dict[int, float] = {}
    type_line = 0

    def ids(tokens, line):
        if n is None:
            raise ParseError(line, "'elements' must come before element lines")
        out = []
        for t in tokens:
            x = _int(t, line, "element id")
            if not 0 <= x < n:
                raise ParseError(line, f"element id {x} outside 0..{n - 1}")
            out.append(x)
        return out

    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        head, *rest = body.split()
        if head == "matroid":
            name = " ".join(rest) or name
        elif head == "type":
            if not rest or rest[0] not in TYPES:
                raise ParseError(lineno, f"unknown type {' '.join(rest)!r}; expected one of {', '.join(TYPES)}")
            kind, opts, type_line = rest[0], _options(rest[1:], lineno), lineno
        elif head == "elements":
            if len(rest) != 1:
                raise ParseError(lineno, "usage: elements <n>")
            n = _int(rest[0], lineno, "element count")
            if n < 0:
                raise ParseError(lineno, "element count must be non-negative")
        elif head == "col":
            if kind not in ("linear_gf2", "linear_gfp"):
                raise ParseError(lineno, "'col' needs a linear type")
            if not rest:
                raise ParseError(lineno, "usage: col <id> <v_1> ... <v_d>")
            (x,) = ids(rest[:1], lineno)
            if x in cols:
                raise ParseError(lineno, f"element {x} given twice")
            cols[x] = (lineno, [_int(t, lineno, "entry") for t in rest[1:]])
        elif head == "edge":
            if kind != "graphic":
                raise ParseError(lineno, "'edge' needs type graphic")
            if len(rest) != 3:
                raise ParseError(lineno, "usage: edge <id> <u> <v>")
            (x,) = ids(rest[:1], lineno)
            if x in edges:
                raise ParseError(lineno, f"element {x} given twice")
            edges[x] = (lineno, _int(rest[1], lineno, "vertex"), _int(rest[2], lineno, "vertex"))
        elif head == "set":
            if kind != "laminar":
                raise ParseError(lineno, "'set' needs type laminar")
            if not rest or not rest[0].startswith("cap="):
                raise ParseError(lineno, "usage: set cap=<c> <id> ...")
            cap = _int(rest[0][4:], lineno, "cap")
            if cap < 0:
                raise ParseError(lineno, "cap must be non-negative")
            sets.append((ids(rest[1:], lineno), cap))
        elif head == "indep":
            if kind != "explicit":
                raise ParseError(lineno, "'indep' needs type explicit")
            bases.append(ids(rest, lineno))
        elif head == "order":
            order = ids(rest, lineno)
            if sorted(order) != list(range(n)):
                raise ParseError(lineno, "order must list every element exactly once")
        elif head == "weight":
            if len(rest) != 2:
                raise ParseError(lineno, "usage: weight <id> <w>")
            (x,) = ids(rest[:1], lineno)
            try:
                w = float(rest[1])
            except ValueError:
                raise ParseError(lineno, f"weight must be a number, got {rest[1]!r}") from None
            if w < 0:
                raise ParseError(lineno, "weights must be non-negative")
            weights[x] = w
        else:
            raise ParseError(lineno, f"unknown directive {head!r}")

    end = len(text.splitlines()) or 1
    if kind is None:
        raise ParseError(end, "missing 'type' line")
    if n is None:
        raise ParseError(end, "missing 'elements' line")

    def need(key):
        if key not in opts:
            raise ParseError(type_line, f"type {kind} needs {key}=")
        return _int(opts[key], type_line, key)

    def complete(table, what):
        missing = [x for x in range(n) if x not in table]
        if missing:
            raise ParseError(end, f"no '{what}' line for element(s) {missing}")

    try:
        if kind in ("linear_gf2", "linear_gfp"):
            dim = need("dim")
            p = 2 if kind == "linear_gf2" else need("p")
            if kind == "linear_gfp":
                try:
                    check_prime(p)
                except ValueError as exc:
                    raise ParseError(type_line, str(exc)) from None
            complete(cols, "col")
            vecs = []
            for x in range(n):
                line, v = cols[x]
                if len(v) != dim:
                    raise ParseError(line, f"col {x} has {len(v)} entries, expected dim={dim}")
                if p == 2:
                    if any(e not in (0, 1) for e in v):
                        raise ParseError(line, "linear_gf2 entries must be 0 or 1")
                    vecs.append(sum(1 << i for i, e in enumerate(v) if e))
                else:
                    vecs.append(tuple(v))
            m: Matroid = LinearMatroid(vecs, p, dim, name=name)
        elif kind == "graphic":
            verts = need("vertices")
            complete(edges, "edge")
            for x, (line, u, v) in edges.items():
                if not (0 <= u < verts and 0 <= v < verts):
                    raise ParseError(line, f"edge {x} uses a vertex outside 0..{verts - 1}")
            m = GraphicMatroid(verts, [edges[x][1:] for x in range(n)], name=name)
        elif kind == "laminar":
            m = LaminarMatroid(n, sets, name=name)
        elif kind == "uniform":
            r = need("r")
            m = UniformMatroid(n, r)
            m.name = name
        elif kind == "free":
            m = FreeMatroid(n)
            m.name = name
        else:
            if not bases:
                raise ParseError(end, "explicit matroid needs at least one 'indep' line")
            sizes = {len(set(b)) for b in bases}
            if len(sizes) > 1:
                raise ParseError(end, "'indep' lines must all have the same size (bases)")
            m = ExplicitMatroid.from_bases(n, bases, name=name)
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(type_line, str(exc)) from None
    wl = [weights.get(x, 0.0) for x in range(n)] if weights else None
    return MatroidFile(m, order, wl)


def parse_matroid_file(path: str | Path) -> MatroidFile:
    return parse_matroid_text(Path(path).read_text(encoding="utf-8"))


def dump_matroid(m: Matroid, order=None, weights=None) -> str:
    """Serialize a built-in matroid; other types fall back to explicit bases (n <= 14)."""
    lines = [f"matroid {m.name}"]
    if isinstance(m, FreeMatroid):
        lines += ["type free", f"elements {m.n}"]
    elif isinstance(m, UniformMatroid):
        lines += [f"type uniform r={m.r}", f"elements {m.n}"]
    elif isinstance(m, LinearMatroid) and m.p == 2:
        lines += [f"type linear_gf2 dim={m.dim}", f"elements {m.n}"]
        for x, c in enumerate(m.columns):
            lines.append(" ".join(["col", str(x)] + [str(c >> i & 1) for i in range(m.dim)]))
    elif isinstance(m, LinearMatroid):
        lines += [f"type linear_gfp p={m.p} dim={m.dim}", f"elements {m.n}"]
        for x, c in enumerate(m.columns):
            lines.append(" ".join(["col", str(x)] + [str(v) for v in c]))
    elif isinstance(m, GraphicMatroid):
        lines += [f"type graphic vertices={m.vertex_count}", f"elements {m.n}"]
        for x, (u, v) in enumerate(m.edges):
            lines.append(f"edge {x} {u} {v}")
    elif isinstance(m, LaminarMatroid):
        lines += ["type laminar", f"elements {m.n}"]
        for a, cap in m.family:
            lines.append(" ".join([f"set cap={cap}"] + [str(x) for x in members(a)]))
    else:
        e = m if isinstance(m, ExplicitMatroid) else ExplicitMatroid.from_matroid(m)
        lines += ["type explicit", f"elements {m.n}"]
        for b in e.bases():
            lines.append(" ".join(["indep"] + [str(x) for x in members(b)]))
    if order is not None:
        lines.append(" ".join(["order"] + [str(int(x)) for x in order]))
    if weights is not None:
        for x, w in enumerate(weights):
            lines.append(f"weight {x} {float(w)!r}")
    return "\n".join(lines) + "\n"
