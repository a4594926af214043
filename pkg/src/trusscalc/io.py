"""Line-oriented text formats for towers, bordisms and framed complexes, plus renderers.

Three document headers are understood::

    TRUSS v1            BORDISM v1           COMPLEX v1
    n 2                 domain SRS           n 2
    level 1             codomain SRSRS       vertex 0
      fiber 0 SRS       sing 0->0 2->4       edge 0 1 dir 0 label 2
    level 2                                  simplex 0 1 2
      fiber 0 S                              cells
      fiber 1 SRS                            cover 1 0
      fiber 2 S
      bordism 1 0 sing 0->0 2->0
      bordism 1 2 sing 0->0 2->0
    label (2,0) a

Elements of a tower are named by their index in the canonical order of
their level: by base element index, then by frame position.  A tower over a
base other than the point declares it first with ``base <size>`` and
``base-cover <a> <b>`` lines.  ``#`` starts a comment.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass

from . import bordism as bd
from .bordism import Bordism1
from .bundle1 import Bundle1, lift
from .framed_complex import FramedComplex, complex_from_simplices, complex_translate, edge, maximal_chains
from .poset import Poset, sort_ids
from .truss1 import Truss1
from .trussn import POINT, TrussTower

TRUSS = "truss"
STRATIFIED = "stratified-truss"
BORDISM = "bordism"
COMPLEX = "framed-complex"

HEADERS = {"TRUSS": (TRUSS, STRATIFIED), "BORDISM": (BORDISM,), "COMPLEX": (COMPLEX,)}


class FormatError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)
        self.line = line
        self.column = column


@dataclass
class Document:
    kind: str
    payload: object

    def __eq__(self, other) -> bool:
        return isinstance(other, Document) and self.kind == other.kind and self.payload == other.payload


# -- canonical orders ---------------------------------------------------------


def canonical_orders(t: TrussTower) -> list[list]:
    """Elements of each level, ordered by base index then frame position."""
    orders = [list(t.base.elements)]
    for i in range(1, t.depth + 1):
        lvl = t.levels[i - 1]
        index = {y: k for k, y in enumerate(orders[-1])}
        orders.append(sorted(lvl.total.elements, key=lambda x: (index[lvl.projection[x]], lvl.position[x])))
    return orders


# -- tokens -------------------------------------------------------------------


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        if body.strip():
            yield no, raw, body.split()


def _column(raw: str, token: str) -> int:
    at = raw.find(token)
    return (at if at >= 0 else max(raw.find(token[:1]), 0)) + 1


def _int(tok: str, no: int, raw: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"expected an integer, got {tok!r}", no, _column(raw, tok)) from None


def _ints(tokens: list[str], no: int, raw: str) -> list[int]:
    flat = " ".join(tokens).replace("->", " ").replace("(", " ").replace(")", " ").replace(",", " ")
    return [_int(t, no, raw) for t in flat.split()]


def _pairs(tokens, no, raw) -> list[tuple[int, int]]:
    nums = _ints(tokens, no, raw)
    if len(nums) % 2:
        raise FormatError("odd number of integers in a pair list", no, 1)
    return list(zip(nums[::2], nums[1::2]))


def _bordism(form: str, data: list[str], dom: Truss1, cod: Truss1, no: int, raw: str) -> Bordism1:
    pairs = _pairs(data, no, raw)
    if form == "sing":
        return bd.from_singular_function(dom, cod, dict(pairs))
    if form == "reg":
        return bd.from_regular_function(dom, cod, dict(pairs))
    if form == "pairs":
        return bd.validate(dom, cod, set(pairs))
    raise FormatError(f"unknown bordism form {form!r}; expected pairs, sing or reg", no, _column(raw, form))


def _annotate(err: Exception, no: int) -> Exception:
    """Same error type as the owning module raised, with the line prefixed."""
    return type(err)(f"line {no}: {err}")


# -- parsing ------------------------------------------------------------------


def parse(text: str) -> Document:
    lines = list(_lines(text))
    if not lines:
        raise FormatError("empty document")
    no, raw, toks = lines[0]
    if len(toks) != 2 or toks[0] not in HEADERS or toks[1] != "v1":
        raise FormatError(f"expected a header TRUSS v1, BORDISM v1 or COMPLEX v1, got {raw.strip()!r}", no, 1)
    body = lines[1:]
    if toks[0] == "TRUSS":
        return _parse_truss(body)
    if toks[0] == "BORDISM":
        return _parse_bordism(body)
    return _parse_complex(body)


def _parse_truss(lines) -> Document:
    depth = None
    base_size = None
    base_covers: list[tuple[int, int]] = []
    levels: list[dict] = []
    labels: list[tuple[int, str, int, str]] = []
    for no, raw, toks in lines:
        key = toks[0]
        if key == "n":
            if depth is not None or len(toks) != 2:
                raise FormatError("expected a single 'n <depth>' line", no, 1)
            depth = _int(toks[1], no, raw)
        elif key == "base":
            if base_size is not None or levels or len(toks) != 2:
                raise FormatError("expected a single 'base <size>' line before the levels", no, 1)
            base_size = _int(toks[1], no, raw)
            if base_size < 1:
                raise FormatError("a base needs at least one element", no, _column(raw, toks[1]))
        elif key == "base-cover":
            if base_size is None or levels or len(toks) != 3:
                raise FormatError("expected 'base-cover <a> <b>' after the base line", no, 1)
            base_covers.append((_int(toks[1], no, raw), _int(toks[2], no, raw)))
        elif key == "level":
            if len(toks) != 2:
                raise FormatError("expected 'level <i>'", no, 1)
            i = _int(toks[1], no, raw)
            if i != len(levels) + 1:
                raise FormatError(f"expected level {len(levels) + 1}, got {i}", no, _column(raw, toks[1]))
            levels.append({"fibers": {}, "bordisms": {}, "line": no})
        elif key == "fiber":
            if not levels or len(toks) != 3:
                raise FormatError("expected 'fiber <base-index> <dimword>' inside a level", no, 1)
            y = _int(toks[1], no, raw)
            if y in levels[-1]["fibers"]:
                raise FormatError(f"second fiber over {y}", no, 1)
            try:
                levels[-1]["fibers"][y] = (Truss1(toks[2]), no)
            except ValueError as err:
                raise _annotate(err, no) from None
        elif key == "bordism":
            if not levels or len(toks) < 4:
                raise FormatError("expected 'bordism <src> <dst> <form> ...' inside a level", no, 1)
            y, y2 = _int(toks[1], no, raw), _int(toks[2], no, raw)
            if (y, y2) in levels[-1]["bordisms"]:
                raise FormatError(f"second bordism over {y}->{y2}", no, 1)
            levels[-1]["bordisms"][(y, y2)] = (toks[3], toks[4:], no, raw)
        elif key == "label":
            if len(toks) > 3 and toks[1].startswith("("):
                # the reference may be written with spaces inside its parentheses
                close = next((j for j in range(1, len(toks)) if toks[j].endswith(")")), None)
                if close is not None:
                    toks = [toks[0], "".join(toks[1 : close + 1])] + toks[close + 1 :]
            if len(toks) != 3:
                raise FormatError("expected 'label (<level>,<index>) <stratum>'", no, 1)
            ref = _ints([toks[1]], no, raw)
            if len(ref) == 2:
                level, k = ref
                if level != depth:
                    raise FormatError(f"labels name top-level elements, got level {level}", no, _column(raw, toks[1]))
            elif len(ref) == 1:
                k = ref[0]
            else:
                raise FormatError(f"bad element reference {toks[1]!r}", no, _column(raw, toks[1]))
            labels.append((k, toks[2], no, raw))
        else:
            raise FormatError(f"unknown keyword {key!r}", no, _column(raw, key))
    if depth is None:
        raise FormatError("missing 'n <depth>' line")
    if depth != len(levels):
        raise FormatError(f"declared depth {depth} but found {len(levels)} levels")
    if base_size is None:
        base, order = POINT, [()]
    else:
        order = list(range(base_size))
        try:
            base = Poset(order, base_covers)
        except ValueError as err:
            raise FormatError(f"base covers: {err}") from None
    built: list[Bundle1] = []
    below = base
    for i, entry in enumerate(levels, 1):
        n_below = len(order)
        fibers = {}
        for y, (t, no) in entry["fibers"].items():
            if not 0 <= y < n_below:
                raise FormatError(f"fiber over {y}, but level {i - 1} has {n_below} elements", no, 1)
            fibers[order[y]] = t
        missing = [k for k in range(n_below) if order[k] not in fibers]
        if missing:
            raise FormatError(f"level {i} has no fiber over element {missing[0]}", entry["line"], 1)
        covers = set(below.covers)
        bordisms = {}
        for (y, y2), (form, data, no, raw) in entry["bordisms"].items():
            if not (0 <= y < n_below and 0 <= y2 < n_below) or (order[y], order[y2]) not in covers:
                raise FormatError(f"{y}->{y2} is not a covering arrow of level {i - 1}", no, 1)
            a, b = order[y], order[y2]
            try:
                bordisms[(a, b)] = _bordism(form, data, fibers[a], fibers[b], no, raw)
            except FormatError:
                raise
            except ValueError as err:
                raise _annotate(err, no) from None
        for a, b in below.covers:
            if (a, b) not in bordisms:
                raise FormatError(f"level {i} has no bordism over {order.index(a)}->{order.index(b)}", entry["line"], 1)
        lvl = Bundle1(below, fibers, bordisms)
        built.append(lvl)
        below = lvl.total
        order = [lift(order[k], p) for k in range(n_below) for p in range(len(fibers[order[k]]))]
    labeling = None
    if labels:
        labeling = {}
        for k, name, no, raw in labels:
            if not 0 <= k < len(order):
                raise FormatError(f"label for element {k}, but the top level has {len(order)} elements", no, 1)
            if order[k] in labeling:
                raise FormatError(f"element {k} labeled twice", no, 1)
            labeling[order[k]] = name
    tower = TrussTower(base, built, labeling)
    return Document(STRATIFIED if labeling else TRUSS, tower)


def _parse_bordism(lines) -> Document:
    dom = cod = None
    result = None
    for no, raw, toks in lines:
        key = toks[0]
        if key in ("domain", "codomain") and len(toks) == 2:
            try:
                t = Truss1(toks[1])
            except ValueError as err:
                raise _annotate(err, no) from None
            if key == "domain":
                dom = t
            else:
                cod = t
        elif key in ("sing", "reg", "pairs"):
            if dom is None or cod is None or result is not None:
                raise FormatError("a bordism needs domain and codomain first, and one relation line", no, 1)
            try:
                result = _bordism(key, toks[1:], dom, cod, no, raw)
            except FormatError:
                raise
            except ValueError as err:
                raise _annotate(err, no) from None
        else:
            raise FormatError(f"unexpected line {raw.strip()!r}", no, 1)
    if result is None:
        raise FormatError("bordism document has no relation line")
    return Document(BORDISM, result)


def _vertex(tok: str):
    try:
        return int(tok)
    except ValueError:
        return tok


def _parse_complex(lines) -> Document:
    n = None
    vertices: list = []
    facets: list = []
    direction: dict = {}
    labels: dict = {}
    covers: list = []
    has_cells = False
    for no, raw, toks in lines:
        key = toks[0]
        if key == "n" and len(toks) == 2:
            n = _int(toks[1], no, raw)
        elif key == "vertex" and len(toks) == 2:
            v = _vertex(toks[1])
            if v in vertices:
                raise FormatError(f"vertex {v} declared twice", no, 1)
            vertices.append(v)
        elif key == "edge":
            if len(toks) != 7 or toks[3] != "dir" or toks[5] != "label":
                raise FormatError("expected 'edge <u> <v> dir <u|v> label <k>'", no, 1)
            u, v, src = _vertex(toks[1]), _vertex(toks[2]), _vertex(toks[4])
            if src not in (u, v):
                raise FormatError(f"direction {src} is not an endpoint of the edge", no, _column(raw, toks[4]))
            e = edge(u, v)
            if e in labels:
                raise FormatError(f"edge {u} {v} declared twice", no, 1)
            direction[e] = (src, v if src == u else u)
            labels[e] = _int(toks[6], no, raw)
        elif key == "simplex" and len(toks) >= 2:
            facets.append([_vertex(tok) for tok in toks[1:]])
        elif key == "cells" and len(toks) == 1:
            has_cells = True
        elif key == "cover" and len(toks) == 3:
            if not has_cells:
                raise FormatError("cover lines must follow a 'cells' line", no, 1)
            covers.append((_vertex(toks[1]), _vertex(toks[2])))
        else:
            raise FormatError(f"unexpected line {raw.strip()!r}", no, 1)
    if n is None:
        raise FormatError("missing 'n <frame-dimension>' line")
    known = set(vertices)
    for f in facets:
        for v in f:
            if v not in known:
                raise FormatError(f"simplex uses undeclared vertex {v}")
    for e in labels:
        if not e <= known:
            raise FormatError(f"edge uses undeclared vertex {sort_ids(e - known)[0]}")
    cells = Poset.from_relation(vertices, covers) if has_cells else None
    facets += [[v] for v in vertices]
    c = complex_from_simplices(n, facets, direction, labels, cells)
    c.vertices = sort_ids(vertices)
    return Document(COMPLEX, c)


# -- printing -----------------------------------------------------------------


def _fmt_pairs(items) -> str:
    return " ".join(f"{a}->{b}" for a, b in items)


def to_text(doc: Document | TrussTower | Bordism1 | FramedComplex) -> str:
    if isinstance(doc, Document):
        doc = doc.payload
    if isinstance(doc, TrussTower):
        return _print_truss(doc)
    if isinstance(doc, Bordism1):
        return _print_bordism(doc)
    if isinstance(doc, FramedComplex):
        return _print_complex(doc)
    raise FormatError(f"cannot print {type(doc).__name__}")


def _bordism_body(r: Bordism1) -> str:
    body = _fmt_pairs(sorted(r.singular_function.items()))
    return f"sing {body}".rstrip()


def _print_truss(t: TrussTower) -> str:
    orders = canonical_orders(t)
    out = ["TRUSS v1", f"n {t.depth}"]
    if t.base != POINT:
        index = {y: k for k, y in enumerate(orders[0])}
        out.append(f"base {len(orders[0])}")
        for a, b in sorted(t.base.covers, key=lambda c: (index[c[0]], index[c[1]])):
            out.append(f"base-cover {index[a]} {index[b]}")
    for i in range(1, t.depth + 1):
        lvl = t.levels[i - 1]
        index = {y: k for k, y in enumerate(orders[i - 1])}
        out.append(f"level {i}")
        for y in orders[i - 1]:
            out.append(f"  fiber {index[y]} {lvl.fibers[y].word}")
        for a, b in sorted(lvl.base.covers, key=lambda c: (index[c[0]], index[c[1]])):
            out.append(f"  bordism {index[a]} {index[b]} {_bordism_body(lvl.bordisms[(a, b)])}")
    if t.labels:
        for k, x in enumerate(orders[-1]):
            out.append(f"label ({t.depth},{k}) {t.labels[x]}")
    return "\n".join(out) + "\n"


def _print_bordism(r: Bordism1) -> str:
    return f"BORDISM v1\ndomain {r.domain.word}\ncodomain {r.codomain.word}\n{_bordism_body(r)}\n"


def _print_complex(c: FramedComplex) -> str:
    out = ["COMPLEX v1", f"n {c.n}"]
    for v in sort_ids(c.vertices):
        out.append(f"vertex {v}")
    for e in sorted(c.edges(), key=sort_ids):
        u, v = sort_ids(e)
        out.append(f"edge {u} {v} dir {c.direction[e][0]} label {c.labels[e]}")
    for f in sorted((sort_ids(f) for f in c.facets() if len(f) > 1), key=lambda f: (len(f), f)):
        out.append("simplex " + " ".join(str(v) for v in f))
    if c.cells is not None:
        out.append("cells")
        for a, b in sort_ids(c.cells.covers):
            out.append(f"cover {a} {b}")
    return "\n".join(out) + "\n"


def canonical_text(text: str) -> str:
    return to_text(parse(text))


# -- renderers ----------------------------------------------------------------


def render_dot(obj: TrussTower | Poset, name: str = "T") -> str:
    """Graphviz digraph of the covering arrows of a poset or a tower's top level."""
    if isinstance(obj, TrussTower):
        order = canonical_orders(obj)[-1]
        p = obj.top
        dims = {x: obj.dim(obj.depth, x) for x in order} if obj.depth else {x: 0 for x in order}
    else:
        p = obj
        order = list(p.elements)
        dims = None
    index = {x: k for k, x in enumerate(order)}
    out = [f"digraph {name} {{"]
    for x in order:
        shape = "" if dims is None else (' shape="point"' if dims[x] == 0 else ' shape="box"')
        out.append(f'  n{index[x]} [label="{x}"{shape}];')
    for a, b in sorted(p.covers, key=lambda c: (index[c[0]], index[c[1]])):
        out.append(f"  n{index[a]} -> n{index[b]};")
    out.append("}")
    return "\n".join(out) + "\n"


def geometry(t: TrussTower) -> tuple[dict, list[tuple]]:
    """Coordinates ``(base coordinate, fiber position)`` and the maximal chains as simplices."""
    if not t.is_closed:
        raise FormatError("geometry is only defined for closed towers")
    if t.depth > 3:
        raise FormatError(f"geometry needs depth at most 3, got {t.depth}")
    coords: dict = {x: () for x in t.base.elements}
    for lvl in t.levels:
        coords = {x: coords[lvl.projection[x]] + (lvl.position[x],) for x in lvl.total.elements}
    return coords, sorted(maximal_chains(t.top), key=sort_ids)


def render_geometry(t: TrussTower) -> str:
    coords, simplices = geometry(t)
    order = canonical_orders(t)[-1]
    index = {x: k for k, x in enumerate(order)}
    out = []
    for x in order:
        out.append(f"vertex {index[x]} " + " ".join(str(c) for c in coords[x]))
    for s in sorted(tuple(sorted(index[x] for x in c)) for c in simplices):
        out.append("simplex " + " ".join(map(str, s)))
    return "\n".join(out) + "\n"


def tower_complex(t: TrussTower) -> FramedComplex:
    """The framed complex of a closed tower with vertices renamed to canonical indices."""
    _, c = complex_translate(t)
    index = {x: k for k, x in enumerate(canonical_orders(t)[-1])}
    return FramedComplex(
        c.n,
        sorted(index.values()),
        {frozenset(index[v] for v in s) for s in c.simplices},
        {frozenset(index[v] for v in e): (index[d[0]], index[d[1]]) for e, d in c.direction.items()},
        {frozenset(index[v] for v in e): lab for e, lab in c.labels.items()},
        c.cells.relabel(index) if c.cells is not None else None,
    )


def labels_of(doc: Document) -> Mapping | None:
    return doc.payload.labels if isinstance(doc.payload, TrussTower) else None
