"""Framed simplicial complexes, proframed towers, and translation to and from trusses.

A frame on the standard simplex ``[m]`` is an injective labeling of its
spine vectors ``k -> k+1`` by integers ``1..n``; every other vector
``a -> b`` inherits the least label among the spine vectors it passes
through.  Integrating a frame collapses spine vectors one label at a time,
from ``n`` down to ``1``.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from itertools import combinations

from . import bordism as bd
from .bordism import BordismError
from .bundle1 import Bundle1, BundleError, lift
from .poset import Poset, euler_characteristic, id_key, nerve, sort_ids
from .scaffold import Section, brute_force_sections, brute_force_spacers, is_linear, path_order, restrict_to_chain
from .trussn import POINT, TrussTower, truncate
from .truss1 import Truss1


class FramingError(ValueError):
    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


# -- frames on standard simplices ---------------------------------------------


def akin(m: int, v: tuple[int, int], w: tuple[int, int]) -> bool:
    """Do the vectors ``v`` and ``w`` of ``[m]`` share a unit step?"""
    for a, b in (v, w):
        if not 0 <= a < b <= m:
            raise FramingError(f"{(a, b)} is not a nondegenerate vector of [{m}]")
    return max(v[0], w[0]) < min(v[1], w[1])


def edge_label(spine: Sequence[int], a: int, b: int) -> int:
    """Label of the vector ``a -> b`` given spine labels of ``[m]``."""
    m = len(spine)
    return min(spine[k] for k in range(m) if akin(m, (k, k + 1), (a, b)))


def restrict_frame(spine: Sequence[int], face: Sequence[int]) -> tuple[int, ...]:
    """Spine labels of the face ``face`` (increasing vertices of ``[m]``)."""
    face = list(face)
    if face != sorted(set(face)) or (face and not 0 <= face[0] <= face[-1] <= len(spine)):
        raise FramingError(f"{face} is not a face of [{len(spine)}]")
    return tuple(edge_label(spine, a, b) for a, b in zip(face, face[1:]))


@dataclass(frozen=True)
class Proframe:
    """Collapses of ``[m]`` through ``n`` levels down to a point; ``maps[i]`` sends level ``i`` vertices to level ``i - 1``."""

    n: int
    sizes: tuple[int, ...]
    maps: tuple[tuple[int, ...], ...]


def integrate_simplex_frame(spine: Sequence[int], n: int | None = None) -> Proframe:
    """Collapse the spine vector labeled ``i`` at level ``i``, for ``i = n..1``."""
    spine = tuple(spine)
    if len(set(spine)) != len(spine):
        raise FramingError(f"spine labels {spine} are not distinct")
    n = max(spine, default=0) if n is None else n
    if any(not 1 <= s <= n for s in spine):
        raise FramingError(f"spine labels {spine} are outside 1..{n}")
    m = len(spine)
    # at level i, vertex v of [m] sits at (# spine steps below v with label <= i)
    sizes = [0] * (n + 1)
    maps: list[tuple[int, ...]] = [()] * (n + 1)

    def block(i: int, v: int) -> int:
        return sum(1 for k in range(v) if spine[k] <= i)

    for i in range(n + 1):
        sizes[i] = block(i, m) + 1
    for i in range(1, n + 1):
        reps = {}
        for v in range(m + 1):
            reps.setdefault(block(i, v), block(i - 1, v))
        maps[i] = tuple(reps[k] for k in range(sizes[i]))
    return Proframe(n, tuple(sizes), tuple(maps))


def gradient_simplex_proframe(p: Proframe) -> tuple[int, ...]:
    """Label each spine vector of the top simplex by the level that collapses it."""
    for i in range(1, p.n + 1):
        mp = p.maps[i]
        if len(mp) != p.sizes[i] or any(b < a for a, b in zip(mp, mp[1:])):
            raise FramingError(f"level {i} map is not a monotone map of simplices")
        if set(mp) != set(range(p.sizes[i - 1])) or p.sizes[i] - p.sizes[i - 1] > 1:
            raise FramingError(f"level {i} is not a codimension ≤ 1 collapse")
    if p.sizes[0] != 1:
        raise FramingError("bottom of a proframe must be a point")
    m = p.sizes[p.n] - 1
    labels = []
    for k in range(m):
        a, b = k, k + 1
        for i in range(p.n, 0, -1):
            a, b = p.maps[i][a], p.maps[i][b]
            if a == b:
                labels.append(i)
                break
    return tuple(labels)


# -- framed complexes ---------------------------------------------------------


def edge(u, v) -> frozenset:
    return frozenset((u, v))


@dataclass
class FramedComplex:
    """Simplicial complex with a direction and frame label on each 1-simplex.

    ``cells`` optionally records a cellular poset on the vertices whose
    nerve is the complex.
    """

    n: int
    vertices: list
    simplices: set[frozenset]
    direction: dict[frozenset, tuple]
    labels: dict[frozenset, int]
    cells: Poset | None = None

    def edges(self) -> list[frozenset]:
        return [s for s in self.simplices if len(s) == 2]

    def facets(self) -> list[frozenset]:
        return [s for s in self.simplices if not any(s < t for t in self.simplices)]

    def ordered(self, simplex: frozenset) -> list:
        """Vertices of ``simplex`` in the order given by its edge directions."""
        verts = list(simplex)
        outdeg = {v: 0 for v in verts}
        for u, v in combinations(verts, 2):
            a, _ = self.direction[edge(u, v)]
            outdeg[a] += 1
        order = sorted(verts, key=lambda v: -outdeg[v])
        for i, u in enumerate(order):
            for v in order[i + 1 :]:
                if self.direction[edge(u, v)] != (u, v):
                    raise FramingError(f"edge directions on {sort_ids(simplex)} are cyclic", tuple(sort_ids(simplex)))
        return order

    def spine(self, simplex: frozenset) -> tuple[int, ...]:
        order = self.ordered(simplex)
        return tuple(self.labels[edge(u, v)] for u, v in zip(order, order[1:]))


def complex_from_simplices(n: int, facets: Iterable[Iterable], direction: Mapping, labels: Mapping, cells: Poset | None = None) -> FramedComplex:
    simplices: set[frozenset] = set()
    for f in facets:
        f = frozenset(f)
        for k in range(1, len(f) + 1):
            simplices.update(frozenset(c) for c in combinations(sort_ids(f), k))
    vertices = sort_ids({v for s in simplices for v in s})
    d = {edge(*e): tuple(e) for e in (direction.values() if isinstance(direction, dict) else direction)}
    lab = {edge(*k) if not isinstance(k, frozenset) else k: v for k, v in labels.items()}
    return FramedComplex(n, vertices, simplices, d, lab, cells)


@dataclass(frozen=True)
class FramingReport:
    valid: bool
    problem: str | None = None
    witness: tuple = ()


def validate_framing(c: FramedComplex) -> FramingReport:
    for s in c.simplices:
        if len(s) > 1 and any(s - {v} not in c.simplices for v in s):
            return FramingReport(False, "simplices are not closed under faces", tuple(sort_ids(s)))
    for e in c.edges():
        if e not in c.direction or e not in c.labels:
            return FramingReport(False, "edge without direction or label", tuple(sort_ids(e)))
        if set(c.direction[e]) != set(e):
            return FramingReport(False, "edge direction names foreign vertices", tuple(sort_ids(e)))
        if not 1 <= c.labels[e] <= c.n:
            return FramingReport(False, f"edge label outside 1..{c.n}", tuple(sort_ids(e)))
    for s in sorted(c.simplices, key=lambda s: (len(s), sort_ids(s))):
        if len(s) < 2:
            continue
        try:
            order = c.ordered(s)
        except FramingError as err:
            return FramingReport(False, str(err), err.witness)
        spine = tuple(c.labels[edge(u, v)] for u, v in zip(order, order[1:]))
        if len(set(spine)) != len(spine):
            return FramingReport(False, f"spine labels {spine} repeat", tuple(order))
        for a, b in combinations(range(len(order)), 2):
            want = edge_label(spine, a, b)
            got = c.labels[edge(order[a], order[b])]
            if want != got:
                return FramingReport(False, f"edge labeled {got}, frame restriction gives {want}", (order[a], order[b]))
    return FramingReport(True)


# -- proframed towers and integration -----------------------------------------


@dataclass
class ProframedTower:
    """Levels ``0..n`` of vertex sets with maps ``maps[i]: level i -> level i-1``.

    ``before[i]`` holds the directed edges ``(u, v)`` of level ``i``;
    ``posets[i]`` is the optional cellular poset at level ``i``.
    """

    vertices: list[list]
    maps: list[dict]
    simplices: list[set[frozenset]]
    before: list[set[tuple]]
    posets: list[Poset] | None = None

    @property
    def depth(self) -> int:
        return len(self.vertices) - 1


def _quotient_level(c_vertices, c_simplices, c_dir, c_labels, label):
    parent = {v: v for v in c_vertices}

    def find(v):
        while parent[v] != v:
            v = parent[v]
        return v

    for e, lab in c_labels.items():
        if lab == label:
            u, v = tuple(e)
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv, key=id_key)] = min(ru, rv, key=id_key)
    classes: dict = {}
    for v in c_vertices:
        classes.setdefault(find(v), []).append(v)
    name = {}
    for root, members in classes.items():
        rep = min(members, key=id_key)
        for v in members:
            name[v] = rep
    new_vertices = sort_ids(set(name.values()))
    new_dir: dict = {}
    new_labels: dict = {}
    for e, lab in c_labels.items():
        u, v = c_dir[e]
        nu, nv = name[u], name[v]
        if nu == nv:
            if lab != label:
                raise FramingError(f"edge {u}->{v} labeled {lab} degenerates at level {label}", (u, v))
            continue
        ne = edge(nu, nv)
        if ne in new_dir and (new_dir[ne] != (nu, nv) or new_labels[ne] != lab):
            raise FramingError(f"image edge {sort_ids(ne)} gets inconsistent direction or label", tuple(sort_ids(ne)))
        new_dir[ne] = (nu, nv)
        new_labels[ne] = lab
    new_simplices = set()
    for s in c_simplices:
        img = frozenset(name[v] for v in s)
        if len(s) - len(img) > 1:
            raise FramingError(f"simplex {sort_ids(s)} collapses by more than one dimension at level {label}", tuple(sort_ids(s)))
        new_simplices.add(img)
    return new_vertices, new_simplices, new_dir, new_labels, name


def _fiber_report(simplices_hi, simplices_lo, name, before_hi, z: frozenset):
    """Sections and spacer arrows of the fiber over the simplex ``z``."""
    sections = [s for s in simplices_hi if len(s) == len(z) and frozenset(name[v] for v in s) == z]
    arrows = []
    for s in simplices_hi:
        if len(s) != len(z) + 1 or frozenset(name[v] for v in s) != z:
            continue
        pair = [v for v in s if sum(1 for w in s if name[w] == name[v]) == 2]
        u, v = pair
        if (v, u) in before_hi:
            u, v = v, u
        arrows.append((s - {v}, s - {u}))
    return sections, arrows


def integrate_flat(c: FramedComplex) -> ProframedTower:
    """Quotient along ``n``-labeled edges, then ``n-1``, ...; check each step and flatness.

    Raises :class:`FramingError` with a witness at the first failure.
    """
    report = validate_framing(c)
    if not report.valid:
        raise FramingError(f"invalid framing: {report.problem}", report.witness)
    vertices = [None] * (c.n + 1)
    simplices = [None] * (c.n + 1)
    before = [None] * (c.n + 1)
    maps: list[dict] = [{} for _ in range(c.n + 1)]
    cur = (list(c.vertices), set(c.simplices), dict(c.direction), dict(c.labels))
    vertices[c.n], simplices[c.n] = cur[0], cur[1]
    before[c.n] = set(cur[2].values())
    for i in range(c.n, 0, -1):
        v, s, d, lab, name = _quotient_level(*cur, i)
        maps[i] = name
        cur = (v, s, d, lab)
        vertices[i - 1], simplices[i - 1], before[i - 1] = v, s, set(d.values())
        for z in sorted(s, key=lambda z: (len(z), sort_ids(z))):
            sec, arr = _fiber_report(simplices[i], s, name, before[i], z)
            if not _is_path(sec, arr):
                raise FramingError(f"fiber over {sort_ids(z)} at level {i} is not linear", tuple(sort_ids(z)))
    if len(vertices[0]) != 1:
        raise FramingError("the iterated quotient does not end in a point", tuple(vertices[0]))
    tower = ProframedTower(vertices, maps, simplices, before)
    _check_transitions(tower)
    return tower


def _is_path(objects: list, arrows: list) -> bool:
    return is_linear(objects, arrows)


def _path(objects: list, arrows: list) -> list:
    return path_order(objects, arrows)


def _check_transitions(t: ProframedTower) -> None:
    """Restricting a fiber to a face of its base simplex keeps first and last sections."""
    for i in range(t.depth, 0, -1):
        name = t.maps[i]
        for z in t.simplices[i - 1]:
            if len(z) < 2:
                continue
            sec, arr = _fiber_report(t.simplices[i], t.simplices[i - 1], name, t.before[i], z)
            order = _path(sec, arr)
            for drop in z:
                face = z - {drop}
                fsec, farr = _fiber_report(t.simplices[i], t.simplices[i - 1], name, t.before[i], face)
                forder = _path(fsec, farr)
                restrict = lambda s: frozenset(v for v in s if name[v] != drop)
                if restrict(order[0]) != forder[0] or restrict(order[-1]) != forder[-1]:
                    raise FramingError(
                        f"fiber transition from {sort_ids(z)} to {sort_ids(face)} at level {i} moves an endpoint",
                        tuple(sort_ids(z)),
                    )


def is_flat(c: FramedComplex) -> tuple[bool, str | None]:
    try:
        integrate_flat(c)
    except FramingError as err:
        return False, str(err)
    return True, None


# -- translations -------------------------------------------------------------


def lex_before(x: tuple, y: tuple) -> bool:
    """Direction of the edge between comparable tuples: by the first differing entry."""
    for a, b in zip(x, y):
        if a != b:
            return a < b
    return len(x) < len(y)


def first_difference(x: tuple, y: tuple) -> int:
    return next(k for k, (a, b) in enumerate(zip(x, y)) if a != b)


def complex_translate(t: TrussTower) -> tuple[ProframedTower, FramedComplex]:
    """Proframed tower of nerves of the levels, and the framed complex of the top level."""
    if not t.is_closed:
        raise FramingError("complex translation needs a closed tower")
    if t.base != POINT:
        raise FramingError("complex translation needs a tower over the point")
    vertices, maps, simplices, before, posets = [], [], [], [], []
    for i in range(t.depth + 1):
        p = t.poset(i)
        posets.append(p)
        vertices.append(list(p.elements))
        simplices.append({frozenset(ch) for dim in nerve(p) for ch in dim})
        before.append({(x, y) if lex_before(x, y) else (y, x) for x in p.elements for y in p.up(x) if x != y})
        maps.append({} if i == 0 else dict(t.projection(i)))
    tower = ProframedTower(vertices, maps, simplices, before, posets)
    top = t.top
    direction, labels = {}, {}
    for x in top.elements:
        for y in top.up(x):
            if x == y:
                continue
            u, v = (x, y) if lex_before(x, y) else (y, x)
            direction[edge(x, y)] = (u, v)
            labels[edge(x, y)] = first_difference(x, y) + 1
    fc = FramedComplex(t.depth, list(top.elements), set(simplices[-1]), direction, labels, top)
    return tower, fc


def image_order(p: Poset, projection: Mapping) -> Poset:
    """The order generated on the image of ``projection`` by images of arrows."""
    elements = set(projection.values())
    arrows = {(projection[a], projection[b]) for a, b in p.covers if projection[a] != projection[b]}
    return Poset.from_relation(elements, arrows)


def with_derived_posets(t: ProframedTower, top: Poset) -> ProframedTower:
    posets = [None] * (t.depth + 1)
    posets[t.depth] = top
    for i in range(t.depth, 0, -1):
        posets[i - 1] = image_order(posets[i], t.maps[i])
    return ProframedTower(t.vertices, t.maps, t.simplices, t.before, posets)


def truss_translate(t: ProframedTower) -> tuple[TrussTower, list[dict]]:
    """Closed tower read off a proframed tower with cellular posets.

    Returns the tower and, per level, the renaming into canonical ids.
    """
    if t.posets is None:
        raise FramingError("truss translation needs cellular posets at every level")
    if len(t.posets[0]) != 1:
        raise FramingError("level 0 must be a point")
    ren = [{t.posets[0].elements[0]: ()}]
    levels = []
    below = POINT
    for i in range(1, t.depth + 1):
        p, proj, dirs = t.posets[i], t.maps[i], t.before[i]
        fibers_of: dict = {}
        for x in p.elements:
            fibers_of.setdefault(proj[x], []).append(x)
        fibers, order = {}, {}
        for y, members in fibers_of.items():
            sing = [x for x in members if not any(z != x and proj[z] == y for z in p.up(x))]
            inside = set(members)
            arrows = [(a, b) for a, b in dirs if a in inside and b in inside]
            if not _is_path(members, arrows):
                raise FramingError(f"level {i}: fiber over {y!r} is not linearly ordered", (i, y))
            seq = _path(members, arrows)
            word = "".join("S" if x in sing else "R" for x in seq)
            try:
                fibers[ren[-1][y]] = Truss1(word)
            except ValueError as err:
                raise FramingError(f"level {i}: fiber over {y!r} reads {word}: {err}", (i, y)) from None
            order[y] = seq
        if set(fibers_of) != set(ren[-1]):
            raise FramingError(f"level {i}: projection is not onto level {i - 1}", (i,))
        inv = {v: k for k, v in ren[-1].items()}
        bordisms = {}
        for ny, ny2 in below.covers:
            y, y2 = inv[ny], inv[ny2]
            pairs = {(a, b) for a, x in enumerate(order[y]) for b, x2 in enumerate(order[y2]) if p.leq(x, x2)}
            try:
                bordisms[(ny, ny2)] = bd.validate(fibers[ny], fibers[ny2], pairs)
            except BordismError as err:
                raise FramingError(f"level {i}: over {y!r}->{y2!r}: {err}", (i, y, y2)) from None
        try:
            lvl = Bundle1(below, fibers, bordisms)
        except BundleError as err:
            raise FramingError(f"level {i}: {err}", (i,)) from None
        mapping = {x: lift(ren[-1][y], a) for y, seq in order.items() for a, x in enumerate(seq)}
        if lvl.total != p.relabel(mapping):
            raise FramingError(f"level {i}: cellular poset is not the total poset of the read-off bundle", (i,))
        levels.append(lvl)
        ren.append(mapping)
        below = lvl.total
    return TrussTower(POINT, levels), ren


def relabel_proframed(t: ProframedTower, names: Sequence[Mapping]) -> ProframedTower:
    """Rename vertices levelwise by ``names[i]``."""
    posets = None if t.posets is None else [p.relabel(names[i]) for i, p in enumerate(t.posets)]
    return ProframedTower(
        [[names[i][v] for v in vs] for i, vs in enumerate(t.vertices)],
        [{} if i == 0 else {names[i][x]: names[i - 1][y] for x, y in m.items()} for i, m in enumerate(t.maps)],
        [{frozenset(names[i][v] for v in s) for s in ss} for i, ss in enumerate(t.simplices)],
        [{(names[i][u], names[i][v]) for u, v in bs} for i, bs in enumerate(t.before)],
        posets,
    )


def same_proframed(a: ProframedTower, b: ProframedTower) -> bool:
    return (
        a.depth == b.depth
        and all(set(x) == set(y) for x, y in zip(a.vertices, b.vertices))
        and a.maps[1:] == b.maps[1:]
        and a.simplices == b.simplices
        and a.before == b.before
        and (a.posets == b.posets)
    )


# -- boundary shelling --------------------------------------------------------


def boundary(t: TrussTower) -> Poset:
    x = t.initial
    if x is None:
        raise FramingError("tower has no initial element")
    return t.top.subposet(set(t.top.elements) - {x})


def maximal_chains(p: Poset) -> set[tuple]:
    out = set()

    def extend(chain):
        nxt = p.successors(chain[-1])
        if not nxt:
            out.add(tuple(chain))
            return
        for y in nxt:
            extend(chain + [y])

    for x in p.minimal():
        extend([x])
    if not p.elements:
        out.add(())
    return out


def _shell(t: TrussTower) -> list[tuple]:
    """Boundary facets of a block: bottom sections, spacers, then top sections over the lower shelling."""
    if t.depth == 0:
        return [()]
    n = t.depth
    bot = t.initial
    lower = truncate(t, n - 1, "lower")
    lower_shell = _shell(lower)
    lvl = t.levels[n - 1]
    bot_below = lvl.projection[bot]
    if t.dim(n, bot) == 0:
        lift_one = {}
        for x in lvl.total.elements:
            lift_one[lvl.projection[x]] = x
        return [tuple(lift_one[y] for y in chain) for chain in lower_shell]
    facets = []
    with_bot = [(bot_below,) + chain for chain in lower_shell]
    for chain in with_bot:
        c = restrict_to_chain(lvl, list(chain))
        facets.append(_section_chain(chain, brute_force_sections(c)[0]))
    for chain in lower_shell:
        if not chain:
            continue
        c = restrict_to_chain(lvl, list(chain))
        for sp in brute_force_spacers(c):
            facets.append(_spacer_chain(chain, sp))
    for chain in with_bot:
        c = restrict_to_chain(lvl, list(chain))
        facets.append(_section_chain(chain, brute_force_sections(c)[-1]))
    return facets


def _section_chain(chain, s: Section) -> tuple:
    return tuple(lift(y, a) for y, a in zip(chain, s.vertices))


def _spacer_chain(chain, sp) -> tuple:
    j = sp.index
    bases = list(chain[: j + 1]) + list(chain[j:])
    return tuple(lift(y, a) for y, a in zip(bases, sp.vertices))


def is_shelling(facets: Sequence[tuple]) -> bool:
    sets = [frozenset(f) for f in facets]
    for k in range(1, len(sets)):
        f = sets[k]
        inter = {f & g for g in sets[:k]}
        maximal = [s for s in inter if not any(s < u for u in inter)]
        if any(len(s) != len(f) - 1 for s in maximal):
            return False
    return True


def is_thin(p: Poset, augment: bool = True) -> bool:
    """Every length-2 interval has exactly two middle elements.

    With ``augment`` an extra element above everything is added first, so
    elements one step below a maximal element must cover exactly two of them.
    """
    top = object()
    succ = {x: set(p.successors(x)) for x in p.elements}
    if augment:
        for x in p.maximal():
            succ[x].add(top)
        succ[top] = set()
    for x in succ:
        two = {}
        for y in succ[x]:
            for z in succ[y]:
                two.setdefault(z, set()).add(y)
        if any(len(mid) != 2 for mid in two.values()):
            return False
    return True


@dataclass
class ShellingReport:
    facets: list[tuple]
    shelling: bool
    pure: bool
    thin: bool
    complete: bool
    euler: int
    block_dim: int

    @property
    def ok(self) -> bool:
        return self.shelling and self.pure and self.thin and self.complete and self.euler == 1 + (-1) ** (self.block_dim - 1)


def shell_boundary(t: TrussTower) -> ShellingReport:
    """Order the maximal chains of the boundary of a block and check the shelling conditions."""
    if not t.is_block:
        raise FramingError("shelling needs a closed tower with an initial element")
    facets = _shell(t)
    bd_poset = boundary(t)
    chains = maximal_chains(bd_poset)
    pure = len({len(f) for f in facets}) <= 1
    sets = [frozenset(f) for f in facets]
    complete = len(sets) == len(set(sets)) and set(sets) == {frozenset(c) for c in chains}
    report = ShellingReport(
        facets,
        is_shelling(facets),
        pure,
        is_thin(t.top),
        complete,
        euler_characteristic(bd_poset),
        t.block_dimension(),
    )
    if not report.ok:
        raise FramingError(f"boundary shelling check failed: {report}", tuple(facets[:3]))
    return report


def tower_from_complex(c: FramedComplex) -> TrussTower:
    """Integrate a flat framed complex carrying a cellular poset and read off its truss."""
    if c.cells is None:
        raise FramingError("the complex carries no cellular poset")
    chains = {frozenset(ch) for dim in nerve(c.cells) for ch in dim}
    if chains != c.simplices:
        extra = sort_ids(next(iter(chains ^ c.simplices)))
        raise FramingError("the complex is not the nerve of its cellular poset", tuple(extra))
    tower = with_derived_posets(integrate_flat(c), c.cells)
    t, _ = truss_translate(tower)
    return t
