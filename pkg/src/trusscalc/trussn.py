"""n-trusses and n-truss bundles as towers of 1-truss bundles.

Level ``i`` of a tower is a :class:`Bundle1` whose base is the total poset of
level ``i - 1``; level 0 is the tower base (the point ``()`` for an n-truss).
Element ids are tuples that grow by one fiber position per level, so over
the point base an element of level ``i`` is an ``i``-tuple of frame positions
and its projection to level ``k`` is the prefix of length ``k``.
"""

from __future__ import annotations

from collections.abc import Callable, Iterator, Mapping, Sequence
from functools import cached_property

from . import bordism as bd
from . import bundle1 as b1
from .bordism import Bordism1, BordismError
from .bundle1 import Bundle1, BundleError, lift
from .poset import Poset, PosetMap, all_monotone_maps, id_key, sort_ids
from .truss1 import Truss1, Truss1Map, all_maps as truss1_maps, classify_map

POINT = Poset.point(())


class TowerError(ValueError):
    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


class TrussTower:
    """A validated tower of 1-truss bundles, optionally labeled on its top level."""

    __slots__ = ("base", "levels", "labels", "__dict__")

    def __init__(self, base: Poset, levels: Sequence[Bundle1], labels: Mapping | None = None):
        self.base = base
        self.levels = tuple(levels)
        below = base
        for i, lvl in enumerate(self.levels, 1):
            if lvl.base != below:
                raise TowerError(f"level {i} is not based on the total poset of level {i - 1}", (i,))
            below = lvl.total
        self.labels = None
        if labels is not None:
            top = self.poset(self.depth)
            labels = dict(labels)
            if set(labels) != set(top.elements):
                missing = sort_ids(set(top.elements) - set(labels))
                raise TowerError(f"labeling is not total on the top level; missing {missing[:3]}")
            self.labels = labels

    @property
    def depth(self) -> int:
        return len(self.levels)

    def poset(self, i: int) -> Poset:
        if not 0 <= i <= self.depth:
            raise TowerError(f"level {i} is outside 0..{self.depth}")
        return self.base if i == 0 else self.levels[i - 1].total

    @property
    def top(self) -> Poset:
        return self.poset(self.depth)

    def projection(self, i: int) -> Mapping:
        """Projection from level ``i`` to level ``i - 1``."""
        return self.levels[i - 1].projection

    def project(self, x, i: int, k: int):
        """Image of ``x`` at level ``i`` in level ``k`` for ``k <= i``."""
        for j in range(i, k, -1):
            x = self.levels[j - 1].projection[x]
        return x

    def fiber(self, i: int, y) -> Truss1:
        return self.levels[i - 1].fibers[y]

    def dim(self, i: int, x) -> int:
        return self.levels[i - 1].dim[x]

    def position(self, i: int, x) -> int:
        return self.levels[i - 1].position[x]

    @property
    def is_closed(self) -> bool:
        return all(lvl.is_closed for lvl in self.levels)

    @property
    def is_open(self) -> bool:
        return all(lvl.is_open for lvl in self.levels)

    @property
    def kind(self) -> str:
        if self.is_closed:
            return "closed"
        if self.is_open:
            return "open"
        return "mixed"

    def size(self) -> int:
        return len(self.top)

    def sizes(self) -> list[int]:
        return [len(self.poset(i)) for i in range(self.depth + 1)]

    def unlabeled(self) -> "TrussTower":
        return TrussTower(self.base, self.levels) if self.labels is not None else self

    def with_labels(self, labels: Mapping | None) -> "TrussTower":
        return TrussTower(self.base, self.levels, labels)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TrussTower)
            and self.base == other.base
            and self.levels == other.levels
            and self.labels == other.labels
        )

    def __hash__(self) -> int:
        return hash((self.base, self.levels))

    def __repr__(self) -> str:
        return f"TrussTower(depth={self.depth}, sizes={self.sizes()}, kind={self.kind})"

    @cached_property
    def initial(self):
        return self.top.initial()

    @property
    def is_block(self) -> bool:
        return self.is_closed and self.initial is not None

    def block_dimension(self) -> int:
        x = self.initial
        if x is None:
            raise TowerError("tower has no initial element")
        return element_depth(self, x)


def element_depth(t: TrussTower, x) -> int:
    """Number of levels at which the projection of ``x`` is regular."""
    count, cur = 0, x
    for i in range(t.depth, 0, -1):
        count += t.dim(i, cur)
        cur = t.projection(i)[cur]
    return count


def validate_tower(levels: Sequence[Bundle1], base: Poset = POINT, labels: Mapping | None = None) -> TrussTower:
    return TrussTower(base, levels, labels)


def _as_bordism(dom: Truss1, cod: Truss1, entry) -> Bordism1:
    if isinstance(entry, Bordism1):
        return entry
    kind, data = entry
    if kind == "sing":
        return bd.from_singular_function(dom, cod, data)
    if kind == "reg":
        return bd.from_regular_function(dom, cod, data)
    if kind == "pairs":
        return bd.validate(dom, cod, set(map(tuple, data)))
    raise TowerError(f"unknown bordism form {kind!r}")


def build_tower(level_specs: Sequence[tuple[Mapping, Mapping]], base: Poset = POINT, labels: Mapping | None = None) -> TrussTower:
    """Assemble a tower level by level.

    Each level entry is ``(fibers, bordisms)``: fibers map previous-level element ids
    to dim words or trusses; bordisms map covering arrows to a
    :class:`Bordism1` or to ``("sing"|"reg"|"pairs", data)``.
    """
    levels = []
    below = base
    for fibers, bordisms in level_specs:
        fib = {y: f if isinstance(f, Truss1) else Truss1(f) for y, f in fibers.items()}
        bords = {}
        for (y, y2), entry in bordisms.items():
            if y not in fib or y2 not in fib:
                raise TowerError(f"bordism over {y!r}->{y2!r} refers to an element without a fiber", (y, y2))
            bords[(y, y2)] = _as_bordism(fib[y], fib[y2], entry)
        lvl = Bundle1(below, fib, bords)
        levels.append(lvl)
        below = lvl.total
    return TrussTower(base, levels, labels)


def single(word: str | Truss1) -> TrussTower:
    """The 1-truss ``word`` as a depth-1 tower."""
    t = word if isinstance(word, Truss1) else Truss1(word)
    return TrussTower(POINT, [b1.over_point(t, ())])


def point_tower(depth: int = 0) -> TrussTower:
    """The depth-``depth`` tower with one singular element per level."""
    return build_tower([({(0,) * i: "S"}, {}) for i in range(depth)])


def bigon() -> TrussTower:
    """Closed 2-block: "SRS" below, fibers S, SRS, S collapsing to one point at the ends."""
    return build_tower(
        [
            ({(): "SRS"}, {}),
            (
                {(0,): "S", (1,): "SRS", (2,): "S"},
                {((1,), (0,)): ("sing", {0: 0, 2: 0}), ((1,), (2,)): ("sing", {0: 0, 2: 0})},
            ),
        ]
    )


def truncate(t: TrussTower, k: int, mode: str = "lower") -> TrussTower:
    if not 0 <= k <= t.depth:
        raise TowerError(f"truncation index {k} is outside 0..{t.depth}")
    if mode == "lower":
        return TrussTower(t.base, t.levels[:k])
    if mode == "upper":
        return TrussTower(t.poset(k), t.levels[k:], t.labels)
    raise TowerError(f"unknown truncation mode {mode!r}")


def generating_arrows(t: TrussTower, i: int) -> set[tuple]:
    if i == 0:
        return set(t.base.covers)
    arrows = t.levels[i - 1].generating_arrows()
    if arrows != set(t.poset(i).covers):
        raise TowerError(f"generating arrows at level {i} differ from the covering relation")
    return arrows


def dualize(t: TrussTower) -> TrussTower:
    base = t.base.opposite()
    levels = []
    below = base
    for lvl in t.levels:
        d = b1.dualize(lvl)
        if d.base != below:
            d = Bundle1(below, d.fibers, d.bordisms)
        levels.append(d)
        below = d.total
    return TrussTower(base, levels, t.labels)


def suspend(t: TrussTower, bottom=("bot",), top=("top",)) -> TrussTower:
    """Levelwise suspension; the new points at level ``i`` extend those of level ``i - 1`` by position 0."""
    if t.labels is not None:
        raise TowerError("suspension of labeled towers is not defined")
    levels = []
    lo, hi = bottom, top
    for lvl in t.levels:
        s = b1.suspend(lvl, lo, hi)
        levels.append(s)
        lo, hi = lift(lo, 0), lift(hi, 0)
    base = b1.suspend_base(t.base, bottom, top) if t.levels else t.base
    return TrussTower(base, levels)


def tower_pullback(t: TrussTower, g: PosetMap) -> TrussTower:
    """Pull every level back along the maps induced by ``g`` on total posets."""
    if g.target != t.base:
        raise TowerError("pullback map does not target the tower base")
    levels = []
    current = g
    for lvl in t.levels:
        pb = b1.pullback(lvl, current)
        levels.append(pb)
        assign = {e: lift(current(pb.projection[e]), pb.position[e]) for e in pb.total.elements}
        current = PosetMap(pb.total, lvl.total, assign, check=False)
    return TrussTower(g.source, levels, None)


class TowerMap:
    """Levelwise maps from source level ``i`` to target level ``i``, commuting with projections."""

    __slots__ = ("source", "target", "maps", "__dict__")

    def __init__(self, source: TrussTower, target: TrussTower, maps: Sequence[Mapping], check: bool = True):
        self.source = source
        self.target = target
        self.maps = tuple(dict(m) for m in maps)
        if check:
            problem = tower_map_violation(source, target, self.maps)
            if problem:
                raise TowerError(problem)

    def __call__(self, x, level: int | None = None):
        return self.maps[self.source.depth if level is None else level][x]

    def __eq__(self, other) -> bool:
        return isinstance(other, TowerMap) and self.source == other.source and self.target == other.target and self.maps == other.maps

    def __hash__(self) -> int:
        return hash(tuple(tuple(sorted(m.items(), key=lambda kv: id_key(kv[0]))) for m in self.maps))

    def __repr__(self) -> str:
        return f"TowerMap(top={ {k: v for k, v in sorted(self.maps[-1].items(), key=lambda kv: id_key(kv[0]))} })"

    def compose(self, other: "TowerMap") -> "TowerMap":
        """``other ∘ self``."""
        return TowerMap(self.source, other.target, [{x: g[f[x]] for x in f} for f, g in zip(self.maps, other.maps)], check=False)

    @classmethod
    def identity(cls, t: TrussTower) -> "TowerMap":
        return cls(t, t, [{x: x for x in t.poset(i).elements} for i in range(t.depth + 1)], check=False)

    def fiber_map(self, i: int, y) -> Truss1Map:
        s, t = self.source, self.target
        fy = self.maps[i - 1][y]
        src = s.fiber(i, y)
        tgt = t.fiber(i, fy)
        assign = [t.position(i, self.maps[i][lift(y, a)]) for a in range(len(src))]
        return Truss1Map(src, tgt, assign, check=False)

    def fiber_classes(self) -> Iterator[dict[str, bool]]:
        for i in range(1, self.source.depth + 1):
            for y in self.source.poset(i - 1).elements:
                yield classify_map(self.fiber_map(i, y))

    @cached_property
    def classes(self) -> dict[str, bool]:
        fibers = list(self.fiber_classes())
        base = self.maps[0]
        inj_base = len(set(base.values())) == len(base)
        surj_base = set(base.values()) == set(self.target.base.elements)
        every = lambda key: all(c[key] for c in fibers)
        levels_inj = all(len(set(m.values())) == len(m) for m in self.maps)
        levels_surj = all(set(m.values()) == set(self.target.poset(i).elements) for i, m in enumerate(self.maps))
        return {
            "singular": every("singular"),
            "regular": every("regular"),
            "balanced": every("balanced"),
            "injective": levels_inj,
            "surjective": levels_surj,
            "face": inj_base and every("face"),
            "embedding": inj_base and every("embedding"),
            "degeneracy": surj_base and every("degeneracy"),
            "coarsening": surj_base and every("coarsening"),
        }

    def is_identity(self) -> bool:
        return self.source == self.target and all(all(k == v for k, v in m.items()) for m in self.maps)


def tower_map_violation(s: TrussTower, t: TrussTower, maps: Sequence[Mapping]) -> str | None:
    if s.depth != t.depth or len(maps) != s.depth + 1:
        return "tower maps need one assignment per level of equal-depth towers"
    for i, m in enumerate(maps):
        sp, tp = s.poset(i), t.poset(i)
        for x in sp.elements:
            if x not in m:
                return f"level {i}: {x!r} is unassigned"
            if m[x] not in tp:
                return f"level {i}: {x!r} is sent outside the target: {m[x]!r}"
        for a, b in sp.covers:
            if not tp.leq(m[a], m[b]):
                return f"level {i}: not monotone on the arrow {a!r}->{b!r}"
        if i == 0:
            continue
        ps, pt = s.projection(i), t.projection(i)
        below = maps[i - 1]
        for x in sp.elements:
            if pt[m[x]] != below[ps[x]]:
                return f"level {i}: square does not commute at {x!r}"
        for y in s.poset(i - 1).elements:
            pos = [t.position(i, m[lift(y, a)]) for a in range(len(s.fiber(i, y)))]
            if any(p > q for p, q in zip(pos, pos[1:])):
                return f"level {i}: fiber over {y!r} is not sent frame-monotonically"
    return None


def dualize_map(f: TowerMap) -> TowerMap:
    return TowerMap(dualize(f.source), dualize(f.target), f.maps, check=False)


_FIBER_MAP_CACHE: dict = {}


def _fiber_maps(src: Truss1, tgt: Truss1, kind: str) -> list[tuple[int, ...]]:
    key = (src.word, tgt.word, kind)
    hit = _FIBER_MAP_CACHE.get(key)
    if hit is None:
        hit = []
        for f in truss1_maps(src, tgt):
            if kind != "all":
                c = classify_map(f)
                if not c[kind]:
                    continue
            hit.append(f.assignment)
        _FIBER_MAP_CACHE[key] = hit
    return hit


def enumerate_maps(
    s: TrussTower,
    t: TrussTower,
    kind: str = "all",
    *,
    fixed: Sequence[Mapping] | None = None,
    allowed: Callable[[int, object, object], bool] | None = None,
    base_maps: Sequence[Mapping] | None = None,
    limit: int = 200_000,
) -> Iterator[TowerMap]:
    """All tower maps ``s -> t`` whose fiber maps have the flag ``kind``.

    ``fixed[i]`` pins values at level ``i``; ``allowed(i, x, y)`` vetoes
    ``x ↦ y``.  Raises :class:`TowerError` past ``limit`` results.
    """
    if s.depth != t.depth:
        return
    fixed = list(fixed) if fixed is not None else [{} for _ in range(s.depth + 1)]
    ok = allowed or (lambda i, x, y: True)
    if base_maps is None:
        base_maps = [
            m for m in all_monotone_maps(s.base, t.base)
            if all(m[x] == y for x, y in fixed[0].items()) and all(ok(0, x, m[x]) for x in m)
        ]
    count = 0

    def levels(i: int, maps: list[dict]) -> Iterator[list[dict]]:
        if i > s.depth:
            yield maps
            return
        lvl_s, lvl_t = s.levels[i - 1], t.levels[i - 1]
        below = maps[i - 1]
        order = s.poset(i - 1).topological_order()
        pins = fixed[i]
        current: dict = {}

        def rec(k: int) -> Iterator[dict]:
            if k == len(order):
                yield dict(current)
                return
            y = order[k]
            fy = below[y]
            src, tgt = lvl_s.fibers[y], lvl_t.fibers[fy]
            checks = [(w, lvl_s.bordisms[(w, y)], lvl_t.composite(below[w], fy)) for w in s.poset(i - 1).predecessors(y)]
            for assign in _fiber_maps(src, tgt, kind):
                good = True
                for a, v in enumerate(assign):
                    x, tx = lift(y, a), lift(fy, v)
                    if (x in pins and pins[x] != tx) or not ok(i, x, tx):
                        good = False
                        break
                if not good:
                    continue
                for w, rs, rt in checks:
                    fw = current[w]
                    if any(not rt.related(fw[a], assign[b]) for a, b in rs.pairs):
                        good = False
                        break
                if not good:
                    continue
                current[y] = assign
                yield from rec(k + 1)
                del current[y]

        for choice in rec(0):
            level_map = {lift(y, a): lift(below[y], v) for y, assign in choice.items() for a, v in enumerate(assign)}
            yield from levels(i + 1, maps + [level_map])

    for base in base_maps:
        for maps in levels(1, [dict(base)]):
            count += 1
            if count > limit:
                raise TowerError(f"more than {limit} maps; enumeration aborted")
            yield TowerMap(s, t, maps, check=False)


def natural_transformation_exists(e: TowerMap, f: TowerMap) -> bool:
    """Is ``e(x) ⊴ f(x)`` at every level and element?"""
    return all(
        e.target.poset(i).leq(e.maps[i][x], f.maps[i][x]) for i in range(e.source.depth + 1) for x in e.maps[i]
    )


# -- compactification ---------------------------------------------------------


def compactify(t: TrussTower) -> tuple[TrussTower, TowerMap, TowerMap]:
    """Closed tower with a dense inclusion of ``t`` and a retraction onto it."""
    inc = [{x: x for x in t.base.elements}]
    ret = [{x: x for x in t.base.elements}]
    levels: list[Bundle1] = []
    below = t.base
    for i, lvl in enumerate(t.levels, 1):
        pb = b1.pullback(lvl, PosetMap(below, lvl.base, ret[-1], check=False))
        fibers, shift = {}, {}
        for y, f in pb.fibers.items():
            lo, hi = f.is_regular(0), f.is_regular(len(f) - 1)
            fibers[y] = Truss1(("S" if lo else "") + f.word + ("S" if hi else ""))
            shift[y] = int(lo)
        bordisms = {}
        for (y, y2), r in pb.bordisms.items():
            sf = {a + shift[y]: b + shift[y2] for a, b in r.singular_function.items()}
            sf[0] = 0
            sf[len(fibers[y]) - 1] = len(fibers[y2]) - 1
            bordisms[(y, y2)] = bd.from_singular_function(fibers[y], fibers[y2], sf)
        new = Bundle1(below, fibers, bordisms)
        levels.append(new)
        inc.append({x: lift(inc[-1][lvl.projection[x]], lvl.position[x] + shift[inc[-1][lvl.projection[x]]]) for x in lvl.total.elements})
        r_level = {}
        for z in new.total.elements:
            y = new.projection[z]
            old = lvl.fibers[ret[-1][y]]
            a = min(max(new.position[z] - shift[y], 0), len(old) - 1)
            r_level[z] = lift(ret[-1][y], a)
        ret.append(r_level)
        below = new.total
    closed = TrussTower(t.base, levels)
    plain = t.unlabeled()
    return closed, TowerMap(plain, closed, inc), TowerMap(closed, plain, ret)


def is_dense(f: TowerMap) -> bool:
    """Is every level's image upward dense in the target?"""
    for i, m in enumerate(f.maps):
        p = f.target.poset(i)
        image = set(m.values())
        if any(not any(p.leq(y, z) for y in image) for z in p.elements):
            return False
    return True


def mediating_maps(t: TrussTower, other: TrussTower, inc: TowerMap, ret: TowerMap) -> list[TowerMap]:
    """Surjections ``h: other -> compactify(t)`` with ``h∘inc = ci`` and ``cr∘h = ret``."""
    comp, ci, cr = compactify(t)
    fixed = [{} for _ in range(t.depth + 1)]
    for i in range(t.depth + 1):
        for x, y in inc.maps[i].items():
            fixed[i][y] = ci.maps[i][x]
    allowed = lambda i, z, y: cr.maps[i][y] == ret.maps[i][z]
    base = [{z: ci.maps[0][ret.maps[0][z]] for z in other.base.elements}]
    out = []
    for h in enumerate_maps(other, comp, fixed=fixed, allowed=allowed, base_maps=base):
        if h.classes["surjective"]:
            out.append(h)
    return out


def universal_property_check(t: TrussTower, candidate: TrussTower, inc: TowerMap, ret: TowerMap) -> bool:
    """Does exactly one mediating surjection exist for the closed extension ``(candidate, inc, ret)``?"""
    if not candidate.is_closed or not is_dense(inc):
        return False
    if not inc.compose(ret).is_identity():
        return False
    if not ret.classes["surjective"]:
        return False
    return len(mediating_maps(t.unlabeled(), candidate, inc, ret)) == 1


# -- images, factorization, blocks --------------------------------------------


def image_tower(t: TrussTower, keep: Sequence[set]) -> tuple[TrussTower, TowerMap, list[dict]]:
    """Sub-tower of ``t`` on the levelwise subsets ``keep[i]``, renumbered canonically.

    Returns the tower, its inclusion into ``t``, and the renumbering dicts.
    """
    ren = [{}]
    base_keep = set(keep[0])
    sub_base = t.base if base_keep == set(t.base.elements) else t.base.subposet(base_keep)
    ren[0] = {x: x for x in base_keep}
    levels = []
    below = sub_base
    for i in range(1, t.depth + 1):
        lvl = t.levels[i - 1]
        inv_below = {v: k for k, v in ren[i - 1].items()}
        fibers, members, mapping = {}, {}, {}
        for ny in below.elements:
            y = inv_below[ny]
            elems = sorted((e for e in keep[i] if lvl.projection[e] == y), key=lambda e: lvl.position[e])
            if not elems:
                raise TowerError(f"level {i}: empty fiber over {y!r} in the image", (i, y))
            word = "".join("S" if lvl.dim[e] == 0 else "R" for e in elems)
            try:
                fibers[ny] = Truss1(word)
            except ValueError as err:
                raise TowerError(f"level {i}: image fiber over {y!r} is not a 1-truss: {err}", (i, y)) from None
            members[ny] = elems
            for k, e in enumerate(elems):
                mapping[e] = lift(ny, k)
        bordisms = {}
        for ny, ny2 in below.covers:
            y, y2 = inv_below[ny], inv_below[ny2]
            r = lvl.composite(y, y2)
            pairs = {
                (a, b)
                for a, e in enumerate(members[ny])
                for b, e2 in enumerate(members[ny2])
                if r.related(lvl.position[e], lvl.position[e2])
            }
            try:
                bordisms[(ny, ny2)] = bd.validate(fibers[ny], fibers[ny2], pairs)
            except BordismError as err:
                raise TowerError(f"level {i}: image over {y!r}->{y2!r} is not a bordism: {err}", (i, y, y2)) from None
        new = Bundle1(below, fibers, bordisms)
        levels.append(new)
        ren.append(mapping)
        below = new.total
    sub = TrussTower(sub_base, levels)
    inclusion = TowerMap(sub, t, [{v: k for k, v in r.items()} for r in ren], check=False)
    return sub, inclusion, ren


def epi_mono_factorize(f: TowerMap, mode: str = "closed_singular") -> tuple[TowerMap, TowerMap]:
    if mode not in ("closed_singular", "open_regular"):
        raise TowerError(f"unknown factorization mode {mode!r}")
    c = f.classes
    if mode == "closed_singular" and not (f.source.is_closed and f.target.is_closed and c["singular"]):
        raise TowerError("closed_singular factorization needs a singular map of closed towers")
    if mode == "open_regular" and not (f.source.is_open and f.target.is_open and c["regular"]):
        raise TowerError("open_regular factorization needs a regular map of open towers")
    keep = [set(m.values()) for m in f.maps]
    image, mono, ren = image_tower(f.target, keep)
    epi = TowerMap(f.source, image, [{x: ren[i][y] for x, y in m.items()} for i, m in enumerate(f.maps)])
    mono = TowerMap(image, f.target, mono.maps)
    want = ("degeneracy", "face") if mode == "closed_singular" else ("coarsening", "embedding")
    if not epi.classes[want[0]] or not mono.classes[want[1]]:
        raise TowerError(f"image factorization is not a ({want[0]}, {want[1]}) pair")
    return epi, mono


def factorizations_through(f: TowerMap, middle: TrussTower, mode: str = "closed_singular") -> list[tuple[TowerMap, TowerMap]]:
    """All ``(epi, mono)`` with ``mono∘epi = f`` through ``middle`` of the mode's classes."""
    want = ("degeneracy", "face") if mode == "closed_singular" else ("coarsening", "embedding")
    kind = "singular" if mode == "closed_singular" else "regular"
    monos = [m for m in enumerate_maps(middle, f.target, kind) if m.classes[want[1]]]
    out = []
    for e in enumerate_maps(f.source, middle, kind):
        if not e.classes[want[0]]:
            continue
        for m in monos:
            if e.compose(m).maps == f.maps:
                out.append((e, m))
    return out


def face_block(t: TrussTower, x) -> tuple[TrussTower, TowerMap]:
    """The sub-tower of elements above the projections of ``x``, and its inclusion."""
    if not t.is_closed:
        raise TowerError("face blocks are defined for closed towers")
    if x not in t.top:
        raise TowerError(f"{x!r} is not an element of the top level")
    keep = [None] * (t.depth + 1)
    cur = x
    for i in range(t.depth, -1, -1):
        keep[i] = set(t.poset(i).up(cur))
        if i:
            cur = t.projection(i)[cur]
    sub, inc, _ = image_tower(t, keep)
    return sub, inc


def compose_over_2simplex(first: TrussTower, second: TrussTower) -> TrussTower:
    """Compose two towers over ``[1]`` by gluing over ``[2]`` and restricting to the outer edge."""
    chain1 = Poset([(0,), (1,)], [((0,), (1,))])
    if first.base != chain1 or second.base != chain1:
        raise TowerError("bordism towers must live over the chain (0,) -> (1,)")
    if first.depth != second.depth:
        raise TowerError("bordism towers must have equal depth")
    chain2 = Poset([(0,), (1,), (2,)], [((0,), (1,)), ((1,), (2,))])

    def shift(x):
        return ((x[0] + 1),) + x[1:]

    levels = []
    below = chain2
    for i in range(1, first.depth + 1):
        la, lb = first.levels[i - 1], second.levels[i - 1]
        fibers = dict(la.fibers)
        bordisms = dict(la.bordisms)
        for y, f in lb.fibers.items():
            sy = shift(y)
            if y[0] == 0:
                if fibers.get(sy) != f:
                    raise TowerError(f"level {i}: fibers over the shared end disagree at {sy!r}", (i, sy))
            else:
                fibers[sy] = f
        for (y, y2), r in lb.bordisms.items():
            key = (shift(y), shift(y2))
            if y[0] == 0 and y2[0] == 0:
                if bordisms.get(key) != r:
                    raise TowerError(f"level {i}: bordisms over the shared end disagree at {key!r}", (i,) + key)
            else:
                bordisms[key] = r
        try:
            new = Bundle1(below, fibers, bordisms)
        except BundleError as err:
            raise TowerError(f"level {i}: glued data is not a bundle: {err}", (i,)) from None
        levels.append(new)
        below = new.total
    glued = TrussTower(chain2, levels)
    outer = PosetMap(chain1, chain2, {(0,): (0,), (1,): (2,)})
    return tower_pullback(glued, outer)
