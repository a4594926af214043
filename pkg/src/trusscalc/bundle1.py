"""1-truss bundles over finite posets.

A bundle is stored in classified form: a 1-truss over each base element and
a bordism over each covering arrow.  Composites along longer arrows are
computed once at construction, which also checks functoriality.

Total poset element ids extend base ids by a fiber position: ``x + (a,)``
when the base id ``x`` is a tuple, ``(x, a)`` otherwise.
"""

from __future__ import annotations

from collections.abc import Hashable, Mapping
from dataclasses import dataclass
from functools import cached_property

from . import bordism as bd
from .bordism import Bordism1, BordismError
from .poset import Poset, PosetMap, id_key, sort_ids
from .truss1 import Truss1, dualize as dualize_truss


class BundleError(ValueError):
    """Raised when bundle data is incomplete or not functorial."""

    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


def lift(x, a: int):
    return x + (a,) if isinstance(x, tuple) else (x, a)


@dataclass(frozen=True)
class TotalBundle:
    """A bundle in totalized form: total poset, projection, dims and frame positions."""

    poset: Poset
    base: Poset
    projection: Mapping
    dim: Mapping
    position: Mapping


class Bundle1:
    __slots__ = ("base", "fibers", "bordisms", "_composite", "__dict__")

    def __init__(self, base: Poset, fibers: Mapping, bordisms: Mapping):
        self.base = base
        self.fibers = {x: fibers[x] for x in base.elements if x in fibers}
        missing = [x for x in base.elements if x not in fibers]
        if missing:
            raise BundleError(f"no fiber over {missing[0]!r}", (missing[0],))
        self.bordisms = {}
        for x, y in sorted(base.covers, key=lambda c: (base.index(c[0]), base.index(c[1]))):
            r = bordisms.get((x, y))
            if r is None:
                raise BundleError(f"no bordism over the arrow {x!r}->{y!r}", (x, y))
            if r.domain != self.fibers[x] or r.codomain != self.fibers[y]:
                raise BundleError(
                    f"bordism over {x!r}->{y!r} runs {r.domain.word}⇸{r.codomain.word}, "
                    f"expected {self.fibers[x].word}⇸{self.fibers[y].word}",
                    (x, y),
                )
            self.bordisms[(x, y)] = r
        extra = set(bordisms) - set(base.covers)
        if extra:
            e = sort_ids(extra)[0]
            raise BundleError(f"bordism given over {e!r}, which is not a covering arrow", e)
        self._composite = self._check_functorial()

    def _check_functorial(self) -> dict:
        comp: dict = {}
        for x in reversed(self.base.topological_order()):
            row = {x: bd.identity(self.fibers[x])}
            via: dict = {}
            for z in self.base.successors(x):
                step = self.bordisms[(x, z)]
                for y, r in comp[z].items():
                    try:
                        cand = bd.compose(step, r)
                    except BordismError as err:
                        raise BundleError(f"composite {x!r}->{z!r}->{y!r} is not a bordism: {err}", (x, z, y)) from None
                    if y in row:
                        if row[y] != cand:
                            raise BundleError(
                                f"arrow {x!r}->{y!r} gets different bordisms through {via[y]!r} and {z!r}",
                                (x, y, via[y], z),
                            )
                    else:
                        row[y] = cand
                        via[y] = z
            comp[x] = row
        return comp

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Bundle1)
            and self.base == other.base
            and self.fibers == other.fibers
            and self.bordisms == other.bordisms
        )

    def __hash__(self) -> int:
        return hash((self.base, tuple(self.fibers[x].word for x in self.base.elements)))

    def __repr__(self) -> str:
        return f"Bundle1(base={self.base!r}, fibers={ {x: t.word for x, t in self.fibers.items()} })"

    def composite(self, x, y) -> Bordism1:
        """The bordism over ``x ⊴ y``."""
        try:
            return self._composite[x][y]
        except KeyError:
            raise BundleError(f"{x!r} ⊴ {y!r} does not hold in the base", (x, y)) from None

    @property
    def is_closed(self) -> bool:
        return all(t.is_closed for t in self.fibers.values())

    @property
    def is_open(self) -> bool:
        return all(t.is_open for t in self.fibers.values())

    def over(self, x) -> list:
        return [lift(x, a) for a in range(len(self.fibers[x]))]

    @cached_property
    def projection(self) -> dict:
        return {lift(x, a): x for x in self.base.elements for a in range(len(self.fibers[x]))}

    @cached_property
    def position(self) -> dict:
        return {lift(x, a): a for x in self.base.elements for a in range(len(self.fibers[x]))}

    @cached_property
    def dim(self) -> dict:
        return {lift(x, a): t.dim(a) for x, t in self.fibers.items() for a in range(len(t))}

    def fiber_arrows(self) -> list[tuple]:
        return [(lift(x, a), lift(x, b)) for x, t in self.fibers.items() for a, b in t.covers()]

    def generating_arrows(self) -> set[tuple]:
        """Fiber arrows plus same-dimension related pairs over covers."""
        arrows = set(self.fiber_arrows())
        for (x, y), r in self.bordisms.items():
            for a, b in r.pairs:
                if r.domain.dim(a) == r.codomain.dim(b):
                    arrows.add((lift(x, a), lift(y, b)))
        return arrows

    @cached_property
    def total(self) -> Poset:
        arrows = set(self.fiber_arrows())
        for (x, y), r in self.bordisms.items():
            arrows.update((lift(x, a), lift(y, b)) for a, b in r.pairs)
        return Poset.from_relation(self.projection, arrows)

    def total_bundle(self) -> TotalBundle:
        return TotalBundle(self.total, self.base, dict(self.projection), dict(self.dim), dict(self.position))

    def canonical_order(self) -> list:
        """Total elements ordered by base element, then frame position."""
        return [e for x in self.base.elements for e in self.over(x)]


def totalize(base: Poset, fibers: Mapping, cover_bordisms: Mapping) -> Bundle1:
    return Bundle1(base, fibers, cover_bordisms)


def total_poset(b: Bundle1) -> Poset:
    return b.total


def classify(tb: TotalBundle | Bundle1) -> tuple[dict, dict]:
    """Recover fibers and cover bordisms from a totalized bundle."""
    if isinstance(tb, Bundle1):
        tb = tb.total_bundle()
    p = tb.poset
    by_base: dict = {}
    for e in p.elements:
        by_base.setdefault(tb.projection[e], []).append(e)
    fibers: dict = {}
    order: dict = {}
    for x in tb.base.elements:
        elems = sorted(by_base.get(x, []), key=lambda e: tb.position[e])
        if [tb.position[e] for e in elems] != list(range(len(elems))):
            raise BundleError(f"frame positions over {x!r} are not 0..{len(elems) - 1}", (x,))
        t = Truss1("".join("S" if tb.dim[e] == 0 else "R" for e in elems))
        for a, b in t.covers():
            if not p.leq(elems[a], elems[b]) or p.leq(elems[b], elems[a]):
                raise BundleError(f"fiber over {x!r} does not carry its face order", (elems[a], elems[b]))
        fibers[x] = t
        order[x] = elems
    bordisms = {}
    for x, y in tb.base.covers:
        pairs = {(a, b) for a, ea in enumerate(order[x]) for b, eb in enumerate(order[y]) if p.leq(ea, eb)}
        bordisms[(x, y)] = bd.validate(fibers[x], fibers[y], pairs)
    return fibers, bordisms


def pullback(b: Bundle1, g: PosetMap) -> Bundle1:
    if g.target != b.base:
        raise BundleError("pullback map does not target the bundle's base")
    fibers = {y: b.fibers[g(y)] for y in g.source.elements}
    bordisms = {(y, y2): b.composite(g(y), g(y2)) for y, y2 in g.source.covers}
    return Bundle1(g.source, fibers, bordisms)


def restrict(b: Bundle1, sub: Poset) -> Bundle1:
    """Pullback along the inclusion of a subposet of the base."""
    return pullback(b, PosetMap(sub, b.base, {x: x for x in sub.elements}))


def dualize(b: Bundle1) -> Bundle1:
    fibers = {x: dualize_truss(t) for x, t in b.fibers.items()}
    bordisms = {(y, x): bd.dualize(r) for (x, y), r in b.bordisms.items()}
    return Bundle1(b.base.opposite(), fibers, bordisms)


def suspend_base(base: Poset, bottom: Hashable, top: Hashable) -> Poset:
    if bottom in base or top in base:
        raise BundleError("suspension points collide with base elements")
    covers = set(base.covers)
    covers.update((bottom, m) for m in base.minimal())
    covers.update((m, top) for m in base.maximal())
    if not base.elements:
        covers.add((bottom, top))
    return Poset(list(base.elements) + [bottom, top], covers, check=False)


def suspend(b: Bundle1, bottom: Hashable = "bot", top: Hashable = "top") -> Bundle1:
    """Adjoin an initial base element with fiber ``R`` and a terminal one with fiber ``S``."""
    base = suspend_base(b.base, bottom, top)
    fibers = dict(b.fibers)
    fibers[bottom] = bd.INITIAL
    fibers[top] = bd.TERMINAL
    bordisms = dict(b.bordisms)
    for m in b.base.minimal():
        bordisms[(bottom, m)] = bd.initial(b.fibers[m])
    for m in b.base.maximal():
        bordisms[(m, top)] = bd.terminal(b.fibers[m])
    if not b.base.elements:
        bordisms[(bottom, top)] = bd.terminal(bd.INITIAL)
    return Bundle1(base, fibers, bordisms)


def over_point(t: Truss1, point: Hashable = ()) -> Bundle1:
    return Bundle1(Poset.point(point), {point: t}, {})


def over_chain(fibers: list[Truss1], bordisms: list[Bordism1]) -> Bundle1:
    """Bundle over the chain ``0 -> 1 -> ... -> m``."""
    base = Poset.chain(len(fibers) - 1)
    return Bundle1(base, dict(enumerate(fibers)), {(i, i + 1): r for i, r in enumerate(bordisms)})


def is_chain_base(p: Poset) -> bool:
    """Is ``p`` a finite total order?"""
    n = len(p)
    return len(p.covers) == n - 1 and all(len(p.successors(x)) <= 1 and len(p.predecessors(x)) <= 1 for x in p.elements)


def chain_order(p: Poset) -> list:
    if not is_chain_base(p):
        raise BundleError("base is not a chain")
    return sorted(p.elements, key=lambda x: len(p.down(x)))
