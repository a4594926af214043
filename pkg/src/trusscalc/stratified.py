"""Stratified trusses, label-preserving coarsenings, and normal forms.

A coarsening of a tower is chosen level by level: in every fiber a set of
interior singular elements is deleted, each merging with its two regular
neighbours.  Fibers over merged base elements must coarsen to the same
word, the target bordisms are the smallest relations containing the images,
and at the top level only label-homogeneous merges are allowed.
"""

from __future__ import annotations

import random
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from itertools import combinations

from . import bordism as bd
from .bordism import BordismError
from .bundle1 import Bundle1, BundleError, lift
from .poset import Poset, PosetError, PosetMap, is_connected_quotient, sort_ids
from .trussn import POINT, TowerMap, TrussTower
from .truss1 import Truss1, coarsening_from_deletions, deletable_singulars


class StratError(ValueError):
    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True, eq=False)
class StratifiedTruss:
    truss: TrussTower
    labeling: Mapping
    strata: Poset = field(repr=False)

    def __eq__(self, other) -> bool:
        return isinstance(other, StratifiedTruss) and self.truss.unlabeled() == other.truss.unlabeled() and dict(self.labeling) == dict(other.labeling)

    def __hash__(self) -> int:
        return hash(self.truss.unlabeled())

    @property
    def size(self) -> int:
        return len(self.truss.top)

    def tower(self) -> TrussTower:
        return self.truss.with_labels(self.labeling)


def stratum_poset(top: Poset, labeling: Mapping) -> Poset:
    arrows = {(labeling[a], labeling[b]) for a, b in top.covers if labeling[a] != labeling[b]}
    try:
        return Poset.from_relation(set(labeling.values()), arrows)
    except PosetError as err:
        raise StratError(f"stratum relation has a cycle: {err}") from None


def validate(truss: TrussTower, labeling: Mapping | None = None) -> StratifiedTruss:
    if labeling is None:
        labeling = truss.labels
    if labeling is None:
        raise StratError("no labeling given")
    top = truss.top
    labeling = dict(labeling)
    if set(labeling) != set(top.elements):
        raise StratError("labeling must be total on the top level")
    strata = stratum_poset(top, labeling)
    char = PosetMap(top, strata, labeling)
    for lab in strata.elements:
        comps = top.components(char.preimage(lab))
        if len(comps) != 1:
            raise StratError(f"stratum {lab!r} is disconnected: components start at {[c[0] for c in comps]}", (lab,))
    if not is_connected_quotient(char):
        raise StratError("labeling is not a quotient onto its stratum poset")
    return StratifiedTruss(truss.unlabeled(), labeling, strata)


# -- coarsening search --------------------------------------------------------


@dataclass
class _Level:
    target: Bundle1
    fmap: dict
    deletions: dict


def _subsets(items, rng: random.Random | None):
    items = list(items)
    subs = [frozenset(c) for k in range(len(items) + 1) for c in combinations(items, k)]
    if rng is not None:
        rng.shuffle(subs)
    return subs


def _closure(dom: Truss1, cod: Truss1, pairs: set) -> int | None:
    rows = [0] * len(dom)
    for a, b in pairs:
        rows[a] |= 1 << b
    changed = True
    while changed:
        changed = False
        for a in range(len(dom)):
            row = rows[a]
            grown = row
            for b in range(len(cod)):
                if (row >> b) & 1:
                    for b2 in (b - 1, b + 1):
                        if 0 <= b2 < len(cod) and cod.leq(b, b2):
                            grown |= 1 << b2
            for a2 in (a - 1, a + 1):
                if 0 <= a2 < len(dom) and dom.leq(a2, a) and rows[a2] | grown != rows[a2]:
                    rows[a2] |= grown
                    changed = True
            if grown != row:
                rows[a] = grown
                changed = True
    return rows


def _level_choices(
    t: TrussTower,
    i: int,
    below_target: Poset,
    below_map: dict,
    labels: Mapping | None,
    rng: random.Random | None,
) -> Iterator[_Level]:
    """Every coarsening of level ``i`` over the already coarsened level below."""
    lvl = t.levels[i - 1]
    base = lvl.base
    order = base.topological_order()
    top = i == t.depth
    options = {}
    for x in order:
        fiber = lvl.fibers[x]
        dels = deletable_singulars(fiber)
        if top:
            dels = [
                s for s in dels
                if labels[lift(x, s - 1)] == labels[lift(x, s)] == labels[lift(x, s + 1)]
            ]
        options[x] = [(d, *coarsening_from_deletions(fiber, d)) for d in _subsets(dels, rng)]
    group_word: dict = {}
    chosen: dict = {}

    def compatible(x, word: Truss1, assign) -> bool:
        fx = below_map[x]
        for w in base.predecessors(x):
            wassign = chosen[w][2]
            r = lvl.bordisms[(w, x)]
            if below_map[w] == fx:
                for a, b in r.pairs:
                    if not word.leq(wassign[a], assign[b]):
                        return False
                continue
            # a kept singular must land on a kept singular
            wdel, xdel = chosen[w][0], chosen[x][0]
            if any(a not in wdel and b in xdel for a, b in r.singular_function.items()):
                return False
            pairs = sorted({(wassign[a], assign[b]) for a, b in r.pairs})
            for (p, q) in pairs:
                for (p2, q2) in pairs:
                    if p < p2 and q > q2:
                        return False
        return True

    def rec(k: int) -> Iterator[dict]:
        if k == len(order):
            yield dict(chosen)
            return
        x = order[k]
        fx = below_map[x]
        for d, word, assign in options[x]:
            if fx in group_word and group_word[fx] != word:
                continue
            fresh = fx not in group_word
            if fresh:
                group_word[fx] = word
            chosen[x] = (d, word, assign)
            if compatible(x, word, assign):
                yield from rec(k + 1)
            del chosen[x]
            if fresh:
                del group_word[fx]

    for choice in rec(0):
        built = _assemble(lvl, below_target, below_map, choice)
        if built is not None:
            yield built


def _assemble(lvl: Bundle1, below_target: Poset, below_map: dict, choice: dict) -> _Level | None:
    base = lvl.base
    fibers = {}
    for x, (_, word, _) in choice.items():
        fibers[below_map[x]] = word
    groups: dict = {}
    for x in base.elements:
        groups.setdefault(below_map[x], []).append(x)
    bordisms = {}
    for y, y2 in below_target.covers:
        pairs = set()
        for x in groups[y]:
            ax = choice[x][2]
            for x2 in groups[y2]:
                if not base.leq(x, x2):
                    continue
                ax2 = choice[x2][2]
                r = lvl.composite(x, x2)
                pairs.update((ax[a], ax2[b]) for a, b in r.pairs)
        if not pairs:
            return None
        rows = _closure(fibers[y], fibers[y2], pairs)
        if not bd.is_valid(fibers[y], fibers[y2], rows):
            return None
        bordisms[(y, y2)] = bd.Bordism1(fibers[y], fibers[y2], rows)
    try:
        target = Bundle1(below_target, fibers, bordisms)
    except (BundleError, BordismError):
        return None
    fmap = {lift(x, a): lift(below_map[x], v) for x, (_, _, assign) in choice.items() for a, v in enumerate(assign)}
    total = target.total
    for u, v in lvl.generating_arrows():
        if not total.leq(fmap[u], fmap[v]):
            return None
    return _Level(target, fmap, {x: d for x, (d, _, _) in choice.items()})


def _coarsenings(s: StratifiedTruss, rng: random.Random | None = None) -> Iterator[tuple[TowerMap, StratifiedTruss]]:
    t = s.truss
    labels = s.labeling

    def rec(i: int, levels: list[Bundle1], maps: list[dict], trivial: bool) -> Iterator[tuple[TowerMap, StratifiedTruss]]:
        if i > t.depth:
            if trivial:
                return
            target_labels: dict = {}
            for x, y in maps[-1].items():
                if target_labels.setdefault(y, labels[x]) != labels[x]:
                    return
            target = TrussTower(t.base, levels)
            try:
                st = validate(target, target_labels)
            except StratError:
                return
            yield TowerMap(t, target, maps, check=False), st
            return
        below_target = levels[-1].total if levels else t.base
        for lv in _level_choices(t, i, below_target, maps[-1], labels, rng):
            still = trivial and not any(lv.deletions.values())
            yield from rec(i + 1, levels + [lv.target], maps + [lv.fmap], still)

    yield from rec(1, [], [{x: x for x in t.base.elements}], True)


def enumerate_truss_coarsenings(s: StratifiedTruss, limit: int = 100_000) -> list[tuple[TowerMap, StratifiedTruss]]:
    """All non-identity label-preserving coarsenings of ``s``."""
    out = []
    for item in _coarsenings(s):
        out.append(item)
        if len(out) > limit:
            raise StratError(f"more than {limit} coarsenings; enumeration aborted")
    return out


def first_coarsening(s: StratifiedTruss, rng: random.Random | None = None):
    return next(_coarsenings(s, rng), None)


def is_normalized(s: StratifiedTruss) -> bool:
    return first_coarsening(s) is None


def normalize(
    s: StratifiedTruss, strategy: str = "greedy", rng: random.Random | None = None
) -> tuple[StratifiedTruss, TowerMap]:
    """Coarsen until no coarsening applies; returns the normal form and the composite map.

    ``strategy`` is ``"greedy"`` (first coarsening found), ``"random"``
    (randomized search order) or ``"exhaustive"`` (pick among all
    coarsenings, uniformly when ``rng`` is given, else the last one).
    """
    current = s
    reduction = TowerMap.identity(s.truss)
    if strategy == "random" and rng is None:
        rng = random.Random()
    for _ in range(s.size + 1):
        if strategy == "exhaustive":
            found = enumerate_truss_coarsenings(current)
            step = (rng.choice(found) if rng else found[-1]) if found else None
        else:
            step = first_coarsening(current, rng if strategy == "random" else None)
        if step is None:
            return current, reduction
        fmap, current = step
        reduction = TowerMap(s.truss, current.truss, [{x: g[f[x]] for x in f} for f, g in zip(reduction.maps, fmap.maps)], check=False)
    raise StratError("normalization did not terminate within the element bound")


# -- isomorphism --------------------------------------------------------------


def label_bijection(a: StratifiedTruss, b: StratifiedTruss) -> dict | None:
    """Label renaming carrying ``a`` to ``b`` when their trusses coincide."""
    if a.truss != b.truss:
        return None
    forward: dict = {}
    backward: dict = {}
    for x, la in a.labeling.items():
        lb = b.labeling[x]
        if forward.setdefault(la, lb) != lb or backward.setdefault(lb, la) != la:
            return None
    return forward


def iso_witness(a: StratifiedTruss, b: StratifiedTruss) -> dict | None:
    """On normal forms, the balanced iso is the identity on canonical ids; returns the stratum map."""
    na, _ = normalize(a)
    nb, _ = normalize(b)
    return label_bijection(na, nb)


def decide_iso(a: StratifiedTruss, b: StratifiedTruss) -> bool:
    return iso_witness(a, b) is not None


def brute_force_iso(a: StratifiedTruss, b: StratifiedTruss) -> bool:
    """Search every levelwise bijection for a balanced, label-compatible tower iso."""
    ta, tb = a.truss, b.truss
    if ta.depth != tb.depth or ta.sizes() != tb.sizes():
        return False
    maps = [{x: y for x, y in zip(ta.base.elements, tb.base.elements)}] if len(ta.base) == 1 else None
    if maps is None:
        return False

    def level(i: int, maps: list[dict]) -> bool:
        if i > ta.depth:
            return _labels_match(a, b, maps[-1])
        pa, pb = ta.poset(i), tb.poset(i)
        xs = list(pa.elements)
        current: dict = {}
        used: set = set()

        def assign(k: int) -> bool:
            if k == len(xs):
                if {(current[u], current[v]) for u, v in pa.covers} != set(pb.covers):
                    return False
                for y in ta.poset(i - 1).elements:
                    pos = [tb.position(i, current[lift(y, q)]) for q in range(len(ta.fiber(i, y)))]
                    if pos != sorted(pos):
                        return False
                return level(i + 1, maps + [dict(current)])
            x = xs[k]
            over = maps[-1][ta.projection(i)[x]]
            for y in pb.elements:
                if y in used or tb.projection(i)[y] != over or tb.dim(i, y) != ta.dim(i, x):
                    continue
                current[x] = y
                used.add(y)
                if assign(k + 1):
                    return True
                del current[x]
                used.discard(y)
            return False

        return assign(0)

    return level(1, maps)


def _labels_match(a: StratifiedTruss, b: StratifiedTruss, top_map: dict) -> bool:
    forward: dict = {}
    backward: dict = {}
    for x, la in a.labeling.items():
        lb = b.labeling[top_map[x]]
        if forward.setdefault(la, lb) != lb or backward.setdefault(lb, la) != la:
            return False
    return True


def brute_force_decide(a: StratifiedTruss, b: StratifiedTruss) -> bool:
    """Independent route: normalize through the full enumerator, then search bijections."""
    na, _ = normalize(a, "exhaustive")
    nb, _ = normalize(b, "exhaustive")
    return brute_force_iso(na, nb)


def one_stratum(t: TrussTower, name: str = "s0") -> StratifiedTruss:
    return validate(t, {x: name for x in t.top.elements})


def discrete(t: TrussTower) -> StratifiedTruss:
    return validate(t, {x: f"s{k}" for k, x in enumerate(t.top.elements)})
