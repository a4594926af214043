"""Random valid structures for property tests and corpus generation."""

from __future__ import annotations

import random
from functools import lru_cache

from . import bordism as bd
from .bordism import Bordism1
from .bundle1 import Bundle1, over_chain
from .poset import Poset
from .trussn import POINT, TrussTower
from .truss1 import Truss1


def words(max_len: int, kind: str = "any") -> list[str]:
    out = []
    for n in range(1, max_len + 1):
        for first in "SR":
            w = "".join(first if i % 2 == 0 else ("R" if first == "S" else "S") for i in range(n))
            if kind == "closed" and not (w[0] == "S" and w[-1] == "S"):
                continue
            if kind == "open" and not (w[0] == "R" and w[-1] == "R"):
                continue
            out.append(w)
    return out


@lru_cache(maxsize=None)
def _bordisms(a: str, b: str) -> tuple[Bordism1, ...]:
    return tuple(bd.all_bordisms(Truss1(a), Truss1(b)))


def random_chain_bundle(rng: random.Random, m: int, max_fiber: int = 7) -> Bundle1:
    pool = words(max_fiber)
    while True:
        fibers = [rng.choice(pool)]
        steps = []
        for _ in range(m):
            options = [(w, r) for w in pool for r in _bordisms(fibers[-1], w)]
            w, r = rng.choice(options)
            fibers.append(w)
            steps.append(r)
        return over_chain([Truss1(w) for w in fibers], steps)


def random_poset(rng: random.Random, n: int, density: float = 0.35, ids=None) -> Poset:
    ids = list(range(n)) if ids is None else list(ids)
    order = ids[:]
    rng.shuffle(order)
    arrows = [(order[i], order[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    return Poset.from_relation(ids, arrows)


def random_bundle(rng: random.Random, base: Poset, max_fiber: int = 5, kind: str = "any", tries: int = 30) -> Bundle1:
    """A random bundle over ``base``, chosen element by element in topological order.

    Bordisms into each element are picked by backtracking so that all
    composites from common ancestors agree; ``"S"`` with terminal bordisms
    is the fallback when nothing else fits.
    """
    pool = words(max_fiber, kind)
    fibers: dict = {}
    bordisms: dict = {}
    composite: dict = {}
    for y in base.topological_order():
        preds = base.predecessors(y)
        ancestors = [u for u in base.down(y) if u != y]
        chosen = None
        for _ in range(tries):
            w = rng.choice(pool)
            picks = _pick_bordisms(rng, preds, ancestors, y, Truss1(w), fibers, composite, base)
            if picks is not None:
                chosen = (w, picks)
                break
        if chosen is None:
            w = "S"
            picks = {p: bd.terminal(fibers[p]) for p in preds}
            chosen = (w, picks)
        w, picks = chosen
        fibers[y] = Truss1(w)
        row = {y: bd.identity(fibers[y])}
        for p, r in picks.items():
            bordisms[(p, y)] = r
        for u in ancestors:
            p = next(p for p in preds if base.leq(u, p))
            row_u = composite[(u, p)]
            composite[(u, y)] = bd.compose(row_u, picks[p])
        composite[(y, y)] = row[y]
    return Bundle1(base, fibers, bordisms)


def _pick_bordisms(rng, preds, ancestors, y, t: Truss1, fibers, composite, base):
    preds = list(preds)
    rng.shuffle(preds)
    picks: dict = {}

    def consistent() -> bool:
        for u in ancestors:
            seen = None
            for p, r in picks.items():
                if base.leq(u, p):
                    c = bd.compose(composite[(u, p)], r)
                    if seen is None:
                        seen = c
                    elif c != seen:
                        return False
        return True

    def rec(k: int) -> bool:
        if k == len(preds):
            return True
        p = preds[k]
        options = list(_bordisms(fibers[p].word, t.word))
        rng.shuffle(options)
        for r in options[:12]:
            picks[p] = r
            if consistent() and rec(k + 1):
                return True
            del picks[p]
        return False

    return dict(picks) if rec(0) else None


def random_tower(
    rng: random.Random,
    depth: int,
    max_elements: int = 15,
    kind: str = "any",
    max_fiber: int = 5,
    attempts: int = 200,
) -> TrussTower:
    """A random tower over the point with at most ``max_elements`` top elements."""
    for _ in range(attempts):
        levels = []
        below = POINT
        ok = True
        for i in range(depth):
            budget = max(1, max_elements // max(1, len(below)))
            lvl = random_bundle(rng, below, min(max_fiber, budget), kind)
            levels.append(lvl)
            below = lvl.total
            if len(below) > max_elements:
                ok = False
                break
        if ok:
            return TrussTower(POINT, levels)
    raise RuntimeError("could not generate a tower within the size bound")


def random_block(rng: random.Random, depth: int, max_elements: int = 20) -> TrussTower:
    """A face block of a random closed tower."""
    from .trussn import face_block

    t = random_tower(rng, depth, max_elements, kind="closed")
    x = rng.choice(list(t.top.elements))
    block, _ = face_block(t, x)
    return block


def random_labeling(rng: random.Random, t: TrussTower, merges: int | None = None) -> dict:
    """Labels from random merges along covers, keeping the stratum relation acyclic."""
    top = t.top
    parent = {x: x for x in top.elements}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    covers = sorted(top.covers, key=lambda c: (top.index(c[0]), top.index(c[1])))
    rng.shuffle(covers)
    if merges is None:
        merges = rng.randint(0, len(covers))
    for a, b in covers[:merges]:
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        parent[rb] = ra
        if not _acyclic(top, find):
            parent[rb] = rb
    roots = sorted({find(x) for x in top.elements}, key=top.index)
    name = {r: f"s{k}" for k, r in enumerate(roots)}
    return {x: name[find(x)] for x in top.elements}


def _acyclic(p: Poset, find) -> bool:
    arrows: dict = {}
    for a, b in p.covers:
        ra, rb = find(a), find(b)
        if ra != rb:
            arrows.setdefault(ra, set()).add(rb)
    state: dict = {}

    def visit(v) -> bool:
        state[v] = 1
        for w in arrows.get(v, ()):
            s = state.get(w, 0)
            if s == 1 or (s == 0 and not visit(w)):
                return False
        state[v] = 2
        return True

    return all(state.get(v, 0) == 2 or visit(v) for v in list(arrows))
