"""Sections and spacers of 1-truss bundles over chains, in scaffold order.

Over the chain ``0 -> 1 -> ... -> m`` a section picks one fiber position per
base vertex with consecutive picks related.  A spacer additionally doubles
one base vertex ``j``, visiting a regular element and then an adjacent
singular one.  Positions are 0-based, so the scaffold norm of a section is
the plain sum of its entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from . import bordism as bd
from .bordism import Bordism1
from .bundle1 import Bundle1, BundleError, chain_order
from .truss1 import Truss1


class ScaffoldError(ValueError):
    pass


@dataclass(frozen=True)
class Section:
    vertices: tuple[int, ...]

    @property
    def norm(self) -> int:
        return sum(self.vertices)

    def transition_index(self, fibers: list[Truss1]) -> int:
        """First base index carrying a singular element (``len`` if none)."""
        return next((i for i, a in enumerate(self.vertices) if fibers[i].is_singular(a)), len(self.vertices))


@dataclass(frozen=True)
class Spacer:
    vertices: tuple[int, ...]
    index: int

    @property
    def regular(self) -> int:
        return self.vertices[self.index]

    @property
    def singular(self) -> int:
        return self.vertices[self.index + 1]

    def boundaries(self) -> tuple[Section, Section]:
        """``(lower, upper)`` boundary sections."""
        v, j = self.vertices, self.index
        drop_singular = Section(v[: j + 1] + v[j + 2 :])
        drop_regular = Section(v[:j] + v[j + 1 :])
        if self.regular < self.singular:
            return drop_singular, drop_regular
        return drop_regular, drop_singular

    @property
    def norm(self) -> Fraction:
        lo, hi = self.boundaries()
        return Fraction(lo.norm + hi.norm, 2)


class ChainData:
    """A bundle over a chain unpacked into fiber and step lists."""

    def __init__(self, fibers: list[Truss1], steps: list[Bordism1]):
        if len(steps) != len(fibers) - 1:
            raise ScaffoldError("need one bordism per consecutive pair of fibers")
        for i, r in enumerate(steps):
            if r.domain != fibers[i] or r.codomain != fibers[i + 1]:
                raise ScaffoldError(f"bordism {i} does not connect fibers {i} and {i + 1}")
        self.fibers = fibers
        self.steps = steps

    @classmethod
    def of(cls, b: "Bundle1 | ChainData") -> "ChainData":
        if isinstance(b, ChainData):
            return b
        try:
            order = chain_order(b.base)
        except BundleError as err:
            raise ScaffoldError(str(err)) from None
        return cls([b.fibers[x] for x in order], [b.bordisms[(x, y)] for x, y in zip(order, order[1:])])

    @property
    def m(self) -> int:
        return len(self.fibers) - 1

    @property
    def total_size(self) -> int:
        return sum(len(t) for t in self.fibers)

    @property
    def top_norm(self) -> int:
        return self.total_size - len(self.fibers)

    def is_section(self, v) -> bool:
        return len(v) == len(self.fibers) and all(
            0 <= a < len(t) for a, t in zip(v, self.fibers)
        ) and all(r.related(v[i], v[i + 1]) for i, r in enumerate(self.steps))

    def suspended(self) -> "ChainData":
        fibers = [bd.INITIAL] + self.fibers + [bd.TERMINAL]
        steps = [bd.initial(self.fibers[0])] + self.steps + [bd.terminal(self.fibers[-1])]
        return ChainData(fibers, steps)


def scaffold_norm(s: Section) -> int:
    return s.norm


def spacer_norm(sp: Spacer) -> Fraction:
    return sp.norm


def bottom_section(b) -> Section:
    c = ChainData.of(b)
    return Section(tuple(0 for _ in c.fibers))


def top_section(b) -> Section:
    c = ChainData.of(b)
    return Section(tuple(len(t) - 1 for t in c.fibers))


def brute_force_sections(b) -> list[Section]:
    c = ChainData.of(b)
    found = [Section(v) for v in product(*(range(len(t)) for t in c.fibers)) if c.is_section(v)]
    return sorted(found, key=lambda s: (s.norm, s.vertices))


def successor(b, s: Section) -> Section:
    """The section of norm one more, computed inside the suspension."""
    c = ChainData.of(b)
    if not c.is_section(s.vertices):
        raise ScaffoldError(f"{s.vertices} is not a section")
    sus = c.suspended()
    k = [0, *s.vertices, 0]
    j = Section(tuple(k)).transition_index(sus.fibers)
    prev = sus.steps[j - 1]
    if k[j - 1] + 1 < len(sus.fibers[j - 1]) and prev.related(k[j - 1] + 1, k[j]):
        k[j - 1] += 1
    elif k[j] + 1 < len(sus.fibers[j]) and prev.related(k[j - 1], k[j] + 1):
        k[j] += 1
    else:
        raise ScaffoldError(f"{s.vertices} is the top section")
    out = Section(tuple(k[1:-1]))
    if not c.is_section(out.vertices):
        raise ScaffoldError(f"successor step from {s.vertices} left the sections: {out.vertices}")
    return out


def predecessor(b, s: Section) -> Section:
    """The section whose successor is ``s``."""
    c = ChainData.of(b)
    for i in range(len(s.vertices)):
        if s.vertices[i] == 0:
            continue
        v = list(s.vertices)
        v[i] -= 1
        if c.is_section(v):
            cand = Section(tuple(v))
            try:
                if successor(c, cand) == s:
                    return cand
            except ScaffoldError:
                continue
    raise ScaffoldError(f"{s.vertices} is the bottom section")


def sections_in_order(b, method: str = "successor") -> list[Section]:
    c = ChainData.of(b)
    if method == "brute":
        return brute_force_sections(c)
    out = [bottom_section(c)]
    top = top_section(c)
    while out[-1] != top:
        out.append(successor(c, out[-1]))
        if len(out) > c.top_norm + 1:
            raise ScaffoldError("successor chain overran the top norm")
    return out


def brute_force_spacers(b) -> list[Spacer]:
    c = ChainData.of(b)
    found = []
    for j in range(len(c.fibers)):
        for v in product(*(range(len(t)) for t in c.fibers[: j + 1]), *(range(len(t)) for t in c.fibers[j:])):
            a, s = v[j], v[j + 1]
            if not (c.fibers[j].is_regular(a) and abs(a - s) == 1):
                continue
            head, tail = v[: j + 1], v[j + 1 :]
            if all(c.steps[i].related(head[i], head[i + 1]) for i in range(j)) and all(
                c.steps[j + i].related(tail[i], tail[i + 1]) for i in range(len(tail) - 1)
            ):
                found.append(Spacer(tuple(v), j))
    return sorted(found, key=lambda sp: (sp.norm, sp.vertices))


def spacers_with_boundaries(b) -> list[tuple[Spacer, Section, Section]]:
    return [(sp, *sp.boundaries()) for sp in brute_force_spacers(b)]


def restrict_to_chain(b: Bundle1, chain: list) -> ChainData:
    """Pull ``b`` back along a nondegenerate chain of base elements."""
    for x, y in zip(chain, chain[1:]):
        if x == y or not b.base.leq(x, y):
            raise ScaffoldError(f"{chain} is not a nondegenerate chain of the base")
    return ChainData([b.fibers[x] for x in chain], [b.composite(x, y) for x, y in zip(chain, chain[1:])])


def is_linear(objects: list, arrows: list[tuple]) -> bool:
    """Do the generating ``arrows`` form one path through all ``objects``?"""
    if len(arrows) != len(objects) - 1:
        return False
    out_deg = {o: 0 for o in objects}
    in_deg = {o: 0 for o in objects}
    nxt = {}
    for s, t in arrows:
        if s not in out_deg or t not in in_deg or s == t:
            return False
        out_deg[s] += 1
        in_deg[t] += 1
        nxt[s] = t
    starts = [o for o in objects if in_deg[o] == 0]
    if len(starts) != 1 or any(d > 1 for d in out_deg.values()) or any(d > 1 for d in in_deg.values()):
        return False
    seen, cur = 1, starts[0]
    while cur in nxt:
        cur = nxt[cur]
        seen += 1
    return seen == len(objects)


def path_order(objects: list, arrows: list[tuple]) -> list:
    nxt = dict(arrows)
    heads = set(objects) - set(nxt.values())
    cur = next(iter(heads))
    out = [cur]
    while cur in nxt:
        cur = nxt[cur]
        out.append(cur)
    return out


def fiber_category_report(b: Bundle1, base_chain: list) -> dict[str, bool]:
    c = restrict_to_chain(b, base_chain)
    objects = brute_force_sections(c)
    arrows = [sp.boundaries() for sp in brute_force_spacers(c)]
    total = is_linear(objects, arrows)
    preserving = True
    if total and len(base_chain) > 1:
        order = path_order(objects, arrows)
        lo, hi = order[0], order[-1]
        for k in range(len(base_chain)):
            face = base_chain[:k] + base_chain[k + 1 :]
            fc = restrict_to_chain(b, face)
            sub = brute_force_sections(fc)
            sub_arrows = [sp.boundaries() for sp in brute_force_spacers(fc)]
            if not is_linear(sub, sub_arrows):
                preserving = False
                break
            sub_order = path_order(sub, sub_arrows)
            drop = lambda s: Section(s.vertices[:k] + s.vertices[k + 1 :])
            if drop(lo) != sub_order[0] or drop(hi) != sub_order[-1]:
                preserving = False
                break
    return {"is_total_order": total, "transitions_endpoint_preserving": total and preserving}
