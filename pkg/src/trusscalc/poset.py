"""Finite posets stored by their covering arrows.

An arrow ``a -> b`` records ``a ⊴ b``.  Reachability is computed once per
poset with integer bitsets, which keeps repeated order queries cheap for
the desk-scale structures handled by this package.
"""

from __future__ import annotations

from collections.abc import Callable, Hashable, Iterable, Mapping
from itertools import combinations
from typing import Any


class PosetError(ValueError):
    """Raised for malformed posets or poset maps."""


def id_key(x: Any):
    """Sort key that orders mixed int/str/tuple element ids deterministically."""
    if isinstance(x, tuple):
        return (2, tuple(id_key(v) for v in x))
    if isinstance(x, bool) or not isinstance(x, int):
        return (1, str(x))
    return (0, x)


def sort_ids(ids: Iterable) -> list:
    return sorted(ids, key=id_key)


class Poset:
    """A finite poset given by elements and its covering relation.

    ``covers`` must be exactly the covering relation: irreflexive, acyclic and
    transitively reduced.  Use :meth:`from_relation` to reduce an arbitrary
    generating relation first.
    """

    __slots__ = ("elements", "covers", "_index", "_up", "_down", "_succ", "_pred", "_hash")

    def __init__(self, elements: Iterable[Hashable], covers: Iterable[tuple], check: bool = True):
        self.elements = tuple(sort_ids(set(elements)))
        self._index = {e: i for i, e in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            raise PosetError("duplicate element ids")
        self.covers = frozenset(tuple(c) for c in covers)
        n = len(self.elements)
        self._succ: list[list[int]] = [[] for _ in range(n)]
        self._pred: list[list[int]] = [[] for _ in range(n)]
        for a, b in self.covers:
            if a not in self._index or b not in self._index:
                raise PosetError(f"cover ({a!r}, {b!r}) mentions an unknown element")
            if a == b:
                raise PosetError(f"cover ({a!r}, {a!r}) is reflexive")
            ia, ib = self._index[a], self._index[b]
            self._succ[ia].append(ib)
            self._pred[ib].append(ia)
        self._up = self._reach(self._succ, "cycle through covers")
        self._down = [0] * n
        for i in range(n):
            bits = self._up[i]
            while bits:
                low = bits & -bits
                self._down[low.bit_length() - 1] |= 1 << i
                bits ^= low
        self._hash = None
        if check:
            for a, b in self.covers:
                ia, ib = self._index[a], self._index[b]
                for ic in self._succ[ia]:
                    if ic != ib and (self._up[ic] >> ib) & 1:
                        raise PosetError(f"cover ({a!r}, {b!r}) is implied by a longer path")

    def _reach(self, succ, what):
        n = len(succ)
        state = [0] * n
        up = [0] * n
        for root in range(n):
            if state[root]:
                continue
            stack = [(root, iter(succ[root]))]
            state[root] = 1
            while stack:
                node, it = stack[-1]
                nxt = next(it, None)
                if nxt is None:
                    stack.pop()
                    bits = 1 << node
                    for s in succ[node]:
                        bits |= up[s]
                    up[node] = bits
                    state[node] = 2
                elif state[nxt] == 1:
                    raise PosetError(f"{what}: {self.elements[nxt]!r}")
                elif state[nxt] == 0:
                    state[nxt] = 1
                    stack.append((nxt, iter(succ[nxt])))
        return up

    @classmethod
    def from_relation(cls, elements: Iterable[Hashable], arrows: Iterable[tuple]) -> "Poset":
        """Build the poset generated by ``arrows`` (reflexive-transitive closure)."""
        elements = list(elements)
        arrows = {tuple(a) for a in arrows if a[0] != a[1]}
        loose = cls(elements, arrows, check=False)
        reduced = set()
        for a, b in arrows:
            ia, ib = loose._index[a], loose._index[b]
            if not any(ic != ib and (loose._up[ic] >> ib) & 1 for ic in loose._succ[ia]):
                reduced.add((a, b))
        return cls(elements, reduced, check=False)

    @classmethod
    def chain(cls, m: int) -> "Poset":
        """The chain ``0 -> 1 -> ... -> m``."""
        return cls(range(m + 1), [(i, i + 1) for i in range(m)], check=False)

    @classmethod
    def point(cls, element: Hashable = ()) -> "Poset":
        return cls([element], [], check=False)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return x in self._index

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other) -> bool:
        return isinstance(other, Poset) and self.elements == other.elements and self.covers == other.covers

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.elements, self.covers))
        return self._hash

    def __repr__(self) -> str:
        return f"Poset({len(self.elements)} elements, {len(self.covers)} covers)"

    def index(self, x) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise PosetError(f"unknown element {x!r}") from None

    def leq(self, a, b) -> bool:
        """``a ⊴ b``: ``b`` is reachable from ``a`` along covers (or equal)."""
        return bool((self._up[self.index(a)] >> self.index(b)) & 1)

    def lt(self, a, b) -> bool:
        return a != b and self.leq(a, b)

    def up_bits(self, a) -> int:
        return self._up[self.index(a)]

    def down_bits(self, a) -> int:
        return self._down[self.index(a)]

    def _unpack(self, bits: int) -> list:
        out = []
        while bits:
            low = bits & -bits
            out.append(self.elements[low.bit_length() - 1])
            bits ^= low
        return out

    def up(self, a) -> list:
        """All ``b`` with ``a ⊴ b``."""
        return self._unpack(self.up_bits(a))

    def down(self, a) -> list:
        """All ``b`` with ``b ⊴ a``."""
        return self._unpack(self.down_bits(a))

    def successors(self, a) -> list:
        return [self.elements[i] for i in self._succ[self.index(a)]]

    def predecessors(self, a) -> list:
        return [self.elements[i] for i in self._pred[self.index(a)]]

    def relation(self) -> set[tuple]:
        """All pairs ``(a, b)`` with ``a ⊴ b``, including identities."""
        return {(a, b) for a in self.elements for b in self.up(a)}

    def minimal(self) -> list:
        return [e for i, e in enumerate(self.elements) if not self._pred[i]]

    def maximal(self) -> list:
        return [e for i, e in enumerate(self.elements) if not self._succ[i]]

    def initial(self):
        """The element below everything, or ``None``."""
        full = (1 << len(self.elements)) - 1
        for i, e in enumerate(self.elements):
            if self._up[i] == full:
                return e
        return None

    def opposite(self) -> "Poset":
        return Poset(self.elements, [(b, a) for a, b in self.covers], check=False)

    def subposet(self, keep: Iterable) -> "Poset":
        """Full subposet on ``keep`` (order restricted, covers recomputed)."""
        keep = set(keep)
        arrows = [(a, b) for a in keep for b in self.up(a) if b in keep and b != a]
        return Poset.from_relation(keep, arrows)

    def topological_order(self) -> list:
        """Elements ordered so that every arrow points forward."""
        return sorted(self.elements, key=lambda e: (-bin(self.up_bits(e)).count("1"), id_key(e)))

    def relabel(self, mapping: Mapping) -> "Poset":
        return Poset((mapping[e] for e in self.elements), [(mapping[a], mapping[b]) for a, b in self.covers], check=False)

    def components(self, subset: Iterable | None = None) -> list[list]:
        """Connected components of the undirected cover graph (optionally of a subset)."""
        nodes = set(self.elements if subset is None else subset)
        adj: dict = {x: [] for x in nodes}
        for a, b in self.covers:
            if a in nodes and b in nodes:
                adj[a].append(b)
                adj[b].append(a)
        seen: set = set()
        comps = []
        for x in sort_ids(nodes):
            if x in seen:
                continue
            comp, stack = [], [x]
            seen.add(x)
            while stack:
                y = stack.pop()
                comp.append(y)
                for z in adj[y]:
                    if z not in seen:
                        seen.add(z)
                        stack.append(z)
            comps.append(sort_ids(comp))
        return comps


class PosetMap:
    """A monotone map between posets."""

    __slots__ = ("source", "target", "assignment")

    def __init__(self, source: Poset, target: Poset, assignment: Mapping, check: bool = True):
        self.source = source
        self.target = target
        self.assignment = dict(assignment)
        if check:
            missing = [x for x in source.elements if x not in self.assignment]
            if missing:
                raise PosetError(f"assignment undefined on {missing[0]!r}")
            for x in source.elements:
                if self.assignment[x] not in target:
                    raise PosetError(f"{x!r} is sent outside the target: {self.assignment[x]!r}")
            for a, b in source.covers:
                if not target.leq(self.assignment[a], self.assignment[b]):
                    raise PosetError(f"not monotone on the cover ({a!r}, {b!r})")

    def __call__(self, x):
        return self.assignment[x]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PosetMap)
            and self.source == other.source
            and self.target == other.target
            and self.assignment == other.assignment
        )

    def __repr__(self) -> str:
        return f"PosetMap({self.assignment!r})"

    @classmethod
    def identity(cls, p: Poset) -> "PosetMap":
        return cls(p, p, {x: x for x in p.elements}, check=False)

    def compose(self, other: "PosetMap") -> "PosetMap":
        """``other ∘ self``."""
        return PosetMap(self.source, other.target, {x: other(self(x)) for x in self.source.elements}, check=False)

    def preimage(self, y) -> list:
        return [x for x in self.source.elements if self.assignment[x] == y]

    def is_surjective(self) -> bool:
        return set(self.assignment.values()) >= set(self.target.elements)

    def is_injective(self) -> bool:
        return len(set(self.assignment.values())) == len(self.assignment)


def leq(p: Poset, a, b) -> bool:
    return p.leq(a, b)


def is_quotient(f: PosetMap) -> bool:
    """Surjective on elements and on covers of the target."""
    if not f.is_surjective():
        return False
    src = f.source
    for q, q2 in f.target.covers:
        pre2 = f.preimage(q2)
        if not any(src.leq(a, b) for a in f.preimage(q) for b in pre2):
            return False
    return True


def is_connected_quotient(f: PosetMap) -> bool:
    """A quotient whose point preimages are nonempty and connected."""
    if not is_quotient(f):
        return False
    return all(len(f.source.components(f.preimage(q))) == 1 for q in f.target.elements)


def connected_component_split(source: Poset, labels: Poset, f: Mapping | Callable) -> tuple[PosetMap, PosetMap]:
    """Factor a monotone ``f`` as a connected-quotient map followed by a discrete map.

    Components are indexed ``0, 1, ...`` in order of their least element.
    """
    fn = f if callable(f) else f.__getitem__
    whole = PosetMap(source, labels, {x: fn(x) for x in source.elements})
    comps = []
    for lab in labels.elements:
        comps.extend(source.components(whole.preimage(lab)))
    comps.sort(key=lambda c: source.index(c[0]))
    which = {x: k for k, comp in enumerate(comps) for x in comp}
    arrows = {(which[a], which[b]) for a, b in source.covers if which[a] != which[b]}
    strata = Poset.from_relation(range(len(comps)), arrows)
    q = PosetMap(source, strata, which)
    s = PosetMap(strata, labels, {k: fn(comp[0]) for k, comp in enumerate(comps)})
    return q, s


def is_discrete(f: PosetMap) -> bool:
    """No non-identity arrow inside any point preimage."""
    return all(f(a) != f(b) for a, b in f.source.covers)


def nerve(p: Poset, max_dim: int | None = None) -> list[list[tuple]]:
    """Nondegenerate simplices by dimension: strictly increasing chains."""
    out: list[list[tuple]] = []

    def extend(chain: tuple):
        d = len(chain) - 1
        while len(out) <= d:
            out.append([])
        out[d].append(chain)
        if max_dim is not None and d >= max_dim:
            return
        for b in p.up(chain[-1]):
            if b != chain[-1]:
                extend(chain + (b,))

    for a in p.elements:
        extend((a,))
    return out


def chain_counts(p: Poset) -> list[int]:
    """Number of chains with ``k+1`` elements, for each ``k``."""
    order = p.topological_order()
    # count[x][k]: chains of k+1 elements starting at x
    count: dict = {}
    for x in reversed(order):
        row = [1]
        for y in p.up(x):
            if y == x:
                continue
            for k, c in enumerate(count[y]):
                if k + 1 >= len(row):
                    row.append(0)
                row[k + 1] += c
        count[x] = row
    total: list[int] = []
    for row in count.values():
        for k, c in enumerate(row):
            if k >= len(total):
                total.append(0)
            total[k] += c
    return total


def euler_characteristic(p: Poset) -> int:
    return sum((-1) ** k * c for k, c in enumerate(chain_counts(p)))


def all_monotone_maps(source: Poset, target: Poset):
    """Every monotone map, by backtracking in a topological order (small inputs only)."""
    order = source.topological_order()
    assignment: dict = {}

    def rec(i):
        if i == len(order):
            yield dict(assignment)
            return
        x = order[i]
        for y in target.elements:
            if all(target.leq(assignment[w], y) for w in source.predecessors(x)):
                assignment[x] = y
                yield from rec(i + 1)
                del assignment[x]

    yield from rec(0)


def comparable_pairs(p: Poset) -> list[tuple]:
    return [(a, b) for a, b in combinations(p.elements, 2) if p.leq(a, b) or p.leq(b, a)]
