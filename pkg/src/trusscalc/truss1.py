"""Linear 1-trusses and their maps.

A 1-truss is stored as its dim word, e.g. ``"SRS"``: position ``i`` in the
word is position ``i`` in the frame order, ``S`` marks a singular (dim 0)
element and ``R`` a regular (dim 1) one.  Face arrows run from each regular
element to its neighbours.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

from .poset import Poset

SINGULAR = "S"
REGULAR = "R"

CLOSED = "closed"
OPEN = "open"
HALF_OPEN_CLOSED = "half_open_closed"
HALF_CLOSED_OPEN = "half_closed_open"
TRIVIAL_CLOSED = "trivial_closed"
TRIVIAL_OPEN = "trivial_open"


class TrussError(ValueError):
    """Raised for malformed 1-trusses or 1-truss maps."""


@dataclass(frozen=True)
class Truss1:
    word: str

    def __post_init__(self):
        w = self.word
        if not w:
            raise TrussError("a 1-truss needs at least one element")
        bad = set(w) - {SINGULAR, REGULAR}
        if bad:
            raise TrussError(f"dim word {w!r} has letters outside S/R: {sorted(bad)}")
        for i in range(len(w) - 1):
            if w[i] == w[i + 1]:
                raise TrussError(f"dim word {w!r} does not alternate at positions {i},{i + 1}")

    def __len__(self) -> int:
        return len(self.word)

    def __str__(self) -> str:
        return self.word

    @property
    def first_dim(self) -> int:
        return self.dim(0)

    def dim(self, i: int) -> int:
        return 0 if self.word[i] == SINGULAR else 1

    def is_singular(self, i: int) -> bool:
        return self.word[i] == SINGULAR

    def is_regular(self, i: int) -> bool:
        return self.word[i] == REGULAR

    @cached_property
    def singulars(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.word) if c == SINGULAR)

    @cached_property
    def regulars(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.word) if c == REGULAR)

    def leq(self, a: int, b: int) -> bool:
        """Face order: ``a ⊴ b`` iff equal, or ``a`` regular and ``b`` adjacent."""
        return a == b or (abs(a - b) == 1 and self.word[a] == REGULAR)

    def covers(self) -> list[tuple[int, int]]:
        out = []
        for i in range(len(self.word) - 1):
            out.append((i, i + 1) if self.word[i] == REGULAR else (i + 1, i))
        return out

    @cached_property
    def poset(self) -> Poset:
        return Poset(range(len(self.word)), self.covers(), check=False)

    @property
    def endpoint_type(self) -> str:
        return classify_endpoints(self)

    @property
    def is_closed(self) -> bool:
        return self.word[0] == SINGULAR and self.word[-1] == SINGULAR

    @property
    def is_open(self) -> bool:
        return self.word[0] == REGULAR and self.word[-1] == REGULAR


def make(dim_word: str) -> Truss1:
    return Truss1(dim_word)


def alternating(first: str, length: int) -> Truss1:
    other = REGULAR if first == SINGULAR else SINGULAR
    return Truss1("".join(first if i % 2 == 0 else other for i in range(length)))


def classify_endpoints(t: Truss1) -> str:
    w = t.word
    if len(w) == 1:
        return TRIVIAL_CLOSED if w == SINGULAR else TRIVIAL_OPEN
    match (w[0], w[-1]):
        case ("S", "S"):
            return CLOSED
        case ("R", "R"):
            return OPEN
        case ("R", "S"):
            return HALF_OPEN_CLOSED
        case _:
            return HALF_CLOSED_OPEN


def dualize(t: Truss1) -> Truss1:
    return Truss1(t.word.translate(str.maketrans("SR", "RS")))


class Truss1Map:
    """A map of 1-trusses, monotone in both the frame order and the face order."""

    __slots__ = ("source", "target", "assignment")

    def __init__(self, source: Truss1, target: Truss1, assignment: Sequence[int], check: bool = True):
        self.source = source
        self.target = target
        self.assignment = tuple(assignment)
        if check:
            problem = map_violation(source, target, self.assignment)
            if problem:
                raise TrussError(problem)

    def __call__(self, i: int) -> int:
        return self.assignment[i]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Truss1Map)
            and self.source == other.source
            and self.target == other.target
            and self.assignment == other.assignment
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.assignment))

    def __repr__(self) -> str:
        return f"Truss1Map({self.source.word}->{self.target.word}, {list(self.assignment)})"

    def compose(self, other: "Truss1Map") -> "Truss1Map":
        """``other ∘ self``."""
        return Truss1Map(self.source, other.target, [other(y) for y in self.assignment], check=False)

    @classmethod
    def identity(cls, t: Truss1) -> "Truss1Map":
        return cls(t, t, range(len(t)), check=False)


def map_violation(source: Truss1, target: Truss1, assignment: Sequence[int]) -> str | None:
    if len(assignment) != len(source):
        return f"assignment has {len(assignment)} entries for {len(source)} elements"
    for i, y in enumerate(assignment):
        if not 0 <= y < len(target):
            return f"element {i} is sent outside the target: {y}"
    for i in range(len(source) - 1):
        if assignment[i] > assignment[i + 1]:
            return f"not frame-monotone at {i},{i + 1}"
    for a, b in source.covers():
        if not target.leq(assignment[a], assignment[b]):
            return f"not face-monotone on the arrow {a}->{b}"
    return None


def classify_map(f: Truss1Map) -> dict[str, bool]:
    s, t, a = f.source, f.target, f.assignment
    singular = all(t.dim(a[i]) <= s.dim(i) for i in range(len(s)))
    regular = all(t.dim(a[i]) >= s.dim(i) for i in range(len(s)))
    injective = len(set(a)) == len(a)
    surjective = set(a) == set(range(len(t)))
    # endpoint type compares the dims of the two ends, so "SRS" and "S" agree
    same_type = s.word[0] == t.word[0] and s.word[-1] == t.word[-1]
    closed = s.is_closed and t.is_closed
    opened = s.is_open and t.is_open
    return {
        "singular": singular,
        "regular": regular,
        "balanced": singular and regular,
        "injective": injective,
        "surjective": surjective,
        "face": injective and closed and singular,
        "embedding": injective and opened and regular,
        "degeneracy": surjective and singular and same_type,
        "coarsening": surjective and regular and same_type,
    }


def all_maps(source: Truss1, target: Truss1) -> Iterable[Truss1Map]:
    """Every 1-truss map ``source -> target``, in lexicographic order of assignments."""
    n, m = len(source), len(target)
    current: list[int] = []

    def ok_step(i: int, y: int) -> bool:
        if i == 0:
            return True
        x = current[-1]
        if y < x:
            return False
        if source.is_regular(i - 1):
            return target.leq(x, y)
        return target.leq(y, x)

    def rec(i: int):
        if i == n:
            yield Truss1Map(source, target, current, check=False)
            return
        lo = current[-1] if current else 0
        for y in range(lo, m):
            if ok_step(i, y):
                current.append(y)
                yield from rec(i + 1)
                current.pop()

    yield from rec(0)


def coarsening_from_deletions(t: Truss1, deleted: Iterable[int]) -> tuple[Truss1, tuple[int, ...]]:
    """Merge each deleted interior singular with its two regular neighbours.

    Returns the coarser truss and the assignment of the coarsening map.
    """
    deleted = set(deleted)
    for s in deleted:
        if not (0 < s < len(t) - 1 and t.is_singular(s)):
            raise TrussError(f"position {s} is not an interior singular of {t.word}")
    assignment = []
    pos = -1
    for i in range(len(t)):
        if i - 1 in deleted or i in deleted:
            pass
        else:
            pos += 1
        assignment.append(pos)
    word = []
    for i in range(len(t)):
        if assignment[i] == len(word):
            word.append(t.word[i])
    return Truss1("".join(word)), tuple(assignment)


def deletable_singulars(t: Truss1) -> tuple[int, ...]:
    return tuple(i for i in t.singulars if 0 < i < len(t) - 1)
