"""Bordisms of 1-trusses as validated boolean relations.

Rows are stored as bitmasks: bit ``b`` of ``rows[a]`` is set iff domain
element ``a`` is related to codomain element ``b``.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations_with_replacement

from .truss1 import Truss1, dualize as dualize_truss


@dataclass(frozen=True)
class Violation:
    clause: str
    witness: tuple
    detail: str

    def __str__(self) -> str:
        return f"{self.clause} at {self.witness}: {self.detail}"


class BordismError(ValueError):
    """A relation failed one or more bordism conditions."""

    def __init__(self, violations: Sequence[Violation] | str):
        if isinstance(violations, str):
            self.violations: list[Violation] = []
            super().__init__(violations)
        else:
            self.violations = list(violations)
            super().__init__("; ".join(str(v) for v in self.violations))


class Bordism1:
    """A bordism ``domain ⇸ codomain``.  Construct through :func:`validate`."""

    __slots__ = ("domain", "codomain", "rows", "__dict__")

    def __init__(self, domain: Truss1, codomain: Truss1, rows: Sequence[int]):
        self.domain = domain
        self.codomain = codomain
        self.rows = tuple(rows)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Bordism1)
            and self.domain == other.domain
            and self.codomain == other.codomain
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.domain, self.codomain, self.rows))

    def __repr__(self) -> str:
        return f"Bordism1({self.domain.word}⇸{self.codomain.word}, {sorted(self.pairs)})"

    def related(self, a: int, b: int) -> bool:
        return bool((self.rows[a] >> b) & 1)

    @cached_property
    def pairs(self) -> frozenset[tuple[int, int]]:
        return frozenset((a, b) for a in range(len(self.domain)) for b in range(len(self.codomain)) if self.related(a, b))

    @property
    def matrix(self) -> tuple[tuple[bool, ...], ...]:
        return tuple(tuple(self.related(a, b) for b in range(len(self.codomain))) for a in range(len(self.domain)))

    def image(self, a: int) -> list[int]:
        return [b for b in range(len(self.codomain)) if self.related(a, b)]

    def preimage(self, b: int) -> list[int]:
        return [a for a in range(len(self.domain)) if self.related(a, b)]

    @cached_property
    def singular_function(self) -> dict[int, int]:
        return {a: next(b for b in self.image(a) if self.codomain.is_singular(b)) for a in self.domain.singulars}

    @cached_property
    def regular_function(self) -> dict[int, int]:
        return {b: next(a for a in self.preimage(b) if self.domain.is_regular(a)) for b in self.codomain.regulars}

    def is_identity(self) -> bool:
        return self.domain == self.codomain and self == identity(self.domain)


def _rows_from(domain: Truss1, codomain: Truss1, rel) -> list[int]:
    n, m = len(domain), len(codomain)
    rows = [0] * n
    if isinstance(rel, (set, frozenset)):
        for a, b in rel:
            if not (0 <= a < n and 0 <= b < m):
                raise BordismError(f"pair ({a}, {b}) is outside {domain.word} × {codomain.word}")
            rows[a] |= 1 << b
        return rows
    rel = [list(r) for r in rel]
    if len(rel) != n or any(len(r) != m for r in rel):
        raise BordismError(f"matrix shape does not match {n}×{m}")
    for a, row in enumerate(rel):
        for b, v in enumerate(row):
            if v:
                rows[a] |= 1 << b
    return rows


def violations(domain: Truss1, codomain: Truss1, rows: Sequence[int]) -> list[Violation]:
    """Every failed bordism condition, each with a small witness."""
    n, m = len(domain), len(codomain)
    rel = lambda a, b: (rows[a] >> b) & 1
    out: list[Violation] = []
    if not any(rows):
        out.append(Violation("nonempty", (), "no pair is related"))
    for a in range(n):
        for b in range(m):
            if not rel(a, b):
                continue
            for a2 in (a - 1, a + 1):
                if 0 <= a2 < n and domain.leq(a2, a) and not rel(a2, b):
                    out.append(Violation("profunctorial", (a2, b), f"{a2} ⊴ {a} and ({a},{b}) related but ({a2},{b}) not"))
            for b2 in (b - 1, b + 1):
                if 0 <= b2 < m and codomain.leq(b, b2) and not rel(a, b2):
                    out.append(Violation("profunctorial", (a, b2), f"{b} ⊴ {b2} and ({a},{b}) related but ({a},{b2}) not"))
    for a in domain.singulars:
        hits = [b for b in codomain.singulars if rel(a, b)]
        if len(hits) != 1:
            out.append(Violation("bifunctional", (a,), f"singular {a} relates to singulars {hits}"))
    for b in codomain.regulars:
        hits = [a for a in domain.regulars if rel(a, b)]
        if len(hits) != 1:
            out.append(Violation("bifunctional", (b,), f"regular {b} is related from regulars {hits}"))
    for x in range(n):
        for x2 in range(x + 1, n):
            for y in range(m):
                if not rel(x2, y):
                    continue
                above = rows[x] >> (y + 1)
                if above:
                    y2 = y + 1 + ((above & -above).bit_length() - 1)
                    out.append(Violation("bimonotone", (x, x2, y, y2), f"({x},{y2}) and ({x2},{y}) cross"))
                    break
    return out


def validate(domain: Truss1, codomain: Truss1, rel) -> Bordism1:
    """Check all bordism conditions; raise :class:`BordismError` listing every failure.

    ``rel`` is a boolean matrix (rows indexed by domain) or a set of related pairs.
    """
    rows = _rows_from(domain, codomain, rel)
    bad = violations(domain, codomain, rows)
    if bad:
        raise BordismError(bad)
    return Bordism1(domain, codomain, rows)


def from_pairs(domain: Truss1, codomain: Truss1, pairs: Iterable[tuple[int, int]]) -> Bordism1:
    return validate(domain, codomain, set(pairs))


def from_rows(domain: Truss1, codomain: Truss1, rows: Sequence[int]) -> Bordism1:
    bad = violations(domain, codomain, rows)
    if bad:
        raise BordismError(bad)
    return Bordism1(domain, codomain, rows)


def is_valid(domain: Truss1, codomain: Truss1, rows: Sequence[int]) -> bool:
    return not violations(domain, codomain, rows)


def identity(t: Truss1) -> Bordism1:
    rows = [0] * len(t)
    for a in range(len(t)):
        for b in range(max(0, a - 1), min(len(t), a + 2)):
            if t.leq(a, b):
                rows[a] |= 1 << b
    return Bordism1(t, t, rows)


TERMINAL = Truss1("S")
INITIAL = Truss1("R")


def terminal(t: Truss1) -> Bordism1:
    """The unique bordism ``t ⇸ "S"``."""
    return Bordism1(t, TERMINAL, [1] * len(t))


def initial(t: Truss1) -> Bordism1:
    """The unique bordism ``"R" ⇸ t``."""
    return Bordism1(INITIAL, t, [(1 << len(t)) - 1])


def compose(r1: Bordism1, r2: Bordism1) -> Bordism1:
    """Relational product: ``x`` relates to ``z`` iff some ``y`` links them."""
    if r1.codomain != r2.domain:
        raise BordismError(f"cannot compose {r1.domain.word}⇸{r1.codomain.word} with {r2.domain.word}⇸{r2.codomain.word}")
    rows = []
    for row in r1.rows:
        acc = 0
        while row:
            low = row & -row
            acc |= r2.rows[low.bit_length() - 1]
            row ^= low
        rows.append(acc)
    return from_rows(r1.domain, r2.codomain, rows)


def compose_all(bordisms: Sequence[Bordism1], start: Truss1 | None = None) -> Bordism1:
    if not bordisms:
        if start is None:
            raise BordismError("empty composite needs a truss")
        return identity(start)
    out = bordisms[0]
    for r in bordisms[1:]:
        out = compose(out, r)
    return out


def dualize(r: Bordism1) -> Bordism1:
    n, m = len(r.domain), len(r.codomain)
    rows = [0] * m
    for a in range(n):
        for b in range(m):
            if r.related(a, b):
                rows[b] |= 1 << a
    return Bordism1(dualize_truss(r.codomain), dualize_truss(r.domain), rows)


def boundary_functions(r: Bordism1) -> tuple[dict[int, int], dict[int, int]]:
    """``(singular function, regular function)`` of a valid bordism."""
    return dict(r.singular_function), dict(r.regular_function)


def _check_singular_function(domain: Truss1, codomain: Truss1, f: Mapping[int, int]) -> None:
    if set(f) != set(domain.singulars):
        raise BordismError(f"singular function must be defined exactly on {list(domain.singulars)}, got {sorted(f)}")
    for a, b in f.items():
        if b not in codomain.singulars:
            raise BordismError(f"{a} is sent to {b}, which is not singular in {codomain.word}")
    keys = sorted(f)
    for a, a2 in zip(keys, keys[1:]):
        if f[a] > f[a2]:
            raise BordismError(f"singular function is not monotone: {a}->{f[a]} but {a2}->{f[a2]}")
    last, clast = len(domain) - 1, len(codomain) - 1
    if domain.is_singular(0) and f[0] != 0:
        raise BordismError(f"lower singular endpoint must go to 0, not {f[0]}")
    if domain.is_singular(last) and f[last] != clast:
        raise BordismError(f"upper singular endpoint must go to {clast}, not {f[last]}")


def from_singular_function(domain: Truss1, codomain: Truss1, f: Mapping[int, int]) -> Bordism1:
    """The unique bordism with singular function ``f``."""
    f = dict(f)
    _check_singular_function(domain, codomain, f)
    n, m = len(domain), len(codomain)
    rows = [0] * n
    for a in range(n):
        if domain.is_singular(a):
            rows[a] = 1 << f[a]
            continue
        lo = f[a - 1] if a - 1 >= 0 else 0
        hi = f[a + 1] if a + 1 < n else m - 1
        for b in range(lo, hi + 1):
            rows[a] |= 1 << b
    return from_rows(domain, codomain, rows)


def from_regular_function(domain: Truss1, codomain: Truss1, g: Mapping[int, int]) -> Bordism1:
    """The unique bordism whose regular function ``reg(codomain) -> reg(domain)`` is ``g``."""
    g = dict(g)
    if set(g) != set(codomain.regulars):
        raise BordismError(f"regular function must be defined exactly on {list(codomain.regulars)}, got {sorted(g)}")
    for b, a in g.items():
        if a not in domain.regulars:
            raise BordismError(f"{b} is sent to {a}, which is not regular in {domain.word}")
    keys = sorted(g)
    for b, b2 in zip(keys, keys[1:]):
        if g[b] > g[b2]:
            raise BordismError(f"regular function is not monotone: {b}->{g[b]} but {b2}->{g[b2]}")
    n, m = len(domain), len(codomain)
    if codomain.is_regular(0) and g[0] != 0:
        raise BordismError(f"lower regular endpoint must come from 0, not {g[0]}")
    if codomain.is_regular(m - 1) and g[m - 1] != n - 1:
        raise BordismError(f"upper regular endpoint must come from {n - 1}, not {g[m - 1]}")
    rows = [0] * n
    for b in range(m):
        if codomain.is_regular(b):
            rows[g[b]] |= 1 << b
            continue
        lo = g[b - 1] if b - 1 >= 0 else 0
        hi = g[b + 1] if b + 1 < m else n - 1
        for a in range(lo, hi + 1):
            rows[a] |= 1 << b
    return from_rows(domain, codomain, rows)


def _monotone_functions(keys: Sequence[int], values: Sequence[int], fixed: Mapping[int, int]):
    for combo in combinations_with_replacement(values, len(keys)):
        f = dict(zip(keys, combo))
        if all(f[k] == v for k, v in fixed.items()):
            yield f


def singular_functions(domain: Truss1, codomain: Truss1):
    """Monotone endpoint-preserving maps ``sing(domain) -> sing(codomain)``."""
    fixed = {}
    n, m = len(domain), len(codomain)
    if domain.is_singular(0):
        if not codomain.is_singular(0):
            return
        fixed[0] = 0
    if domain.is_singular(n - 1):
        if not codomain.is_singular(m - 1) or fixed.get(n - 1, m - 1) != m - 1:
            return
        fixed[n - 1] = m - 1
    yield from _monotone_functions(domain.singulars, codomain.singulars, fixed)


def regular_functions(domain: Truss1, codomain: Truss1):
    """Monotone endpoint-preserving maps ``reg(codomain) -> reg(domain)``."""
    fixed = {}
    n, m = len(domain), len(codomain)
    if codomain.is_regular(0):
        if not domain.is_regular(0):
            return
        fixed[0] = 0
    if codomain.is_regular(m - 1):
        if not domain.is_regular(n - 1) or fixed.get(m - 1, n - 1) != n - 1:
            return
        fixed[m - 1] = n - 1
    yield from _monotone_functions(codomain.regulars, domain.regulars, fixed)


def all_bordisms(domain: Truss1, codomain: Truss1) -> list[Bordism1]:
    """Every bordism ``domain ⇸ codomain``, via singular and regular determination."""
    found: dict[tuple, Bordism1] = {}
    for f in singular_functions(domain, codomain):
        try:
            r = from_singular_function(domain, codomain, f)
        except BordismError:
            continue
        found[r.rows] = r
    for g in regular_functions(domain, codomain):
        try:
            r = from_regular_function(domain, codomain, g)
        except BordismError:
            continue
        found[r.rows] = r
    return [found[k] for k in sorted(found)]
