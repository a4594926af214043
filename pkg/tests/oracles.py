"""Definition-unfolding oracles, written without the library's validators."""

from __future__ import annotations

from itertools import product

import networkx as nx


def word_leq(word: str, a: int, b: int) -> bool:
    return a == b or (abs(a - b) == 1 and word[a] == "R")


def bordism_ok(dom: str, cod: str, rel: set[tuple[int, int]]) -> bool:
    """Nonempty, profunctorial, bifunctional and bimonotone."""
    n, m = len(dom), len(cod)
    if not rel:
        return False
    for a, b in rel:
        for a2 in range(n):
            if word_leq(dom, a2, a) and (a2, b) not in rel:
                return False
        for b2 in range(m):
            if word_leq(cod, b, b2) and (a, b2) not in rel:
                return False
    for a in range(n):
        if dom[a] == "S" and sum(1 for b in range(m) if cod[b] == "S" and (a, b) in rel) != 1:
            return False
    for b in range(m):
        if cod[b] == "R" and sum(1 for a in range(n) if dom[a] == "R" and (a, b) in rel) != 1:
            return False
    for (x, y2), (x2, y) in product(rel, rel):
        if x < x2 and y < y2:
            return False
    return True


def all_bordisms_brute(dom: str, cod: str) -> set[frozenset]:
    """Every relation passing :func:`bordism_ok`, by row-wise search."""
    n, m = len(dom), len(cod)
    found = set()

    def rec(i: int, rel: set):
        if i == n:
            if bordism_ok(dom, cod, rel):
                found.add(frozenset(rel))
            return
        for bits in range(1 << m):
            row = {(i, b) for b in range(m) if bits >> b & 1}
            if dom[i] == "S" and sum(1 for _, b in row if cod[b] == "S") != 1:
                continue
            # bimonotone against earlier rows: nothing earlier may sit strictly to the right
            lo = min((b for _, b in row), default=m)
            if any(b > lo for a, b in rel):
                continue
            rec(i + 1, rel | row)

    rec(0, set())
    return found


def alternating_words(max_len: int) -> list[str]:
    return ["".join("SR"[(i + k) % 2] for i in range(n)) for n in range(1, max_len + 1) for k in (0, 1)]


def digraph(elements, covers) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(elements)
    g.add_edges_from(covers)
    return g


def reachability(elements, covers) -> set[tuple]:
    g = nx.transitive_closure_dag(digraph(elements, covers))
    return set(g.edges()) | {(x, x) for x in elements}


def covering_relation(elements, relation: set[tuple]) -> set[tuple]:
    g = nx.transitive_reduction(digraph(elements, {(a, b) for a, b in relation if a != b}))
    return set(g.edges())


def undirected_components(elements, covers, subset) -> int:
    g = nx.Graph()
    g.add_nodes_from(subset)
    g.add_edges_from((a, b) for a, b in covers if a in subset and b in subset)
    return nx.number_connected_components(g)


def monotone_maps(src_elems, src_rel, tgt_elems, tgt_rel):
    for values in product(tgt_elems, repeat=len(src_elems)):
        f = dict(zip(src_elems, values))
        if all((f[a], f[b]) in tgt_rel for a, b in src_rel):
            yield f


def is_quotient_brute(src_elems, src_rel, tgt_elems, tgt_covers, f) -> bool:
    if set(f.values()) != set(tgt_elems):
        return False
    return all(any(f[a] == x and f[b] == y for a, b in src_rel) for x, y in tgt_covers)


def chain_count_brute(elements, relation) -> list[int]:
    """Strictly increasing chains by length, by breadth-first extension."""
    strict = {(a, b) for a, b in relation if a != b}
    layer = [(x,) for x in elements]
    counts = []
    while layer:
        counts.append(len(layer))
        layer = [c + (y,) for c in layer for y in elements if (c[-1], y) in strict]
    return counts


def shelling_ok(facets) -> bool:
    sets = [frozenset(f) for f in facets]
    for k in range(1, len(sets)):
        inter = [sets[k] & s for s in sets[:k]]
        tops = [s for s in inter if not any(s < u for u in inter)]
        if any(len(s) != len(sets[k]) - 1 for s in tops):
            return False
    return True
