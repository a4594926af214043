import random
from itertools import product

import pytest

from trusscalc.poset import (
    Poset,
    PosetError,
    PosetMap,
    all_monotone_maps,
    chain_counts,
    connected_component_split,
    euler_characteristic,
    is_connected_quotient,
    is_discrete,
    is_quotient,
    leq,
    nerve,
)
from trusscalc.truss1 import Truss1
from trusscalc.trussn import bigon

from . import oracles as O


def chain3():
    return Poset.chain(2)


def test_leq_examples():
    c = chain3()
    assert leq(c, 0, 2)
    assert leq(c, 1, 1)
    anti = Poset(["x", "y"], [])
    assert not leq(anti, "x", "y")


def test_leq_unknown_element():
    with pytest.raises(PosetError):
        chain3().leq(0, 7)


def test_cyclic_and_redundant_covers_rejected():
    with pytest.raises(PosetError):
        Poset([0, 1], [(0, 1), (1, 0)])
    with pytest.raises(PosetError):
        Poset([0, 1, 2], [(0, 1), (1, 2), (0, 2)])


@pytest.mark.parametrize("seed", range(30))
def test_leq_matches_transitive_closure(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 9)
    order = list(range(n))
    rng.shuffle(order)
    arrows = {(order[i], order[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.3}
    p = Poset.from_relation(range(n), arrows)
    closure = O.reachability(range(n), arrows)
    assert p.relation() == closure
    assert set(p.covers) == O.covering_relation(range(n), closure)


def test_quotient_examples():
    c = Poset.chain(1)
    assert is_quotient(PosetMap.identity(c))
    assert is_quotient(PosetMap(c, Poset.point(0), {0: 0, 1: 0}))
    anti = Poset(["x", "y"], [])
    assert not is_quotient(PosetMap(anti, c, {"x": 0, "y": 1}))


def test_connected_quotient_examples():
    c3, c2 = Poset.chain(2), Poset.chain(1)
    assert is_connected_quotient(PosetMap.identity(c3))
    assert is_connected_quotient(PosetMap(c3, c2, {0: 0, 1: 0, 2: 1}))
    # a chain cannot send its endpoints together without its middle, so use the fence 0 <- 1 -> 2
    fence = Truss1("SRS").poset
    two = Poset.from_relation(["m", "e"], [("m", "e")])
    f = PosetMap(fence, two, {0: "e", 1: "m", 2: "e"})
    assert is_quotient(f)
    assert not is_connected_quotient(f)


def _small_posets(max_n):
    for n in range(1, max_n + 1):
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        for bits in range(1 << len(pairs)):
            arrows = [pairs[k] for k in range(len(pairs)) if bits >> k & 1]
            yield Poset.from_relation(range(n), arrows)


def test_quotient_predicates_match_definitions_exhaustively():
    seen = set()
    posets = []
    for p in _small_posets(4):
        key = (len(p), frozenset(p.covers))
        if key not in seen:
            seen.add(key)
            posets.append(p)
    checked = 0
    for src in posets:
        for tgt in posets:
            if len(tgt) > len(src) or len(src) > 3 and len(tgt) > 2:
                continue
            src_rel, tgt_rel = src.relation(), tgt.relation()
            for f in O.monotone_maps(list(src.elements), src_rel, list(tgt.elements), tgt_rel):
                m = PosetMap(src, tgt, f)
                q = O.is_quotient_brute(src.elements, src_rel, tgt.elements, tgt.covers, f)
                cq = q and all(
                    O.undirected_components(src.elements, src.covers, [x for x in src.elements if f[x] == y]) == 1
                    for y in tgt.elements
                )
                assert is_quotient(m) == q
                assert is_connected_quotient(m) == cq
                if cq:
                    assert q
                checked += 1
    assert checked > 1000


def test_component_split_antichain():
    anti = Poset(range(4), [])
    q, s = connected_component_split(anti, Poset.point("*"), lambda x: "*")
    assert len(set(q.assignment.values())) == 4
    assert is_discrete(s)


def test_component_split_circle():
    # boundary of a square as a poset: four vertices, four edges; label two opposite edges alike
    circle = Poset(
        ["e0", "e1", "e2", "e3", "v0", "v1", "v2", "v3"],
        [("e0", "v0"), ("e0", "v1"), ("e1", "v1"), ("e1", "v2"), ("e2", "v2"), ("e2", "v3"), ("e3", "v3"), ("e3", "v0")],
    )
    labels = Poset.from_relation(["arc", "pt"], [("arc", "pt")])
    f = {"e0": "arc", "e2": "arc", "e1": "pt", "e3": "pt", "v0": "pt", "v1": "pt", "v2": "pt", "v3": "pt"}
    q, s = connected_component_split(circle, labels, f)
    arcs = {q.assignment[x] for x in ("e0", "e2")}
    assert len(arcs) == 2
    assert O.undirected_components(circle.elements, circle.covers, ["e0", "e2"]) == len(arcs)
    assert is_connected_quotient(q) and is_discrete(s)
    assert all(s.assignment[q.assignment[x]] == f[x] for x in circle.elements)


def test_component_split_of_connected_quotient_is_trivial():
    c3, c2 = Poset.chain(2), Poset.chain(1)
    f = {0: 0, 1: 0, 2: 1}
    q, s = connected_component_split(c3, c2, f)
    assert len(q.target) == 2 and s.is_injective()


def test_component_split_rejects_nonmonotone():
    with pytest.raises(PosetError):
        connected_component_split(Poset.chain(1), Poset.chain(1), {0: 1, 1: 0})


def test_nerve_examples():
    assert nerve(Poset.point(0)) == [[(0,)]]
    assert sorted(map(len, nerve(Poset.chain(1)))) == [1, 2]
    srs = Truss1("SRS").poset
    counts = chain_counts(srs)
    assert counts == [3, 2]
    assert euler_characteristic(srs) == 1


def test_euler_examples():
    assert euler_characteristic(Poset.point(0)) == 1
    assert euler_characteristic(Poset.chain(2)) == 1
    b = bigon()
    boundary = b.top.subposet(set(b.top.elements) - {b.initial})
    assert chain_counts(boundary) == [4, 4]
    assert euler_characteristic(boundary) == 0


@pytest.mark.parametrize("seed", range(10))
def test_chain_counts_match_brute_force(seed):
    rng = random.Random(100 + seed)
    n = rng.randint(1, 7)
    arrows = {(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.4}
    p = Poset.from_relation(range(n), arrows)
    assert chain_counts(p) == O.chain_count_brute(range(n), p.relation())
    assert [len(d) for d in nerve(p)] == chain_counts(p)


def test_leq_is_a_partial_order():
    rng = random.Random(7)
    for _ in range(10):
        n = rng.randint(1, 8)
        arrows = {(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.4}
        p = Poset.from_relation(range(n), arrows)
        for a, b, c in product(range(n), repeat=3):
            assert p.leq(a, a)
            if p.leq(a, b) and p.leq(b, a):
                assert a == b
            if p.leq(a, b) and p.leq(b, c):
                assert p.leq(a, c)


def test_all_monotone_maps_matches_brute_force():
    c2, c3 = Poset.chain(1), Poset.chain(2)
    lib = {tuple(sorted(m.items())) for m in all_monotone_maps(c3, c2)}
    brute = {tuple(sorted(f.items())) for f in O.monotone_maps([0, 1, 2], c3.relation(), [0, 1], c2.relation())}
    assert lib == brute and len(lib) == 4
