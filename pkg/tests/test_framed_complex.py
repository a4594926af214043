import random
from itertools import combinations, permutations

import pytest

from trusscalc import framed_complex as fc
from trusscalc import trussn as tn
from trusscalc.framed_complex import FramingError, Proframe
from trusscalc.generators import random_block, random_tower
from trusscalc.poset import Poset, chain_counts, euler_characteristic

from . import oracles as O


def akin_oracle(v, w):
    return bool(set(range(*v)) & set(range(*w)))


def all_proframes(m: int, n: int):
    """Every tower of codimension <= 1 collapses of ``[m]`` through ``n`` levels down to a point."""
    out = []

    def rec(level: int, size: int, maps: list):
        if level == 0:
            if size == 1:
                out.append(Proframe(n, tuple(reversed(sizes_of(maps, m))), tuple([()] + list(reversed(maps)))))
            return
        rec(level - 1, size, maps + [tuple(range(size))])
        for k in range(size - 1):
            rec(level - 1, size - 1, maps + [tuple(range(k + 1)) + tuple(range(k, size - 1))])

    rec(n, m + 1, [])
    return out


def sizes_of(maps, m):
    sizes = [m + 1]
    for mp in maps:
        sizes.append(max(mp) + 1)
    return sizes


def triangle(spine, long):
    return fc.complex_from_simplices(
        max(spine + (long,)),
        [(0, 1, 2)],
        [(0, 1), (1, 2), (0, 2)],
        {(0, 1): spine[0], (1, 2): spine[1], (0, 2): long},
    )


def square():
    """Unit square split along the diagonal 0 -> 3; label 1 runs horizontally, label 2 vertically."""
    return fc.complex_from_simplices(
        2,
        [(0, 1, 3), (0, 2, 3)],
        [(0, 1), (1, 3), (0, 2), (2, 3), (0, 3)],
        {(0, 1): 1, (2, 3): 1, (1, 3): 2, (0, 2): 2, (0, 3): 1},
    )


def hollow_triangle(spine, long):
    c = triangle(spine, long)
    c.simplices.discard(frozenset((0, 1, 2)))
    return c


def closed_towers(count, seed, max_elements=12):
    rng = random.Random(seed)
    return [random_tower(rng, rng.randint(1, 3), max_elements, kind="closed", max_fiber=3) for _ in range(count)]


def test_akin_examples():
    assert fc.akin(2, (0, 1), (0, 2))
    assert not fc.akin(2, (0, 1), (1, 2))
    assert fc.akin(2, (1, 2), (1, 2))
    with pytest.raises(FramingError):
        fc.akin(2, (1, 1), (0, 2))


def test_akin_matches_unit_steps():
    for m in range(1, 6):
        vecs = list(combinations(range(m + 1), 2))
        for v in vecs:
            for w in vecs:
                assert fc.akin(m, v, w) == akin_oracle(v, w)


def test_restrict_examples():
    assert fc.restrict_frame((1, 3), (0, 1, 2)) == (1, 3)
    assert fc.restrict_frame((1, 3), (0, 2)) == (1,)
    assert fc.restrict_frame((2, 1), (0, 2)) == (1,)
    with pytest.raises(FramingError):
        fc.restrict_frame((1, 2), (2, 0))


def test_restrict_commutes_with_face_composition():
    for m in range(1, 5):
        for spine in permutations(range(1, m + 1)):
            for k in range(1, m + 2):
                for face in combinations(range(m + 1), k):
                    mid = fc.restrict_frame(spine, face)
                    for j in range(1, k + 1):
                        for sub in combinations(range(k), j):
                            direct = fc.restrict_frame(spine, [face[a] for a in sub])
                            assert fc.restrict_frame(mid, sub) == direct


def test_integrate_examples():
    p = fc.integrate_simplex_frame((1, 2))
    assert p.sizes == (1, 2, 3)
    # level 2 collapses the spine vector 1 -> 2, level 1 what is left
    assert p.maps[2] == (0, 1, 1)
    assert p.maps[1] == (0, 0)
    q = fc.integrate_simplex_frame((2,), 3)
    assert q.maps[3] == (0, 1) and q.maps[2] == (0, 0) and q.maps[1] == (0,)


def test_integrate_rejects_repeats():
    with pytest.raises(FramingError):
        fc.integrate_simplex_frame((1, 1))


@pytest.mark.parametrize("n", range(1, 5))
def test_integrate_gradient_bijection(n):
    for m in range(0, n + 1):
        spines = list(permutations(range(1, n + 1), m))
        images = [fc.integrate_simplex_frame(s, n) for s in spines]
        for s, p in zip(spines, images):
            assert fc.gradient_simplex_proframe(p) == s
        assert set(images) == set(all_proframes(m, n))
        if n == 3 and m == 3:
            assert len(spines) == 6


def test_validate_framing_examples():
    assert fc.validate_framing(triangle((1, 2), 1)).valid
    bad = fc.validate_framing(triangle((1, 2), 2))
    assert not bad.valid and set(bad.witness) == {0, 2}
    cyclic = fc.complex_from_simplices(2, [(0, 1, 2)], [(0, 1), (1, 2), (2, 0)], {(0, 1): 1, (1, 2): 2, (0, 2): 1})
    assert not fc.validate_framing(cyclic).valid


def test_conflicting_shared_edge():
    # the shared edge 0 -> 2 must be labeled 1 in the first triangle and 2 in the second
    c = fc.complex_from_simplices(
        3,
        [(0, 1, 2), (0, 2, 3)],
        [(0, 1), (1, 2), (0, 2), (2, 3), (0, 3)],
        {(0, 1): 1, (1, 2): 3, (0, 2): 2, (2, 3): 3, (0, 3): 2},
    )
    assert not fc.validate_framing(c).valid


@pytest.mark.parametrize("n", [2, 3])
def test_single_simplex_is_flat(n):
    for m in range(1, n + 1):
        for spine in permutations(range(1, n + 1), m):
            verts = list(range(m + 1))
            direction = list(combinations(verts, 2))
            labels = {(a, b): fc.edge_label(spine, a, b) for a, b in direction}
            c = fc.complex_from_simplices(n, [verts], direction, labels)
            assert fc.is_flat(c) == (True, None)


def test_square_is_flat():
    c = square()
    assert fc.validate_framing(c).valid
    t = fc.integrate_flat(c)
    assert [len(v) for v in t.vertices] == [1, 2, 4]
    assert t.maps[2] == {0: 0, 1: 1, 2: 0, 3: 1}


def test_hollow_triangle_not_flat():
    for spine, long in [((1, 2), 1), ((2, 1), 1)]:
        flat, why = fc.is_flat(hollow_triangle(spine, long))
        assert not flat
        assert "not linear" in why or "point" in why


def test_kx_of_interval():
    tower, c = fc.complex_translate(tn.single("SRS"))
    assert len(c.cells) == 3
    assert {c.labels[e] for e in c.edges()} == {1}
    assert chain_counts(c.cells) == [3, 2]


def test_kx_of_bigon():
    b = tn.bigon()
    tower, c = fc.complex_translate(b)
    assert len(c.cells) == 5
    assert euler_characteristic(c.cells) == 1
    assert euler_characteristic(fc.boundary(b)) == 0
    assert fc.validate_framing(c).valid
    assert fc.is_flat(c)[0]


def test_kt_of_kx_bigon():
    b = tn.bigon()
    tower, _ = fc.complex_translate(b)
    t, _ = fc.truss_translate(tower)
    assert t == b


def test_kx_rejects_open():
    with pytest.raises(FramingError):
        fc.complex_translate(tn.single("R"))


def test_kt_needs_posets():
    tower, _ = fc.complex_translate(tn.bigon())
    bare = fc.ProframedTower(tower.vertices, tower.maps, tower.simplices, tower.before)
    with pytest.raises(FramingError):
        fc.truss_translate(bare)


@pytest.mark.parametrize("t", closed_towers(30, 61))
def test_translation_roundtrips(t):
    tower, c = fc.complex_translate(t)
    back, ren = fc.truss_translate(tower)
    assert back == t
    again, _ = fc.complex_translate(back)
    assert fc.same_proframed(fc.relabel_proframed(tower, ren), again)
    assert fc.validate_framing(c).valid
    assert fc.tower_from_complex(c) == t


@pytest.mark.parametrize("seed", range(10))
def test_translation_survives_renaming(seed):
    rng = random.Random(700 + seed)
    t = random_tower(rng, 2, 12, kind="closed", max_fiber=3)
    tower, _ = fc.complex_translate(t)
    names = []
    for vs in tower.vertices:
        fresh = [f"v{k}" for k in range(len(vs))]
        rng.shuffle(fresh)
        names.append(dict(zip(vs, fresh)))
    back, _ = fc.truss_translate(fc.relabel_proframed(tower, names))
    assert back == t


def test_shelling_bigon():
    r = fc.shell_boundary(tn.bigon())
    assert len(r.facets) == 4 and r.ok
    assert r.euler == 0 and r.thin and r.pure
    assert O.shelling_ok(r.facets)


def test_shelling_interval():
    r = fc.shell_boundary(tn.single("SRS"))
    assert len(r.facets) == 2 and r.euler == 2 and r.block_dim == 1


@pytest.mark.parametrize("seed", range(20))
def test_shelling_random_blocks(seed):
    rng = random.Random(800 + seed)
    blk = random_block(rng, rng.randint(1, 3), 20)
    r = fc.shell_boundary(blk)
    assert r.ok
    assert O.shelling_ok(r.facets)
    assert r.euler == 1 + (-1) ** (r.block_dim - 1)
    chains = {frozenset(ch) for ch in fc.maximal_chains(fc.boundary(blk))}
    assert {frozenset(f) for f in r.facets} == chains


def test_shelling_rejects_non_block():
    t = tn.build_tower([({(): "SRSRS"}, {})])
    with pytest.raises(FramingError):
        fc.shell_boundary(t)


def test_is_shelling_and_thin_examples():
    assert fc.is_shelling([(0, 1), (1, 2), (2, 0)])
    assert not fc.is_shelling([(0, 1), (2, 3), (1, 2)])
    assert fc.is_thin(tn.bigon().top)
    assert fc.is_thin(tn.single("SRSRS").top)
    tripod = Poset(["x", "a", "b", "c"], [("x", "a"), ("x", "b"), ("x", "c")])
    assert not fc.is_thin(tripod)
