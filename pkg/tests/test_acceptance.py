"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline;
they are also repeated in the terminal summary of any pytest run.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction
from itertools import product
from pathlib import Path

from click.testing import CliRunner

from trusscalc import bordism as bd
from trusscalc import bundle1 as b1
from trusscalc import framed_complex as fc
from trusscalc import io
from trusscalc import scaffold as sc
from trusscalc import stratified as st
from trusscalc import trussn as tn
from trusscalc.cli import main
from trusscalc.generators import random_bundle, random_chain_bundle, random_labeling, random_poset, random_tower
from trusscalc.truss1 import Truss1
from trusscalc.trussn import TowerMap

from . import oracles as O
from .test_scaffold import sections_oracle, spacers_oracle

# pinned bounds
SCAFFOLD_SECONDS = 10.0
CONFLUENCE_SECONDS = 60.0
MIN_CORPUS = 50

LINES: dict[int, str] = {}


def report(k: int, title: str, failures: list, detail: str) -> None:
    verdict = "PASS" if not failures else "FAIL"
    line = f"criterion {k:2d} {title}: {verdict} ({detail})"
    if failures:
        line += f" first failure: {failures[0]}"
    LINES[k] = line
    print(line)
    assert not failures, line


def map_key(f: TowerMap) -> tuple:
    return tuple(frozenset(m.items()) for m in f.maps)


def test_criterion_01_scaffold_laws():
    rng = random.Random(1001)
    bundles = [random_chain_bundle(rng, rng.choice([1, 2, 3]), 7) for _ in range(200)]
    failures = []
    elapsed = 0.0
    for n, b in enumerate(bundles):
        top = len(b.total) - len(b.base)
        start = time.perf_counter()
        by_succ = sc.sections_in_order(b)
        by_brute = sc.sections_in_order(b, method="brute")
        spacers = sc.spacers_with_boundaries(b)
        elapsed += time.perf_counter() - start
        if sorted(s.norm for s in by_succ) != list(range(top + 1)):
            failures.append((n, "section norms"))
        if sorted(sp.norm for sp, _, _ in spacers) != [Fraction(2 * k + 1, 2) for k in range(top)]:
            failures.append((n, "spacer norms"))
        if by_succ != by_brute or sorted(s.vertices for s in by_succ) != sorted(sections_oracle(b)):
            failures.append((n, "successor chain"))
        if {sp.vertices for sp, _, _ in spacers} != spacers_oracle(b):
            failures.append((n, "spacers"))
    if elapsed >= SCAFFOLD_SECONDS:
        failures.append(("runtime", round(elapsed, 2)))
    report(1, "scaffold laws", failures, f"200 bundles, {elapsed:.2f}s < {SCAFFOLD_SECONDS:.0f}s")


def test_criterion_02_bordism_algebra():
    words = O.alternating_words(5)
    homs: dict[tuple, list] = {}
    failures = []
    for x, y in product(words, repeat=2):
        a, b = Truss1(x), Truss1(y)
        by_sing = {bd.from_singular_function(a, b, f).pairs for f in bd.singular_functions(a, b) if _sing_ok(a, b, f)}
        by_reg = {bd.from_regular_function(a, b, g).pairs for g in bd.regular_functions(a, b) if _reg_ok(a, b, g)}
        found = bd.all_bordisms(a, b)
        if {r.pairs for r in found} != by_sing | by_reg or {frozenset(r.pairs) for r in found} != O.all_bordisms_brute(x, y):
            failures.append(("generation", x, y))
        homs[(x, y)] = found
        for r in found:
            failures.extend(_bordism_laws(r))
    total = sum(len(v) for v in homs.values())
    triples = 0
    for (x, y), rs in homs.items():
        ident = bd.identity(Truss1(x))
        for r in rs:
            if bd.compose(ident, r) != r or bd.compose(r, bd.identity(Truss1(y))) != r:
                failures.append(("unit", x, y))
            if bd.dualize(bd.dualize(r)) != r:
                failures.append(("involution", x, y))
            for z in words:
                for s in homs[(y, z)]:
                    if bd.dualize(bd.compose(r, s)) != bd.compose(bd.dualize(s), bd.dualize(r)):
                        failures.append(("contravariance", x, y, z))
                    for w in words:
                        for u in homs[(z, w)]:
                            triples += 1
                            if bd.compose(bd.compose(r, s), u) != bd.compose(r, bd.compose(s, u)):
                                failures.append(("associativity", x, y, z, w))
    report(2, "bordism algebra", failures, f"{total} bordisms, {triples} composable triples")


def _sing_ok(a, b, f) -> bool:
    try:
        bd.from_singular_function(a, b, f)
    except bd.BordismError:
        return False
    return True


def _reg_ok(a, b, g) -> bool:
    try:
        bd.from_regular_function(a, b, g)
    except bd.BordismError:
        return False
    return True


def _bordism_laws(r) -> list:
    a, b = r.domain, r.codomain
    out = []
    tag = (a.word, b.word, tuple(sorted(r.pairs)))
    if not O.bordism_ok(a.word, b.word, set(r.pairs)):
        out.append(("valid",) + tag)
    if any(b.dim(q) > a.dim(p) for p, q in r.pairs):
        out.append(("dimension",) + tag)
    sf, rf = bd.boundary_functions(r)
    n, m = len(a), len(b)
    if a.is_singular(0) and sf[0] != 0 or a.is_singular(n - 1) and sf[n - 1] != m - 1:
        out.append(("singular endpoints",) + tag)
    if b.is_regular(0) and rf[0] != 0 or b.is_regular(m - 1) and rf[m - 1] != n - 1:
        out.append(("regular endpoints",) + tag)
    if {p for p, _ in r.pairs} != set(range(n)) or {q for _, q in r.pairs} != set(range(m)):
        out.append(("matching",) + tag)
    return out


def test_criterion_03_classification():
    rng = random.Random(1003)
    failures = []
    for n in range(100):
        base = random_poset(rng, rng.randint(1, 6))
        b = random_bundle(rng, base, max_fiber=5)
        tb = b.total_bundle()
        fibers, bordisms = b1.classify(b1.totalize(base, b.fibers, b.bordisms).total_bundle())
        if fibers != b.fibers or bordisms != b.bordisms:
            failures.append((n, "classify after totalize"))
        fibers, bordisms = b1.classify(tb)
        if b1.totalize(base, fibers, bordisms).total_bundle() != tb:
            failures.append((n, "totalize after classify"))
    report(3, "classification/totalization", failures, "100 bundles over posets with <= 6 elements")


def brute_mediating(t, c, inc, ret) -> int:
    """Surjective endomaps of the compactification fixing the inclusion and the retraction, from the full hom-set."""
    count = 0
    for h in tn.enumerate_maps(c, c):
        if not h.classes["surjective"]:
            continue
        if inc.compose(h).maps != inc.maps or h.compose(ret).maps != ret.maps:
            continue
        count += 1
    return count


def test_criterion_04_compactification():
    rng = random.Random(1004)
    failures = []
    for n in range(100):
        t = random_tower(rng, rng.randint(1, 2), 15, kind="any", max_fiber=4)
        c, inc, ret = tn.compactify(t)
        if not c.is_closed:
            failures.append((n, "not closed"))
        if not inc.compose(ret).is_identity():
            failures.append((n, "retraction"))
        if not tn.universal_property_check(t, c, inc, ret) or brute_mediating(t, c, inc, ret) != 1:
            failures.append((n, "universal property"))
    c, inc, ret = tn.compactify(tn.single("R"))
    if c.fiber(1, ()).word != "SRS" or inc.maps[1] != {(0,): (1,)}:
        failures.append(("open interval example",))
    square = tn.build_tower([({(): "R"}, {}), ({(0,): "RSR"}, {})])
    c, inc, ret = tn.compactify(square)
    if c.sizes() != [1, 3, 15] or brute_mediating(square, c, inc, ret) != 1:
        failures.append(("open square example",))
    report(4, "compactification", failures, "100 towers plus the two worked examples")


def test_criterion_05_confluence():
    rng = random.Random(1005)
    pool = []
    for _ in range(200):
        t = random_tower(rng, rng.randint(1, 2), 20, max_fiber=5)
        merges = len(t.top.covers) if rng.random() < 0.5 else None
        pool.append(st.validate(t, random_labeling(rng, t, merges)))
    failures = []
    reduced = 0
    start = time.perf_counter()
    for n, s in enumerate(pool):
        a, _ = st.normalize(s, "random", random.Random(2 * n))
        b, _ = st.normalize(s, "random", random.Random(2 * n + 1))
        reduced += a.truss != s.truss
        if not (st.is_normalized(a) and st.is_normalized(b) and st.decide_iso(a, b)):
            failures.append(n)
    elapsed = time.perf_counter() - start
    if elapsed >= CONFLUENCE_SECONDS:
        failures.append(("runtime", round(elapsed, 2)))
    report(5, "normalization confluence", failures, f"200 stratified towers, {reduced} reduced, {elapsed:.2f}s < {CONFLUENCE_SECONDS:.0f}s")


def decidability_pool() -> list:
    rng = random.Random(1006)
    seeds = []
    while len(seeds) < 16:
        t = random_tower(rng, rng.randint(1, 2), 12, max_fiber=3)
        seeds.append(st.validate(t, random_labeling(rng, t, len(t.top.covers) if rng.random() < 0.5 else None)))
    pool = list(seeds)
    for s in seeds[:8]:
        pool.append(st.normalize(s, "random", rng)[0])
    for s in seeds[8:]:
        names = sorted(set(s.labeling.values()))
        fresh = names[:]
        rng.shuffle(fresh)
        ren = dict(zip(names, fresh))
        pool.append(st.validate(s.truss, {x: "x" + ren[v] for x, v in s.labeling.items()}))
    for s in seeds[:4]:
        pool.append(st.one_stratum(s.truss))
    for s in seeds[8:12]:
        pool.append(st.discrete(s.truss))
    return pool


def test_criterion_06_decidability():
    pool = decidability_pool()
    assert len(pool) == 40 and all(len(s.truss.top) <= 12 for s in pool)
    # same route as brute_force_decide, with the exhaustive normal forms computed once per member
    exhaustive = [st.normalize(s, "exhaustive")[0] for s in pool]
    failures = []
    positives = 0
    for i, j in product(range(len(pool)), repeat=2):
        got = st.decide_iso(pool[i], pool[j])
        want = st.brute_force_iso(exhaustive[i], exhaustive[j])
        positives += want
        if got != want:
            failures.append((i, j, got, want))
    report(6, "decidability", failures, f"1600 pairs, {positives} isomorphic")


def test_criterion_07_translation():
    rng = random.Random(1007)
    failures = []
    towers = []
    while len(towers) < 100:
        depth = rng.randint(1, 3)
        t = random_tower(rng, depth, 30, kind="closed", max_fiber=5)
        if len(t.top) >= (3 if depth == 1 else 6):
            towers.append(t)
    for n, t in enumerate(towers):
        tower, _ = fc.complex_translate(t)
        back, ren = fc.truss_translate(tower)
        if back != t:
            failures.append((n, "truss after complex"))
            continue
        again, _ = fc.complex_translate(back)
        if not fc.same_proframed(fc.relabel_proframed(tower, ren), again):
            failures.append((n, "complex after truss"))
    report(7, "translation roundtrips", failures, f"100 closed towers, depth <= 3, up to {max(len(t.top) for t in towers)} elements")


def block_of_dimension(rng: random.Random, k: int):
    """Face block of a random element regular at exactly ``k`` levels."""
    while True:
        t = random_tower(rng, rng.randint(k, 3), 60, kind="closed", max_fiber=5)
        xs = [x for x in t.top.elements if tn.element_depth(t, x) == k]
        if xs:
            return tn.face_block(t, rng.choice(xs))[0]


def test_criterion_08_cellularity():
    rng = random.Random(1008)
    failures = []
    for n in range(50):
        blk = block_of_dimension(rng, n % 3 + 1)
        r = fc.shell_boundary(blk)
        bd_poset = fc.boundary(blk)
        bd_rel = O.reachability(bd_poset.elements, bd_poset.covers)
        counts = O.chain_count_brute(bd_poset.elements, bd_rel)
        euler = sum((-1) ** k * c for k, c in enumerate(counts))
        top_rel = O.reachability(blk.top.elements, blk.top.covers)
        k = len(O.chain_count_brute(blk.top.elements, top_rel)) - 1
        if not (r.ok and r.pure and r.thin and O.shelling_ok(r.facets)):
            failures.append((n, "shelling"))
        if euler != 1 + (-1) ** (k - 1) or r.euler != euler:
            failures.append((n, "euler", euler, k))
    report(8, "cellularity", failures, "50 random blocks, dimensions 1 to 3")


def closed_pool(count: int, seed: int) -> list:
    rng = random.Random(seed)
    out = [tn.bigon()]
    while len(out) < count:
        t = random_tower(rng, rng.randint(1, 2), 12, kind="closed", max_fiber=3)
        if len(t.top) >= 5:
            out.append(t)
    return out


def test_criterion_09_rigidity_factorization():
    failures = []
    maps_seen = 0
    for s, t in product(closed_pool(8, 1009), repeat=2):
        if s.depth != t.depth:
            continue
        hom = list(tn.enumerate_maps(s, t, "singular"))
        maps_seen += len(hom)
        for e, f in product(hom, repeat=2):
            if e != f and tn.natural_transformation_exists(e, f):
                failures.append(("rigidity", s.sizes(), t.sizes()))
        for f in hom:
            e, m = tn.epi_mono_factorize(f)
            if e.compose(m).maps != f.maps or not (e.classes["degeneracy"] and m.classes["face"]):
                failures.append(("factorization", s.sizes(), t.sizes()))
            elif len(tn.factorizations_through(f, e.target)) != 1:
                failures.append(("uniqueness", s.sizes(), t.sizes()))
    report(9, "rigidity and factorization", failures, f"{maps_seen} singular maps")


def test_criterion_10_dualization():
    rng = random.Random(1010)
    failures = []
    towers = [random_tower(rng, rng.randint(1, 2), 12, kind=rng.choice(["any", "closed", "open"]), max_fiber=3) for _ in range(40)]
    for n, t in enumerate(towers):
        d = tn.dualize(t)
        if tn.dualize(d) != t:
            failures.append((n, "involution"))
        if t.is_closed != d.is_open or t.is_open != d.is_closed:
            failures.append((n, "closed/open"))
    pairs = 0
    for s, t in product(closed_pool(4, 1110), repeat=2):
        if s.depth != t.depth:
            continue
        pairs += 1
        sing = {map_key(f) for f in tn.enumerate_maps(s, t, "singular")}
        reg = {map_key(g) for g in tn.enumerate_maps(tn.dualize(s), tn.dualize(t), "regular")}
        back = {map_key(tn.dualize_map(g)) for g in tn.enumerate_maps(tn.dualize(s), tn.dualize(t), "regular")}
        if sing != reg or back != sing:
            failures.append(("hom-sets", s.sizes(), t.sizes()))
    report(10, "dualization", failures, f"40 towers, {pairs} hom-set pairs")


def test_criterion_11_format_and_cli(tmp_path):
    corpus = sorted((Path(__file__).parent / "corpus").iterdir())
    failures = []
    if len(corpus) < MIN_CORPUS:
        failures.append(("corpus size", len(corpus)))
    for p in corpus:
        text = p.read_text()
        doc = io.parse(text)
        if io.to_text(doc) != text or io.parse(io.to_text(doc)) != doc:
            failures.append(("roundtrip", p.name))
    cube = tmp_path / "cube.truss"
    cube.write_text(
        "TRUSS v1\nn 2\nlevel 1\n  fiber 0 RSR\nlevel 2\n  fiber 0 R\n  fiber 1 R\n  fiber 2 R\n"
        "  bordism 0 1 reg 0->0\n  bordism 2 1 reg 0->0\n"
    )
    bigon = tmp_path / "bigon.truss"
    bigon.write_text(io.to_text(tn.bigon()))
    bad = tmp_path / "bad.truss"
    bad.write_text("TRUSS v1\nn 1\nlevel 1\n  fiber 0 SS\n")
    runner = CliRunner()
    steps = []

    def run(expect, *args):
        r = runner.invoke(main, [str(a) for a in args])
        steps.append(r.exit_code)
        if r.exit_code != expect:
            failures.append(("exit", args[0], r.exit_code, expect))
        return r

    run(0, "validate", cube)
    nf = tmp_path / "nf.truss"
    nf.write_text(run(0, "normalize", cube).stdout)
    run(0, "validate", nf)
    run(0, "decide-iso", cube, nf)
    run(1, "decide-iso", cube, bigon)
    r = run(2, "validate", bad)
    if not r.stderr.startswith("error:") or r.stdout:
        failures.append(("error stream",))
    run(2, "normalize", tmp_path / "missing.truss")
    report(11, "format and CLI", failures, f"{len(corpus)} documents, exit codes {steps}")
