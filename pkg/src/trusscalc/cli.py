"""Command line interface.

Exit status is 0 on success (or a positive answer), 1 when ``decide-iso``
answers no, and 2 when an input fails to parse or validate.
"""

from __future__ import annotations

import random
import sys

import click

from . import bordism as bd
from . import framed_complex as fc
from . import io
from . import stratified as st
from . import trussn as tn
from .bordism import Bordism1
from .bundle1 import chain_order, is_chain_base
from .framed_complex import FramedComplex
from .scaffold import brute_force_spacers, restrict_to_chain, sections_in_order
from .trussn import TrussTower

VALIDATION_FAILED = 2
ANSWER_NO = 1


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(VALIDATION_FAILED)


def _load(path: str) -> io.Document:
    try:
        with click.open_file(path) as fh:
            text = fh.read()
    except OSError as err:
        _fail(str(err))
    try:
        return io.parse(text)
    except ValueError as err:
        _fail(str(err))


def _load_tower(path: str) -> TrussTower:
    doc = _load(path)
    if not isinstance(doc.payload, TrussTower):
        _fail(f"{path} holds a {doc.kind}, expected a truss")
    return doc.payload


def _stratified(t: TrussTower) -> st.StratifiedTruss:
    if t.labels is None:
        return st.discrete(t)
    return st.validate(t)


def _emit(obj) -> None:
    click.echo(io.to_text(obj), nl=False)


@click.group()
def main() -> None:
    """Combinatorial framed trusses: validate, normalize, translate and render."""


@main.command()
@click.argument("path")
def validate(path: str) -> None:
    """Parse a document and run the checks of its kind."""
    doc = _load(path)
    try:
        if doc.kind == io.STRATIFIED:
            s = st.validate(doc.payload)
            click.echo(f"ok stratified-truss depth={doc.payload.depth} sizes={doc.payload.sizes()} strata={len(s.strata)}")
        elif doc.kind == io.TRUSS:
            t = doc.payload
            click.echo(f"ok truss depth={t.depth} sizes={t.sizes()} kind={t.kind}")
        elif doc.kind == io.BORDISM:
            r = doc.payload
            click.echo(f"ok bordism {r.domain.word}->{r.codomain.word}")
        else:
            report = fc.validate_framing(doc.payload)
            if not report.valid:
                _fail(f"{report.problem} at {list(report.witness)}")
            flat, why = fc.is_flat(doc.payload)
            click.echo(f"ok framed-complex n={doc.payload.n} flat={'yes' if flat else 'no'}")
            if not flat:
                click.echo(f"not flat: {why}", err=True)
    except ValueError as err:
        _fail(str(err))


@main.command()
@click.argument("path")
@click.option("--strategy", type=click.Choice(["greedy", "random", "exhaustive"]), default="greedy")
@click.option("--seed", type=int, default=None)
def normalize(path: str, strategy: str, seed: int | None) -> None:
    """Coarsen a stratified truss to its normal form."""
    t = _load_tower(path)
    try:
        nf, _ = st.normalize(_stratified(t), strategy, random.Random(seed) if seed is not None else None)
    except ValueError as err:
        _fail(str(err))
    _emit(nf.tower())


@main.command("decide-iso")
@click.argument("first")
@click.argument("second")
def decide_iso(first: str, second: str) -> None:
    """Exit 0 if the two stratified trusses are isomorphic, 1 otherwise."""
    a, b = _load_tower(first), _load_tower(second)
    try:
        same = st.decide_iso(_stratified(a), _stratified(b))
    except ValueError as err:
        _fail(str(err))
    click.echo("isomorphic" if same else "not isomorphic")
    sys.exit(0 if same else ANSWER_NO)


@main.command()
@click.argument("path")
def dualize(path: str) -> None:
    """Dual of a truss or of a bordism."""
    doc = _load(path)
    if isinstance(doc.payload, Bordism1):
        _emit(bd.dualize(doc.payload))
    elif isinstance(doc.payload, TrussTower):
        _emit(tn.dualize(doc.payload))
    else:
        _fail("dualize takes a truss or a bordism")


@main.command()
@click.argument("path")
def compactify(path: str) -> None:
    """Closed truss densely containing the input."""
    t = _load_tower(path)
    try:
        closed, _, _ = tn.compactify(t.unlabeled())
    except ValueError as err:
        _fail(str(err))
    _emit(closed)


@main.command()
@click.argument("path")
def suspend(path: str) -> None:
    """Levelwise suspension of an unlabeled truss."""
    t = _load_tower(path)
    try:
        s = tn.suspend(t.unlabeled())
    except ValueError as err:
        _fail(str(err))
    _emit(s)


@main.command()
@click.argument("path")
@click.option("--over", default=None, help="Comma-separated indices of a base chain below the top level.")
def sections(path: str, over: str | None) -> None:
    """Sections and spacers of the top bundle over a chain, in scaffold order."""
    t = _load_tower(path)
    if t.depth == 0:
        _fail("a depth-0 truss has no bundle")
    lvl = t.levels[-1]
    order = io.canonical_orders(t)[t.depth - 1]
    try:
        if over is None:
            if not is_chain_base(lvl.base):
                _fail("the base is not a chain; pick one with --over")
            chain = chain_order(lvl.base)
        else:
            chain = [order[int(k)] for k in over.split(",")]
        c = restrict_to_chain(lvl, chain)
        found = sections_in_order(c)
        spacers = brute_force_spacers(c)
    except (ValueError, IndexError) as err:
        _fail(str(err))
    for s in found:
        click.echo(f"section {' '.join(map(str, s.vertices))} norm {s.norm}")
    for sp in spacers:
        click.echo(f"spacer {' '.join(map(str, sp.vertices))} at {sp.index} norm {sp.norm}")


@main.command()
@click.argument("source")
@click.argument("target")
@click.option("--limit", type=int, default=50)
def factorize(source: str, target: str, limit: int) -> None:
    """Factor each singular map between closed trusses through its image."""
    s, t = _load_tower(source), _load_tower(target)
    try:
        maps = list(tn.enumerate_maps(s.unlabeled(), t.unlabeled(), "singular", limit=max(limit, 1) * 1000))
        for k, f in enumerate(maps[:limit]):
            epi, mono = tn.epi_mono_factorize(f)
            click.echo(f"map {k}: image sizes {epi.target.sizes()} degeneracy then face")
    except ValueError as err:
        _fail(str(err))
    click.echo(f"{len(maps)} singular maps")


@main.command("to-complex")
@click.argument("path")
def to_complex(path: str) -> None:
    """Framed complex of a closed truss, with its cellular poset."""
    t = _load_tower(path)
    try:
        _emit(io.tower_complex(t.unlabeled()))
    except ValueError as err:
        _fail(str(err))


@main.command("from-complex")
@click.argument("path")
def from_complex(path: str) -> None:
    """Closed truss of a flat framed complex carrying a cellular poset."""
    doc = _load(path)
    if not isinstance(doc.payload, FramedComplex):
        _fail("from-complex takes a COMPLEX document")
    try:
        _emit(fc.tower_from_complex(doc.payload))
    except ValueError as err:
        _fail(str(err))


@main.command()
@click.argument("path")
@click.option("--dot", "mode", flag_value="dot", default=True)
@click.option("--geometry", "mode", flag_value="geometry")
def render(path: str, mode: str) -> None:
    """Graphviz DOT of the top poset, or vertex coordinates and simplices."""
    t = _load_tower(path)
    try:
        click.echo(io.render_dot(t) if mode == "dot" else io.render_geometry(t), nl=False)
    except ValueError as err:
        _fail(str(err))


@main.command("compose-bordism")
@click.argument("first")
@click.argument("second")
def compose_bordism(first: str, second: str) -> None:
    """Composite of two bordism documents, first then second."""
    a, b = _load(first).payload, _load(second).payload
    if not (isinstance(a, Bordism1) and isinstance(b, Bordism1)):
        _fail("compose-bordism takes two BORDISM documents")
    try:
        _emit(bd.compose(a, b))
    except ValueError as err:
        _fail(str(err))


if __name__ == "__main__":
    main()
