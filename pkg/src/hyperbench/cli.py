"""Command-line entry point.

Every command prints one report (JSON by default) on stdout and exits with
the code of its most severe verdict: 0 pass, 1 fail, 2 undetermined,
3 input error, 4 cap exceeded. Log messages go to stderr.
"""

import logging
import sys
from collections.abc import Callable
from pathlib import Path

import click

from hyperbench.backend.adjoint import adjoint_canonical, adjoint_section, adjoint_wmor
from hyperbench.backend.census import SUITES as CENSUS_SUITES
from hyperbench.backend.census import census, summarize, write_census
from hyperbench.backend.errors import (
    CapExceededError,
    HyperbenchError,
    StructureError,
    UndeterminedError,
)
from hyperbench.backend.free import codec_partition_matches, free_normal_form
from hyperbench.backend.hyper import check_hyperfield, check_hypergroup, check_hypersemigroup
from hyperbench.backend.hyperpair import powerset_pair
from hyperbench.backend.module import TModule, boolean_module, check_module, cyclic_module
from hyperbench.backend.monoid import check_monoid
from hyperbench.backend.morphism import classify
from hyperbench.backend.nr_tensor import check_nr_tensor, nr_tensor
from hyperbench.backend.pair import (
    Pair,
    check_circ_distributive,
    check_pair,
    check_surpassing,
    find_property_N,
)
from hyperbench.backend.report import ReportOfViolations, ViolationCollector
from hyperbench.backend.residue import residue, subgroup_from_labels
from hyperbench.backend.tensor import build_tensor, universal_property_oracle
from hyperbench.frontend.repro import CASES, reproduce
from hyperbench.frontend.reporting import Report, Verdict, guarded, verdict_of
from hyperbench.utils.config import OUTPUT_FORMATS, Settings
from hyperbench.utils.helper import (
    Structure,
    emit,
    load_structure,
    parse_map,
    split_labels,
)
from hyperbench.utils.logger import get_logger

logger = get_logger()

CHECK_SUITES = (
    "monoid",
    "module",
    "pair",
    "surpassing",
    "hypersemigroup",
    "hypergroup",
    "hyperfield",
    "propertyN",
    "circ-distributive",
    "all",
)

Body = Callable[[Settings, Report], None]
Check = Callable[[], ReportOfViolations]


def _settings(ctx: click.Context) -> Settings:
    settings = ctx.obj
    assert isinstance(settings, Settings)
    return settings


def _load(settings: Settings, uri: str, report: Report) -> Structure:
    structure = load_structure(uri, settings.includes)
    report.fingerprint(structure)
    return structure


def _labels(text: str, labels: tuple[str, ...], what: str) -> list[int]:
    readings = [r for r in split_labels(text, labels, ",") if r]
    if len(readings) != 1:
        logger.error(f"{what}: cannot read {text!r} as elements of {list(labels)}")
        raise StructureError(f"{what}: cannot read {text!r}")
    return readings[0]


def _run(ctx: click.Context, body: Body) -> None:
    """Run a command body, print its report and exit with its code."""
    settings = _settings(ctx)
    report = Report(sys.argv[1:], settings.to_dict())
    name = ctx.info_name or "command"
    with report.timed():
        try:
            body(settings, report)
        except StructureError as e:
            report.add(Verdict(name, "error", message=str(e)))
        except CapExceededError as e:
            facts = {"limit": e.limit, "required": e.required}
            report.add(Verdict(name, "cap", facts=facts, message=str(e)))
        except UndeterminedError as e:
            report.add(Verdict(name, "undetermined", bound=e.bound, message=str(e)))
        except HyperbenchError as e:
            report.add(Verdict(name, "fail", message=str(e)))
    click.echo(report.render(settings.output_format), nl=False)
    ctx.exit(report.exit_code)


@click.group()
@click.option(
    "--bound", "-L", default=4, show_default=True, help="Term-length bound of tensor closures.",
)
@click.option(
    "--cap", default=1 << 16, show_default=True, help="Largest search space of any enumeration.",
)
@click.option(
    "--format",
    "output_format",
    default="json",
    show_default=True,
    help=f"Output format, one of {', '.join(OUTPUT_FORMATS)}.",
)
@click.option(
    "--include",
    multiple=True,
    type=click.Path(path_type=Path),
    help="Structure file filling missing sections; repeatable.",
)
@click.option("--verbose", "-v", is_flag=True, default=False, help="Debug messages on stderr.")
@click.pass_context
def cli(
    ctx: click.Context,
    bound: int,
    cap: int,
    output_format: str,
    include: tuple[Path, ...],
    verbose: bool,
) -> None:
    """Finite hyperalgebra workbench."""
    if verbose:
        logger.set_console_level(logging.DEBUG)
    try:
        ctx.obj = Settings(
            bound, cap, output_format=output_format, includes=include, verbose=verbose,
        )
    except StructureError as e:
        click.echo(str(e), err=True)
        ctx.exit(e.exit_code)


# --- check ---


def _property_n(p: Pair) -> ReportOfViolations:
    out = ViolationCollector("propertyN")
    found = find_property_N(p)
    if not found:
        out.add("property_N", ())
    labels = p.module.labels
    out.fact("pseudo_negatives", [labels[w.pseudo_neg_one] for w in found])
    out.fact("e", [labels[w.e] for w in found])
    return out.build()


def _circ(p: Pair) -> ReportOfViolations:
    found = find_property_N(p)
    if not found:
        return _property_n(p)
    return check_circ_distributive(p, found[0])


def _applicable(s: Structure) -> list[str]:
    names: list[str] = []
    if s.monoid is not None or s.module is not None:
        names += ["monoid", "module"]
    has_pair = s.pair is not None or s.module is not None or s.hypermagma is not None
    if has_pair:
        names.append("pair")
    if s.pair is not None and not s.pair.relation.is_equality():
        names.append("surpassing")
    if s.hypermagma is not None:
        names.append("hypersemigroup")
        if s.hypermagma.zero is not None:
            names.append("hypergroup")
        if s.hypermagma.mul is not None:
            names.append("hyperfield")
    if has_pair and s.require_pair().one is not None:
        names.append("propertyN")
    return names


def _suite_runs(s: Structure, suite: str) -> list[tuple[str, Check]]:
    runs: dict[str, Check] = {
        "monoid": lambda: check_monoid(s.require_monoid()),
        "module": lambda: check_module(s.require_module()),
        "pair": lambda: check_pair(s.require_pair()),
        "surpassing": lambda: check_surpassing(s.require_pair()),
        "hypersemigroup": lambda: check_hypersemigroup(s.require_hypermagma()),
        "hypergroup": lambda: check_hypergroup(s.require_hypermagma()),
        "hyperfield": lambda: check_hyperfield(s.require_hypermagma()),
        "propertyN": lambda: _property_n(s.require_pair()),
        "circ-distributive": lambda: _circ(s.require_pair()),
    }
    names = _applicable(s) if suite == "all" else [suite]
    return [(n, runs[n]) for n in names]


def check(settings: Settings, report: Report, uri: str, suite: str) -> None:
    """Run one suite, or every suite that applies, on a structure."""
    if suite not in CHECK_SUITES:
        logger.error(f"check: unknown suite {suite!r}; expected one of {CHECK_SUITES}")
        raise StructureError(f"check: unknown suite {suite!r}")
    structure = _load(settings, uri, report)
    for name, run in _suite_runs(structure, suite):
        report.add(guarded(name, run))


@cli.command(name="check", help="Verify the axioms of a suite on a structure.")
@click.argument("uri")
@click.option(
    "--suite", default="all", show_default=True, help=f"One of {', '.join(CHECK_SUITES)}.",
)
@click.pass_context
def check_command(ctx: click.Context, uri: str, suite: str) -> None:
    """Command wrapper of check."""
    _run(ctx, lambda settings, report: check(settings, report, uri, suite))


# --- quotient ---


def quotient(
    settings: Settings, report: Report, uri: str, subgroup: str, out: Path | None,
) -> None:
    """Residue of a module by a subgroup, emitted as a hypermagma structure."""
    m = _load(settings, uri, report).require_module()
    members = _labels(subgroup, m.monoid.labels, "quotient --subgroup")
    r = residue(m, subgroup_from_labels(m.monoid, [m.monoid.labels[a] for a in members]))
    result = Structure(f"{uri}/{subgroup}", hypermagma=r.hypermagma)
    text = emit(result, settings.output_format)
    if out is not None:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")
        logger.info(f"quotient: wrote {out}")
    report.fingerprint(result)
    report.output = {
        "classes": [[m.labels[x] for x in c] for c in r.classes],
        "structure": text if out is None else str(out),
    }
    report.add(verdict_of("residue", r.report))


@cli.command(name="quotient", help="Build the residue hypermodule M/G.")
@click.argument("uri")
@click.option("--subgroup", required=True, help="Comma-separated labels of G.")
@click.option(
    "--out", type=click.Path(path_type=Path), default=None, help="Write the structure here.",
)
@click.pass_context
def quotient_command(ctx: click.Context, uri: str, subgroup: str, out: Path | None) -> None:
    """Command wrapper of quotient."""
    _run(ctx, lambda settings, report: quotient(settings, report, uri, subgroup, out))


# --- tensor ---

ORACLE_TARGETS: tuple[Callable[[], TModule], ...] = (boolean_module, lambda: cyclic_module(2))


def _nr(report: Report, s1: Structure, s2: Structure) -> None:
    t = nr_tensor(s1.require_hypermagma(), s2.require_hypermagma())
    report.output = {
        "carrier": list(t.hypermagma.labels),
        "add": [[t.render(int(x)) for x in row] for row in t.hypermagma.add],
    }
    report.add(verdict_of("nr_tensor", check_nr_tensor(t)))


def tensor(
    settings: Settings,
    report: Report,
    uris: tuple[str, str],
    over: str | None,
    negation: bool,
    free_base: str | None,
    nr: bool,
    oracle: bool,
) -> None:
    """Tensor of two structures: the congruence closure, or the NR tensor."""
    s1, s2 = (_load(settings, u, report) for u in uris)
    if nr:
        _nr(report, s1, s2)
        return
    m1, m2 = s1.require_module(), s2.require_module()
    monoid = None if over is None else _load(settings, over, report).require_monoid()
    closure = build_tensor(
        m1, m2, monoid, settings.bound, with_negation=negation, max_terms=settings.cap,
    )
    report.output = closure.to_dict()
    if not closure.saturated:
        report.add(Verdict("tensor", "undetermined", bound=settings.bound))
        return
    report.add(Verdict("tensor", "pass", facts={"classes": closure.order}))
    if free_base is not None:
        codec = free_normal_form(m1, m2, _labels(free_base, m2.labels, "tensor --free-base"))
        report.add(guarded("free_normal_form", lambda: codec_partition_matches(codec, closure)))
    if oracle:
        targets = [make() for make in ORACLE_TARGETS]
        report.add(
            guarded(
                "universal_property",
                lambda: universal_property_oracle(closure, targets, settings.cap),
            )
        )


@cli.command(name="tensor", help="Tensor product of two modules over a monoid.")
@click.argument("m1")
@click.argument("m2")
@click.option("--over", default=None, help="Structure whose monoid is T; M2's by default.")
@click.option("--negation", is_flag=True, default=False, help="Add the negation rule.")
@click.option("--free-base", default=None, help="Base of M2; cross-checks the free normal form.")
@click.option("--nr", is_flag=True, default=False, help="NR tensor of two hypermagmas instead.")
@click.option("--oracle", is_flag=True, default=False, help="Universal property on small targets.")
@click.pass_context
def tensor_command(
    ctx: click.Context,
    m1: str,
    m2: str,
    over: str | None,
    negation: bool,
    free_base: str | None,
    nr: bool,
    oracle: bool,
) -> None:
    """Command wrapper of tensor."""
    _run(
        ctx,
        lambda settings, report: tensor(
            settings, report, (m1, m2), over, negation, free_base, nr, oracle,
        ),
    )


# --- morphism ---


@cli.group(name="morphism", help="Classify maps and verify currying correspondences.")
def morphism_group() -> None:
    """Maps between pairs."""


def morphism_classify(
    settings: Settings,
    report: Report,
    map_file: Path,
    source: str,
    target: str,
    rel: str | None,
) -> None:
    """Decide every flag of a map given as ``f(a) = b`` lines."""
    a = _load(settings, source, report).require_pair()
    b = _load(settings, target, report).require_pair()
    if rel is not None:
        b = b.with_relation(_load(settings, rel, report).require_pair().relation)
    try:
        text = map_file.read_text(encoding="utf-8")
    except OSError as e:
        logger.error(f"{map_file}: cannot read ({e})")
        raise StructureError(f"{map_file}: cannot read") from e
    result = classify(parse_map(text, a.module, b.module, str(map_file)), a, b)
    report.output = result.to_dict()
    report.add(Verdict("classify", "pass", facts={"flags": sorted(result.flags)}))


@morphism_group.command(name="classify", help="Classify a map between two pairs.")
@click.argument("map_file", type=click.Path(path_type=Path))
@click.option("--from", "source", required=True, help="Source structure.")
@click.option("--to", "target", required=True, help="Target structure.")
@click.option("--rel", default=None, help="Structure whose relation replaces the target's.")
@click.pass_context
def classify_command(
    ctx: click.Context, map_file: Path, source: str, target: str, rel: str | None,
) -> None:
    """Command wrapper of morphism_classify."""
    _run(
        ctx,
        lambda settings, report: morphism_classify(
            settings, report, map_file, source, target, rel,
        ),
    )


def morphism_adjoint(
    settings: Settings,
    report: Report,
    uris: tuple[str, str, str],
    free_base: str | None,
    meet: bool,
) -> None:
    """Currying on products, on free tensors, or with meet-uncurrying into a power set."""
    s1, s2, s3 = (_load(settings, u, report) for u in uris)
    p1, p2 = s1.require_pair(), s2.require_pair()
    if meet:
        target = powerset_pair(s3.require_hypermagma())
        closure = build_tensor(
            p1.module, p2.module, bound=settings.bound, max_terms=settings.cap,
        )
        result = adjoint_canonical(p1, p2, target, closure, settings.cap)
        name = "adjoint_canonical"
    elif free_base is not None:
        base = _labels(free_base, p2.module.labels, "morphism adjoint --free-base")
        result = adjoint_section(p1, p2, s3.require_pair(), base, settings.cap)
        name = "adjoint_section"
    else:
        result = adjoint_wmor(p1, p2, s3.require_pair(), settings.cap)
        name = "adjoint_wmor"
    report.output = result.to_dict()
    report.add(verdict_of(name, result.report))


@morphism_group.command(name="adjoint", help="Verify a currying correspondence M1, M2 -> M3.")
@click.option("--m1", required=True, help="First factor.")
@click.option("--m2", required=True, help="Second factor.")
@click.option("--m3", required=True, help="Target; a hypermagma with --meet.")
@click.option("--free-base", default=None, help="Comma-separated free base of M2.")
@click.option("--meet", is_flag=True, default=False, help="Uncurry by meets into P(M3).")
@click.pass_context
def adjoint_command(
    ctx: click.Context, m1: str, m2: str, m3: str, free_base: str | None, meet: bool,
) -> None:
    """Command wrapper of morphism_adjoint."""
    _run(
        ctx,
        lambda settings, report: morphism_adjoint(
            settings, report, (m1, m2, m3), free_base, meet,
        ),
    )


# --- census, repro, emit ---


def run_census(
    settings: Settings, report: Report, order: int, suite: str, out: Path | None,
) -> None:
    """Enumerate small commutative hypermagmas and stream them as NDJSON."""
    result = census(order, suite, settings.cap, settings.census_max_order)
    if out is not None:
        write_census(result, out)
    report.output = {
        "candidates": result.candidates,
        "counts": summarize([result]).to_dicts(),
        "out": None if out is None else str(out),
    }
    report.add(Verdict("census", "pass", facts={"tables": len(result.tables)}))


@cli.command(name="census", help="Enumerate hypermagmas with hyperzero up to isomorphism.")
@click.option("--order", required=True, type=int, help="Carrier size.")
@click.option(
    "--suite", default="hypergroup", show_default=True, help=f"One of {', '.join(CENSUS_SUITES)}.",
)
@click.option("--out", type=click.Path(path_type=Path), default=None, help="NDJSON output file.")
@click.pass_context
def census_command(ctx: click.Context, order: int, suite: str, out: Path | None) -> None:
    """Command wrapper of run_census."""
    _run(ctx, lambda settings, report: run_census(settings, report, order, suite, out))


def repro(settings: Settings, report: Report, case: str) -> None:
    """Run a reproduction case."""
    result = reproduce(case, settings.bound, settings.cap)
    report.output = result.output
    report.add(verdict_of(case, result.report))


@cli.command(name="repro", help=f"Reproduce a worked computation: {', '.join(CASES)}.")
@click.argument("case")
@click.pass_context
def repro_command(ctx: click.Context, case: str) -> None:
    """Command wrapper of repro."""
    _run(ctx, lambda settings, report: repro(settings, report, case))


@cli.command(name="emit", help="Re-emit a structure in canonical form.")
@click.argument("uri")
@click.pass_context
def emit_command(ctx: click.Context, uri: str) -> None:
    """Print a structure in canonical form, or the load error on stderr."""
    settings = _settings(ctx)
    try:
        text = emit(load_structure(uri, settings.includes), settings.output_format)
    except HyperbenchError as e:
        click.echo(str(e), err=True)
        ctx.exit(e.exit_code)
    click.echo(text, nl=False)


if __name__ == "__main__":
    cli()
