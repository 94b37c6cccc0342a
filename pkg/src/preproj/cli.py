"""Command-line front end.

Exit codes: 0 success (flat, confluent, all checks pass), 1 a property fails,
2 bad usage or unreadable input.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .algebra import AlgebraError
from .degeneration import NotComparable, flatness_check
from .field import FieldError, parse_field
from .preprojective import ALL_PLUS, SIGNED, NotFiniteDimensional, hilbert_series
from .quiver import QuiverError
from .repvariety import RepresentationError, verify_moment_map
from .rewriting import RewritingError, parse_rule_file
from .specfile import load_spec
from .suites import SUITES

PROPERTY_FAILURE = 1
INPUT_ERROR = 2


class InputError(click.ClickException):
    exit_code = INPUT_ERROR


def _field(text: str):
    try:
        return parse_field(text)
    except FieldError as exc:
        raise InputError(str(exc)) from None


def _load(path: str, field):
    try:
        return load_spec(path, field)
    except (ValueError, OSError) as exc:  # ParseError, QuiverError and AlgebraError are ValueErrors
        raise InputError(f"{path}: {exc}") from None


def _emit_json(body: dict, path: str | None) -> None:
    if path:
        Path(path).write_text(json.dumps(body, sort_keys=True, indent=2) + "\n")


field_option = click.option("--field", "field_text", default="rationals", show_default=True,
                            help="'rationals' or 'gf:<prime>'.")
signs_option = click.option("--signs", type=click.Choice(["signed", "plus"]), default="signed", show_default=True,
                            help="Sign convention of the preprojective relation.")
json_option = click.option("--json", "json_path", type=click.Path(dir_okay=False), default=None,
                           help="Also write a JSON report to this path.")
cutoff_option = click.option("--cutoff", type=click.IntRange(min=0), default=None,
                             help="Largest path length computed (default 2 * sum of vertex dimensions).")


def _convention(signs: str) -> str:
    return ALL_PLUS if signs == "plus" else SIGNED


@click.group()
@click.version_option(package_name="artifact")
def main() -> None:
    """Decorated preprojective algebras: series, flatness, rewriting and moment maps."""


@main.command()
@click.argument("specfile", type=click.Path(exists=True, dir_okay=False))
@field_option
@cutoff_option
@signs_option
@json_option
@click.option("--s-at-1", "s_at_1", is_flag=True, help="Print the single-variable series with s set to 1.")
def hilbert(specfile, field_text, cutoff, signs, json_path, s_at_1):
    """Print the Hilbert series of the preprojective algebra of SPECFILE."""
    dq = _load(specfile, _field(field_text))
    hs = hilbert_series(dq, _convention(signs), cutoff)
    click.echo(hs.to_text(s_at_1=s_at_1))
    if not hs.stabilized:
        click.echo(f"# truncated at path length {hs.cutoff}; higher degrees not computed", err=True)
    if not hs.x_graded:
        click.echo("# relation is not x-homogeneous; s records nothing", err=True)
    _emit_json(hs.to_dict(), json_path)


@main.command()
@click.argument("left", type=click.Path(exists=True, dir_okay=False))
@click.argument("right", type=click.Path(exists=True, dir_okay=False))
@field_option
@cutoff_option
@signs_option
@json_option
@click.option("--per-degree", is_flag=True, help="Compare per-degree totals only (quivers may differ in shape).")
def flatness(left, right, field_text, cutoff, signs, json_path, per_degree):
    """Compare the graded dimensions of LEFT (deformed) and RIGHT (degenerate)."""
    f = _field(field_text)
    try:
        report = flatness_check(_load(left, f), _load(right, f), cutoff,
                                mode="degrees" if per_degree else "blocks", convention=_convention(signs))
    except NotComparable as exc:
        raise InputError(f"not comparable: {exc}") from None
    click.echo(json.dumps(report.to_dict(), sort_keys=True))
    _emit_json(report.to_dict(), json_path)
    if not report.flat:
        sys.exit(PROPERTY_FAILURE)


@main.command()
@click.argument("rulefile", type=click.Path(exists=True, dir_okay=False))
@field_option
@click.option("--bound", type=click.IntRange(min=0), default=12, show_default=True,
              help="Resolve ambiguities up to this path length.")
@json_option
def confluence(rulefile, field_text, bound, json_path):
    """Complete the rewriting system in RULEFILE and count irreducible words."""
    try:
        system = parse_rule_file(Path(rulefile).read_text(), _field(field_text))
    except RewritingError as exc:
        raise InputError(f"{rulefile}: {exc}") from None
    report = system.complete(bound)
    report.counts = system.irreducible_count(bound)
    body = report.to_dict()
    body["confluent"] = not report.deferred
    click.echo(json.dumps(body, sort_keys=True))
    for rule in system.rules.values():
        click.echo(f"{system.render(rule.lhs)} -> {system.render_element(dict(rule.rhs))}")
    _emit_json(body, json_path)
    if report.deferred:
        sys.exit(PROPERTY_FAILURE)


def _dims(text: str, vertices) -> dict[str, int]:
    """``"1,2"`` in vertex order, or ``"a=1,b=2"``."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    try:
        if all("=" in p for p in parts):
            return {k.strip(): int(v) for k, v in (p.split("=", 1) for p in parts)}
        if len(parts) != len(vertices):
            raise ValueError(f"expected {len(vertices)} entries")
        return dict(zip(vertices, map(int, parts)))
    except ValueError as exc:
        raise InputError(f"bad --dims {text!r}: {exc}") from None


@main.command("moment-check")
@click.argument("specfile", type=click.Path(exists=True, dir_okay=False))
@field_option
@click.option("--dims", "dims_text", required=True, help="Dimension vector, '1,2' or 'v=1,w=2'.")
@click.option("--seeds", type=click.IntRange(min=1), default=20, show_default=True, help="Number of random representations.")
@click.option("--seed", type=int, default=0, show_default=True, help="First seed.")
@json_option
def moment_check(specfile, field_text, dims_text, seeds, seed, json_path):
    """Compare the two moment-map routes on random representations of SPECFILE."""
    dq = _load(specfile, _field(field_text))
    dims = _dims(dims_text, dq.vertices)
    try:
        report = verify_moment_map(dq, dims, range(seed, seed + seeds), Path(specfile).stem)
    except RepresentationError as exc:
        raise InputError(str(exc)) from None
    click.echo(report.to_json())
    _emit_json(json.loads(report.to_json()), json_path)
    if not report.all_equal:
        sys.exit(PROPERTY_FAILURE)


@main.command()
@click.argument("suite", type=click.Choice(sorted(SUITES)))
@field_option
def reproduce(suite, field_text):
    """Run a named acceptance bundle and print PASS/FAIL per item."""
    checks = SUITES[suite](_field(field_text))
    for check in checks:
        click.echo(check.line())
    failed = sum(not c.passed for c in checks)
    click.echo(f"{suite}: {len(checks) - failed}/{len(checks)} passed")
    if failed:
        sys.exit(PROPERTY_FAILURE)


if __name__ == "__main__":  # pragma: no cover
    main()
