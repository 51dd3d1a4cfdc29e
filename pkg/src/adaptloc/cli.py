"""Command-line harness: generators, replay and validation.

Exit codes: 0 on success, 2 when an input fails to parse or validate,
1 on any other error.
"""
from __future__ import annotations

import click

from . import bench
from .hierarchy import HierarchyParams
from .subdivision import ParseError, ValidationError, parse_subdivision
from .workloads import (
    KINDS,
    WorkloadSpec,
    generate_subdivision,
    generate_workload,
    read_queries,
    write_queries,
    write_subdivision,
)


class InputError(click.ClickException):
    exit_code = 2


def _load_sub(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_subdivision(fh.read())
    except (ParseError, ValidationError) as e:
        raise InputError(f"{path}: {e}") from e


@click.group()
def main():
    """Self-adjusting point location for convex subdivisions."""


@main.command("gen-sub")
@click.option("--n", "n_target", type=click.IntRange(min=3), required=True, help="Target vertex count.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def gen_sub(n_target, seed, out):
    """Write a random convex subdivision."""
    S = generate_subdivision(n_target, seed)
    write_subdivision(S, out)
    click.echo(f"{out}: {S.n} vertices, {len(S.regions)} regions")


@main.command("gen-work")
@click.option("--sub", "sub_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--kind", type=click.Choice(KINDS, case_sensitive=False), required=True)
@click.option("--len", "length", type=click.IntRange(min=0), required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--zipf-s", type=float, default=1.0, show_default=True)
@click.option("--hot", type=int, default=0, help="Hot region count (0: kind default).")
@click.option("--mass", type=float, default=0.99, show_default=True)
@click.option("--phase", type=click.IntRange(min=1), default=1000, show_default=True,
              help="DRIFT phase length.")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def gen_work(sub_path, kind, length, seed, zipf_s, hot, mass, phase, out):
    """Write a query stream for a subdivision."""
    S = _load_sub(sub_path)
    spec = WorkloadSpec(kind, length, seed, zipf_s=zipf_s, hot=hot, mass=mass, phase=phase)
    write_queries(generate_workload(S, spec), out)
    click.echo(f"{out}: {length} queries")


@main.command("run")
@click.option("--sub", "sub_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--work", "work_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--mode", type=click.Choice(bench.MODES, case_sensitive=False), default="HIERARCHY",
              show_default=True)
@click.option("--params", default="desk", show_default=True,
              help="Parameter profile, 'reference' or 'desk', optionally ':key=value,...'.")
@click.option("--phase", type=click.IntRange(min=1), default=100_000, show_default=True,
              help="Queries per report row.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--report", type=click.Path(dir_okay=False), required=True)
@click.option("--answers", type=click.Path(dir_okay=False), default=None)
def run_cmd(sub_path, work_path, mode, params, phase, seed, report, answers):
    """Replay a query stream and write the CSV report."""
    S = _load_sub(sub_path)
    try:
        queries = read_queries(work_path)
    except ValueError as e:
        raise InputError(f"{work_path}: {e}") from e
    try:
        P = HierarchyParams.parse(params)
    except ValueError as e:
        raise click.BadParameter(str(e), param_hint="--params") from e
    rep = bench.run(S, queries, mode, P, phase=phase, seed=seed)
    rep.write_csv(report)
    if answers:
        bench.write_answers(rep.answers, answers)
    q = rep.queries
    click.echo(f"{mode.upper()}: {q} queries, {rep.comparisons} comparisons"
               f" ({rep.comparisons / max(q, 1):.3f}/query), {rep.max_layers} layers max")


@main.command("validate")
@click.option("--sub", "sub_path", type=click.Path(exists=True, dir_okay=False), required=True)
def validate_cmd(sub_path):
    """Check that a subdivision file is a valid convex subdivision."""
    S = _load_sub(sub_path)
    click.echo(f"{sub_path}: ok ({S.n} vertices, {len(S.regions)} regions)")

