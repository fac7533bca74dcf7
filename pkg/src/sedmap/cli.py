"""Command-line interface.

Exit codes: 0 success, 1 validation/domain failure, 2 usage error.
Reports print as aligned tables by default; ``--format json`` emits the
corresponding machine document.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click
import numpy as np

from . import analysis, dynamics, fixtures, formats, scenario as scen
from .mapcore import InvalidMapError, MapError, validate_map
from .scenario import ScenarioError


def _read(path: str) -> bytes:
    return Path(path).read_bytes()


def _emit(data: bytes, out: str | None) -> None:
    if out:
        formats.write_atomic(out, data)
    else:
        sys.stdout.write(data.decode())


def _fail(message: str) -> SystemExit:
    click.echo(f"error: {message}", err=True)
    return SystemExit(1)


def _load_map(path: str):
    try:
        return formats.load_map(_read(path))
    except (formats.DocumentError, InvalidMapError) as e:
        raise _fail(str(e))


def _table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(headers))]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
    return "\n".join(lines) + "\n"


def _num(x: float) -> str:
    return format(x, ".6g")


format_option = click.option(
    "--format", "fmt", type=click.Choice(["table", "json"]), default="table",
    help="Human table or machine document.",
)


@click.group()
def main():
    """Cognitive-map workbench for municipal development scenarios."""


@main.command()
@click.argument("map_file")
def validate(map_file):
    """Check a map document; exit 1 and list violations if invalid."""
    try:
        m = formats.load_map(_read(map_file))
    except formats.DocumentError as e:
        raise _fail(str(e))
    except InvalidMapError as e:
        for v in e.report.violations:
            click.echo(f"violation [{v.code}] {v.message}")
        raise SystemExit(1)
    report = validate_map(m)
    if report.ok:
        click.echo(f"valid: {m.n} factors, {len(m.edges)} edges")
    else:
        for v in report.violations:
            click.echo(f"violation [{v.code}] {v.message}")
        raise SystemExit(1)


def _parse_assignments(pairs: tuple[str, ...], what: str) -> dict[str, float]:
    values: dict[str, float] = {}
    for pair in pairs:
        if "=" not in pair:
            raise click.UsageError(f"{what} must look like factor=value, got {pair!r}")
        fid, _, raw = pair.partition("=")
        try:
            values[fid.strip()] = float(raw)
        except ValueError:
            raise click.UsageError(f"{what} value {raw!r} is not a number") from None
    return values


@main.command()
@click.argument("map_file")
@click.option("--impulse", "impulses", multiple=True, help="factor=value, injected at t=0.")
@click.option("--horizon", type=int, required=True)
@click.option("--clamp", is_flag=True, help="Clip state to [0,1] each step.")
@click.option("--base", "bases", multiple=True, help="factor=value base state (default 0).")
@click.option("--out", help="Write to file instead of stdout.")
@format_option
def simulate(map_file, impulses, horizon, clamp, bases, out, fmt):
    """Run an impulse simulation and print the trajectory."""
    m = _load_map(map_file)
    try:
        schedule = dynamics.ImpulseSchedule.initial(m, _parse_assignments(impulses, "--impulse"))
        y_base = dynamics.vector_from_named(m, _parse_assignments(bases, "--base"))
        traj = dynamics.simulate(m, y_base, schedule, horizon, clamp)
    except (MapError, ValueError) as e:
        raise _fail(str(e))
    data = formats.export_trajectory(traj, "document" if fmt == "json" else "tabular")
    _emit(data, out)


@main.command()
@click.argument("map_file")
@click.option("--tol", type=float, default=1e-6, show_default=True)
@click.option("--out", help="Write to file instead of stdout.")
@format_option
def analyze(map_file, tol, out, fmt):
    """Closure, influence indicators, and stability for a map."""
    m = _load_map(map_file)
    try:
        closure, infl, stab = analysis.analyze_map(m, tol)
    except ValueError as e:
        raise _fail(str(e))
    if fmt == "json":
        _emit(formats.dumps_document(formats.analysis_document(m, closure, infl, stab)), out)
        return
    rows = [
        [fid, _num(infl.influence_on_system[i]), _num(infl.susceptibility[i]),
         _num(infl.consonance_on_system[i])]
        for i, fid in enumerate(m.factor_ids)
    ]
    text = (
        f"stability: {stab.classification} (spectral radius {_num(stab.spectral_radius)}, tol {stab.tol:g})\n"
        + _table(["factor", "influence", "susceptibility", "consonance"], rows)
    )
    _emit(text.encode(), out)


@main.command()
@click.argument("map_file")
@click.option("--lock", "locks", multiple=True, help="Edge to keep fixed, as source->target.")
@click.option("--tol", type=float, default=1e-6, show_default=True)
@click.option("--out", help="Write to file instead of stdout.")
@format_option
def stabilize(map_file, locks, tol, out, fmt):
    """Search for weight halvings that make the map stable."""
    m = _load_map(map_file)
    locked = set()
    for lock in locks:
        if "->" not in lock:
            raise click.UsageError(f"--lock must look like source->target, got {lock!r}")
        s, _, t = lock.partition("->")
        locked.add((s.strip(), t.strip()))
    try:
        plan = analysis.stabilize_search(m, frozenset(locked), tol)
    except (MapError, ValueError) as e:
        raise _fail(str(e))
    if fmt == "json":
        _emit(formats.dumps_document(formats.plan_document(plan)), out)
        return
    rows = [
        [f"{c.source}->{c.target}", _num(c.old_weight), _num(c.new_weight)]
        for c in plan.changes
    ]
    status = "stable" if plan.succeeded else "NOT stabilized"
    text = (
        f"{status}: resulting spectral radius {_num(plan.resulting_radius)}, "
        f"{len(plan.changes)} change(s)\n"
    )
    if rows:
        text += _table(["edge", "old weight", "new weight"], rows)
    _emit(text.encode(), out)
    if not plan.succeeded:
        raise SystemExit(1)


@main.group()
def scenario():
    """Run, compare, or invert what-if scenarios."""


def _load_suite(map_file, scenario_file):
    m = _load_map(map_file)
    try:
        suite = formats.load_scenarios(_read(scenario_file), m)
    except (formats.DocumentError, MapError) as e:
        raise _fail(str(e))
    return m, suite


@scenario.command("run")
@click.argument("map_file")
@click.argument("scenario_file")
@click.option("--out", help="Write to file instead of stdout.")
@format_option
def scenario_run(map_file, scenario_file, out, fmt):
    """Run every scenario in the file; print target outcomes."""
    m, suite = _load_suite(map_file, scenario_file)
    y_base = suite.base_vector(m)
    try:
        results = [scen.run_scenario(m, y_base, s) for s in suite.scenarios]
    except (ScenarioError, MapError, ValueError) as e:
        raise _fail(str(e))
    if fmt == "json":
        doc = {
            "format": formats.FORMAT_VERSION,
            "kind": "scenario-results",
            "results": [formats.scenario_result_document(r) for r in results],
        }
        _emit(formats.dumps_document(doc), out)
        return
    rows = [[r.name, _num(r.target_delta)] for r in results]
    _emit(_table(["scenario", "target delta"], rows).encode(), out)


@scenario.command("compare")
@click.argument("map_file")
@click.argument("scenario_file")
@click.option("--out", help="Write to file instead of stdout.")
@format_option
def scenario_compare(map_file, scenario_file, out, fmt):
    """Rank scenarios by closeness to the desired target change."""
    m, suite = _load_suite(map_file, scenario_file)
    if suite.target is None:
        raise _fail("scenario file has no target section")
    try:
        ranked = scen.compare_scenarios(m, suite.base_vector(m), list(suite.scenarios), suite.target)
    except (ScenarioError, MapError, ValueError) as e:
        raise _fail(str(e))
    if fmt == "json":
        _emit(formats.dumps_document(formats.ranking_document(ranked)), out)
        return
    rows = [[r.name, _num(r.target_delta), _num(r.distance)] for r in ranked]
    _emit(_table(["scenario", "target delta", "distance"], rows).encode(), out)


@scenario.command("invert")
@click.argument("map_file")
@click.argument("scenario_file")
@click.option("--controls", help="Comma-separated control ids (default: all controls).")
@click.option("--ridge", type=float, default=0.0, show_default=True)
@click.option("--out", help="Write to file instead of stdout.")
@format_option
def scenario_invert(map_file, scenario_file, controls, ridge, out, fmt):
    """Initial control impulse that best reaches the desired target change."""
    m, suite = _load_suite(map_file, scenario_file)
    if suite.target is None:
        raise _fail("scenario file has no target section")
    control_ids = tuple(controls.split(",")) if controls else m.control_ids()
    try:
        impulse = scen.invert_scenario(m, suite.base_vector(m), control_ids, suite.target, ridge)
        sched = dynamics.ImpulseSchedule({0: impulse})
        check = scen.run_scenario(
            m, suite.base_vector(m),
            scen.Scenario("inverse", control_ids, sched, suite.target.horizon),
        )
    except (ScenarioError, MapError, ValueError) as e:
        raise _fail(str(e))
    named = {fid: float(impulse[m.index[fid]]) for fid in control_ids}
    residual = (check.target_delta - suite.target.desired_delta) ** 2 + ridge * float(impulse @ impulse)
    if fmt == "json":
        doc = {
            "format": formats.FORMAT_VERSION,
            "kind": "inverse-impulse",
            "impulse": named,
            "achieved_delta": check.target_delta,
            "residual": residual,
        }
        _emit(formats.dumps_document(doc), out)
        return
    rows = [[fid, _num(v)] for fid, v in named.items()]
    text = _table(["control", "impulse"], rows)
    text += f"achieved delta {_num(check.target_delta)} (desired {_num(suite.target.desired_delta)})\n"
    _emit(text.encode(), out)


@main.command()
@click.argument("registry_file")
@click.option("--climate", required=True)
@click.option("--population", type=int, required=True)
@click.option("--specialization", required=True)
@format_option
def template(registry_file, climate, population, specialization, fmt):
    """Resolve a municipality type and list its assessment indicators."""
    from .knowledge import indicators_for_type, resolve_type, RegistryError

    try:
        kb = formats.load_registry(_read(registry_file))
        mtype = resolve_type(kb.registry, climate, population, specialization)
    except (formats.DocumentError, RegistryError) as e:
        raise _fail(str(e))
    indicators = sorted(indicators_for_type(kb.template, mtype))
    if fmt == "json":
        doc = {
            "format": formats.FORMAT_VERSION,
            "kind": "indicator-template",
            "type": {
                "climate": mtype.climate,
                "population_class": mtype.population_class,
                "specialization": mtype.specialization,
            },
            "indicators": indicators,
        }
        sys.stdout.write(formats.dumps_document(doc).decode())
        return
    click.echo(f"type: {mtype.climate} / {mtype.population_class} / {mtype.specialization}")
    for ind in indicators:
        click.echo(f"  {ind}")


@main.command()
@click.argument("name", type=click.Choice(["chain", "standard", "registry", "scenarios"]))
@click.option("--out", help="Write to file instead of stdout.")
def fixture(name, out):
    """Write a bundled example document (map, registry, or scenario suite)."""
    if name == "chain":
        data = formats.save_map(fixtures.chain_map())
    elif name == "standard":
        data = formats.save_map(fixtures.standard_map())
    elif name == "registry":
        data = formats.save_registry(fixtures.default_knowledge_base())
    else:
        m = fixtures.chain_map()
        suite = formats.ScenarioSuite(
            scenarios=(
                scen.Scenario("push", ("p",), dynamics.ImpulseSchedule.initial(m, {"p": 1.0}), 2),
            ),
            target=scen.TargetSpec("q", 1.0, 2),
            y_base=None,
        )
        data = formats.dumps_document(formats.scenario_document(suite, m))
    _emit(data, out)


@main.command()
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--data", "data_dir", required=True, help="Directory for stored maps.")
@click.option("--cors", "cors_origins", multiple=True, help="Allowed CORS origin (repeatable).")
def serve(port, host, data_dir, cors_origins):
    """Start the HTTP service."""
    import uvicorn

    from .service import create_app

    app = create_app(data_dir, list(cors_origins))
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
