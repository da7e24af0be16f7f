"""
Command-line interface.
Commands mirror the library: evaluation, maps, 1D intervals, cell counting,
point-location structures, constructions and verification suites.

Exit codes: 0 success, 1 usage or input error, 2 verification failure,
3 infeasible construction.
"""
import json
import logging
import sys
from pathlib import Path
from typing import NoReturn, Optional

import click
import typer

from sinrmap import diagram1d, geometry, model, pointloc, render, sinr_core, verify
from sinrmap.config import settings
from sinrmap.pointloc import Scheme
from sinrmap.schemas import RenderSpec, parse_point

EXIT_USAGE = 1
EXIT_VERIFICATION = 2
EXIT_INFEASIBLE = 3

app = typer.Typer(no_args_is_help=True, help="SINR reception diagrams and point location.")
qds_app = typer.Typer(no_args_is_help=True, help="Build and query point-location structures.")
construct_app = typer.Typer(no_args_is_help=True, help="Closed forms and extreme constructions.")
app.add_typer(qds_app, name="qds")
app.add_typer(construct_app, name="construct")


def fail(message: str, code: int = EXIT_USAGE) -> NoReturn:
    """Prints the error to stderr and exits with the given code."""
    typer.echo(f"Error: {message}", err=True)
    raise typer.Exit(code=code)


def emit(payload) -> None:
    """Writes a pydantic model or plain JSON-able value to stdout."""
    if hasattr(payload, "model_dump_json"):
        typer.echo(payload.model_dump_json(indent=2))
    else:
        typer.echo(json.dumps(payload, indent=2))


def parse_resolution(text: str) -> tuple[int, int]:
    """ "640x480" -> (640, 480). Raises ValueError on anything else."""
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise ValueError(f'resolution must look like WxH, got "{text}"')
    return int(parts[0]), int(parts[1])


def parse_bounds(text: str) -> tuple[float, float, float, float]:
    values = parse_point(text)
    if len(values) != 4:
        raise ValueError(f'bounds must be "x0,y0,x1,y1", got "{text}"')
    return values


@app.callback()
def configure(
    log_level: str = typer.Option(settings.log_level, "--log-level", help="Logging level for stderr"),
):
    """
    Configures logging for every command. Logs go to stderr, results to stdout.
    """
    try:
        logging.basicConfig(
            level=log_level.upper(),
            format="%(asctime)s %(levelname)s %(name)s: %(message)s",
            stream=sys.stderr,
        )
    except ValueError as e:
        fail(str(e))


@app.command("eval")
def eval_point(
    network: Path = typer.Option(..., "--network", help="Network JSON file"),
    station: str = typer.Option(..., "--station", help="Station id or index"),
    point: str = typer.Option(..., "--point", help='Point as "x,y[,z]"'),
):
    """
    Prints SINR(station, point) with 17 significant digits and whether it is heard.
    Fails at station positions, where SINR is undefined.
    """
    try:
        net = model.load_network(network)
        i = model.station_index(net, station)
        p = parse_point(point)
        value = sinr_core.sinr(net, i, p)
        heard = sinr_core.is_heard(net, i, p)
    except (ValueError, OSError) as e:
        fail(str(e))
    typer.echo(f"{value:.17g}, heard: {'true' if heard else 'false'}")


@app.command("map")
def draw_map(
    network: Path = typer.Option(..., "--network", help="Network JSON file"),
    bounds: str = typer.Option(..., "--bounds", help='"x0,y0,x1,y1"'),
    res: str = typer.Option("256x256", "--res", help="Resolution WxH"),
    mode: str = typer.Option("zones", "--mode", help="zones, sinr_heatmap or qds_tags"),
    fmt: str = typer.Option("ppm", "--format", help="ppm or svg"),
    out: Path = typer.Option(..., "--out", help="Output image file"),
    qds_file: Optional[Path] = typer.Option(None, "--qds", help="QDS file for qds_tags mode"),
):
    """
    Renders a reception map. Zone colours follow the station index; the silent zone is white.
    """
    try:
        net = model.load_network(network)
        width, height = parse_resolution(res)
        spec = RenderSpec(bounds=parse_bounds(bounds), width=width, height=height, mode=mode, fmt=fmt)
        qds = pointloc.qds_deserialize(qds_file.read_bytes()) if qds_file else None
        out.write_bytes(render.render_map(net, spec, qds))
    except (ValueError, OSError) as e:
        fail(str(e))
    typer.echo(f"✓ wrote {out}")


@app.command("intervals")
def intervals(
    network: Path = typer.Option(..., "--network", help="Network JSON file (dim=1)"),
    station: Optional[str] = typer.Option(None, "--station", help="Station id or index; all when omitted"),
):
    """
    Prints exact reception intervals as {lo, hi, lo_closed, hi_closed} with "-inf"/"inf" sentinels.
    """
    try:
        net = model.load_network(network)
        if station is not None:
            i = model.station_index(net, station)
            emit(diagram1d.reception_intervals(net, i).to_json_list())
            return
        emit({
            s.id: diagram1d.reception_intervals(net, i).to_json_list()
            for i, s in enumerate(net.stations)
        })
    except (ValueError, OSError) as e:
        fail(str(e))


@app.command("count-cells")
def count_cells(
    network: Path = typer.Option(..., "--network", help="Network JSON file"),
    station: Optional[str] = typer.Option(None, "--station", help="Station id or index (2D)"),
    silent: bool = typer.Option(False, "--silent", help="Count cells of the zone where nobody is heard (2D)"),
    grid_step: Optional[float] = typer.Option(None, "--grid-step", help="Initial grid step (2D)"),
    bounds: Optional[str] = typer.Option(None, "--bounds", help='"x0,y0,x1,y1" (2D)'),
):
    """
    Exact per-station counts on the line; grid-based counts in the plane.
    """
    try:
        net = model.load_network(network)
        if net.dim == 1:
            emit(diagram1d.count_cells_1d(net))
            return
        if station is None and not silent:
            raise ValueError("give --station or --silent")
        zone = None if silent else model.station_index(net, station)
        box = parse_bounds(bounds) if bounds else None
        emit(geometry.count_cells_2d(net, zone, grid_step=grid_step, bounds=box))
    except (ValueError, OSError) as e:
        fail(str(e))


@app.command("fatness")
def fatness(
    network: Path = typer.Option(..., "--network", help="Network JSON file"),
    station: str = typer.Option(..., "--station", help="Station id or index"),
):
    """Inscribed and enclosing radius bounds of a zone."""
    try:
        net = model.load_network(network)
        emit(pointloc.fatness_bounds(net, model.station_index(net, station)))
    except (ValueError, OSError) as e:
        fail(str(e))


@app.command("area")
def area(
    network: Path = typer.Option(..., "--network", help="Network JSON file (dim=2, N>0)"),
    station: str = typer.Option(..., "--station", help="Station id or index"),
    grid_step: Optional[float] = typer.Option(None, "--grid-step", help="Grid step"),
):
    """Grid estimate of a zone's area, checked against the radius bounds."""
    try:
        net = model.load_network(network)
        report = geometry.area_estimate(net, model.station_index(net, station), grid_step)
    except (ValueError, OSError) as e:
        fail(str(e))
    emit(report)
    if not (report.lower_ok and report.upper_ok):
        raise typer.Exit(code=EXIT_VERIFICATION)


# ============================================================================
# Point location
# ============================================================================


@qds_app.command("build")
def qds_build(
    network: Path = typer.Option(..., "--network", help="Network JSON file (dim=2)"),
    station: str = typer.Option(..., "--station", help="Station id or index"),
    scheme: Scheme = typer.Option(Scheme.C, "--scheme", help="Tagging scheme"),
    epsilon: float = typer.Option(0.1, "--epsilon", help="Accuracy parameter in (0, 1)"),
    extent: Optional[float] = typer.Option(None, "--extent", help="Covered radius; required when N=0"),
    out: Path = typer.Option(..., "--out", help="Output QDS file"),
):
    """
    Builds the QDS of one station and writes it in the SQDS binary format.
    Prints the grid summary.
    """
    try:
        net = model.load_network(network)
        built = pointloc.qds_build(net, model.station_index(net, station), scheme, epsilon, extent)
        out.write_bytes(pointloc.qds_serialize(built))
    except (ValueError, OSError) as e:
        fail(str(e))
    emit({
        "station": built.station,
        "scheme": built.scheme.value,
        "epsilon": built.epsilon,
        "gamma": built.gamma,
        "origin": list(built.origin),
        "extent": list(built.extent),
        "tags": built.counts(),
        "guarantee": pointloc.scheme_guarantee(built.scheme),
    })


@qds_app.command("query")
def qds_query(
    qds_file: Path = typer.Option(..., "--qds", help="QDS file"),
    point: str = typer.Option(..., "--point", help='Point as "x,y"'),
):
    """Prints the tag (plus, minus or question) of the cell containing the point."""
    try:
        built = pointloc.qds_deserialize(qds_file.read_bytes())
        tag = pointloc.qds_query(built, parse_point(point))
    except (ValueError, OSError) as e:
        fail(str(e))
    typer.echo(tag.name.lower())


@qds_app.command("locate")
def qds_locate(
    network: Path = typer.Option(..., "--network", help="Network JSON file (dim=2)"),
    point: str = typer.Option(..., "--point", help='Point as "x,y"'),
    scheme: Scheme = typer.Option(Scheme.C, "--scheme", help="Tagging scheme"),
    epsilon: float = typer.Option(0.1, "--epsilon", help="Accuracy parameter in (0, 1)"),
    extent: Optional[float] = typer.Option(None, "--extent", help="Covered radius; required when N=0"),
):
    """Builds one QDS per station and reports which station is heard at the point."""
    try:
        net = model.load_network(network)
        partition = pointloc.build_partition(net, scheme, epsilon, extent)
        emit(pointloc.locate(net, partition, parse_point(point)))
    except (ValueError, OSError) as e:
        fail(str(e))


# ============================================================================
# Constructions
# ============================================================================


@construct_app.command("two-station")
def construct_two_station(
    network: Path = typer.Option(..., "--network", help="Network JSON file with two stations"),
    station: str = typer.Option("0", "--station", help="Station id or index"),
    exact: bool = typer.Option(False, "--exact", help="Refuse the sampled form when N > 0"),
):
    """Closed-form zone (disk, disk complement or halfplane) in the canonical frame."""
    try:
        net = model.load_network(network)
        emit(geometry.two_station_config(net, model.station_index(net, station), exact=exact))
    except (ValueError, OSError) as e:
        fail(str(e))


@construct_app.command("omega-n")
def construct_omega(
    n: int = typer.Option(..., "--n", help="Number of squares (n >= 2)"),
    out: Optional[Path] = typer.Option(None, "--out", help="Write the network JSON here"),
    grid_step: float = typer.Option(0.1, "--grid-step", help="Initial grid step of the cell count"),
    count: bool = typer.Option(True, "--count/--no-count", help="Count the cells of s0"),
):
    """
    Network in which s0 has n+1 cells, with its verification report and cell count.
    """
    try:
        net, report = geometry.construct_omega_n(n)
        cells = geometry.omega_cell_count(net, report, grid_step) if count and report.feasible else None
        if out is not None:
            out.write_text(model.dump_network(net), encoding="utf-8")
    except (ValueError, OSError) as e:
        fail(str(e))
    payload = {"report": report.model_dump()}
    if cells is not None:
        payload["cells"] = cells.model_dump()
    if out is None:
        payload["network"] = net.model_dump()
    emit(payload)
    if not report.feasible:
        raise typer.Exit(code=EXIT_INFEASIBLE)
    if not (report.r1_passed and report.r2_passed) or (cells is not None and cells.count != n + 1):
        raise typer.Exit(code=EXIT_VERIFICATION)


@construct_app.command("wires")
def construct_wires(
    rho: int = typer.Option(..., "--rho", help="Number of wires"),
    p1: float = typer.Option(..., "--p1", help="Power of the central station"),
    noise: float = typer.Option(1.0, "--noise", help="Background noise N"),
):
    """Central station inside rho nested wires; verifies one cell per ring."""
    try:
        wnet, report = geometry.construct_log_wires(rho, p1, noise)
    except ValueError as e:
        fail(str(e))
    emit({"report": report.model_dump(), "network": wnet.model_dump()})
    if not report.feasible:
        raise typer.Exit(code=EXIT_INFEASIBLE)
    if not report.passed:
        raise typer.Exit(code=EXIT_VERIFICATION)


# ============================================================================
# Verification
# ============================================================================


@app.command("verify")
def run_verify(
    suite: str = typer.Argument(..., help=f"One of: {', '.join(verify.SUITES)}"),
    trials: int = typer.Option(settings.default_trials, "--trials", help="Random instances"),
    seed: int = typer.Option(
        settings.default_seed, "--seed",
        help="Base seed for numpy PCG64 streams; instances are not portable to other generators",
    ),
):
    """
    Runs a verification suite and prints one JSON report per line.
    Exits 0 only when every report passes. Trial t of seed s draws from numpy's
    PCG64 seeded with SeedSequence([s, t]), so (seed, trial) reproduces an
    instance only under numpy.
    """
    try:
        reports = verify.run_suite(suite, trials, seed)
    except ValueError as e:
        fail(str(e))
    for report in reports:
        typer.echo(report.to_json())
    if not all(r.passed for r in reports):
        raise typer.Exit(code=EXIT_VERIFICATION)


def run(argv: Optional[list[str]] = None) -> int:
    """
    Runs the CLI and returns its exit code; usage and other click errors map to 1.
    """
    try:
        code = app(args=argv, prog_name="sinrmap", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except click.Abort:
        return EXIT_USAGE
    return code if isinstance(code, int) else 0
