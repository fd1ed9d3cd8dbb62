"""Command-line client for the compute service.

By default every command talks to an in-process instance of the FastAPI app
over an ASGI test transport, so no server is needed; pass ``--server URL`` to
run against a remote instance instead.  Numeric JSON output carries 12
significant digits, CSV output 9.
"""
from __future__ import annotations

import json
import math
import sys
import warnings
from pathlib import Path

import click

from .errors import MeasureError

JSON_SIG = 12
CSV_SIG = 9


def _client(server: str | None):
    if server:
        import httpx

        return httpx.Client(base_url=server, timeout=300.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

        from .service.app import app

        return TestClient(app)


def _round_sig(x, sig):
    if isinstance(x, float):
        if math.isfinite(x):
            return float(f"{x:.{sig}g}")
        return x
    if isinstance(x, dict):
        return {k: _round_sig(v, sig) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round_sig(v, sig) for v in x]
    return x


def _emit_json(data: dict, out: str | None):
    text = json.dumps(_round_sig(data, JSON_SIG), indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        click.echo(text)


def _measure_payload(measure: str, params: tuple[str, ...]) -> dict:
    parsed = {}
    for item in params:
        if "=" not in item:
            raise MeasureError(f"--param expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        parsed[key] = float(value)
    if measure.startswith("fixture:"):
        return {"fixture": measure[len("fixture:"):], "params": parsed}
    path = Path(measure)
    if not path.exists():
        raise MeasureError(f"measure file not found: {measure}")
    data = json.loads(path.read_text())
    return {"atoms": data.get("atoms", []), "pieces": data.get("pieces", [])}


def _post(ctx, endpoint: str, payload: dict) -> dict:
    client = _client(ctx.obj.get("server"))
    resp = client.post(endpoint, json=payload)
    if resp.status_code >= 500:
        click.echo(f"internal error: {resp.text}", err=True)
        sys.exit(1)
    if resp.status_code >= 400:
        detail = resp.json().get("detail", resp.text)
        click.echo(f"validation error: {detail}", err=True)
        sys.exit(2)
    return resp.json()


def _fmt_csv(x: float) -> str:
    return f"{x:.{CSV_SIG}g}"


@click.group()
@click.option("--server", default=None, metavar="URL",
              help="Base URL of a running service; defaults to in-process.")
@click.pass_context
def main(ctx, server):
    """Indicators of angular measures, critical types, and random zero sets."""
    ctx.ensure_object(dict)
    ctx.obj["server"] = server


@main.command()
@click.option("--measure", required=True, help="Measure JSON file or fixture:<name>.")
@click.option("--rho", required=True, type=float)
@click.option("--grid", default=None, type=int, help="Grid resolution (default 8192).")
@click.option("--param", multiple=True, help="Fixture parameter key=value.")
@click.option("--out", default=None, help="CSV output path (theta,h rows).")
@click.pass_context
def indicator(ctx, measure, rho, grid, param, out):
    """Sample the indicator of a measure on a uniform grid."""
    payload = {"measure": _measure_payload(measure, param), "rho": rho, "grid": grid}
    data = _post(ctx, "/indicator", payload)
    if out:
        lines = [
            f"# rho = {_fmt_csv(data['rho'])}",
            f"# total_mass = {_fmt_csv(data['total_mass'])}",
            f"# rho_moment = {_fmt_csv(data['moment'][0])}{data['moment'][1]:+.9g}j",
            "theta,h",
        ]
        lines += [f"{_fmt_csv(t)},{_fmt_csv(v)}"
                  for t, v in zip(data["theta"], data["h"])]
        Path(out).write_text("\n".join(lines) + "\n")
        click.echo(f"wrote {len(data['theta'])} rows to {out}")
    else:
        _emit_json(data, None)


@main.command()
@click.option("--measure", required=True)
@click.option("--rho", required=True, type=float)
@click.option("--grid", default=None, type=int)
@click.option("--param", multiple=True)
@click.option("--out", default=None)
@click.pass_context
def balance(ctx, measure, rho, grid, param, out):
    """Balanced maximum, circumcenter data, and balancedness flags."""
    payload = {"measure": _measure_payload(measure, param), "rho": rho, "grid": grid}
    _emit_json(_post(ctx, "/balance", payload), out)


@main.command()
@click.option("--measure", required=True)
@click.option("--rho", required=True, type=float)
@click.option("--grid", default=None, type=int)
@click.option("--param", multiple=True)
@click.option("--with-multiplier", "multiplier", default=None,
              help="JSON file with a piecewise-trig competitor.")
@click.option("--report", "fmt", type=click.Choice(["json", "table"]), default="json")
@click.option("--out", default=None)
@click.pass_context
def sigma(ctx, measure, rho, grid, param, multiplier, fmt, out):
    """Critical zero-set type and the uniqueness-type bracket."""
    payload = {"measure": _measure_payload(measure, param), "rho": rho, "grid": grid}
    if multiplier:
        payload["multiplier"] = json.loads(Path(multiplier).read_text())
    data = _post(ctx, "/sigma", payload)
    if fmt == "table":
        rows = [("sigma_z", data["sigma_z"]),
                ("sigma_u_lower", data["sigma_u"][0]),
                ("sigma_u_upper", data["sigma_u"][1]),
                ("equality", data["equality"])]
        text = "\n".join(f"{k:<16} {v}" for k, v in
                         ((k, _round_sig(v, JSON_SIG)) for k, v in rows))
        if out:
            Path(out).write_text(text + "\n")
        else:
            click.echo(text)
    else:
        _emit_json(data, out)


@main.command()
@click.option("--theorem", required=True, type=click.Choice(["7", "als1"]))
@click.option("--rho", required=True, type=float)
@click.option("--emit-extremals", "emit_dir", default=None,
              help="Directory for extremal measure JSON and profile CSV.")
@click.pass_context
def bounds(ctx, theorem, rho, emit_dir):
    """Closed-form density range with extremal measures."""
    data = _post(ctx, "/bounds", {"theorem": theorem, "rho": rho})
    if emit_dir:
        d = Path(emit_dir)
        d.mkdir(parents=True, exist_ok=True)
        (d / "lower_measure.json").write_text(json.dumps(data["lower_measure"], indent=2))
        (d / "upper_measure.json").write_text(json.dumps(data["upper_measure"], indent=2))
        csv = ["theta,h"] + [f"{_fmt_csv(t)},{_fmt_csv(v)}" for t, v in
                             zip(data["profile_theta"], data["profile_h"])]
        (d / "h_star.csv").write_text("\n".join(csv) + "\n")
    _emit_json({"lower": data["lower"], "upper": data["upper"]}, None)


@main.command()
@click.option("--measure", required=True)
@click.option("--rho", required=True, type=float)
@click.option("--density", required=True, type=float)
@click.option("--count", required=True, type=int)
@click.option("--seed", default=0, type=int)
@click.option("--param", multiple=True)
@click.option("--out", required=True, help="CSV output (modulus,argument rows).")
@click.pass_context
def randomize(ctx, measure, rho, density, count, seed, param, out):
    """Draw a seeded random point set with the measure's angular statistics."""
    payload = {"measure": _measure_payload(measure, param), "rho": rho,
               "density": density, "count": count, "seed": seed}
    data = _post(ctx, "/randomize", payload)
    lines = [f"# rho = {rho:g}", f"# density = {density:g}", f"# seed = {seed}",
             "modulus,argument"]
    lines += [f"{_fmt_csv(m)},{_fmt_csv(a)}"
              for m, a in zip(data["moduli"], data["arguments"])]
    Path(out).write_text("\n".join(lines) + "\n")
    click.echo(f"wrote {len(data['moduli'])} points to {out}")


@main.command()
@click.option("--measure", required=True)
@click.option("--rho", required=True, type=float)
@click.option("--density", required=True, type=float)
@click.option("--normalize/--no-normalize", default=False,
              help="Scale the measure to unit mass before classifying.")
@click.option("--param", multiple=True)
@click.option("--out", default=None)
@click.pass_context
def classify(ctx, measure, rho, density, normalize, param, out):
    """Classify the randomized set against the growth-type-1 threshold."""
    payload = {"measure": _measure_payload(measure, param), "rho": rho,
               "density": density, "normalize": normalize}
    _emit_json(_post(ctx, "/classify", payload), out)


@main.command("verify-density")
@click.option("--points", required=True, help="CSV of modulus,argument rows.")
@click.option("--arcs", required=True, help='JSON file {"arcs": [[a, b], ...]}.')
@click.option("--checkpoints", required=True,
              help="Comma-separated radii, e.g. 50,100,200.")
@click.option("--measure", required=True)
@click.option("--rho", required=True, type=float)
@click.option("--density", required=True, type=float)
@click.option("--param", multiple=True)
@click.option("--out", default=None, help="CSV output path (default stdout).")
@click.pass_context
def verify_density(ctx, points, arcs, checkpoints, measure, rho, density, param, out):
    """Empirical angular-density table for a stored point set."""
    pts = []
    for line in Path(points).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#") or line.startswith("modulus"):
            continue
        m, a = line.split(",")
        pts.append((float(m), float(a)))
    arc_list = json.loads(Path(arcs).read_text())["arcs"]
    cps = [float(x) for x in checkpoints.split(",")]
    payload = {"points": pts, "measure": _measure_payload(measure, param),
               "rho": rho, "density": density, "arcs": arc_list,
               "checkpoints": cps}
    data = _post(ctx, "/verify-density", payload)
    lines = ["R,alpha,beta,ratio,predicted,deviation"]
    for row in data["rows"]:
        lines.append(",".join(_fmt_csv(row[k])
                              for k in ("R", "alpha", "beta", "ratio",
                                        "predicted", "deviation")))
    text = "\n".join(lines)
    if out:
        Path(out).write_text(text + "\n")
    else:
        click.echo(text)


@main.group()
def fixtures():
    """Fixture registry."""


@fixtures.command("list")
@click.pass_context
def fixtures_list(ctx):
    """List named measure fixtures and their parameters."""
    client = _client(ctx.obj.get("server"))
    resp = client.get("/fixtures")
    _emit_json(resp.json(), None)


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8000, type=int)
def serve(host, port):
    """Run the compute service."""
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=host, port=port)


def entrypoint():
    try:
        main(obj={})
    except MeasureError as exc:
        click.echo(f"validation error: {exc}", err=True)
        sys.exit(2)


if __name__ == "__main__":
    entrypoint()
