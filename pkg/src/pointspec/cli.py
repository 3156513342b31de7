"""``pointspec`` command line: tables on stdout, JSON reports and CSV plot data on request."""
from __future__ import annotations

import csv
import functools
import json
import sys

import click
import numpy as np

from pointspec.config import REGISTRY, DEFAULT_PARAMS, Configuration, parse_spec, registry_get
from pointspec.errors import PointSpecError
from pointspec.laurent import laurent_expansion, resolvent_kernel
from pointspec.search import maximize_zero_multiplicity, scan_real_axis
from pointspec.spectrum import find_negative_eigenvalues
from pointspec.zero_modes import classify_zero_energy

EXIT_COMPUTE = 1


# encoding


def _cplx(x) -> list[float]:
    x = complex(x)
    return [float(x.real), float(x.imag)]


def _matrix(m: np.ndarray) -> list:
    """Complex matrix as nested [re, im] pairs."""
    return [[_cplx(v) for v in row] for row in np.asarray(m)]


def _real_matrix(m: np.ndarray) -> list:
    m = np.asarray(m)
    if np.iscomplexobj(m):
        return _matrix(m)
    return [[float(v) for v in row] for row in m]


def _config_dict(config: Configuration) -> dict:
    d = config.to_dict()
    d["n"] = config.n
    return d


def _bound_states_dict(spectrum) -> list[dict]:
    return [
        {
            "lambda": s.lam,
            "energy": s.energy,
            "multiplicity": s.multiplicity,
            "coefficient_basis": _real_matrix(s.coefficient_basis),
        }
        for s in spectrum
    ]


def _zero_modes_dict(rep) -> dict:
    return {
        "e": rep.e,
        "r": rep.r,
        "kind": rep.kind.value,
        "bases": {
            "eigen": _real_matrix(rep.eigen_basis),
            "resonance": _real_matrix(rep.resonance_basis),
        },
        "borderline": rep.borderline,
    }


def _laurent_dict(exp) -> dict:
    return {
        "a_minus2": _matrix(exp.a_minus2),
        "a_minus1": _matrix(exp.a_minus1),
        "method": exp.method,
        "case": exp.case,
        "radius": exp.radius,
        "discrepancy": dict(sorted(exp.discrepancy.items())),
    }


def _write_json(path: str, payload: dict) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=False)
            fh.write("\n")
    except OSError as exc:
        raise click.ClickException(f"cannot write {path}: {exc}") from exc


def _write_csv(path: str, header: list[str], rows) -> None:
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for row in rows:
                w.writerow([repr(float(v)) for v in row])
    except OSError as exc:
        raise click.ClickException(f"cannot write {path}: {exc}") from exc


def _floats(text: str, count: int | None, what: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise click.BadParameter(f"{what} must be comma-separated numbers, got {text!r}") from None
    if count is not None and len(vals) != count:
        raise click.BadParameter(f"{what} needs {count} values, got {len(vals)}")
    return vals


def _guard(fn):
    """Library errors become exit code 1 with a one-line diagnostic."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (PointSpecError, np.linalg.LinAlgError) as exc:
            click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
            sys.exit(EXIT_COMPUTE)

    return wrapper


class ConfigType(click.ParamType):
    name = "config"

    def convert(self, value, param, ctx):
        if isinstance(value, Configuration):
            return value
        try:
            return parse_spec(value)
        except PointSpecError as exc:
            click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
            sys.exit(EXIT_COMPUTE)


CONFIG = ConfigType()


# commands


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Spectral analysis of point interactions in R^3.

    CONFIG is a registry name (``tetrahedron``), a name with parameters
    (``two_center:1,-1,-1``) or a JSON configuration file.
    """


def _print_states(spectrum) -> None:
    if not len(spectrum):
        click.echo("no negative eigenvalues")
        return
    click.echo(f"{'lambda':>14} {'energy':>16} {'mult':>5}")
    for s in spectrum:
        click.echo(f"{s.lam:14.6f} {s.energy:16.4f} {s.multiplicity:5d}")


@main.command()
@click.argument("config", type=CONFIG)
@click.option("--tol", default=1e-10, show_default=True, help="Relative kernel tolerance.")
@click.option("--method", type=click.Choice(["closed", "contour", "both"]), default="both", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write a JSON report here.")
@_guard
def analyze(config, tol, method, out):
    """Bound states, zero-energy multiplicities and the singular Laurent part."""
    spectrum = find_negative_eigenvalues(config, tol=tol)
    rep = classify_zero_energy(config, tol)
    exp = laurent_expansion(config, method, tol)

    click.echo(f"configuration: {config.label or 'unnamed'} (N = {config.n})")
    _print_states(spectrum)
    click.echo(f"zero energy: e = {rep.e}, r = {rep.r} ({rep.kind.value})")
    if rep.borderline:
        click.echo("warning: a singular value of Gamma_0 lies close to the threshold")
    click.echo(f"|A_-2|max = {np.abs(exp.a_minus2).max():.6g}, |A_-1|max = {np.abs(exp.a_minus1).max():.6g}")
    for key, val in sorted(exp.discrepancy.items()):
        click.echo(f"discrepancy {key}: {val:.3e}")
    for line in spectrum.diagnostics:
        click.echo(f"note: {line}")

    if out:
        _write_json(
            out,
            {
                "config": _config_dict(config),
                "bound_states": _bound_states_dict(spectrum),
                "zero_modes": _zero_modes_dict(rep),
                "laurent": _laurent_dict(exp),
                "diagnostics": {
                    "lambda_max": spectrum.lambda_max,
                    "notes": list(spectrum.diagnostics),
                    "tol": tol,
                    "gamma0_singular_values": [float(s) for s in rep.gamma0_singular_values],
                },
            },
        )


@main.command()
@click.argument("config", type=CONFIG)
@click.option("--lambda-max", type=float, default=None, help="Upper end of the search in lambda.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@_guard
def spectrum(config, lambda_max, out):
    """Table of negative eigenvalues -lambda^2."""
    res = find_negative_eigenvalues(config, lambda_max)
    _print_states(res)
    if out:
        _write_json(out, {"config": _config_dict(config), "bound_states": _bound_states_dict(res),
                          "diagnostics": {"lambda_max": res.lambda_max, "notes": list(res.diagnostics)}})


def _print_matrix(name: str, m: np.ndarray) -> None:
    click.echo(f"{name} =")
    for row in m:
        click.echo("  " + "  ".join(f"{v.real:+.8f}{v.imag:+.8f}j" for v in row))


@main.command()
@click.argument("config", type=CONFIG)
@click.option("--method", type=click.Choice(["closed", "contour", "both"]), default="both", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@_guard
def laurent(config, method, out):
    """Coefficients A_-2 and A_-1 of Gamma(z)^-1 at z = 0."""
    exp = laurent_expansion(config, method)
    _print_matrix("A_-2", exp.a_minus2)
    _print_matrix("A_-1", exp.a_minus1)
    if exp.discrepancy:
        click.echo(f"max discrepancy: {max(exp.discrepancy.values()):.3e}")
    if out:
        _write_json(out, {"config": _config_dict(config), "laurent": _laurent_dict(exp)})


@main.command()
@click.argument("config", type=CONFIG)
@click.option("--z", "z_text", required=True, help="Spectral parameter as re,im.")
@click.option("--x", "x_text", required=True, help="First point as x1,x2,x3.")
@click.option("--xp", "xp_text", required=True, help="Second point as x1,x2,x3.")
@click.option("--grid", type=click.Path(dir_okay=False), default=None,
              help="Also write CSV samples with x moved along --axis.")
@click.option("--axis", type=click.Choice(["x", "y", "z"]), default="x", show_default=True)
@click.option("--extent", type=float, default=2.0, show_default=True)
@click.option("--points", type=click.IntRange(min=2), default=201, show_default=True)
@_guard
def kernel(config, z_text, x_text, xp_text, grid, axis, extent, points):
    """Resolvent kernel (H - z^2)^-1(x, x')."""
    z = complex(*_floats(z_text, 2, "--z"))
    x = np.array(_floats(x_text, 3, "--x"))
    xp = np.array(_floats(xp_text, 3, "--xp"))
    val = resolvent_kernel(config, z, x, xp)
    click.echo(f"kernel = {val.real:.12g} {val.imag:+.12g}j")
    if grid:
        e = np.zeros(3)
        e["xyz".index(axis)] = 1.0
        rows = []
        for t in np.linspace(-extent, extent, points):
            pt = x + t * e
            try:
                v = resolvent_kernel(config, z, pt, xp)
            except PointSpecError:
                # on a center or on x'; leave a hole in the curve
                v = complex(np.nan, np.nan)
            rows.append((t, *pt, v.real, v.imag))
        _write_csv(grid, ["t", "x1", "x2", "x3", "re", "im"], rows)


@main.command()
@click.option("--n", "n", type=click.IntRange(min=2), required=True, help="Number of centers.")
@click.option("--budget", type=click.IntRange(min=1), default=10_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@_guard
def search(n, budget, seed, out):
    """Anneal center positions towards the largest zero-eigenvalue multiplicity."""
    res = maximize_zero_multiplicity(n, budget, seed)
    click.echo(f"n = {n}, seed = {seed}: e = {res.e}, r = {res.r} (target {res.target}, objective {res.objective:.3e})")
    for y, a in zip(res.config.centers, res.config.alphas):
        click.echo(f"  y = ({y[0]:+.10f}, {y[1]:+.10f}, {y[2]:+.10f})  alpha = {a:+.12f}")
    if out:
        rep = classify_zero_energy(res.config)
        _write_json(out, {
            "config": _config_dict(res.config),
            "zero_modes": _zero_modes_dict(rep),
            "diagnostics": {"seed": seed, "budget": budget, "target": res.target,
                            "objective": res.objective, "history": [list(h) for h in res.history]},
        })


@main.group()
def registry():
    """Benchmark configurations."""


@registry.command("list")
def registry_list():
    for name, entry in REGISTRY.items():
        params = ",".join(entry.parameters) or "-"
        click.echo(f"{name:22s} {params:8s} {entry.description}")


@registry.command("show")
@click.argument("name")
@click.option("--params", default=None, help="Comma-separated parameters (default: the registry defaults).")
@_guard
def registry_show(name, params):
    p = DEFAULT_PARAMS.get(name, ()) if params is None else _floats(params, None, "--params")
    config = registry_get(name, p)
    click.echo(json.dumps(config.to_dict(), indent=2))


@main.command()
@click.argument("config", type=CONFIG)
@click.option("--range", "range_text", default="0.01,10", show_default=True, help="z interval as a,b.")
@click.option("--points", type=click.IntRange(min=2), default=1000, show_default=True)
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None,
              help="Write the sampled smallest singular values here.")
@_guard
def scan(config, range_text, points, csv_path):
    """Smallest singular value of Gamma(z) along the positive real axis."""
    a, b = _floats(range_text, 2, "--range")
    if not 0 < a < b:
        raise click.BadParameter("--range needs 0 < a < b")
    res = scan_real_axis(config, a, b, points)
    click.echo(f"min singular value {res.min_value:.6e} at z = {res.location:.6f}")
    if csv_path:
        _write_csv(csv_path, ["z", "smin"], zip(res.z, res.values))


if __name__ == "__main__":  # pragma: no cover
    main()
