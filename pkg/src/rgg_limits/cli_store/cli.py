"""``rgg-limits`` command line interface.

Subcommands: ``sample``, ``solve``, ``estimate``, ``proptest``, ``report``.
Global flags (before the subcommand): ``--seed``, ``--workers``,
``--out DIR``, ``--format {csv,jsonl}``, ``--config FILE``.

Every option can also be set through environment variables with the
``RGG_`` prefix: group flags as ``RGG_SEED``, ``RGG_WORKERS``, ``RGG_OUT``,
``RGG_FORMAT``; subcommand options as ``RGG_<COMMAND>_<OPTION>`` (for
example ``RGG_ESTIMATE_MODE=box``).  A ``--config`` INI file supplies
defaults the same way: a ``[global]`` section for the group flags and one
section per subcommand; explicit command-line flags always win.

Results land in the output directory: full records appended to
``records.jsonl`` (one JSON object per line, append-only), estimator rows
appended to ``summary.csv`` under the fixed column order
``mode,functional,d,lambda,s,n,t,reps,mean,stderr,seed,elapsed_ms``, and
property-test failures to ``failures.jsonl``.  Exit status is nonzero
when a property run finds violations or a command errors.
"""

from __future__ import annotations

import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor

import click
import numpy as np

from .. import __version__
from ..estimators import (CSV_COLUMNS, DEFAULT_EXPECTED_CAP,
                          estimate_rho_box, estimate_rho_cluster,
                          hexagon_partition_density, lattice_covering_density,
                          lattice_packing_density, lln_dense_run,
                          lln_thermo_run, merge_reports, rho_curve_sweep,
                          sweep_structure_flags, zeta_star_lower)
from ..euclid_opt import (bipartite_matching, bipartite_tsp, min_matching,
                          mst, parse_weight, tsp)
from ..geograph import build_graph, component_count, edge_list_text, \
    isolated_count
from ..invariants import (SolveResult, clique_cover_number, domination_number,
                          edge_cover_number, eternal_domination_number,
                          h_packing_number, independence_number,
                          vertex_cover_number)
from ..pointproc import (PointSet, sample_binomial, sample_homogeneous_box,
                         segment_mixture, transform, uniform_cube)
from ..propharness import (PROPERTY_IDS, applicable_functionals, run_all,
                           run_property, write_failures_jsonl)
from .store import (ExperimentConfig, ResultRecord, append_jsonl, load_jsonl,
                    read_config_file, to_jsonable, write_csv)

log = logging.getLogger("rgg_limits.cli")

_PARAM_SOLVERS = {
    "alpha": lambda g, m: independence_number(g, mode=m),
    "gamma": lambda g, m: domination_number(g, mode=m),
    "theta": lambda g, m: clique_cover_number(g, mode=m),
    "gammainf": lambda g, m: eternal_domination_number(g, mode=m),
    "vc": lambda g, m: vertex_cover_number(g, mode=m),
    "psi:K2": lambda g, m: h_packing_number(g, "K2"),
    "psi:K3": lambda g, m: h_packing_number(g, "K3"),
    "psi:P3": lambda g, m: h_packing_number(g, "P3"),
    "eta": lambda g, m: edge_cover_number(g),
}

_ESTIMATE_MODES = ("box", "cluster", "thermo", "dense", "sweep", "density")
_DENSITY_KINDS = ("packing", "covering", "hexagon", "zeta-star")

# short aliases accepted wherever a registry functional is expected
_FUNCTIONAL_ALIASES = {
    "alpha": "independence", "gamma": "domination", "theta": "clique_cover",
    "gammainf": "eternal_domination", "vc": "vertex_cover",
    "psi:K2": "matching", "psi:K3": "triangle_packing",
    "psi:P3": "path3_packing", "eta": "edge_cover", "sigma": "isolated",
    "comps": "components",
}


def _canon_functional(name):
    return _FUNCTIONAL_ALIASES.get(name, name) if name else name


def _load_config_cb(ctx, param, value):
    if not value:
        return None
    try:
        dm = read_config_file(value)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    # repeatable options take comma-separated lists in config files
    for name, section in dm.items():
        cmd = ctx.command.commands.get(name) if isinstance(section, dict) \
            else None
        if cmd is None:
            continue
        multi = {p.name for p in cmd.params if getattr(p, "multiple", False)}
        for key, raw in section.items():
            if key in multi and isinstance(raw, str):
                section[key] = [tok.strip() for tok in raw.split(",")
                                if tok.strip()]
    ctx.default_map = {**dm, **(ctx.default_map or {})}
    return value


@click.group(context_settings={"auto_envvar_prefix": "RGG",
                               "help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="rgg-limits")
@click.option("--config", "config_file", is_eager=True, expose_value=False,
              callback=_load_config_cb,
              type=click.Path(exists=True, dir_okay=False),
              help="INI file with a [global] section and one section per "
                   "subcommand; explicit flags override it.")
@click.option("--seed", type=int, default=0, show_default=True,
              help="Master seed; all randomness derives from it.")
@click.option("--workers", type=int, default=0, show_default=True,
              help="Process pool size (0/1 = sequential). Results are "
                   "identical for any worker count.")
@click.option("--out", type=click.Path(file_okay=False), default="results",
              show_default=True, help="Output directory.")
@click.option("--format", "format", type=click.Choice(["csv", "jsonl"]),
              default="jsonl", show_default=True,
              help="What to echo to stdout: summary CSV lines or the full "
                   "JSON records.")
@click.pass_context
def main(ctx, seed, workers, out, format):
    """Random geometric graph functionals: solvers, estimators, checks.

    Options read environment variables prefixed RGG_ (RGG_SEED,
    RGG_ESTIMATE_MODE, ...).
    """
    logging.basicConfig(level=logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    ctx.obj = {"seed": seed, "workers": workers, "out": out, "fmt": format}


def _config_from_ctx(ctx, command: str, params: dict) -> ExperimentConfig:
    flat = {}
    for k, v in params.items():
        if v is None or v == ():
            continue
        flat[k] = list(v) if isinstance(v, tuple) else v
    return ExperimentConfig(command=command, params=flat,
                            seed=ctx.obj["seed"], out=ctx.obj["out"],
                            workers=ctx.obj["workers"])


def _emit(ctx, config: ExperimentConfig, payload, rows=()):
    record = ResultRecord.create(config, payload, version=__version__)
    outdir = ctx.obj["out"]
    os.makedirs(outdir, exist_ok=True)
    append_jsonl(os.path.join(outdir, "records.jsonl"), [record])
    rows = [dict(r) for r in rows]
    if rows:
        write_csv(os.path.join(outdir, "summary.csv"), rows, CSV_COLUMNS)
    if ctx.obj["fmt"] == "csv" and rows:
        click.echo(",".join(CSV_COLUMNS))
        for row in rows:
            click.echo(",".join(str(row.get(c, "")) for c in CSV_COLUMNS))
    else:
        click.echo(json.dumps(record.to_json_dict(), sort_keys=True))
    return record


def _seed_override(f):
    """Let ``--seed`` trail the subcommand as well as lead it."""
    return click.option("--seed", "seed_override", type=int, default=None,
                        help="Override the global --seed.")(f)


def _apply_seed(ctx, seed_override):
    if seed_override is not None:
        ctx.obj["seed"] = seed_override


def _load_points(path) -> PointSet:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return PointSet.from_csv(fh.read())
    except (OSError, ValueError) as exc:
        raise click.UsageError(f"cannot read point set {path!r}: {exc}")


# ---------------------------------------------------------------------------
# sample


@main.command()
@click.option("--d", "d", type=int, required=True, help="Dimension.")
@click.option("--n", type=int, default=None,
              help="Sample n points from the uniform law on the unit cube.")
@click.option("--lam", "--lambda", "lam", type=float, default=None,
              help="Homogeneous intensity (with --s: Poisson box sample).")
@click.option("--s", type=float, default=None, help="Box side length.")
@click.option("--output", type=click.Path(dir_okay=False), default=None,
              help="Point-set CSV path (default: <out>/sample_<id>.csv).")
@click.option("--edges", "edges", type=float, default=None,
              help="Also write the edge list of the graph at this radius.")
@_seed_override
@click.pass_context
def sample(ctx, d, n, lam, s, output, edges, seed_override):
    """Draw a point set and write it as CSV (header ``dim,d``)."""
    _apply_seed(ctx, seed_override)
    seed = ctx.obj["seed"]
    dim, edges_r = d, edges
    if n is not None:
        ps = sample_binomial(uniform_cube(dim), n, seed)
        how = {"law": "uniform-cube", "n": n}
    elif lam is not None and s is not None:
        ps = sample_homogeneous_box(lam, s, dim, seed)
        how = {"law": "homogeneous-box", "lambda": lam, "s": s}
    else:
        raise click.UsageError("need --n, or --lam together with --s")
    config = _config_from_ctx(ctx, "sample", {"d": dim, **how})
    if output is None:
        os.makedirs(ctx.obj["out"], exist_ok=True)
        output = os.path.join(ctx.obj["out"],
                              f"sample_{config.identity()}.csv")
    with open(output, "w", encoding="utf-8") as fh:
        fh.write(ps.to_csv())
    payload = {"kind": "sample", "path": output, "dim": dim, "count": len(ps),
               **how}
    if edges_r is not None:
        epath = os.path.splitext(output)[0] + ".edges"
        with open(epath, "w", encoding="utf-8") as fh:
            fh.write(edge_list_text(build_graph(ps, edges_r)))
        payload["edges_path"] = epath
    _emit(ctx, config, payload)


# ---------------------------------------------------------------------------
# solve


def _count_result(value: int, elapsed: float) -> SolveResult:
    v = float(value)
    return SolveResult(value=v, exact=True, lower=v, upper=v, witness=None,
                       elapsed=elapsed)


@main.command()
@click.option("--param", type=click.Choice(sorted(_PARAM_SOLVERS) +
                                           ["sigma", "comps"]), default=None,
              help="Graph functional to solve.")
@click.option("--functional", type=click.Choice(["tsp", "mm", "bm", "btsp",
                                                 "mst"]), default=None,
              help="Weighted Euclidean functional to solve.")
@click.option("--input", "input", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Point-set CSV (header dim,d).")
@click.option("--input2", "input2", default=None,
              type=click.Path(exists=True, dir_okay=False),
              help="Second point set (bipartite functionals).")
@click.option("--radius", type=float, default=None,
              help="Graph radius (--param route).")
@click.option("--scale", type=float, default=1.0, show_default=True,
              help="Evaluate on points divided by this scale "
                   "(--functional route).")
@click.option("--weight", default="pow:1", show_default=True,
              help="Weight spec, e.g. pow:1.5, indicator, trunc:pow:2:0.8.")
@click.option("--mode", type=click.Choice(["exact", "heur"]),
              default="exact", show_default=True)
@_seed_override
@click.pass_context
def solve(ctx, param, functional, input, input2, radius, scale,
          weight, mode, seed_override):
    """Solve one functional on a stored point set; prints a JSON record."""
    _apply_seed(ctx, seed_override)
    if (param is None) == (functional is None):
        raise click.UsageError("give exactly one of --param / --functional")
    input_path, input2_path = input, input2
    ps = _load_points(input_path)
    mode_name = "heuristic" if mode == "heur" else "exact"
    t0 = time.perf_counter()
    if param is not None:
        if radius is None:
            raise click.UsageError("--param needs --radius")
        g = build_graph(ps, radius)
        try:
            if param == "sigma":
                res = _count_result(isolated_count(g), time.perf_counter() - t0)
            elif param == "comps":
                res = _count_result(component_count(g),
                                    time.perf_counter() - t0)
            else:
                res = _PARAM_SOLVERS[param](g, mode_name)
        except ValueError as exc:
            raise click.ClickException(str(exc))
        out = res.to_json_dict()
    else:
        try:
            w = parse_weight(weight)
        except ValueError as exc:
            raise click.UsageError(f"bad weight spec: {exc}")
        if scale <= 0:
            raise click.UsageError("--scale must be positive")
        pts = transform(ps, 1.0 / scale)
        two_sided = functional in ("bm", "btsp")
        if two_sided and input2_path is None:
            raise click.UsageError(f"--functional {functional} needs --input2")
        pts2 = transform(_load_points(input2_path), 1.0 / scale) \
            if two_sided else None
        try:
            if functional == "tsp":
                r = tsp(pts, w, mode=mode_name)
                witness = list(r.order)
            elif functional == "mm":
                r = min_matching(pts, w, mode=mode_name)
                witness = [list(p) for p in r.pairs]
            elif functional == "bm":
                r = bipartite_matching(pts, pts2, w)
                witness = [list(p) for p in r.pairs]
            elif functional == "btsp":
                r = bipartite_tsp(pts, pts2, w, mode=mode_name)
                witness = list(r.order)
            else:
                r = mst(pts, w)
                witness = [list(e) for e in r.edges]
        except ValueError as exc:
            raise click.ClickException(str(exc))
        lower = getattr(r, "lower", r.weight if r.exact else 0.0)
        out = {"value": r.weight, "exact": r.exact, "lower": lower,
               "upper": r.weight, "witness": witness,
               "elapsed_ms": round(r.elapsed * 1000.0, 3)}
    config = _config_from_ctx(ctx, "solve", {
        "param": param, "functional": functional, "input": input_path,
        "input2": input2_path, "radius": radius, "scale": scale,
        "weight": weight if functional else None, "mode": mode})
    click.echo(json.dumps(to_jsonable(out), sort_keys=True))
    record = ResultRecord.create(
        config, {"kind": "solve", **to_jsonable(out)}, version=__version__)
    os.makedirs(ctx.obj["out"], exist_ok=True)
    append_jsonl(os.path.join(ctx.obj["out"], "records.jsonl"), [record])


# ---------------------------------------------------------------------------
# estimate (box / cluster / thermo / dense / sweep / density)


def _split_reps(reps: int, workers: int):
    """Contiguous (offset, count) chunks covering range(reps)."""
    edges = np.linspace(0, reps, workers + 1).astype(int)
    return [(int(a), int(b - a)) for a, b in zip(edges[:-1], edges[1:])
            if b > a]


def _rho_chunk(args):
    which, functional, dim, lam, s, reps, seed, solver, cap, off = args
    if which == "box":
        return estimate_rho_box(functional, dim, lam, s, reps, seed,
                                solver=solver, expected_cap=cap,
                                rep_offset=off)
    # the cluster estimator sizes its own window and is always exact, so
    # the s / solver / cap slots do not apply
    return estimate_rho_cluster(functional, dim, lam, reps, seed,
                                rep_offset=off)


def _lln_chunk(args):
    which, functional, mu_kind, dim, t, n_grid, reps, seed, solver, \
        weight_spec, off = args
    mu = _make_mu(mu_kind, dim)
    w = parse_weight(weight_spec) if weight_spec else None
    if which == "thermo":
        return lln_thermo_run(functional, mu, t, n_grid, reps, seed,
                              solver=solver, weight=w, rep_offset=off)
    return lln_dense_run(functional, mu, None, n_grid, reps, seed,
                         solver=solver, weight=w, rep_offset=off)


def _make_mu(kind: str, dim: int):
    if kind == "uniform":
        return uniform_cube(dim)
    a = np.full(dim, -0.5)
    b = np.full(dim, 0.5)
    return segment_mixture(dim, [(a, b, 1.0)])


def _parallel_reports(ctx, chunk_fn, args_base, reps: int):
    """Run an estimator whole or in rep chunks; merged result is identical.

    ``args_base`` is the chunk-function argument tuple without the trailing
    rep offset; for chunked runs the reps slot is replaced per chunk.
    """
    workers = ctx.obj["workers"]
    if workers <= 1:
        out = chunk_fn(tuple(args_base) + (0,))
        return out if isinstance(out, list) else [out]
    argv = []
    for off, cnt in _split_reps(reps, workers):
        a = list(args_base)
        a[_REPS_SLOT[a[0]]] = cnt
        argv.append(tuple(a) + (off,))
    with ProcessPoolExecutor(max_workers=len(argv)) as pool:
        results = list(pool.map(chunk_fn, argv))
    if isinstance(results[0], list):
        return [merge_reports([res[i] for res in results])
                for i in range(len(results[0]))]
    return [merge_reports(results)]


_REPS_SLOT = {"box": 5, "cluster": 5, "thermo": 6, "dense": 6}


@main.command()
@click.option("--mode", type=click.Choice(_ESTIMATE_MODES), required=True)
@click.option("--functional", default=None,
              help="Registry name (independence, domination, ...) or short "
                   "alias (alpha, gamma, sigma, ...); for thermo/dense also "
                   "tsp, mm, mst.")
@click.option("--d", "d", type=int, default=1, show_default=True)
@click.option("--lam", "--lambda", "lam", type=float, multiple=True,
              help="Intensity; repeatable for --mode sweep.")
@click.option("--s", type=float, default=40.0, show_default=True,
              help="Box side (box/cluster/sweep) or density window size.")
@click.option("--t", type=float, default=None,
              help="Thermodynamic constant n*r^d (thermo mode).")
@click.option("--n", "n", type=int, multiple=True,
              help="Sample sizes; repeatable (thermo/dense grid).")
@click.option("--reps", type=int, default=100, show_default=True)
@click.option("--solver", type=click.Choice(["exact", "heuristic"]),
              default="exact", show_default=True)
@click.option("--weight", default=None,
              help="Weight spec for tsp/mm/mst runs.")
@click.option("--mu", "mu", type=click.Choice(["uniform", "segment"]),
              default="uniform", show_default=True,
              help="Sampling law: uniform cube, or the unit-cube diagonal "
                   "segment (singular part).")
@click.option("--which", type=click.Choice(_DENSITY_KINDS), default=None,
              help="Deterministic density to compute (density mode).")
@click.option("--expected-cap", type=float, default=DEFAULT_EXPECTED_CAP,
              show_default=True,
              help="Refuse box runs whose expected point count exceeds this.")
@click.option("--dat", "dat", is_flag=True, default=False,
              help="Also write a gnuplot-ready .dat next to the summary.")
@_seed_override
@click.pass_context
def estimate(ctx, mode, functional, d, lam, s, t, n, reps, solver,
             weight, mu, which, expected_cap, dat, seed_override):
    """Monte Carlo estimators and deterministic density constants."""
    _apply_seed(ctx, seed_override)
    seed = ctx.obj["seed"]
    dim, lams, n_grid, mu_kind, dat_out = d, lam, n, mu, dat
    functional = _canon_functional(functional)
    params = {"mode": mode, "functional": functional, "d": dim,
              "lambda": list(lams), "s": s, "t": t, "n": list(n_grid),
              "reps": reps, "solver": solver, "weight": weight,
              "mu": mu_kind, "which": which}
    config = _config_from_ctx(ctx, "estimate", params)

    try:
        if mode == "density":
            payload, rows = _run_density(which, functional, dim, s, seed)
            _emit(ctx, config, payload, rows)
            return
        if functional is None:
            raise click.UsageError("--functional is required for this mode")
        if mode in ("box", "cluster"):
            if len(lams) != 1:
                raise click.UsageError(f"--mode {mode} needs exactly one "
                                       f"--lam")
            base = (mode, functional, dim, lams[0], s, reps, seed, solver,
                    expected_cap)
            reports = _parallel_reports(ctx, _rho_chunk, base, reps)
        elif mode == "sweep":
            if not lams:
                raise click.UsageError("--mode sweep needs --lam values")
            reports = rho_curve_sweep(functional, dim, list(lams), s, reps,
                                      seed, solver=solver)
            flags = sweep_structure_flags(functional, dim, reports)
        else:  # thermo / dense
            if not n_grid:
                raise click.UsageError(f"--mode {mode} needs --n values")
            if mode == "thermo" and t is None:
                raise click.UsageError("--mode thermo needs --t")
            base = (mode, functional, mu_kind, dim, t,
                    tuple(sorted(n_grid)), reps, seed, solver, weight)
            reports = _parallel_reports(ctx, _lln_chunk, list(base), reps)
    except (ValueError, RuntimeError) as exc:
        raise click.ClickException(str(exc))

    rows = [rep.to_row() for rep in reports]
    payload = {"kind": "estimate", "mode": mode,
               "reports": [{"row": rep.to_row(),
                            "meta": to_jsonable(rep.meta)}
                           for rep in reports]}
    if mode == "sweep":
        payload["structure_flags"] = to_jsonable(flags)
    if dat_out:
        payload["dat"] = _write_dat(ctx.obj["out"], mode, functional, dim,
                                    rows)
    _emit(ctx, config, payload, rows)


def _run_density(which, functional, dim, s, seed):
    if which is None:
        raise click.UsageError("--mode density needs --which")
    if which == "packing":
        con = lattice_packing_density(dim, s)
    elif which == "covering":
        con = lattice_covering_density(dim, s)
    elif which == "hexagon":
        if dim != 2:
            raise click.UsageError("--which hexagon is two-dimensional")
        con = hexagon_partition_density(s)
    else:
        if functional is None:
            raise click.UsageError("--which zeta-star needs --functional")
        out = zeta_star_lower(functional, dim, s, seed=seed)
        row = {"mode": "density", "functional": f"zeta-star:{functional}",
               "d": dim, "lambda": "", "s": s, "n": out["count"], "t": "",
               "reps": "", "mean": out["density"], "stderr": "",
               "seed": seed, "elapsed_ms": ""}
        return {"kind": "estimate", "mode": "density", **to_jsonable(out)}, \
            [row]
    row = {"mode": "density", "functional": con.name, "d": con.dim,
           "lambda": "", "s": con.s, "n": con.count, "t": "", "reps": "",
           "mean": con.value, "stderr": "", "seed": seed, "elapsed_ms": ""}
    return {"kind": "estimate", "mode": "density",
            **to_jsonable(con)}, [row]


def _write_dat(outdir, mode, functional, dim, rows):
    """Gnuplot-ready two-or-three-column table for one run."""
    xcol = "n" if mode in ("thermo", "dense") else "lambda"
    path = os.path.join(outdir, f"{functional}_{mode}_d{dim}.dat")
    os.makedirs(outdir, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# {xcol} mean stderr\n")
        for row in sorted(rows, key=lambda r: float(r[xcol])):
            fh.write(f"{row[xcol]:.10g} {row['mean']:.10g} "
                     f"{row['stderr']:.10g}\n")
    return path


# ---------------------------------------------------------------------------
# proptest


@main.command()
@click.option("--property", "property", type=click.Choice(PROPERTY_IDS),
              default=None, help="Run one property id (default: full suite).")
@click.option("--functional", default=None,
              help="Restrict to one functional (with --property).")
@click.option("--trials", type=int, default=100, show_default=True)
@click.option("--dims", default="1,2", show_default=True,
              help="Comma-separated dimensions.")
@click.option("--n-max", type=int, default=20, show_default=True)
@_seed_override
@click.pass_context
def proptest(ctx, property, functional, trials, dims, n_max, seed_override):
    """Randomized property checks; exit status 1 on any violation."""
    _apply_seed(ctx, seed_override)
    seed, workers = ctx.obj["seed"], ctx.obj["workers"]
    prop = property
    functional = _canon_functional(functional)
    try:
        dim_list = tuple(int(x) for x in dims.split(",") if x.strip())
    except ValueError:
        raise click.UsageError(f"bad --dims value {dims!r}")
    config = _config_from_ctx(ctx, "proptest", {
        "property": prop, "functional": functional, "trials": trials,
        "dims": dims, "n_max": n_max})

    results = []
    if prop is None:
        results = run_all(dims=dim_list, trials=trials, seed=seed,
                          n_max=n_max, workers=workers)
    else:
        for dim in dim_list:
            funcs = [functional] if functional else \
                (applicable_functionals(prop, dim) or [None])
            for f in funcs:
                results.append(run_property(prop, functional=f, dim=dim,
                                            trials=trials, seed=seed,
                                            n_max=n_max, workers=workers))

    failures = sum(len(r.failures) for r in results)
    outdir = ctx.obj["out"]
    os.makedirs(outdir, exist_ok=True)
    fail_path = os.path.join(outdir, "failures.jsonl")
    write_failures_jsonl(results, fail_path)
    payload = {"kind": "proptest", "cells": len(results),
               "instances": sum(r.instances for r in results),
               "failures": failures,
               "skipped": sum(r.skipped for r in results),
               "failures_path": fail_path,
               "results": [{"prop": r.prop, "functional": r.functional,
                            "dim": r.dim, "instances": r.instances,
                            "failures": len(r.failures),
                            "skipped": r.skipped, "ok": r.ok}
                           for r in results]}
    _emit(ctx, config, payload)
    for r in results:
        status = "ok" if r.ok else f"FAIL({len(r.failures)})"
        click.echo(f"{r.prop:14s} {r.functional:18s} d={r.dim} "
                   f"checks={r.instances} skipped={r.skipped} {status}",
                   err=True)
    if failures:
        click.echo(f"{failures} violations written to {fail_path}", err=True)
        ctx.exit(1)


# ---------------------------------------------------------------------------
# report


@main.command()
@click.option("--inputs", multiple=True,
              type=click.Path(exists=True, dir_okay=False),
              help="records.jsonl files (default: <out>/records.jsonl).")
@click.option("--prefix", default="report", show_default=True,
              help="Basename prefix for emitted files.")
@click.pass_context
def report(ctx, inputs, prefix):
    """Aggregate stored records into .dat tables and a gnuplot script."""
    outdir = ctx.obj["out"]
    paths = list(inputs) or [os.path.join(outdir, "records.jsonl")]
    records, skipped = [], 0
    for path in paths:
        if not os.path.exists(path):
            raise click.UsageError(f"no records at {path!r}")
        recs, bad = load_jsonl(path)
        records.extend(recs)
        skipped += bad
    rows = []
    for rec in records:
        payload = rec.payload
        if not isinstance(payload, dict) or payload.get("kind") != "estimate":
            continue
        for entry in payload.get("reports", []):
            row = entry.get("row") if isinstance(entry, dict) else None
            if isinstance(row, dict) and set(CSV_COLUMNS) <= set(row):
                rows.append(row)
            else:
                skipped += 1
                log.warning("skipping malformed report row in experiment %s",
                            rec.experiment)
    if skipped:
        click.echo(f"skipped {skipped} malformed records", err=True)
    os.makedirs(outdir, exist_ok=True)
    csv_path = os.path.join(outdir, f"{prefix}_summary.csv")
    if os.path.exists(csv_path):
        os.remove(csv_path)
    write_csv(csv_path, rows, CSV_COLUMNS)

    groups: dict = {}
    for row in rows:
        xcol = "n" if row["mode"] in ("thermo", "dense") else "lambda"
        if row.get(xcol) in ("", None):
            continue
        key = (str(row["functional"]), str(row["mode"]), int(row["d"]), xcol)
        groups.setdefault(key, []).append(row)

    dat_files = []
    for (func, mode, dim, xcol), grows in sorted(groups.items()):
        name = f"{prefix}_{func}_{mode}_d{dim}.dat".replace(":", "-")
        path = os.path.join(outdir, name)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"# {xcol} mean stderr  ({func}, {mode}, d={dim})\n")
            for row in sorted(grows, key=lambda r: float(r[xcol])):
                err = row["stderr"] if row["stderr"] != "" else 0.0
                fh.write(f"{float(row[xcol]):.10g} {float(row['mean']):.10g} "
                         f"{float(err):.10g}\n")
        dat_files.append((name, func, mode, dim, xcol))

    gp_path = os.path.join(outdir, f"{prefix}.gp")
    with open(gp_path, "w", encoding="utf-8") as fh:
        fh.write("set datafile commentschars '#'\nset key left\n")
        fh.write("set term pngcairo size 900,600\n")
        for name, func, mode, dim, xcol in dat_files:
            stem = os.path.splitext(name)[0]
            fh.write(f"\nset output '{stem}.png'\n")
            fh.write(f"set xlabel '{xcol}'\nset ylabel 'estimate'\n")
            fh.write(f"plot '{name}' using 1:2:3 with yerrorlines "
                     f"title '{func} {mode} d={dim}'\n")
    click.echo(f"wrote {len(rows)} rows to {csv_path}, "
               f"{len(dat_files)} .dat files, script {gp_path}")


if __name__ == "__main__":
    main()
