"""Command-line front end: run, picard, division-lemma, convergence.

Exit codes: 0 success, 1 configuration or validation failure, 2 runtime
assertion (light-cone violation, or an audit failure under --strict).
Diagnostics go to stderr; the VLASOVWAVE_VERBOSITY environment variable
(quiet | info | debug) selects how chatty they are.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

import numpy as np

from . import division as division_mod
from .config import Config, parse_config
from .coupling import RunOptions, run
from .diagnostics import (derivative_transport_audit, gronwall_audit,
                          prop32_bound_check)
from .errors import (ConfigError, DomainTooSmallError,
                     LightConeViolationError, VlasovWaveError)
from .output import (DIAGNOSTICS_HEADER, FIELDS_HEADER, MOMENTS_HEADER,
                     append_fields_rows, append_moments_rows, ensure_dir,
                     fmt, write_csv, write_diagnostics, write_json,
                     write_snapshot)
from .picard import picard_solve
from .transport import moments
from .wave import dalembert_a, dt_a_representation, dxdt_a_representation

log = logging.getLogger("vlasovwave")


def _setup_logging():
    level = os.environ.get("VLASOVWAVE_VERBOSITY", "info").lower()
    chosen = {"quiet": logging.WARNING, "info": logging.INFO,
              "debug": logging.DEBUG}.get(level, logging.INFO)
    logging.basicConfig(stream=sys.stderr, level=chosen,
                        format="%(levelname)s %(message)s")


def _load_config(path) -> Config:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    return parse_config(text)


def cmd_run(args) -> int:
    cfg = _load_config(args.config)
    if cfg.grid is None:
        raise ConfigError("run requires a [grid] section")
    grid = cfg.build_grid()
    init = cfg.build_initial_data()
    options = RunOptions(transport_mode=cfg.transport.mode,
                         clamp=cfg.transport.clamp,
                         eps_supp=cfg.tolerances.eps_supp,
                         history_cap=cfg.output.history_cap,
                         coupling_enabled=cfg.transport.coupling)
    out_dir = ensure_dir(args.output_dir or cfg.output.directory)
    cadence = cfg.output.snapshot_cadence

    fields_rows = []
    moments_rows = []
    snap_steps = []

    def on_step(state, record):
        k = state.step_index
        log.debug("step %d t=%.6f total=%.9g", k, record.t, record.total)
        if k % cadence == 0 or k == grid.n_steps:
            snap_steps.append(k)
            append_fields_rows(fields_rows, grid, state.field)
            rho, j = moments(state.distribution.values, grid)
            append_moments_rows(moments_rows, grid, record.t, rho, j)
            if cfg.output.write_csv:
                write_snapshot(os.path.join(out_dir, f"f_{k}.csv"), grid,
                               state.distribution.values)

    log.info("run: grid %dx%d, dt=%g, %d steps", grid.nx, grid.nv, grid.dt,
             grid.n_steps)
    result = run(grid, init, options, on_step=on_step)
    gron = gronwall_audit(result.records, result.constants, grid)
    deriv = derivative_transport_audit(result.state.f_rows,
                                       result.state.field_history, grid)
    prop32 = prop32_bound_check(result.records, result.constants)
    rep = representation_audit(result, init, grid)

    if cfg.output.write_csv:
        write_diagnostics(os.path.join(out_dir, "diagnostics.csv"),
                          result.records)
        write_csv(os.path.join(out_dir, "fields.csv"), FIELDS_HEADER,
                  fields_rows)
        write_csv(os.path.join(out_dir, "moments.csv"), MOMENTS_HEADER,
                  moments_rows)
    if cfg.output.write_json:
        write_json(os.path.join(out_dir, "audit.json"),
                   {"gronwall": gron, "derivative_transport": deriv,
                    "prop32_bound": prop32, "representation": rep})
    ok = gron["passed_i"] and gron["passed_ii"] and gron["passed_iii"]
    log.info("gronwall margins: i=%.3g ii=%.3g iii=%.3g (%s)",
             gron["min_margin_i"], gron["min_margin_ii"],
             gron["min_margin_iii"], "ok" if ok else "VIOLATED")
    if args.strict and not ok:
        log.error("audit failed under --strict")
        return 2
    return 0


def representation_audit(result, init, grid, n_samples: int = 10) -> dict:
    """Cross-check the three dtA computations and the dx dtA representation
    on a sample grid of (t, x) points from the run."""
    state = result.state
    n = state.step_index
    if n < 4 or not (init.a0.is_zero and init.a1.is_zero):
        return {"samples": [], "note": "representation audit needs a run "
                "with several steps and zero field data"}
    ks = np.unique(np.linspace(2, n - 1, min(n_samples, n - 2)).astype(int))
    x_lo, x_hi = init.f0.support_x()
    reach = grid.time_at(int(ks[-1]))
    xs = np.linspace(max(x_lo - reach, grid.x_min + 2 * grid.dx),
                     min(x_hi + reach, grid.x_max - 2 * grid.dx), n_samples)
    idx = np.unique(np.round((xs - grid.x_min) / grid.dx).astype(int))
    samples = []
    for k in ks:
        t = grid.time_at(int(k))
        for i in idx:
            x = float(grid.x_nodes[i])
            evo = float(state.field_history.rows[k][i])
            paa = dt_a_representation(init, state.source, grid, t, x)
            a_plus = dalembert_a(init, state.source, grid,
                                 grid.time_at(int(k + 1)), x)
            a_minus = dalembert_a(init, state.source, grid,
                                  grid.time_at(int(k - 1)), x)
            dal = (a_plus - a_minus) / (2.0 * grid.dt)
            rep = dxdt_a_representation(state.f_rows, state.field_history,
                                        init, grid, t, x)
            row = state.field_history.rows[k]
            if 0 < i < grid.nx:
                fd = float((row[i + 1] - row[i - 1]) / (2.0 * grid.dx))
            else:
                fd = float("nan")
            samples.append({"t": t, "x": x, "evolution": evo, "paA": paa,
                            "dalembert_diff": dal,
                            "dxdtA_fd": fd, **rep})
    mism_paa = max(abs(s["evolution"] - s["paA"]) for s in samples)
    mism_dal = max(abs(s["evolution"] - s["dalembert_diff"]) for s in samples)
    mism_rep = max(abs(s["total"] - s["dxdtA_fd"]) for s in samples)
    return {"samples": samples,
            "max_evolution_vs_paA": mism_paa,
            "max_evolution_vs_dalembert_diff": mism_dal,
            "max_dxdtA_representation_vs_fd": mism_rep}


def cmd_picard(args) -> int:
    cfg = _load_config(args.config)
    if cfg.grid is None:
        raise ConfigError("picard requires a [grid] section")
    grid = cfg.build_grid()
    init = cfg.build_initial_data()
    report = picard_solve(init, grid, cfg.picard.t_horizon,
                          tol=cfg.tolerances.picard_tol,
                          max_iter=cfg.tolerances.picard_max_iter,
                          eps_supp=cfg.tolerances.eps_supp)
    out_dir = ensure_dir(args.output_dir or cfg.output.directory)
    payload = {
        "T_requested": report.t_requested,
        "T_effective": report.t_effective,
        "n_levels": report.n_levels,
        "tolerance": report.tolerance,
        "converged": report.converged,
        "fixed_point_residual": report.fixed_point_residual,
        "iterations": report.iterations,
    }
    if cfg.output.write_json:
        write_json(os.path.join(out_dir, "picard_report.json"), payload)
    for it in report.iterations:
        ratio = "-" if it["ratio"] is None else f"{it['ratio']:.4f}"
        log.info("picard n=%d distance=%.3e ratio=%s audit=%s", it["n"],
                 it["distance"], ratio,
                 "pass" if it["audit"]["passed"] else "FAIL")
    if not report.converged:
        log.warning("picard did not reach tolerance %g", report.tolerance)
    if args.strict and not all(it["audit"]["passed"]
                               for it in report.iterations[1:]):
        return 2
    return 0


def cmd_division(args) -> int:
    a_values = division_mod.DEFAULT_SWEEP
    if args.a_sweep:
        try:
            a_values = tuple(float(tok) for tok in args.a_sweep.split(","))
        except ValueError:
            raise ConfigError(f"malformed --a-sweep {args.a_sweep!r}")
    report = division_mod.division_sweep(a_values)
    out_dir = ensure_dir(args.output_dir)
    tol = args.tolerance
    report["tolerance"] = tol
    write_json(os.path.join(out_dir, "division_report.json"), report)
    print("a        preset        lhs                    rhs                    abs_err")
    for row in report["rows"]:
        status = "ok" if row["abs_err"] <= tol else "FAIL"
        print(f"{row['a']:+.2f}    {row['phi_preset']:<12}  "
              f"{fmt(row['lhs']):<21}  {fmt(row['rhs']):<21}  "
              f"{row['abs_err']:.3e}  {status}")
    print(f"max abs err: {report['max_abs_err']:.3e} (tolerance {tol:g})")
    if args.strict and report["max_abs_err"] > tol:
        return 2
    return 0


def cmd_convergence(args) -> int:
    cfg = _load_config(args.config)
    if cfg.grid is None:
        raise ConfigError("convergence requires a [grid] section")
    if cfg.grid.nx % 4 or cfg.grid.nv % 4:
        raise ConfigError("convergence needs nx and nv divisible by 4")
    init = cfg.build_initial_data()
    rows = []
    for factor in (4, 2, 1):
        sub = Config(mode="evolve", grid=cfg.grid, initial_data=cfg.initial_data,
                     transport=cfg.transport, output=cfg.output,
                     tolerances=cfg.tolerances, picard=cfg.picard)
        nx = cfg.grid.nx // factor
        nv = cfg.grid.nv // factor
        from .grid import build_grid as bg
        grid = bg(cfg.grid.x_min, cfg.grid.x_max, cfg.grid.v_min,
                  cfg.grid.v_max, nx, nv, cfg.grid.t_final,
                  support_x=init.field_data_support_x(),
                  support_v=init.f0.support_v())
        options = RunOptions(transport_mode=cfg.transport.mode,
                             clamp=cfg.transport.clamp,
                             eps_supp=cfg.tolerances.eps_supp,
                             history_cap=cfg.output.history_cap,
                             coupling_enabled=cfg.transport.coupling)
        log.info("convergence: nx=%d nv=%d (%d steps)", nx, nv, grid.n_steps)
        result = run(grid, init, options)
        drift = max(abs(r.total - result.records[0].total)
                    for r in result.records)
        rel_drift = drift / result.records[0].total if result.records[0].total \
            else 0.0
        field_sup = max(r.sup_dtA for r in result.records)
        entry = {"nx": nx, "dt": grid.dt, "energy_drift": rel_drift,
                 "field_sup": field_sup}
        if field_sup < 1e-12:
            entry["transport_error"] = _free_streaming_error(result, init, grid)
        rows.append(entry)

    report = {"resolutions": rows}
    if len(rows) == 3:
        report["energy_drift_orders"] = _orders(
            [r["energy_drift"] for r in rows])
        if all("transport_error" in r for r in rows):
            report["transport_orders"] = _orders(
                [r["transport_error"] for r in rows])
    out_dir = ensure_dir(args.output_dir or cfg.output.directory)
    write_json(os.path.join(out_dir, "convergence_report.json"), report)
    for r in rows:
        line = f"nx={r['nx']:4d}  energy drift {r['energy_drift']:.3e}"
        if "transport_error" in r:
            line += f"  transport error {r['transport_error']:.3e}"
        print(line)
    for key in ("energy_drift_orders", "transport_orders"):
        if key in report:
            print(f"{key}: " + ", ".join(f"{o:.2f}" for o in report[key]))
    return 0


def _free_streaming_error(result, init, grid):
    xs = grid.x_nodes
    vs = grid.v_nodes
    X, V = np.meshgrid(xs, vs, indexing="ij")
    t = result.records[-1].t
    vh = V / np.sqrt(1.0 + V * V)
    exact = init.f0(X - vh * t, V)
    return float(np.max(np.abs(result.state.distribution.values - exact)))


def _orders(errors):
    out = []
    for a, b in zip(errors, errors[1:]):
        if a > 0 and b > 0:
            out.append(float(np.log2(a / b)))
        else:
            out.append(float("inf"))
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vlasovwave",
                                description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute a coupled evolution run")
    run_p.add_argument("config")
    run_p.add_argument("--output-dir", default=None)
    run_p.add_argument("--strict", action="store_true")
    run_p.set_defaults(fn=cmd_run)

    pic_p = sub.add_parser("picard", help="solve by fixed-point iteration")
    pic_p.add_argument("config")
    pic_p.add_argument("--output-dir", default=None)
    pic_p.add_argument("--strict", action="store_true")
    pic_p.set_defaults(fn=cmd_picard)

    div_p = sub.add_parser("division-lemma",
                           help="verify the distributional splitting")
    div_p.add_argument("--a-sweep", default=None,
                       help="comma-separated speeds in (-1, 1)")
    div_p.add_argument("--output-dir", default="out")
    div_p.add_argument("--tolerance", type=float, default=1e-8)
    div_p.add_argument("--strict", action="store_true")
    div_p.set_defaults(fn=cmd_division)

    con_p = sub.add_parser("convergence",
                           help="run at three resolutions and fit orders")
    con_p.add_argument("config")
    con_p.add_argument("--output-dir", default=None)
    con_p.add_argument("--strict", action="store_true")
    con_p.set_defaults(fn=cmd_convergence)
    return p


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        log.error("configuration error: %s", exc)
        return 1
    except (ValueError, DomainTooSmallError) as exc:
        log.error("validation error: %s", exc)
        return 1
    except LightConeViolationError as exc:
        log.error("runtime assertion: %s", exc)
        return 2
    except VlasovWaveError as exc:
        log.error("%s", exc)
        return 2


def entry():
    raise SystemExit(main())
