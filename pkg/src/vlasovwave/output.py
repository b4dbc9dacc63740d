"""Deterministic CSV/JSON emission for run artifacts.

Every CSV carries a header row; numbers are serialized with 17 significant
digits so identical runs produce byte-identical files.
"""

from __future__ import annotations

import json
import os

import numpy as np

DIAGNOSTICS_HEADER = ("t,mass,mass_flow,kinetic,field,total,total_flow,"
                      "p_of_t,sup_j,sup_dtA,sup_dxdtA,grid_max,sup_refined,"
                      "undershoot,margin_i,margin_ii,margin_iii")
FIELDS_HEADER = "t,x,A,dtA,dxA,B_plus,B_minus"
MOMENTS_HEADER = "t,x,rho,j"
SNAPSHOT_HEADER = "x,v,f"


def fmt(x) -> str:
    return format(float(x), ".17g")


def write_csv(path, header: str, rows):
    with open(path, "w", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(fmt(c) for c in row) + "\n")


def write_json(path, payload):
    with open(path, "w", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_diagnostics(path, records):
    rows = ((r.t, r.mass, r.mass_flow, r.kinetic, r.field, r.total,
             r.total_flow, r.p_of_t, r.sup_j, r.sup_dtA, r.sup_dxdtA,
             r.grid_max, r.sup_refined, r.undershoot, r.margin_i,
             r.margin_ii, r.margin_iii) for r in records)
    write_csv(path, DIAGNOSTICS_HEADER, rows)


def append_fields_rows(rows, grid, field_state):
    a = field_state.potential(grid)
    dta = field_state.dt_a
    dxa = field_state.dx_a
    t = field_state.time
    for i, x in enumerate(grid.x_nodes):
        rows.append((t, x, a[i], dta[i], dxa[i], field_state.b_plus[i],
                     field_state.b_minus[i]))


def append_moments_rows(rows, grid, t, rho, j):
    for i, x in enumerate(grid.x_nodes):
        rows.append((t, x, rho[i], j[i]))


def write_snapshot(path, grid, values):
    with open(path, "w", newline="\n") as fh:
        fh.write(SNAPSHOT_HEADER + "\n")
        xs = grid.x_nodes
        vs = grid.v_nodes
        for i in range(values.shape[0]):
            xi = fmt(xs[i])
            col = values[i]
            for jj in range(values.shape[1]):
                fh.write(f"{xi},{fmt(vs[jj])},{fmt(col[jj])}\n")


def ensure_dir(path):
    os.makedirs(path, exist_ok=True)
    return path
