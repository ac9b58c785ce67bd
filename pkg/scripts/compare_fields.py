#!/usr/bin/env python3
"""Compare two plane-field CSVs, or one field against a coherent closed form.

Holomorphic-gauge values grow like e^{+s p^2/2} away from the p axis, so raw
differences at the grid edge measure only that growth. The comparison metric
therefore weights holomorphic-gauge differences by e^{-s p^2/2} (the bounded
combination actually carried by the quadrature); weighted-gauge fields
compare as-is. With --tol the script exits 1 when the metric exceeds it.

Examples:
  compare_fields.py a.csv b.csv
  compare_fields.py sb.csv --coherent data/packet00.json --tol 1e-7
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from holofrft import cli, closedform
from holofrft.core import CoherentSum, Gauge, PlaneField


def bounded_weight(field: PlaneField) -> np.ndarray:
    if field.gauge is Gauge.HOLOMORPHIC and math.isfinite(field.param.s):
        return np.exp(-field.param.s * field.grid.ps ** 2 / 2)[None, :]
    return np.ones((1, field.grid.ps.size))


def closed_form_values(field: PlaneField, signal: CoherentSum) -> np.ndarray:
    if field.gauge is Gauge.HOLOMORPHIC:
        z = field.grid.z_values(field.param.s)
        return closedform.sb_coherent_sum(
            field.param.s, signal.weights, signal.labels, z)
    x, p = field.grid.meshes()
    if field.param.is_identity:
        vals = closedform.coherent_sum_values(
            signal.weights, signal.labels, field.grid.xs)
        return np.broadcast_to(vals[:, None], field.values.shape)
    return closedform.hfrft_coherent_sum(
        x, p, field.param, signal.weights, signal.labels)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        description=__doc__.splitlines()[1],
        formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("field", help="field CSV produced by the holofrft CLI")
    parser.add_argument("other", nargs="?",
                        help="second field CSV on the same grid")
    parser.add_argument("--coherent", metavar="JSON",
                        help="coherent-sum JSON; compare against its "
                             "closed-form image instead of a second file")
    parser.add_argument("--tol", type=float,
                        help="exit 1 when the weighted metric exceeds this")
    ns = parser.parse_args(argv)
    if (ns.other is None) == (ns.coherent is None):
        parser.error("give either a second field CSV or --coherent JSON")

    a = cli.read_field(ns.field)
    if ns.other is not None:
        b = cli.read_field(ns.other)
        if not (np.array_equal(a.grid.xs, b.grid.xs)
                and np.array_equal(a.grid.ps, b.grid.ps)):
            print("error: fields live on different grids", file=sys.stderr)
            return 2
        if a.gauge is not b.gauge:
            print("error: fields carry different gauges; convert one with "
                  "'holofrft transform --gauge' first", file=sys.stderr)
            return 2
        if abs(a.param.t - b.param.t) > 1e-12:
            print("error: fields belong to different transform parameters",
                  file=sys.stderr)
            return 2
        reference = b.values
        against = ns.other
    else:
        signal = cli.read_signal(ns.coherent)
        if not isinstance(signal, CoherentSum):
            print("error: --coherent expects a coherent-sum JSON file",
                  file=sys.stderr)
            return 2
        reference = closed_form_values(a, signal)
        against = f"closed form of {ns.coherent}"

    delta = np.abs(a.values - reference)
    weighted = float((delta * bounded_weight(a)).max())
    raw = float(delta.max())
    scale = float(np.abs(reference).max())
    print(f"{ns.field} vs {against}")
    print(f"  gauge {a.gauge.value}, {a.param.describe()}, "
          f"grid {a.values.shape[0]}x{a.values.shape[1]}")
    print(f"  max |difference| (bounded metric) = {weighted:.6e}")
    print(f"  max |difference| (raw)            = {raw:.6e}   "
          f"[reference peak {scale:.6e}]")
    if ns.tol is not None and weighted > ns.tol:
        print(f"  exceeds --tol {ns.tol:.6e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
