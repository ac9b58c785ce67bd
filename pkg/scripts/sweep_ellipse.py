#!/usr/bin/env python3
"""Second-moment ellipse of the transform image across the angle parameter.

For the unit packet (or any coherent-sum JSON) the intensity level sets of
the weighted-gauge image are ellipses whose axis ratio var_p/var_x follows
cot(t): above 1 before t = pi/4, exactly 1 there, below 1 after. The script
prints the measured table and flags any monotonicity violation.
"""

from __future__ import annotations

import argparse
import math

from holofrft import TransformParameter, cli, engine
from holofrft.core import CoherentLabel, CoherentSum

DEFAULT_TS = (0.15, 0.3, 0.5, math.pi / 4, 1.0, 1.2, 1.35)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[1])
    parser.add_argument("--signal", help="coherent-sum JSON "
                        "(default: unit packet at the origin)")
    parser.add_argument("--t", type=lambda s: tuple(
        float(v) for v in s.split(",")), default=DEFAULT_TS,
        help="comma-separated t values in (0, pi/2)")
    ns = parser.parse_args(argv)
    signal = (cli.read_signal(ns.signal) if ns.signal
              else CoherentSum((1.0,), (CoherentLabel(0.0, 0.0),)))

    print(f"{'t':>9}  {'var_x':>10}  {'var_p':>10}  {'var_p/var_x':>12}  "
          f"{'cot t':>10}")
    ratios = []
    for t in ns.t:
        param = TransformParameter.from_t(t)
        field = engine.hfrft_apply(param, signal,
                                   engine.suggest_grid(param, signal))
        vx, vp, ratio = engine.second_moment_ellipse(field)
        ratios.append(ratio)
        print(f"{t:9.5f}  {vx:10.6f}  {vp:10.6f}  {ratio:12.8f}  "
              f"{1 / math.tan(t):10.6f}")

    decreasing = all(a > b for a, b in zip(ratios, ratios[1:]))
    print(f"ratio strictly decreasing over the listed t: {decreasing}")
    return 0 if decreasing else 1


if __name__ == "__main__":
    raise SystemExit(main())
