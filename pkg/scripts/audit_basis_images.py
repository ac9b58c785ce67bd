#!/usr/bin/env python3
"""Audit the claimed closed-form basis images against kernel quadrature.

The claimed table d_{s,n} z^n e^{-z^2/(6s)} deviates from the quadrature
ground truth in two reproducible ways, both reported here per scale s:

  * the n = 0 constant is low by a factor 2 under the table's own kernel
    normalization (2 pi^{1/4} under the unitary normalization this package
    uses for transforms);
  * the n = 2 image is not proportional to z^2 e^{-z^2/(6s)}: it keeps a
    z^0 component with exact coefficient ratio c0/c2 = -3s/4.

The quadrature provenance is authoritative everywhere else in the package;
the claimed table is retained only for this comparison.
"""

from __future__ import annotations

import argparse

from holofrft import engine


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[1])
    parser.add_argument("--s", type=lambda v: tuple(
        float(part) for part in v.split(",")), default=(0.5, 0.7, 1.0, 2.0),
        help="comma-separated scales to audit")
    ns = parser.parse_args(argv)

    print(f"{'s':>6}  {'n0 ratio (table conv.)':>23}  "
          f"{'n0 spread':>10}  {'n2 c0/c2':>12}  {'expected -3s/4':>15}")
    for s in ns.s:
        audit = engine.basis_image_audit(s)
        ratio = complex(*audit["n0_ratio_printed_convention"])
        c0c2 = complex(*audit["n2_c0_over_c2"])
        print(f"{s:6.3f}  {ratio.real:23.12f}  "
              f"{audit['n0_ratio_spread']:10.3e}  {c0c2.real:12.8f}  "
              f"{audit['n2_c0_over_c2_expected']:15.8f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
