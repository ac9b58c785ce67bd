"""Command-line front end: job configuration, signal ingestion, field emission.

Formats are CSV and JSON only. The signal CSV header is exactly ``x,re,im``;
the field CSV header is exactly ``x,p,re,im,gauge,param`` with rows x-major
(p inner) and numbers printed at 17 significant digits, so identical jobs
produce byte-identical files. The angle parameter is accepted as either
``--t <radians>`` or ``--s <tan t>`` and is printed in both forms. Exit
codes: 0 success, 1 verification failure, 2 usage or parse error,
3 numerical-support error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import engine, verification
from .core import (
    CoherentLabel,
    CoherentSum,
    Gauge,
    PlaneField,
    PlaneGrid,
    Samples,
    TransformParameter,
)
from .errors import DegenerateCoordinateError, SupportError

SIGNAL_HEADER = "x,re,im"
FIELD_HEADER = "x,p,re,im,gauge,param"
BASIS_HEADER = "n,z_re,z_im,re,im,provenance"
NUM = "{:.16e}".format


class ParseError(Exception):
    """Malformed input file (bad header, column count, non-finite value)."""


class UsageError(Exception):
    """Contradictory or incomplete job configuration."""


@dataclass
class JobConfig:
    """One CLI job; see the subcommand help strings for field meanings."""

    command: str
    kind: str = "hfrft"
    t: float | None = None
    s: float | None = None
    method: str = "kernel"
    spectral_order: int = engine.DEFAULT_SPECTRAL_ORDER
    order: int | None = None
    xmax: float | None = None
    pmax: float | None = None
    nx: int | None = None
    np_: int | None = None
    gauge: str | None = None
    signal_path: str | None = None
    field_path: str | None = None
    out_path: str | None = None
    out_dir: str | None = None
    t_list: tuple[float, ...] = ()
    count: int | None = None
    R: float = 8.0
    num_p: int | None = None
    n_max: int = 12
    tolerance: float | None = None
    criteria: tuple[int, ...] = ()

    def parameter(self) -> TransformParameter:
        if self.t is not None:
            return TransformParameter.from_t(self.t)
        if self.s is not None:
            return TransformParameter.from_s(self.s)
        raise UsageError("one of --t or --s is required")


# ---------------------------------------------------------------- file I/O

def read_signal(path: str):
    """Signal from a coherent-sum JSON or a sampled CSV file."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from None
    if not text.strip():
        raise ParseError(f"{path}: empty file")
    if path.endswith(".json") or text.lstrip()[0] in "{[":
        return _coherent_from_json(path, text)
    return _samples_from_csv(path, text)


def _coherent_from_json(path: str, text: str) -> CoherentSum:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(obj, dict) or "weights" not in obj or "labels" not in obj:
        raise ParseError(f"{path}: expected an object with 'weights' and 'labels'")
    weights, labels = obj["weights"], obj["labels"]
    if not isinstance(weights, list) or not isinstance(labels, list) \
            or len(weights) != len(labels) or not weights:
        raise ParseError(
            f"{path}: 'weights' and 'labels' must be nonempty lists of equal length")
    ws, ls = [], []
    for k, (w, lab) in enumerate(zip(weights, labels)):
        for name, pair in (("weights", w), ("labels", lab)):
            if (not isinstance(pair, list) or len(pair) != 2
                    or not all(isinstance(v, (int, float)) for v in pair)
                    or not all(math.isfinite(v) for v in pair)):
                raise ParseError(
                    f"{path}: {name}[{k}] must be a pair of finite numbers")
        ws.append(complex(w[0], w[1]))
        ls.append(CoherentLabel(float(lab[0]), float(lab[1])))
    return CoherentSum(tuple(ws), tuple(ls))


def _samples_from_csv(path: str, text: str) -> Samples:
    lines = text.splitlines()
    if lines[0].strip() != SIGNAL_HEADER:
        raise ParseError(f"{path}:1: header must be exactly '{SIGNAL_HEADER}'")
    xs, vs = [], []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise ParseError(
                f"{path}:{lineno}: expected 3 columns, got {len(parts)}")
        try:
            x, re, im = (float(part) for part in parts)
        except ValueError:
            raise ParseError(f"{path}:{lineno}: non-numeric value") from None
        if not (math.isfinite(x) and math.isfinite(re) and math.isfinite(im)):
            raise ParseError(f"{path}:{lineno}: non-finite value")
        xs.append(x)
        vs.append(complex(re, im))
    if not xs:
        raise ParseError(f"{path}: no data rows")
    try:
        return Samples(np.asarray(xs), np.asarray(vs))
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from None


def write_signal(path: str, xs: np.ndarray, values: np.ndarray) -> None:
    lines = [SIGNAL_HEADER]
    for x, v in zip(xs, values):
        lines.append(f"{NUM(x)},{NUM(v.real)},{NUM(v.imag)}")
    _write_text(path, "\n".join(lines) + "\n")


def write_field(path: str, field: PlaneField) -> None:
    meta = f"{field.gauge.value},{field.param.describe()}"
    lines = [FIELD_HEADER]
    for i, x in enumerate(field.grid.xs):
        x_txt = NUM(x)
        row = field.values[i]
        for j, p in enumerate(field.grid.ps):
            v = row[j]
            lines.append(f"{x_txt},{NUM(p)},{NUM(v.real)},{NUM(v.imag)},{meta}")
    _write_text(path, "\n".join(lines) + "\n")


def read_field(path: str) -> PlaneField:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from None
    if not lines or not lines[0].strip():
        raise ParseError(f"{path}: empty file")
    if lines[0].strip() != FIELD_HEADER:
        raise ParseError(f"{path}:1: header must be exactly '{FIELD_HEADER}'")
    xs_txt, ps_txt, vals, meta = [], [], [], None
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 6:
            raise ParseError(
                f"{path}:{lineno}: expected 6 columns, got {len(parts)}")
        try:
            re, im = float(parts[2]), float(parts[3])
        except ValueError:
            raise ParseError(f"{path}:{lineno}: non-numeric value") from None
        if not (math.isfinite(re) and math.isfinite(im)):
            raise ParseError(f"{path}:{lineno}: non-finite value")
        row_meta = (parts[4], parts[5])
        if meta is None:
            meta = row_meta
        elif row_meta != meta:
            raise ParseError(
                f"{path}:{lineno}: gauge/param differs from earlier rows")
        xs_txt.append(parts[0])
        ps_txt.append(parts[1])
        vals.append(complex(re, im))
    if not vals:
        raise ParseError(f"{path}: no data rows")
    np_count = 0
    while np_count < len(xs_txt) and xs_txt[np_count] == xs_txt[0]:
        np_count += 1
    if np_count < 2 or len(vals) % np_count:
        raise ParseError(f"{path}: rows do not form an x-major grid")
    nx = len(vals) // np_count
    if xs_txt != [x for x in xs_txt[::np_count] for _ in range(np_count)] \
            or ps_txt != ps_txt[:np_count] * nx:
        raise ParseError(f"{path}: rows do not form an x-major grid")
    try:
        grid = PlaneGrid(np.array([float(x) for x in xs_txt[::np_count]]),
                         np.array([float(p) for p in ps_txt[:np_count]]))
        gauge = Gauge(meta[0])
        param = _parse_param(meta[1])
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from None
    return PlaneField(grid, np.array(vals).reshape(nx, np_count), gauge, param)


def _parse_param(text: str) -> TransformParameter:
    try:
        t_txt, s_txt = text.split(";")
        probe = TransformParameter.from_t(float(t_txt.removeprefix("t=")))
        s_part = s_txt.removeprefix("s=")
    except ValueError:
        raise ValueError(f"bad param string {text!r}") from None
    if s_part == "inf":
        if not probe.is_endpoint:
            raise ValueError(f"inconsistent param string {text!r}")
        return probe
    s = float(s_part)
    if not (math.isfinite(probe.s) and abs(probe.s - s) <= 1e-12 * max(1.0, s)):
        raise ValueError(f"inconsistent param string {text!r}")
    # Keep both stored values bit-exact (tan/atan round trips can move the
    # last ulp) so that rewriting a parsed field reproduces the file bytes.
    return TransformParameter(t=probe.t, s=s)


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _write_json(path: str, obj: dict) -> None:
    _write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


# ------------------------------------------------------------ job plumbing

def _resolve_grid(cfg: JobConfig, signal, param: TransformParameter) -> PlaneGrid:
    given = (cfg.xmax, cfg.pmax, cfg.nx, cfg.np_)
    if all(v is None for v in given):
        sizing = param if 0.0 < param.t < math.pi / 2 \
            else TransformParameter.from_t(math.pi / 4)
        return engine.suggest_grid(sizing, signal)
    if any(v is None for v in given):
        raise UsageError("give all of --xmax/--pmax/--nx/--np, or none for auto")
    return PlaneGrid.regular(cfg.xmax, cfg.pmax, cfg.nx, cfg.np_)


def _describe_line(param: TransformParameter) -> str:
    s_txt = "inf" if math.isinf(param.s) else f"{param.s:.6g}"
    return f"t={param.t:.6g} rad (s=tan t={s_txt})"


def _build_field(cfg: JobConfig, signal, param: TransformParameter,
                 grid: PlaneGrid) -> PlaneField:
    if cfg.kind == "fourier":
        return engine.endpoint_apply(signal, grid, cfg.order)
    if cfg.kind == "hfrft":
        field = engine.hfrft_apply(param, signal, grid, method=cfg.method,
                                   order=cfg.order,
                                   spectral_order=cfg.spectral_order)
    elif cfg.kind == "sb":
        if cfg.method == "kernel":
            field = engine.sb_field(param.s, signal, grid, cfg.order)
        else:
            coeffs = engine.hermite_analyze(signal, param.s, cfg.spectral_order)
            cache = engine.build_basis_images(
                param.s, cfg.spectral_order, grid.z_values(param.s).ravel(),
                order=cfg.order)
            raw = engine.sb_spectral_apply(param.s, coeffs, cache)
            field = PlaneField(grid, raw.reshape(grid.shape),
                               Gauge.HOLOMORPHIC, param)
    else:
        raise UsageError(f"unknown transform kind {cfg.kind!r}")
    if cfg.gauge is not None:
        field = field.to_gauge(Gauge(cfg.gauge))
    return field


def _cmd_transform(cfg: JobConfig) -> int:
    if cfg.kind == "fourier":
        if cfg.t is not None or cfg.s is not None:
            raise UsageError("the fourier kind is the fixed endpoint; drop --t/--s")
        param = TransformParameter.from_t(math.pi / 2)
    else:
        param = cfg.parameter()
    signal = read_signal(cfg.signal_path)
    grid = _resolve_grid(cfg, signal, param)
    field = _build_field(cfg, signal, param, grid)
    write_field(cfg.out_path, field)
    print(f"{cfg.kind} field at {_describe_line(field.param)}, "
          f"{field.gauge.value} gauge, grid {grid.shape[0]}x{grid.shape[1]} "
          f"-> {cfg.out_path}")
    return 0


def _cmd_endpoint(cfg: JobConfig) -> int:
    cfg.kind = "fourier"
    return _cmd_transform(cfg)


def _cmd_inverse(cfg: JobConfig) -> int:
    field = read_field(cfg.field_path)
    param = field.param
    if not (0.0 < param.s < math.inf):
        raise UsageError("field parameter is degenerate; nothing to invert")
    if cfg.s is not None and abs(cfg.s - param.s) > 1e-9 * max(1.0, param.s):
        raise UsageError(
            f"--s {cfg.s!r} contradicts the field file (s={param.s!r})")
    xs = field.grid.xs
    values, estimate = engine.sb_inverse(param.s, field, xs, cfg.R,
                                         num_p=cfg.num_p)
    write_signal(cfg.out_path, xs, values)
    print(f"inverse at {_describe_line(param)}, R={cfg.R:g}, "
          f"truncation estimate {estimate:.3e} -> {cfg.out_path}")
    if cfg.tolerance is not None and estimate > cfg.tolerance:
        raise SupportError(
            f"truncation estimate {estimate:.3e} exceeds --tol "
            f"{cfg.tolerance:.3e}; raise R or enlarge the field grid")
    return 0


def _cmd_sweep(cfg: JobConfig) -> int:
    if cfg.t_list and cfg.count is not None:
        raise UsageError("--t and --count contradict each other")
    if cfg.t_list:
        ts = cfg.t_list
    elif cfg.count is not None:
        if cfg.count < 1:
            raise UsageError("--count must be >= 1")
        ts = tuple(np.linspace(0.0, math.pi / 2, cfg.count))
    else:
        raise UsageError("sweep needs --t t1,t2,... or --count N")
    for t in ts:
        TransformParameter.from_t(t)  # validate before any file is written
    signal = read_signal(cfg.signal_path)
    os.makedirs(cfg.out_dir, exist_ok=True)
    entries = []
    for i, t in enumerate(ts):
        param = TransformParameter.from_t(t)
        # Each t gets the grid sized for its own field: one shared grid wide
        # enough for small t puts large-t evaluation points far outside the
        # kernel's oscillation budget, where the true values are negligible
        # anyway. Explicit --xmax/--pmax/--nx/--np still force a common grid.
        grid = _resolve_grid(cfg, signal, param)
        field = engine.hfrft_apply(param, signal, grid, method=cfg.method,
                                   order=cfg.order,
                                   spectral_order=cfg.spectral_order)
        name = f"field_{i:02d}.csv"
        write_field(os.path.join(cfg.out_dir, name), field)
        entries.append({"index": i, "t": t,
                        "s": "inf" if math.isinf(param.s) else param.s,
                        "file": name,
                        "grid": {"nx": grid.shape[0], "np": grid.shape[1],
                                 "x_extent": float(grid.xs[-1]),
                                 "p_extent": float(grid.ps[-1])}})
        print(f"[{i + 1}/{len(ts)}] {_describe_line(param)} -> {name}")
    index = {
        "kind": "hfrft",
        "signal": cfg.signal_path,
        "gauge": Gauge.WEIGHTED.value,
        "entries": entries,
    }
    _write_json(os.path.join(cfg.out_dir, "index.json"), index)
    print(f"index -> {os.path.join(cfg.out_dir, 'index.json')}")
    return 0


def _cmd_verify(cfg: JobConfig) -> int:
    report = verification.run(list(cfg.criteria) or None)
    for line in report.summary_lines():
        print(line)
    if cfg.out_path:
        _write_json(cfg.out_path, report.to_dict())
        print(f"report -> {cfg.out_path}")
    return 0 if report.all_passed else 1


def _cmd_basis(cfg: JobConfig) -> int:
    param = cfg.parameter()
    if not (0.0 < param.s < math.inf):
        raise UsageError("basis images need 0 < s < inf")
    z0 = 0.6 + 0.45j
    zs = np.array([z0, -z0, 1j * z0, 0.5 * z0, 0.0], dtype=complex)
    cache = engine.build_basis_images(param.s, cfg.n_max, zs)
    lines = [BASIS_HEADER]
    for n in range(cfg.n_max + 1):
        for z, v in zip(cache.points, cache.kernel_images[n]):
            lines.append(f"{n},{NUM(z.real)},{NUM(z.imag)},"
                         f"{NUM(v.real)},{NUM(v.imag)},quadrature")
    for n in range(cache.claimed_images.shape[0]):
        for z, v in zip(cache.points, cache.claimed_images[n]):
            lines.append(f"{n},{NUM(z.real)},{NUM(z.imag)},"
                         f"{NUM(v.real)},{NUM(v.imag)},claimed-closed-form")
    _write_text(cfg.out_path, "\n".join(lines) + "\n")
    print(f"basis images for s={param.s:.6g}, n <= {cfg.n_max} "
          f"(quadrature + claimed closed form) -> {cfg.out_path}")
    return 0


# ----------------------------------------------------------------- parser

def _add_param_flags(sub: argparse.ArgumentParser) -> None:
    group = sub.add_mutually_exclusive_group()
    group.add_argument("--t", type=float, help="angle parameter in radians")
    group.add_argument("--s", type=float, help="scale parameter s = tan t")


def _add_grid_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--xmax", type=float, help="grid half-width in x")
    sub.add_argument("--pmax", type=float, help="grid half-width in p")
    sub.add_argument("--nx", type=int, help="grid points along x")
    sub.add_argument("--np", type=int, dest="np_", help="grid points along p")


def _add_method_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--method", choices=("kernel", "spectral"),
                     default="kernel", help="quadrature kernel or basis images")
    sub.add_argument("--spectral-order", type=int,
                     default=engine.DEFAULT_SPECTRAL_ORDER,
                     help="basis truncation degree for --method spectral")
    sub.add_argument("--order", type=int, help="quadrature rule order override")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="holofrft",
        description="Holomorphic fractional Fourier transforms of 1-D signals.",
        epilog="Set HOLOFRFT_THREADS to cap BLAS threads (0 = library default).")
    subs = parser.add_subparsers(dest="command", required=True)

    tr = subs.add_parser("transform", help="transform a signal to a plane field")
    tr.add_argument("--kind", choices=("hfrft", "sb", "fourier"),
                    default="hfrft", help="transform family member")
    _add_param_flags(tr)
    tr.add_argument("--signal", required=True, dest="signal_path",
                    help="coherent-sum JSON or sampled CSV")
    tr.add_argument("--out", required=True, dest="out_path", help="field CSV")
    tr.add_argument("--gauge", choices=("weighted", "holomorphic"),
                    help="convert the output gauge (defaults: hfrft/fourier "
                         "weighted, sb holomorphic)")
    _add_grid_flags(tr)
    _add_method_flags(tr)

    ep = subs.add_parser("endpoint", help="Fourier endpoint field (t = pi/2)")
    ep.add_argument("--signal", required=True, dest="signal_path")
    ep.add_argument("--out", required=True, dest="out_path")
    _add_grid_flags(ep)
    ep.add_argument("--order", type=int, help="quadrature rule order override")

    inv = subs.add_parser("inverse", help="reconstruct a signal from a field CSV")
    inv.add_argument("--field", required=True, dest="field_path",
                     help="holomorphic-gauge field CSV (weighted is converted)")
    inv.add_argument("--s", type=float, help="cross-check against the file's s")
    inv.add_argument("--R", type=float, default=8.0,
                     help="p-truncation radius of the slice integral")
    inv.add_argument("--num-p", type=int, dest="num_p",
                     help="override the number of p nodes")
    inv.add_argument("--tol", type=float, dest="tolerance",
                     help="fail (exit 3) if the truncation estimate exceeds this")
    inv.add_argument("--out", required=True, dest="out_path", help="signal CSV")

    sw = subs.add_parser("sweep", help="fields for a list of t values + index")
    sw.add_argument("--t", dest="t_list", type=_t_list, default=(),
                    help="comma-separated t values in [0, pi/2]")
    sw.add_argument("--count", type=int,
                    help="alternatively: N equally spaced t values")
    sw.add_argument("--signal", required=True, dest="signal_path")
    sw.add_argument("--out-dir", required=True, dest="out_dir")
    _add_grid_flags(sw)
    _add_method_flags(sw)

    ver = subs.add_parser("verify", help="run the self-contained criteria battery")
    ver.add_argument("--out", dest="out_path", help="also write a JSON report")
    ver.add_argument("--criteria", type=_int_list, default=(),
                     help="comma-separated subset, e.g. 1,4,7 (default: all)")

    ba = subs.add_parser("basis", help="basis images at probe points, both provenances")
    _add_param_flags(ba)
    ba.add_argument("--n-max", type=int, default=12, dest="n_max",
                    help="highest basis degree")
    ba.add_argument("--out", required=True, dest="out_path", help="CSV path")
    return parser


def _t_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad t list {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty t list")
    return values


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from None


_COMMANDS = {
    "transform": _cmd_transform,
    "endpoint": _cmd_endpoint,
    "inverse": _cmd_inverse,
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
    "basis": _cmd_basis,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:  # argparse: 2 on usage error, 0 on --help
        return int(exc.code or 0)
    cfg = JobConfig(**{k: v for k, v in vars(ns).items()})
    try:
        return _COMMANDS[cfg.command](cfg)
    except (ParseError, UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SupportError, DegenerateCoordinateError) as exc:
        print(f"numerical-support error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
