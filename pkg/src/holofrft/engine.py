"""Quadrature engine: transforms of arbitrary signals, norms, and reports.

The forward transform is a Gaussian convolution followed by analytic
continuation,

    SB_s f(z) = (2 pi s)^{-1/2} integral exp(-(z - x')^2 / (2s)) f(x') dx',

evaluated with a per-point recentered Gauss-Hermite rule matched to the
product envelope of the kernel and the signal. Writing z = c + i b the kernel
splits as

    exp(-(z-x')^2/2s) = e^{b^2/2s} exp(-(c-x')^2/2s) exp(i (b/s)(x'-c)),

so the engine always computes the bounded "reduced" sum (everything except
e^{b^2/2s}). Weighted-gauge callers never form the growth factor at all: the
e^{-s p^2/2} of the gauge cancels it exactly, which keeps field builds free of
large exponentials. Holomorphic-gauge callers multiply it back under an
overflow guard.

Field builds over a tensor grid use a separability speedup: with per-x
centers m and rule offsets u the phase splits as
e^{i p (x'-c)} = e^{i p (m-c)} e^{i p u}, turning the build into one matrix
product per signal term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import closedform
from .closedform import coherent_state, sb_coherent
from .core import (
    CoherentLabel,
    CoherentSum,
    Gauge,
    HermiteRep,
    KAPPA_SQUARED,
    PlaneField,
    PlaneGrid,
    Samples,
    TransformParameter,
    gauge_factor,
    measure_density,
)
from .errors import SupportError
from .hermite import hermite_analyze, hermite_basis, hermite_synthesize
from .quadrature import (
    MAX_ORDER,
    QuadratureRule,
    required_order,
    tail_fraction,
)

DEFAULT_ORDER = 64
DEFAULT_SPECTRAL_ORDER = 40
BOUNDARY_TAIL = 1e-10
_CHUNK = 4096
_EXP_LIMIT = 700.0  # exponent ceiling before float64 overflow


def evaluate_signal(signal, x) -> np.ndarray:
    """Pointwise complex values of any supported signal representation."""
    x = np.asarray(x, dtype=float)
    if isinstance(signal, CoherentSum):
        return closedform.coherent_sum_values(signal.weights, signal.labels, x)
    if isinstance(signal, HermiteRep):
        return hermite_synthesize(signal.coeffs, signal.s, x)
    if isinstance(signal, Samples):
        re = np.interp(x, signal.xs, signal.values.real, left=0.0, right=0.0)
        im = np.interp(x, signal.xs, signal.values.imag, left=0.0, right=0.0)
        return re + 1j * im
    if callable(signal):
        return np.asarray(signal(x), dtype=complex)
    raise TypeError(f"unsupported signal type {type(signal).__name__}")


def _envelope(signal) -> tuple[float, float, float]:
    """Gaussian envelope model (precision, center, oscillation) of a signal.

    precision lam means |f(x)| <~ e^{-lam (x - center)^2}; oscillation is the
    largest phase frequency the signal carries. Unknown structure maps to
    (0, 0, 0) and is then covered by the kernel envelope and tail checks.
    """
    if isinstance(signal, CoherentSum):
        qs = [lab.Q for lab in signal.labels]
        return 0.5, (min(qs) + max(qs)) / 2, max(abs(lab.P) for lab in signal.labels)
    if isinstance(signal, HermiteRep):
        return 1 / (4 * signal.s), 0.0, 0.0
    if isinstance(signal, Samples):
        return 0.0, float(0.5 * (signal.xs[0] + signal.xs[-1])), 0.0
    return 0.0, 0.0, 0.0


def _poly_margin(signal) -> int:
    """Extra rule order for signals with polynomial structure."""
    if isinstance(signal, HermiteRep):
        return signal.coeffs.size // 2 + 8
    return 0


def _kernel_rule(s: float, signal, max_abs_p: float,
                 order: int | None) -> tuple[QuadratureRule, float, float]:
    """Envelope-matched rule plus (product precision, signal center)."""
    lam, center_f, osc = _envelope(signal)
    a = 1 / (2 * s) + lam
    sigma = 1 / math.sqrt(a)
    if order is None:
        base = DEFAULT_ORDER + _poly_margin(signal)
        order = max(base, required_order(max_abs_p + osc, sigma, minimum=1))
    rule = QuadratureRule.gauss_hermite(int(order), center=0.0, scale=sigma)
    rule.check_oscillation(max_abs_p + osc)
    return rule, a, center_f


def _check_sample_bandwidth(signal: Samples, freq: float) -> None:
    """Sampled signals integrate on their own grid; cap the phase frequency.

    Trapezoid sums of a decaying integrand sampled at spacing dx resolve
    e^{i k x} with alias error suppressed by the Gaussian kernel factor while
    k stays below half the Nyquist rate pi/dx.
    """
    limit = math.pi / (2 * signal.dx)
    if freq > limit:
        needed = math.pi / (2 * freq)
        raise SupportError(
            f"oscillation frequency {freq:.3g} exceeds the sample-grid limit "
            f"{limit:.3g}; resample with spacing <= {needed:.3g}",
            suggestion=needed)


def _reduced_at_points(s: float, signal, points: np.ndarray,
                       order: int | None = None) -> np.ndarray:
    """Reduced transform values at arbitrary complex points (flattened loop).

    Sampled signals integrate on their own grid (trapezoid weights, exact
    sample values); other signals use a per-point recentered Gauss-Hermite
    rule matched to the kernel-times-envelope Gaussian.
    """
    pts = np.asarray(points, dtype=complex)
    flat = pts.ravel()
    c = flat.real
    b = flat.imag
    max_freq = float(np.max(np.abs(b))) / s if flat.size else 0.0
    out = np.empty(flat.shape, dtype=complex)
    norm = 1 / math.sqrt(2 * math.pi * s)
    if isinstance(signal, Samples):
        _check_sample_bandwidth(signal, max_freq)
        xs = signal.xs[None, :]
        fw = signal.values * QuadratureRule.trapezoid(signal.xs).weights
        for start in range(0, flat.size, _CHUNK):
            sl = slice(start, min(start + _CHUNK, flat.size))
            cc = c[sl][:, None]
            bb = b[sl][:, None]
            with np.errstate(under="ignore"):
                weighted = np.exp(-(cc - xs) ** 2 / (2 * s)
                                  + 1j * (bb / s) * (xs - cc)) * fw[None, :]
            frac = tail_fraction(weighted)
            if frac > BOUNDARY_TAIL:
                raise SupportError(
                    f"sample grid too short: kernel-weighted edge fraction "
                    f"{frac:.2e} exceeds {BOUNDARY_TAIL:.0e}; extend the "
                    f"sample range")
            out[sl] = weighted.sum(axis=1) * norm
        return out.reshape(pts.shape)
    rule, a, center_f = _kernel_rule(s, signal, max_freq, order)
    lam = a - 1 / (2 * s)
    for start in range(0, flat.size, _CHUNK):
        sl = slice(start, min(start + _CHUNK, flat.size))
        cc = c[sl][:, None]
        bb = b[sl][:, None]
        m = (cc / (2 * s) + lam * center_f) / a
        nodes = m + rule.nodes[None, :]
        with np.errstate(under="ignore"):
            kernel = np.exp(-(cc - nodes) ** 2 / (2 * s)
                            + 1j * (bb / s) * (nodes - cc))
            terms = kernel * evaluate_signal(signal, nodes)
            weighted = terms * rule.absorbed[None, :]
        frac = tail_fraction(weighted)
        if frac > BOUNDARY_TAIL:
            raise SupportError(
                f"kernel quadrature tail fraction {frac:.2e} exceeds "
                f"{BOUNDARY_TAIL:.0e}; raise the order",
                suggestion=2 * rule.order)
        out[sl] = weighted.sum(axis=1) * norm
    return out.reshape(pts.shape)


def _reduced_on_grid(s: float, signal, grid: PlaneGrid,
                     order: int | None = None) -> np.ndarray:
    """Reduced transform values on a tensor grid via the separable fast path.

    Signal routing as in :func:`_reduced_at_points`.
    """
    xs = grid.xs
    ps = grid.ps
    max_freq = float(np.max(np.abs(ps)))
    if isinstance(signal, Samples):
        _check_sample_bandwidth(signal, max_freq)
        nodes1 = signal.xs                                     # fixed nodes
        fw = signal.values * QuadratureRule.trapezoid(nodes1).weights
        with np.errstate(under="ignore"):
            kernel = np.exp(-(xs[:, None] - nodes1[None, :]) ** 2 / (2 * s))
            v = kernel * fw[None, :]
            osc = np.exp(1j * np.multiply.outer(ps, nodes1))   # (np, M)
            phase = np.exp(-1j * np.multiply.outer(xs, ps))    # (nx, np)
        frac = tail_fraction(v)
        if frac > BOUNDARY_TAIL:
            raise SupportError(
                f"sample grid too short: kernel-weighted edge fraction "
                f"{frac:.2e} exceeds {BOUNDARY_TAIL:.0e}; extend the sample "
                f"range")
        return phase * (v @ osc.T) / math.sqrt(2 * math.pi * s)
    rule, a, center_f = _kernel_rule(s, signal, max_freq, order)
    lam = a - 1 / (2 * s)
    m = (xs / (2 * s) + lam * center_f) / a          # per-column center
    nodes = m[:, None] + rule.nodes[None, :]          # (nx, order)
    with np.errstate(under="ignore"):
        kernel = np.exp(-(xs[:, None] - nodes) ** 2 / (2 * s))
        v = kernel * evaluate_signal(signal, nodes) * rule.absorbed[None, :]
        osc = np.exp(1j * np.multiply.outer(ps, rule.nodes))   # (np, order)
        phase = np.exp(1j * np.multiply.outer(m - xs, ps))     # (nx, np)
    frac = tail_fraction(v)
    if frac > BOUNDARY_TAIL:
        raise SupportError(
            f"kernel quadrature tail fraction {frac:.2e} exceeds "
            f"{BOUNDARY_TAIL:.0e}; raise the order", suggestion=2 * rule.order)
    return phase * (v @ osc.T) / math.sqrt(2 * math.pi * s)


def sb_kernel_apply(s: float, signal, points,
                    order: int | None = None) -> np.ndarray:
    """Holomorphic-gauge transform values at complex points z = x + i s p.

    Direct quadrature route. Values grow like e^{(Im z)^2 / 2s}; an overflow
    guard raises SupportError where that exceeds float64 (build the weighted
    gauge instead via hfrft_apply in that regime).
    """
    if not (0.0 < s < math.inf):
        raise ValueError(f"s must be positive and finite, got {s!r}")
    pts = np.asarray(points, dtype=complex)
    growth = pts.imag ** 2 / (2 * s)
    if pts.size and growth.max() > _EXP_LIMIT:
        raise SupportError(
            "holomorphic-gauge values overflow float64 at these points; "
            "use the weighted gauge")
    return np.exp(growth) * _reduced_at_points(s, signal, pts, order)


@dataclass(frozen=True, eq=False)
class BasisImageCache:
    """Transform images of the scale-s basis functions at fixed plane points.

    Two provenances are stored side by side: ``kernel_images`` come from the
    quadrature engine (rows n = 0..n_max), ``claimed_images`` from the
    closed-form coefficient table d_{s,n} z^n e^{-z^2/(6s)} (rows
    n = 0..claimed_max). The two disagree by design for n >= 1; see
    basis_image_audit.
    """

    s: float
    points: np.ndarray          # complex, flat
    kernel_images: np.ndarray   # (n_max+1, len(points))
    claimed_images: np.ndarray  # (claimed_max+1, len(points))
    order: int

    @property
    def n_max(self) -> int:
        return self.kernel_images.shape[0] - 1


def claimed_basis_image(s: float, n: int, z) -> np.ndarray:
    """Closed-form candidate image d_{s,n} z^n e^{-z^2/(6s)} of basis function n."""
    z = np.asarray(z, dtype=complex)
    a_sn = (2 * s) ** -0.25 * (math.pi * math.factorial(n)) ** -0.5 * s ** (n / 2)
    d_sn = (-1.0) ** n * a_sn * s ** -float(n) * math.pi ** -0.25 \
        * 6 ** -0.5 * 3.0 ** -n
    return d_sn * z ** n * np.exp(-z * z / (6 * s))


def build_basis_images(s: float, n_max: int, points,
                       order: int | None = None,
                       claimed_max: int | None = None) -> BasisImageCache:
    """Images of h_0^s .. h_{n_max}^s at the given complex points.

    The kernel rows share one envelope-matched rule (the basis functions all
    decay like e^{-x^2/4s}); the claimed rows cover n <= min(n_max, 12).
    """
    pts = np.asarray(points, dtype=complex).ravel()
    growth = pts.imag ** 2 / (2 * s)
    if pts.size and growth.max() > _EXP_LIMIT:
        raise SupportError("basis images overflow float64 at these points")
    probe = HermiteRep(s, np.ones(n_max + 1, dtype=complex))
    rule, a, _ = _kernel_rule(s, probe, float(np.max(np.abs(pts.imag)) / s) if pts.size else 0.0, order)
    images = np.empty((n_max + 1, pts.size), dtype=complex)
    amp = np.exp(growth)
    norm = 1 / math.sqrt(2 * math.pi * s)
    for start in range(0, pts.size, _CHUNK):
        sl = slice(start, min(start + _CHUNK, pts.size))
        cc = pts.real[sl][:, None]
        bb = pts.imag[sl][:, None]
        m = cc / (2 * s) / a
        nodes = m + rule.nodes[None, :]
        with np.errstate(under="ignore"):
            kernel = np.exp(-(cc - nodes) ** 2 / (2 * s)
                            + 1j * (bb / s) * (nodes - cc)) * rule.absorbed[None, :]
            basis = hermite_basis(n_max, s, nodes)     # (n+1, chunk, order)
        images[:, sl] = np.einsum("co,nco->nc", kernel, basis) * amp[sl] * norm
    c_max = min(n_max, 12) if claimed_max is None else min(claimed_max, n_max)
    claimed = np.stack([claimed_basis_image(s, n, pts)
                        for n in range(c_max + 1)])
    return BasisImageCache(s=s, points=pts, kernel_images=images,
                           claimed_images=claimed, order=rule.order)


def sb_spectral_apply(s: float, coeffs, cache: BasisImageCache) -> np.ndarray:
    """Holomorphic-gauge values from basis coefficients and cached images."""
    coeffs = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    if coeffs.size > cache.n_max + 1:
        raise ValueError(
            f"{coeffs.size} coefficients exceed cache degree {cache.n_max}")
    if abs(s - cache.s) > 1e-14 * max(s, cache.s):
        raise ValueError("cache was built for a different scale")
    return coeffs @ cache.kernel_images[:coeffs.size]


def hfrft_apply(param: TransformParameter, signal, grid: PlaneGrid,
                method: str = "kernel", order: int | None = None,
                spectral_order: int = DEFAULT_SPECTRAL_ORDER) -> PlaneField:
    """Weighted-gauge transform field of a signal over a plane grid.

    t = 0 embeds the signal as a p-independent field (identity member);
    t = pi/2 delegates to endpoint_apply. The kernel method cancels all
    growing exponentials analytically; the spectral method projects onto
    spectral_order + 1 basis functions first and uses cached basis images.
    """
    if param.is_identity:
        vals = np.broadcast_to(
            evaluate_signal(signal, grid.xs)[:, None], grid.shape).copy()
        return PlaneField(grid, vals, Gauge.WEIGHTED, param)
    if param.is_endpoint:
        return endpoint_apply(signal, grid, order)
    s = param.s
    if method == "kernel":
        reduced = _reduced_on_grid(s, signal, grid, order)
        vals = (1 + s * s) ** 0.25 * reduced
        return PlaneField(grid, vals, Gauge.WEIGHTED, param)
    if method == "spectral":
        coeffs = hermite_analyze(signal, s, spectral_order)
        cache = build_basis_images(s, spectral_order, grid.z_values(s).ravel(),
                                   order=order)
        raw = sb_spectral_apply(s, coeffs, cache).reshape(grid.shape)
        vals = raw * gauge_factor(param, grid.ps)[None, :]
        return PlaneField(grid, vals, Gauge.WEIGHTED, param)
    raise ValueError(f"method must be 'kernel' or 'spectral', got {method!r}")


def sb_field(s: float, signal, grid: PlaneGrid,
             order: int | None = None) -> PlaneField:
    """Holomorphic-gauge field over a tensor grid (separable fast path).

    Same quantity as sb_kernel_apply on grid.z_values(s), assembled with one
    matrix product instead of a per-point loop.
    """
    if not (0.0 < s < math.inf):
        raise ValueError(f"s must be positive and finite, got {s!r}")
    growth = s * grid.ps ** 2 / 2
    if growth.max() > _EXP_LIMIT:
        raise SupportError(
            "holomorphic-gauge values overflow float64 on this grid; "
            "use the weighted gauge")
    reduced = _reduced_on_grid(s, signal, grid, order)
    vals = reduced * np.exp(growth)[None, :]
    return PlaneField(grid, vals, Gauge.HOLOMORPHIC,
                      TransformParameter.from_s(s))


def endpoint_apply(signal, grid: PlaneGrid,
                   order: int | None = None) -> PlaneField:
    """Field at t = pi/2: e^{-i p x} times the Fourier transform of the signal.

    Fourier convention: (F f)(p) = (2 pi)^{-1/2} integral e^{+i p x} f(x) dx.
    Quadrature route (independent of the endpoint closed form): sampled
    signals integrate on their own grid, others on an envelope-matched rule.
    """
    ps = grid.ps
    p_max = float(np.max(np.abs(ps)))
    if isinstance(signal, Samples):
        if signal.dx > math.pi / (2 * p_max):
            raise SupportError(
                f"sample spacing {signal.dx:.3g} too coarse for |p| <= "
                f"{p_max:.3g}; need <= {math.pi / (2 * p_max):.3g}",
                suggestion=math.pi / (2 * p_max))
        rule = QuadratureRule.trapezoid(signal.xs)
        f_vals = signal.values
    else:
        lam, center_f, osc = _envelope(signal)
        if lam == 0.0:
            lam = 1 / 32  # callables: wide default envelope, tail-checked below
        sigma = 1 / math.sqrt(lam)
        if order is None:
            order = max(DEFAULT_ORDER + _poly_margin(signal),
                        required_order(p_max + osc, sigma, minimum=1))
        rule = QuadratureRule.gauss_hermite(int(order), center=center_f,
                                            scale=sigma)
        rule.check_oscillation(p_max + osc)
        f_vals = evaluate_signal(signal, rule.nodes)
        frac = tail_fraction(f_vals * rule.absorbed)
        if frac > BOUNDARY_TAIL:
            raise SupportError(
                f"signal tail fraction {frac:.2e} at the rule edge; "
                "raise the order", suggestion=2 * rule.order)
    weighted = f_vals * rule.absorbed
    transform = np.exp(1j * np.multiply.outer(ps, rule.nodes)) @ weighted
    transform /= math.sqrt(2 * math.pi)
    vals = np.exp(-1j * np.multiply.outer(grid.xs, ps)) * transform[None, :]
    return PlaneField(grid, vals, Gauge.WEIGHTED,
                      TransformParameter.from_t(math.pi / 2))


def sb_inverse(s: float, field, xs, R: float,
               num_p: int | None = None) -> tuple[np.ndarray, float]:
    """Signal values on xs from a holomorphic-gauge field, truncated at |p| <= R.

    Implements the p-slice reconstruction
    f(x) = sqrt(s / (2 pi)) * integral_{-R}^{R} e^{-s p^2/2} F(x + i s p) dp.
    ``field`` is either a callable z -> values (evaluated on a fresh p grid
    of num_p points, auto-sized when None) or a PlaneField in the holomorphic
    gauge, integrated on its own p nodes; then xs must lie on the field's
    x-axis and the grid must cover [-R, R]. Returns
    (values, truncation_estimate), the estimate bounding the discarded
    |p| > R tail.
    """
    xs = np.asarray(xs, dtype=float)
    if callable(field):
        if num_p is None:
            width = float(np.max(np.abs(xs))) + 8.0
            num_p = 2 * math.ceil(2 * R * width / math.pi) + 1
        ps = np.linspace(-R, R, num_p)
        z = xs[:, None] + 1j * s * ps[None, :]
        vals = np.asarray(field(z), dtype=complex)
    else:
        if field.gauge is not Gauge.HOLOMORPHIC:
            field = field.to_gauge(Gauge.HOLOMORPHIC)
        if abs(field.param.s - s) > 1e-12 * max(s, 1):
            raise ValueError("field parameter does not match s")
        sel = np.abs(field.grid.ps) <= R + 1e-12
        ps = field.grid.ps[sel]
        if ps.size < 9 or ps.min() > -R + field.grid.dp or ps.max() < R - field.grid.dp:
            raise SupportError(
                f"field p-range does not cover [-{R}, {R}] finely enough")
        ix = np.searchsorted(field.grid.xs, xs)
        ix = np.clip(ix, 0, field.grid.xs.size - 1)
        if np.max(np.abs(field.grid.xs[ix] - xs)) > 1e-9:
            raise ValueError("xs must lie on the field grid x-axis")
        vals = field.values[np.ix_(ix, np.flatnonzero(sel))]
    rule = QuadratureRule.trapezoid(ps)
    with np.errstate(under="ignore"):
        integrand = vals * np.exp(-s * ps * ps / 2)[None, :]
    const = math.sqrt(s / (2 * math.pi))
    out = const * (integrand @ rule.absorbed)
    edge = np.abs(integrand[:, 0]) + np.abs(integrand[:, -1])
    estimate = const * float(edge.max()) / (s * R)
    return out, estimate


def _trapezoid_2d(grid: PlaneGrid, dens: np.ndarray) -> float:
    wx = QuadratureRule.trapezoid(grid.xs).absorbed
    wp = QuadratureRule.trapezoid(grid.ps).absorbed
    return float((wx @ dens) @ wp)


def _check_field_tail(dens: np.ndarray, what: str) -> None:
    peak = dens.max()
    if peak == 0:
        return
    edge = max(dens[0, :].max(), dens[-1, :].max(),
               dens[:, 0].max(), dens[:, -1].max())
    if edge > BOUNDARY_TAIL * peak:
        raise SupportError(
            f"{what}: boundary amplitude fraction {edge / peak:.2e} exceeds "
            f"{BOUNDARY_TAIL:.0e}; enlarge the grid (see suggest_grid)")


def norm_l2(signal) -> float:
    """Squared norm <f, f> under the weighted inner product (exact when possible)."""
    if isinstance(signal, CoherentSum):
        total = 0.0 + 0.0j
        for wa, la in zip(signal.weights, signal.labels):
            for wb, lb in zip(signal.weights, signal.labels):
                total += np.conj(wa) * wb * closedform.coherent_overlap(la, lb)
        return float(total.real)
    if isinstance(signal, HermiteRep):
        return float(np.vdot(signal.coeffs, signal.coeffs).real)
    if isinstance(signal, Samples):
        dens = np.abs(signal.values) ** 2
        if tail_fraction(dens) > 1e-8:
            raise SupportError("sampled signal has edge mass; extend the grid")
        rule = QuadratureRule.trapezoid(signal.xs)
        return float(math.pi ** 0.5 * dens @ rule.absorbed)
    raise TypeError(f"norm_l2 needs a signal representation, got {type(signal).__name__}")


def norm_ht(field: PlaneField) -> float:
    """Squared range norm of a weighted-gauge field: measure_density(t) * int |F|^2."""
    if field.gauge is not Gauge.WEIGHTED:
        raise ValueError("norm_ht expects the weighted gauge")
    t = field.param.t
    if not 0 < t < math.pi / 2:
        raise ValueError("range norm defined for t strictly inside (0, pi/2)")
    dens = np.abs(field.values) ** 2
    _check_field_tail(np.sqrt(dens), "weighted-gauge norm")
    return measure_density(t) * _trapezoid_2d(field.grid, dens)


def norm_hs(field: PlaneField) -> float:
    """Squared range norm of a holomorphic-gauge field:
    sqrt(s) * int |F(x+isp)|^2 e^{-s p^2} dx dp."""
    if field.gauge is not Gauge.HOLOMORPHIC:
        raise ValueError("norm_hs expects the holomorphic gauge")
    s = field.param.s
    with np.errstate(under="ignore"):
        dens = np.abs(field.values) ** 2 \
            * np.exp(-s * field.grid.ps ** 2)[None, :]
    _check_field_tail(np.sqrt(dens), "holomorphic-gauge norm")
    return math.sqrt(s) * _trapezoid_2d(field.grid, dens)


def inner_ht(field_a: PlaneField, field_b: PlaneField) -> complex:
    """Range inner product of two weighted-gauge fields on the same grid."""
    if field_a.gauge is not Gauge.WEIGHTED or field_b.gauge is not Gauge.WEIGHTED:
        raise ValueError("inner_ht expects weighted-gauge fields")
    if field_a.grid is not field_b.grid and (
            field_a.grid.shape != field_b.grid.shape
            or not np.array_equal(field_a.grid.xs, field_b.grid.xs)
            or not np.array_equal(field_a.grid.ps, field_b.grid.ps)):
        raise ValueError("fields must share a grid")
    prod = np.conj(field_a.values) * field_b.values
    wx = QuadratureRule.trapezoid(field_a.grid.xs).absorbed
    wp = QuadratureRule.trapezoid(field_a.grid.ps).absorbed
    return measure_density(field_a.param.t) * complex((wx @ prod) @ wp)


def suggest_grid(param: TransformParameter, signal,
                 spacing: float = 0.085, tail: float = BOUNDARY_TAIL) -> PlaneGrid:
    """Grid sized so weighted-gauge fields of the signal satisfy the tail bound.

    Uses the analytic decay rates of packet images, |F| ~
    exp(-(x - Q)^2 / (2(1+s)) - s (p - P)^2 / (2(1+s))), padded by the
    signal's own phase-space extent.
    """
    s = param.s
    if not (0 < s < math.inf):
        raise ValueError("suggest_grid needs 0 < t < pi/2")
    drop = -math.log(tail)  # amplitude decade budget
    dx = math.sqrt(2 * drop * (1 + s))
    dp = math.sqrt(2 * drop * (1 + s) / s)
    q_max = p_max = 0.0
    pad_x = pad_p = 0.0
    if isinstance(signal, CoherentSum):
        q_max = max(abs(lab.Q) for lab in signal.labels)
        p_max = max(abs(lab.P) for lab in signal.labels)
    elif isinstance(signal, HermiteRep):
        n = signal.coeffs.size
        pad_x = 2 * math.sqrt(signal.s * (2 * n + 1))
        pad_p = math.sqrt((2 * n + 1) / (2 * signal.s)) + 1
    elif isinstance(signal, Samples):
        q_max = float(np.max(np.abs(signal.xs)))
        pad_p = math.pi / (2 * signal.dx) / 4  # quarter of the sample bandwidth
    x_extent = q_max + pad_x + 1.1 * dx + 0.5
    p_extent = p_max + pad_p + 1.1 * dp + 0.5
    nx = 2 * math.ceil(x_extent / spacing / 2) + 1
    npts = 2 * math.ceil(p_extent / spacing / 2) + 1
    return PlaneGrid.regular(x_extent, p_extent, nx, npts)


def default_report_signals() -> list[tuple[str, object]]:
    """Deterministic signal set used by unitarity_report and verification."""
    rng = np.random.default_rng(20260815)
    coeffs = rng.normal(size=12) + 1j * rng.normal(size=12)
    return [
        ("packet(0,0)", CoherentSum((1.0,), (CoherentLabel(0.0, 0.0),))),
        ("packet(0.8,-0.6)", CoherentSum((1.0,), (CoherentLabel(0.8, -0.6),))),
        ("packet(-1.2,0.4)", CoherentSum((1.0,), (CoherentLabel(-1.2, 0.4),))),
        ("pair superposition", CoherentSum(
            (1.0, 0.7j), (CoherentLabel(0.5, 1.0), CoherentLabel(-0.4, -0.8)))),
        ("triple superposition", CoherentSum(
            (0.6, -0.8, 0.35 + 0.2j),
            (CoherentLabel(0.0, 1.3), CoherentLabel(1.0, 0.0),
             CoherentLabel(-0.7, -0.5)))),
        ("random basis signal", HermiteRep(1.0, coeffs / np.linalg.norm(coeffs))),
    ]


@dataclass(frozen=True)
class UnitarityReport:
    """Measured domain-to-range norm ratios across signals and parameters.

    ``ht_ratios[i][j]`` is |A_t f_i|^2 / |f_i|^2 at t_values[j] (weighted
    gauge, plane measure); ``hs_ratios[i][j]`` the holomorphic-gauge ratio at
    s_values[j], which the range norm definition makes exactly 1.
    """

    signal_names: tuple[str, ...]
    t_values: tuple[float, ...]
    s_values: tuple[float, ...]
    ht_ratios: np.ndarray
    hs_ratios: np.ndarray

    @property
    def kappa_sq_fit(self) -> float:
        return float(np.mean(self.ht_ratios))

    @property
    def ht_spread(self) -> float:
        return float(self.ht_ratios.max() - self.ht_ratios.min())

    @property
    def hs_max_deviation(self) -> float:
        return float(np.max(np.abs(self.hs_ratios - 1)))

    def to_dict(self) -> dict:
        return {
            "signal_names": list(self.signal_names),
            "t_values": list(self.t_values),
            "s_values": list(self.s_values),
            "ht_ratios": self.ht_ratios.tolist(),
            "hs_ratios": self.hs_ratios.tolist(),
            "kappa_sq_fit": self.kappa_sq_fit,
            "kappa_sq_expected": KAPPA_SQUARED,
            "ht_spread": self.ht_spread,
            "hs_max_deviation": self.hs_max_deviation,
        }


def unitarity_report(signals: list[tuple[str, object]] | None = None,
                     t_values: tuple[float, ...] = (0.3, math.pi / 4, 1.2),
                     s_values: tuple[float, ...] = (0.5, 1.0, 2.0)) -> UnitarityReport:
    """Norm-ratio survey over a signal battery; see UnitarityReport."""
    if signals is None:
        signals = default_report_signals()
    names = tuple(name for name, _ in signals)
    ht = np.empty((len(signals), len(t_values)))
    hs = np.empty((len(signals), len(s_values)))
    for i, (_, sig) in enumerate(signals):
        base = norm_l2(sig)
        for j, t in enumerate(t_values):
            param = TransformParameter.from_t(t)
            field = hfrft_apply(param, sig, suggest_grid(param, sig))
            ht[i, j] = norm_ht(field) / base
        for j, s in enumerate(s_values):
            param = TransformParameter.from_s(s)
            field = sb_field(s, sig, suggest_grid(param, sig))
            hs[i, j] = norm_hs(field) / base
    return UnitarityReport(signal_names=names, t_values=tuple(t_values),
                           s_values=tuple(s_values), ht_ratios=ht,
                           hs_ratios=hs)


def second_moment_ellipse(field: PlaneField) -> tuple[float, float, float]:
    """Intensity-weighted second moments (var_x, var_p, var_p/var_x) of a field."""
    dens = np.abs(field.values) ** 2
    _check_field_tail(np.sqrt(dens), "second moments")
    grid = field.grid
    mass = _trapezoid_2d(grid, dens)
    mx = _trapezoid_2d(grid, dens * grid.xs[:, None]) / mass
    mp = _trapezoid_2d(grid, dens * grid.ps[None, :]) / mass
    vx = _trapezoid_2d(grid, dens * (grid.xs[:, None] - mx) ** 2) / mass
    vp = _trapezoid_2d(grid, dens * (grid.ps[None, :] - mp) ** 2) / mass
    return vx, vp, vp / vx


def basis_image_audit(s: float = 0.7, z_probe: complex = 0.6 + 0.45j,
                      order: int | None = None) -> dict:
    """Compare quadrature basis images against the claimed closed-form table.

    The claimed images d_{s,n} z^n e^{-z^2/(6s)} disagree with quadrature in
    two documented ways: the n = 0 constant is off by a factor (2 under the
    table's own kernel constant, which is pi^{-1/4} times the unitary one, so
    2 pi^{1/4} against this engine), and for n >= 2 the true image is not
    proportional to z^n e^{-z^2/(6s)} at all: the n = 2 image keeps a nonzero
    z^0 component (exact ratio c0/c2 = -3s/4). Both observations are returned
    for reporting; reproducing them is the expected behavior.
    """
    zs = np.array([z_probe, -z_probe, 1j * z_probe,
                   0.5 * z_probe, 0.0], dtype=complex)
    cache = build_basis_images(s, 2, zs, order=order)
    # the table's kernel constant is pi^{-1/4} of the unitary normalization
    printed_scale = math.pi ** -0.25
    out: dict = {"s": s, "z_probe": [z_probe.real, z_probe.imag]}
    for n in (0, 1):
        with np.errstate(invalid="ignore", divide="ignore"):
            ratios = cache.kernel_images[n] / cache.claimed_images[n]
        finite = ratios[np.isfinite(ratios)]  # z=0 gives 0/0 for n=1
        mean = complex(finite.mean())
        out[f"n{n}_ratio"] = [mean.real, mean.imag]
        out[f"n{n}_ratio_printed_convention"] = [
            (printed_scale * mean).real, (printed_scale * mean).imag]
        out[f"n{n}_ratio_spread"] = float(np.max(np.abs(finite - mean)))
    # z = 0 isolates the z^0 component of the n = 2 image
    img0 = complex(cache.kernel_images[2, -1])
    # remove the shared Gaussian, then c2 from a second probe point
    bare = cache.kernel_images[2] * np.exp(zs * zs / (6 * s))
    c0 = complex(bare[-1])
    c2 = complex((bare[0] - c0) / (z_probe ** 2))
    out["n2_image_at_zero"] = [img0.real, img0.imag]
    out["n2_c0_over_c2"] = [(c0 / c2).real, (c0 / c2).imag]
    out["n2_c0_over_c2_expected"] = -3 * s / 4
    return out
