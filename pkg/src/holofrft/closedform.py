"""Exact analytic evaluations for Gaussian wave packets.

Everything here is a closed-form expression: the packets themselves, their
transform images in both gauges, the Fourier-endpoint image, and pairwise
overlaps. These serve as oracles for the quadrature engine and as fast paths
for coherent input.

The transform image of a packet admits two algebraically different
assemblies, kept as separate code paths on purpose:

* ``Form.DIRECT`` writes the image as a single Gaussian in the centered
  variables (x - Q, p - P),
* ``Form.FACTORED`` builds it from the holomorphic coordinate w and the
  shifted complex centers Q_t = cos(t) Q + i sin(t) P and
  P_t = cos(t) P + i sin(t) Q (the pairing that keeps the two assemblies
  equal pointwise; swapping the roles of the two centers breaks the t -> 0
  limit).

Both return the weighted-gauge image; they agree to near machine precision
and the test suite enforces that.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .core import CoherentLabel, TransformParameter
from .errors import DegenerateCoordinateError

QUARTER_PI = math.pi / 4


class Form(enum.Enum):
    DIRECT = "direct"
    FACTORED = "factored"


def coherent_state(x, label: CoherentLabel) -> np.ndarray:
    """Wave packet psi_Y(x) = pi^{-1/2} e^{-i P (x - Q) - (x - Q)^2 / 2}.

    Unit norm under the sqrt(pi)-weighted inner product.
    """
    x = np.asarray(x, dtype=float)
    dx = x - label.Q
    return math.pi ** -0.5 * np.exp(-1j * label.P * dx - dx * dx / 2)


def coherent_overlap(a: CoherentLabel, b: CoherentLabel) -> complex:
    """Exact inner product <psi_a, psi_b> under the weighted inner product."""
    dq = a.Q - b.Q
    dp = a.P - b.P
    phase = (a.P * b.Q - b.P * a.Q) / 2 + (b.P * b.Q - a.P * a.Q) / 2
    return complex(np.exp(-(dq * dq + dp * dp) / 4 + 1j * phase))


def _beta(t: float) -> float:
    return (math.sqrt(2) * math.pi * math.sin(QUARTER_PI + t)) ** -0.5


def hfrft_coherent(x, p, param: TransformParameter, label: CoherentLabel,
                   form: Form = Form.DIRECT) -> np.ndarray:
    """Weighted-gauge transform image of a packet at plane points (x, p).

    DIRECT accepts the full closed interval t in [0, pi/2]; FACTORED uses
    tan(t) and is restricted to [0, pi/2).
    """
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    t, P, Q = param.t, label.P, label.Q

    if form is Form.DIRECT:
        # single Gaussian in the centered variables
        dx = x - Q
        dp = p - P
        denom = 2 * math.sqrt(2) * math.sin(QUARTER_PI + t)
        expo = (-1j * P * dx
                - (math.sin(t) * dp * dp + math.cos(t) * dx * dx
                   + 2j * math.sin(t) * dx * dp) / denom)
        return _beta(t) * np.exp(expo)

    if form is Form.FACTORED:
        if param.is_endpoint:
            raise DegenerateCoordinateError(
                "factored assembly uses tan(t); evaluate the endpoint with "
                "hfrft_endpoint_coherent")
        s = param.s
        ct, st = math.cos(t), math.sin(t)
        w = ct * x + 1j * st * p
        q_t = ct * Q + 1j * st * P
        p_t = ct * P + 1j * st * Q
        half_cot = (1 - s) / (1 + s) / 2  # cot(pi/4 + t) / 2, exact at t=pi/4
        expo = (math.sin(2 * t) * (P * P + Q * Q) / 4
                + 1j * st * st * P * Q
                - 1j * p_t * (w - q_t)
                - half_cot * (w - q_t) ** 2
                - s * w * w / 2
                - s * p * p / 2)
        return _beta(t) * np.exp(expo)

    raise ValueError(f"unknown form {form!r}")


def hfrft_endpoint_coherent(x, p, label: CoherentLabel) -> np.ndarray:
    """Transform image of a packet at t = pi/2 (Fourier endpoint).

    Equals e^{-i p x} times the Fourier transform of the packet under the
    e^{+i p x} transform convention; also the pointwise t -> pi/2 limit of
    hfrft_coherent.
    """
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    dx = x - label.Q
    dp = p - label.P
    return math.pi ** -0.5 * np.exp(
        -1j * label.P * dx - 1j * dx * dp - dp * dp / 2)


def sb_coherent(s: float, label: CoherentLabel, z) -> np.ndarray:
    """Holomorphic-gauge image of a packet at complex plane points z = x + i s p."""
    if not (0.0 < s < math.inf):
        raise DegenerateCoordinateError(f"image undefined at s={s!r}")
    z = np.asarray(z, dtype=complex)
    P, Q = label.P, label.Q
    zq = z - Q
    return (math.pi * (1 + s)) ** -0.5 * np.exp(
        -zq * zq / (2 * (1 + s)) - 1j * P * zq / (1 + s)
        - s * P * P / (2 * (1 + s)))


def coherent_sum_values(weights, labels, x) -> np.ndarray:
    """Pointwise values of a finite packet superposition."""
    acc = None
    for w, lab in zip(weights, labels):
        term = w * coherent_state(x, lab)
        acc = term if acc is None else acc + term
    return acc


def sb_coherent_sum(s: float, weights, labels, z) -> np.ndarray:
    """Holomorphic-gauge image of a packet superposition (linearity)."""
    acc = None
    for w, lab in zip(weights, labels):
        term = w * sb_coherent(s, lab, z)
        acc = term if acc is None else acc + term
    return acc


def hfrft_coherent_sum(x, p, param: TransformParameter, weights, labels,
                       form: Form = Form.DIRECT) -> np.ndarray:
    """Weighted-gauge image of a packet superposition (linearity)."""
    acc = None
    for w, lab in zip(weights, labels):
        term = w * hfrft_coherent(x, p, param, lab, form)
        acc = term if acc is None else acc + term
    return acc


def endpoint_coherent_sum(x, p, weights, labels) -> np.ndarray:
    """Endpoint image of a packet superposition (linearity)."""
    acc = None
    for w, lab in zip(weights, labels):
        term = w * hfrft_endpoint_coherent(x, p, lab)
        acc = term if acc is None else acc + term
    return acc
