"""Double-exponential quadrature rules.

Two rules cover every integral in the package: a tanh-sinh rule on a finite
interval (handles algebraic and logarithmic endpoint singularities) and an
exp-sinh rule on (0, inf) for integrands with exponential decay.

Integrands receive endpoint distances computed in the transformed variable,
so a factor like ``(1 - y) ** -0.5`` can be evaluated without cancellation
arbitrarily close to the endpoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

__all__ = ["QuadResult", "tanh_sinh", "exp_sinh"]

_HALF_PI = math.pi / 2.0
# |g| beyond this makes cosh(g)**2 overflow; the weight is then exactly 0.
_G_MAX = 350.0


@dataclass(frozen=True)
class QuadResult:
    value: float
    est_abs_error: float
    nodes_used: int
    converged: bool


def _tanh_sinh_level(f, a, b, h, width):
    """One trapezoid pass at mesh spacing h.

    Returns (sum*h, sum of |contributions|*h, nodes); the absolute mass sets
    the rounding floor for cancellation-dominated integrands.
    """
    total = 0.0
    abs_total = 0.0
    nodes = 0
    small_in_a_row = 0
    k = 0
    while True:
        t = k * h
        g = _HALF_PI * math.sinh(t)
        if g > _G_MAX:
            break
        # distances to the endpoints: 1 -/+ tanh(g) without cancellation
        e2g = math.exp(-2.0 * g)
        d_b = width * e2g / (1.0 + e2g)       # b - x
        d_a = width - d_b                     # x - a
        w = _HALF_PI * math.cosh(t) / math.cosh(g) ** 2
        if d_b <= 0.0 or d_a <= 0.0:
            break
        contrib = w * f(a + d_a, d_a, d_b)
        if k == 0:
            total += contrib
            abs_total += abs(contrib)
            nodes += 1
            k += 1
            continue
        # mirror node (t -> -t swaps the endpoint distances)
        contrib_m = w * f(a + d_b, d_b, d_a)
        total += contrib + contrib_m
        abs_total += abs(contrib) + abs(contrib_m)
        nodes += 2
        if abs(contrib) + abs(contrib_m) <= 1e-18 * abs_total + 5e-308:
            small_in_a_row += 1
            if small_in_a_row >= 2 and t > 2.0:
                break
        else:
            small_in_a_row = 0
        k += 1
    return total * h, abs_total * h, nodes


def tanh_sinh(
    f: Callable[[float, float, float], float],
    a: float,
    b: float,
    tol: float = 1e-10,
    max_level: int = 12,
) -> QuadResult:
    """Integrate f over (a, b); f is called as f(x, x - a, b - x).

    The mesh is halved until two successive estimates agree to ``tol``
    (relative, with an absolute floor for near-zero integrals).
    """
    if not b > a:
        raise ValueError("tanh_sinh requires b > a")
    width = b - a
    half = 0.5 * width
    prev = None
    total_nodes = 0
    value = 0.0
    err = math.inf
    for level in range(2, max_level + 1):
        h = 1.0 / 2 ** level
        raw, raw_abs, nodes = _tanh_sinh_level(f, a, b, h, width)
        value = raw * half
        total_nodes += nodes
        # rounding floor: cancellation-heavy integrands cannot converge
        # relative to a tiny result, only relative to their absolute mass
        floor = 32.0 * 2.220446049250313e-16 * raw_abs * half
        if prev is not None:
            err = abs(value - prev)
            if err <= tol * abs(value) + floor + 1e-305:
                return QuadResult(value, err, total_nodes, True)
        prev = value
    return QuadResult(value, err, total_nodes, False)


def _exp_sinh_level(f, h):
    total = 0.0
    abs_total = 0.0
    nodes = 0
    # positive t: x grows doubly exponentially; stop once exp() would overflow
    for direction in (1, -1):
        small_in_a_row = 0
        k = 0 if direction == 1 else 1
        while True:
            t = direction * k * h
            g = _HALF_PI * math.sinh(t)
            if g > 700.0 or g < -700.0:
                break
            x = math.exp(g)
            w = x * _HALF_PI * math.cosh(t)
            if w == 0.0 or math.isinf(w):
                break
            contrib = w * f(x)
            total += contrib
            abs_total += abs(contrib)
            nodes += 1
            if abs(contrib) <= 1e-18 * abs_total + 5e-308:
                small_in_a_row += 1
                if small_in_a_row >= 2 and k * h > 2.0:
                    break
            else:
                small_in_a_row = 0
            k += 1
    return total * h, abs_total * h, nodes


def exp_sinh(
    f: Callable[[float], float],
    tol: float = 1e-10,
    max_level: int = 12,
) -> QuadResult:
    """Integrate f over (0, inf); nodes cluster doubly-exponentially at 0."""
    prev = None
    total_nodes = 0
    value = 0.0
    err = math.inf
    for level in range(2, max_level + 1):
        h = 1.0 / 2 ** level
        value, value_abs, nodes = _exp_sinh_level(f, h)
        total_nodes += nodes
        floor = 32.0 * 2.220446049250313e-16 * value_abs
        if prev is not None:
            err = abs(value - prev)
            if err <= tol * abs(value) + floor + 1e-305:
                return QuadResult(value, err, total_nodes, True)
        prev = value
    return QuadResult(value, err, total_nodes, False)
