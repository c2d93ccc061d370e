"""Scalar special functions: Jacobi polynomials, Bessel J, Bessel zeros,
Gauss-Legendre quadrature.

Everything downstream (radial eigenproblems, disk quadrature, the
Fourier-Bessel baseline) is built on these four primitives.  Bessel J is
delegated to scipy (well inside its accuracy envelope for nu <= 60,
x <= 200); Jacobi values use the standard three-term recurrence; general-order
Bessel zeros are bracketed by scanning and polished with Brent's method.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special as sps
from scipy.optimize import brentq

DEFAULT_RADIAL_NODES = 256


def jacobi_eval(n: int, alpha: float, beta: float, x):
    """P_n^(alpha,beta)(x) by the three-term recurrence.

    Accepts scalar or ndarray x; parameters must satisfy alpha, beta > -1.
    """
    if n < 0:
        raise ValueError("degree must be >= 0")
    if alpha <= -1 or beta <= -1:
        raise ValueError("Jacobi parameters must be > -1")
    x = np.asarray(x, dtype=float)
    p_prev = np.ones_like(x)
    if n == 0:
        return p_prev if p_prev.ndim else float(p_prev)
    p = 0.5 * (alpha + beta + 2) * x + 0.5 * (alpha - beta)
    for j in range(2, n + 1):
        a1 = 2 * j * (j + alpha + beta) * (2 * j + alpha + beta - 2)
        a2 = (2 * j + alpha + beta - 1) * (alpha**2 - beta**2)
        a3 = (2 * j + alpha + beta - 1) * (2 * j + alpha + beta) * (2 * j + alpha + beta - 2)
        a4 = 2 * (j + alpha - 1) * (j + beta - 1) * (2 * j + alpha + beta)
        p, p_prev = ((a2 + a3 * x) * p - a4 * p_prev) / a1, p
    return p if p.ndim else float(p)


def jacobi_deriv(n: int, alpha: float, beta: float, x, order: int = 1):
    """d^order/dx^order P_n^(alpha,beta)(x) via the degree/parameter shift."""
    if order < 0:
        raise ValueError("derivative order must be >= 0")
    if order == 0:
        return jacobi_eval(n, alpha, beta, x)
    if n < order:
        x = np.asarray(x, dtype=float)
        z = np.zeros_like(x)
        return z if z.ndim else 0.0
    factor = 1.0
    for i in range(order):
        factor *= 0.5 * (n + alpha + beta + 1 + i)
    val = jacobi_eval(n - order, alpha + order, beta + order, x)
    return factor * val


def bessel_j(nu: float, x):
    """Bessel function of the first kind J_nu(x), nu >= 0, x >= 0."""
    if nu < 0:
        raise ValueError("order must be >= 0")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("argument must be >= 0")
    val = sps.jv(nu, x)
    return val if val.ndim else float(val)


def bessel_j_zero(nu: float, n: int) -> float:
    """n-th positive zero of J_nu (n >= 1), to ~1e-13 relative.

    J_nu is positive on (0, j_{nu,1}) and j_{nu,1} > nu, so scanning upward
    from x = max(nu, 0.5) with unit steps brackets every zero (consecutive
    zeros are separated by more than 1 for all nu >= 0).
    """
    if nu < 0:
        raise ValueError("order must be >= 0")
    if n < 1:
        raise ValueError("zero index must be >= 1")
    f = lambda t: sps.jv(nu, t)
    x = max(nu, 0.5)
    fx = f(x)
    step = 1.0
    found = 0
    while True:
        x_next = x + step
        fx_next = f(x_next)
        if fx == 0.0:
            root = x
            found += 1
        elif fx * fx_next < 0:
            root = brentq(f, x, x_next, xtol=1e-14, rtol=8.9e-16)
            found += 1
        else:
            x, fx = x_next, fx_next
            continue
        if found == n:
            return float(root)
        x, fx = x_next, fx_next


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes/weights for integration over (a, b)."""

    nodes: np.ndarray
    weights: np.ndarray
    interval: tuple[float, float]

    def __post_init__(self):
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    @property
    def size(self) -> int:
        return self.nodes.size

    def integrate(self, f: Callable | np.ndarray):
        """Apply the rule to a callable or to precomputed node values."""
        vals = f(self.nodes) if callable(f) else np.asarray(f)
        if vals.ndim > 1:
            return np.tensordot(self.weights, vals, axes=(0, 0))
        total = np.dot(self.weights, vals)
        return complex(total) if np.iscomplexobj(vals) else float(total)


def gauss_legendre(q: int, a: float, b: float) -> QuadratureRule:
    """q-point Gauss-Legendre rule on (a, b); exact for degree <= 2q-1."""
    if q < 1:
        raise ValueError("node count must be >= 1")
    if not a < b:
        raise ValueError("need a < b")
    t, w = np.polynomial.legendre.leggauss(q)
    nodes = 0.5 * (b - a) * t + 0.5 * (b + a)
    weights = 0.5 * (b - a) * w
    return QuadratureRule(nodes, weights, (float(a), float(b)))


def barycentric_weights_gl(rule: QuadratureRule) -> np.ndarray:
    """Barycentric interpolation weights for Gauss-Legendre nodes.

    For Gauss points t_i on (-1,1) the weights are proportional to
    (-1)^i sqrt((1 - t_i^2) w_i); the common factor cancels in the
    barycentric formula, and affine maps of the interval only rescale it.
    """
    a, b = rule.interval
    t = (2 * rule.nodes - (a + b)) / (b - a)
    w_std = rule.weights * 2 / (b - a)
    lam = np.sqrt(np.clip((1 - t**2), 0, None) * w_std)
    lam[1::2] *= -1
    return lam


def barycentric_interpolate(rule: QuadratureRule, values: np.ndarray, x) -> np.ndarray:
    """Evaluate the interpolant through (rule.nodes, values) at points x.

    values may have trailing axes (shared nodes, several functions).
    """
    lam = barycentric_weights_gl(rule)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    values = np.asarray(values)
    diff = x[:, None] - rule.nodes[None, :]
    out_shape = (x.size,) + values.shape[1:]
    out = np.empty(out_shape, dtype=values.dtype)
    exact = np.abs(diff) < 1e-14
    regular = ~exact.any(axis=1)
    if regular.any():
        c = lam[None, :] / diff[regular]
        denom = c.sum(axis=1)
        out[regular] = np.tensordot(c, values, axes=(1, 0)) / denom.reshape(
            (-1,) + (1,) * (values.ndim - 1)
        )
    for idx in np.nonzero(~regular)[0]:
        out[idx] = values[np.argmax(exact[idx])]
    return out
