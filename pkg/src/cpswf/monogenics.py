"""Spherical monogenics for the plane, a numerical Dirac operator, and the
orthogonal polynomial family on the unit ball built from them.

The degree-k angular factor used everywhere for m = 2 is

    Y^_k(x) = (x1 - e1e2 x2)^k,

a closed-form homogeneous left-monogenic polynomial spanning the
one-dimensional degree-k space.  Identifying e1e2 with the imaginary unit,
Y^_k on the unit circle is cos(k th) - e1e2 sin(k th), so |Y^_k| = 1 there and
its L2 norm over the circle is sqrt(2 pi) for every k.

The ball polynomials come in two parity branches with Jacobi radial profiles
in u = |x|^2:

    even n = 2n':  (-1)^n' 2^(2n') (2n')!  P_n'^(0, k+m/2-1)(2u-1) Y_k(x)
    odd  n = 2n'+1: (-1)^(n'+1) 2^(2n'+1) (2n'+1)! P_n'^(0, k+m/2)(2u-1) x Y_k(x)

Both constants are validated against the defining iterated-Dirac form
d^n((1-|x|^2)^n Y_k) in the test suite; the odd constant carries
2^(2n'+1), which is what that definition produces.  Normalization divides by
the numerically computed L2 norm on the ball rather than trusting any closed
form (see tests for the diagnostic relating the two).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .algebra import Multivector, basis_vector, from_vector
from .special import QuadratureRule, gauss_legendre, jacobi_eval

SPHERE_NORM_M2 = math.sqrt(2.0 * math.pi)  # ||Y^_k||_{L2(S^1)}, any k
DEFAULT_NORM_NODES = 256


def monogenic_space_dim(k: int, m: int) -> int:
    """Dimension (m+k-2)! / ((m-2)! k!) of the degree-k monogenic space."""
    if m < 2:
        raise ValueError("need m >= 2")
    return math.comb(m + k - 2, k)


def monogenic_eval(k: int, x, normalized: bool = False) -> Multivector:
    """Y^_k at a point of R^2 (optionally scaled to unit circle norm)."""
    x1, x2 = float(x[0]), float(x[1])
    z = complex(x1, -x2) ** k
    scale = 1.0 / SPHERE_NORM_M2 if normalized else 1.0
    return Multivector(2, {0b00: scale * z.real, 0b11: scale * z.imag})


def monogenic_angular_field(k: int, theta: np.ndarray, parity: str) -> np.ndarray:
    """Blade-coefficient field of the angular factor on the unit circle.

    parity "even": Y^_k(omega) itself (grades 0 and 2);
    parity "odd":  omega * Y^_k(omega) = cos((k+1)th) e1 + sin((k+1)th) e2.
    Not normalized; both have pointwise Clifford norm 1.
    """
    theta = np.asarray(theta, dtype=float)
    out = np.zeros(theta.shape + (4,), dtype=complex)
    if parity == "even":
        out[..., 0] = np.cos(k * theta)
        out[..., 3] = -np.sin(k * theta)
    elif parity == "odd":
        out[..., 1] = np.cos((k + 1) * theta)
        out[..., 2] = np.sin((k + 1) * theta)
    else:
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    return out


def dirac_numeric(
    f: Callable[[np.ndarray], Multivector],
    x,
    h: float = 1e-4,
    richardson: bool = False,
) -> Multivector:
    """Central-difference Dirac operator sum_j e_j d_j f at x (m from f(x)).

    O(h^2) truncation error; with richardson=True, one extrapolation step
    (4 D(h/2) - D(h)) / 3 removes the leading term.
    """
    if h <= 0:
        raise ValueError("step must be positive")
    x = np.asarray(x, dtype=float)
    m = x.size

    def estimate(step: float) -> Multivector:
        total = None
        for j in range(m):
            dx = np.zeros(m)
            dx[j] = step
            diff = (1.0 / (2 * step)) * (f(x + dx) - f(x - dx))
            term = basis_vector(m, j + 1) * diff
            total = term if total is None else total + term
        return total

    d1 = estimate(h)
    if not richardson:
        return d1
    d2 = estimate(h / 2)
    return (4.0 / 3.0) * d2 - (1.0 / 3.0) * d1


def _radial_leading_constant(n: int) -> float:
    if n % 2 == 0:
        half = n // 2
        return (-1.0) ** half * 2.0 ** (2 * half) * math.factorial(2 * half)
    half = (n - 1) // 2
    return (-1.0) ** (half + 1) * 2.0 ** (2 * half + 1) * math.factorial(2 * half + 1)


@dataclass(frozen=True)
class CliffordLegendre:
    """Ball polynomial of order n and degree k in dimension m.

    radial_profile gives the polynomial factor in u = |x|^2 (constant
    included); odd orders carry an extra grade-1 factor x.  norm is the L2
    norm over the unit ball computed by quadrature, with the angular factor
    taken to have unit sphere norm.
    """

    n: int
    k: int
    m: int

    def __post_init__(self):
        if self.n < 0 or self.k < 0:
            raise ValueError("order and degree must be >= 0")
        if self.m < 2:
            raise ValueError("need m >= 2")

    @property
    def parity(self) -> str:
        return "even" if self.n % 2 == 0 else "odd"

    @property
    def jacobi_degree(self) -> int:
        return self.n // 2

    @property
    def jacobi_beta(self) -> float:
        return self.k + self.m / 2 - (1 if self.n % 2 == 0 else 0)

    @property
    def leading_constant(self) -> float:
        return _radial_leading_constant(self.n)

    @property
    def leading_sign(self) -> float:
        half = self.n // 2
        flips = half if self.n % 2 == 0 else half + 1
        return -1.0 if flips % 2 else 1.0

    def radial_profile(self, u):
        """Polynomial factor at u = |x|^2, leading constant included."""
        return self.leading_constant * jacobi_eval(
            self.jacobi_degree, 0.0, self.jacobi_beta, 2.0 * np.asarray(u, dtype=float) - 1.0
        )

    @property
    def radial_power(self) -> int:
        """Power of r multiplying the angular factor (k, or k+1 for odd n)."""
        return self.k + (0 if self.n % 2 == 0 else 1)

    @lru_cache(maxsize=None)
    def _jacobi_norm(self) -> float:
        """L2 norm of P(2r^2-1) r^radial_power under r^(m-1) dr, constant-free.

        The leading factorial constants overflow past order ~90, so the
        normalized values are always assembled from this quantity (the
        constants cancel against themselves).
        """
        rule = gauss_legendre(DEFAULT_NORM_NODES, 0.0, 1.0)
        r = rule.nodes
        vals = jacobi_eval(
            self.jacobi_degree, 0.0, self.jacobi_beta, 2.0 * r**2 - 1.0
        ) * r**self.radial_power
        return float(np.sqrt(np.sum(rule.weights * vals**2 * r ** (self.m - 1))))

    @property
    def norm(self) -> float:
        """Ball L2 norm of the constant-included form (unit-sphere angular).

        Overflows to inf together with the leading constant for very large
        orders; the normalized evaluation paths do not go through it.
        """
        return abs(self.leading_constant) * self._jacobi_norm()

    def normalized_profile_scale(self) -> float:
        """Factor turning plain Jacobi values P(2u-1) into the normalized
        radial profile (sign of the leading constant over the Jacobi norm);
        safe at orders where the raw constant itself overflows."""
        return self.leading_sign / self._jacobi_norm()

    def factorial_normalizer(self) -> float:
        """sqrt(2k+2n+m) / (2^n n!), for the reciprocal-norm diagnostic."""
        return math.sqrt(2 * self.k + 2 * self.n + self.m) / (2**self.n * math.factorial(self.n))

    def radial_samples(self, r: np.ndarray, normalized: bool = True) -> np.ndarray:
        """radial_profile(r^2) * r^radial_power, optionally norm-divided."""
        r = np.asarray(r, dtype=float)
        if normalized:
            vals = jacobi_eval(self.jacobi_degree, 0.0, self.jacobi_beta, 2.0 * r**2 - 1.0)
            return self.leading_sign * vals * r**self.radial_power / self._jacobi_norm()
        return self.radial_profile(r**2) * r**self.radial_power

    def field(self, r: np.ndarray, theta: np.ndarray, normalized: bool = True) -> np.ndarray:
        """Blade-coefficient field on a polar grid (m = 2 only).

        Broadcasts r and theta; with normalized=True the result has unit L2
        norm over the ball.
        """
        if self.m != 2:
            raise ValueError("field evaluation is implemented for m = 2 only")
        radial = self.radial_samples(np.asarray(r, dtype=float), normalized=normalized)
        angular = monogenic_angular_field(self.k, theta, self.parity)
        scale = 1.0 / SPHERE_NORM_M2 if normalized else 1.0
        return scale * radial[..., None] * angular

    def eval(self, x, normalized: bool = False) -> Multivector:
        """Value at a point of R^2 as a Multivector.

        Unnormalized values use the raw angular factor Y^_k, matching the
        iterated-Dirac definition; normalized ones divide by the full ball
        norm (radial norm times sqrt(2 pi)).
        """
        if self.m != 2:
            raise ValueError("pointwise evaluation is implemented for m = 2 only")
        x1, x2 = float(x[0]), float(x[1])
        u = x1 * x1 + x2 * x2
        if normalized:
            rad = self.leading_sign * float(
                jacobi_eval(self.jacobi_degree, 0.0, self.jacobi_beta, 2.0 * u - 1.0)
            ) / (self._jacobi_norm() * SPHERE_NORM_M2)
        else:
            rad = float(self.radial_profile(u))
        value = rad * monogenic_eval(self.k, x)
        if self.n % 2 == 1:
            value = from_vector([x1, x2]) * value
        return value


def clifford_legendre_eval(n: int, k: int, m: int, x, normalized: bool = False) -> Multivector:
    """Convenience wrapper over CliffordLegendre(n, k, m).eval."""
    return CliffordLegendre(n, k, m).eval(x, normalized=normalized)


def gram_matrix(
    basis: list[CliffordLegendre],
    rule: QuadratureRule,
    q_theta: int = 256,
) -> np.ndarray:
    """Matrix of ball inner products <C~_i, C~_j> by tensor polar quadrature.

    Radial nodes/weights from `rule` (on (0,1), Jacobian r applied here),
    uniform trapezoid in the angle.  Entries are the scalar parts of the
    Clifford inner products of the normalized elements.
    """
    if any(b.m != 2 for b in basis):
        raise ValueError("gram_matrix needs m = 2 elements")
    theta = 2.0 * np.pi * np.arange(q_theta) / q_theta
    w_theta = 2.0 * np.pi / q_theta
    r = rule.nodes
    weights = (rule.weights * r)[:, None] * w_theta  # (qr, 1) broadcast over theta
    fields = [b.field(r[:, None], theta[None, :], normalized=True) for b in basis]
    size = len(basis)
    out = np.zeros((size, size), dtype=complex)
    for i in range(size):
        fi = np.conj(fields[i])
        for j in range(i, size):
            val = np.sum(weights * np.sum(fi * fields[j], axis=-1))
            out[i, j] = val
            out[j, i] = np.conj(val)
    return out
