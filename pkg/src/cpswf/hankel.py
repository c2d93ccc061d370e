"""Radial prolate functions on (0,1) as finite-Hankel-transform eigenpairs.

Pipeline
--------
The ball eigenfunctions factor into a radial profile times a degree-k angular
monogenic; the radial profiles diagonalize the symmetric integral operator

    (H f)(x) = sqrt(2 pi) * int_0^1 sqrt(2 pi c x y) J_alpha(2 pi c x y) f(y) dy

on (0,1), with alpha = k + m/2 - 1 for the even-order branch and
alpha = k + m/2 for the odd-order branch.  A symmetrized Nystrom
discretization on a Gauss-Legendre rule gives a dense real symmetric matrix;
its eigenpairs (gamma_n, phi_n) yield

  * the ball Fourier eigenvalues  mu = gamma * i^kappa / c^((m-1)/2)
    (kappa = k even branch, k+1 odd branch),
  * the radial factors P(r^2) = phi(r) / r^(alpha+1/2), interpolated
    barycentrically between nodes and by the small-argument kernel limit
    at r = 0.

The differential eigenvalues chi come from a separate Galerkin problem in the
orthonormal ball-polynomial basis, with the operator

    L_c f = d((1-|x|^2) d f) + 4 pi^2 c^2 |x|^2 f      (d = Dirac operator)

applied in closed form through its action on radial polynomials:

    even block:  L[q](u) = 4u q' - 4u(1-u) q'' - 2(2k+m)(1-u) q' + 4 pi^2 c^2 u q
    odd  block:  L[q](u) = 2(2u q' + (2k+m) q)
                           - 2(1-u)(2u q'' + (2k+m+2) q') + 4 pi^2 c^2 u q

(q the polynomial in u = |x|^2 multiplying the angular factor; both formulas
are validated symbolically in the tests).  At c = 0 the even block gives
exactly n(n+2k+m) and the odd block (n+1)(n+2k+m-1).

All bandwidth conventions couple c with 2 pi inside kernels, matching the
finite Fourier transform e^(2 pi i c <x,y>) on the unit ball.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .algebra import Multivector
from .monogenics import SPHERE_NORM_M2, CliffordLegendre, monogenic_angular_field
from .special import (
    DEFAULT_RADIAL_NODES,
    QuadratureRule,
    barycentric_interpolate,
    bessel_j,
    gauss_legendre,
    jacobi_deriv,
    jacobi_eval,
)

EIGENVALUE_FLOOR = 1e-14  # below this, |gamma| is reported as numerically zero


def branch_alpha(k: int, m: int, parity: str) -> float:
    """Kernel order of the radial operator for the (k, parity) branch."""
    if parity == "even":
        return k + m / 2 - 1
    if parity == "odd":
        return k + m / 2
    raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")


@dataclass(frozen=True)
class HankelOperator:
    """Finite Hankel transform at bandwidth c and kernel order alpha."""

    c: float
    alpha: float

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError("bandwidth c must be positive")
        if self.alpha < 0:
            raise ValueError("kernel order must be >= 0")

    def kernel(self, x, y):
        """sqrt(2 pi) sqrt(2 pi c x y) J_alpha(2 pi c x y); symmetric in (x, y)."""
        # x*y before the scalar factor: IEEE commutativity keeps K(x,y)=K(y,x) bitwise
        arg = (2.0 * np.pi * self.c) * (np.asarray(x) * np.asarray(y))
        return math.sqrt(2.0 * np.pi) * np.sqrt(arg) * bessel_j(self.alpha, arg)


def assemble_nystrom(c: float, alpha: float, rule: QuadratureRule) -> np.ndarray:
    """Symmetrized Nystrom matrix M[i,j] = sqrt(w_i) K(x_i, x_j) sqrt(w_j)."""
    op = HankelOperator(c, alpha)
    x = rule.nodes
    if np.any(x <= 0) or np.any(x >= 1):
        raise ValueError("rule nodes must lie in (0, 1)")
    kernel = op.kernel(x[:, None], x[None, :])
    # sqrt(w_i w_j) through the symmetric outer product keeps M = M^T bitwise
    return np.sqrt(np.outer(rule.weights, rule.weights)) * kernel


@dataclass
class RadialEigensystem:
    """Eigenpairs of the radial operator for one (k, m, parity, c) branch.

    gammas are sorted by |gamma| descending; phis holds the eigenfunction
    samples at the rule nodes (columns follow gammas).  Samples are
    unweighted, i.e. phi columns are discretely orthonormal under
    sum_i w_i phi_a(x_i) phi_b(x_i).
    """

    c: float
    alpha: float
    k: int
    m: int
    parity: str
    rule: QuadratureRule
    gammas: np.ndarray
    phis: np.ndarray
    matrix: np.ndarray = field(repr=False)

    @property
    def kappa(self) -> int:
        """Phase exponent of the Fourier eigenvalue (k, or k+1 odd branch)."""
        return self.k if self.parity == "even" else self.k + 1

    @property
    def radial_power(self) -> int:
        """Power of r on the angular factor in the ball eigenfunction."""
        return self.k if self.parity == "even" else self.k + 1

    @property
    def mus(self) -> np.ndarray:
        """Ball Fourier eigenvalues, same order as gammas."""
        return gamma_to_mu(self.gammas, self.k, self.m, self.c, self.parity)

    @property
    def numerically_zero(self) -> np.ndarray:
        """Mask of eigenvalues below the double-precision reporting floor."""
        return np.abs(self.gammas) < EIGENVALUE_FLOOR

    @cached_property
    def p_samples(self) -> np.ndarray:
        """Radial polynomial factor P(x_i^2) = phi(x_i) / x_i^(alpha+1/2)."""
        scale = self.rule.nodes ** (self.alpha + 0.5)
        return self.phis / scale[:, None]

    def residuals(self, count: int | None = None) -> np.ndarray:
        """||M v - gamma v||_2 per eigenpair in the weighted coordinates."""
        count = self.gammas.size if count is None else count
        sw = np.sqrt(self.rule.weights)
        v = self.phis[:, :count] * sw[:, None]
        return np.linalg.norm(self.matrix @ v - v * self.gammas[None, :count], axis=0)

    def p_at_zero(self, n: int) -> float:
        """Limit of P at r = 0 through the integral representation.

        Near zero the kernel behaves like
        sqrt(2 pi) (2 pi c)^(1/2) (pi c)^alpha r^(alpha+1/2) y^(alpha+1/2)
        / Gamma(alpha+1), so the limit is that constant integrated against phi.
        """
        gamma = self.gammas[n]
        if abs(gamma) < EIGENVALUE_FLOOR:
            raise ValueError(f"eigenvalue {n} is numerically zero; no stable limit")
        y = self.rule.nodes
        moment = float(np.dot(self.rule.weights, y ** (self.alpha + 0.5) * self.phis[:, n]))
        const = (
            math.sqrt(2.0 * math.pi)
            * math.sqrt(2.0 * math.pi * self.c)
            * (math.pi * self.c) ** self.alpha
            / math.gamma(self.alpha + 1.0)
        )
        return const * moment / gamma

    def radial_eval(self, n: int, r) -> np.ndarray:
        """P (even) / Q (odd) at radii r in [0, 1]; see radial_cpswf_eval."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        if np.any(r < 0) or np.any(r > 1):
            raise ValueError("radius outside [0, 1]")
        out = np.empty_like(r)
        zero = r == 0
        if zero.any():
            out[zero] = self.p_at_zero(n)
        if (~zero).any():
            out[~zero] = barycentric_interpolate(self.rule, self.p_samples[:, n], r[~zero])
        return out

    def nystrom_extension(self, n: int, r) -> np.ndarray:
        """phi_n off the nodes via phi(r) = (1/gamma) int K(r, y) phi(y) dy."""
        gamma = self.gammas[n]
        if abs(gamma) < EIGENVALUE_FLOOR:
            raise ValueError(f"eigenvalue {n} is numerically zero; extension unstable")
        op = HankelOperator(self.c, self.alpha)
        r = np.atleast_1d(np.asarray(r, dtype=float))
        kern = op.kernel(r[:, None], self.rule.nodes[None, :])
        return (kern * self.rule.weights[None, :]) @ self.phis[:, n] / gamma

    def field(self, n: int, r, theta) -> np.ndarray:
        """Normalized ball eigenfunction on a polar grid (m = 2 only).

        Shape broadcast of r and theta plus a trailing blade axis.
        """
        if self.m != 2:
            raise ValueError("field evaluation is implemented for m = 2 only")
        r = np.asarray(r, dtype=float)
        radial = self.radial_eval(n, r.ravel()).reshape(r.shape) * r**self.radial_power
        angular = monogenic_angular_field(self.k, theta, self.parity)
        return radial[..., None] * angular / SPHERE_NORM_M2


def hankel_eigs(
    c: float,
    alpha: float,
    rule: QuadratureRule,
    k: int = 0,
    m: int = 2,
    parity: str = "even",
) -> RadialEigensystem:
    """Full symmetric eigendecomposition of the Nystrom matrix.

    Eigenvectors are rescaled to unweighted samples (divide by sqrt(w_i)) and
    sign-fixed positive at the smallest node.
    """
    matrix = assemble_nystrom(c, alpha, rule)
    try:
        vals, vecs = np.linalg.eigh(matrix)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - diagnostic surface
        raise RuntimeError(f"eigensolver failed for c={c}, alpha={alpha}: {exc}") from exc
    order = np.argsort(-np.abs(vals))
    vals = vals[order]
    vecs = vecs[:, order]
    phis = vecs / np.sqrt(rule.weights)[:, None]
    signs = np.where(phis[0, :] >= 0, 1.0, -1.0)
    phis = phis * signs[None, :]
    return RadialEigensystem(
        c=c, alpha=alpha, k=k, m=m, parity=parity, rule=rule,
        gammas=vals, phis=phis, matrix=matrix,
    )


def cpswf_radial_system(
    c: float,
    k: int,
    m: int = 2,
    parity: str = "even",
    q: int = DEFAULT_RADIAL_NODES,
) -> RadialEigensystem:
    """Eigensystem of the (k, parity) branch at bandwidth c."""
    rule = gauss_legendre(q, 0.0, 1.0)
    return hankel_eigs(c, branch_alpha(k, m, parity), rule, k=k, m=m, parity=parity)


def gamma_to_mu(gamma, k: int, m: int, c: float, parity: str = "even"):
    """Ball Fourier eigenvalue from the radial one: mu = gamma i^kappa / c^((m-1)/2)."""
    if parity not in ("even", "odd"):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    kappa = k if parity == "even" else k + 1
    phase = 1j**kappa
    return np.asarray(gamma) * phase / c ** ((m - 1) / 2)


@dataclass(frozen=True)
class CPSWFEigenvalues:
    """Eigenvalue record for one ball eigenfunction: the Fourier eigenvalue
    mu, the differential eigenvalue chi, and its indices."""

    mu: complex
    chi: float
    n: int
    k: int
    m: int
    c: float

    @classmethod
    def from_system(
        cls, sys: RadialEigensystem, n: int, chis: np.ndarray
    ) -> "CPSWFEigenvalues":
        global_n = 2 * n if sys.parity == "even" else 2 * n + 1
        return cls(
            mu=complex(sys.mus[n]),
            chi=float(chis[global_n]),
            n=global_n,
            k=sys.k,
            m=sys.m,
            c=sys.c,
        )


def radial_cpswf_eval(sys: RadialEigensystem, n: int, r):
    """Radial factor P (even branch) or Q (odd branch) at radius r in [0, 1].

    Values at the rule nodes reproduce phi / r^(alpha+1/2) exactly; interior
    radii use barycentric interpolation of those samples, r = 0 the kernel
    limit.
    """
    out = sys.radial_eval(n, r)
    return float(out[0]) if np.isscalar(r) or np.asarray(r).ndim == 0 else out


def full_cpswf_eval(sys: RadialEigensystem, n: int, x) -> Multivector:
    """Normalized ball eigenfunction at a point of the closed unit disk."""
    if sys.m != 2:
        raise ValueError("pointwise evaluation is implemented for m = 2 only")
    x1, x2 = float(x[0]), float(x[1])
    r = math.hypot(x1, x2)
    if r > 1 + 1e-12:
        raise ValueError("point outside the closed unit disk")
    theta = math.atan2(x2, x1)
    coeffs = sys.field(n, np.array(r), np.array(theta))
    return Multivector(2, coeffs)


# ---------------------------------------------------------------------------
# Finite Fourier transform cross-check (2D quadrature oracle)
# ---------------------------------------------------------------------------

DEFAULT_PROBES = [
    (0.15, 0.4), (0.15, 1.7), (0.15, 3.1), (0.15, 5.0),
    (0.35, 0.9), (0.35, 2.3), (0.35, 4.1), (0.35, 5.8),
    (0.55, 0.2), (0.55, 1.3), (0.55, 2.9), (0.55, 4.6),
    (0.75, 0.7), (0.75, 2.0), (0.75, 3.6), (0.75, 5.3),
]


@dataclass(frozen=True)
class FourierCrossCheck:
    mu_2d: complex
    mu_radial: complex
    discrepancy: float


def cross_check_finite_fourier(
    sys: RadialEigensystem,
    n: int,
    q_disk: int = 256,
    probes: Sequence[tuple[float, float]] = tuple(DEFAULT_PROBES),
) -> FourierCrossCheck:
    """Apply the ball Fourier transform to the eigenfunction by quadrature.

    Evaluates int_B psi(y) e^(2 pi i c <x,y>) dy at the probe points, solves
    for the eigenvalue in least squares, and reports the worst residual
    relative to the sampled sup of |psi|.
    """
    if sys.m != 2:
        raise ValueError("cross-check is implemented for m = 2 only")
    if 2 * np.pi * sys.c > q_disk / 4:
        raise ValueError(
            f"q_disk={q_disk} under-resolves oscillation 2 pi c = {2 * np.pi * sys.c:.3g}"
        )
    rule = sys.rule
    theta = 2.0 * np.pi * np.arange(q_disk) / q_disk
    w_theta = 2.0 * np.pi / q_disk
    psi = sys.field(n, rule.nodes[:, None], theta[None, :])  # (qr, qt, 4)
    weights = (rule.weights * rule.nodes)[:, None] * w_theta

    ys = np.stack(
        [rule.nodes[:, None] * np.cos(theta)[None, :],
         rule.nodes[:, None] * np.sin(theta)[None, :]],
        axis=-1,
    )  # (qr, qt, 2)

    transformed = np.empty((len(probes), 4), dtype=complex)
    probe_vals = np.empty((len(probes), 4), dtype=complex)
    for p, (rho, ang) in enumerate(probes):
        xp = np.array([rho * math.cos(ang), rho * math.sin(ang)])
        phase = np.exp(2j * np.pi * sys.c * (ys @ xp))
        transformed[p] = np.sum((weights * phase)[..., None] * psi, axis=(0, 1))
        probe_vals[p] = sys.field(n, np.array(rho), np.array(ang))

    numer = np.vdot(probe_vals, transformed)
    denom = np.vdot(probe_vals, probe_vals)
    mu_2d = complex(numer / denom)
    resid = np.linalg.norm(transformed - mu_2d * probe_vals, axis=1)
    scale = np.abs(probe_vals).sum(axis=1).max()
    mu_radial = complex(gamma_to_mu(sys.gammas[n], sys.k, sys.m, sys.c, sys.parity))
    return FourierCrossCheck(mu_2d, mu_radial, float(resid.max() / scale))


# ---------------------------------------------------------------------------
# Differential eigenvalues (Galerkin in the ball-polynomial basis)
# ---------------------------------------------------------------------------

def chi_reference_c0(n: int, k: int, m: int) -> float:
    """Exact c = 0 eigenvalue: n(n+2k+m) even orders, (n+1)(n+2k+m-1) odd."""
    if n % 2 == 0:
        return float(n * (n + 2 * k + m))
    return float((n + 1) * (n + 2 * k + m - 1))


def _galerkin_block(
    k: int, m: int, c: float, parity: str, block_size: int, rule: QuadratureRule
) -> np.ndarray:
    """Eigenvalues (ascending) of L_c on one parity block at degree k."""
    offset = 0 if parity == "even" else 1
    orders = [offset + 2 * j for j in range(block_size)]
    basis = [CliffordLegendre(n, k, m) for n in orders]
    r = rule.nodes
    u = r**2
    t = 2.0 * u - 1.0
    pw = k if parity == "even" else k + 1
    weight = rule.weights * r ** (2 * pw + m - 1)

    rows_f = np.empty((block_size, r.size))
    rows_L = np.empty((block_size, r.size))
    for i, b in enumerate(basis):
        scale = b.normalized_profile_scale()
        deg, beta = b.jacobi_degree, b.jacobi_beta
        q0 = scale * jacobi_eval(deg, 0.0, beta, t)
        q1 = scale * 2.0 * jacobi_deriv(deg, 0.0, beta, t, order=1)
        q2 = scale * 4.0 * jacobi_deriv(deg, 0.0, beta, t, order=2)
        if parity == "even":
            lq = (
                4.0 * u * q1
                - 4.0 * u * (1.0 - u) * q2
                - 2.0 * (2 * k + m) * (1.0 - u) * q1
                + 4.0 * np.pi**2 * c**2 * u * q0
            )
        else:
            lq = (
                2.0 * (2.0 * u * q1 + (2 * k + m) * q0)
                - 2.0 * (1.0 - u) * (2.0 * u * q2 + (2 * k + m + 2) * q1)
                + 4.0 * np.pi**2 * c**2 * u * q0
            )
        rows_f[i] = q0
        rows_L[i] = lq

    mat = (rows_f * weight[None, :]) @ rows_L.T
    mat = 0.5 * (mat + mat.T)
    return np.linalg.eigvalsh(mat)


def chi_spectrum(
    k: int,
    m: int,
    c: float,
    n_max: int,
    basis_size: int | None = None,
    rule: QuadratureRule | None = None,
    check_convergence: bool = False,
) -> np.ndarray:
    """Differential eigenvalues chi_n for n = 0..n_max (parities interleaved).

    Galerkin in the orthonormal ball-polynomial basis at fixed (k, m); the
    operator is applied in closed form through the radial identities in the
    module docstring, so the matrix is exact up to quadrature (polynomial
    integrands).  basis_size counts radial functions per parity block.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    block = basis_size if basis_size is not None else (n_max // 2 + 30)
    if block < n_max // 2 + 5:
        raise ValueError("basis size too small for requested n_max")
    rule = rule or gauss_legendre(DEFAULT_RADIAL_NODES, 0.0, 1.0)
    even_vals = _galerkin_block(k, m, c, "even", block, rule)
    odd_vals = _galerkin_block(k, m, c, "odd", block, rule)
    if check_convergence:
        even_big = _galerkin_block(k, m, c, "even", 2 * block, rule)
        odd_big = _galerkin_block(k, m, c, "odd", 2 * block, rule)
        count = n_max // 2 + 1
        drift = max(
            np.max(np.abs(even_vals[:count] - even_big[:count])),
            np.max(np.abs(odd_vals[:count] - odd_big[:count])),
        )
        if drift > 1e-8:
            raise RuntimeError(f"Galerkin basis too small: doubling drift {drift:.3e}")
    out = np.empty(n_max + 1)
    out[0::2] = even_vals[: n_max // 2 + 1]
    if n_max >= 1:
        out[1::2] = odd_vals[: (n_max + 1) // 2]
    return out


# ---------------------------------------------------------------------------
# Eigenvalue bound verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundCheck:
    index: int
    kind: str            # "mu_lower" | "mu_upper" | "chi_window"
    value: float
    bound: float
    margin: float
    status: str          # "ok" | "violated" | "inactive" | "skipped_floor"


@dataclass
class BoundsReport:
    k: int
    m: int
    c: float
    parity: str
    convention_scale: float
    checks: list[BoundCheck]

    @property
    def violations(self) -> list[BoundCheck]:
        return [b for b in self.checks if b.status == "violated"]

    @property
    def satisfied(self) -> bool:
        return not self.violations


def mu_upper_bound(n: int, kappa: int, m: int, c: float) -> float | None:
    """Tail bound on |mu_n|^2, active for n > e c / 4; None when inactive."""
    if n <= math.e * c / 4:
        return None
    base = math.e * c / (4 * n + 2 * kappa + m + 3)
    log_bound = -m * math.log(c) + (2 * n + kappa + m / 2) * math.log(base)
    return math.exp(log_bound) if log_bound > -745 else 0.0


def mu_lower_bound(n: int, kappa: int, m: int, c: float) -> float | None:
    """Plateau bound on |mu_n|^2, active for n < c/2 when positive; else None."""
    if n >= c / 2:
        return None
    log_corr = (
        math.log(10.0)
        + (kappa + m / 2 + 2 * n - 1) * math.log(c)
        - math.lgamma(n + 1)
        - c
    )
    corr = math.exp(log_corr) if log_corr < 700 else math.inf
    val = (1.0 - corr) / c**m
    return val if val > 0 else None


def check_bounds(
    mus_sq: np.ndarray,
    chis: np.ndarray | None,
    k: int,
    m: int,
    c: float,
    parity: str = "even",
    convention_scale: float = 1.0,
) -> BoundsReport:
    """Verify the decay/plateau bounds on |mu|^2 and the chi windows.

    mus_sq is indexed by the branch radial index; chis (optional) by the
    interleaved global order n.  convention_scale rescales c inside the bound
    formulas only (set 2 pi to re-test against the alternative bandwidth
    convention; the computed spectra are never rescaled).
    """
    kappa = k if parity == "even" else k + 1
    c_eff = convention_scale * c
    checks: list[BoundCheck] = []
    for n, msq in enumerate(np.asarray(mus_sq, dtype=float)):
        lower = mu_lower_bound(n, kappa, m, c_eff)
        if n < c_eff / 2:
            if lower is None:
                checks.append(BoundCheck(n, "mu_lower", msq, math.nan, math.nan, "inactive"))
            else:
                margin = msq - lower
                status = "ok" if margin >= -1e-12 * max(lower, 1.0) else "violated"
                checks.append(BoundCheck(n, "mu_lower", msq, lower, margin, status))
        upper = mu_upper_bound(n, kappa, m, c_eff)
        if upper is not None:
            if msq <= EIGENVALUE_FLOOR:
                checks.append(BoundCheck(n, "mu_upper", msq, upper, math.nan, "skipped_floor"))
            else:
                margin = upper - msq
                status = "ok" if margin >= -1e-12 * upper else "violated"
                checks.append(BoundCheck(n, "mu_upper", msq, upper, margin, status))
    if chis is not None:
        for n, chi in enumerate(np.asarray(chis, dtype=float)):
            base = chi_reference_c0(n, k, m)
            hi = base + 8.0 * np.pi**2 * c**2
            if c == 0:
                margin = -abs(chi - base)
                status = "ok" if abs(chi - base) <= 1e-9 * max(base, 1.0) else "violated"
            else:
                margin = min(chi - base, hi - chi)
                status = "ok" if chi > base and chi < hi else "violated"
            checks.append(BoundCheck(n, "chi_window", chi, base, margin, status))
    return BoundsReport(k, m, c, parity, convention_scale, checks)


def check_bounds_with_convention_retest(
    mus_sq: np.ndarray,
    chis: np.ndarray | None,
    k: int,
    m: int,
    c: float,
    parity: str = "even",
) -> tuple[BoundsReport, str]:
    """Raw-convention check; on upper-bound failure re-test with c -> 2 pi c.

    Returns the report that held together with the convention label
    ("raw" or "2pi"); if neither holds the raw report is returned with
    label "violated".
    """
    raw = check_bounds(mus_sq, chis, k, m, c, parity, convention_scale=1.0)
    upper_violations = [b for b in raw.violations if b.kind == "mu_upper"]
    if not upper_violations:
        return raw, "raw"
    retest = check_bounds(mus_sq, chis, k, m, c, parity, convention_scale=2.0 * math.pi)
    if not [b for b in retest.violations if b.kind == "mu_upper"]:
        return retest, "2pi"
    return raw, "violated"


# ---------------------------------------------------------------------------
# Spectrum export
# ---------------------------------------------------------------------------

SPECTRUM_CSV_HEADER = "k,m,c,parity,N,gamma,mu_re,mu_im,chi,lower_bound,upper_bound,margin"


def csv_float(x: float | None) -> str:
    """Fixed-width float field for deterministic CSV output ('' for absent)."""
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return format(float(x), ".16e")


def spectrum_rows(
    sys: RadialEigensystem,
    n_count: int,
    chis: np.ndarray | None = None,
    convention_scale: float = 1.0,
) -> list[str]:
    """CSV rows for the leading n_count eigenpairs of one branch."""
    rows = []
    mus = sys.mus
    c_eff = convention_scale * sys.c
    for n in range(min(n_count, sys.gammas.size)):
        chi = None
        if chis is not None:
            global_n = 2 * n if sys.parity == "even" else 2 * n + 1
            if global_n < len(chis):
                chi = float(chis[global_n])
        msq = abs(mus[n]) ** 2
        lower = mu_lower_bound(n, sys.kappa, sys.m, c_eff)
        upper = mu_upper_bound(n, sys.kappa, sys.m, c_eff)
        if upper is not None and msq > EIGENVALUE_FLOOR:
            margin = upper - msq
        elif lower is not None:
            margin = msq - lower
        else:
            margin = None
        rows.append(
            ",".join(
                [
                    str(sys.k), str(sys.m), csv_float(sys.c), sys.parity, str(n),
                    csv_float(sys.gammas[n]), csv_float(mus[n].real), csv_float(mus[n].imag),
                    csv_float(chi), csv_float(lower), csv_float(upper), csv_float(margin),
                ]
            )
        )
    return rows


def spectrum_csv(
    systems: Sequence[tuple[RadialEigensystem, np.ndarray | None]],
    n_count: int,
    convention_scale: float = 1.0,
) -> str:
    buf = io.StringIO()
    buf.write(SPECTRUM_CSV_HEADER + "\n")
    for sys, chis in systems:
        for row in spectrum_rows(sys, n_count, chis, convention_scale):
            buf.write(row + "\n")
    return buf.getvalue()
