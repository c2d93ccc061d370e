"""Expansions of Clifford-valued functions on the unit disk.

Two orthonormal families:

  * the prolate (ball-concentrated) basis assembled from the radial
    eigensystems in `hankel`, ordered by the differential eigenvalue chi;
  * the Fourier-Bessel baseline J_|k|(j_{|k|,n} r) E_k(theta) with
    E_k = cos(k th) + e1e2 sin(k th), ordered by the Laplacian frequency
    j_{|k|,n}.

Coefficients are Clifford-valued: a_j = int conj(psi_j) f dx, reconstruction
sum_j psi_j a_j (right multiplication).  For an orthonormal family this is
the orthogonal projection onto the span of {psi_j e_A}, which is what makes
scalar-valued targets reachable; the squared Clifford norms |a_j|^2 satisfy
Bessel's inequality against ||f||^2.

Quadrature: shared Gauss-Legendre radial rule (Jacobian r applied in the
weights) tensored with a uniform trapezoid angular grid, which integrates
every angular harmonic below the grid's Nyquist index exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .algebra import field_conjugate, field_multiply, field_norm
from .hankel import RadialEigensystem, chi_spectrum, cpswf_radial_system, gamma_to_mu
from .monogenics import SPHERE_NORM_M2, monogenic_angular_field
from .special import QuadratureRule, bessel_j, bessel_j_zero, gauss_legendre

DEFAULT_Q_THETA = 512


# ---------------------------------------------------------------------------
# Disk grid and inner products
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiskGrid:
    """Polar tensor quadrature for the unit disk."""

    rule: QuadratureRule
    q_theta: int

    @property
    def theta(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.q_theta) / self.q_theta

    @property
    def weights(self) -> np.ndarray:
        """(q_r, q_theta) weights including the Jacobian r."""
        return (self.rule.weights * self.rule.nodes)[:, None] * np.full(
            self.q_theta, 2.0 * np.pi / self.q_theta
        )[None, :]

    def sample(self, evaluator: Callable) -> np.ndarray:
        """Evaluate an (r, theta) -> blade-field callable on the grid."""
        return np.asarray(evaluator(self.rule.nodes[:, None], self.theta[None, :]))


def make_grid(q_r: int = 256, q_theta: int = DEFAULT_Q_THETA) -> DiskGrid:
    if q_r < 32 or q_theta < 32:
        raise ValueError("quadrature orders must be >= 32")
    return DiskGrid(gauss_legendre(q_r, 0.0, 1.0), q_theta)


@dataclass(frozen=True)
class DiskFunction:
    """Clifford-valued function on the closed unit disk.

    evaluator maps broadcastable (r, theta) arrays to a blade-coefficient
    field with trailing axis 2^m; smoothness_note is free-form metadata.
    """

    evaluator: Callable
    m: int = 2
    smoothness_note: str = ""

    def sample(self, grid: DiskGrid) -> np.ndarray:
        vals = grid.sample(self.evaluator)
        expected = grid.weights.shape + (1 << self.m,)
        if vals.shape != expected:
            raise ValueError(f"evaluator returned {vals.shape}, expected {expected}")
        return vals


def disk_inner_product(f, g, grid: DiskGrid, m: int = 2) -> complex:
    """Scalar inner product (grade-0 of int conj(f) g) over the disk.

    f, g may be DiskFunction instances or pre-sampled grid fields.
    """
    fv = f.sample(grid) if isinstance(f, DiskFunction) else np.asarray(f)
    gv = g.sample(grid) if isinstance(g, DiskFunction) else np.asarray(g)
    # [conj(f) g]_0 = sum_A conj(f_A) g_A pointwise
    return complex(np.sum(grid.weights * np.sum(np.conj(fv) * gv, axis=-1)))


def clifford_inner_product(f, g, grid: DiskGrid, m: int = 2) -> np.ndarray:
    """Full Clifford-valued inner product int conj(f) g over the disk."""
    fv = f.sample(grid) if isinstance(f, DiskFunction) else np.asarray(f)
    gv = g.sample(grid) if isinstance(g, DiskFunction) else np.asarray(g)
    prod = field_multiply(field_conjugate(fv, m), gv, m)
    return np.sum(grid.weights[..., None] * prod, axis=(0, 1))


def l2_norm(f, grid: DiskGrid, m: int = 2) -> float:
    return math.sqrt(max(disk_inner_product(f, f, grid, m).real, 0.0))


def l2_error(f, reconstruction, grid: DiskGrid, m: int = 2) -> float:
    """||f - reconstruction|| over the disk (absolute, not relative)."""
    fv = f.sample(grid) if isinstance(f, DiskFunction) else np.asarray(f)
    rv = (
        reconstruction.sample(grid)
        if isinstance(reconstruction, DiskFunction)
        else np.asarray(reconstruction)
    )
    return l2_norm(fv - rv, grid, m)


# ---------------------------------------------------------------------------
# Basis terms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BasisTerm:
    """One basis function with its spectral ordering key.

    For the prolate basis: n is the per-degree order (parity = n mod 2),
    radial index n // 2, key = chi.  For Fourier-Bessel: k is the signed
    angular index, n >= 1 the radial zero index, key = j_{|k|,n}.
    """

    basis: str           # "cpswf" | "fourier_bessel"
    n: int
    k: int
    ell: int
    key: float


class CpswfBasis:
    """Prolate basis terms for degrees k <= k_max, orders n <= n_max."""

    def __init__(self, c: float, k_max: int, n_max: int, grid: DiskGrid, m: int = 2):
        if m != 2:
            raise ValueError("disk expansions are implemented for m = 2 only")
        self.c = c
        self.m = m
        self.grid = grid
        self.k_max = k_max
        self.n_max = n_max
        self._systems: dict[tuple[int, str], RadialEigensystem] = {}
        self._chis: dict[int, np.ndarray] = {}
        self.terms: list[BasisTerm] = []
        for k in range(k_max + 1):
            self._chis[k] = chi_spectrum(k, m, c, n_max)
            for n in range(n_max + 1):
                self.terms.append(BasisTerm("cpswf", n, k, 1, float(self._chis[k][n])))
        self.terms.sort(key=lambda t: (t.key, t.k, t.n))

    def system(self, k: int, parity: str) -> RadialEigensystem:
        key = (k, parity)
        if key not in self._systems:
            self._systems[key] = cpswf_radial_system(
                self.c, k=k, m=self.m, parity=parity, q=self.grid.rule.size
            )
        return self._systems[key]

    def term_field(self, term: BasisTerm) -> np.ndarray:
        parity = "even" if term.n % 2 == 0 else "odd"
        sys = self.system(term.k, parity)
        return sys.field(term.n // 2, self.grid.rule.nodes[:, None], self.grid.theta[None, :])

    def term_mu(self, term: BasisTerm) -> complex:
        parity = "even" if term.n % 2 == 0 else "odd"
        sys = self.system(term.k, parity)
        return complex(
            gamma_to_mu(sys.gammas[term.n // 2], term.k, self.m, self.c, parity)
        )


class FourierBesselBasis:
    """Baseline terms u_{k,n} for |k| <= k_max, 1 <= n <= n_max."""

    def __init__(self, k_max: int, n_max: int, grid: DiskGrid, m: int = 2):
        if m != 2:
            raise ValueError("disk expansions are implemented for m = 2 only")
        self.m = m
        self.grid = grid
        self.k_max = k_max
        self.n_max = n_max
        self._zeros: dict[tuple[int, int], float] = {}
        self.terms: list[BasisTerm] = []
        for k in range(-k_max, k_max + 1):
            for n in range(1, n_max + 1):
                j = bessel_j_zero(abs(k), n)
                self._zeros[(k, n)] = j
                self.terms.append(BasisTerm("fourier_bessel", n, k, 1, j))
        self.terms.sort(key=lambda t: (t.key, t.k, t.n))

    def term_field(self, term: BasisTerm) -> np.ndarray:
        j = self._zeros[(term.k, term.n)]
        r = self.grid.rule.nodes
        theta = self.grid.theta
        radial = bessel_j(abs(term.k), j * r)
        angular = np.zeros((theta.size, 4))
        angular[:, 0] = np.cos(term.k * theta)
        angular[:, 3] = np.sin(term.k * theta)
        out = radial[:, None, None] * angular[None, :, :].astype(complex)
        # normalize numerically; closed form pi * J_{|k|+1}(j)^2 is checked in tests
        nrm = math.sqrt(
            float(np.sum(self.grid.weights * np.sum(np.abs(out) ** 2, axis=-1)).real)
        )
        return out / nrm


# ---------------------------------------------------------------------------
# Expansion coefficients
# ---------------------------------------------------------------------------

@dataclass
class ExpansionCoefficients:
    """Clifford-valued coefficients of a disk function in one basis.

    entries maps (n, k, ell) to the blade-coefficient vector of
    int conj(psi) f; order holds the corresponding BasisTerm objects in
    spectral order (chi ascending for the prolate basis, j ascending for
    Fourier-Bessel).  Scalar-coefficient expansions are the special case
    where only the grade-0 entry of each vector is non-zero.
    """

    basis: str
    c: float | None
    m: int
    entries: dict[tuple[int, int, int], np.ndarray]
    order: list[BasisTerm]
    norm_f: float

    def coefficient(self, n: int, k: int, ell: int = 1) -> np.ndarray:
        return self.entries[(n, k, ell)]

    def magnitudes(self) -> np.ndarray:
        """Clifford norms |a_j| in spectral order."""
        return np.array(
            [np.linalg.norm(self.entries[(t.n, t.k, t.ell)]) for t in self.order]
        )

    def partial_energy(self, count: int) -> float:
        mags = self.magnitudes()[:count]
        return float(np.sum(mags**2))

    def selected(self, count: int) -> list[BasisTerm]:
        return self.order[:count]


def _expand(
    f: DiskFunction,
    basis,
    terms: Sequence[BasisTerm],
    grid: DiskGrid,
) -> ExpansionCoefficients:
    fv = f.sample(grid)
    entries = {}
    for term in terms:
        psi = basis.term_field(term)
        coeff = np.sum(
            grid.weights[..., None] * field_multiply(field_conjugate(psi, f.m), fv, f.m),
            axis=(0, 1),
        )
        entries[(term.n, term.k, term.ell)] = coeff
    return ExpansionCoefficients(
        basis=terms[0].basis if terms else "cpswf",
        c=getattr(basis, "c", None),
        m=f.m,
        entries=entries,
        order=list(terms),
        norm_f=l2_norm(fv, grid, f.m),
    )


def cpswf_expand(
    f: DiskFunction,
    n_max: int,
    k_max: int,
    c: float,
    grid: DiskGrid | None = None,
    basis: CpswfBasis | None = None,
) -> ExpansionCoefficients:
    """Project f on the prolate terms n <= n_max, k <= k_max (chi-ordered)."""
    grid = grid or make_grid()
    basis = basis or CpswfBasis(c, k_max, n_max, grid)
    return _expand(f, basis, basis.terms, grid)


def fourier_bessel_expand(
    f: DiskFunction,
    n_max: int,
    k_max: int,
    grid: DiskGrid | None = None,
    basis: FourierBesselBasis | None = None,
) -> ExpansionCoefficients:
    """Project f on the baseline terms |k| <= k_max, n <= n_max (j-ordered)."""
    grid = grid or make_grid()
    basis = basis or FourierBesselBasis(k_max, n_max, grid)
    return _expand(f, basis, basis.terms, grid)


def reconstruct(
    coeffs: ExpansionCoefficients,
    basis,
    grid: DiskGrid,
    terms: Sequence[BasisTerm] | None = None,
) -> np.ndarray:
    """sum_j psi_j a_j on the grid (right multiplication by the coefficients)."""
    shape = grid.weights.shape + (1 << coeffs.m,)
    out = np.zeros(shape, dtype=complex)
    for term in coeffs.order if terms is None else terms:
        a = coeffs.entries[(term.n, term.k, term.ell)]
        psi = basis.term_field(term)
        out += field_multiply(psi, a[None, None, :], coeffs.m)
    return out


# spectral-order reconstruction under its basis-specific name
cpswf_reconstruct = reconstruct


def select_terms(
    coeffs: ExpansionCoefficients,
    count: int,
    policy: str = "coupled",
    threshold: float = 1e-12,
) -> list[BasisTerm]:
    """First `count` terms in spectral order under a selection policy.

    "global": plain spectral order over all computed terms.
    "coupled": spectral order restricted to terms whose coefficient is
    non-negligible against ||f|| (the data-driven version of restricting to
    the angular blocks the target actually couples to).
    """
    if policy == "global":
        return coeffs.order[:count]
    if policy == "coupled":
        floor = threshold * max(coeffs.norm_f, 1e-300)
        picked = [
            t
            for t in coeffs.order
            if np.linalg.norm(coeffs.entries[(t.n, t.k, t.ell)]) > floor
        ]
        return picked[:count]
    raise ValueError(f"unknown selection policy {policy!r}")


# ---------------------------------------------------------------------------
# Truncation bound and its calibrated constant
# ---------------------------------------------------------------------------

def truncation_bound(
    n_trunc: int,
    m_trunc: int,
    k: int,
    m: int,
    c: float,
    norm_f: float,
    constant: float,
    convention_scale: float = 1.0,
) -> float | None:
    """Decay bound C (2N+k) (e c / (4N+2k+m+3))^((2N+k+m)/2) ||f||.

    Valid for truncation levels beyond e*c/2; returns None (not applicable)
    when the hypothesis fails.  convention_scale rescales c inside the
    formula only (2 pi re-tests the alternative bandwidth convention, under
    which the predicted rate matches the observed decay; see README).
    """
    c_eff = convention_scale * c
    if not (n_trunc > math.e * c_eff / 2 and m_trunc > math.e * c_eff / 2):
        return None
    base = math.e * c_eff / (4 * n_trunc + 2 * k + m + 3)
    return constant * (2 * n_trunc + k) * base ** ((2 * n_trunc + k + m) / 2) * norm_f


def calibrate_truncation_constant(
    c: float,
    m: int,
    errors: Sequence[tuple[int, int, int, float, float]],
    convention_scale: float = 1.0,
) -> float:
    """Fit the implicit constant as max(observed / bound-without-constant).

    errors rows: (n_trunc, m_trunc, k, observed_error, norm_f); rows whose
    hypothesis fails are skipped.
    """
    ratios = []
    for n_trunc, m_trunc, k, observed, norm_f in errors:
        bound = truncation_bound(n_trunc, m_trunc, k, m, c, norm_f, 1.0, convention_scale)
        if bound is not None and bound > 0:
            ratios.append(observed / bound)
    if not ratios:
        raise ValueError("no applicable truncation levels to calibrate on")
    return float(max(ratios))


def plane_wave(c: float, u: tuple[float, float]) -> DiskFunction:
    """Scalar plane wave e^(2 pi i c <x, u>) restricted to the disk.

    For |u| <= 1 this is band-limited to the radius-c ball, which makes the
    family the canonical calibration target for the truncation bound.
    """
    ux, uy = float(u[0]), float(u[1])

    def evaluator(r, th):
        shape = np.broadcast_shapes(np.shape(r), np.shape(th))
        out = np.zeros(shape + (4,), dtype=complex)
        x = np.asarray(r) * np.cos(th)
        y = np.asarray(r) * np.sin(th)
        out[..., 0] = np.exp(2j * np.pi * c * (x * ux + y * uy))
        return out

    return DiskFunction(evaluator, m=2, smoothness_note=f"plane wave u=({ux}, {uy})")


# ---------------------------------------------------------------------------
# Fourier transform of an eigenfunction (zero-extended), and sup norms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FourierTransformCheck:
    """Deviations of the quadrature Fourier transform from the two candidate
    closed forms inside the bandwidth ball, and the raw magnitudes outside.

    literal_inside:    max relative deviation from ((-1)^k / (c^m mu)) psi(x/c)
    consistent_inside: max relative deviation from sign * mu * psi(x/c), the
                       form forced by the eigen-relation (sign = (-1)^kappa)
    outside_abs:       max |F psi| at probes outside the bandwidth ball
    outside_consistent: max deviation outside from sign * mu * psi_ext(x/c)
                       with psi_ext the integral-representation extension
    """

    literal_inside: float
    consistent_inside: float
    outside_abs: float
    outside_consistent: float


def fourier_transform_check(
    sys: RadialEigensystem,
    n: int,
    grid: DiskGrid | None = None,
    inside_radii: Sequence[float] = (0.25, 0.5, 0.75),
    outside_radii: Sequence[float] = (1.25, 1.75),
    probes_per_circle: int = 4,
) -> FourierTransformCheck:
    """Fourier transform of the zero-extended eigenfunction by disk quadrature.

    F psi(xi) = int_B psi(y) e^(-2 pi i <xi, y>) dy is evaluated at probe
    points with |xi| = rho * c; since int_B psi(y) e^(2 pi i c <x,y>) dy
    equals the same integral at x = -xi/c, the exact value is
    sign * mu * psi_ext(xi/c) with the parity sign, never the reciprocal
    normalization, and it does not vanish outside |xi| = c.
    """
    if sys.m != 2:
        raise ValueError("Fourier check is implemented for m = 2 only")
    grid = grid or make_grid(sys.rule.size, DEFAULT_Q_THETA)
    c = sys.c
    psi = sys.field(n, grid.rule.nodes[:, None], grid.theta[None, :])
    ys = np.stack(
        [
            grid.rule.nodes[:, None] * np.cos(grid.theta)[None, :],
            grid.rule.nodes[:, None] * np.sin(grid.theta)[None, :],
        ],
        axis=-1,
    )
    mu = complex(gamma_to_mu(sys.gammas[n], sys.k, sys.m, c, sys.parity))
    sign = (-1) ** sys.kappa
    angles = 2.0 * np.pi * (np.arange(probes_per_circle) + 0.31) / probes_per_circle

    def transform_at(xi: np.ndarray) -> np.ndarray:
        phase = np.exp(-2j * np.pi * (ys @ xi))
        return np.sum((grid.weights * phase)[..., None] * psi, axis=(0, 1))

    scale = float(np.max(field_norm(psi)))
    lit_dev = 0.0
    cons_dev = 0.0
    for rho in inside_radii:
        for ang in angles:
            xi = rho * c * np.array([math.cos(ang), math.sin(ang)])
            got = transform_at(xi)
            ref = sys.field(n, np.array(rho), np.array(ang))
            literal = ((-1) ** sys.k / (c**sys.m * mu)) * ref
            consistent = sign * mu * ref
            lit_dev = max(lit_dev, float(np.linalg.norm(got - literal)) / scale)
            cons_dev = max(cons_dev, float(np.linalg.norm(got - consistent)) / scale)

    out_abs = 0.0
    out_cons = 0.0
    for rho in outside_radii:
        phi_ext = float(sys.nystrom_extension(n, np.array([rho]))[0])
        radial_ext = phi_ext / rho ** (sys.alpha + 0.5) * rho**sys.radial_power
        for ang in angles:
            xi = rho * c * np.array([math.cos(ang), math.sin(ang)])
            got = transform_at(xi)
            out_abs = max(out_abs, float(np.linalg.norm(got)))
            ext = radial_ext * monogenic_angular_field(
                sys.k, np.array(ang), sys.parity
            ) / SPHERE_NORM_M2
            out_cons = max(out_cons, float(np.linalg.norm(got - sign * mu * ext)))
    return FourierTransformCheck(lit_dev, cons_dev, out_abs, out_cons)


def sup_norm_ratio(
    sys: RadialEigensystem,
    n_range: Sequence[int],
    samples: int = 2000,
) -> np.ndarray | None:
    """Sampled sup-norm of each eigenfunction over the bracket
    sqrt((2N+k+(m-1)/2)(2N+k+(m+1)/2)); None when the validity hypothesis
    c^2 > (k+m/2-1)^2 - 1/4 fails ("inactive").
    """
    k, m, c = sys.k, sys.m, sys.c
    if c**2 <= (k + m / 2 - 1) ** 2 - 0.25:
        return None
    r = np.linspace(1e-6, 1.0, samples)
    out = []
    for n in n_range:
        if sys.numerically_zero[n]:
            out.append(math.nan)  # eigenvector is rounding noise; no meaningful sup
            continue
        vals = np.abs(sys.radial_eval(n, r)) * r**sys.radial_power / SPHERE_NORM_M2
        bracket = (2 * n + k + (m - 1) / 2) * (2 * n + k + (m + 1) / 2)
        out.append(float(vals.max()) / math.sqrt(bracket))
    return np.array(out)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass
class ApproximationReport:
    """Per-truncation-level errors for one target function."""

    rows: list[dict] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def add(self, basis: str, terms: int, error: float, bound: float | None) -> None:
        self.rows.append(
            {"basis": basis, "terms": terms, "l2_error": error, "bound": bound}
        )

    def to_csv(self) -> str:
        lines = ["basis,terms,l2_error,bound"]
        for row in self.rows:
            bound = "" if row["bound"] is None else format(row["bound"], ".16e")
            lines.append(
                f"{row['basis']},{row['terms']},{format(row['l2_error'], '.16e')},{bound}"
            )
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(
            {"metadata": self.metadata, "rows": self.rows}, indent=2, sort_keys=True
        )
