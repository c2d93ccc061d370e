"""Acceptance gate: every criterion at its stated tolerance.

Each test prints one `ACCEPTANCE <id>: PASS|FAIL` line (visible with -s or in
captured output).  Three sub-criteria of the error-table reproduction and the
literal reading of the Fourier-image identity are expected to fail: the
reference values are not attainable from the stated example function, and the
literal normalization of the transform identity contradicts Parseval's
identity for the zero-extended eigenfunction.  Both defects are measured,
characterized, and documented (README, "Known discrepancies"); the
eigen-consistent counterparts of the same checks pass at tight tolerances and
are asserted here as well.
"""

import math
import time

import numpy as np
import pytest

from cpswf.algebra import Multivector, conjugate, from_vector, scalar_mv
from cpswf.cli import (
    CALIBRATED_TRUNCATION_CONSTANT,
    TRUNCATION_BOUND_CONVENTION,
    run_table1,
)
from cpswf.expansion import (
    CpswfBasis,
    cpswf_expand,
    fourier_transform_check,
    l2_error,
    l2_norm,
    make_grid,
    plane_wave,
    reconstruct,
    sup_norm_ratio,
    truncation_bound,
    calibrate_truncation_constant,
)
from cpswf.hankel import (
    EIGENVALUE_FLOOR,
    check_bounds,
    check_bounds_with_convention_retest,
    chi_reference_c0,
    chi_spectrum,
    cpswf_radial_system,
    cross_check_finite_fourier,
    hankel_eigs,
)
from cpswf.monogenics import CliffordLegendre, dirac_numeric, gram_matrix, monogenic_eval
from cpswf.special import gauss_legendre

GRID_C = (1.0, 4.2, 10.0)
GRID_ALPHA = (0.0, 1.0, 2.0, 2.5)
# even-branch (k, m) realizations of each kernel order
ALPHA_TO_KM = {0.0: (0, 2), 1.0: (1, 2), 2.0: (2, 2), 2.5: (2, 3)}


def report(cid: str, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {cid}: {'PASS' if ok else 'FAIL'} - {detail}")


@pytest.fixture(scope="module")
def eigensystems():
    rule = gauss_legendre(256, 0.0, 1.0)
    out = {}
    for c in GRID_C:
        for alpha in GRID_ALPHA:
            k, m = ALPHA_TO_KM[alpha]
            out[(c, alpha)] = hankel_eigs(c, alpha, rule, k=k, m=m, parity="even")
    return out


def test_criterion_1_eigensystem_fidelity(eigensystems):
    """Top-20 residuals <= 1e-10 and q-doubling drift <= 1e-11, within 10 s."""
    start = time.perf_counter()
    rule512 = gauss_legendre(512, 0.0, 1.0)
    worst_resid = 0.0
    worst_drift = 0.0
    for (c, alpha), sys256 in eigensystems.items():
        worst_resid = max(worst_resid, float(sys256.residuals(20).max()))
        k, m = ALPHA_TO_KM[alpha]
        sys512 = hankel_eigs(c, alpha, rule512, k=k, m=m, parity="even")
        drift = np.abs(np.abs(sys256.gammas[:20]) - np.abs(sys512.gammas[:20]))
        worst_drift = max(worst_drift, float(drift.max()))
    elapsed = time.perf_counter() - start
    ok = worst_resid <= 1e-10 and worst_drift <= 1e-11 and elapsed <= 10.0
    report(
        "1-eigensystem",
        ok,
        f"max residual {worst_resid:.2e}, max drift {worst_drift:.2e}, {elapsed:.1f}s",
    )
    assert worst_resid <= 1e-10
    assert worst_drift <= 1e-11
    assert elapsed <= 10.0


def test_criterion_2_finite_fourier_cross_check():
    """2D-transform eigenvalue agrees with the radial branch to 1e-6."""
    start = time.perf_counter()
    worst = 0.0
    for k in (0, 1, 2):
        sysk = cpswf_radial_system(1.0, k=k, m=2, parity="even", q=256)
        for n in (0, 1, 2):
            chk = cross_check_finite_fourier(sysk, n)
            rel = abs(chk.mu_2d - chk.mu_radial) / abs(chk.mu_radial)
            worst = max(worst, rel, chk.discrepancy)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-6 and elapsed <= 60.0
    report("2-cross-check", ok, f"max deviation {worst:.2e} over (N,k) in {{0,1,2}}^2, {elapsed:.1f}s")
    assert worst <= 1e-6
    assert elapsed <= 60.0


def test_criterion_3_chi_windows():
    """Strict spectral window around the zero-bandwidth values.

    The even-order window uses the quoted base n(n+2k+m) (the source result
    is stated for even orders); odd orders are checked against the derived
    base (n+1)(n+2k+m-1), which the zero-bandwidth operator actually attains
    (see README).
    """
    cap = lambda c: 8.0 * math.pi**2 * c**2
    worst_margin = math.inf
    for m in (2, 3):
        for k in range(6):
            chis0 = chi_spectrum(k, m, 0.0, 10)
            for n in range(11):
                base = chi_reference_c0(n, k, m)
                assert abs(chis0[n] - base) <= 1e-9 * max(base, 1.0)
            for c in (0.5, 1.0, 2.0):
                chis = chi_spectrum(k, m, c, 10)
                for n in range(11):
                    base = chi_reference_c0(n, k, m)
                    lo_margin = chis[n] - base
                    hi_margin = base + cap(c) - chis[n]
                    worst_margin = min(worst_margin, lo_margin, hi_margin)
                    assert lo_margin > 0 and hi_margin > 0
    report("3-chi-windows", True, f"strict windows hold; smallest margin {worst_margin:.3e}")


def test_criterion_4_mu_decay_bounds(eigensystems):
    """Tail bound on |mu|^2 above the 1e-14 floor, with the declared
    convention contingency: the raw c fails systematically and the 2 pi
    re-test must hold."""
    raw_failures = 0
    retest_ok = True
    checked = 0
    for (c, alpha), sysk in eigensystems.items():
        msq = np.abs(sysk.mus[:40]) ** 2
        report_obj, convention = check_bounds_with_convention_retest(
            msq, None, sysk.k, sysk.m, c, "even"
        )
        checked += 1
        if convention == "raw":
            continue
        raw_failures += 1
        retest_ok = retest_ok and convention == "2pi" and report_obj.satisfied
    ok = retest_ok and raw_failures > 0
    report(
        "4-mu-bounds",
        ok,
        f"{raw_failures}/{checked} branches required the 2 pi convention; "
        "re-test satisfied on all of them (convention held: 2pi)",
    )
    assert retest_ok
    assert raw_failures > 0  # documents that the raw convention is the wrong reading


@pytest.fixture(scope="module")
def table1_results():
    start = time.perf_counter()
    result, _ = run_table1(
        c=1.0, terms_list=[5, 7, 10], angular="cos4", selection="coupled",
        q_r=192, q_theta=384, kmax=8, nmax=13,
    )
    elapsed = time.perf_counter() - start
    errors = {
        (row["basis"], row["terms"]): row["l2_error"] for row in result.rows
    }
    return errors, result.metadata, elapsed


def test_criterion_5a_table1_cpswf_5_terms(table1_results):
    """Expected FAIL: 5-term error <= 1e-4 is not attainable for the stated
    example function e^(-r^2) cos(4 th); both bases converge algebraically
    because the angular factor times a non-vanishing radial profile is
    discontinuous at the origin.  The solid-harmonic diagnostic reading
    (--angular solid4) reaches 7.4e-9 at 10 terms; see README."""
    errors, _, _ = table1_results
    got = errors[("cpswf", 5)]
    ok = got <= 1e-4
    report("5a-table1-cpswf", ok, f"5-term error {got:.3e} vs required <= 1e-4")
    assert got <= 1e-4, (
        f"measured 5-term error {got:.3e}; reference values are only attainable "
        "under the solid-harmonic reading (README, 'Known discrepancies')"
    )


def test_criterion_5b_table1_separation(table1_results):
    """Expected FAIL: two orders of magnitude below Fourier-Bessel; see 5a."""
    errors, _, _ = table1_results
    cp, fb = errors[("cpswf", 5)], errors[("fourier_bessel", 5)]
    ok = cp <= fb / 100
    report("5b-table1-separation", ok, f"cpswf {cp:.3e} vs fourier_bessel/100 {fb / 100:.3e}")
    assert cp <= fb / 100, (
        f"measured ratio {cp / fb:.2f}; both bases share the origin-mismatch "
        "convergence rate for the stated function (README, 'Known discrepancies')"
    )


def test_criterion_5c_table1_fb_band(table1_results):
    """Expected FAIL (near miss): Fourier-Bessel 5-term error in [0.05, 0.3]."""
    errors, _, _ = table1_results
    fb = errors[("fourier_bessel", 5)]
    ok = 0.05 <= fb <= 0.3
    report("5c-table1-fb-band", ok, f"fourier_bessel 5-term error {fb:.3f} vs [0.05, 0.3]")
    assert 0.05 <= fb <= 0.3, (
        f"measured {fb:.3f}; the banded target assumed the reference table's "
        "function reading (README, 'Known discrepancies')"
    )


def test_criterion_5d_table1_reference_comparison(table1_results):
    """Reference values matched within one order of magnitude OR the
    discrepancy is documented (the criterion's own escape clause)."""
    errors, metadata, elapsed = table1_results
    all_within = all(
        row["cpswf_within_order_of_magnitude"]
        for row in metadata["reference_comparison"].values()
    )
    documented = metadata["discrepancy_documented"] and bool(metadata["discrepancy_note"])
    ok = all_within or documented
    report(
        "5d-table1-reference",
        ok,
        f"within order of magnitude: {all_within}; discrepancy documented: {documented}; "
        f"runtime {elapsed:.0f}s (<= 120s: {elapsed <= 120})",
    )
    assert ok
    assert elapsed <= 120.0


def test_criterion_6_fourier_image_literal():
    """Expected FAIL: literal normalization (+ outside vanishing) of the
    Fourier image of a zero-extended eigenfunction.  Parseval fixes the
    correct factor to mu, not 1/(c^m mu), and the truncated transform cannot
    vanish on an open set; measured deviations quantify both."""
    worst_inside = 0.0
    worst_outside = 0.0
    for k in (0, 1):
        sysk = cpswf_radial_system(1.0, k=k, m=2, parity="even", q=192)
        for n in (0, 1):
            chk = fourier_transform_check(sysk, n, make_grid(192, 384))
            worst_inside = max(worst_inside, chk.literal_inside)
            worst_outside = max(worst_outside, chk.outside_abs)
    ok = worst_inside <= 1e-6 and worst_outside <= 1e-6
    report(
        "6-fourier-literal",
        ok,
        f"literal inside deviation {worst_inside:.2e} (>= 1-|mu|^2 by Parseval), "
        f"outside magnitude {worst_outside:.2e} (Paley-Wiener forbids vanishing)",
    )
    assert worst_inside <= 1e-6, "see README, 'Known discrepancies' (Fourier image normalization)"
    assert worst_outside <= 1e-6, "see README, 'Known discrepancies' (outside-band magnitude)"


def test_criterion_6_fourier_image_consistent():
    """The eigen-consistent form of the same identity passes at 1e-6:
    F[psi 1_B](xi) = (-1)^kappa mu psi_ext(xi/c), inside and outside."""
    worst = 0.0
    for k in (0, 1):
        sysk = cpswf_radial_system(1.0, k=k, m=2, parity="even", q=192)
        for n in (0, 1):
            chk = fourier_transform_check(sysk, n, make_grid(192, 384))
            worst = max(worst, chk.consistent_inside, chk.outside_consistent)
    ok = worst <= 1e-6
    report("6-fourier-consistent", ok, f"max deviation {worst:.2e} across (N,k) in {{0,1}}^2")
    assert worst <= 1e-6


def test_criterion_7_algebra_and_monogenics(rng):
    """Axioms exact; monogenicity <= 1e-6 for k <= 8; derivative term rules
    <= 1e-5; Gram matrices of the first 8 normalized ball polynomials within
    1e-8 of the identity for k <= 3."""
    # axioms (exact up to rounding on random elements)
    worst_axiom = 0.0
    for _ in range(25):
        vals = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
        x, y, z = (Multivector(2, v) for v in vals)
        scale = x.norm() * y.norm() * max(z.norm(), 1.0)
        worst_axiom = max(
            worst_axiom,
            ((x * y) * z - x * (y * z)).norm() / scale,
            (conjugate(x * y) - conjugate(y) * conjugate(x)).norm() / (x.norm() * y.norm()),
        )
    assert worst_axiom <= 1e-13

    # monogenicity
    worst_mono = 0.0
    for k in range(1, 9):
        x = rng.uniform(-0.6, 0.6, size=2)
        worst_mono = max(worst_mono, dirac_numeric(lambda p, k=k: monogenic_eval(k, p), x).norm())
    assert worst_mono <= 1e-6

    # derivative term rules on x^s Y_k
    worst_rule = 0.0
    for s in (1, 2, 3):
        for k in (0, 2):
            x = rng.uniform(0.2, 0.6, size=2)

            def f(p, s=s, k=k):
                acc = scalar_mv(2, 1.0)
                for _ in range(s):
                    acc = acc * from_vector(p)
                return acc * monogenic_eval(k, p)

            got = dirac_numeric(f, x, h=1e-4, richardson=True)
            xv = from_vector(x)
            xpow = scalar_mv(2, 1.0)
            for _ in range(s - 1):
                xpow = xpow * xv
            factor = -s if s % 2 == 0 else -(s + 2 * k + 1)
            want = factor * (xpow * monogenic_eval(k, x))
            worst_rule = max(worst_rule, (got - want).norm() / max(want.norm(), 1.0))
    assert worst_rule <= 1e-5

    # Gram matrices
    rule = gauss_legendre(256, 0.0, 1.0)
    worst_gram = 0.0
    for k in range(4):
        basis = [CliffordLegendre(n, k, 2) for n in range(8)]
        g = gram_matrix(basis, rule, q_theta=256)
        worst_gram = max(worst_gram, float(np.abs(g - np.eye(8)).max()))
    assert worst_gram <= 1e-8

    report(
        "7-algebra-monogenics",
        True,
        f"axioms {worst_axiom:.1e}, monogenicity {worst_mono:.1e}, "
        f"term rules {worst_rule:.1e}, gram defect {worst_gram:.1e}",
    )


def test_criterion_8_desk_scale_exclusions():
    """Documents what is excluded at double precision and pins the
    calibrated-then-frozen regression values.

    (a) eigenvalues under the 1e-14 floor are flagged and excluded from
        quantitative checks rather than asserted against bounds;
    (b) the truncation-bound constant is the frozen output of the fixed
        calibration family (not a quoted number) and still covers a held-out
        band-limited target;
    (c) the sup-norm envelope constant is a frozen first-run regression value.
    """
    # (a) floor flagging and exclusion
    sysk = cpswf_radial_system(1.0, k=0, m=2, parity="even", q=128)
    flagged = sysk.numerically_zero
    assert flagged.any()
    msq = np.abs(sysk.mus) ** 2
    rep = check_bounds(msq, None, 0, 2, 1.0, "even", convention_scale=2 * math.pi)
    floor_checks = [b for b in rep.checks if b.status == "skipped_floor"]
    assert floor_checks, "sub-floor eigenvalues must be reported as magnitude bounds only"

    # (b) calibration procedure reproduces the frozen constant
    grid = make_grid(128, 256)
    basis = CpswfBasis(1.0, 11, 23, grid)
    rows = []
    for rho, ang in [(0.30, 0.4), (0.55, 2.1), (0.80, 3.9)]:
        f = plane_wave(1.0, (rho * math.cos(ang), rho * math.sin(ang)))
        fv = f.sample(grid)
        norm_f = l2_norm(fv, grid)
        coeffs = cpswf_expand(f, 23, 11, 1.0, grid, basis)
        for cap in (9, 11):
            rect = [t for t in coeffs.order if t.n <= cap and t.k <= cap]
            err = l2_error(fv, reconstruct(coeffs, basis, grid, rect), grid)
            rows.append((cap, cap, 0, err, norm_f))
    constant = calibrate_truncation_constant(1.0, 2, rows, TRUNCATION_BOUND_CONVENTION)
    frozen = CALIBRATED_TRUNCATION_CONSTANT[(2, 1.0)]
    assert constant == pytest.approx(frozen, rel=1e-6)
    # held-out target stays under the frozen bound
    f = plane_wave(1.0, (0.45 * math.cos(1.234), 0.45 * math.sin(1.234)))
    fv = f.sample(grid)
    coeffs = cpswf_expand(f, 23, 11, 1.0, grid, basis)
    rect = [t for t in coeffs.order if t.n <= 9 and t.k <= 9]
    err = l2_error(fv, reconstruct(coeffs, basis, grid, rect), grid)
    bound = truncation_bound(
        9, 9, 0, 2, 1.0, l2_norm(fv, grid), frozen, TRUNCATION_BOUND_CONVENTION
    )
    assert err <= bound

    # (c) sup-norm regression constant
    sys256 = cpswf_radial_system(1.0, k=0, m=2, parity="even", q=256)
    ratios = sup_norm_ratio(sys256, range(0, 11))
    assert float(np.nanmax(ratios)) <= 1.5538980121026587 * 1.05

    report(
        "8-exclusions",
        True,
        f"{int(flagged.sum())} sub-floor eigenvalues flagged; frozen constants: "
        f"truncation {frozen:.6f} (reproduced {constant:.6f}), sup-ratio 1.554",
    )
