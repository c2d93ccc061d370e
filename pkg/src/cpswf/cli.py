"""Command-line driver: spectra, error tables, reconstructions, verification.

Commands
--------
eigs      spectrum CSV over a (k, n) grid at fixed bandwidth
table1    L2-error comparison (prolate basis vs Fourier-Bessel) for the
          bundled Gaussian-times-harmonic example
example2  samples + reconstruction of the Bessel/angular example
verify    machine-readable pass/fail report over the verification suites

Bandwidth convention: c couples with 2 pi inside every kernel, i.e. the ball
Fourier transform is int_B f(y) e^(2 pi i c <x,y>) dy and the radial kernel
is sqrt(2 pi c x y) J_alpha(2 pi c x y).

Exit codes: 0 success, 1 verification failure, 2 usage error.
Outputs are deterministic for a fixed configuration; randomized spot-checks
take an explicit --seed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys as _sys
from pathlib import Path

import numpy as np

from .algebra import Multivector, conjugate, field_multiply, geometric_product
from .expansion import (
    CpswfBasis,
    DiskFunction,
    FourierBesselBasis,
    cpswf_expand,
    fourier_bessel_expand,
    fourier_transform_check,
    l2_error,
    l2_norm,
    make_grid,
    reconstruct,
    select_terms,
    truncation_bound,
    ApproximationReport,
)
from .hankel import (
    SPECTRUM_CSV_HEADER,
    csv_float,
    check_bounds_with_convention_retest,
    chi_spectrum,
    cpswf_radial_system,
    cross_check_finite_fourier,
    mu_lower_bound,
    mu_upper_bound,
)
from .monogenics import CliffordLegendre, gram_matrix
from .special import bessel_j, gauss_legendre

# Reference error-table targets for terms (5, 7, 10); reproduction is banded,
# see README "Known discrepancies".
TABLE1_REFERENCE = {
    5: (1.5e-6, 0.13),
    7: (8.24e-12, 0.06),
    10: (6.6e-12, 0.05),
}

# Truncation-bound constant calibrated once on a fixed band-limited
# plane-wave family under the 2 pi bandwidth convention (family and
# procedure in tests/test_acceptance.py) and frozen.
CALIBRATED_TRUNCATION_CONSTANT = {(2, 1.0): 0.3412126732191273}
TRUNCATION_BOUND_CONVENTION = 2.0 * math.pi

DEFAULTS = {
    "c": None,  # per-command
    "m": 2,
    "kmax": None,
    "nmax": 13,
    "terms": None,
    "qr": 256,
    "qtheta": 512,
    "angular": "cos4",
    "selection": "coupled",
    "seed": 2024,
    "out": None,
}


class UsageError(Exception):
    pass


def _parse_terms(text: str) -> list[int]:
    try:
        values = [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --terms list {text!r}") from exc
    if not values or any(v < 0 for v in values):
        raise UsageError(f"--terms must be non-negative integers, got {text!r}")
    return values


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    out = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"bad config line {line!r} (expected key=value)")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _effective(args: argparse.Namespace, config: dict) -> dict:
    cfg = dict(DEFAULTS)
    casts = {
        "c": float, "m": int, "kmax": int, "nmax": int, "qr": int,
        "qtheta": int, "seed": int, "terms": str, "angular": str,
        "selection": str, "out": str,
    }
    for key, cast in casts.items():
        if key in config:
            cfg[key] = cast(config[key])
    for key in casts:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    if isinstance(cfg["terms"], str):
        cfg["terms"] = _parse_terms(cfg["terms"])
    return cfg


def _validate(cfg: dict, command: str) -> None:
    if cfg["c"] is not None and cfg["c"] <= 0:
        raise UsageError("--c must be positive")
    if cfg["qr"] < 32 or cfg["qtheta"] < 32:
        raise UsageError("quadrature orders must be >= 32")
    if cfg["kmax"] is not None and cfg["kmax"] < 0:
        raise UsageError("--kmax must be >= 0")
    if cfg["terms"] is not None and not cfg["terms"]:
        raise UsageError("--terms must be non-empty")
    if cfg["angular"] not in ("cos4", "cos4pi", "solid4"):
        raise UsageError(f"unknown --angular reading {cfg['angular']!r}")
    if cfg["selection"] not in ("coupled", "global"):
        raise UsageError(f"unknown --selection policy {cfg['selection']!r}")
    if command in ("table1", "example2") and cfg["m"] != 2:
        raise UsageError(f"{command} requires m = 2")
    if command in ("table1", "example2") and cfg["terms"] is not None and 0 in cfg["terms"]:
        raise UsageError("truncation sizes must be >= 1")


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        _sys.stdout.write(text)
    else:
        Path(out).write_text(text)


# ---------------------------------------------------------------------------
# eigs
# ---------------------------------------------------------------------------

def cmd_eigs(cfg: dict) -> int:
    c = cfg["c"] if cfg["c"] is not None else 4.2
    m = cfg["m"]
    kmax = cfg["kmax"] if cfg["kmax"] is not None else 40
    orders = cfg["terms"] if cfg["terms"] is not None else [2, 5]
    if kmax < 0 or not orders:
        raise UsageError("empty (k, n) grid")
    rule = gauss_legendre(cfg["qr"], 0.0, 1.0)
    lines = [SPECTRUM_CSV_HEADER]
    for k in range(kmax + 1):
        chis = chi_spectrum(k, m, c, max(orders))
        systems = {}
        for n in orders:
            parity = "even" if n % 2 == 0 else "odd"
            if parity not in systems:
                systems[parity] = cpswf_radial_system(c, k=k, m=m, parity=parity, q=rule.size)
            sysk = systems[parity]
            radial_n = n // 2
            mu = sysk.mus[radial_n]
            msq = abs(mu) ** 2
            lower = mu_lower_bound(radial_n, sysk.kappa, m, c)
            upper = mu_upper_bound(radial_n, sysk.kappa, m, c)
            if upper is not None and msq > 1e-14:
                margin = upper - msq
            elif lower is not None:
                margin = msq - lower
            else:
                margin = None
            lines.append(
                ",".join(
                    [
                        str(k), str(m), csv_float(c), parity, str(radial_n),
                        csv_float(sysk.gammas[radial_n]), csv_float(mu.real), csv_float(mu.imag),
                        csv_float(float(chis[n])), csv_float(lower), csv_float(upper), csv_float(margin),
                    ]
                )
            )
    _write_output("\n".join(lines) + "\n", cfg["out"])
    return 0


# ---------------------------------------------------------------------------
# table1
# ---------------------------------------------------------------------------

def example1_function(angular: str) -> DiskFunction:
    """Gaussian radial profile times a degree-4 angular factor.

    cos4    : e^(-r^2) cos(4 theta)          (periodic harmonic reading)
    cos4pi  : e^(-r^2) cos(4 pi theta)       (literal non-periodic reading)
    solid4  : e^(-r^2) r^4 cos(4 theta)      (solid-harmonic reading; the
              only variant that is smooth on the disk, kept as a diagnostic)
    """
    def evaluator(r, th):
        shape = np.broadcast_shapes(np.shape(r), np.shape(th))
        out = np.zeros(shape + (4,), dtype=complex)
        if angular == "cos4":
            out[..., 0] = np.exp(-np.asarray(r) ** 2) * np.cos(4.0 * np.asarray(th))
        elif angular == "cos4pi":
            out[..., 0] = np.exp(-np.asarray(r) ** 2) * np.cos(4.0 * np.pi * np.asarray(th))
        elif angular == "solid4":
            out[..., 0] = (
                np.exp(-np.asarray(r) ** 2) * np.asarray(r) ** 4 * np.cos(4.0 * np.asarray(th))
            )
        else:
            raise ValueError(f"unknown angular reading {angular!r}")
        return out

    return DiskFunction(evaluator, m=2, smoothness_note=f"example-1 ({angular})")


def run_table1(
    c: float,
    terms_list: list[int],
    angular: str,
    selection: str,
    q_r: int,
    q_theta: int,
    kmax: int,
    nmax: int,
) -> tuple[ApproximationReport, dict]:
    grid = make_grid(q_r, q_theta)
    f = example1_function(angular)
    norm_f = l2_norm(f.sample(grid), grid)

    cp_basis = CpswfBasis(c, kmax, nmax, grid)
    cp_coeffs = cpswf_expand(f, nmax, kmax, c, grid, cp_basis)
    fb_basis = FourierBesselBasis(kmax, nmax, grid)
    fb_coeffs = fourier_bessel_expand(f, nmax, kmax, grid, fb_basis)

    report = ApproximationReport()
    index_sets = {}
    constant = CALIBRATED_TRUNCATION_CONSTANT.get((2, c))
    fv = f.sample(grid)
    for t_count in terms_list:
        cp_sel = select_terms(cp_coeffs, t_count, selection)
        fb_sel = select_terms(fb_coeffs, t_count, selection)
        cp_err = l2_error(fv, reconstruct(cp_coeffs, cp_basis, grid, cp_sel), grid)
        fb_err = l2_error(fv, reconstruct(fb_coeffs, fb_basis, grid, fb_sel), grid)
        bound = None
        if constant is not None and cp_sel:
            n_trunc = max(t.n for t in cp_sel)
            m_trunc = max(t.k for t in cp_sel)
            bound = truncation_bound(
                n_trunc, m_trunc, 0, 2, c, norm_f, constant, TRUNCATION_BOUND_CONVENTION
            )
        report.add("cpswf", t_count, cp_err, bound)
        report.add("fourier_bessel", t_count, fb_err, None)
        index_sets[str(t_count)] = {
            "cpswf": [[t.n, t.k] for t in cp_sel],
            "fourier_bessel": [[t.n, t.k] for t in fb_sel],
        }

    reference_delta = {}
    documented = False
    for t_count in terms_list:
        if t_count in TABLE1_REFERENCE:
            ref_cp, ref_fb = TABLE1_REFERENCE[t_count]
            got_cp = next(
                r["l2_error"] for r in report.rows
                if r["basis"] == "cpswf" and r["terms"] == t_count
            )
            got_fb = next(
                r["l2_error"] for r in report.rows
                if r["basis"] == "fourier_bessel" and r["terms"] == t_count
            )
            within = got_cp <= 10 * ref_cp and got_cp >= ref_cp / 10
            reference_delta[str(t_count)] = {
                "cpswf_reference": ref_cp,
                "cpswf_measured": got_cp,
                "fourier_bessel_reference": ref_fb,
                "fourier_bessel_measured": got_fb,
                "cpswf_within_order_of_magnitude": within,
            }
            if not within:
                documented = True
    report.metadata = {
        "c": c,
        "m": 2,
        "angular": angular,
        "selection": selection,
        "q_r": q_r,
        "q_theta": q_theta,
        "norm_f": norm_f,
        "index_sets": index_sets,
        "reference_comparison": reference_delta,
        "discrepancy_documented": documented,
        "discrepancy_note": (
            "Reference error values are not reproduced by the stated example "
            "function under any periodic angular reading; see README, 'Known "
            "discrepancies'. The solid4 reading reproduces their qualitative "
            "signature." if documented else ""
        ),
    }
    return report, index_sets


def cmd_table1(cfg: dict) -> int:
    c = cfg["c"] if cfg["c"] is not None else 1.0
    terms_list = cfg["terms"] if cfg["terms"] is not None else [5, 7, 10]
    kmax = cfg["kmax"] if cfg["kmax"] is not None else 8
    report, _ = run_table1(
        c, terms_list, cfg["angular"], cfg["selection"],
        cfg["qr"], cfg["qtheta"], kmax, cfg["nmax"],
    )
    _write_output(report.to_csv(), cfg["out"])
    if cfg["out"] is not None:
        Path(cfg["out"] + ".json").write_text(report.to_json())
    return 0


# ---------------------------------------------------------------------------
# example2
# ---------------------------------------------------------------------------

def example2_function(c: float) -> DiskFunction:
    """J_0(c r)/(1+r^2) + J_1(c r)/(1+r^2) * theta * e1, theta in [0, 2 pi)."""
    def evaluator(r, th):
        shape = np.broadcast_shapes(np.shape(r), np.shape(th))
        out = np.zeros(shape + (4,), dtype=complex)
        r = np.asarray(r, dtype=float)
        th = np.asarray(th, dtype=float)
        damp = 1.0 / (1.0 + r**2)
        out[..., 0] = np.broadcast_to(bessel_j(0, c * r) * damp, shape)
        out[..., 1] = bessel_j(1, c * r) * damp * np.mod(th, 2.0 * np.pi)
        return out

    return DiskFunction(evaluator, m=2, smoothness_note="example-2 (theta sawtooth in e1)")


def run_example2(
    c: float,
    t_count: int,
    q_r: int,
    q_theta: int,
    kmax: int,
    nmax: int,
    selection: str = "coupled",
    out_r: int = 24,
    out_theta: int = 48,
) -> tuple[str, dict]:
    grid = make_grid(q_r, q_theta)
    f = example2_function(c)
    basis = CpswfBasis(c, kmax, nmax, grid)
    coeffs = cpswf_expand(f, nmax, kmax, c, grid, basis)
    sel = select_terms(coeffs, t_count, selection)
    rec = reconstruct(coeffs, basis, grid, sel)
    err = l2_error(f.sample(grid), rec, grid)
    norm_f = l2_norm(f.sample(grid), grid)

    # sampled fields on a coarse polar grid (theta = 0 included)
    r_out = np.linspace(0.02, 1.0, out_r)
    th_out = 2.0 * np.pi * np.arange(out_theta) / out_theta
    f_vals = f.evaluator(r_out[:, None], th_out[None, :])
    rec_vals = np.zeros(f_vals.shape, dtype=complex)
    for term in sel:
        parity = "even" if term.n % 2 == 0 else "odd"
        sysk = basis.system(term.k, parity)
        psi = sysk.field(term.n // 2, r_out[:, None], th_out[None, :])
        a = coeffs.entries[(term.n, term.k, term.ell)]
        rec_vals += field_multiply(psi, a[None, None, :], 2)

    lines = ["r,theta,f_scalar,f_e1,rec_scalar,rec_e1"]
    for i, rv in enumerate(r_out):
        for j, tv in enumerate(th_out):
            lines.append(
                ",".join(
                    [
                        csv_float(rv), csv_float(tv),
                        csv_float(f_vals[i, j, 0].real), csv_float(f_vals[i, j, 1].real),
                        csv_float(rec_vals[i, j, 0].real), csv_float(rec_vals[i, j, 1].real),
                    ]
                )
            )
    summary = {
        "c": c,
        "terms": t_count,
        "l2_error": err,
        "norm_f": norm_f,
        "relative_error": err / norm_f,
        "index_set": [[t.n, t.k] for t in sel],
    }
    return "\n".join(lines) + "\n", summary


def cmd_example2(cfg: dict) -> int:
    c = cfg["c"] if cfg["c"] is not None else 1.0
    t_count = (cfg["terms"] or [5])[0]
    kmax = cfg["kmax"] if cfg["kmax"] is not None else 8
    csv_text, summary = run_example2(
        c, t_count, cfg["qr"], cfg["qtheta"], kmax, cfg["nmax"], cfg["selection"]
    )
    _write_output(csv_text, cfg["out"])
    if cfg["out"] is not None:
        Path(cfg["out"] + ".json").write_text(json.dumps(summary, indent=2, sort_keys=True))
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _suite_residuals(c: float, q: int) -> dict:
    worst = 0.0
    worst_ortho = 0.0
    for alpha, k, m, parity in [(0.0, 0, 2, "even"), (1.0, 1, 2, "even"), (2.5, 2, 3, "even")]:
        sysk = cpswf_radial_system(c, k=k, m=m, parity=parity, q=q)
        worst = max(worst, float(sysk.residuals(20).max()))
        v = sysk.phis[:, :20] * np.sqrt(sysk.rule.weights)[:, None]
        worst_ortho = max(worst_ortho, float(np.abs(v.T @ v - np.eye(20)).max()))
    return {
        "pass": worst <= 1e-10 and worst_ortho <= 1e-10,
        "max_residual": worst,
        "max_orthonormality_defect": worst_ortho,
    }


def _suite_bounds(c: float, q: int) -> dict:
    details = []
    ok = True
    for k in (0, 1, 2):
        for parity in ("even", "odd"):
            sysk = cpswf_radial_system(c, k=k, m=2, parity=parity, q=q)
            msq = np.abs(sysk.mus[:25]) ** 2
            chis = chi_spectrum(k, 2, c, 10)
            report, convention = check_bounds_with_convention_retest(
                msq, chis, k, 2, c, parity
            )
            ok = ok and report.satisfied and convention != "violated"
            details.append(
                {
                    "k": k,
                    "parity": parity,
                    "convention": convention,
                    "violations": len(report.violations),
                }
            )
    return {"pass": ok, "branches": details}


def _suite_gram(q_r: int) -> dict:
    rule = gauss_legendre(max(q_r, 128), 0.0, 1.0)
    worst = 0.0
    for k in range(3):
        basis = [CliffordLegendre(n, k, 2) for n in range(6)]
        g = gram_matrix(basis, rule, q_theta=256)
        worst = max(worst, float(np.abs(g - np.eye(6)).max()))
    return {"pass": worst <= 1e-8, "max_gram_defect": worst}


def _suite_crosscheck(c: float, q: int) -> dict:
    worst = 0.0
    for k in (0, 1):
        for parity in ("even", "odd"):
            sysk = cpswf_radial_system(c, k=k, m=2, parity=parity, q=q)
            for n in (0, 1):
                chk = cross_check_finite_fourier(sysk, n)
                rel = abs(chk.mu_2d - chk.mu_radial) / max(abs(chk.mu_radial), 1e-300)
                worst = max(worst, chk.discrepancy, rel)
    return {"pass": worst <= 1e-6, "max_deviation": worst}


def _suite_fourier(c: float, q: int) -> dict:
    worst_inside = 0.0
    worst_outside = 0.0
    literal_inside = 0.0
    outside_abs = 0.0
    for k in (0, 1):
        sysk = cpswf_radial_system(c, k=k, m=2, parity="even", q=q)
        for n in (0, 1):
            chk = fourier_transform_check(sysk, n)
            worst_inside = max(worst_inside, chk.consistent_inside)
            worst_outside = max(worst_outside, chk.outside_consistent)
            literal_inside = max(literal_inside, chk.literal_inside)
            outside_abs = max(outside_abs, chk.outside_abs)
    return {
        "pass": worst_inside <= 1e-6 and worst_outside <= 1e-6,
        "max_consistent_inside": worst_inside,
        "max_consistent_outside": worst_outside,
        "info_literal_inside": literal_inside,
        "info_outside_abs": outside_abs,
    }


def _suite_algebra(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(20):
        vals = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
        x, y, z = (Multivector(2, v) for v in vals)
        assoc = ((x * y) * z - x * (y * z)).norm()
        anti = (conjugate(geometric_product(x, y)) - geometric_product(conjugate(y), conjugate(x))).norm()
        scale = max(x.norm() * y.norm() * max(z.norm(), 1.0), 1e-30)
        worst = max(worst, assoc / scale, anti / max(x.norm() * y.norm(), 1e-30))
    return {"pass": worst <= 1e-13, "max_relative_defect": worst}


def cmd_verify(cfg: dict) -> int:
    c = cfg["c"] if cfg["c"] is not None else 1.0
    q = cfg["qr"]
    suites = {
        "residuals": _suite_residuals(c, q),
        "bounds": _suite_bounds(c, q),
        "gram": _suite_gram(q),
        "crosscheck": _suite_crosscheck(c, q),
        "fourier": _suite_fourier(c, q),
        "algebra": _suite_algebra(cfg["seed"]),
    }
    all_pass = all(s["pass"] for s in suites.values())
    report = {"pass": all_pass, "c": c, "seed": cfg["seed"], "suites": suites}
    _write_output(json.dumps(report, indent=2, sort_keys=True, default=float) + "\n", cfg["out"])
    return 0 if all_pass else 1


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cpswf",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("eigs", "spectrum CSV over a (k, n) grid"),
        ("table1", "L2-error table: prolate basis vs Fourier-Bessel"),
        ("example2", "Bessel/angular example reconstruction grid"),
        ("verify", "run verification suites; exit 1 on failure"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--c", type=float, default=None, help="bandwidth (c > 0)")
        p.add_argument("--m", type=int, default=None, help="ambient dimension (default 2)")
        p.add_argument("--kmax", type=int, default=None, help="max monogenic degree")
        p.add_argument("--nmax", type=int, default=None, help="max per-degree order")
        p.add_argument("--terms", type=str, default=None,
                       help="comma list: truncation sizes (table1) or orders n (eigs)")
        p.add_argument("--qr", type=int, default=None, help="radial quadrature nodes")
        p.add_argument("--qtheta", type=int, default=None, help="angular quadrature nodes")
        p.add_argument("--angular", type=str, default=None,
                       choices=["cos4", "cos4pi", "solid4"],
                       help="example-1 angular reading (default cos4)")
        p.add_argument("--selection", type=str, default=None,
                       choices=["coupled", "global"],
                       help="term selection policy (default coupled)")
        p.add_argument("--seed", type=int, default=None, help="seed for randomized spot-checks")
        p.add_argument("--out", type=str, default=None, help="output path (default stdout)")
        p.add_argument("--config", type=str, default=None, help="flat key=value config file")
    return parser


COMMANDS = {
    "eigs": cmd_eigs,
    "table1": cmd_table1,
    "example2": cmd_example2,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config)
        cfg = _effective(args, config)
        _validate(cfg, args.command)
        return COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=_sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"usage error: {exc}", file=_sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
