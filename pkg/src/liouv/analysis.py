"""Full pipeline: model -> rapidities -> driving -> normal modes -> spectrum/NESS.

`analyze` returns the rich result objects; `build_report` flattens them into a
JSON-native dict (complex numbers as [re, im] pairs, deterministic orderings)
that round-trips through serialization unchanged; `render_text` produces the
human-readable table view.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .errors import SpectrumTooLarge
from .lyapunov import DrivingSolution, solve_lyapunov
from .model import (
    BathMatrices,
    QuadraticLindbladModel,
    StructureMatrix,
    build_bath_matrices,
    build_structure_matrix,
    build_X,
)
from .normal_modes import (
    NormalFormDescriptor,
    NormalModeBasis,
    build_V,
    normal_form_coefficients,
)
from .rapidity import JordanForm, StabilityReport, jordan_decompose, stability_check
from .spectra import (
    NessReport,
    SpectrumEnumeration,
    attach_covariance,
    classify_ness,
    enumerate_spectrum,
)

WARN_ILL_CONDITIONED = "ill_conditioned_jordan"
WARN_COV_NOT_UNIQUE = "covariance_not_unique"
WARN_PHYSICALITY = "physicality_bound_exceeded"
WARN_SPECTRUM_TRUNCATED = "spectrum_not_enumerated"

ALL_WARNINGS = (
    WARN_ILL_CONDITIONED,
    WARN_COV_NOT_UNIQUE,
    WARN_PHYSICALITY,
    WARN_SPECTRUM_TRUNCATED,
)


@dataclass(frozen=True)
class Tolerances:
    tol_input: float = 1e-10
    tol_build: float = 1e-12
    tol_psd: float = 1e-10
    tol_cluster: float = 1e-7
    tol_rank: float = 1e-9
    tol_stability: float = 1e-8
    tol_lyap: float = 1e-8
    tol_omega: float = 1e-8
    tol_normal: float = 1e-8
    tol_merge: float = 1e-8
    spectrum_limit: int = 10**6


@dataclass(frozen=True)
class AnalysisResult:
    model: QuadraticLindbladModel
    bath: BathMatrices
    X: np.ndarray
    structure: StructureMatrix
    jordan: JordanForm
    stability: StabilityReport
    driving: DrivingSolution
    normal_modes: NormalModeBasis
    normal_form: NormalFormDescriptor
    ness: NessReport
    spectrum: SpectrumEnumeration | None
    warnings: tuple[str, ...]
    tolerances: Tolerances


def analyze(
    model: QuadraticLindbladModel,
    tolerances: Tolerances = Tolerances(),
) -> AnalysisResult:
    """Run the whole fast path on a validated model."""
    t = tolerances
    bath = build_bath_matrices(model, t.tol_psd)
    X = build_X(model, bath)
    structure = build_structure_matrix(model, bath, t.tol_build)
    jf = jordan_decompose(X, t.tol_cluster, t.tol_rank)
    stability = stability_check(jf, t.tol_stability)
    driving = solve_lyapunov(X, bath.M_i, jf, t.tol_lyap, t.tol_omega)
    nmb = build_V(jf, driving.Z, t.tol_normal)
    nform = normal_form_coefficients(nmb, jf)
    ness = classify_ness(jf, t.tol_stability, stability)
    ness = attach_covariance(ness, driving.Z, driving.unique)

    warnings = []
    if jf.ill_conditioned:
        warnings.append(WARN_ILL_CONDITIONED)
    if not driving.unique:
        warnings.append(WARN_COV_NOT_UNIQUE)
    if ness.physicality_margin is not None and ness.physicality_margin > 1 + 1e-7:
        warnings.append(WARN_PHYSICALITY)

    spectrum = None
    try:
        spectrum = enumerate_spectrum(jf, t.spectrum_limit, t.tol_merge)
    except SpectrumTooLarge:
        warnings.append(WARN_SPECTRUM_TRUNCATED)

    return AnalysisResult(
        model=model,
        bath=bath,
        X=X,
        structure=structure,
        jordan=jf,
        stability=stability,
        driving=driving,
        normal_modes=nmb,
        normal_form=nform,
        ness=ness,
        spectrum=spectrum,
        warnings=tuple(warnings),
        tolerances=t,
    )


def _c(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _cmat(m: np.ndarray) -> list:
    return [[_c(v) for v in row] for row in np.asarray(m)]


def _rmat(m: np.ndarray) -> list:
    return [[float(v) for v in row] for row in np.asarray(m)]


def build_report(result: AnalysisResult, full_spectrum: bool = False) -> dict:
    """JSON-native report; every numerical field finite, orderings deterministic."""
    r = result
    model = r.model
    rap = [
        {
            "j": cls.j,
            "beta": _c(cls.rapidity),
            "class": cls.kind,
            "block_sizes": [int(s) for s in cls.block_sizes],
        }
        for cls in r.stability.classes
    ]
    report = {
        "input": {
            "n": model.n,
            "K": _rmat(model.K),
            "lindblad": [[_c(v) for v in l] for l in model.lindblad_vectors],
        },
        "tolerances": {k: (int(v) if isinstance(v, int) else float(v))
                       for k, v in asdict(r.tolerances).items()},
        "bath": {
            "M": _cmat(r.bath.M),
            "M_r": _rmat(r.bath.M_r),
            "M_i": _rmat(r.bath.M_i),
        },
        "X": _rmat(r.X),
        "A0": float(r.structure.A0),
        "rapidities": rap,
        "jordan": {
            "cond_P": float(r.jordan.cond_P),
            "reconstruction_residual": float(r.jordan.reconstruction_residual),
            "ill_conditioned": bool(r.jordan.ill_conditioned),
        },
        "gap": float(r.ness.gap),
        "driving": {
            "Z": _rmat(r.driving.Z),
            "unique": bool(r.driving.unique),
            "free_parameter_count": int(r.driving.free_parameter_count),
            "residual": float(r.driving.residual),
            "method": r.driving.method,
            "omega_checks": [[int(i), float(v)] for i, v in r.driving.omega_checks],
            "zero_mode_K_max": (
                None
                if r.driving.zero_diagnostics is None
                else float(np.abs(r.driving.zero_diagnostics.K).max(initial=0.0))
            ),
            "imaginary_pair_K_max": [
                float(np.abs(d.K).max(initial=0.0)) for d in r.driving.imaginary_diagnostics
            ],
        },
        "normal_modes": {
            "normalization_residual": float(r.normal_modes.normalization_residual),
            "orthogonality_residual": float(r.normal_modes.orthogonality_residual),
            "coupling_count": int(r.normal_form.coupling_count),
            "rapidity_trace": _c(r.normal_form.rapidity_trace()),
        },
        "ness": {
            "unique": bool(r.ness.unique),
            "stationary_dim": int(r.ness.stationary_dim),
            "zero_rapidity_modes": [[int(j), int(k)] for j, k in r.ness.zero_rapidity_modes],
            "imaginary_pair_modes": [
                [int(j), int(jp), int(k), int(kp), sgn]
                for j, jp, k, kp, sgn in r.ness.imaginary_pair_modes
            ],
            "covariance": _cmat(r.ness.covariance),
            "covariance_unique": bool(r.ness.covariance_unique),
            "physicality_margin": float(r.ness.physicality_margin),
        },
        "warnings": list(r.warnings),
    }
    # extremal eigenvalues are available without enumeration: the vacuum sits
    # at 0 and the fully occupied vector at -2 tr X = -2 A_0
    extremes = {"lambda_vacuum": _c(0.0), "lambda_full": _c(-2 * r.structure.A0)}
    if r.spectrum is None:
        report["spectrum"] = {"enumerated": False, "extremes": extremes}
    else:
        spec = {
            "enumerated": True,
            "extremes": extremes,
            "count": len(r.spectrum.entries),
            "total_dim": int(r.spectrum.total_dim),
            "merged": [
                {
                    "lambda": _c(e.lam),
                    "total_dim": int(e.total_dim),
                    "max_jordan_block": int(e.max_jordan_block),
                    "lower_bound": bool(e.lower_bound),
                }
                for e in r.spectrum.merged
            ],
        }
        if full_spectrum:
            spec["entries"] = [
                {
                    "lambda": _c(e.lam),
                    "occupation": [[int(j), int(k), int(m)] for (j, k), m in e.occupation],
                    "subspace_dim": int(e.subspace_dim),
                    "max_jordan_block": int(e.max_jordan_block),
                }
                for e in r.spectrum.entries
            ]
        report["spectrum"] = spec
    return report


def _fmt_c(pair) -> str:
    re, im = pair
    if im == 0:
        return f"{re:+.6g}"
    return f"{re:+.6g}{im:+.6g}i"


def _fmt_matrix(rows, complex_entries: bool) -> list[str]:
    if complex_entries:
        cells = [[_fmt_c(v) for v in row] for row in rows]
    else:
        cells = [[f"{v:+.6g}" for v in row] for row in rows]
    width = max((len(c) for row in cells for c in row), default=1)
    return ["  ".join(c.rjust(width) for c in row) for row in cells]


def render_text(report: dict) -> str:
    """Aligned plain-text tables for terminal output."""
    out = []
    n = report["input"]["n"]
    out.append(f"quadratic Lindblad model: n = {n} fermions, "
               f"{len(report['input']['lindblad'])} bath vector(s)")
    out.append("")
    out.append("X = 2K + 2M_r:")
    out.extend("  " + line for line in _fmt_matrix(report["X"], False))
    out.append("")
    out.append("rapidities (eigenvalues of X):")
    out.append(f"  {'j':>3} {'Re beta':>14} {'Im beta':>14}  {'class':<10} blocks")
    for r in report["rapidities"]:
        re, im = r["beta"]
        sizes = ",".join(str(s) for s in r["block_sizes"])
        out.append(f"  {r['j']:>3} {re:>14.8g} {im:>14.8g}  {r['class']:<10} {sizes}")
    deg = [r for r in report["rapidities"] if any(s > 1 for s in r["block_sizes"])]
    if deg:
        for r in deg:
            out.append(f"  non-diagonalizable: rapidity j={r['j']} has block size "
                       f"{max(r['block_sizes'])}")
    out.append(f"  spectral gap: {report['gap']:.8g}")
    out.append(f"  cond(P) = {report['jordan']['cond_P']:.4g}, "
               f"reconstruction residual {report['jordan']['reconstruction_residual']:.2e}")
    out.append("")
    d = report["driving"]
    out.append(f"driving solution Z ({d['method']} path, residual {d['residual']:.2e}, "
               f"unique={d['unique']}, free parameters={d['free_parameter_count']}):")
    out.extend("  " + line for line in _fmt_matrix(d["Z"], False))
    out.append("")
    ns = report["ness"]
    out.append(f"NESS: unique={ns['unique']}, stationary dimension {ns['stationary_dim']}, "
               f"gap {report['gap']:.8g}")
    if ns["zero_rapidity_modes"]:
        out.append(f"  zero-rapidity modes (j,k): {ns['zero_rapidity_modes']}")
    if ns["imaginary_pair_modes"]:
        out.append(f"  imaginary-pair modes (j,j',k,k',±): {ns['imaginary_pair_modes']}")
    out.append(f"  covariance unique: {ns['covariance_unique']}, "
               f"physicality margin |4Z| = {ns['physicality_margin']:.6g}")
    out.append("  covariance C = 1 + 4i Z^T:")
    out.extend("    " + line for line in _fmt_matrix(ns["covariance"], True))
    out.append("")
    sp = report["spectrum"]
    if sp.get("enumerated"):
        out.append(f"Liouvillean spectrum: {sp['count']} occupation vectors, "
                   f"total dimension {sp['total_dim']} (merged view):")
        out.append(f"  {'Re lambda':>14} {'Im lambda':>14} {'dim':>5} {'maxblk':>6}")
        for e in sp["merged"]:
            re, im = e["lambda"]
            star = "*" if e["lower_bound"] else " "
            out.append(f"  {re:>14.8g} {im:>14.8g} {e['total_dim']:>5} "
                       f"{e['max_jordan_block']:>5}{star}")
        if "entries" in sp:
            out.append("  full listing (occupation -> lambda, dim, maxblk):")
            for e in sp["entries"]:
                occ = " ".join(f"({j},{k})={m}" for j, k, m in e["occupation"])
                re, im = e["lambda"]
                out.append(f"    {re:+.8g}{im:+.8g}i  dim {e['subspace_dim']} "
                           f"blk {e['max_jordan_block']}  {occ}")
    else:
        full_re, _ = sp["extremes"]["lambda_full"]
        out.append("Liouvillean spectrum: not enumerated (occupation count over limit); "
                   f"extremes 0 and {full_re:.8g}")
    if report["warnings"]:
        out.append("")
        out.append("warnings: " + ", ".join(report["warnings"]))
    return "\n".join(out) + "\n"
