"""Spectra of phi(X): eigenvalue branching against critical values, the
mu-sweep behind the eigenvalue-distribution figure, and the commutator vs
Poisson-bracket convergence measure.
"""

from __future__ import annotations

import io
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .representations import (LoopSpec, Representation, StringSpec,
                              construct_loop_rep, construct_string_rep,
                              solve_string_theta)
from .surface import (CommPolynomial3, bracket_constraint,
                      critical_values_torus_sphere, poisson_bracket)

__all__ = [
    "SpectrumReport", "BranchInterval", "SweepRow",
    "NotHermitianError", "DegreeTooHighError",
    "hermitian_eigenvalues", "position_spectrum", "detect_branches",
    "sweep_mu", "spectrum_rows", "sweep_rows_to_csv", "commutator_vs_bracket",
    "symmetrized_substitution", "build_figure_rep", "write_spectrum_svg",
]

BRANCH_RATIO = 2.0
MAX_SUBSTITUTION_DEGREE = 4


class NotHermitianError(ValueError):
    pass


class DegreeTooHighError(ValueError):
    pass


def hermitian_eigenvalues(H: np.ndarray) -> np.ndarray:
    """All eigenvalues of a hermitian matrix, ascending."""
    H = np.asarray(H, dtype=complex)
    defect = np.linalg.norm(H - H.conj().T)
    if defect > 1e-12 * max(np.linalg.norm(H), 1e-300):
        raise NotHermitianError(f"matrix is not hermitian (defect {defect:.3g})")
    return np.linalg.eigvalsh(H)


@dataclass(frozen=True)
class BranchInterval:
    lo: float
    hi: float
    count: int | None      # None = indeterminate (fewer than 4 eigenvalues)
    n_points: int


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: tuple[float, ...]
    gaps: tuple[float, ...]
    intervals: tuple[BranchInterval, ...]
    mu: float
    c: float
    N: int

    def branch_pattern(self) -> tuple[int | None, ...]:
        return tuple(iv.count for iv in self.intervals)


def _max_abs_second_difference(values: Sequence[float]) -> float | None:
    if len(values) < 3:
        return None
    arr = np.asarray(values)
    return float(np.max(np.abs(np.diff(arr, n=2))))


def detect_branches(spectrum: Sequence[float], critical_values: Sequence[float],
                    ratio: float = BRANCH_RATIO) -> list[BranchInterval]:
    """Branch count per open interval between consecutive critical values.

    An interval holds two branches when splitting its eigenvalues into the
    odd- and even-indexed subsequences reduces the maximal second difference
    by at least ``ratio`` (interleaving signature); fewer than 4 eigenvalues
    is reported as indeterminate.
    """
    eigs = np.sort(np.asarray(spectrum, dtype=float))
    crits = sorted(critical_values)
    if len(crits) < 2:
        raise ValueError("need at least two critical values")
    scale = float(eigs[-1] - eigs[0]) if len(eigs) > 1 else 1.0
    out = []
    for lo, hi in zip(crits, crits[1:]):
        inside = eigs[(eigs > lo) & (eigs < hi)]
        if len(inside) < 4:
            out.append(BranchInterval(lo, hi, None, len(inside)))
            continue
        m0 = _max_abs_second_difference(inside)
        subs = [_max_abs_second_difference(inside[0::2]),
                _max_abs_second_difference(inside[1::2])]
        subs = [s for s in subs if s is not None]
        if m0 <= 1e-12 * max(scale, 1.0) or not subs:
            count = 1
        else:
            m1 = max(subs)
            count = 2 if (m1 == 0.0 or m0 / m1 >= ratio) else 1
        out.append(BranchInterval(lo, hi, count, len(inside)))
    return out


def position_spectrum(rep: Representation, ratio: float = BRANCH_RATIO) -> SpectrumReport:
    """Spectrum of phi(X) with gaps and branch intervals for the rep's (mu, c)."""
    eigs = hermitian_eigenvalues(rep.phi_X)
    if rep.params.c > 0:
        crits = critical_values_torus_sphere(rep.params.mu, rep.params.c)
    else:
        # degenerate surface: the circle x^2 + y^2 = mu, extent +- sqrt(mu)
        edge = math.sqrt(max(rep.params.mu, 0.0))
        crits = [-edge, edge]
    slack = 0.15 * (crits[-1] - crits[0])
    if eigs[0] < crits[0] - slack or eigs[-1] > crits[-1] + slack:
        raise ValueError(
            "spectrum extends beyond the surface's critical range; the "
            "representation does not match the stated (mu, c)")
    intervals = detect_branches(eigs, crits, ratio)
    gaps = tuple(float(g) for g in np.diff(eigs))
    return SpectrumReport(tuple(float(e) for e in eigs), gaps, tuple(intervals),
                          rep.params.mu, rep.params.c, rep.n)


def build_figure_rep(mu: float, c: float, N: int, beta: float = 0.0) -> Representation:
    """The N-dimensional representation used in the eigenvalue figure: a loop
    with theta = pi/N for mu/sqrt(c) > 1, otherwise the string with theta
    solved from cos(N theta) + (mu/sqrt(c)) cos(theta) = 0."""
    if c <= 0:
        raise ValueError("c must be positive")
    if mu / math.sqrt(c) > 1:
        return construct_loop_rep(LoopSpec(n=N, k=1, beta=beta), mu, c)
    theta = solve_string_theta(N, mu, c)
    return construct_string_rep(StringSpec(n=N, theta=theta, mu=mu,
                                           c=c if mu == 0 else None))


@dataclass(frozen=True)
class SweepRow:
    mu: float
    i: int | None
    lam: float | None
    gap: float | None
    interval: int | None
    branches: int | str | None


def spectrum_rows(report: SpectrumReport) -> list[SweepRow]:
    rows = []
    for i, lam in enumerate(report.eigenvalues, start=1):
        interval = None
        for idx, iv in enumerate(report.intervals):
            if iv.lo < lam < iv.hi:
                interval = idx
                break
        branches = report.intervals[interval].count if interval is not None else None
        gap = report.gaps[i - 1] if i <= len(report.gaps) else None
        rows.append(SweepRow(report.mu, i, lam, gap, interval, branches))
    return rows


def sweep_mu(mu_values: Sequence[float], c: float, N: int,
             beta: float = 0.0, ratio: float = BRANCH_RATIO) -> list[SweepRow]:
    """Eigenvalue rows (mu, i, lambda_i, gap_i, interval id, branch count) for
    each mu; per-mu construction failures are recorded in-row and the sweep
    continues."""
    rows: list[SweepRow] = []
    for mu in mu_values:
        try:
            rep = build_figure_rep(mu, c, N, beta)
            report = position_spectrum(rep, ratio)
        except Exception as exc:   # record and continue
            rows.append(SweepRow(mu, None, None, None, None, f"error: {exc}"))
            continue
        rows.extend(spectrum_rows(report))
    return rows


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def sweep_rows_to_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    buf.write("mu,i,lambda,gap,interval,branches\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in
                           (row.mu, row.i, row.lam, row.gap, row.interval, row.branches)))
        buf.write("\n")
    return buf.getvalue()


# ---------------------------------------------------------------------------
# commutators vs Poisson brackets
# ---------------------------------------------------------------------------

def symmetrized_substitution(poly: CommPolynomial3, X: np.ndarray, Y: np.ndarray,
                             Z: np.ndarray) -> np.ndarray:
    """Substitute x,y,z -> X,Y,Z with full symmetrization: each monomial is the
    average over all distinct orderings of its letter multiset (degree <= 4)."""
    n = X.shape[0]
    total = np.zeros((n, n), dtype=complex)
    mats = {"x": X, "y": Y, "z": Z}
    for (a, b, c), coeff in poly.terms.items():
        degree = a + b + c
        if degree > MAX_SUBSTITUTION_DEGREE:
            raise DegreeTooHighError(
                f"monomial degree {degree} exceeds the symmetrization cap "
                f"{MAX_SUBSTITUTION_DEGREE}")
        letters = "x" * a + "y" * b + "z" * c
        orderings = set(itertools.permutations(letters))
        acc = np.zeros((n, n), dtype=complex)
        for order in orderings:
            term = np.eye(n, dtype=complex)
            for ch in order:
                term = term @ mats[ch]
            acc += term
        total += (float(coeff) / len(orderings)) * acc
    return total


def commutator_vs_bracket(f: CommPolynomial3, g: CommPolynomial3,
                          reps: Sequence[Representation],
                          mu: Fraction, c: Fraction) -> list[tuple[int, float]]:
    """For each representation: the relative Frobenius error between
    [F,G]/(i hbar) and the symmetrized substitution of {f,g}_C, with
    C = (P + y^2)^2/2 + z^2/2 - c and P = x^2 - mu."""
    mu, c = Fraction(mu), Fraction(c)
    constraint = bracket_constraint([-mu, Fraction(0), Fraction(1)], c)
    bracket = poisson_bracket(f, g, constraint)
    out = []
    for rep in reps:
        if not (math.isclose(rep.params.mu, float(mu), rel_tol=1e-12, abs_tol=1e-12)
                and math.isclose(rep.params.c, float(c), rel_tol=1e-12, abs_tol=1e-12)):
            raise ValueError("representation parameters disagree with (mu, c)")
        X, Y, Z = rep.phi_X, rep.phi_Y, rep.phi_Z
        F = symmetrized_substitution(f, X, Y, Z)
        G = symmetrized_substitution(g, X, Y, Z)
        H = (F @ G - G @ F) / (1j * rep.params.hbar)
        B = symmetrized_substitution(bracket, X, Y, Z)
        denom = np.linalg.norm(B)
        if denom == 0:
            denom = 1.0
        out.append((rep.n, float(np.linalg.norm(H - B) / denom)))
    return out


# ---------------------------------------------------------------------------
# minimal SVG scatter (index vs lambda, index vs gap)
# ---------------------------------------------------------------------------

def write_spectrum_svg(report: SpectrumReport, path: str) -> None:
    """Two stacked scatter panels: eigenvalues and gaps versus index, with the
    critical values drawn as horizontal lines in the top panel."""
    width, height, margin = 640, 640, 50
    panel_h = (height - 3 * margin) // 2
    eigs = report.eigenvalues
    gaps = report.gaps
    crits = [iv.lo for iv in report.intervals] + [report.intervals[-1].hi]

    def scale(values, lo, hi, out_lo, out_hi):
        span = (hi - lo) or 1.0
        return [out_lo + (v - lo) / span * (out_hi - out_lo) for v in values]

    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
             '<rect width="100%" height="100%" fill="white"/>']
    for panel, (values, label) in enumerate(((eigs, "lambda_i"), (gaps, "gap_i"))):
        top = margin + panel * (panel_h + margin)
        bottom = top + panel_h
        lo = min(min(values), min(crits) if panel == 0 else min(values))
        hi = max(max(values), max(crits) if panel == 0 else max(values))
        xs = scale(range(1, len(values) + 1), 1, max(len(values), 2), margin, width - margin)
        ys = scale(values, lo, hi, bottom, top)
        lines.append(f'<line x1="{margin}" y1="{bottom}" x2="{width - margin}" '
                     f'y2="{bottom}" stroke="black"/>')
        lines.append(f'<line x1="{margin}" y1="{top}" x2="{margin}" '
                     f'y2="{bottom}" stroke="black"/>')
        lines.append(f'<text x="{width // 2}" y="{bottom + 35}" font-size="12" '
                     f'text-anchor="middle">i</text>')
        lines.append(f'<text x="{margin - 35}" y="{(top + bottom) // 2}" font-size="12" '
                     f'transform="rotate(-90 {margin - 35} {(top + bottom) // 2})" '
                     f'text-anchor="middle">{label}</text>')
        if panel == 0:
            for cv in crits:
                y = scale([cv], lo, hi, bottom, top)[0]
                lines.append(f'<line x1="{margin}" y1="{y:.2f}" x2="{width - margin}" '
                             f'y2="{y:.2f}" stroke="gray" stroke-dasharray="4 3"/>')
        for x, y in zip(xs, ys):
            lines.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="2.5" fill="black"/>')
    lines.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
