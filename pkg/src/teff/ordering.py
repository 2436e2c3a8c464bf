"""Effective quantum numbers, degeneracies, shell filling and sign theorems.

The ordering workhorse is T = nu + phi*lambda with nu = n_r + 1/2 and
lambda = l + (d-2)/2: whatever the potential, levels fill in order of
increasing T once phi is known.  This module builds shell sequences from
that rule, checks it against the classical convexity-index theorems, and
produces the universal (phi, T) diagram data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import LambdaTooSmall, TeffError
from .potentials import analyze_slice
from .quadrature import DEFAULT_CONFIG
from .transforms import chi_d, phi_additive

__all__ = [
    "QuantumLevel",
    "teff",
    "teff_nonlinear",
    "degeneracy",
    "leading_degeneracy",
    "spectroscopic_label",
    "ShellEntry",
    "ShellSequence",
    "shell_sequence",
    "SignIdentityCheck",
    "OrderingSignReport",
    "ordering_theorem_signs",
    "ReggeCheck",
    "ReggeSignReport",
    "regge_sign_check",
    "DiagramData",
    "diagram_data",
    "diagram_to_csv",
    "diagram_to_json",
]


@dataclass(frozen=True)
class QuantumLevel:
    """A bound level labelled by radial and orbital quantum numbers in d dimensions."""

    n_r: int
    l: int
    d: int = 3

    def __post_init__(self):
        if self.n_r < 0 or self.l < 0:
            raise ValueError("quantum numbers must be non-negative")
        if self.d < 2:
            raise ValueError("dimension must be >= 2")

    @property
    def nu(self):
        return self.n_r + 0.5

    @property
    def lam(self):
        return self.l + 0.5 * (self.d - 2)


def teff(level, phi):
    """Effective quantum number T = nu + phi*lambda (equals the principal
    quantum number n_r + l + 1 for phi = 1, d = 3)."""
    if not phi > 0:
        raise ValueError("phi must be positive")
    return level.nu + phi * level.lam


def teff_nonlinear(level, chi1, chi_inf, A):
    """Non-linear form T = nu + chi1*lam + (chi1 - chi_inf)*lam*ln(lam/A).

    Rejected when lam/A < 0.05, where the underlying Mellin inversion
    loses validity.
    """
    lam = level.lam
    if lam <= 0:
        raise LambdaTooSmall("non-linear form needs lambda > 0")
    if lam / A < 0.05:
        raise LambdaTooSmall(f"lambda/A = {lam / A:.3g} < 0.05")
    return level.nu + chi1 * lam + (chi1 - chi_inf) * lam * math.log(lam / A)


def _rising_product(l, d):
    """(l+1)(l+2)...(l+d-1), zero for l < 0."""
    if l < 0:
        return 0
    out = 1
    for k in range(1, d):
        out *= l + k
    return out


def degeneracy(l, d, spin=1):
    """Number of states sharing orbital quantum number l in d dimensions."""
    if l < 0 or d < 2:
        raise ValueError("need l >= 0 and d >= 2")
    if spin not in (1, 2):
        raise ValueError("spin factor must be 1 or 2")
    base = (_rising_product(l, d) - _rising_product(l - 2, d)) // math.factorial(d - 1)
    return spin * base


def leading_degeneracy(lam, d):
    """Leading large-lambda term 2 lambda^(d-2) / (d-2)! of the degeneracy."""
    if d < 2:
        raise ValueError("need d >= 2")
    return 2.0 * lam ** (d - 2) / math.factorial(d - 2)


_ORBITAL_LETTERS = "spdfghiklmnoqrtuvwxyz"


def spectroscopic_label(n_r, l, d=3):
    """'1s', '2p', ... for d = 3; a plain (n_r, l) tag otherwise."""
    if d != 3:
        return f"({n_r},{l})"
    n = n_r + l + 1
    letter = _ORBITAL_LETTERS[l] if l < len(_ORBITAL_LETTERS) else f"[l={l}]"
    return f"{n}{letter}"


@dataclass(frozen=True)
class ShellEntry:
    n_r: int
    l: int
    label: str
    T: float
    degeneracy: int
    cumulative: int
    tied: bool = False


@dataclass(frozen=True)
class ShellSequence:
    """Shells in order of increasing T; exact ties are flagged and broken
    by smaller l first."""

    phi: float
    d: int
    spin: int
    entries: tuple


def shell_sequence(phi, d, count, spin=1):
    """First ``count`` shells of the T-ordering at slope phi."""
    if not phi > 0:
        raise ValueError("phi must be positive")
    if count < 1:
        raise ValueError("count must be >= 1")
    n_max = count + 2
    l_max = int(math.ceil((count + 2) / phi)) + 2
    candidates = []
    for n_r in range(n_max + 1):
        for l in range(l_max + 1):
            lvl = QuantumLevel(n_r, l, d)
            candidates.append((teff(lvl, phi), l, n_r))
    candidates.sort()
    picked = candidates[:count]

    entries = []
    cumulative = 0
    for idx, (t, l, n_r) in enumerate(picked):
        tied = False
        if idx > 0 and math.isclose(t, picked[idx - 1][0], rel_tol=1e-12, abs_tol=1e-12):
            tied = True
        if idx + 1 < len(picked) and math.isclose(t, picked[idx + 1][0], rel_tol=1e-12, abs_tol=1e-12):
            tied = True
        deg = degeneracy(l, d, spin)
        cumulative += deg
        entries.append(ShellEntry(n_r=n_r, l=l, label=spectroscopic_label(n_r, l, d),
                                  T=t, degeneracy=deg, cumulative=cumulative, tied=tied))
    return ShellSequence(phi=phi, d=d, spin=spin, entries=tuple(entries))


def _sign(x, tol=1e-9):
    if abs(x) <= tol:
        return 0
    return 1 if x > 0 else -1


@dataclass(frozen=True)
class SignIdentityCheck:
    name: str
    kappa_sign: int | None     # None means the sign is mixed over the probe domain
    phi_sign: int
    verdict: str               # agree / disagree / not-applicable


@dataclass(frozen=True)
class OrderingSignReport:
    potential: str
    E: float
    phi: float
    kappa_min: float
    kappa_max: float
    checks: tuple


def ordering_theorem_signs(p, E_probe, cfg=DEFAULT_CONFIG):
    """Sign checks linking the convexity index to the T-ordering at d = 3.

    Identity one compares sgn(kappa + 1) with sgn(1 - phi); identity two
    compares sgn(kappa - 2) with sgn(1 - 2 phi).  The kappa side is probed
    on 256 log-spaced radii inside the classically accessible region
    r < r_t; a mixed sign there makes the identity not applicable.
    """
    s = analyze_slice(p, E_probe)
    phi = phi_additive(p, E_probe, 3, cfg, _slice=s)
    r_t = s.r_t if math.isfinite(s.r_t) else 1e3 * s.r_m
    radii = np.geomspace(1e-3 * r_t, r_t, 256)
    kappas = np.asarray([float(p.kappa(r)) for r in radii])

    checks = []
    for name, offset, phi_side in (("kappa_plus_one", 1.0, 1.0 - phi),
                                   ("kappa_minus_two", -2.0, 1.0 - 2.0 * phi)):
        signs = {_sign(k + offset) for k in kappas}
        if len(signs) == 1:
            k_sign = signs.pop()
            verdict = "agree" if k_sign == _sign(phi_side) else "disagree"
        else:
            k_sign = None
            verdict = "not-applicable"
        checks.append(SignIdentityCheck(name=name, kappa_sign=k_sign,
                                        phi_sign=_sign(phi_side), verdict=verdict))
    return OrderingSignReport(potential=p.spec_string(), E=E_probe, phi=phi,
                              kappa_min=float(np.min(kappas)), kappa_max=float(np.max(kappas)),
                              checks=tuple(checks))


def _lambda_factor(lam):
    """(lam+1)ln(lam+1) + (lam-1)ln(lam-1) - 2 lam ln lam; positive by convexity."""
    if lam <= 1:
        raise ValueError("need lambda > 1")
    return ((lam + 1.0) * math.log(lam + 1.0) + (lam - 1.0) * math.log(lam - 1.0)
            - 2.0 * lam * math.log(lam))


@dataclass(frozen=True)
class ReggeCheck:
    lam: float
    second_difference: float
    lambda_factor: float
    lhs_sign: int
    rhs_sign: int
    verdict: str


@dataclass(frozen=True)
class ReggeSignReport:
    mu: float
    d: int
    chi1: float
    chi_inf: float
    checks: tuple


def regge_sign_check(mu, l_values, d=3):
    """Second-difference sign test of the non-linear quantum number for
    power-law wells: sgn((chi_inf - chi_1) * Lambda) must equal sgn(2 - mu).

    ``l_values`` may be non-integer for diagnostic sweeps; each needs
    lambda - 1 > 0.
    """
    from .transforms import chi_power_law_closed

    if not mu > -1:
        raise ValueError("sign test defined for mu > -1")
    c1 = chi_power_law_closed(mu, 1)
    c_inf = 1.0 / math.sqrt(mu + 2.0)
    rhs = _sign(2.0 - mu, tol=1e-12)
    checks = []
    for l in l_values:
        lam = l + 0.5 * (d - 2)
        if not lam - 1.0 > 0.0:
            raise ValueError(f"need lambda - 1 > 0, got lambda = {lam}")
        big_lambda = _lambda_factor(lam)
        # the amplitude drops out of the second difference; any A > lam+1 works
        a_ref = 2.0 * (lam + 1.0)
        f = lambda x: c1 * x + (c1 - c_inf) * x * math.log(x / a_ref)
        second = f(lam + 1.0) - 2.0 * f(lam) + f(lam - 1.0)
        direct = (c1 - c_inf) * big_lambda
        if abs(second - direct) > 1e-9 * max(1.0, abs(second)):
            raise TeffError("second-difference identity failed internally")
        lhs = _sign((c_inf - c1) * big_lambda, tol=1e-8)
        checks.append(ReggeCheck(lam=lam, second_difference=second,
                                 lambda_factor=big_lambda, lhs_sign=lhs, rhs_sign=rhs,
                                 verdict="agree" if lhs == rhs else "disagree"))
    return ReggeSignReport(mu=mu, d=d, chi1=c1, chi_inf=c_inf, checks=tuple(checks))


# --------------------------------------------------------------------------
# universal diagram
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DiagramLine:
    label: str
    n_r: int
    l: int
    points: tuple  # ((phi, T), ...)


@dataclass(frozen=True)
class DiagramCurve:
    label: str
    points: tuple  # ((phi, t_value, E), ...)
    notes: tuple = ()


@dataclass(frozen=True)
class DiagramCrossing:
    line_label: str
    curve_label: str
    phi: float
    t_value: float
    E: float


@dataclass(frozen=True)
class DiagramData:
    """Level lines T(phi), per-potential curves (phi(E), A chi_1), and the
    crossings that mark actual bound states."""

    d: int
    lines: tuple
    curves: tuple
    crossings: tuple


def _curve_point(p, E, d, cfg):
    s = analyze_slice(p, E)
    c1 = chi_d(p, E, 1.0, cfg, _slice=s)
    phi = phi_additive(p, E, d, cfg, _slice=s)
    return phi, c1 * s.A


def diagram_data(levels, phi_range, curve_specs, d=3, cfg=DEFAULT_CONFIG,
                 phi_samples=11):
    """Assemble the universal diagram.

    ``curve_specs`` is a sequence of (potential, energy grid) pairs; bad
    curve points are dropped with a note.  Crossings are located by sign
    change of (curve - line) over the energy grid and refined by
    bisection in E.
    """
    phi_lo, phi_hi = phi_range
    if not (0.0 < phi_lo < phi_hi <= 2.5):
        raise ValueError("phi range must satisfy 0 < lo < hi <= 2.5")
    phis = np.linspace(phi_lo, phi_hi, max(2, phi_samples))
    lines = tuple(
        DiagramLine(label=spectroscopic_label(lvl.n_r, lvl.l, d), n_r=lvl.n_r, l=lvl.l,
                    points=tuple((float(f), teff(lvl, float(f))) for f in phis))
        for lvl in levels)

    curves = []
    crossings = []
    for p, e_grid in curve_specs:
        label = p.spec_string()
        pts = []
        notes = []
        for E in e_grid:
            try:
                phi, t_val = _curve_point(p, E, d, cfg)
            except TeffError as exc:
                notes.append(f"E={E:g} skipped: {exc}")
                continue
            pts.append((phi, t_val, float(E)))
        curves.append(DiagramCurve(label=label, points=tuple(pts), notes=tuple(notes)))

        for lvl in levels:
            gap = []
            for phi, t_val, E in pts:
                gap.append((E, t_val - teff(lvl, phi)))
            for (e0, g0), (e1, g1) in zip(gap, gap[1:]):
                if g0 == 0.0 or g0 * g1 >= 0.0:
                    continue
                func = lambda E: (lambda pt: pt[1] - teff(lvl, pt[0]))(_curve_point(p, E, d, cfg))
                e_star = brentq(func, min(e0, e1), max(e0, e1), rtol=1e-10, maxiter=200)
                phi_star, t_star = _curve_point(p, e_star, d, cfg)
                crossings.append(DiagramCrossing(
                    line_label=spectroscopic_label(lvl.n_r, lvl.l, d),
                    curve_label=label, phi=phi_star, t_value=t_star, E=float(e_star)))
    return DiagramData(d=d, lines=lines, curves=tuple(curves), crossings=tuple(crossings))


def diagram_to_csv(dd):
    """CSV body with kind,label,x,y rows (4-decimal rounding; labels that
    carry commas, such as potential specs, are quoted)."""
    import csv
    import io

    buf = io.StringIO()
    buf.write("# universal level diagram; values rounded to 4 decimals\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("kind", "label", "x", "y"))
    for line in dd.lines:
        for phi, t in line.points:
            writer.writerow(("line", line.label, f"{phi:.4f}", f"{t:.4f}"))
    for curve in dd.curves:
        for phi, t, _E in curve.points:
            writer.writerow(("curve", curve.label, f"{phi:.4f}", f"{t:.4f}"))
    for x in dd.crossings:
        writer.writerow(("crossing", f"{x.line_label}|{x.curve_label}",
                         f"{x.phi:.4f}", f"{x.t_value:.4f}"))
    return buf.getvalue()


def diagram_to_json(dd):
    """JSON-serialisable dict (schema 1) with full-precision points."""
    return {
        "schema": 1,
        "d": dd.d,
        "lines": [{"label": li.label, "n_r": li.n_r, "l": li.l,
                   "points": [[p, t] for p, t in li.points]} for li in dd.lines],
        "curves": [{"label": c.label,
                    "points": [[p, t, e] for p, t, e in c.points],
                    "notes": list(c.notes)} for c in dd.curves],
        "crossings": [{"line": x.line_label, "curve": x.curve_label,
                       "phi": x.phi, "t": x.t_value, "energy": x.E}
                      for x in dd.crossings],
    }
