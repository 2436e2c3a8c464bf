"""Approximate bound-state energies from the effective-quantum-number
quantization condition.

The condition reads A(E) chi_1(E) = T, whose left side is the d = 1
state count N_1(E), a strictly increasing function of E.  The slope phi
inside T depends on E for screened and mixed wells, so the solve is an
outer damped fixed point on phi wrapped around an inner bracketed root
solve in E.  For pure power laws and the hard wall phi is E-independent
and the outer loop collapses to a single pass.
"""

from __future__ import annotations

from dataclasses import dataclass

from scipy.optimize import brentq

import numpy as np

from .errors import NoBoundState, NoConvergence
from .ordering import QuantumLevel, teff_nonlinear
from .potentials import HardWall, PowerLaw, ScreenedCoulomb, analyze_slice
from .quadrature import DEFAULT_CONFIG, action_I
from .transforms import chi_d, chi_infinity, phi_additive

__all__ = [
    "SpectrumEntry",
    "quantize_energy",
    "enumerate_bound_states",
    "ScalingReport",
    "power_law_scaling_check",
]


@dataclass(frozen=True)
class SpectrumEntry:
    """One solved level: the T actually used, the energy, and solve metadata."""

    n_r: int
    l: int
    d: int
    T: float
    E: float
    mode: str
    phi: float | None
    iterations: int
    residual: float


class _CountingN1:
    """N_1(E) = A(E) chi_1(E) with an evaluation counter."""

    def __init__(self, p, cfg):
        self.p = p
        self.cfg = cfg
        self.calls = 0

    def __call__(self, E):
        self.calls += 1
        s = analyze_slice(self.p, E)
        return action_I(self.p, E, 0.0, self.cfg, _slice=s)


def _energy_domain(p):
    """(floor, ceiling) of the search window; either may be None (open).

    Quarkonium-type wells are Coulomb-like at the origin and confining at
    infinity, so their spectrum spans the whole energy axis.
    """
    if isinstance(p, ScreenedCoulomb):
        return -10.0 * p.Z**2, 0.0
    if isinstance(p, PowerLaw):
        if p.mu > 0:
            return 0.0, None
        return None, 0.0
    if isinstance(p, HardWall):
        return 0.0, None
    return None, None


def _solve_inner(n1, T, p):
    """Bracketed solve of N_1(E) = T on the family's energy window."""
    floor, ceiling = _energy_domain(p)
    f = lambda E: n1(E) - T

    if ceiling is not None:
        # wells that end at the continuum threshold: capacity check at the top
        f_top = f(ceiling) if isinstance(p, ScreenedCoulomb) else None
        if f_top is not None and f_top < 0:
            raise NoBoundState(
                f"T = {T:g} exceeds the well capacity N1(0) = {f_top + T:g}")
        if isinstance(p, ScreenedCoulomb):
            lo = floor
            for _ in range(60):
                if f(lo) < 0:
                    break
                lo *= 8.0
            else:
                raise NoConvergence("cannot bracket below the deepest level")
            return brentq(f, lo, ceiling, rtol=1e-13, maxiter=200), None
        # power law with mu < 0: E in (-inf, 0)
        hi = -1e-12
        scale = abs(p.b) ** (2.0 / (2.0 + p.mu))
        hi = -1e-9 * scale
        for _ in range(200):
            if f(hi) > 0:
                break
            hi *= 0.25
            if abs(hi) < 1e-280:
                raise NoConvergence("cannot bracket the shallow side")
        lo = min(-scale, 4.0 * hi)
        for _ in range(200):
            if f(lo) < 0:
                break
            lo *= 4.0
        else:
            raise NoConvergence("cannot bracket the deep side")
        return brentq(f, lo, hi, rtol=1e-13, maxiter=200), None

    if floor is None:
        # wells spanning the whole axis (Coulomb core + confining tail)
        hi = 1.0
        for _ in range(200):
            if f(hi) > 0:
                break
            hi *= 2.0
        else:
            raise NoConvergence("cannot bracket on the confining side")
        lo = -1.0
        for _ in range(200):
            if f(lo) < 0:
                break
            lo *= 4.0
        else:
            raise NoConvergence("cannot bracket on the deep side")
        return brentq(f, lo, hi, rtol=1e-13, maxiter=200), None

    # confining wells bounded below: E in (floor, inf)
    bottom = floor
    span = max(abs(bottom), 1.0)
    hi = bottom + span
    for _ in range(200):
        if f(hi) > 0:
            break
        span *= 2.0
        hi = bottom + span
    else:
        raise NoConvergence("cannot bracket above the well bottom")
    lo = bottom + (hi - bottom) * 0.5
    for _ in range(200):
        if f(lo) < 0:
            break
        lo = bottom + (lo - bottom) * 0.25
    else:
        raise NoConvergence("cannot bracket near the well bottom")
    return brentq(f, lo, hi, rtol=1e-13, maxiter=200), None


_DAMPING = 0.5
_OUTER_TOL = 1e-9
_OUTER_MAX = 50


def quantize_energy(p, level, mode="linear", cfg=DEFAULT_CONFIG):
    """Invert the quantization condition for one level.

    ``mode="linear"`` solves N_1(E) = nu + phi(E) lambda; ``"nonlinear"``
    replaces the right side with the Mellin form built from
    (chi_1, chi_inf, A) at the current energy iterate.
    """
    if mode not in ("linear", "nonlinear"):
        raise ValueError(f"unknown mode {mode!r}")
    n1 = _CountingN1(p, cfg)
    nu, lam = level.nu, level.lam
    phi_independent = isinstance(p, (PowerLaw, HardWall)) or lam == 0.0

    phi = phi_additive(p, p.reference_energy(), level.d, cfg)
    iterations = 0
    E = None
    if phi_independent:
        # power laws and the hard wall have an E-independent slope, and
        # lam = 0 decouples T from the slope entirely
        iterations = 1
        E, _ = _solve_inner(n1, nu + phi * lam, p)
        if lam == 0.0:
            phi = phi_additive(p, E, level.d, cfg)
    else:
        # fixed point on phi; plain 0.5-damped iteration contracts too
        # slowly for near-threshold levels (the feedback is positive), so
        # a secant step on the residual takes over once two iterates exist
        phi_prev = r_prev = None
        for iterations in range(1, _OUTER_MAX + 1):
            E, _ = _solve_inner(n1, nu + phi * lam, p)
            r = phi_additive(p, E, level.d, cfg) - phi
            if abs(r) <= _OUTER_TOL * max(1.0, abs(phi)):
                break
            step = _DAMPING * r
            if phi_prev is not None and r != r_prev:
                secant = -r * (phi - phi_prev) / (r - r_prev)
                if abs(secant) <= 0.25 * max(1.0, abs(phi)):
                    step = secant
            phi_prev, r_prev = phi, r
            phi += step
        else:
            raise NoConvergence(
                f"phi fixed point did not settle for level {level}; last phi = {phi:g}")
        E, _ = _solve_inner(n1, nu + phi * lam, p)

    if mode == "linear":
        T = nu + phi * lam
        residual = abs(n1(E) - T)
        return SpectrumEntry(n_r=level.n_r, l=level.l, d=level.d, T=T, E=E,
                             mode=mode, phi=phi, iterations=iterations,
                             residual=residual)

    # non-linear mode: seed from the linear solution, then fixed point on T
    T = None
    for it in range(1, _OUTER_MAX + 1):
        s = analyze_slice(p, E)
        c1 = chi_d(p, E, 1.0, cfg, _slice=s)
        c_inf = chi_infinity(p, E, cfg, _slice=s)
        t_here = teff_nonlinear(level, c1, c_inf, s.A)
        if T is None:
            T = t_here
        else:
            T = T + _DAMPING * (t_here - T)
        E_new, _ = _solve_inner(n1, T, p)
        if abs(t_here - T) <= _OUTER_TOL * max(1.0, abs(T)) and \
                abs(E_new - E) <= 1e-10 * max(1.0, abs(E)):
            E = E_new
            iterations += it
            break
        E = E_new
    else:
        raise NoConvergence(f"non-linear quantization did not settle for {level}")
    residual = abs(n1(E) - T)
    return SpectrumEntry(n_r=level.n_r, l=level.l, d=level.d, T=T, E=E,
                         mode="nonlinear", phi=None, iterations=iterations,
                         residual=residual)


def enumerate_bound_states(p, e_max, d, l_max, mode="linear", cfg=DEFAULT_CONFIG):
    """All levels with E <= e_max for l = 0..l_max, sorted by energy.

    For each l the radial index is incremented until the well runs out of
    capacity or the energy cap is passed (T grows with n_r, so both
    stopping rules are monotone).
    """
    found = []
    for l in range(l_max + 1):
        for n_r in range(200):
            try:
                entry = quantize_energy(p, QuantumLevel(n_r, l, d), mode=mode, cfg=cfg)
            except NoBoundState:
                break
            if entry.E > e_max:
                break
            found.append(entry)
        else:
            raise NoConvergence("more than 200 radial levels requested in one channel")
    return sorted(found, key=lambda e: e.E)


@dataclass(frozen=True)
class ScalingReport:
    """Power-law consistency: log E vs log T slope and l-convexity sign."""

    slope: float
    expected_slope: float
    slope_ok: bool
    convexity_signs: tuple
    expected_sign: int
    convexity_ok: bool


def power_law_scaling_check(b, mu, d, levels, cfg=DEFAULT_CONFIG, slope_tol=1e-3):
    """Fit E proportional to T^(2 mu/(mu+2)) over the given levels and check
    the sign of the second difference of E(0, l) against sgn(mu - 2)."""
    if not mu > 0:
        raise ValueError("scaling check applies to mu > 0")
    p = PowerLaw(b=b, mu=mu)
    entries = [quantize_energy(p, lvl, cfg=cfg) for lvl in levels]
    log_t = np.log([e.T for e in entries])
    log_e = np.log([e.E for e in entries])
    slope = float(np.polyfit(log_t, log_e, 1)[0])
    expected = 2.0 * mu / (mu + 2.0)

    nodeless = sorted((e for e in entries if e.n_r == 0), key=lambda e: e.l)
    signs = []
    for a, b_, c in zip(nodeless, nodeless[1:], nodeless[2:]):
        if b_.l - a.l == 1 and c.l - b_.l == 1:
            second = c.E - 2.0 * b_.E + a.E
            signs.append(1 if second > 0 else (-1 if second < 0 else 0))
    expected_sign = 1 if mu > 2 else (-1 if mu < 2 else 0)
    convexity_ok = all(s == expected_sign for s in signs) if signs else True
    return ScalingReport(slope=slope, expected_slope=expected,
                         slope_ok=abs(slope - expected) <= slope_tol,
                         convexity_signs=tuple(signs), expected_sign=expected_sign,
                         convexity_ok=convexity_ok)
