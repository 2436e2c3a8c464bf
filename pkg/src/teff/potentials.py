"""Central potential families and the energy-dependent geometry of the
effective radial function.

Units are natural (hbar = m = 1) throughout.  Every family provides the
potential V(r), its first two radial derivatives, and the logarithmic
convexity index

    kappa(r) = 1 + r V''(r) / V'(r),

which is constant (equal to the exponent) for pure power laws.  The
central derived object is

    W(E, rho) = 2 e^(2 rho) (E - V(e^rho)),     rho = ln r,

whose single maximum fixes the amplitude A = sqrt(max W) and its
location r_m.  ``analyze_slice`` packages that geometry for one energy.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline, PchipInterpolator
from scipy.optimize import brentq, minimize_scalar

from .errors import MultipleMaxima, NoClassicalRegion, NumericsError, PotentialError

__all__ = [
    "Potential",
    "PowerLaw",
    "ScreenedCoulomb",
    "Quarkonium",
    "HardWall",
    "Tabulated",
    "EnergySlice",
    "parse_potential",
    "eval_potential",
    "kappa",
    "effective_W",
    "analyze_slice",
    "tf_screening",
    "tf_initial_slope",
]


# --------------------------------------------------------------------------
# screening functions g(r) for -Z g(r) / r wells
# --------------------------------------------------------------------------


class Screening:
    """Interface for screening profiles: g(0) = 1, g > 0, dg/dr < 0."""

    kind = "abstract"

    def g(self, r):
        raise NotImplementedError

    def dg(self, r):
        raise NotImplementedError

    def d2g(self, r):
        raise NotImplementedError

    def convexity_term(self, r):
        """g'' r^2 / (g' r - g); overridable where the generic ratio underflows."""
        r = np.asarray(r, dtype=float)
        return self.d2g(r) * r**2 / (self.dg(r) * r - self.g(r))


class ExponentialScreening(Screening):
    """g(r) = exp(-r), the Yukawa-type profile."""

    kind = "exp"

    def g(self, r):
        return np.exp(-np.asarray(r, dtype=float))

    def dg(self, r):
        return -np.exp(-np.asarray(r, dtype=float))

    def d2g(self, r):
        return np.exp(-np.asarray(r, dtype=float))

    def convexity_term(self, r):
        # the exponential cancels, avoiding 0/0 underflow at large radii
        r = np.asarray(r, dtype=float)
        return -r * r / (1.0 + r)


class InverseSquareScreening(Screening):
    """g(r) = (1 + r)^-2."""

    kind = "inv2"

    def g(self, r):
        return (1.0 + np.asarray(r, dtype=float)) ** -2.0

    def dg(self, r):
        return -2.0 * (1.0 + np.asarray(r, dtype=float)) ** -3.0

    def d2g(self, r):
        return 6.0 * (1.0 + np.asarray(r, dtype=float)) ** -4.0


class InversePow25Screening(Screening):
    """g(r) = (1 + r)^-2.5, a good model of self-consistent atomic fields."""

    kind = "inv25"

    def g(self, r):
        return (1.0 + np.asarray(r, dtype=float)) ** -2.5

    def dg(self, r):
        return -2.5 * (1.0 + np.asarray(r, dtype=float)) ** -3.5

    def d2g(self, r):
        return 8.75 * (1.0 + np.asarray(r, dtype=float)) ** -4.5


class TabulatedScreening(Screening):
    """Screening profile interpolated from a table of (r, g) samples."""

    kind = "table"

    def __init__(self, r, g):
        r = np.asarray(r, dtype=float)
        g = np.asarray(g, dtype=float)
        if r.ndim != 1 or r.size < 8 or np.any(np.diff(r) <= 0):
            raise PotentialError("screening table needs >= 8 strictly increasing radii")
        if np.any(g <= 0) or np.any(np.diff(g) >= 0):
            raise PotentialError("screening table must be positive and strictly decreasing")
        self._interp = PchipInterpolator(r, g, extrapolate=False)
        self.r_min = float(r[0])
        self.r_max = float(r[-1])

    def _check(self, r):
        # one-ulp overshoot from exp(log r) round trips is clipped in
        r = np.asarray(r, dtype=float)
        if np.any(r < self.r_min * (1.0 - 1e-12)) or np.any(r > self.r_max * (1.0 + 1e-12)):
            raise PotentialError("radius outside the tabulated screening range")
        return np.clip(r, self.r_min, self.r_max)

    def g(self, r):
        return self._interp(self._check(r))

    def dg(self, r):
        r = self._check(r)
        h = 1e-5 * np.maximum(r, 1e-12)
        lo = np.maximum(r - h, self.r_min)
        hi = np.minimum(r + h, self.r_max)
        return (self._interp(hi) - self._interp(lo)) / (hi - lo)

    def d2g(self, r):
        r = self._check(r)
        h = 1e-4 * np.maximum(r, 1e-12)
        rc = np.clip(r, self.r_min + h, self.r_max - h)
        return (self._interp(rc + h) - 2.0 * self._interp(rc) + self._interp(rc - h)) / h**2


# --------------------------------------------------------------------------
# Thomas-Fermi screening: Phi'' = Phi^(3/2)/sqrt(x), Phi(0)=1, Phi(inf)=0
# --------------------------------------------------------------------------

_TF_X0 = 1e-6          # series is used below this point
_TF_X_TABLE = 1.0e4    # dense table extends to here; 144/x^3 beyond
_TF_LOCK = threading.Lock()
_TF_SOLUTION = None


def _tf_series(x, slope):
    """Small-x expansion of the screening function and its derivative."""
    x = np.asarray(x, dtype=float)
    sx = np.sqrt(x)
    phi = (1.0 + slope * x + (4.0 / 3.0) * x * sx + 0.4 * slope * x**2 * sx
           + x**3 / 3.0)
    dphi = (slope + 2.0 * sx + slope * x * sx + x**2)
    return phi, dphi


def _tf_rhs(x, y):
    phi = max(y[0], 0.0)
    return (y[1], phi * math.sqrt(phi) / math.sqrt(x))


def _tf_classify(x_start, y_start, x_classify):
    """Integrate one trajectory; -1 if it crosses zero (slope too steep),
    +1 if the slope turns up while positive (too shallow).

    A separatrix-hugging trajectory may reach the horizon without firing
    either event; the horizon is then pushed out (the off-manifold error
    grows like a power of x, so a verdict always arrives) up to a cap.
    """

    def hit_zero(x, y):
        return y[0]

    hit_zero.terminal = True
    hit_zero.direction = -1

    def slope_up(x, y):
        return y[1]

    slope_up.terminal = True
    slope_up.direction = 1

    # classification only needs the event side, not tight trajectories;
    # the final dense passes are integrated separately at 1e-11
    for _ in range(4):
        sol = solve_ivp(_tf_rhs, (x_start, x_classify), y_start, method="DOP853",
                        rtol=1e-11, atol=1e-30, events=(hit_zero, slope_up),
                        dense_output=False)
        if sol.t_events[0].size:
            return -1
        if sol.t_events[1].size:
            return 1
        x_classify *= 4.0
    return 0


def _tf_bisect(x_start, phi_start, p_lo, p_hi, x_classify):
    """Bisect on the starting slope until the bracket collapses to
    machine width.  p_lo crosses zero, p_hi turns up."""
    for _ in range(90):
        mid = 0.5 * (p_lo + p_hi)
        if mid == p_lo or mid == p_hi or abs(p_hi - p_lo) < 1e-16 * abs(mid):
            break
        if x_start <= _TF_X0:
            y0 = [float(v) for v in _tf_series(x_start, mid)]
            y0 = [y0[0], y0[1]]
        else:
            y0 = [phi_start, mid]
        out = _tf_classify(x_start, y0, x_classify)
        if out < 0:
            p_lo = mid
        elif out > 0:
            p_hi = mid
        else:
            # even the extended horizon cannot separate this trajectory
            # from the separatrix; the bracket is already at noise level
            p_lo, p_hi = mid, mid
            break
    return 0.5 * (p_lo + p_hi)


class _TFSolution:
    """Dense monotone table of the screening function, solved by shooting."""

    def __init__(self):
        # stage 1: bisection on the initial slope, classified at x = 50
        slope = _tf_bisect(_TF_X0, 1.0, -2.0, -1.0, 50.0)
        self.slope = slope

        # staged continuation: restarting from a frozen interior point
        # resets the double-precision amplification of the unstable mode,
        # which pure single-shot shooting cannot push past x ~ 50
        stages = [(_TF_X0, 10.0, 50.0), (10.0, 100.0, 500.0),
                  (100.0, 1000.0, 5000.0), (1000.0, _TF_X_TABLE, 4.0 * _TF_X_TABLE)]
        xs_all, phi_all, dphi_all = [], [], []
        y = list(_tf_series(_TF_X0, slope))
        y = [float(y[0]), float(y[1])]
        x_from = _TF_X0
        for k, (x_anchor, x_use, x_classify) in enumerate(stages):
            if k > 0:
                p = y[1]
                y[1] = _tf_bisect(x_anchor, y[0], 1.5 * p, 0.5 * p, x_classify)
            decades = math.log10(x_use / x_from)
            t_eval = np.geomspace(x_from, x_use, int(2600 * max(1.0, decades)))
            sol = solve_ivp(_tf_rhs, (x_from, x_use), y, method="DOP853",
                            rtol=1e-12, atol=1e-30, t_eval=t_eval)
            xs_all.append(sol.t[:-1] if k + 1 < len(stages) else sol.t)
            phi_all.append(sol.y[0][:-1] if k + 1 < len(stages) else sol.y[0])
            dphi_all.append(sol.y[1][:-1] if k + 1 < len(stages) else sol.y[1])
            y = [float(sol.y[0][-1]), float(sol.y[1][-1])]
            x_from = x_use

        xs = np.concatenate(xs_all)
        phi = np.concatenate(phi_all)
        dphi = np.concatenate(dphi_all)
        keep = phi > 0
        xs, phi, dphi = xs[keep], phi[keep], dphi[keep]
        if np.any(np.diff(phi) >= 0):
            raise NumericsError("screening table is not strictly decreasing")
        # C2 splines keep finite-difference second derivatives of W clean;
        # monotonicity is asserted on a dense probe of the fitted curve
        self._logphi = CubicSpline(np.log(xs), np.log(phi), extrapolate=False)
        self._logmdphi = CubicSpline(np.log(xs), np.log(-dphi), extrapolate=False)
        probe = np.linspace(math.log(xs[0]), math.log(xs[-1]), 20001)
        if np.any(np.diff(self._logphi(probe)) >= 0):
            raise NumericsError("interpolated screening table is not monotone")
        self.x_min = float(xs[0])
        self.x_max = float(xs[-1])
        # inverse-cube asymptote, anchored continuously at the table edge
        # (the pure 144/x^3 form overshoots by ~1% there)
        self.tail_coeff = float(phi[-1]) * self.x_max**3

    def phi(self, x):
        x = np.asarray(x, dtype=float)
        out = np.empty_like(x)
        tiny = x < self.x_min
        big = x > self.x_max
        mid = ~(tiny | big)
        if np.any(tiny):
            out[tiny] = _tf_series(x[tiny], self.slope)[0]
        if np.any(mid):
            out[mid] = np.exp(self._logphi(np.log(x[mid])))
        if np.any(big):
            out[big] = self.tail_coeff / x[big] ** 3
        return out

    def dphi(self, x):
        x = np.asarray(x, dtype=float)
        out = np.empty_like(x)
        tiny = x < self.x_min
        big = x > self.x_max
        mid = ~(tiny | big)
        if np.any(tiny):
            out[tiny] = _tf_series(x[tiny], self.slope)[1]
        if np.any(mid):
            out[mid] = -np.exp(self._logmdphi(np.log(x[mid])))
        if np.any(big):
            out[big] = -3.0 * self.tail_coeff / x[big] ** 4
        return out


def _tf_solution():
    global _TF_SOLUTION
    with _TF_LOCK:
        if _TF_SOLUTION is None:
            _TF_SOLUTION = _TFSolution()
        return _TF_SOLUTION


def tf_screening(x):
    """Thomas-Fermi screening function at scaled radius x >= 0."""
    scalar = np.isscalar(x)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x < 0):
        raise PotentialError("scaled radius must be >= 0")
    out = np.where(x == 0.0, 1.0, _tf_solution().phi(np.maximum(x, 1e-300)))
    return float(out[0]) if scalar else out


def tf_initial_slope():
    """Initial slope of the screening function at the origin."""
    return _tf_solution().slope


class ThomasFermiScreening(Screening):
    """g(r) = Phi(r / b) with the standard length scale b ~ 0.8853 Z^(-1/3)."""

    kind = "tf"

    def __init__(self, Z):
        self.b = 0.5 * (3.0 * math.pi / 4.0) ** (2.0 / 3.0) * Z ** (-1.0 / 3.0)

    def g(self, r):
        return _tf_solution().phi(np.asarray(r, dtype=float) / self.b)

    def dg(self, r):
        return _tf_solution().dphi(np.asarray(r, dtype=float) / self.b) / self.b

    def d2g(self, r):
        # second derivative straight from the defining equation
        x = np.asarray(r, dtype=float) / self.b
        phi = _tf_solution().phi(x)
        return phi * np.sqrt(phi / x) / self.b**2


_SCREENINGS = {
    "exp": ExponentialScreening,
    "inv2": InverseSquareScreening,
    "inv25": InversePow25Screening,
    "tf": ThomasFermiScreening,
}


# --------------------------------------------------------------------------
# potential families
# --------------------------------------------------------------------------


class Potential:
    """Base class; concrete families implement V, dV, d2V (vectorised)."""

    family = "abstract"

    def V(self, r):
        raise NotImplementedError

    def dV(self, r):
        raise NotImplementedError

    def d2V(self, r):
        raise NotImplementedError

    def kappa(self, r):
        """Logarithmic convexity index 1 + r V''/V'."""
        dv = self.dV(r)
        if np.any(np.asarray(dv) == 0):
            raise PotentialError("kappa undefined where V'(r) = 0")
        return 1.0 + np.asarray(r, dtype=float) * self.d2V(r) / dv

    def W(self, E, rho):
        """Effective radial function 2 r^2 (E - V(r)) at rho = ln r."""
        r = np.exp(np.asarray(rho, dtype=float))
        return 2.0 * r * r * (E - self.V(r))

    def asymptotic_value(self):
        """sup of V at large radius (may be +inf for confining wells)."""
        raise NotImplementedError

    def reference_energy(self):
        """A representative energy at which the well certainly has states."""
        raise NotImplementedError

    def domain(self):
        """(r_min, r_max) where the potential is defined; (0, inf) unless
        interpolated from a finite table."""
        return 0.0, math.inf

    def spec_string(self):
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.spec_string()!r})"


@dataclass(frozen=True)
class PowerLaw(Potential):
    """V(r) = b r^mu with mu > -2 and b mu > 0 (attractive well)."""

    b: float
    mu: float
    family = "power"

    def __post_init__(self):
        if not self.mu > -2.0:
            raise PotentialError(f"mu must be > -2, got {self.mu}")
        if not self.b * self.mu > 0.0:
            raise PotentialError(f"b*mu must be > 0 for an attractive well, got b={self.b}, mu={self.mu}")

    def V(self, r):
        return self.b * np.asarray(r, dtype=float) ** self.mu

    def dV(self, r):
        return self.b * self.mu * np.asarray(r, dtype=float) ** (self.mu - 1.0)

    def d2V(self, r):
        return self.b * self.mu * (self.mu - 1.0) * np.asarray(r, dtype=float) ** (self.mu - 2.0)

    def kappa(self, r):
        r = np.asarray(r, dtype=float)
        return self.mu + 0.0 * r if r.ndim else float(self.mu)

    def asymptotic_value(self):
        return math.inf if self.mu > 0 else 0.0

    def reference_energy(self):
        # r_t = e^mu for mu -> 0 keeps the turning point at sane radii
        return self.b * math.exp(self.mu) if self.mu > 0 else 0.5 * self.b

    def spec_string(self):
        return f"power:b={self.b:g},mu={self.mu:g}"


@dataclass(frozen=True)
class ScreenedCoulomb(Potential):
    """V(r) = -Z g(r) / r with g(0) = 1, g > 0 and g decreasing."""

    Z: float
    screening: Screening
    family = "screened"

    def __post_init__(self):
        if not self.Z > 0:
            raise PotentialError(f"Z must be > 0, got {self.Z}")

    def V(self, r):
        r = np.asarray(r, dtype=float)
        return -self.Z * self.screening.g(r) / r

    def dV(self, r):
        r = np.asarray(r, dtype=float)
        g = self.screening.g(r)
        dg = self.screening.dg(r)
        return self.Z * (g - r * dg) / r**2

    def d2V(self, r):
        r = np.asarray(r, dtype=float)
        g = self.screening.g(r)
        dg = self.screening.dg(r)
        d2g = self.screening.d2g(r)
        return -self.Z * (d2g / r - 2.0 * (r * dg - g) / r**3)

    def kappa(self, r):
        r = np.asarray(r, dtype=float)
        return -1.0 + self.screening.convexity_term(r)

    def asymptotic_value(self):
        return 0.0

    def reference_energy(self):
        return 0.0

    def domain(self):
        if isinstance(self.screening, TabulatedScreening):
            return self.screening.r_min, self.screening.r_max
        return 0.0, math.inf

    def spec_string(self):
        return f"screened:kind={self.screening.kind},Z={self.Z:g}"


@dataclass(frozen=True)
class Quarkonium(Potential):
    """V(r) = B (-alpha / r + (1 - alpha) r^delta)."""

    alpha: float
    delta: float
    B: float
    family = "quark"

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise PotentialError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not self.delta > 0.0:
            raise PotentialError(f"delta must be > 0, got {self.delta}")
        if not self.B > 0.0:
            raise PotentialError(f"B must be > 0, got {self.B}")

    def V(self, r):
        r = np.asarray(r, dtype=float)
        return self.B * (-self.alpha / r + (1.0 - self.alpha) * r**self.delta)

    def dV(self, r):
        r = np.asarray(r, dtype=float)
        return self.B * (self.alpha / r**2 + (1.0 - self.alpha) * self.delta * r ** (self.delta - 1.0))

    def d2V(self, r):
        r = np.asarray(r, dtype=float)
        return self.B * (-2.0 * self.alpha / r**3
                         + (1.0 - self.alpha) * self.delta * (self.delta - 1.0) * r ** (self.delta - 2.0))

    def kappa(self, r):
        # (-1 + Q delta^2) / (1 + Q delta), Q = (1-alpha)/alpha * r^(delta+1);
        # runs from -1 at the origin to delta at infinity
        r = np.asarray(r, dtype=float)
        q = (1.0 - self.alpha) / self.alpha * r ** (self.delta + 1.0)
        return (-1.0 + q * self.delta**2) / (1.0 + q * self.delta)

    def asymptotic_value(self):
        return math.inf

    def reference_energy(self):
        return 0.0

    def spec_string(self):
        return f"quark:alpha={self.alpha:g},delta={self.delta:g},B={self.B:g}"


@dataclass(frozen=True)
class HardWall(Potential):
    """V = 0 for r < R with an impenetrable wall at R."""

    R: float
    family = "wall"

    def __post_init__(self):
        if not self.R > 0:
            raise PotentialError(f"R must be > 0, got {self.R}")

    def V(self, r):
        r = np.asarray(r, dtype=float)
        out = np.where(r <= self.R, 0.0, np.inf)
        return float(out) if out.ndim == 0 else out

    def dV(self, r):
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        return float(out) if out.ndim == 0 else out

    def d2V(self, r):
        return self.dV(r)

    def kappa(self, r):
        raise PotentialError("kappa undefined for a hard wall (V' = 0 inside)")

    def asymptotic_value(self):
        return math.inf

    def reference_energy(self):
        return 1.0 / self.R**2

    def spec_string(self):
        return f"wall:R={self.R:g}"


class Tabulated(Potential):
    """Potential interpolated from an ascending (r, V) table.

    Monotone cubic interpolation for V; first and second derivatives by
    centered differences of the interpolant, which preserves the sign
    structure of the convexity index.
    """

    family = "table"

    def __init__(self, r, v, source="<memory>"):
        r = np.asarray(r, dtype=float)
        v = np.asarray(v, dtype=float)
        if r.ndim != 1 or r.size < 8:
            raise PotentialError("tabulated potential needs at least 8 points")
        if np.any(np.diff(r) <= 0):
            raise PotentialError("tabulated radii must be strictly increasing")
        if r[0] <= 0:
            raise PotentialError("tabulated radii must be positive")
        self.r_min = float(r[0])
        self.r_max = float(r[-1])
        self._v_last = float(v[-1])
        self._interp = PchipInterpolator(r, v, extrapolate=False)
        self.source = source

    def _check(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r < self.r_min * (1.0 - 1e-12)) or np.any(r > self.r_max * (1.0 + 1e-12)):
            raise PotentialError(
                f"radius outside tabulated range [{self.r_min:g}, {self.r_max:g}]")
        return np.clip(r, self.r_min, self.r_max)

    def V(self, r):
        return self._interp(self._check(r))

    def dV(self, r):
        r = self._check(r)
        h = 1e-5 * np.maximum(np.abs(r), self.r_min)
        lo = np.maximum(r - h, self.r_min)
        hi = np.minimum(r + h, self.r_max)
        return (self._interp(hi) - self._interp(lo)) / (hi - lo)

    def d2V(self, r):
        r = self._check(r)
        h = 1e-3 * np.maximum(np.abs(r), self.r_min)
        rc = np.clip(r, self.r_min + h, self.r_max - h)
        return (self._interp(rc + h) - 2.0 * self._interp(rc) + self._interp(rc - h)) / h**2

    def asymptotic_value(self):
        return self._v_last

    def reference_energy(self):
        vals = self._interp(np.geomspace(self.r_min, self.r_max, 64))
        return 0.5 * float(np.min(vals)) if np.min(vals) < 0 else 2.0 * float(np.max(vals))

    def domain(self):
        return self.r_min, self.r_max

    def spec_string(self):
        return f"table:path={self.source}"


def load_table(path):
    """Read a two-column whitespace table (r, V); '#' starts a comment."""
    try:
        data = np.loadtxt(path, comments="#", ndmin=2)
    except OSError as exc:
        raise PotentialError(f"cannot read table file: {exc}") from exc
    except ValueError as exc:
        raise PotentialError(f"malformed table file {path}: {exc}") from exc
    if data.shape[1] != 2:
        raise PotentialError(f"table file {path} must have exactly two columns")
    return Tabulated(data[:, 0], data[:, 1], source=str(path))


# --------------------------------------------------------------------------
# mini-language parser
# --------------------------------------------------------------------------

_FAMILY_KEYS = {
    "power": {"b", "mu"},
    "screened": {"kind", "Z"},
    "quark": {"alpha", "delta", "B"},
    "wall": {"R"},
    "table": {"path"},
}


def parse_potential(spec):
    """Parse a potential from the mini-language, e.g. ``power:b=1,mu=2``.

    Forms: ``power:b=<f>,mu=<f>`` | ``screened:kind=exp|inv2|inv25|tf,Z=<f>``
    | ``quark:alpha=<f>,delta=<f>,B=<f>`` | ``wall:R=<f>`` | ``table:path=<file>``.
    """
    if not isinstance(spec, str) or ":" not in spec:
        raise PotentialError(f"malformed potential spec {spec!r}: expected 'family:key=value,...'")
    family, _, rest = spec.partition(":")
    family = family.strip().lower()
    if family not in _FAMILY_KEYS:
        raise PotentialError(f"unknown potential family {family!r}")
    kv = {}
    for item in rest.split(","):
        if "=" not in item:
            raise PotentialError(f"malformed parameter {item!r} in {spec!r}")
        key, _, value = item.partition("=")
        kv[key.strip()] = value.strip()
    expected = _FAMILY_KEYS[family]
    if set(kv) != expected:
        raise PotentialError(
            f"{family} potential takes exactly the keys {sorted(expected)}, got {sorted(kv)}")

    def fval(key):
        try:
            return float(kv[key])
        except ValueError as exc:
            raise PotentialError(f"parameter {key}={kv[key]!r} is not a number") from exc

    if family == "power":
        return PowerLaw(b=fval("b"), mu=fval("mu"))
    if family == "screened":
        kind = kv["kind"].lower()
        if kind not in _SCREENINGS:
            raise PotentialError(f"unknown screening kind {kind!r}; use exp|inv2|inv25|tf")
        Z = fval("Z")
        if not Z > 0:
            raise PotentialError(f"Z must be > 0, got {Z}")
        screening = _SCREENINGS[kind](Z) if kind == "tf" else _SCREENINGS[kind]()
        return ScreenedCoulomb(Z=Z, screening=screening)
    if family == "quark":
        return Quarkonium(alpha=fval("alpha"), delta=fval("delta"), B=fval("B"))
    if family == "wall":
        return HardWall(R=fval("R"))
    return load_table(kv["path"])


# --------------------------------------------------------------------------
# level operations
# --------------------------------------------------------------------------


def eval_potential(p, r):
    """(V(r), V'(r)) with domain checks."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr <= 0):
        raise PotentialError("radius must be > 0")
    return p.V(r), p.dV(r)


def kappa(p, r):
    """Convexity index 1 + r V''/V' of a potential at radius r."""
    return p.kappa(r)


def effective_W(p, E, rho):
    """W(E, rho) = 2 r^2 (E - V(r)) with r = e^rho; negative in forbidden regions."""
    return p.W(E, rho)


@dataclass(frozen=True)
class EnergySlice:
    """All local geometry of W at one energy.

    ``r_t`` is the outer classical turning point of V (``inf`` when the
    energy sits at the continuum threshold of a decaying tail), ``r_m``
    the location of the maximum of W, ``A`` the square root of that
    maximum, ``kappa_at_rm`` the convexity index there (``inf`` for the
    boundary maximum of a hard wall).
    """

    E: float
    r_t: float
    r_m: float
    A: float
    kappa_at_rm: float
    boundary_max: bool = False

    def __post_init__(self):
        if not self.A > 0:
            raise NumericsError("slice amplitude must be positive")
        if (not self.boundary_max and math.isfinite(self.r_t)
                and not self.r_m < self.r_t * (1.0 + 1e-9)):
            raise NumericsError("W maximum must not lie beyond the turning point")


_GRID_POINTS = 4097
_MAX_DECADES = 40.0


def _slice_window(p):
    r_lo, r_hi = p.domain()
    if r_lo > 0.0 and math.isfinite(r_hi):
        return math.log(r_lo), math.log(r_hi), False
    return -9.0 * math.log(10.0), 9.0 * math.log(10.0), True


def _locate_maximum(p, E):
    """Coarse log-grid bracket of the maximum of W, expanding as needed."""
    lo, hi, expandable = _slice_window(p)
    limit = _MAX_DECADES * math.log(10.0)
    while True:
        rho = np.linspace(lo, hi, _GRID_POINTS)
        with np.errstate(over="ignore", invalid="ignore"):
            w = np.asarray(p.W(E, rho))
        w = np.where(np.isnan(w), -np.inf, w)
        if not np.any(w > 0):
            if expandable and hi < limit:
                width = hi - lo
                lo = max(lo - 0.5 * width, -limit)
                hi = min(hi + 0.5 * width, limit)
                continue
            raise NoClassicalRegion(
                f"W(E={E:g}, rho) <= 0 everywhere; no classically allowed region")
        i = int(np.argmax(w))
        if expandable and i < 3 and lo > -limit:
            lo -= 20.0
            continue
        if expandable and i > _GRID_POINTS - 4 and hi < limit:
            hi += 20.0
            continue
        if i < 1 or i > _GRID_POINTS - 2:
            raise NoClassicalRegion(
                "no interior maximum of W within the admissible radius range "
                "(energy at or above the continuum threshold for this family)")
        return rho, w, i


def _reject_multiple_maxima(rho, w, i_best):
    wmax = w[i_best]
    interior = np.flatnonzero((w[1:-1] > w[:-2]) & (w[1:-1] >= w[2:])) + 1
    significant = [j for j in interior if w[j] > 1e-8 * wmax]
    for j in significant:
        if j == i_best:
            continue
        a, b = sorted((j, i_best))
        valley = np.min(w[a:b + 1])
        floor = min(w[j], wmax)
        if valley < floor * (1.0 - 1e-9):
            raise MultipleMaxima(
                f"two separated maxima of W near r={math.exp(rho[j]):.4g} "
                f"and r={math.exp(rho[i_best]):.4g}")


def _turning_point_of_v(p, E, r_m):
    """Outer root of V(r) = E, or inf when E reaches the asymptotic value."""
    v_inf = p.asymptotic_value()
    if math.isfinite(v_inf) and E >= v_inf:
        return math.inf
    r_hi = r_m
    f = lambda r: float(p.V(r)) - E
    upper = p.domain()[1]
    upper = upper if math.isfinite(upper) else None
    for _ in range(400):
        r_next = min(r_hi * 2.0, upper) if upper else r_hi * 2.0
        if f(r_next) > 0:
            return brentq(f, r_hi, r_next, rtol=1e-13, maxiter=200)
        if upper and r_next >= upper:
            raise PotentialError("turning point lies beyond the tabulated range")
        r_hi = r_next
    raise NumericsError("failed to bracket the outer turning point of V")


def analyze_slice(p, E):
    """Locate the maximum of W and the classical turning point at energy E.

    The maximum is bracketed on a log grid and polished by golden-section
    search; hard walls are handled as boundary maxima.
    """
    if isinstance(p, HardWall):
        if E <= 0:
            raise NoClassicalRegion("a hard-wall well has no states at E <= 0")
        a = math.sqrt(2.0 * E) * p.R
        return EnergySlice(E=E, r_t=p.R, r_m=p.R, A=a,
                           kappa_at_rm=math.inf, boundary_max=True)

    rho, w, i = _locate_maximum(p, E)
    _reject_multiple_maxima(rho, w, i)
    neg_w = lambda x: -float(p.W(E, x))
    res = minimize_scalar(neg_w, bracket=(rho[i - 1], rho[i], rho[i + 1]),
                          method="golden", options={"xtol": 1e-11})
    rho_m = float(res.x)

    # golden section localises only to ~sqrt(eps); a few Newton steps on W'
    # push the stationarity residual to the noise floor
    h = 1e-5 * max(1.0, abs(rho_m))
    for _ in range(8):
        w_p = float(p.W(E, rho_m + h))
        w_c = float(p.W(E, rho_m))
        w_m = float(p.W(E, rho_m - h))
        d1 = (w_p - w_m) / (2.0 * h)
        d2 = (w_p - 2.0 * w_c + w_m) / (h * h)
        if d2 >= 0.0:
            break
        step = -d1 / d2
        if abs(step) > 0.1:
            break
        rho_m += step
        if abs(step) < 1e-13 * max(1.0, abs(rho_m)):
            break

    a2 = float(p.W(E, rho_m))
    if a2 <= 0:
        raise NoClassicalRegion("maximum of W is not positive")
    a = math.sqrt(a2)

    slope = (float(p.W(E, rho_m + h)) - float(p.W(E, rho_m - h))) / (2.0 * h)
    if abs(slope) > 1e-8 * a2:
        raise NumericsError(f"stationarity check failed at the W maximum: |W'| = {abs(slope):.3g}")

    r_m = math.exp(rho_m)
    r_t = _turning_point_of_v(p, E, r_m)
    return EnergySlice(E=E, r_t=r_t, r_m=r_m, A=a, kappa_at_rm=float(p.kappa(r_m)))
