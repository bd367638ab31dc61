"""Hyperbolic 4-slice geometry: frames, measures, spin connection, quadrature.

The slice metric is dr^2 + f(r)^2 (dtheta^2 + sin^2 theta (dpsi^2 +
sin^2 psi dphi^2)) with f(r) = sinh(kappa r)/kappa; the ambient static
metric adds -cosh^2(kappa r) dt^2.  Surface integrals over the geodesic
spheres S_r use a Gauss-Legendre product rule in (theta, psi) and a uniform
periodic rule in phi, with a doubling pass as convergence check.  Radial
limits are taken by a three-point exponential fit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

__all__ = [
    "DegenerateCoordinateError",
    "DivergentLimitError",
    "ModelConstants",
    "SlicePoint",
    "QuadratureSpec",
    "ConnectionCoefficients",
    "frame_scale",
    "time_scale",
    "sphere_measure_density",
    "spin_connection",
    "spin_connection_grid",
    "SphereGrid",
    "sphere_grid",
    "IntegralResult",
    "surface_integrate",
    "RadialLimit",
    "radial_limit",
]

_POLE_TOL = 1e-12


class DegenerateCoordinateError(ValueError):
    """Raised when a frame quantity is evaluated at a coordinate pole."""


class DivergentLimitError(RuntimeError):
    """Raised (or flagged) when a radial sequence grows instead of settling."""


@dataclass(frozen=True)
class ModelConstants:
    """Curvature scale kappa > 0; the cosmological constant is -6 kappa^2."""

    kappa: float = 1.0

    def __post_init__(self):
        if not self.kappa > 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")

    @property
    def cosmological_constant(self) -> float:
        return -6.0 * self.kappa**2


@dataclass(frozen=True)
class SlicePoint:
    """Point (r, theta, psi, phi) on the hyperbolic 4-slice."""

    r: float
    theta: float
    psi: float
    phi: float

    def __post_init__(self):
        if self.r < 0:
            raise ValueError(f"r must be >= 0, got {self.r}")
        if not 0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0 <= self.psi <= math.pi:
            raise ValueError(f"psi must lie in [0, pi], got {self.psi}")
        if not 0 <= self.phi < 2 * math.pi:
            raise ValueError(f"phi must lie in [0, 2pi), got {self.phi}")


@dataclass(frozen=True)
class QuadratureSpec:
    """Node counts, radii schedule and tolerance for sphere integrals."""

    ntheta: int = 16
    npsi: int = 16
    nphi: int = 16
    radii: tuple = (4.0, 5.0, 6.0, 7.0)
    rel_tol: float = 1e-8

    def __post_init__(self):
        if self.ntheta < 4 or self.npsi < 4:
            raise ValueError("ntheta and npsi must be >= 4")
        if self.nphi < 4 or self.nphi % 2:
            raise ValueError("nphi must be even and >= 4")
        object.__setattr__(self, "radii", tuple(float(r) for r in self.radii))
        if len(self.radii) < 3:
            raise ValueError("at least 3 radii are required")
        if any(b <= a for a, b in zip(self.radii, self.radii[1:])):
            raise ValueError("radii must be strictly increasing")
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")


@dataclass(frozen=True)
class ConnectionCoefficients:
    """Spin connection omega_{ab c} of the slice frame e_1..e_4 at a point.

    omega[a-1, b-1, c-1] holds omega_{ab c}; antisymmetric in (a, b).
    """

    omega: np.ndarray

    def __post_init__(self):
        self.omega.setflags(write=False)

    def __getitem__(self, abc):
        a, b, c = abc
        return float(self.omega[a - 1, b - 1, c - 1])


def _check_off_pole(theta, psi, need_psi: bool):
    sth = np.sin(theta)
    if np.any(np.abs(sth) < _POLE_TOL):
        raise DegenerateCoordinateError("evaluation at a theta pole")
    if need_psi and np.any(np.abs(np.sin(psi)) < _POLE_TOL):
        raise DegenerateCoordinateError("evaluation at a psi pole")


def frame_scale(axis: int, p: SlicePoint, k: ModelConstants) -> float:
    """Coordinate-to-frame factor s_a, so that d/dx_a = s_a * frame_a.

    axis 1 -> r, 2 -> theta, 3 -> psi, 4 -> phi.
    """
    if axis not in (1, 2, 3, 4):
        raise IndexError(f"axis must be in 1..4, got {axis}")
    if axis == 1:
        return 1.0
    f = math.sinh(k.kappa * p.r) / k.kappa
    if axis == 2:
        return f
    _check_off_pole(p.theta, p.psi, need_psi=(axis == 4))
    if axis == 3:
        return f * math.sin(p.theta)
    return f * math.sin(p.theta) * math.sin(p.psi)


def time_scale(p: SlicePoint, k: ModelConstants) -> float:
    """Lapse factor: d/dt = cosh(kappa r) * frame_0."""
    return math.cosh(k.kappa * p.r)


def sphere_measure_density(p: SlicePoint, k: ModelConstants) -> float:
    """Density of the area form e^2 ^ e^3 ^ e^4 against dtheta dpsi dphi."""
    if p.r <= 0:
        raise ValueError(f"r must be positive, got {p.r}")
    f = math.sinh(k.kappa * p.r) / k.kappa
    return f**3 * math.sin(p.theta) ** 2 * math.sin(p.psi)


def spin_connection_grid(r, theta, psi, k: ModelConstants) -> np.ndarray:
    """omega_{ab c} arrays over broadcastable (theta, psi) at radius r.

    Returns shape (4, 4, 4) + broadcast(theta, psi).shape, 0-based frame
    indices (frame a = index a-1).
    """
    theta = np.asarray(theta, dtype=float)
    psi = np.asarray(psi, dtype=float)
    _check_off_pole(theta, psi, need_psi=True)
    if r <= 0:
        raise DegenerateCoordinateError("spin connection needs r > 0")
    shape = np.broadcast(theta, psi).shape
    omega = np.zeros((4, 4, 4) + shape)
    kr = k.kappa * r
    coth = k.kappa / math.tanh(kr)
    inv_f = k.kappa / math.sinh(kr)
    ones = np.ones(shape)
    # Radial family: omega_{a1 a} = kappa coth(kappa r), a = 2, 3, 4.
    for a in (1, 2, 3):
        omega[a, 0, a] = coth * ones
    # Round-S3 terms scaled by kappa / sinh(kappa r).
    cot_th = inv_f * np.cos(theta) / np.sin(theta)
    omega[2, 1, 2] = cot_th * ones
    omega[3, 1, 3] = cot_th * ones
    omega[3, 2, 3] = inv_f * np.cos(psi) / (np.sin(psi) * np.sin(theta)) * ones
    omega -= np.swapaxes(omega, 0, 1)
    return omega


def spin_connection(p: SlicePoint, k: ModelConstants) -> ConnectionCoefficients:
    """Spin connection of the hyperbolic slice at a single point."""
    return ConnectionCoefficients(spin_connection_grid(p.r, p.theta, p.psi, k))


@dataclass(frozen=True)
class SphereGrid:
    """Product quadrature grid on S_r: GL(theta) x GL(psi) x uniform(phi)."""

    theta: np.ndarray  # shape (ntheta, 1, 1)
    psi: np.ndarray    # shape (1, npsi, 1)
    phi: np.ndarray    # shape (1, 1, nphi)
    weights: np.ndarray  # shape (ntheta, npsi, nphi), includes angular measure

    @property
    def shape(self):
        return self.weights.shape


def sphere_grid(ntheta: int, npsi: int, nphi: int) -> SphereGrid:
    """Build the quadrature grid; nodes avoid the poles by construction."""
    xt, wt = np.polynomial.legendre.leggauss(ntheta)
    xp, wp = np.polynomial.legendre.leggauss(npsi)
    theta = (math.pi / 2) * (xt + 1.0)
    psi = (math.pi / 2) * (xp + 1.0)
    wt = wt * (math.pi / 2)
    wp = wp * (math.pi / 2)
    phi = 2 * math.pi * np.arange(nphi) / nphi
    wphi = np.full(nphi, 2 * math.pi / nphi)
    # The angular part of the measure density, sin^2 theta * sin psi.
    weights = (
        (wt * np.sin(theta) ** 2)[:, None, None]
        * (wp * np.sin(psi))[None, :, None]
        * wphi[None, None, :]
    )
    return SphereGrid(
        theta=theta[:, None, None],
        psi=psi[None, :, None],
        phi=phi[None, None, :],
        weights=weights,
    )


@dataclass(frozen=True)
class IntegralResult:
    value: complex
    converged: bool
    rel_change: float


def _radial_factor(r: float, k: ModelConstants) -> float:
    return (math.sinh(k.kappa * r) / k.kappa) ** 3


def _integrate_on_grid(f, grid: SphereGrid):
    vals = np.asarray(f(grid.theta, grid.psi, grid.phi))
    vals = np.broadcast_to(vals, grid.shape)
    if not np.all(np.isfinite(vals)):
        bad = np.argwhere(~np.isfinite(vals))[0]
        raise ValueError(
            "non-finite integrand at node (theta=%g, psi=%g, phi=%g)"
            % (
                grid.theta[bad[0], 0, 0],
                grid.psi[0, bad[1], 0],
                grid.phi[0, 0, bad[2]],
            )
        )
    return np.sum(vals * grid.weights)


def surface_integrate(
    f: Callable,
    r: float,
    q: QuadratureSpec,
    k: ModelConstants,
) -> IntegralResult:
    """Integrate f(theta, psi, phi) over S_r against the area form.

    f must accept broadcastable angle arrays.  A node-doubling refinement
    pass is compared against the base grid; failure to agree within
    q.rel_tol is reported via the converged flag (the refined value is
    returned either way).
    """
    if r <= 0:
        raise ValueError(f"r must be positive, got {r}")
    radial = _radial_factor(r, k)
    base = _integrate_on_grid(f, sphere_grid(q.ntheta, q.npsi, q.nphi)) * radial
    fine = (
        _integrate_on_grid(f, sphere_grid(2 * q.ntheta, 2 * q.npsi, 2 * q.nphi))
        * radial
    )
    scale = max(abs(fine), abs(base), 1e-300)
    rel = abs(fine - base) / scale
    converged = rel < q.rel_tol or abs(fine) < 1e-14 * max(radial, 1.0)
    return IntegralResult(value=complex(fine), converged=converged, rel_change=rel)


@dataclass(frozen=True)
class RadialLimit:
    limit: float
    residual: float
    diverged: bool
    beta: float | None = None


def _fit_triple(rs, vs, kappa):
    """Fit v = L + b exp(-beta kappa r) through three points."""
    r1, r2, r3 = rs
    v1, v2, v3 = vs
    d1 = v2 - v1
    d2 = v3 - v2
    scale = max(abs(v1), abs(v2), abs(v3), 1e-300)
    if abs(d1) < 1e-14 * scale or abs(d2) < 1e-14 * scale:
        return float(v3), abs(d2), None
    ratio = d2 / d1
    if not 0 < ratio < 1:
        # Not a monotone decaying exponential; take the last value.
        return float(v3), abs(d2), None

    def g(beta):
        x1 = math.exp(-beta * kappa * (r1 - r1))
        x2 = math.exp(-beta * kappa * (r2 - r1))
        x3 = math.exp(-beta * kappa * (r3 - r1))
        return (x3 - x2) / (x2 - x1) - ratio

    lo, hi = 1e-8, 60.0
    if g(lo) * g(hi) > 0:
        return float(v3), abs(d2), None
    beta = brentq(g, lo, hi, xtol=1e-14, rtol=1e-14)
    x2 = math.exp(-beta * kappa * (r2 - r1))
    x3 = math.exp(-beta * kappa * (r3 - r1))
    b = d2 / (x3 - x2)
    limit = v3 - b * x3
    return float(limit), abs(b * x3) * 1e-6, beta


def radial_limit(
    values: Sequence,
    k: ModelConstants,
    rel_tol: float = 1e-8,
) -> RadialLimit:
    """Extrapolate (r_k, v_k) to r -> infinity by an exponential fit.

    Declares divergence when |v_k| grows monotonically by a factor > 1.5
    across the last three radii.
    """
    pairs = sorted((float(r), float(v)) for r, v in values)
    if len(pairs) < 3:
        raise ValueError("at least 3 radii are required for extrapolation")
    rs = [p[0] for p in pairs]
    vs = [p[1] for p in pairs]
    a1, a2, a3 = (abs(v) for v in vs[-3:])
    if a2 > 1.5 * a1 and a3 > 1.5 * a2:
        return RadialLimit(limit=math.nan, residual=math.inf, diverged=True)
    limit, resid, beta = _fit_triple(rs[-3:], vs[-3:], k.kappa)
    if len(pairs) >= 4:
        prev, _, _ = _fit_triple(rs[-4:-1], vs[-4:-1], k.kappa)
        resid = max(resid, abs(limit - prev))
    return RadialLimit(limit=limit, residual=resid, diverged=False, beta=beta)
