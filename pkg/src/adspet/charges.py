"""Conserved charges by surface quadrature and radial extrapolation.

Fifteen quantities are computed: the energy, four boost-type momenta c_i,
four c'_i from the momentum aspect against the (i,0) fields, and six
angular momenta J_ij from the rotational fields.  Each one is a weighted
surface integral evaluated on the radii schedule and extrapolated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    IntegralResult,
    ModelConstants,
    QuadratureSpec,
    RadialLimit,
    radial_limit,
    sphere_grid,
)
from .initial_data import InitialDataModel, mass_aspect_grid, momentum_aspect_grid
from .killing import killing_vector_frame

__all__ = [
    "J_ORDER",
    "ChargeDiagnostics",
    "ChargeSet",
    "DerivedCharges",
    "compute_charges",
    "derived",
    "charge_surface_values",
]

# Fixed order of the six angular-momentum labels.
J_ORDER = ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))

CHARGE_NAMES = (
    "e0",
    "c1",
    "c2",
    "c3",
    "c4",
    "cp1",
    "cp2",
    "cp3",
    "cp4",
    "j12",
    "j13",
    "j14",
    "j23",
    "j24",
    "j34",
)


@dataclass(frozen=True)
class ChargeDiagnostics:
    residual: float
    diverged: bool
    quadrature_converged: bool
    beta: float | None = None


@dataclass(frozen=True)
class ChargeSet:
    """E0, c_1..4, c'_1..4 and J_ij with per-charge diagnostics."""

    e0: float
    c: np.ndarray          # shape (4,)
    cp: np.ndarray         # shape (4,)
    j: np.ndarray          # shape (6,), order J_ORDER
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "c", np.asarray(self.c, dtype=float).reshape(4))
        object.__setattr__(self, "cp", np.asarray(self.cp, dtype=float).reshape(4))
        object.__setattr__(self, "j", np.asarray(self.j, dtype=float).reshape(6))

    def j_component(self, i: int, jj: int) -> float:
        """Antisymmetrized J_{i j}, 1-based indices."""
        if i == jj:
            return 0.0
        if (i, jj) in J_ORDER:
            return float(self.j[J_ORDER.index((i, jj))])
        return -float(self.j[J_ORDER.index((jj, i))])

    def values(self) -> np.ndarray:
        return np.concatenate([[self.e0], self.c, self.cp, self.j])

    def as_dict(self) -> dict:
        out = {"e0": self.e0,
               "c": [float(v) for v in self.c],
               "cp": [float(v) for v in self.cp],
               "j": {f"{i}{jj}": float(self.j[n]) for n, (i, jj) in enumerate(J_ORDER)}}
        if self.diagnostics:
            out["diagnostics"] = {
                name: {
                    "residual": d.residual,
                    "diverged": d.diverged,
                    "quadrature_converged": d.quadrature_converged,
                }
                for name, d in self.diagnostics.items()
            }
        return out

    @property
    def any_diverged(self) -> bool:
        return any(d.diverged for d in self.diagnostics.values())


@dataclass(frozen=True)
class DerivedCharges:
    jhat: np.ndarray   # (J23, -J13, J12)
    j4: np.ndarray     # (J14, J24, J34)
    c3: np.ndarray     # (c1, c2, c3)
    cp3: np.ndarray    # (c'1, c'2, c'3)
    l_squared: float
    a_total: float


def derived(cs: ChargeSet) -> DerivedCharges:
    """Derived scalars entering the energy bounds."""
    jhat = np.array(
        [cs.j_component(2, 3), -cs.j_component(1, 3), cs.j_component(1, 2)]
    )
    j4 = np.array(
        [cs.j_component(1, 4), cs.j_component(2, 4), cs.j_component(3, 4)]
    )
    c3 = cs.c[:3].copy()
    cp3 = cs.cp[:3].copy()
    l_squared = 2.0 * (c3 @ c3 + jhat @ jhat + cs.cp[3] ** 2)
    a_total = (
        cs.c[3] ** 2
        + cs.cp[3] ** 2
        + c3 @ c3
        + cp3 @ cp3
        + jhat @ jhat
        + j4 @ j4
    )
    return DerivedCharges(jhat=jhat, j4=j4, c3=c3, cp3=cp3,
                          l_squared=float(l_squared), a_total=float(a_total))


def charge_surface_values(model: InitialDataModel, r: float, ntheta: int,
                          npsi: int, nphi: int) -> np.ndarray:
    """All fifteen pre-limit surface integrals at radius r, in CHARGE_NAMES
    order, including the kappa/16pi and kappa/8pi prefactors."""
    k = model.constants
    grid = sphere_grid(ntheta, npsi, nphi)
    theta, psi, phi = grid.theta, grid.psi, grid.phi
    shape = grid.shape
    radial = (math.sinh(k.kappa * r) / k.kappa) ** 3

    easpect = mass_aspect_grid(model, r, theta, psi, phi)  # (4,) + shape
    paspect = momentum_aspect_grid(model, r, theta, psi, phi)  # shape + (4,4)
    e1 = np.broadcast_to(easpect[0], shape)
    # P_{j1} for j = 2..4, shape (3,) + shape
    p_j1 = np.stack(
        [np.broadcast_to(paspect[..., jj, 0], shape) for jj in (1, 2, 3)]
    )

    def integral(f):
        return float(np.sum(f * grid.weights) * radial)

    out = np.empty(15)
    pre_e = k.kappa / (16 * math.pi)
    pre_p = k.kappa / (8 * math.pi)

    u50 = killing_vector_frame((5, 0), (r, theta, psi, phi), k)
    out[0] = pre_e * integral(e1 * np.broadcast_to(u50[0], shape))
    for i in (1, 2, 3, 4):
        ui5 = killing_vector_frame((i, 5), (r, theta, psi, phi), k)
        out[i] = pre_e * integral(e1 * np.broadcast_to(ui5[0], shape))
    for i in (1, 2, 3, 4):
        ui0 = killing_vector_frame((i, 0), (r, theta, psi, phi), k)
        acc = 0.0
        for n, jj in enumerate((2, 3, 4)):
            acc += integral(p_j1[n] * np.broadcast_to(ui0[jj], shape))
        out[4 + i] = pre_p * acc
    for n, (i, jj) in enumerate(J_ORDER):
        uij = killing_vector_frame((i, jj), (r, theta, psi, phi), k)
        acc = 0.0
        for nn, kk in enumerate((2, 3, 4)):
            acc += integral(p_j1[nn] * np.broadcast_to(uij[kk], shape))
        out[9 + n] = pre_p * acc
    return out


def compute_charges(model: InitialDataModel, q: QuadratureSpec) -> ChargeSet:
    """Evaluate all charges on the radii schedule and extrapolate."""
    k = model.constants
    base = np.array(
        [charge_surface_values(model, r, q.ntheta, q.npsi, q.nphi) for r in q.radii]
    )
    fine = np.array(
        [
            charge_surface_values(model, r, 2 * q.ntheta, 2 * q.npsi, 2 * q.nphi)
            for r in q.radii
        ]
    )
    scale = np.maximum(np.max(np.abs(fine), axis=0), 1e-300)
    quad_ok = np.max(np.abs(fine - base), axis=0) / scale < q.rel_tol
    # Treat essentially-zero columns as converged.
    quad_ok |= np.max(np.abs(fine), axis=0) < 1e-13

    values = np.empty(15)
    diags = {}
    for idx, name in enumerate(CHARGE_NAMES):
        col = fine[:, idx]
        if np.max(np.abs(col)) < 1e-13:
            values[idx] = 0.0
            diags[name] = ChargeDiagnostics(
                residual=float(np.max(np.abs(col))), diverged=False,
                quadrature_converged=bool(quad_ok[idx]))
            continue
        rl: RadialLimit = radial_limit(list(zip(q.radii, col)), k, q.rel_tol)
        values[idx] = rl.limit
        diags[name] = ChargeDiagnostics(
            residual=rl.residual, diverged=rl.diverged,
            quadrature_converged=bool(quad_ok[idx]), beta=rl.beta)
    return ChargeSet(
        e0=float(values[0]), c=values[1:5], cp=values[5:9], j=values[9:15],
        diagnostics=diags,
    )
