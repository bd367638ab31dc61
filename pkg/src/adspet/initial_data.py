"""Asymptotically AdS initial data: perturbation fields, aspects, ingestion.

A model carries the metric perturbation a_ij and the second fundamental
form h_ij as frame-component fields over (r, theta, psi, phi), a decay
order tau, and the curvature scale.  The mass aspect combines covariant
divergence and trace terms of a; the momentum aspect is the trace-adjusted
h.  Grid models are read from the "AADS-ID v1" text format.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .geometry import ModelConstants, QuadratureSpec, sphere_grid, spin_connection_grid

__all__ = [
    "InitialDataModel",
    "AdsExactModel",
    "RadialBumpModel",
    "OffdiagMomentumModel",
    "GridModel",
    "ANGULAR_PROFILES",
    "model_registry",
    "model_from_config",
    "mass_aspect_grid",
    "mass_aspect",
    "momentum_aspect_grid",
    "momentum_aspect",
    "decay_validate",
    "write_grid_file",
    "read_grid_file",
]

# Row-major order of the 10 independent components of a symmetric 4x4 field.
SYM_ORDER = [(0, 0), (0, 1), (0, 2), (0, 3), (1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)]

ANGULAR_PROFILES: dict[str, Callable] = {
    "one": lambda t, p, f: np.ones(np.broadcast(t, p, f).shape),
    "sin_theta": lambda t, p, f: np.sin(t) * np.ones(np.broadcast(t, p, f).shape),
    "cos_theta": lambda t, p, f: np.cos(t) * np.ones(np.broadcast(t, p, f).shape),
    "sin_psi": lambda t, p, f: np.sin(p) * np.ones(np.broadcast(t, p, f).shape),
    "cos_psi": lambda t, p, f: np.cos(p) * np.ones(np.broadcast(t, p, f).shape),
    "sin_phi": lambda t, p, f: np.sin(f) * np.ones(np.broadcast(t, p, f).shape),
    "cos_phi": lambda t, p, f: np.cos(f) * np.ones(np.broadcast(t, p, f).shape),
}


def _grid_shape(r, theta, psi, phi):
    return np.broadcast(
        np.asarray(r, dtype=float),
        np.asarray(theta, dtype=float),
        np.asarray(psi, dtype=float),
        np.asarray(phi, dtype=float),
    ).shape


class InitialDataModel:
    """Base class: immutable fields a_ij, h_ij with decay order tau."""

    name = "abstract"

    def __init__(self, tau: float, constants: ModelConstants):
        if not tau > 2:
            raise ValueError(f"decay order tau must exceed 2, got {tau}")
        self.tau = float(tau)
        self.constants = constants

    def a(self, r, theta, psi, phi) -> np.ndarray:
        """Metric perturbation, shape broadcast(r, angles) + (4, 4)."""
        raise NotImplementedError

    def h(self, r, theta, psi, phi) -> np.ndarray:
        """Second fundamental form, same shape contract as a()."""
        raise NotImplementedError

    # Finite-difference fallback; analytic models override.
    fd_step = 1e-5

    def da_coord(self, r, theta, psi, phi) -> np.ndarray:
        """Coordinate derivatives of a: shape (4,) + field shape.

        Axis 0 enumerates d/dr, d/dtheta, d/dpsi, d/dphi.
        """
        coords = [np.asarray(c, dtype=float) for c in (r, theta, psi, phi)]
        out = []
        for idx in range(4):
            hstep = self.fd_step
            up = list(coords)
            dn = list(coords)
            up[idx] = up[idx] + hstep
            dn[idx] = dn[idx] - hstep
            out.append((self.a(*up) - self.a(*dn)) / (2 * hstep))
        return np.stack(out)

    def params(self) -> dict:
        return {}

    def config(self) -> dict:
        return {"name": self.name, "params": self.params()}


class AdsExactModel(InitialDataModel):
    """Unperturbed hyperbolic slice: a = h = 0."""

    name = "ads_exact"

    def __init__(self, constants: ModelConstants = ModelConstants(), tau: float = 4.0):
        super().__init__(tau, constants)

    def _zeros(self, r, theta, psi, phi):
        return np.zeros(_grid_shape(r, theta, psi, phi) + (4, 4))

    a = _zeros
    h = _zeros

    def da_coord(self, r, theta, psi, phi):
        return np.zeros((4,) + _grid_shape(r, theta, psi, phi) + (4, 4))


class RadialBumpModel(InitialDataModel):
    """a_ij = m exp(-sigma kappa r) delta_ij, h = 0."""

    name = "radial_bump"

    def __init__(self, m: float, sigma: float = 4.0,
                 constants: ModelConstants = ModelConstants()):
        if not sigma > 2:
            raise ValueError(f"sigma must exceed 2, got {sigma}")
        super().__init__(sigma, constants)
        self.m = float(m)
        self.sigma = float(sigma)

    def _profile(self, r):
        return self.m * np.exp(-self.sigma * self.constants.kappa * np.asarray(r, dtype=float))

    def a(self, r, theta, psi, phi):
        shape = _grid_shape(r, theta, psi, phi)
        f = np.broadcast_to(self._profile(r), shape)
        return f[..., None, None] * np.eye(4)

    def h(self, r, theta, psi, phi):
        return np.zeros(_grid_shape(r, theta, psi, phi) + (4, 4))

    def da_coord(self, r, theta, psi, phi):
        shape = _grid_shape(r, theta, psi, phi)
        out = np.zeros((4,) + shape + (4, 4))
        df = -self.sigma * self.constants.kappa * self._profile(r)
        out[0] = np.broadcast_to(df, shape)[..., None, None] * np.eye(4)
        return out

    def params(self):
        return {"m": self.m, "sigma": self.sigma}


class OffdiagMomentumModel(InitialDataModel):
    """h_{1k} = h_{k1} = q exp(-sigma kappa r) profile(angles); a = 0."""

    name = "offdiag_momentum"

    def __init__(self, q: float, axis: int, profile: str = "one", sigma: float = 4.0,
                 constants: ModelConstants = ModelConstants()):
        if axis not in (2, 3, 4):
            raise ValueError(f"axis must be 2, 3 or 4, got {axis}")
        if profile not in ANGULAR_PROFILES:
            raise ValueError(
                f"unknown profile {profile!r}; choose from {sorted(ANGULAR_PROFILES)}"
            )
        if not sigma > 2:
            raise ValueError(f"sigma must exceed 2, got {sigma}")
        super().__init__(sigma, constants)
        self.q = float(q)
        self.axis = int(axis)
        self.profile = profile
        self.sigma = float(sigma)

    def a(self, r, theta, psi, phi):
        return np.zeros(_grid_shape(r, theta, psi, phi) + (4, 4))

    def h(self, r, theta, psi, phi):
        shape = _grid_shape(r, theta, psi, phi)
        radial = self.q * np.exp(
            -self.sigma * self.constants.kappa * np.asarray(r, dtype=float)
        )
        w = ANGULAR_PROFILES[self.profile](
            np.asarray(theta, dtype=float),
            np.asarray(psi, dtype=float),
            np.asarray(phi, dtype=float),
        )
        field = np.broadcast_to(radial * w, shape)
        out = np.zeros(shape + (4, 4))
        kk = self.axis - 1
        out[..., 0, kk] = field
        out[..., kk, 0] = field
        return out

    def da_coord(self, r, theta, psi, phi):
        return np.zeros((4,) + _grid_shape(r, theta, psi, phi) + (4, 4))

    def params(self):
        return {"q": self.q, "axis": self.axis, "profile": self.profile,
                "sigma": self.sigma}


def _barycentric_diffmat(nodes: np.ndarray) -> np.ndarray:
    """Polynomial differentiation matrix on arbitrary distinct nodes."""
    n = len(nodes)
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    w = 1.0 / np.prod(diff, axis=1)
    D = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i != j:
                D[i, j] = (w[j] / w[i]) / (nodes[i] - nodes[j])
    np.fill_diagonal(D, -D.sum(axis=1))
    return D


def _fourier_diffmat(n: int) -> np.ndarray:
    """Spectral differentiation matrix for the uniform periodic phi grid."""
    freqs = np.fft.fftfreq(n, d=1.0 / n) * 1j
    F = np.fft.fft(np.eye(n), axis=0)
    return np.real(np.fft.ifft(freqs[:, None] * F, axis=0))


class GridModel(InitialDataModel):
    """Sampled initial data on a fixed product grid (AADS-ID v1 files)."""

    name = "grid"

    def __init__(self, radii, ntheta, npsi, nphi, a_data, h_data, tau,
                 constants: ModelConstants, path: str | None = None):
        super().__init__(tau, constants)
        self.radii = np.asarray(radii, dtype=float)
        if len(self.radii) < 3 or np.any(np.diff(self.radii) <= 0):
            raise ValueError("grid radii must be >= 3 and strictly increasing")
        self.grid = sphere_grid(ntheta, npsi, nphi)
        self.ntheta, self.npsi, self.nphi = ntheta, npsi, nphi
        shape = (len(self.radii), ntheta, npsi, nphi, 4, 4)
        self.a_data = np.asarray(a_data, dtype=float).reshape(shape)
        self.h_data = np.asarray(h_data, dtype=float).reshape(shape)
        self.path = path
        self._dth = _barycentric_diffmat(self.grid.theta[:, 0, 0])
        self._dps = _barycentric_diffmat(self.grid.psi[0, :, 0])
        self._dph = _fourier_diffmat(nphi) * (nphi / (2 * math.pi))

    def quadrature(self, rel_tol: float = 1e-8) -> QuadratureSpec:
        return QuadratureSpec(self.ntheta, self.npsi, self.nphi,
                              tuple(self.radii), rel_tol)

    def _radius_index(self, r) -> int:
        r = float(np.asarray(r).reshape(()))
        idx = int(np.argmin(np.abs(self.radii - r)))
        if abs(self.radii[idx] - r) > 1e-9:
            raise ValueError(
                f"grid model evaluable only at its own radii; got r={r}"
            )
        return idx

    def _check_angles(self, theta, psi, phi):
        g = self.grid
        if not (
            np.allclose(np.unique(np.asarray(theta)), g.theta[:, 0, 0])
            and np.allclose(np.unique(np.asarray(psi)), g.psi[0, :, 0])
            and np.allclose(np.unique(np.asarray(phi)), g.phi[0, 0, :])
        ):
            raise ValueError("grid model requires its own angular grid")

    def a(self, r, theta, psi, phi):
        self._check_angles(theta, psi, phi)
        return self.a_data[self._radius_index(r)]

    def h(self, r, theta, psi, phi):
        self._check_angles(theta, psi, phi)
        return self.h_data[self._radius_index(r)]

    def da_coord(self, r, theta, psi, phi):
        self._check_angles(theta, psi, phi)
        i = self._radius_index(r)
        data = self.a_data
        # Radial derivative by finite differences on the listed radii.
        if 0 < i < len(self.radii) - 1:
            dr = self._nonuniform_central(i)
        elif i == 0:
            dr = (data[1] - data[0]) / (self.radii[1] - self.radii[0])
        else:
            dr = (data[-1] - data[-2]) / (self.radii[-1] - self.radii[-2])
        slab = data[i]
        dth = np.einsum("ij,jabkl->iabkl", self._dth, slab)
        dps = np.einsum("ij,ajbkl->aibkl", self._dps, slab)
        dph = np.einsum("ij,abjkl->abikl", self._dph, slab)
        return np.stack([dr, dth, dps, dph])

    def _nonuniform_central(self, i):
        r0, r1, r2 = self.radii[i - 1 : i + 2]
        h1, h2 = r1 - r0, r2 - r1
        f0, f1, f2 = self.a_data[i - 1 : i + 2]
        return (
            -h2 / (h1 * (h1 + h2)) * f0
            + (h2 - h1) / (h1 * h2) * f1
            + h1 / (h2 * (h1 + h2)) * f2
        )

    def params(self):
        return {"file": self.path}


def model_registry(name: str, params: dict | None = None,
                   constants: ModelConstants = ModelConstants()) -> InitialDataModel:
    """Construct a bundled model by name."""
    params = dict(params or {})
    if name == "ads_exact":
        return AdsExactModel(constants=constants, **params)
    if name == "radial_bump":
        return RadialBumpModel(constants=constants, **params)
    if name == "offdiag_momentum":
        return OffdiagMomentumModel(constants=constants, **params)
    if name == "grid":
        return read_grid_file(params["file"])
    raise ValueError(f"unknown model {name!r}")


def model_from_config(config, constants: ModelConstants = ModelConstants()):
    """Build a model from a JSON object/string {"name": ..., "params": {...}}."""
    if isinstance(config, str):
        config = json.loads(config)
    return model_registry(config["name"], config.get("params"), constants)


def _frame_scales(r, theta, psi, k: ModelConstants):
    f = np.sinh(k.kappa * np.asarray(r, dtype=float)) / k.kappa
    return (
        np.ones(np.broadcast(r, theta, psi).shape),
        f * np.ones_like(np.asarray(theta, dtype=float) * np.ones(np.broadcast(r, theta, psi).shape)),
        f * np.sin(theta) * np.ones(np.broadcast(r, theta, psi).shape),
        f * np.sin(theta) * np.sin(psi) * np.ones(np.broadcast(r, theta, psi).shape),
    )


def mass_aspect_grid(model: InitialDataModel, r, theta, psi, phi) -> np.ndarray:
    """Mass aspect values, shape (4,) + field shape.

    Component i is the frame divergence of a minus the trace gradient minus
    kappa (a_{1i} - g_{1i} tr a), with g = delta + a.
    """
    k = model.constants
    a = model.a(r, theta, psi, phi)
    da = model.da_coord(r, theta, psi, phi)
    shape = a.shape[:-2]
    scales = _frame_scales(r, theta, psi, k)
    omega = spin_connection_grid(r, theta, psi, k)  # (4,4,4) + angular shape
    # Frame derivative D[c] = (1/s_c) d_c a, shape (4,) + shape + (4,4)
    D = np.stack(
        [da[c] / np.broadcast_to(scales[c], shape)[..., None, None] for c in range(4)]
    )
    # nabla[c, ..., i, j] = D[c]_ij - omega_{ki c} a_kj - omega_{kj c} a_ik
    nabla = np.empty_like(D)
    for c in range(4):
        term1 = np.einsum("ki...,...kj->...ij", omega[:, :, c], a)
        term2 = np.einsum("kj...,...ik->...ij", omega[:, :, c], a)
        nabla[c] = D[c] - term1 - term2
    div_i = sum(nabla[j][..., :, j] for j in range(4))          # shape + (4,)
    grad_tr = np.stack(
        [np.einsum("...ii->...", D[c]) for c in range(4)], axis=-1
    )
    tra = np.einsum("...ii->...", a)
    g_1i = np.eye(4)[0] + a[..., 0, :]
    correction = k.kappa * (a[..., 0, :] - g_1i * tra[..., None])
    return np.moveaxis(div_i - grad_tr - correction, -1, 0)


def mass_aspect(model: InitialDataModel, p) -> np.ndarray:
    """Mass aspect at a single slice point; returns shape (4,)."""
    vals = mass_aspect_grid(model, p.r, p.theta, p.psi, p.phi)
    return vals.reshape(4)


def momentum_aspect_grid(model: InitialDataModel, r, theta, psi, phi) -> np.ndarray:
    """Momentum aspect P_{ki} = h_ki - g_ki tr h, shape field shape + (4, 4)."""
    a = model.a(r, theta, psi, phi)
    h = model.h(r, theta, psi, phi)
    trh = np.einsum("...ii->...", h)
    g = np.eye(4) + a
    return h - g * trh[..., None, None]


def momentum_aspect(model: InitialDataModel, p) -> np.ndarray:
    return momentum_aspect_grid(model, p.r, p.theta, p.psi, p.phi).reshape(4, 4)


@dataclass(frozen=True)
class DecayReport:
    passed: bool
    vacuous: bool
    tau: float
    sigma_a: float | None
    sigma_grad_a: float | None
    sigma_h: float | None

    def as_dict(self):
        return {
            "passed": self.passed,
            "vacuous": self.vacuous,
            "tau": self.tau,
            "sigma_a": self.sigma_a,
            "sigma_grad_a": self.sigma_grad_a,
            "sigma_h": self.sigma_h,
        }


def _decay_exponent(norms, radii, kappa):
    norms = np.asarray(norms)
    if np.max(norms) < 1e-300:
        return None
    logs = np.log(np.maximum(norms, 1e-300))
    slope = (logs[-1] - logs[0]) / (kappa * (radii[-1] - radii[0]))
    return float(-slope)


def decay_validate(model: InitialDataModel, radii: Sequence[float],
                   ntheta: int = 8, npsi: int = 8, nphi: int = 8) -> DecayReport:
    """Estimate empirical decay exponents of a, grad a and h over spheres."""
    radii = [float(r) for r in radii]
    if len(radii) < 3:
        raise ValueError("at least 3 radii are required")
    k = model.constants
    if isinstance(model, GridModel):
        grid = model.grid
    else:
        grid = sphere_grid(ntheta, npsi, nphi)
    na, nda, nh = [], [], []
    for r in radii:
        a = model.a(r, grid.theta, grid.psi, grid.phi)
        h = model.h(r, grid.theta, grid.psi, grid.phi)
        da = model.da_coord(r, grid.theta, grid.psi, grid.phi)
        na.append(np.max(np.abs(a)))
        nh.append(np.max(np.abs(h)))
        nda.append(np.max(np.abs(da[0])))
    sa = _decay_exponent(na, radii, k.kappa)
    sda = _decay_exponent(nda, radii, k.kappa)
    sh = _decay_exponent(nh, radii, k.kappa)
    vacuous = sa is None and sda is None and sh is None
    threshold = model.tau - 0.1
    passed = model.tau > 2 and all(
        s is None or s >= threshold for s in (sa, sda, sh)
    )
    return DecayReport(passed=passed, vacuous=vacuous, tau=model.tau,
                       sigma_a=sa, sigma_grad_a=sda, sigma_h=sh)


def write_grid_file(path, model_or_data, radii=None, ntheta=None, npsi=None,
                    nphi=None, tau=None, constants=None):
    """Write an AADS-ID v1 file, sampling a model on the given grid."""
    if isinstance(model_or_data, InitialDataModel):
        model = model_or_data
        k = model.constants
        tau = model.tau if tau is None else tau
        grid = sphere_grid(ntheta, npsi, nphi)
        a_rows, h_rows = [], []
        for r in radii:
            a = np.broadcast_to(model.a(r, grid.theta, grid.psi, grid.phi),
                                (ntheta, npsi, nphi, 4, 4))
            h = np.broadcast_to(model.h(r, grid.theta, grid.psi, grid.phi),
                                (ntheta, npsi, nphi, 4, 4))
            a_rows.append(a)
            h_rows.append(h)
        a_data = np.stack(a_rows)
        h_data = np.stack(h_rows)
    else:
        a_data, h_data = model_or_data
        k = constants
    nr = len(radii)
    with open(path, "w") as fh:
        fh.write("aads-id 1\n")
        fh.write(f"kappa={k.kappa!r}\n")
        fh.write(f"tau={float(tau)!r}\n")
        fh.write(f"grid={nr} {ntheta} {npsi} {nphi}\n")
        fh.write("radii=" + " ".join(repr(float(r)) for r in radii) + "\n")
        flat_a = a_data.reshape(nr, ntheta, npsi, nphi, 4, 4)
        flat_h = h_data.reshape(nr, ntheta, npsi, nphi, 4, 4)
        for ir in range(nr):
            for it in range(ntheta):
                for ip in range(npsi):
                    for if_ in range(nphi):
                        vals = [flat_a[ir, it, ip, if_][i, j] for i, j in SYM_ORDER]
                        vals += [flat_h[ir, it, ip, if_][i, j] for i, j in SYM_ORDER]
                        fh.write(" ".join(repr(float(v)) for v in vals) + "\n")


def read_grid_file(path) -> GridModel:
    """Parse an AADS-ID v1 file into a GridModel."""
    with open(path) as fh:
        magic = fh.readline().strip()
        if magic != "aads-id 1":
            raise ValueError(f"not an AADS-ID v1 file (header {magic!r})")
        header = {}
        for _ in range(4):
            key, _, val = fh.readline().strip().partition("=")
            header[key] = val
        kappa = float(header["kappa"])
        tau = float(header["tau"])
        nr, ntheta, npsi, nphi = (int(x) for x in header["grid"].split())
        radii = [float(x) for x in header["radii"].split()]
        if len(radii) != nr:
            raise ValueError("radii count does not match grid header")
        count = nr * ntheta * npsi * nphi
        data = np.loadtxt(fh, ndmin=2)
        if data.shape != (count, 20):
            raise ValueError(
                f"expected {count} rows of 20 floats, got shape {data.shape}"
            )
    a_data = np.zeros((count, 4, 4))
    h_data = np.zeros((count, 4, 4))
    for col, (i, j) in enumerate(SYM_ORDER):
        a_data[:, i, j] = a_data[:, j, i] = data[:, col]
        h_data[:, i, j] = h_data[:, j, i] = data[:, 10 + col]
    return GridModel(
        radii=radii, ntheta=ntheta, npsi=npsi, nphi=nphi,
        a_data=a_data.reshape(nr, ntheta, npsi, nphi, 4, 4),
        h_data=h_data.reshape(nr, ntheta, npsi, nphi, 4, 4),
        tau=tau, constants=ModelConstants(kappa), path=str(path),
    )
