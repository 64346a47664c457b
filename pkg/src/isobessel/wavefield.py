"""Standing waves of the wave equation with the partner damping term.

The spatial problem on an annulus ``r_min <= r <= r_max`` is

    lap(psi) - (g_{n+1}(k r; gamma) / r^2) psi = (1 / v^2) d2psi/dt2,

with separable standing solution

    psi(r, theta, t) = Jt_{n+1}(k r; gamma) cos((n+1) theta + phase) cos(omega t),
    omega = k v.

Derivatives are second-order central differences in ``r`` and periodic
central differences in ``theta``.  :func:`time_evolve` integrates the
equation with leapfrog and checks that the mode neither decays nor grows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from .bessel_core import MAX_RADIUS, RadialGrid, ResidualReport, check_order
from .errors import ConfigurationError, DomainError, NumericalBlowUpError
from .isospectral import GammaParam, PartnerSpec, damping_g, find_zeros, partner_j

MIN_RING = 0.05
MIN_THETA = 16
MIN_RADIAL = 32
CFL_FACTOR = 0.5


@dataclass(frozen=True)
class WaveParams:
    n: int
    gamma: GammaParam
    k: float = 1.0
    v: float = 1.0
    phase: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "n", check_order(self.n))
        object.__setattr__(self, "gamma", GammaParam.parse(self.gamma))
        if not (self.k > 0.0 and math.isfinite(self.k)):
            raise DomainError("wavenumber k must be positive and finite")
        if not (self.v > 0.0 and math.isfinite(self.v)):
            raise DomainError("wave speed v must be positive and finite")
        object.__setattr__(self, "k", float(self.k))
        object.__setattr__(self, "v", float(self.v))
        object.__setattr__(self, "phase", float(self.phase))

    @property
    def omega(self) -> float:
        return self.k * self.v

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    @property
    def spec(self) -> PartnerSpec:
        return PartnerSpec(self.n, self.gamma)


@dataclass(frozen=True)
class PolarGrid:
    """Uniform product grid: radii from a RadialGrid, ``n_theta`` angles on [0, 2 pi)."""

    radial: RadialGrid
    n_theta: int

    def __post_init__(self):
        if not isinstance(self.radial, RadialGrid):
            object.__setattr__(self, "radial", RadialGrid(self.radial))
        r = self.radial.points
        if r[0] < MIN_RING:
            raise ConfigurationError(f"r_min must be >= {MIN_RING}")
        if self.n_theta < 4 or self.n_theta % 4:
            raise ConfigurationError("number of theta samples must be a positive multiple of 4")
        if r.size > 2:
            steps = np.diff(r)
            if np.max(np.abs(steps - steps[0])) > 1e-9 * max(1.0, r[-1]):
                raise ConfigurationError("radial samples must be uniformly spaced")

    @classmethod
    def uniform(cls, r_min: float, r_max: float, n_r: int, n_theta: int) -> "PolarGrid":
        """``n_r`` radii spanning ``[r_min, r_max]`` inclusive."""
        if n_r < 3:
            raise ConfigurationError("need at least 3 radial samples")
        return cls(RadialGrid(np.linspace(r_min, r_max, n_r)), n_theta)

    @property
    def r(self) -> np.ndarray:
        return self.radial.points

    @property
    def theta(self) -> np.ndarray:
        return 2.0 * math.pi * np.arange(self.n_theta) / self.n_theta

    @property
    def dr(self) -> float:
        return float(self.r[1] - self.r[0])

    @property
    def dtheta(self) -> float:
        return 2.0 * math.pi / self.n_theta

    @property
    def shape(self) -> tuple[int, int]:
        return (self.r.size, self.n_theta)


@dataclass(frozen=True)
class PolarField:
    """Scalar field on a PolarGrid at one instant; ``values[i, j]`` sits at ``(r_i, theta_j)``."""

    values: np.ndarray = field(repr=False)
    grid: PolarGrid
    params: WaveParams
    time: float

    def __post_init__(self):
        if self.values.shape != self.grid.shape:
            raise ValueError(f"field shape {self.values.shape} != grid shape {self.grid.shape}")

    def rows(self):
        """Yield ``(r, theta, value)`` in r-major order."""
        theta = self.grid.theta
        for i, r in enumerate(self.grid.r):
            for j, th in enumerate(theta):
                yield float(r), float(th), float(self.values[i, j])


def angular_h(n: int, theta, phase: float = 0.0):
    """``cos((n+1) theta + phase)``, a solution of ``H'' + (n+1)^2 H = 0``."""
    n = check_order(n)
    value = np.cos((n + 1) * np.asarray(theta, dtype=float) + phase)
    return float(value) if value.ndim == 0 else value


def _check_reach(params: WaveParams, grid: PolarGrid):
    if params.k * grid.r[-1] > MAX_RADIUS:
        raise DomainError(f"k*r_max = {params.k * grid.r[-1]:g} exceeds {MAX_RADIUS}")


def radial_profile(params: WaveParams, grid: PolarGrid) -> np.ndarray:
    return partner_j(params.spec, params.k * grid.r)


def spatial_field(params: WaveParams, grid: PolarGrid) -> np.ndarray:
    """The t = 0 standing-wave profile as an ``(n_r, n_theta)`` array."""
    _check_reach(params, grid)
    radial = radial_profile(params, grid)
    return np.outer(radial, angular_h(params.n, grid.theta, params.phase))


def stationary_field(params: WaveParams, grid: PolarGrid, t: float = 0.0) -> PolarField:
    """Standing solution ``Jt(k r) H(theta) cos(omega t)`` sampled on ``grid``."""
    values = spatial_field(params, grid) * math.cos(params.omega * t)
    return PolarField(values, grid, params, float(t))


def damping_coefficient(params: WaveParams, grid: PolarGrid) -> np.ndarray:
    """``g_{n+1}(k r; gamma) / r^2`` per radius."""
    r = grid.r
    return damping_g(params.n, params.gamma, params.k * r) / (r * r)


def polar_laplacian(psi: np.ndarray, grid: PolarGrid) -> np.ndarray:
    """Five-point Laplacian on interior rings; boundary rows are returned as zero."""
    r = grid.r[1:-1, None]
    dr, dth = grid.dr, grid.dtheta
    out = np.zeros_like(psi)
    inner = psi[1:-1]
    out[1:-1] = (
        (psi[2:] - 2.0 * inner + psi[:-2]) / (dr * dr)
        + (psi[2:] - psi[:-2]) / (2.0 * dr * r)
        + (np.roll(inner, -1, axis=1) - 2.0 * inner + np.roll(inner, 1, axis=1)) / (dth * dth * r * r)
    )
    return out


def spatial_operator(psi: np.ndarray, grid: PolarGrid, coeff: np.ndarray) -> np.ndarray:
    """``lap(psi) - (g / r^2) psi`` on interior rings; shared by residual and time stepping."""
    out = polar_laplacian(psi, grid)
    out[1:-1] -= coeff[1:-1, None] * psi[1:-1]
    return out


def pde_residual(params: WaveParams, grid: PolarGrid) -> ResidualReport:
    """Discrete residual of the stationary problem, normalised by ``max |psi|``.

    Evaluates ``lap(psi) + k^2 psi - (g/r^2) psi`` at interior nodes of the
    t = 0 field.  ``argmax_point`` is the radius of the worst node.
    """
    n_r, n_theta = grid.shape
    if n_theta < MIN_THETA or n_r < MIN_RADIAL:
        raise ConfigurationError(
            f"grid {n_r}x{n_theta} too coarse; need >= {MIN_RADIAL} radii and >= {MIN_THETA} angles"
        )
    psi = spatial_field(params, grid)
    scale = float(np.max(np.abs(psi)))
    if scale == 0.0:
        raise ConfigurationError("field vanishes identically on this grid")
    res = spatial_operator(psi, grid, damping_coefficient(params, grid)) + params.k**2 * psi
    interior = res[1:-1] / scale
    radii = np.broadcast_to(grid.r[1:-1, None], interior.shape)
    return ResidualReport.from_residual(radii, interior)


def annulus_grid(
    params: WaveParams,
    r_min: float,
    n_r: int,
    n_theta: int,
    r_limit: float = 10.0,
) -> PolarGrid:
    """Annulus whose outer ring sits on the last partner zero with ``k r <= k r_limit``."""
    zeros = find_zeros(params.spec, min(params.k * r_limit, MAX_RADIUS))
    zeros = [z for z in zeros if z / params.k > r_min]
    if not zeros:
        raise ConfigurationError(f"no partner zero between r_min={r_min} and r={r_limit}")
    return PolarGrid.uniform(r_min, zeros[-1] / params.k, n_r, n_theta)


@dataclass(frozen=True)
class EvolutionReport:
    """Outcome of a leapfrog run sampled at whole periods."""

    drift: float
    amplitudes: tuple[float, ...]
    reference_amplitude: float
    profile_mismatch: float
    projection_drift: float
    dt: float
    steps: int

    def as_dict(self) -> dict:
        return {
            "drift": self.drift,
            "amplitudes": list(self.amplitudes),
            "reference_amplitude": self.reference_amplitude,
            "profile_mismatch": self.profile_mismatch,
            "projection_drift": self.projection_drift,
            "dt": self.dt,
            "steps": self.steps,
        }


def project_harmonic(psi: np.ndarray, m: int) -> np.ndarray:
    """Keep only the ``cos(m theta)``/``sin(m theta)`` content of each ring."""
    spec = np.fft.rfft(psi, axis=1)
    keep = np.zeros_like(spec)
    keep[:, m] = spec[:, m]
    return np.fft.irfft(keep, n=psi.shape[1], axis=1)


def max_stable_dt(params: WaveParams, grid: PolarGrid, cfl: float = CFL_FACTOR) -> float:
    return cfl * min(grid.dr, grid.r[0] * grid.dtheta) / params.v


def time_evolve(
    params: WaveParams,
    grid: PolarGrid,
    periods: int = 5,
    steps_per_period: int | None = None,
    cfl: float = CFL_FACTOR,
    filter_harmonic: bool = True,
) -> EvolutionReport:
    """Leapfrog integration of the standing mode over whole periods.

    Starts from the exact field at ``t = 0`` and ``t = -dt`` and pins both
    boundary rings to the exact solution at every step.  ``drift`` is the
    largest relative deviation of ``max |psi|`` at ``t = m T`` from its exact
    value.  ``profile_mismatch`` compares the normalised radial profile along
    ``H = 1`` with the exact one at the same instants.

    The operator is circulant in theta, so the mode's own harmonic is an
    invariant subspace.  Other harmonics can grow exponentially, because
    ``-g/r^2`` is positive near the inner ring.  ``filter_harmonic`` projects
    every step back onto harmonic ``n+1`` and removes only round-off seeded
    there.

    ``steps_per_period`` defaults to the smallest count satisfying
    ``v dt <= cfl * min(dr, r_min dtheta)``.  The outer ring should sit on a
    zero of the partner (see :func:`annulus_grid`).
    """
    if periods < 1:
        raise ConfigurationError("periods must be >= 1")
    n_r, n_theta = grid.shape
    if n_theta < MIN_THETA or n_r < MIN_RADIAL:
        raise ConfigurationError("grid too coarse for time evolution")
    m = params.n + 1
    if 2 * m >= n_theta:
        raise ConfigurationError(f"{n_theta} angles cannot resolve harmonic {m}")
    dt_max = max_stable_dt(params, grid, cfl)
    if steps_per_period is None:
        steps_per_period = int(math.ceil(params.period / dt_max))
    dt = params.period / steps_per_period
    if params.v * dt > cfl * min(grid.dr, grid.r[0] * grid.dtheta) * (1 + 1e-12):
        raise ConfigurationError(
            f"CFL violated: v*dt = {params.v * dt:.3e} > {cfl} * min(dr, r_min*dtheta)"
        )

    shape = spatial_field(params, grid)
    coeff = damping_coefficient(params, grid)
    radial = radial_profile(params, grid)
    # amplitudes use interior rings: the pinned rings are exact by construction
    ref_amp = float(np.max(np.abs(shape[1:-1])))
    shape_norm = float(np.sum(shape[1:-1] ** 2))
    # H = 1 along theta = -phase/(n+1); take the nearest grid column
    col = int(round((-params.phase / m) % (2 * math.pi) / grid.dtheta)) % n_theta
    h_col = math.cos(m * grid.theta[col] + params.phase)
    ref_profile = radial / np.max(np.abs(radial))

    omega, c2 = params.omega, (params.v * dt) ** 2
    prev = shape * math.cos(-omega * dt)
    cur = shape.copy()
    amplitudes = []
    projections = []
    mismatch = 0.0
    step = 0
    # an unstable run overflows to inf/nan; the check below reports it
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(periods):
            for _ in range(steps_per_period):
                nxt = 2.0 * cur - prev + c2 * spatial_operator(cur, grid, coeff)
                if filter_harmonic:
                    nxt = project_harmonic(nxt, m)
                step += 1
                pinned = math.cos(omega * step * dt)
                nxt[0] = shape[0] * pinned
                nxt[-1] = shape[-1] * pinned
                prev, cur = cur, nxt
            if not np.all(np.isfinite(cur)):
                raise NumericalBlowUpError(f"non-finite values after {step} steps")
            amplitudes.append(float(np.max(np.abs(cur[1:-1]))))
            projections.append(float(np.sum(cur[1:-1] * shape[1:-1]) / shape_norm))
            profile = cur[:, col] / h_col
            profile = profile / np.max(np.abs(profile))
            mismatch = max(mismatch, float(np.max(np.abs(profile - ref_profile))))

    drift = max(abs(a - ref_amp) / ref_amp for a in amplitudes)
    projection_drift = max(abs(c - 1.0) for c in projections)
    return EvolutionReport(
        drift=float(drift),
        amplitudes=tuple(amplitudes),
        reference_amplitude=ref_amp,
        profile_mismatch=mismatch,
        projection_drift=float(projection_drift),
        dt=dt,
        steps=step,
    )
