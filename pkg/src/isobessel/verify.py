"""Grid residuals for every identity the library relies on.

Each ``check_*`` function evaluates one identity pointwise and condenses it
into a :class:`~isobessel.bessel_core.ResidualReport`.  :func:`run_suite`
sweeps the standard parameter matrix and attaches a tolerance to each case.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import enum
import math

import numpy as np

from .bessel_core import (
    MAX_RADIUS,
    RadialGrid,
    ResidualReport,
    bessel_table,
    check_order,
    ladder_lower,
    ladder_raise,
)
from .errors import DomainError
from .isospectral import (
    GammaParam,
    PartnerSpec,
    damping_g,
    partner_derivatives,
    partner_j,
    partner_j_direct,
)


class Identity(str, enum.Enum):
    BESSEL_ODE = "BESSEL_ODE"
    RAISE = "RAISE"
    LOWER = "LOWER"
    RECURSION = "RECURSION"
    PARTNER_ODE = "PARTNER_ODE"
    SCALED_ODE = "SCALED_ODE"
    FORM_EQUIV = "FORM_EQUIV"
    LIMIT_G0 = "LIMIT_G0"
    LIMIT_GINF = "LIMIT_GINF"
    FD_CROSSCHECK = "FD_CROSSCHECK"


TOLERANCES = {
    Identity.BESSEL_ODE: 1e-8,
    Identity.RAISE: 1e-10,
    Identity.LOWER: 1e-10,
    Identity.RECURSION: 1e-10,
    Identity.PARTNER_ODE: 1e-8,
    Identity.SCALED_ODE: 1e-7,
    Identity.FORM_EQUIV: 1e-12,
    Identity.LIMIT_G0: 1e-15,
    Identity.LIMIT_GINF: 1e-15,
}
FD_FIRST_TOL = 1e-7
FD_SECOND_TOL = 1e-5
FD_FIRST_STEP = 1e-4
FD_SECOND_STEP = 1e-3
FD_MIN_RADIUS = 0.1
LIMIT_GAMMAS = (1e3, 1e4)
LIMIT_RATIO_RANGE = (8.0, 12.0)

DEFAULT_ORDERS = tuple(range(6))
DEFAULT_GAMMAS = ("0", "0.1", "1", "10", "100", "inf")
DEFAULT_WAVENUMBERS = (0.5, 1.0, 2.0)


def default_grid() -> RadialGrid:
    """r = 0.05, 0.10, ..., 30."""
    return RadialGrid(0.05 * np.arange(1, 601))


def _points(grid, upper: float) -> np.ndarray:
    if not isinstance(grid, RadialGrid):
        grid = RadialGrid(grid)
    pts = grid.points
    if pts[0] <= 0.0:
        raise DomainError("grid must exclude r = 0 for identities with 1/r factors")
    if pts[-1] > upper:
        raise DomainError(f"grid exceeds r = {upper}")
    return pts


def check_bessel_ode(n: int, grid) -> ResidualReport:
    """Residual of ``J'' + J'/r + (1 - n^2/r^2) J`` on ``grid`` within (0, 40]."""
    n = check_order(n)
    r = _points(grid, 40.0)
    t = bessel_table(n + 2, r)

    def j(m):
        return t[abs(m)] * (-1 if m < 0 and m % 2 else 1)

    d1 = 0.5 * (j(n - 1) - j(n + 1))
    d2 = 0.25 * (j(n - 2) - 2.0 * j(n) + j(n + 2))
    res = d2 + d1 / r + (1.0 - n * n / (r * r)) * j(n)
    return ResidualReport.from_residual(r, res)


def check_ladder(n: int, grid) -> tuple[ResidualReport, ResidualReport]:
    """Raising on J_n against -J_{n+1}, and lowering on J_{n+1} against J_n."""
    n = check_order(n)
    r = _points(grid, 40.0)
    t = bessel_table(n + 1, r)
    up = ladder_raise(n, r) + t[n + 1]
    down = ladder_lower(n + 1, r) - t[n]
    return ResidualReport.from_residual(r, up), ResidualReport.from_residual(r, down)


def check_recursion(n: int, grid) -> ResidualReport:
    """Residual of ``(2n/r) J_n - J_{n+1} - J_{n-1}`` for n >= 1."""
    n = check_order(n, minimum=1)
    r = _points(grid, 40.0)
    t = bessel_table(n + 1, r)
    return ResidualReport.from_residual(r, (2.0 * n / r) * t[n] - t[n + 1] - t[n - 1])


def partner_ode_residual(n: int, gamma, r: np.ndarray, damping_scale: float = 1.0) -> np.ndarray:
    """Pointwise ``Jt'' + Jt'/r + (1 - (n+1)^2/r^2) Jt - (g/r^2) Jt``.

    ``damping_scale`` multiplies ``g``; anything but 1 is a deliberate fault
    used to prove the checks can fail.
    """
    spec = PartnerSpec(n, gamma)
    val, d1, d2 = partner_derivatives(spec, r)
    g = damping_scale * damping_g(n, spec.gamma, r)
    m2 = (n + 1) ** 2
    return d2 + d1 / r + (1.0 - m2 / (r * r)) * val - g / (r * r) * val


def check_partner_ode(n: int, gamma, grid, damping_scale: float = 1.0) -> ResidualReport:
    """Residual of the partner radial equation on ``grid`` within (0, 30].

    ``n = 0`` is accepted; there ``g = 0`` and the check reduces to the Bessel
    equation for ``-J_1``.
    """
    r = _points(grid, 30.0)
    return ResidualReport.from_residual(r, partner_ode_residual(n, gamma, r, damping_scale))


def check_scaled_ode(n: int, gamma, k: float, grid, damping_scale: float = 1.0) -> ResidualReport:
    """Residual of the equation for ``Jt(k r)`` multiplied through by ``r^2``.

    ``r^2 f'' + r f' + (k^2 r^2 - (n+1)^2) f - g(k r) f`` with the chain rule
    ``d/dr = k d/du``.
    """
    if not (k > 0.0 and math.isfinite(k)):
        raise DomainError("k must be a positive finite number")
    r = _points(grid, math.inf)
    u = k * r
    if u[-1] > MAX_RADIUS:
        raise DomainError(f"k*r reaches {u[-1]:g}, beyond the supported {MAX_RADIUS}")
    spec = PartnerSpec(n, gamma)
    val, d1, d2 = partner_derivatives(spec, u)
    g = damping_scale * damping_g(n, spec.gamma, u)
    m2 = (n + 1) ** 2
    res = r * r * k * k * d2 + r * k * d1 + (k * k * r * r - m2) * val - g * val
    return ResidualReport.from_residual(r, res)


def check_form_equivalence(n: int, gamma, grid) -> ResidualReport:
    """Difference between the weighted (regular) and direct partner forms."""
    n = check_order(n, minimum=1)
    gamma = GammaParam.parse(gamma)
    if gamma.is_infinite:
        raise DomainError("form equivalence is checked for finite gamma only")
    r = _points(grid, 30.0)
    spec = PartnerSpec(n, gamma)
    return ResidualReport.from_residual(r, partner_j(spec, r) - partner_j_direct(spec, r))


@dataclass(frozen=True)
class LimitConvergence:
    """Approach of the partner to ``-J_{n+1}`` for large finite gamma."""

    gammas: tuple[float, float]
    sup_deviation: tuple[float, float]
    scaled_deviation: tuple[float, float]
    ratio: float
    infinite: ResidualReport

    def as_dict(self) -> dict:
        return {
            "gammas": list(self.gammas),
            "sup_deviation": list(self.sup_deviation),
            "scaled_deviation": list(self.scaled_deviation),
            "ratio": self.ratio,
            "infinite": self.infinite.as_dict(),
        }


def check_limits(n: int, grid) -> tuple[ResidualReport, LimitConvergence]:
    """Endpoint pinning and the O(1/gamma) approach to the infinite endpoint.

    The first report is ``|Jt(r; 0) - J_{n-1}(r)|``.  The second item carries
    ``sup |Jt(r; gamma) + J_{n+1}(r)|`` at gamma = 1e3 and 1e4 (also scaled by
    gamma), their ratio, and the exact deviation at gamma = inf.
    """
    n = check_order(n, minimum=1)
    r = _points(grid, 30.0)
    t = bessel_table(n + 1, r)
    zero = ResidualReport.from_residual(r, partner_j(PartnerSpec(n, 0.0), r) - t[n - 1])
    inf = ResidualReport.from_residual(r, partner_j(PartnerSpec(n, "inf"), r) + t[n + 1])
    sups = tuple(
        float(np.max(np.abs(partner_j(PartnerSpec(n, g), r) + t[n + 1]))) for g in LIMIT_GAMMAS
    )
    scaled = tuple(g * s for g, s in zip(LIMIT_GAMMAS, sups))
    ratio = sups[0] / sups[1] if sups[1] > 0.0 else math.inf
    return zero, LimitConvergence(LIMIT_GAMMAS, sups, scaled, ratio, inf)


def _fd_first(f, r, h):
    return (-f(r + 2 * h) + 8 * f(r + h) - 8 * f(r - h) + f(r - 2 * h)) / (12 * h)


def _fd_second(f, r, h):
    return (f(r + h) - 2 * f(r) + f(r - h)) / (h * h)


def check_fd_crosscheck(n: int, gamma, grid) -> tuple[ResidualReport, ResidualReport]:
    """Analytic partner derivatives against central differences.

    First derivative: five-point stencil, h = 1e-4.  Second derivative:
    three-point stencil, h = 1e-3.  Points below r = 0.1 are dropped.
    """
    spec = PartnerSpec(n, gamma)
    r = _points(grid, 30.0)
    r = r[r >= FD_MIN_RADIUS]
    if r.size == 0:
        raise DomainError(f"no grid points at r >= {FD_MIN_RADIUS}")

    def f(x):
        return partner_j(spec, x)

    val, d1, d2 = partner_derivatives(spec, r)
    first = d1 - _fd_first(f, r, FD_FIRST_STEP)
    second = d2 - _fd_second(f, r, FD_SECOND_STEP)
    return ResidualReport.from_residual(r, first), ResidualReport.from_residual(r, second)


# ---------------------------------------------------------------------------
# suite


@dataclass(frozen=True)
class CaseResult:
    """One identity case with its residual and verdict."""

    identity: Identity
    label: str
    n: int
    tolerance: float
    report: ResidualReport
    passed: bool
    gamma: str | None = None
    k: float | None = None
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {
            "identity_id": self.identity.value,
            "label": self.label,
            "n": self.n,
            "gamma": self.gamma,
            "k": self.k,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }
        out.update(self.report.as_dict())
        if self.extra:
            out["extra"] = self.extra
        return out


@dataclass(frozen=True)
class SuiteResult:
    cases: tuple[CaseResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    @property
    def failures(self) -> list[CaseResult]:
        return [c for c in self.cases if not c.passed]

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "n_cases": len(self.cases),
            "n_failed": len(self.failures),
            "cases": [c.as_dict() for c in self.cases],
        }


def _case(identity, n, report, *, tol=None, gamma=None, k=None, label=None, extra=None):
    tol = TOLERANCES[identity] if tol is None else tol
    ok = report.passes(tol)
    if extra and "ratio_ok" in extra:
        ok = ok and extra["ratio_ok"]
    return CaseResult(
        identity=identity,
        label=label or identity.value,
        n=n,
        tolerance=tol,
        report=report,
        passed=bool(ok),
        gamma=None if gamma is None else str(GammaParam.parse(gamma)),
        k=k,
        extra=extra or {},
    )


def _clip(grid: RadialGrid, k: float) -> RadialGrid:
    """Points with ``k r`` inside the supported radius."""
    return RadialGrid(grid.points[k * grid.points <= MAX_RADIUS])


def run_suite(
    orders=DEFAULT_ORDERS,
    gammas=DEFAULT_GAMMAS,
    wavenumbers=DEFAULT_WAVENUMBERS,
    grid: RadialGrid | None = None,
    damping_scale: float = 1.0,
    include_fd: bool = False,
) -> SuiteResult:
    """Evaluate every identity over the parameter matrix.

    Cases are ordered by identity, then n, gamma and k, so the result is
    reproducible.  For the scaled equation the grid is truncated to
    ``k r <= 50``.  ``damping_scale`` is the fault-injection knob of
    :func:`partner_ode_residual`.  ``include_fd`` adds the finite-difference
    cross-check of the partner derivatives.  Its three-point second-derivative
    oracle has truncation error above 1e-5 near r = 0.1 once gamma >= 10.
    """
    grid = default_grid() if grid is None else grid
    gammas = [GammaParam.parse(g) for g in gammas]
    cases: list[CaseResult] = []

    for n in orders:
        cases.append(_case(Identity.BESSEL_ODE, n, check_bessel_ode(n, grid)))
    for n in orders:
        up, down = check_ladder(n, grid)
        cases.append(_case(Identity.RAISE, n, up))
        cases.append(_case(Identity.LOWER, n, down, label=f"LOWER(n+1={n + 1})"))
    for n in orders:
        if n >= 1:
            cases.append(_case(Identity.RECURSION, n, check_recursion(n, grid)))
    for n in orders:
        for g in gammas:
            rep = check_partner_ode(n, g, grid, damping_scale)
            cases.append(_case(Identity.PARTNER_ODE, n, rep, gamma=g))
    for n in orders:
        for g in gammas:
            for k in wavenumbers:
                sub = _clip(grid, k)
                rep = check_scaled_ode(n, g, k, sub, damping_scale)
                cases.append(_case(Identity.SCALED_ODE, n, rep, gamma=g, k=float(k)))
    for n in orders:
        if n >= 1:
            for g in gammas:
                if not g.is_infinite:
                    rep = check_form_equivalence(n, g, grid)
                    cases.append(_case(Identity.FORM_EQUIV, n, rep, gamma=g))
    for n in orders:
        if n >= 1:
            zero, conv = check_limits(n, grid)
            cases.append(_case(Identity.LIMIT_G0, n, zero, gamma=0.0))
            lo, hi = LIMIT_RATIO_RANGE
            conv_grid = _limit_grid(grid)
            _, conv_r1 = check_limits(n, conv_grid)
            extra = conv_r1.as_dict()
            extra["ratio_ok"] = bool(lo <= conv_r1.ratio <= hi)
            cases.append(_case(Identity.LIMIT_GINF, n, conv.infinite, gamma="inf", extra=extra))
    if not include_fd:
        return _ordered(cases)
    for n in orders:
        for g in gammas:
            first, second = check_fd_crosscheck(n, g, grid)
            cases.append(
                _case(Identity.FD_CROSSCHECK, n, first, tol=FD_FIRST_TOL, gamma=g, label="FD_FIRST")
            )
            cases.append(
                _case(Identity.FD_CROSSCHECK, n, second, tol=FD_SECOND_TOL, gamma=g, label="FD_SECOND")
            )
    return _ordered(cases)


def _ordered(cases) -> SuiteResult:
    rank = {identity: i for i, identity in enumerate(Identity)}
    return SuiteResult(tuple(sorted(cases, key=lambda c: rank[c.identity])))


def _limit_grid(grid: RadialGrid) -> RadialGrid:
    pts = grid.points[grid.points >= 1.0]
    return RadialGrid(pts if pts.size else grid.points)
