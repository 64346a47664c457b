"""Isospectral partners of the Bessel functions.

For order ``n >= 1`` and deformation ``gamma`` the partner of index ``n+1`` is

    Jt(r) = a(r) J_{n+1}(r) + b(r) J_{n-1}(r),
    b = 1 / (1 + gamma r^(2n)),   a = b - 1,

which interpolates between ``J_{n-1}`` (gamma = 0) and ``-J_{n+1}``
(gamma = inf) and stays finite at the origin.  For ``n = 0`` the partner is
``-J_1`` for every gamma.  The matching radial equation carries the extra
coefficient ``g_{n+1}(u; gamma) / r**2`` given by :func:`damping_g`.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .bessel_core import (
    MAX_RADIUS,
    _as_radius,
    _out,
    bessel_table,
    check_order,
    signed_order,
)
from .errors import DomainError

# Largest partner index n: the second derivative needs J_{n+3}.
MAX_PARTNER_ORDER = 17

# ln(gamma r^(2n)) above this saturates the weights instead of overflowing.
_LOG_OVERFLOW = 700.0

ZERO_SCAN_STEP = 0.05
ZERO_TOL = 1e-12


@dataclass(frozen=True)
class GammaParam:
    """Deformation parameter in ``[0, inf]``; ``inf`` is an exact endpoint."""

    value: float

    def __post_init__(self):
        v = float(self.value)
        if math.isnan(v) or v < 0.0:
            raise DomainError(f"gamma must lie in [0, inf], got {self.value!r}")
        object.__setattr__(self, "value", v)

    @classmethod
    def parse(cls, token) -> "GammaParam":
        """Accept a GammaParam, a number, or the strings ``"inf"``/``"infinity"``."""
        if isinstance(token, cls):
            return token
        if isinstance(token, str):
            text = token.strip().lower()
            if text in ("inf", "+inf", "infinity", "∞"):
                return cls(math.inf)
            try:
                return cls(float(text))
            except ValueError:
                raise DomainError(f"cannot parse gamma from {token!r}") from None
        return cls(token)

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.value)

    @property
    def is_zero(self) -> bool:
        return self.value == 0.0

    def __str__(self) -> str:
        return "inf" if self.is_infinite else repr(self.value)


INFINITE_GAMMA = GammaParam(math.inf)


@dataclass(frozen=True)
class PartnerSpec:
    """Partner function ``Jt_{n+1}(.; gamma)`` built on the underlying order ``n``."""

    n: int
    gamma: GammaParam

    def __post_init__(self):
        object.__setattr__(self, "n", check_order(self.n, maximum=MAX_PARTNER_ORDER))
        object.__setattr__(self, "gamma", GammaParam.parse(self.gamma))

    @property
    def index(self) -> int:
        """Order carried by the partner, ``n + 1``."""
        return self.n + 1


def as_spec(spec_or_n, gamma=None) -> PartnerSpec:
    if isinstance(spec_or_n, PartnerSpec):
        return spec_or_n
    return PartnerSpec(spec_or_n, GammaParam.parse(gamma))


def lower_weight(n: int, gamma: GammaParam, r: np.ndarray) -> np.ndarray:
    """b = 1 / (1 + gamma r^(2n)) with saturation for huge arguments.

    The coefficient of ``J_{n+1}`` is ``b - 1``.  Requires ``n >= 1``.
    """
    r = np.asarray(r, dtype=float)
    if gamma.is_zero:
        return np.ones_like(r)
    if gamma.is_infinite:
        return np.zeros_like(r)
    with np.errstate(divide="ignore"):
        log_w = math.log(gamma.value) + 2 * n * np.log(r)
    safe = np.where(log_w > _LOG_OVERFLOW, 0.0, r)
    w = gamma.value * safe ** (2 * n)
    return np.where(log_w > _LOG_OVERFLOW, 0.0, 1.0 / (1.0 + w))


def _partner_parts(spec: PartnerSpec, r: np.ndarray, deriv: int):
    """Value and up to ``deriv`` derivatives of the partner at ``r > 0``."""
    n = spec.n
    t = bessel_table(n + 1 + deriv, r)

    def jd(m, d):
        # d-th derivative of J_m from repeated application of the difference identity
        if d == 0:
            return signed_order(t, m)
        if d == 1:
            return 0.5 * (signed_order(t, m - 1) - signed_order(t, m + 1))
        return 0.25 * (signed_order(t, m - 2) - 2.0 * signed_order(t, m) + signed_order(t, m + 2))

    if n == 0:
        return [-jd(1, d) for d in range(deriv + 1)]

    b = lower_weight(n, spec.gamma, r)
    a = b - 1.0
    if spec.gamma.is_zero or spec.gamma.is_infinite:
        # constant weights: derivatives fall on the Bessel factors only
        out = [jd(n - 1, d) if spec.gamma.is_zero else -jd(n + 1, d) for d in range(deriv + 1)]
        return out

    s = b * (1.0 - b)  # = w / (1 + w)^2
    db = -2.0 * n * s / r
    out = [a * jd(n + 1, 0) + b * jd(n - 1, 0)]
    if deriv >= 1:
        total = jd(n + 1, 0) + jd(n - 1, 0)
        out.append(db * total + a * jd(n + 1, 1) + b * jd(n - 1, 1))
    if deriv >= 2:
        ddb = -(2.0 * n * s / (r * r)) * (2.0 * n * (2.0 * b - 1.0) - 1.0)
        total_d = jd(n + 1, 1) + jd(n - 1, 1)
        out.append(
            ddb * total
            + 2.0 * db * total_d
            + a * jd(n + 1, 2)
            + b * jd(n - 1, 2)
        )
    return out


def partner_j(spec, r, gamma=None):
    """Partner function ``Jt_{n+1}(r; gamma)``.

    ``spec`` is a :class:`PartnerSpec`, or an order ``n`` with ``gamma`` given
    separately.  The regular weighted form is used, so ``r = 0`` is allowed:
    the value there is ``J_{n-1}(0)`` for finite gamma and ``0`` at
    ``gamma = inf`` (n >= 1).
    """
    spec = as_spec(spec, gamma)
    arr = _as_radius(r)
    n = spec.n
    t = bessel_table(n + 1, arr)
    if n == 0:
        value = -t[1]
    elif spec.gamma.is_zero:
        value = t[n - 1].copy()
    elif spec.gamma.is_infinite:
        value = -t[n + 1]
    else:
        b = lower_weight(n, spec.gamma, arr)
        value = (b - 1.0) * t[n + 1] + b * t[n - 1]
    return _out(value, arr.ndim == 0)


def partner_j_direct(spec, r, gamma=None):
    """The same partner written as ``-J_{n+1} + (2n/r) b J_n``; needs ``r > 0``.

    Kept as an independent route for the form-equivalence check.
    """
    spec = as_spec(spec, gamma)
    arr = _as_radius(r, positive=True)
    n = spec.n
    t = bessel_table(n + 1, arr)
    if n == 0 or spec.gamma.is_infinite:
        value = -t[n + 1]
    else:
        b = lower_weight(n, spec.gamma, arr)
        value = -t[n + 1] + (2.0 * n / arr) * b * t[n]
    return _out(value, arr.ndim == 0)


def partner_j_derivative(spec, r, gamma=None):
    """d/dr of the partner, differentiating weights and Bessel factors in closed form."""
    spec = as_spec(spec, gamma)
    arr = _as_radius(r, positive=True)
    return _out(_partner_parts(spec, arr, 1)[1], arr.ndim == 0)


def partner_j_second_derivative(spec, r, gamma=None):
    """d2/dr2 of the partner.

    Obtained by differentiating the first-derivative expression again; the
    partner's own differential equation is never used here.
    """
    spec = as_spec(spec, gamma)
    arr = _as_radius(r, positive=True)
    return _out(_partner_parts(spec, arr, 2)[2], arr.ndim == 0)


def partner_derivatives(spec, r, gamma=None):
    """Tuple ``(Jt, Jt', Jt'')`` on ``r > 0`` in one pass."""
    spec = as_spec(spec, gamma)
    arr = _as_radius(r, positive=True)
    return tuple(_partner_parts(spec, arr, 2))


def damping_g(n: int, gamma, u):
    """Coefficient ``g_{n+1}(u; gamma) = -4n [(2n+1) w + 1] / (w + 1)^2``, ``w = gamma u^(2n)``.

    Parameters
    ----------
    n : int
        Underlying order; ``g`` vanishes identically for ``n = 0``.
    gamma : GammaParam, float or "inf"
        At ``gamma = inf`` the coefficient is 0 for ``u > 0``; ``u = 0`` is
        indeterminate there and rejected.
    u : float or array
        Scaled radius ``k r >= 0``.

    Returns
    -------
    float or ndarray
        Non-positive values.
    """
    n = check_order(n, maximum=MAX_PARTNER_ORDER)
    gamma = GammaParam.parse(gamma)
    arr = _as_radius(u, r_max=math.inf)
    scalar = arr.ndim == 0
    if n == 0:
        return _out(np.zeros_like(arr), scalar)
    if gamma.is_infinite:
        if np.any(arr == 0.0):
            raise DomainError("g at gamma=inf and u=0 is indeterminate")
        return _out(np.zeros_like(arr), scalar)
    # In terms of b = 1/(1+w): [(2n+1) w + 1] / (w+1)^2 = b (2n+1 - 2n b)
    b = lower_weight(n, gamma, arr)
    return _out(-4.0 * n * b * ((2 * n + 1) - 2 * n * b), scalar)


def _bisect(f, lo: float, hi: float, f_lo: float, tol: float) -> float:
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def find_zeros(spec, r_max: float, max_count: int | None = None, gamma=None) -> list[float]:
    """Positive zeros of the partner in ``(0, r_max]``, ascending.

    Sign changes are bracketed on a 0.05 scan and refined by bisection to
    1e-12.  At most ``max_count`` zeros are returned when it is given.
    """
    spec = as_spec(spec, gamma)
    if not (0.0 < r_max <= MAX_RADIUS):
        raise DomainError(f"r_max must lie in (0, {MAX_RADIUS}]")
    if max_count is not None and max_count < 0:
        raise DomainError("max_count must be non-negative")
    count = int(math.ceil(r_max / ZERO_SCAN_STEP))
    grid = np.minimum(ZERO_SCAN_STEP * np.arange(1, count + 1), r_max)
    # keep r_max itself as the last sample
    grid[-1] = r_max
    values = partner_j(spec, grid)

    def f(x):
        return partner_j(spec, x)

    zeros: list[float] = []
    prev_r, prev_v = ZERO_SCAN_STEP * 1e-3, f(ZERO_SCAN_STEP * 1e-3)
    for r_i, v_i in zip(grid, values):
        if max_count is not None and len(zeros) >= max_count:
            break
        if v_i == 0.0:
            zeros.append(float(r_i))
        elif prev_v != 0.0 and (v_i < 0.0) != (prev_v < 0.0):
            zeros.append(_bisect(f, float(prev_r), float(r_i), float(prev_v), ZERO_TOL))
        prev_r, prev_v = r_i, v_i
    return zeros
