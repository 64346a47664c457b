"""Cylindrical Bessel functions of the first kind, integer order.

Values are computed from scratch in double precision:

* ascending power series for ``r <= SERIES_SWITCH``;
* Miller backward recurrence normalised with
  ``J_0 + 2 * sum(J_2k) = 1`` above it.

All public functions broadcast over numpy arrays in ``r`` and return a
Python float when every input is scalar.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import DomainError

MAX_ORDER = 20
MAX_RADIUS = 50.0
SERIES_SWITCH = 8.0

# Derivatives of J_n need J_{n+2}; the table evaluator is allowed a margin.
_TABLE_MAX_ORDER = MAX_ORDER + 4
_RESCALE_AT = 1e200


def check_order(n, minimum: int = 0, maximum: int = MAX_ORDER) -> int:
    """Validate an integer order and return it as ``int``."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise DomainError(f"order must be an integer, got {n!r}")
    n = int(n)
    if n < minimum:
        raise DomainError(f"order n={n} must be >= {minimum}")
    if n > maximum:
        raise DomainError(f"order n={n} exceeds the supported maximum {maximum}")
    return n


def _as_radius(r, *, positive: bool = False, r_max: float = MAX_RADIUS):
    arr = np.asarray(r, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("radius must be finite")
    if positive:
        if np.any(arr <= 0.0):
            raise DomainError("radius must be > 0")
    elif np.any(arr < 0.0):
        raise DomainError("radius must be >= 0")
    if np.any(arr > r_max):
        raise DomainError(f"radius exceeds the supported maximum {r_max}")
    return arr


def _out(value: np.ndarray, scalar: bool):
    return float(value) if scalar else value


@dataclass(frozen=True)
class RadialGrid:
    """Strictly increasing, non-negative sample radii."""

    points: np.ndarray = field(repr=False)

    def __post_init__(self):
        pts = np.array(self.points, dtype=float).ravel()
        if pts.size == 0:
            raise DomainError("radial grid is empty")
        if not np.all(np.isfinite(pts)):
            raise DomainError("radial grid contains non-finite values")
        if np.any(pts < 0.0):
            raise DomainError("radial grid contains negative radii")
        if pts.size > 1 and np.any(np.diff(pts) <= 0.0):
            raise DomainError("radial grid must be strictly increasing")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def arange(cls, start: float, stop: float, step: float) -> "RadialGrid":
        """Grid ``start, start+step, ...`` including ``stop`` up to rounding."""
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return cls(np.minimum(start + step * np.arange(count), stop))

    def __len__(self) -> int:
        return self.points.size

    @property
    def contains_origin(self) -> bool:
        return bool(self.points[0] == 0.0)


@dataclass(frozen=True)
class ResidualReport:
    """Summary of the pointwise residual of one identity over a grid."""

    max_abs: float
    rms: float
    argmax_point: float
    n_points: int

    @classmethod
    def from_residual(cls, points, residual) -> "ResidualReport":
        points = np.asarray(points, dtype=float).ravel()
        res = np.abs(np.asarray(residual, dtype=float)).ravel()
        if res.size != points.size or res.size == 0:
            raise ValueError("points and residual must be non-empty and aligned")
        i = int(np.argmax(res))
        peak = float(res[i])
        # scaled so tiny residuals do not underflow when squared
        rms = peak * float(np.sqrt(np.mean((res / peak) ** 2))) if peak > 0 else 0.0
        return cls(
            max_abs=peak,
            rms=min(rms, peak),
            argmax_point=float(points[i]),
            n_points=int(res.size),
        )

    def passes(self, tol: float) -> bool:
        return self.max_abs <= tol

    def as_dict(self) -> dict:
        return {
            "max_abs": self.max_abs,
            "rms": self.rms,
            "argmax_point": self.argmax_point,
            "n_points": self.n_points,
        }


# ---------------------------------------------------------------------------
# evaluation kernels


def series_table(nmax: int, x: np.ndarray) -> np.ndarray:
    """J_0..J_nmax by the ascending series; rows are orders.

    ``J_n(x) = sum_m (-1)^m (x/2)^(2m+n) / (m! (m+n)!)``.  Accurate to about
    1e-14 absolute for ``x <= 8``; cancellation ruins it for large ``x``.
    """
    x = np.asarray(x, dtype=float)
    half = 0.5 * x
    q = -(half * half)
    out = np.empty((nmax + 1,) + x.shape)
    lead = np.ones_like(x)  # (x/2)^n / n!
    for n in range(nmax + 1):
        if n > 0:
            lead = lead * half / n
        term = lead.copy()
        total = lead.copy()
        m = 0
        while True:
            m += 1
            term = term * q / (m * (m + n))
            total += term
            if not np.any(np.abs(term) > 1e-17 * np.maximum(np.abs(total), 1e-300)):
                break
            if m > 200:
                break
        out[n] = total
    return out


def _miller_start(nmax: int, x: np.ndarray) -> np.ndarray:
    top = np.maximum(float(nmax), x)
    start = top + 20.0 + 4.0 * np.cbrt(top) + 0.5 * np.sqrt(40.0 * top)
    start = np.ceil(start).astype(int)
    return start + (start % 2)


def miller_table(nmax: int, x: np.ndarray) -> np.ndarray:
    """J_0..J_nmax by backward recurrence; rows are orders.

    Each point starts its own recurrence at an even index well above
    ``max(nmax, x)``.  Requires ``x > 0``.
    """
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    out = np.zeros((nmax + 1, flat.size))
    if flat.size == 0:
        return out.reshape((nmax + 1,) + x.shape)
    start = _miller_start(nmax, flat)
    top = int(start.max())
    two_over_x = 2.0 / flat
    j_hi = np.zeros_like(flat)  # f_{k+1}
    j_k = np.zeros_like(flat)  # f_k
    norm = np.zeros_like(flat)
    for k in range(top, 0, -1):
        seed = start == k
        if np.any(seed):
            j_k = np.where(seed, 1e-30, j_k)
            j_hi = np.where(seed, 0.0, j_hi)
        if k <= nmax:
            out[k] = j_k
        if k % 2 == 0:
            norm += 2.0 * j_k
        j_lo = k * two_over_x * j_k - j_hi
        big = np.abs(j_lo) > _RESCALE_AT
        if np.any(big):
            scale = np.where(big, 1.0 / _RESCALE_AT, 1.0)
            j_lo *= scale
            j_k *= scale
            norm *= scale
            out *= scale
        j_hi, j_k = j_k, j_lo
    out[0] = j_k
    norm += j_k
    out /= norm
    return out.reshape((nmax + 1,) + x.shape)


def bessel_table(nmax: int, r) -> np.ndarray:
    """J_0(r)..J_nmax(r) stacked along the first axis.

    Unvalidated fast path used by the other modules; ``r`` must already be
    a finite non-negative array within the supported radius.
    """
    if nmax > _TABLE_MAX_ORDER:
        raise DomainError(f"order {nmax} exceeds the table limit {_TABLE_MAX_ORDER}")
    r = np.asarray(r, dtype=float)
    out = np.empty((nmax + 1,) + r.shape)
    small = r <= SERIES_SWITCH
    if np.any(small):
        out[:, small] = series_table(nmax, r[small])
    if np.any(~small):
        out[:, ~small] = miller_table(nmax, r[~small])
    return out


def signed_order(table: np.ndarray, m: int) -> np.ndarray:
    """Row ``m`` of a Bessel table, with ``J_{-m} = (-1)^m J_m``."""
    if m >= 0:
        return table[m]
    return table[-m] if m % 2 == 0 else -table[-m]


# ---------------------------------------------------------------------------
# public API


def bessel_j(n: int, r):
    """J_n(r) for integer ``0 <= n <= 20`` and ``0 <= r <= 50``.

    Examples
    --------
    >>> bessel_j(0, 0.0)
    1.0
    >>> round(bessel_j(0, 1.0), 15)
    0.765197686557967
    """
    n = check_order(n)
    arr = _as_radius(r)
    return _out(bessel_table(n, arr)[n], arr.ndim == 0)


def bessel_j_derivative(n: int, r):
    """dJ_n/dr from ``J_n' = (J_{n-1} - J_{n+1}) / 2``, ``J_{-1} = -J_1``."""
    n = check_order(n)
    arr = _as_radius(r, positive=True)
    t = bessel_table(n + 1, arr)
    return _out(0.5 * (signed_order(t, n - 1) - t[n + 1]), arr.ndim == 0)


def bessel_j_second_derivative(n: int, r):
    """d2J_n/dr2 = (J_{n-2} - 2 J_n + J_{n+2}) / 4, the derivative identity applied twice."""
    n = check_order(n)
    arr = _as_radius(r, positive=True)
    t = bessel_table(n + 2, arr)
    value = 0.25 * (signed_order(t, n - 2) - 2.0 * t[n] + t[n + 2])
    return _out(value, arr.ndim == 0)


def ladder_raise(n: int, r):
    """Raising operator ``(d/dr - n/r) J_n(r)``; equals ``-J_{n+1}(r)``.

    The derivative comes from the difference identity, so the result is an
    independent route to ``-J_{n+1}`` rather than a lookup of it.
    """
    n = check_order(n)
    arr = _as_radius(r, positive=True)
    t = bessel_table(n + 1, arr)
    deriv = 0.5 * (signed_order(t, n - 1) - t[n + 1])
    return _out(deriv - n / arr * t[n], arr.ndim == 0)


def ladder_lower(n: int, r):
    """Lowering operator ``(d/dr + n/r) J_n(r)`` for ``n >= 1``; equals ``J_{n-1}(r)``."""
    n = check_order(n, minimum=1)
    arr = _as_radius(r, positive=True)
    t = bessel_table(n + 1, arr)
    deriv = 0.5 * (t[n - 1] - t[n + 1])
    return _out(deriv + n / arr * t[n], arr.ndim == 0)
