"""Buchstab function ω(u) and its piecewise numerical bounds.

ω is determined by ω(u) = 1/u on 1 ≤ u ≤ 2 and the delay equation
(u·ω(u))' = ω(u−1) for u ≥ 2.  It is Lipschitz, has a kink at u = 2, and
settles rapidly into the band [0.5612, 0.5617] for u ≥ 4.

Three bounding variants accompany the gridded solution:

  omega_lower / omega_upper   piecewise closed forms
      1/u                                 on [1, 2)
      (1+log(u−1))/u                      on [2, 3)
      (1+log(u−1))/u + (1/u)∫₂^{u−1} log(t−1)/t dt     on [3, 4)
        (floored at 0.5607 / capped at 0.5644; neither clamp ever binds
         because the closed form stays inside [0.56082, 0.56439] there)
      0.5612 / 0.5617                     on [4, ∞)
  omega_simple_upper          max(1/u, 0.5672)

On [1, 4) the closed form is ω exactly, so the two bounds coincide there;
only the u ≥ 4 tail is a genuine two-sided enclosure.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

OMEGA_FLOOR_3_4 = 0.5607
OMEGA_CEIL_3_4 = 0.5644
OMEGA_LOWER_TAIL = 0.5612
OMEGA_UPPER_TAIL = 0.5617
OMEGA_SIMPLE_CAP = 0.5672

DEFAULT_U_MAX = 8.0
DEFAULT_STEP = 1e-4
MAX_U_MAX = 40.0

_SIMPSON_PANELS = 64


class BuchstabDomainError(ValueError):
    """Raised for evaluation below u = 1 (u <= 0 for the simple bound)."""


class TableConstructionError(ValueError):
    """Raised when a freshly integrated table violates its own bounds."""


def _log_integral_nodes(w):
    """∫₂^w log(t−1)/t dt for w in [2, 3), composite Simpson, fixed panels.

    The integrand is smooth and bounded by log(2)/2 on [2,3]; 64 panels give
    error below 1e−9, which is all the [3,4) branch ever needs.
    """
    w = np.asarray(w, dtype=float)
    h = (w - 2.0) / _SIMPSON_PANELS
    j = np.arange(_SIMPSON_PANELS + 1)
    t = 2.0 + np.multiply.outer(j, h)
    f = np.log(t - 1.0) / t
    coeff = np.full(_SIMPSON_PANELS + 1, 2.0)
    coeff[1::2] = 4.0
    coeff[0] = coeff[-1] = 1.0
    return np.tensordot(coeff, f, axes=(0, 0)) * h / 3.0


@functools.lru_cache(maxsize=4096)
def _log_integral_scalar(w: float) -> float:
    return float(_log_integral_nodes(w))


def _closed_form(u):
    """Exact ω on [1, 4): the three closed-form branches, vectorized."""
    u = np.asarray(u, dtype=float)
    out = np.empty_like(u)
    b1 = u < 2.0
    b2 = (u >= 2.0) & (u < 3.0)
    b3 = u >= 3.0
    out[b1] = 1.0 / u[b1]
    out[b2] = (1.0 + np.log(u[b2] - 1.0)) / u[b2]
    if np.any(b3):
        ub = u[b3]
        out[b3] = ((1.0 + np.log(ub - 1.0)) + _log_integral_nodes(ub - 1.0)) / ub
    return out


def _bound(u, tail: float, clamp: bool, lower: bool):
    u_arr = np.asarray(u, dtype=float)
    if np.any(u_arr < 1.0):
        raise BuchstabDomainError("omega bounds are defined for u >= 1")
    out = np.empty_like(u_arr)
    head = u_arr < 4.0
    out[head] = _closed_form(u_arr[head])
    if clamp:
        mid = head & (u_arr >= 3.0)
        if lower:
            out[mid] = np.maximum(out[mid], OMEGA_FLOOR_3_4)
        else:
            out[mid] = np.minimum(out[mid], OMEGA_CEIL_3_4)
    out[~head] = tail
    return float(out) if np.isscalar(u) or np.ndim(u) == 0 else out


def omega_lower(u, clamp: bool = True):
    """Pointwise lower bound ω₀(u); exact ω on [1,4), 0.5612 beyond."""
    return _bound(u, OMEGA_LOWER_TAIL, clamp, lower=True)


def omega_upper(u, clamp: bool = True):
    """Pointwise upper bound ω₁(u); exact ω on [1,4), 0.5617 beyond."""
    return _bound(u, OMEGA_UPPER_TAIL, clamp, lower=False)


def omega_simple_upper(u):
    """Coarse bound max(1/u, 0.5672), valid for all u > 0."""
    u_arr = np.asarray(u, dtype=float)
    if np.any(u_arr <= 0.0):
        raise BuchstabDomainError("simple bound needs u > 0")
    out = np.maximum(1.0 / u_arr, OMEGA_SIMPLE_CAP)
    return float(out) if np.isscalar(u) or np.ndim(u) == 0 else out


@dataclass(frozen=True)
class BuchstabTable:
    """Gridded ω on [1, u_max]; immutable, safe for concurrent reads.

    values[k] approximates ω(1 + k*step).  Beyond u_max evaluation returns
    the last grid value: for u ≥ 4 the function is pinned inside a band of
    width 5e−4, so the constant tail is harmless at the tolerances used here.
    """

    u_start: float
    step: float
    values: np.ndarray = field(repr=False)
    u_max: float

    def __post_init__(self):
        self.values.setflags(write=False)

    def eval(self, u):
        """Linear interpolation on the grid; u < 1 is a domain error."""
        u_arr = np.asarray(u, dtype=float)
        if np.any(u_arr < 1.0):
            raise BuchstabDomainError("omega(u) is defined for u >= 1")
        pos = (u_arr - self.u_start) / self.step
        n = self.values.shape[0]
        idx = np.clip(pos.astype(np.int64), 0, n - 2)
        frac = np.clip(pos - idx, 0.0, 1.0)
        out = self.values[idx] * (1.0 - frac) + self.values[idx + 1] * frac
        return float(out) if np.isscalar(u) or np.ndim(u) == 0 else out

    @property
    def grid(self) -> np.ndarray:
        return self.u_start + self.step * np.arange(self.values.shape[0])


def build_table(u_max: float = DEFAULT_U_MAX, step: float = DEFAULT_STEP) -> BuchstabTable:
    """Integrate (u·ω)' = ω(u−1) forward from u = 2 on a uniform grid.

    Trapezoidal update on g(u) = u·ω(u); the delay term ω(u−1) is read from
    the finished part of the table (exactly on-grid when 1/step is integral,
    else by linear interpolation).  Closed form 1/u seeds [1, 2].
    """
    if not (u_max >= 4.0):
        raise ValueError("u_max must be >= 4")
    if u_max > MAX_U_MAX:
        raise ValueError(f"u_max capped at {MAX_U_MAX}; beyond it the constant tail is used anyway")
    if not (0.0 < step <= 1e-3):
        raise ValueError("step must be in (0, 1e-3]")

    n = int(round((u_max - 1.0) / step)) + 1
    u = 1.0 + step * np.arange(n)
    values = np.empty(n)

    k2 = int(round(1.0 / step))  # index of u = 2 (grid spans exactly [1, u_max])
    values[: k2 + 1] = 1.0 / u[: k2 + 1]

    m = 1.0 / step
    m_int = int(round(m)) if abs(m - round(m)) < 1e-9 else None

    def delayed(k: int) -> float:
        # ω(u_k − 1), read from already-computed entries (index k − m < k).
        if m_int is not None:
            return values[k - m_int]
        pos = k - m
        i = int(math.floor(pos))
        frac = pos - i
        return values[i] * (1.0 - frac) + values[i + 1] * frac

    g = 2.0 * values[k2]
    half = 0.5 * step
    for k in range(k2, n - 1):
        g += half * (delayed(k) + delayed(k + 1))
        values[k + 1] = g / u[k + 1]

    table = BuchstabTable(u_start=1.0, step=step, values=values, u_max=u_max)
    _validate(table)
    return table


def _validate(table: BuchstabTable) -> None:
    """Check the construction invariants; name the first violated grid point."""
    u = table.grid
    v = table.values
    tol = 1e-6

    exact = u <= 2.0
    bad = np.abs(v[exact] - 1.0 / u[exact]) > 1e-12
    if np.any(bad):
        raise TableConstructionError(f"exact branch violated at u = {u[exact][bad][0]:.6f}")

    mid = u >= 2.0
    lo = omega_lower(u[mid])
    hi = omega_upper(u[mid])
    bad = (v[mid] < lo - tol) | (v[mid] > hi + tol)
    if np.any(bad):
        raise TableConstructionError(
            f"step too coarse: omega bounds violated at u = {u[mid][bad][0]:.6f}"
        )

    bad = v > omega_simple_upper(u) + tol
    if np.any(bad):
        raise TableConstructionError(f"simple bound violated at u = {u[bad][0]:.6f}")

    tail = u >= 4.0
    bad = (v[tail] < OMEGA_LOWER_TAIL - tol) | (v[tail] > OMEGA_UPPER_TAIL + tol)
    if np.any(bad):
        raise TableConstructionError(f"tail band violated at u = {u[tail][bad][0]:.6f}")
