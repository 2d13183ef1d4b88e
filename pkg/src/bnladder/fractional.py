"""Fractional-part profiles and exact inner products.

The basic object is the one-parameter family on (0, 1]

    f_theta(x) = {theta/x} - theta * {1/x},        0 < theta <= 1,

with {.} the fractional part.  Substituting u = 1/x and writing the
fractional parts through floors gives

    f_theta(1/u) = theta * floor(u) - floor(theta * u),

so f_theta is a step function of u: it jumps only where u or theta*u
crosses an integer, and is constant in between.  All integrals in this
module exploit that structure and are exact up to float rounding; there
is no quadrature error term, only the cutoff at small x.

For ladder parameters theta = 1/N with integer N the structure is even
simpler: on u in [n, n+1) the profile equals (n mod N)/N, so an inner
product is a single pass over the integer lattice,

    <f_a, f_b> = sum_{n=1}^{U-1} f_a(n) f_b(n) / (n (n+1)) + fragment,

with U = floor(1/x_min) and a final fragment covering (x_min, 1/U].
The neglected mass below the cutoff obeys |tail| <= (1+theta_a)
(1+theta_b) x_min <= 4 x_min because |f_theta| <= 1 + theta.

Pointwise evaluation divides by x, so for x below roughly 1e-12 the
floats in theta/x stop resolving the steps; the integrators never
evaluate pointwise near 0 (they walk the lattice instead), but plots
and spot checks should stay on moderate grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConvergenceError, ParameterError

__all__ = [
    "QuadratureConfig",
    "InnerProductResult",
    "frac",
    "eval_f",
    "breakpoints",
    "l2_norm",
    "inner_direct",
    "pair_inner_matrix",
]

# Denominators beyond this are treated as exact-zero rows: the profile's
# sup is below 2^-62 * U, which is invisible at any supported tolerance.
_HUGE_DENOM = 2**62


@dataclass(frozen=True)
class QuadratureConfig:
    """Accuracy budget shared by the direct and spectral integrators.

    abs_tol            target absolute error for direct inner products;
                       drives the small-x cutoff when x_min is unset.
    rel_tol            relative floor used by convergence-style checks.
    x_min              explicit small-x cutoff; default abs_tol / 8 so the
                       cutoff tail (<= 4 x_min) spends at most half the
                       absolute budget.
    max_subdivisions   cap on the number of exact pieces an integrator may
                       walk; guards against accidentally tiny cutoffs.
    t_max_raw          truncation height for raw spectral integrals.
    gaussian_tail_tol  absolute tail target when truncating Gaussian-
                       smoothed spectral integrals.
    """

    abs_tol: float = 1.0e-6
    rel_tol: float = 1.0e-8
    x_min: float | None = None
    max_subdivisions: int = 100_000_000
    t_max_raw: float = 1000.0
    gaussian_tail_tol: float = 1.0e-10

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0.0 and math.isfinite(self.abs_tol)):
            raise ParameterError(f"abs_tol must be positive, got {self.abs_tol!r}")
        if not (self.rel_tol > 0.0 and math.isfinite(self.rel_tol)):
            raise ParameterError(f"rel_tol must be positive, got {self.rel_tol!r}")
        if self.x_min is not None and not (0.0 < self.x_min < 1.0):
            raise ParameterError(f"x_min must lie in (0, 1), got {self.x_min!r}")
        if self.max_subdivisions < 1:
            raise ParameterError("max_subdivisions must be at least 1")
        if not (self.t_max_raw > 0.0 and math.isfinite(self.t_max_raw)):
            raise ParameterError(f"t_max_raw must be positive, got {self.t_max_raw!r}")
        if not (0.0 < self.gaussian_tail_tol < 1.0):
            raise ParameterError(
                f"gaussian_tail_tol must lie in (0, 1), got {self.gaussian_tail_tol!r}"
            )

    def resolved_x_min(self) -> float:
        return self.x_min if self.x_min is not None else self.abs_tol / 8.0


DEFAULT_QUAD = QuadratureConfig()


@dataclass(frozen=True)
class InnerProductResult:
    """Inner product value plus its cutoff accounting."""

    value: float
    tail_bound: float
    pieces: int


def _check_theta(theta: float, name: str = "theta") -> float:
    theta = float(theta)
    if not (0.0 < theta <= 1.0) or not math.isfinite(theta):
        raise ParameterError(f"{name} must lie in (0, 1], got {theta!r}")
    return theta


def frac(x):
    """Fractional part x - floor(x), elementwise on arrays."""
    return np.asarray(x) - np.floor(x) if isinstance(x, np.ndarray) else x - math.floor(x)


def eval_f(theta: float, x):
    """Evaluate f_theta at x in (0, 1]; x may be a scalar or an array."""
    theta = _check_theta(theta)
    arr = np.asarray(x, dtype=np.float64)
    if np.any(arr <= 0.0) or np.any(arr > 1.0) or not np.all(np.isfinite(arr)):
        raise ParameterError("x must lie in (0, 1]")
    u = 1.0 / arr
    out = theta * np.floor(u) - np.floor(theta * u)
    return float(out) if np.isscalar(x) or arr.ndim == 0 else out


def breakpoints(theta: float, x_min: float, max_count: int | None = None) -> np.ndarray:
    """Jump locations of f_theta in (x_min, 1], sorted ascending.

    These are the points 1/n and theta/m that exceed x_min.  Coincident
    values (theta rational) are reported once.

    >>> breakpoints(0.5, 0.2)
    array([0.25      , 0.33333333, 0.5       , 1.        ])
    """
    theta = _check_theta(theta)
    if not (0.0 < x_min < 1.0):
        raise ParameterError(f"x_min must lie in (0, 1), got {x_min!r}")
    est = (1.0 + theta) / x_min
    cap = max_count if max_count is not None else DEFAULT_QUAD.max_subdivisions
    if est > cap:
        raise ConvergenceError(
            f"breakpoint count ~{est:.3g} exceeds the cap {cap:g}; raise x_min"
        )
    n_max = int(math.floor(1.0 / x_min))
    pts = [1.0 / np.arange(1, n_max + 1, dtype=np.float64)]
    m_max = int(math.floor(theta / x_min))
    if m_max >= 1:
        pts.append(theta / np.arange(1, m_max + 1, dtype=np.float64))
    vals = np.unique(np.concatenate(pts))
    return vals[vals > x_min]


def _unit_denominator(theta: float) -> int | None:
    """Integer N with theta == 1/N (to float accuracy), if one exists."""
    n = round(1.0 / theta)
    if n >= 1 and abs(theta * n - 1.0) <= 8.0 * np.finfo(float).eps * n:
        return n
    return None


def pair_inner_matrix(
    denominators: Sequence[int], x_min: float, max_pieces: int | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """All pairwise inner products <f_(1/Na), f_(1/Nb)> in one lattice pass.

    Returns ``(gram, tail)`` where ``tail[a, b]`` bounds the mass dropped
    below the cutoff.  This is the workhorse behind direct Gram builds:
    one pass over u = 1..floor(1/x_min) evaluates every profile as
    (u mod N)/N and accumulates the rank-one updates with a matrix
    product per chunk.

    Denominators above 2^62 produce exact-zero rows (their profiles are
    numerically indistinguishable from zero at any supported cutoff).
    """
    if not (0.0 < x_min < 1.0):
        raise ParameterError(f"x_min must lie in (0, 1), got {x_min!r}")
    cap = max_pieces if max_pieces is not None else DEFAULT_QUAD.max_subdivisions
    big_u = int(math.floor(1.0 / x_min))
    if big_u > cap:
        raise ConvergenceError(
            f"lattice pass needs {big_u} pieces, above the cap {cap}; raise x_min"
        )
    d = len(denominators)
    for n in denominators:
        if int(n) < 1:
            raise ParameterError(f"denominators must be positive integers, got {n!r}")
    usable = np.array([min(int(n), _HUGE_DENOM) for n in denominators], dtype=np.int64)
    zero_row = np.array([int(n) > _HUGE_DENOM for n in denominators])
    nf = usable.astype(np.float64)

    gram = np.zeros((d, d))
    chunk = 1 << 16
    for lo in range(1, big_u, chunk):
        hi = min(lo + chunk, big_u)
        u = np.arange(lo, hi, dtype=np.int64)
        vals = (u[None, :] % usable[:, None]).astype(np.float64) / nf[:, None]
        vals[zero_row, :] = 0.0
        uf = u.astype(np.float64)
        lengths = 1.0 / (uf * (uf + 1.0))
        gram += (vals * lengths) @ vals.T
    # Fragment (x_min, 1/U]: constant piece cut short by the cutoff.
    frag_len = 1.0 / big_u - x_min
    if frag_len > 0.0:
        fv = (np.int64(big_u) % usable).astype(np.float64) / nf
        fv[zero_row] = 0.0
        gram += np.outer(fv, fv) * frag_len
    gram = 0.5 * (gram + gram.T)
    theta = 1.0 / nf
    theta[zero_row] = 0.0
    tail = x_min * np.outer(1.0 + theta, 1.0 + theta)
    return gram, tail


def _pair_inner_general(
    theta_a: float, theta_b: float, x_min: float, cap: int
) -> tuple[float, int]:
    """Step-function sweep for parameters that are not unit fractions."""
    big_u = 1.0 / x_min
    est = (1.0 + theta_a + theta_b) * big_u
    if est > cap:
        raise ConvergenceError(
            f"sweep needs ~{est:.3g} pieces, above the cap {cap}; raise x_min"
        )
    total = 0.0
    pieces = 0
    span = 65536.0
    lo = 1.0
    while lo < big_u:
        hi = min(lo + span, big_u)
        edges = [np.array([lo, hi]), np.arange(math.ceil(lo), hi, dtype=np.float64)]
        for th in (theta_a, theta_b):
            m0 = math.ceil(th * lo)
            m1 = math.ceil(th * hi)
            if m1 > m0:
                edges.append(np.arange(m0, m1, dtype=np.float64) / th)
        e = np.unique(np.concatenate(edges))
        e = e[(e >= lo) & (e <= hi)]
        um = 0.5 * (e[:-1] + e[1:])
        fa = theta_a * np.floor(um) - np.floor(theta_a * um)
        fb = theta_b * np.floor(um) - np.floor(theta_b * um)
        lengths = (e[1:] - e[:-1]) / (e[:-1] * e[1:])  # x-length of each u-piece
        total += float(np.dot(fa * fb, lengths))
        pieces += e.size - 1
        lo = hi
    return total, pieces


def inner_direct(
    theta_a: float,
    theta_b: float,
    quad: QuadratureConfig | None = None,
    full_output: bool = False,
):
    """L2(0, 1] inner product <f_{theta_a}, f_{theta_b}>.

    Exact piecewise integration above the cutoff x_min resolved from
    ``quad``; the returned value omits at most (1+theta_a)(1+theta_b)
    x_min of tail mass.  With ``full_output=True`` an
    :class:`InnerProductResult` carrying that bound and the piece count
    is returned instead of a bare float.
    """
    theta_a = _check_theta(theta_a, "theta_a")
    theta_b = _check_theta(theta_b, "theta_b")
    quad = quad if quad is not None else DEFAULT_QUAD
    x_min = quad.resolved_x_min()
    if theta_a == 1.0 or theta_b == 1.0:
        # f_1 is identically zero: {1/x} - {1/x}.
        res = InnerProductResult(value=0.0, tail_bound=0.0, pieces=0)
        return res if full_output else 0.0
    na = _unit_denominator(theta_a)
    nb = _unit_denominator(theta_b)
    if na is not None and nb is not None:
        gram, tail = pair_inner_matrix([na, nb], x_min, quad.max_subdivisions)
        res = InnerProductResult(
            value=float(gram[0, 1]),
            tail_bound=float(tail[0, 1]),
            pieces=int(math.floor(1.0 / x_min)),
        )
    else:
        value, pieces = _pair_inner_general(
            theta_a, theta_b, x_min, quad.max_subdivisions
        )
        res = InnerProductResult(
            value=value,
            tail_bound=(1.0 + theta_a) * (1.0 + theta_b) * x_min,
            pieces=pieces,
        )
    return res if full_output else res.value


def l2_norm(theta: float, quad: QuadratureConfig | None = None) -> float:
    """L2 norm of f_theta on (0, 1] (nonnegative square root)."""
    return math.sqrt(inner_direct(theta, theta, quad))
