"""Gram matrices of ladder profiles, direct and spectral.

Two independent routes produce the same raw Gram matrix:

* direct: exact piecewise integration in x (see :mod:`.fractional`);
* spectral: the Parseval identity <f_a, f_b> = (1/pi) *
  integral_0^inf Re[M_a(1/2+it) conj(M_b(1/2+it))] dt, truncated at
  ``t_max_raw`` and integrated with fixed Gauss-Legendre panels.

The raw spectral integrand decays only like (log t)/t^2, so truncation
leaves a visible deficit; every spectral entry therefore carries an error
estimate combining an embedded-rule quadrature difference with a tail
estimate based on the mean-square growth of zeta,
mean |zeta(1/2+it)|^2 ~ log(t/2pi) + 2 gamma.  The estimate is a
plausibility budget, not a rigorous bound: on the diagonal the actual
deficit is what the comparison budget in cross-validation accounts for.

Smoothed Gram matrices weight the spectral integrand by
psi_W(t)^2 = (epsilon + exp(-(t/W)^2))^2.  Expanding the square lets the
epsilon^2 part reuse the exact direct integrator, while the two
Gaussian-tapered parts are integrated on a short grid truncated where the
taper pushes the tail below ``gaussian_tail_tol``.  That split is what the
hybrid method means for smoothed matrices; for raw matrices hybrid falls
back to direct, which is both faster and exact.

Grids are cached per (t_max, panel_width), and panel widths are quantized
to 0.25 / 2^m so windows of different sizes share zeta evaluations.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, ParameterError
from .fractional import DEFAULT_QUAD, QuadratureConfig, pair_inner_matrix
from .ladder import IndexWindow, LadderIndex, LadderPoint, theta_of
from .mellin import SmoothingParams
from .zeta import zeta_half_grid

__all__ = [
    "GramMatrix",
    "CrossValidationReport",
    "KernelFormComparison",
    "build_gram",
    "inner_spectral",
    "spectral_product",
    "cross_validate",
    "compare_kernel_forms",
    "gram_to_csv",
    "gram_to_json",
    "gram_from_json",
]

KINDS = ("raw", "smoothed")
METHODS = ("direct", "spectral", "hybrid")

_EULER_GAMMA = float(np.euler_gamma)

_GL15 = np.polynomial.legendre.leggauss(15)
_GL7 = np.polynomial.legendre.leggauss(7)

_grid_cache: dict[tuple[float, float], "_SpectralGrid"] = {}


@dataclass(frozen=True)
class _SpectralGrid:
    """Panelized quadrature grid on [0, t_max] with its zeta kernel.

    ``w_quad`` integrates with the 15-point rule; ``w_diff`` yields the
    difference between the 15- and 7-point results in a single dot
    product, which is the per-entry quadrature error proxy.
    """

    t_max: float
    panel_width: float
    nodes: np.ndarray
    w_quad: np.ndarray
    w_diff: np.ndarray
    kernel: np.ndarray  # zeta(1/2 + it) / (1/2 + it) at the nodes


def _panel_width(points: tuple[LadderPoint, ...]) -> float:
    # Highest phase frequency present is |mu| <= 2 max |log theta|; add a
    # few units for the zeta phase itself, then keep ~8 radians per panel
    # (far inside the comfort zone of a 15-point rule).
    omega = max((2.0 * abs(p.log_theta) for p in points), default=0.0) + 4.0
    h = 0.25
    while h > 8.0 / omega:
        h *= 0.5
    return h


def _spectral_grid(t_max: float, h: float) -> _SpectralGrid:
    key = (float(t_max), float(h))
    got = _grid_cache.get(key)
    if got is not None:
        return got
    n_panels = int(math.ceil(t_max / h))
    edges = np.minimum(np.arange(n_panels + 1) * h, t_max)
    mids = 0.5 * (edges[:-1] + edges[1:])
    halves = 0.5 * (edges[1:] - edges[:-1])
    x15, w15 = _GL15
    x7, w7 = _GL7
    per = 15 + 7
    nodes = np.empty(n_panels * per)
    w_quad = np.zeros(n_panels * per)
    w_diff = np.empty(n_panels * per)
    for i in range(n_panels):
        base = i * per
        nodes[base : base + 15] = mids[i] + halves[i] * x15
        nodes[base + 15 : base + per] = mids[i] + halves[i] * x7
        w_quad[base : base + 15] = halves[i] * w15
        w_diff[base : base + 15] = halves[i] * w15
        w_diff[base + 15 : base + per] = -halves[i] * w7
    kernel = zeta_half_grid(nodes) / (0.5 + 1j * nodes)
    grid = _SpectralGrid(
        t_max=float(t_max),
        panel_width=float(h),
        nodes=nodes,
        w_quad=w_quad,
        w_diff=w_diff,
        kernel=kernel,
    )
    _grid_cache[key] = grid
    return grid


def _transform_amplitudes(points: tuple[LadderPoint, ...]):
    theta = np.array([p.theta for p in points])
    # sqrt(theta) via exp(log_theta / 2) so deep indices degrade to 0
    # instead of raising; log_theta == 0.0 keeps the theta = 1 row exact.
    sqrt_theta = np.array([math.exp(0.5 * p.log_theta) for p in points])
    log_theta = np.array([p.log_theta for p in points])
    return theta, sqrt_theta, log_theta


def _pair_matrices(
    points: tuple[LadderPoint, ...],
    grid: _SpectralGrid,
    weights: np.ndarray,
    diffs: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Accumulate (1/pi) * sum_nodes w * M_a conj(M_b) for all pairs.

    Returns the value matrix and the quadrature-difference matrix, both
    symmetric and real.  Work is slabbed over nodes so an n-point window
    never materializes more than a few million transform values.
    """
    n = len(points)
    theta, sqrt_theta, log_theta = _transform_amplitudes(points)
    acc = np.zeros((n, n), dtype=np.complex128)
    dacc = np.zeros((n, n), dtype=np.complex128)
    m = grid.nodes.size
    slab = max(1024, int(4.0e6 / max(n, 1)))
    for lo in range(0, m, slab):
        hi = min(lo + slab, m)
        t = grid.nodes[lo:hi]
        rows = grid.kernel[lo:hi][None, :] * (
            theta[:, None] - sqrt_theta[:, None] * np.exp(1j * np.outer(log_theta, t))
        )
        rows_h = rows.conj().T
        acc += (rows * weights[lo:hi]) @ rows_h
        dacc += (rows * diffs[lo:hi]) @ rows_h
    vals = acc.real / math.pi
    errs = np.abs(dacc.real) / math.pi
    return 0.5 * (vals + vals.T), 0.5 * (errs + errs.T)


def _mean_sq_tail(t_from: float) -> float:
    """integral_T^inf (log(t/2pi) + 2 gamma) / (1/4 + t^2) dt.

    Alternating series in T^-2; the integrand is the mean-square density
    of zeta on the critical line over the kernel 1/|s|^2.
    """
    t_from = max(t_from, 10.0)  # asymptotic mean is meaningless below ~2pi
    lead = math.log(t_from / (2.0 * math.pi)) + 2.0 * _EULER_GAMMA
    out = 0.0
    for k in range(12):
        q = 2 * k + 1
        out += (-0.25) ** k * (lead / q + 1.0 / (q * q)) / t_from**q
    return out


def _amp_bound(p: LadderPoint) -> float:
    # |theta - theta^s| <= theta + sqrt(theta), and exactly 0 at theta = 1.
    if p.denominator == 1:
        return 0.0
    return p.theta + math.exp(0.5 * p.log_theta)


def _raw_tail_estimates(points: tuple[LadderPoint, ...], t_max: float) -> np.ndarray:
    amps = np.array([_amp_bound(p) for p in points])
    return np.outer(amps, amps) * (_mean_sq_tail(t_max) / math.pi)


def _gaussian_cutoff(smoothing: SmoothingParams, quad: QuadratureConfig) -> float:
    """Doubling search for the height where the tapered tail dips below
    gaussian_tail_tol."""
    w, eps = smoothing.W, smoothing.epsilon

    def bound(t: float) -> float:
        g1 = math.exp(-((t / w) ** 2))
        g2 = math.exp(-2.0 * ((t / w) ** 2))
        return (2.0 * eps * g1 + g2) * 4.0 * _mean_sq_tail(t) / math.pi

    t = 2.0 * w
    while bound(t) > quad.gaussian_tail_tol:
        t *= 2.0
        if t > 1.0e6:
            raise ConvergenceError(
                f"Gaussian taper W={w:g} will not reach tail {quad.gaussian_tail_tol:g}"
            )
    return t


def _epsilon_cutoff(eps: float, quad: QuadratureConfig) -> float:
    # The epsilon^2 slice tolerates a cutoff larger by 1/eps^2; cap well
    # inside (0, 1) so the lattice pass stays meaningful.
    base = quad.resolved_x_min()
    if eps <= 0.0:
        return base
    return min(0.25, max(base, base / (eps * eps)))


def _as_point(p) -> LadderPoint:
    if isinstance(p, LadderPoint):
        return p
    return theta_of(p)


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric matrix of pairwise inner products over a window.

    Rows and columns follow the window's row-major order (j outer, k
    inner); ``points[i]`` is the ladder point behind row i.
    ``err_estimate`` holds per-entry absolute error budgets: cutoff tails
    for direct builds, quadrature-difference plus truncation tail for
    spectral ones.
    """

    window: IndexWindow
    kind: str
    method: str
    smoothing: SmoothingParams | None
    entries: np.ndarray
    err_estimate: np.ndarray
    points: tuple[LadderPoint, ...]
    quad: QuadratureConfig

    @property
    def size(self) -> int:
        return len(self.points)

    def index_of(self, ix: LadderIndex | tuple[int, int]) -> int:
        return self.window.position(ix)

    def entry(self, a, b) -> float:
        return float(self.entries[self.index_of(a), self.index_of(b)])


def _validate_build(kind: str, method: str | None, smoothing: SmoothingParams | None):
    if kind not in KINDS:
        raise ParameterError(f"kind must be one of {KINDS}, got {kind!r}")
    if kind == "raw":
        if smoothing is not None:
            raise ParameterError("raw Gram takes no smoothing parameters")
        method = method if method is not None else "direct"
    else:
        if smoothing is None:
            raise ParameterError("smoothed Gram requires SmoothingParams")
        method = method if method is not None else "hybrid"
    if method not in METHODS:
        raise ParameterError(f"method must be one of {METHODS}, got {method!r}")
    if kind == "smoothed" and method == "direct":
        raise ParameterError(
            "smoothed entries exist only spectrally; use method='hybrid' or 'spectral'"
        )
    return method


def _direct_raw(points, quad):
    denoms = [p.denominator for p in points]
    x_min = quad.resolved_x_min()
    return pair_inner_matrix(denoms, x_min, quad.max_subdivisions)


def _spectral_raw(points, quad):
    h = _panel_width(points)
    grid = _spectral_grid(quad.t_max_raw, h)
    vals, qerr = _pair_matrices(points, grid, grid.w_quad, grid.w_diff)
    tails = _raw_tail_estimates(points, quad.t_max_raw)
    return vals, qerr + tails


def _spectral_smoothed(points, smoothing, quad):
    h = _panel_width(points)
    t_cut = _gaussian_cutoff(smoothing, quad)
    grid = _spectral_grid(t_cut, h)
    g1 = np.exp(-((grid.nodes / smoothing.W) ** 2))
    taper = 2.0 * smoothing.epsilon * g1 + g1 * g1
    vals, qerr = _pair_matrices(points, grid, grid.w_quad * taper, grid.w_diff * taper)
    errs = qerr + quad.gaussian_tail_tol
    eps = smoothing.epsilon
    if eps > 0.0:
        denoms = [p.denominator for p in points]
        x_min_e = _epsilon_cutoff(eps, quad)
        base, tail = pair_inner_matrix(denoms, x_min_e, quad.max_subdivisions)
        vals = vals + (eps * eps) * base
        errs = errs + (eps * eps) * tail
    return vals, errs


def build_gram(
    window: IndexWindow,
    kind: str = "raw",
    method: str | None = None,
    smoothing: SmoothingParams | None = None,
    quad: QuadratureConfig | None = None,
) -> GramMatrix:
    """Build the Gram matrix of a window.

    Raw matrices default to the direct route; ``method='spectral'``
    switches to truncated Parseval integration (useful as a consistency
    probe, see :func:`cross_validate`).  Smoothed matrices default to
    ``hybrid``: the epsilon^2 share of psi^2 goes through the exact
    direct integrator and only the Gaussian-tapered share is integrated
    spectrally.  ``method='spectral'`` on a smoothed build is accepted as
    an alias; the decomposition is the only evaluation the taper admits.
    """
    quad = quad if quad is not None else DEFAULT_QUAD
    method = _validate_build(kind, method, smoothing)
    points = tuple(window.points())
    if kind == "raw":
        if method in ("direct", "hybrid"):
            vals, errs = _direct_raw(points, quad)
        else:
            vals, errs = _spectral_raw(points, quad)
    else:
        vals, errs = _spectral_smoothed(points, smoothing, quad)
    vals = 0.5 * (vals + vals.T)
    errs = 0.5 * (errs + errs.T)
    return GramMatrix(
        window=window,
        kind=kind,
        method=method,
        smoothing=smoothing,
        entries=vals,
        err_estimate=errs,
        points=points,
        quad=quad,
    )


def inner_spectral(
    a,
    b,
    smoothing: SmoothingParams | None = None,
    quad: QuadratureConfig | None = None,
    full_output: bool = False,
):
    """Spectral inner product of two ladder points.

    Raw (no smoothing): truncated Parseval integral with a reported
    error budget.  Smoothed: the psi^2-weighted integral via the hybrid
    decomposition.  ``full_output=True`` returns ``(value, err_estimate)``.
    """
    quad = quad if quad is not None else DEFAULT_QUAD
    pa, pb = _as_point(a), _as_point(b)
    points = (pa,) if pa.index == pb.index else (pa, pb)
    if smoothing is None:
        vals, errs = _spectral_raw(points, quad)
    else:
        vals, errs = _spectral_smoothed(points, smoothing, quad)
    i, j = (0, 0) if len(points) == 1 else (0, 1)
    value, err = float(vals[i, j]), float(errs[i, j])
    return (value, err) if full_output else value


def spectral_product(a, b, t: float, smoothing: SmoothingParams | None = None) -> complex:
    """Pointwise spectral integrand M_a(1/2+it) conj(M_b(1/2+it)),
    weighted by psi(t)^2 when smoothing is given."""
    from .mellin import mellin_closed, psi

    pa, pb = _as_point(a), _as_point(b)
    ma = mellin_closed(pa.theta, t, log_theta=pa.log_theta)
    mb = mellin_closed(pb.theta, t, log_theta=pb.log_theta)
    out = ma * mb.conjugate()
    if smoothing is not None:
        out *= psi(t, smoothing) ** 2
    return out


@dataclass(frozen=True)
class CrossValidationReport:
    """Entrywise comparison of the direct and spectral raw builds."""

    window: IndexWindow
    max_abs_diff: float
    mean_abs_diff: float
    worst: tuple[LadderIndex, LadderIndex]
    max_err_estimate: float


def cross_validate(
    window: IndexWindow, quad: QuadratureConfig | None = None
) -> CrossValidationReport:
    """Build the raw Gram both ways and report the discrepancy.

    The direct route is exact up to its cutoff tail, so the discrepancy
    is dominated by the spectral truncation at ``t_max_raw``; expect the
    maximum on the diagonal, where the truncated integrand is largest.
    """
    quad = quad if quad is not None else DEFAULT_QUAD
    direct = build_gram(window, kind="raw", method="direct", quad=quad)
    spectral = build_gram(window, kind="raw", method="spectral", quad=quad)
    diff = np.abs(direct.entries - spectral.entries)
    flat = int(np.argmax(diff))
    i, j = divmod(flat, diff.shape[1])
    pts = direct.points
    return CrossValidationReport(
        window=window,
        max_abs_diff=float(diff[i, j]),
        mean_abs_diff=float(diff.mean()),
        worst=(pts[i].index, pts[j].index),
        max_err_estimate=float(spectral.err_estimate.max()),
    )


@dataclass(frozen=True)
class KernelFormComparison:
    """Parseval integrand vs the two-phase display kernel.

    The display form sqrt(theta_a theta_b) (e^{it lam} - e^{it mu})
    |zeta/s|^2 keeps only the extreme phases of the expanded product
    (theta_a - theta_a^s)(theta_b - conj theta_b^s); the comparison
    quantifies what the dropped middle terms contribute on a finite
    integration range [0, t_max].
    """

    a: LadderIndex
    b: LadderIndex
    lam: float
    mu: float
    t_max: float
    value_parseval: float
    value_two_term: float
    lambda_part: float
    mu_part: float

    @property
    def difference(self) -> float:
        return self.value_parseval - self.value_two_term


def compare_kernel_forms(
    a,
    b,
    smoothing: SmoothingParams | None = None,
    quad: QuadratureConfig | None = None,
) -> KernelFormComparison:
    """Integrate the full Parseval integrand and the two-phase display
    kernel over the same finite range and report both.

    Both forms share the grid, the zeta kernel, and (optionally) the
    psi^2 weight, so the difference isolates the kernel shape itself,
    not the truncation.
    """
    from .mellin import psi

    quad = quad if quad is not None else DEFAULT_QUAD
    pa, pb = _as_point(a), _as_point(b)
    points = (pa,) if pa.index == pb.index else (pa, pb)
    h = _panel_width(points)
    grid = _spectral_grid(quad.t_max_raw, h)
    w = grid.w_quad.copy()
    if smoothing is not None:
        w *= psi(grid.nodes, smoothing) ** 2
    vals, _ = _pair_matrices(points, grid, w, grid.w_diff)
    i, j = (0, 0) if len(points) == 1 else (0, 1)
    full = float(vals[i, j])

    lam = pa.log_theta - pb.log_theta
    mu = pa.log_theta + pb.log_theta
    amp = math.exp(0.5 * (pa.log_theta + pb.log_theta))  # sqrt(theta_a theta_b)
    kr = np.abs(grid.kernel) ** 2
    lam_part = amp * float(np.dot(w, kr * np.cos(lam * grid.nodes))) / math.pi
    mu_part = -amp * float(np.dot(w, kr * np.cos(mu * grid.nodes))) / math.pi
    return KernelFormComparison(
        a=pa.index,
        b=pb.index,
        lam=lam,
        mu=mu,
        t_max=grid.t_max,
        value_parseval=full,
        value_two_term=lam_part + mu_part,
        lambda_part=lam_part,
        mu_part=mu_part,
    )


def _fmt(x: float) -> str:
    return "%.17g" % x


def gram_to_csv(g: GramMatrix) -> str:
    """Render all entries as CSV rows ``j,k,j2,k2,value,err_estimate``.

    The full square matrix is written (symmetry included) so downstream
    tools can reshape without knowing the triangle convention.
    """
    lines = ["j,k,j2,k2,value,err_estimate"]
    pts = g.points
    for i, p in enumerate(pts):
        for j, q in enumerate(pts):
            lines.append(
                f"{p.index.j},{p.index.k},{q.index.j},{q.index.k},"
                f"{_fmt(g.entries[i, j])},{_fmt(g.err_estimate[i, j])}"
            )
    return "\n".join(lines) + "\n"


def gram_to_json(g: GramMatrix) -> str:
    """Serialize a Gram matrix to JSON; exact float round trip."""
    payload = {
        "schema": "bnladder.gram/1",
        "window": {"j_max": g.window.j_max, "k_max": g.window.k_max},
        "kind": g.kind,
        "method": g.method,
        "smoothing": (
            None
            if g.smoothing is None
            else {"W": g.smoothing.W, "epsilon": g.smoothing.epsilon}
        ),
        "quad": {
            "abs_tol": g.quad.abs_tol,
            "rel_tol": g.quad.rel_tol,
            "x_min": g.quad.x_min,
            "max_subdivisions": g.quad.max_subdivisions,
            "t_max_raw": g.quad.t_max_raw,
            "gaussian_tail_tol": g.quad.gaussian_tail_tol,
        },
        "entries": g.entries.tolist(),
        "err_estimate": g.err_estimate.tolist(),
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def gram_from_json(text: str) -> GramMatrix:
    """Rebuild a :class:`GramMatrix` from its JSON serialization."""
    payload = json.loads(text)
    if payload.get("schema") != "bnladder.gram/1":
        raise ParameterError("not a bnladder Gram serialization")
    window = IndexWindow(payload["window"]["j_max"], payload["window"]["k_max"])
    sm = payload["smoothing"]
    smoothing = None if sm is None else SmoothingParams(W=sm["W"], epsilon=sm["epsilon"])
    quad = QuadratureConfig(**payload["quad"])
    entries = np.array(payload["entries"], dtype=np.float64)
    err = np.array(payload["err_estimate"], dtype=np.float64)
    n = window.size
    if entries.shape != (n, n) or err.shape != (n, n):
        raise ParameterError("entry arrays do not match the window size")
    return GramMatrix(
        window=window,
        kind=payload["kind"],
        method=payload["method"],
        smoothing=smoothing,
        entries=entries,
        err_estimate=err,
        points=tuple(window.points()),
        quad=quad,
    )
