"""Off-diagonal decay diagnostics for Gram matrices.

Entries are grouped into shells by ladder distance; per-shell statistics
feed a log-log least-squares fit of mean |entry| against log(1 + c r),
the envelope form the decay theory predicts.  Two envelope variants are
kept apart deliberately: the shell sup (largest |entry| at distance
exactly n) and the tail sup (largest at distance >= n).  Only the tail
sup is nonincreasing by construction; shell-sup monotonicity fails on
real windows and is reported, never asserted.

Truncation diagnostics quantify finite-section error: per-row tail sums
T_B (the l1 mass at distance >= B), their maximum over rows (a rigorous
Schur bound on the spectral norm of what truncation removes), and a
deterministic power-iteration estimate of that norm for comparison.

The row and column belonging to index (0, 0) are all zeros (f_1 == 0),
which deflates shell means without telling us anything; statistics
exclude such pairs by default and every report records the flag.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFitError, ParameterError
from .gram import GramMatrix
from .ladder import LOG2, LadderIndex, distance

__all__ = [
    "ShellStats",
    "DecayReport",
    "LambdaGapReport",
    "TruncationReport",
    "TruncationSuite",
    "shell_stats",
    "envelopes",
    "fit_exponent",
    "tail_sum",
    "schur_truncation_bound",
    "opnorm_residual",
    "decay_report",
    "truncation_suite",
    "shells_to_csv",
    "decay_report_to_json",
    "truncation_suite_to_json",
]


@dataclass(frozen=True)
class ShellStats:
    """Statistics of |Gram entries| over one ladder-distance shell."""

    r: int
    count: int
    mean_abs: float
    max_abs: float
    sum_abs: float


def _distance_matrix(g: GramMatrix) -> np.ndarray:
    idx = [p.index for p in g.points]
    n = len(idx)
    d = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(idx):
        for j, b in enumerate(idx):
            d[i, j] = distance(a, b)
    return d


def _pair_mask(g: GramMatrix, exclude_zero_row: bool) -> np.ndarray:
    n = len(g.points)
    mask = np.ones((n, n), dtype=bool)
    if exclude_zero_row:
        zero = np.array([p.denominator == 1 for p in g.points])
        mask &= ~zero[:, None]
        mask &= ~zero[None, :]
    if not mask.any():
        # Degenerate single-point window {(0,0)}: keep its diagonal shell
        # rather than returning nothing.
        mask = np.ones((n, n), dtype=bool)
    return mask


def shell_stats(
    g: GramMatrix,
    center: LadderIndex | tuple[int, int] | None = None,
    exclude_zero_row: bool = True,
) -> list[ShellStats]:
    """Group |entries| by ladder distance and summarize each shell.

    Without ``center`` the grouping runs over all ordered pairs in the
    window; with one, over that row only.  Shells are returned in
    increasing r, one per distance that actually occurs.
    """
    d = _distance_matrix(g)
    mask = _pair_mask(g, exclude_zero_row)
    a = np.abs(g.entries)
    if center is not None:
        i = g.index_of(center)
        d, mask, a = d[i : i + 1], mask[i : i + 1], a[i : i + 1]
    out = []
    for r in range(int(d.max()) + 1):
        sel = (d == r) & mask
        cnt = int(sel.sum())
        if cnt == 0:
            continue
        vals = a[sel]
        out.append(
            ShellStats(
                r=r,
                count=cnt,
                mean_abs=float(vals.mean()),
                max_abs=float(vals.max()),
                sum_abs=float(vals.sum()),
            )
        )
    return out


def envelopes(g: GramMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Shell-sup and tail-sup envelopes over all pairs.

    ``envelope_shell[n]`` is the largest |entry| at distance exactly n;
    ``envelope_tail[n]`` the largest at distance >= n, which makes it
    nonincreasing identically.  The zero row participates (it only ever
    contributes zeros to a sup).
    """
    d = _distance_matrix(g)
    a = np.abs(g.entries)
    diam = int(d.max())
    env_shell = np.zeros(diam + 1)
    for r in range(diam + 1):
        sel = d == r
        if sel.any():
            env_shell[r] = a[sel].max()
    env_tail = np.maximum.accumulate(env_shell[::-1])[::-1]
    return env_shell, env_tail


def fit_exponent(
    shells: list[ShellStats],
    fit_range: tuple[int, int],
    c: float = LOG2,
) -> float:
    """Least-squares decay exponent from shell means.

    Fits log(mean_abs) = a - m log(1 + c r) over shells with r inside
    ``fit_range`` and positive mean, returning m.  Requires at least
    three usable shells and a non-degenerate abscissa.
    """
    lo, hi = fit_range
    if lo > hi:
        raise ParameterError(f"empty fit range [{lo}, {hi}]")
    if not (c > 0.0 and math.isfinite(c)):
        raise ParameterError(f"decay scale c must be positive, got {c!r}")
    xs, ys = [], []
    for s in shells:
        if lo <= s.r <= hi and s.mean_abs > 0.0:
            xs.append(math.log1p(c * s.r))
            ys.append(math.log(s.mean_abs))
    if len(xs) < 3:
        raise DegenerateFitError(
            f"only {len(xs)} usable shells in [{lo}, {hi}]; need at least 3"
        )
    x = np.array(xs)
    if float(np.ptp(x)) <= 0.0:
        raise DegenerateFitError("abscissa has zero variance")
    design = np.vstack([x, np.ones_like(x)]).T
    slope, _ = np.linalg.lstsq(design, np.array(ys), rcond=None)[0]
    return float(-slope)


def _check_b(b: int) -> int:
    if int(b) != b or b < 1:
        raise ParameterError(f"truncation radius B must be a positive integer, got {b!r}")
    return int(b)


def tail_sum(g: GramMatrix, center: LadderIndex | tuple[int, int], b: int) -> float:
    """l1 mass of one row at ladder distance >= B (within the window)."""
    b = _check_b(b)
    i = g.index_of(center)
    ci = g.points[i].index
    total = 0.0
    for j, q in enumerate(g.points):
        if distance(ci, q.index) >= b:
            total += abs(float(g.entries[i, j]))
    return total


def schur_truncation_bound(g: GramMatrix, b: int) -> float:
    """Largest row tail: a rigorous bound on ||G - G^(B)|| by Schur's test.

    The residual after zeroing every entry at distance >= B is symmetric,
    so its spectral norm is at most the maximal absolute row sum, which
    is exactly the worst tail_sum.
    """
    b = _check_b(b)
    return max(tail_sum(g, p.index, b) for p in g.points)


def opnorm_residual(g: GramMatrix, b: int, iters: int = 200) -> float:
    """Power-iteration estimate of ||G - G^(B)||, deterministic start.

    The start vector is the normalized all-ones vector; if that lands in
    the residual's kernel the first standard basis vector is used
    instead.  A RuntimeWarning reports failure to converge to 1e-8
    relative within ``iters`` steps.  The estimate never exceeds the
    true norm, so comparing it against :func:`schur_truncation_bound`
    checks the bound from below.
    """
    b = _check_b(b)
    if iters < 1:
        raise ParameterError(f"iters must be positive, got {iters!r}")
    d = _distance_matrix(g)
    resid = np.where(d >= b, g.entries, 0.0)
    if not np.any(resid):
        return 0.0
    n = resid.shape[0]
    v = np.ones(n) / math.sqrt(n)
    w = resid @ v
    if float(np.linalg.norm(w)) < 1e-300:
        v = np.zeros(n)
        v[0] = 1.0
        w = resid @ v
    est_prev = 0.0
    est = float(np.linalg.norm(w))
    for _ in range(iters):
        if est < 1e-300:
            return 0.0
        v = w / est
        w = resid @ v
        est_prev, est = est, float(np.linalg.norm(w))
        if abs(est - est_prev) <= 1e-8 * max(est, 1e-300):
            return est
    warnings.warn(
        f"power iteration did not reach 1e-8 relative agreement in {iters} steps",
        RuntimeWarning,
    )
    return est


@dataclass(frozen=True)
class LambdaGapReport:
    """Smallest |lambda|/d over distinct pairs of a window.

    The proof-level claim |lambda| >= c d fails for mixed-sign index
    displacements (already at (3, -2): |3 log 2 - 2 log 3| ~ 0.118), so
    the observed minimum ratio is reported as data, never asserted.
    """

    min_ratio: float
    pair: tuple[LadderIndex, LadderIndex]
    c: float


def _lambda_gap(g: GramMatrix) -> LambdaGapReport:
    best = math.inf
    best_pair = (g.points[0].index, g.points[0].index)
    for i, p in enumerate(g.points):
        for q in g.points[i + 1 :]:
            d = distance(p.index, q.index)
            lam = abs(p.log_theta - q.log_theta)
            if lam / d < best:
                best = lam / d
                best_pair = (p.index, q.index)
    if not math.isfinite(best):
        best = 0.0
    return LambdaGapReport(min_ratio=best, pair=best_pair, c=LOG2)


@dataclass(frozen=True)
class DecayReport:
    """Shell statistics, envelopes, and the fitted decay exponent."""

    shells: tuple[ShellStats, ...]
    envelope_shell: tuple[float, ...]
    envelope_tail: tuple[float, ...]
    fitted_exponent: float
    c: float
    fit_range: tuple[int, int]
    lambda_gap: LambdaGapReport
    exclude_zero_row: bool


def decay_report(
    g: GramMatrix,
    fit_range: tuple[int, int] | None = None,
    c: float = LOG2,
    exclude_zero_row: bool = True,
) -> DecayReport:
    """Full decay diagnosis of a Gram matrix.

    The default fit range [1, floor((j_max + k_max)/2)] stops where the
    window boundary starts depleting shells; outer shells lose pairs to
    the boundary and bias the slope.
    """
    if fit_range is None:
        diam = g.window.j_max + g.window.k_max
        fit_range = (1, max(1, diam // 2))
    shells = shell_stats(g, exclude_zero_row=exclude_zero_row)
    env_shell, env_tail = envelopes(g)
    m_hat = fit_exponent(shells, fit_range, c)
    return DecayReport(
        shells=tuple(shells),
        envelope_shell=tuple(float(v) for v in env_shell),
        envelope_tail=tuple(float(v) for v in env_tail),
        fitted_exponent=m_hat,
        c=c,
        fit_range=fit_range,
        lambda_gap=_lambda_gap(g),
        exclude_zero_row=exclude_zero_row,
    )


@dataclass(frozen=True)
class TruncationReport:
    """Finite-section diagnosis at one truncation radius."""

    B: int
    schur_bound: float
    empirical_opnorm: float
    tail_sums: tuple[tuple[LadderIndex, float], ...]


@dataclass(frozen=True)
class TruncationSuite:
    """Truncation reports over several radii plus the tail-decay slope.

    ``fit_exponent_tail`` is the negated log-log slope of the Schur
    bound against 1 + B; None when fewer than three radii have positive
    tails (nothing to fit).
    """

    reports: tuple[TruncationReport, ...]
    fit_exponent_tail: float | None


def truncation_suite(
    g: GramMatrix, bs: tuple[int, ...] = (1, 2, 3, 4), iters: int = 200
) -> TruncationSuite:
    reports = []
    for b in bs:
        b = _check_b(b)
        tails = tuple((p.index, tail_sum(g, p.index, b)) for p in g.points)
        reports.append(
            TruncationReport(
                B=b,
                schur_bound=max(t for _, t in tails),
                empirical_opnorm=opnorm_residual(g, b, iters=iters),
                tail_sums=tails,
            )
        )
    xs = [math.log1p(r.B) for r in reports if r.schur_bound > 0.0]
    ys = [math.log(r.schur_bound) for r in reports if r.schur_bound > 0.0]
    fit: float | None = None
    if len(xs) >= 3 and float(np.ptp(np.array(xs))) > 0.0:
        design = np.vstack([xs, np.ones(len(xs))]).T
        slope, _ = np.linalg.lstsq(design, np.array(ys), rcond=None)[0]
        fit = float(-slope)
    return TruncationSuite(reports=tuple(reports), fit_exponent_tail=fit)


def _fmt(x: float) -> str:
    return "%.17g" % x


def shells_to_csv(shells: list[ShellStats] | tuple[ShellStats, ...]) -> str:
    lines = ["r,count,mean_abs,max_abs,sum_abs"]
    for s in shells:
        lines.append(
            f"{s.r},{s.count},{_fmt(s.mean_abs)},{_fmt(s.max_abs)},{_fmt(s.sum_abs)}"
        )
    return "\n".join(lines) + "\n"


def decay_report_to_json(r: DecayReport) -> str:
    payload = {
        "schema": "bnladder.decay/1",
        "shells": [
            {
                "r": s.r,
                "count": s.count,
                "mean_abs": s.mean_abs,
                "max_abs": s.max_abs,
                "sum_abs": s.sum_abs,
            }
            for s in r.shells
        ],
        "envelope_shell": list(r.envelope_shell),
        "envelope_tail": list(r.envelope_tail),
        "fitted_exponent": r.fitted_exponent,
        "c": r.c,
        "fit_range": list(r.fit_range),
        "lambda_gap": {
            "min_ratio": r.lambda_gap.min_ratio,
            "pair": [list(r.lambda_gap.pair[0]), list(r.lambda_gap.pair[1])],
            "c": r.lambda_gap.c,
        },
        "exclude_zero_row": r.exclude_zero_row,
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def truncation_suite_to_json(s: TruncationSuite) -> str:
    payload = {
        "schema": "bnladder.truncation/1",
        "reports": [
            {
                "B": r.B,
                "schur_bound": r.schur_bound,
                "empirical_opnorm": r.empirical_opnorm,
                "tail_sums": [
                    {"j": ix.j, "k": ix.k, "tail_sum": t} for ix, t in r.tail_sums
                ],
            }
            for r in s.reports
        ],
        "fit_exponent_tail": s.fit_exponent_tail,
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"
