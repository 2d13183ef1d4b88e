"""Frozen high-precision reference values.

The zeta table below was generated once with mpmath at 50 decimal digits
(``mpmath.zeta(mpmath.mpc(0.5, t))``) and rounded to float64.  It is the
ground truth for the self-check machinery; the library itself never calls
mpmath.  Entries marked as zero ordinates sit at a point where zeta
vanishes on the critical line, so the stored value is the exact zero and
comparisons there must be absolute, not relative (the 50-digit residual
at the ordinate's float64 approximation is ~7e-16, far below any check
tolerance).
"""

from __future__ import annotations

__all__ = ["ZETA_ORACLE"]

# (t, zeta(1/2 + i t), is_zero_ordinate)
ZETA_ORACLE: tuple[tuple[float, complex, bool], ...] = (
    (0.0, complex(-1.4603545088095868, 0.0), False),
    (1.0, complex(0.14393642707718907, -0.722099743531673), False),
    (5.0, complex(0.7018123711656866, 0.2310380083914199), False),
    (14.134725141734695, complex(0.0, 0.0), True),
    (25.0, complex(0.004984593364035676, -0.014012301962583382), False),
    (50.0, complex(-0.08171210832097997, 0.3307921940386613), False),
    (100.0, complex(2.692619885681324, -0.020386029602598162), False),
)
