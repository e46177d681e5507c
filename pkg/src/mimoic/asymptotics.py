"""Degrees of freedom and generalized degrees of freedom.

The closed forms here use plain real arithmetic.  :func:`empirical_slope`
is the separate numerical route: it sweeps SNR on actual random channels and
regresses each outer-bound term against ``log2 SNR``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelInstance, ChannelSeedSpec, generate
from .geometry import RateConstraint, RateRegion2D, region_from_constraints
from .outer import outer_terms

__all__ = [
    "DofSpec",
    "GdofSpec",
    "IllConditionedSweep",
    "dof_constraints",
    "dof_region",
    "dof_symmetric_case_region",
    "symmetric_dof_value",
    "coop_saturation_beta",
    "gdof_constraints",
    "gdof_region",
    "gdof_value",
    "gdof_piecewise",
    "gdof_nrc",
    "gdof_curve",
    "dof_term_prelogs",
    "gdof_term_prelogs",
    "empirical_slope",
    "BRANCH_TOL",
]

BRANCH_TOL = 1e-12


class IllConditionedSweep(ValueError):
    """An SNR sweep is too short or produced non-finite values."""


def _pos(x: float) -> float:
    return x if x > 0 else 0.0


@dataclass(frozen=True)
class DofSpec:
    m1: int
    n1: int
    m2: int
    n2: int
    beta12: float = 0.0
    beta21: float = 0.0

    def __post_init__(self):
        if min(self.m1, self.n1, self.m2, self.n2) < 1:
            raise ValueError("antenna counts must be at least 1")
        for b in (self.beta12, self.beta21):
            if not (math.isfinite(b) and b >= 0):
                raise ValueError("betas must be finite and nonnegative")


@dataclass(frozen=True)
class GdofSpec:
    m: int
    alpha: float
    beta: float = 0.0

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be at least 1")
        if not (self.alpha >= 0 and self.beta >= 0 and math.isfinite(self.alpha)):
            raise ValueError("alpha and beta must be nonnegative")


def dof_term_prelogs(s: DofSpec) -> dict[str, float]:
    """Prelog of each outer term when every link scales with SNR (``alpha = 1``)."""
    m1, n1, m2, n2, b12, b21 = s.m1, s.n1, s.m2, s.n2, s.beta12, s.beta21
    return {
        "i1": min(m1, n1) + min(min(n2, _pos(m1 - n1)), b21),
        "i2": min(m2, n2) + min(min(n1, _pos(m2 - n2)), b12),
        "i3": min(n1, _pos(m1 - n2) + m2) + min(n2, _pos(m2 - n1) + m1) + b12 + b21,
        "i4": min(n1, _pos(m1 - n2)) + min(n2, m1 + m2) + b12,
        "i5": min(n2, _pos(m2 - n1)) + min(n1, m1 + m2) + b21,
        "i6": min(n1 + n2, m1 + m2),
        "i7": min(n2, _pos(m2 - n1) + m1) + min(n1, _pos(m1 - n2)) + min(n1, m1 + m2) + b12 + b21,
        "i8": min(n1, _pos(m1 - n2) + m2) + min(n2, _pos(m2 - n1)) + min(n2, m1 + m2) + b12 + b21,
        "i9": min(n1 + n2, m1) + min(n1, m1 + m2) + b21,
        "i10": min(n1 + n2, m2) + min(n2, m1 + m2) + b12,
    }


_DIRS = {
    "i1": (1, 0), "i2": (0, 1), "i3": (1, 1), "i4": (1, 1), "i5": (1, 1),
    "i6": (1, 1), "i7": (2, 1), "i8": (1, 2), "i9": (2, 1), "i10": (1, 2),
}


def _constraints_from_prelogs(pre: dict) -> list[RateConstraint]:
    return [RateConstraint(*_DIRS[k], v) for k, v in pre.items()]


def dof_constraints(s: DofSpec) -> list[RateConstraint]:
    """The ten DoF constraints, one per outer term."""
    return _constraints_from_prelogs(dof_term_prelogs(s))


def dof_region(s: DofSpec) -> RateRegion2D:
    return region_from_constraints(dof_constraints(s))


def dof_symmetric_case_region(m: int, n: int, beta: float) -> RateRegion2D:
    """Symmetric DoF region from the three antenna-ratio cases.

    An independent route to :func:`dof_region` for ``M1 = M2 = M`` and
    ``N1 = N2 = N``.  The middle case ``N <= M <= 2N`` uses the per-user bound
    ``min(M, N + beta)``, the sum bound ``min(M + beta, 2N)`` and the weighted
    bounds ``N + M + beta``.
    """
    if m <= n:
        cons = [(1, 0, m), (0, 1, m), (1, 1, n + beta)]
    elif m <= 2 * n:
        cons = [
            (1, 0, min(m, n + beta)), (0, 1, min(m, n + beta)),
            (1, 1, min(m + beta, 2 * n)),
            (2, 1, n + m + beta), (1, 2, n + m + beta),
        ]
    else:
        cons = [(1, 0, n + beta), (0, 1, n + beta), (1, 1, 2 * n)]
    return region_from_constraints([RateConstraint(*c) for c in cons])


def symmetric_dof_value(m: int, n: int, beta: float) -> float:
    """Largest ``d`` with ``(d, d)`` in the symmetric DoF region."""
    best = math.inf
    for c in dof_constraints(DofSpec(m, n, m, n, beta, beta)):
        best = min(best, c.c / (c.a + c.b))
    return best


def coop_saturation_beta(m: int, n: int) -> float:
    """Backhaul exponent beyond which the symmetric DoF region stops growing."""
    return float(min(n, _pos(2 * m - n)))


def gdof_term_prelogs(s: GdofSpec) -> dict[str, float]:
    """Per-term GDoF prelogs of the outer terms in the symmetric setting."""
    m, a, b = s.m, s.alpha, s.beta
    weak = _pos(1 - a) * m
    big = m * max(1.0, a)
    mid = m * max(_pos(1 - a), a)
    return {
        "i1": m + min(_pos(a - 1) * m, b),
        "i2": m + min(_pos(a - 1) * m, b),
        "i3": 2 * mid + 2 * b,
        "i4": weak + big + b,
        "i5": weak + big + b,
        "i6": 2 * big,
        "i7": mid + weak + big + 2 * b,
        "i8": mid + weak + big + 2 * b,
        "i9": m * max(_pos(2 - a), a) + big + b,
        "i10": m * max(_pos(2 - a), a) + big + b,
    }


def gdof_constraints(s: GdofSpec) -> list[RateConstraint]:
    return _constraints_from_prelogs(gdof_term_prelogs(s))


def gdof_region(s: GdofSpec) -> RateRegion2D:
    return region_from_constraints(gdof_constraints(s))


def gdof_value(s: GdofSpec) -> float:
    """Symmetric GDoF as the minimum of six expressions."""
    m, a, b = s.m, s.alpha, s.beta
    weak = _pos(1 - a) * m
    big = m * max(1.0, a)
    mid = m * max(_pos(1 - a), a)
    return min(
        m + min(_pos(a - 1) * m, b),
        mid + b,
        0.5 * weak + 0.5 * big + 0.5 * b,
        big,
        mid / 3 + weak / 3 + big / 3 + 2 * b / 3,
        m * max(_pos(2 - a), a) / 3 + big / 3 + b / 3,
    )


def _branches(s: GdofSpec) -> list[tuple[float, float, object]]:
    m, b = s.m, s.beta
    r = b / m
    if b <= m / 2:
        return [
            (0.0, r, lambda a: m),
            (r, 0.5, lambda a: m * _pos(1 - a) + b),
            (0.5, 2 / 3 - r / 3, lambda a: m * a + b),
            (2 / 3 - r / 3, 1.0, lambda a: 0.5 * (m * _pos(2 - a) + b)),
            (1.0, 2 + r, lambda a: 0.5 * (m * a + b)),
            (2 + r, math.inf, lambda a: m + b),
        ]
    if b <= m:
        return [
            (0.0, r, lambda a: m),
            (r, 1.0, lambda a: 0.5 * (m * _pos(2 - a) + b)),
            (1.0, 2 + r, lambda a: 0.5 * (m * a + b)),
            (2 + r, math.inf, lambda a: m + b),
        ]
    return [
        (0.0, 1.0, lambda a: m),
        (1.0, r, lambda a: m * a),
        (r, 2 + r, lambda a: 0.5 * (m * a + b)),
        (2 + r, math.inf, lambda a: m + b),
    ]


def gdof_piecewise(s: GdofSpec) -> float:
    """Symmetric GDoF from the three backhaul-regime tables.

    Intervals are closed; when ``alpha`` sits on a breakpoint every matching
    branch is evaluated and they must agree within ``BRANCH_TOL``.
    """
    a = s.alpha
    values = [f(a) for lo, hi, f in _branches(s) if lo - BRANCH_TOL <= a <= hi + BRANCH_TOL]
    if not values:
        raise ValueError(f"alpha={a} outside every branch")
    if max(values) - min(values) > BRANCH_TOL * max(1.0, abs(values[0])) * 10:
        raise ArithmeticError(f"branches disagree at alpha={a}: {values}")
    return values[0]


def gdof_nrc(m: int, alpha: float) -> float:
    """Symmetric GDoF without cooperation (the W curve)."""
    a = alpha
    if a <= 0.5:
        return m * _pos(1 - a)
    if a <= 2 / 3:
        return m * a
    if a <= 1:
        return 0.5 * m * _pos(2 - a)
    if a <= 2:
        return 0.5 * m * a
    return float(m)


def gdof_curve(m: int, beta: float, alpha_grid) -> list[tuple[float, float]]:
    grid = [float(a) for a in alpha_grid]
    if any(y < x for x, y in zip(grid, grid[1:])):
        raise ValueError("alpha grid must be sorted")
    return [(a, gdof_value(GdofSpec(m, a, beta))) for a in grid]


def empirical_slope(seed_spec: ChannelSeedSpec, alpha: float, beta: float, snr_list) -> list[dict]:
    """Regress each outer term on ``log2 SNR`` over the top half of a sweep.

    The channel matrices come from ``seed_spec``; its gains and backhaul are
    replaced by ``rho_ii = SNR``, ``rho_ij = SNR**alpha`` and
    ``C = beta log2 SNR``.  Predicted slopes use the DoF prelogs when
    ``alpha == 1`` and all antenna counts may differ, otherwise the symmetric
    GDoF prelogs.

    Returns
    -------
    list of dict
        ``{"term", "predicted", "estimated", "abs_err"}`` for ``i1`` .. ``i10``.
    """
    snrs = sorted(float(x) for x in snr_list)
    if len(snrs) < 4 or snrs[0] <= 0 or math.log10(snrs[-1] / snrs[0]) < 4:
        raise IllConditionedSweep("sweep must have at least 4 points spanning 4 decades")
    base = generate(seed_spec)
    dims = (base.m1, base.n1, base.m2, base.n2)
    if alpha == 1:
        predicted = dof_term_prelogs(DofSpec(*dims, beta, beta))
    elif len(set(dims)) == 1:
        predicted = gdof_term_prelogs(GdofSpec(base.m1, alpha, beta))
    else:
        raise IllConditionedSweep("unequal antenna counts need alpha = 1")
    rows = []
    for snr in snrs:
        cross = snr ** alpha
        cap = beta * math.log2(snr)
        ch = ChannelInstance(
            *dims, base.h11, base.h12, base.h21, base.h22,
            rho11=snr, rho12=cross, rho21=cross, rho22=snr, c12=cap, c21=cap,
        )
        rows.append(outer_terms(ch).as_dict())
    top = len(snrs) // 2
    x = np.log2(snrs[top:])
    out = []
    for name in predicted:
        y = np.array([r[name] for r in rows[top:]])
        if not np.all(np.isfinite(y)):
            raise IllConditionedSweep(f"term {name} is not finite")
        slope = float(np.polyfit(x, y, 1)[0])
        out.append({
            "term": name,
            "predicted": float(predicted[name]),
            "estimated": slope,
            "abs_err": abs(slope - predicted[name]),
        })
    return out
