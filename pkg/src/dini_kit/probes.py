"""Numerical probes for shape properties on explicit grids.

These are falsifiers, not proofs: each probe evaluates a claimed property
(monotonicity, midpoint log-convexity, geometric convexity, complete
monotonicity up to a fixed difference order) at finitely many points and
reports the worst signed margin together with where it occurred.  A
negative margin beyond the caller's slack is a concrete counterexample;
a pass certifies the property on the tested points only.

All randomness is seeded per call, so results are bit-for-bit
reproducible across runs and machines with the same inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from .errors import DomainError

__all__ = [
    "GridSpec",
    "ProbeResult",
    "monotone_on_grid",
    "midpoint_logconvex_on_grid",
    "geometric_convexity_probe",
    "complete_monotonicity_probe",
]

_PAIR_SEED = 0x51D5


@dataclass(frozen=True)
class GridSpec:
    """Evaluation grid on [lo, hi], endpoints included.

    chebyshev spacing clusters points near the endpoints (cosine-spaced),
    which is where the inequalities under test tend to degenerate.
    """

    lo: float
    hi: float
    points: int = 64
    spacing: Literal["uniform", "chebyshev"] = "uniform"

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise DomainError("GridSpec endpoints must be finite")
        if not self.lo < self.hi:
            raise DomainError(f"GridSpec needs lo < hi, got [{self.lo}, {self.hi}]")
        if self.points < 8:
            raise DomainError(f"GridSpec.points={self.points} violates points >= 8")
        if self.spacing not in ("uniform", "chebyshev"):
            raise DomainError(f"GridSpec.spacing={self.spacing!r} is not supported")

    def values(self) -> np.ndarray:
        if self.spacing == "uniform":
            return np.linspace(self.lo, self.hi, self.points)
        mid = 0.5 * (self.lo + self.hi)
        half = 0.5 * (self.hi - self.lo)
        theta = np.linspace(math.pi, 0.0, self.points)
        xs = mid + half * np.cos(theta)
        xs[0] = self.lo
        xs[-1] = self.hi
        return xs


@dataclass(frozen=True)
class ProbeResult:
    """holds is worst_margin >= -slack for the slack the probe ran with;
    witness is the grid location that produced the worst margin."""

    holds: bool
    worst_margin: float
    witness: float


def _eval(f: Callable, xs: np.ndarray) -> np.ndarray:
    try:
        out = np.asarray(f(xs), dtype=float)
        if out.shape == xs.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.array([float(f(float(x))) for x in xs], dtype=float)


def _check_slack(slack: float) -> float:
    slack = float(slack)
    if not math.isfinite(slack) or slack < 0.0:
        raise DomainError(f"slack={slack!r} violates slack >= 0")
    return slack


def _result(margins: np.ndarray, where: np.ndarray, slack: float) -> ProbeResult:
    if not np.all(np.isfinite(margins)):
        bad = int(np.flatnonzero(~np.isfinite(margins))[0])
        raise DomainError(
            f"probe produced a non-finite margin at x={float(where[bad])!r}"
        )
    k = int(np.argmin(margins))
    worst = float(margins[k])
    return ProbeResult(holds=worst >= -slack, worst_margin=worst, witness=float(where[k]))


def monotone_on_grid(
    f: Callable,
    grid: GridSpec,
    direction: Literal["increasing", "decreasing"] = "increasing",
    slack: float = 0.0,
) -> ProbeResult:
    """Margins are consecutive differences, oriented so the claimed
    direction makes them nonnegative; witness is the left point of the
    worst pair."""

    if direction not in ("increasing", "decreasing"):
        raise DomainError(f"direction={direction!r} is not supported")
    slack = _check_slack(slack)
    xs = grid.values()
    v = _eval(f, xs)
    d = np.diff(v)
    if direction == "decreasing":
        d = -d
    return _result(d, xs[:-1], slack)


def midpoint_logconvex_on_grid(
    f: Callable,
    grid: GridSpec,
    sense: Literal["convex", "concave"] = "convex",
    slack: float = 0.0,
    random_pairs: int = 32,
    seed: int = _PAIR_SEED,
) -> ProbeResult:
    """Midpoint test for log-convexity of a positive function.

    For pairs (a, b) the margin is (log f(a) + log f(b))/2 - log f((a+b)/2),
    negated for the concave sense.  Pairs are every adjacent grid pair plus
    `random_pairs` draws from the interval (seeded, so reproducible).
    Nonpositive values of f are a domain violation, not a failed probe.
    """

    if sense not in ("convex", "concave"):
        raise DomainError(f"sense={sense!r} is not supported")
    slack = _check_slack(slack)
    xs = grid.values()
    a = xs[:-1]
    b = xs[1:]
    if random_pairs > 0:
        rng = np.random.default_rng(seed)
        ra = rng.uniform(grid.lo, grid.hi, size=random_pairs)
        rb = rng.uniform(grid.lo, grid.hi, size=random_pairs)
        keep = ra != rb
        a = np.concatenate([a, ra[keep]])
        b = np.concatenate([b, rb[keep]])
    m = 0.5 * (a + b)
    fa = _eval(f, a)
    fb = _eval(f, b)
    fm = _eval(f, m)
    if np.any(fa <= 0.0) or np.any(fb <= 0.0) or np.any(fm <= 0.0):
        raise DomainError("midpoint log-convexity probe needs f > 0 on the grid")
    margins = 0.5 * (np.log(fa) + np.log(fb)) - np.log(fm)
    if sense == "concave":
        margins = -margins
    return _result(margins, m, slack)


def geometric_convexity_probe(
    f: Callable,
    fprime: Callable,
    grid: GridSpec,
    slack: float = 0.0,
) -> ProbeResult:
    """Checks that x f'(x)/f(x) is nondecreasing along the grid, the
    elasticity form of geometric convexity; needs a positive grid and a
    nonvanishing f."""

    slack = _check_slack(slack)
    if grid.lo <= 0.0:
        raise DomainError("geometric convexity probe needs lo > 0")
    xs = grid.values()
    fv = _eval(f, xs)
    if np.any(fv == 0.0):
        raise DomainError("geometric convexity probe needs f != 0 on the grid")
    t = xs * _eval(fprime, xs) / fv
    return _result(np.diff(t), xs[:-1], slack)


def complete_monotonicity_probe(
    f: Callable,
    grid: GridSpec,
    max_order: int = 6,
    h: float = 0.05,
    slack: float = 0.0,
) -> ProbeResult:
    """Finite-difference surrogate for complete monotonicity.

    Checks (-1)^k (forward difference of order k, step h) >= -slack for
    every k up to max_order at every grid point.  This certifies the
    alternating-difference property only to the tested order; it is a
    surrogate for the infinite-order definition, which no finite probe
    can decide.  max_order is capped at 6 because higher-order
    differences drown in rounding noise at double precision.
    """

    slack = _check_slack(slack)
    max_order = int(max_order)
    if not 1 <= max_order <= 6:
        raise DomainError(f"max_order={max_order} violates 1 <= max_order <= 6")
    h = float(h)
    if not math.isfinite(h) or h <= 0.0:
        raise DomainError(f"h={h!r} violates h > 0")
    xs = grid.values()
    # table[i, j] = f(x_i + j h)
    offsets = np.arange(max_order + 1) * h
    table = np.empty((xs.size, max_order + 1))
    for j, off in enumerate(offsets):
        table[:, j] = _eval(f, xs + off)

    margins = []
    where = []
    for k in range(max_order + 1):
        coef = np.array(
            [((-1) ** (k - i)) * math.comb(k, i) for i in range(k + 1)], dtype=float
        )
        dk = table[:, : k + 1] @ coef
        signed = ((-1) ** k) * dk
        margins.append(signed)
        where.append(xs)
    return _result(np.concatenate(margins), np.concatenate(where), slack)
