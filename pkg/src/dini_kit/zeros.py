"""Zero tables for the damped Bessel combination and for Bessel J.

The central objects are the positive roots of

    d(x) = J_v(x) - x J_{v+1}(x)

together with the ordinary Bessel roots j_{v,n} that bracket them.  Roots
are located by sign changes and polished with a safeguarded Newton
iteration that never leaves its bracket, so every returned zero carries a
machine-checkable certificate (the bracket and the endpoint signs).

Evaluation goes through scipy.special.jv: the power series that backs the
rest of the package loses all significant digits once x is a few dozen,
while root n of d sits near n*pi and tables of several hundred roots are
routine here.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np
from scipy import special as sp

from .errors import ConsistencyError, DomainError
from .series import NU_FLOOR

__all__ = [
    "BracketingInterval",
    "ZeroTable",
    "bessel_zero_table",
    "dini_zero_table",
    "rayleigh_residual",
    "tail_inverse_square_sum",
    "clear_zero_cache",
]

# relative accuracy target for a polished root
_ROOT_RTOL = 1e-13

# left end of the very first bracket; d > 0 on (0, alpha_1) so the sign
# there is known without evaluating anywhere underflow could bite
_FIRST_LO = 1e-9

_NU_MAX = 100.0


@dataclass(frozen=True)
class BracketingInterval:
    """Sign-change certificate for one root: f(lo) and f(hi) have the
    recorded (opposite) signs and the root is the only one inside."""

    lo: float
    hi: float
    f_lo_sign: int
    f_hi_sign: int


@dataclass(frozen=True)
class ZeroTable:
    """Ascending positive roots of one function at one order.

    kind is "dini" for roots of J_v(x) - x J_{v+1}(x) and "bessel" for
    roots of J_v.  zeros is a read-only float64 array.  rayleigh_residual
    is 3/(4(v+1)) minus the partial sum of 1/zero^2 for dini tables (the
    exact tail of that convergent sum) and None for bessel tables.
    """

    nu: float
    kind: Literal["dini", "bessel"]
    zeros: np.ndarray = field(repr=False)
    bracket_log: tuple[BracketingInterval, ...] = field(repr=False)
    rayleigh_residual: float | None

    def __post_init__(self) -> None:
        self.zeros.setflags(write=False)

    def __len__(self) -> int:
        return self.zeros.size


def _check_nu(nu: float) -> float:
    nu = float(nu)
    if not math.isfinite(nu) or nu <= NU_FLOOR:
        raise DomainError(f"order nu={nu!r} violates nu > {NU_FLOOR}")
    if nu > _NU_MAX:
        raise DomainError(f"order nu={nu} violates nu <= {_NU_MAX}")
    return nu


def _bessel_j(nu: float, x: np.ndarray) -> np.ndarray:
    return sp.jv(nu, x)


def _bessel_j_prime(nu: float, x: np.ndarray) -> np.ndarray:
    return (nu / x) * sp.jv(nu, x) - sp.jv(nu + 1.0, x)


def _dini(nu: float, x: np.ndarray) -> np.ndarray:
    return sp.jv(nu, x) - x * sp.jv(nu + 1.0, x)


def _dini_prime(nu: float, x: np.ndarray) -> np.ndarray:
    return (nu / x - x) * sp.jv(nu, x) + (nu - 1.0) * sp.jv(nu + 1.0, x)


def _safeguarded_newton(
    f: Callable[[np.ndarray], np.ndarray],
    fprime: Callable[[np.ndarray], np.ndarray],
    lo: np.ndarray,
    hi: np.ndarray,
    f_lo_sign: np.ndarray,
    what: str,
) -> np.ndarray:
    """Vectorized root polish: Newton steps clipped to a shrinking
    sign-change bracket, bisection whenever the step is unusable."""

    lo = lo.astype(float).copy()
    hi = hi.astype(float).copy()
    x = 0.5 * (lo + hi)
    active = np.ones(x.shape, dtype=bool)

    for _ in range(220):
        xa = x[active]
        fa = f(xa)
        sa = np.sign(fa)

        lo_a = lo[active]
        hi_a = hi[active]
        same = sa == f_lo_sign[active]
        lo_a = np.where(same, xa, lo_a)
        hi_a = np.where(same | (sa == 0.0), hi_a, xa)
        # an exact zero of the evaluator ends the search at once
        lo_a = np.where(sa == 0.0, xa, lo_a)
        hi_a = np.where(sa == 0.0, xa, hi_a)
        lo[active] = lo_a
        hi[active] = hi_a

        with np.errstate(all="ignore"):
            step = fa / fprime(xa)
            xn = xa - step
        bad = ~np.isfinite(xn) | (xn <= lo_a) | (xn >= hi_a)
        xn = np.where(bad, 0.5 * (lo_a + hi_a), xn)

        moved = np.abs(xn - xa)
        done = moved <= _ROOT_RTOL * np.abs(xn)
        done |= (hi_a - lo_a) <= _ROOT_RTOL * lo_a
        x[active] = xn

        idx = np.flatnonzero(active)
        active[idx[done]] = False
        if not active.any():
            return x

    raise ConsistencyError(
        f"{what}: root polish failed to converge for indices "
        f"{np.flatnonzero(active)[:5].tolist()}"
    )


def _bessel_brackets(nu: float, count: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Scan a unit-step grid for the first `count` sign changes of J_v.

    Consecutive positive roots of J_v are never closer than about pi for
    any v > -1, so a step of 1 cannot straddle two of them.  The scan
    starts below the first root: roots exceed v for v >= 0, and for
    v in (-1, 0) the first root exceeds 2*sqrt(v+1) > 1e-3 for every v
    above the domain floor.
    """

    start = max(1e-3, nu)
    chunk = 4096
    # roots sit within ~pi of each other once past the turning point x ~ v
    limit = start + math.pi * (count + 8) + 16.0 * (1.0 + nu ** (1.0 / 3.0) if nu > 0 else 1.0)

    los: list[np.ndarray] = []
    his: list[np.ndarray] = []
    signs: list[np.ndarray] = []
    found = 0
    left = start
    f_left = float(_bessel_j(nu, np.array([start]))[0])
    if f_left == 0.0:
        # nudge off an (astronomically unlikely) exact grid hit
        left = start * (1.0 + 1e-12) + 1e-12
        f_left = float(_bessel_j(nu, np.array([left]))[0])
    while found < count and left < limit:
        grid = left + np.arange(1, chunk + 1, dtype=float)
        vals = _bessel_j(nu, grid)
        prev = np.concatenate(([f_left], vals[:-1]))
        flips = np.flatnonzero(np.sign(prev) * np.sign(vals) < 0.0)
        los.append(np.where(flips == 0, left, grid[flips - 1]))
        his.append(grid[flips])
        signs.append(np.sign(prev[flips]))
        found += flips.size
        left = float(grid[-1])
        f_left = float(vals[-1])
    if found < count:
        raise ConsistencyError(
            f"bessel bracket scan found only {found} of {count} roots for nu={nu}"
        )
    lo = np.concatenate(los)[:count]
    hi = np.concatenate(his)[:count]
    sgn = np.concatenate(signs)[:count]
    return lo, hi, sgn


def _compute_bessel(nu: float, count: int) -> tuple[np.ndarray, tuple[BracketingInterval, ...]]:
    lo, hi, sgn = _bessel_brackets(nu, count)
    roots = _safeguarded_newton(
        lambda x: _bessel_j(nu, x),
        lambda x: _bessel_j_prime(nu, x),
        lo,
        hi,
        sgn,
        f"bessel roots nu={nu}",
    )
    log = tuple(
        BracketingInterval(float(a), float(b), int(s), -int(s))
        for a, b, s in zip(lo, hi, sgn)
    )
    return roots, log


def _compute_dini(nu: float, count: int) -> tuple[np.ndarray, tuple[BracketingInterval, ...]]:
    """Root n of d lies strictly between Bessel roots n-1 and n, with
    root 1 below the first Bessel root; d alternates sign on the Bessel
    roots because d(j_n) = -j_n J_{v+1}(j_n)."""

    j, _ = _table_arrays(nu, "bessel", count)
    d_at_j = _dini(nu, j)
    sign_at_j = np.sign(d_at_j)
    expect = (-1.0) ** np.arange(1, count + 1)
    if not np.array_equal(sign_at_j, expect):
        bad = int(np.flatnonzero(sign_at_j != expect)[0])
        raise ConsistencyError(
            f"dini sign pattern broken at bessel root {bad + 1} for nu={nu}: "
            f"d({j[bad]!r}) = {d_at_j[bad]!r}"
        )

    lo = np.concatenate(([_FIRST_LO], j[:-1]))
    hi = j.copy()
    sgn = expect * -1.0  # sign at the left endpoint of each bracket
    roots = _safeguarded_newton(
        lambda x: _dini(nu, x),
        lambda x: _dini_prime(nu, x),
        lo,
        hi,
        sgn,
        f"dini roots nu={nu}",
    )
    log = tuple(
        BracketingInterval(float(a), float(b), int(s), -int(s))
        for a, b, s in zip(lo, hi, sgn)
    )
    return roots, log


# cache of raw root arrays keyed by (kind, exact bits of nu); each entry
# only ever grows, and every extension recomputes from scratch so the
# values are independent of the request history
_cache: dict[tuple[str, str], tuple[np.ndarray, tuple[BracketingInterval, ...]]] = {}
_cache_lock = threading.Lock()


def clear_zero_cache() -> None:
    with _cache_lock:
        _cache.clear()


def _table_arrays(
    nu: float, kind: str, count: int
) -> tuple[np.ndarray, tuple[BracketingInterval, ...]]:
    key = (kind, float(nu).hex())
    with _cache_lock:
        hit = _cache.get(key)
        if hit is not None and hit[0].size >= count:
            return hit[0][:count], hit[1][:count]
    if kind == "bessel":
        roots, log = _compute_bessel(nu, count)
    else:
        roots, log = _compute_dini(nu, count)
    if not np.all(np.diff(roots) > 0.0) or roots[0] <= 0.0:
        raise ConsistencyError(f"{kind} roots for nu={nu} are not strictly ascending")
    roots.setflags(write=False)
    with _cache_lock:
        hit = _cache.get(key)
        if hit is None or hit[0].size < roots.size:
            _cache[key] = (roots, log)
        else:
            roots, log = _cache[key]
    return roots[:count], log[:count]


def _residual(nu: float, zeros: np.ndarray) -> float:
    total = 3.0 / (4.0 * (nu + 1.0))
    partial = math.fsum(1.0 / (z * z) for z in zeros.tolist())
    res = total - partial
    if res <= 0.0:
        raise ConsistencyError(
            f"partial sum of 1/root^2 exceeds 3/(4(nu+1)) for nu={nu}: residual={res!r}"
        )
    return res


def bessel_zero_table(nu: float, count: int) -> ZeroTable:
    """First `count` positive roots of J_v, ascending."""

    nu = _check_nu(nu)
    count = int(count)
    if count < 1:
        raise DomainError(f"count={count} violates count >= 1")
    zeros, log = _table_arrays(nu, "bessel", count)
    return ZeroTable(
        nu=nu, kind="bessel", zeros=zeros, bracket_log=log, rayleigh_residual=None
    )


def dini_zero_table(nu: float, count: int) -> ZeroTable:
    """First `count` positive roots of J_v(x) - x J_{v+1}(x), ascending.

    The table interlaces with the Bessel roots by construction (root n is
    polished inside (j_{n-1}, j_n)) and carries the exact residual of the
    inverse-square sum, whose total is 3/(4(v+1)).
    """

    nu = _check_nu(nu)
    count = int(count)
    if count < 1:
        raise DomainError(f"count={count} violates count >= 1")
    zeros, log = _table_arrays(nu, "dini", count)
    return ZeroTable(
        nu=nu,
        kind="dini",
        zeros=zeros,
        bracket_log=log,
        rayleigh_residual=_residual(nu, zeros),
    )


def rayleigh_residual(table: ZeroTable) -> float:
    """Exact tail of sum 1/root^2 left after the table's entries.

    Only defined for dini tables, where the full sum is 3/(4(v+1)).
    """

    if table.kind != "dini":
        raise DomainError("rayleigh residual is defined for dini tables only")
    if table.rayleigh_residual is None:
        raise ConsistencyError("dini table is missing its residual")
    return table.rayleigh_residual


def tail_inverse_square_sum(nu: float, table: ZeroTable, x: float) -> float:
    """Upper bound on sum over roots beyond the table of 1/(root^2 + x^2).

    Dropping x^2 from each denominator dominates the tail by the exact
    Rayleigh residual, which is what this returns; x only participates in
    validation so call sites state what they are bounding.
    """

    nu = _check_nu(nu)
    if table.kind != "dini" or float(nu).hex() != float(table.nu).hex():
        raise DomainError("tail bound requires the dini table for the same order")
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"x={x!r} violates finiteness")
    return rayleigh_residual(table)
