"""Truncated product and partial-fraction expansions with certified tails.

Everything here is built from a finite table of positive roots a_1 < a_2 < ...
of J_v(x) - x J_{v+1}(x) plus closed forms for the two inverse-power sums

    sum 1/a_n^2 = 3/(4(v+1))
    sum 1/a_n^4 = (4v+13)/(16(v+1)^2(v+2))

whose exact residuals after N table entries turn a truncation into a
two-sided estimate: each result carries the midpoint of the rigorous
enclosure and half its width as `tail_bound`.  The number of roots doubles
from `start_zeros` until the enclosure is narrower than `tol`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, DomainError, RangeError, ToleranceError
from .series import DEFAULT_DOMAIN, EvalDomain, lambda_
from .zeros import dini_zero_table, rayleigh_residual

__all__ = [
    "TruncatedExpansion",
    "lambda_via_product",
    "dini_via_product",
    "log_deriv_lambda_sum",
    "mittag_leffler_ratio",
    "ratio_direct",
    "inverse_fourth_power_sum",
    "inverse_fourth_power_residual",
]

_LOG_DBL_MAX = 709.78
# half-width of the excluded band around x^2 = 1 - 2v where the ratio
# of consecutive orders has its pole (only reachable for v < 1/2)
_RING_HALF_WIDTH = 1e-3


@dataclass(frozen=True)
class TruncatedExpansion:
    """Expansion value plus its truncation certificate.

    value is the midpoint of a rigorous enclosure whose half-width is
    tail_bound (absolute).  zeros_used counts the roots consumed by the
    head of the expansion.  near_zero reports that the evaluation point
    sits within relative distance 1e-8 of a root of the target function,
    where the relative accuracy of any product form collapses.
    """

    value: float
    zeros_used: int
    tail_bound: float
    near_zero: bool = False


def inverse_fourth_power_sum(nu: float) -> float:
    """Closed form of sum 1/a_n^4 over all positive roots."""

    return (4.0 * nu + 13.0) / (16.0 * (nu + 1.0) ** 2 * (nu + 2.0))


def inverse_fourth_power_residual(nu: float, zeros: np.ndarray) -> float:
    """Exact tail of sum 1/a_n^4 after the given roots."""

    total = inverse_fourth_power_sum(nu)
    partial = math.fsum(1.0 / (z * z) ** 2 for z in zeros.tolist())
    res = total - partial
    if res <= 0.0:
        raise ConsistencyError(
            f"partial sum of 1/root^4 exceeds its closed form for nu={nu}: {res!r}"
        )
    return res


def _check_x(x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"x={x!r} violates finiteness")
    return x


def _enclosure_loop(
    nu: float, x: float, tol: float, start_zeros: int, max_zeros: int, need, rel: bool
):
    """Double the table until `need(table)` returns an enclosure narrower
    than tol (scaled by |value| when rel); `need` returns None while the
    table is too short for its remainder bound to apply."""

    if tol <= 0.0 or not math.isfinite(tol):
        raise DomainError(f"tol={tol!r} violates tol > 0")
    n = max(8, int(start_zeros))
    while True:
        table = dini_zero_table(nu, n)
        out = need(table)
        if out is not None:
            value, half, extra = out
            if half <= tol * (abs(value) if rel else 1.0):
                return value, n, half, extra
        if n >= max_zeros:
            raise ToleranceError(
                f"no enclosure within tol={tol} at the {max_zeros}-root cap "
                f"for nu={nu}, x={x}"
            )
        n = min(2 * n, int(max_zeros))


def lambda_via_product(
    nu: float,
    x: float,
    tol: float = 1e-8,
    start_zeros: int = 64,
    max_zeros: int = 100000,
) -> TruncatedExpansion:
    """Product over roots of (1 + x^2/a_n^2), truncated with a certified tail.

    The head is summed as log1p terms; the dropped factors contribute
    x^2 r1 - x^4 r2 / 2 in the log, exact up to a cubic remainder that the
    inverse-sixth-power tail bounds once the first dropped root exceeds
    x*sqrt(2).  tol is relative to the (always positive) value.
    """

    x = _check_x(x)
    y = x * x
    if y == 0.0:
        return TruncatedExpansion(1.0, 0, 0.0)

    def need(table):
        zs = table.zeros
        if zs[-1] ** 2 < 2.0 * y:
            return None  # remainder bound needs the dropped roots above x*sqrt(2)
        r1 = rayleigh_residual(table)
        r2 = inverse_fourth_power_residual(nu, zs)
        a_next_sq = float(zs[-1]) ** 2  # lower bound for the first dropped root
        head = math.fsum(math.log1p(y / (z * z)) for z in zs.tolist())
        log_total = head + y * r1 - 0.5 * y * y * r2
        rem = (y ** 3 / 3.0) * r2 / a_next_sq
        if log_total > _LOG_DBL_MAX:
            raise RangeError(
                f"product for nu={nu}, x={x} overflows: log={log_total!r}"
            )
        value = math.exp(log_total)
        return value, abs(value) * rem, False

    value, n, half, _ = _enclosure_loop(nu, x, tol, start_zeros, max_zeros, need, rel=True)
    return TruncatedExpansion(value, n, half)


def dini_via_product(
    nu: float,
    x: float,
    tol: float = 1e-8,
    start_zeros: int = 64,
    max_zeros: int = 100000,
) -> TruncatedExpansion:
    """Product over roots of (1 - x^2/a_n^2), truncated with a certified tail.

    The sign is fixed by how many roots sit below |x|; magnitudes are
    accumulated in log space so head factors of either sign cannot
    overflow.  Dropped factors contribute -x^2 r1 - x^4 r2 / 2 in the log
    with a one-sided cubic remainder, again controlled once the first
    dropped root exceeds x*sqrt(2).  tol is relative to the value, which
    is meaningless within 1e-8 of a root: such calls return near_zero=True.
    """

    x = _check_x(x)
    y = x * x
    if y == 0.0:
        return TruncatedExpansion(1.0, 0, 0.0)
    ax = abs(x)

    def need(table):
        zs = table.zeros
        if zs[-1] ** 2 < 2.0 * y:
            return None
        near = bool(np.any(np.abs(ax - zs) <= 1e-8 * zs))
        below = int(np.searchsorted(zs, ax))
        sign = -1.0 if below % 2 else 1.0
        with np.errstate(divide="ignore"):
            logs = np.log(np.abs(1.0 - y / (zs * zs)))
        if not np.all(np.isfinite(logs)):
            # x sits exactly on a root in floating point
            return 0.0, 0.0, True
        r1 = rayleigh_residual(table)
        r2 = inverse_fourth_power_residual(nu, zs)
        a_next_sq = float(zs[-1]) ** 2
        log_total = math.fsum(logs.tolist()) - y * r1 - 0.5 * y * y * r2
        rem = (2.0 * y ** 3 / 3.0) * r2 / a_next_sq
        if log_total > _LOG_DBL_MAX:
            raise RangeError(
                f"product for nu={nu}, x={x} overflows: log={log_total!r}"
            )
        value = sign * math.exp(log_total)
        return value, abs(value) * rem, near

    value, n, half, near = _enclosure_loop(nu, x, tol, start_zeros, max_zeros, need, rel=True)
    return TruncatedExpansion(value, n, half, near_zero=near)


def log_deriv_lambda_sum(
    nu: float,
    x: float,
    tol: float = 1e-8,
    start_zeros: int = 64,
    max_zeros: int = 100000,
) -> TruncatedExpansion:
    """Logarithmic derivative of the increasing product: sum 2x/(a_n^2 + x^2).

    The dropped terms are rewritten exactly as 2x r1 - 2x^3 r2 plus an
    inverse-sixth-power remainder squeezed between 0 and x^5 r2/(A + x^2),
    with A the square of the first dropped root; the midpoint of that
    squeeze is added and its half-width reported.  tol is absolute.
    """

    x = _check_x(x)
    if x == 0.0:
        return TruncatedExpansion(0.0, 0, 0.0)
    y = x * x
    ax = abs(x)

    def need(table):
        zs = table.zeros
        sq = zs * zs
        r1 = rayleigh_residual(table)
        r2 = inverse_fourth_power_residual(nu, zs)
        a_next_sq = float(zs[-1]) ** 2
        head = 2.0 * ax * float(np.sum(1.0 / (sq + y)))
        mid = ax ** 5 * r2 / (a_next_sq + y)
        total = head + 2.0 * ax * r1 - 2.0 * ax ** 3 * r2 + mid
        value = math.copysign(total, x)
        return value, mid, False

    value, n, half, _ = _enclosure_loop(nu, x, tol, start_zeros, max_zeros, need, rel=False)
    return TruncatedExpansion(value, n, half)


def mittag_leffler_ratio(
    nu: float,
    x: float,
    tol: float = 1e-8,
    start_zeros: int = 64,
    max_zeros: int = 100000,
) -> TruncatedExpansion:
    """Ratio of the increasing products at consecutive orders via a
    partial-fraction sum over the roots of the lower order.

    Rearranged so the closed-form inverse-square sum cancels the pole
    structure analytically:

        ratio = (3x^2 + 2v - 1)/D - C * sum 1/(a_n^2 (a_n^2 + x^2))

    with D = x^2 + (2v - 1) and C = 4(v+1)(x^2 + 1 + 2v) x^2 / D.  D is
    formed as x^2 plus the precomputed ring constant so that v = 1/2
    collapses to an exact cancellation at every x.  For v < 1/2 the ratio
    has a pole on the ring x^2 = 1 - 2v; evaluation inside the band
    |D| < 1e-3 is refused.  The sum's tail is squeezed between r2*A/(A+x^2)
    and r2, midpoint taken, half-width reported through |C|.  tol is
    absolute on the returned ratio.
    """

    x = _check_x(x)
    y = x * x
    if y == 0.0:
        return TruncatedExpansion(1.0, 0, 0.0)
    ring = 2.0 * nu - 1.0
    d = y + ring
    if ring < 0.0 and abs(d) < _RING_HALF_WIDTH:
        raise DomainError(
            f"x^2={y!r} violates distance >= {_RING_HALF_WIDTH} from the "
            f"pole ring x^2 = {-ring!r} at nu={nu}"
        )
    c_num = 4.0 * (nu + 1.0) * (y + 1.0 + 2.0 * nu) * y
    c = c_num / d

    def need(table):
        zs = table.zeros
        sq = zs * zs
        r2 = inverse_fourth_power_residual(nu, zs)
        a_next_sq = float(zs[-1]) ** 2
        kappa = a_next_sq / (a_next_sq + y)
        head = float(np.sum(1.0 / (sq * (sq + y))))
        t_hat = head + r2 * 0.5 * (1.0 + kappa)
        half = abs(c) * r2 * 0.5 * (1.0 - kappa)
        value = (3.0 * y + ring) / d - c * t_hat
        return value, half, False

    value, n, half, _ = _enclosure_loop(nu, x, tol, start_zeros, max_zeros, need, rel=False)
    return TruncatedExpansion(value, n, half)


def ratio_direct(
    nu: float, x: float, domain: EvalDomain = DEFAULT_DOMAIN
) -> float:
    """Same consecutive-order ratio evaluated through the power series.

    Independent of any root table, so it cross-checks the partial-fraction
    route; both factors are positive for every real x, hence no pole.
    Limited to |x| <= domain.x_max like every series evaluation.
    """

    num = lambda_(nu + 1.0, x, domain=domain)
    den = lambda_(nu, x, domain=domain)
    return num.value / den.value
