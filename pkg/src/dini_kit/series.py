"""Power-series evaluation of Dini-type special functions.

Four even entire functions, all equal to 1 at x = 0, are the core objects:

    norm_bessel_I(nu, x)   sum of (x^2/4)^n / ((nu+1)_n n!)           (all terms +)
    norm_bessel_J(nu, x)   same series with alternating signs
    lambda_(nu, x)         sum of (2n+1) (x^2/4)^n / ((nu+1)_n n!)    (all terms +)
    dini_D(nu, x)          same series with alternating signs

norm_bessel_I and norm_bessel_J are the even normalizations of the modified
and ordinary Bessel functions I_nu and J_nu (scaled by 2^nu Gamma(nu+1) x^-nu
so the leading coefficient is 1).  lambda_ and dini_D are the analogous
normalizations of the combinations I_nu(x) + x I_{nu+1}(x) and
J_nu(x) - x J_{nu+1}(x); the unnormalized combinations are exposed as
xi and d_lower.

Every series is summed by term recurrence with Neumaier compensation.  The
returned SeriesValue carries a truncation-plus-rounding error estimate and a
cancellation flag for the alternating series at large |x|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import ConvergenceError, DomainError, RangeError

EPS = 2.220446049250313e-16

# Orders this close to -1 amplify (nu+1)_n rounding; refuse them.
NU_FLOOR = -1.0 + 1e-6

_LOG_DBL_MAX = 709.78


@dataclass(frozen=True)
class EvalDomain:
    """Validated evaluation region for the series functions."""

    x_max: float = 50.0
    nu_max: float = 100.0
    epsilon_rel: float = 1e-15

    def __post_init__(self):
        if not (self.x_max > 0.0):
            raise DomainError("EvalDomain.x_max must be positive")
        if not (0.0 < self.epsilon_rel < 1e-8):
            raise DomainError("EvalDomain.epsilon_rel must lie in (0, 1e-8)")
        if not (self.nu_max > NU_FLOOR):
            raise DomainError("EvalDomain.nu_max must exceed the order floor")


DEFAULT_DOMAIN = EvalDomain()


@dataclass(frozen=True)
class SeriesValue:
    """A partial sum with its truncation/rounding error bound.

    largest_term records the peak |term| seen; cancellation_warning is set
    when that peak exceeds 1e8 * |value|, i.e. more than 8 decimal digits
    were lost to alternating cancellation.
    """

    value: float
    terms_used: int
    error_estimate: float
    largest_term: float = 0.0
    cancellation_warning: bool = False


def _check_nu(nu, domain: EvalDomain) -> float:
    nu = float(nu)
    if math.isnan(nu):
        raise DomainError("order nu is NaN")
    if nu <= NU_FLOOR:
        raise DomainError(f"order nu={nu!r} violates nu > -1 + 1e-6")
    if nu > domain.nu_max:
        raise DomainError(f"order nu={nu!r} violates nu <= nu_max={domain.nu_max!r}")
    return nu


def _check_x(x, domain: EvalDomain) -> float:
    x = float(x)
    if math.isnan(x):
        raise DomainError("argument x is NaN")
    if abs(x) > domain.x_max:
        raise DomainError(f"argument x={x!r} violates |x| <= x_max={domain.x_max!r}")
    return x


def pochhammer(nu: float, n: int) -> float:
    """Rising factorial (nu+1)_n = (nu+1)(nu+2)...(nu+n), via log-gamma."""
    nu = float(nu)
    if math.isnan(nu) or nu <= -1.0:
        raise DomainError(f"pochhammer requires nu > -1, got {nu!r}")
    if n != int(n) or n < 0:
        raise DomainError(f"pochhammer requires integer n >= 0, got {n!r}")
    n = int(n)
    if n == 0:
        return 1.0
    lg = math.lgamma(nu + n + 1.0) - math.lgamma(nu + 1.0)
    if lg > _LOG_DBL_MAX:
        raise RangeError(f"pochhammer({nu!r}, {n}) exceeds the double range")
    return math.exp(lg)


def _poch_small(nu: float, m: int) -> float:
    # exact-ish direct product; only used for m <= 5 leading coefficients
    p = 1.0
    for i in range(m):
        p *= nu + 1.0 + i
    return p


def _sum_terms(t0: float, ratio, y: float, eps_rel: float, max_terms: int, what: str):
    """Sum t0 * prod ratio(i) with Neumaier compensation.

    ratio(n) must return t_{n+1}/t_n and be eventually below 1/2 and
    non-increasing; the tail is then bounded by a geometric series.
    """
    if y == 0.0:
        return t0, 1, 0.0, abs(t0), False
    s = t0
    comp = 0.0
    t = t0
    sum_abs = abs(t0)
    largest = abs(t0)
    terms = 1
    while terms < max_terms:
        r = ratio(terms - 1)
        t *= r
        tmp = s + t
        if abs(s) >= abs(t):
            comp += (s - tmp) + t
        else:
            comp += (t - tmp) + s
        s = tmp
        terms += 1
        at = abs(t)
        sum_abs += at
        if at > largest:
            largest = at
        if abs(r) < 0.5 and at <= eps_rel * abs(s) + EPS * sum_abs:
            r_next = abs(ratio(terms - 1))
            tail = at * r_next / (1.0 - r_next) if r_next < 1.0 else at
            total = s + comp
            err = tail + EPS * (3.0 * terms + 2.0) * sum_abs
            warn = largest > 1e8 * abs(total)
            return total, terms, err, largest, warn
    raise ConvergenceError(f"{what} did not converge within {max_terms} terms")


@lru_cache(maxsize=1 << 18)
def _even_series(family: str, nu: float, y: float, eps_rel: float, max_terms: int):
    if family == "I":
        def ratio(n):
            return y / ((4.0 * (n + 1.0)) * (nu + n + 1.0))
    elif family == "J":
        def ratio(n):
            return -y / ((4.0 * (n + 1.0)) * (nu + n + 1.0))
    elif family == "L":
        def ratio(n):
            return y * (2.0 * n + 3.0) / ((2.0 * n + 1.0) * (4.0 * (n + 1.0)) * (nu + n + 1.0))
    else:
        def ratio(n):
            return -y * (2.0 * n + 3.0) / ((2.0 * n + 1.0) * (4.0 * (n + 1.0)) * (nu + n + 1.0))
    return _sum_terms(1.0, ratio, y, eps_rel, max_terms, f"series {family}(nu={nu})")


@lru_cache(maxsize=1 << 16)
def _deriv_series(nu: float, y: float, k: int, eps_rel: float, max_terms: int):
    """Even part (series in y = x^2) of the k-th term-wise derivative of lambda_.

    Even k = 2m:  sum_n c_n y^n with c_0 = (2m+1)!/(4^m m! (nu+1)_m).
    Odd  k = 2m+1: the caller multiplies the returned series by x;
                   c_0 = (2m+3)!/(4^(m+1) (m+1)! (nu+1)_(m+1)).
    """
    if k % 2 == 0:
        m = k // 2
        t0 = math.factorial(2 * m + 1) / (4.0**m * math.factorial(m) * _poch_small(nu, m))

        def ratio(n):
            a = 2.0 * n + 2.0 * m
            return y * (a + 2.0) * (a + 3.0) / (
                (2.0 * n + 1.0) * (2.0 * n + 2.0) * (4.0 * (n + m + 1.0)) * (nu + n + m + 1.0)
            )
    else:
        m = (k - 1) // 2
        t0 = math.factorial(2 * m + 3) / (
            4.0 ** (m + 1) * math.factorial(m + 1) * _poch_small(nu, m + 1)
        )

        def ratio(n):
            a = 2.0 * n + 2.0 * m
            return y * (a + 4.0) * (a + 5.0) / (
                (2.0 * n + 2.0) * (2.0 * n + 3.0) * (4.0 * (n + m + 2.0)) * (nu + n + m + 2.0)
            )
    return _sum_terms(t0, ratio, y, eps_rel, max_terms, f"derivative series k={k}(nu={nu})")


@lru_cache(maxsize=1 << 16)
def _product_series(nu: float, mu: float, y: float, eps_rel: float, max_terms: int):
    s = nu + mu

    def ratio(k):
        return y * (s + 2.0 * k + 1.0) * (s + 2.0 * k + 2.0) / (
            (4.0 * (k + 1.0)) * (nu + k + 1.0) * (mu + k + 1.0) * (s + k + 1.0)
        )

    return _sum_terms(1.0, ratio, y, eps_rel, max_terms, f"product series (nu={nu}, mu={mu})")


def _make(parts) -> SeriesValue:
    total, terms, err, largest, warn = parts
    return SeriesValue(total, terms, err, largest, warn)


def norm_bessel_I(nu, x, *, domain: EvalDomain = DEFAULT_DOMAIN, max_terms: int = 300) -> SeriesValue:
    """Even-normalized modified Bessel function; 1 at x = 0, >= 1 everywhere."""
    nu = _check_nu(nu, domain)
    x = _check_x(x, domain)
    return _make(_even_series("I", nu, x * x, domain.epsilon_rel, max_terms))


def norm_bessel_J(nu, x, *, domain: EvalDomain = DEFAULT_DOMAIN, max_terms: int = 300) -> SeriesValue:
    """Even-normalized Bessel function of the first kind; 1 at x = 0."""
    nu = _check_nu(nu, domain)
    x = _check_x(x, domain)
    return _make(_even_series("J", nu, x * x, domain.epsilon_rel, max_terms))


def lambda_(nu, x, *, domain: EvalDomain = DEFAULT_DOMAIN, max_terms: int = 300) -> SeriesValue:
    """Even normalization of I_nu(x) + x I_{nu+1}(x); 1 at x = 0, >= 1 everywhere."""
    nu = _check_nu(nu, domain)
    x = _check_x(x, domain)
    return _make(_even_series("L", nu, x * x, domain.epsilon_rel, max_terms))


def dini_D(nu, x, *, domain: EvalDomain = DEFAULT_DOMAIN, max_terms: int = 300) -> SeriesValue:
    """Even normalization of J_nu(x) - x J_{nu+1}(x); 1 at x = 0."""
    nu = _check_nu(nu, domain)
    x = _check_x(x, domain)
    return _make(_even_series("D", nu, x * x, domain.epsilon_rel, max_terms))


def lambda_deriv(nu, x, k: int, *, domain: EvalDomain = DEFAULT_DOMAIN, max_terms: int = 300) -> SeriesValue:
    """k-th derivative of lambda_ by term-wise differentiation, 0 <= k <= 8."""
    nu = _check_nu(nu, domain)
    x = _check_x(x, domain)
    if k != int(k) or not (0 <= int(k) <= 8):
        raise DomainError(f"derivative order k={k!r} violates 0 <= k <= 8")
    k = int(k)
    if k == 0:
        return _make(_even_series("L", nu, x * x, domain.epsilon_rel, max_terms))
    total, terms, err, largest, warn = _deriv_series(nu, x * x, k, domain.epsilon_rel, max_terms)
    if k % 2 == 1:
        ax = abs(x)
        total, err, largest = total * x, err * ax, largest * ax
    return SeriesValue(total, terms, err, largest, warn)


def lambda_prime_decomposed(nu, x, *, domain: EvalDomain = DEFAULT_DOMAIN, max_terms: int = 300) -> SeriesValue:
    """lambda_' via the order-shift identity
    (x/(2(nu+1))) lambda_(nu+1, x) + (x/(nu+1)) norm_bessel_I(nu+1, x)."""
    nu = _check_nu(nu, domain)
    x = _check_x(x, domain)
    lam1 = lambda_(nu + 1.0, x, domain=domain, max_terms=max_terms)
    big_i = norm_bessel_I(nu + 1.0, x, domain=domain, max_terms=max_terms)
    c1 = x / (2.0 * (nu + 1.0))
    c2 = x / (nu + 1.0)
    value = c1 * lam1.value + c2 * big_i.value
    err = abs(c1) * lam1.error_estimate + abs(c2) * big_i.error_estimate + 4.0 * EPS * abs(value)
    largest = max(abs(c1) * lam1.largest_term, abs(c2) * big_i.largest_term)
    return SeriesValue(value, lam1.terms_used + big_i.terms_used, err, largest,
                       lam1.cancellation_warning or big_i.cancellation_warning)


def dini_prime_decomposed(nu, x, *, domain: EvalDomain = DEFAULT_DOMAIN, max_terms: int = 300) -> SeriesValue:
    """dini_D' via the order-shift identity
    -(x/(2(nu+1))) dini_D(nu+1, x) - (x/(nu+1)) norm_bessel_J(nu+1, x)."""
    nu = _check_nu(nu, domain)
    x = _check_x(x, domain)
    d1 = dini_D(nu + 1.0, x, domain=domain, max_terms=max_terms)
    big_j = norm_bessel_J(nu + 1.0, x, domain=domain, max_terms=max_terms)
    c1 = -x / (2.0 * (nu + 1.0))
    c2 = -x / (nu + 1.0)
    value = c1 * d1.value + c2 * big_j.value
    err = abs(c1) * d1.error_estimate + abs(c2) * big_j.error_estimate + 4.0 * EPS * abs(value)
    largest = max(abs(c1) * d1.largest_term, abs(c2) * big_j.largest_term)
    return SeriesValue(value, d1.terms_used + big_j.terms_used, err, largest,
                       d1.cancellation_warning or big_j.cancellation_warning)


def _prefactor_times(nu: float, x: float, even_value: float) -> float:
    # x^nu / (2^nu Gamma(nu+1)) * even_value, in log space; x > 0 here
    lg = nu * math.log(x / 2.0) - math.lgamma(nu + 1.0)
    if lg > _LOG_DBL_MAX:
        raise RangeError(f"x^nu prefactor overflows at nu={nu!r}, x={x!r}")
    return math.exp(lg) * even_value


def xi(nu, x, *, domain: EvalDomain = DEFAULT_DOMAIN, max_terms: int = 300) -> float:
    """Unnormalized modified combination I_nu(x) + x I_{nu+1}(x)."""
    nu = _check_nu(nu, domain)
    x = _check_x(x, domain)
    if x < 0.0 and nu != int(nu):
        raise DomainError(f"xi requires x >= 0 for non-integer nu, got x={x!r}")
    if x == 0.0:
        return 1.0 if nu == 0.0 else (0.0 if nu > 0.0 else math.inf)
    sign = 1.0 if x > 0.0 else (-1.0) ** int(nu)
    lam = lambda_(nu, abs(x), domain=domain, max_terms=max_terms)
    return sign * _prefactor_times(nu, abs(x), lam.value)


def d_lower(nu, x, *, domain: EvalDomain = DEFAULT_DOMAIN, max_terms: int = 300) -> float:
    """Unnormalized combination J_nu(x) - x J_{nu+1}(x)."""
    nu = _check_nu(nu, domain)
    x = _check_x(x, domain)
    if x < 0.0 and nu != int(nu):
        raise DomainError(f"d_lower requires x >= 0 for non-integer nu, got x={x!r}")
    if x == 0.0:
        return 1.0 if nu == 0.0 else (0.0 if nu > 0.0 else math.inf)
    sign = 1.0 if x > 0.0 else (-1.0) ** int(nu)
    dd = dini_D(nu, abs(x), domain=domain, max_terms=max_terms)
    return sign * _prefactor_times(nu, abs(x), dd.value)


def product_series_II(nu, mu, x, *, domain: EvalDomain = DEFAULT_DOMAIN, max_terms: int = 300) -> SeriesValue:
    """Joint series for norm_bessel_I(nu, x) * norm_bessel_I(mu, x):
    sum_k (nu+mu+k+1)_k x^(2k) / (4^k k! (nu+1)_k (mu+1)_k)."""
    nu = _check_nu(nu, domain)
    mu = _check_nu(mu, domain)
    x = _check_x(x, domain)
    return _make(_product_series(nu, mu, x * x, domain.epsilon_rel, max_terms))
