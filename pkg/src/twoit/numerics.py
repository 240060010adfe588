"""Special functions and seeded sampling used by the posterior engines.

The scalar incomplete beta function is implemented here directly (modified
Lentz continued fraction with a power-series fallback) because every exact
posterior mass, credible bound and Student-t probability goes through it.
The array variant used by the vectorised simulation paths delegates to
``scipy.special.betainc``; the test suite cross-checks the two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from statistics import NormalDist

import numpy as np
from scipy import special

from .exceptions import NumericalError, ValidationError

__all__ = [
    "SeededStream",
    "beta_quantile",
    "normal_cdf",
    "normal_quantile",
    "reg_inc_beta",
    "reg_inc_beta_array",
    "sample_beta",
    "sample_binomial",
    "sample_normal",
    "sample_scaled_inv_chi2",
    "student_t_cdf",
    "student_t_quantile",
]

MAX_ITER = 500
EPS = 1e-14
_FPMIN = 1e-300
_STD_NORMAL = NormalDist()
_HALF_ULP_ONE = math.ulp(1.0) / 2.0


def _check_shape(a, b):
    if not (a > 0 and b > 0 and math.isfinite(a) and math.isfinite(b)):
        raise ValidationError(f"beta shape parameters must be positive and finite, got a={a}, b={b}")


def _betacf(a, b, x):
    # Lentz evaluation of the continued fraction for I_x(a, b); None when
    # the iteration cap is reached.
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            return h
    return None


def _beta_series(a, b, x):
    # sum_n (a+b)_n / (a+1)_n x^n; converges for x < 1, fastest for small x.
    term = 1.0
    total = 1.0
    for n in range(MAX_ITER):
        term *= (a + b + n) / (a + 1.0 + n) * x
        total += term
        if abs(term) < EPS * abs(total):
            return total
    return None


_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _stirling_delta(z):
    # lgamma(z) minus its Stirling approximation
    if z >= 10.0:
        iz2 = 1.0 / (z * z)
        series = 1.0 / 156.0
        for coef in (-691.0 / 360360.0, 1.0 / 1188.0, -1.0 / 1680.0, 1.0 / 1260.0, -1.0 / 360.0, 1.0 / 12.0):
            series = coef + iz2 * series
        return series / z
    return math.lgamma(z) - ((z - 0.5) * math.log(z) - z + _HALF_LOG_2PI)


def _log_beta(a, b):
    """log B(a, b) without the O(a + b) cancellation of three lgamma calls."""
    small, large = (a, b) if a <= b else (b, a)
    if large < 10.0:
        return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)
    s = a + b
    if small < 10.0:
        # lgamma(large) - lgamma(s) through Stirling, leaving lgamma(small) exact
        diff = (
            -(large - 0.5) * math.log1p(small / large)
            - small * math.log(s)
            + small
            + _stirling_delta(large)
            - _stirling_delta(s)
        )
        return math.lgamma(small) + diff
    return (
        _HALF_LOG_2PI
        + (a - 0.5) * math.log(a)
        + (b - 0.5) * math.log(b)
        - (s - 0.5) * math.log(s)
        + _stirling_delta(a)
        + _stirling_delta(b)
        - _stirling_delta(s)
    )


def _log_front(a, b, x, y):
    # log of x^a y^b / B(a, b); x and y = 1 - x are both passed so that the
    # smaller of the two (the accurate one) drives each logarithm.
    if a < 10.0 or b < 10.0:
        log_x = math.log1p(-y) if x > 0.5 else math.log(x)
        log_y = math.log1p(-x) if y > 0.5 else math.log(y)
        return a * log_x + b * log_y - _log_beta(a, b)
    # Large shapes: expand around the mode so no term is O(a + b).
    s = a + b
    dev = b * x - a * y
    # 1 + dev/a = s*x/a and 1 - dev/b = s*y/b; far from the mode the direct
    # logarithm is the accurate one.
    r_a, r_b = dev / a, -dev / b
    if abs(r_a) < 0.5:
        term_a = a * math.log1p(r_a)
    else:
        term_a = a * ((math.log1p(-y) if x > 0.5 else math.log(x)) + math.log(s / a))
    if abs(r_b) < 0.5:
        term_b = b * math.log1p(r_b)
    else:
        term_b = b * ((math.log1p(-x) if y > 0.5 else math.log(y)) + math.log(s / b))
    core = term_a + term_b
    norm = (
        -_HALF_LOG_2PI
        + 0.5 * (math.log(a) + math.log(b) - math.log(s))
        - _stirling_delta(a)
        - _stirling_delta(b)
        + _stirling_delta(s)
    )
    return core + norm


def _inc_beta_lower(a, b, x, y):
    """I_x(a, b) for x below the switch point, without complementing."""
    front = _log_front(a, b, x, y)
    cf = _betacf(a, b, x)
    if cf is None:
        cf = _beta_series(a, b, x)
        if cf is None:
            raise NumericalError(
                "incomplete beta did not converge", a=a, b=b, x=x, max_iter=MAX_ITER
            )
    return math.exp(front) * cf / a


def _inc_beta(x, y, a, b):
    if x <= 0.0:
        return 0.0
    if y <= 0.0:
        return 1.0
    if x < (a + 1.0) / (a + b + 2.0):
        return _inc_beta_lower(a, b, x, y)
    return 1.0 - _inc_beta_lower(b, a, y, x)


def reg_inc_beta(x: float, a: float, b: float) -> float:
    """Regularised incomplete beta function I_x(a, b).

    Raises ValidationError outside 0 <= x <= 1, a > 0, b > 0.
    """
    x = float(x)
    a = float(a)
    b = float(b)
    _check_shape(a, b)
    if not 0.0 <= x <= 1.0:
        raise ValidationError(f"x must lie in [0, 1], got {x}")
    return min(1.0, max(0.0, _inc_beta(x, 1.0 - x, a, b)))


def reg_inc_beta_array(x, a, b) -> np.ndarray:
    """Vectorised I_x(a, b) for the simulation hot paths."""
    x = np.asarray(x, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(~((a > 0) & (b > 0))):
        raise ValidationError("beta shape parameters must be positive")
    if np.any(~((x >= 0) & (x <= 1))):
        raise ValidationError("x must lie in [0, 1]")
    return special.betainc(a, b, x)


def _beta_log_pdf(x, a, b):
    return (a - 1.0) * math.log(x) + (b - 1.0) * math.log1p(-x) - _log_beta(a, b)


def _quantile_start(p, a, b):
    # Leading-order tail behaviour: I_x(a, b) ~ x^a / (a B(a, b)) near 0.
    mean = a / (a + b)
    log_ab = _log_beta(a, b)
    if p < 0.5 * reg_inc_beta(mean, a, b):
        guess = math.exp((math.log(p) + math.log(a) + log_ab) / a)
        if 0.0 < guess < mean:
            return guess
    elif 1.0 - p < 0.5 * (1.0 - reg_inc_beta(mean, a, b)):
        tail = math.exp((math.log1p(-p) + math.log(b) + log_ab) / b)
        if 0.0 < tail < 1.0 - mean:
            return 1.0 - tail
    return mean


def beta_quantile(p: float, a: float, b: float, max_iter: int = 300) -> float:
    """Inverse of ``reg_inc_beta`` in x: bracketed bisection with Newton steps."""
    p = float(p)
    _check_shape(a, b)
    if not 0.0 < p < 1.0:
        raise ValidationError(f"p must lie strictly inside (0, 1), got {p}")
    # invariant: F(lo) < p <= F(hi)
    lo, hi = 0.0, 1.0
    f_lo, f_hi = -p, 1.0 - p
    x = _quantile_start(p, a, b)
    f = 1.0
    for it in range(max_iter):
        f = reg_inc_beta(x, a, b) - p
        if abs(f) <= 1e-15:
            return x
        if f < 0:
            lo, f_lo = x, f
        else:
            hi, f_hi = x, f
        if math.nextafter(lo, 1.0) >= hi:
            # adjacent floats: no representable x does better than one of them
            return lo if -f_lo < f_hi else hi
        step = None
        if 0.0 < x < 1.0:
            try:
                step = f / math.exp(_beta_log_pdf(x, a, b))
            except (OverflowError, ZeroDivisionError):
                step = None
        candidate = x - step if step is not None else None
        if candidate is None or not (lo < candidate < hi) or not math.isfinite(candidate):
            # geometric bisection while the bracket spans orders of magnitude
            if hi < 0.5 and hi > 1e6 * max(lo, 1e-300):
                candidate = math.sqrt(max(lo, 1e-300) * hi)
            elif lo > 0.5 and (1.0 - lo) > 1e6 * max(1.0 - hi, _HALF_ULP_ONE):
                candidate = 1.0 - math.sqrt(max(1.0 - hi, _HALF_ULP_ONE) * (1.0 - lo))
            else:
                candidate = 0.5 * (lo + hi)
            if not lo < candidate < hi:
                candidate = 0.5 * (lo + hi)
        x = candidate
    raise NumericalError(
        "beta quantile did not converge", p=p, a=a, b=b, x=x, residual=f, bracket=(lo, hi), iterations=max_iter
    )


def normal_cdf(z: float) -> float:
    """Standard normal distribution function."""
    return 0.5 * math.erfc(-float(z) / math.sqrt(2.0))


def normal_quantile(p: float) -> float:
    if not 0.0 < p < 1.0:
        raise ValidationError(f"p must lie strictly inside (0, 1), got {p}")
    return _STD_NORMAL.inv_cdf(p)


def student_t_cdf(t: float, nu: float) -> float:
    """Distribution function of Student's t with ``nu`` degrees of freedom."""
    t = float(t)
    nu = float(nu)
    if not (nu > 0 and math.isfinite(nu)):
        raise ValidationError(f"degrees of freedom must be positive, got {nu}")
    if t == 0.0:
        return 0.5
    if math.isinf(t):
        return 1.0 if t > 0 else 0.0
    t2 = t * t
    x = nu / (nu + t2)
    y = t2 / (nu + t2)
    tail = 0.5 * _inc_beta(x, y, 0.5 * nu, 0.5)
    return 1.0 - tail if t > 0 else tail


def student_t_quantile(p: float, nu: float) -> float:
    if not 0.0 < p < 1.0:
        raise ValidationError(f"p must lie strictly inside (0, 1), got {p}")
    if not (nu > 0 and math.isfinite(nu)):
        raise ValidationError(f"degrees of freedom must be positive, got {nu}")
    if p == 0.5:
        return 0.0
    tail = min(p, 1.0 - p)
    # P(|T| > t) = I_{nu/(nu+t^2)}(nu/2, 1/2)
    x = beta_quantile(2.0 * tail, 0.5 * nu, 0.5)
    t = math.sqrt(nu * (1.0 - x) / x)
    return t if p > 0.5 else -t


@dataclass
class SeededStream:
    """Reproducible random stream keyed by ``(seed, stream_id)``.

    The underlying generator is Philox, a counter-based bit generator, keyed
    with both integers, so stream ``k`` of a run yields the same draws no
    matter which worker consumes it or in what order.
    """

    seed: int
    stream_id: int = 0
    _gen: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or not 0 <= value < 2**64:
                raise ValidationError(f"{name} must be an unsigned 64-bit integer, got {value!r}")
        self.seed = int(self.seed)
        self.stream_id = int(self.stream_id)
        key = np.array([self.seed, self.stream_id], dtype=np.uint64)
        self._gen = np.random.Generator(np.random.Philox(key=key))

    @property
    def generator(self) -> np.random.Generator:
        return self._gen

    def spawn(self, offset: int) -> "SeededStream":
        """Sibling stream with ``stream_id + offset`` (same seed)."""
        return SeededStream(self.seed, (self.stream_id + int(offset)) % 2**64)


def sample_beta(a, b, stream: SeededStream, size=None):
    _check_shape(a, b)
    return stream.generator.beta(a, b, size)


def sample_binomial(n, p, stream: SeededStream, size=None):
    if n < 0 or int(n) != n:
        raise ValidationError(f"binomial n must be a non-negative integer, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"binomial p must lie in [0, 1], got {p}")
    return stream.generator.binomial(int(n), p, size)


def sample_normal(mu, sigma, stream: SeededStream, size=None):
    if not sigma > 0:
        raise ValidationError(f"sigma must be positive, got {sigma}")
    return stream.generator.normal(mu, sigma, size)


def sample_scaled_inv_chi2(nu, s2, stream: SeededStream, size=None):
    """Draws of nu * s2 / chi2_nu."""
    if not nu > 0:
        raise ValidationError(f"nu must be positive, got {nu}")
    if not s2 > 0:
        raise ValidationError(f"s2 must be positive, got {s2}")
    return nu * s2 / stream.generator.chisquare(nu, size)
