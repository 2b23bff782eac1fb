"""
Certified evaluation of theta_3(0, q), the one-particle series Z1 and the
weighted series S1 used for beta-derivatives.

Near q = 1 the direct series needs O(1/sqrt(-ln q)) terms, so above
DUALITY_THRESHOLD every series is evaluated through the duality transform

    theta_3(0, q) = sqrt(pi / t) * theta_3(0, exp(-pi^2 / t)),   t = -ln q

whose image nome is tiny there. Error bounds cover truncation only.
"""

from dataclasses import dataclass
import logging
import math

from .errors import ParameterError, SeriesConvergenceError

DUALITY_THRESHOLD = 0.3
DEFAULT_TOL = 1e-13
MAX_TERMS = 100_000
RELATIVE_FLOOR = 2.0 ** -53

_LOG_THRESHOLD = math.log(DUALITY_THRESHOLD)
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SeriesValue:
    value: float
    error_bound: float
    terms_used: int

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise SeriesConvergenceError(f"series value is not finite: {self.value!r}")
        if not self.error_bound >= 0.0:
            raise SeriesConvergenceError(f"invalid error bound: {self.error_bound!r}")
        if self.terms_used < 1:
            raise SeriesConvergenceError(f"terms_used must be >= 1, got {self.terms_used}")


def _check_tol(tol) -> float:
    tol = float(tol)
    if not tol > 0.0:
        raise ParameterError(f"tolerance must be positive, got {tol!r}")
    return tol


def nome_to_log(q) -> float:
    """Validate a nome in [0, 1) and return its logarithm (-inf for 0)."""
    try:
        q = float(q)
    except (TypeError, ValueError):
        raise ParameterError(f"nome must be a real number, got {q!r}") from None
    if not 0.0 <= q < 1.0:
        raise ParameterError(f"nome must lie in [0, 1), got {q!r}")
    if q == 0.0:
        return -math.inf
    return math.log(q)


def _check_log(log_tau) -> float:
    log_tau = float(log_tau)
    if math.isnan(log_tau) or log_tau >= 0.0:
        raise ParameterError(f"log nome must be negative, got {log_tau!r}")
    return log_tau


def tail_bound(log_tau: float, n: int, power: int = 0) -> float:
    """Upper bound of sum_{m>n} m^(2*power) * tau^(m^2).

    Consecutive terms past n shrink at least by the ratio of the first two, so
    the tail is majorized by a geometric series.
    """
    if log_tau == -math.inf:
        return 0.0
    first = n + 1
    ratio = ((first + 1) / first) ** (2 * power) * math.exp((2 * n + 3) * log_tau)
    if ratio >= 1.0:
        return math.inf
    return first ** (2 * power) * math.exp(first * first * log_tau) / (1.0 - ratio)


def _direct_sum(log_tau: float, power: int, tol: float):
    """Sum m>=1 of m^(2*power) * tau^(m^2).

    Stops once the tail bound is below tol/2 and below the rounding floor of
    the partial sum, so tiny low-temperature values keep full relative
    precision.
    """
    total = 0.0
    n = 0
    while True:
        n += 1
        if n > MAX_TERMS:
            raise SeriesConvergenceError(
                f"series at log tau={log_tau!r} did not reach tol={tol!r} in {MAX_TERMS} terms"
            )
        total += n ** (2 * power) * math.exp(n * n * log_tau)
        bound = tail_bound(log_tau, n, power)
        if bound < tol / 2.0 and bound <= RELATIVE_FLOOR * total:
            return total, bound, n


def _dual_log(log_tau: float) -> float:
    t = -log_tau
    log_dual = -math.pi ** 2 / t
    if log_dual > _LOG_THRESHOLD:
        # Only reachable if the caller bypassed the threshold test.
        logger.error("对偶变换后的 nome 超过阈值: log_dual=%r", log_dual)
        raise SeriesConvergenceError(
            f"duality image of log q={log_tau!r} lies above the threshold {DUALITY_THRESHOLD}"
        )
    return log_dual


def theta3_from_log(log_q: float, tol: float = DEFAULT_TOL) -> SeriesValue:
    log_q = _check_log(log_q)
    tol = _check_tol(tol)
    if log_q <= _LOG_THRESHOLD:
        total, bound, terms = _direct_sum(log_q, 0, tol / 2.0)
        return SeriesValue(1.0 + 2.0 * total, 2.0 * bound, terms)

    t = -log_q
    logger.debug("theta3 走对偶变换: log_q=%r", log_q)
    prefactor = math.sqrt(math.pi / t)
    total, bound, terms = _direct_sum(_dual_log(log_q), 0, tol / (2.0 * prefactor))
    return SeriesValue(prefactor * (1.0 + 2.0 * total), prefactor * 2.0 * bound, terms)


def z1_from_log(log_tau: float, tol: float = DEFAULT_TOL) -> SeriesValue:
    log_tau = _check_log(log_tau)
    tol = _check_tol(tol)
    if log_tau <= _LOG_THRESHOLD:
        total, bound, terms = _direct_sum(log_tau, 0, tol)
        return SeriesValue(total, bound, terms)

    theta = theta3_from_log(log_tau, 2.0 * tol)
    return SeriesValue((theta.value - 1.0) / 2.0, theta.error_bound / 2.0, theta.terms_used)


def weighted_series_from_log(log_tau: float, power: int = 1, tol: float = DEFAULT_TOL) -> SeriesValue:
    if power != 1:
        raise ParameterError(f"only power=1 is supported, got {power!r}")
    log_tau = _check_log(log_tau)
    tol = _check_tol(tol)
    if log_tau <= _LOG_THRESHOLD:
        total, bound, terms = _direct_sum(log_tau, 1, tol)
        return SeriesValue(total, bound, terms)

    logger.debug("S1 走微分对偶变换: log_tau=%r", log_tau)
    # Differentiated duality transform:
    # S1(q) = sqrt(pi/t) / (2t) * [theta~ / 2 - (2 pi^2 / t) * S1~]
    t = -log_tau
    log_dual = _dual_log(log_tau)
    prefactor = math.sqrt(math.pi / t) / (2.0 * t)
    coeff_theta = 0.5
    coeff_s1 = 2.0 * math.pi ** 2 / t
    inner_tol = tol / (2.0 * prefactor * (2.0 * coeff_theta + coeff_s1))

    theta_sum, theta_bound, theta_terms = _direct_sum(log_dual, 0, inner_tol)
    s1_sum, s1_bound, s1_terms = _direct_sum(log_dual, 1, inner_tol)
    value = prefactor * (coeff_theta * (1.0 + 2.0 * theta_sum) - coeff_s1 * s1_sum)
    error = prefactor * (coeff_theta * 2.0 * theta_bound + coeff_s1 * s1_bound)
    return SeriesValue(value, error, max(theta_terms, s1_terms))


def theta3(q, tol: float = DEFAULT_TOL) -> SeriesValue:
    log_q = nome_to_log(q)
    tol = _check_tol(tol)
    if log_q == -math.inf:
        return SeriesValue(1.0, 0.0, 1)
    return theta3_from_log(log_q, tol)


def z1(tau, tol: float = DEFAULT_TOL) -> SeriesValue:
    log_tau = nome_to_log(tau)
    tol = _check_tol(tol)
    if log_tau == -math.inf:
        return SeriesValue(0.0, 0.0, 1)
    return z1_from_log(log_tau, tol)


def weighted_series(tau, power: int = 1, tol: float = DEFAULT_TOL) -> SeriesValue:
    if power != 1:
        raise ParameterError(f"only power=1 is supported, got {power!r}")
    log_tau = nome_to_log(tau)
    tol = _check_tol(tol)
    if log_tau == -math.inf:
        return SeriesValue(0.0, 0.0, 1)
    return weighted_series_from_log(log_tau, power, tol)


def classical_z1(tau: float) -> float:
    """High-temperature form of Z1: sqrt(pi / -ln tau) / 2 - 1/2."""
    return 0.5 * math.sqrt(math.pi / -nome_to_log(tau)) - 0.5


def quantum_z1(tau: float) -> float:
    """Low-temperature form of Z1: the ground level alone."""
    nome_to_log(tau)
    return float(tau)
