"""Coefficient sequences of dilated Fock states and mixture probing.

A phase-space dilatation by lam sends the Fock state |m><m| to an
operator that is again diagonal in the Fock basis, with a real
coefficient sequence p_n whose generating function is

    g_m(z) = (1 - tau) (z - tau)^m (1 - tau z)^(-(m+1)),
    tau = (lam^2 - 1) / (lam^2 + 1).

This module extracts the p_n, computes the norm sums that quantify how
the sequences grow, probes finite Fock mixtures for negativity (the
convex-hull certificate), and evaluates the oscillatory large-m limit
of g_m along its natural scaling.
"""

import math
from dataclasses import dataclass, field

import numpy as np

DEFAULT_EPS = 1e-12

CERTIFIED = "certified_not_in_convex_hull"
NO_NEGATIVITY = "no_negativity_found"


def _tau_of(lam):
    lam = float(lam)
    if lam == 0.0:
        raise ValueError("dilatation parameter must be nonzero")
    return (lam * lam - 1.0) / (lam * lam + 1.0)


def _tail_cutoff(m, tau, eps):
    """Smallest N with the analytic tail bound below eps.

    The tail of the factored series is bounded by
    (1 - tau) (1 + |tau|)^m sum_{k > K} C(m+k, m) |tau|^k with N = m + K,
    and the sum is bounded by its first term times a geometric factor
    1 / (1 - rho), rho = |tau| (m + K + 2) / (K + 2) < 1. Binomials go
    through lgamma so m in the hundreds stays in range.

    Returns:
        (N, tail_bound) with tail_bound the certified bound actually
        achieved at the returned N.
    """
    t = abs(tau)
    if t == 0.0:
        return m, 0.0
    log_pref = m * math.log1p(t) + math.log(1.0 - tau)

    def log_tail(k):
        rho = t * (m + k + 2.0) / (k + 2.0)
        if rho >= 1.0:
            return math.inf
        log_binom = (
            math.lgamma(m + k + 2.0) - math.lgamma(k + 2.0) - math.lgamma(m + 1.0)
        )
        return log_pref + log_binom + (k + 1.0) * math.log(t) - math.log(1.0 - rho)

    target = math.log(eps)
    # Walk past the rho < 1 threshold, then double until the bound holds.
    k_lo = int(t * (m + 2.0) / (1.0 - t)) + 1
    k_hi = max(k_lo + 1, 8)
    while log_tail(k_hi) >= target:
        k_hi *= 2
        if k_hi > 10**9:
            raise RuntimeError("tail cutoff search failed to terminate")
    while k_hi - k_lo > 1:
        k_mid = (k_lo + k_hi) // 2
        if log_tail(k_mid) < target:
            k_hi = k_mid
        else:
            k_lo = k_mid
    return m + k_hi, math.exp(log_tail(k_hi))


def _coefficient_rows(m_max, tau, n_max):
    """All rows p^(j), j <= m_max, out to column n_max, in one pass.

    Multiplying by one factor (z - tau) / (1 - tau z) maps row j - 1 to
    row j through

        p_j[n] = tau p_j[n-1] + p_{j-1}[n-1] - tau p_{j-1}[n],

    a numerically benign two-term update (the factor has modulus one on
    the unit circle, so no stage amplifies). The update is evaluated
    along anti-diagonals j + n = d, which depend only on the two
    previous diagonals and therefore vectorize; everything runs in
    extended precision and the caller rounds at the very end.

    Returns:
        Array of shape (m_max + 1, n_max + 1) in extended precision.
    """
    tau_l = np.longdouble(tau)
    one = np.longdouble(1.0)
    rows = m_max + 1
    cols = n_max + 1
    P = np.zeros((rows, cols), dtype=np.longdouble)
    P[0, :] = (one - tau_l) * tau_l ** np.arange(cols)
    P[:, 0] = (one - tau_l) * (-tau_l) ** np.arange(rows)

    w_prev2 = np.zeros(rows, dtype=np.longdouble)   # diagonal d - 2
    w_prev1 = np.zeros(rows, dtype=np.longdouble)   # diagonal d - 1
    w_cur = np.zeros(rows, dtype=np.longdouble)
    w_prev2[0] = P[0, 0]
    if rows > 1:
        w_prev1[1] = P[1, 0]
    if cols > 1:
        w_prev1[0] = P[0, 1]

    for d in range(2, m_max + n_max + 1):
        j_min = max(0, d - n_max)
        j_max = min(m_max, d)
        a = max(1, j_min)
        b = min(j_max, d - 1)
        if a <= b:
            w_cur[a : b + 1] = w_prev2[a - 1 : b] + tau_l * (
                w_prev1[a : b + 1] - w_prev1[a - 1 : b]
            )
        if j_min == 0:
            w_cur[0] = P[0, d]
        if j_max == d:
            w_cur[d] = P[d, 0]
        js = np.arange(j_min, j_max + 1)
        P[js, d - js] = w_cur[j_min : j_max + 1]
        w_prev2, w_prev1, w_cur = w_prev1, w_cur, w_prev2
    return P


@dataclass
class FockCoefficients:
    """Coefficient sequence of a dilated Fock state.

    Attributes:
        m: Fock index of the input state.
        lam: dilatation parameter.
        tau: derived series parameter (lam^2 - 1) / (lam^2 + 1).
        coeffs: p_0 .. p_N as float64.
        truncation_N: last retained index N.
        tail_bound: certified upper bound on sum_{n > N} |p_n|, plus the
            float64 representation allowance of the stored row, so sums
            over coeffs are comparable against it directly.
    """

    m: int
    lam: float
    tau: float
    coeffs: np.ndarray = field(repr=False)
    truncation_N: int
    tail_bound: float

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=float)


@dataclass
class ProbeResult:
    """Outcome of probing a Fock mixture for negativity after dilatation.

    coefficients holds the full output diagonal q_0 .. q_N; the verdict
    is certified exactly when some q_n < -tail_bound.
    """

    min_coefficient: float
    negative_indices: list
    verdict: str
    tail_bound: float
    coefficients: np.ndarray = field(repr=False, default=None)


def _validate_m(m):
    if not isinstance(m, (int, np.integer)) or isinstance(m, bool) or m < 0:
        raise ValueError(f"Fock index must be a nonnegative integer, got {m!r}")


def _representation_allowance(coeffs):
    """Worst-case float64 noise of storing and summing the row.

    The analytic tail bound can be exactly tight (m = 0 is a pure
    geometric series), so a recorded bound meant to majorize sums over
    the stored float64 row must also cover rounding of the row itself.
    """
    peak = float(np.max(np.abs(coeffs))) if coeffs.size else 0.0
    return coeffs.size * 2.3e-16 * max(1.0, peak)


def _row(m, lam, eps):
    """Extended-precision row p^(m) plus its cutoff data; tau = 0 is exact."""
    _validate_m(m)
    if eps <= 0.0:
        raise ValueError(f"precision must be positive, got {eps!r}")
    tau = _tau_of(lam)
    if tau == 0.0:
        row = np.zeros(m + 1, dtype=np.longdouble)
        row[m] = 1.0
        return row, tau, m, 0.0
    n_cut, tail = _tail_cutoff(m, tau, eps)
    P = _coefficient_rows(m, tau, n_cut)
    return P[m], tau, n_cut, tail


def dilated_fock_coefficients(m, lam, eps=DEFAULT_EPS):
    """Coefficients p_0 .. p_N of the dilated Fock state |m><m|.

    The sequence is the coefficient list of g_m in powers of z,
    truncated at an N where the analytic tail bound drops below eps.
    lam = 1 or lam = -1 gives tau = 0 and the exact identity sequence
    delta_{nm} with a zero tail bound. Contractions (|lam| < 1, tau < 0)
    run through the same series.

    Args:
        m: Fock index, nonnegative integer.
        lam: dilatation parameter, nonzero.
        eps: truncation precision for the tail bound.

    Returns:
        FockCoefficients with float64 coefficients.
    """
    row, tau, n_cut, tail = _row(m, lam, eps)
    coeffs = np.asarray(row, dtype=float)
    if tail > 0.0:
        tail += _representation_allowance(coeffs)
    return FockCoefficients(
        m=int(m),
        lam=float(lam),
        tau=float(tau),
        coeffs=coeffs,
        truncation_N=int(n_cut),
        tail_bound=float(tail),
    )


def dilated_fock_sweep(m_max, lam, eps=DEFAULT_EPS):
    """FockCoefficients for every m <= m_max from a single series pass.

    Row m of the coefficient table only feeds on row m - 1, so one pass
    to the largest cutoff serves all m at once; each row is truncated at
    its own certified cutoff. Much faster than m_max + 1 separate calls.
    """
    _validate_m(m_max)
    if eps <= 0.0:
        raise ValueError(f"precision must be positive, got {eps!r}")
    tau = _tau_of(lam)
    out = []
    if tau == 0.0:
        for m in range(m_max + 1):
            coeffs = np.zeros(m + 1)
            coeffs[m] = 1.0
            out.append(
                FockCoefficients(
                    m=m, lam=float(lam), tau=0.0, coeffs=coeffs,
                    truncation_N=m, tail_bound=0.0,
                )
            )
        return out
    cuts = [_tail_cutoff(m, tau, eps) for m in range(m_max + 1)]
    n_global = max(n for n, _ in cuts)
    P = _coefficient_rows(m_max, tau, n_global)
    for m in range(m_max + 1):
        n_cut, tail = cuts[m]
        coeffs = np.asarray(P[m, : n_cut + 1], dtype=float)
        out.append(
            FockCoefficients(
                m=m,
                lam=float(lam),
                tau=float(tau),
                coeffs=coeffs,
                truncation_N=int(n_cut),
                tail_bound=float(tail + _representation_allowance(coeffs)),
            )
        )
    return out


def trace_norm_sum(m, lam, eps=DEFAULT_EPS):
    """Sum of |p_n| up to the truncation cutoff.

    Grows without bound in m whenever |lam| != 1; the growth across
    decades of m is the quantitative shadow of that unboundedness.
    """
    row, _, _, _ = _row(m, lam, eps)
    return float(np.sum(np.abs(row)))


def hs_norm_check(m, lam, eps=DEFAULT_EPS):
    """Sum of p_n^2; equals 1 / lam^2 up to truncation effects."""
    row, _, _, _ = _row(m, lam, eps)
    return float(np.sum(row * row))


def probe_fock_mixture(weights, lam, eps=DEFAULT_EPS):
    """Probe a finite Fock-diagonal mixture for negativity after dilatation.

    The mixture sum_m c_m |m><m| maps to the diagonal sequence
    q_n = sum_m c_m p_n^(m). A strictly negative q_n certifies that the
    input is not a mixture of Gaussian states, and the verdict is
    claimed only when the negativity exceeds the combined truncation
    tail, so float noise or truncated mass can never certify.

    Args:
        weights: probability weights c_0 .. c_M over Fock states.
        lam: dilatation parameter with |lam| > 1.
        eps: per-state truncation precision.

    Returns:
        ProbeResult; negative_indices lists every n with
        q_n < -tail_bound, and the verdict is certified exactly when
        that list is nonempty.
    """
    c = np.asarray(weights, dtype=float)
    if c.ndim != 1 or c.size == 0:
        raise ValueError("weights must be a nonempty one-dimensional sequence")
    if np.any(c < 0.0):
        raise ValueError("weights must be nonnegative")
    total = float(np.sum(c))
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"weights must sum to 1, got {total!r}")
    if abs(float(lam)) <= 1.0:
        raise ValueError(
            f"mixture probing requires a dilatation with |lam| > 1, got {lam!r}"
        )
    if eps <= 0.0:
        raise ValueError(f"precision must be positive, got {eps!r}")

    m_top = c.size - 1
    tau = _tau_of(lam)
    cuts = [_tail_cutoff(m, tau, eps) for m in range(m_top + 1)]
    n_global = max(n for n, _ in cuts)
    P = _coefficient_rows(m_top, tau, n_global)
    q = np.asarray(c.astype(np.longdouble) @ P, dtype=float)
    combined_tail = float(sum(c[m] * cuts[m][1] for m in range(m_top + 1)))
    combined_tail += _representation_allowance(q)

    negative = np.nonzero(q < -combined_tail)[0]
    verdict = CERTIFIED if negative.size else NO_NEGATIVITY
    return ProbeResult(
        min_coefficient=float(np.min(q)),
        negative_indices=[int(n) for n in negative],
        verdict=verdict,
        tail_bound=combined_tail,
        coefficients=q,
    )


def airy_limit_error(k, m, lam):
    """Distance of the rescaled generating function from its cubic-phase limit.

    Along q = a_m k with a_m = (1 - tau) / cbrt(m tau (1 + tau)), the
    phase-corrected value g_m(q) e^(i lam^2 m q) tends to e^(i k^3 / 3)
    as m grows. Returns the absolute deviation at finite m, evaluated
    from the closed form of g_m in log space so large m stays stable;
    k = 0 returns exactly 0 since the generating function is 1 there.

    Args:
        k: real scaling variable.
        m: Fock index, at least 1.
        lam: dilatation parameter, greater than 1.
    """
    if m < 1:
        raise ValueError(f"limit evaluation needs m >= 1, got {m!r}")
    if not lam > 1.0:
        raise ValueError(f"limit evaluation needs lam > 1, got {lam!r}")
    if k == 0.0:
        return 0.0
    tau = _tau_of(lam)
    a_m = (1.0 - tau) / (m * tau * (1.0 + tau)) ** (1.0 / 3.0)
    q = a_m * float(k)
    z = np.exp(-1j * q)
    log_g = (
        math.log(1.0 - tau)
        + m * np.log(z - tau)
        - (m + 1) * np.log(1.0 - tau * z)
    )
    value = np.exp(log_g + 1j * lam * lam * m * q)
    target = np.exp(1j * float(k) ** 3 / 3.0)
    return float(abs(value - target))
