"""Gaussian states, linear phase-space maps, and their action laws.

A map is the triple (K, alpha, y0) acting on moments as
x -> K x + y0 and sigma -> K sigma K.T + alpha, and on characteristic
functions as chi(k) -> chi(K.T k) * exp(-k.T alpha k / 4 + 1j k.T y0).
Maps are stored raw, with no validity assumption: classification is a
query, and representing invalid candidates is the whole point.
"""

from dataclasses import dataclass, field

import numpy as np

from .symplectic import DEFAULT_TOL, is_valid_covariance


@dataclass
class GaussianState:
    """An n-mode Gaussian state given by its mean and covariance matrix.

    The covariance matrix is validated at construction: it must be a
    physical quantum covariance (all symplectic eigenvalues >= 1).
    """

    mean: np.ndarray
    cov: np.ndarray
    tol: float = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        self.mean = np.asarray(self.mean, dtype=float).reshape(-1)
        self.cov = np.asarray(self.cov, dtype=float)
        d = self.mean.shape[0]
        if d == 0 or d % 2 != 0:
            raise ValueError(f"mean length must be a positive even number, got {d}")
        if self.cov.shape != (d, d):
            raise ValueError(
                f"covariance shape {self.cov.shape} does not match mean length {d}"
            )
        if not is_valid_covariance(self.cov, tol=self.tol):
            raise ValueError("covariance matrix is not a valid quantum covariance")

    @property
    def n(self):
        return self.mean.shape[0] // 2


@dataclass
class GaussianMap:
    """A candidate phase-space map (K, alpha, y0) on n modes."""

    K: np.ndarray
    alpha: np.ndarray
    y0: np.ndarray = None
    tol: float = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        self.K = np.asarray(self.K, dtype=float)
        self.alpha = np.asarray(self.alpha, dtype=float)
        d = self.K.shape[0]
        if self.K.ndim != 2 or self.K.shape != (d, d) or d == 0 or d % 2 != 0:
            raise ValueError(f"K must be square with even dimension, got {self.K.shape}")
        if self.alpha.shape != (d, d):
            raise ValueError(
                f"alpha shape {self.alpha.shape} does not match K shape {self.K.shape}"
            )
        scale = max(1.0, float(np.max(np.abs(self.alpha))))
        if np.max(np.abs(self.alpha - self.alpha.T)) > self.tol * scale:
            raise ValueError("alpha must be symmetric within tolerance")
        self.alpha = 0.5 * (self.alpha + self.alpha.T)
        if self.y0 is None:
            self.y0 = np.zeros(d)
        else:
            self.y0 = np.asarray(self.y0, dtype=float).reshape(-1)
            if self.y0.shape != (d,):
                raise ValueError(f"y0 length {self.y0.shape[0]} does not match {d}")

    @property
    def n(self):
        return self.K.shape[0] // 2


def char_function(state, k):
    """Characteristic function exp(-k.T sigma k / 4 + 1j k.T x) at k."""
    k = np.asarray(k, dtype=float).reshape(-1)
    if k.shape[0] != state.mean.shape[0]:
        raise ValueError(
            f"k has length {k.shape[0]}, state lives on {state.mean.shape[0]} quadratures"
        )
    return np.exp(-0.25 * k @ state.cov @ k + 1j * (k @ state.mean))


def wigner_function(state, r):
    """Gaussian Wigner function at the phase-space point r.

    Returns det(pi sigma)^{-1/2} * exp(-(r-x).T sigma^{-1} (r-x)).

    Raises:
        ValueError: if the covariance matrix is singular.
    """
    r = np.asarray(r, dtype=float).reshape(-1)
    if r.shape[0] != state.mean.shape[0]:
        raise ValueError(
            f"r has length {r.shape[0]}, state lives on {state.mean.shape[0]} quadratures"
        )
    sign, logdet = np.linalg.slogdet(np.pi * state.cov)
    if sign <= 0:
        raise ValueError("covariance matrix is singular or not positive definite")
    diff = r - state.mean
    try:
        expo = diff @ np.linalg.solve(state.cov, diff)
    except np.linalg.LinAlgError as exc:
        raise ValueError("covariance matrix is singular") from exc
    return float(np.exp(-0.5 * logdet - expo))


def apply_map(gmap, state):
    """Push a state's moments through a map, without asserting validity.

    Returns:
        Tuple (mean, cov) of the candidate output moments
        (K x + y0, K sigma K.T + alpha). The caller decides whether the
        result is physical, e.g. via is_valid_covariance.
    """
    if gmap.n != state.n:
        raise ValueError(f"map acts on {gmap.n} modes, state has {state.n}")
    mean = gmap.K @ state.mean + gmap.y0
    cov = gmap.K @ state.cov @ gmap.K.T + gmap.alpha
    return mean, cov


def apply_map_char(gmap, chi_in, k):
    """Action of a map on a characteristic function, evaluated at k.

    chi_in is a callable k -> complex. Returns
    chi_in(K.T k) * exp(-k.T alpha k / 4 + 1j k.T y0).
    """
    k = np.asarray(k, dtype=float).reshape(-1)
    if k.shape[0] != gmap.K.shape[0]:
        raise ValueError(
            f"k has length {k.shape[0]}, map acts on {gmap.K.shape[0]} quadratures"
        )
    return chi_in(gmap.K.T @ k) * np.exp(-0.25 * k @ gmap.alpha @ k + 1j * (k @ gmap.y0))


def compose(outer, inner):
    """Composition applying inner first: (K2 K1, K2 a1 K2.T + a2, K2 y1 + y2)."""
    if outer.n != inner.n:
        raise ValueError(f"mode counts differ: {outer.n} vs {inner.n}")
    return GaussianMap(
        K=outer.K @ inner.K,
        alpha=outer.K @ inner.alpha @ outer.K.T + outer.alpha,
        y0=outer.K @ inner.y0 + outer.y0,
    )


def dilatation(lam, n):
    """The dilatation map K = lam * identity, alpha = 0, y0 = 0.

    Dilatations with |lam| > 1 send every Gaussian state to a Gaussian
    state yet are not completely positive; contractions (|lam| < 1) are
    not even Gaussian-to-Gaussian.
    """
    if lam == 0:
        raise ValueError("dilatation parameter must be nonzero")
    if int(n) != n or n < 1:
        raise ValueError(f"mode count must be a positive integer, got {n!r}")
    d = 2 * int(n)
    return GaussianMap(K=float(lam) * np.eye(d), alpha=np.zeros((d, d)))


def transposition(n, modes=None):
    """Transposition of a subset of modes: diag(1, -1) on each chosen mode.

    Args:
        n: total number of modes.
        modes: iterable of 1-based mode indices to transpose; None means
            all modes; an empty iterable yields the identity map.

    Raises:
        ValueError: if a mode index is out of range.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"mode count must be a positive integer, got {n!r}")
    n = int(n)
    if modes is None:
        chosen = set(range(1, n + 1))
    else:
        chosen = set(int(m) for m in modes)
        for m in chosen:
            if m < 1 or m > n:
                raise ValueError(f"mode index {m} out of range 1..{n}")
    diag = np.ones(2 * n)
    for m in chosen:
        diag[2 * (m - 1) + 1] = -1.0
    return GaussianMap(K=np.diag(diag), alpha=np.zeros((2 * n, 2 * n)))


def transposition_matrix(n, modes=None):
    """The K matrix of transposition(n, modes), as a plain array."""
    return transposition(n, modes).K
