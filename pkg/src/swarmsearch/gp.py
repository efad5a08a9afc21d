"""Gaussian-process regression with a squared-exponential kernel.

Zero-mean prior, homoscedastic noise. Supports posterior mean/std queries,
variance conditioning on extra (value-free) design points, and hyperparameter
selection by marginal log-likelihood maximization with analytic gradients.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve, cholesky, solve_triangular
from scipy.linalg.lapack import dpotri
from scipy.optimize import minimize

__all__ = [
    "Dataset",
    "GpHyperParams",
    "GpFitConfig",
    "GpModel",
    "GpFitError",
    "kernel",
    "kernel_matrix",
    "log_likelihood",
    "log_likelihood_grad",
    "fit",
    "posterior_mean",
    "posterior_std",
    "posterior_std_augmented",
]

_LOG2PI = math.log(2.0 * math.pi)

# Diagonal jitter ladder, relative to signal variance, applied when a
# factorization fails numerically.
_JITTER_START = 1e-10
_JITTER_MAX = 1e-4

# Noise floor keeping the likelihood well-posed while fitting; exact-zero
# noise remains legal for directly constructed models.
NOISE_FLOOR = 1e-8


class GpFitError(RuntimeError):
    """Covariance stayed non-positive-definite after jitter escalation."""


class Dataset:
    """Ordered observation records: (time s, observer id, location m, value).

    Records are kept sorted by (time, observer); the ordering is stable and
    duplicates of the same (observer, time) key collapse to the first copy.
    """

    __slots__ = ("times", "observers", "locations", "values")

    def __init__(self, times, observers, locations, values, _sorted=False):
        times = np.asarray(times, dtype=float).reshape(-1)
        observers = np.asarray(observers, dtype=np.int64).reshape(-1)
        locations = np.asarray(locations, dtype=float).reshape(-1, 2)
        values = np.asarray(values, dtype=float).reshape(-1)
        n = len(times)
        if not (len(observers) == len(locations) == len(values) == n):
            raise ValueError("field lengths disagree")
        if n and not (np.all(np.isfinite(locations)) and np.all(np.isfinite(values))):
            raise ValueError("locations and values must be finite")
        if not _sorted and n:
            order = np.lexsort((observers, times))
            times, observers = times[order], observers[order]
            locations, values = locations[order], values[order]
            keep = np.ones(n, dtype=bool)
            same = (times[1:] == times[:-1]) & (observers[1:] == observers[:-1])
            keep[1:] = ~same
            if not keep.all():
                times, observers = times[keep], observers[keep]
                locations, values = locations[keep], values[keep]
        self.times = times
        self.observers = observers
        self.locations = locations
        self.values = values

    @classmethod
    def empty(cls) -> "Dataset":
        return cls([], [], np.zeros((0, 2)), [])

    def __len__(self) -> int:
        return len(self.times)

    def merge(self, *others: "Dataset") -> "Dataset":
        """Union of records, re-sorted, deduplicated by (observer, time)."""
        parts = [self, *others]
        return Dataset(
            np.concatenate([p.times for p in parts]),
            np.concatenate([p.observers for p in parts]),
            np.vstack([p.locations for p in parts]),
            np.concatenate([p.values for p in parts]),
        )

    def take(self, idx) -> "Dataset":
        return Dataset(
            self.times[idx], self.observers[idx], self.locations[idx], self.values[idx],
            _sorted=True,
        )

    def best_location(self) -> np.ndarray:
        """Location of the highest observed value (first one on ties)."""
        if not len(self):
            raise ValueError("empty dataset has no best location")
        return self.locations[int(np.argmax(self.values))].copy()

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["time", "observer", "x", "y", "value"])
            for t, o, loc, v in zip(self.times, self.observers, self.locations, self.values):
                w.writerow([repr(float(t)), int(o), repr(float(loc[0])), repr(float(loc[1])), repr(float(v))])

    @classmethod
    def from_csv(cls, path) -> "Dataset":
        times, obs, locs, vals = [], [], [], []
        with open(path, newline="") as fh:
            r = csv.DictReader(fh)
            for row in r:
                times.append(float(row["time"]))
                obs.append(int(row["observer"]))
                locs.append((float(row["x"]), float(row["y"])))
                vals.append(float(row["value"]))
        return cls(times, obs, np.asarray(locs).reshape(-1, 2), vals)


@dataclass(frozen=True)
class GpHyperParams:
    length_scale: float
    signal_std: float
    noise_std: float

    def __post_init__(self):
        vals = (self.length_scale, self.signal_std, self.noise_std)
        if not all(np.isfinite(vals)):
            raise ValueError("hyperparameters must be finite")
        if self.length_scale <= 0 or self.signal_std <= 0 or self.noise_std < 0:
            raise ValueError("length_scale and signal_std must be > 0, noise_std >= 0")


@dataclass(frozen=True)
class GpFitConfig:
    max_iter: int = 100
    rel_tol: float = 1e-6
    noise_floor: float = NOISE_FLOOR
    # log-space box constraints: (length_scale, signal_std, noise_std)
    lower: tuple = (1e-3, 1e-6, NOISE_FLOOR)
    upper: tuple = (1e4, 1e3, 1e3)
    warm_only: bool = False  # skip the heuristic/default restarts
    max_fun: int | None = None  # cap on likelihood evaluations (None: unbounded)


def _sqdist(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pairwise squared Euclidean distances, clamped at zero."""
    a = np.atleast_2d(a)
    b = np.atleast_2d(b)
    na = np.sum(a * a, axis=1)
    nb = np.sum(b * b, axis=1)
    d2 = na[:, None] + nb[None, :] - 2.0 * (a @ b.T)
    return np.maximum(d2, 0.0)


def kernel(a, b, hyper: GpHyperParams) -> float:
    """Squared-exponential covariance between two points."""
    diff = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    return hyper.signal_std**2 * math.exp(-float(diff @ diff) / (2.0 * hyper.length_scale**2))


def kernel_matrix(xa, xb, hyper: GpHyperParams) -> np.ndarray:
    return hyper.signal_std**2 * np.exp(-_sqdist(xa, xb) / (2.0 * hyper.length_scale**2))


def _chol_with_jitter(cov: np.ndarray, signal_var: float):
    """Lower Cholesky factor of `cov`, escalating diagonal jitter on failure."""
    try:
        return cholesky(cov, lower=True, check_finite=False), 0.0
    except np.linalg.LinAlgError:
        pass
    jitter = _JITTER_START
    eye = np.eye(len(cov))
    while jitter <= _JITTER_MAX * (1.0 + 1e-12):
        try:
            return cholesky(cov + jitter * signal_var * eye, lower=True, check_finite=False), jitter
        except np.linalg.LinAlgError:
            jitter *= 10.0
    raise GpFitError("covariance not positive definite after jitter escalation")


class GpModel:
    """Immutable fitted GP: hyperparameters + training snapshot + factorization.

    Rebuilding from (training, hyper) reproduces bit-identical predictions,
    since the factorization path is deterministic.
    """

    __slots__ = ("hyper", "training", "_chol", "_alpha", "_log_lik")

    def __init__(self, hyper: GpHyperParams, training: Dataset):
        self.hyper = hyper
        self.training = training
        n = len(training)
        if n == 0:
            self._chol = None
            self._alpha = None
            self._log_lik = 0.0
            return
        cov = kernel_matrix(training.locations, training.locations, hyper)
        cov[np.diag_indices_from(cov)] += hyper.noise_std**2
        L, _ = _chol_with_jitter(cov, hyper.signal_std**2)
        alpha = cho_solve((L, True), training.values, check_finite=False)
        self._chol = L
        self._alpha = alpha
        self._log_lik = float(
            -0.5 * training.values @ alpha
            - np.sum(np.log(np.diag(L)))
            - 0.5 * n * _LOG2PI
        )

    @property
    def log_lik(self) -> float:
        return self._log_lik

    def mean(self, x) -> np.ndarray:
        """Posterior mean at query points (k, 2) -> (k,). Zero prior mean."""
        pts = np.atleast_2d(np.asarray(x, dtype=float))
        if self._chol is None:
            return np.zeros(len(pts))
        kx = kernel_matrix(self.training.locations, pts, self.hyper)
        return kx.T @ self._alpha

    def std(self, x) -> np.ndarray:
        """Posterior standard deviation at query points, clamped at zero."""
        pts = np.atleast_2d(np.asarray(x, dtype=float))
        if self._chol is None:
            return np.full(len(pts), self.hyper.signal_std)
        kx = kernel_matrix(self.training.locations, pts, self.hyper)
        v = solve_triangular(self._chol, kx, lower=True, check_finite=False)
        var = self.hyper.signal_std**2 - np.sum(v * v, axis=0)
        return np.sqrt(np.maximum(var, 0.0))

    def augment(self, virtual_points) -> "VarianceModel":
        """Variance-only model over the training design extended by extra points.

        The extra points carry no values; variance does not need them. Extra
        points get the same noise variance on the diagonal as real samples.
        """
        virtual = np.asarray(virtual_points, dtype=float).reshape(-1, 2)
        if len(virtual) == 0:
            return VarianceModel(self.hyper, self.training.locations, self._chol)
        if self._chol is None:
            design = virtual
        else:
            design = np.vstack([self.training.locations, virtual])
        cov = kernel_matrix(design, design, self.hyper)
        cov[np.diag_indices_from(cov)] += self.hyper.noise_std**2
        L, _ = _chol_with_jitter(cov, self.hyper.signal_std**2)
        return VarianceModel(self.hyper, design, L)


class VarianceModel:
    """Posterior-std queries against a fixed (possibly augmented) design."""

    __slots__ = ("hyper", "design", "_chol")

    def __init__(self, hyper: GpHyperParams, design: np.ndarray, chol):
        self.hyper = hyper
        self.design = design
        self._chol = chol

    def std(self, x) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(x, dtype=float))
        if self._chol is None:
            return np.full(len(pts), self.hyper.signal_std)
        kx = kernel_matrix(self.design, pts, self.hyper)
        v = solve_triangular(self._chol, kx, lower=True, check_finite=False)
        var = self.hyper.signal_std**2 - np.sum(v * v, axis=0)
        return np.sqrt(np.maximum(var, 0.0))


def _nll_and_grad(log_params: np.ndarray, d2: np.ndarray, y: np.ndarray):
    """Negative marginal log-likelihood and its gradient in log-parameter space.

    For cov = K + sn^2 I with K the SE kernel:
      d logL / d theta = 0.5 * tr((a a^T - cov^-1) dcov/dtheta),  a = cov^-1 y.
    In log space: dK/dlog(l) = K * d2 / l^2, dK/dlog(s) = 2K,
    dcov/dlog(sn) = 2 sn^2 I.
    """
    n = len(y)
    ell, s, sn = np.exp(log_params)
    K = s**2 * np.exp(-d2 / (2.0 * ell**2))
    cov = K.copy()
    cov[np.diag_indices_from(cov)] += sn**2
    try:
        L, _ = _chol_with_jitter(cov, s**2)
    except GpFitError:
        return 1e25, np.zeros(3)
    alpha = cho_solve((L, True), y, check_finite=False)
    nll = float(0.5 * y @ alpha + np.sum(np.log(np.diag(L))) + 0.5 * n * _LOG2PI)

    inv, info = dpotri(L, lower=1)
    if info != 0:  # pragma: no cover - dpotri failure after a good factorization
        inv = cho_solve((L, True), np.eye(n))
    A = np.outer(alpha, alpha)
    A -= inv
    A -= np.tril(inv, -1).T  # dpotri fills one triangle only
    AK = A * K
    g_ell = 0.5 * float(np.sum(AK * d2)) / ell**2
    g_s = float(np.sum(AK))
    g_sn = sn**2 * float(np.trace(A))
    return nll, -np.array([g_ell, g_s, g_sn])


def log_likelihood(data: Dataset, hyper: GpHyperParams) -> float:
    """Marginal log-likelihood of the data under the given hyperparameters."""
    if len(data) == 0:
        return 0.0
    d2 = _sqdist(data.locations, data.locations)
    nll, _ = _nll_and_grad(
        np.log([hyper.length_scale, hyper.signal_std, max(hyper.noise_std, NOISE_FLOOR)]),
        d2,
        data.values,
    )
    return -nll


def log_likelihood_grad(data: Dataset, hyper: GpHyperParams) -> np.ndarray:
    """Gradient of the log-likelihood w.r.t. log(length_scale, signal_std, noise_std)."""
    d2 = _sqdist(data.locations, data.locations)
    nll, ngrad = _nll_and_grad(
        np.log([hyper.length_scale, hyper.signal_std, max(hyper.noise_std, NOISE_FLOOR)]),
        d2,
        data.values,
    )
    return -ngrad


def _heuristic_start(data: Dataset) -> np.ndarray:
    locs, vals = data.locations, data.values
    span = np.ptp(locs, axis=0)
    ell = max(0.25 * float(np.max(span)), 1e-2)
    s = max(float(np.std(vals)), 1e-3)
    return np.log([ell, s, max(0.1 * s, NOISE_FLOOR)])


def fit(data: Dataset, init: GpHyperParams, cfg: GpFitConfig | None = None) -> GpModel:
    """Fit hyperparameters by multi-start gradient ascent on the log-likelihood.

    Starts: the supplied `init` (warm start), a data-driven heuristic, and a
    fixed default; the best final likelihood wins and is never worse than the
    likelihood at `init`. Empty data returns a prior-only model unfitted.
    """
    cfg = cfg or GpFitConfig()
    if len(data) == 0:
        return GpModel(init, data)

    d2 = _sqdist(data.locations, data.locations)
    y = data.values
    lo = np.log(cfg.lower)
    hi = np.log(cfg.upper)

    def clipped(p):
        return np.clip(p, lo, hi)

    warm = clipped(np.log([
        init.length_scale,
        init.signal_std,
        max(init.noise_std, cfg.noise_floor),
    ]))
    starts = [warm]
    if not cfg.warm_only:
        starts.append(clipped(_heuristic_start(data)))
        starts.append(clipped(np.log([1.0, 1.0, 0.05])))

    options = {"maxiter": cfg.max_iter, "ftol": cfg.rel_tol}
    if cfg.max_fun is not None:
        options["maxfun"] = cfg.max_fun
    best_p, best_f = warm, _nll_and_grad(warm, d2, y)[0]
    for p0 in starts:
        res = minimize(
            _nll_and_grad,
            p0,
            args=(d2, y),
            jac=True,
            method="L-BFGS-B",
            bounds=list(zip(lo, hi)),
            options=options,
        )
        if np.isfinite(res.fun) and res.fun < best_f:
            best_f, best_p = float(res.fun), res.x
    ell, s, sn = np.exp(best_p)
    return GpModel(GpHyperParams(float(ell), float(s), float(sn)), data)


def posterior_mean(model: GpModel, x):
    """Posterior mean at `x`; scalar for a single point, array for a batch."""
    x = np.asarray(x, dtype=float)
    out = model.mean(x)
    return float(out[0]) if x.ndim == 1 else out


def posterior_std(model: GpModel, x):
    x = np.asarray(x, dtype=float)
    out = model.std(x)
    return float(out[0]) if x.ndim == 1 else out


def posterior_std_augmented(model: GpModel, virtual_points, x):
    """Posterior std with the design extended by `virtual_points` (no values)."""
    x = np.asarray(x, dtype=float)
    out = model.augment(virtual_points).std(x)
    return float(out[0]) if x.ndim == 1 else out
