"""Distances from 1 (or a target) to polynomial multiples of f in the mu-norm.

All inner products are taken on Taylor coefficients with the kernel

    <z^a, z^b>_mu = [a = b] + sum_j w_j min(a, b) xi_j^{a - b},

which is exact for polynomials.  The distance problem is solved as a least
squares problem in the Cholesky metric with a rank-revealing orthogonal
factorization, never through the (squared-condition) normal equations.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg, optimize

from .capacity import countable_set_capacity_zero
from .functions import StructuredFunction, boundary_zero_set, taylor_coefficients
from .measures import AtomicMeasure
from .quadrature import DEFAULT_CONFIG, QuadratureConfig

AGREEMENT_TOL = 0.1
AGREEMENT_FLOOR = 0.02
RANK_CUTOFF = 1e-12
MAX_COEFFS = 1024


def coefficients_of(f) -> np.ndarray:
    """Taylor coefficients of a StructuredFunction, Polynomial or sequence."""
    if isinstance(f, StructuredFunction):
        c = taylor_coefficients(f, n_samples=2 * MAX_COEFFS)
    elif hasattr(f, "coefficients"):
        c = np.asarray(f.coefficients, dtype=complex)
    else:
        c = np.asarray(f, dtype=complex)
    return c[:MAX_COEFFS] if c.size > MAX_COEFFS else c


def monomial_kernel(mu: AtomicMeasure, size: int) -> np.ndarray:
    """K[b, a] = <z^a, z^b>_mu for 0 <= a, b < size."""
    ex = mu.expanded
    k = np.arange(-(size - 1), size)
    xi = np.exp(1j * ex.theta)
    moments = (ex.weight[:, None] * xi[:, None] ** k[None, :]).sum(axis=0) if len(ex) else \
        np.zeros(k.size, complex)
    m = np.arange(size)
    diff = m[None, :] - m[:, None]  # a - b with a along columns
    kern = np.minimum(m[None, :], m[:, None]) * moments[diff + size - 1]
    return kern + np.eye(size)


def _shifted_columns(c: np.ndarray, n: int, size: int) -> np.ndarray:
    cols = np.zeros((size, n + 1), dtype=complex)
    for k in range(n + 1):
        cols[k:k + c.size, k] = c
    return cols


@dataclass
class DistanceResult:
    distances: list
    condition_numbers: list
    target_norm: float
    failure: str | None = None


def _distances(f, target, mu: AtomicMeasure, n_max: int) -> DistanceResult:
    cf = coefficients_of(f)
    ct = coefficients_of(target)
    size = max(cf.size + n_max, ct.size)
    kern = monomial_kernel(mu, size)
    r = linalg.cholesky(kern, lower=False)
    cols = r @ _shifted_columns(cf, n_max, size)
    tvec = np.zeros(size, complex)
    tvec[:ct.size] = ct
    rt = r @ tvec
    tnorm = float(np.linalg.norm(rt))
    dists, conds = [], []
    failure = None
    for n in range(n_max + 1):
        a = cols[:, :n + 1]
        try:
            x, _, _, sv = linalg.lstsq(a, rt, cond=RANK_CUTOFF, lapack_driver="gelsd")
        except (linalg.LinAlgError, ValueError) as exc:
            failure = f"degree {n}: {exc}"
            break
        resid = rt - a @ x
        dists.append(float(np.linalg.norm(resid)))
        smin = sv[-1] if sv.size else 0.0
        conds.append(float((sv[0] / smin) ** 2) if smin > 0 else math.inf)
    return DistanceResult(dists, conds, tnorm, failure)


def gram_system(f, mu: AtomicMeasure, n: int, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """G[j, k] = <z^j f, z^k f>_mu and b[j] = <1, z^j f>_mu."""
    cf = coefficients_of(f)
    size = cf.size + n
    kern = monomial_kernel(mu, size)
    cols = _shifted_columns(cf, n, size)
    gram = (cols.conj().T @ kern @ cols).T
    one = np.zeros(size, complex)
    one[0] = 1.0
    b = cols.conj().T @ kern @ one
    if not (np.all(np.isfinite(gram)) and np.all(np.isfinite(b))):
        raise ValueError("infinite Gram entry")
    return gram, b


def distance_sequence(f, mu: AtomicMeasure, n_max: int, cfg: QuadratureConfig = DEFAULT_CONFIG,
                      target=None) -> list[float]:
    """d_n = dist_mu(target, span{z^k f : k <= n}) for n = 0..n_max (target defaults to 1)."""
    target = np.ones(1, complex) if target is None else target
    return _distances(f, target, mu, n_max).distances


def extrapolate(d) -> tuple[float, dict]:
    """Fit d_n ~ a + b n^{-gamma} on the last third; returns (a, fit parameters)."""
    d = np.asarray(d, dtype=float)
    if d.size == 0:
        return math.nan, {}
    if np.all(d == d[-1]):
        return float(d[-1]), {"a": float(d[-1]), "b": 0.0, "gamma": 0.0}
    n = np.arange(d.size, dtype=float)
    start = max(1, d.size - max(3, d.size // 3))
    nn, dd = n[start:], d[start:]
    if nn.size < 3:
        return float(d[-1]), {"a": float(d[-1]), "b": 0.0, "gamma": 0.0}

    def model(x, a, b, g):
        return a + b * x ** (-g)

    p0 = (max(float(dd[-1]) * 0.5, 0.0), max(float(dd[0] - dd[-1]), 1e-12) * nn[0], 1.0)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            popt, _ = optimize.curve_fit(model, nn, dd, p0=p0,
                                         bounds=([0.0, 0.0, 1e-6], [np.inf, np.inf, 5.0]),
                                         maxfev=20000)
    except (RuntimeError, ValueError):
        return float(d[-1]), {"a": float(d[-1]), "b": 0.0, "gamma": 0.0, "fit": "failed"}
    a, b, g = (float(v) for v in popt)
    return min(a, float(d[-1])), {"a": a, "b": b, "gamma": g}


@dataclass(frozen=True)
class Certificate:
    is_outer: bool
    boundary_zeros: tuple
    all_zero_capacity: bool | None

    def to_dict(self) -> dict:
        return {"is_outer": self.is_outer,
                "boundary_zeros": [p.theta for p in self.boundary_zeros],
                "all_zero_capacity": self.all_zero_capacity}


def brown_shields_predict(f: StructuredFunction, mu: AtomicMeasure) -> tuple[Certificate, bool | None]:
    """Cyclic iff outer with a capacity-zero boundary zero set (None: undecided)."""
    zeros = boundary_zero_set(f)
    if mu.is_zero:
        cap = True
    else:
        cap = countable_set_capacity_zero(mu, [p.theta for p in zeros]).all_zero
    cert = Certificate(f.is_outer, zeros, cap)
    if not f.is_outer:
        return cert, False
    return cert, cap


@dataclass
class CyclicityReport:
    distances: list
    condition_numbers: list
    extrapolated_limit: float
    fit: dict
    certificate: Certificate
    predicted_cyclic: bool | None
    numerics_agree: bool
    failure: str | None = None
    thresholds: dict = field(default_factory=lambda: {"agreement_tol": AGREEMENT_TOL,
                                                      "agreement_floor": AGREEMENT_FLOOR})

    def to_dict(self) -> dict:
        return {"distances": self.distances, "condition_numbers": self.condition_numbers,
                "extrapolated_limit": self.extrapolated_limit, "fit": self.fit,
                "certificate": self.certificate.to_dict(),
                "predicted_cyclic": self.predicted_cyclic,
                "numerics_agree": self.numerics_agree, "failure": self.failure,
                "thresholds": self.thresholds}


def agrees(predicted: bool | None, limit: float) -> bool:
    if predicted is None or not math.isfinite(limit):
        return False
    return limit <= AGREEMENT_TOL if predicted else limit >= AGREEMENT_FLOOR


def cyclicity_report(f: StructuredFunction, mu: AtomicMeasure, n_max: int,
                     cfg: QuadratureConfig = DEFAULT_CONFIG) -> CyclicityReport:
    res = _distances(f, np.ones(1, complex), mu, n_max)
    limit, fit = extrapolate(res.distances)
    cert, pred = brown_shields_predict(f, mu)
    return CyclicityReport(res.distances, res.condition_numbers, limit, fit, cert, pred,
                           agrees(pred, limit), res.failure)


def relative_distances(g, generator, mu: AtomicMeasure, n_max: int) -> tuple[list, float]:
    """dist_mu(g, span{z^k generator}) / ||g||_mu for n = 0..n_max."""
    res = _distances(generator, g, mu, n_max)
    scale = res.target_norm if res.target_norm > 0 else 1.0
    return [d / scale for d in res.distances], res.target_norm


__all__ = ["CyclicityReport", "Certificate", "gram_system", "distance_sequence",
           "brown_shields_predict", "cyclicity_report", "extrapolate", "monomial_kernel",
           "AGREEMENT_TOL", "AGREEMENT_FLOOR"]
