"""Polynomial roots with multiplicity recovery."""
from __future__ import annotations

import numpy as np


def cluster_roots(coeffs, rel_tol: float = 1e-4) -> list[tuple[complex, int]]:
    """Roots of the polynomial with ascending ``coeffs`` as (root, multiplicity).

    Multiple roots split numerically into clusters of radius ~eps^{1/m};
    clusters within ``rel_tol`` are merged and replaced by their centroid,
    which is accurate to roughly machine precision, then polished by Newton
    steps on the (m-1)-th derivative.
    """
    c = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
    if c.size <= 1:
        return []
    raw = np.roots(c[::-1])
    used = np.zeros(raw.size, bool)
    out = []
    order = np.argsort(np.abs(raw))
    for i in order:
        if used[i]:
            continue
        scale = max(1.0, abs(raw[i]))
        members = [j for j in order if not used[j] and abs(raw[j] - raw[i]) <= rel_tol * scale]
        for j in members:
            used[j] = True
        out.append((complex(np.mean(raw[members])), len(members)))
    poly = np.polynomial.Polynomial(c)
    polished = []
    for r, m in out:
        d = poly.deriv(m - 1) if m > 1 else poly
        dd = d.deriv()
        for _ in range(3):
            den = dd(r)
            if den == 0:
                break
            step = d(r) / den
            if not np.isfinite(step) or abs(step) > 1e-6 * max(1.0, abs(r)):
                break
            r = r - step
        polished.append((complex(r), m))
    return polished
