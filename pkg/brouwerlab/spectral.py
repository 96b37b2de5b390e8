"""
Dense symmetric eigensolver
Householder tridiagonalization followed by implicit-shift symmetric QR
(Wilkinson shift). Eigenvalues only.
"""
import math
import sys
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import structlog

from brouwerlab.config import get_settings
from brouwerlab.exceptions import EigenSolverError, TraceMismatchError
from brouwerlab.graph_core import LaplacianMatrix

logger = structlog.get_logger()

_EPS = sys.float_info.epsilon


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues sorted descending with prefix sums

    ``prefix_sums[k - 1]`` is S_k, the sum of the k largest eigenvalues.
    """

    eigenvalues: Tuple[float, ...]
    prefix_sums: Tuple[float, ...]

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    def partial_sum(self, k: int) -> float:
        """S_k for 1 <= k <= n"""
        return self.prefix_sums[k - 1]

    @property
    def lambda_max(self) -> float:
        return self.eigenvalues[0]


def tridiagonalize(m: LaplacianMatrix) -> Tuple[np.ndarray, np.ndarray]:
    """Householder reduction to (diag, offdiag); the input is left untouched"""
    a = np.array(m.entries, dtype=float)
    n = a.shape[0]
    for k in range(n - 2):
        x = a[k + 1:, k]
        tail_sq = float(x[1:] @ x[1:])
        if tail_sq == 0.0:
            # column already tridiagonal
            continue
        alpha = math.sqrt(float(x[0]) ** 2 + tail_sq)
        if x[0] < 0.0:
            alpha = -alpha
        u = x.copy()
        u[0] += alpha
        h = float(u @ u) / 2.0

        block = a[k + 1:, k + 1:]
        p = (block @ u) / h
        q = p - (float(u @ p) / (2.0 * h)) * u
        block -= np.outer(q, u) + np.outer(u, q)

        a[k + 1, k] = a[k, k + 1] = -alpha
        a[k + 2:, k] = 0.0
        a[k, k + 2:] = 0.0
    return np.diag(a).copy(), np.diag(a, 1).copy()


def _implicit_qr_step(d: List[float], e: List[float], lo: int, hi: int) -> None:
    """One Wilkinson-shifted QR sweep on the unreduced block d[lo..hi]"""
    t = (d[hi - 1] - d[hi]) / 2.0
    b = e[hi - 1]
    shift = d[hi] - b * b / (t + math.copysign(math.hypot(t, b), t))

    x = d[lo] - shift
    z = e[lo]
    for k in range(lo, hi):
        r = math.hypot(x, z)
        if r == 0.0:
            c, s = 1.0, 0.0
        else:
            c, s = x / r, z / r
        if k > lo:
            e[k - 1] = r

        a_kk, a_kl, a_ll = d[k], e[k], d[k + 1]
        cs2 = 2.0 * c * s * a_kl
        d[k] = c * c * a_kk + cs2 + s * s * a_ll
        d[k + 1] = s * s * a_kk - cs2 + c * c * a_ll
        e[k] = c * s * (a_ll - a_kk) + (c * c - s * s) * a_kl

        if k < hi - 1:
            # chase the bulge one row down
            x = e[k]
            z = s * e[k + 1]
            e[k + 1] = c * e[k + 1]


def tridiagonal_eigenvalues(
    diag: np.ndarray, offdiag: np.ndarray, max_sweeps: Optional[int] = None
) -> List[float]:
    """Eigenvalues of a symmetric tridiagonal matrix, unsorted"""
    if max_sweeps is None:
        max_sweeps = get_settings().spectral.max_sweeps
    d = [float(x) for x in diag]
    e = [float(x) for x in offdiag]
    n = len(d)

    hi = n - 1
    sweeps = 0
    while hi > 0:
        if abs(e[hi - 1]) <= _EPS * (abs(d[hi - 1]) + abs(d[hi])):
            e[hi - 1] = 0.0
            hi -= 1
            sweeps = 0
            continue

        lo = hi - 1
        while lo > 0 and abs(e[lo - 1]) > _EPS * (abs(d[lo - 1]) + abs(d[lo])):
            lo -= 1
        if lo > 0:
            e[lo - 1] = 0.0

        if sweeps >= max_sweeps:
            logger.error("QR iteration did not converge", n=n, lo=lo, hi=hi, sweeps=sweeps)
            raise EigenSolverError(n, (lo, hi), sweeps)
        _implicit_qr_step(d, e, lo, hi)
        sweeps += 1
    return d


def eigenvalues_sym(m: LaplacianMatrix, max_sweeps: Optional[int] = None) -> Spectrum:
    """All eigenvalues of a symmetric matrix, descending, with prefix sums"""
    if m.n == 0:
        return Spectrum(eigenvalues=(), prefix_sums=())
    diag, offdiag = tridiagonalize(m)
    values = sorted(tridiagonal_eigenvalues(diag, offdiag, max_sweeps), reverse=True)
    check_trace(m, values)
    prefix = np.cumsum(values)
    return Spectrum(
        eigenvalues=tuple(values),
        prefix_sums=tuple(float(s) for s in prefix),
    )


def check_trace(
    m: LaplacianMatrix, values: Sequence[float], tol: Optional[float] = None
) -> None:
    """Raise when sum(values) is farther than tau_trace from trace(m)"""
    if tol is None:
        tol = trace_tolerance(m)
    trace = m.trace()
    total = math.fsum(values)
    if abs(total - trace) > tol:
        logger.error(
            "Eigenvalue sum disagrees with trace",
            n=m.n,
            trace=trace,
            total=total,
            tolerance=tol,
        )
        raise TraceMismatchError(m.n, trace, total, tol)


def lambda_max(m: LaplacianMatrix) -> float:
    """Largest eigenvalue"""
    return eigenvalues_sym(m).lambda_max


def gershgorin_interval(m: LaplacianMatrix) -> Tuple[float, float]:
    """Hull of the Gershgorin discs: (min_i d_i - r_i, max_i d_i + r_i)"""
    a = m.entries
    diag = np.diag(a)
    radii = np.sum(np.abs(a), axis=1) - np.abs(diag)
    return float(np.min(diag - radii)), float(np.max(diag + radii))


def gershgorin_contains(m: LaplacianMatrix, value: float, tol: float) -> bool:
    """True when value lies in some disc [d_i - r_i - tol, d_i + r_i + tol]"""
    a = m.entries
    diag = np.diag(a)
    radii = np.sum(np.abs(a), axis=1) - np.abs(diag)
    return bool(np.any(np.abs(value - diag) <= radii + tol))


def eigen_tolerance(m: LaplacianMatrix, scale: Optional[float] = None) -> float:
    """tau_eig = scale * n * (1 + max|entry|)"""
    if scale is None:
        scale = get_settings().tolerances.eig_scale
    return scale * m.n * (1.0 + m.max_abs_entry())


def trace_tolerance(m: LaplacianMatrix, scale: Optional[float] = None) -> float:
    """tau_trace = scale * n * (1 + max|entry|)"""
    if scale is None:
        scale = get_settings().tolerances.trace_scale
    return scale * m.n * (1.0 + m.max_abs_entry())
