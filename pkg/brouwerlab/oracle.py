"""
Independent eigenvalue oracle for small matrices
det(xI - M) by Leibniz expansion, roots polished by Newton iteration.
Shares no code with the Householder/QR path.
"""
import math
from itertools import permutations
from typing import List, Optional, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from brouwerlab.exceptions import ParameterError
from brouwerlab.graph_core import LaplacianMatrix, WeightedGraph, laplacian, total_weight

MAX_ORACLE_N = 6

# roots this close (relative) are tried as one multiple root
_CLUSTER_RADIUS = 1e-2
# a multiple root is accepted when |p(x)| is this small against sum |c_i x^i|
_ROOT_RESIDUAL = 1e-12


def _parity(perm: Tuple[int, ...]) -> int:
    inversions = sum(
        1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j]
    )
    return -1 if inversions % 2 else 1


def characteristic_polynomial(m: LaplacianMatrix) -> np.ndarray:
    """Coefficients of det(xI - M), lowest degree first"""
    n = m.n
    if n > MAX_ORACLE_N:
        raise ParameterError(f"oracle limited to n <= {MAX_ORACLE_N}, got {n}", field="n")
    a = m.entries
    coeffs = np.zeros(n + 1)
    for perm in permutations(range(n)):
        term = np.array([float(_parity(perm))])
        for i, j in enumerate(perm):
            factor = np.array([-a[i, j], 1.0]) if i == j else np.array([-a[i, j]])
            term = P.polymul(term, factor)
        coeffs[: len(term)] += term
    return coeffs


def _polish(coeffs: np.ndarray, start: float, multiplicity: int) -> float:
    # a root of multiplicity m is a simple root of the (m-1)th derivative
    target = P.polyder(coeffs, multiplicity - 1) if multiplicity > 1 else coeffs
    slope = P.polyder(target)
    x = start
    for _ in range(20):
        fp = P.polyval(x, slope)
        if fp == 0.0:
            break
        step = P.polyval(x, target) / fp
        x -= step
        if abs(step) <= 1e-15 * (1.0 + abs(x)):
            break
    return float(x)


def _is_multiple_root(coeffs: np.ndarray, x: float) -> bool:
    scale = math.fsum(abs(c) * abs(x) ** i for i, c in enumerate(coeffs))
    return abs(P.polyval(x, coeffs)) <= _ROOT_RESIDUAL * scale


def oracle_eigenvalues(m: LaplacianMatrix) -> Tuple[float, ...]:
    """Eigenvalues from characteristic-polynomial roots, descending"""
    if m.n == 1:
        return (float(m.entries[0, 0]),)
    coeffs = characteristic_polynomial(m)
    roots = sorted(P.polyroots(coeffs).tolist(), key=lambda z: complex(z).real)

    clusters: List[List[complex]] = []
    for z in roots:
        z = complex(z)
        if clusters and abs(z - clusters[-1][0]) <= _CLUSTER_RADIUS * (1.0 + abs(z.real)):
            clusters[-1].append(z)
        else:
            clusters.append([z])

    values: List[float] = []
    for cluster in clusters:
        size = len(cluster)
        if size > 1:
            center = math.fsum(z.real for z in cluster) / size
            x = _polish(coeffs, center, size)
            if _is_multiple_root(coeffs, x):
                values.extend([x] * size)
                continue
        # distinct roots that happen to lie close together
        values.extend(_polish(coeffs, z.real, 1) for z in cluster)
    return tuple(sorted(values, reverse=True))


def oracle_margins(g: WeightedGraph) -> List[float]:
    """Brouwer margins computed from oracle eigenvalues"""
    values = oracle_eigenvalues(laplacian(g))
    e_g = total_weight(g)
    margins = []
    running = 0.0
    for k, value in enumerate(values, start=1):
        running += value
        margins.append(e_g + float(math.comb(k + 1, 2)) - running)
    return margins


def oracle_holds(g: WeightedGraph, tol: Optional[float] = None) -> bool:
    margins = oracle_margins(g)
    if tol is None:
        tol = 1e-7 * g.n * (1.0 + max(abs(x) for x in margins))
    return all(x >= -tol for x in margins)
