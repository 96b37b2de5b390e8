"""
Brouwer's inequality, per k
m_k = e(G) + C(k+1,2) - S_k; the conjecture asserts m_k >= 0 for k = 1..n
"""
import math
from typing import Dict, Optional, Tuple

import structlog

from brouwerlab.config import get_settings
from brouwerlab.exceptions import ParameterError
from brouwerlab.graph_core import LaplacianMatrix, WeightedGraph, laplacian, total_weight
from brouwerlab.schemas.reports import BrouwerReport
from brouwerlab.spectral import Spectrum, eigen_tolerance, eigenvalues_sym

logger = structlog.get_logger()


def default_tolerance(spectrum: Spectrum, scale: Optional[float] = None) -> float:
    """tau_check = scale * n * (1 + max_k |S_k|)"""
    if scale is None:
        scale = get_settings().tolerances.check_scale
    largest = max((abs(s) for s in spectrum.prefix_sums), default=0.0)
    return scale * spectrum.n * (1.0 + largest)


def classify_violations(
    report: BrouwerReport, m: LaplacianMatrix, factor: Optional[float] = None
) -> Dict[int, str]:
    """Split violations into solver noise and confirmed failures

    A violation is confirmed when |m_k| exceeds factor * tau_eig.
    """
    if factor is None:
        factor = get_settings().tolerances.confirm_factor
    threshold = factor * eigen_tolerance(m)
    return {
        k: ("confirmed" if abs(report.margins[k - 1]) > threshold else "numerical")
        for k in report.violating_k
    }


def evaluate_graph(
    g: WeightedGraph, tol: Optional[float] = None
) -> Tuple[Spectrum, BrouwerReport]:
    """One eigen-solve, margins for every k"""
    m = laplacian(g)
    spectrum = eigenvalues_sym(m)
    e_g = total_weight(g)
    if tol is None:
        tol = default_tolerance(spectrum)
    if tol < 0:
        raise ParameterError(f"tolerance must be >= 0, got {tol}", field="tol")

    margins = [
        e_g + float(math.comb(k + 1, 2)) - spectrum.partial_sum(k)
        for k in range(1, g.n + 1)
    ]
    violating = [k for k, x in enumerate(margins, start=1) if x < -tol]
    equality = [k for k, x in enumerate(margins, start=1) if abs(x) <= tol]

    report = BrouwerReport(
        n=g.n,
        e_g=e_g,
        margins=margins,
        holds=not violating,
        violating_k=violating,
        equality_k=equality,
        tolerance=tol,
    )
    if violating:
        status = classify_violations(report, m)
        report = report.model_copy(update={"violation_status": status})
        logger.warning(
            "Brouwer inequality violated",
            n=g.n,
            violating_k=violating,
            violation_status=status,
            e_g=e_g,
        )
    return spectrum, report


def brouwer_margins(g: WeightedGraph, tol: Optional[float] = None) -> BrouwerReport:
    """Margins, violations and equality cases for k = 1..n"""
    return evaluate_graph(g, tol)[1]


def holds(g: WeightedGraph, tol: Optional[float] = None) -> bool:
    return brouwer_margins(g, tol).holds


def worst_margin(g: WeightedGraph, tol: Optional[float] = None) -> Tuple[int, float]:
    """(k, m_k) at the smallest margin; smallest k on ties"""
    return min_margin(brouwer_margins(g, tol))


def min_margin(report: BrouwerReport) -> Tuple[int, float]:
    best_k, best = 1, report.margins[0]
    for k, x in enumerate(report.margins[1:], start=2):
        if x < best:
            best_k, best = k, x
    return best_k, best
