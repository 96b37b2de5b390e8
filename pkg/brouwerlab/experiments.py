"""
Experiment runners
Seeded Monte Carlo trials, exhaustive small-n enumeration, lambda_max
concentration, edge-weight tails and the proof-chain events. Work units are
independent; results are collected in index order so output never depends
on the worker count.
"""
import csv
import math
import multiprocessing
import os
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, TypeVar, Union

import numpy as np
import structlog
from pydantic import BaseModel, ValidationError

from brouwerlab.bounds import (
    bonferroni_lower_bound,
    hoeffding_range_bound,
    hoeffding_tail_bound,
    lemma3_params,
    theorem_lower_bound,
)
from brouwerlab.config import LabSettings, get_settings, set_settings
from brouwerlab.conjecture import evaluate_graph, min_margin
from brouwerlab.ensembles import (
    generator_metadata,
    mix_seed,
    regime_indicators_for,
    sample_graph,
    sample_weights,
)
from brouwerlab.exceptions import (
    BoundNotValidError,
    CheckpointError,
    EigenSolverError,
    EnumerationCapError,
    ParameterError,
    TraceMismatchError,
)
from brouwerlab.graph_core import edges_from_mask
from brouwerlab.log_config import configure_logging
from brouwerlab.schemas.ensembles import EnsembleSpec, FamilySpec, SeedSpec
from brouwerlab.schemas.experiments import (
    ConcentrationRow,
    ConcentrationTable,
    EnumerationCheckpoint,
    EnumerationResult,
    ExperimentSummary,
    ProofChainSummary,
    SeedInfo,
    TailStudyResult,
    TrialRecord,
)

logger = structlog.get_logger()

PathLike = Union[str, os.PathLike]
T = TypeVar("T")
R = TypeVar("R")

CSV_COLUMNS = (
    "n",
    "q25_ratio1",
    "median_ratio1",
    "q75_ratio1",
    "q25_ratio2",
    "median_ratio2",
    "q75_ratio2",
)


# Worker plumbing ----------------------------------------------------------


def _init_worker(settings_data: Dict[str, Any]) -> None:
    """Give each worker process the parent's resolved settings"""
    settings = LabSettings(**settings_data)
    set_settings(settings)
    configure_logging(settings.logging)


def _ordered_map(
    fn: Callable[[T], R], work: Sequence[T], workers: int
) -> Iterable[R]:
    """Map over work units, results in input order"""
    if workers <= 1 or len(work) <= 1:
        for item in work:
            yield fn(item)
        return
    settings = get_settings()
    start_method = settings.experiments.start_method
    context = multiprocessing.get_context(start_method) if start_method else None
    with ProcessPoolExecutor(
        max_workers=workers,
        mp_context=context,
        initializer=_init_worker,
        initargs=(settings.model_dump(),),
    ) as executor:
        yield from executor.map(fn, work)


def _resolve_workers(workers: Optional[int]) -> int:
    if workers is None:
        workers = get_settings().experiments.workers
    if workers < 1:
        raise ParameterError(f"workers must be >= 1, got {workers}", field="workers")
    return workers


def _chunks(start: int, stop: int, size: int) -> List[Tuple[int, int]]:
    return [(lo, min(lo + size, stop)) for lo in range(start, stop, size)]


def _elapsed_ms(start_time: float) -> float:
    return round((time.time() - start_time) * 1000, 2)


def run_metadata(master_seed: Optional[int] = None) -> Dict[str, Any]:
    """Generator description and resolved config for a summary

    The worker count is left out so summaries match across worker counts.
    """
    config = get_settings().model_dump(
        exclude={"logging": True, "experiments": {"workers", "start_method"}}
    )
    metadata: Dict[str, Any] = {"generator": generator_metadata(), "config": config}
    if master_seed is not None:
        metadata["master_seed"] = master_seed
    return metadata


# Trials -------------------------------------------------------------------


TrialOutcome = Tuple[int, Optional[TrialRecord], Optional[str]]


def _evaluate_trial(spec: EnsembleSpec, master_seed: int, t: int, tol: Optional[float]) -> TrialRecord:
    g = sample_graph(spec, SeedSpec(master_seed=master_seed, trial_index=t))
    spectrum, report = evaluate_graph(g, tol)
    k, margin = min_margin(report)
    return TrialRecord(
        trial_index=t,
        spec=spec,
        seed=SeedInfo(master=master_seed, trial=t, stream=mix_seed(master_seed, t)),
        e_g=report.e_g,
        lambda_max=spectrum.lambda_max,
        min_margin=margin,
        min_margin_k=k,
        holds=report.holds,
    )


def _trial_batch(args: Tuple[EnsembleSpec, int, int, int, Optional[float]]) -> List[TrialOutcome]:
    """Trials lo..hi-1; module level so worker processes can unpickle it"""
    spec, master_seed, lo, hi, tol = args
    outcomes: List[TrialOutcome] = []
    for t in range(lo, hi):
        try:
            outcomes.append((t, _evaluate_trial(spec, master_seed, t, tol), None))
        except (EigenSolverError, TraceMismatchError) as e:
            outcomes.append((t, None, e.message))
    return outcomes


def _collect_trials(
    spec: EnsembleSpec,
    trials: int,
    master_seed: int,
    workers: int,
    tol: Optional[float],
) -> Tuple[List[TrialRecord], List[int]]:
    """Records in trial order plus the indices of failed trials"""
    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials}", field="trials")
    if not 0 <= master_seed < 2**64:
        raise ParameterError("master_seed must lie in [0, 2^64)", field="master_seed")
    chunk_size = get_settings().experiments.chunk_size
    work = [(spec, master_seed, lo, hi, tol) for lo, hi in _chunks(0, trials, chunk_size)]

    records: List[TrialRecord] = []
    failed: List[int] = []
    for batch in _ordered_map(_trial_batch, work, workers):
        for t, record, error in batch:
            if record is None:
                failed.append(t)
                logger.warning("Trial aborted by eigensolver", trial_index=t, n=spec.n, error=error)
            else:
                records.append(record)
    return records, failed


def _quartiles(values: Sequence[float]) -> Optional[List[float]]:
    if not values:
        return None
    return [float(q) for q in np.quantile(np.asarray(values, dtype=float), [0.25, 0.5, 0.75])]


def _ratios(spec: EnsembleSpec, records: Sequence[TrialRecord]) -> Tuple[List[float], List[float]]:
    """lambda_max/(n mu) and lambda_max/(sigma sqrt(n log n)), where defined"""
    n = spec.n
    ratio1: List[float] = []
    ratio2: List[float] = []
    if spec.mu != 0:
        ratio1 = [r.lambda_max / (n * spec.mu) for r in records]
    if spec.sigma > 0 and n >= 2:
        scale = spec.sigma * math.sqrt(n * math.log(n))
        ratio2 = [r.lambda_max / scale for r in records]
    return ratio1, ratio2


def _analytic_bound(spec: EnsembleSpec, gamma: Optional[float]) -> Tuple[Optional[float], Optional[float]]:
    """(lower bound, gamma) when the mean-regime hypothesis applies at this n"""
    if gamma is None:
        if not 0.0 < spec.mu < 1.0:
            return None, None
        gamma = 1.0 - spec.mu
    if spec.n < 2:
        return None, gamma
    try:
        return theorem_lower_bound(spec.n, spec.mu, gamma, spec.bound), gamma
    except BoundNotValidError:
        return None, gamma


def summarize_trials(
    spec: EnsembleSpec,
    records: Sequence[TrialRecord],
    failed: Sequence[int],
    requested: int,
    gamma: Optional[float] = None,
    metadata: Optional[Dict[str, Any]] = None,
) -> ExperimentSummary:
    """Aggregate exactly the emitted records"""
    violations = sum(1 for r in records if not r.holds)
    completed = len(records)
    ratio1, ratio2 = _ratios(spec, records)
    bound, used_gamma = _analytic_bound(spec, gamma)
    return ExperimentSummary(
        requested=requested,
        trials=completed,
        failed=len(failed),
        failed_trials=list(failed),
        violations=violations,
        empirical_prob=(completed - violations) / completed if completed else None,
        analytic_lower_bound=bound,
        analytic_gamma=used_gamma,
        ratio1_quartiles=_quartiles(ratio1),
        ratio2_quartiles=_quartiles(ratio2),
        metadata=metadata or {},
    )


def run_trials(
    spec: EnsembleSpec,
    trials: int,
    master_seed: int = 0,
    workers: Optional[int] = None,
    tol: Optional[float] = None,
    gamma: Optional[float] = None,
) -> Tuple[ExperimentSummary, List[TrialRecord]]:
    """Sample `trials` graphs; trial t draws from substream mix(master_seed, t)"""
    workers = _resolve_workers(workers)
    start_time = time.time()
    logger.info("Trials started", family=spec.family, n=spec.n, trials=trials, master_seed=master_seed, workers=workers)

    records, failed = _collect_trials(spec, trials, master_seed, workers, tol)
    metadata = run_metadata(master_seed)
    metadata["spec"] = spec.model_dump()
    summary = summarize_trials(spec, records, failed, trials, gamma, metadata)

    logger.info(
        "Trials completed",
        n=spec.n,
        trials=summary.trials,
        violations=summary.violations,
        failed=summary.failed,
        elapsed_ms=_elapsed_ms(start_time),
    )
    return summary, records


# Enumeration --------------------------------------------------------------


class _BlockStats(BaseModel):
    violations: int = 0
    violating_masks: List[int] = []
    min_margin: Optional[float] = None
    witness_mask: Optional[int] = None
    witness_k: Optional[int] = None


def _enumerate_block(args: Tuple[int, int, int]) -> _BlockStats:
    """Check every edge bitmask in [lo, hi)"""
    n, lo, hi = args
    stats = _BlockStats()
    for mask in range(lo, hi):
        _, report = evaluate_graph(edges_from_mask(n, mask))
        k, margin = min_margin(report)
        if not report.holds:
            stats.violations += 1
            stats.violating_masks.append(mask)
        if stats.min_margin is None or margin < stats.min_margin:
            stats.min_margin, stats.witness_mask, stats.witness_k = margin, mask, k
    return stats


def _merge(total: _BlockStats, block: _BlockStats) -> None:
    total.violations += block.violations
    total.violating_masks.extend(block.violating_masks)
    if block.min_margin is not None and (total.min_margin is None or block.min_margin < total.min_margin):
        total.min_margin = block.min_margin
        total.witness_mask = block.witness_mask
        total.witness_k = block.witness_k


def load_checkpoint(path: PathLike, n: int) -> Tuple[int, _BlockStats]:
    """(next mask, accumulated stats) from a checkpoint file"""
    try:
        with open(path, "r", encoding="utf-8") as f:
            checkpoint = EnumerationCheckpoint.model_validate_json(f.read())
        last_mask = int(checkpoint.last_mask)
        stats = _BlockStats(
            violations=checkpoint.violations,
            violating_masks=[int(m) for m in checkpoint.violating_masks],
            min_margin=checkpoint.min_margin,
            witness_mask=int(checkpoint.witness_mask) if checkpoint.witness_mask is not None else None,
            witness_k=checkpoint.witness_k,
        )
    except (OSError, ValidationError, ValueError) as e:
        raise CheckpointError(f"unreadable checkpoint: {e}", path=str(path))
    if checkpoint.n != n:
        raise CheckpointError(f"checkpoint is for n={checkpoint.n}, not n={n}", path=str(path))
    return last_mask + 1, stats


def save_checkpoint(path: PathLike, n: int, last_mask: int, stats: _BlockStats) -> None:
    """Write the checkpoint atomically through a temporary file"""
    checkpoint = EnumerationCheckpoint(
        last_mask=str(last_mask),
        n=n,
        violations=stats.violations,
        min_margin=stats.min_margin,
        witness_mask=str(stats.witness_mask) if stats.witness_mask is not None else None,
        witness_k=stats.witness_k,
        violating_masks=[str(m) for m in stats.violating_masks],
    )
    tmp = Path(str(path) + ".tmp")
    try:
        tmp.write_text(checkpoint.model_dump_json(), encoding="utf-8")
        os.replace(tmp, path)
    except OSError as e:
        raise CheckpointError(f"cannot write checkpoint: {e}", path=str(path))


def enumerate_graphs(
    n: int,
    cap: Optional[int] = None,
    checkpoint_path: Optional[PathLike] = None,
    resume: bool = False,
    max_masks: Optional[int] = None,
    workers: Optional[int] = None,
) -> EnumerationResult:
    """Check every labeled unweighted graph on n vertices

    Bit b of the mask selects the b-th pair in lexicographic order. With
    ``max_masks`` the run stops early and reports complete=False; a later
    ``resume`` from the checkpoint finishes it.
    """
    settings = get_settings().enumeration
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}", field="n")
    cap = settings.default_cap if cap is None else cap
    cap = min(cap, settings.hard_cap)
    if n > cap:
        raise EnumerationCapError(n, cap)
    workers = _resolve_workers(workers)

    total = 1 << math.comb(n, 2)
    start = 0
    stats = _BlockStats()
    if resume and checkpoint_path is not None and Path(checkpoint_path).exists():
        start, stats = load_checkpoint(checkpoint_path, n)
        logger.info("Enumeration resumed", n=n, next_mask=start)

    stop = total if max_masks is None else min(total, start + max_masks)
    start_time = time.time()
    logger.info("Enumeration started", n=n, total=total, start=start, stop=stop, workers=workers)

    blocks = _chunks(start, stop, settings.checkpoint_every)
    work = [(n, lo, hi) for lo, hi in blocks]
    for (lo, hi), block in zip(blocks, _ordered_map(_enumerate_block, work, workers)):
        _merge(stats, block)
        if checkpoint_path is not None:
            save_checkpoint(checkpoint_path, n, hi - 1, stats)

    logger.info(
        "Enumeration completed",
        n=n,
        checked=stop,
        violations=stats.violations,
        elapsed_ms=_elapsed_ms(start_time),
    )
    return EnumerationResult(
        n=n,
        total=total,
        checked=stop,
        violations=stats.violations,
        min_margin_overall=stats.min_margin,
        witness_mask=stats.witness_mask,
        witness_k=stats.witness_k,
        violating_masks=stats.violating_masks,
        complete=stop == total,
    )


# Concentration ------------------------------------------------------------


def concentration_study(
    family: FamilySpec,
    n_grid: Sequence[int],
    trials_per_n: int,
    master_seed: int = 0,
    workers: Optional[int] = None,
) -> Tuple[ConcentrationTable, List[TrialRecord]]:
    """Quartiles of both lambda_max normalizations at each n

    Size n draws its trials from master seed mix(master_seed, n).
    """
    if not n_grid:
        raise ParameterError("n_grid must not be empty", field="n_grid")
    for n in n_grid:
        if n < 2:
            raise ParameterError(f"every n must be >= 2, got {n}", field="n_grid")
    workers = _resolve_workers(workers)
    start_time = time.time()

    rows: List[ConcentrationRow] = []
    all_records: List[TrialRecord] = []
    for n in n_grid:
        spec = family.resolve(n)
        records, failed = _collect_trials(spec, trials_per_n, mix_seed(master_seed, n), workers, None)
        ratio1, ratio2 = _ratios(spec, records)
        q1 = _quartiles(ratio1) or [None, None, None]
        q2 = _quartiles(ratio2) or [None, None, None]
        r1 = r2 = None
        if spec.mu != 0:
            r1, r2 = regime_indicators_for(spec.mu, spec.sigma, n)
        rows.append(
            ConcentrationRow(
                n=n,
                trials=len(records),
                mu=spec.mu,
                sigma=spec.sigma,
                r1=r1,
                r2=r2,
                q25_ratio1=q1[0],
                median_ratio1=q1[1],
                q75_ratio1=q1[2],
                q25_ratio2=q2[0],
                median_ratio2=q2[1],
                q75_ratio2=q2[2],
            )
        )
        all_records.extend(records)
        logger.info("Concentration row done", n=n, trials=len(records), failed=len(failed), median_ratio1=q1[1])

    metadata = run_metadata(master_seed)
    metadata["trials_per_n"] = trials_per_n
    logger.info("Concentration study completed", sizes=len(rows), elapsed_ms=_elapsed_ms(start_time))
    return ConcentrationTable(family=family.model_dump(), rows=rows, metadata=metadata), all_records


# Tails and the proof chain ------------------------------------------------


def edge_weight_tail_study(
    spec: EnsembleSpec, delta: float, trials: int, master_seed: int = 0
) -> TailStudyResult:
    """Empirical P[e(G) <= (1-delta) mu C(n,2)] next to the Hoeffding bound"""
    if not 0.0 < delta < 1.0:
        raise ParameterError(f"delta must lie in (0, 1), got {delta}", field="delta")
    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials}", field="trials")
    n = spec.n
    bound = hoeffding_tail_bound(n, spec.mu, delta, spec.bound)
    lower, upper = spec.support
    range_bound = hoeffding_range_bound(n, spec.mu, delta, lower, upper)

    threshold = (1.0 - delta) * spec.mu * math.comb(n, 2)
    hits = 0
    for t in range(trials):
        weights = sample_weights(spec, SeedSpec(master_seed=master_seed, trial_index=t))
        if math.fsum(weights) <= threshold:
            hits += 1
    empirical = hits / trials
    standard_error = math.sqrt(bound * (1.0 - bound) / trials)

    logger.info("Tail study completed", n=n, delta=delta, trials=trials, empirical_tail=empirical, analytic_bound=bound)
    return TailStudyResult(
        n=n,
        delta=delta,
        trials=trials,
        threshold=threshold,
        empirical_tail=empirical,
        analytic_bound=bound,
        range_bound=range_bound,
        standard_error=standard_error,
        within_slack=empirical <= bound + 3.0 * standard_error,
        metadata={**run_metadata(master_seed), "spec": spec.model_dump()},
    )


def proof_chain_study(
    spec: EnsembleSpec,
    gamma: float,
    trials: int,
    master_seed: int = 0,
    workers: Optional[int] = None,
) -> ProofChainSummary:
    """Frequencies of the spectral event A, the weight event B, and the conjecture

    For n >= n0, A and B together force every margin to be positive, so any
    trial in both events that still fails the check is reported.
    """
    params = lemma3_params(gamma, mu_upper=spec.mu)
    workers = _resolve_workers(workers)
    records, failed = _collect_trials(spec, trials, master_seed, workers, None)
    if not records:
        raise ParameterError("every trial failed in the eigensolver", field="trials")

    n = spec.n
    spectral_cut = (1.0 + params.epsilon) * spec.mu * n
    weight_cut = (1.0 - params.delta) * spec.mu * math.comb(n, 2)
    in_a = [r.lambda_max <= spectral_cut for r in records]
    in_b = [r.e_g >= weight_cut for r in records]
    both = [a and b for a, b in zip(in_a, in_b)]
    chain_valid = n >= params.n0
    failures = sum(1 for ab, r in zip(both, records) if ab and not r.holds)
    if chain_valid and failures:
        logger.error("Conjecture failed inside both proof events", n=n, failures=failures)

    count = len(records)
    p_a = sum(in_a) / count
    p_b = sum(in_b) / count
    return ProofChainSummary(
        n=n,
        gamma=gamma,
        epsilon=params.epsilon,
        delta=params.delta,
        n0=params.n0,
        chain_valid=chain_valid,
        trials=count,
        p_spectral=p_a,
        p_weight=p_b,
        p_both=sum(both) / count,
        p_holds=sum(1 for r in records if r.holds) / count,
        bonferroni_bound=bonferroni_lower_bound(p_a, p_b),
        implication_failures=failures,
        metadata={**run_metadata(master_seed), "spec": spec.model_dump(), "failed": len(failed)},
    )


# Persistence --------------------------------------------------------------


def write_jsonl(records: Iterable[TrialRecord], path: PathLike) -> int:
    """One record per line, aliased field names; returns the line count"""
    count = 0
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for record in records:
            f.write(record.model_dump_json(by_alias=True))
            f.write("\n")
            count += 1
    return count


def read_jsonl(path: PathLike) -> List[TrialRecord]:
    with open(path, "r", encoding="utf-8") as f:
        return [TrialRecord.model_validate_json(line) for line in f if line.strip()]


def write_summary(summary: BaseModel, path: PathLike) -> None:
    """Summary as one JSON object"""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(summary.model_dump_json(by_alias=True, indent=2))
        f.write("\n")


def write_concentration_csv(table: ConcentrationTable, path: PathLike) -> None:
    """Fixed column set; undefined ratios are left empty"""
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in table.rows:
            data = row.model_dump()
            writer.writerow(["" if data[c] is None else repr(data[c]) for c in CSV_COLUMNS])

