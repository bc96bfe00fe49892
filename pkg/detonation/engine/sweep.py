"""
Parameter sweeps.

Every grid point has a fixed continuation predecessor: the next larger q
with the same E_A and D; on the largest q, one E_A step toward the value
closest to 1; on that E_A, one D step toward the value closest to 1. The
point (largest q, E_A ~ 1, D ~ 1) is the root and is solved directly. Points
are processed level by level in this tree, so a point only starts once its
predecessor is done and results do not depend on the number of workers.
"""
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..exceptions import ContinuationStalled, DetonationError, PersistenceError
from ..models import (
    ParameterGrid,
    ProfileSolution,
    ProfileStatus,
    RunRecord,
    StabilityVerdict,
    SuccessTable,
    SweepSettings,
    VerdictKind,
)
from . import archive
from .evans import certify_stability
from .profile import continue_family, solve_with_continuation, validate_profile
from .spectral import high_frequency_bound

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GridNode:
    """Position of a grid point in the continuation tree."""

    index: int
    q_rank: int
    e_index: int
    d_index: int
    predecessor: int = None
    depth: int = 0


def _closest_to_one(values) -> int:
    return int(np.argmin(np.abs(np.asarray(values, dtype=float) - 1.0)))


def continuation_tree(grid: ParameterGrid):
    """
    GridNode for every point of grid.points(), indexed in grid order.

    The returned list is sorted in traversal order: by D distance from the
    anchor, then E_A distance, then descending q.
    """
    q_sorted = sorted(range(len(grid.q_values)), key=lambda i: -grid.q_values[i])
    q_rank = {i: rank for rank, i in enumerate(q_sorted)}
    e_order = sorted(range(len(grid.E_A_values)), key=lambda i: grid.E_A_values[i])
    d_order = sorted(range(len(grid.D_values)), key=lambda i: grid.D_values[i])
    e_pos = {i: pos for pos, i in enumerate(e_order)}
    d_pos = {i: pos for pos, i in enumerate(d_order)}
    e_anchor = e_pos[_closest_to_one(grid.E_A_values)] if e_order else 0
    d_anchor = d_pos[_closest_to_one(grid.D_values)] if d_order else 0

    n_e, n_d = len(grid.E_A_values), len(grid.D_values)

    def flat(iq, ie, i_d):
        return (iq * n_e + ie) * n_d + i_d

    def toward(position, anchor):
        return position + (1 if position < anchor else -1)

    nodes = []
    for iq in range(len(grid.q_values)):
        for ie in range(n_e):
            for i_d in range(n_d):
                rank, e, d = q_rank[iq], e_pos[ie], d_pos[i_d]
                if rank > 0:
                    pred = flat(q_sorted[rank - 1], ie, i_d)
                elif e != e_anchor:
                    pred = flat(iq, e_order[toward(e, e_anchor)], i_d)
                elif d != d_anchor:
                    pred = flat(iq, ie, d_order[toward(d, d_anchor)])
                else:
                    pred = None
                nodes.append(GridNode(
                    index=flat(iq, ie, i_d),
                    q_rank=rank,
                    e_index=e,
                    d_index=d,
                    predecessor=pred,
                    depth=rank + abs(e - e_anchor) + abs(d - d_anchor),
                ))
    return sorted(nodes, key=lambda n: (abs(n.d_index - d_anchor), abs(n.e_index - e_anchor), n.q_rank, n.index))


def _failed_record(params, status, message, timings):
    return RunRecord(
        params=params,
        param_hash=archive.param_hash(params),
        profile_status=status,
        timings=timings,
        message=message,
    )


def process_point(params, guess: ProfileSolution, settings: SweepSettings):
    """
    Profile, validation, bound and Evans verdict for one grid point.

    Returns (record, profile); profile is None when the solve failed.
    """
    timings = {}
    started = time.perf_counter()
    try:
        if guess is None:
            profile = solve_with_continuation(params, settings.profile, settings.schedule)
        else:
            profile = continue_family(guess, params, settings.schedule, settings.profile)
    except ContinuationStalled as exc:
        timings["profile"] = time.perf_counter() - started
        logger.warning("Continuation stalled for q=%s E_A=%s D=%s", params.q, params.E_A, params.D)
        return _failed_record(params, ProfileStatus.CONTINUATION_STALLED, str(exc), timings), None
    except DetonationError as exc:
        timings["profile"] = time.perf_counter() - started
        logger.warning("No connection for q=%s E_A=%s D=%s: %s", params.q, params.E_A, params.D, exc)
        return _failed_record(params, ProfileStatus.NO_CONNECTION, str(exc), timings), None
    timings["profile"] = time.perf_counter() - started

    diagnostics = validate_profile(profile, raise_on_failure=False,
                                   boundary_tolerance=settings.profile.boundary_tolerance)
    started = time.perf_counter()
    bound = high_frequency_bound(profile.params, profile.k_found, profile)
    try:
        verdict = certify_stability(profile, bound, settings.evans)
    except Exception as exc:
        logger.exception("Unexpected failure in the Evans stage for %s", params.as_dict())
        verdict = StabilityVerdict(kind=VerdictKind.INCONCLUSIVE, reason=str(exc))
    timings["evans"] = time.perf_counter() - started

    record = RunRecord(
        params=params,
        param_hash=archive.param_hash(params),
        profile_status=ProfileStatus.CONVERGED,
        k_found=profile.k_found,
        M_minus=profile.M_minus,
        M_plus=profile.M_plus,
        boundary_residuals=tuple(float(r) for r in profile.boundary_residuals),
        bound=bound,
        verdict=verdict,
        validation=tuple(diagnostics.failures),
        timings=timings,
    )
    return record, profile


def _resumed(out_dir, points):
    """Records and profiles of points already completed under out_dir."""
    wanted = {archive.param_hash(p): i for i, p in enumerate(points)}
    records, profiles = {}, {}
    for record in archive.read_records(Path(out_dir) / archive.RECORDS_FILE):
        index = wanted.get(record.param_hash)
        if index is None:
            continue
        records[index] = record
        if record.converged:
            try:
                profiles[index] = archive.read_profile(archive.point_dir(out_dir, record.params) / "profile")
            except PersistenceError:
                logger.warning("Stored profile for %s is missing; successors restart from the anchor",
                               record.param_hash)
    return records, profiles


def _guess_for(node: GridNode, nodes_by_index, profiles):
    """Nearest converged ancestor of node."""
    pred = node.predecessor
    while pred is not None:
        if pred in profiles:
            return profiles[pred]
        pred = nodes_by_index[pred].predecessor
    return None


def run_grid(grid: ParameterGrid, settings: SweepSettings = None, out_dir=None, resume: bool = False):
    """
    Solve and certify every grid point; returns (records in grid order, SuccessTable).

    With out_dir, every finished point is appended to records.jsonl and its
    profile and contour files are written as soon as it completes; the final
    tables are rewritten in grid order at the end. resume skips points whose
    records already exist under out_dir.
    """
    settings = settings or SweepSettings()
    points = grid.points()
    if not points:
        return [], SuccessTable()

    nodes = continuation_tree(grid)
    nodes_by_index = {n.index: n for n in nodes}
    records, profiles = _resumed(out_dir, points) if (resume and out_dir) else ({}, {})
    if records:
        logger.info("Resuming sweep: %d of %d points already done", len(records), len(points))
    appender = None
    if out_dir:
        appender = archive.RecordAppender(Path(out_dir) / archive.RECORDS_FILE)
        if not resume:
            appender.reset()

    def finish(index, record, profile):
        records[index] = record
        if profile is not None:
            profiles[index] = profile
        if appender is None:
            return
        appender.append(record)
        if profile is not None:
            archive.write_profile(profile, archive.point_dir(out_dir, record.params) / "profile")
        if record.verdict is not None and record.verdict.samples:
            archive.write_contour(record.verdict.samples, archive.point_dir(out_dir, record.params) / "contour.csv")

    levels = {}
    for node in nodes:
        if node.index not in records:
            levels.setdefault(node.depth, []).append(node)

    executor = ProcessPoolExecutor(max_workers=settings.jobs) if settings.jobs > 1 else None
    try:
        for depth in sorted(levels):
            batch = levels[depth]
            jobs = [(node, points[node.index], _guess_for(node, nodes_by_index, profiles)) for node in batch]
            if executor is None:
                results = [process_point(params, guess, settings) for _, params, guess in jobs]
            else:
                futures = [executor.submit(process_point, params, guess, settings) for _, params, guess in jobs]
                results = [future.result() for future in futures]
            for (node, _, _), (record, profile) in zip(jobs, results):
                finish(node.index, record, profile)
            logger.info("Sweep level %d done: %d of %d points", depth, len(records), len(points))
    finally:
        if executor is not None:
            executor.shutdown()

    ordered = [records[i] for i in range(len(points))]
    table = SuccessTable.from_records(ordered)
    if out_dir:
        archive.persist(ordered, out_dir, table, contours=False)
    return ordered, table


def exit_code_for(records) -> int:
    """0 when every converged point has a certified verdict (Stable or Unstable), else 4."""
    for record in records:
        if record.converged and (record.verdict is None or record.verdict.kind == VerdictKind.INCONCLUSIVE):
            return 4
    return 0


__all__ = [
    "GridNode",
    "continuation_tree",
    "process_point",
    "run_grid",
    "exit_code_for",
]
