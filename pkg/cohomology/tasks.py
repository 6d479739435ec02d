# cohomology/tasks.py - Celery tasks for oracle runs and batch solves
from functools import lru_cache
import logging

from celery import shared_task

from .errors import TorusCohomologyError
from .fixtures import oracle_case
from .lattice_core import AffineTorusMap
from .serializers import ProblemConfigSerializer, SolveResultSerializer, series_to_dict
from .solver import TorusSystem, analyze, oracle_round_trip, solve

logger = logging.getLogger(__name__)


@lru_cache(maxsize=32)
def _system_for(torus_map: AffineTorusMap, band=None) -> TorusSystem:
    return analyze(torus_map, band)


@shared_task
def run_oracle_case(p, box_radius, seed, terms=6, tol=None):
    """
    One round trip: random h, g = delta(h), f = solve(g), compare f with h.

    Args:
        p: torus dimension
        box_radius: h is supported in [-box_radius, box_radius]^p
        seed: seeds both the map translation and h
        terms: number of frequencies in h
        tol: deviation / residual tolerance
    """
    try:
        torus_map, h = oracle_case(p, box_radius, seed, terms)
        outcome = oracle_round_trip(_system_for(torus_map), h, tol)
        if not outcome.passed:
            logger.warning(
                f"Oracle seed {seed} (p={p}) failed: deviation {outcome.deviation:.3e}, "
                f"residual {outcome.residual:.3e}, continuity {outcome.continuity_holds}"
            )
        return {
            'status': 'pass' if outcome.passed else 'fail',
            'seed': seed,
            'p': p,
            'deviation': outcome.deviation,
            'residual': outcome.residual,
            'continuity': outcome.continuity_holds,
            'terms': outcome.term_count,
        }
    except TorusCohomologyError as exc:
        logger.error(f"Oracle seed {seed} (p={p}) raised {exc.code}: {exc.message}")
        return {
            'status': 'error',
            'seed': seed,
            'p': p,
            'error': exc.as_dict()['error'],
        }


@shared_task
def solve_problem_task(config, base_dir="."):
    """Solve a serialized ProblemConfig; returns the solution series and the report payload."""
    serializer = ProblemConfigSerializer(data=config, context={'base_dir': base_dir})
    if not serializer.is_valid():
        return {'status': 'error', 'errors': serializer.errors}
    problem = serializer.save()
    try:
        result = solve(
            problem.g,
            problem.torus_map,
            nm=_system_for(problem.torus_map, problem.hyperbolicity_band).norm,
            tol=problem.tol,
            input_tail=problem.input_tail,
        )
    except TorusCohomologyError as exc:
        logger.error(f"Solve failed with {exc.code}: {exc.message}")
        return {'status': 'error', **exc.as_dict()}
    return {
        'status': result.status,
        'f': series_to_dict(result.f),
        'report': SolveResultSerializer(result).data,
    }
