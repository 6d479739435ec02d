"""
Built-in maps and random generators.

Named maps:
    cat         [[1,1],[1,2]]             Arnold's cat map
    fib         [[1,1],[1,0]]             det -1
    cubic3      [[1,1,1],[1,0,0],[0,1,0]] one real root in (3/2, 2) and a complex pair
    companionQ  companion of X^6 - 2X^5 - X^4 + 3X^2 + 2X + 1, non-diagonalizable
    rot2        [[0,-1],[1,0]]            not hyperbolic
"""

import logging
from fractions import Fraction
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from .errors import InvalidProblem
from .fourier import FourierSeries, basis_mode, coboundary
from .lattice_core import AffineTorusMap, IntMatrix, RationalLike
from .spectral import IntPolynomial, char_poly, companion_matrix, is_hyperbolic, roots

logger = logging.getLogger(__name__)

# ascending coefficients of Q = (X^3 - X^2 - X - 1)^2
COMPANION_Q_COEFFICIENTS = (1, 2, 3, 0, -1, -2, 1)

NAMED_MATRICES: Dict[str, Callable[[], IntMatrix]] = {
    "cat": lambda: IntMatrix(((1, 1), (1, 2))),
    "fib": lambda: IntMatrix(((1, 1), (1, 0))),
    "cubic3": lambda: IntMatrix(((1, 1, 1), (1, 0, 0), (0, 1, 0))),
    "companionQ": lambda: companion_matrix(IntPolynomial(COMPANION_Q_COEFFICIENTS)),
    "rot2": lambda: IntMatrix(((0, -1), (1, 0))),
}

NON_HYPERBOLIC = frozenset({"rot2"})
HYPERBOLIC_FIXTURES = tuple(name for name in NAMED_MATRICES if name not in NON_HYPERBOLIC)

TRANSLATION_DENOMINATORS = (2, 3, 4, 5, 8)
RANDOM_UNIMODULAR_ATTEMPTS = 1000


def named_matrix(name: str) -> IntMatrix:
    try:
        return NAMED_MATRICES[name]()
    except KeyError:
        raise InvalidProblem(f"Unknown fixture {name!r}", details={"known": sorted(NAMED_MATRICES)})


def named_map(name: str, b: Optional[Sequence[RationalLike]] = None) -> AffineTorusMap:
    return AffineTorusMap.build(named_matrix(name).rows, b)


def companion_map(coefficients: Sequence[int], b: Optional[Sequence[RationalLike]] = None) -> AffineTorusMap:
    return AffineTorusMap.build(companion_matrix(IntPolynomial(tuple(coefficients))).rows, b)


def _is_hyperbolic_matrix(matrix: IntMatrix) -> bool:
    try:
        return is_hyperbolic(roots(char_poly(matrix)))
    except Exception as exc:
        logger.debug(f"Rejected candidate {matrix.as_lists()}: {exc}")
        return False


def random_unimodular(seed: int, p: int, operations: Optional[int] = None, magnitude: int = 2) -> IntMatrix:
    """
    Random hyperbolic matrix in GL(p, Z)

    Product of random elementary row operations (row_i += c * row_j,
    0 < |c| <= magnitude) applied to the identity, retried until hyperbolic.
    """
    if p < 2:
        raise InvalidProblem("The torus dimension p must be at least 2", details={"p": p})
    rng = np.random.default_rng(seed)
    operations = operations or 3 * p
    for attempt in range(RANDOM_UNIMODULAR_ATTEMPTS):
        rows = [list(row) for row in IntMatrix.identity(p).rows]
        for _ in range(operations):
            i, j = rng.choice(p, size=2, replace=False)
            c = int(rng.integers(1, magnitude + 1)) * int(rng.choice((-1, 1)))
            rows[i] = [x + c * y for x, y in zip(rows[i], rows[j])]
        matrix = IntMatrix(tuple(tuple(row) for row in rows))
        if _is_hyperbolic_matrix(matrix):
            logger.debug(f"random_unimodular(seed={seed}, p={p}) accepted after {attempt + 1} attempt(s)")
            return matrix
    raise InvalidProblem(
        f"No hyperbolic matrix found in {RANDOM_UNIMODULAR_ATTEMPTS} attempts",
        details={"seed": seed, "p": p},
    )


def random_translation(p: int, rng: np.random.Generator) -> Tuple[Fraction, ...]:
    denominators = rng.choice(TRANSLATION_DENOMINATORS, size=p)
    return tuple(Fraction(int(rng.integers(0, d)), int(d)) for d in denominators)


def random_trig_polynomial(p: int, radius: int, rng: np.random.Generator, terms: int = 6) -> FourierSeries:
    """Mean-zero trigonometric polynomial with `terms` frequencies in [-radius, radius]^p."""
    width = 2 * radius + 1
    available = width**p - 1
    terms = min(terms, available)
    if terms <= 0:
        return FourierSeries.zero(p)
    indices = rng.choice(available, size=terms, replace=False)
    origin = (width**p) // 2
    coefficients = {}
    for index in np.sort(indices):
        index = int(index) + (1 if index >= origin else 0)
        m = tuple(int(d) - radius for d in np.unravel_index(index, (width,) * p))
        coefficients[m] = complex(rng.normal(), rng.normal())
    return FourierSeries(p, coefficients)


def oracle_map(p: int, seed: int) -> AffineTorusMap:
    """cat for p = 2, cubic3 for p = 3, a random unimodular matrix otherwise; rational b on odd seeds."""
    rng = np.random.default_rng(seed)
    if p == 2:
        matrix = named_matrix("cat")
    elif p == 3:
        matrix = named_matrix("cubic3")
    else:
        matrix = random_unimodular(seed, p)
    b = random_translation(p, rng) if seed % 2 else None
    return AffineTorusMap.build(matrix.rows, b)


def oracle_case(p: int, box_radius: int, seed: int, terms: int = 6) -> Tuple[AffineTorusMap, FourierSeries]:
    torus_map = oracle_map(p, seed)
    # separate stream so h does not depend on how many draws the map took
    rng = np.random.default_rng([seed, p, box_radius])
    return torus_map, random_trig_polynomial(p, box_radius, rng, terms)


def default_rhs(torus_map: AffineTorusMap, coboundary_radius: Optional[int] = None, seed: int = 0) -> FourierSeries:
    """delta(Theta_(1,...,1)), or delta(h) for a seeded random h when a radius is given."""
    if coboundary_radius is None:
        h = basis_mode(torus_map.p, (1,) * torus_map.p)
    else:
        h = random_trig_polynomial(torus_map.p, coboundary_radius, np.random.default_rng(seed))
    return coboundary(h, torus_map)

