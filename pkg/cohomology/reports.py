"""
Spectrum report of an affine map: characteristic polynomial and roots of A,
hyperbolicity, splitting of the dual matrix B and its adapted norm.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional

from .errors import IllConditioned, NotHyperbolic
from .lattice_core import AffineTorusMap
from .solver import TorusSystem, analyze
from .spectral import char_poly, geometric_multiplicities, is_hyperbolic, roots

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RootInfo:
    value: complex
    modulus: float
    multiplicity: int
    geometric_multiplicity: int


@dataclass(frozen=True)
class SpectrumReport:
    p: int
    A: List[List[int]]
    polynomial_text: str
    coefficients: List[int]
    roots: List[RootInfo]
    hyperbolic: bool
    diagonalizable: bool
    stable_rank: Optional[int] = None
    unstable_rank: Optional[int] = None
    rho_minus: Optional[float] = None
    rho_plus_inv: Optional[float] = None
    n: Optional[int] = None
    theta_minus: Optional[float] = None
    theta_plus_inv: Optional[float] = None
    eta: Optional[float] = None
    mu: Optional[float] = None
    system: Optional[TorusSystem] = None


def describe_map(torus_map: AffineTorusMap, band: Optional[float] = None, root_tol: Optional[float] = None) -> SpectrumReport:
    """
    Build the spectrum report; splitting fields stay None when A is not hyperbolic.
    """
    polynomial = char_poly(torus_map.A)
    spectrum = roots(polynomial, root_tol)
    geometric = geometric_multiplicities(torus_map.A, spectrum)
    root_rows = [
        RootInfo(value=z, modulus=abs(z), multiplicity=k, geometric_multiplicity=g)
        for (z, k), g in zip(spectrum.roots, geometric)
    ]
    base = dict(
        p=torus_map.p,
        A=torus_map.A.as_lists(),
        polynomial_text=str(polynomial),
        coefficients=list(polynomial.coefficients),
        roots=root_rows,
        diagonalizable=all(row.multiplicity == row.geometric_multiplicity for row in root_rows),
    )
    if not is_hyperbolic(spectrum, band):
        logger.info(f"Matrix {torus_map.A.as_lists()} is not hyperbolic")
        return SpectrumReport(hyperbolic=False, **base)

    try:
        system = analyze(torus_map, band, root_tol)
    except (NotHyperbolic, IllConditioned) as exc:
        logger.warning(f"Splitting failed: {exc.message}")
        return SpectrumReport(hyperbolic=False, **base)

    split, norm = system.splitting, system.norm
    stable_rank, unstable_rank = split.ranks
    return SpectrumReport(
        hyperbolic=True,
        stable_rank=stable_rank,
        unstable_rank=unstable_rank,
        rho_minus=split.rho_minus,
        rho_plus_inv=split.rho_plus_inv,
        n=norm.n,
        theta_minus=norm.theta_minus,
        theta_plus_inv=norm.theta_plus_inv,
        eta=norm.eta,
        mu=norm.mu,
        system=system,
        **base,
    )
