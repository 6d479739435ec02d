"""
Obstruction functionals and the solution operator of f - f o gamma = g.

For a frequency m != 0 the orbit sums

    Phi+_m(g) =  sum_{k >= 0} e^{2 pi i <b_k, B^k m>} g(B^k m)
    Phi-_m(g) = -sum_{k < 0}  e^{2 pi i <b_k, B^k m>} g(B^k m)

are finite for a trigonometric polynomial g: once an orbit point is
Expanding (forward walk) or Contracting (backward walk) and lies outside
the adapted ball of radius R_S = max ||s||_* over supp(g), every later
point stays outside. The walks stop there, so every sum is exact.

g is a coboundary iff g(0) = 0 and Phi_m(g) = Phi+_m - Phi-_m vanishes on
every orbit; the solution is f(m) = Phi+_m(g) for Expanding m and
Phi-_m(g) for Contracting m, with f(0) = 0.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

import numpy as np
import sympy
from scipy import special

from .adapted_norm import AdaptedNorm, Growth, build_adapted_norm
from .errors import (
    EnumerationOverflow,
    InvalidProblem,
    NoConvergence,
    ObstructionViolated,
    ZeroFrequency,
)
from .fourier import FourierSeries, coboundary, seminorm_1r
from .lattice_core import AffineTorusMap, DualMap, Vector, dual_matrix, unit_phase
from .spectral import HyperbolicSplitting, IntPolynomial, Spectrum, char_poly, roots, splitting
from .utils import get_setting

logger = logging.getLogger(__name__)

PLUS = "plus"
MINUS = "minus"
TOTAL = "total"
MODES = (PLUS, MINUS, TOTAL)

# Relative slack on R_S comparisons; only delays the stopping rule
FRONTIER_SLACK = 1e-9

SUCCESS = "success"
RESIDUAL_EXCEEDED = "residual_exceeded"


@dataclass(frozen=True, eq=False)
class TorusSystem:
    """Everything derived from one affine map: dual matrix, spectrum of B, splitting, adapted norm."""

    torus_map: AffineTorusMap
    dual: DualMap
    polynomial: IntPolynomial
    spectrum: Spectrum
    splitting: HyperbolicSplitting
    norm: AdaptedNorm


def analyze(torus_map: AffineTorusMap, band: Optional[float] = None, root_tol: Optional[float] = None) -> TorusSystem:
    dual = dual_matrix(torus_map)
    polynomial = char_poly(dual.B)
    spectrum = roots(polynomial, root_tol)
    split = splitting(dual, spectrum, band)
    norm = build_adapted_norm(split)
    logger.info(f"Analyzed map on T^{torus_map.p}: stable dimension {spectrum.stable_count}, n={norm.n}")
    return TorusSystem(torus_map, dual, polynomial, spectrum, split, norm)


class OrbitScanner:
    """
    Walks dual-lattice orbits of one right-hand side g

    Orbit profiles (growth type, adapted norm) are cached per lattice
    point; phases are tracked as integer numerators modulo the common
    denominator D of b.
    """

    def __init__(self, g: FourierSeries, dual: DualMap, norm: AdaptedNorm):
        self.g = g
        self.dual = dual
        self.torus_map = dual.source
        self.norm = norm
        self.step_cap = get_setting("TORUS_ORBIT_STEP_CAP")
        self._profiles: Dict[Vector, Tuple[Growth, float]] = {}

        support = [m for m in g.support if any(m)]
        if support:
            norms = norm(np.array(support, dtype=float))
            self.radius = float(np.max(norms))
        else:
            self.radius = 0.0
        self.frontier = self.radius * (1.0 + FRONTIER_SLACK)

    def profile(self, v: Vector) -> Tuple[Growth, float]:
        cached = self._profiles.get(v)
        if cached is None:
            minus = float(self.norm.stable_part(v))
            plus = float(self.norm.unstable_part(v))
            cached = (Growth.EXPANDING if plus >= minus else Growth.CONTRACTING, max(minus, plus))
            self._profiles[v] = cached
        return cached

    def _phase(self, turns: int) -> complex:
        return unit_phase(Fraction(turns, self.torus_map.phase_denominator))

    def forward(self, m: Vector) -> Iterator[Tuple[Vector, int]]:
        """(B^k m, D <b_k, B^k m> mod D) for k = 0, 1, ... up to the forward frontier."""
        denominator = self.torus_map.phase_denominator
        v, turns = m, 0
        for _ in range(self.step_cap):
            yield v, turns
            growth, value = self.profile(v)
            if growth is Growth.EXPANDING and value > self.frontier:
                return
            v = self.dual.step(v)
            # <b_{k+1}, B^{k+1} m> = <b_k, B^k m> + <b, B^{k+1} m>
            turns = (turns + self.torus_map.phase_turns(v)) % denominator
        raise NoConvergence("Forward orbit walk hit the step cap", details={"m": list(m)})

    def backward(self, m: Vector) -> Iterator[Tuple[Vector, int]]:
        """Same for k = -1, -2, ... down to the backward frontier."""
        denominator = self.torus_map.phase_denominator
        v, turns = m, 0
        for _ in range(self.step_cap):
            growth, value = self.profile(v)
            if growth is Growth.CONTRACTING and value > self.frontier:
                return
            turns = (turns - self.torus_map.phase_turns(v)) % denominator
            v = self.dual.step_back(v)
            yield v, turns
        raise NoConvergence("Backward orbit walk hit the step cap", details={"m": list(m)})

    def _sum(self, walk: Iterator[Tuple[Vector, int]]) -> complex:
        total = 0j
        for v, turns in walk:
            amplitude = self.g.coeffs.get(v)
            if amplitude is not None:
                total += amplitude * self._phase(turns)
        return total

    def phi_plus(self, m: Vector) -> complex:
        return self._sum(self.forward(m))

    def phi_minus(self, m: Vector) -> complex:
        return -self._sum(self.backward(m))

    def phi(self, m: Sequence[int], mode: str = TOTAL) -> complex:
        m = tuple(int(x) for x in m)
        if not any(m):
            raise ZeroFrequency(details={"m": list(m)})
        if mode == PLUS:
            return self.phi_plus(m)
        if mode == MINUS:
            return self.phi_minus(m)
        if mode == TOTAL:
            return self.phi_plus(m) - self.phi_minus(m)
        raise InvalidProblem(f"Unknown orbit-sum mode {mode!r}", details={"modes": list(MODES)})

    def window(self, m: Vector) -> List[Vector]:
        """Orbit points of m between the backward and forward frontiers, backward part reversed."""
        backward = [v for v, _ in self.backward(m)]
        forward = [v for v, _ in self.forward(m)]
        return backward[::-1] + forward

    def orbit_windows(self) -> List[List[Vector]]:
        """One window per orbit meeting supp(g) minus the origin, in order of first support point."""
        windows = []
        seen: Set[Vector] = set()
        for s in self.g.support:
            if not any(s) or s in seen:
                continue
            points = self.window(s)
            seen.update(points)
            windows.append(points)
        return windows


def _scanner(g: FourierSeries, torus_map: AffineTorusMap, nm: Optional[AdaptedNorm]) -> OrbitScanner:
    if nm is None:
        nm = analyze(torus_map).norm
    return OrbitScanner(g, dual_matrix(torus_map), nm)


def phi(
    g: FourierSeries,
    torus_map: AffineTorusMap,
    m: Sequence[int],
    mode: str = TOTAL,
    nm: Optional[AdaptedNorm] = None,
) -> complex:
    """
    Orbit functional of g at frequency m != 0

    Args:
        mode: "plus" (k >= 0), "minus" (minus the k < 0 part) or "total" (all k)

    Raises:
        ZeroFrequency: m = 0, use phi_zero
    """
    return _scanner(g, torus_map, nm).phi(m, mode)


def phi_zero(g: FourierSeries) -> complex:
    return g.mean


def orbit_representatives(g: FourierSeries, B: DualMap, nm: AdaptedNorm) -> List[Vector]:
    """Minimal ||.||_* point of every orbit window meeting supp(g), ties broken lexicographically."""
    scanner = OrbitScanner(g, B, nm)
    return [min(window, key=lambda v: (scanner.profile(v)[1], v)) for window in scanner.orbit_windows()]


@dataclass(frozen=True)
class OrbitCheck:
    representative: Vector
    value: complex
    magnitude: float
    passed: bool


@dataclass(frozen=True)
class ObstructionReport:
    phi_zero: complex
    orbit_checks: Tuple[OrbitCheck, ...]
    tol: float
    solvable: bool = field(init=False)

    def __post_init__(self):
        solvable = abs(self.phi_zero) <= self.tol and all(check.passed for check in self.orbit_checks)
        object.__setattr__(self, "solvable", solvable)

    @property
    def mean_passed(self) -> bool:
        return abs(self.phi_zero) <= self.tol

    @property
    def failing(self) -> List[OrbitCheck]:
        return [check for check in self.orbit_checks if not check.passed]


def check_obstructions(
    g: FourierSeries,
    torus_map: AffineTorusMap,
    nm: Optional[AdaptedNorm] = None,
    tol: Optional[float] = None,
) -> ObstructionReport:
    """Evaluate Phi_0 and Phi_m at one representative per orbit meeting supp(g)."""
    tol = get_setting("TORUS_OBSTRUCTION_TOL") if tol is None else tol
    scanner = _scanner(g, torus_map, nm)
    checks = []
    for window in scanner.orbit_windows():
        representative = min(window, key=lambda v: (scanner.profile(v)[1], v))
        value = scanner.phi(representative, TOTAL)
        checks.append(OrbitCheck(representative, value, abs(value), abs(value) <= tol))
    report = ObstructionReport(phi_zero=phi_zero(g), orbit_checks=tuple(checks), tol=tol)
    logger.info(
        f"Obstruction check: {len(checks)} orbit(s), |Phi_0|={abs(report.phi_zero):.3e}, "
        f"solvable={report.solvable}"
    )
    for check in report.failing:
        logger.debug(f"Orbit of {check.representative} violates: |Phi|={check.magnitude:.3e}")
    return report


def l1_ball_size(p: int, M: int) -> int:
    """#{m in Z^p : |m|_1 <= M} = sum_k 2^k C(p, k) C(M, k)."""
    if M < 0:
        return 0
    return sum(2**k * math.comb(p, k) * math.comb(M, k) for k in range(min(p, M) + 1))


def l1_ball(p: int, M: int) -> np.ndarray:
    """All m with |m|_1 <= M, lexicographic order, shape (l1_ball_size(p, M), p)."""
    if p == 1:
        return np.arange(-M, M + 1, dtype=np.int64)[:, None]
    blocks = []
    for first in range(-M, M + 1):
        rest = l1_ball(p - 1, M - abs(first))
        blocks.append(np.hstack([np.full((rest.shape[0], 1), first, dtype=np.int64), rest]))
    return np.vstack(blocks)


def _iter_l1_ball(p: int, M: int) -> Iterator[np.ndarray]:
    """l1_ball in slices of fixed first coordinate."""
    if p == 1:
        yield l1_ball(1, M)
        return
    for first in range(-M, M + 1):
        rest = l1_ball(p - 1, M - abs(first))
        yield np.hstack([np.full((rest.shape[0], 1), first, dtype=np.int64), rest])


def _shell_polynomial(p: int) -> List[Fraction]:
    """Coefficients a_i (ascending) of N_p(k) = #{m : |m|_1 = k} = sum_j 2^j C(p, j) C(k - 1, j - 1)."""
    k = sympy.Symbol("k")
    count = sum(
        2**j * sympy.binomial(p, j) * sympy.expand_func(sympy.binomial(k - 1, j - 1)) for j in range(1, p + 1)
    )
    poly = sympy.Poly(sympy.expand(count), k)
    return [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]


@lru_cache(maxsize=None)
def lattice_constant(p: int, s: int) -> float:
    """
    sum_{m != 0} |m|_1^{-s} for s >= p + 1

    N_p(k) is a polynomial of degree p - 1 in k, so the sum is a finite
    combination of Riemann zeta values.
    """
    if s < p + 1:
        raise InvalidProblem(f"The lattice sum diverges for s={s} < p+1={p + 1}", details={"p": p, "s": s})
    return math.fsum(float(a) * float(special.zeta(s - i)) for i, a in enumerate(_shell_polynomial(p)) if a)


@lru_cache(maxsize=None)
def truncated_lattice_constant(p: int, s: int, M: int) -> float:
    """sum over 0 < |m|_1 <= M of |m|_1^{-s}."""
    coefficients = _shell_polynomial(p)
    return math.fsum(
        float(sum(a * k**i for i, a in enumerate(coefficients))) / k**s for k in range(1, M + 1)
    )


@dataclass(frozen=True)
class ContinuityRow:
    r: int
    lhs: float
    # (mu/eta)^{r+2} * truncated sum |m|_1^{-2} * ||g||_{1,r+2}
    rhs_truncated: float
    # (mu/eta)^{r+p+1} * sum |m|_1^{-(p+1)} * ||g||_{1,r+p+1}
    rhs_corrected: float
    holds_truncated: bool
    holds_corrected: bool


def _holds(lhs: float, rhs: float) -> bool:
    return lhs <= rhs * (1.0 + 1e-12)


def continuity_report(
    f: FourierSeries,
    g: FourierSeries,
    r_list: Optional[Sequence[int]] = None,
    nm: Optional[AdaptedNorm] = None,
    box_radius: int = 0,
) -> List[ContinuityRow]:
    """
    Compare ||f||_{1,r} with the two continuity bounds of the solution operator

    Only the corrected bound is a theorem; the r + 2 bound uses a lattice
    sum that diverges for p >= 2 and is reported truncated at box_radius.
    """
    if nm is None:
        raise InvalidProblem("continuity_report needs the adapted norm of the map")
    r_list = get_setting("TORUS_CONTINUITY_ORDERS") if r_list is None else r_list
    p = f.p
    ratio = nm.mu / nm.eta
    rows = []
    for r in r_list:
        lhs = seminorm_1r(f, r)
        rhs_truncated = ratio ** (r + 2) * truncated_lattice_constant(p, 2, box_radius) * seminorm_1r(g, r + 2)
        rhs_corrected = ratio ** (r + p + 1) * lattice_constant(p, p + 1) * seminorm_1r(g, r + p + 1)
        rows.append(
            ContinuityRow(
                r=r,
                lhs=lhs,
                rhs_truncated=rhs_truncated,
                rhs_corrected=rhs_corrected,
                holds_truncated=_holds(lhs, rhs_truncated),
                holds_corrected=_holds(lhs, rhs_corrected),
            )
        )
    return rows


@dataclass(frozen=True)
class SolveResult:
    f: FourierSeries
    residual_norm: float
    search_radius: float
    candidate_count: int
    continuity: Tuple[ContinuityRow, ...]
    status: str
    box_radius: int
    input_tail: float
    report: ObstructionReport


def solve(
    g: FourierSeries,
    torus_map: AffineTorusMap,
    split: Optional[HyperbolicSplitting] = None,
    nm: Optional[AdaptedNorm] = None,
    tol: Optional[float] = None,
    input_tail: float = 0.0,
    enumeration_cap: Optional[int] = None,
    continuity_orders: Optional[Sequence[int]] = None,
) -> SolveResult:
    """
    Solve f - f o gamma = g for a trigonometric polynomial g

    Args:
        g: right-hand side
        torus_map: gamma
        split, nm: precomputed splitting / adapted norm (built when missing)
        tol: obstruction and residual tolerance
        input_tail: l1 mass dropped when g came from sampled data
        enumeration_cap: maximum number of lattice points in the candidate box

    Returns:
        SolveResult with the mean-zero solution f

    Raises:
        ObstructionViolated: some Phi_m(g) or g(0) does not vanish
        EnumerationOverflow: the l1 box |m|_1 <= ceil(mu R_S) is larger than the cap
    """
    tol = get_setting("TORUS_OBSTRUCTION_TOL") if tol is None else tol
    enumeration_cap = get_setting("TORUS_ENUMERATION_CAP") if enumeration_cap is None else enumeration_cap
    if nm is None:
        nm = build_adapted_norm(split) if split is not None else analyze(torus_map).norm

    report = check_obstructions(g, torus_map, nm, tol)
    if not report.solvable:
        raise ObstructionViolated(
            report,
            details={
                "phi_zero": abs(report.phi_zero),
                "failing": [list(check.representative) for check in report.failing],
            },
        )

    scanner = OrbitScanner(g, dual_matrix(torus_map), nm)
    radius = scanner.radius
    box_radius = math.ceil(nm.mu * radius) if radius > 0 else 0
    if radius > 0:
        size = l1_ball_size(torus_map.p, box_radius)
        if size > enumeration_cap:
            raise EnumerationOverflow(details={"box_radius": box_radius, "points": size, "cap": enumeration_cap})

    # candidates are the nonzero box points inside the adapted ball
    candidate_count = 0
    if radius > 0:
        for block in _iter_l1_ball(torus_map.p, box_radius):
            inside = nm(block.astype(float)) <= scanner.frontier
            inside &= np.any(block != 0, axis=1)
            candidate_count += int(np.count_nonzero(inside))
    logger.info(f"R_S={radius:.6g}, box |m|_1 <= {box_radius}, {candidate_count} candidate(s)")

    # a candidate off every orbit of supp(g) has Phi+ = Phi- = 0
    coefficients: Dict[Vector, complex] = {}
    for window in scanner.orbit_windows():
        for m in window:
            growth, value = scanner.profile(m)
            if value > scanner.frontier:
                continue
            coefficients[m] = scanner.phi_plus(m) if growth is Growth.EXPANDING else scanner.phi_minus(m)
    f = FourierSeries(torus_map.p, coefficients)

    residual = seminorm_1r(coboundary(f, torus_map) - g, 0)
    status = SUCCESS if residual <= tol else RESIDUAL_EXCEEDED
    if status != SUCCESS:
        logger.warning(f"Residual {residual:.3e} exceeds tolerance {tol:.1e}")
    if input_tail:
        logger.warning(f"Input truncation tail {input_tail:.3e} adds to the residual")

    continuity = continuity_report(f, g, continuity_orders, nm, box_radius)
    logger.info(f"Solved: {len(f)} term(s), residual {residual:.3e}")
    return SolveResult(
        f=f,
        residual_norm=residual,
        search_radius=radius,
        candidate_count=candidate_count,
        continuity=tuple(continuity),
        status=status,
        box_radius=box_radius,
        input_tail=input_tail,
        report=report,
    )


@dataclass(frozen=True)
class OracleOutcome:
    deviation: float
    residual: float
    solvable: bool
    continuity_holds: bool
    term_count: int
    tol: float

    @property
    def passed(self) -> bool:
        return (
            self.solvable
            and self.deviation < self.tol
            and self.residual < self.tol
            and self.continuity_holds
        )


def oracle_round_trip(system: TorusSystem, h: FourierSeries, tol: Optional[float] = None) -> OracleOutcome:
    """g = delta(h), f = solve(g); f must equal h minus its mean."""
    tol = get_setting("TORUS_OBSTRUCTION_TOL") if tol is None else tol
    g = coboundary(h, system.torus_map)
    try:
        result = solve(g, system.torus_map, nm=system.norm, tol=tol)
    except ObstructionViolated as exc:
        logger.error(f"Coboundary reported obstructed: {exc.details}")
        return OracleOutcome(math.inf, math.inf, False, False, len(h), tol)
    return OracleOutcome(
        deviation=result.f.max_deviation(h.without_mean()),
        residual=result.residual_norm,
        solvable=True,
        continuity_holds=all(row.holds_corrected for row in result.continuity),
        term_count=len(h),
        tol=tol,
    )
