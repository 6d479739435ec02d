"""
Spectrum and stable/unstable splitting of the dual matrix B.

Pipeline: char_poly (exact, sympy) -> roots (Aberth iteration, numpy)
-> is_hyperbolic -> splitting (Bezout projectors on the stable and
unstable factors of the characteristic polynomial).
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy
from scipy import linalg

from .constants import PROJECTOR_IMAG_TOL, SPLITTING_RESIDUAL_TOL
from .errors import (
    IllConditioned,
    InvalidProblem,
    NoConvergence,
    NotHyperbolic,
    NotUnimodularPolynomial,
)
from .lattice_core import DualMap, IntMatrix, as_int_matrix
from .utils import get_setting

logger = logging.getLogger(__name__)

X = sympy.Symbol("X")

STABLE = "stable"
UNSTABLE = "unstable"


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, coefficients in ascending order (c0, c1, ..., cp)."""

    coefficients: Tuple[int, ...]

    def __post_init__(self):
        coefficients = [int(c) for c in self.coefficients]
        while len(coefficients) > 1 and coefficients[-1] == 0:
            coefficients.pop()
        if not coefficients or coefficients == [0]:
            raise InvalidProblem("The zero polynomial has no roots")
        object.__setattr__(self, "coefficients", tuple(coefficients))

    @classmethod
    def from_sympy(cls, expr) -> "IntPolynomial":
        poly = sympy.Poly(expr, X)
        return cls(tuple(int(c) for c in reversed(poly.all_coeffs())))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> int:
        return self.coefficients[-1]

    @property
    def constant(self) -> int:
        return self.coefficients[0]

    def __call__(self, x):
        """Horner evaluation; exact for int and Fraction arguments."""
        value = 0
        for c in reversed(self.coefficients):
            value = value * x + c
        return value

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coefficients))

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        return IntPolynomial.from_sympy(self.to_sympy() * other.to_sympy())

    def normalized(self) -> "IntPolynomial":
        """Sign-normalized so the leading coefficient is +1 (when it is +-1)."""
        return -self if self.leading < 0 else self

    def to_sympy(self):
        return sum(c * X**i for i, c in enumerate(self.coefficients))

    def __str__(self) -> str:
        return str(sympy.Poly(self.to_sympy(), X).as_expr())


@dataclass(frozen=True)
class Spectrum:
    """Distinct roots with algebraic multiplicities, sorted by (modulus, re, im)."""

    roots: Tuple[Tuple[complex, int], ...]
    polynomial: IntPolynomial
    stable_count: int = field(init=False)

    def __post_init__(self):
        total = sum(k for _, k in self.roots)
        if total != self.polynomial.degree:
            raise NoConvergence(
                "Root multiplicities do not add up to the degree",
                details={"degree": self.polynomial.degree, "counted": total},
            )
        object.__setattr__(self, "stable_count", sum(k for z, k in self.roots if abs(z) < 1))

    @property
    def p(self) -> int:
        return self.polynomial.degree

    def values(self, side: Optional[str] = None) -> np.ndarray:
        """Roots repeated by multiplicity, optionally only one side of the unit circle."""
        selected = []
        for z, k in self.roots:
            if side == STABLE and abs(z) >= 1:
                continue
            if side == UNSTABLE and abs(z) <= 1:
                continue
            selected.extend([z] * k)
        return np.array(selected, dtype=complex)

    @property
    def moduli(self) -> List[float]:
        return [abs(z) for z, _ in self.roots]

    @property
    def has_repeated_roots(self) -> bool:
        return any(k > 1 for _, k in self.roots)


def char_poly(M: Union[IntMatrix, Sequence[Sequence[int]]]) -> IntPolynomial:
    """det(M - X I), exact integer coefficients."""
    M = as_int_matrix(M)
    # sympy returns det(X I - M)
    monic = M.to_sympy().charpoly(X)
    sign = (-1) ** M.p
    return IntPolynomial(tuple(sign * int(c) for c in reversed(monic.all_coeffs())))


def _aberth(descending: np.ndarray, max_iterations: int) -> np.ndarray:
    """Simultaneous Aberth-Ehrlich iteration on a monic polynomial."""
    n = len(descending) - 1
    radius = 1.0 + np.max(np.abs(descending[1:]))
    angles = 2 * np.pi * np.arange(n) / n + np.pi / (2 * n)
    z = radius * np.exp(1j * angles)
    derivative = np.polyder(descending)
    for _ in range(max_iterations):
        pz = np.polyval(descending, z)
        dpz = np.polyval(derivative, z)
        dpz = np.where(dpz == 0, np.finfo(float).eps, dpz)
        ratio = pz / dpz
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        repulsion = np.sum(1.0 / diff, axis=1)
        step = ratio / (1.0 - ratio * repulsion)
        z = z - step
        if np.all(np.abs(step) <= 4 * np.finfo(float).eps * np.maximum(1.0, np.abs(z))):
            break
    return z


def _cluster(z: np.ndarray, radius: float) -> List[List[complex]]:
    clusters: List[List[complex]] = []
    for value in sorted(z, key=lambda w: (w.real, w.imag)):
        for cluster in clusters:
            if abs(np.mean(cluster) - value) < radius:
                cluster.append(value)
                break
        else:
            clusters.append([value])
    return clusters


def _newton_polish(descending: np.ndarray, z: complex, steps: int = 3) -> complex:
    derivative = np.polyder(descending)
    for _ in range(steps):
        d = np.polyval(derivative, z)
        if d == 0:
            break
        z = z - np.polyval(descending, z) / d
    return z


def _enforce_conjugates(values: List[Tuple[complex, int]], radius: float) -> List[Tuple[complex, int]]:
    result = []
    pending = []
    for z, k in values:
        if abs(z.imag) < radius * max(1.0, abs(z)):
            result.append((complex(z.real, 0.0), k))
        else:
            pending.append((z, k))
    upper = [(z, k) for z, k in pending if z.imag > 0]
    lower = [(z, k) for z, k in pending if z.imag < 0]
    for z, k in upper:
        if not lower:
            raise NoConvergence("Complex root without a conjugate partner", details={"root": str(z)})
        partner = min(range(len(lower)), key=lambda i: abs(lower[i][0] - z.conjugate()))
        w, _ = lower.pop(partner)
        average = (z + w.conjugate()) / 2
        result.append((average, k))
        result.append((average.conjugate(), k))
    if lower:
        raise NoConvergence("Complex root without a conjugate partner", details={"root": str(lower[0][0])})
    return result


def roots(poly: IntPolynomial, tol: Optional[float] = None, max_iterations: Optional[int] = None) -> Spectrum:
    """
    All complex roots with multiplicities

    Args:
        poly: integer polynomial of degree >= 1
        tol: residual tolerance relative to the coefficient scale;
            roots closer than sqrt(tol) are merged into one multiple root
        max_iterations: Aberth iteration cap

    Returns:
        Spectrum sorted by (modulus, real part, imaginary part)

    Raises:
        NoConvergence: a root fails the residual check after the iteration cap
    """
    tol = get_setting("TORUS_ROOT_TOL") if tol is None else tol
    max_iterations = get_setting("TORUS_ROOT_MAX_ITERATIONS") if max_iterations is None else max_iterations
    if poly.degree < 1:
        raise InvalidProblem("A constant polynomial has no roots")

    descending = np.array(poly.coefficients[::-1], dtype=complex) / poly.leading
    if poly.degree == 1:
        z = np.array([-descending[1]])
    else:
        z = _aberth(descending, max_iterations)

    magnitudes = np.abs(descending[::-1])
    for value in z:
        scale = float(np.sum(magnitudes * np.abs(value) ** np.arange(len(magnitudes))))
        if abs(np.polyval(descending, value)) > tol * scale:
            raise NoConvergence(
                details={"root": str(value), "residual": float(abs(np.polyval(descending, value)))}
            )

    merge_radius = np.sqrt(tol)
    clustered = []
    for cluster in _cluster(z, merge_radius):
        value = complex(np.mean(cluster))
        if len(cluster) == 1:
            value = complex(_newton_polish(descending, value))
        clustered.append((value, len(cluster)))

    paired = _enforce_conjugates(clustered, merge_radius)
    paired.sort(key=lambda item: (abs(item[0]), item[0].real, item[0].imag))
    spectrum = Spectrum(roots=tuple(paired), polynomial=poly)
    logger.debug(f"Roots of {poly}: {[(str(z), k) for z, k in spectrum.roots]}")
    return spectrum


def is_hyperbolic(s: Spectrum, band: Optional[float] = None) -> bool:
    band = get_setting("TORUS_HYPERBOLICITY_BAND") if band is None else band
    return all(abs(abs(z) - 1.0) > band for z, _ in s.roots)


def geometric_multiplicities(B: Union[DualMap, IntMatrix], s: Spectrum, tol: Optional[float] = None) -> List[int]:
    """p - rank(B - lambda I) for every distinct root, numerical rank at sqrt(root tol)."""
    matrix = (B.B if isinstance(B, DualMap) else B).to_numpy()
    tol = np.sqrt(get_setting("TORUS_ROOT_TOL")) if tol is None else tol
    threshold = tol * max(1.0, np.linalg.norm(matrix, 2))
    identity = np.eye(matrix.shape[0])
    return [
        matrix.shape[0] - int(np.linalg.matrix_rank(matrix - z * identity, tol=threshold))
        for z, _ in s.roots
    ]


def _poly_at_matrix(ascending: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    result = np.zeros_like(matrix, dtype=complex)
    identity = np.eye(matrix.shape[0])
    for c in ascending[::-1]:
        result = result @ matrix + c * identity
    return result


def _bezout(ps: np.ndarray, pu: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    u, v with u*ps + v*pu = 1, deg u < deg pu, deg v < deg ps (ascending coefficients).

    Solves the Sylvester system; equivalent to extended Euclid over the reals.
    """
    q = len(ps) - 1
    r = len(pu) - 1
    p = q + r
    if p == 0:
        return np.array([1.0 / ps[0]]), np.zeros(0)
    sylvester = np.zeros((p, p), dtype=complex)
    for i in range(r):
        sylvester[i:i + q + 1, i] = ps
    for j in range(q):
        sylvester[j:j + r + 1, r + j] = pu
    rhs = np.zeros(p, dtype=complex)
    rhs[0] = 1.0
    solution = linalg.solve(sylvester, rhs)
    return solution[:r], solution[r:]


@dataclass(frozen=True, eq=False)
class HyperbolicSplitting:
    """
    Real projectors onto E- (stable) and E+ (unstable) of B.

    The orthonormal bases q_minus, q_plus span the projector ranges;
    c_minus = Q-^T B Q- and c_plus = Q+^T B^{-1} Q+ are the restrictions
    of B to E- and of B^{-1} to E+ in those bases.
    """

    pi_minus: np.ndarray
    pi_plus: np.ndarray
    spectrum: Spectrum
    rho_minus: float
    rho_plus_inv: float
    B: np.ndarray
    B_inv: np.ndarray
    q_minus: np.ndarray
    q_plus: np.ndarray
    c_minus: np.ndarray
    c_plus: np.ndarray

    @property
    def p(self) -> int:
        return self.B.shape[0]

    @property
    def ranks(self) -> Tuple[int, int]:
        return self.q_minus.shape[1], self.q_plus.shape[1]

    def residuals(self) -> dict:
        identity = np.eye(self.p)
        return {
            "resolution": _max_abs(self.pi_minus + self.pi_plus - identity),
            "idempotent_minus": _max_abs(self.pi_minus @ self.pi_minus - self.pi_minus),
            "idempotent_plus": _max_abs(self.pi_plus @ self.pi_plus - self.pi_plus),
            "orthogonal": _max_abs(self.pi_minus @ self.pi_plus),
            "commute_minus": _max_abs(self.B @ self.pi_minus - self.pi_minus @ self.B),
            "commute_plus": _max_abs(self.B @ self.pi_plus - self.pi_plus @ self.B),
        }


def _max_abs(matrix: np.ndarray) -> float:
    return float(np.max(np.abs(matrix))) if matrix.size else 0.0


def _range_basis(projector: np.ndarray, rank: int) -> np.ndarray:
    if rank == 0:
        return np.zeros((projector.shape[0], 0))
    left, _, _ = linalg.svd(projector)
    return left[:, :rank]


def splitting(dual: DualMap, s: Spectrum, band: Optional[float] = None) -> HyperbolicSplitting:
    """
    Stable/unstable projectors of B by the kernel decomposition

    p_s, p_u collect the stable and unstable roots with multiplicity;
    with u*p_s + v*p_u = 1, Pi+ = u(B) p_s(B) and Pi- = v(B) p_u(B).

    Raises:
        NotHyperbolic: a root lies within the band around the unit circle
        IllConditioned: a projector identity misses by more than 1e-8
    """
    if not is_hyperbolic(s, band):
        raise NotHyperbolic(details={"moduli": s.moduli})

    stable = s.values(STABLE)
    unstable = s.values(UNSTABLE)
    ps = np.poly(stable)[::-1] if len(stable) else np.array([1.0])
    pu = np.poly(unstable)[::-1] if len(unstable) else np.array([1.0])
    u, v = _bezout(ps, pu)

    Bf = dual.B.to_numpy()
    B_inv = dual.B_inv.to_numpy()
    pi_plus = _poly_at_matrix(u, Bf) @ _poly_at_matrix(ps, Bf) if len(u) else np.zeros_like(Bf, dtype=complex)
    pi_minus = _poly_at_matrix(v, Bf) @ _poly_at_matrix(pu, Bf) if len(v) else np.zeros_like(Bf, dtype=complex)

    imaginary = max(_max_abs(pi_plus.imag), _max_abs(pi_minus.imag))
    if imaginary > PROJECTOR_IMAG_TOL:
        raise IllConditioned("Projectors are not real", details={"imaginary": imaginary})
    pi_plus, pi_minus = pi_plus.real, pi_minus.real

    q = s.stable_count
    rank_minus = int(np.linalg.matrix_rank(pi_minus, tol=1e-6)) if q else 0
    rank_plus = int(np.linalg.matrix_rank(pi_plus, tol=1e-6)) if q < s.p else 0
    if (rank_minus, rank_plus) != (q, s.p - q):
        raise IllConditioned(
            "Projector ranks do not match the root count",
            details={"ranks": [rank_minus, rank_plus], "expected": [q, s.p - q]},
        )

    q_minus = _range_basis(pi_minus, q)
    q_plus = _range_basis(pi_plus, s.p - q)
    result = HyperbolicSplitting(
        pi_minus=pi_minus,
        pi_plus=pi_plus,
        spectrum=s,
        rho_minus=float(max(np.abs(stable))) if len(stable) else 0.0,
        rho_plus_inv=float(1.0 / min(np.abs(unstable))) if len(unstable) else 0.0,
        B=Bf,
        B_inv=B_inv,
        q_minus=q_minus,
        q_plus=q_plus,
        c_minus=q_minus.T @ Bf @ q_minus,
        c_plus=q_plus.T @ B_inv @ q_plus,
    )

    residuals = result.residuals()
    worst = max(residuals.values())
    if worst > SPLITTING_RESIDUAL_TOL:
        raise IllConditioned(details={key: value for key, value in residuals.items()})
    logger.info(f"Splitting ranks {result.ranks}, worst projector residual {worst:.2e}")
    return result


def restricted_power_norm(split: HyperbolicSplitting, k: int, side: str = STABLE) -> float:
    """Operator 2-norm of B^k on E- (side="stable") or of B^{-k} on E+ (side="unstable")."""
    compressed = split.c_minus if side == STABLE else split.c_plus
    if compressed.size == 0:
        return 0.0
    return float(np.linalg.norm(np.linalg.matrix_power(compressed, k), 2))


def companion_matrix(poly: IntPolynomial) -> IntMatrix:
    """
    Companion matrix: ones on the subdiagonal, last column -(c0, ..., c_{p-1})
    of the sign-normalized polynomial.
    """
    if abs(poly.leading) != 1:
        raise InvalidProblem("Companion matrices need a leading coefficient of +1 or -1", details={"leading": poly.leading})
    if abs(poly.constant) != 1:
        raise NotUnimodularPolynomial(details={"constant": poly.constant})
    monic = poly.normalized()
    matrix = sympy.Matrix.companion(sympy.Poly(monic.to_sympy(), X))
    return IntMatrix(tuple(tuple(int(x) for x in matrix.row(i)) for i in range(monic.degree)))
