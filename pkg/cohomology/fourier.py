"""
Sparse Fourier series on the torus T^p.

A FourierSeries maps frequencies m in Z^p to complex amplitudes; the
function it represents is sum_m h(m) e^{2 pi i <x, m>}. Terms are kept in
lexicographic frequency order so every reduction runs in a fixed order.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DimensionMismatch, InvalidProblem
from .lattice_core import AffineTorusMap, Vector, dual_matrix, translation_term, unit_phase
from .utils import get_setting

logger = logging.getLogger(__name__)

Number = Union[int, float, complex]


@dataclass(frozen=True)
class FourierSeries:
    """Finite-support element of the coefficient space; amplitudes below the prune threshold are dropped."""

    p: int
    coeffs: Mapping[Vector, complex]

    def __post_init__(self):
        threshold = get_setting("TORUS_PRUNE_THRESHOLD")
        cleaned: Dict[Vector, complex] = {}
        for m, amplitude in self.coeffs.items():
            key = tuple(int(x) for x in m)
            if len(key) != self.p:
                raise DimensionMismatch(
                    f"Frequency {list(key)} does not have length {self.p}",
                    details={"p": self.p, "m": list(key)},
                )
            amplitude = complex(amplitude)
            if abs(amplitude) >= threshold:
                cleaned[key] = amplitude
        object.__setattr__(self, "coeffs", MappingProxyType(dict(sorted(cleaned.items()))))

    @classmethod
    def zero(cls, p: int) -> "FourierSeries":
        return cls(p, {})

    @classmethod
    def from_terms(cls, p: int, terms: Iterable[Tuple[Sequence[int], Number]]) -> "FourierSeries":
        """Build from (m, amplitude) pairs, summing repeated frequencies."""
        accumulated: Dict[Vector, complex] = {}
        for m, amplitude in terms:
            key = tuple(int(x) for x in m)
            accumulated[key] = accumulated.get(key, 0j) + complex(amplitude)
        return cls(p, accumulated)

    def __getitem__(self, m: Sequence[int]) -> complex:
        return self.coeffs.get(tuple(m), 0j)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    @property
    def support(self) -> Tuple[Vector, ...]:
        return tuple(self.coeffs)

    def terms(self) -> List[Tuple[Vector, complex]]:
        return list(self.coeffs.items())

    @property
    def mean(self) -> complex:
        return self[(0,) * self.p]

    def _check_dimension(self, other: "FourierSeries"):
        if other.p != self.p:
            raise DimensionMismatch(details={"left": self.p, "right": other.p})

    def __add__(self, other: "FourierSeries") -> "FourierSeries":
        self._check_dimension(other)
        combined = dict(self.coeffs)
        for m, amplitude in other.coeffs.items():
            combined[m] = combined.get(m, 0j) + amplitude
        return FourierSeries(self.p, combined)

    def __neg__(self) -> "FourierSeries":
        return FourierSeries(self.p, {m: -a for m, a in self.coeffs.items()})

    def __sub__(self, other: "FourierSeries") -> "FourierSeries":
        return self + (-other)

    def __mul__(self, other: Union["FourierSeries", Number]) -> "FourierSeries":
        if not isinstance(other, FourierSeries):
            return FourierSeries(self.p, {m: a * other for m, a in self.coeffs.items()})
        # pointwise product of functions = convolution of coefficients
        self._check_dimension(other)
        product: Dict[Vector, complex] = {}
        for m1, a1 in self.coeffs.items():
            for m2, a2 in other.coeffs.items():
                key = tuple(x + y for x, y in zip(m1, m2))
                product[key] = product.get(key, 0j) + a1 * a2
        return FourierSeries(self.p, product)

    def __rmul__(self, other: Number) -> "FourierSeries":
        return self * other

    def max_deviation(self, other: "FourierSeries") -> float:
        """max_m |a(m) - b(m)| over the union of supports."""
        self._check_dimension(other)
        keys = set(self.coeffs) | set(other.coeffs)
        return max((abs(self[m] - other[m]) for m in keys), default=0.0)

    def is_real(self, tol: float = 1e-12) -> bool:
        """Hermitian symmetry a(-m) = conj(a(m)), i.e. the function is real-valued."""
        for m, amplitude in self.coeffs.items():
            mirror = self[tuple(-x for x in m)]
            if abs(mirror - amplitude.conjugate()) > tol * max(1.0, abs(amplitude)):
                return False
        return True

    def without_mean(self) -> "FourierSeries":
        return FourierSeries(self.p, {m: a for m, a in self.coeffs.items() if any(m)})


def basis_mode(p: int, m: Sequence[int], amplitude: Number = 1) -> FourierSeries:
    """amplitude * Theta_m."""
    return FourierSeries(p, {tuple(m): amplitude})


def _check_map(h: FourierSeries, torus_map: AffineTorusMap):
    if h.p != torus_map.p:
        raise DimensionMismatch(
            "Series and map live on tori of different dimension",
            details={"series": h.p, "map": torus_map.p},
        )


def pullback(h: FourierSeries, torus_map: AffineTorusMap, k: int = 1) -> FourierSeries:
    """
    h o gamma^k

    Each stored frequency alpha moves to B^{-k} alpha with the phase
    e^{2 pi i <b_k, alpha>}, the inner product taken in exact rationals.
    """
    _check_map(h, torus_map)
    if k == 0:
        return h
    transport = dual_matrix(torus_map).power(-k)
    shift = translation_term(torus_map, k)
    moved = {}
    for alpha, amplitude in h.coeffs.items():
        turns = sum((s * a for s, a in zip(shift, alpha)), Fraction(0))
        moved[transport @ alpha] = amplitude * unit_phase(turns)
    return FourierSeries(h.p, moved)


def coboundary(h: FourierSeries, torus_map: AffineTorusMap) -> FourierSeries:
    """delta(h) = h - h o gamma."""
    return h - pullback(h, torus_map, 1)


def seminorm_1r(h: FourierSeries, r: int) -> float:
    """|h(0)| + sum_{m != 0} |m|_1^r |h(m)|."""
    if r < 0:
        raise InvalidProblem("The seminorm order r must be nonnegative", details={"r": r})
    return math.fsum(
        (sum(abs(x) for x in m) ** r if any(m) else 1) * abs(amplitude)
        for m, amplitude in h.coeffs.items()
    )


def evaluate_grid(h: FourierSeries, points) -> np.ndarray:
    """h at each row of an (N, p) array of points."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[1] != h.p:
        raise DimensionMismatch(details={"p": h.p, "x": points.shape[1]})
    if not h:
        return np.zeros(points.shape[0], dtype=complex)
    frequencies = np.array(h.support, dtype=float)
    amplitudes = np.array(list(h.coeffs.values()), dtype=complex)
    return np.exp(2j * np.pi * points @ frequencies.T) @ amplitudes


def evaluate(h: FourierSeries, x: Sequence[float]) -> complex:
    x = np.asarray(x, dtype=float)
    if x.shape != (h.p,):
        raise DimensionMismatch(details={"p": h.p, "x": list(x.shape)})
    return complex(evaluate_grid(h, x[None, :])[0])


def from_samples(values, radius: int, threshold: Optional[float] = None) -> Tuple[FourierSeries, float]:
    """
    Ingest a function sampled on the uniform grid (j / N)_j of T^p

    Args:
        values: complex array of shape (N,) * p, values[j] = g(j / N)
        radius: keep modes with |m|_inf <= radius (needs 2 * radius < N)
        threshold: prune threshold for kept modes

    Returns:
        (series, tail) where tail is the l1 mass of the discarded modes
    """
    values = np.asarray(values, dtype=complex)
    p = values.ndim
    N = values.shape[0]
    if p < 1 or any(size != N for size in values.shape):
        raise InvalidProblem("Samples must lie on a square grid", details={"shape": list(values.shape)})
    if 2 * radius >= N:
        raise InvalidProblem(
            f"Truncation radius {radius} needs more than {2 * radius} samples per axis",
            details={"radius": radius, "grid": N},
        )
    spectrum = np.fft.fftn(values) / N**p
    integer_frequencies = np.rint(np.fft.fftfreq(N, d=1.0 / N)).astype(int)
    grids = np.meshgrid(*([integer_frequencies] * p), indexing="ij")
    frequencies = np.stack([grid.ravel() for grid in grids], axis=1)
    amplitudes = spectrum.ravel()

    kept = np.max(np.abs(frequencies), axis=1) <= radius
    tail = math.fsum(np.abs(amplitudes[~kept]).tolist())
    series = FourierSeries(p, {tuple(m): a for m, a in zip(frequencies[kept].tolist(), amplitudes[kept])})
    if threshold is not None:
        series = FourierSeries(p, {m: a for m, a in series.coeffs.items() if abs(a) >= threshold})
    if tail > 0:
        logger.warning(f"Sampled input truncated at |m|_inf <= {radius}: discarded l1 tail {tail:.3e}")
    return series, tail
