"""
Exact integer linear algebra on Z^p.

Matrices hold Python integers (arbitrary precision), translations hold
fractions.Fraction, so orbit frequencies B^k m and phases <b_k, B^k m>
are computed without rounding. Floating point only appears when a caller
asks for a numpy copy.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from typing import Iterable, Sequence, Tuple, Union

import numpy as np
import sympy

from .errors import DimensionMismatch, InvalidProblem, NotUnimodular

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]
RationalVector = Tuple[Fraction, ...]
RationalLike = Union[Fraction, int, float, str]


def _matmul(left: Tuple[Tuple[int, ...], ...], right: Tuple[Tuple[int, ...], ...]) -> Tuple[Tuple[int, ...], ...]:
    columns = tuple(zip(*right))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in columns) for row in left)


def _matvec(rows: Tuple[Tuple[int, ...], ...], vector: Sequence) -> tuple:
    return tuple(sum(a * x for a, x in zip(row, vector)) for row in rows)


@dataclass(frozen=True)
class IntMatrix:
    """Square matrix of exact integers, stored as a tuple of rows."""

    rows: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.rows)
        if not rows or any(len(row) != len(rows) for row in rows):
            raise DimensionMismatch(
                "Matrix must be square and non-empty",
                details={"shape": [len(row) for row in rows]},
            )
        for row, original in zip(rows, self.rows):
            for value, raw in zip(row, original):
                if value != raw:
                    raise InvalidProblem(f"Matrix entry {raw!r} is not an integer")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def identity(cls, p: int) -> "IntMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(p)) for i in range(p)))

    @property
    def p(self) -> int:
        return len(self.rows)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.rows)))

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if other.p != self.p:
                raise DimensionMismatch(details={"left": self.p, "right": other.p})
            return IntMatrix(_matmul(self.rows, other.rows))
        vector = tuple(other)
        if len(vector) != self.p:
            raise DimensionMismatch(details={"matrix": self.p, "vector": len(vector)})
        return _matvec(self.rows, vector)

    def power(self, k: int) -> "IntMatrix":
        """M^k for k >= 0 by repeated squaring."""
        if k < 0:
            raise ValueError("IntMatrix.power takes k >= 0; invert through AffineTorusMap/DualMap")
        result = IntMatrix.identity(self.p).rows
        base = self.rows
        while k:
            if k & 1:
                result = _matmul(result, base)
            base = _matmul(base, base)
            k >>= 1
        return IntMatrix(result)

    def to_sympy(self) -> sympy.Matrix:
        return sympy.Matrix(self.rows)

    def to_numpy(self) -> np.ndarray:
        return np.array(self.rows, dtype=float)

    def as_lists(self) -> list:
        return [list(row) for row in self.rows]


def as_int_matrix(rows: Union[IntMatrix, Iterable[Iterable[int]]]) -> IntMatrix:
    if isinstance(rows, IntMatrix):
        return rows
    return IntMatrix(tuple(tuple(row) for row in rows))


def parse_rational(value: RationalLike) -> Fraction:
    """
    Read a rational from "num/den", a decimal string or a number

    Decimals (and floats, through their shortest repr) become the exact
    rational with denominator 10^d.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InvalidProblem(f"Not a rational number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise InvalidProblem(f"Not a rational number: {value!r}")
        return Fraction(repr(value))
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidProblem(f"Not a rational number: {value!r}") from exc


def det_unimodular(M: Union[IntMatrix, Iterable[Iterable[int]]]) -> Tuple[int, bool]:
    """
    Exact determinant by fraction-free (Bareiss) elimination

    Returns:
        (det, |det| == 1)
    """
    M = as_int_matrix(M)
    det = int(M.to_sympy().det(method="bareiss"))
    return det, abs(det) == 1


def unit_phase(turns: Fraction) -> complex:
    """e^{2 pi i turns}, exact on quarter turns."""
    turns = turns - math.floor(turns)
    if turns == 0:
        return complex(1.0, 0.0)
    if turns == Fraction(1, 2):
        return complex(-1.0, 0.0)
    if turns == Fraction(1, 4):
        return complex(0.0, 1.0)
    if turns == Fraction(3, 4):
        return complex(0.0, -1.0)
    return cmath.exp(2j * math.pi * (turns.numerator / turns.denominator))


@dataclass(frozen=True)
class AffineTorusMap:
    """gamma(x) = A x + b on the torus R^p / Z^p, with A in GL(p, Z)."""

    A: IntMatrix
    b: RationalVector

    def __post_init__(self):
        A = as_int_matrix(self.A)
        b = tuple(parse_rational(x) for x in self.b)
        if A.p < 2:
            raise InvalidProblem("The torus dimension p must be at least 2", details={"p": A.p})
        if len(b) != A.p:
            raise DimensionMismatch(
                "Translation length does not match the matrix",
                details={"p": A.p, "len_b": len(b)},
            )
        det, unimodular = det_unimodular(A)
        if not unimodular:
            raise NotUnimodular(details={"det": det})
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "det", det)

    @classmethod
    def build(cls, A: Iterable[Iterable[int]], b: Iterable[RationalLike] = None) -> "AffineTorusMap":
        A = as_int_matrix(A)
        if b is None:
            b = (0,) * A.p
        return cls(A, tuple(parse_rational(x) for x in b))

    @property
    def p(self) -> int:
        return self.A.p

    @cached_property
    def A_inv(self) -> IntMatrix:
        # inverse = adjugate / det and det = +-1
        adjugate = self.A.to_sympy().adjugate(method="bareiss")
        return IntMatrix(tuple(tuple(int(x) * self.det for x in adjugate.row(i)) for i in range(self.p)))

    @cached_property
    def phase_denominator(self) -> int:
        """Common denominator D of the entries of b."""
        return reduce(math.lcm, (x.denominator for x in self.b), 1)

    @cached_property
    def phase_numerators(self) -> Vector:
        """Integer vector c with b = c / D."""
        D = self.phase_denominator
        return tuple(int(x * D) for x in self.b)

    def phase_turns(self, frequency: Sequence[int]) -> int:
        """D * <b, frequency> mod D."""
        return sum(c * m for c, m in zip(self.phase_numerators, frequency)) % self.phase_denominator

    @property
    def is_linear(self) -> bool:
        return not any(self.b)

    def inverse(self) -> "AffineTorusMap":
        """gamma^{-1}(x) = A^{-1} x - A^{-1} b."""
        shift = self.A_inv @ self.b
        return AffineTorusMap(self.A_inv, tuple(-x for x in shift))

    def matrix_power(self, k: int) -> IntMatrix:
        return self.A.power(k) if k >= 0 else self.A_inv.power(-k)

    def apply(self, x: Sequence[float], k: int = 1) -> np.ndarray:
        """gamma^k(x) reduced into [0, 1)^p."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.p,):
            raise DimensionMismatch(details={"p": self.p, "x": list(x.shape)})
        shift = np.array([float(t) for t in translation_term(self, k)])
        return np.mod(self.matrix_power(k).to_numpy() @ x + shift, 1.0)


def translation_term(torus_map: AffineTorusMap, k: int) -> RationalVector:
    """
    b_k = gamma^k(0), exact

    Forward: b_{k+1} = A b_k + b. Backward: b_{k-1} = A^{-1}(b_k - b).
    """
    current = tuple(Fraction(0) for _ in range(torus_map.p))
    if k >= 0:
        for _ in range(k):
            current = tuple(x + y for x, y in zip(torus_map.A @ current, torus_map.b))
    else:
        for _ in range(-k):
            current = torus_map.A_inv @ tuple(x - y for x, y in zip(current, torus_map.b))
    return current


@dataclass(frozen=True)
class DualMap:
    """B = (A^{-1})^T, the matrix transporting Fourier frequencies."""

    B: IntMatrix
    B_inv: IntMatrix
    source: AffineTorusMap

    def __post_init__(self):
        if self.source.A.transpose() @ self.B != IntMatrix.identity(self.B.p):
            raise NotUnimodular("A^T B is not the identity", details={"B": self.B.as_lists()})

    @property
    def p(self) -> int:
        return self.B.p

    def power(self, k: int) -> IntMatrix:
        return self.B.power(k) if k >= 0 else self.B_inv.power(-k)

    def step(self, m: Sequence[int]) -> Vector:
        return self.B @ m

    def step_back(self, m: Sequence[int]) -> Vector:
        return self.B_inv @ m

    def inverse(self) -> "DualMap":
        """Dual map of gamma^{-1}; its matrix is B^{-1} = A^T."""
        return dual_matrix(self.source.inverse())


def dual_matrix(torus_map: AffineTorusMap) -> DualMap:
    B = torus_map.A_inv.transpose()
    logger.debug(f"Dual matrix for A={torus_map.A.as_lists()}: B={B.as_lists()}")
    return DualMap(B=B, B_inv=torus_map.A.transpose(), source=torus_map)


def apply_power(dual: DualMap, k: int, m: Sequence[int]) -> Vector:
    """Exact B^k m with Python integers."""
    m = tuple(int(x) for x in m)
    if len(m) != dual.p:
        raise DimensionMismatch(details={"p": dual.p, "m": len(m)})
    if k == 0:
        return m
    return dual.power(k) @ m
