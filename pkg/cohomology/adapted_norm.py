"""
Norm adapted to the hyperbolic dual matrix B.

    ||x-||_* = sum_{k<n} ||B^k x-||,   ||x+||_* = sum_{k<n} ||B^{-k} x+||,
    ||x||_*  = max(||Pi- x||_*, ||Pi+ x||_*)

with n the first exponent making B^n contract on E- and B^{-n} contract
on E+. Here ||.|| is Euclidean and |.| the l1 norm.
"""

import enum
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import NotHyperbolic, ZeroVector
from .spectral import HyperbolicSplitting
from .utils import get_setting

logger = logging.getLogger(__name__)


class Growth(str, enum.Enum):
    """Which half-orbit of a lattice vector grows in the adapted norm."""

    EXPANDING = "expanding"
    CONTRACTING = "contracting"


@dataclass(frozen=True, eq=False)
class AdaptedNorm:
    """
    ||x||_* = max(sum_k ||B^k Pi- x||, sum_k ||B^-k Pi+ x||) over k < n.

    theta_minus and theta_plus_inv are certified upper bounds
    (alpha + ||C^n||) / (alpha + 1), alpha = sum_{0<k<n} ||C^k||, on the
    operator norms of B on E- and B^-1 on E+ in ||.||_*. They are exact
    when n = 1 and may exceed the true operator norm otherwise.
    """

    splitting: HyperbolicSplitting
    n: int
    theta_minus: float
    theta_plus_inv: float
    eta: float
    mu: float
    # B^k Pi- and B^{-k} Pi+ for k = 0 .. n-1, shape (n, p, p)
    minus_stack: np.ndarray
    plus_stack: np.ndarray

    @property
    def p(self) -> int:
        return self.splitting.p

    def stable_part(self, x) -> np.ndarray:
        """||Pi- x||_* for one vector or a batch of shape (N, p)."""
        return self._side(self.minus_stack, x)

    def unstable_part(self, x) -> np.ndarray:
        """||Pi+ x||_* for one vector or a batch of shape (N, p)."""
        return self._side(self.plus_stack, x)

    @staticmethod
    def _side(stack: np.ndarray, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        images = np.einsum("kij,...j->...ki", stack, x)
        return np.linalg.norm(images, axis=-1).sum(axis=-1)

    def __call__(self, x):
        return np.maximum(self.stable_part(x), self.unstable_part(x))


def _contraction_exponent(split: HyperbolicSplitting, max_exponent: int) -> Tuple[int, list, list]:
    """Smallest n with ||C-^n|| < 1 and ||C+^n|| < 1, plus the norms ||C^k|| for k <= n."""
    c_minus, c_plus = split.c_minus, split.c_plus
    power_minus = np.eye(c_minus.shape[0])
    power_plus = np.eye(c_plus.shape[0])
    norms_minus, norms_plus = [1.0], [1.0]
    for n in range(1, max_exponent + 1):
        power_minus = power_minus @ c_minus
        power_plus = power_plus @ c_plus
        norms_minus.append(float(np.linalg.norm(power_minus, 2)) if power_minus.size else 0.0)
        norms_plus.append(float(np.linalg.norm(power_plus, 2)) if power_plus.size else 0.0)
        if norms_minus[-1] < 1 and norms_plus[-1] < 1:
            return n, norms_minus, norms_plus
    raise NotHyperbolic(
        f"No contraction exponent n <= {max_exponent}",
        details={"rho_minus": split.rho_minus, "rho_plus_inv": split.rho_plus_inv},
    )


def _certified_theta(norms: Sequence[float], n: int) -> float:
    # ||Bx||_* = ||x||_* - ||x|| + ||B^n x|| and ||x||_* <= (1 + alpha) ||x||
    alpha = sum(norms[1:n])
    return (alpha + norms[n]) / (alpha + 1.0)


def build_adapted_norm(split: HyperbolicSplitting, max_exponent: Optional[int] = None) -> AdaptedNorm:
    """
    Build the adapted norm of a hyperbolic splitting

    Args:
        split: stable/unstable splitting of B
        max_exponent: cap on the search for n

    Returns:
        AdaptedNorm with theta_minus, theta_plus_inv < 1 and certified eta, mu

    Raises:
        NotHyperbolic: no n <= max_exponent contracts both subspaces
    """
    max_exponent = get_setting("TORUS_MAX_ADAPTED_EXPONENT") if max_exponent is None else max_exponent
    n, norms_minus, norms_plus = _contraction_exponent(split, max_exponent)

    p = split.p
    minus_stack = np.empty((n, p, p))
    plus_stack = np.empty((n, p, p))
    forward = np.eye(p)
    backward = np.eye(p)
    operator_norms = []
    for k in range(n):
        minus_stack[k] = forward @ split.pi_minus
        plus_stack[k] = backward @ split.pi_plus
        operator_norms.append(max(np.linalg.norm(forward, 2), np.linalg.norm(backward, 2)))
        forward = split.B @ forward
        backward = split.B_inv @ backward

    projector_norms = np.linalg.norm(split.pi_minus, 2) + np.linalg.norm(split.pi_plus, 2)
    eta = 1.0 / (n * max(operator_norms) * projector_norms)
    mu = 2.0 * np.sqrt(p)

    norm = AdaptedNorm(
        splitting=split,
        n=n,
        theta_minus=_certified_theta(norms_minus, n),
        theta_plus_inv=_certified_theta(norms_plus, n),
        eta=float(eta),
        mu=float(mu),
        minus_stack=minus_stack,
        plus_stack=plus_stack,
    )
    logger.info(
        f"Adapted norm: n={n}, theta_minus={norm.theta_minus:.6f}, "
        f"theta_plus_inv={norm.theta_plus_inv:.6f}, eta={norm.eta:.6g}, mu={norm.mu:.6g}"
    )
    return norm


def norm_star(nm: AdaptedNorm, x) -> float:
    return float(nm(x))


def classify(nm: AdaptedNorm, m: Sequence[int]) -> Growth:
    """Expanding when ||Pi+ m||_* >= ||Pi- m||_* (ties expand)."""
    if not any(m):
        raise ZeroVector(details={"m": list(m)})
    return Growth.EXPANDING if nm.unstable_part(m) >= nm.stable_part(m) else Growth.CONTRACTING


def equivalence_constants(nm: AdaptedNorm) -> Tuple[float, float]:
    """(eta, mu) with eta ||x||_* <= |x|_1 <= mu ||x||_* for every x."""
    return nm.eta, nm.mu
