"""Capacity of a precoded channel, equal power allocation and water-filling."""

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from holowalsh.channel import ChannelMatrix
from holowalsh.modes import Precoder

__all__ = [
    "CapacityError",
    "PowerAllocation",
    "LinkBudget",
    "epa",
    "waterfill",
    "link_budget",
    "capacity",
    "parallel_capacity",
]


class CapacityError(ArithmeticError):
    pass


@dataclass(frozen=True)
class PowerAllocation:
    """Diagonal of the power allocation matrix Q."""

    weights: np.ndarray
    kind: str

    def __len__(self) -> int:
        return self.weights.size


@dataclass(frozen=True)
class LinkBudget:
    snr: float
    separation: float

    @property
    def effective_gain(self) -> float:
        """``P_t / sigma^2``: transmit power scaled up to undo the on-axis path loss."""
        return self.snr * (4 * np.pi * self.separation) ** 2


def epa(n_modes: int) -> PowerAllocation:
    if n_modes < 1:
        raise ValueError("equal power allocation needs at least one mode")
    return PowerAllocation(np.full(n_modes, 1.0 / n_modes), "epa")


def waterfill(gains: Sequence[float], budget: float = 1.0,
              rtol: float = 1e-12) -> PowerAllocation:
    """Water-filling over parallel channels with power gains ``gains``.

    Solves ``p_i = max(0, w - 1/g_i)`` with ``sum(p) = budget``. The water
    level ``w`` is bracketed by bisection until the active set is settled,
    then set in closed form from that set. Channels with zero gain get no
    power.

    Raises
    ------
    ValueError
        If a gain is negative or not finite, or if all gains are zero.
    """
    g = np.asarray(gains, dtype=float)
    if g.ndim != 1 or g.size == 0:
        raise ValueError("gains must be a non-empty 1-D sequence")
    if np.any(~np.isfinite(g)) or np.any(g < 0):
        raise ValueError("gains must be finite and non-negative")
    if not budget > 0:
        raise ValueError("budget must be positive")
    inv = np.full(g.shape, np.inf)
    with np.errstate(divide="ignore", over="ignore"):
        inv[g > 0] = 1.0 / g[g > 0]
    pos = np.isfinite(inv)  # subnormal gains count as zero
    if not pos.any():
        raise ValueError("water-filling needs at least one positive gain")

    def filled(w):
        return np.maximum(0.0, w - inv)

    # the level can only drop as weaker channels join the best one
    lo, hi = inv[pos].min(), budget + inv[pos].min()
    for _ in range(400):
        w = 0.5 * (lo + hi)
        total = filled(w).sum()
        if abs(total - budget) <= rtol * budget:
            break
        if total > budget:
            hi = w
        else:
            lo = w
        if hi - lo <= np.spacing(hi):
            break

    active = inv < w
    if not active.any():
        active = inv == inv[pos].min()
    # settle the active set, then exact water level
    for _ in range(g.size + 1):
        level = (budget + inv[active].sum()) / active.sum()
        new_active = inv < level
        if np.array_equal(new_active, active) or not new_active.any():
            break
        active = new_active
    # level - inv[i] written as a sum of differences to avoid cancellation
    # when 1/g is large next to the budget
    a = inv[active]
    p = np.zeros_like(g)
    p[active] = (budget + np.sum(a[None, :] - a[:, None], axis=1)) / a.size
    p = np.maximum(p, 0.0)
    return PowerAllocation(p, "waterfilling")


def link_budget(snr_db: float, d: float) -> LinkBudget:
    if not d > 0:
        raise ValueError(f"distance must be positive, got {d!r}")
    return LinkBudget(10.0 ** (snr_db / 10.0), float(d))


def _matrix(obj, attr):
    return getattr(obj, attr) if hasattr(obj, attr) else np.asarray(obj)


def capacity(H: Union[ChannelMatrix, np.ndarray], F: Union[Precoder, np.ndarray],
             Q: Union[PowerAllocation, Sequence[float]],
             budget: Union[LinkBudget, float]) -> float:
    """Capacity in bit/s/Hz of ``H`` precoded by ``F`` with diagonal power ``Q``.

    Uses ``log2 det(I_N + g Q^1/2 F^H H^H H F Q^1/2)``, which equals the
    ``N_r x N_r`` form by Sylvester's identity. ``budget`` is either a
    :class:`LinkBudget` or the effective gain ``P_t / sigma^2`` itself.
    """
    h = _matrix(H, "entries")
    f = _matrix(F, "matrix")
    q = np.asarray(_matrix(Q, "weights"), dtype=float)
    gain = budget.effective_gain if isinstance(budget, LinkBudget) else float(budget)

    if f.shape[0] != h.shape[1]:
        raise ValueError(f"precoder has {f.shape[0]} rows but channel has {h.shape[1]} columns")
    if f.shape[1] != q.size:
        raise ValueError(f"precoder has {f.shape[1]} columns but allocation has {q.size} weights")
    if np.any(q < 0):
        raise ValueError("power weights must be non-negative")

    a = (h @ f) * np.sqrt(q)[None, :]
    m = gain * (a.conj().T @ a)
    m[np.diag_indices_from(m)] += 1.0
    try:
        c = np.linalg.cholesky(m)
        value = 2.0 * np.sum(np.log2(np.abs(np.diag(c))))
    except np.linalg.LinAlgError:
        sign, logdet = np.linalg.slogdet(m)
        value = logdet / np.log(2) if sign.real > 0 else np.nan
    if not np.isfinite(value):
        raise CapacityError(
            f"non-finite capacity (gain={gain:g}, N={q.size}, max|HF|={np.abs(a).max():g})")
    return float(max(value, 0.0))


def parallel_capacity(gains: Sequence[float], weights: Sequence[float]) -> float:
    """``sum(log2(1 + g_i p_i))`` over independent channels."""
    return float(np.sum(np.log2(1.0 + np.asarray(gains) * np.asarray(weights))))
