"""Transmission modes on a sampled disk and the precoders built from them.

Three families are supported besides the channel's own right singular
vectors:

* unfocused OAM, a pure angular phase ramp ``exp(j l theta)``;
* focused OAM, the same ramp times a paraxial lens phase that focuses at
  the receiver distance;
* polar Walsh functions, products of binary radial and angular factors.
  Radial-only and angular-only sets are the special cases ``nu = 0`` and
  ``mu = 0``.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from holowalsh.channel import ChannelSVD
from holowalsh.geometry import Aperture, SamplePoint

__all__ = [
    "FAMILIES",
    "ModeSpec",
    "Precoder",
    "oam_order",
    "oam_unfocused_value",
    "oam_focused_value",
    "walsh_value",
    "walsh_index_list",
    "build_mode_precoder",
    "build_svd_precoder",
    "gram_orthogonality",
    "mode_values",
    "continuous_walsh_gram",
    "oam_angular_gram",
]

FAMILIES = ("svd", "oam_unfocused", "oam_focused", "walsh")


@dataclass(frozen=True)
class ModeSpec:
    family: str
    index: Tuple[int, ...]
    mu: int = 0
    nu: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown mode family {self.family!r}")
        if any(i < 0 for i in self.index):
            raise ValueError(f"mode indices must be non-negative: {self.index}")
        if self.family == "walsh":
            m, n = self.index
            if m >= 2 ** self.mu or n >= 2 ** self.nu:
                raise ValueError(
                    f"walsh index {self.index} out of range for mu={self.mu}, nu={self.nu}")

    @property
    def label(self) -> str:
        if self.family == "walsh":
            return f"walsh_m{self.index[0]}_n{self.index[1]}"
        return f"{self.family}_{self.index[0]}"


@dataclass(frozen=True)
class Precoder:
    matrix: np.ndarray
    modes: Tuple[ModeSpec, ...]
    tx_aperture_id: str = ""

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[1]


def oam_order(n: int) -> int:
    """Integer OAM order of the n-th mode: 0, +1, -1, +2, -2, ..."""
    if n < 0:
        raise ValueError(f"mode index must be >= 0, got {n}")
    return -(n // 2) if n % 2 == 0 else (n + 1) // 2


def _oam_unfocused(n, theta, r_t):
    return np.exp(1j * oam_order(n) * np.asarray(theta)) / (np.sqrt(np.pi) * r_t)


def _lens_phase(rho, d):
    # kappa * d * (1 + rho^2 / (2 d^2)) with kappa = 2 pi per wavelength
    return np.exp(1j * 2 * np.pi * d * (1 + np.asarray(rho) ** 2 / (2 * d * d)))


def _sgn(v):
    return np.where(v >= 0, 1.0, -1.0)


def _walsh(m, n, mu, nu, rho, theta, r_t):
    if not (0 <= m < 2 ** mu and 0 <= n < 2 ** nu):
        raise ValueError(f"walsh index ({m}, {n}) out of range for mu={mu}, nu={nu}")
    rho = np.asarray(rho, float)
    theta = np.asarray(theta, float)
    out = np.full(np.broadcast(rho, theta).shape, 1.0 / (np.sqrt(np.pi) * r_t))
    u = (rho / r_t) ** 2
    for k in range(mu):
        if (m >> k) & 1:
            out = out * _sgn(np.cos(2 ** k * np.pi * u))
    for k in range(nu):
        if (n >> k) & 1:
            out = out * _sgn(np.cos(2 ** k * theta / 2))
    return out


def oam_unfocused_value(n: int, point: SamplePoint, r_t: float) -> complex:
    return complex(_oam_unfocused(n, point.theta, r_t))


def oam_focused_value(n: int, point: SamplePoint, r_t: float, d: float) -> complex:
    if not d > 0:
        raise ValueError(f"focal distance must be positive, got {d!r}")
    return complex(_oam_unfocused(n, point.theta, r_t) * _lens_phase(point.rho, d))


def walsh_value(m: int, n: int, mu: int, nu: int, point: SamplePoint, r_t: float) -> float:
    """Polar Walsh function ``(m, n)`` at resolution ``(mu, nu)``.

    Bit ``k`` of ``m`` switches on the radial factor
    ``sgn(cos(2**k * pi * (rho/r_t)**2))`` and bit ``k`` of ``n`` the
    angular factor ``sgn(cos(2**k * theta / 2))``; ``sgn(0)`` is +1.
    """
    return float(_walsh(m, n, mu, nu, point.rho, point.theta, r_t))


def walsh_index_list(mu: int, nu: int, count: Optional[int] = None):
    pairs = [(m, n) for m in range(2 ** mu) for n in range(2 ** nu)]
    return pairs if count is None else pairs[:count]


def mode_values(spec: ModeSpec, aperture: Aperture, r_t: Optional[float] = None,
                d: Optional[float] = None) -> np.ndarray:
    """Un-normalised samples of one OAM or Walsh mode over an aperture."""
    r_t = aperture.radius if r_t is None else r_t
    if spec.family == "oam_unfocused":
        return _oam_unfocused(spec.index[0], aperture.theta, r_t)
    if spec.family == "oam_focused":
        if d is None or not d > 0:
            raise ValueError("focused OAM needs a positive distance d")
        return _oam_unfocused(spec.index[0], aperture.theta, r_t) * _lens_phase(aperture.rho, d)
    if spec.family == "walsh":
        m, n = spec.index
        return _walsh(m, n, spec.mu, spec.nu, aperture.rho, aperture.theta, r_t).astype(complex)
    raise ValueError(f"no closed form for family {spec.family!r}")


def _normalise_columns(f: np.ndarray) -> np.ndarray:
    return f / np.linalg.norm(f, axis=0, keepdims=True)


def build_mode_precoder(family: str, tx: Aperture, n_modes: int,
                        d: Optional[float] = None,
                        mu: Optional[int] = None, nu: Optional[int] = None) -> Precoder:
    """Sample the first ``n_modes`` modes of a family on ``tx``.

    OAM modes are taken in index order ``n = 0 .. n_modes-1``; Walsh modes in
    row-major ``(m, n)`` order. Each column is scaled to unit 2-norm and no
    re-orthogonalisation is applied.

    Parameters
    ----------
    family : str
        ``"oam_unfocused"``, ``"oam_focused"`` or ``"walsh"``.
    tx : Aperture
        Transmit aperture.
    n_modes : int
        Number of columns.
    d : float, optional
        Focal distance in wavelengths, required for ``"oam_focused"``.
    mu, nu : int, optional
        Walsh radial and angular resolutions, required for ``"walsh"``.
    """
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    if n_modes > len(tx):
        raise ValueError(f"n_modes={n_modes} exceeds the {len(tx)} aperture samples")
    if family in ("oam_unfocused", "oam_focused"):
        specs = [ModeSpec(family, (n,)) for n in range(n_modes)]
    elif family == "walsh":
        if mu is None or nu is None:
            raise ValueError("walsh precoder needs mu and nu")
        available = 2 ** mu * 2 ** nu
        if n_modes > available:
            raise ValueError(
                f"only {available} Walsh functions exist for mu={mu}, nu={nu}; asked {n_modes}")
        specs = [ModeSpec("walsh", mn, mu, nu) for mn in walsh_index_list(mu, nu, n_modes)]
    else:
        raise ValueError(f"unknown mode family {family!r}")

    f = np.stack([mode_values(s, tx, d=d) for s in specs], axis=1)
    f = _normalise_columns(f)
    f.setflags(write=False)
    return Precoder(f, tuple(specs), tx.identifier)


def build_svd_precoder(svd: ChannelSVD, n_modes: int, tx_aperture_id: str = "") -> Precoder:
    available = svd.right_vectors.shape[1]
    if not 1 <= n_modes <= available:
        raise ValueError(f"n_modes must be in [1, {available}], got {n_modes}")
    f = np.array(svd.right_vectors[:, :n_modes])
    f.setflags(write=False)
    specs = tuple(ModeSpec("svd", (i,)) for i in range(n_modes))
    return Precoder(f, specs, tx_aperture_id)


def gram_orthogonality(F) -> float:
    """Largest off-diagonal magnitude of ``F^H F``."""
    f = F.matrix if isinstance(F, Precoder) else np.asarray(F)
    g = np.abs(f.conj().T @ f)
    np.fill_diagonal(g, 0.0)
    return float(g.max()) if g.size else 0.0


def continuous_walsh_gram(mu: int, nu: int, r_t: float = 1.0,
                          n_radial: int = 512, n_angular: int = 512,
                          pairs: Optional[Sequence[Tuple[int, int]]] = None) -> np.ndarray:
    """Continuous Walsh inner products by midpoint quadrature on a polar grid.

    Approximates ``int_0^r_t int_0^2pi phi_a phi_b rho drho dtheta`` for every
    pair of modes, returning the Gram matrix.
    """
    pairs = walsh_index_list(mu, nu) if pairs is None else list(pairs)
    h_r = r_t / n_radial
    h_t = 2 * np.pi / n_angular
    rho = (np.arange(n_radial) + 0.5) * h_r
    theta = (np.arange(n_angular) + 0.5) * h_t
    R, T = np.meshgrid(rho, theta, indexing="ij")
    w = (R * h_r * h_t).ravel()
    vals = np.stack([_walsh(m, n, mu, nu, R, T, r_t).ravel() for m, n in pairs], axis=1)
    return vals.T @ (vals * w[:, None])


def oam_angular_gram(n_modes: int, n_nodes: int = 256) -> np.ndarray:
    """``(1/2pi) int exp(j (l_a - l_b) theta) dtheta`` by the periodic trapezoid rule."""
    theta = 2 * np.pi * np.arange(n_nodes) / n_nodes
    e = np.stack([np.exp(1j * oam_order(n) * theta) for n in range(n_modes)], axis=1)
    return e.conj().T @ e / n_nodes
