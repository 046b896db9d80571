"""Scalar Green's function channel between two coaxial disk apertures."""

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from holowalsh.geometry import Aperture

__all__ = [
    "ChannelError",
    "ChannelMatrix",
    "ChannelSVD",
    "green",
    "build_channel",
    "channel_svd",
    "write_channel_csv",
]


class ChannelError(RuntimeError):
    pass


@dataclass(frozen=True)
class ChannelMatrix:
    entries: np.ndarray
    separation: float

    @property
    def rx_count(self) -> int:
        return self.entries.shape[0]

    @property
    def tx_count(self) -> int:
        return self.entries.shape[1]


@dataclass(frozen=True)
class ChannelSVD:
    """Thin SVD ``H = U diag(s) V^H``; columns of ``right_vectors`` are V."""

    left_vectors: np.ndarray
    singular_values: np.ndarray
    right_vectors: np.ndarray

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.singular_values ** 2


def _green_from_distance(dist: np.ndarray) -> np.ndarray:
    # kappa * dist == 2 pi dist with dist in wavelengths
    return np.exp(-2j * np.pi * dist) / (4 * np.pi * dist)


def green(rx_point: Sequence[float], tx_point: Sequence[float]) -> complex:
    """Free-space scalar Green's function between two 3D points (wavelengths)."""
    dist = float(np.linalg.norm(np.asarray(rx_point, float) - np.asarray(tx_point, float)))
    if dist == 0.0:
        raise ZeroDivisionError("Green's function is singular for coincident points")
    return complex(_green_from_distance(np.float64(dist)))


def build_channel(tx: Aperture, rx: Aperture) -> ChannelMatrix:
    """Assemble ``H[i, j] = G(rx_i, tx_j)``, shape ``(N_r, N_t)``."""
    d = rx.z_offset - tx.z_offset
    if d == 0.0:
        raise ValueError("apertures must lie in distinct planes")
    dx = rx.x[:, None] - tx.x[None, :]
    dy = rx.y[:, None] - tx.y[None, :]
    dist = np.sqrt(dx * dx + dy * dy + d * d)
    h = _green_from_distance(dist)
    h.setflags(write=False)
    return ChannelMatrix(h, abs(d))


def channel_svd(H: Union[ChannelMatrix, np.ndarray]) -> ChannelSVD:
    """Thin SVD with a fixed phase convention.

    Each right singular vector is rotated so that its largest-magnitude entry
    is real and positive; the matching left vector gets the same rotation so
    the factorisation still reconstructs ``H``.
    """
    h = H.entries if isinstance(H, ChannelMatrix) else np.asarray(H)
    try:
        u, s, vh = np.linalg.svd(h, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise ChannelError(f"SVD did not converge for a {h.shape} channel: {exc}") from exc
    v = vh.conj().T
    pivot = v[np.argmax(np.abs(v), axis=0), np.arange(v.shape[1])]
    rot = np.exp(-1j * np.angle(pivot))
    v = v * rot
    u = u * rot
    for a in (u, s, v):
        a.setflags(write=False)
    return ChannelSVD(u, s, v)


def write_channel_csv(H: ChannelMatrix, path: Union[str, Path]) -> None:
    """Dump ``H`` row-major, one matrix row per line as interleaved ``re,im``."""
    h = H.entries
    flat = np.empty((h.shape[0], 2 * h.shape[1]))
    flat[:, 0::2] = h.real
    flat[:, 1::2] = h.imag
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in flat:
            fh.write(",".join(repr(float(v)) for v in row))
            fh.write("\n")
