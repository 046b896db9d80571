"""Half-wavelength sampled disk apertures.

All lengths are expressed in wavelengths.
"""

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

__all__ = ["SamplePoint", "Aperture", "sample_disk", "point_count"]


@dataclass(frozen=True)
class SamplePoint:
    x: float
    y: float
    rho: float
    theta: float


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Aperture:
    """A sampled disk lying in the plane ``z = z_offset``.

    The Cartesian and polar coordinates of the samples are also exposed as
    read-only arrays (``x``, ``y``, ``rho``, ``theta``) for vectorised use.
    """

    radius: float
    pitch: float
    z_offset: float
    x: np.ndarray = field(repr=False)
    y: np.ndarray = field(repr=False)
    rho: np.ndarray = field(repr=False)
    theta: np.ndarray = field(repr=False)

    @property
    def points(self) -> Tuple[SamplePoint, ...]:
        return tuple(
            SamplePoint(float(a), float(b), float(r), float(t))
            for a, b, r, t in zip(self.x, self.y, self.rho, self.theta)
        )

    @property
    def identifier(self) -> str:
        return f"disk(r={self.radius:g},pitch={self.pitch:g},z={self.z_offset:g})"

    def __len__(self) -> int:
        return self.x.size

    def at(self, z_offset: float) -> "Aperture":
        """Same samples translated to another plane."""
        return Aperture(self.radius, self.pitch, float(z_offset),
                        self.x, self.y, self.rho, self.theta)


def sample_disk(radius: float, pitch: float = 0.5, z_offset: float = 0.0) -> Aperture:
    """Sample the closed disk ``x**2 + y**2 <= radius**2`` on a square grid.

    The grid is anchored on the disk center, so ``(0, 0)`` is always a
    sample. Points are ordered by ``y`` then ``x``.

    Parameters
    ----------
    radius : float
        Disk radius in wavelengths.
    pitch : float
        Grid step in wavelengths, ``0 < pitch <= radius`` (half a wavelength
        by default). A pitch larger than the radius is accepted and yields
        only the center point.
    z_offset : float
        Axial position of the disk plane.

    Raises
    ------
    ValueError
        If ``radius`` or ``pitch`` is not strictly positive.
    """
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius!r}")
    if not pitch > 0:
        raise ValueError(f"pitch must be positive, got {pitch!r}")

    k = int(np.floor(radius / pitch)) + 1
    idx = np.arange(-k, k + 1)
    jj, ii = np.meshgrid(idx, idx, indexing="ij")  # row-major over (y, x)
    x = ii.ravel() * float(pitch)
    y = jj.ravel() * float(pitch)
    inside = x * x + y * y <= float(radius) ** 2
    x = x[inside] + 0.0  # drop any negative zeros
    y = y[inside] + 0.0

    rho = np.sqrt(x * x + y * y)
    theta = np.mod(np.arctan2(y, x), 2 * np.pi)
    theta[theta >= 2 * np.pi] = 0.0

    return Aperture(float(radius), float(pitch), float(z_offset),
                    _readonly(x), _readonly(y), _readonly(rho), _readonly(theta))


def point_count(aperture: Aperture) -> int:
    return len(aperture)
