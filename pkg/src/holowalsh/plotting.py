"""Figures written next to the CSV outputs."""

import math
from pathlib import Path
from typing import Optional, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from holowalsh.geometry import Aperture  # noqa: E402
from holowalsh.modes import Precoder, mode_values  # noqa: E402

LABELS = {
    "svd_wf": "SVD, water-filling",
    "svd_epa": "SVD, EPA",
    "oam_unfocused": "OAM unfocused",
    "oam_focused": "OAM focused",
    "walsh_radial": "Radial Walsh",
    "walsh_angular": "Angular Walsh",
    "walsh_polar": "Polar Walsh",
}

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.3,
    "lines.markersize": 3,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
}


def plot_capacity(result, path: Union[str, Path]) -> Path:
    """Capacity against ``d / d_r`` for every scheme in ``result``."""
    schemes = list(dict.fromkeys(r.scheme for r in result.records))
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5.0, 3.4))
        for scheme in schemes:
            ax.semilogx(result.ratios(scheme), result.capacities(scheme),
                        marker="o", label=LABELS.get(scheme, scheme))
        ax.axvline(1.0, color="k", linestyle=":", linewidth=1)
        ax.set_xlabel(r"$d / d_r$")
        ax.set_ylabel("Capacity [bit/s/Hz]")
        ax.legend(loc="best")
        fig.savefig(path)
        plt.close(fig)
    return Path(path)


def plot_mode_maps(precoder: Precoder, aperture: Aperture, path: Union[str, Path],
                   d: Optional[float] = None, ncols: int = 4) -> Path:
    """Grid of phase maps, one panel per mode."""
    n = precoder.n_modes
    nrows = math.ceil(n / ncols)
    pitch = aperture.pitch
    k = int(round(aperture.radius / pitch)) + 1
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(nrows, ncols, figsize=(1.8 * ncols, 1.8 * nrows),
                                 squeeze=False)
        for ax in axes.flat:
            ax.set_axis_off()
        for ax, spec in zip(axes.flat, precoder.modes):
            img = np.full((2 * k + 1, 2 * k + 1), np.nan)
            phase = np.mod(np.angle(mode_values(spec, aperture, d=d)), 2 * np.pi)
            iy = np.rint(aperture.y / pitch).astype(int) + k
            ix = np.rint(aperture.x / pitch).astype(int) + k
            img[iy, ix] = phase
            ax.imshow(img, origin="lower", cmap="twilight", vmin=0, vmax=2 * np.pi,
                      interpolation="nearest")
            ax.set_title(spec.label, fontsize=7)
        fig.savefig(path)
        plt.close(fig)
    return Path(path)
