"""Near-field capacity of disk apertures under SVD, OAM and polar Walsh precoding."""

from holowalsh.geometry import Aperture, SamplePoint, point_count, sample_disk
from holowalsh.channel import (
    ChannelMatrix,
    ChannelSVD,
    build_channel,
    channel_svd,
    green,
)
from holowalsh.modes import (
    ModeSpec,
    Precoder,
    build_mode_precoder,
    build_svd_precoder,
    gram_orthogonality,
    oam_focused_value,
    oam_unfocused_value,
    walsh_value,
)
from holowalsh.capacity import (
    LinkBudget,
    PowerAllocation,
    capacity,
    epa,
    link_budget,
    waterfill,
)
from holowalsh.experiment import (
    SweepConfig,
    SweepResult,
    emit_csv,
    emit_mode_maps,
    rayleigh_distance,
    run_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "Aperture", "SamplePoint", "point_count", "sample_disk",
    "ChannelMatrix", "ChannelSVD", "build_channel", "channel_svd", "green",
    "ModeSpec", "Precoder", "build_mode_precoder", "build_svd_precoder",
    "gram_orthogonality", "oam_focused_value", "oam_unfocused_value", "walsh_value",
    "LinkBudget", "PowerAllocation", "capacity", "epa", "link_budget", "waterfill",
    "SweepConfig", "SweepResult", "emit_csv", "emit_mode_maps",
    "rayleigh_distance", "run_sweep",
]
