"""Capacity-versus-distance sweep comparing precoding schemes."""

import csv
import dataclasses
import json
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from holowalsh.capacity import capacity, epa, link_budget, waterfill
from holowalsh.channel import build_channel, channel_svd
from holowalsh.geometry import Aperture, sample_disk
from holowalsh.modes import (
    Precoder,
    build_mode_precoder,
    build_svd_precoder,
    gram_orthogonality,
    mode_values,
)

log = logging.getLogger(__name__)

__all__ = [
    "SCHEMES",
    "SweepConfig",
    "SweepRecord",
    "SweepResult",
    "log_sweep",
    "rayleigh_distance",
    "walsh_resolution",
    "scheme_precoder",
    "run_sweep",
    "emit_csv",
    "read_csv",
    "emit_metadata",
    "emit_mode_maps",
]

SCHEMES = (
    "svd_wf",
    "svd_epa",
    "oam_unfocused",
    "oam_focused",
    "walsh_radial",
    "walsh_angular",
    "walsh_polar",
)
CSV_HEADER = ("d_over_dr", "d_wavelengths", "scheme", "capacity_bits")


def log_sweep(d_min: float = 0.05, d_max: float = 10.0,
              n_points: Optional[int] = None,
              points_per_decade: Optional[float] = None) -> Tuple[float, ...]:
    """Log-spaced ``d / d_r`` ratios; 40 points over the range unless told otherwise."""
    if not 0 < d_min < d_max:
        raise ValueError(f"need 0 < d_min < d_max, got {d_min}, {d_max}")
    if n_points is None:
        if points_per_decade is None:
            n_points = 40
        else:
            n_points = max(2, int(round(points_per_decade * math.log10(d_max / d_min))) + 1)
    return tuple(float(v) for v in np.geomspace(d_min, d_max, n_points))


@dataclass(frozen=True)
class SweepConfig:
    r_t: float = 10.0
    r_r: float = 10.0
    pitch: float = 0.5
    snr_db: float = -20.0
    n_modes: int = 16
    schemes: Tuple[str, ...] = SCHEMES
    sweep: Tuple[float, ...] = field(default_factory=log_sweep)
    wavelength_m: float = 0.01
    threads: int = 1

    def __post_init__(self):
        object.__setattr__(self, "schemes", tuple(self.schemes))
        object.__setattr__(self, "sweep", tuple(float(v) for v in self.sweep))
        for name in ("r_t", "r_r", "pitch", "wavelength_m"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.n_modes < 1:
            raise ValueError("n_modes must be >= 1")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        bad = [s for s in self.schemes if s not in SCHEMES]
        if bad or not self.schemes:
            raise ValueError(f"unknown scheme(s) {bad}; valid: {', '.join(SCHEMES)}")
        ratios = np.asarray(self.sweep)
        if ratios.size == 0 or np.any(ratios <= 0) or np.any(np.diff(ratios) <= 0):
            raise ValueError("sweep ratios must be positive and strictly increasing")

    @classmethod
    def from_dict(cls, data: Dict) -> "SweepConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config key(s): {', '.join(sorted(unknown))}")
        return cls(**data)

    @classmethod
    def from_json(cls, path: Union[str, Path]) -> "SweepConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> Dict:
        d = dataclasses.asdict(self)
        d["schemes"] = list(self.schemes)
        d["sweep"] = list(self.sweep)
        return d


class SweepRecord(NamedTuple):
    d_over_dr: float
    d_wavelengths: float
    scheme: str
    capacity_bits: float


@dataclass
class SweepResult:
    records: List[SweepRecord]
    metadata: Dict = field(default_factory=dict)

    def capacities(self, scheme: str) -> np.ndarray:
        return np.array([r.capacity_bits for r in self.records if r.scheme == scheme])

    def ratios(self, scheme: Optional[str] = None) -> np.ndarray:
        scheme = scheme or self.records[0].scheme
        return np.array([r.d_over_dr for r in self.records if r.scheme == scheme])


def rayleigh_distance(r_t: float) -> float:
    """``r_t**2 / (2 lambda)`` in wavelengths."""
    return r_t * r_t / 2.0


def walsh_resolution(scheme: str, n_modes: int) -> Tuple[int, int]:
    """``(mu, nu)`` giving at least ``n_modes`` functions for a Walsh scheme."""
    bits = max(0, math.ceil(math.log2(n_modes)))
    if scheme == "walsh_radial":
        return bits, 0
    if scheme == "walsh_angular":
        return 0, bits
    if scheme == "walsh_polar":
        mu = (bits + 1) // 2
        return mu, bits - mu
    raise ValueError(f"{scheme!r} is not a Walsh scheme")


def scheme_precoder(scheme: str, tx: Aperture, n_modes: int,
                    d: Optional[float] = None) -> Precoder:
    if scheme in ("oam_unfocused", "oam_focused"):
        return build_mode_precoder(scheme, tx, n_modes, d=d)
    if scheme.startswith("walsh_"):
        mu, nu = walsh_resolution(scheme, n_modes)
        return build_mode_precoder("walsh", tx, n_modes, mu=mu, nu=nu)
    raise ValueError(f"{scheme!r} has no channel-independent precoder")


def _evaluate_point(ratio, config, tx, rx_plane, fixed):
    d = ratio * rayleigh_distance(config.r_t)
    rx = rx_plane.at(d)
    H = build_channel(tx, rx)
    budget = link_budget(config.snr_db, d)
    n = config.n_modes
    svd = channel_svd(H) if {"svd_wf", "svd_epa"} & set(config.schemes) else None

    out = []
    defects = {}
    for scheme in config.schemes:
        try:
            if scheme == "svd_wf":
                p = waterfill(budget.effective_gain * svd.singular_values ** 2).weights
                k = int(np.count_nonzero(p))
                F = build_svd_precoder(svd, k, tx.identifier)
                c = capacity(H, F, p[:k], budget)
            elif scheme == "svd_epa":
                F = build_svd_precoder(svd, n, tx.identifier)
                defects[scheme] = gram_orthogonality(F)
                c = capacity(H, F, epa(n), budget)
            elif scheme == "oam_focused":
                F = scheme_precoder(scheme, tx, n, d=d)
                c = capacity(H, F, epa(n), budget)
            else:
                c = capacity(H, fixed[scheme], epa(n), budget)
        except Exception as exc:
            raise type(exc)(f"d/d_r={ratio:g} (d={d:g} wavelengths), scheme {scheme}: {exc}") from exc
        out.append(SweepRecord(ratio, d, scheme, c))
    log.info("d/d_r=%.4g done", ratio)
    return out, defects


def run_sweep(config: SweepConfig) -> SweepResult:
    """Capacity of every requested scheme at every sweep distance.

    Records come out ordered by sweep point, then by scheme in config order,
    whatever the thread count.
    """
    t0 = time.time()
    tx = sample_disk(config.r_t, config.pitch, 0.0)
    rx_plane = sample_disk(config.r_r, config.pitch, 0.0)
    n = config.n_modes
    if n > len(tx):
        raise ValueError(f"n_modes={n} exceeds the {len(tx)} transmit samples")

    fixed = {s: scheme_precoder(s, tx, n)
             for s in config.schemes if s in ("oam_unfocused",) or s.startswith("walsh_")}

    def work(ratio):
        return _evaluate_point(ratio, config, tx, rx_plane, fixed)

    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            results = list(pool.map(work, config.sweep))
    else:
        results = [work(r) for r in config.sweep]

    records = [rec for recs, _ in results for rec in recs]

    defects = {}
    for scheme in config.schemes:
        if scheme in fixed:
            defects[scheme] = gram_orthogonality(fixed[scheme])
        elif scheme == "oam_focused":
            defects[scheme] = gram_orthogonality(
                scheme_precoder(scheme, tx, n, d=rayleigh_distance(config.r_t)))
        elif scheme == "svd_epa":
            defects[scheme] = max(d.get(scheme, 0.0) for _, d in results)

    from holowalsh import __version__

    metadata = {
        "config": config.to_dict(),
        "n_tx": len(tx),
        "n_rx": len(rx_plane),
        "rayleigh_distance_wavelengths": rayleigh_distance(config.r_t),
        "rayleigh_distance_m": rayleigh_distance(config.r_t) * config.wavelength_m,
        "near_far_boundary_d_over_dr": 1.0,
        "orthogonality_defects": defects,
        "elapsed_s": time.time() - t0,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "version": __version__,
    }
    return SweepResult(records, metadata)


def emit_csv(result: SweepResult, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in result.records:
            writer.writerow([repr(float(r.d_over_dr)), repr(float(r.d_wavelengths)),
                             r.scheme, repr(float(r.capacity_bits))])


def read_csv(path: Union[str, Path]) -> List[SweepRecord]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_HEADER:
            raise ValueError(f"unexpected header {header}")
        return [SweepRecord(float(a), float(b), s, float(c)) for a, b, s, c in reader]


def emit_metadata(result: SweepResult, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(result.metadata, fh, indent=2, sort_keys=True)
        fh.write("\n")


def emit_mode_maps(family: str, aperture: Aperture, directory: Union[str, Path],
                   n_modes: int = 16, d: Optional[float] = None,
                   mu: Optional[int] = None, nu: Optional[int] = None) -> List[Path]:
    """Write one ``x,y,phase_radians`` CSV per mode; phases lie in [0, 2pi)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    F = build_mode_precoder(family, aperture, n_modes, d=d, mu=mu, nu=nu)
    paths = []
    for spec in F.modes:
        phase = np.mod(np.angle(mode_values(spec, aperture, d=d)), 2 * np.pi)
        phase[phase >= 2 * np.pi] = 0.0
        path = directory / f"{spec.label}.csv"
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(("x", "y", "phase_radians"))
            for x, y, ph in zip(aperture.x, aperture.y, phase):
                writer.writerow((repr(float(x)), repr(float(y)), repr(float(ph))))
        paths.append(path)
    return paths
