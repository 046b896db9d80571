"""Command line entry point: ``holowalsh sweep | modes | validate``."""

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from holowalsh.capacity import capacity, link_budget
from holowalsh.channel import build_channel, channel_svd, write_channel_csv
from holowalsh.experiment import (
    SCHEMES,
    SweepConfig,
    emit_csv,
    emit_metadata,
    emit_mode_maps,
    log_sweep,
    rayleigh_distance,
    run_sweep,
    scheme_precoder,
    walsh_resolution,
)
from holowalsh.geometry import sample_disk
from holowalsh.modes import (
    build_mode_precoder,
    build_svd_precoder,
    continuous_walsh_gram,
    gram_orthogonality,
    oam_angular_gram,
)

log = logging.getLogger("holowalsh")

MODE_FAMILIES = ("oam_unfocused", "oam_focused", "walsh_radial", "walsh_angular", "walsh_polar")


def _scheme_list(text):
    names = [s.strip() for s in text.split(",") if s.strip()]
    bad = [s for s in names if s not in SCHEMES]
    if bad or not names:
        raise argparse.ArgumentTypeError(
            f"invalid scheme(s) {', '.join(bad) or '(none)'}; valid schemes: {', '.join(SCHEMES)}")
    return tuple(names)


def _positive(kind):
    def parse(text):
        value = kind(text)
        if not value > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return value
    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="holowalsh",
        description="Near-field disk-aperture capacity under SVD, OAM and polar Walsh precoders.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="capacity versus d/d_r for each scheme")
    sw.add_argument("--config", type=Path, help="flat JSON file with SweepConfig fields")
    sw.add_argument("--out", type=Path, default=Path("capacity_sweep.csv"))
    sw.add_argument("--schemes", type=_scheme_list)
    sw.add_argument("--snr-db", type=float)
    sw.add_argument("--radius", type=_positive(float), help="Tx and Rx radius in wavelengths")
    sw.add_argument("--modes", type=_positive(int), help="number of modes N")
    sw.add_argument("--points-per-decade", type=_positive(float))
    sw.add_argument("--d-min", type=_positive(float), help="smallest d/d_r")
    sw.add_argument("--d-max", type=_positive(float), help="largest d/d_r")
    sw.add_argument("--pitch", type=_positive(float))
    sw.add_argument("--threads", type=_positive(int))
    sw.add_argument("--plot", action="store_true", help="also write <out>.png")
    sw.add_argument("--dump-channel", type=Path, metavar="DIR",
                    help="write each channel matrix as CSV into DIR")

    md = sub.add_parser("modes", help="dump per-mode phase maps as CSV")
    md.add_argument("--family", choices=MODE_FAMILIES + ("all",), default="all")
    md.add_argument("--radius", type=_positive(float), default=5.0)
    md.add_argument("--pitch", type=_positive(float), default=0.5)
    md.add_argument("--distance", type=_positive(float), default=20.0,
                    help="focal distance for focused OAM, in wavelengths")
    md.add_argument("--modes", type=_positive(int), default=16)
    md.add_argument("--out-dir", type=Path, default=Path("mode_maps"))
    md.add_argument("--plot", action="store_true", help="also write one PNG per family")

    va = sub.add_parser("validate", help="orthogonality and invariant checks")
    va.add_argument("--radius", type=_positive(float), default=10.0)
    va.add_argument("--pitch", type=_positive(float), default=0.5)
    va.add_argument("--modes", type=_positive(int), default=16)
    va.add_argument("--snr-db", type=float, default=-20.0)
    return parser


def _sweep_config(args) -> SweepConfig:
    base = SweepConfig.from_json(args.config) if args.config else SweepConfig()
    over = base.to_dict()
    if args.schemes is not None:
        over["schemes"] = args.schemes
    if args.snr_db is not None:
        over["snr_db"] = args.snr_db
    if args.radius is not None:
        over["r_t"] = over["r_r"] = args.radius
    if args.modes is not None:
        over["n_modes"] = args.modes
    if args.pitch is not None:
        over["pitch"] = args.pitch
    if args.threads is not None:
        over["threads"] = args.threads
    if any(v is not None for v in (args.points_per_decade, args.d_min, args.d_max)):
        d_min = args.d_min if args.d_min is not None else min(over["sweep"])
        d_max = args.d_max if args.d_max is not None else max(over["sweep"])
        if args.points_per_decade is None:
            over["sweep"] = log_sweep(d_min, d_max, n_points=len(over["sweep"]))
        else:
            over["sweep"] = log_sweep(d_min, d_max, points_per_decade=args.points_per_decade)
    return SweepConfig.from_dict(over)


def cmd_sweep(args) -> int:
    config = _sweep_config(args)
    result = run_sweep(config)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    emit_csv(result, args.out)
    emit_metadata(result, args.out.with_suffix(".json"))
    print(f"wrote {len(result.records)} records to {args.out}")
    if args.plot:
        from holowalsh.plotting import plot_capacity
        png = plot_capacity(result, args.out.with_suffix(".png"))
        print(f"wrote {png}")
    if args.dump_channel:
        args.dump_channel.mkdir(parents=True, exist_ok=True)
        tx = sample_disk(config.r_t, config.pitch, 0.0)
        for ratio in config.sweep:
            d = ratio * rayleigh_distance(config.r_t)
            H = build_channel(tx, sample_disk(config.r_r, config.pitch, d))
            write_channel_csv(H, args.dump_channel / f"H_d_over_dr_{ratio:.6g}.csv")
        print(f"wrote {len(config.sweep)} channel matrices to {args.dump_channel}")
    return 0


def cmd_modes(args) -> int:
    aperture = sample_disk(args.radius, args.pitch)
    families = MODE_FAMILIES if args.family == "all" else (args.family,)
    for fam in families:
        kwargs = {}
        if fam.startswith("walsh_"):
            mu, nu = walsh_resolution(fam, args.modes)
            kwargs = dict(family="walsh", mu=mu, nu=nu)
        else:
            kwargs = dict(family=fam, d=args.distance if fam == "oam_focused" else None)
        paths = emit_mode_maps(aperture=aperture, directory=args.out_dir / fam,
                               n_modes=args.modes, **kwargs)
        print(f"{fam}: wrote {len(paths)} phase maps to {args.out_dir / fam}")
        if args.plot:
            from holowalsh.plotting import plot_mode_maps
            F = build_mode_precoder(tx=aperture, n_modes=args.modes, **kwargs)
            png = plot_mode_maps(F, aperture, args.out_dir / f"{fam}.png", d=kwargs.get("d"))
            print(f"{fam}: wrote {png}")
    return 0


def cmd_validate(args) -> int:
    n = args.modes
    tx = sample_disk(args.radius, args.pitch, 0.0)
    d = rayleigh_distance(args.radius)
    H = build_channel(tx, sample_disk(args.radius, args.pitch, d))
    svd = channel_svd(H)
    checks = []

    print(f"aperture radius {args.radius:g}, pitch {args.pitch:g}: N_t = N_r = {len(tx)}")
    print(f"channel at d = d_r = {d:g} wavelengths")
    print("discrete Gram defects max|F^H F - I| off-diagonal:")
    precoders = {"svd": build_svd_precoder(svd, n, tx.identifier)}
    for fam in MODE_FAMILIES:
        precoders[fam] = scheme_precoder(fam, tx, n, d=d)
    for name, F in precoders.items():
        print(f"  {name:<14s} {gram_orthogonality(F):.3e}")
    checks.append(("SVD precoder Gram defect <= 1e-10",
                   gram_orthogonality(precoders["svd"]) <= 1e-10))

    mu, nu = walsh_resolution("walsh_polar", n)
    walsh_err = np.abs(continuous_walsh_gram(mu, nu) - np.eye(2 ** (mu + nu))).max()
    checks.append((f"continuous polar Walsh Gram (mu={mu}, nu={nu}) within 1e-2 "
                   f"[err {walsh_err:.2e}]", walsh_err <= 1e-2))
    oam_err = np.abs(oam_angular_gram(n) - np.eye(n)).max()
    checks.append((f"OAM angular orthogonality within 1e-10 [err {oam_err:.2e}]",
                   oam_err <= 1e-10))

    recon = svd.left_vectors * svd.singular_values @ svd.right_vectors.conj().T
    rel = np.linalg.norm(H.entries - recon) / np.linalg.norm(H.entries)
    checks.append((f"SVD reconstruction <= 1e-8 relative [err {rel:.2e}]", rel <= 1e-8))

    one = sample_disk(0.1, 0.5, 0.0)
    H1 = build_channel(one, one.at(d))
    c1 = capacity(H1, np.ones((1, 1)), [1.0], link_budget(args.snr_db, d))
    expected = np.log2(1 + 10 ** (args.snr_db / 10))
    checks.append((f"single-element link capacity equals log2(1 + SNR) "
                   f"[{c1:.12f} vs {expected:.12f}]", abs(c1 - expected) <= 1e-12))

    print("checks:")
    for text, ok in checks:
        print(f"  [{'PASS' if ok else 'FAIL'}] {text}")
    return 0 if all(ok for _, ok in checks) else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")
    handler = {"sweep": cmd_sweep, "modes": cmd_modes, "validate": cmd_validate}[args.command]
    try:
        return handler(args)
    except (ValueError, OSError, ArithmeticError, RuntimeError) as exc:
        print(f"holowalsh: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
