"""Command line front end.

Three subcommands:

- ``spectrum``: transmission vs coupling detuning as CSV. ``--vary rf``
  writes one file per alphabet level, ``--vary interference`` one file per
  interferer fraction (0, 25, 50, 75, 100 percent of the configured field);
  both derive the file names from the ``--out`` prefix.
- ``calibrate``: run the pilot extremum search and report measured vs
  analytic readout shift as JSON. ``--pilots N`` repeats the measurement;
  with ``run.calibration_jitter`` enabled each pilot gets an independent
  Gaussian detuning error from the configured laser linewidth.
- ``ser``: symbol error rate as JSON lines, one record per calibration
  accuracy (``--receiver rydberg``) or per filter attenuation
  (``--receiver conventional``).

Every output embeds the config digest and the effective seed. For fixed
(config, seed, symbol count) the bytes are identical run to run, whatever
``--workers`` says. All accuracies of one ``ser`` run share the same random
substreams, so accuracy comparisons are paired rather than independent.

Exit codes: 0 success, 2 usage, 3 invalid config or parameter, 4 numerical
failure, 5 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from .config import config_digest, load_config
from .constants import TWO_PI
from .errors import ConfigError, InvalidParameterError, NumericalError
from .link import (
    ConventionalRxSpec,
    calibration_reference,
    conventional_ser,
    estimate_ser_rydberg,
    interference_energy_after_filter,
    symbol_energy,
    thermal_noise_energy,
)
from .spectroscopy import _ENGINE_ALIASES, default_delta_c_grid, sweep_spectrum

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_NUMERICAL = 4
EXIT_IO = 5

_CALIBRATE_STREAM = 0x43414C  # keeps pilot jitter off the ser substreams
_INTERFERENCE_FRACTIONS = (0.0, 0.25, 0.5, 0.75, 1.0)


def _write_text(path, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _variant_path(out: str, tag: str) -> str:
    root, ext = os.path.splitext(out)
    return f"{root}_{tag}{ext or '.csv'}"


def _write_csv(path, trace, digest: str, seed: int, extra: dict) -> None:
    lines = [f"# config_digest={digest}", f"# seed={seed}"]
    for key, value in extra.items():
        lines.append(f"# {key}={float(value)!r}")
    lines.append("delta_c_rad_s,transmission")
    for x, t in zip(trace.delta_c, trace.transmission):
        lines.append(f"{float(x)!r},{float(t)!r}")
    _write_text(path, "\n".join(lines) + "\n")


def _cmd_spectrum(args) -> int:
    cfg = load_config(args.config)
    seed = cfg.seed if args.seed is None else args.seed
    digest = config_digest(cfg)
    grid = default_delta_c_grid(cfg.sweep_half_span, cfg.sweep_points)

    if args.vary == "none":
        trace = sweep_spectrum(cfg.ladder, grid, args.engine)
        _write_csv(args.out, trace, digest, seed, {})
        return EXIT_OK

    if args.out is None:
        print("error: --vary modes write multiple files and need --out", file=sys.stderr)
        return EXIT_USAGE

    if args.vary == "rf":
        for k, field in enumerate(cfg.link.field_levels):
            trace = sweep_spectrum(cfg.ladder, grid, args.engine, rf_field=field)
            _write_csv(
                _variant_path(args.out, f"rf{k}"),
                trace,
                digest,
                seed,
                {"rf_field_v_per_m": field},
            )
        return EXIT_OK

    for k, frac in enumerate(_INTERFERENCE_FRACTIONS):
        e_i = frac * cfg.ladder.interference_field
        trace = sweep_spectrum(cfg.ladder, grid, args.engine, interference_field=e_i)
        _write_csv(
            _variant_path(args.out, f"int{k}"),
            trace,
            digest,
            seed,
            {"interference_field_v_per_m": e_i},
        )
    return EXIT_OK


def _cmd_calibrate(args) -> int:
    if args.pilots < 1:
        raise InvalidParameterError("--pilots must be >= 1")
    cfg = load_config(args.config)
    seed = cfg.seed if args.seed is None else args.seed
    digest = config_digest(cfg)
    grid = default_delta_c_grid(cfg.sweep_half_span, cfg.sweep_points)

    op = calibration_reference(
        cfg.ladder, cfg.link, cfg.noise, engine=args.engine, delta_c_grid=grid
    )
    pilots = np.full(args.pilots, op.true_shift)
    if cfg.calibration_jitter:
        sigma = TWO_PI * cfg.laser_fwhm / math.sqrt(8.0 * math.log(2.0))
        rng = np.random.Generator(
            np.random.Philox(np.random.SeedSequence(entropy=seed, spawn_key=(_CALIBRATE_STREAM,)))
        )
        pilots = pilots + sigma * rng.standard_normal(args.pilots)
    mean_shift = float(np.mean(pilots))

    if op.analytic_shift != 0.0:
        relative = (mean_shift - op.analytic_shift) / abs(op.analytic_shift)
    else:
        relative = None
    record = {
        "analytic_shift_rad_s": op.analytic_shift,
        "config_digest": digest,
        "jitter_enabled": bool(cfg.calibration_jitter),
        "mean_extremum_rad_s": mean_shift,
        "n_pilots": int(args.pilots),
        "pilot_extrema_rad_s": [float(v) for v in pilots],
        "relative_difference": relative,
        "seed": int(seed),
    }
    _write_text(args.out, json.dumps(record, sort_keys=True, indent=2) + "\n")
    return EXIT_OK


def _cmd_ser(args) -> int:
    cfg = load_config(args.config)
    seed = cfg.seed if args.seed is None else args.seed
    n_symbols = cfg.n_symbols if args.symbols is None else args.symbols
    if n_symbols < 1:
        raise InvalidParameterError("--symbols must be >= 1")
    if args.workers < 1:
        raise InvalidParameterError("--workers must be >= 1")
    digest = config_digest(cfg)

    records = []
    if args.receiver == "rydberg":
        grid = default_delta_c_grid(cfg.sweep_half_span, cfg.sweep_points)
        for acc in cfg.accuracies:
            est = estimate_ser_rydberg(
                cfg.ladder,
                cfg.link,
                cfg.noise,
                n_symbols,
                seed,
                accuracy=acc,
                engine=args.engine,
                workers=args.workers,
                delta_c_grid=grid,
            )
            records.append(
                {
                    "receiver": "rydberg",
                    "parameter": float(acc),
                    "ser": est.ser,
                    "ci_low": est.ci_low,
                    "ci_high": est.ci_high,
                    "n_symbols": est.n_symbols,
                    "seed": int(seed),
                    "config_digest": digest,
                }
            )
    else:
        es = symbol_energy(cfg.link, cfg.rx)
        n0 = thermal_noise_energy(cfg.rx.temperature)
        for att in cfg.attenuations_db:
            rx = ConventionalRxSpec(
                filter_attenuation_db=att,
                antenna_gain=cfg.rx.antenna_gain,
                temperature=cfg.rx.temperature,
                impedance=cfg.rx.impedance,
            )
            n_i = interference_energy_after_filter(
                cfg.link.interference_field,
                cfg.link.interference_carrier,
                cfg.link.symbol_duration,
                rx,
            )
            ser = conventional_ser(cfg.link.m_levels, es, n0 + n_i)
            records.append(
                {
                    "receiver": "conventional",
                    "parameter": float(att),
                    "ser": ser,
                    "ci_low": ser,
                    "ci_high": ser,
                    "n_symbols": 0,
                    "seed": int(seed),
                    "config_digest": digest,
                }
            )

    _write_text(args.out, "".join(json.dumps(r, sort_keys=True) + "\n" for r in records))
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", required=True, help="scenario TOML file")
    p.add_argument("--seed", type=int, default=None, help="override run.seed")
    p.add_argument(
        "--engine",
        default="weakprobe",
        choices=sorted(set(_ENGINE_ALIASES)),
        help="coherence engine (default: weakprobe)",
    )
    p.add_argument("--out", default=None, help="output path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rydlink",
        description="Rydberg-ladder RF receiver: spectra, calibration, error rates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_spec = sub.add_parser("spectrum", help="sweep transmission vs coupling detuning")
    _add_common(p_spec)
    p_spec.add_argument(
        "--vary",
        default="none",
        choices=("none", "rf", "interference"),
        help="write one CSV per alphabet level or interferer fraction",
    )
    p_spec.set_defaults(func=_cmd_spectrum)

    p_cal = sub.add_parser("calibrate", help="locate the shifted readout extremum")
    _add_common(p_cal)
    p_cal.add_argument("--pilots", type=int, default=1, help="pilot repetitions (default: 1)")
    p_cal.set_defaults(func=_cmd_calibrate)

    p_ser = sub.add_parser("ser", help="symbol error rates")
    _add_common(p_ser)
    p_ser.add_argument(
        "--receiver",
        default="rydberg",
        choices=("rydberg", "conventional"),
        help="which receiver model to evaluate (default: rydberg)",
    )
    p_ser.add_argument("--symbols", type=int, default=None, help="override run.n_symbols")
    p_ser.add_argument("--workers", type=int, default=1, help="Monte Carlo worker threads")
    p_ser.set_defaults(func=_cmd_ser)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ConfigError, InvalidParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
