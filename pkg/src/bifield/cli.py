"""Command line interface.

Six scenarios, each driven by an optional JSON config file and writing its
results into an output directory: ``verify`` (the check suite), ``propagate``
(packet evolution), ``kernel`` (commutator kernels), ``blipfield`` (the field
profile of one broadband excitation), ``energy`` (spectral energy of a
packet), and ``counterexample`` (the mode-mixing correspondence gap).

Exit codes: 0 on success, 1 when the verification suite reports failures,
2 on configuration errors. Configs are validated and all numbers computed
before anything is written, so a bad config never leaves partial outputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .dynamics import (
    BogoliubovBlock,
    EvolutionSide,
    bogoliubov_counterexample,
    dispersion_free_check,
    evolve_state,
)
from .errors import ConfigError, GridError
from .figures import (
    render_energy_figure,
    render_field_profile_figure,
    render_kernel_figure,
    render_mixing_figure,
    render_propagation_figure,
    render_report_figure,
)
from .grid import (
    DEFAULT_CONTEXT,
    Grid,
    inv_sqrt_abs_k,
    make_grid,
    sqrt_abs_k,
    unit_weight,
)
from .operators import blip_field_profile, commutator_kernel, energy_expectation, hamiltonian_expectation
from .report import write_checks_csv, write_curve_csv, write_report_json
from .states import (
    BIO_LOCAL_TAG,
    BLIP_TAG,
    LOCAL_TAG,
    ModeLabel,
    gaussian_momentum_packet,
    gaussian_position_packet,
    normalized,
    superpose,
)
from .verify import DEFAULT_DELTA_K, DEFAULT_N_MODES, run_verification

_WEIGHTS = {
    "unit": unit_weight,
    "sqrt_abs_k": sqrt_abs_k,
    "inv_sqrt_abs_k": inv_sqrt_abs_k,
}

_FAMILIES = {
    "blip": BLIP_TAG,
    "local": LOCAL_TAG,
    "bio_local": BIO_LOCAL_TAG,
}


# --- config plumbing ----------------------------------------------------------


def _load_config(path) -> dict:
    if path is None:
        return {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return data


def _check_keys(config: dict, allowed, scenario: str):
    extra = sorted(set(config) - set(allowed))
    if extra:
        raise ConfigError(f"unknown config keys for {scenario}: {', '.join(extra)}")


def _get_number(config, key, default, kind=float, minimum=None):
    value = config.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"config key {key!r} must be a number, got {value!r}")
    value = kind(value)
    if minimum is not None and value < minimum:
        raise ConfigError(f"config key {key!r} must be >= {minimum}, got {value!r}")
    return value


def _get_choice(config, key, default, choices):
    value = config.get(key, default)
    if value not in choices:
        raise ConfigError(
            f"config key {key!r} must be one of {sorted(map(str, choices))}, got {value!r}"
        )
    return value


def _grid_from_config(config) -> Grid:
    n_modes = _get_number(config, "n_modes", DEFAULT_N_MODES, kind=int, minimum=2)
    delta_k = _get_number(config, "delta_k", DEFAULT_DELTA_K, kind=float)
    try:
        return make_grid(n_modes, delta_k)
    except GridError as exc:
        raise ConfigError(str(exc))


def _resolve_seed(args, config) -> int:
    if args.seed is not None:
        return int(args.seed)
    return _get_number(config, "seed", 0, kind=int)


def _site_index(config, key, grid, default):
    index = _get_number(config, key, default, kind=int)
    if not 0 <= index < grid.n_modes:
        raise ConfigError(f"config key {key!r} must be in [0, {grid.n_modes}), got {index}")
    return index


def _ensure_out(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# --- scenarios ----------------------------------------------------------------


def _run_verify(args) -> int:
    config = _load_config(args.config)
    _check_keys(config, {"n_modes", "delta_k", "seed", "images", "tolerances"}, "verify")
    grid = _grid_from_config(config)
    seed = _resolve_seed(args, config)
    images = _get_number(config, "images", 120, kind=int, minimum=1)
    overrides = config.get("tolerances", {})
    if not isinstance(overrides, dict):
        raise ConfigError("config key 'tolerances' must map check ids to numbers")
    for key, value in overrides.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"tolerance override for {key!r} must be a number")

    report = run_verification(grid, seed=seed, images=images, tolerance_overrides=overrides)

    out = _ensure_out(args)
    write_report_json(report, out / "report.json")
    write_checks_csv(report, out / "checks.csv")
    if args.figures:
        render_report_figure(report, out / "report.png")
    for check in sorted(report.checks, key=lambda c: c.check_id):
        status = "pass" if check.passed else "FAIL"
        print(f"{status}  {check.check_id}  max_error={check.max_error:.3e}  tol={check.tolerance:.1e}")
    print(f"{report.total - report.failed}/{report.total} checks passed")
    return 1 if report.failed else 0


def _branch_list(config):
    raw = config.get("s", 1)
    if isinstance(raw, list):
        branches = raw
    else:
        branches = [raw]
    for s in branches:
        if s not in (1, -1):
            raise ConfigError(f"config key 's' entries must be +1 or -1, got {s!r}")
    if not branches:
        raise ConfigError("config key 's' must not be an empty list")
    return [int(s) for s in branches]


def _run_propagate(args) -> int:
    config = _load_config(args.config)
    _check_keys(
        config,
        {"n_modes", "delta_k", "family", "s", "polarization", "center", "width", "times", "seed"},
        "propagate",
    )
    grid = _grid_from_config(config)
    L = grid.domain_length
    family = _get_choice(config, "family", "blip", tuple(_FAMILIES))
    tag = _FAMILIES[family]
    branches = _branch_list(config)
    polarization = _get_choice(config, "polarization", 1, (1, 2))
    center = _get_number(config, "center", L / 2.0)
    width = _get_number(config, "width", L / 40.0, minimum=np.nextafter(0.0, 1.0))
    times = config.get("times", [0.0, L / 8.0, L / 4.0])
    if not isinstance(times, list) or not times:
        raise ConfigError("config key 'times' must be a non-empty list of numbers")
    for t in times:
        if isinstance(t, bool) or not isinstance(t, (int, float)):
            raise ConfigError(f"config key 'times' entries must be numbers, got {t!r}")
    times = [float(t) for t in times]

    packets = [
        gaussian_position_packet(grid, tag, ModeLabel(s, polarization), center, width)
        for s in branches
    ]
    state = superpose(packets, [1.0 / len(packets)] * len(packets))
    side = EvolutionSide.UNDER_H_BIO if family == "bio_local" else EvolutionSide.UNDER_H

    rows = []
    profiles = []
    for t in times:
        evolved = evolve_state(state, t, side, DEFAULT_CONTEXT)
        combined = np.zeros(grid.n_modes, dtype=complex)
        for mode, values in evolved.components[0].amplitudes.items():
            combined = combined + values
            for m in range(grid.n_modes):
                rows.append(
                    (
                        t,
                        float(grid.x_values[m]),
                        mode.s,
                        mode.polarization,
                        float(values[m].real),
                        float(values[m].imag),
                        float(np.abs(values[m]) ** 2),
                    )
                )
        profiles.append((t, combined))
    shape = dispersion_free_check(state, times[-1], DEFAULT_CONTEXT)

    out = _ensure_out(args)
    columns = list(zip(*rows))
    write_curve_csv(
        out / "propagate.csv",
        [
            ("t", columns[0]),
            ("x", columns[1]),
            ("s", columns[2]),
            ("lambda", columns[3]),
            ("re", columns[4]),
            ("im", columns[5]),
            ("abs2", columns[6]),
        ],
    )
    summary = {
        "grid": {"n_modes": grid.n_modes, "delta_k": grid.delta_k},
        "family": family,
        "branches": branches,
        "polarization": polarization,
        "center": center,
        "width": width,
        "times": times,
        "mixed_provenance": bool(state.is_mixed_provenance),
        "two_sided": bool(shape.is_two_sided),
        "max_branch_error": shape.max_branch_error,
        "combined_error": shape.combined_error,
        "shift_samples": shape.shift_samples,
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    if args.figures:
        render_propagation_figure(grid.x_values, profiles, out / "propagate.png")
    print(
        f"propagated {family} packet over {len(times)} times; "
        f"max branch shape error {shape.max_branch_error:.3e}"
    )
    return 0


def _run_kernel(args) -> int:
    config = _load_config(args.config)
    _check_keys(config, {"n_modes", "delta_k", "weight_1", "weight_2", "s"}, "kernel")
    grid = _grid_from_config(config)
    name_1 = _get_choice(config, "weight_1", "sqrt_abs_k", tuple(_WEIGHTS))
    name_2 = _get_choice(config, "weight_2", "sqrt_abs_k", tuple(_WEIGHTS))
    s = _get_choice(config, "s", 1, (1, -1))

    kernel = commutator_kernel(_WEIGHTS[name_1], _WEIGHTS[name_2], s, grid)
    references = {
        f"({name_1}, {name_2})": kernel,
        "(unit, unit)": commutator_kernel(unit_weight, unit_weight, s, grid),
        "(sqrt_abs_k, inv_sqrt_abs_k)": commutator_kernel(sqrt_abs_k, inv_sqrt_abs_k, s, grid),
    }

    out = _ensure_out(args)
    write_curve_csv(
        out / "kernel.csv",
        [
            ("displacement", grid.x_values),
            ("re", kernel.real),
            ("im", kernel.imag),
            ("abs", np.abs(kernel)),
        ],
    )
    if args.figures:
        L = grid.domain_length
        centered = np.argsort(((grid.x_values + L / 2.0) % L) - L / 2.0)
        displacements = (((grid.x_values + L / 2.0) % L) - L / 2.0)[centered]
        render_kernel_figure(
            displacements,
            {label: values[centered] for label, values in references.items()},
            out / "kernel.png",
            delta_x=grid.delta_x,
        )
    print(
        f"kernel ({name_1}, {name_2}) on {grid.n_modes} modes: "
        f"peak {np.max(np.abs(kernel)):.6g}, neighbor {np.abs(kernel[1]):.6g}"
    )
    return 0


def _run_blipfield(args) -> int:
    config = _load_config(args.config)
    _check_keys(config, {"n_modes", "delta_k", "x0_index", "s", "polarization"}, "blipfield")
    grid = _grid_from_config(config)
    x0_index = _site_index(config, "x0_index", grid, grid.n_modes // 2)
    s = _get_choice(config, "s", 1, (1, -1))
    polarization = _get_choice(config, "polarization", 1, (1, 2))

    profile = blip_field_profile(grid, x0_index, s, polarization, DEFAULT_CONTEXT)

    out = _ensure_out(args)
    write_curve_csv(
        out / "blipfield.csv",
        [
            ("x", grid.x_values),
            ("re", profile.real),
            ("im", profile.imag),
            ("abs", np.abs(profile)),
        ],
    )
    if args.figures:
        render_field_profile_figure(
            grid.x_values, profile, out / "blipfield.png", x0=float(grid.x_values[x0_index])
        )
    print(
        f"field profile of a broadband excitation at x = {grid.x_values[x0_index]:.6g}: "
        f"peak {np.max(np.abs(profile)):.6g}"
    )
    return 0


def _run_energy(args) -> int:
    config = _load_config(args.config)
    _check_keys(
        config, {"n_modes", "delta_k", "center_k", "width_k", "s", "polarization"}, "energy"
    )
    grid = _grid_from_config(config)
    band_edge = grid.n_modes * grid.delta_k / 2.0
    center_k = _get_number(config, "center_k", min(3.0, 0.5 * band_edge))
    width_k = _get_number(config, "width_k", grid.delta_k * 8.0, minimum=np.nextafter(0.0, 1.0))
    s = _get_choice(config, "s", 1, (1, -1))
    polarization = _get_choice(config, "polarization", 1, (1, 2))

    mode = ModeLabel(s, polarization)
    state = normalized(gaussian_momentum_packet(grid, mode, center_k, width_k), product="bio")
    psi = state.canonical[mode]
    density = (
        DEFAULT_CONTEXT.hbar * DEFAULT_CONTEXT.c * np.abs(grid.k_values) * np.abs(psi) ** 2
    )
    energy = energy_expectation(state, DEFAULT_CONTEXT)
    signed = hamiltonian_expectation(state, DEFAULT_CONTEXT)

    out = _ensure_out(args)
    write_curve_csv(
        out / "energy.csv",
        [
            ("k", grid.k_values),
            ("abs2", np.abs(psi) ** 2),
            ("energy_density", density),
        ],
    )
    payload = {
        "grid": {"n_modes": grid.n_modes, "delta_k": grid.delta_k},
        "center_k": center_k,
        "width_k": width_k,
        "s": s,
        "polarization": polarization,
        "energy": energy,
        "hamiltonian": signed,
    }
    (out / "energy.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    if args.figures:
        render_energy_figure(grid.k_values, density, out / "energy.png")
    print(f"energy {energy:.9g}, signed generator {signed:.9g}")
    return 0


def _run_counterexample(args) -> int:
    config = _load_config(args.config)
    _check_keys(
        config,
        {"n_modes", "delta_k", "mode_indices", "t1", "b2_max", "n_points", "s", "polarization", "x_index"},
        "counterexample",
    )
    grid = _grid_from_config(config)
    indices = config.get("mode_indices", [grid.n_modes - 1])
    if not isinstance(indices, list) or not indices:
        raise ConfigError("config key 'mode_indices' must be a non-empty list of integers")
    cleaned = []
    for value in indices:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"mode index {value!r} is not an integer")
        if not 0 <= value < grid.n_modes:
            raise ConfigError(f"mode index {value} out of range [0, {grid.n_modes})")
        cleaned.append(value)
    t1 = _get_number(config, "t1", 0.3)
    b2_max = _get_number(config, "b2_max", float(np.sinh(1.0)), minimum=0.0)
    n_points = _get_number(config, "n_points", 9, kind=int, minimum=2)
    s = _get_choice(config, "s", 1, (1, -1))
    polarization = _get_choice(config, "polarization", 1, (1, 2))
    x_index = _site_index(config, "x_index", grid, 0)

    mode = ModeLabel(s, polarization)
    k_set = grid.k_values[cleaned]
    rms_gap = float(np.sqrt(np.mean((np.sqrt(np.abs(k_set)) - 1.0 / np.sqrt(np.abs(k_set))) ** 2)))
    b2_values = np.linspace(0.0, b2_max, n_points)
    distances = []
    closed = []
    for b2 in b2_values:
        b1 = float(np.sqrt(1.0 + b2**2))
        block = BogoliubovBlock(b1, float(b2), tuple(cleaned))
        result = bogoliubov_counterexample(grid, block, t1, mode=mode, x_index=x_index)
        distances.append(result.norm)
        closed.append(float(b2) * rms_gap)

    out = _ensure_out(args)
    write_curve_csv(
        out / "counterexample.csv",
        [
            ("b1", [float(np.sqrt(1.0 + b**2)) for b in b2_values]),
            ("b2", b2_values),
            ("distance", distances),
            ("closed_form", closed),
        ],
    )
    payload = {
        "grid": {"n_modes": grid.n_modes, "delta_k": grid.delta_k},
        "mode_indices": cleaned,
        "t1": t1,
        "b2_max": float(b2_max),
        "distance_at_b2_max": distances[-1],
        "closed_form_at_b2_max": closed[-1],
        "max_deviation_from_closed_form": float(
            np.max(np.abs(np.asarray(distances) - np.asarray(closed)))
        ),
    }
    (out / "counterexample.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    if args.figures:
        render_mixing_figure(b2_values, distances, closed, out / "counterexample.png")
    print(
        f"mixing distance grows from {distances[0]:.3e} to {distances[-1]:.6g} "
        f"over b2 in [0, {b2_max:g}]"
    )
    return 0


# --- parser -------------------------------------------------------------------


_SCENARIOS = {
    "verify": (_run_verify, "run the numerical check suite and write a report"),
    "propagate": (_run_propagate, "evolve a Gaussian packet and record its profiles"),
    "kernel": (_run_kernel, "tabulate an equal-time commutator kernel"),
    "blipfield": (_run_blipfield, "field profile generated by one broadband excitation"),
    "energy": (_run_energy, "spectral energy of a momentum-space packet"),
    "counterexample": (_run_counterexample, "sweep the mode-mixing correspondence gap"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bifield",
        description="biorthogonal field toolbox: verification suite and scenario runners",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (handler, help_text) in _SCENARIOS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", default=None, help="JSON configuration file")
        p.add_argument("--out", default=".", help="output directory (created if missing)")
        p.add_argument("--seed", type=int, default=None, help="random seed, overrides the config")
        group = p.add_mutually_exclusive_group()
        group.add_argument(
            "--figures",
            dest="figures",
            action="store_true",
            default=True,
            help="render PNG figures next to the data files (default)",
        )
        group.add_argument(
            "--no-figures", dest="figures", action="store_false", help="skip figure rendering"
        )
        p.set_defaults(handler=handler)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry_point():
    raise SystemExit(main())
