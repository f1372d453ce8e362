"""Command-line front end: config-driven spectrum, coupling-extraction, and
gate-simulation jobs emitting CSV/JSON datasets.

Config files are flat INI key-value sections ([circuit] plus one job
section); all energies are given in GHz and converted to rad/s internally.
Emitted CSV columns are in GHz (frequencies) and ns (times), with the 2*pi
convention stated in the header.  Outputs are deterministic: identical
configs produce bit-identical files.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .circuit import ChargeBasis, CircuitParams, TWO_PI_GHZ, InvalidArgumentError
from .coupled import (
    assemble_full,
    coupling_matrix_elements,
    default_composite,
    low_energy_model,
)
from .spectra import classify_parity, eigendecompose, ppq_spectrum, transmon_spectrum
from .sw import (
    ResonanceError,
    SubspaceMismatchError,
    analytic_effective_hamiltonian,
    effective_hamiltonian_numeric,
    error_coupling_coefficients,
    zz_coefficients,
)
from . import gates as gates_mod

SCHEMA_VERSION = "1"

GHZ = TWO_PI_GHZ  # rad/s per GHz


class ConfigError(ValueError):
    """Invalid or incomplete job configuration."""


_CIRCUIT_KEYS = {
    "e_j_t": (float, None),
    "e_c_t": (float, None),
    "e_j_p": (float, None),
    "e_c_p": (float, None),
    "e_c_c": (float, 0.0),
    "n_g_t": (float, 0.0),
    "n_g_p": (float, 0.0),
    "flux_ext": (float, 0.0),
    "eps_x": (float, 0.0),
    "eps_y": (float, 0.0),
}

_SPECTRUM_KEYS = {
    "system": (str, "coupled"),
    "sweep": (str, "flux_ext"),
    "start": (float, None),
    "stop": (float, None),
    "points": (int, None),
    "levels": (int, 6),
    "cutoff": (int, 12),
    "dump_states": (str, ""),
}

_SW_KEYS = {
    "sweep": (str, "flux_ext"),
    "start": (float, None),
    "stop": (float, None),
    "points": (int, None),
    "cutoff": (int, 30),
    "composite_cutoff": (int, 12),
    "numeric": (str, "true"),
}

_GATE_KEYS = {
    "gate": (str, "cz"),
    "phi": (float, float(np.pi)),
    "angle": (float, float(np.pi)),
    "axis": (str, "x"),
    "model": (str, "six"),
    "ramp_ns": (float, 1.0),
    "margin": (float, 5.0),
    "composite_cutoff": (int, 12),
}

_SWEEPABLE = ("flux_ext", "n_g_p", "n_g_t")


def _parse_section(cfg: configparser.ConfigParser, name: str, schema: dict) -> dict:
    if name not in cfg:
        raise ConfigError(f"missing required section [{name}]")
    section = cfg[name]
    for key in section:
        if key not in schema:
            raise ConfigError(f"unknown key '{key}' in section [{name}]")
    out = {}
    for key, (typ, default) in schema.items():
        if key in section:
            raw = section[key]
            try:
                out[key] = typ(raw) if typ is not bool else raw.lower() == "true"
            except ValueError as exc:
                raise ConfigError(f"[{name}] {key} = {raw!r}: {exc}") from None
        elif default is None:
            raise ConfigError(f"missing required key '{key}' in section [{name}]")
        else:
            out[key] = default
    return out


def load_config(path: str, job: str):
    cfg = configparser.ConfigParser()
    read = cfg.read(path)
    if not read:
        raise ConfigError(f"config file not found: {path}")
    for section in cfg.sections():
        if section not in ("circuit", job):
            raise ConfigError(f"unexpected section [{section}] for job '{job}'")
    circuit = _parse_section(cfg, "circuit", _CIRCUIT_KEYS)
    schema = {"spectrum": _SPECTRUM_KEYS, "sw": _SW_KEYS, "gate": _GATE_KEYS}[job]
    jobcfg = _parse_section(cfg, job, schema)
    params = CircuitParams.from_ghz(
        circuit["e_j_t"],
        circuit["e_c_t"],
        circuit["e_j_p"],
        circuit["e_c_p"],
        circuit["e_c_c"],
        n_g_t=circuit["n_g_t"],
        n_g_p=circuit["n_g_p"],
        flux_ext=circuit["flux_ext"],
        eps_x=circuit["eps_x"],
        eps_y=circuit["eps_y"],
    )
    return params, jobcfg


def _grid(jobcfg: dict) -> np.ndarray:
    if jobcfg["sweep"] not in _SWEEPABLE:
        raise ConfigError(f"sweep must be one of {_SWEEPABLE}, got {jobcfg['sweep']!r}")
    if jobcfg["points"] < 1:
        raise ConfigError("sweep needs points >= 1")
    return np.linspace(jobcfg["start"], jobcfg["stop"], jobcfg["points"])


def _sweep_params(params: CircuitParams, axis: str, value: float) -> CircuitParams:
    return params.replace(**{axis: float(value)})


def _write_csv(path: str, header_lines: list, columns: list, rows: list):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# parityq csv schema-version {SCHEMA_VERSION}\n")
        fh.write(
            "# units: frequencies/energies in GHz (value = omega / 2pi / 1e9),"
            " times in ns\n"
        )
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write("# columns: " + ",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    return format(float(v), ".12g")


def _map_ordered(fn, values, threads: int):
    if threads <= 1:
        return [fn(v) for v in values]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, values))


def cmd_spectrum(params: CircuitParams, jobcfg: dict, out: str, threads: int = 1):
    grid = _grid(jobcfg)
    axis = jobcfg["sweep"]
    k = jobcfg["levels"]
    system = jobcfg["system"]
    if system not in ("coupled", "transmon", "ppq"):
        raise ConfigError(f"unknown system {system!r}")
    cutoff = jobcfg["cutoff"]

    if system == "coupled":
        basis = default_composite(cutoff)
        p_parity = np.kron(
            np.eye(basis.transmon.dim),
            np.diag((-1.0) ** basis.ppq.charges),
        )

        def point(value):
            pars = _sweep_params(params, axis, value)
            spec = eigendecompose(assemble_full(pars, basis), k)
            exp_par = np.real(
                np.sum(spec.states.conj() * (p_parity @ spec.states), axis=0)
            )
            labels = [
                "even" if e > 1 - 1e-6 else ("odd" if e < -1 + 1e-6 else "mixed")
                for e in exp_par
            ]
            e0 = spec.energies[0]
            return [value, *(spec.energies / GHZ), *labels]

    else:
        label = system
        cutoff = max(cutoff, 20)
        single = ChargeBasis(cutoff, label)

        def point(value):
            pars = _sweep_params(params, axis, value)
            if label == "transmon":
                spec = transmon_spectrum(pars, single, k)
                labels = ["-"] * k
            else:
                include = bool(pars.eps_x or pars.eps_y)
                spec = ppq_spectrum(pars, single, k, include_errors=include)
                labels = list(
                    spec.parity
                    if spec.parity is not None
                    else [classify_parity(spec.states[:, j], single) for j in range(k)]
                )
            return [value, *(spec.energies / GHZ), *labels]

    rows = _map_ordered(point, grid, threads)
    columns = [axis] + [f"E{j}" for j in range(k)] + [f"parity{j}" for j in range(k)]
    _write_csv(out, [f"job: spectrum ({system})"], columns, rows)

    dump = jobcfg["dump_states"].strip()
    if dump and system in ("transmon", "ppq"):
        idx = [int(s) for s in dump.split(",")]
        single = ChargeBasis(cutoff, system)
        spec = (
            transmon_spectrum(params, single, max(idx) + 1)
            if system == "transmon"
            else ppq_spectrum(params, single, max(idx) + 1)
        )
        wf_rows = [
            [n, *(np.abs(spec.states[i, idx]) ** 2)]
            for i, n in enumerate(single.charges)
        ]
        _write_csv(
            out + ".states.csv",
            [f"job: charge-basis probability amplitudes ({system})"],
            ["n"] + [f"p_state{j}" for j in idx],
            wf_rows,
        )
    return out


def cmd_sw_extract(params: CircuitParams, jobcfg: dict, out: str, threads: int = 1):
    grid = _grid(jobcfg)
    axis = jobcfg["sweep"]
    cutoff = jobcfg["cutoff"]
    ccutoff = jobcfg["composite_cutoff"]
    do_numeric = jobcfg["numeric"].lower() == "true"

    def point(value):
        pars = _sweep_params(params, axis, value)
        el = coupling_matrix_elements(pars, cutoff)
        model = low_energy_model(pars, cutoff)
        row = [value, el.lambda1 / GHZ, el.lambda2 / GHZ, el.g_y / GHZ, el.g_yz / GHZ]
        try:
            gzp, gzm = zz_coefficients(el, model.omega)
            eff = analytic_effective_hamiltonian(
                el, model.omega, model.omega_t, model.omega_p
            )
            flag = 1 if eff.near_resonant else 0
            row += [gzp / GHZ, gzm / GHZ, flag]
        except ResonanceError:
            row += [float("nan"), float("nan"), 2]
        if do_numeric:
            try:
                num = effective_hamiltonian_numeric(pars, cutoff, ccutoff)
                c = num.pauli
                row += [
                    4 * c["ZZ"] / GHZ,
                    c["YZ"] / GHZ,
                    c["YI"] / GHZ,
                    c["ZI"] / GHZ,
                    c["IZ"] / GHZ,
                ]
            except SubspaceMismatchError as exc:
                raise SubspaceMismatchError(
                    f"numeric SW failed at {axis} = {value:.6g}: {exc}"
                ) from exc
        return row

    rows = _map_ordered(point, grid, threads)
    columns = [
        axis,
        "lambda1",
        "lambda2",
        "g_y",
        "g_yz",
        "g_zz_plus",
        "g_zz_minus",
        "resonance_flag",
    ]
    if do_numeric:
        columns += ["num_g_zz_minus", "num_g_yz", "num_g_y", "num_c_zi", "num_c_iz"]
    _write_csv(
        out,
        ["job: sw coupling extraction", "resonance_flag: 0 ok, 1 near, 2 divergent"],
        columns,
        rows,
    )
    return out


def cmd_gate_sim(params: CircuitParams, jobcfg: dict, out: str, threads: int = 1):
    kind = jobcfg["gate"].lower()
    model = jobcfg["model"]
    ramp = jobcfg["ramp_ns"] * 1e-9
    try:
        if kind == "cz":
            rep = gates_mod.cz_gate(
                params,
                jobcfg["phi"],
                model=model,
                ramp_time=ramp,
                margin=jobcfg["margin"],
                composite_cutoff=jobcfg["composite_cutoff"],
            )
        elif kind in ("cnot_tp", "cnot_pt", "swap"):
            name = {"cnot_tp": "CNOT_tp", "cnot_pt": "CNOT_pt", "swap": "SWAP"}[kind]
            rep = gates_mod.compose_gate(
                name,
                params,
                model=model,
                ramp_time=ramp,
                margin=jobcfg["margin"],
                composite_cutoff=jobcfg["composite_cutoff"],
            )
        elif kind in ("x", "y"):
            rep = gates_mod.single_qubit_gate(params, kind, jobcfg["angle"])
        else:
            raise ConfigError(f"unknown gate {kind!r}")
    except (gates_mod.DwellRateError, gates_mod.ZeroRateError) as exc:
        raise ConfigError(f"gate job failed ({type(exc).__name__}): {exc}") from exc

    sched = None
    if rep.schedule is not None:
        sched = [
            {
                "duration_ns": s.duration * 1e9,
                "flux": s.flux,
                "eps_x_ghz": s.eps_x / GHZ,
                "eps_y_ghz": s.eps_y / GHZ,
            }
            for s in rep.schedule.segments
        ]
    details = {}
    for key, val in rep.details.items():
        if key == "dwell_time":
            details["dwell_time_ns"] = val * 1e9
        elif key == "duration":
            details["duration_ns"] = val * 1e9
        elif key in ("frame_omega_t",):
            details["frame_omega_t_ghz"] = val / GHZ
        elif key in ("gap",):
            details["gap_ghz"] = val / GHZ
        elif key == "element":
            details["element_ghz"] = abs(val) / GHZ
        elif key == "residual_z_rate":
            details["residual_z_rate_ghz"] = val / GHZ
        else:
            details[key] = val
    report = {
        "schema_version": SCHEMA_VERSION,
        "gate": kind,
        "model": model,
        "conditional_phase": rep.conditional_phase,
        "fidelity": rep.fidelity,
        "leakage": rep.leakage,
        "parity_violation": rep.parity_violation,
        "unitary_p0_re": np.round(rep.unitary_p0.real, 12).tolist(),
        "unitary_p0_im": np.round(rep.unitary_p0.imag, 12).tolist(),
        "schedule": sched,
        "details": details,
    }
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="parityq",
        description="Transmon + parity-protected-qubit spectra, couplings, gates",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("spectrum", "sw", "gate"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--out", required=True)
        p.add_argument("--threads", type=int, default=1)
    args = parser.parse_args(argv)
    runner = {
        "spectrum": cmd_spectrum,
        "sw": cmd_sw_extract,
        "gate": cmd_gate_sim,
    }[args.command]
    try:
        params, jobcfg = load_config(args.config, args.command)
        runner(params, jobcfg, args.out, args.threads)
    except (ConfigError, InvalidArgumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SubspaceMismatchError, ResonanceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
