"""Config parsing, CSV/JSON artifact structure, determinism, threading."""

import json

import numpy as np
import pytest

from parityq.cli import ConfigError, load_config, main

CIRCUIT = """\
[circuit]
e_j_t = 12.0
e_c_t = 0.2
e_j_p = 2.7
e_c_p = 0.15
e_c_c = 0.025
"""


def write_cfg(tmp_path, body, name="job.ini"):
    path = tmp_path / name
    path.write_text(body)
    return str(path)


def read_csv(path):
    header, rows = [], []
    for line in open(path):
        (header if line.startswith("#") else rows).append(line.rstrip("\n"))
    return header, rows


class TestConfigParsing:
    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            load_config(str(tmp_path / "nope.ini"), "spectrum")

    def test_unknown_key_rejected(self, tmp_path):
        cfg = write_cfg(
            tmp_path,
            CIRCUIT + "frobnicate = 1\n[spectrum]\nstart=0\nstop=0.3\npoints=3\n",
        )
        with pytest.raises(ConfigError, match="frobnicate"):
            load_config(cfg, "spectrum")

    def test_missing_required_key(self, tmp_path):
        cfg = write_cfg(
            tmp_path, CIRCUIT + "[spectrum]\nstart=0\nstop=0.3\n"
        )  # no points
        with pytest.raises(ConfigError, match="points"):
            load_config(cfg, "spectrum")

    def test_missing_circuit_section(self, tmp_path):
        cfg = write_cfg(tmp_path, "[spectrum]\nstart=0\nstop=1\npoints=2\n")
        with pytest.raises(ConfigError, match="circuit"):
            load_config(cfg, "spectrum")

    def test_foreign_section_rejected(self, tmp_path):
        cfg = write_cfg(
            tmp_path,
            CIRCUIT + "[gate]\ngate=cz\n[spectrum]\nstart=0\nstop=1\npoints=2\n",
        )
        with pytest.raises(ConfigError, match="gate"):
            load_config(cfg, "spectrum")

    def test_bad_value_diagnostic(self, tmp_path):
        cfg = write_cfg(
            tmp_path, CIRCUIT + "[spectrum]\nstart=zero\nstop=1\npoints=2\n"
        )
        with pytest.raises(ConfigError, match="start"):
            load_config(cfg, "spectrum")

    def test_exit_code_on_config_error(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, CIRCUIT + "[spectrum]\nstart=0\nstop=1\n")
        rc = main(["spectrum", "--config", cfg, "--out", str(tmp_path / "o.csv")])
        assert rc == 2
        assert "error:" in capsys.readouterr().err


class TestSpectrumJob:
    BODY = CIRCUIT + "[spectrum]\nsweep=flux_ext\nstart=0\nstop=0.3\npoints=5\nlevels=6\ncutoff=8\n"

    def test_csv_structure(self, tmp_path):
        cfg = write_cfg(tmp_path, self.BODY)
        out = str(tmp_path / "spec.csv")
        assert main(["spectrum", "--config", cfg, "--out", out]) == 0
        header, rows = read_csv(out)
        assert header[0].startswith("# parityq csv schema-version 1")
        assert any("units" in h for h in header)
        cols = [h for h in header if h.startswith("# columns:")][0]
        names = cols.split(": ", 1)[1].split(",")
        assert names[0] == "flux_ext" and "E0" in names and "parity5" in names
        assert len(rows) == 5
        first = rows[0].split(",")
        assert len(first) == len(names)
        # ground energy column is finite GHz-scale
        assert abs(float(first[1])) < 100.0

    def test_determinism_bit_identical(self, tmp_path):
        cfg = write_cfg(tmp_path, self.BODY)
        a, b = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
        main(["spectrum", "--config", cfg, "--out", a])
        main(["spectrum", "--config", cfg, "--out", b])
        assert open(a, "rb").read() == open(b, "rb").read()

    def test_threads_match_serial(self, tmp_path):
        cfg = write_cfg(tmp_path, self.BODY)
        a, b = str(tmp_path / "t1.csv"), str(tmp_path / "t4.csv")
        main(["spectrum", "--config", cfg, "--out", a, "--threads", "1"])
        main(["spectrum", "--config", cfg, "--out", b, "--threads", "4"])
        assert open(a, "rb").read() == open(b, "rb").read()

    def test_coupled_parity_labels(self, tmp_path):
        cfg = write_cfg(tmp_path, self.BODY)
        out = str(tmp_path / "spec.csv")
        main(["spectrum", "--config", cfg, "--out", out])
        _, rows = read_csv(out)
        labels = set(rows[0].split(",")[7:])
        assert labels <= {"even", "odd"}  # no mixing without error terms

    def test_ppq_system_with_state_dump(self, tmp_path):
        body = CIRCUIT + (
            "[spectrum]\nsystem=ppq\nsweep=n_g_p\nstart=0\nstop=0.5\npoints=3\n"
            "levels=4\ndump_states=0,1\n"
        )
        cfg = write_cfg(tmp_path, body)
        out = str(tmp_path / "ppq.csv")
        assert main(["spectrum", "--config", cfg, "--out", out]) == 0
        header, rows = read_csv(out)
        assert rows[0].split(",")[5:] == ["even", "odd", "odd", "even"]
        _, wf_rows = read_csv(out + ".states.csv")
        probs = np.array([[float(x) for x in r.split(",")[1:]] for r in wf_rows])
        np.testing.assert_allclose(probs.sum(axis=0), 1.0, atol=1e-9)


class TestSwJob:
    def body(self, numeric="false", start=0.0, stop=0.1, points=3, sweep="n_g_p"):
        return CIRCUIT + (
            f"[sw]\nsweep={sweep}\nstart={start}\nstop={stop}\npoints={points}\n"
            f"numeric={numeric}\n"
        )

    def test_columns_and_flag(self, tmp_path):
        cfg = write_cfg(tmp_path, self.body())
        out = str(tmp_path / "sw.csv")
        assert main(["sw", "--config", cfg, "--out", out]) == 0
        header, rows = read_csv(out)
        cols = [h for h in header if h.startswith("# columns:")][0]
        names = cols.split(": ", 1)[1].split(",")
        assert names == [
            "n_g_p", "lambda1", "lambda2", "g_y", "g_yz",
            "g_zz_plus", "g_zz_minus", "resonance_flag",
        ]
        flags = {r.split(",")[-1] for r in rows}
        assert flags <= {"0", "1", "2"}

    def test_symmetric_offset_kills_g_y(self, tmp_path):
        cfg = write_cfg(tmp_path, self.body(start=0.0, stop=0.0, points=1))
        out = str(tmp_path / "sw.csv")
        main(["sw", "--config", cfg, "--out", out])
        _, rows = read_csv(out)
        row = dict(zip(
            ["n_g_p", "lambda1", "lambda2", "g_y", "g_yz",
             "g_zz_plus", "g_zz_minus", "resonance_flag"],
            rows[0].split(","),
        ))
        assert abs(float(row["g_y"])) < 1e-9 * abs(float(row["lambda1"]))

    def test_uncoupled_circuit_zero_elements(self, tmp_path):
        body = self.body().replace("e_c_c = 0.025", "e_c_c = 0.0")
        cfg = write_cfg(tmp_path, body)
        out = str(tmp_path / "sw.csv")
        main(["sw", "--config", cfg, "--out", out])
        _, rows = read_csv(out)
        for r in rows:
            vals = [float(x) for x in r.split(",")[1:5]]
            assert max(abs(v) for v in vals) < 1e-15

    def test_numeric_columns_present(self, tmp_path):
        cfg = write_cfg(tmp_path, self.body(numeric="true", points=2, stop=0.1))
        out = str(tmp_path / "sw.csv")
        assert main(["sw", "--config", cfg, "--out", out]) == 0
        header, rows = read_csv(out)
        cols = [h for h in header if h.startswith("# columns:")][0]
        assert "num_g_zz_minus" in cols
        assert len(rows[0].split(",")) == 13

    def test_bad_sweep_axis(self, tmp_path):
        cfg = write_cfg(tmp_path, self.body(sweep="e_j_t"))
        assert main(["sw", "--config", cfg, "--out", str(tmp_path / "x.csv")]) == 2


class TestGateJob:
    def test_cz_json_fields(self, tmp_path):
        body = CIRCUIT + "[gate]\ngate=cz\nmodel=six\n"
        cfg = write_cfg(tmp_path, body)
        out = str(tmp_path / "cz.json")
        assert main(["gate", "--config", cfg, "--out", out]) == 0
        rep = json.load(open(out))
        assert rep["schema_version"] == "1"
        assert rep["gate"] == "cz"
        assert rep["fidelity"] > 0.99
        assert abs(abs(rep["conditional_phase"]) - np.pi) < 1e-6
        u = np.array(rep["unitary_p0_re"]) + 1j * np.array(rep["unitary_p0_im"])
        assert u.shape == (4, 4)
        np.testing.assert_allclose(u @ u.conj().T, np.eye(4), atol=1e-3)
        assert rep["schedule"] is not None
        assert rep["details"]["dwell_time_ns"] > 0

    def test_single_qubit_json(self, tmp_path):
        body = (
            CIRCUIT.replace("e_c_c = 0.025", "e_c_c = 0.0")
            + "n_g_p = 0.5\neps_x = 0.135\n[gate]\ngate=x\nangle=3.14159265358979\n"
        )
        cfg = write_cfg(tmp_path, body)
        out = str(tmp_path / "x.json")
        assert main(["gate", "--config", cfg, "--out", out]) == 0
        rep = json.load(open(out))
        u = np.array(rep["unitary_p0_re"]) + 1j * np.array(rep["unitary_p0_im"])
        assert u.shape == (2, 2)
        assert abs(u[1, 0]) ** 2 == pytest.approx(1.0, abs=1e-6)
        assert rep["details"]["protection_lost"] is True

    def test_dead_rotation_reports_config_error(self, tmp_path):
        body = (
            CIRCUIT + "n_g_p = 0.0\neps_y = 0.135\n[gate]\ngate=y\n"
        )
        cfg = write_cfg(tmp_path, body)
        rc = main(["gate", "--config", cfg, "--out", str(tmp_path / "y.json")])
        assert rc == 2

    def test_unknown_gate_rejected(self, tmp_path):
        cfg = write_cfg(tmp_path, CIRCUIT + "[gate]\ngate=iswap\n")
        assert main(["gate", "--config", cfg, "--out", str(tmp_path / "g.json")]) == 2
