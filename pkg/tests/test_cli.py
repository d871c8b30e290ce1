import csv
import io
import math

import numpy as np
import pytest

from wstate.cli import main
from wstate.config import format_report, load_config, parse_config, parse_report
from wstate.dynamics import run_protocol
from wstate.effective_model import Variant
from wstate.errors import ConfigError


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_bundled_configs_parse():
    cfg = load_config("paper_n4.cfg")
    assert cfg.variant is Variant.WN
    assert cfg.device.couplings == (0.1,) * 4
    assert (cfg.device.b[0], cfg.device.c[0]) == (0.08, 1.43)
    wn1 = load_config("paper_n4_wn1.cfg")
    assert wn1.variant is Variant.WN1
    assert wn1.device.epsilon_r == pytest.approx(0.2)


@pytest.mark.parametrize("text,line,field", [
    ("n_qubits = 2\nbogus = 1\n", 2, "bogus"),
    ("n_qubits = 2\ng_GHz = fast\n", 2, "g_GHz"),
    ("n_qubits = 2\n\nvariant = W7\n", 3, "variant"),
    ("n_qubits = 2\nn_qubits = 3\n", 2, "n_qubits"),
    ("just words\n", 1, None),
])
def test_config_errors_carry_location(text, line, field):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.line == line
    assert info.value.field == field


def test_config_lists_and_validation():
    cfg = parse_config("n_qubits = 3\ng_GHz = 0.1, 0.12, 0.09\nepsilon_GHz = 0.01, 0.02  # q2, q3\n")
    assert cfg.device.couplings == (0.1, 0.12, 0.09)
    assert cfg.device.epsilon == (0.01, 0.02)
    with pytest.raises(ConfigError):
        parse_config("n_qubits = 3\ng_GHz = 0.1, 0.2\n")
    with pytest.raises(ConfigError):
        parse_config("g_GHz = 0.1\n")
    with pytest.raises(ConfigError):
        cfg.device_for(4)


def test_report_roundtrip():
    report = run_protocol(load_config("paper_n4_wn1.cfg").device, "WN1")
    parsed = parse_report(format_report(report))
    assert parsed["variant"] is Variant.WN1
    assert parsed["n_qubits"] == 4
    for key in ("fidelity", "leakage", "residual_phase"):
        name = "residual_phase_rad" if key == "residual_phase" else key
        assert parsed[name] == pytest.approx(getattr(report, key), rel=1e-9)
    np.testing.assert_allclose(parsed["amplitudes"], report.amplitudes, rtol=1e-9, atol=1e-15)
    assert parsed["durations"]["entangle"] == pytest.approx(report.durations["entangle"], rel=1e-9)


def test_report_deterministic():
    cfg = load_config("paper_n4.cfg")
    a = format_report(run_protocol(cfg.device, cfg.variant), include_wallclock=False)
    b = format_report(run_protocol(cfg.device, cfg.variant), include_wallclock=False)
    assert a == b


def test_cmd_protocol_wn(tmp_path, capsys):
    out = tmp_path / "r.txt"
    assert main(["protocol", "--config", "paper_n4.cfg", "--out", str(out)]) == 0
    console = capsys.readouterr().out
    assert "fidelity     0.9994" in console
    assert "1.2500 ns" in console
    parsed = parse_report(out.read_text())
    assert abs(parsed["fidelity"] - 0.9994) <= 5e-4
    assert not list(tmp_path.glob(".*.tmp"))


def test_cmd_protocol_wn1(tmp_path, capsys):
    assert main(["protocol", "--config", "paper_n4_wn1.cfg", "--out", str(tmp_path / "r.txt")]) == 0
    console = capsys.readouterr().out
    assert "fidelity     0.9997" in console
    assert "1.1180 ns" in console


def test_cmd_protocol_variant_override(tmp_path, capsys):
    out = tmp_path / "r.txt"
    assert main(["protocol", "--config", "paper_n4.cfg", "--variant", "wn1", "--out", str(out)]) == 0
    assert parse_report(out.read_text())["variant"] is Variant.WN1


def test_cmd_protocol_bad_config(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("n_qubits = 2\nDelta_GHz = 0.2\nmystery = 3\n")
    assert main(["protocol", "--config", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "line 3" in err and "mystery" in err
    assert main(["protocol", "--config", str(tmp_path / "missing.cfg")]) == 2


def test_cmd_protocol_cap(tmp_path, capsys):
    assert main(["protocol", "--config", "paper_n4.cfg", "--cap", "100",
                 "--out", str(tmp_path / "r.txt")]) == 3


def test_cmd_spectrum(capsys):
    assert main(["spectrum", "--n", "4", "--g", "0.1", "--variant", "wn"]) == 0
    rows = read_csv(capsys.readouterr().out)
    g = 2 * math.pi * 0.1
    analytic = [float(r["analytic_rad_per_ns"]) for r in rows]
    np.testing.assert_allclose(analytic, [-2 * g, 0, 0, 0, 2 * g], atol=1e-9)
    assert max(float(r["deviation"]) for r in rows) <= 1e-12

    assert main(["spectrum", "--n", "4", "--variant", "WN1"]) == 0
    rows = read_csv(capsys.readouterr().out)
    s5 = math.sqrt(5)
    np.testing.assert_allclose([float(r["analytic_rad_per_ns"]) for r in rows],
                               [g * (1 - s5), 0, 0, 0, g * (1 + s5)], rtol=1e-9)


def test_cmd_sweep(tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--config", "paper_n4.cfg", "--n-min", "1", "--n-max", "4", "--out", str(out)]) == 0
    rows = read_csv(out.read_text())
    assert [int(r["N"]) for r in rows] == [1, 2, 3, 4]
    t = [float(r["t_entangle_ns"]) for r in rows]
    assert round(t[0], 4) == 2.5000 and round(t[-1], 4) == 1.2500
    for n, tn in zip(range(1, 5), t):
        assert tn == pytest.approx(math.pi / (2 * 2 * math.pi * 0.1 * math.sqrt(n)), rel=1e-9)
    assert all(a > b for a, b in zip(t, t[1:]))
    assert all(float(r["fidelity"]) >= 0.999 for r in rows)


def test_cmd_sweep_truncates_at_cap(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--config", "paper_n4.cfg", "--n-max", "5", "--cap", "100", "--out", str(out)]) == 0
    rows = read_csv(out.read_text())
    assert [r["status"] for r in rows] == ["ok", "ok", "ok", "cap_exceeded"]
    assert "truncated" in capsys.readouterr().err


def test_cmd_trace(tmp_path):
    out = tmp_path / "trace.csv"
    assert main(["trace", "--config", "paper_n4.cfg", "--t-max", "1.25", "--points", "51", "--out", str(out)]) == 0
    rows = read_csv(out.read_text())
    assert len(rows) == 51
    assert list(rows[0]) == ["time_ns", "pop_r", "pop_q4", "pop_q3", "pop_q2", "pop_q1", "leakage"]
    g = 2 * math.pi * 0.1
    for r in rows:
        values = [float(v) for k, v in r.items() if k != "time_ns"]
        assert sum(values) == pytest.approx(1.0, abs=1e-9)
        assert float(r["pop_r"]) == pytest.approx(math.cos(2 * g * float(r["time_ns"])) ** 2, abs=0.01)
    assert float(rows[-1]["time_ns"]) == 1.25
    assert float(rows[-1]["pop_r"]) < 1e-3


def test_cmd_trace_rejects_degenerate_grid(capsys):
    assert main(["trace", "--config", "paper_n4.cfg", "--t-max", "0", "--points", "2"]) == 2
    assert main(["trace", "--config", "paper_n4.cfg", "--points", "1"]) == 2
