"""Run-config files and protocol report files.

Both are flat ``key = value`` text. Blank lines and ``#`` comments are
ignored. Frequencies carry their unit in the key name.

Config keys::

    n_qubits              integer N
    E10_GHz, E_r_GHz      splittings
    epsilon_GHz           shifts of qubits 2..N (one value or a comma list)
    epsilon_r_GHz         bus shift
    Delta_GHz, g_GHz      anharmonicities and couplings (value or list of N)
    b, c                  momentum elements (value or list of N)
    variant               WN | WN1
    start                 bus_excited | full_protocol
    excited_qubit         qubit flipped by a full protocol run (default N)
    transfer_duration_ns, entangle_duration_ns, trace_points
"""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .device_model import DeviceConfig
from .dynamics import START_KINDS, ProtocolReport
from .effective_model import Variant
from .errors import ConfigError

__all__ = [
    "RunConfig",
    "parse_config",
    "load_config",
    "resolve_config_path",
    "format_report",
    "parse_report",
    "write_atomic",
]

_DEVICE_KEYS = {
    "E10_GHz": "E10",
    "E_r_GHz": "E_r",
    "epsilon_GHz": "epsilon",
    "epsilon_r_GHz": "epsilon_r",
    "Delta_GHz": "Delta",
    "g_GHz": "couplings",
    "b": "b",
    "c": "c",
}
_LIST_KEYS = {"epsilon_GHz", "Delta_GHz", "g_GHz", "b", "c"}
_RUN_KEYS = {
    "n_qubits",
    "variant",
    "start",
    "excited_qubit",
    "transfer_duration_ns",
    "entangle_duration_ns",
    "trace_points",
}


@dataclass(frozen=True)
class RunConfig:
    """Parsed run config; ``device_params`` keeps the DeviceConfig keyword values."""

    device: DeviceConfig
    variant: Variant = Variant.WN
    start: str = "bus_excited"
    excited_qubit: int | None = None
    transfer_duration_ns: float | None = None
    entangle_duration_ns: float | None = None
    trace_points: int | None = None
    device_params: dict = field(default_factory=dict, compare=False)

    def device_for(self, n_qubits: int) -> DeviceConfig:
        """Same device parameters resized to ``n_qubits`` (scalar parameters only)."""
        params = dict(self.device_params)
        for key, value in params.items():
            if isinstance(value, tuple):
                raise ConfigError("per-qubit lists cannot be resized for a sweep", field=key)
        return DeviceConfig(n_qubits, **params)


def _number(text: str, key: str, line: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"expected a number, got {text!r}", line, key) from None
    if not math.isfinite(value):
        raise ConfigError(f"value must be finite, got {text!r}", line, key)
    return value


def _integer(text: str, key: str, line: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"expected an integer, got {text!r}", line, key) from None


def _split_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"expected 'key = value', got {body!r}", lineno)
        key, value = (part.strip() for part in body.split("=", 1))
        if not key or not value:
            raise ConfigError(f"expected 'key = value', got {body!r}", lineno)
        yield lineno, key, value


def parse_config(text: str) -> RunConfig:
    """Parse config text.

    Raises:
        ConfigError: unknown or duplicate keys, bad values, or a device that
            fails :class:`DeviceConfig` validation.
    """
    seen: dict[str, int] = {}
    device: dict = {}
    run: dict = {}
    for lineno, key, value in _split_lines(text):
        if key in seen:
            raise ConfigError(f"duplicate key (first on line {seen[key]})", lineno, key)
        seen[key] = lineno
        if key in _DEVICE_KEYS:
            if key in _LIST_KEYS and "," in value:
                items = [v.strip() for v in value.split(",") if v.strip()]
                device[_DEVICE_KEYS[key]] = tuple(_number(v, key, lineno) for v in items)
            else:
                device[_DEVICE_KEYS[key]] = _number(value, key, lineno)
        elif key == "n_qubits" or key == "excited_qubit" or key == "trace_points":
            run[key] = _integer(value, key, lineno)
        elif key in ("transfer_duration_ns", "entangle_duration_ns"):
            run[key] = _number(value, key, lineno)
        elif key == "variant":
            try:
                run[key] = Variant.parse(value)
            except ValueError as exc:
                raise ConfigError(str(exc), lineno, key) from None
        elif key == "start":
            if value not in START_KINDS:
                raise ConfigError(f"start must be one of {START_KINDS}", lineno, key)
            run[key] = value
        else:
            raise ConfigError("unknown key", lineno, key)

    if "n_qubits" not in run:
        raise ConfigError("missing required key", field="n_qubits")
    n = run.pop("n_qubits")
    try:
        dev = DeviceConfig(n, **device)
    except ValueError as exc:
        raise ConfigError(f"invalid device: {exc}") from None
    if run.get("trace_points") is not None and run["trace_points"] < 2:
        raise ConfigError("trace_points must be at least 2", seen["trace_points"], "trace_points")
    if run.get("excited_qubit") is not None and not 1 <= run["excited_qubit"] <= n:
        raise ConfigError(f"excited_qubit must be in 1..{n}", seen["excited_qubit"], "excited_qubit")
    for key in ("transfer_duration_ns", "entangle_duration_ns"):
        if run.get(key) is not None and run[key] < 0:
            raise ConfigError("duration must be non-negative", seen[key], key)
    return RunConfig(device=dev, device_params=device, **run)


def resolve_config_path(path: str | os.PathLike) -> Path:
    """Return ``path`` if it exists, else the bundled config of that name."""
    p = Path(path)
    if p.exists():
        return p
    bundled = resources.files("wstate") / "configs" / p.name
    if bundled.is_file():
        return Path(str(bundled))
    raise ConfigError(f"config file not found: {path}")


def load_config(path: str | os.PathLike) -> RunConfig:
    p = resolve_config_path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {p}: {exc}") from None
    return parse_config(text)


def _fmt(x: float) -> str:
    return format(float(x), ".10g")


def _labels(n_qubits: int) -> list[str]:
    return ["r"] + [f"q{q}" for q in range(n_qubits, 0, -1)]


def format_report(report: ProtocolReport, include_wallclock: bool = True) -> str:
    """Machine-readable report, 10 significant digits per number."""
    lines = [
        "# wstate protocol report",
        f"variant = {report.variant.value}",
        f"n_qubits = {report.n_qubits}",
        f"start = {report.start}",
        f"fidelity = {_fmt(report.fidelity)}",
        f"leakage = {_fmt(report.leakage)}",
        f"residual_phase_rad = {_fmt(report.residual_phase)}",
    ]
    for name, value in report.durations.items():
        lines.append(f"duration_{name}_ns = {_fmt(value)}")
    for label, amp in zip(_labels(report.n_qubits), report.amplitudes):
        lines.append(f"amp_{label}_re = {_fmt(amp.real)}")
        lines.append(f"amp_{label}_im = {_fmt(amp.imag)}")
    if include_wallclock:
        lines.append(f"wallclock_s = {_fmt(report.wallclock_s)}")
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> dict:
    """Read a report back.

    Returns a dict with the scalar fields, ``durations`` (dict) and
    ``amplitudes`` (complex array in report order).
    """
    raw = {key: value for _, key, value in _split_lines(text)}
    out: dict = {
        "variant": Variant.parse(raw.pop("variant")),
        "n_qubits": int(raw.pop("n_qubits")),
        "start": raw.pop("start"),
        "durations": {},
    }
    amps = {}
    for key, value in raw.items():
        if key.startswith("duration_") and key.endswith("_ns"):
            out["durations"][key[len("duration_"):-len("_ns")]] = float(value)
        elif key.startswith("amp_"):
            label, part = key[4:].rsplit("_", 1)
            amps.setdefault(label, [0.0, 0.0])[0 if part == "re" else 1] = float(value)
        else:
            out[key] = float(value)
    out["amplitudes"] = np.array(
        [complex(*amps[label]) for label in _labels(out["n_qubits"])], dtype=complex
    )
    return out


def write_atomic(path: str | os.PathLike, text: str) -> None:
    """Write ``text`` to a temp file in the target directory, then rename it into place."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
