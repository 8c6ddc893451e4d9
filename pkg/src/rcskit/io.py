"""CSV/JSON schemas, serialization helpers, and input digests.

Conventions: CSV in, JSON out, UTF-8, LF line endings.  Floats are written
with repr (shortest round-trip), so emit/ingest cycles are lossless well
beyond 15 significant digits.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from pathlib import Path

import numpy as np

from . import __version__
from .dists import DistParams, Family, SampleSet
from .errors import SchemaError
from .gof import GofReport
from .link_budget import LinkParams
from .geometry import BistaticGeometry
from .montecarlo import ScenarioSpec
from .nf_rcs import ModelOrder, NfRcsModel, PathLossFit, PlObservation
from .waveform import CirCapture

RCS_HEADER = ["target_id", "frequency_ghz", "theta_b_deg", "rcs_m2"]
PL_HEADER = ["y_m", "frequency_ghz", "pl_db"]
CIR_HEADER = ["index", "re", "im"]


def sha256_of(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _open_csv_reader(path: str | Path):
    try:
        handle = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise SchemaError(f"cannot open {path}: {exc}") from exc
    return handle


def _float_field(raw: str, row_num: int, column: str) -> float:
    try:
        value = float(raw)
    except ValueError as exc:
        raise ValueError(f"row {row_num}: column {column} is not numeric: {raw!r}") from exc
    if not math.isfinite(value):
        raise ValueError(f"row {row_num}: column {column} must be finite, got {raw!r}")
    return value


def ingest_rcs_csv(path: str | Path) -> dict[tuple[str, float, float], SampleSet]:
    """Group RCS sample rows by (target_id, frequency_ghz, theta_b_deg).

    Row order is preserved within each group.  Header and positivity are
    enforced; offending rows are reported by number (header is row 1).
    """
    groups: dict[tuple[str, float, float], list[float]] = {}
    with _open_csv_reader(path) as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != RCS_HEADER:
            raise SchemaError(f"expected header {','.join(RCS_HEADER)}, got {header}")
        for row_num, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(RCS_HEADER):
                raise SchemaError(f"row {row_num}: expected {len(RCS_HEADER)} columns, got {len(row)}")
            target = row[0]
            freq = _float_field(row[1], row_num, "frequency_ghz")
            theta = _float_field(row[2], row_num, "theta_b_deg")
            rcs = _float_field(row[3], row_num, "rcs_m2")
            if rcs <= 0.0:
                raise ValueError(f"row {row_num}: rcs_m2 must be > 0, got {rcs}")
            groups.setdefault((target, freq, theta), []).append(rcs)
    return {
        key: SampleSet(
            values=np.array(values),
            metadata={"target_id": key[0], "frequency_ghz": key[1], "theta_b_deg": key[2]},
        )
        for key, values in groups.items()
    }


def emit_rcs_csv(path: str | Path, rows: list[tuple[str, float, float, float]]) -> None:
    """Write RCS sample rows (target_id, frequency_ghz, theta_b_deg, rcs_m2)."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(RCS_HEADER)
        for target, freq, theta, rcs in rows:
            writer.writerow([target, repr(float(freq)), repr(float(theta)), repr(float(rcs))])


#: Target-offset span of the measured campaign; ingested observations are
#: validated against it unless the caller overrides or disables the span.
Y_SPAN_DEFAULT = (2.0, 10.0)


def load_pl_csv(
    path: str | Path,
    y_span: tuple[float, float] | None = Y_SPAN_DEFAULT,
) -> list[PlObservation]:
    """Read path-loss observations (y_m, frequency_ghz, pl_db).

    Offsets outside y_span are rejected by row number; pass y_span=None to
    accept any positive offset.
    """
    observations = []
    with _open_csv_reader(path) as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != PL_HEADER:
            raise SchemaError(f"expected header {','.join(PL_HEADER)}, got {header}")
        for row_num, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(PL_HEADER):
                raise SchemaError(f"row {row_num}: expected {len(PL_HEADER)} columns, got {len(row)}")
            y = _float_field(row[0], row_num, "y_m")
            if y_span is not None and not (y_span[0] <= y <= y_span[1]):
                raise ValueError(
                    f"row {row_num}: y_m {y} outside the configured span {y_span}"
                )
            observations.append(
                PlObservation(
                    y_m=y,
                    frequency_hz=_float_field(row[1], row_num, "frequency_ghz") * 1e9,
                    pl_db=_float_field(row[2], row_num, "pl_db"),
                )
            )
    if not observations:
        raise SchemaError(f"{path} contains no data rows")
    return observations


def emit_pl_csv(path: str | Path, observations: list[PlObservation]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(PL_HEADER)
        for obs in observations:
            writer.writerow([repr(obs.y_m), repr(obs.frequency_hz / 1e9), repr(obs.pl_db)])


def save_cir(capture: CirCapture, path: str | Path) -> None:
    """Write CIR taps as index,re,im CSV plus a metadata sidecar JSON."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CIR_HEADER)
        for idx, tap in enumerate(capture.taps):
            writer.writerow([idx, repr(float(tap.real)), repr(float(tap.imag))])
    sidecar = {"frequency_hz": capture.frequency_hz, "scenario_tag": capture.scenario_tag}
    path.with_suffix(".json").write_text(json.dumps(sidecar, indent=2) + "\n", encoding="utf-8")


def load_cir(path: str | Path) -> CirCapture:
    path = Path(path)
    taps = []
    with _open_csv_reader(path) as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != CIR_HEADER:
            raise SchemaError(f"expected header {','.join(CIR_HEADER)}, got {header}")
        for row_num, row in enumerate(reader, start=2):
            if not row:
                continue
            expected = int(_float_field(row[0], row_num, "index"))
            if expected != len(taps):
                raise SchemaError(f"row {row_num}: tap index {expected} out of order")
            taps.append(
                complex(_float_field(row[1], row_num, "re"), _float_field(row[2], row_num, "im"))
            )
    sidecar_path = path.with_suffix(".json")
    try:
        sidecar = json.loads(sidecar_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read CIR sidecar {sidecar_path}: {exc}") from exc
    return CirCapture(
        taps=np.array(taps, dtype=complex),
        frequency_hz=float(sidecar["frequency_hz"]),
        scenario_tag=str(sidecar["scenario_tag"]),
    )


def dist_params_to_dict(params: DistParams) -> dict:
    return {"family": params.family.value, **params.as_dict()}


def dist_params_from_dict(obj: dict) -> DistParams:
    try:
        family = Family(obj["family"])
    except (KeyError, ValueError) as exc:
        raise SchemaError(f"bad distribution family in {obj!r}") from exc
    values = {k: v for k, v in obj.items() if k != "family"}
    return DistParams(family, values)


def gof_report_to_dict(report: GofReport) -> dict:
    return {
        "family": report.family.value,
        "ks": report.ks_stat,
        "mse": report.mse,
        "params": dist_params_to_dict(report.params),
    }


def pl_fit_to_dict(fit: PathLossFit) -> dict:
    model = fit.model
    return {
        "model": model.order.value,
        "alpha": fit.alpha,
        "n": fit.n,
        "m": model.m,
        "a1": model.a1,
        "a2": model.a2,
        "a3": model.a3,
        "x_sigma": fit.x_sigma,
        "mfe_percent": fit.mfe_percent,
        "frequency_ghz": fit.frequency_hz / 1e9,
        "geom_a_m": fit.geom_a,
        "a1_degenerate": fit.a1_degenerate,
    }


def pl_fit_from_dict(obj: dict) -> tuple[float, float, NfRcsModel, float, float]:
    """Return (alpha, n, model, frequency_hz, geom_a) from a fit record."""
    try:
        order = ModelOrder(obj["model"])
        model = NfRcsModel(
            order=order,
            a1=float(obj["a1"]),
            m=float(obj["m"]),
            a2=float(obj["a2"]) if order.n_coeffs >= 2 else None,
            a3=float(obj["a3"]) if order.n_coeffs >= 3 else None,
        )
        return (
            float(obj["alpha"]),
            float(obj["n"]),
            model,
            float(obj["frequency_ghz"]) * 1e9,
            float(obj["geom_a_m"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed path-loss fit record: {exc}") from exc


def scenario_spec_from_dict(obj: dict) -> ScenarioSpec:
    try:
        geometry = BistaticGeometry(
            half_baseline=float(obj["geometry"]["half_baseline_m"]),
            target_offset=float(obj["geometry"]["target_offset_m"]),
        )
        link_obj = obj["link"]
        link = LinkParams(
            tx_power=float(link_obj["tx_power_w"]),
            tx_gain=float(link_obj["tx_gain"]),
            rx_gain=float(link_obj["rx_gain"]),
            wavelength=float(link_obj["wavelength_m"]),
            system_loss=float(link_obj["system_loss"]),
        )
        return ScenarioSpec(
            geometry=geometry,
            link=link,
            rcs_process=dist_params_from_dict(obj["rcs_process"]),
            n_snapshots=int(obj["n_snapshots"]),
            noise_power=float(obj.get("noise_power_w", 0.0)),
            seed=int(obj["seed"]),
            target_id=str(obj.get("target_id", "scenario")),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed scenario spec: {exc}") from exc


def scenario_spec_to_dict(spec: ScenarioSpec) -> dict:
    return {
        "target_id": spec.target_id,
        "geometry": {
            "half_baseline_m": spec.geometry.half_baseline,
            "target_offset_m": spec.geometry.target_offset,
        },
        "link": {
            "tx_power_w": spec.link.tx_power,
            "tx_gain": spec.link.tx_gain,
            "rx_gain": spec.link.rx_gain,
            "wavelength_m": spec.link.wavelength,
            "system_loss": spec.link.system_loss,
        },
        "rcs_process": dist_params_to_dict(spec.rcs_process),
        "n_snapshots": spec.n_snapshots,
        "noise_power_w": spec.noise_power,
        "seed": spec.seed,
    }


def report_bundle(inputs: dict[str, str | Path], body: dict) -> dict:
    """Wrap a report body with the tool version and input digests."""
    return {
        "tool_version": __version__,
        "inputs": {str(name): sha256_of(path) for name, path in inputs.items()},
        **body,
    }


def write_json(path: str | Path, obj: dict) -> None:
    Path(path).write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")


def read_json(path: str | Path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read JSON {path}: {exc}") from exc
