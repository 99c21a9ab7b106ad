"""Scenario files, result persistence, and the banked-payroll case table.

A scenario is a flat JSON object::

    {
      "label": "baseline",
      "run": "solve",                  # solve | simulate | sweep | case-data
      "params": { ... all model parameters ... },
      "abm":   {"n": 100000, "replications": 20, "seed": 42},   # simulate only
      "sweep": {"parameter_name": "theta", "values": [0.1, 0.2]},  # sweep only
      "case_data": {"path": "bancarization.csv"}                # case-data only
    }

``params`` carries every :class:`~reformgame.model.ModelParams` field by
name; the convention fields are optional and default to the
derived-consistent threshold and the published posterior. The run-specific
section must be present exactly when ``run`` requires it. All numbers are
plain JSON numbers. Relative ``case_data`` paths resolve against the
scenario file's directory.

Result writers emit CSV or JSON with floats at 12 significant digits and
no timestamps, so identical runs produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

from .abm import AbmEstimate
from .equilibrium import EquilibriumReport, EquilibriumResult
from .model import (
    LeaderType,
    ModelParams,
    PosteriorConvention,
    ThresholdConvention,
    validate_params,
)
from .sweep import SweepSeries

__all__ = [
    "ScenarioError",
    "ScenarioParseError",
    "ScenarioSchemaError",
    "CaseTableError",
    "RunKind",
    "AbmSettings",
    "SweepSettings",
    "CaseDataSettings",
    "Scenario",
    "BancarizationSeries",
    "load_scenario",
    "write_scenario",
    "write_results",
    "ingest_case_table",
    "bundled_path",
]


class ScenarioError(Exception):
    """Base class for scenario and data-file problems."""


class ScenarioParseError(ScenarioError):
    """The file is not well-formed JSON."""


class ScenarioSchemaError(ScenarioError):
    """The JSON shape does not match the scenario schema.

    ``field`` names the offending entry (missing, unknown, or mistyped).
    """

    def __init__(self, field: str, message: str):
        super().__init__(message)
        self.field = field


class CaseTableError(ScenarioError):
    """A case-data CSV is malformed; ``row`` is the 1-based data row."""

    def __init__(self, message: str, row: int | None = None):
        super().__init__(message if row is None else f"row {row}: {message}")
        self.row = row


class RunKind(str, Enum):
    SOLVE = "solve"
    SIMULATE = "simulate"
    SWEEP = "sweep"
    CASE_DATA = "case-data"


@dataclass(frozen=True)
class AbmSettings:
    n: int
    replications: int
    seed: int


@dataclass(frozen=True)
class SweepSettings:
    parameter_name: str
    values: tuple[float, ...]


@dataclass(frozen=True)
class CaseDataSettings:
    path: str


@dataclass(frozen=True)
class Scenario:
    label: str
    run: RunKind
    params: ModelParams
    abm: AbmSettings | None = None
    sweep: SweepSettings | None = None
    case_data: CaseDataSettings | None = None


@dataclass(frozen=True)
class BancarizationSeries:
    """One year of the banked-payroll reform counts.

    ``rate_percent`` is 100 * banked_count / total_active rounded half-up
    to one decimal, matching the convention of the source table.
    """

    year: int
    banked_count: int
    total_active: int
    rate_percent: float


_PARAM_NUMBER_FIELDS = (
    "a",
    "phi",
    "theta",
    "gamma",
    "kappa_max",
    "Gamma_gain",
    "p1",
    "p2",
    "s",
    "q",
    "w",
    "G2",
    "G3",
)

_RUN_SECTION = {
    RunKind.SOLVE: None,
    RunKind.SIMULATE: "abm",
    RunKind.SWEEP: "sweep",
    RunKind.CASE_DATA: "case_data",
}


def bundled_path(name: str) -> Path:
    """Filesystem path of a data file shipped with the package."""
    path = Path(str(resources.files("reformgame") / "data" / name))
    if not path.exists():
        raise FileNotFoundError(f"no bundled data file named {name!r}")
    return path


def _require_number(obj: dict, key: str, where: str) -> float:
    if key not in obj:
        raise ScenarioSchemaError(f"{where}.{key}", f"missing required field {where}.{key}")
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioSchemaError(
            f"{where}.{key}", f"{where}.{key} must be a number, got {value!r}"
        )
    return float(value)


def _require_int(obj: dict, key: str, where: str) -> int:
    if key not in obj:
        raise ScenarioSchemaError(f"{where}.{key}", f"missing required field {where}.{key}")
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioSchemaError(
            f"{where}.{key}", f"{where}.{key} must be an integer, got {value!r}"
        )
    return value


def _require_str(obj: dict, key: str, where: str) -> str:
    if key not in obj:
        raise ScenarioSchemaError(f"{where}.{key}", f"missing required field {where}.{key}")
    value = obj[key]
    if not isinstance(value, str):
        raise ScenarioSchemaError(
            f"{where}.{key}", f"{where}.{key} must be a string, got {value!r}"
        )
    return value


def _check_unknown(obj: dict, allowed: Sequence[str], where: str) -> None:
    for key in obj:
        if key not in allowed:
            raise ScenarioSchemaError(
                f"{where}.{key}" if where else key,
                f"unknown field {key!r} in {where or 'scenario'}",
            )


def _enum_value(raw: str, enum_cls: type[Enum], where: str) -> Any:
    try:
        return enum_cls(raw)
    except ValueError:
        options = ", ".join(e.value for e in enum_cls)
        raise ScenarioSchemaError(where, f"{where} must be one of: {options}; got {raw!r}")


def _parse_params(obj: Any) -> ModelParams:
    if not isinstance(obj, dict):
        raise ScenarioSchemaError("params", "params must be an object")
    allowed = _PARAM_NUMBER_FIELDS + (
        "leader_type",
        "threshold_convention",
        "posterior_convention",
    )
    _check_unknown(obj, allowed, "params")
    numbers = {name: _require_number(obj, name, "params") for name in _PARAM_NUMBER_FIELDS}
    leader = _enum_value(
        _require_str(obj, "leader_type", "params"), LeaderType, "params.leader_type"
    )
    threshold = ThresholdConvention.DERIVED_CONSISTENT
    if "threshold_convention" in obj:
        threshold = _enum_value(
            _require_str(obj, "threshold_convention", "params"),
            ThresholdConvention,
            "params.threshold_convention",
        )
    posterior = PosteriorConvention.PAPER
    if "posterior_convention" in obj:
        posterior = _enum_value(
            _require_str(obj, "posterior_convention", "params"),
            PosteriorConvention,
            "params.posterior_convention",
        )
    return ModelParams(
        leader_type=leader,
        threshold_convention=threshold,
        posterior_convention=posterior,
        **numbers,
    )


def _parse_abm(obj: Any) -> AbmSettings:
    if not isinstance(obj, dict):
        raise ScenarioSchemaError("abm", "abm must be an object")
    _check_unknown(obj, ("n", "replications", "seed"), "abm")
    return AbmSettings(
        n=_require_int(obj, "n", "abm"),
        replications=_require_int(obj, "replications", "abm"),
        seed=_require_int(obj, "seed", "abm"),
    )


def _parse_sweep(obj: Any) -> SweepSettings:
    if not isinstance(obj, dict):
        raise ScenarioSchemaError("sweep", "sweep must be an object")
    _check_unknown(obj, ("parameter_name", "values"), "sweep")
    name = _require_str(obj, "parameter_name", "sweep")
    raw = obj.get("values")
    if not isinstance(raw, list) or not raw:
        raise ScenarioSchemaError("sweep.values", "sweep.values must be a non-empty array")
    values = []
    for i, v in enumerate(raw):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ScenarioSchemaError(
                "sweep.values", f"sweep.values[{i}] must be a number, got {v!r}"
            )
        values.append(float(v))
    return SweepSettings(parameter_name=name, values=tuple(values))


def _parse_case_data(obj: Any) -> CaseDataSettings:
    if not isinstance(obj, dict):
        raise ScenarioSchemaError("case_data", "case_data must be an object")
    _check_unknown(obj, ("path",), "case_data")
    return CaseDataSettings(path=_require_str(obj, "path", "case_data"))


def load_scenario(path: str | Path) -> Scenario:
    """Load and fully validate a scenario file.

    Raises :class:`ScenarioParseError` for malformed JSON,
    :class:`ScenarioSchemaError` for a shape violation (naming the field),
    and :class:`~reformgame.model.ParameterError` when the parameters break
    a model constraint.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(raw, dict):
        raise ScenarioSchemaError("", "scenario must be a JSON object")

    _check_unknown(raw, ("label", "run", "params", "abm", "sweep", "case_data"), "")
    label = _require_str(raw, "label", "scenario").strip()
    run = _enum_value(_require_str(raw, "run", "scenario"), RunKind, "run")
    if "params" not in raw:
        raise ScenarioSchemaError("params", "missing required field params")
    params = validate_params(_parse_params(raw["params"]))

    sections = {
        "abm": _parse_abm(raw["abm"]) if "abm" in raw else None,
        "sweep": _parse_sweep(raw["sweep"]) if "sweep" in raw else None,
        "case_data": _parse_case_data(raw["case_data"]) if "case_data" in raw else None,
    }
    required = _RUN_SECTION[run]
    for name, parsed in sections.items():
        if name == required and parsed is None:
            raise ScenarioSchemaError(
                name, f"run = {run.value!r} requires a {name!r} section"
            )
        if name != required and parsed is not None:
            raise ScenarioSchemaError(
                name, f"section {name!r} is not allowed when run = {run.value!r}"
            )

    return Scenario(
        label=label,
        run=run,
        params=params,
        abm=sections["abm"],
        sweep=sections["sweep"],
        case_data=sections["case_data"],
    )


def _params_to_dict(params: ModelParams) -> dict[str, Any]:
    out: dict[str, Any] = {name: getattr(params, name) for name in _PARAM_NUMBER_FIELDS}
    out["leader_type"] = params.leader_type.value
    out["threshold_convention"] = params.threshold_convention.value
    out["posterior_convention"] = params.posterior_convention.value
    return out


def scenario_to_dict(scenario: Scenario) -> dict[str, Any]:
    out: dict[str, Any] = {
        "label": scenario.label,
        "run": scenario.run.value,
        "params": _params_to_dict(scenario.params),
    }
    if scenario.abm is not None:
        out["abm"] = {
            "n": scenario.abm.n,
            "replications": scenario.abm.replications,
            "seed": scenario.abm.seed,
        }
    if scenario.sweep is not None:
        out["sweep"] = {
            "parameter_name": scenario.sweep.parameter_name,
            "values": list(scenario.sweep.values),
        }
    if scenario.case_data is not None:
        out["case_data"] = {"path": scenario.case_data.path}
    return out


def write_scenario(scenario: Scenario, path: str | Path) -> None:
    """Save a scenario as JSON; loading it back reproduces an equal Scenario."""
    Path(path).write_text(
        json.dumps(scenario_to_dict(scenario), indent=2) + "\n", encoding="utf-8"
    )


def _fmt(value: Any) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".12g")
    if isinstance(value, Enum):
        return str(value.value)
    return str(value)


def _json_number(value: float) -> float:
    # Round-trips through the 12-significant-digit rendering so JSON and
    # CSV report identical values.
    return float(format(value, ".12g"))


_EQUILIBRIUM_CSV_COLUMNS = (
    "convention",
    "kappa_star",
    "x_star",
    "psi_star",
    "effective_gain",
    "iterations",
    "residual",
    "closed_form_gap",
)

_ABM_CSV_COLUMNS = (
    "mean_x",
    "stderr_x",
    "mean_success_rate",
    "replications",
    "agents_per_replication",
    "analytic_x",
    "abs_gap",
)


def _equilibrium_rows(result: EquilibriumResult) -> tuple[tuple[str, ...], list[tuple]]:
    row = (
        result.convention,
        result.kappa_star,
        result.x_star,
        result.psi_star,
        result.effective_gain,
        result.iterations,
        result.residual,
        result.closed_form_gap,
    )
    return _EQUILIBRIUM_CSV_COLUMNS, [row]


def _sweep_rows(series: SweepSeries) -> tuple[tuple[str, ...], list[tuple]]:
    header = ("parameter", "value", "kappa_star", "x_star", "psi_star")
    rows = [
        (series.parameter_name, value, point.kappa_star, point.x_star, point.psi_star)
        for value, point in zip(series.values, series.outputs)
    ]
    return header, rows


def _abm_rows(est: AbmEstimate) -> tuple[tuple[str, ...], list[tuple]]:
    row = tuple(getattr(est, name) for name in _ABM_CSV_COLUMNS)
    return _ABM_CSV_COLUMNS, [row]


def _case_rows(rows: Sequence[BancarizationSeries]) -> tuple[tuple[str, ...], list[tuple]]:
    header = ("year", "banked_count", "total_active", "rate_percent")
    data = [(r.year, r.banked_count, r.total_active, r.rate_percent) for r in rows]
    return header, data


def _to_table(result: Any) -> tuple[tuple[str, ...], list[tuple]]:
    if isinstance(result, EquilibriumReport):
        result = result.equilibrium
    if isinstance(result, EquilibriumResult):
        return _equilibrium_rows(result)
    if isinstance(result, SweepSeries):
        return _sweep_rows(result)
    if isinstance(result, AbmEstimate):
        return _abm_rows(result)
    if isinstance(result, (list, tuple)) and result and all(
        isinstance(r, BancarizationSeries) for r in result
    ):
        return _case_rows(result)
    raise TypeError(f"no writer for results of type {type(result).__name__}")


def _to_json_payload(result: Any) -> Any:
    if isinstance(result, EquilibriumReport):
        result = result.equilibrium
    if isinstance(result, EquilibriumResult):
        return {
            "kappa_star": _json_number(result.kappa_star),
            "x_star": _json_number(result.x_star),
            "expected_participation": _json_number(result.expected_participation),
            "psi_star": _json_number(result.psi_star),
            "effective_gain": _json_number(result.effective_gain),
            "convention": result.convention.value,
            "iterations": result.iterations,
            "residual": _json_number(result.residual),
            "closed_form_gap": _json_number(result.closed_form_gap),
        }
    if isinstance(result, SweepSeries):
        return {
            "parameter_name": result.parameter_name,
            "values": [_json_number(v) for v in result.values],
            "outputs": [
                {
                    "kappa_star": _json_number(p.kappa_star),
                    "x_star": _json_number(p.x_star),
                    "psi_star": _json_number(p.psi_star),
                }
                for p in result.outputs
            ],
            "monotonicity": result.monotonicity.value,
            "target": result.target,
            "skipped": [[_json_number(v), reason] for v, reason in result.skipped],
        }
    if isinstance(result, AbmEstimate):
        return {
            "mean_x": _json_number(result.mean_x),
            "stderr_x": _json_number(result.stderr_x),
            "mean_success_rate": _json_number(result.mean_success_rate),
            "replications": result.replications,
            "agents_per_replication": result.agents_per_replication,
            "analytic_x": _json_number(result.analytic_x),
            "abs_gap": _json_number(result.abs_gap),
        }
    if isinstance(result, (list, tuple)) and result and all(
        isinstance(r, BancarizationSeries) for r in result
    ):
        return [
            {
                "year": r.year,
                "banked_count": r.banked_count,
                "total_active": r.total_active,
                "rate_percent": _json_number(r.rate_percent),
            }
            for r in result
        ]
    raise TypeError(f"no writer for results of type {type(result).__name__}")


def write_results(result: Any, path: str | Path, format: str = "csv") -> None:
    """Persist a result record as CSV or JSON.

    Supports equilibrium results (and reports), sweep series, Monte Carlo
    estimates, and case-table rows. Floats carry 12 significant digits and
    the output contains nothing run-dependent, so rewriting the same result
    yields byte-identical files.
    """
    path = Path(path)
    if format == "csv":
        header, rows = _to_table(result)
        lines = [",".join(header)]
        lines += [",".join(_fmt(cell) for cell in row) for row in rows]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    elif format == "json":
        payload = _to_json_payload(result)
        path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    else:
        raise ValueError(f"unknown output format {format!r}; expected 'csv' or 'json'")


def _rate_half_up_tenths(banked: int, total: int) -> float:
    # Integer arithmetic keeps the half-up rounding exact.
    tenths, remainder = divmod(banked * 1000, total)
    if 2 * remainder >= total:
        tenths += 1
    return tenths / 10.0


def ingest_case_table(path: str | Path) -> tuple[BancarizationSeries, ...]:
    """Read a banked-payroll CSV (year, banked_count, total_active).

    Computes the banked rate for each row with half-up rounding to one
    decimal. Malformed rows, zero totals, and counts exceeding the total
    are rejected with their row number.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise CaseTableError(f"{path}: empty file")
        expected = ["year", "banked_count", "total_active"]
        if [h.strip() for h in header] != expected:
            raise CaseTableError(
                f"{path}: header must be {','.join(expected)}, got {','.join(header)}"
            )
        out: list[BancarizationSeries] = []
        for row_num, row in enumerate(reader, start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 3:
                raise CaseTableError(f"expected 3 columns, got {len(row)}", row=row_num)
            try:
                year, banked, total = (int(cell.strip()) for cell in row)
            except ValueError:
                raise CaseTableError(f"non-integer value in {row!r}", row=row_num)
            if total <= 0:
                raise CaseTableError(f"total_active must be positive, got {total}", row=row_num)
            if banked < 0:
                raise CaseTableError(f"banked_count must be >= 0, got {banked}", row=row_num)
            if banked > total:
                raise CaseTableError(
                    f"banked_count {banked} exceeds total_active {total}", row=row_num
                )
            out.append(
                BancarizationSeries(
                    year=year,
                    banked_count=banked,
                    total_active=total,
                    rate_percent=_rate_half_up_tenths(banked, total),
                )
            )
    if not out:
        raise CaseTableError(f"{path}: no data rows")
    return tuple(out)
