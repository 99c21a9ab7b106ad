import json

import pytest

from reformgame import (
    AbmSettings,
    BancarizationSeries,
    CaseDataSettings,
    CaseTableError,
    LeaderType,
    ParameterError,
    PosteriorConvention,
    RunKind,
    Scenario,
    ScenarioParseError,
    ScenarioSchemaError,
    SweepSettings,
    ThresholdConvention,
    bundled_path,
    equilibrium_report,
    estimate_equilibrium,
    grid_sweep,
    ingest_case_table,
    load_scenario,
    write_results,
    write_scenario,
)

from conftest import BASELINE, make_params

BASE_PARAMS_JSON = {
    "a": 0.5,
    "phi": 2.0,
    "theta": 0.2,
    "gamma": 0.8,
    "kappa_max": 1.0,
    "Gamma_gain": 1.0,
    "p1": 0.3,
    "p2": 0.4,
    "s": 0.5,
    "q": 1.0,
    "w": 1.0,
    "G2": 0.0,
    "G3": 1.0,
    "leader_type": "non-partisan",
}


def write_json(tmp_path, payload, name="scenario.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


def solve_payload(**overrides):
    params = dict(BASE_PARAMS_JSON)
    params.update(overrides.pop("params", {}))
    payload = {"label": "test", "run": "solve", "params": params}
    payload.update(overrides)
    return payload


class TestLoadScenario:
    def test_bundled_baseline(self):
        scenario = load_scenario(bundled_path("baseline.json"))
        assert scenario.label == "baseline"
        assert scenario.run is RunKind.SOLVE
        assert scenario.params == BASELINE
        assert scenario.abm is None and scenario.sweep is None

    def test_conventions_default_when_omitted(self, tmp_path):
        scenario = load_scenario(write_json(tmp_path, solve_payload()))
        assert scenario.params.threshold_convention is ThresholdConvention.DERIVED_CONSISTENT
        assert scenario.params.posterior_convention is PosteriorConvention.PAPER

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ScenarioParseError):
            load_scenario(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_scenario(tmp_path / "absent.json")

    def test_missing_param_named(self, tmp_path):
        payload = solve_payload()
        del payload["params"]["theta"]
        with pytest.raises(ScenarioSchemaError) as err:
            load_scenario(write_json(tmp_path, payload))
        assert err.value.field == "params.theta"

    def test_unknown_param_named(self, tmp_path):
        payload = solve_payload(params={"zeta": 1.0})
        with pytest.raises(ScenarioSchemaError) as err:
            load_scenario(write_json(tmp_path, payload))
        assert "zeta" in err.value.field

    def test_unknown_top_level_field(self, tmp_path):
        payload = solve_payload()
        payload["extra"] = 1
        with pytest.raises(ScenarioSchemaError) as err:
            load_scenario(write_json(tmp_path, payload))
        assert "extra" in err.value.field

    def test_param_must_be_number(self, tmp_path):
        payload = solve_payload(params={"a": "0.5"})
        with pytest.raises(ScenarioSchemaError) as err:
            load_scenario(write_json(tmp_path, payload))
        assert err.value.field == "params.a"

    def test_bad_run_value(self, tmp_path):
        payload = solve_payload()
        payload["run"] = "explore"
        with pytest.raises(ScenarioSchemaError) as err:
            load_scenario(write_json(tmp_path, payload))
        assert err.value.field == "run"

    def test_bad_enum_value(self, tmp_path):
        payload = solve_payload(params={"leader_type": "monarch"})
        with pytest.raises(ScenarioSchemaError) as err:
            load_scenario(write_json(tmp_path, payload))
        assert err.value.field == "params.leader_type"

    def test_simulate_requires_abm_section(self, tmp_path):
        payload = solve_payload()
        payload["run"] = "simulate"
        with pytest.raises(ScenarioSchemaError) as err:
            load_scenario(write_json(tmp_path, payload))
        assert err.value.field == "abm"

    def test_solve_rejects_extraneous_section(self, tmp_path):
        payload = solve_payload(abm={"n": 1000, "replications": 2, "seed": 1})
        with pytest.raises(ScenarioSchemaError) as err:
            load_scenario(write_json(tmp_path, payload))
        assert err.value.field == "abm"

    def test_sweep_values_must_be_numbers(self, tmp_path):
        payload = solve_payload(sweep={"parameter_name": "theta", "values": [0.1, "x"]})
        payload["run"] = "sweep"
        with pytest.raises(ScenarioSchemaError) as err:
            load_scenario(write_json(tmp_path, payload))
        assert err.value.field == "sweep.values"

    def test_model_violation_names_the_bound(self):
        with pytest.raises(ParameterError) as err:
            load_scenario(bundled_path("bad_gain_bound.json"))
        assert err.value.constraint == "participant_gain_bound"
        assert "kappa_max/(a*gamma)" in str(err.value)

    def test_scenario_must_be_object(self, tmp_path):
        path = tmp_path / "arr.json"
        path.write_text("[1, 2]", encoding="utf-8")
        with pytest.raises(ScenarioSchemaError):
            load_scenario(path)


class TestScenarioRoundTrip:
    @pytest.mark.parametrize(
        "scenario",
        [
            Scenario(label="solve it", run=RunKind.SOLVE, params=BASELINE),
            Scenario(
                label="simulate it",
                run=RunKind.SIMULATE,
                params=make_params(leader_type=LeaderType.PARTISAN, G2=0.7),
                abm=AbmSettings(n=2000, replications=3, seed=9),
            ),
            Scenario(
                label="sweep it",
                run=RunKind.SWEEP,
                params=make_params(theta=1 / 3),
                sweep=SweepSettings(parameter_name="gamma", values=(0.2, 0.4, 0.8)),
            ),
            Scenario(
                label="case it",
                run=RunKind.CASE_DATA,
                params=BASELINE,
                case_data=CaseDataSettings(path="bancarization.csv"),
            ),
        ],
    )
    def test_write_then_load_is_identity(self, tmp_path, scenario):
        path = tmp_path / "roundtrip.json"
        write_scenario(scenario, path)
        assert load_scenario(path) == scenario


class TestWriteResults:
    def test_equilibrium_csv(self, tmp_path):
        result = equilibrium_report(BASELINE).equilibrium
        path = tmp_path / "eq.csv"
        write_results(result, path, "csv")
        text = path.read_text(encoding="utf-8")
        lines = text.strip().split("\n")
        assert lines[0] == (
            "convention,kappa_star,x_star,psi_star,effective_gain,"
            "iterations,residual,closed_form_gap"
        )
        assert len(lines) == 2
        assert lines[1].startswith("derived-consistent,0.117647058824,0.235294117647,")

    def test_equilibrium_json_mirrors_field_names(self, tmp_path):
        result = equilibrium_report(BASELINE).equilibrium
        path = tmp_path / "eq.json"
        write_results(result, path, "json")
        payload = json.loads(path.read_text(encoding="utf-8"))
        assert payload["kappa_star"] == pytest.approx(2 / 17, rel=1e-11)
        assert payload["expected_participation"] == payload["x_star"]
        assert payload["convention"] == "derived-consistent"
        assert set(payload) == {
            "kappa_star",
            "x_star",
            "expected_participation",
            "psi_star",
            "effective_gain",
            "convention",
            "iterations",
            "residual",
            "closed_form_gap",
        }

    def test_rewrites_are_byte_identical(self, tmp_path):
        result = equilibrium_report(BASELINE).equilibrium
        first = tmp_path / "one.csv"
        second = tmp_path / "two.csv"
        write_results(result, first, "csv")
        write_results(result, second, "csv")
        assert first.read_bytes() == second.read_bytes()

    def test_sweep_csv_rows(self, tmp_path):
        series = grid_sweep(BASELINE, "theta", [0.1, 0.2, 0.3])
        path = tmp_path / "sweep.csv"
        write_results(series, path, "csv")
        lines = path.read_text(encoding="utf-8").strip().split("\n")
        assert lines[0] == "parameter,value,kappa_star,x_star,psi_star"
        assert len(lines) == 4
        assert lines[1].startswith("theta,0.1,")

    def test_singleton_sweep_csv(self, tmp_path):
        series = grid_sweep(BASELINE, "theta", [0.2])
        path = tmp_path / "sweep.csv"
        write_results(series, path, "csv")
        lines = path.read_text(encoding="utf-8").strip().split("\n")
        assert len(lines) == 2

    def test_abm_estimate_csv_columns(self, tmp_path):
        estimate = estimate_equilibrium(BASELINE, n=1000, replications=2, seed=3)
        path = tmp_path / "abm.csv"
        write_results(estimate, path, "csv")
        lines = path.read_text(encoding="utf-8").strip().split("\n")
        assert lines[0] == (
            "mean_x,stderr_x,mean_success_rate,replications,"
            "agents_per_replication,analytic_x,abs_gap"
        )
        assert len(lines) == 2

    def test_case_rows_csv(self, tmp_path):
        rows = ingest_case_table(bundled_path("bancarization.csv"))
        path = tmp_path / "case.csv"
        write_results(list(rows), path, "csv")
        lines = path.read_text(encoding="utf-8").strip().split("\n")
        assert lines[0] == "year,banked_count,total_active,rate_percent"
        assert lines[1] == "2011,26871,874559,3.1"
        assert lines[-1] == "2016,747093,904877,82.6"

    def test_unknown_format_rejected(self, tmp_path):
        result = equilibrium_report(BASELINE).equilibrium
        with pytest.raises(ValueError):
            write_results(result, tmp_path / "x.xml", "xml")

    def test_unknown_record_type_rejected(self, tmp_path):
        with pytest.raises(TypeError):
            write_results(object(), tmp_path / "x.csv", "csv")


class TestIngestCaseTable:
    def test_bundled_rates(self):
        rows = ingest_case_table(bundled_path("bancarization.csv"))
        assert [r.rate_percent for r in rows] == [3.1, 33.8, 70.0, 73.9, 75.6, 82.6]
        assert rows[0] == BancarizationSeries(
            year=2011, banked_count=26871, total_active=874559, rate_percent=3.1
        )

    def test_rates_match_raw_ratio_within_half_a_tenth(self):
        for row in ingest_case_table(bundled_path("bancarization.csv")):
            raw = 100.0 * row.banked_count / row.total_active
            assert abs(raw - row.rate_percent) <= 0.05

    def test_half_up_rounding(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text(
            "year,banked_count,total_active\n2000,5,1000\n2001,15,1000\n", encoding="utf-8"
        )
        rows = ingest_case_table(path)
        # 0.5% and 1.5% sit exactly on the half: both round up.
        assert [r.rate_percent for r in rows] == [0.5, 1.5]
        path.write_text("year,banked_count,total_active\n2000,1,8000\n", encoding="utf-8")
        # 0.0125% rounds half-up at one decimal to 0.0.
        assert ingest_case_table(path)[0].rate_percent == 0.0

    def test_zero_total_rejected_with_row(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text(
            "year,banked_count,total_active\n2000,10,100\n2001,5,0\n", encoding="utf-8"
        )
        with pytest.raises(CaseTableError) as err:
            ingest_case_table(path)
        assert err.value.row == 2

    def test_banked_above_total_rejected(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("year,banked_count,total_active\n2000,101,100\n", encoding="utf-8")
        with pytest.raises(CaseTableError) as err:
            ingest_case_table(path)
        assert err.value.row == 1

    def test_malformed_row_rejected(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("year,banked_count,total_active\n2000,abc,100\n", encoding="utf-8")
        with pytest.raises(CaseTableError) as err:
            ingest_case_table(path)
        assert err.value.row == 1

    def test_wrong_header_rejected(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("annee,banked,total\n2000,1,2\n", encoding="utf-8")
        with pytest.raises(CaseTableError):
            ingest_case_table(path)

    def test_empty_table_rejected(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("year,banked_count,total_active\n", encoding="utf-8")
        with pytest.raises(CaseTableError):
            ingest_case_table(path)
