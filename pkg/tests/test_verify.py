import json
from importlib import resources

import pytest

from lgradial import DomainError, run_verify
from lgradial.verify import ALL_SUITES, SUITES, CheckRecord, Report


def test_every_suite_is_registered():
    assert set(SUITES) == set(ALL_SUITES)


@pytest.mark.parametrize("name", ["specfun", "algebra", "states", "fields", "twomode", "asymptotic"])
def test_suite_passes(name: str):
    report = run_verify(name)
    assert report.records
    assert report.passed, [r.check for r in report.failures]
    assert {r.suite for r in report.records} == {name}


@pytest.mark.slow
def test_figures_suite_passes():
    report = run_verify("figures")
    assert report.passed, [r.check for r in report.failures]
    assert any(r.informational for r in report.records)


def test_tolerance_scale():
    tight = run_verify("twomode", tol_scale=1e-3)
    loose = run_verify("twomode", tol_scale=10.0)
    assert tight.tol_scale == 1e-3
    assert [r.tolerance for r in loose.records] == pytest.approx([r.tolerance * 1e4 for r in tight.records])


def test_several_suites():
    report = run_verify(["twomode", "specfun"])
    suites = [r.suite for r in report.records]
    assert suites.index("specfun") > suites.index("twomode")


def test_unknown_suite():
    with pytest.raises(DomainError):
        run_verify("nope")


def test_report_document():
    report = Report(
        2.0,
        [
            CheckRecord("algebra", "a", 1e-13, 2e-12, True),
            CheckRecord("figures", "b", 4.0, 0.0, True, informational=True),
        ],
    )
    data = report.to_dict()
    assert data["schema"] == "report-v1"
    assert data["passed"] is True
    assert data["records"][0] == {
        "suite": "algebra",
        "check": "a",
        "residual": 1e-13,
        "tolerance": 2e-12,
        "pass": True,
    }
    assert data["records"][1]["informational"] is True

    failing = Report(1.0, [CheckRecord("states", "c", 1.0, 0.5, False)])
    assert not failing.passed
    assert failing.failures[0].check == "c"


def test_report_matches_schema_fields():
    schema = json.loads(resources.files("lgradial").joinpath("schemas/report-v1.json").read_text())
    data = run_verify("twomode").to_dict()
    assert set(schema["required"]) <= set(data)
    record_schema = schema["properties"]["records"]["items"]
    allowed = set(record_schema["properties"])
    for record in data["records"]:
        assert set(record_schema["required"]) <= set(record) <= allowed
        assert record["suite"] in record_schema["properties"]["suite"]["enum"]
