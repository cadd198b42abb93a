import io
import json

import pytest

import main
from harness.selftest_harness import CheckResult, SelftestReport
from services.errors import GluingMismatchError
from services.groups import dump_group_file


def invoke(*argv):
    stdout, stderr = io.StringIO(), io.StringIO()
    code = main.run(list(argv), stdout=stdout, stderr=stderr)
    return code, stdout.getvalue(), stderr.getvalue()


def invoke_json(*argv):
    code, out, err = invoke(*argv)
    assert code == 0, err
    return json.loads(out)


def diagnostic(err):
    return json.loads(err.strip().splitlines()[-1])


def test_bundle_count_only():
    payload = invoke_json(
        "bundles", "--group", "preset:Z2", "--genus", "0", "--points", "2", "--count-only"
    )
    assert payload == {"count": 4}


def test_bundle_histogram_and_list():
    payload = invoke_json("bundles", "--group", "preset:Z2", "--points", "2", "--list")
    assert payload["count"] == 4
    assert sum(row["count"] for row in payload["grade_histogram"]) == 4
    assert len(payload["bundles"]) == 4
    assert list(payload) == ["count", "grade_histogram", "bundles"]


def test_selftest_z2():
    code, out, err = invoke("selftest", "--group", "preset:Z2")
    assert code == 0, err
    payload = json.loads(out)
    assert payload["passed"] is True
    names = [check["name"] for check in payload["checks"]]
    assert names[0] == "character_tables"
    assert "gluing_bijection" in names and "closed_surfaces" in names


def test_group_command():
    payload = invoke_json("group", "--group", "preset:S3")
    assert payload["order"] == 6
    assert payload["character_table"]["degrees"] == [1, 1, 2]
    assert [c["size"] for c in payload["classes"]] == [1, 3, 2]
    code, out, _err = invoke("group", "--group", "preset:S3", "--format", "text")
    assert code == 0
    assert out.splitlines()[0] == "S3: order 6, 3 classes"


def test_double_command():
    payload = invoke_json("double", "--group", "preset:S3", "--fusion")
    assert payload["count"] == 8
    assert payload["sum_dim_squared"] == 36
    assert [label["dim"] for label in payload["labels"]] == [1, 1, 2, 3, 3, 2, 2, 2]
    assert all(label["dual"] == label["index"] for label in payload["labels"])
    assert [0, 0, 0, 1] in payload["fusion"]


def test_dims_command():
    payload = invoke_json(
        "dims", "--group", "preset:S3", "--genus", "1", "--points", "1", "--labels", "vacuum"
    )
    assert payload["dimension"] == 8
    assert payload["routes"] == {"characters": 8, "verlinde": 8}

    payload = invoke_json("dims", "--group", "preset:S3", "--labels", "2*vacuum+([1],r0)")
    assert payload["dimension"] == 2

    payload = invoke_json(
        "dims", "--group", "preset:S3", "--points", "2", "--labels", "([1],r0),([1],r0)",
        "--method", "all",
    )
    assert payload["dimension"] == 1
    assert "enumeration" in payload["skipped"]


def test_dims_full_table():
    payload = invoke_json("dims", "--group", "preset:Z2", "--points", "2")
    assert len(payload["entries"]) == 4
    assert payload["weighted_total"] == 4
    code, out, _err = invoke("dims", "--group", "preset:Z2", "--points", "2", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "labels,dimension"


def test_glue_check_command():
    payload = invoke_json(
        "glue-check", "--group", "preset:S3", "--genus", "1", "--points", "1",
        "--labels", "vacuum",
    )
    assert payload["bijection"]["bundle_count"] == 36
    assert payload["bijection"]["passed"] is True
    assert payload["pieces"] == [[0, 3]]
    (record,) = payload["gluing"]
    assert record["dimension"] == 8
    assert sum(record["contributions"].values()) == 8


def test_glue_check_separating():
    payload = invoke_json(
        "glue-check", "--group", "preset:Z2", "--points", "2", "--cut", "separating:0:p1"
    )
    assert payload["pieces"] == [[0, 2], [0, 2]]
    assert len(payload["gluing"]) == 16


def test_modular_and_verlinde_commands():
    payload = invoke_json("modular", "--group", "preset:Z2")
    assert payload["labels"][0] == "([0],r0)"
    assert len(payload["S"]) == 4
    assert payload["T"][3]["approx"] == ["-1.0", "0.0"]

    assert invoke_json("verlinde", "--group", "preset:S3", "--genus", "1")["dimension"] == 8
    assert invoke_json("verlinde", "--group", "preset:Z2", "--genus", "1")["dimension"] == 4
    payload = invoke_json(
        "verlinde", "--group", "preset:S3", "--labels", "([1],r0),([1],r0),([0],r2)"
    )
    assert payload["dimension"] == 1


def test_group_file_source(tmp_path, s3):
    path = tmp_path / "group.json"
    dump_group_file(s3, str(path))
    payload = invoke_json("verlinde", "--group", str(path), "--genus", "2")
    assert payload["dimension"] == 116


def test_output_is_deterministic():
    first = invoke("double", "--group", "preset:Q8")
    second = invoke("double", "--group", "preset:Q8", "--threads", "2")
    assert first[1] == second[1]


@pytest.mark.parametrize(
    "argv, kind",
    [
        (["bundles", "--group", "preset:X9"], "unknown_preset"),
        (["dims", "--group", "preset:S3", "--labels", "nope"], "unknown_label"),
        (["dims", "--group", "preset:S3", "--points", "2", "--labels", "vacuum"], "usage_error"),
        (["dims", "--group", "preset:S3", "--method", "guess"], "usage_error"),
        (["glue-check", "--group", "preset:S3", "--cut", "nonseparating"], "invalid_cut"),
        (["bundles", "--threads", "0"], "usage_error"),
        (["bundles", "--group", "missing.json"], "invalid_group"),
        ([], "usage_error"),
        (["bundles", "--group", "preset:Z2", "--points", "0"], "usage_error"),
        (["bundles", "--group", "preset:Z2", "--genus", "-1"], "usage_error"),
        (["dims", "--group", "preset:Z2", "--genus", "-1", "--points", "0"], "usage_error"),
        (
            ["dims", "--group", "preset:Z2", "--points", "0", "--method", "characters"],
            "usage_error",
        ),
        (["dims", "--group", "preset:Z2", "--points", "0", "--labels", "vacuum"], "usage_error"),
        (
            ["glue-check", "--group", "preset:Z2", "--genus", "1", "--labels", "vacuum,vacuum"],
            "usage_error",
        ),
        (
            [
                "glue-check", "--group", "preset:Z2", "--points", "2",
                "--cut", "separating:0:p1", "--labels", "vacuum",
            ],
            "usage_error",
        ),
    ],
)
def test_usage_errors_exit_1(argv, kind):
    code, out, err = invoke(*argv)
    assert code == 1
    assert out == ""
    assert diagnostic(err)["error"] == kind


@pytest.mark.parametrize(
    "name, value", [("FGMF_THREADS", "abc"), ("FGMF_STATE_CAP", "0"), ("FGMF_GRID_CAP", "1.5")]
)
def test_bad_environment_exit_1(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    code, out, err = invoke("bundles", "--group", "preset:Z2")
    assert code == 1
    assert out == ""
    assert diagnostic(err)["error"] == "usage_error"


def test_dims_on_closed_surfaces():
    payload = invoke_json("dims", "--group", "preset:S3", "--genus", "2", "--points", "0")
    assert payload["points"] == 0
    assert payload["routes"] == {"verlinde": 116}
    payload = invoke_json(
        "dims", "--group", "preset:S3", "--genus", "1", "--points", "0", "--method", "all"
    )
    assert payload["routes"] == {"enumeration": 8, "verlinde": 8}
    assert payload["skipped"] == {"characters": "closed surface"}
    assert payload["dimension"] == 8
    payload = invoke_json("dims", "--group", "preset:Z2", "--genus", "0", "--points", "0")
    assert payload["dimension"] == 1


def test_modular_text_shows_approximations():
    code, out, err = invoke("modular", "--group", "preset:Z2", "--format", "text")
    assert code == 0, err
    assert "-1 (~-1+0i)" in out
    assert "1/2 (~0.5+0i)" in out


def test_caps_exit_2():
    code, _out, err = invoke(
        "bundles", "--group", "preset:S3", "--points", "3", "--state-cap", "10"
    )
    assert code == 2
    payload = diagnostic(err)
    assert payload["error"] == "cap_exceeded"
    assert payload["payload"]["cap"] == 10


def test_invariant_violations_exit_3(monkeypatch):
    def broken(*_args):
        raise GluingMismatchError("gluing identity fails", {"labels": [0]})

    monkeypatch.setitem(main.COMMANDS, "verlinde", broken)
    code, _out, err = invoke("verlinde", "--group", "preset:Z2")
    assert code == 3
    assert diagnostic(err) == {
        "error": "gluing_mismatch",
        "message": "gluing identity fails",
        "payload": {"labels": [0]},
    }


def _failing_harness(error):
    class Harness:
        def __init__(self, *_args):
            pass

        def run(self):
            check = CheckResult(name="bundle_counts", passed=False, seconds=0.0, error=error)
            return SelftestReport(group="Z2", order=2, labels=4, checks=[check], passed=False)

    return Harness


@pytest.mark.parametrize(
    "error, code, kind",
    [
        ({"error": "invariant_violation", "message": "count"}, 3, "selftest_failure"),
        ({"error": "cap_exceeded", "message": "cap"}, 2, "cap_exceeded"),
    ],
)
def test_selftest_failures(monkeypatch, error, code, kind):
    monkeypatch.setattr(main, "SelftestHarness", _failing_harness(error))
    status, out, err = invoke("selftest", "--group", "preset:Z2")
    assert status == code
    assert out == ""
    payload = diagnostic(err)
    assert payload["error"] == kind
    assert payload["payload"]["check"] == "bundle_counts"


def test_split_labels():
    assert main.split_labels("vacuum, ([1],r0),3") == ["vacuum", "([1],r0)", "3"]
    assert main.split_labels("") == []


def test_verbose_text_banners():
    code, out, err = invoke("group", "--group", "preset:Z2", "--format", "text", "--verbose")
    assert code == 0
    assert out
    assert "group: Z2 (order 2)" in err
    assert "✓ done" in err
    assert set(vars(main.Colors)) >= {"CYAN", "GREEN", "YELLOW", "BOLD", "END"}
    assert not {"HEADER", "BLUE", "RED"} & set(vars(main.Colors))
