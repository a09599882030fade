import json
import subprocess
import sys
from pathlib import Path

import pytest

from looijenga.cli import main
from looijenga.strip import DP3_0_2

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGolden:
    @pytest.mark.parametrize("argv,name", [
        (("open", "--bound", "1,1,1"), "open_b111_w1.json"),
        (("log", "--bound", "2,2,2", "--winding", "2", "--format", "csv", "--genus", "2"),
         "log_b222_w2.csv"),
        (("log", "--total-degree", "2"), "log_t2.json"),
        (("bps", "--total-degree", "4", "--format", "csv"), "bps_t4.csv"),
        (("verify-dp3", "--total-degree", "4"), "verify_t4.json"),
    ])
    def test_matches_golden(self, capsys, argv, name):
        code, out, _ = run(capsys, *argv)
        assert code == 0
        assert out == (GOLDEN / name).read_text()


class TestOpen:
    def test_row_counts(self, capsys):
        _, out, _ = run(capsys, "open", "--bound", "1,1,1", "--winding", "1")
        assert len(json.loads(out)) == 8
        _, out, _ = run(capsys, "open", "--bound", "0,0,0")
        rows = json.loads(out)
        assert len(rows) == 1 and rows[0]["class"] == [0, 0, 0]
        _, out, _ = run(capsys, "open", "--bound", "2,2,2")
        assert len(json.loads(out)) == 27

    def test_total_degree(self, capsys):
        _, out, _ = run(capsys, "open", "--total-degree", "2")
        assert len(json.loads(out)) == 10

    def test_csv_is_exact(self, capsys):
        _, out, _ = run(capsys, "open", "--bound", "0,0,0", "--format", "csv", "--genus", "2")
        assert out.splitlines() == ["class,winding,g,value", "0 0 0,1,0,1", "0 0 0,1,1,1/24",
                                    "0 0 0,1,2,7/5760"]

    def test_minus_convention_runs(self, capsys):
        code, out, _ = run(capsys, "open", "--bound", "1,0,0", "--convention", "minus")
        assert code == 0 and len(json.loads(out)) == 2


class TestExitCodes:
    def test_missing_bound(self, capsys):
        code, _, err = run(capsys, "open")
        assert code == 2 and "--bound" in err

    def test_wrong_bound_length(self, capsys):
        assert run(capsys, "open", "--bound", "1,1")[0] == 2

    def test_bad_integer_list(self, capsys):
        assert run(capsys, "open", "--bound", "1,x,1")[0] == 2

    def test_bad_contact(self, capsys):
        assert run(capsys, "log", "--bound", "1,1,1", "--contact", "one")[0] == 2
        assert run(capsys, "log", "--bound", "1,1,1", "--contact", "3:1")[0] == 2
        assert run(capsys, "log", "--bound", "1,1,1", "--contact", "1:2", "--winding", "1")[0] == 2

    def test_unknown_geometry(self, capsys):
        code, _, err = run(capsys, "open", "--geometry", "nowhere.json", "--bound", "1,1,1")
        assert code == 2 and "nowhere.json" in err

    def test_dependent_edges(self, capsys, tmp_path):
        obj = DP3_0_2.to_json_obj()
        obj["edges"][2]["class"] = obj["edges"][0]["class"]
        path = tmp_path / "dep.json"
        path.write_text(json.dumps(obj))
        code, _, err = run(capsys, "open", "--geometry", str(path), "--bound", "1,1,1")
        assert code == 2 and "linearly dependent" in err

    def test_schema_error_names_field(self, capsys, tmp_path):
        obj = DP3_0_2.to_json_obj()
        obj["class_map"] = "identity"
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(obj))
        code, _, err = run(capsys, "open", "--geometry", str(path), "--bound", "1,1,1")
        assert code == 2 and "class_map" in err

    def test_argparse_errors_are_input_errors(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["open", "--format", "xml"])
        assert exc.value.code == 2

    def test_empty_bps_table(self, capsys):
        code, out, _ = run(capsys, "bps", "--total-degree", "0")
        assert code == 0 and json.loads(out) == []

    def test_injected_non_polynomial(self, capsys, tmp_path):
        rows = json.loads((GOLDEN / "log_t2.json").read_text())
        target = next(r for r in rows["rows"] if r["class"] == [1, 1, 1, 0])
        target["series"]["value"] = {"num": {"0": 1}, "den": {"0": 1, "2": 1}}
        path = tmp_path / "tampered.json"
        path.write_text(json.dumps(rows))
        code, out, _ = run(capsys, "bps", "--from-log", str(path))
        assert code == 1
        bad = [r for r in json.loads(out) if not r["verdict"]]
        assert bad and "denominator" in bad[0]["witness"]

    def test_untampered_table_passes(self, capsys):
        code, _, _ = run(capsys, "bps", "--from-log", str(GOLDEN / "log_t2.json"))
        assert code == 0

    def test_verification_failure_exit(self, capsys, monkeypatch):
        import looijenga.cli as cli
        from looijenga.qalgebra import QRational
        monkeypatch.setattr(cli, "dp3_closed_form", lambda *d: QRational(7))
        code, out, _ = run(capsys, "verify-dp3", "--total-degree", "3")
        assert code == 1 and json.loads(out)["summary"]["mismatch"] > 0


class TestExpand:
    def test_cosecant(self, capsys):
        value = json.dumps({"i_power": 1, "value": {"num": {"0": 1}, "den": {"1": 1, "-1": -1}}})
        code, out, _ = run(capsys, "expand", value, "--genus", "2")
        assert code == 0
        assert json.loads(out)["genus"] == ["1", "1/24", "7/5760"]

    def test_parity_violation(self, capsys):
        code, out, _ = run(capsys, "expand", '{"num": {"0": 1}, "den": {"0": 1}}', "--genus", "1")
        assert code == 1 and json.loads(out)["parity_violation"]["exponent"] == 0

    def test_file_input(self, capsys, tmp_path):
        path = tmp_path / "v.json"
        path.write_text('{"num": {"1": 1, "-1": -1}, "den": {"0": 1}}')
        code, out, _ = run(capsys, "expand", str(path), "--format", "csv", "--order", "3")
        assert code == 0
        assert out.splitlines() == ["exponent,re,im", "1,0,1", "3,0,-1/24"]

    def test_bad_json(self, capsys):
        assert run(capsys, "expand", "{not json")[0] == 2


def test_parallel_output_is_byte_identical(capsys):
    outs = []
    for jobs in ("1", "3"):
        code, out, _ = run(capsys, "verify-dp3", "--total-degree", "5", "--jobs", jobs)
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "looijenga", "verify-dp3", "--total-degree", "3",
                           "--format", "csv"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "mismatch" not in proc.stdout
