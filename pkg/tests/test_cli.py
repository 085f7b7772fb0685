import csv
import io
import subprocess
import sys

import pytest

from wentangle import cli
from wentangle import closed_form as cf
from wentangle.qstate import WParams


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse_lines(out):
    return dict(line.split(" ", 1) for line in out.strip().splitlines() if " " in line)


@pytest.fixture
def ghz3(tmp_path):
    path = tmp_path / "ghz3.txt"
    path.write_text("# GHZ on three qubits\n000 0.7071067811865476 0\n111 0.7071067811865476 0\n")
    return path


class TestPmax:
    def test_wn(self, capsys):
        code, out, _ = run(capsys, "pmax", "--wn", "4", "0.5")
        assert code == 0
        assert "closed 0.421875" in out.splitlines()
        fields = parse_lines(out)
        assert fields["regime"] == cf.HIGHLY
        assert float(fields["abs_diff"]) < 1e-9

    def test_w3_six_decimals(self, capsys):
        code, out, _ = run(capsys, "pmax", "--w3", "0.577350", "0.577350", "0.577350")
        assert code == 0
        assert float(parse_lines(out)["closed"]) == pytest.approx(4 / 9, abs=1e-12)
        assert "circumradius" in out

    def test_state_file_oracle(self, capsys, ghz3):
        code, out, _ = run(capsys, "pmax", "--state", str(ghz3), "--method", "oracle")
        assert code == 0
        assert float(parse_lines(out)["oracle"]) == pytest.approx(0.5, abs=1e-9)
        assert "closed" not in out

    def test_state_file_needs_oracle(self, capsys, ghz3):
        code, _, err = run(capsys, "pmax", "--state", str(ghz3), "--method", "closed")
        assert code == 1 and "oracle" in err

    def test_w_state_file_gets_closed_form(self, capsys, tmp_path):
        path = tmp_path / "w3.txt"
        path.write_text("100 0.6\n010 0.48\n001 -0.64\n")
        code, out, _ = run(capsys, "pmax", "--state", str(path))
        assert code == 0
        assert float(parse_lines(out)["closed"]) == pytest.approx(cf.pmax_w3(WParams((0.6, 0.48, 0.64))).pmax)

    def test_nearest_flag(self, capsys):
        code, out, _ = run(capsys, "pmax", "--wn", "3", "0.5773502691896258", "--nearest", "--method", "closed")
        assert code == 0
        lines = out.splitlines()
        factors = lines[lines.index("nearest") + 1:]
        assert len(factors) == 3 and factors[0].startswith("q1 0.816496580928")

    def test_disagreement_exit(self, capsys, monkeypatch):
        real = cf.pmax_w4_two_param

        def skewed(a, b):
            r = real(a, b)
            return cf.OverlapResult(r.pmax + 1e-3, r.regime, r.method)

        monkeypatch.setattr(cf, "pmax_w4_two_param", skewed)
        code, out, _ = run(capsys, "pmax", "--w4", "0.3", "0.4")
        assert code == 2 and "DISAGREE" in out

    @pytest.mark.parametrize(
        "argv",
        [
            ["pmax"],
            ["pmax", "--wn", "4"],
            ["pmax", "--wn", "four", "0.5"],
            ["pmax", "--wn", "4", "1.5"],
            ["pmax", "--w4", "0.9", "0.9"],
            ["pmax", "--w3", "0.5", "0.5", "0.5"],
            ["pmax", "--state", "/nonexistent/file.txt"],
            ["bogus"],
        ],
    )
    def test_bad_input_exit_1(self, capsys, argv):
        with pytest.raises(SystemExit) as exc:
            code = cli.main(argv)
            raise SystemExit(code)
        assert exc.value.code == 1

    def test_output_file(self, tmp_path, capsys):
        out = tmp_path / "r.txt"
        assert cli.main(["pmax", "--wn", "4", "0.5", "--method", "closed", "--out", str(out)]) == 0
        assert out.read_text().startswith("closed 0.421875\n")


class TestNearest:
    def test_closed_form_phase(self, capsys):
        code, out, _ = run(capsys, "nearest", "--wn", "4", "0.5", "--phase", "0.5")
        assert code == 0
        assert out.startswith("pmax 0.421875\n")
        assert len(out.splitlines()) == 5

    def test_slightly_side(self, capsys):
        code, out, _ = run(capsys, "nearest", "--wn", "4", "0.9")
        assert out.splitlines()[-1] == "q4 0 0 1 0"

    def test_oracle_route(self, capsys):
        code, out, _ = run(capsys, "nearest", "--w4", "0.3", "0.4")
        assert code == 0
        assert float(out.split()[1]) == pytest.approx(cf.pmax_w4_two_param(0.3, 0.4).pmax, abs=1e-9)


def sweep(capsys, *extra):
    code, out, _ = run(capsys, "sweep", *extra)
    assert code == 0
    comments = [line for line in out.splitlines() if line.startswith("#")]
    body = [line for line in out.splitlines() if not line.startswith("#")]
    return out, comments, list(csv.reader(io.StringIO("\n".join(body))))


class TestSweep:
    def test_wn_columns_and_order(self, capsys):
        _, comments, rows = sweep(capsys, "--family", "wn", "--n", "4", "--steps", "8")
        assert rows[0] == ["q", "closed", "oracle", "regime", "abs_diff"]
        qs = [float(r[0]) for r in rows[1:]]
        assert qs == sorted(qs) and len(qs) == 8
        for r in rows[1:]:
            assert r[3] == (cf.SLIGHTLY if float(r[0]) > 0.5 ** 0.5 else cf.HIGHLY)
        assert comments[0].startswith("# family=wn")

    def test_abs_diff_is_exact_as_printed(self, capsys):
        _, _, rows = sweep(capsys, "--family", "wn", "--n", "5", "--steps", "6")
        for r in rows[1:]:
            assert float(r[4]) == float(cli.fmt(abs(float(r[1]) - float(r[2]))))
            assert float(r[4]) < 1e-6

    def test_w4_closed_only(self, capsys):
        _, comments, rows = sweep(capsys, "--family", "w4", "--steps", "5", "--methods", "closed")
        assert rows[0] == ["a", "b", "q", "closed", "oracle", "regime", "abs_diff"]
        assert all(r[4] == "" and r[6] == "" for r in rows[1:])
        skipped = [c for c in comments if c.startswith("# skipped")]
        assert len(rows) - 1 + len(skipped) == 25
        assert skipped

    def test_w4_minimum_at_half(self, capsys):
        _, _, rows = sweep(capsys, "--family", "w4", "--steps", "5", "--a-max", "1", "--b-max", "1",
                           "--methods", "closed")
        low = min(rows[1:], key=lambda r: float(r[3]))
        assert (low[0], low[1]) == ("0.5", "0.5") and low[3] == cli.fmt(27 / 64)

    def test_byte_identical(self, capsys):
        args = ("--family", "w4", "--steps", "4", "--seed", "3")
        assert sweep(capsys, *args)[0] == sweep(capsys, *args)[0]

    def test_unwritable_output(self, capsys):
        code, _, err = run(capsys, "sweep", "--family", "wn", "--steps", "3", "--methods", "closed",
                           "--out", "/nonexistent/dir/out.csv")
        assert code == 1

    @pytest.mark.parametrize(
        "extra",
        [["--steps", "1"], ["--methods", "closed,exact"], ["--q-max", "1.5"], ["--n", "2"]],
    )
    def test_invalid_options(self, capsys, extra):
        code, _, _ = run(capsys, "sweep", "--family", "wn", *extra)
        assert code == 1


class TestVerify:
    def test_quick_passes(self, capsys):
        code, out, _ = run(capsys, "verify", "--level", "quick", "--seed", "7")
        assert code == 0
        assert out.count("[PASS]") == 11
        assert "11/11 checks passed" in out

    def test_forced_bug_fails(self, capsys, monkeypatch):
        def wrong_exponent(n, q):
            q2 = q * q
            return (1.0 - q2) ** n * ((n - 2) / ((n - 1) - n * q2)) ** (n - 2)

        monkeypatch.setattr(cf, "pmax_wn_formula", wrong_exponent)
        code, out, _ = run(capsys, "verify", "--level", "quick")
        assert code == 1
        assert "[FAIL] equal-coefficient law" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "wentangle", "pmax", "--wn", "5", "0.4472135954999579",
                           "--method", "closed"], capture_output=True, text=True, check=True)
    assert proc.stdout.splitlines()[0] == "closed 0.4096"
