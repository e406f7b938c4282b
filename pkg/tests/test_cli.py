import json

import pytest

from qcurves.cli import main, parse_int
from qcurves.records import CurveSpec, format_records

from conftest import N1, P80


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestParseInt:
    def test_forms(self):
        assert parse_int("2^80-93") == P80
        assert parse_int("0x10") == 16 and parse_int("-7") == -7 and parse_int("2^5") == 32


class TestValidate:
    def test_example1(self, capsys):
        code, out, _ = run(capsys, "validate", "--example", "1", "--trials", "10")
        assert code == 0 and "FAIL" not in out

    def test_composite_p(self, capsys):
        code, out, _ = run(capsys, "validate", "--p", "15", "--delta", "2")
        assert code == 1 and "p is prime" in out

    def test_square_delta(self, capsys):
        code, out, _ = run(capsys, "validate", "--p", "11", "--delta", "3")
        assert code == 1 and "nonsquare" in out

    def test_wrong_order(self, capsys):
        code, out, _ = run(capsys, "validate", "--example", "1", "--order", str(2 * N1 + 2), "--n", str(N1 + 1))
        assert code == 1

    def test_json(self, capsys):
        code, out, _ = run(capsys, "validate", "--example", "1", "--twist", "--json", "--trials", "5")
        data = json.loads(out)
        assert code == 0 and data["ok"] and data["p"] == P80 and "lambda" in data and "r" in data


class TestUsage:
    def test_unknown_command(self, capsys):
        assert run(capsys, "frobnicate")[0] == 2

    def test_missing_curve(self, capsys):
        assert run(capsys, "models")[0] == 2

    def test_bsgs_gate(self, capsys):
        assert run(capsys, "recover-r", "--example", "2")[0] == 2
        assert run(capsys, "count", "--example", "1", "--method", "bsgs")[0] == 2

    def test_needs_certificate(self, capsys):
        assert run(capsys, "decompose", "--p", "11", "--delta", "2", "--s", "1", "--m", "5")[0] == 2

    def test_exhaustive_too_large(self, capsys):
        assert run(capsys, "count", "--example", "1")[0] == 2


class TestCommands:
    def test_decompose_json(self, capsys):
        code, out, _ = run(capsys, "decompose", "--example", "1", "--m", str(N1 // 3), "--json")
        data = json.loads(out)
        assert code == 0
        assert (data["a"] + data["b"] * data["lambda"] - N1 // 3) % data["n"] == 0
        assert max(abs(data["a"]), abs(data["b"])).bit_length() <= 80

    def test_mul_strategies_agree(self, capsys):
        res = []
        for strat in ("baseline", "endo"):
            code, out, _ = run(capsys, "mul", "--example", "1", "--m", str(N1 - 12345), "--strategy", strat, "--count-ops", "--json")
            assert code == 0
            res.append(json.loads(out))
        assert res[0]["result"] == res[1]["result"]
        assert res[1]["doublings"] <= 80 < res[0]["doublings"]

    def test_models(self, capsys):
        code, out, _ = run(capsys, "models", "--p", "13", "--s", "1", "--json")
        data = json.loads(out)
        assert code == 0 and "montgomery" in data and "dik" in data

    def test_models_degree3(self, capsys):
        code, out, _ = run(capsys, "models", "--p", "11", "--d", "3", "--s", "2")
        assert code == 0 and "dik" in out

    def test_count_both_methods(self, capsys):
        out = []
        for method in ("exhaustive", "bsgs"):
            code, text, _ = run(capsys, "count", "--p", "23", "--d", "3", "--s", "4", "--method", method, "--json")
            assert code == 0
            out.append(json.loads(text))
        assert out[0]["order"] == out[1]["order"] and out[0]["r"] == out[1]["r"]

    def test_recover_r_small(self, capsys):
        code, out, _ = run(capsys, "recover-r", "--p", "2^31-1", "--delta", "-1", "--s", "7", "--json")
        assert code == 0 and "r" in json.loads(out)

    def test_bench(self, capsys):
        code, out, _ = run(capsys, "bench", "--example", "1", "--trials", "10", "--json")
        data = json.loads(out)
        assert code == 0 and data["doubling_ratio"] <= 0.55
        assert [r["strategy"] for r in data["reports"]] == ["baseline", "endo"]

    def test_verify_cert(self, capsys, tmp_path):
        good = tmp_path / "good.txt"
        good.write_text(format_records([CurveSpec(P80, 2, 2, 4556, False, "e1", order=2 * N1, n=N1)]))
        assert run(capsys, "verify-cert", "--file", str(good), "--trials", "5")[0] == 0
        bad = tmp_path / "bad.txt"
        bad.write_text(format_records([CurveSpec(P80, 2, 2, 4557, False, "e1", order=2 * N1, n=N1)]))
        assert run(capsys, "verify-cert", "--file", str(bad), "--trials", "5")[0] == 1
        assert run(capsys, "verify-cert", "--file", str(tmp_path / "missing.txt"))[0] == 2

    def test_repro(self, capsys):
        code, out, _ = run(capsys, "repro", "--points", "50", "--trials", "10", "--samples", "100")
        assert code == 0 and "FAIL" not in out

    def test_seed_determinism(self, capsys):
        a = run(capsys, "mul", "--example", "1", "--m", "77", "--seed", "5")[1]
        b = run(capsys, "mul", "--example", "1", "--m", "77", "--seed", "5")[1]
        assert a == b
