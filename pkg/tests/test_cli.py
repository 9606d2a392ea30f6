import json

import pytest

from qchar.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_coeffs_golden_head(capsys):
    code, out = run(capsys, "coeffs", "--ell", "3", "--s", "0",
                    "--trunc", "12")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == 1
    assert doc["coeffs"] == [["0", "1"], ["3", "-20"], ["4", "27"],
                             ["9", "56"], ["10", "-162"]]


def test_char_leading_exponent(capsys):
    code, out = run(capsys, "char", "--ell", "3", "--s", "1", "--trunc", "8")
    assert code == 0
    doc = json.loads(out)
    # h_1 - c/24 = 2/3 + 1/6 = 5/6
    assert doc["leading_exp"] == "5/6"
    assert doc["coeffs"][0][1] == "3"


def test_output_is_deterministic(capsys):
    _, out1 = run(capsys, "char", "--ell", "4", "--s", "2", "--trunc", "10")
    _, out2 = run(capsys, "char", "--ell", "4", "--s", "2", "--trunc", "10")
    assert out1 == out2


def test_verify_appendix_exit_zero(capsys):
    code, out = run(capsys, "verify-appendix", "--ell-max", "10")
    assert code == 0
    assert json.loads(out)["ok"] is True


def test_verify_routes_small(capsys):
    code, out = run(capsys, "--prec", "64", "verify-routes", "--ells", "3",
                    "--ss", "0,1", "--trunc", "15")
    assert code == 0
    assert json.loads(out)["failures"] == []


def test_qdim_csv(capsys):
    code, out = run(capsys, "--prec", "80", "qdim", "--t", "0.2,0.1")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "t,ratio,deviation"
    assert len(lines) == 3


def test_asym_json(capsys):
    code, out = run(capsys, "--prec", "96", "asym", "--t", "0.5", "--N", "2",
                    "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert float(doc["rows"][0]["abs_err"]) < 1e-3


def test_usage_error_exit_two():
    with pytest.raises(SystemExit) as err:
        main(["coeffs", "--ell", "3"])  # missing required --s
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main(["no-such-command"])
    assert err.value.code == 2


def test_runtime_error_exit_one(capsys):
    # an invalid parameter that passes argparse surfaces as a failure report
    code, out = run(capsys, "verify-decomposition", "--ell", "3", "--s", "0",
                    "--tau=-1j")
    assert code == 1
    assert json.loads(out)["ok"] is False
