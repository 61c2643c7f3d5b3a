import io
import json
import subprocess
import sys

import pytest

from hmgraver.cli import InputError, main, parse_model
from hmgraver.complex_core import HMPair
from hmgraver.design_matrix import DesignMatrix, build_design_matrix

from test_design_matrix import PATH_322_CSV

EXAMPLE = {"vertices": ["1", "2", "3"], "facets": [["1", "2"], ["2", "3"]], "weights": {"1": 3}}


def run(args, model=None, tmp_path=None):
    argv = list(args)
    if model is not None:
        path = tmp_path / "model.json"
        path.write_text(json.dumps(model))
        argv.append(str(path))
    out = io.StringIO()
    code = main(argv, out)
    return code, out.getvalue()


def test_parse_example():
    assert parse_model(json.dumps(EXAMPLE)) == HMPair.parse("12 23", (3, 2, 2))
    assert parse_model(json.dumps(EXAMPLE).encode()) == HMPair.parse("12 23", (3, 2, 2))


def test_parse_drops_non_maximal(caplog):
    pair = parse_model('{"facets": [["1", "2"], ["1"]]}')
    assert pair.complex.facets == {frozenset("12")}
    assert "non-maximal" in caplog.text


@pytest.mark.parametrize("text", [
    "{not json",
    '{"vertices": ["1"], "facets": [["1"]], "weights": {"1": 1}}',
    '{"vertices": ["1"], "facets": [["1", "2"]]}',
    '{"vertices": ["1"], "facets": [["1"]], "weights": {"9": 3}}',
    '[1, 2]',
])
def test_parse_errors(text):
    with pytest.raises(InputError):
        parse_model(text)


def test_matrix_csv(tmp_path):
    code, out = run(["matrix"], EXAMPLE, tmp_path)
    assert code == 0 and out == PATH_322_CSV


def test_matrix_json_round_trip(tmp_path):
    code, out = run(["matrix", "--format", "json"], EXAMPLE, tmp_path)
    assert code == 0
    assert DesignMatrix.from_json(out) == build_design_matrix(HMPair.parse("12 23", (3, 2, 2)))


def test_classify_exit_codes(tmp_path):
    tri = {"facets": [["1", "2"], ["1", "3"], ["2", "3"]], "weights": {"1": 3, "2": 3, "3": 3}}
    code, out = run(["classify"], tri, tmp_path)
    obj = json.loads(out)
    assert code == 1 and obj["outcome"] == "not_unimodular" and obj["witness"]["item"] == 2
    code, out = run(["classify"], EXAMPLE, tmp_path)
    assert code == 0 and json.loads(out)["outcome"] == "unimodular"
    code, out = run(["classify", "--format", "text"], EXAMPLE, tmp_path)
    assert code == 0 and out.startswith("unimodular:")


def test_graver_matches_oracle(tmp_path):
    model = {"facets": [["1", "2"], ["3"]]}
    code, out = run(["graver"], model, tmp_path)
    lines = out.strip().split("\n")
    assert code == 0 and len(lines) == 6
    vecs = {json.dumps(json.loads(x)) for x in lines}
    cycle = [{"col": [2, 1, 1], "val": 1}, {"col": [2, 1, 2], "val": -1},
             {"col": [2, 2, 1], "val": -1}, {"col": [2, 2, 2], "val": 1}]
    assert json.dumps(cycle) in vecs
    code2, out2 = run(["graver-oracle"], model, tmp_path)
    assert code2 == 0 and out2 == out


def test_graver_refuses_nonunimodular(tmp_path):
    code, _ = run(["graver"], {"facets": [["1", "2"], ["1", "3"], ["2", "3"]],
                               "weights": {"1": 3, "2": 3, "3": 3}}, tmp_path)
    assert code == 1


def test_oracle_guard_exit(tmp_path):
    code, _ = run(["graver-oracle", "--max-columns", "4"], EXAMPLE, tmp_path)
    assert code == 3


def test_sample(tmp_path):
    model = {"facets": [["1", "2"], ["3"]]}
    code, a = run(["sample", "--seed", "3"], model, tmp_path)
    _, b = run(["sample", "--seed", "3"], model, tmp_path)
    assert code == 0 and a == b and len(json.loads(a)) == 4
    code, _ = run(["sample"], {"facets": [["1", "2", "3"]]}, tmp_path)
    assert code == 2


def test_complex_ops(tmp_path):
    code, out = run(["link", "--vertex", "2"], EXAMPLE, tmp_path)
    obj = json.loads(out)
    assert code == 0 and obj["facets"] == [["1"], ["3"]] and obj["weights"] == {"1": 3, "3": 2}
    code, out = run(["delete", "--vertex", "1"], EXAMPLE, tmp_path)
    assert json.loads(out)["facets"] == [["2", "3"]]
    code, out = run(["dual"], {"facets": [["1", "2"], ["3", "4"]]}, tmp_path)
    assert sorted(map(sorted, json.loads(out)["facets"])) == \
        [["1", "3"], ["1", "4"], ["2", "3"], ["2", "4"]]
    code, _ = run(["link", "--vertex", "9"], EXAMPLE, tmp_path)
    assert code == 2
    code, _ = run(["dual"], {"facets": [["1", "2"]]}, tmp_path)
    assert code == 2


def test_certify(tmp_path):
    tri = {"facets": [["1", "2"], ["1", "3"], ["2", "3"]], "weights": {"1": 3, "2": 3, "3": 3}}
    code, out = run(["certify-nonuni", "--budget", "20"], tri, tmp_path)
    vec = json.loads(out)["certificate"]
    assert code == 1 and max(abs(x["val"]) for x in vec) >= 2
    code, out = run(["certify-nonuni", "--budget", "5"], {"facets": [["1", "2", "3"]]}, tmp_path)
    assert code == 0 and json.loads(out) == {"certificate": None}


def test_verify_small():
    out = io.StringIO()
    code = main(["verify", "--sweep-vertices", "2", "--sweep-max-weight", "3"], out)
    summary = json.loads(out.getvalue().strip().split("\n")[-1])
    assert code == 0 and summary["disagreements"] == 0 and summary["pairs"] > 0


def test_bad_arguments():
    assert main(["nonsense"], io.StringIO()) == 2
    assert main(["matrix", "/no/such/file.json"], io.StringIO()) == 2


def test_console_script_stdin():
    proc = subprocess.run([sys.executable, "-m", "hmgraver.cli", "matrix", "-"],
                          input=json.dumps(EXAMPLE), capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == PATH_322_CSV
