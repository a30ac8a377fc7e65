import json

import pytest

from catentropy.cli import extended_dynkin_symbol, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_invariants(capsys):
    code, out, _ = run(capsys, "invariants", "--json", '{"weights":[2,3,5]}')
    assert code == 0 and out == {"a": 30, "mu": 9, "chi": "1/30", "dynkin": "E8~"}
    code, out, _ = run(capsys, "invariants", "--json", '{"weights":[2,3,6]}')
    assert out == {"a": 6, "mu": 10, "chi": "0"}
    code, _, err = run(capsys, "invariants", "--json", '{"weights":[2]}')
    assert code == 2 and "three" in err
    code, _, _ = run(capsys, "invariants", "--json", "{not json")
    assert code == 2


@pytest.mark.parametrize("ws,sym", [((2, 3, 3), "E6~"), ((2, 3, 4), "E7~"), ((3, 2, 5), "E8~"),
                                    ((2, 2, 2), "D~4"), ((2, 5, 2), "D~7"), ((1, 2, 3), "A~2,3"),
                                    ((1, 1, 1), "A~1,1"), ((2, 3, 7), None)])
def test_dynkin_symbol(ws, sym):
    assert extended_dynkin_symbol(ws) == sym


def test_entropy_command(capsys):
    code, out, _ = run(capsys, "entropy", "--json",
                       '{"weights":[2,3,7],"word":[{"twist":{"l":0,"p":[1,0,0]}}]}')
    assert code == 0 and out["h"] == 0 and out["rho"] == ["1", "1"] and out["method"] == "chi-negative"
    code, out, _ = run(capsys, "entropy", "--json", '{"weights":[2,3,7],"word":[]}')
    assert out["h"] == 0 and out["rho"] == ["1", "1"]
    code, out, _ = run(capsys, "entropy", "--json", '{"dynkin":"A3","word":["serre",{"shift":2}]}')
    assert code == 0 and out["method"] == "hereditary-spectral"


def test_entropy_tubular_generic(capsys, tmp_path):
    from catentropy import orbifold_line as ol

    w = ol.WeightData((2, 2, 2, 2))
    a, b = ol.sl2_lifts(w)
    payload = {"weights": [2, 2, 2, 2], "word": [{"generic": a.matrix.tolist()}, {"generic": b.matrix.tolist()}]}
    path = tmp_path / "in.json"
    path.write_text(json.dumps(payload))
    out_path = tmp_path / "out.json"
    assert main(["entropy", "--input", str(path), "--out", str(out_path), "--tol", "1/1000000000000"]) == 0
    out = json.loads(out_path.read_text())
    assert out["phi"] == [[1, 1], [1, 2]]
    assert out["h_closed_form"] == "log((3+sqrt(5))/2)"
    assert abs(out["h"] - 0.9624236501192069) < 1e-12
    assert out["certificate"] == {"trace": 3, "discriminant": 5}
    # byte-identical reruns
    out2 = tmp_path / "out2.json"
    main(["entropy", "--input", str(path), "--out", str(out2), "--tol", "1/1000000000000"])
    assert out2.read_bytes() == out_path.read_bytes()
    assert out_path.read_text().endswith("\n")


def test_entropy_errors(capsys):
    code, _, _ = run(capsys, "entropy", "--json", '{"weights":[2,3,7],"word":[{"generic":[[1]]}]}')
    assert code == 3
    code, _, err = run(capsys, "entropy", "--json", '{"weights":[2,2,2,2],"word":[{"auto":{"sigma":[1,0,2,3]}}]}')
    assert code == 3 and "lambda" in err
    code, _, _ = run(capsys, "entropy", "--json", '{"weights":[2,3,7],"word":[{"frobnicate":1}]}')
    assert code == 2
    code, _, _ = run(capsys, "entropy", "--tol", "0", "--json", '{"weights":[2,3,7]}')
    assert code == 2


def test_auto_with_symmetric_points(capsys):
    code, out, _ = run(capsys, "entropy", "--json",
                       '{"weights":[2,2,2,2],"points":["inf",0,1,-1],"word":[{"auto":{"sigma":[1,0,2,3]}}]}')
    assert code == 0 and out["method"] == "tubular-phi" and out["h"] == 0


def test_factorize(capsys):
    code, out, _ = run(capsys, "factorize", "--json", "[[1,1],[1,2]]")
    assert code == 0 and out == {"m": [1, 1], "P": "identity", "sign": 1, "verified": True}
    code, out, _ = run(capsys, "factorize", "--json", '{"matrix":[[1,3],[2,7]]}')
    assert out["m"] == [3, 2] and out["verified"]
    code, _, _ = run(capsys, "factorize", "--json", "[[1,1],[0,1]]")
    assert code == 4
    code, _, _ = run(capsys, "factorize", "--json", "[[1,1],[1,1]]")
    assert code == 4
    code, _, _ = run(capsys, "factorize", "--json", "[[1,1,1],[1,1,1]]")
    assert code == 2


@pytest.mark.parametrize("suite", ["gram", "twists", "serre", "riemann-roch", "dynkin", "factorize"])
def test_verify_suites(capsys, suite):
    code, out, _ = run(capsys, "verify", suite)
    assert code == 0 and out["passed"] and out["failures"] == {}


def test_verify_gy_and_unknown(capsys):
    code, out, _ = run(capsys, "verify", "gy", "--n-max", "120")
    assert code == 0 and out["passed"]
    code, _, _ = run(capsys, "verify", "unknown")
    assert code == 2


def test_bad_arguments(capsys):
    assert main(["nope"]) == 2
    assert main(["verify", "gram", "--n-max", "0"]) == 2
    capsys.readouterr()
