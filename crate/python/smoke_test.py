"""Smoke test for the cohoma Python module. Build it first with
`pip install --no-build-isolation -e crates/py`."""

import json
import pathlib

import cohoma

ROOT = pathlib.Path(__file__).resolve().parent.parent


def main():
    assert cohoma.reduce("KQK") == "K L - K^2 Q"
    assert cohoma.reduce("K^2 L", 2) == "0"

    code, out = cohoma.run_script((ROOT / "corpus" / "weil_su2.cohoma").read_text())
    assert code == 0, out
    doc = json.loads(out)
    assert doc["schema"] == 1
    reports = doc["reports"]
    assert all(r["status"] == "pass" for r in reports)

    code, out = cohoma.run_script((ROOT / "corpus" / "q_squared_negative.cohoma").read_text())
    assert code == 1
    assert json.loads(out)["reports"][0]["witnesses"][0] == {"generator": "x", "lhs": "z", "rhs": "0"}

    try:
        cohoma.run_script("gen x deg (0,;")
    except ValueError:
        pass
    else:
        raise AssertionError("syntax error not raised")

    s = cohoma.Session()
    s.execute("gen x deg (0,0); gen y deg (0,1); der Q deg (0,1) { x -> y; }")
    assert s.generators() == [("x", 0, 0), ("y", 0, 1)]
    assert s.derivations() == ["Q"]
    assert s.apply("Q", "x^2") == "2*x*y"
    assert json.loads(s.execute("check Q^2 == 0;"))["reports"][0]["status"] == "pass"

    w = cohoma.Session("weil(su2)")
    assert len(w.generators()) == 6
    assert w.apply("d", "theta[1]") == w.eval("phi[1] - theta[2]*theta[3]")
    print("smoke test passed")


if __name__ == "__main__":
    main()
