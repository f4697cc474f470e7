import json

import pytest

from hyperforge import catalog
from hyperforge.cli import run
from hyperforge.serialize import from_dict, load_structure, to_dict


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_ok(capsys):
    code, out, _ = call(capsys, "check", "--structure", "catalog:Q2")
    assert code == 0 and out.startswith("check Q2 as hyperfield: 0 violations")


def test_check_violation(capsys):
    code, out, _ = call(capsys, "check", "--structure", "catalog:X2", "--kind", "hyperring", "--json")
    assert code == 1
    assert json.loads(out)["violations"]


def test_unknown_catalog_name(capsys):
    code, _, err = call(capsys, "check", "--structure", "catalog:NOPE")
    assert code == 2 and "error" in err


def test_bad_arguments(capsys):
    assert call(capsys, "hauptsatz", "--base", "catalog:Q2")[0] == 2
    assert call(capsys, "frobnicate")[0] == 2


def test_hauptsatz_verb(capsys):
    code, out, _ = call(capsys, "hauptsatz", "--base", "catalog:FAN4", "--n", "2", "--terms", "3")
    assert code == 0 and "0 violations" in out.splitlines()[0]


def test_extend_json(capsys):
    code, out, _ = call(capsys, "extend", "--base", "catalog:FAN4", "--alphas", "a", "--emit", "json")
    assert code == 0
    rep = json.loads(out)
    Q = from_dict(rep["result"]["structure"])
    assert catalog.find_isomorphism(Q, catalog.by_name("Q2")) is not None


def test_json_is_deterministic(capsys):
    argv = ("tower", "--base", "catalog:FAN8", "--alphas", "a,b", "--json")
    first = call(capsys, *argv)[1]
    second = call(capsys, *argv)[1]
    assert first == second
    assert "wall" not in first


def test_timing_goes_to_stderr(capsys):
    code, out, err = call(capsys, "characteristic", "--structure", "catalog:K", "--timing", "--json")
    assert code == 0 and "wall time" in err and json.loads(out)["result"]["characteristic"] == 2


def test_round_trip(tmp_path):
    for name in ("K", "Q2", "FAN8", "H3"):
        S = catalog.by_name(name)
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(to_dict(S)))
        T = load_structure(str(path))
        assert to_dict(T) == to_dict(S)


def test_malformed_json(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert call(capsys, "check", "--structure", str(path))[0] == 2


def test_empty_cell(tmp_path, capsys):
    data = to_dict(catalog.by_name("K"))
    data["add"]["1|1"] = []
    path = tmp_path / "hole.json"
    path.write_text(json.dumps(data))
    code, out, _ = call(capsys, "check", "--structure", str(path), "--json")
    assert code == 1
    assert json.loads(out)["violations"][0]["axiom"] == "add.totality"


def test_symmetric_cells_filled():
    data = to_dict(catalog.by_name("Q2"))
    del data["add"]["1|-1"]
    S = from_dict(data)
    a, b = S.index("1"), S.index("-1")
    assert S.add_set(a, b) == S.add_set(b, a) == frozenset(range(3))


@pytest.mark.parametrize("argv", [
    ("poly", "divide", "--structure", "catalog:Q2", "--f", "X^2-1", "--g", "X-1"),
    ("poly", "roots", "--structure", "catalog:Q2", "--f", "X^2-1"),
    ("forms", "isometric", "--structure", "catalog:FAN4", "--lhs", "1,a", "--rhs", "a,1"),
    ("forms", "witt", "--structure", "catalog:Q2", "--form", "1,1,-1"),
    ("marshall", "--structure", "catalog:SQ7"),
    ("quotient", "--structure", "catalog:Q2", "--ideal", "0"),
    ("catalog-list",),
])
def test_verbs_succeed(capsys, argv):
    assert call(capsys, *argv)[0] == 0
