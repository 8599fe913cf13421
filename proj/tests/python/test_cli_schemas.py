import json
import pathlib

import jsonschema
import pytest
from referencing import Registry, Resource

from conftest import ROOT

SCHEMAS = ROOT / "schemas"


def _registry():
    resources = []
    for path in SCHEMAS.glob("*.schema.json"):
        doc = json.loads(path.read_text())
        resources.append((path.name, Resource.from_contents(doc)))
        resources.append((doc["$id"], Resource.from_contents(doc)))
    return Registry().with_resources(resources)


REGISTRY = _registry()


def validate(doc, name):
    schema = json.loads((SCHEMAS / f"{name}.schema.json").read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    jsonschema.Draft202012Validator(schema, registry=REGISTRY).validate(doc)


def test_gen_output_matches_graph_schema(cli, tmp_path):
    out = tmp_path / "g.json"
    cli("gen", "--family", "lollipop", "--n", "7", "--out", out)
    validate(json.loads(out.read_text()), "graph")
    validate(json.loads(cli("gen", "--family", "ring", "--n", "4").stdout), "graph")


@pytest.mark.parametrize(
    "args",
    [
        ["--family", "ring", "--n", "2"],
        ["--family", "star", "--n", "6", "--self-loops", "--L", "2"],
    ],
)
def test_analyze(run_json, args):
    validate(run_json("analyze", *args), "analyze")


@pytest.mark.parametrize(
    "args",
    [
        ["--family", "ring", "--n", "2"],
        ["--family", "star", "--n", "20", "--self-loops"],
        ["--family", "ring", "--n", "2", "--self-loops", "--L", "2", "--M", "1"],
        ["--family", "path", "--n", "3", "--ctmc"],
        ["--family", "star", "--n", "5", "--self-loops", "--start", "1,2"],
    ],
)
def test_meet(run_json, args):
    doc = run_json("meet", *args)
    validate(doc, "meet")


def test_meet_with_matrix_files(run_json, tmp_path):
    f = tmp_path / "half.json"
    f.write_text(json.dumps({"n": 2, "edges": [[1, 1, 0.5], [1, 2, 0.5], [2, 1, 0.5], [2, 2, 0.5]]}))
    doc = run_json("meet", "--pursuer-matrix", f, "--evader-matrix", f)
    validate(doc, "meet")
    assert doc["config"]["chain"]["construction"] == "matrix_file"
    assert doc["mean"] == pytest.approx(2.0)


def test_simulate(run_json):
    doc = run_json("simulate", "--family", "star", "--n", "6", "--self-loops", "--start", "worst", "--trials", "2000")
    validate(doc, "simulate")
    censored = run_json("simulate", "--family", "ring", "--n", "2", "--start", "1,2", "--trials", "10",
                        "--horizon", "50")
    validate(censored, "simulate")
    assert censored["mean"] is None


def test_table1(run_json):
    doc = run_json("table1", "--rgg-radius", "0.4", "--lollipop-sweep")
    validate(doc, "table1")
    star = next(r for r in doc["rows"] if r["graph"] == "star")
    assert abs(star["m_max"] - 8.0) <= 0.05


def test_exit_codes(cli):
    assert cli("meet", "--family", "nope", check=False).returncode == 2
    assert cli("meet", "--family", "star", "--n", "20", "--L", "3", "--M", "3", "--state-budget", "100",
               check=False).returncode == 3
    assert cli("meet", "--graph", "/nonexistent.json", check=False).returncode == 4
