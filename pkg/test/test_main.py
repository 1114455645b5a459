import json

import pytest

from analysis.arrangement import build_arrangement, longest_monotone_path
from geometry.fileio import write_json
from geometry.generators import named_example
from main import EXIT_INPUT, EXIT_INVARIANT, EXIT_OK, main


def _load(path) -> dict:
    with open(path) as json_file:
        return json.load(json_file)


@pytest.fixture
def three_lines_file(tmp_path):
    path = str(tmp_path / "three-lines.json")
    assert main(["gen", "named-example", "--name", "three-lines", "--out", path]) == EXIT_OK
    return path


def test_gen_named_example(three_lines_file):
    assert _load(three_lines_file)["lines"] == [["1", "0"], ["0", "0"], ["-1", "2"]]


def test_gen_random_points_reproducible(tmp_path):
    first, second = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    assert main(["gen", "random-points", "--n", "6", "--seed", "9", "--out", first]) == EXIT_OK
    assert main(["gen", "random-points", "--n", "6", "--seed", "9", "--out", second]) == EXIT_OK
    assert _load(first) == _load(second)


def test_gen_with_svg(tmp_path):
    svg = tmp_path / "lines.svg"
    out = str(tmp_path / "lines.json")
    assert main(["gen", "random-lines", "--n", "4", "--out", out, "--emit-svg", str(svg)]) == EXIT_OK
    assert "</svg>" in svg.read_text()


def test_arr_build(three_lines_file, tmp_path):
    out = str(tmp_path / "arrangement.json")
    assert main(["arr", "build", "--in", three_lines_file, "--out", out]) == EXIT_OK
    assert len(_load(out)["vertices"]) == 3


def test_arr_verify_path(three_lines_file, tmp_path):
    path_file = str(tmp_path / "path.json")
    arrangement = build_arrangement(named_example("three-lines").lines)
    write_json(path_file, longest_monotone_path(arrangement).to_json())
    out = str(tmp_path / "verdict.json")
    assert main(["arr", "verify-path", "--in", three_lines_file, "--path", path_file, "--out", out]) == EXIT_OK
    assert _load(out) == {"valid": True, "length": 4}


def test_reduce_path_to_points_and_back(three_lines_file, tmp_path):
    points = str(tmp_path / "points.json")
    assert main(["reduce", "path-to-points", "--in", three_lines_file, "--out", points]) == EXIT_OK
    assert len(_load(points)["points"]["points"]) == 3
    traced = str(tmp_path / "traced.json")
    assert main(["reduce", "points-to-path", "--in", points, "--out", traced]) == EXIT_OK
    assert _load(traced)["length"] >= 1
    dual = str(tmp_path / "dual.json")
    assert main(["reduce", "dualize", "--in", points, "--out", dual]) == EXIT_OK
    assert _load(dual)["role"] == "points-separate-lines"
    antichain = str(tmp_path / "antichain.json")
    assert main(["reduce", "lines-to-antichain", "--in", dual, "--out", antichain]) == EXIT_OK
    assert len(_load(antichain)["members"]) == 3


def test_separable_ksets(tmp_path):
    points = str(tmp_path / "triangle.json")
    assert main(["gen", "named-example", "--name", "triangle-interior", "--out", points]) == EXIT_OK
    out = str(tmp_path / "layers.json")
    assert main(["separable", "ksets", "--in", points, "--out", out]) == EXIT_OK
    assert _load(out)["layers"] == {"0": 1, "1": 3, "2": 6, "3": 3, "4": 1}


def test_separable_enumerate_and_antichain(tmp_path):
    points = str(tmp_path / "triangle.json")
    database = str(tmp_path / "runs.db")
    assert main(["gen", "named-example", "--name", "triangle-interior", "--out", points]) == EXIT_OK
    family = str(tmp_path / "family.json")
    assert main(["separable", "enumerate", "--in", points, "--db", database, "--out", family]) == EXIT_OK
    assert len(_load(family)["members"]) == 14
    assert len(_load(family)["witnesses"]) == 14
    antichain = str(tmp_path / "antichain.json")
    assert main(["separable", "antichain", "--in", points, "--db", database, "--out", antichain]) == EXIT_OK
    document = _load(antichain)
    assert len(document["members"]) == len(document["chains"])


def test_arr_longest_path(three_lines_file, tmp_path):
    out = str(tmp_path / "path.json")
    database = str(tmp_path / "runs.db")
    assert main(["arr", "longest-path", "--in", three_lines_file, "--db", database, "--out", out]) == EXIT_OK
    assert _load(out)["length"] == 4


def test_pd_verify_plus_shape_fails(tmp_path):
    family = str(tmp_path / "plus.json")
    assert main(["gen", "named-example", "--name", "plus-shape", "--out", family]) == EXIT_OK
    out = str(tmp_path / "report.json")
    assert main(["pd", "verify", "--in", family, "--out", out]) == EXIT_INVARIANT
    assert not _load(out)["passed"]


def test_pd_tangents(tmp_path):
    family = str(tmp_path / "three-ray.json")
    assert main(["pd", "three-ray", "--n", "3", "--seed", "1", "--out", family]) == EXIT_OK
    out = str(tmp_path / "tangents.json")
    assert main(["pd", "tangents", "--in", family, "--pair", "0", "1", "--out", out]) == EXIT_OK
    assert _load(out)["weight"] == "1"


def test_missing_size():
    assert main(["gen", "random-points"]) == EXIT_INPUT


def test_missing_file(tmp_path):
    assert main(["arr", "build", "--in", str(tmp_path / "nope.json")]) == EXIT_INPUT


def test_wrong_instance_kind(three_lines_file):
    assert main(["separable", "ksets", "--in", three_lines_file]) == EXIT_INPUT


def test_unknown_command():
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2


def test_chain_with_database_override(tmp_path):
    database = str(tmp_path / "runs.db")
    out = str(tmp_path / "record.json")
    assert main(["chain", "--n", "4", "--seed", "2", "--db", database, "--out", out]) == EXIT_OK
    record = _load(out)
    assert record["pipeline"] == "chain"
    assert record["g_lower"] >= record["h_lower"]
    assert main(["report", "--db", database, "--pipeline", "chain"]) == EXIT_OK
