import io
import json

import pytest

from qcohom.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_pair_output_is_exact(capsys):
    code, out, _ = run(capsys, "pair", "-r", "3", "--a", "0", "--b", "4", "--xi", "0,1/5,3/5")
    assert code == 0
    assert out.strip() == '{"chamber":"upper","total":"-2/625","contributions":{"p1":"-1/625","p4":"-1/625"}}'


def test_pair_details(capsys):
    data = run_json(capsys, "pair", "-r", "3", "--a", "0", "--b", "4", "--xi", "0,1/5,3/5", "--details")
    assert data["cell"] == "upper/+x2"
    assert sorted(data["walls_hit"]) == ["x1 + x2 + x3 = 1", "x1 - x2 - x3 = -1"]


def test_pair_strict_exits_not_regular(capsys):
    code, _, err = run(capsys, "pair", "-r", "3", "--a", "0", "--b", "4", "--xi", "0,1/5,3/5", "--strict")
    assert code == 3 and "first ray" in err


def test_pair_symbolic(capsys):
    data = run_json(capsys, "pair", "-r", "2", "--a", "0", "--b", "1", "--xi", "0,3/4", "--symbolic")
    assert data["total"] == "1/4*x2 - 1/4"


def test_pair_wrong_degree(capsys):
    code, _, err = run(capsys, "pair", "-r", "2", "--a", "1", "--b", "1", "--xi", "0,3/4")
    assert code == 1 and "dimension" in err


def test_chamber_on_a_wall(capsys):
    code, _, err = run(capsys, "chamber", "-r", "2", "--xi", "1/2,1/2")
    assert code == 3 and "not a regular value" in err


def test_chamber(capsys):
    data = run_json(capsys, "chamber", "-r", "2", "--xi", "0,3/4")
    assert data["chamber"] == "upper"
    assert [p["terminal"] for p in data["dendrite"]] == ["p1", "p3"]


def test_bad_rationals(capsys):
    code, _, err = run(capsys, "chamber", "-r", "2", "--xi", "a,b")
    assert code == 2


def test_wrong_length(capsys):
    code, _, _ = run(capsys, "chamber", "-r", "3", "--xi", "0,1/2")
    assert code == 2


def test_action(capsys):
    data = run_json(capsys, "action", "-r", "2", "--dump")
    assert len(data["fixed_points"]) == 4
    assert data["gamma"] == ["-2", "-1"]


def test_ring(capsys):
    data = run_json(capsys, "ring", "-r", "2", "--sigma")
    assert data["groebner"] == ["t2^2", "w + t2", "t1"]
    assert data["poincare"] == [1, 1]


def test_ring_coordinate_only(capsys):
    data = run_json(capsys, "ring", "-r", "2", "--coordinate-only")
    assert data["poincare"] == [] and data["circle_generators"] == []


def test_dh_single_chamber(capsys):
    data = run_json(capsys, "dh", "-r", "3", "--chamber", "upper")
    assert set(data["pieces"]) == {"upper/+x1", "upper/-x1", "upper/+x2", "upper/-x2"}


def test_dh_unknown_chamber(capsys):
    code, _, err = run(capsys, "dh", "-r", "2", "--chamber", "sideways")
    assert code == 2 and "upper" in err


def test_text_format(capsys):
    code, out, _ = run(capsys, "pair", "-r", "2", "--a", "0", "--b", "1", "--xi", "0,3/4", "--format", "text")
    assert code == 0
    assert "chamber: upper" in out and "total: -1/16" in out


def test_out_file(capsys, tmp_path):
    target = tmp_path / "pair.json"
    code, out, _ = run(capsys, "pair", "-r", "2", "--a", "0", "--b", "1", "--xi", "0,3/4", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["total"] == "-1/16"


def test_oracle_compare_from_stdin(capsys, monkeypatch):
    dens = run_json(capsys, "dh", "-r", "2", "--normalize")
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(dens)))
    data = run_json(capsys, "oracle", "-r", "2", "--samples", "200000", "--compare", "-")
    assert data["report"]["metric"] == "linf"
    assert data["report"]["cells_compared"] > 0


def test_oracle_histogram_only(capsys):
    data = run_json(capsys, "oracle", "-r", "1", "--samples", "20000", "--bins", "10")
    assert sum(data["counts"]) == 20000


def test_oracle_sample_cap(capsys):
    code, _, err = run(capsys, "oracle", "-r", "2", "--samples", str(10 ** 8 + 1))
    assert code == 2


def test_oracle_qubit_mismatch(capsys, tmp_path):
    dens = run_json(capsys, "dh", "-r", "2", "--normalize")
    path = tmp_path / "d.json"
    path.write_text(json.dumps(dens))
    code, _, _ = run(capsys, "oracle", "-r", "3", "--samples", "20000", "--compare", str(path))
    assert code == 2


def test_missing_file(capsys):
    code, _, _ = run(capsys, "oracle", "-r", "2", "--samples", "20000", "--compare", "/nonexistent.json")
    assert code == 2


def test_subcommand_required():
    with pytest.raises(SystemExit):
        main([])
