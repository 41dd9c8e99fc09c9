import csv
import io
import json
from pathlib import Path

import numpy as np
import pytest

from isostab.cli import main
from isostab.harness import ExperimentConfig, trial_point_map
from isostab.stability import certify

FIXTURES = Path(__file__).parent / "fixtures"

# Certification of fixtures/perturbed_rotation_n4.json (harness n=4, d=2,
# eps 1/200, seed 42), frozen when the fixture was generated.
GOLDEN_FIXTURE = {
    "epsilon_measured": 0.0048721840340313349,
    "bound_value": 0.49619791873401214,
    "sup_deviation_alignment": 0.0053458268810386081,
    "sup_deviation_procrustes": 0.0034725664094004058,
    "frobenius_deviation_alignment": 0.015326982777894184,
    "frobenius_deviation_procrustes": 0.0094640563727846246,
}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_constants_csv(capsys):
    code, out, _ = run(capsys, "constants", "--n", "4", "--mode", "paper", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["kind", "i", "j", "value"]
    got = {(int(r[1]), int(r[2])): int(r[3]) for r in rows[1:] if r[0] == "c"}
    assert got == {(1, 1): 1, (2, 1): 4, (2, 2): 3, (3, 1): 4, (3, 2): 7, (3, 3): 6,
                   (4, 1): 4, (4, 2): 7, (4, 3): 5, (4, 4): 7}
    extra = {r[0]: r[3] for r in rows[1:] if r[0] != "c"}
    assert extra["sigma"] == "90" and extra["eps_sup"] == "1/90"


def test_constants_text_n5(capsys):
    code, out, _ = run(capsys, "constants", "--n", "5", "--mode", "paper")
    assert code == 0
    assert "sigma = 115" in out and "eps_sup = 1/115" in out


def test_constants_json(capsys):
    _, out, _ = run(capsys, "constants", "--n", "5", "--format", "json")
    doc = json.loads(out)
    assert doc["c"][4] == [4, 7, 5, 5, 7] and doc["eps_sup"] == "1/115"


def test_constants_small_n_is_usage_error(capsys):
    code, _, err = run(capsys, "constants", "--n", "2")
    assert code == 1 and "n must be >= 3" in err


def test_bad_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["constants", "--n", "4", "--format", "xml"])
    assert exc.value.code == 1
    capsys.readouterr()


def test_bound_n4(capsys):
    code, out, _ = run(capsys, "bound", "--n", "4", "--d", "1")
    assert code == 0
    assert "1076*d^2 + 2376*d + 1316" in out
    assert "33*d + 37" in out
    fields = dict(line.split(" = ", 1) for line in out.strip().splitlines())
    fields = {k.strip(): v for k, v in fields.items()}
    assert float(fields["B"]) == pytest.approx(69.05, abs=0.005)
    assert float(fields["linear_majorant_value"]) == 70


def test_bound_n5_json(capsys):
    _, out, _ = run(capsys, "bound", "--n", "5", "--d", "1", "--format", "json")
    doc = json.loads(out)
    assert doc["B"] == pytest.approx(np.sqrt(8612)) and doc["B"] < 94
    assert doc["B_squared_polynomial"] == "1976*d^2 + 4296*d + 2340"
    assert doc["linear_majorant"] == "45*d + 49"


def test_bound_small_d(capsys):
    code, _, _ = run(capsys, "bound", "--n", "4", "--d", "0.5")
    assert code == 1


def test_certify_identity(capsys):
    code, out, _ = run(capsys, "certify", str(FIXTURES / "identity_n3.json"))
    assert code == 0 and "certified" in out


def test_certify_over_budget(capsys):
    code, out, _ = run(capsys, "certify", str(FIXTURES / "over_budget_n4.json"))
    assert code == 2 and "inadmissible_epsilon" in out


def test_certify_golden_fixture(capsys):
    code, out, _ = run(capsys, "certify", str(FIXTURES / "perturbed_rotation_n4.json"),
                       "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "certified"
    for key, value in GOLDEN_FIXTURE.items():
        assert doc[key] == pytest.approx(value, abs=1e-9)


def test_certify_fixture_matches_harness():
    from isostab.pointmap_io import read_point_map

    config = ExperimentConfig(n=4, d=2.0, eps_target=1 / 200, trials=1, seed=42)
    pm, _ = trial_point_map(config, 0)
    fixture = read_point_map(FIXTURES / "perturbed_rotation_n4.json")
    np.testing.assert_array_equal(fixture.image_points, pm.image_points)


def test_certify_recenter(tmp_path, capsys):
    from isostab.pointmap_io import read_point_map, write_point_map
    from isostab.stability import PointMap

    pm = read_point_map(FIXTURES / "perturbed_rotation_n4.json")
    moved = PointMap(pm.domain_points, pm.image_points + 0.5, pm.d)
    path = tmp_path / "moved.json"
    write_point_map(path, moved)
    assert run(capsys, "certify", str(path))[0] == 2
    assert run(capsys, "certify", str(path), "--recenter")[0] == 0


def test_certify_parse_errors(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "dimension": 3,\n  "d": oops\n}\n')
    code, _, err = run(capsys, "certify", str(path))
    assert code == 1 and "line 3" in err
    path.write_text('{"dimension": 3, "d": 1, "points": [[0, 0]], "images": [[0, 0]]}')
    code, _, err = run(capsys, "certify", str(path))
    assert code == 1 and "points[0]" in err
    code, _, err = run(capsys, "certify", str(tmp_path / "missing.json"))
    assert code == 1


def test_certify_violation_exit_code(monkeypatch, capsys):
    import isostab.cli as cli
    from isostab.stability import Verdict

    real = cli.certify

    def fake(*args, **kwargs):
        report = real(*args, **kwargs)
        return type(report)(**{**report.__dict__, "verdict": Verdict.BOUND_VIOLATED})

    monkeypatch.setattr(cli, "certify", fake)
    code, out, _ = run(capsys, "certify", str(FIXTURES / "identity_n3.json"))
    assert code == 3 and "bound_violated" in out


def test_simulate_summary_and_per_trial(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["simulate", "--n", "4", "--d", "2", "--eps", "0.005", "--trials", "40", "--seed", "1"]
    code, out, _ = run(capsys, *args, "--per-trial", str(a), "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["certified_count"] == doc["trials_run"] == 40
    run(capsys, *args, "--per-trial", str(b), "--format", "json")
    assert a.read_bytes() == b.read_bytes()
    rows = list(csv.DictReader(io.StringIO(a.read_text())))
    assert len(rows) == 40
    assert list(rows[0]) == ["index", "seed", "epsilon_measured", "sup_deviation", "bound", "ratio",
                             "certified", "coordinate_violations"]


def test_simulate_single_trial_equals_certify(tmp_path, capsys):
    path = tmp_path / "one.csv"
    code, _, _ = run(capsys, "simulate", "--n", "4", "--d", "2", "--eps", "0.005", "--trials", "1",
                     "--seed", "9", "--per-trial", str(path))
    assert code == 0
    row = next(csv.DictReader(io.StringIO(path.read_text())))
    config = ExperimentConfig(n=4, d=2.0, eps_target=0.005, trials=1, seed=9)
    pm, seed = trial_point_map(config, 0)
    report = certify(pm, config.table())
    assert int(row["seed"]) == seed
    assert float(row["sup_deviation"]) == report.sup_deviation_alignment
    assert float(row["bound"]) == report.bound_value


def test_simulate_rejects_eps_above_budget(capsys):
    code, _, err = run(capsys, "simulate", "--n", "4", "--eps", "0.02", "--trials", "2")
    assert code == 1 and "eps_target" in err


def test_compare_fickett(capsys):
    code, out, _ = run(capsys, "compare-fickett", "--n", "4", "--d", "1", "--eps", "1e-4,1e-6,0.5",
                       "--format", "json")
    assert code == 0
    doc = json.loads(out)
    first = doc["rows"][0]
    assert first["new_bound"] == pytest.approx(6.905e-3, abs=1e-6)
    assert first["fickett_bound"] == pytest.approx(15.18, abs=0.005)
    assert first["ratio"] <= 1 / 2000
    assert doc["rows"][1]["ratio"] < first["ratio"]
    assert doc["rows"][2]["in_budget"] is False


def test_compare_fickett_at_crossover(capsys):
    _, out, _ = run(capsys, "compare-fickett", "--n", "4", "--d", "1", "--format", "json")
    star = json.loads(out)["crossover_eps"]
    _, out, _ = run(capsys, "compare-fickett", "--n", "4", "--d", "1", "--eps", repr(star),
                    "--format", "json")
    assert json.loads(out)["rows"][0]["ratio"] == pytest.approx(1.0, abs=1e-9)


def test_compare_fickett_default_grid_monotone(capsys):
    _, out, _ = run(capsys, "compare-fickett", "--n", "5", "--d", "2", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    ratios = [float(r["ratio"]) for r in rows]
    eps = [float(r["eps"]) for r in rows]
    assert eps == sorted(eps, reverse=True)
    assert all(b < a for a, b in zip(ratios, ratios[1:]))


def test_compare_fickett_text_flags_outside(capsys):
    _, out, _ = run(capsys, "compare-fickett", "--n", "4", "--eps", "0.5")
    assert "OUTSIDE" in out
