import csv
import io

import numpy as np
import pytest

from qproptest import cli
from qproptest.experiments import (
    ExperimentConfig,
    HEADER,
    InvariantViolation,
    distinguish_experiment,
    distinguish_success_rate,
    load_config,
    run_experiment,
    trial_seed,
)


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_same_seed_same_csv():
    cfg = ExperimentConfig(experiment="uniformity", n=256, m=256, trials=5, seed=9)
    assert run_experiment(cfg) == run_experiment(cfg)
    assert run_experiment(cfg) != run_experiment(ExperimentConfig(experiment="uniformity", n=256, m=256, trials=5, seed=10))


def test_parallel_matches_serial():
    cfg = ExperimentConfig(experiment="periodicity", n=1024, m=2**20, trials=6, seed=4)
    par = ExperimentConfig(experiment="periodicity", n=1024, m=2**20, trials=6, seed=4, workers=2)
    assert run_experiment(cfg) == run_experiment(par)


def test_schema_and_summaries():
    text = run_experiment(ExperimentConfig(experiment="uniformity", n=512, m=512, trials=8, seed=1))
    assert text.splitlines()[0] == ",".join(HEADER)
    table = rows(text)
    for label in ("permutation", "linf_perturbed", "two_to_one"):
        trials = [r for r in table if r["instance"] == label and r["row_type"] == "trial"]
        (summary,) = [r for r in table if r["instance"] == label and r["row_type"] == "summary"]
        assert len(trials) == 8
        rate = np.mean([r["decision"] == "ACCEPT" for r in trials])
        assert float(summary["accept_rate"]) == pytest.approx(rate)
        assert int(summary["max_quantum"]) == max(int(r["quantum_queries"]) for r in trials)
        for r in trials:
            assert int(r["classical_queries"]) <= int(r["classical_ceiling"])
            assert int(r["quantum_queries"]) <= int(r["quantum_ceiling"])


def test_seed_rule_is_recorded():
    table = rows(run_experiment(ExperimentConfig(experiment="collision", algorithm="collision", n=64, m=64, trials=3, seed=77)))
    first = [r for r in table if r["row_type"] == "trial"][0]
    assert int(first["seed"]) == trial_seed(77, 0, 0)


def test_timing_column_is_opt_in():
    cfg = ExperimentConfig(experiment="reconstruct", n=256, m=16, trials=2, timing=True)
    assert "wall_clock" in run_experiment(cfg).splitlines()[0]


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(trials=0)
    with pytest.raises(ValueError):
        ExperimentConfig(experiment="uniformity", n=100, m=100)
    with pytest.raises(ValueError):
        ExperimentConfig(experiment="bogus")


def test_config_file(tmp_path):
    path = tmp_path / "exp.cfg"
    path.write_text("# sizes\nexperiment = periodicity\nn = 1024\nm = 1048576\ntrials = 3\nk_runs = 8\ntiming = false\n")
    cfg = load_config(path, seed=5)
    assert (cfg.n, cfg.k_runs, cfg.seed, cfg.timing) == (1024, 8, 5, False)
    path.write_text("colour = blue\n")
    with pytest.raises(ValueError):
        load_config(path)


def test_cap_breach_raises(tmp_path):
    cfg = ExperimentConfig(experiment="closeness", n=64, m=64, epsilon=0.5, trials=2, cap=1e-12)
    out = tmp_path / "c.csv"
    with pytest.raises(InvariantViolation):
        run_experiment(cfg, out=out)
    assert len(out.read_text().splitlines()) == 2  # header and the offending row were flushed


def test_distinguisher_budget_extremes():
    full = distinguish_success_rate(distinguish_experiment(4096, 4096, 2**20, 32, 40, 1))
    tiny = distinguish_success_rate(distinguish_experiment(2, 4096, 2**20, 32, 400, 2))
    assert full >= 0.95
    assert abs(tiny - 0.5) <= 0.1


def test_distinguisher_monotone_on_average():
    rates = [distinguish_success_rate(distinguish_experiment(q, 4096, 2**20, 32, 200, 3)) for q in (2, 4, 8, 16, 32, 64)]
    assert all(b >= a - 0.08 for a, b in zip(rates, rates[1:]))


def test_cli_exit_codes(tmp_path, capsys):
    assert cli.main(["selftest"]) == 0
    out = tmp_path / "u.csv"
    assert cli.main(["uniformity", "--n", "64", "--m", "64", "--trials", "2", "--out", str(out)]) == 0
    assert out.read_text().startswith("experiment,")
    assert cli.main(["closeness", "--n", "64", "--m", "64", "--trials", "1", "--epsilon", "0.5", "--cap", "1e-12", "--out", str(tmp_path / "c.csv")]) == 2


def test_cli_config_and_overrides(tmp_path):
    cfgfile = tmp_path / "p.cfg"
    cfgfile.write_text("n = 1024\nm = 1048576\ntrials = 2\nseed = 3\n")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main(["periodicity", "--config", str(cfgfile), "--out", str(a)]) == 0
    assert cli.main(["periodicity", "--n", "1024", "--m", "1048576", "--trials", "2", "--seed", "3", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_cli_stdout(capsys):
    assert cli.main(["distinguish", "--q-budget", "4", "--trials", "4", "--seed", "1"]) == 0
    assert capsys.readouterr().out.startswith("experiment,row_type")
