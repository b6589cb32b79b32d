import csv
import dataclasses
import filecmp
import statistics

import pytest

from aodvsim import cli, experiment
from aodvsim.config import ScenarioConfig, dump_config, parse_config
from aodvsim.experiment import RUN_COLUMNS, SUMMARY_COLUMNS, emit_results, run_experiment
from aodvsim.mobility import MobilityModel
from aodvsim.simulation import ConservationError

SHORT = ScenarioConfig(duration=20.0, seeds=tuple(range(1, 11)), sweep_attackers=(0, 1, 2, 3, 4))


def read_csv(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


@pytest.fixture(scope="module")
def sweep():
    return run_experiment(SHORT)


def test_sweep_shape(sweep):
    assert len(sweep.rows) == 50
    assert [c.attackers for c in sweep.cells] == [0, 1, 2, 3, 4]
    assert all(len(c.rows) == 10 for c in sweep.cells)
    assert {r.mode for r in sweep.rows if r.attackers == 0} == {"none"}
    assert {r.mode for r in sweep.rows if r.attackers > 0} == {"fake_rrep"}


def test_same_seed_sees_same_traffic_in_every_cell(sweep):
    for seed in SHORT.seeds:
        sent = {r.metrics.sent for r in sweep.rows if r.seed == seed}
        assert len(sent) == 1


def test_every_row_conserves_packets(sweep):
    assert all(r.metrics.conserved() for r in sweep.rows)


def test_emitted_files(sweep, tmp_path):
    emit_results(sweep, tmp_path)
    runs = read_csv(tmp_path / "runs.csv")
    assert list(runs[0]) == RUN_COLUMNS and len(runs) == 50
    summary = read_csv(tmp_path / "summary.csv")
    assert list(summary[0]) == SUMMARY_COLUMNS
    assert [int(r["attackers"]) for r in summary] == [0, 1, 2, 3, 4]
    for row in summary:
        pdrs = [float(r["pdr"]) for r in runs if r["attackers"] == row["attackers"]]
        assert float(row["attacked_mean_pdr"]) == pytest.approx(statistics.fmean(pdrs), abs=1e-12)
        assert float(row["min_pdr"]) == min(pdrs) and float(row["max_pdr"]) == max(pdrs)
        assert float(row["baseline_mean_pdr"]) == float(summary[0]["attacked_mean_pdr"])
    for k in range(5):
        assert (tmp_path / f"plotdata_{k}.csv").exists()
    assert parse_config(tmp_path / "config.txt") == SHORT


def test_reemitting_is_byte_identical(sweep, tmp_path):
    emit_results(sweep, tmp_path / "a")
    emit_results(run_experiment(SHORT), tmp_path / "b")
    names = [p.name for p in (tmp_path / "a").iterdir()]
    match, mismatch, errors = filecmp.cmpfiles(tmp_path / "a", tmp_path / "b", names, shallow=False)
    assert mismatch == [] and errors == [] and len(match) == len(names)


def test_no_sweep_gives_a_single_cell():
    result = run_experiment(ScenarioConfig(duration=5.0))
    assert len(result.cells) == 1 and len(result.rows) == 1
    assert result.cells[0].attackers == 0


def test_speed_sweep_cells():
    cfg = ScenarioConfig(duration=5.0, sweep_speeds=(0.0, 3.0))
    assert experiment.cell_config(cfg, 0, 0.0).mobility.model is MobilityModel.STATIC
    moving = experiment.cell_config(cfg, 2, 3.0)
    assert (moving.mobility.v_min, moving.mobility.v_max, moving.attackers.count) == (3.0, 3.0, 2)
    assert [c.speed for c in run_experiment(cfg).cells] == [0.0, 3.0]


def test_traces_are_deterministic(tmp_path):
    cfg = ScenarioConfig(duration=10.0, attackers=dataclasses.replace(ScenarioConfig().attackers, count=1))
    for name in ("a", "b"):
        (tmp_path / name).mkdir()
        run_experiment(cfg, trace_dir=tmp_path / name, tables=True)
    for name in ("trace_1_5.0_1.tsv", "tables_1_5.0_1.csv"):
        first, second = (tmp_path / d / name for d in ("a", "b"))
        assert first.read_bytes() == second.read_bytes() and first.stat().st_size > 0


def test_worker_processes_do_not_change_results(sweep, monkeypatch):
    monkeypatch.setenv("MANET_SIM_THREADS", "3")
    assert experiment.worker_count() == 3
    parallel = run_experiment(SHORT)
    assert [r.values() for r in parallel.rows] == [r.values() for r in sweep.rows]


def test_bad_thread_setting_falls_back_to_one(monkeypatch):
    monkeypatch.setenv("MANET_SIM_THREADS", "many")
    assert experiment.worker_count() == 1


# command line


def write_conf(tmp_path, text):
    path = tmp_path / "s.conf"
    path.write_text(text)
    return path


def test_cli_success(tmp_path, capsys):
    conf = write_conf(tmp_path, "duration = 5\n")
    out = tmp_path / "out"
    code = cli.main(["run", str(conf), "--seeds", "1,2", "--attackers", "0,1", "--out", str(out), "--trace"])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 2 and lines[0].startswith("attackers=0 ")
    assert len(read_csv(out / "runs.csv")) == 4
    assert len(list(out.glob("trace_*.tsv"))) == 4
    echoed = parse_config(out / "config.txt")
    assert echoed.seeds == (1, 2) and echoed.sweep_attackers == (0, 1)


def test_cli_config_errors_exit_1(tmp_path, capsys):
    conf = write_conf(tmp_path, "node_count = 1\ncolour = red\n")
    assert cli.main(["run", str(conf), "--out", str(tmp_path / "o")]) == 1
    err = capsys.readouterr().err
    assert "node_count" in err and "colour" in err
    assert cli.main(["run", str(tmp_path / "missing.conf")]) == 1
    conf = write_conf(tmp_path, "")
    assert cli.main(["run", str(conf), "--attackers", "0,99", "--out", str(tmp_path / "o")]) == 1


def test_cli_invariant_failure_exits_2(tmp_path, monkeypatch, capsys):
    def broken(*args, **kwargs):
        raise ConservationError("packet conservation violated")

    monkeypatch.setattr(cli, "run_experiment", broken)
    conf = write_conf(tmp_path, "duration = 5\n")
    assert cli.main(["run", str(conf), "--out", str(tmp_path / "o")]) == 2
    assert "conservation" in capsys.readouterr().err


def test_dumped_config_file_runs_the_same(tmp_path):
    cfg = dataclasses.replace(SHORT, seeds=(4,), sweep_attackers=(0, 2))
    path = write_conf(tmp_path, dump_config(cfg))
    assert cli.main(["run", str(path), "--out", str(tmp_path / "o")]) == 0
    rows = read_csv(tmp_path / "o" / "runs.csv")
    direct = run_experiment(cfg)
    assert [list(r.values()) for r in rows] == [[str(v) for v in r.values()] for r in direct.rows]
