"""Command line: settings precedence, round outputs, verify and dataset check."""

import json

import pytest

from federation import fresh_session, tiny_federation, write_tree
from zkdfl import agg_circuit, cli, ledger
from zkdfl.errors import ParseError
from zkdfl.orchestrator import read_csv, run_round


def settings_for(argv):
    return cli.resolve(cli.build_parser().parse_args(argv))


def test_defaults_apply_without_flags():
    s = settings_for(["round"])
    assert s["clients"] == "10" and s["model"] == "model1" and s["lr"] == "0.01"


def test_flag_beats_config_beats_default(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# settings\nclients = 4\nmodel=model3\nmax-samples = 500\n")
    s = settings_for(["round", "--config", str(cfg), "--clients", "6"])
    assert s["clients"] == "6"  # flag
    assert s["model"] == "model3"  # config file
    assert s["max_samples"] == "500"  # config file, dashed key
    assert s["batch"] == "10"  # default


def test_synthetic_flag_overrides_config_dataset_dir(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("dataset_dir = /data/uci\n")
    assert settings_for(["round", "--config", str(cfg)])["dataset_dir"] == "/data/uci"
    assert settings_for(["round", "--config", str(cfg), "--synthetic"])["dataset_dir"] is None


def test_bad_config_lines(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("clients 4\n")
    with pytest.raises(ParseError):
        cli.read_config(cfg)
    cfg.write_text("colour = blue\n")
    with pytest.raises(ParseError):
        cli.read_config(cfg)
    assert cli.main(["round", "--config", str(cfg)]) == 2


def test_invalid_values_exit_2(capsys):
    assert cli.main(["round", "--synthetic", "--clients", "many"]) == 2
    assert "clients" in capsys.readouterr().err


def test_round_accounting_writes_outputs(tmp_path, capsys):
    out = tmp_path / "r"
    code = cli.main(
        ["round", "--synthetic", "--max-samples", "600", "--clients", "3", "--accounting", "--out", str(out)]
    )
    assert code == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["m"] == 3 and summary["P"] == 669
    assert summary["gas"]["total"] == ledger.zkdfl_round_gas(3)["total"]
    assert len(agg_circuit.public_inputs_from_bytes((out / "public.bin").read_bytes())) == 5
    assert read_csv(out / "metrics.csv")[0]["verified"] == "accounting"
    replayed = ledger.SimChain.replay(str(out / "txlog.jsonl"))
    assert replayed.total_gas > 0


def test_experiment_command(tmp_path, capsys):
    out = tmp_path / "grid.csv"
    code = cli.main(
        ["experiment", "--synthetic", "--max-samples", "600", "--clients", "2,3", "--model", "model1,model2",
         "--accounting", "--out", str(out)]
    )
    assert code == 0
    rows = read_csv(out)
    assert len(rows) == 4
    assert {(r["model"], r["clients"]) for r in rows} == {
        ("model1", "2"), ("model1", "3"), ("model2", "2"), ("model2", "3")
    }
    assert cli.main(["experiment", "--synthetic"]) == 2


def test_verify_roundtrip(tmp_path, capsys):
    cfg, part = tiny_federation(m=2, seed=11)
    rec = run_round(cfg, part.clients, session=fresh_session(cfg), test=part.test)
    (tmp_path / "vk.bin").write_bytes(rec.vk.to_bytes())
    (tmp_path / "proof.bin").write_bytes(rec.proof.to_bytes())
    (tmp_path / "public.bin").write_bytes(agg_circuit.public_inputs_to_bytes(rec.public))
    args = ["verify", "--vk", str(tmp_path / "vk.bin"), "--proof", str(tmp_path / "proof.bin")]
    assert cli.main(args + ["--public", str(tmp_path / "public.bin")]) == 0
    assert capsys.readouterr().out.strip() == "accept"
    bad = list(rec.public)
    bad[0] = (bad[0] + 1) % agg_circuit.R_SCALAR
    (tmp_path / "bad.bin").write_bytes(agg_circuit.public_inputs_to_bytes(bad))
    assert cli.main(args + ["--public", str(tmp_path / "bad.bin")]) == 1
    assert capsys.readouterr().out.strip() == "reject"
    assert cli.main(args + ["--public", str(tmp_path / "missing.bin")]) == 2


def test_dataset_check(tmp_path, capsys):
    write_tree(tmp_path, acts=1, subjects=1, segments=1, rows=125)
    assert cli.main(["dataset", "check", "--dataset-dir", str(tmp_path)]) == 1  # incomplete tree
    report = json.loads(capsys.readouterr().out)
    assert report["files"] == 1 and report["rows"] == 125 and not report["ok"]
