"""Command line interface: ``zkdfl round | experiment | verify | dataset check``.

Settings resolve as flag > config file (``key=value`` lines) > built-in default.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import agg_circuit, groth16
from .errors import ArgumentError, ParseError, RoundAborted, ZkdflError
from .fl import TrainConfig
from .orchestrator import Grid, RoundConfig, Session, check_tree, load_dataset, partition, run_experiment, run_round
from .orchestrator.experiment import record_row, write_csv

DEFAULTS = {
    "clients": "10",
    "fraction": "1.0",
    "model": "model1",
    "epochs": "1",
    "batch": "10",
    "lr": "0.01",
    "seed": "0",
    "dataset_dir": None,
    "synthetic": "false",
    "max_samples": None,
    "out": None,
    "accounting": "false",
}

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def read_config(path) -> dict:
    """Parse ``key=value`` lines; ``#`` starts a comment, keys may use dashes."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParseError(str(path), lineno, "expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in DEFAULTS:
                raise ParseError(str(path), lineno, f"unknown setting {key!r}")
            out[key] = value
    return out


def resolve(args: argparse.Namespace) -> dict:
    """Merge defaults, config file and explicit flags (highest wins)."""
    settings = dict(DEFAULTS)
    if getattr(args, "config", None):
        settings.update(read_config(args.config))
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = str(value)
    if getattr(args, "dataset_dir", None) is not None:
        settings["synthetic"] = "false"
    elif getattr(args, "synthetic", None):
        settings["dataset_dir"] = None
    return settings


def _bool(value, key):
    v = str(value).lower()
    if v in _TRUE:
        return True
    if v in _FALSE:
        return False
    raise ArgumentError(f"{key} must be a boolean, got {value!r}")


def _int(value, key):
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ArgumentError(f"{key} must be an integer, got {value!r}") from None


def _float(value, key):
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ArgumentError(f"{key} must be a number, got {value!r}") from None


def _list(value, conv, key):
    return tuple(conv(v.strip(), key) for v in str(value).split(",") if v.strip())


def _dataset(s):
    max_samples = _int(s["max_samples"], "max_samples") if s["max_samples"] else None
    seed = _int(s["seed"], "seed")
    use_dir = s["dataset_dir"] and not _bool(s["synthetic"], "synthetic")
    return load_dataset(s["dataset_dir"] if use_dir else None, max_samples=max_samples, seed=seed)


def _common(p):
    p.add_argument("--config", help="file of key=value settings")
    p.add_argument("--clients", help="total clients K (comma list for experiment)")
    p.add_argument("--fraction", help="participation fraction C in (0, 1]")
    p.add_argument("--model", help="model1..model5 (comma list for experiment)")
    p.add_argument("--epochs", help="local epochs E (comma list for experiment)")
    p.add_argument("--batch", help="minibatch size B (comma list for experiment)")
    p.add_argument("--lr", help="learning rate")
    p.add_argument("--seed", help="seed for data, training, setup and proving")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--dataset-dir", dest="dataset_dir", help="UCI daily-and-sports-activities tree")
    src.add_argument("--synthetic", action="store_const", const="true", default=None, help="seeded synthetic task")
    p.add_argument("--max-samples", dest="max_samples", help="subsample the dataset")
    p.add_argument("--out", help="output directory (round) or CSV path (experiment)")
    p.add_argument(
        "--accounting", action="store_const", const="true", default=None, help="skip setup/proving; gas from the schedule"
    )


def cmd_round(args):
    s = resolve(args)
    ds = _dataset(s)
    k = _int(s["clients"], "clients")
    seed = _int(s["seed"], "seed")
    train = TrainConfig(_int(s["epochs"], "epochs"), _int(s["batch"], "batch"), _float(s["lr"], "lr"), seed)
    cfg = RoundConfig(
        clients=k,
        fraction=_float(s["fraction"], "fraction"),
        model=s["model"],
        train=train,
        seed=seed,
        prove=not _bool(s["accounting"], "accounting"),
    )
    part = partition(ds, k, seed=seed)
    session = Session(cfg.architecture(), seed=seed)
    rec = run_round(cfg, part.clients, session=session, test=part.test)
    summary = {
        "model": rec.model,
        "m": rec.m,
        "P": rec.P,
        "accuracy": rec.accuracy,
        "constraints": rec.constraints,
        "setup_ms": round(rec.setup_ms, 1),
        "prove_ms": round(rec.prove_ms, 1),
        "peak_memory_mb": round(rec.peak_memory_mb, 1),
        "gas": rec.gas,
        "gas_baseline": rec.gas_baseline,
        "verified": rec.verified,
    }
    if s["out"]:
        out = Path(s["out"])
        out.mkdir(parents=True, exist_ok=True)
        if rec.proof is not None:
            (out / "proof.bin").write_bytes(rec.proof.to_bytes())
            (out / "vk.bin").write_bytes(rec.vk.to_bytes())
        (out / "public.bin").write_bytes(agg_circuit.public_inputs_to_bytes(rec.public))
        session.chain.export_log(out / "txlog.jsonl")
        write_csv([record_row(rec, train.batch, train.epochs)], out / "metrics.csv")
        summary["out"] = str(out)
    print(json.dumps(summary, indent=2))
    return 0


def cmd_experiment(args):
    s = resolve(args)
    if not s["out"]:
        raise ArgumentError("experiment needs --out for the metrics CSV")
    ds = _dataset(s)
    grid = Grid(
        models=_list(s["model"], lambda v, _k: v, "model"),
        clients=_list(s["clients"], _int, "clients"),
        batches=_list(s["batch"], _int, "batch"),
        epochs=_list(s["epochs"], _int, "epochs"),
    )
    rows = run_experiment(
        grid,
        s["out"],
        ds,
        lr=_float(s["lr"], "lr"),
        seed=_int(s["seed"], "seed"),
        prove=not _bool(s["accounting"], "accounting"),
        log=lambda row: print(",".join(str(v) for v in row.values()), flush=True),
    )
    print(f"wrote {len(rows)} rows to {s['out']}")
    return 0


def cmd_verify(args):
    vk = groth16.VerifyingKey.from_bytes(Path(args.vk).read_bytes())
    proof = groth16.Proof.from_bytes(Path(args.proof).read_bytes())
    public = agg_circuit.public_inputs_from_bytes(Path(args.public).read_bytes())
    ok = groth16.verify(vk, public, proof)
    print("accept" if ok else "reject")
    return 0 if ok else 1


def cmd_dataset(args):
    if args.action != "check":
        raise ArgumentError(f"unknown dataset action {args.action!r}")
    rep = check_tree(args.dataset_dir)
    print(json.dumps({"files": rep.files, "rows": rep.rows, "labels": len(rep.per_label), "ok": rep.ok}, indent=2))
    for msg in rep.problems[:50]:
        print("problem:", msg, file=sys.stderr)
    if len(rep.problems) > 50:
        print(f"... {len(rep.problems) - 50} more problems", file=sys.stderr)
    return 0 if rep.ok else 1


def build_parser():
    parser = argparse.ArgumentParser(prog="zkdfl", description="Verifiable federated averaging on a simulated ledger")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("round", help="run one protocol round")
    _common(p)
    p.set_defaults(func=cmd_round)
    p = sub.add_parser("experiment", help="grid sweep written as a metrics CSV")
    _common(p)
    p.set_defaults(func=cmd_experiment)
    p = sub.add_parser("verify", help="re-verify a stored proof")
    p.add_argument("--vk", required=True, help="verifying key file")
    p.add_argument("--proof", required=True, help="proof file (256 bytes)")
    p.add_argument("--public", required=True, help="public-input file (32-byte big-endian elements)")
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("dataset", help="dataset utilities")
    p.add_argument("action", choices=["check"])
    p.add_argument("--dataset-dir", dest="dataset_dir", required=True)
    p.set_defaults(func=cmd_dataset)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RoundAborted as exc:
        print(json.dumps({"aborted": exc.report()}), file=sys.stderr)
        return 3
    except (ZkdflError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
