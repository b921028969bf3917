"""Grid sweeps over models, client counts, batch sizes and local epochs, written as CSV."""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass
from pathlib import Path

from ..fl import TrainConfig
from .data import Dataset, partition
from .protocol import RoundConfig, RoundRecord, Session, run_round

CSV_COLUMNS = ("model", "clients", "batch", "epochs", "accuracy", "constraints", "prove_ms", "gas_zkdfl", "gas_baseline", "verified")


@dataclass(frozen=True)
class Grid:
    models: tuple = ("model1",)
    clients: tuple = (10,)
    batches: tuple = (10,)
    epochs: tuple = (1,)

    def __iter__(self):
        return iter(itertools.product(self.models, self.clients, self.batches, self.epochs))

    def __len__(self):
        return len(self.models) * len(self.clients) * len(self.batches) * len(self.epochs)


def record_row(rec: RoundRecord, batch: int, epochs: int) -> dict:
    if rec.gas_estimated:
        verified = "accounting"
    else:
        verified = "true" if rec.all_verified else "false"
    return {
        "model": rec.model,
        "clients": rec.m,
        "batch": batch,
        "epochs": epochs,
        "accuracy": f"{rec.accuracy:.6f}",
        "constraints": rec.constraints,
        "prove_ms": f"{rec.prove_ms:.1f}",
        "gas_zkdfl": rec.gas["total"],
        "gas_baseline": rec.gas_baseline,
        "verified": verified,
    }


def run_experiment(grid: Grid, out_path, dataset: Dataset, *, lr=0.01, seed=0, prove=True, log=None):
    """One fresh single-round federation per grid point; returns the rows written."""
    rows = []
    splits = {}
    for model, k, batch, epochs in grid:
        if k not in splits:
            splits[k] = partition(dataset, k, seed=seed)
        part = splits[k]
        cfg = RoundConfig(
            clients=k, fraction=1.0, model=model, train=TrainConfig(epochs, batch, lr, seed), seed=seed, prove=prove
        )
        session = Session(cfg.architecture(), seed=seed)
        rec = run_round(cfg, part.clients, session=session, test=part.test)
        rows.append(record_row(rec, batch, epochs))
        if log:
            log(rows[-1])
    write_csv(rows, out_path)
    return rows


def write_csv(rows, out_path):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    path = Path(out_path)
    try:
        path.write_text(buf.getvalue())
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write metrics CSV: {exc.strerror}", str(path)) from exc
    return path


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
