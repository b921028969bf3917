"""Protocol driver, dataset ingestion and experiment harness."""

from .data import Dataset, Partition, check_tree, load_dataset, load_uci, parse_segment, partition, synthetic
from .experiment import CSV_COLUMNS, Grid, read_csv, run_experiment, write_csv
from .protocol import (
    EXTRA_TAMPERS,
    TAMPER_POINTS,
    RoundConfig,
    RoundRecord,
    Session,
    Tamper,
    client_address,
    run_round,
)

__all__ = [
    "Dataset",
    "Partition",
    "load_dataset",
    "load_uci",
    "parse_segment",
    "synthetic",
    "partition",
    "check_tree",
    "RoundConfig",
    "RoundRecord",
    "Session",
    "Tamper",
    "TAMPER_POINTS",
    "EXTRA_TAMPERS",
    "client_address",
    "run_round",
    "Grid",
    "CSV_COLUMNS",
    "run_experiment",
    "write_csv",
    "read_csv",
]
