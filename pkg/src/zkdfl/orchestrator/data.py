"""Dataset ingestion: the UCI daily-and-sports-activities tree or a synthetic stand-in.

UCI layout: ``a01``..``a19`` (activity, label 0..18) / ``p1``..``p8`` (subject) /
``s01``..``s60.txt`` (segment), each segment 125 rows of 45 comma-separated
sensor readings.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import ArgumentError, ParseError
from ..fl.model import N_CLASSES, N_FEATURES
from ..fl.train import ClientDataset

ACTIVITIES = 19
SUBJECTS = 8
SEGMENTS = 60
ROWS_PER_SEGMENT = 125

_ACT = re.compile(r"^a(\d{2})$")
_SUBJ = re.compile(r"^p(\d+)$")
_SEG = re.compile(r"^s(\d{2})\.txt$")


@dataclass
class Dataset:
    features: np.ndarray  # (n, 45) float64
    labels: np.ndarray  # (n,) int64
    source: str = "synthetic"

    def __len__(self):
        return self.features.shape[0]


def _segment_files(root: Path):
    """(label, path) pairs in deterministic (activity, subject, segment) order."""
    if not root.is_dir():
        raise ArgumentError(f"dataset directory {root} does not exist")
    out = []
    for act in sorted(root.iterdir()):
        ma = _ACT.match(act.name)
        if not (ma and act.is_dir()):
            continue
        label = int(ma.group(1)) - 1
        if not 0 <= label < N_CLASSES:
            raise ArgumentError(f"activity directory {act.name} is outside a01..a19")
        subjects = sorted((p for p in act.iterdir() if p.is_dir() and _SUBJ.match(p.name)), key=lambda p: int(p.name[1:]))
        for subj in subjects:
            for seg in sorted(p for p in subj.iterdir() if _SEG.match(p.name)):
                out.append((label, seg))
    if not out:
        raise ArgumentError(f"{root} contains no aNN/pN/sNN.txt segment files")
    return out


def parse_segment(path) -> np.ndarray:
    """Parse one segment file into an (n, 45) array; ParseError names file and line."""
    path = Path(path)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            x = np.loadtxt(path, delimiter=",", ndmin=2)
        if x.shape[0] and x.shape[1] == N_FEATURES and np.isfinite(x).all():
            return x
    except ValueError:
        pass
    # slow path: locate the offending line
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text:
                continue
            fields = text.split(",")
            if len(fields) != N_FEATURES:
                raise ParseError(str(path), lineno, f"expected {N_FEATURES} fields, found {len(fields)}")
            try:
                vals = [float(f) for f in fields]
            except ValueError:
                raise ParseError(str(path), lineno, "non-numeric field") from None
            if not all(np.isfinite(vals)):
                raise ParseError(str(path), lineno, "non-finite value")
            rows.append(vals)
    if not rows:
        raise ParseError(str(path), 1, "file holds no rows")
    return np.array(rows, dtype=np.float64)


def load_uci(root, max_samples=None, seed=0) -> Dataset:
    files = _segment_files(Path(root))
    xs, ys = [], []
    for label, path in files:
        x = parse_segment(path)
        xs.append(x)
        ys.append(np.full(x.shape[0], label, dtype=np.int64))
    ds = Dataset(np.concatenate(xs), np.concatenate(ys), source=str(root))
    return subsample(ds, max_samples, seed)


SYNTHETIC_SAMPLES = 19000


def synthetic(
    n_samples=SYNTHETIC_SAMPLES, seed=0, separation=2.0, noise=1.0, n_features=N_FEATURES, n_classes=N_CLASSES
) -> Dataset:
    """Gaussian class clusters (19 in 45 dimensions by default), balanced labels.

    Class means are drawn once from N(0, separation^2 I); samples add
    isotropic N(0, noise^2) noise. The defaults leave room for accuracy to
    keep improving over 20 local epochs at the default step size.
    """
    if n_samples < 1:
        raise ArgumentError("synthetic dataset needs at least one sample")
    rng = np.random.default_rng([seed & 0xFFFFFFFF, 0x5EED])
    means = rng.normal(0.0, separation, size=(n_classes, n_features))
    labels = np.arange(n_samples, dtype=np.int64) % n_classes
    feats = means[labels] + rng.normal(0.0, noise, size=(n_samples, n_features))
    return Dataset(feats, labels, source="synthetic")


def subsample(ds: Dataset, max_samples=None, seed=0) -> Dataset:
    if max_samples is None or max_samples >= len(ds):
        return ds
    if max_samples < 1:
        raise ArgumentError("max_samples must be positive")
    rng = np.random.default_rng(seed)
    idx = np.sort(rng.choice(len(ds), size=int(max_samples), replace=False))
    return Dataset(ds.features[idx], ds.labels[idx], ds.source)


def load_dataset(dataset_dir=None, *, synthetic_samples=None, max_samples=None, seed=0) -> Dataset:
    """UCI tree when ``dataset_dir`` is given, else the seeded synthetic task."""
    if dataset_dir is not None:
        return load_uci(dataset_dir, max_samples, seed)
    n = synthetic_samples or max_samples or SYNTHETIC_SAMPLES
    return synthetic(n, seed)


@dataclass
class Standardizer:
    mean: np.ndarray
    std: np.ndarray

    @classmethod
    def fit(cls, x):
        std = x.std(axis=0)
        return cls(x.mean(axis=0), np.where(std > 0, std, 1.0))

    def apply(self, x):
        return (x - self.mean) / self.std


@dataclass
class Partition:
    clients: list
    test: ClientDataset
    dropped: int
    scaler: Standardizer
    train_index: np.ndarray = field(repr=False, default=None)


def partition(ds: Dataset, k: int, holdout=0.2, seed=0) -> Partition:
    """Shuffle, hold out a test split, and cut the training rows into k equal segments.

    Standardization is fitted on the training split and applied to both sides.
    Rows left over after the equal split are dropped.
    """
    if k < 1:
        raise ArgumentError("need at least one client")
    if not 0 <= holdout < 1:
        raise ArgumentError("holdout fraction must lie in [0, 1)")
    n = len(ds)
    rng = np.random.default_rng([seed & 0xFFFFFFFF, 0xDA7A])
    order = rng.permutation(n)
    n_test = int(round(n * holdout))
    test_idx, train_idx = order[:n_test], order[n_test:]
    if len(train_idx) < k:
        raise ArgumentError(f"{len(train_idx)} training rows cannot feed {k} clients")
    scaler = Standardizer.fit(ds.features[train_idx])
    seg = len(train_idx) // k
    clients = []
    for c in range(k):
        idx = train_idx[c * seg : (c + 1) * seg]
        clients.append(ClientDataset(scaler.apply(ds.features[idx]), ds.labels[idx], client_id=c))
    test = ClientDataset(scaler.apply(ds.features[test_idx]), ds.labels[test_idx], client_id=-1)
    return Partition(clients, test, len(train_idx) - seg * k, scaler, train_idx)


@dataclass
class TreeReport:
    files: int = 0
    rows: int = 0
    per_label: dict = field(default_factory=dict)
    problems: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.problems


def check_tree(root) -> TreeReport:
    """Parse every segment and compare the tree against the full UCI shape."""
    rep = TreeReport()
    try:
        files = _segment_files(Path(root))
    except ArgumentError as exc:
        rep.problems.append(str(exc))
        return rep
    for label, path in files:
        try:
            x = parse_segment(path)
        except ParseError as exc:
            rep.problems.append(str(exc))
            continue
        rep.files += 1
        rep.rows += x.shape[0]
        rep.per_label[label] = rep.per_label.get(label, 0) + x.shape[0]
        if x.shape[0] != ROWS_PER_SEGMENT:
            rep.problems.append(f"{path}: {x.shape[0]} rows, expected {ROWS_PER_SEGMENT}")
    expected = ACTIVITIES * SUBJECTS * SEGMENTS
    if len(files) != expected:
        rep.problems.append(f"found {len(files)} segment files, expected {expected}")
    return rep
