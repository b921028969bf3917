"""Inject each supported fault into a tiny proven round and show where it is caught.

Usage: python3 demos/tamper.py
"""

from zkdfl.errors import RoundAborted
from zkdfl.fl import TrainConfig
from zkdfl.orchestrator import TAMPER_POINTS, RoundConfig, Session, Tamper, partition, run_round, synthetic


def main():
    ds = synthetic(200, seed=1, n_features=2, n_classes=2)
    part = partition(ds, 3, seed=1)
    cfg = RoundConfig(clients=3, layers=(2, 1, 2), train=TrainConfig(1, 5, 0.05, 1), seed=1)
    keys = {}
    for point in TAMPER_POINTS:
        session = Session(cfg.architecture(), seed=1)
        session.keys = keys  # one trusted setup serves every trial
        try:
            run_round(cfg, part.clients, session=session, tamper=Tamper(point, seed=7))
            print(f"{point:<22} NOT DETECTED")
        except RoundAborted as exc:
            print(f"{point:<22} aborted at {exc.stage} ({exc.party})")
        print(f"{'':<22} model untouched: round index {session.round_index}")


if __name__ == "__main__":
    main()
