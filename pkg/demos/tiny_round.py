"""Run one fully proven round on a two-client federation with a seven-parameter model.

Usage: python3 demos/tiny_round.py
"""

import numpy as np

from zkdfl import agg_circuit, groth16
from zkdfl.fl import TrainConfig
from zkdfl.orchestrator import RoundConfig, Session, partition, run_round, synthetic


def main():
    ds = synthetic(200, seed=0, n_features=2, n_classes=2)
    part = partition(ds, 2, seed=0)
    cfg = RoundConfig(clients=2, layers=(2, 1, 2), train=TrainConfig(1, 5, 0.05, 0), seed=0)
    session = Session(cfg.architecture(), seed=0)

    rec = run_round(cfg, part.clients, session=session, test=part.test)
    print(f"clients={rec.m} parameters={rec.P} constraints={rec.constraints}")
    print("stage checks:", rec.verified)
    print("proof bytes:", len(rec.proof.to_bytes()), "public inputs:", len(rec.public))
    print("independent verify:", groth16.verify(rec.vk, rec.public, rec.proof))

    gap = np.max(np.abs(rec.global_weights - rec.float_average))
    print(f"max gap to floating average: {gap:.2e}")
    print("gas:", rec.gas)

    # a second round reuses the proving key and the deployed verifier
    rec2 = run_round(cfg, part.clients, session=session, test=part.test)
    print(f"round {rec2.round_index}: gas total {rec2.gas['total']} accuracy {rec2.accuracy:.3f}")
    assert agg_circuit.constraint_count(2, 7) == rec.constraints


if __name__ == "__main__":
    main()
