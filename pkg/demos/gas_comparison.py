"""Compare per-round gas of proof-verified aggregation with on-chain aggregation.

Usage: python3 demos/gas_comparison.py
"""

from zkdfl import agg_circuit, ledger


def main():
    print(f"{'m':>3} {'constraints':>12} {'zk gas':>10} {'baseline gas':>14} {'ratio':>7}")
    for m in (2, 5, 10, 15, 20):
        zk = ledger.zkdfl_round_gas(m)["total"]
        base = ledger.baseline_round_gas(m, 669)
        print(f"{m:>3} {agg_circuit.constraint_count(m, 669):>12} {zk:>10} {base:>14} {base / zk:>7.1f}")

    print("\nbreakdown at m=10:")
    for key, value in ledger.zkdfl_round_gas(10).items():
        print(f"  {key:<12} {value}")
    print("later rounds (verifier already deployed):", ledger.zkdfl_round_gas(10, deploy_verifier=False)["total"])


if __name__ == "__main__":
    main()
