"""Verifiable federated averaging.

A server aggregates client models and proves, with Groth16 over BN254, that the
published average is the integer floor mean of exactly the inputs whose MiMC7
digests the clients committed. A gas-metered simulated ledger hosts the
hash-sum and proof-verification contracts.
"""

from . import agg_circuit, groth16, ledger, mimc7
from .errors import (
    ArgumentError,
    FieldError,
    OrderingError,
    ParseError,
    RangeError,
    RoundAborted,
    UnsatisfiedCircuit,
    ZkdflError,
)
from .groth16 import Proof, ProvingKey, VerifyingKey, prove, setup, verify
from .qap import Qap, to_qap
from .r1cs import ConstraintSystem, LinearCombination, Variable

__version__ = "0.1.0"

__all__ = [
    "agg_circuit",
    "groth16",
    "ledger",
    "mimc7",
    "ConstraintSystem",
    "LinearCombination",
    "Variable",
    "Qap",
    "to_qap",
    "setup",
    "prove",
    "verify",
    "Proof",
    "ProvingKey",
    "VerifyingKey",
    "ZkdflError",
    "ArgumentError",
    "FieldError",
    "OrderingError",
    "UnsatisfiedCircuit",
    "RangeError",
    "ParseError",
    "RoundAborted",
]
