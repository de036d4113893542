"""Simulator for secure multiparty CNOT protocols.

States are 1-d complex numpy arrays with qubit 0 as the most significant bit.
Gates can be given by name ("h", "s", "t", ...) or as 2x2 arrays.
"""

from ._smqc import (
    Circuit,
    InvalidCircuit,
    ParseError,
    SwapError,
    basis_state,
    bell_state,
    bit_flip_attack,
    chi_corruption,
    chi_state,
    cnot_key_update,
    commit,
    gate,
    is_clifford,
    nl_cnot,
    parse_state,
    prop1_distance,
    recover_u1,
    rotated_basis_attack,
    run,
    verify,
)

__all__ = [
    "Circuit",
    "InvalidCircuit",
    "ParseError",
    "SwapError",
    "basis_state",
    "bell_state",
    "bit_flip_attack",
    "chi_corruption",
    "chi_state",
    "cnot_key_update",
    "commit",
    "gate",
    "is_clifford",
    "nl_cnot",
    "parse_state",
    "prop1_distance",
    "recover_u1",
    "rotated_basis_attack",
    "run",
    "verify",
]
