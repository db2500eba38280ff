"""Operator bank for the feed-forward recovery protocol.

The protocol runs a two-qubit state through five stages:

1. a pre-weak measurement of strength ``p`` with four outcomes (branches),
2. a branch-dependent feed-forward bit flip that moves population toward
   the damping-immune ground state,
3. an amplitude-damping channel of decay probability ``r`` acting
   independently on both qubits (four Kraus outcomes: no-jump/jump per
   qubit),
4. the inverse feed-forward flip,
5. a post-weak measurement of strength ``q`` chosen so that the no-jump
   chain is proportional to the identity.

This module builds every one of those operators as an explicit 4x4 complex
matrix in the (|00>, |01>, |10>, |11>) basis.  All constructors are pure:
they allocate fresh matrices on every call and share no state.
"""

from __future__ import annotations

import math
from enum import IntEnum

import numpy as np

from .errors import OutOfRangeError
from .qmath import kron2

__all__ = [
    "Branch",
    "Jump",
    "check_strength",
    "pre_measurement",
    "feed_forward",
    "post_measurement",
    "damping_kraus",
    "damping_kraus_1q",
    "chain_operator",
    "chain_operators",
]

_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_I2 = np.eye(2, dtype=complex)


class Branch(IntEnum):
    """Pre-measurement outcome, one bit per qubit; also selects the flip."""

    B00 = 0
    B01 = 1
    B10 = 2
    B11 = 3

    @property
    def bits(self) -> str:
        return format(self.value, "02b")


class Jump(IntEnum):
    """Damping outcome per qubit: 0 = no jump, 1 = decay to the ground state."""

    J00 = 0
    J01 = 1
    J10 = 2
    J11 = 3

    @property
    def bits(self) -> str:
        return format(self.value, "02b")


def check_strength(value: float, name: str = "strength") -> float:
    """Validate a measurement strength / decay probability in [0, 1]."""
    value = float(value)
    if not math.isfinite(value) or not 0.0 <= value <= 1.0:
        raise OutOfRangeError(f"{name} must lie in [0, 1], got {value!r}")
    return value


def pre_measurement(p: float, branch: Branch) -> np.ndarray:
    """Diagonal pre-weak measurement operator for one branch.

    At p=1 the four operators become projectors onto the basis states; at
    p=0 they are the same projectors with the outcome labels inverted.  The
    four together always satisfy the completeness relation sum(M^dag M) = I.
    """
    p = check_strength(p, "pre-measurement strength p")
    s = math.sqrt(p * (1.0 - p))
    diagonals = {
        Branch.B00: (p, s, s, 1.0 - p),
        Branch.B01: (s, p, 1.0 - p, s),
        Branch.B10: (s, 1.0 - p, p, s),
        Branch.B11: (1.0 - p, s, s, p),
    }
    return np.diag(np.asarray(diagonals[Branch(branch)], dtype=complex))


def feed_forward(branch: Branch) -> np.ndarray:
    """Feed-forward bit flip for one branch (self-inverse permutation).

    Branch b flips exactly the qubits whose outcome bit is 1, which maps the
    dominant component of the post-measurement state onto |00>.
    """
    branch = Branch(branch)
    first = _X if branch in (Branch.B10, Branch.B11) else _I2
    second = _X if branch in (Branch.B01, Branch.B11) else _I2
    return kron2(first, second)


def post_measurement(q: float, branch: Branch) -> np.ndarray:
    """Diagonal post-weak measurement operator for one branch.

    This is an incomplete measurement: the four operators do not satisfy a
    completeness relation, and the probability lost to the discarded
    outcome is reported as 1 - success rather than renormalized away.
    """
    q = check_strength(q, "post-measurement strength q")
    s = math.sqrt(1.0 - q)
    diagonals = {
        Branch.B00: (1.0 - q, s, s, 1.0),
        Branch.B01: (s, 1.0 - q, 1.0, s),
        Branch.B10: (s, 1.0, 1.0 - q, s),
        Branch.B11: (1.0, s, s, 1.0 - q),
    }
    return np.diag(np.asarray(diagonals[Branch(branch)], dtype=complex))


def damping_kraus_1q(r: float) -> tuple[np.ndarray, np.ndarray]:
    """Single-qubit amplitude-damping Kraus pair (no-jump, jump)."""
    r = check_strength(r, "damping probability r")
    no_jump = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - r)]], dtype=complex)
    jump = np.array([[0.0, math.sqrt(r)], [0.0, 0.0]], dtype=complex)
    return no_jump, jump


def damping_kraus(r: float) -> list[np.ndarray]:
    """Two-qubit amplitude-damping Kraus operators, indexed by ``Jump``.

    Both qubits damp locally and independently with the same probability
    ``r``, so the four operators are Kronecker products of the single-qubit
    pair and satisfy sum(e^dag e) = I for every r.
    """
    e0, e1 = damping_kraus_1q(r)
    singles = (e0, e1)
    return [kron2(singles[j >> 1], singles[j & 1]) for j in Jump]


def chain_operator(p: float, q: float, r: float, branch: Branch, jump: Jump) -> np.ndarray:
    """Composite operator for one (branch, jump) history.

    The product post_measurement . flip . kraus . flip . pre_measurement
    maps an input state straight to its unnormalized conditional output;
    its squared norm on a state is that history's probability.
    """
    f = feed_forward(branch)
    return (
        post_measurement(q, branch)
        @ f
        @ damping_kraus(r)[Jump(jump)]
        @ f
        @ pre_measurement(p, branch)
    )


def chain_operators(p: float, q: float, r: float) -> np.ndarray:
    """All 16 composite operators as one (4, 4, 4, 4) array [branch, jump].

    This is the form the evaluation kernels consume; the entries agree with
    ``chain_operator`` for every index pair.
    """
    out = np.empty((4, 4, 4, 4), dtype=complex)
    kraus = damping_kraus(r)
    for b in Branch:
        f = feed_forward(b)
        pre = f @ pre_measurement(p, b)
        post = post_measurement(q, b) @ f
        for j in Jump:
            out[b, j] = post @ kraus[j] @ pre
    return np.ascontiguousarray(out)
