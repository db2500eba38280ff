"""Recovery pipeline for pure two-qubit input states.

A pure state sent through the protocol stays pure along each conditional
history: fixing the measurement branch and the damping outcome gives a
single unnormalized trajectory vector, obtained by applying the composite
chain operator.  The channel's mixing enters only at the end, when the four
damping outcomes of a branch are merged into that branch's final density
matrix weighted by their probabilities.

Working with unnormalized trajectory vectors throughout is algebraically
identical to normalizing after each stage and multiplying the conditional
probabilities; the tests exercise that equivalence explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .channelbank import Branch, Jump, chain_operator, check_strength
from .errors import DegenerateBranchError, DegenerateTotalError
from .qmath import outer

DEGENERATE_PROBABILITY = 1e-14

STATE_NORM_TOL = 1e-12


class TrajectoryMode(Enum):
    """Which damping outcomes contribute.

    ALL is the physical channel.  NO_JUMP_ONLY keeps only the double
    no-jump history, the comparison setting in which damping reduces to the
    effect of a weak measurement.
    """

    ALL = "all"
    NO_JUMP_ONLY = "nojump"

    def jumps(self) -> tuple[Jump, ...]:
        return (Jump.J00,) if self is TrajectoryMode.NO_JUMP_ONLY else tuple(Jump)


@dataclass(frozen=True)
class Trajectory:
    """One conditional history: branch, damping outcome, unnormalized state."""

    branch: Branch
    jump: Jump
    unnormalized_state: np.ndarray
    probability: float


@dataclass(frozen=True)
class BranchResult:
    """Final state, success probability and fidelity of one branch."""

    branch: Branch
    rho_fin: np.ndarray
    g_fin: float
    fidelity: float


@dataclass(frozen=True)
class RunResult:
    """Per-branch results plus probability-weighted totals.

    ``per_branch`` lists only branches whose success probability exceeds
    the degeneracy threshold; the others carry zero weight in the totals
    and have no defined final state.
    """

    per_branch: tuple
    fid_total: float
    g_total: float


def check_pure_state(psi: np.ndarray) -> np.ndarray:
    """Validate a normalized two-qubit amplitude vector."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.shape != (4,):
        raise ValueError(f"expected 4 amplitudes, got shape {psi.shape}")
    if not np.isfinite(psi).all():
        raise ValueError("amplitudes must be finite")
    norm_sq = float(np.vdot(psi, psi).real)
    if abs(norm_sq - 1.0) > STATE_NORM_TOL:
        raise ValueError(f"state norm^2 = {norm_sq!r} is not 1 within {STATE_NORM_TOL:g}")
    return psi


def trajectory(psi: np.ndarray, p: float, q: float, r: float,
               branch: Branch, jump: Jump,
               mode: TrajectoryMode = TrajectoryMode.ALL) -> Trajectory:
    """Propagate one conditional history of a pure state.

    Returns the unnormalized output vector (chain operator applied to the
    input) together with its probability, the squared norm.  In no-jump
    mode every history with a jump is the zero trajectory.
    """
    psi = check_pure_state(psi)
    branch, jump = Branch(branch), Jump(jump)
    for value, name in ((p, "p"), (q, "q"), (r, "r")):
        check_strength(value, name)
    if jump not in mode.jumps():
        vec = np.zeros(4, dtype=complex)
        return Trajectory(branch, jump, vec, 0.0)
    vec = chain_operator(p, q, r, branch, jump) @ psi
    return Trajectory(branch, jump, vec, float(np.vdot(vec, vec).real))


def run_branch(psi: np.ndarray, p: float, q: float, r: float, branch: Branch,
               mode: TrajectoryMode = TrajectoryMode.ALL) -> BranchResult:
    """Merge the damping outcomes of one branch into its final mixed state.

    The branch success probability is the sum of the trajectory
    probabilities, and the fidelity is taken between the input state and
    the normalized mixture (for a pure reference this is the quadratic form
    <psi| rho |psi>).

    Raises:
        DegenerateBranchError: the branch fires with probability ~0, so its
            final state and fidelity are undefined.
    """
    trajectories = [trajectory(psi, p, q, r, branch, j, mode) for j in Jump]
    g_fin = sum(t.probability for t in trajectories)
    if g_fin < DEGENERATE_PROBABILITY:
        raise DegenerateBranchError(
            f"branch {Branch(branch).bits} fires with probability {g_fin:.3e}"
        )
    rho_unnorm = np.zeros((4, 4), dtype=complex)
    fid_unnorm = 0.0
    for t in trajectories:
        rho_unnorm += outer(t.unnormalized_state)
        fid_unnorm += abs(np.vdot(psi, t.unnormalized_state)) ** 2
    return BranchResult(
        branch=Branch(branch),
        rho_fin=rho_unnorm / g_fin,
        g_fin=g_fin,
        fidelity=fid_unnorm / g_fin,
    )


def run_total(psi: np.ndarray, p: float, q: float, r: float,
              mode: TrajectoryMode = TrajectoryMode.ALL) -> RunResult:
    """Run all four branches and combine them into weighted totals.

    The total fidelity is the success-probability-weighted mean of the
    branch fidelities; degenerate branches carry zero weight and are left
    out of ``per_branch``.

    Raises:
        DegenerateTotalError: every branch is blocked, so no state survives
            the post-selection at all.
    """
    results = []
    g_total = 0.0
    fid_weighted = 0.0
    for branch in Branch:
        try:
            res = run_branch(psi, p, q, r, branch, mode)
        except DegenerateBranchError:
            continue
        results.append(res)
        g_total += res.g_fin
        fid_weighted += res.g_fin * res.fidelity
    if g_total < DEGENERATE_PROBABILITY:
        raise DegenerateTotalError(
            f"total success probability {g_total:.3e}; nothing survives post-selection"
        )
    return RunResult(
        per_branch=tuple(results),
        fid_total=fid_weighted / g_total,
        g_total=g_total,
    )
