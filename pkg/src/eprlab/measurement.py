"""Bipartite expansion, collapse, and the completeness criterion.

A joint state of systems I and II is expanded in the eigenbasis of an
observable on system I; measuring that observable collapses the joint
state and leaves system II in a definite remote state. Expanding the
same joint state in two different eigenbases yields two different
remote-state assignments for the same unmeasured system, which is the
tension these tools are built to exhibit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .qcore import (
    BipartiteState,
    LinearOperator,
    StateVector,
    eigengroups,
    is_eigenstate,
)

__all__ = [
    "BipartiteState",
    "ExpansionResult",
    "SubsystemMeasurement",
    "SimultaneityReport",
    "expand_bipartite",
    "measure_subsystem",
    "remote_state_pair",
    "simultaneous_eigenstate_check",
]

# Singular values below this fraction of the largest are treated as zero
# when deciding whether a degenerate outcome leaves a product state.
RANK_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class ExpansionResult:
    """Expansion of a joint state in a subsystem-I eigenbasis.

    Term n pairs the orthonormal eigenvector basis[:, n] of the measured
    observable with the unnormalized coefficient vector coefficients[n]
    over system II; probabilities[n] is that vector's squared norm.
    Degenerate eigenvalues are clustered into outcome groups: group g
    covers terms group_slices[g] and carries the eigenspace probability
    group_probabilities[g] for eigenvalue group_eigenvalues[g].
    """

    eigenvalues: np.ndarray
    basis: np.ndarray
    coefficients: np.ndarray
    probabilities: np.ndarray
    group_slices: tuple[slice, ...]
    group_eigenvalues: np.ndarray
    group_probabilities: np.ndarray

    @property
    def n_outcomes(self) -> int:
        return len(self.group_slices)

    def reconstruct(self) -> np.ndarray:
        """Sum of outer products u_n (x) coeff_n; equals the input amps."""
        return self.basis @ self.coefficients

    def remote_state(self, outcome: int) -> StateVector:
        """Normalized system-II state left by the given outcome group.

        For a one-dimensional eigenspace this is the normalized
        coefficient vector. A degenerate outcome only admits a remote
        state when the projected joint state is still a product; if it
        is not, system II stays entangled with system I and the request
        is an error.
        """
        block = self.coefficients[self.group_slices[outcome]]
        if float(np.linalg.norm(block)) <= 1e-15:
            raise ValueError(f"outcome {outcome} has zero probability")
        if block.shape[0] == 1:
            return StateVector(block[0])
        singular = np.linalg.svd(block, compute_uv=False)
        if singular[1] > RANK_RTOL * singular[0]:
            raise ValueError(
                "degenerate outcome leaves system II entangled with system I; "
                "no single remote state exists"
            )
        _, _, vh = np.linalg.svd(block)
        return StateVector(vh[0].conj())


class SubsystemMeasurement(NamedTuple):
    """Result of measuring an observable on system I of a joint state."""

    eigenvalue: float
    collapsed: BipartiteState
    remote: StateVector


@dataclass(frozen=True, eq=False)
class SimultaneityReport:
    """Whether one state is an eigenstate of two observables at once."""

    is_simultaneous: bool
    eigen_a: float | None
    eigen_b: float | None


def _check_subsystem_op(psi: BipartiteState, a: LinearOperator) -> None:
    if not a.hermitian:
        raise ValueError("subsystem observable must be Hermitian")
    if a.dim != psi.dims[0]:
        raise ValueError(
            f"observable dimension {a.dim} does not match subsystem I "
            f"dimension {psi.dims[0]}"
        )


def expand_bipartite(psi: BipartiteState, a: LinearOperator) -> ExpansionResult:
    """Expand the joint amplitudes in the eigenbasis of an observable on I.

    Writes amps[m][j] = sum_n u_n[m] coeff_n[j] with u_n the eigenvectors
    of a; coeff_n[j] = sum_m conj(u_n[m]) amps[m][j]. The squared norms
    of the coefficient vectors are the Born probabilities, accumulated
    per degenerate eigenspace.
    """
    _check_subsystem_op(psi, a)
    groups = eigengroups(a)
    basis = np.concatenate([g.basis for g in groups], axis=1)
    eigenvalues = np.concatenate(
        [np.full(g.basis.shape[1], g.value) for g in groups]
    )
    coefficients = basis.conj().T @ psi.amps
    probabilities = np.sum(np.abs(coefficients) ** 2, axis=1)
    slices = []
    start = 0
    for g in groups:
        width = g.basis.shape[1]
        slices.append(slice(start, start + width))
        start += width
    group_probabilities = np.array(
        [float(np.sum(probabilities[s])) for s in slices]
    )
    return ExpansionResult(
        eigenvalues=eigenvalues,
        basis=basis,
        coefficients=coefficients,
        probabilities=probabilities,
        group_slices=tuple(slices),
        group_eigenvalues=np.array([g.value for g in groups]),
        group_probabilities=group_probabilities,
    )


def measure_subsystem(
    psi: BipartiteState, a: LinearOperator, rng: np.random.Generator
) -> SubsystemMeasurement:
    """Born-rule measurement of an observable on system I.

    Samples an outcome eigenspace with its expansion probability,
    projects the joint state onto it (renormalized), and extracts the
    remote system-II state the collapse leaves behind.
    """
    expansion = expand_bipartite(psi, a)
    probs = expansion.group_probabilities
    probs = probs / probs.sum()
    k = int(rng.choice(expansion.n_outcomes, p=probs))
    block = expansion.group_slices[k]
    collapsed_amps = expansion.basis[:, block] @ expansion.coefficients[block]
    collapsed = BipartiteState(collapsed_amps, psi.labels_i, psi.labels_ii)
    remote = expansion.remote_state(k)
    return SubsystemMeasurement(
        float(expansion.group_eigenvalues[k]), collapsed, remote
    )


def remote_state_pair(
    psi: BipartiteState,
    a: LinearOperator,
    b: LinearOperator,
    outcome_a: int,
    outcome_b: int,
) -> tuple[StateVector, StateVector]:
    """The two remote system-II states from two rival expansions.

    Expanding the same joint state in the eigenbases of two different
    system-I observables assigns system II one state per expansion;
    for chosen outcome indices (ascending eigenvalue order) this
    returns both assignments side by side.
    """
    exp_a = expand_bipartite(psi, a)
    exp_b = expand_bipartite(psi, b)
    if not 0 <= outcome_a < exp_a.n_outcomes:
        raise ValueError(
            f"outcome_a {outcome_a} out of range for {exp_a.n_outcomes} outcomes"
        )
    if not 0 <= outcome_b < exp_b.n_outcomes:
        raise ValueError(
            f"outcome_b {outcome_b} out of range for {exp_b.n_outcomes} outcomes"
        )
    return exp_a.remote_state(outcome_a), exp_b.remote_state(outcome_b)


def simultaneous_eigenstate_check(
    s: StateVector, a: LinearOperator, b: LinearOperator, tol: float
) -> SimultaneityReport:
    """Test whether one state has definite values for both observables.

    A state counts as simultaneous when it is an eigenstate of both a
    and b within tol. For non-commuting observables no state passes;
    for commuting ones every common eigenvector does.
    """
    if not (a.hermitian and b.hermitian):
        raise ValueError("both observables must be Hermitian")
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    lam_a = is_eigenstate(a, s, tol)
    lam_b = is_eigenstate(b, s, tol)
    return SimultaneityReport(
        is_simultaneous=lam_a is not None and lam_b is not None,
        eigen_a=None if lam_a is None else float(lam_a.real),
        eigen_b=None if lam_b is None else float(lam_b.real),
    )
