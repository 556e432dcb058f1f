"""Singlet pairs, rival source hypotheses, and their measurable statistics.

Two models of the same two-particle source are implemented side by side.
QuantumEntangled keeps each pair in the singlet state until a
measurement collapses it; PreassignedDefinite hands each pair a definite
product configuration (electron up / positron down along z, or the
reverse, each half the time) at the moment of separation. At parallel
analyzer settings the two are statistically indistinguishable; the
correlation machinery, CHSH statistic, spin-switch protocol, and
untangle transformation below make their differences (and claimed
differences) measurable.

The preassigned model needs a measurement rule for analyzers tilted away
from the source axis, which its definition leaves open. The default
completes it deterministically: outcome = sign of the analyzer direction
projected onto the particle's definite axis, ties broken toward +1. A
probabilistic completion (projection probabilities, cos^2(theta/2)) is
available as the labeled "probabilistic" rule; the two are never mixed.

Sampling draws from explicitly passed generators in a fixed order, so a
fixed seed reproduces outcome sequences exactly. The *_blocked variants
split the pair budget into fixed-size blocks with one derived stream per
block, making aggregate counts independent of the worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Union

import numpy as np

from .measurement import expand_bipartite, measure_subsystem
from .qcore import (
    BipartiteState,
    LinearOperator,
    eigengroups,
    measure_observable,
    sigma_x,
    sigma_y,
    sigma_z,
)
from .rng import make_stream

__all__ = [
    "QuantumEntangled",
    "PreassignedDefinite",
    "PairModel",
    "AnalyzerSetting",
    "PairOutcome",
    "PairCounts",
    "SwitchReport",
    "singlet",
    "spin_operator",
    "sample_pair",
    "sample_pairs",
    "pair_counts_blocked",
    "correlation",
    "chsh",
    "switch_protocol",
    "switch_protocol_blocked",
    "untangle",
    "DEFAULT_BLOCK_SIZE",
]

# Fixed block size for worker-independent parallel sampling. Changing it
# changes which stream generates which pair, so it is a constant, not a
# tunable.
DEFAULT_BLOCK_SIZE = 65536

SWITCH_MODES = ("predicted", "mechanistic")

P2_RULES = ("deterministic", "probabilistic")

MECHANISTIC_DIVERGENCE_NOTE = (
    "mechanistic collapse: the electron anti-correlates with the positron's "
    "pre-flip value, so electron-up comes out 1/2 instead of the predicted-"
    "table value 1.0"
)


@dataclass(frozen=True)
class QuantumEntangled:
    """Source hypothesis 1: each pair stays in the singlet until measured."""


@dataclass(frozen=True)
class PreassignedDefinite:
    """Source hypothesis 2: each pair separates with definite opposite
    spins along the source z-axis, each assignment with probability 1/2."""

    rule: str = "deterministic"

    def __post_init__(self) -> None:
        if self.rule not in P2_RULES:
            raise ValueError(f"rule must be one of {P2_RULES}, got {self.rule!r}")


PairModel = Union[QuantumEntangled, PreassignedDefinite]


@dataclass(frozen=True, eq=False)
class AnalyzerSetting:
    """Measurement direction as a unit vector in 3-space."""

    vector: np.ndarray

    def __post_init__(self) -> None:
        v = np.array(self.vector, dtype=float)
        if v.shape != (3,):
            raise ValueError("analyzer setting must be a 3-vector")
        if abs(np.linalg.norm(v) - 1.0) > 1e-12:
            raise ValueError("analyzer setting must be a unit vector")
        v.setflags(write=False)
        object.__setattr__(self, "vector", v)

    @classmethod
    def from_angles(cls, polar: float, azimuthal: float) -> AnalyzerSetting:
        """Unit vector from polar and azimuthal angles in radians."""
        return cls(
            np.array(
                [
                    np.sin(polar) * np.cos(azimuthal),
                    np.sin(polar) * np.sin(azimuthal),
                    np.cos(polar),
                ]
            )
        )

    @classmethod
    def from_degrees(cls, polar: float, azimuthal: float) -> AnalyzerSetting:
        return cls.from_angles(np.deg2rad(polar), np.deg2rad(azimuthal))

    def dot(self, other: AnalyzerSetting) -> float:
        return float(self.vector @ other.vector)


@dataclass(frozen=True)
class PairOutcome:
    """One measured pair: electron and positron readings, each +1 or -1."""

    electron: int
    positron: int

    def __post_init__(self) -> None:
        if self.electron not in (-1, 1) or self.positron not in (-1, 1):
            raise ValueError("outcomes must be +1 or -1")

    @property
    def product(self) -> int:
        return self.electron * self.positron


@dataclass(frozen=True)
class PairCounts:
    """Exact integer tallies of the four joint outcomes."""

    up_up: int = 0
    up_down: int = 0
    down_up: int = 0
    down_down: int = 0

    def __add__(self, other: PairCounts) -> PairCounts:
        return PairCounts(
            self.up_up + other.up_up,
            self.up_down + other.up_down,
            self.down_up + other.down_up,
            self.down_down + other.down_down,
        )

    @property
    def n_pairs(self) -> int:
        return self.up_up + self.up_down + self.down_up + self.down_down

    @property
    def correlation(self) -> float:
        """Mean of electron times positron."""
        if self.n_pairs == 0:
            raise ValueError("no pairs counted")
        same = self.up_up + self.down_down
        opposite = self.up_down + self.down_up
        return (same - opposite) / self.n_pairs

    @property
    def p_electron_up(self) -> float:
        return (self.up_up + self.up_down) / self.n_pairs

    @property
    def p_positron_up(self) -> float:
        return (self.up_up + self.down_up) / self.n_pairs


@dataclass(frozen=True)
class SwitchReport:
    """Outcome frequencies of the spin-switch protocol."""

    n_pairs: int
    n_electron_up: int
    n_positron_down: int
    mode: str
    note: str = ""

    @property
    def p_electron_up(self) -> float:
        return self.n_electron_up / self.n_pairs

    @property
    def p_positron_down(self) -> float:
        return self.n_positron_down / self.n_pairs


def singlet() -> BipartiteState:
    """The two-spin singlet (up down - down up) / sqrt(2)."""
    amps = np.array([[0.0, 1.0], [-1.0, 0.0]]) / np.sqrt(2.0)
    return BipartiteState(amps, ("up", "down"), ("up", "down"))


def spin_operator(setting: AnalyzerSetting) -> LinearOperator:
    """Spin observable along the analyzer direction: a . sigma."""
    ax, ay, az = setting.vector
    entries = (
        ax * sigma_x().entries + ay * sigma_y().entries + az * sigma_z().entries
    )
    return LinearOperator(entries, hermitian=True)


def _sign_plus(x: np.ndarray) -> np.ndarray:
    """Deterministic sign with ties at zero broken toward +1."""
    return np.where(np.asarray(x) >= 0.0, 1, -1)


def sample_pair(
    model: PairModel,
    a: AnalyzerSetting,
    b: AnalyzerSetting,
    rng: np.random.Generator,
) -> PairOutcome:
    """Measure one pair: electron along a, then positron along b.

    The entangled model measures the electron factor of the singlet and
    collapses the joint state, then measures the positron on the remote
    state the collapse left. The preassigned model draws the hidden
    configuration and applies its measurement rule to each particle
    independently.
    """
    if isinstance(model, QuantumEntangled):
        first = measure_subsystem(singlet(), spin_operator(a), rng)
        second = measure_observable(spin_operator(b), first.remote, rng)
        return PairOutcome(
            int(_sign_plus(first.eigenvalue)), int(_sign_plus(second.eigenvalue))
        )
    config = 1 if rng.random() < 0.5 else -1
    az = float(a.vector[2])
    bz = float(b.vector[2])
    if model.rule == "deterministic":
        return PairOutcome(
            int(_sign_plus(config * az)), int(_sign_plus(-config * bz))
        )
    p_e = (1.0 + config * az) / 2.0
    p_p = (1.0 - config * bz) / 2.0
    electron = 1 if rng.random() < p_e else -1
    positron = 1 if rng.random() < p_p else -1
    return PairOutcome(electron, positron)


def _entangled_block(
    a: AnalyzerSetting, b: AnalyzerSetting, n: int, rng: np.random.Generator
) -> PairCounts:
    """Vectorized singlet sampling, identical in law to per-pair collapse.

    Electron outcomes are drawn from the expansion probabilities along
    a; positron outcomes from the Born probability of the +1 eigenspace
    of b's spin operator on the remote state each electron outcome
    leaves. Draw order: electron uniforms, then positron uniforms.
    """
    expansion = expand_bipartite(singlet(), spin_operator(a))
    values = expansion.group_eigenvalues
    probs = expansion.group_probabilities
    remotes = [expansion.remote_state(k) for k in range(values.size)]
    plus_basis = eigengroups(spin_operator(b))[-1].basis
    p_plus = np.array(
        [
            float(np.sum(np.abs(plus_basis.conj().T @ r.amplitudes) ** 2))
            for r in remotes
        ]
    )
    hi = (rng.random(n) < probs[1]).astype(int)
    electron = _sign_plus(values[hi])
    positron = np.where(rng.random(n) < p_plus[hi], 1, -1)
    return _tally(electron, positron)


def _preassigned_block(
    model: PreassignedDefinite,
    a: AnalyzerSetting,
    b: AnalyzerSetting,
    n: int,
    rng: np.random.Generator,
) -> PairCounts:
    """Vectorized preassigned sampling. Draw order: hidden configuration,
    then (probabilistic rule only) electron uniforms, positron uniforms."""
    config = np.where(rng.random(n) < 0.5, 1, -1)
    az = float(a.vector[2])
    bz = float(b.vector[2])
    if model.rule == "deterministic":
        electron = _sign_plus(config * az)
        positron = _sign_plus(-config * bz)
    else:
        p_e = (1.0 + config * az) / 2.0
        p_p = (1.0 - config * bz) / 2.0
        electron = np.where(rng.random(n) < p_e, 1, -1)
        positron = np.where(rng.random(n) < p_p, 1, -1)
    return _tally(electron, positron)


def _tally(electron: np.ndarray, positron: np.ndarray) -> PairCounts:
    e_up = electron > 0
    p_up = positron > 0
    return PairCounts(
        up_up=int(np.sum(e_up & p_up)),
        up_down=int(np.sum(e_up & ~p_up)),
        down_up=int(np.sum(~e_up & p_up)),
        down_down=int(np.sum(~e_up & ~p_up)),
    )


def sample_pairs(
    model: PairModel,
    a: AnalyzerSetting,
    b: AnalyzerSetting,
    n: int,
    rng: np.random.Generator,
) -> PairCounts:
    """Tally n pairs drawn from one stream (vectorized)."""
    if n < 1:
        raise ValueError("need at least one pair")
    if isinstance(model, QuantumEntangled):
        return _entangled_block(a, b, n, rng)
    return _preassigned_block(model, a, b, n, rng)


def _block_sizes(n: int, block_size: int) -> list[int]:
    sizes = [block_size] * (n // block_size)
    if n % block_size:
        sizes.append(n % block_size)
    return sizes


def _run_blocks(kernel, sizes, seed, stream_offset, workers):
    def run(i: int):
        return kernel(sizes[i], make_stream(seed, stream_offset + i))

    if workers <= 1:
        return [run(i) for i in range(len(sizes))]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, range(len(sizes))))


def pair_counts_blocked(
    model: PairModel,
    a: AnalyzerSetting,
    b: AnalyzerSetting,
    n: int,
    seed: int,
    *,
    block_size: int = DEFAULT_BLOCK_SIZE,
    workers: int = 1,
    stream_offset: int = 0,
) -> PairCounts:
    """Tally n pairs split into fixed blocks with one stream per block.

    Block i draws from the stream derived from (seed, stream_offset + i)
    regardless of which worker runs it, and blocks aggregate by exact
    integer sums, so the result is byte-identical for any worker count.
    """
    if n < 1:
        raise ValueError("need at least one pair")
    sizes = _block_sizes(n, block_size)
    counts = _run_blocks(
        lambda size, rng: sample_pairs(model, a, b, size, rng),
        sizes,
        seed,
        stream_offset,
        workers,
    )
    total = PairCounts()
    for c in counts:
        total = total + c
    return total


def correlation(
    model: PairModel,
    a: AnalyzerSetting,
    b: AnalyzerSetting,
    n: int,
    rng: np.random.Generator,
) -> float:
    """Monte Carlo estimate of E(a, b): mean of electron times positron."""
    return sample_pairs(model, a, b, n, rng).correlation


def chsh(
    model: PairModel,
    a: AnalyzerSetting,
    a2: AnalyzerSetting,
    b: AnalyzerSetting,
    b2: AnalyzerSetting,
    n: int,
    rng: np.random.Generator,
) -> float:
    """S = E(a,b) - E(a,b2) + E(a2,b) + E(a2,b2), each estimated from n
    freshly sampled pairs."""
    return (
        correlation(model, a, b, n, rng)
        - correlation(model, a, b2, n, rng)
        + correlation(model, a2, b, n, rng)
        + correlation(model, a2, b2, n, rng)
    )


def _switch_block(
    model: PairModel, mode: str, n: int, rng: np.random.Generator
) -> tuple[int, int]:
    """Electron-up and positron-down counts for one block.

    predicted mode emits the protocol's claimed outcome tables: the
    entangled source yields electron up and positron down every time;
    the preassigned source yields electron up half the time (sampled)
    and positron down every time. mechanistic mode simulates the device:
    it measures the positron along z, flips up to down before detection,
    and only then is the electron measured along z.
    """
    if isinstance(model, QuantumEntangled):
        if mode == "predicted":
            return n, n
        # Mechanistic: positron measured first (along z), collapsing the
        # singlet; the flip changes the detected positron value, not the
        # collapsed state the electron is measured on.
        positron_first = singlet()
        swapped = BipartiteState(
            positron_first.amps.T.copy(),
            positron_first.labels_ii,
            positron_first.labels_i,
        )
        expansion = expand_bipartite(swapped, sigma_z())
        probs = expansion.group_probabilities
        remotes = [expansion.remote_state(k) for k in range(probs.size)]
        p_up = np.array([float(np.abs(r.amplitudes[0]) ** 2) for r in remotes])
        hi = (rng.random(n) < probs[1]).astype(int)
        electron_up = int(np.sum(rng.random(n) < p_up[hi]))
        return electron_up, n
    config = np.where(rng.random(n) < 0.5, 1, -1)
    electron_up = int(np.sum(config > 0))
    # Either mode: the positron's definite (or collapsed) value is
    # flipped to down when up, so detection reads down always.
    return electron_up, n


def switch_protocol(
    model: PairModel, n: int, mode: str, rng: np.random.Generator
) -> SwitchReport:
    """Run the spin-switch protocol on n pairs.

    The device sits on the positron arm and switches every spin-up
    positron to spin-down before detection. predicted mode reproduces
    the protocol's claimed outcome tables; mechanistic mode simulates
    measure-then-flip collapse. For the entangled source the two
    disagree on the electron, and the report's note says so.
    """
    if mode not in SWITCH_MODES:
        raise ValueError(f"mode must be one of {SWITCH_MODES}, got {mode!r}")
    if n < 1:
        raise ValueError("need at least one pair")
    electron_up, positron_down = _switch_block(model, mode, n, rng)
    return _switch_report(model, mode, n, electron_up, positron_down)


def _switch_report(
    model: PairModel, mode: str, n: int, electron_up: int, positron_down: int
) -> SwitchReport:
    note = ""
    if mode == "mechanistic" and isinstance(model, QuantumEntangled):
        note = MECHANISTIC_DIVERGENCE_NOTE
    return SwitchReport(
        n_pairs=n,
        n_electron_up=electron_up,
        n_positron_down=positron_down,
        mode=mode,
        note=note,
    )


def switch_protocol_blocked(
    model: PairModel,
    n: int,
    mode: str,
    seed: int,
    *,
    block_size: int = DEFAULT_BLOCK_SIZE,
    workers: int = 1,
    stream_offset: int = 0,
) -> SwitchReport:
    """Blocked, worker-count-independent variant of switch_protocol."""
    if mode not in SWITCH_MODES:
        raise ValueError(f"mode must be one of {SWITCH_MODES}, got {mode!r}")
    if n < 1:
        raise ValueError("need at least one pair")
    sizes = _block_sizes(n, block_size)
    results = _run_blocks(
        lambda size, rng: _switch_block(model, mode, size, rng),
        sizes,
        seed,
        stream_offset,
        workers,
    )
    electron_up = sum(r[0] for r in results)
    positron_down = sum(r[1] for r in results)
    return _switch_report(model, mode, n, electron_up, positron_down)


def untangle(psi: BipartiteState, rng: np.random.Generator) -> BipartiteState:
    """Map the singlet to a definite product state on separation.

    Returns up-down or down-up (each with probability 1/2) as a product
    state over the input's bases; feeding the outputs into parallel-axis
    sampling reproduces the preassigned model's statistics exactly. Any
    global phase on the input is ignored; anything that is not the
    singlet is rejected.
    """
    if psi.dims != (2, 2):
        raise ValueError("untangle is defined only for two-spin states")
    reference = singlet().amps
    overlap = complex(np.vdot(reference, psi.amps))
    if 1.0 - abs(overlap) > 1e-9:
        raise ValueError("untangle is defined only for the singlet state")
    amps = np.zeros((2, 2))
    if rng.random() < 0.5:
        amps[0, 1] = 1.0
    else:
        amps[1, 0] = 1.0
    return BipartiteState(amps, psi.labels_i, psi.labels_ii)
