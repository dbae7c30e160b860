"""Propagators of simple, time-dependent and electric coined walks.

One step is always shift first, coin second::

    Z    = (I (x) U) S
    Z(n) = (I (x) U(n)) S
    Z_E  = (E_phi (x) I) (I (x) U) S

Step indices start at 1.
"""

from __future__ import annotations

from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass, field

import numpy as np

from . import lattice as lat
from .coin import check_su2
from .errors import InvalidInputError, NormDriftError, SizeLimitError
from .lattice import Boundary, LatticeConfig, WalkerCoinState

__all__ = [
    "Simple",
    "TimeDependent",
    "Electric",
    "WalkSpec",
    "coin_at",
    "step",
    "evolve",
    "iter_evolve",
    "translation_defect",
    "dense_matrix",
    "dense_shift",
    "dense_quasimomentum_shift",
    "MAX_DENSE_SITES",
]

MAX_DENSE_SITES = 64
NORM_DRIFT_LIMIT = 1e-8


@dataclass(frozen=True)
class Simple:
    coin: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coin", check_su2(self.coin))


@dataclass(frozen=True)
class TimeDependent:
    schedule: Callable[[int], np.ndarray]
    label: str = field(default="time-dependent", compare=False)


@dataclass(frozen=True)
class Electric:
    coin: np.ndarray
    phi: float

    def __post_init__(self):
        object.__setattr__(self, "coin", check_su2(self.coin))
        object.__setattr__(self, "phi", float(self.phi))


WalkSpec = Simple | TimeDependent | Electric


def coin_at(spec: WalkSpec, n: int) -> np.ndarray:
    if n < 1:
        raise InvalidInputError(f"step index starts at 1, got {n}")
    if isinstance(spec, TimeDependent):
        return check_su2(spec.schedule(n))
    return spec.coin


def step(spec: WalkSpec, state: WalkerCoinState, n: int = 1, *, strict_phase: bool = True) -> WalkerCoinState:
    """Apply the n-th one-step propagator of ``spec``."""
    out = lat.apply_coin(lat.conditional_shift(state), coin_at(spec, n))
    if isinstance(spec, Electric):
        out = lat.apply_quasimomentum_shift(out, spec.phi, strict=strict_phase)
    return out


def iter_evolve(spec: WalkSpec, state: WalkerCoinState, n_steps: int) -> Iterator[tuple[int, WalkerCoinState]]:
    """Yield ``(n, Z(n)...Z(1)|psi>)`` for n = 1..n_steps."""
    norm0 = state.norm
    for n in range(1, n_steps + 1):
        state = step(spec, state, n)
        if abs(state.norm - norm0) > NORM_DRIFT_LIMIT:
            raise NormDriftError(f"norm drifted to {state.norm!r} after step {n}")
        yield n, state


def evolve(spec: WalkSpec, state: WalkerCoinState, n_steps: int) -> WalkerCoinState:
    if n_steps < 0:
        raise InvalidInputError("n_steps must be non-negative")
    out = state.copy()
    for _, out in iter_evolve(spec, state, n_steps):
        pass
    return out


def translation_defect(spec: WalkSpec, probes: Sequence[WalkerCoinState] | None = None,
                       config: LatticeConfig | None = None, n: int = 1) -> float:
    """max_e || (R (x) I) Z (R^dagger (x) I) e - Z e || over ring probe states.

    With no probes, every basis state of ``config`` is used.  The ring phase
    check is waived so electric walks with any phi can be diagnosed.
    """
    if probes is None:
        if config is None:
            raise InvalidInputError("need probes or a ring config")
        probes = [lat.basis_state(i, c, config) for i in range(config.size) for c in (0, 1)]
    worst = 0.0
    for e in probes:
        if e.config.boundary is not Boundary.RING:
            raise InvalidInputError("translation defect is defined on a ring")
        conj = lat.apply_shift(step(spec, lat.apply_shift(e, "left"), n, strict_phase=False), "right")
        direct = step(spec, e, n, strict_phase=False)
        worst = max(worst, float(np.linalg.norm(conj.amplitudes - direct.amplitudes)))
    return worst


def dense_shift(config: LatticeConfig) -> np.ndarray:
    """R as an L x L cyclic permutation (column j has its 1 in row j+1)."""
    return np.roll(np.eye(config.size, dtype=np.complex128), 1, axis=0)


def dense_quasimomentum_shift(config: LatticeConfig, phi: float) -> np.ndarray:
    return np.diag(np.exp(1j * phi * config.sites))


def dense_matrix(spec: WalkSpec, config: LatticeConfig, n: int = 1) -> np.ndarray:
    """Explicit 2L x 2L one-step propagator on a ring, built from the operator formula.

    Row/column ordering matches the site-major state layout, so the walker factor
    is the left Kronecker factor.
    """
    if config.boundary is not Boundary.RING:
        raise InvalidInputError("dense matrices are built on a ring")
    if config.size > MAX_DENSE_SITES:
        raise SizeLimitError(f"dense oracle limited to {MAX_DENSE_SITES} sites, got {config.size}")
    r = dense_shift(config)
    u = coin_at(spec, n)
    up = np.array([[1, 0], [0, 0]], dtype=np.complex128)
    down = np.array([[0, 0], [0, 1]], dtype=np.complex128)
    z = np.kron(r, u @ up) + np.kron(r.conj().T, u @ down)
    if isinstance(spec, Electric):
        z = np.kron(dense_quasimomentum_shift(config, spec.phi), np.eye(2)) @ z
    return z
