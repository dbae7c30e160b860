"""Walker (x) coin state vectors on a truncated line or a ring.

Amplitudes are stored site-major as an ``(L, 2)`` complex array: row ``i`` holds
the (up, down) coin pair at storage index ``i``, which is logical site
``i - origin_index``.  Flattening gives the ``2L`` layout
``[(s0, up), (s0, down), (s1, up), ...]``.

Two boundary modes exist.  ``padded`` models the infinite line: any step that
would carry amplitude into the outermost ``guard`` sites raises
:class:`GuardViolationError`, so infinite-line identities hold exactly.
``ring`` wraps cyclically and is used for dense-matrix oracles.
"""

from __future__ import annotations

import csv
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import GuardViolationError, IncommensurateRingPhaseError, InvalidInputError

__all__ = [
    "Boundary",
    "Direction",
    "LatticeConfig",
    "WalkerCoinState",
    "product_state",
    "localized_state",
    "basis_state",
    "apply_shift",
    "conditional_shift",
    "apply_coin",
    "apply_quasimomentum_shift",
    "ring_phase_commensurate",
    "position_distribution",
    "moments",
    "total_variation",
    "write_distribution_csv",
    "write_state_csv",
]

RING_PHASE_TOL = 1e-9


class Boundary(str, Enum):
    PADDED = "padded"
    RING = "ring"


class Direction(str, Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class LatticeConfig:
    size: int
    boundary: Boundary = Boundary.PADDED
    origin_index: int = 0
    guard: int = 1

    def __post_init__(self):
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        if self.size < 2:
            raise InvalidInputError(f"lattice needs at least 2 sites, got {self.size}")
        if self.boundary is Boundary.PADDED and self.guard < 1:
            raise InvalidInputError("padded lattice needs a guard band of at least 1 site")
        if self.boundary is Boundary.PADDED and 2 * self.guard >= self.size:
            raise InvalidInputError("guard band leaves no interior")

    @classmethod
    def for_walk(cls, steps: int, support: tuple[int, int] = (0, 0), guard: int = 1) -> LatticeConfig:
        """Padded lattice large enough that ``steps`` steps from ``support`` never hit the guard."""
        lo, hi = support
        if hi < lo or steps < 0:
            raise InvalidInputError("bad support or step count")
        margin = steps + guard + 1
        return cls(size=(hi - lo + 1) + 2 * margin, origin_index=margin - lo, guard=guard)

    @classmethod
    def ring(cls, size: int, origin_index: int = 0) -> LatticeConfig:
        return cls(size=size, boundary=Boundary.RING, origin_index=origin_index)

    @property
    def sites(self) -> np.ndarray:
        """Logical site index of every storage row."""
        return np.arange(self.size) - self.origin_index

    def index(self, site: int) -> int:
        i = site + self.origin_index
        if self.boundary is Boundary.RING:
            return i % self.size
        if not 0 <= i < self.size:
            raise InvalidInputError(f"site {site} outside the lattice")
        return i


@dataclass
class WalkerCoinState:
    amplitudes: np.ndarray
    config: LatticeConfig

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (self.config.size, 2):
            raise InvalidInputError(
                f"amplitudes must have shape ({self.config.size}, 2), got {self.amplitudes.shape}"
            )

    @property
    def flat(self) -> np.ndarray:
        return self.amplitudes.reshape(-1)

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def copy(self) -> WalkerCoinState:
        return WalkerCoinState(self.amplitudes.copy(), self.config)

    def amplitude(self, site: int) -> np.ndarray:
        return self.amplitudes[self.config.index(site)]

    def with_amplitudes(self, amplitudes: np.ndarray) -> WalkerCoinState:
        return WalkerCoinState(amplitudes, self.config)


def product_state(site_amplitudes: Mapping[int, complex], coin_amplitudes: Sequence[complex],
                  config: LatticeConfig) -> WalkerCoinState:
    """Normalised |psi> (x) |chi> from sparse walker amplitudes and a coin pair."""
    walker = np.zeros(config.size, dtype=np.complex128)
    for site, amp in site_amplitudes.items():
        walker[config.index(site)] += amp
    coin = np.asarray(coin_amplitudes, dtype=np.complex128)
    if coin.shape != (2,):
        raise InvalidInputError("coin state needs exactly two amplitudes")
    wn, cn = np.linalg.norm(walker), np.linalg.norm(coin)
    if wn == 0.0 or cn == 0.0:
        raise InvalidInputError("product factors must have non-zero norm")
    return WalkerCoinState(np.outer(walker / wn, coin / cn), config)


def localized_state(site: int, coin: Sequence[complex], config: LatticeConfig) -> WalkerCoinState:
    return product_state({site: 1.0}, coin, config)


def basis_state(storage_row: int, component: int, config: LatticeConfig) -> WalkerCoinState:
    amps = np.zeros((config.size, 2), dtype=np.complex128)
    amps[storage_row, component] = 1.0
    return WalkerCoinState(amps, config)


def _check_guard(amps: np.ndarray, config: LatticeConfig, up: bool, down: bool) -> None:
    if config.boundary is not Boundary.PADDED:
        return
    g, size = config.guard, config.size
    # After the move, amplitude must stay out of the outermost g sites.
    if up and np.any(amps[size - 1 - g:, 0] != 0):
        raise GuardViolationError("right-moving amplitude would enter the guard band")
    if down and np.any(amps[: g + 1, 1] != 0):
        raise GuardViolationError("left-moving amplitude would enter the guard band")


def _translate(column: np.ndarray, offset: int, boundary: Boundary) -> np.ndarray:
    if boundary is Boundary.RING:
        return np.roll(column, offset)
    out = np.zeros_like(column)
    if offset > 0:
        out[offset:] = column[:-offset]
    else:
        out[:offset] = column[-offset:]
    return out


def apply_shift(state: WalkerCoinState, direction: Direction | str) -> WalkerCoinState:
    """Apply R (right) or R^dagger (left) to the walker, independent of the coin."""
    direction = Direction(direction)
    amps, cfg = state.amplitudes, state.config
    if cfg.boundary is Boundary.PADDED:
        occupied = np.any(amps != 0, axis=1)
        g = cfg.guard
        edge = occupied[cfg.size - 1 - g:] if direction is Direction.RIGHT else occupied[: g + 1]
        if edge.any():
            raise GuardViolationError(f"{direction.value} shift would move amplitude into the guard band")
    offset = 1 if direction is Direction.RIGHT else -1
    out = np.empty_like(amps)
    out[:, 0] = _translate(amps[:, 0], offset, cfg.boundary)
    out[:, 1] = _translate(amps[:, 1], offset, cfg.boundary)
    return state.with_amplitudes(out)


def conditional_shift(state: WalkerCoinState) -> WalkerCoinState:
    """S = R (x) |up><up| + R^dagger (x) |down><down|."""
    amps, cfg = state.amplitudes, state.config
    _check_guard(amps, cfg, True, True)
    out = np.empty_like(amps)
    out[:, 0] = _translate(amps[:, 0], 1, cfg.boundary)
    out[:, 1] = _translate(amps[:, 1], -1, cfg.boundary)
    return state.with_amplitudes(out)


def apply_coin(state: WalkerCoinState, coin: np.ndarray) -> WalkerCoinState:
    """I (x) U: multiply every site's coin pair by ``coin``."""
    return state.with_amplitudes(state.amplitudes @ np.asarray(coin).T)


def ring_phase_commensurate(phi: float, size: int, tol: float = RING_PHASE_TOL) -> bool:
    turns = phi * size / (2 * math.pi)
    return abs(turns - round(turns)) <= tol


def apply_quasimomentum_shift(state: WalkerCoinState, phi: float, *, strict: bool = True) -> WalkerCoinState:
    """E_phi (x) I: multiply logical site j by exp(i phi j).

    On a ring ``phi * L`` must be a multiple of 2 pi; ``strict=False`` skips that
    check for diagnostics that deliberately break the identity at the wrap site.
    """
    cfg = state.config
    if strict and cfg.boundary is Boundary.RING and not ring_phase_commensurate(phi, cfg.size):
        raise IncommensurateRingPhaseError(
            f"phi * L = {phi * cfg.size!r} is not a multiple of 2 pi on a ring of {cfg.size} sites"
        )
    if phi == 0.0:
        return state.copy()
    phases = np.exp(1j * phi * cfg.sites)
    return state.with_amplitudes(state.amplitudes * phases[:, None])


def site_probabilities(state: WalkerCoinState) -> np.ndarray:
    return np.sum(np.abs(state.amplitudes) ** 2, axis=1)


def position_distribution(state: WalkerCoinState) -> dict[int, float]:
    """Probability of each logical site carrying non-zero amplitude, keyed by site."""
    probs = site_probabilities(state)
    return {int(j): float(p) for j, p in zip(state.config.sites, probs) if p > 0.0}


def moments(distribution: Mapping[int, float]) -> tuple[float, float, float]:
    """Mean, variance and standard deviation of the site index."""
    sites = np.fromiter(distribution.keys(), dtype=float)
    probs = np.fromiter(distribution.values(), dtype=float)
    total = probs.sum()
    if abs(total - 1.0) > 1e-10:
        raise InvalidInputError(f"distribution sums to {total!r}, not 1")
    mean = float(np.dot(sites, probs))
    var = float(np.dot((sites - mean) ** 2, probs))
    return mean, var, math.sqrt(var)


def total_variation(p: Mapping[int, float], q: Mapping[int, float]) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def write_distribution_csv(distribution: Mapping[int, float], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["site", "probability"])
        for site in sorted(distribution):
            writer.writerow([site, f"{distribution[site]:.17g}"])


def write_state_csv(state: WalkerCoinState, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["site", "re_up", "im_up", "re_down", "im_down"])
        for site, (up, down) in zip(state.config.sites, state.amplitudes):
            writer.writerow([int(site)] + [f"{v:.17g}" for v in (up.real, up.imag, down.real, down.imag)])
