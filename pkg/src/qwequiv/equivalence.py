"""Product-form equivalence transforms V = W (x) X and numerical equivalence checks.

W is always a quasi-momentum shift E_w, stored by its phase ``w_phase``.  The
checks evolve probe states on both sides of a claimed identity and report the
largest amplitude (or distribution) deviation as a JSON-ready
:class:`EquivalenceReport`.  A failed check against a sweep of transforms is
numerical evidence of non-equivalence, not a proof.
"""

from __future__ import annotations

import json
import math
from collections.abc import Sequence
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from . import lattice as lat
from .coin import EulerAngles, check_su2, from_euler, theta_coin
from .errors import IncommensurateRingPhaseError, InvalidInputError
from .lattice import LatticeConfig, WalkerCoinState
from .walk import (
    Electric,
    Simple,
    TimeDependent,
    WalkSpec,
    dense_quasimomentum_shift,
    evolve,
    iter_evolve,
)

__all__ = [
    "ProductTransform",
    "RationalField",
    "EquivalenceReport",
    "IDENTITY_TRANSFORM",
    "canonical_reduction",
    "canonical_walks",
    "apply_transform",
    "dense_transform",
    "default_probes",
    "check_amplitude_equiv",
    "check_distribution_equiv",
    "electric_schedule",
    "check_cumulative_identity",
    "check_rational_field",
]

DEFAULT_SEED = 20140101


@dataclass(frozen=True)
class ProductTransform:
    w_phase: float
    x: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "w_phase", float(self.w_phase))
        object.__setattr__(self, "x", check_su2(self.x))

    def inverse(self) -> ProductTransform:
        return ProductTransform(-self.w_phase, self.x.conj().T)


IDENTITY_TRANSFORM = ProductTransform(0.0, np.eye(2, dtype=np.complex128))


@dataclass(frozen=True)
class RationalField:
    p: int
    q: int

    def __post_init__(self):
        if self.q < 1:
            raise InvalidInputError("q must be positive")
        if math.gcd(self.p, self.q) != 1:
            raise InvalidInputError(f"p={self.p} and q={self.q} are not coprime")

    @property
    def phi(self) -> float:
        return 2 * math.pi * self.p / self.q


@dataclass
class EquivalenceReport:
    check: str
    parameters: dict[str, Any]
    n_steps: int
    max_deviation: float
    tolerance: float
    passed: bool
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        if not d["details"]:
            del d["details"]
        return d

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def canonical_reduction(angles: EulerAngles) -> tuple[float, ProductTransform]:
    """theta and V with V Z_{eta theta xi} V^dagger = Z_theta."""
    eta, theta, xi = angles
    x = np.diag([np.exp(-0.5j * eta), np.exp(0.5j * eta)])
    return theta, ProductTransform(-(eta + xi) / 2, x)


def apply_transform(v: ProductTransform, state: WalkerCoinState) -> WalkerCoinState:
    return lat.apply_coin(lat.apply_quasimomentum_shift(state, v.w_phase), v.x)


def dense_transform(v: ProductTransform, config: LatticeConfig) -> np.ndarray:
    if not lat.ring_phase_commensurate(v.w_phase, config.size):
        raise IncommensurateRingPhaseError("transform phase does not fit the ring")
    return np.kron(dense_quasimomentum_shift(config, v.w_phase), v.x)


def default_probes(config: LatticeConfig, n_random: int = 6, seed: int = DEFAULT_SEED,
                   spread: int = 2) -> list[WalkerCoinState]:
    """|0,up>, |0,down> and ``n_random`` seeded random states supported on |j| <= spread."""
    probes = [lat.localized_state(0, (1, 0), config), lat.localized_state(0, (0, 1), config)]
    rng = np.random.default_rng(seed)
    rows = [config.index(j) for j in range(-spread, spread + 1)]
    for _ in range(n_random):
        amps = np.zeros((config.size, 2), dtype=np.complex128)
        amps[rows] = rng.normal(size=(len(rows), 2)) + 1j * rng.normal(size=(len(rows), 2))
        amps /= np.linalg.norm(amps)
        probes.append(WalkerCoinState(amps, config))
    return probes


def _max_amp_dev(a: WalkerCoinState, b: WalkerCoinState) -> float:
    return float(np.max(np.abs(a.amplitudes - b.amplitudes)))


def _distribution_dev(a: WalkerCoinState, b: WalkerCoinState) -> float:
    return float(np.max(np.abs(lat.site_probabilities(a) - lat.site_probabilities(b))))


def _spec_params(spec: WalkSpec) -> dict[str, Any]:
    if isinstance(spec, Simple):
        return {"kind": "simple", "coin": _matrix_json(spec.coin)}
    if isinstance(spec, Electric):
        return {"kind": "electric", "coin": _matrix_json(spec.coin), "phi": spec.phi}
    return {"kind": "time_dependent", "label": spec.label}


def _matrix_json(m: np.ndarray) -> list[list[list[float]]]:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def check_amplitude_equiv(spec_a: WalkSpec, spec_b: WalkSpec, v: ProductTransform, n_steps: int,
                          probes: Sequence[WalkerCoinState], tol: float = 1e-12) -> EquivalenceReport:
    """Compare Z_a^n |psi> with V^dagger Z_b^n V |psi> amplitude-wise."""
    v_inv = v.inverse()
    worst = 0.0
    for psi in probes:
        lhs = evolve(spec_a, psi, n_steps)
        rhs = apply_transform(v_inv, evolve(spec_b, apply_transform(v, psi), n_steps))
        worst = max(worst, _max_amp_dev(lhs, rhs))
    return EquivalenceReport(
        check="amplitude_equiv",
        parameters={"spec_a": _spec_params(spec_a), "spec_b": _spec_params(spec_b),
                    "w_phase": v.w_phase, "x": _matrix_json(v.x), "n_probes": len(probes)},
        n_steps=n_steps,
        max_deviation=worst,
        tolerance=tol,
        passed=worst <= tol,
    )


def check_distribution_equiv(spec_a: WalkSpec, spec_b: WalkSpec, v: ProductTransform, n_steps: int,
                             probes: Sequence[WalkerCoinState], tol: float = 1e-12) -> EquivalenceReport:
    """Compare position distributions of Z_a^n |psi> and Z_b^n V |psi>.

    The trailing V^dagger is dropped: W is diagonal in position and X acts on the
    coin only, so neither changes the position marginal.  The deviation is the
    total-variation distance.
    """
    worst = 0.0
    for psi in probes:
        pa = lat.site_probabilities(evolve(spec_a, psi, n_steps))
        pb = lat.site_probabilities(evolve(spec_b, apply_transform(v, psi), n_steps))
        worst = max(worst, 0.5 * float(np.sum(np.abs(pa - pb))))
    return EquivalenceReport(
        check="distribution_equiv",
        parameters={"spec_a": _spec_params(spec_a), "spec_b": _spec_params(spec_b),
                    "w_phase": v.w_phase, "x": _matrix_json(v.x), "n_probes": len(probes)},
        n_steps=n_steps,
        max_deviation=worst,
        tolerance=tol,
        passed=worst <= tol,
    )


def electric_schedule(theta: float, phi: float) -> TimeDependent:
    """U(n) = exp(i theta/2 sy) exp(-i (n-1) phi sz)."""
    base = theta_coin(theta)

    def schedule(n: int) -> np.ndarray:
        kick = (n - 1) * phi
        return base @ np.diag([np.exp(-1j * kick), np.exp(1j * kick)])

    return TimeDependent(schedule, label=f"electric_schedule(theta={theta!r}, phi={phi!r})")


def check_cumulative_identity(theta: float, phi: float, n_steps: int, probes: Sequence[WalkerCoinState],
                              tol: float = 1e-12) -> EquivalenceReport:
    """Z_E^n |psi> against E_{n phi} Z(n)...Z(1) |psi>, at every step up to n_steps."""
    electric = Electric(theta_coin(theta), phi)
    timedep = electric_schedule(theta, phi)
    worst_amp = worst_dist = 0.0
    for psi in probes:
        for (n, a), (_, b) in zip(iter_evolve(electric, psi, n_steps), iter_evolve(timedep, psi, n_steps)):
            kicked = lat.apply_quasimomentum_shift(b, n * phi)
            worst_amp = max(worst_amp, _max_amp_dev(a, kicked))
            worst_dist = max(worst_dist, _distribution_dev(a, b))
    worst = max(worst_amp, worst_dist)
    return EquivalenceReport(
        check="cumulative_identity",
        parameters={"theta": theta, "phi": phi, "n_probes": len(probes)},
        n_steps=n_steps,
        max_deviation=worst,
        tolerance=tol,
        passed=worst <= tol,
        details={"max_amplitude_deviation": worst_amp, "max_distribution_deviation": worst_dist},
    )


def check_rational_field(theta: float, field_: RationalField, n_periods: int,
                         probes: Sequence[WalkerCoinState], tol: float = 1e-12) -> EquivalenceReport:
    """Z_E^{mq} |psi> against Z(mq)...Z(1) |psi> with no residual kick, m = 1..n_periods.

    Off-period steps are recorded in ``details``: amplitudes there generally
    differ by the residual kick, while distributions still agree.
    """
    phi = field_.phi
    electric = Electric(theta_coin(theta), phi)
    timedep = electric_schedule(theta, phi)
    n_steps = n_periods * field_.q
    worst = off_amp = off_dist = 0.0
    checked: list[int] = []
    for psi in probes:
        for (n, a), (_, b) in zip(iter_evolve(electric, psi, n_steps), iter_evolve(timedep, psi, n_steps)):
            if n % field_.q == 0:
                worst = max(worst, _max_amp_dev(a, b))
                if n not in checked:
                    checked.append(n)
            else:
                off_amp = max(off_amp, _max_amp_dev(a, b))
                off_dist = max(off_dist, _distribution_dev(a, b))
    return EquivalenceReport(
        check="rational_field",
        parameters={"theta": theta, "p": field_.p, "q": field_.q, "phi": phi,
                    "n_periods": n_periods, "n_probes": len(probes)},
        n_steps=n_steps,
        max_deviation=worst,
        tolerance=tol,
        passed=worst <= tol,
        details={"checked_steps": checked, "off_period_amplitude_deviation": off_amp,
                 "off_period_distribution_deviation": off_dist},
    )


def canonical_walks(angles: EulerAngles) -> tuple[Simple, Simple, ProductTransform]:
    """(Z_{eta theta xi}, Z_theta, V) for a set of Euler angles."""
    theta, v = canonical_reduction(angles)
    return Simple(from_euler(angles)), Simple(theta_coin(theta)), v
