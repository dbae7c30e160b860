"""Command-line front end: simulate, canonicalize, verify, spectrum.

Exit codes: 0 success / check passed, 1 check failed or guard violated,
2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Any

import numpy as np

from . import lattice as lat
from .coin import EulerAngles, euler_decompose, parse_coin_spec, theta_coin
from .equivalence import (
    DEFAULT_SEED,
    EquivalenceReport,
    RationalField,
    canonical_walks,
    check_amplitude_equiv,
    check_cumulative_identity,
    check_rational_field,
    default_probes,
    dense_transform,
)
from .errors import GuardViolationError, InvalidInputError, QWError
from .lattice import Boundary, LatticeConfig
from .spectral import dispersion, write_dispersion_csv
from .walk import Electric, Simple, dense_matrix, evolve, translation_defect

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

COIN_STATES = {
    "up": (1, 0),
    "down": (0, 1),
    "plus": (1 / math.sqrt(2), 1 / math.sqrt(2)),
    "sym": (1 / math.sqrt(2), 1j / math.sqrt(2)),
}

CANONICAL_RING_SIZE = 8


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InvalidInputError(message)


def _emit(payload: dict[str, Any]) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def parse_init(text: str) -> tuple[int, tuple[complex, complex]]:
    """``site=<j>,<up|down|plus|sym>`` or ``site=<j>,amp=<re_up>,<im_up>,<re_down>,<im_down>``."""
    head, _, rest = text.partition(",")
    key, _, site = head.partition("=")
    if key != "site" or not rest:
        raise InvalidInputError(f"malformed --init {text!r}")
    try:
        j = int(site)
    except ValueError as exc:
        raise InvalidInputError(f"site must be an integer in {text!r}") from exc
    if rest in COIN_STATES:
        return j, COIN_STATES[rest]
    if rest.startswith("amp="):
        try:
            re_u, im_u, re_d, im_d = (float(v) for v in rest[4:].split(","))
        except ValueError as exc:
            raise InvalidInputError(f"amp= needs four floats in {text!r}") from exc
        return j, (complex(re_u, im_u), complex(re_d, im_d))
    raise InvalidInputError(f"unknown coin state {rest!r}")


def _lattice(args, site: int, steps: int) -> LatticeConfig:
    boundary = Boundary(args.boundary)
    if boundary is Boundary.RING:
        size = args.lattice or 2 * (steps + 2) + 1
        return LatticeConfig.ring(size, origin_index=size // 2)
    auto = LatticeConfig.for_walk(steps, (site, site))
    if args.lattice is None:
        return auto
    if args.lattice < 3:
        raise InvalidInputError("--lattice must be at least 3 for a padded lattice")
    return LatticeConfig(size=args.lattice, origin_index=args.lattice // 2 - site)


def _walk(args, coin: np.ndarray):
    if args.phi is None:
        return Simple(coin)
    return Electric(coin, args.phi)


def cmd_simulate(args) -> int:
    coin, _ = parse_coin_spec(args.coin)
    if args.steps < 0:
        raise InvalidInputError("--steps must be non-negative")
    site, chi = parse_init(args.init)
    config = _lattice(args, site, args.steps)
    psi0 = lat.localized_state(site, chi, config)
    try:
        psi = evolve(_walk(args, coin), psi0, args.steps)
    except GuardViolationError as exc:
        print(f"guard violation: {exc}", file=sys.stderr)
        return EXIT_FAIL
    dist = lat.position_distribution(psi)
    mean, var, std = lat.moments(dist)
    out = Path(args.out or "distribution.csv")
    lat.write_distribution_csv(dist, out)
    if args.state_out:
        lat.write_state_csv(psi, args.state_out)
    _emit({"steps": args.steps, "mean": mean, "variance": var, "stddev": std,
           "norm_drift": abs(psi.norm - psi0.norm), "distribution_csv": str(out)})
    return EXIT_OK


def _canonical_residual(angles: EulerAngles, seed: int, steps: int = 10) -> tuple[float, str]:
    full, canon, v = canonical_walks(angles)
    ring = LatticeConfig.ring(CANONICAL_RING_SIZE)
    if lat.ring_phase_commensurate(v.w_phase, ring.size):
        vd = dense_transform(v, ring)
        lhs = vd @ dense_matrix(full, ring) @ vd.conj().T
        return float(np.max(np.abs(lhs - dense_matrix(canon, ring)))), "dense_ring_conjugation"
    config = LatticeConfig.for_walk(steps, (-2, 2))
    report = check_amplitude_equiv(full, canon, v, steps, default_probes(config, seed=seed))
    return report.max_deviation, "padded_interior_action"


def cmd_canonicalize(args) -> int:
    coin, global_phase = parse_coin_spec(args.coin)
    angles = euler_decompose(coin)
    _, _, v = canonical_walks(angles)
    residual, method = _canonical_residual(angles, args.seed)
    _emit({
        "theta": angles.theta,
        "euler": {"eta": angles.eta, "theta": angles.theta, "xi": angles.xi},
        "global_phase": global_phase,
        "w_phase": v.w_phase,
        "x_matrix": [[[float(z.real), float(z.imag)] for z in row] for row in v.x],
        "residual_check": residual,
        "residual_method": method,
    })
    return EXIT_OK


def cmd_verify(args) -> int:
    tol = args.tol
    if args.check == "canonical":
        if args.coin is None:
            raise InvalidInputError("verify canonical needs --coin")
        coin, _ = parse_coin_spec(args.coin)
        angles = euler_decompose(coin)
        full, canon, v = canonical_walks(angles)
        config = LatticeConfig.for_walk(args.steps, (-2, 2))
        report = check_amplitude_equiv(full, canon, v, args.steps, default_probes(config, seed=args.seed), tol)
        report.check = "canonical"
        report.parameters.update(euler=list(angles), theta=angles.theta, seed=args.seed)
    elif args.check == "electric":
        theta, phi = _require(args, "theta", "phi")
        config = LatticeConfig.for_walk(args.steps, (-2, 2))
        report = check_cumulative_identity(theta, phi, args.steps, default_probes(config, seed=args.seed), tol)
        report.parameters["seed"] = args.seed
    elif args.check == "rational":
        theta, p, q = _require(args, "theta", "p", "q")
        field_ = RationalField(p, q)
        config = LatticeConfig.for_walk(args.periods * q, (-2, 2))
        report = check_rational_field(theta, field_, args.periods, default_probes(config, seed=args.seed), tol)
        report.parameters["seed"] = args.seed
    else:
        coin = theta_coin(args.theta) if args.coin is None else parse_coin_spec(args.coin)[0]
        size = args.lattice or 16
        spec = _walk(args, coin)
        defect = translation_defect(spec, config=LatticeConfig.ring(size))
        report = EquivalenceReport(
            check="translation",
            parameters={"phi": args.phi, "lattice": size},
            n_steps=1,
            max_deviation=defect,
            tolerance=tol,
            passed=defect <= tol,
        )
    _emit(report.to_dict())
    return EXIT_OK if report.passed else EXIT_FAIL


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise InvalidInputError(f"verify {args.check} needs " + ", ".join(f"--{n}" for n in missing))
    return [getattr(args, n) for n in names]


def cmd_spectrum(args) -> int:
    coin, _ = parse_coin_spec(args.coin)
    curve = dispersion(coin, args.samples)
    out = Path(args.out or "dispersion.csv")
    write_dispersion_csv(curve, out)
    lo, hi = curve.omega_range()
    _emit({
        "samples": args.samples,
        "max_v_group": curve.max_v_group,
        "momentum_shift": curve.momentum_shift,
        "cos_half_theta": curve.cos_half_theta,
        "omega_min": lo,
        "omega_max": hi,
        "trace_identity_deviation": curve.trace_identity_deviation(),
        "dispersion_csv": str(out),
    })
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qwequiv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, coin_required=True):
        p.add_argument("--coin", required=coin_required,
                       help="euler:<eta>,<theta>,<xi> | axis:<phi>,<rx>,<ry>,<rz> | matrix:<8 floats>")
        p.add_argument("--tol", type=float, default=1e-12)
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--out", type=Path, default=None)

    sim = sub.add_parser("simulate", help="evolve a localized start and write the position distribution")
    common(sim)
    sim.add_argument("--steps", type=int, required=True)
    sim.add_argument("--init", default="site=0,up")
    sim.add_argument("--phi", type=float, default=None, help="electric field phase (radians)")
    sim.add_argument("--lattice", type=int, default=None, help="number of sites (auto-sized if omitted)")
    sim.add_argument("--boundary", choices=[b.value for b in Boundary], default="padded")
    sim.add_argument("--state-out", type=Path, default=None)
    sim.set_defaults(func=cmd_simulate)

    can = sub.add_parser("canonicalize", help="reduce a coin to its single-parameter canonical walk")
    common(can)
    can.set_defaults(func=cmd_canonicalize)

    ver = sub.add_parser("verify", help="run one equivalence check and emit a JSON report")
    ver.add_argument("check", choices=["canonical", "electric", "rational", "translation"])
    common(ver, coin_required=False)
    ver.add_argument("--steps", type=int, default=10)
    ver.add_argument("--theta", type=float, default=None)
    ver.add_argument("--phi", type=float, default=None)
    ver.add_argument("--p", type=int, default=None)
    ver.add_argument("--q", type=int, default=None)
    ver.add_argument("--periods", type=int, default=4)
    ver.add_argument("--lattice", type=int, default=None)
    ver.set_defaults(func=cmd_verify)

    spe = sub.add_parser("spectrum", help="write the dispersion relation of a simple walk")
    common(spe)
    spe.add_argument("--samples", type=int, default=512)
    spe.set_defaults(func=cmd_spectrum)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "verify" and args.check == "translation" and args.theta is None and args.coin is None:
            raise InvalidInputError("verify translation needs --coin or --theta")
        return args.func(args)
    except (InvalidInputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GuardViolationError as exc:
        print(f"guard violation: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except QWError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
