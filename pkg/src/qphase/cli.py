"""Command-line entry point.

    qphase gen-state {ghz,w,bell,mixed} [--noise KIND:P[:QUBIT]]... --out state.json
    qphase tomo sim --state state.json --shots K --seed S --out counts.csv
    qphase tomo fit --counts counts.csv --out fit.json [--max-iter N] [--tol X]
    qphase wigner slice --state state.json [--grid T,P] [--rotate QUBIT:AXIS] --out slice.csv
    qphase wigner volume --state state.json --method grid:N|mc:M [--seed S]
    qphase wigner ea-integral --state state.json
    qphase quantify --state state.json [--target ghz|w] --out report.json

Qubit indices are 0-based. Exit status is 0 on success and 2 on any usage
or validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io, quantifiers, states, tomography, wigner

STATE_FACTORIES = {
    "ghz": lambda: states.projector(states.make_ghz()),
    "w": lambda: states.projector(states.make_w()),
    "bell": lambda: states.projector(states.make_bell()),
    "mixed": lambda: states.maximally_mixed(3),
}
TARGETS = {"ghz": states.make_ghz, "w": states.make_w}


class UsageError(Exception):
    pass


def _warn(msg: str) -> None:
    print(f"qphase: warning: {msg}", file=sys.stderr)


def parse_noise(text: str) -> states.NoiseSpec:
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise UsageError(f"noise spec {text!r} must look like kind:strength[:qubit]")
    try:
        strength = float(parts[1])
        qubit = int(parts[2]) if len(parts) == 3 else None
    except ValueError:
        raise UsageError(f"noise spec {text!r} has a non-numeric field") from None
    try:
        return states.NoiseSpec(parts[0], strength, qubit)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def parse_grid(text: str) -> tuple[int, int]:
    try:
        t, p = (int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"--grid expects T,P integers, got {text!r}") from None
    return t, p


def parse_rotate(text: str, n_qubits: int) -> tuple[int, str, float]:
    try:
        qubit_text, axis = text.split(":")
        qubit = int(qubit_text)
    except ValueError:
        raise UsageError(f"--rotate expects QUBIT:AXIS, got {text!r}") from None
    if not 0 <= qubit < n_qubits:
        raise UsageError(f"--rotate qubit {qubit} out of range for {n_qubits} qubits")
    if axis not in ("x", "y", "z"):
        raise UsageError(f"--rotate axis must be x, y or z, got {axis!r}")
    return qubit, axis, np.pi / 2


def parse_method(text: str) -> tuple[str, int]:
    kind, _, size = text.partition(":")
    if kind not in ("grid", "mc") or not size:
        raise UsageError(f"--method expects grid:N or mc:M, got {text!r}")
    try:
        value = int(size)
    except ValueError:
        raise UsageError(f"--method size must be an integer, got {size!r}") from None
    if (kind == "grid" and value < 2) or (kind == "mc" and value < 1):
        raise UsageError(f"--method {text!r}: size too small")
    return kind, value


def _volume(rho, method: str, seed: int) -> tuple[float, float | None]:
    kind, size = parse_method(method)
    if kind == "grid":
        return wigner.negative_volume(rho, "grid", points=size)
    return wigner.negative_volume(rho, "monte-carlo", samples=size, seed=seed)


def cmd_gen_state(args) -> None:
    rho = STATE_FACTORIES[args.name]()
    for text in args.noise:
        spec = parse_noise(text)
        n = rho.shape[0].bit_length() - 1
        if spec.target_qubit is not None and not 0 <= spec.target_qubit < n:
            raise UsageError(f"noise target qubit {spec.target_qubit} out of range for {n} qubits")
        rho = states.apply_noise(rho, spec)
    io.write_state(args.out, rho)


def cmd_tomo_sim(args) -> None:
    if args.shots < 1:
        raise UsageError("--shots must be positive")
    rho = io.read_state(args.state)
    io.write_counts(args.out, tomography.simulate_counts(rho, args.shots, args.seed))


def cmd_tomo_fit(args) -> None:
    data = io.read_counts(args.counts)
    config = tomography.MleConfig(max_iterations=args.max_iter, convergence_tol=args.tol)
    result = tomography.mle_reconstruct(data, config)
    out = Path(args.out)
    io.write_state(out, result.rho)
    sidecar = out.with_suffix(".fit.json")
    sidecar.write_text(
        io.dumps({"iterations": result.iterations, "final_loglik": result.loglik, "converged": result.converged})
    )
    if not result.converged:
        _warn(f"MLE did not converge in {result.iterations} iterations")


def cmd_wigner_slice(args) -> None:
    rho = io.read_state(args.state)
    n = rho.shape[0].bit_length() - 1
    t, p = parse_grid(args.grid)
    rotation = parse_rotate(args.rotate, n) if args.rotate else None
    try:
        spec = wigner.SliceSpec(t, p, rotation)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    values = wigner.equal_angle_slice(rho, spec)
    io.write_slice(args.out, spec.thetas(), spec.phis(), values)


def cmd_wigner_volume(args) -> None:
    rho = io.read_state(args.state)
    value, err = _volume(rho, args.method, args.seed)
    doc = {"value": value}
    if err is not None:
        doc["std_error"] = err
    sys.stdout.write(io.dumps(doc))


def cmd_wigner_ea(args) -> None:
    rho = io.read_state(args.state)
    sys.stdout.write(io.dumps({"value": wigner.integrated_ea_slice(rho)}))


def cmd_quantify(args) -> None:
    rho = io.read_state(args.state)
    n = rho.shape[0].bit_length() - 1
    kind, size = parse_method(args.volume_method)
    config = quantifiers.WignerConfig(
        method="grid" if kind == "grid" else "monte-carlo", samples=size, points=size, seed=args.seed
    )
    target = None
    if args.target:
        target = TARGETS[args.target]()
        if target.size != rho.shape[0]:
            raise UsageError(f"target {args.target} has 3 qubits, state has {n}")
    if n != 3:
        _warn(f"state has {n} qubits; tangle fields are null")
    report = quantifiers.fingerprint(rho, target, config)
    Path(args.out).write_text(io.dumps(report.to_dict()))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qphase", description="Multi-qubit Wigner function toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-state", help="write an ideal (optionally noisy) state")
    gen.add_argument("name", choices=sorted(STATE_FACTORIES))
    gen.add_argument("--noise", action="append", default=[], metavar="KIND:P[:QUBIT]")
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=cmd_gen_state)

    tomo = sub.add_parser("tomo", help="simulate or fit Pauli tomography counts")
    tsub = tomo.add_subparsers(dest="action", required=True)
    sim = tsub.add_parser("sim")
    sim.add_argument("--state", required=True)
    sim.add_argument("--shots", type=int, required=True)
    sim.add_argument("--seed", type=int, required=True)
    sim.add_argument("--out", required=True)
    sim.set_defaults(func=cmd_tomo_sim)
    fit = tsub.add_parser("fit")
    fit.add_argument("--counts", required=True)
    fit.add_argument("--out", required=True)
    fit.add_argument("--max-iter", type=int, default=5000)
    fit.add_argument("--tol", type=float, default=1e-10)
    fit.set_defaults(func=cmd_tomo_fit)

    wig = sub.add_parser("wigner", help="slices, negative volume, equal-angle integral")
    wsub = wig.add_subparsers(dest="action", required=True)
    sl = wsub.add_parser("slice")
    sl.add_argument("--state", required=True)
    sl.add_argument("--grid", default="201,201", metavar="T,P")
    sl.add_argument("--rotate", metavar="QUBIT:AXIS")
    sl.add_argument("--out", required=True)
    sl.set_defaults(func=cmd_wigner_slice)
    vol = wsub.add_parser("volume")
    vol.add_argument("--state", required=True)
    vol.add_argument("--method", required=True, metavar="grid:N|mc:M")
    vol.add_argument("--seed", type=int, default=0)
    vol.set_defaults(func=cmd_wigner_volume)
    ea = wsub.add_parser("ea-integral")
    ea.add_argument("--state", required=True)
    ea.set_defaults(func=cmd_wigner_ea)

    q = sub.add_parser("quantify", help="write the fingerprint report")
    q.add_argument("--state", required=True)
    q.add_argument("--target", choices=sorted(TARGETS))
    q.add_argument("--out", required=True)
    q.add_argument("--volume-method", default="mc:1000000", metavar="grid:N|mc:M")
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(func=cmd_quantify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (UsageError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"qphase: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
