"""Command-line front end: build circuits, run fidelity/VQE experiments, verify.

Exit codes: 0 success, 1 usage error, 2 verification failure. Every run
writes a manifest JSON next to its primary output; output files are written
atomically (temp file + rename). ``SYMVQC_THREADS`` caps VQE trial
parallelism (unset or 1 = serial).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time

import numpy as np

from . import __version__
from .circuit import (
    Circuit,
    build_brickwall,
    build_swap_variant_2on4,
    cnot_count,
    from_json,
    parameterized_gate_count,
    sector_of,
    to_json,
)
from .gatelib import GateKind
from .models import Boundary, XXZSpec, exact_ground, xxz_hamiltonian
from .simulator import NoiseSpec, haar_random_sector_state
from .varopt import (
    EstimatorSpec,
    Method,
    OptimizerConfig,
    VqeTask,
    aggregate_to_csv,
    maximize_fidelity,
    run_trials,
)
from .verify import SUITES, run_suites

MANIFEST_SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; the CLI contract wants 1
    def error(self, message):
        raise UsageError(message)


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".symvqc-")
    try:
        with os.fdopen(fd, "w", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_manifest(out_path: str, command: str, flags: dict, seed, outputs, started: float) -> None:
    manifest = {
        "schema_version": MANIFEST_SCHEMA_VERSION,
        "artifact_version": __version__,
        "command": command,
        "flags": flags,
        "seed": seed,
        "outputs": sorted(outputs),
        "duration_seconds": round(time.monotonic() - started, 6),
    }
    _atomic_write(out_path + ".manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _load_circuit(path: str) -> Circuit:
    try:
        with open(path) as handle:
            return from_json(handle.read())
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot load circuit from {path}: {exc}") from exc


_GATE_FLAG = {"a": GateKind.A_GATE, "b": GateKind.B_GATE}


def cmd_build(args) -> int:
    started = time.monotonic()
    gate = _GATE_FLAG[args.gate]
    if args.variant == "swap24":
        if (args.sites, args.particles) != (4, 2):
            raise UsageError("--variant swap24 is defined only for --sites 4 --particles 2")
        circuit = build_swap_variant_2on4(gate)
    else:
        try:
            circuit = build_brickwall(args.sites, args.particles, gate)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    _atomic_write(args.out, to_json(circuit))
    _write_manifest(args.out, "build", _flag_dict(args), None, [args.out], started)
    print(
        f"gates={parameterized_gate_count(circuit)} "
        f"params={circuit.num_free_parameters} cnots={cnot_count(circuit)}"
    )
    return 0


def cmd_fidelity(args) -> int:
    started = time.monotonic()
    circuit = _load_circuit(args.circuit)
    num_sites, num_particles = sector_of(circuit)
    targets = [
        haar_random_sector_state(num_sites, num_particles, (args.seed, i))
        for i in range(args.targets)
    ]
    config = OptimizerConfig(
        method=Method(args.method), max_iterations=args.budget, seed=args.seed
    )
    result = maximize_fidelity(circuit, targets, config)
    lines = ["target,max_fidelity"]
    lines += [f"{i},{f:.12g}" for i, f in enumerate(result.per_target)]
    lines.append(f"mean,{result.final_value:.12g}")
    _atomic_write(args.out, "\n".join(lines) + "\n")
    _write_manifest(args.out, "fidelity", _flag_dict(args), args.seed, [args.out], started)
    print(f"mean_max_fidelity={result.final_value:.9f}")
    return 0


def _parse_estimator(text: str) -> EstimatorSpec:
    if text == "exact":
        return EstimatorSpec.exact()
    if text.startswith("shots:"):
        try:
            return EstimatorSpec.with_shots(int(text.split(":", 1)[1]))
        except ValueError as exc:
            raise UsageError(f"bad estimator {text!r}") from exc
    raise UsageError(f"estimator must be 'exact' or 'shots:N', got {text!r}")


def _parse_noise(text: str) -> NoiseSpec:
    try:
        p1, p2, p_ro = (float(x) for x in text.split(","))
        return NoiseSpec(p1=p1, p2=p2, p_ro=p_ro)
    except ValueError as exc:
        raise UsageError(f"bad noise spec {text!r} (want p1,p2,pro)") from exc


def cmd_vqe(args) -> int:
    started = time.monotonic()
    circuit = _load_circuit(args.circuit)
    if args.model != "xxz":
        raise UsageError(f"unknown model {args.model!r}")
    num_sites, num_particles = sector_of(circuit)
    if num_sites != circuit.num_qubits:
        raise UsageError("circuit qubit count mismatch")
    spec = XXZSpec(circuit.num_qubits, args.gamma, Boundary(args.boundary))
    hamiltonian = xxz_hamiltonian(spec)
    reference, _ = exact_ground(hamiltonian, sector=(num_sites, num_particles))
    estimator = _parse_estimator(args.estimator)
    noise = _parse_noise(args.noise)
    config = OptimizerConfig(
        method=Method(args.method), max_iterations=args.budget, seed=args.seed
    )
    task = VqeTask(
        circuit=circuit,
        hamiltonian=hamiltonian,
        config=config,
        estimator=estimator,
        noise=None if noise.is_noiseless() else noise,
        reference_energy=reference,
    )
    workers = int(os.environ.get("SYMVQC_THREADS", "1") or "1")
    result = run_trials(task, args.trials, args.seed, max_workers=max(workers, 1))
    _atomic_write(args.out, aggregate_to_csv(result))
    _write_manifest(args.out, "vqe", _flag_dict(args), args.seed, [args.out], started)
    print(
        f"reference={reference:.9f} best_final={result.best_final_value:.9f} "
        f"mean_final_delta_e={result.delta_e_mean[-1]:.6e}"
    )
    return 0


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    rows = run_suites(names)
    failed = 0
    for suite, (name, ok, detail) in rows:
        status = "PASS" if ok else "FAIL"
        failed += 0 if ok else 1
        tail = f"  [{detail}]" if detail else ""
        print(f"{status}  {suite:9s} {name}{tail}")
    print(f"{len(rows) - failed}/{len(rows)} checks passed")
    return 0 if failed == 0 else 2


def _flag_dict(args) -> dict:
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def build_parser() -> _Parser:
    parser = _Parser(prog="symvqc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="construct a particle-conserving circuit")
    p.add_argument("--sites", type=int, required=True)
    p.add_argument("--particles", type=int, required=True)
    p.add_argument("--gate", choices=("a", "b"), default="a")
    p.add_argument("--variant", choices=("brickwall", "swap24"), default="brickwall")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("fidelity", help="fidelity span against Haar sector targets")
    p.add_argument("--circuit", required=True)
    p.add_argument("--targets", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=6000, help="objective evaluations per target")
    p.add_argument("--method", choices=[m.value for m in Method], default=Method.NELDER_MEAD.value)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("vqe", help="variational energy minimization")
    p.add_argument("--circuit", required=True)
    p.add_argument("--model", default="xxz")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--boundary", choices=("open", "periodic"), default="open")
    p.add_argument("--estimator", default="exact", help="exact or shots:N")
    p.add_argument("--noise", default="0,0,0", help="p1,p2,pro")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=4000, help="objective evaluations per trial")
    p.add_argument("--method", choices=[m.value for m in Method], default=Method.NELDER_MEAD.value)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_vqe)

    p = sub.add_parser("verify", help="run library self-check suites")
    p.add_argument("--suite", choices=tuple(SUITES) + ("all",), default="all")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
