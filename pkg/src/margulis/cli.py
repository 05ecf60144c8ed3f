"""Command-line frontend.

Subcommands::

    walk         iterate the lattice walk from a point mass; CSV + PGM frames
    spectrum     classical walk and channel superoperator spectra as CSV
    verify       run the operator-identity check bundle; JSON report
    circuit      synthesize gate lists for the walk unitaries; JSONL files
    moments      iterate the covariance maps; CSV trace
    contraction  discretize a test function and measure the one-step ratio

Exit status: 0 success, 1 check failure, 2 usage error.  All output is
deterministic for a fixed seed; floats are printed with 17 significant
digits.  The default output directory is $MARGULIS_OUT, else the current
directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .channel import (expander_lambda, margulis_channel, superoperator,
                      verify_wigner_intertwining)
from .circuits import affine_circuit, equal_up_to_phase, evaluate, gate_list_to_jsonl
from .continuous import (CovMatrix, MeanVector, TEST_FUNCTIONS,
                         contraction_check, discretize, moments_csv)
from .phasespace import (PhaseSpaceContext, affine_unitary, fourier, parity,
                         phase_point_basis, quadratic_phase,
                         operator_from_json, operator_to_json, weyl)
from .walk import (GABBER_GALIL_BOUND, GENERATOR_LABELS, GridDist,
                   generator_map, grid_to_csv, grid_to_pgm, margulis_generators,
                   spectral_report, walk_matrix, walk_step)

_FMT = ".17g"


def _fmt(x: float) -> str:
    return format(float(x), _FMT)


def _odd_int(text: str) -> int:
    n = int(text)
    if n < 3 or n % 2 == 0:
        raise argparse.ArgumentTypeError(f"{n} is not an odd integer >= 3")
    return n


def _odd_int_list(text: str) -> list[int]:
    return [_odd_int(t) for t in text.split(",") if t]


def _point(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'p,q', got {text!r}")
    return int(parts[0]), int(parts[1])


def _outdir(args) -> Path:
    out = Path(args.out) if args.out else Path(os.environ.get("MARGULIS_OUT", "."))
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_walk(args) -> int:
    out = _outdir(args)
    f = GridDist.delta(args.N, *args.start)
    frames = [f]
    for _ in range(args.steps):
        frames.append(walk_step(frames[-1]))
    lo = hi = None
    if args.fixed_scale:
        lo = min(float(fr.values.min()) for fr in frames)
        hi = max(float(fr.values.max()) for fr in frames)
    for k, fr in enumerate(frames):
        (out / f"step-{k}.csv").write_text(grid_to_csv(fr))
        (out / f"step-{k}.pgm").write_text(grid_to_pgm(fr, lo, hi))
    print(f"wrote {len(frames)} frames (steps 0..{args.steps}) for N={args.N} to {out}")
    return 0


def cmd_spectrum(args) -> int:
    out = _outdir(args)
    spectra = ["N,kind,index,eigenvalue"]
    lambdas = ["N,kind,lambda,bound"]
    bound = _fmt(GABBER_GALIL_BOUND)
    for N in args.N:
        if args.mode in ("classical", "both"):
            rep = spectral_report(walk_matrix(N), modulus=N)
            spectra += [f"{N},classical,{i},{_fmt(v)}" for i, v in enumerate(rep.spectrum)]
            lambdas.append(f"{N},classical,{_fmt(rep.lam)},{bound}")
        if args.mode in ("quantum", "both"):
            if N > args.quantum_cap:
                print(f"N={N} exceeds the quantum cap {args.quantum_cap}; "
                      "raise --quantum-cap to include it", file=sys.stderr)
                return 1
            ch = margulis_channel(PhaseSpaceContext(N))
            M = superoperator(ch, max_dim=args.quantum_cap)
            eigs = sorted(np.linalg.eigvalsh(M).tolist(), key=abs, reverse=True)
            spectra += [f"{N},quantum,{i},{_fmt(v)}" for i, v in enumerate(eigs)]
            lambdas.append(f"{N},quantum,{_fmt(expander_lambda(ch, max_dim=args.quantum_cap))},{bound}")
    (out / "spectra.csv").write_text("\n".join(spectra) + "\n")
    (out / "lambdas.csv").write_text("\n".join(lambdas) + "\n")
    print(f"wrote spectra.csv and lambdas.csv for N in {args.N} to {out}")
    return 0


def _prime_power(N: int) -> tuple[int, int]:
    """Smallest (d, n) with d^n = N, falling back to (N, 1)."""
    for d in range(3, N):
        if N % d:
            continue
        m, n = N, 0
        while m % d == 0:
            m //= d
            n += 1
        if m == 1:
            return d, n
    return N, 1


def _verify_checks(N: int, seed: int, trials: int) -> list[tuple[str, float]]:
    ctx = PhaseSpaceContext(N)
    basis = phase_point_basis(ctx)
    checks = []

    gram = np.einsum("vij,wji->vw", basis, basis) / N
    checks.append(("orthonormality",
                   float(np.max(np.abs(gram - np.eye(N * N))))))

    dev = 0.0
    for T in margulis_generators(N):
        U = affine_unitary(ctx, T)
        for p in range(N):
            for q in range(N):
                tp, tq = T((p, q))
                diff = U @ basis[p * N + q] @ U.conj().T - basis[tp * N + tq]
                dev = max(dev, float(np.linalg.norm(diff)))
    checks.append(("covariance", dev))

    rng = np.random.default_rng(seed)
    dev = 0.0
    for _ in range(50):
        ap, aq, bp, bq = (int(v) for v in rng.integers(0, N, size=4))
        w = weyl(ctx, ap, aq)
        diff = (w @ basis[bp * N + bq] @ w.conj().T
                - basis[((ap + bp) % N) * N + (aq + bq) % N])
        dev = max(dev, float(np.linalg.norm(diff)))
    checks.append(("translation", dev))

    report = verify_wigner_intertwining(ctx, trials=trials, seed=seed)
    checks.append(("intertwining", report.max_table_deviation))

    d, n = _prime_power(N)
    dev = 0.0
    for T in margulis_generators(N):
        approx = evaluate(affine_circuit(d, n, T))
        dense = affine_unitary(ctx, T)
        t = abs(np.trace(approx.conj().T @ dense))
        dev = max(dev, float(abs(t - N)))
    checks.append(("circuit_equivalence", dev))
    return checks


_GOLDEN_OPERATORS = ("fourier", "parity", "quadratic_plus", "quadratic_minus")


def _reference_operators(ctx: PhaseSpaceContext) -> dict[str, np.ndarray]:
    ops = {"fourier": fourier(ctx), "parity": parity(ctx),
           "quadratic_plus": quadratic_phase(ctx, +1),
           "quadratic_minus": quadratic_phase(ctx, -1)}
    for label, T in generator_map(ctx.N).items():
        ops[f"U_{label}"] = affine_unitary(ctx, T)
    return ops


def cmd_verify(args) -> int:
    ctx = PhaseSpaceContext(args.N)
    checks = _verify_checks(args.N, args.seed, args.trials)
    if args.dump_operators:
        opdir = Path(args.dump_operators)
        opdir.mkdir(parents=True, exist_ok=True)
        for name, op in _reference_operators(ctx).items():
            (opdir / f"{name}.json").write_text(operator_to_json(op))
    if args.compare_operators:
        opdir = Path(args.compare_operators)
        dev = 0.0
        for name, op in _reference_operators(ctx).items():
            golden = operator_from_json((opdir / f"{name}.json").read_text())
            dev = max(dev, float(np.max(np.abs(golden - op))))
        checks.append(("golden_operators", dev))
    items = [{"check": name, "max_deviation": dev, "tolerance": args.tol,
              "passed": dev < args.tol} for name, dev in checks]
    passed = all(item["passed"] for item in items)
    report = {"N": args.N, "seed": args.seed, "trials": args.trials,
              "tolerance": args.tol, "checks": items, "passed": passed}
    if args.out:
        Path(args.out).write_text(json.dumps(report, indent=2) + "\n")
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        for item in items:
            mark = "ok  " if item["passed"] else "FAIL"
            print(f"{mark} {item['check']:<20} max deviation {item['max_deviation']:.3e}")
        print(f"{'all checks passed' if passed else 'CHECKS FAILED'} "
              f"(N={args.N}, tol={args.tol:g})")
    return 0 if passed else 1


def cmd_circuit(args) -> int:
    out = _outdir(args)
    labels = list(GENERATOR_LABELS) if args.transform == "all" else [args.transform]
    gens = generator_map(args.d ** args.qudits)
    ctx = PhaseSpaceContext(args.d ** args.qudits)
    status = 0
    for label in labels:
        gl = affine_circuit(args.d, args.qudits, gens[label],
                            keep_trivial=args.keep_trivial)
        (out / f"gates-{label}.jsonl").write_text(gate_list_to_jsonl(gl, label))
        line = f"{label}: {len(gl.gates)} gates"
        if args.check:
            ok, _ = equal_up_to_phase(evaluate(gl), affine_unitary(ctx, gens[label]))
            line += f", equal up to phase: {'true' if ok else 'false'}"
            if not ok:
                status = 1
        print(line)
    return status


def _gamma(text: str) -> CovMatrix:
    parts = [float(t) for t in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected 'a,b,c', got {text!r}")
    return CovMatrix(*parts)


def _mean(text: str) -> MeanVector:
    parts = [float(t) for t in text.split(",")]
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'x,p', got {text!r}")
    return MeanVector(*parts)


def cmd_moments(args) -> int:
    out = _outdir(args)
    text = moments_csv(args.gamma, args.mean, args.iters, args.map)
    (out / "moments.csv").write_text(text)
    print(text.strip().splitlines()[-1])
    return 0


def cmd_contraction(args) -> int:
    out = _outdir(args)
    field = discretize(args.fn, args.delta, args.R)
    report = contraction_check(field)
    (out / f"contraction-{args.fn}.json").write_text(report.to_json() + "\n")
    print(f"{args.fn}: ratio {report.ratio:.6f} (bound {report.bound:.6f}, "
          f"N_embed {report.N_embed})")
    return 0 if report.passed() else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="margulis",
        description="Margulis expander walk, its quantization, and friends.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("walk", help="iterate the walk from a point mass")
    p.add_argument("--N", type=_odd_int, default=7)
    p.add_argument("--steps", type=int, default=3)
    p.add_argument("--start", type=_point, default=(0, 0), metavar="P,Q")
    p.add_argument("--fixed-scale", action="store_true",
                   help="share one grayscale range across frames")
    p.add_argument("--out")
    p.set_defaults(func=cmd_walk)

    p = sub.add_parser("spectrum", help="walk and channel spectra as CSV")
    p.add_argument("--N", type=_odd_int_list, default=[3, 5, 7], metavar="N1,N2,...")
    p.add_argument("--mode", choices=("classical", "quantum", "both"), default="both")
    p.add_argument("--quantum-cap", type=int, default=9,
                   help="largest N for the dense superoperator")
    p.add_argument("--out")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", help="operator-identity check bundle")
    p.add_argument("--N", type=_odd_int, default=7)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.add_argument("--out", help="also write the JSON report to this path")
    p.add_argument("--dump-operators", metavar="DIR",
                   help="write reference operators as JSON golden files")
    p.add_argument("--compare-operators", metavar="DIR",
                   help="compare against previously dumped golden files")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("circuit", help="synthesize walk unitaries as gate lists")
    p.add_argument("--d", type=_odd_int, default=3, help="qudit dimension (odd)")
    p.add_argument("--qudits", "-n", type=int, default=2)
    p.add_argument("--transform", choices=GENERATOR_LABELS + ("all",), default="all")
    p.add_argument("--check", action="store_true",
                   help="compare against the dense unitary")
    p.add_argument("--keep-trivial", action="store_true",
                   help="emit identity phase gates too")
    p.add_argument("--out")
    p.set_defaults(func=cmd_circuit)

    p = sub.add_parser("moments", help="iterate the covariance maps")
    p.add_argument("--gamma", type=_gamma, default=CovMatrix(1.0, 0.0, 1.0),
                   metavar="A,B,C")
    p.add_argument("--mean", type=_mean, default=MeanVector(0.0, 0.0), metavar="X,P")
    p.add_argument("--iters", type=int, default=4)
    p.add_argument("--map", choices=("g", "f"), default="g")
    p.add_argument("--out")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("contraction", help="one-step contraction of a test function")
    p.add_argument("--fn", choices=sorted(TEST_FUNCTIONS), default="box_dipole")
    p.add_argument("--delta", type=float, default=0.25)
    p.add_argument("--R", type=int, default=8)
    p.add_argument("--out")
    p.set_defaults(func=cmd_contraction)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
