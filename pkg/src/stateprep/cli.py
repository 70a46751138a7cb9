"""Command-line front end.

Subcommands: ``compile`` (vector file to circuit document plus a metrics
summary line), ``verify`` (circuit against a target vector), ``analyze``
(closed-form table per n), ``sweep`` (width/depth tradeoff per lambda)
and ``distinguish`` (adaptive measurement plan for two orthogonal
states).  Exit codes: 0 success, 1 verification failure, 2 usage or bad
input, 3 conflicting flags.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .circuit import deserialize, metrics, serialize
from .discrimination import OrthPair, PlanLeaf, decompose, evaluate_plan
from .divide_conquer import DcOptions, synthesize_dc
from .errors import NotOrthogonal, StatePrepError
from .hybrid import synthesize_hybrid
from .resources import dc_formulas, hybrid_formulas
from .simulator import verify_preparation
from .time_encoding import synthesize_time
from .tree import build_tree, pad_to_power_of_two

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_FLAG_CONFLICT = 3


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _load_vector(path: str) -> np.ndarray:
    with open(path) as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or "amplitudes" not in doc:
        raise ValueError(f"{path}: expected an object with an 'amplitudes' field")
    amps = doc["amplitudes"]
    if not isinstance(amps, list) or not all(isinstance(v, (int, float)) for v in amps):
        raise ValueError(f"{path}: amplitudes must be a list of numbers")
    return np.asarray(amps, dtype=float)


def _metrics_line(circuit) -> str:
    m = metrics(circuit)
    return json.dumps(
        {
            "qubits": m.qubits,
            "unit_cswaps": m.unit_cswaps,
            "depth_gates": m.depth_gates,
            "depth_full": m.depth_full,
        }
    )


def cmd_compile(args) -> int:
    if args.method != "hybrid" and args.lambda_ is not None:
        return _fail("--lambda is only valid with --method hybrid", EXIT_FLAG_CONFLICT)
    if args.method == "hybrid" and args.lambda_ is None:
        return _fail("--method hybrid requires --lambda", EXIT_FLAG_CONFLICT)
    if args.method != "dc" and args.no_disentangle:
        return _fail("--no-disentangle is only valid with --method dc", EXIT_FLAG_CONFLICT)
    if args.method != "dc" and args.parallelize:
        return _fail("--parallelize is only valid with --method dc", EXIT_FLAG_CONFLICT)
    if args.method == "time" and args.prune:
        return _fail("--prune is implicit for --method time", EXIT_FLAG_CONFLICT)
    try:
        raw = _load_vector(args.input)
        tree = build_tree(pad_to_power_of_two(raw))
        if args.method == "time":
            circuit = synthesize_time(tree)
        else:
            opts = DcOptions(
                disentangle=not args.no_disentangle,
                parallelize=args.parallelize,
                prune=args.prune,
            )
            if args.method == "dc":
                circuit = synthesize_dc(tree, opts)
            else:
                circuit = synthesize_hybrid(tree, args.lambda_, opts)
    except (OSError, ValueError, json.JSONDecodeError, StatePrepError) as exc:
        return _fail(str(exc), EXIT_USAGE)
    with open(args.out, "w") as fh:
        fh.write(serialize(circuit))
    if args.report:
        stages = [
            {
                "level": r.level,
                "node": r.node,
                "control_wire": r.control_wire,
                "ancilla_wires": list(r.ancilla_wires),
                "clbits": list(r.clbits),
                "computational": r.computational,
                "correction_bits": list(r.correction_bits),
                "correction_table": list(r.correction_table),
            }
            for r in circuit.stage_reports
        ]
        with open(args.report, "w") as fh:
            json.dump({"stages": stages}, fh, indent=2)
            fh.write("\n")
    print(_metrics_line(circuit))
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        with open(args.circuit) as fh:
            circuit = deserialize(fh.read())
        target = _load_vector(args.target)
        norm = np.linalg.norm(target)
        if norm == 0.0:
            raise ValueError("target vector has zero norm")
        report = verify_preparation(
            circuit,
            target / norm,
            mode=args.mode,
            shots=args.shots,
            seed=args.seed,
            branch_cap=args.branch_cap,
        )
    except (OSError, ValueError, json.JSONDecodeError, StatePrepError) as exc:
        return _fail(str(exc), EXIT_USAGE)
    print(json.dumps(report.to_json_dict()))
    return EXIT_OK if report.passed else EXIT_VERIFY_FAIL


def _measured_dc(n: int, parallel: bool):
    rng = np.random.default_rng(2**16 + n)
    x = rng.random(2**n) + 0.1
    x /= np.linalg.norm(x)
    opts = DcOptions(parallelize=parallel)
    return metrics(synthesize_dc(build_tree(x), opts))


def cmd_analyze(args) -> int:
    if args.n_min < 1 or args.n_max < args.n_min:
        return _fail("need 1 <= n-min <= n-max", EXIT_USAGE)
    header = "n,qubits,cswaps,depth,depth_parallel"
    if args.measure:
        header += ",measured_qubits,measured_cswaps,measured_depth,measured_depth_parallel"
    lines = [header]
    for n in range(args.n_min, args.n_max + 1):
        f = dc_formulas(n)
        row = f"{n},{f.qubits},{f.cswaps},{f.depth},{f.depth_parallel}"
        if args.measure:
            m = _measured_dc(n, parallel=False)
            mp = _measured_dc(n, parallel=True)
            row += f",{m.qubits},{m.unit_cswaps},{m.depth_gates},{mp.depth_gates}"
        lines.append(row)
    print("\n".join(lines))
    return EXIT_OK


def cmd_sweep(args) -> int:
    n = args.n
    lam_min = args.lambda_min
    lam_max = args.lambda_max if args.lambda_max is not None else n
    if n < 1 or not 1 <= lam_min <= lam_max <= n:
        return _fail("need 1 <= lambda-min <= lambda-max <= n", EXIT_USAGE)
    header = "n,lambda,qubits,depth_gates"
    if args.measure:
        header += ",measured_qubits,measured_cswaps,measured_depth_gates,measured_depth_full"
    lines = [header]
    rng = np.random.default_rng(2**20 + n)
    x = rng.random(2**n) + 0.1
    x /= np.linalg.norm(x)
    tree = build_tree(x)
    for lam in range(lam_min, lam_max + 1):
        f = hybrid_formulas(n, lam)
        row = f"{n},{lam},{f.qubits},{f.depth}"
        if args.measure:
            m = metrics(synthesize_hybrid(tree, lam))
            row += f",{m.qubits},{m.unit_cswaps},{m.depth_gates},{m.depth_full}"
        lines.append(row)
    print("\n".join(lines))
    return EXIT_OK


def _plan_to_dict(node) -> dict:
    if isinstance(node, PlanLeaf):
        return {"label": node.label}
    doc: dict = {}
    if node.angle is not None:
        doc["angle"] = float(f"{node.angle:.12g}")
    else:
        doc["basis"] = [[[c.real, c.imag] for c in row] for row in node.basis]
    doc["on0"] = _plan_to_dict(node.on0)
    doc["on1"] = _plan_to_dict(node.on1)
    return doc


def cmd_distinguish(args) -> int:
    try:
        plus = _load_vector(args.plus)
        minus = _load_vector(args.minus)
        pair = OrthPair.from_states(plus, minus)
        plan = decompose(pair)
    except (OSError, ValueError, json.JSONDecodeError, NotOrthogonal, StatePrepError) as exc:
        return _fail(str(exc), EXIT_USAGE)
    p_plus = sum(p for _, label, p in evaluate_plan(plan, pair.plus) if label == "+")
    p_minus = sum(p for _, label, p in evaluate_plan(plan, pair.minus) if label == "-")
    if args.plan_out:
        with open(args.plan_out, "w") as fh:
            json.dump({"m": plan.m, "root": _plan_to_dict(plan.root)}, fh, indent=2)
            fh.write("\n")
    print(json.dumps({"p_correct_plus": p_plus, "p_correct_minus": p_minus}))
    ok = p_plus >= 1.0 - 1e-10 and p_minus >= 1.0 - 1e-10
    return EXIT_OK if ok else EXIT_VERIFY_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stateprep", description="Amplitude-encoding circuit tools"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="synthesize a circuit from a vector file")
    p.add_argument("input", help="JSON file with an 'amplitudes' list")
    p.add_argument("--method", choices=("time", "dc", "hybrid"), required=True)
    p.add_argument("--lambda", dest="lambda_", type=int, default=None,
                   help="sub-block size for the hybrid method")
    p.add_argument("--no-disentangle", action="store_true",
                   help="skip the ancilla measurements (dc only)")
    p.add_argument("--parallelize", action="store_true",
                   help="reposition movable swaps into earlier layers (dc only)")
    p.add_argument("--prune", action="store_true",
                   help="drop gates and wires that the input makes redundant")
    p.add_argument("--out", required=True, help="circuit document output path")
    p.add_argument("--report", default=None,
                   help="also write the per-stage measurement/correction report")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("verify", help="check a circuit against a target vector")
    p.add_argument("circuit")
    p.add_argument("target")
    p.add_argument("--mode", choices=("enumerate", "sample"), default="enumerate")
    p.add_argument("--shots", type=int, default=4096)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--branch-cap", type=int, default=14)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("analyze", help="closed-form resource table")
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--measure", action="store_true",
                   help="also synthesize circuits and report measured metrics")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="width/depth tradeoff across lambda")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda-min", type=int, default=1)
    p.add_argument("--lambda-max", type=int, default=None)
    p.add_argument("--measure", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("distinguish", help="adaptive plan for two orthogonal states")
    p.add_argument("plus")
    p.add_argument("minus")
    p.add_argument("--plan-out", default=None)
    p.set_defaults(func=cmd_distinguish)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
