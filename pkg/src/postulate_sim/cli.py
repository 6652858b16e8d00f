"""Command-line harness producing deterministic JSON (or text) reports.

Exit codes: 0 success, 1 usage or validation error, 2 blocked by degeneracy
(teleportation under strict von Neumann semantics).
"""
from __future__ import annotations

import argparse
import json
import sys
from collections import Counter

import numpy as np

from . import __version__, algorithms, protocols
from .errors import PostulateSimError
from .hilbert import Observable, StateVector, tensor_state
from .measurement import SemanticsMode, born_probabilities, measure

SCHEMA = "postulate-sim/1"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BLOCKED = 2

_PAULIS = {
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the blocked verdict owns that code
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _complex_pair(text: str) -> complex:
    try:
        re_s, im_s = text.split(",")
        return complex(float(re_s), float(im_s))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    # schedule-independent: every trial derives its stream from (seed, index)
    return np.random.default_rng(np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF, trial]))


def _state_json(state: StateVector) -> list[list[float]]:
    return [[float(c.real), float(c.imag)] for c in state.amplitudes]


def _input_qubit(alpha: complex, beta: complex) -> StateVector:
    norm = np.sqrt(abs(alpha) ** 2 + abs(beta) ** 2)
    if norm == 0:
        raise PostulateSimError("alpha and beta cannot both be zero")
    if abs(norm - 1.0) > 1e-6:
        print(f"warning: renormalizing input amplitudes (|psi| = {norm:.8g})", file=sys.stderr)
    return StateVector(np.array([alpha, beta]) / norm, (2,))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="postulate-sim", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--mode", default="lueders", choices=["lueders", "von-neumann"])
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=1)
        p.add_argument("--format", default="json", choices=["json", "text"])

    p = sub.add_parser("teleport", help="teleport one qubit through a Bell pair")
    p.add_argument("--alpha", type=_complex_pair, default=complex(1, 0), metavar="RE,IM")
    p.add_argument("--beta", type=_complex_pair, default=complex(0, 0), metavar="RE,IM")
    common(p)

    p = sub.add_parser("dj", help="Deutsch-Jozsa constant/balanced decision")
    p.add_argument("--oracle", help="truth-table file; omit to generate via --kind")
    p.add_argument("--n", type=int, help="input width when generating an oracle")
    p.add_argument("--kind", choices=["constant", "balanced"], default="constant")
    p.add_argument("--value", type=int, default=0, choices=[0, 1],
                   help="output of a generated constant oracle")
    common(p)

    p = sub.add_parser("simon", help="recover a hidden XOR period")
    p.add_argument("--oracle", help="truth-table file; omit to generate via --period")
    p.add_argument("--n", type=int, help="input width when generating an oracle")
    p.add_argument("--period", type=str, help="hidden period bitstring for a generated oracle")
    p.add_argument("--max-samples", type=int, default=50)
    common(p)

    p = sub.add_parser("grover", help="search for marked indices")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--marked", type=_int_list, required=True, metavar="I,J,...")
    common(p)

    p = sub.add_parser("measure", help="measure a Pauli observable on one qubit")
    p.add_argument("--observable", default="z", choices=sorted(_PAULIS))
    p.add_argument("--alpha", type=_complex_pair, default=complex(1, 0), metavar="RE,IM")
    p.add_argument("--beta", type=_complex_pair, default=complex(0, 0), metavar="RE,IM")
    common(p)

    return parser


# ---------------------------------------------------------------------------
# command runners; each returns (payload dict, exit code)

def _run_teleport(args) -> tuple[dict, int]:
    mode = SemanticsMode.from_string(args.mode)
    psi = _input_qubit(args.alpha, args.beta)
    trials = []
    counts = Counter()
    blocked = None
    for t in range(args.trials):
        result = protocols.teleport(psi, mode, _trial_rng(args.seed, t))
        counts[result.outcome_kind.label] += 1
        entry = {
            "outcome": result.outcome_kind.label,
            "bits": list(result.classical_bits),
        }
        if result.blocked is not None:
            blocked = result.blocked
            entry["determined"] = False
        else:
            fid = abs(psi.overlap(result.bob_state_after_correction)) ** 2
            entry["determined"] = True
            entry["fidelity"] = float(fid)
        trials.append(entry)

    born = {
        kind.label: float(
            born_probabilities(protocols.lifted_bell_observable(),
                               _teleport_total(psi))[kind.value]
        )
        for kind in protocols.BellKind
    }
    payload = {
        "born_probabilities": born,
        "outcomes": trials,
        "frequencies": {k: counts.get(k, 0) / max(args.trials, 1)
                        for k in sorted(born)},
        "blocked": None if blocked is None else {
            "dimension": blocked.dimension,
            "distinct_eigenvalues": blocked.distinct_eigenvalues,
            "multiplicities": blocked.multiplicities,
        },
    }
    return payload, EXIT_OK if blocked is None else EXIT_BLOCKED


def _teleport_total(psi: StateVector) -> StateVector:
    bell = protocols.bell_state(protocols.BellKind.PHI_PLUS)
    return tensor_state(psi, bell).reshaped((4, 2))


def _dj_oracle(args) -> algorithms.BooleanOracle:
    if args.oracle:
        return algorithms.load_oracle(args.oracle, "dj")
    if args.n is None:
        raise PostulateSimError("dj: provide --oracle or --n")
    if args.kind == "constant":
        return algorithms.constant_oracle(args.n, args.value)
    return algorithms.balanced_oracle(args.n, np.random.default_rng(args.seed))


def _run_dj(args) -> tuple[dict, int]:
    mode = SemanticsMode.from_string(args.mode)
    oracle = _dj_oracle(args)
    trials = []
    verdicts = Counter()
    zero_prob = None
    for t in range(args.trials):
        res = algorithms.deutsch_jozsa(oracle, mode, _trial_rng(args.seed, t))
        zero_prob = res.zero_probability
        verdicts[res.verdict] += 1
        trials.append({"verdict": res.verdict, "sampled_z": res.sampled_z})
    payload = {
        "n": oracle.n,
        "oracle_is_constant": oracle.is_constant,
        "zero_probability": zero_prob,
        "outcomes": trials,
        "verdicts": dict(sorted(verdicts.items())),
    }
    return payload, EXIT_OK


def _run_simon(args) -> tuple[dict, int]:
    mode = SemanticsMode.from_string(args.mode)
    if args.oracle:
        oracle = algorithms.load_oracle(args.oracle, "simon")
    else:
        if args.n is None or args.period is None:
            raise PostulateSimError("simon: provide --oracle or both --n and --period")
        oracle = algorithms.simon_oracle(args.n, int(args.period, 2))
    n = oracle.n
    trials = []
    for t in range(args.trials):
        res = algorithms.simon(oracle, mode, _trial_rng(args.seed, t), args.max_samples)
        trials.append({
            "period": f"{res.period:0{n}b}",
            "samples": [f"{j:0{n}b}" for j in res.samples],
        })
    payload = {
        "n": n,
        "hidden_period": f"{oracle.hidden_period:0{n}b}",
        "outcomes": trials,
        "all_recovered": all(t["period"] == f"{oracle.hidden_period:0{n}b}" for t in trials),
    }
    return payload, EXIT_OK


def _run_grover(args) -> tuple[dict, int]:
    mode = SemanticsMode.from_string(args.mode)
    trials = []
    hits = 0
    marked_prob = None
    iterations = None
    for t in range(args.trials):
        res = algorithms.grover(args.n, args.marked, mode, _trial_rng(args.seed, t))
        marked_prob, iterations = res.marked_probability, res.iterations
        hits += int(res.hit)
        trials.append({"found": res.found, "hit": res.hit})
    payload = {
        "n": args.n,
        "marked": sorted(set(args.marked)),
        "iterations": iterations,
        "marked_probability": marked_prob,
        "outcomes": trials,
        "hit_rate": hits / max(args.trials, 1),
    }
    return payload, EXIT_OK


def _run_measure(args) -> tuple[dict, int]:
    mode = SemanticsMode.from_string(args.mode)
    psi = _input_qubit(args.alpha, args.beta)
    obs = Observable(_PAULIS[args.observable], (2,))
    probs = born_probabilities(obs, psi)
    trials = []
    counts = Counter()
    for t in range(args.trials):
        outcome = measure(obs, psi, mode, _trial_rng(args.seed, t))
        counts[outcome.eigenvalue] += 1
        entry = {"eigenvalue": outcome.eigenvalue, "determined": outcome.determined}
        if outcome.post_state is not None:
            entry["post_state"] = _state_json(outcome.post_state)
        trials.append(entry)
    payload = {
        "observable": args.observable,
        "born_probabilities": {
            str(ev): float(p)
            for ev, p in zip(obs.decomposition.eigenvalues, probs)
        },
        "outcomes": trials,
        "frequencies": {str(ev): c / max(args.trials, 1) for ev, c in sorted(counts.items())},
    }
    return payload, EXIT_OK


_RUNNERS = {
    "teleport": _run_teleport,
    "dj": _run_dj,
    "simon": _run_simon,
    "grover": _run_grover,
    "measure": _run_measure,
}


def _config_echo(args) -> dict:
    skip = {"command", "format"}
    cfg = {"command": args.command, "mode": args.mode, "seed": args.seed,
           "trials": getattr(args, "trials", 1)}
    for key, value in sorted(vars(args).items()):
        if key in skip or key in cfg:
            continue
        if isinstance(value, complex):
            value = [value.real, value.imag]
        cfg[key] = value
    return cfg


def emit_report(report: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    lines = [f"postulate-sim {report['version']} :: {report['config']['command']} "
             f"(mode={report['config']['mode']}, seed={report['config']['seed']}, "
             f"trials={report['config']['trials']})"]
    for key, value in report.items():
        if key in ("schema", "version", "config", "outcomes"):
            continue
        lines.append(f"  {key}: {value}")
    outcomes = report.get("outcomes", [])
    lines.append(f"  outcomes: {len(outcomes)} trial(s)")
    for entry in outcomes[:10]:
        lines.append(f"    {entry}")
    if len(outcomes) > 10:
        lines.append(f"    ... {len(outcomes) - 10} more")
    return "\n".join(lines) + "\n"


def run(args) -> tuple[dict, int]:
    payload, code = _RUNNERS[args.command](args)
    report = {"schema": SCHEMA, "version": __version__, "config": _config_echo(args)}
    report.update(payload)
    return report, code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "trials", 1) < 1:
        parser.error("--trials must be >= 1")
    try:
        report, code = run(args)
    except (PostulateSimError, OSError, ValueError) as exc:
        print(f"postulate-sim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(emit_report(report, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
