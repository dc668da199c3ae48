"""Command-line entry point: ``quadent <command> [options]``.

Commands print CSV or JSON to stdout (or ``--out``).  Exit status is 0 on
success, 2 for bad input and 3 when a verification step fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import __version__
from .channels import angle_grid, channel_sweep, sig6
from .entmeas import pi4, pi4_full
from .errors import NoCorrectionExists, NotAGateResource, QuadentError
from .groverian import OptimizerConfig, groverian_full, groverian_w_analytic
from .ketlang import KetSyntaxError, ket_state
from .qcore import PureState
from .statelib import GraphSpec, chi_state, enumerate_graphs, get_state, graph_state, reference_registry

DEFAULT_SEED = 20090101
EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 2, 3


class InputError(Exception):
    pass


class VerificationError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    seed: int = DEFAULT_SEED
    restarts: int = 50
    fmt: str = "csv"
    out: Optional[str] = None
    grid: Optional[tuple] = None
    range_: Optional[tuple] = None

    def optimizer(self) -> OptimizerConfig:
        return OptimizerConfig(restarts=self.restarts, rng_seed=self.seed)


# ---------------------------------------------------------------- parsing helpers

_ANGLE = re.compile(r"^\s*(-?\d*\.?\d*)\s*\*?\s*(pi)?\s*(?:/\s*(\d+\.?\d*))?\s*$")


def parse_number(text: str) -> float:
    """Accept plain floats and multiples of pi such as ``pi/2`` or ``3pi/4``."""
    m = _ANGLE.match(text)
    if not m or not (m.group(1) not in ("", "-") or m.group(2)):
        raise InputError(f"cannot read number {text!r}")
    head, pi, den = m.groups()
    value = float(head) if head not in ("", "-") else (-1.0 if head == "-" else 1.0)
    if pi:
        value *= np.pi
    if den:
        value /= float(den)
    return value


def parse_grid(text: str) -> tuple:
    m = re.fullmatch(r"(\d+)(?:x(\d+))?", text.strip())
    if not m:
        raise InputError(f"grid must look like N or NxM, got {text!r}")
    n = int(m.group(1))
    k = int(m.group(2)) if m.group(2) else n
    if n < 1 or k < 1:
        raise InputError("grid sizes must be positive")
    return n, k


def parse_range(text: str) -> tuple:
    parts = text.split(":")
    if len(parts) != 2:
        raise InputError(f"range must look like a:b, got {text!r}")
    lo, hi = (parse_number(p) for p in parts)
    if not lo < hi:
        raise InputError("range needs a < b")
    return lo, hi


def resolve_state(args) -> tuple[str, PureState]:
    """Exactly one of --state, --ket, --theta/--phi or --graph."""
    sources = [
        args.state is not None,
        args.ket is not None,
        args.theta is not None or args.phi is not None,
        getattr(args, "graph", None) is not None,
    ]
    if sum(sources) != 1:
        raise InputError("give exactly one state source: --state, --ket, --theta/--phi or --graph")
    if args.state is not None:
        try:
            return args.state, get_state(args.state)
        except KeyError as exc:
            raise InputError(exc.args[0]) from None
    if args.ket is not None:
        return args.ket, ket_state(args.ket)
    if args.graph is not None:
        bits = args.graph.strip()
        if not re.fullmatch(r"[01]{6}", bits):
            raise InputError("--graph takes six 0/1 edge bits")
        return f"graph:{bits}", graph_state(GraphSpec(tuple(map(int, bits))))
    if args.theta is None or args.phi is None:
        raise InputError("--theta and --phi go together")
    t, p = parse_number(args.theta), parse_number(args.phi)
    return f"chi({args.theta},{args.phi})", chi_state(t, p)


# ---------------------------------------------------------------- output


def header(cfg: RunConfig, **meta) -> str:
    parts = [f"quadent {__version__}", f"command={cfg.command}", f"seed={cfg.seed}"]
    parts += [f"{k}={v}" for k, v in meta.items()]
    return "# " + "; ".join(parts) + "\n"


def csv_text(cfg: RunConfig, columns: list, rows: list, **meta) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([sig6(x) if isinstance(x, float) else x for x in row])
    return header(cfg, **meta) + buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n"


def _json_default(x):
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, np.ndarray):
        return _json_default_array(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _json_default_array(a: np.ndarray):
    if np.iscomplexobj(a):
        return [[_json_default_array(v) for v in row] for row in a] if a.ndim > 1 else [[float(v.real), float(v.imag)] for v in a]
    return a.tolist()


def _flatten(d: dict, prefix: str = "") -> list:
    out = []
    for k in sorted(d):
        v = d[k]
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out += _flatten(v, key + ".")
        else:
            out.append((key, v))
    return out


# ---------------------------------------------------------------- commands


def cmd_measure(cfg: RunConfig, args) -> str:
    label, psi = resolve_state(args)
    g = groverian_full(psi, cfg.optimizer())
    report = {"state": label, "e_g": g.e_g, "p_max": g.p_max}
    if psi.n_qubits == 4:
        report.update(pi4_full(psi).as_dict())
    if cfg.fmt == "json":
        return json_text(report)
    return csv_text(cfg, ["field", "value"], _flatten(report), restarts=cfg.restarts)


def reference_rows(cfg: RunConfig) -> list:
    rows = []
    for r in reference_registry():
        psi = r.state()
        eg = groverian_full(psi, cfg.optimizer()).e_g
        p = pi4(psi)
        rows.append((r.id, r.expected_eg, eg, abs(eg - r.expected_eg), r.expected_pi4, p, abs(p - r.expected_pi4)))
    return rows


REFERENCE_COLUMNS = ["id", "eg_tabulated", "eg_computed", "eg_delta", "pi4_tabulated", "pi4_computed", "pi4_delta"]


def cmd_reference(cfg: RunConfig, args) -> str:
    rows = reference_rows(cfg)
    if cfg.fmt == "json":
        return json_text([dict(zip(REFERENCE_COLUMNS, r)) for r in rows])
    return csv_text(cfg, REFERENCE_COLUMNS, rows, restarts=cfg.restarts)


def _sweep_w_curve(cfg: RunConfig) -> tuple:
    lo, hi = cfg.range_ or (3, 10)
    if lo != int(lo) or hi != int(hi) or lo < 2:
        raise InputError("w_curve range is a span of qubit counts such as 3:10")
    from .statelib import w_state

    rows = []
    for n in range(int(lo), int(hi) + 1):
        analytic = groverian_w_analytic(n)
        numeric = groverian_full(w_state(n), cfg.optimizer()).e_g
        rows.append((n, analytic, numeric, abs(numeric - analytic)))
    return ["n", "eg_analytic", "eg_numeric", "delta"], rows, {"range": f"{int(lo)}:{int(hi)}"}


def _sweep_ghz_family(cfg: RunConfig) -> tuple:
    n, _ = cfg.grid or (21, 1)
    lo, hi = cfg.range_ or (0.0, 1.0)
    if lo < 0 or hi > 1:
        raise InputError("ghz_family range must lie inside 0:1")
    rows = []
    for a2 in np.linspace(lo, hi, n):
        amps = np.zeros(16)
        amps[0], amps[15] = np.sqrt(a2), np.sqrt(1 - a2)
        eg = groverian_full(PureState(amps), cfg.optimizer()).e_g
        rows.append((float(a2), eg, float(np.sqrt(1 - max(a2, 1 - a2)))))
    return ["a2", "eg_numeric", "eg_closed_form"], rows, {"grid": n, "range": f"{sig6(lo)}:{sig6(hi)}"}


def _sweep_chi_grid(cfg: RunConfig) -> tuple:
    n, k = cfg.grid or (21, 21)
    lo, hi = cfg.range_ or (0.0, np.pi / 2)
    rows = []
    for t in np.linspace(lo, hi, n):
        for p in np.linspace(lo, hi, k):
            rows.append((float(t), float(p), pi4(chi_state(t, p))))
    return ["theta", "phi", "pi4"], rows, {"grid": f"{n}x{k}", "range": f"{sig6(lo)}:{sig6(hi)}"}


def _sweep_channel(cfg: RunConfig) -> tuple:
    n, k = cfg.grid or (41, 41)
    lo, hi = cfg.range_ or (0.0, np.pi / 2)
    rows = [(r.theta, r.phi, r.pi4, r.negativity) for r in channel_sweep(*angle_grid(n, k, lo, hi))]
    return ["theta", "phi", "pi4", "negativity"], rows, {"grid": f"{n}x{k}", "range": f"{sig6(lo)}:{sig6(hi)}"}


SWEEPS = {"w_curve": _sweep_w_curve, "ghz_family": _sweep_ghz_family, "chi_grid": _sweep_chi_grid, "channel": _sweep_channel}


def cmd_sweep(cfg: RunConfig, args) -> str:
    columns, rows, meta = SWEEPS[args.kind](cfg)
    if cfg.fmt == "json":
        return json_text({"meta": meta, "rows": [dict(zip(columns, r)) for r in rows]})
    return csv_text(cfg, columns, rows, kind=args.kind, **meta)


def cmd_graphs(cfg: RunConfig, args) -> str:
    records = enumerate_graphs()
    rows = [
        (r.spec.label, " ".join(f"{i}{j}" for i, j in r.spec.edges) or "-", int(r.connected), r.pi4)
        for r in records
    ]
    connected = sum(r.connected for r in records)
    if cfg.fmt == "json":
        return json_text({
            "connected": connected,
            "disconnected": len(records) - connected,
            "rows": [dict(zip(["bits", "edges", "connected", "pi4"], r)) for r in rows],
        })
    return csv_text(cfg, ["bits", "edges", "connected", "pi4"], rows, connected=connected)


def teleport_report() -> dict:
    from . import teleport as tp

    resource = get_state("gate_resource")
    gate = tp.extract_gate(resource)
    word = tp.decompose_over_generators(gate)
    table = tp.derive_correction_table(resource)
    t2 = tp.verify_printed_corrections(table)
    lu = tp.verify_lu_equivalences()
    from .statelib import chi11

    bip = tp.teleport_bipartite(0.6, 0.8j)
    return {
        "gate_diagonal": [float(x.real) for x in np.diag(gate)],
        "generator_word": word,
        "corrections": {b: {"word": str(w), "phase": w.phase} for b, w in sorted(table.entries.items())},
        "printed_corrections": t2.as_dict(),
        "lu_equivalences": [{"name": c.name, "equal": c.equal, "overlap": c.overlap} for c in lu],
        "chi11_stabilizers": tp.stabilizer_check(chi11()),
        "bipartite_example": {
            "alpha": [0.6, 0.0],
            "beta": [0.0, 0.8],
            "min_fidelity": bip.min_fidelity,
            "corrections": {b: str(w) for b, w in sorted(bip.corrections.items())},
        },
    }


def cmd_teleport(cfg: RunConfig, args) -> str:
    return json_text(teleport_report())


def cmd_protocol(cfg: RunConfig, args) -> str:
    from .qcore.gates import random_state
    from .ttp import run_protocol

    if args.runs < 1:
        raise InputError("--runs must be positive")
    rng = np.random.default_rng(cfg.seed)
    lines, failed = [], 0
    for k in range(args.runs):
        tr = run_protocol(random_state(1, rng), seed=cfg.seed + k)
        for line in tr.to_jsonl().splitlines():
            lines.append(json.dumps({"run": k, **json.loads(line)}, sort_keys=True))
        failed += tr.fidelity < 1 - 1e-10 or not tr.ordered()
    if failed:
        raise VerificationError(f"{failed} of {args.runs} runs did not restore the payload")
    return "\n".join(lines) + "\n"


COMMANDS = {
    "measure": cmd_measure,
    "reference": cmd_reference,
    "sweep": cmd_sweep,
    "graphs": cmd_graphs,
    "teleport": cmd_teleport,
    "protocol": cmd_protocol,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="RNG seed (default %(default)s)")
    common.add_argument("--restarts", type=int, default=50, help="optimizer restarts (default %(default)s)")
    common.add_argument("--format", choices=["csv", "json"], default=None, help="output format")
    common.add_argument("--out", help="write to this file instead of stdout")

    p = argparse.ArgumentParser(prog="quadent", description="Four-qubit entanglement measures and protocols.")
    p.add_argument("--version", action="version", version=f"quadent {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("measure", parents=[common], help="E_G, pi4 and negativities of one state")
    m.add_argument("--state", help="registry id, e.g. ghz4 or psi7")
    m.add_argument("--ket", help='bra-ket expression, e.g. "(|0000>+|1111>)/2^(1/2)"')
    m.add_argument("--theta", help="chi-family angle (accepts pi/4 style)")
    m.add_argument("--phi", help="chi-family angle")
    m.add_argument("--graph", help="graph state from six edge bits in order 12,13,14,23,24,34")

    sub.add_parser("reference", parents=[common], help="reference table, tabulated vs computed")

    s = sub.add_parser("sweep", parents=[common], help="parameter sweeps as CSV")
    s.add_argument("kind", choices=sorted(SWEEPS))
    s.add_argument("--grid", help="points per axis, N or NxM")
    s.add_argument("--range", dest="range_", help="a:b (qubit counts for w_curve, angles or a^2 otherwise)")

    sub.add_parser("graphs", parents=[common], help="all 64 four-vertex graph states")
    sub.add_parser("teleport", parents=[common], help="gate-teleportation report")
    pr = sub.add_parser("protocol", parents=[common], help="batch of trusted-third-party runs (JSON lines)")
    pr.add_argument("--runs", type=int, default=100, help="number of runs (default 100)")
    return p


_DEFAULT_FORMAT = {"measure": "json", "teleport": "json", "protocol": "json"}


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            command=args.command,
            seed=args.seed,
            restarts=args.restarts,
            fmt=args.format or _DEFAULT_FORMAT.get(args.command, "csv"),
            out=args.out,
            grid=parse_grid(args.grid) if getattr(args, "grid", None) and args.command == "sweep" else None,
            range_=parse_range(args.range_) if getattr(args, "range_", None) else None,
        )
        if cfg.restarts < 1:
            raise InputError("--restarts must be positive")
        text = COMMANDS[args.command](cfg, args)
    except KetSyntaxError as exc:
        print(f"quadent: ket syntax error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InputError as exc:
        print(f"quadent: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (VerificationError, NoCorrectionExists, NotAGateResource) as exc:
        print(f"quadent: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (QuadentError, ValueError) as exc:
        print(f"quadent: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if cfg.out:
        with open(cfg.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
