"""Command-line front end: config ingestion, seeded runs, reports.

Configs and reports share one human-readable structured-text format
(YAML-compatible key-value with nested lists; JSON configs parse too).
Complex numbers are serialized as two-element [re, im] arrays and every
float is printed with 17 significant digits so that reparsing
reproduces the binary double.

Exit codes: 0 success, 2 validation/config error, 3 protocol error
(degenerate superposition, non-unique fixed point, exhausted unitary
construction), 1 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone

import numpy as np
import yaml

from . import deutsch, linalg
from .discrimination import build_distinguisher, condition_report, distinguish
from .errors import (
    Condition2Exhausted,
    CtcSimError,
    DegenerateSuperposition,
    NonUniqueFixedPoint,
)
from .linalg import StateSet, StateVector, validate
from .superpose import SuperpositionSpec, build_omega, build_u_ij, run_protocol

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_CONFIG = 2
EXIT_PROTOCOL = 3

# exit 0 requires every requested fidelity >= 1 - success_fidelity
_DEFAULT_TOLERANCES = {
    "success_fidelity": 1e-6,
    "distinct": linalg.TOL_DISTINCT,
}

_EXAMPLE_DEVIATION = 1e-9


class ConfigError(Exception):
    """Anything wrong with the config or flags; maps to exit code 2."""


# ---------------------------------------------------------------------------
# config parsing


def _load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}")
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = (
            f"line {mark.line + 1}, column {mark.column + 1}"
            if mark is not None else "unknown position"
        )
        problem = getattr(exc, "problem", None) or str(exc)
        raise ConfigError(f"parse failure at {where}: {problem}")
    if not isinstance(data, dict):
        raise ConfigError("config must be a key-value mapping at top level")
    return data


def _parse_complex(node, where: str) -> complex:
    if isinstance(node, bool):
        raise ConfigError(f"{where}: expected a number or [re, im] pair")
    if isinstance(node, (int, float)):
        return complex(node)
    if (isinstance(node, list) and len(node) == 2
            and all(isinstance(x, (int, float)) and not isinstance(x, bool)
                    for x in node)):
        return complex(node[0], node[1])
    raise ConfigError(f"{where}: expected a number or [re, im] pair")


def _parse_vector(node, where: str) -> np.ndarray:
    if not isinstance(node, list) or not node:
        raise ConfigError(f"{where}: expected a nonempty list of amplitudes")
    return np.array(
        [_parse_complex(x, f"{where}[{k}]") for k, x in enumerate(node)],
        dtype=complex,
    )


def _parse_matrix(node, where: str) -> np.ndarray:
    if not isinstance(node, list) or not node:
        raise ConfigError(f"{where}: expected a nonempty list of rows")
    rows = [_parse_vector(row, f"{where}[{k}]") for k, row in enumerate(node)]
    if any(r.size != rows[0].size for r in rows):
        raise ConfigError(f"{where}: rows have unequal lengths")
    return np.array(rows, dtype=complex)


def _parse_state_set(cfg: dict) -> StateSet:
    if "state_set" not in cfg:
        raise ConfigError("config is missing the state_set key")
    node = cfg["state_set"]
    if not isinstance(node, list) or not node:
        raise ConfigError("state_set: expected a nonempty list of vectors")
    vectors = [
        _parse_vector(v, f"state_set[{k}]") for k, v in enumerate(node)
    ]
    try:
        return StateSet(tuple(StateVector(v) for v in vectors))
    except CtcSimError as exc:
        raise ConfigError(f"state_set: {exc}")


def _parse_spec(cfg: dict) -> SuperpositionSpec:
    if "alpha" not in cfg or "beta" not in cfg:
        raise ConfigError("config is missing alpha/beta amplitudes")
    alpha = _parse_complex(cfg["alpha"], "alpha")
    beta = _parse_complex(cfg["beta"], "beta")
    try:
        return SuperpositionSpec(alpha, beta)
    except ValueError as exc:
        raise ConfigError(str(exc))


def _parse_seed(cfg: dict, args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    seed = cfg.get("rng_seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ConfigError("rng_seed must be an integer")
    return seed


def _parse_policy(cfg: dict, args) -> str:
    policy = getattr(args, "policy", None) or cfg.get("policy", "require_unique")
    if policy not in ("require_unique", "max_entropy"):
        raise ConfigError(f"unknown policy {policy!r}")
    return policy


def _merge_tolerances(cfg: dict, args) -> dict:
    tol = dict(_DEFAULT_TOLERANCES)
    overrides = dict(cfg.get("tolerances") or {})
    for item in getattr(args, "tolerance", None) or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--tolerance expects KEY=VALUE, got {item!r}")
        try:
            overrides[key] = float(value)
        except ValueError:
            raise ConfigError(f"--tolerance {key}: {value!r} is not a number")
    for key, value in overrides.items():
        if key not in tol:
            raise ConfigError(
                f"unknown tolerance {key!r} (known: {', '.join(sorted(tol))})"
            )
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ConfigError(f"tolerance {key} must be a number")
        tol[key] = float(value)
    return tol


def _validate_states(states: StateSet, tol: dict) -> None:
    report = validate(states, distinct_tol=tol["distinct"])
    if not report.passed:
        lines = ", ".join(
            f"{c.name} (residual {_fmt_float(c.residual)}, "
            f"tolerance {_fmt_float(c.tolerance)})"
            for c in report.failures()
        )
        raise ConfigError(f"state_set fails validation: {lines}")


# ---------------------------------------------------------------------------
# report rendering


def _fmt_float(x: float) -> str:
    s = format(float(x), ".17g")
    if s not in ("inf", "-inf", "nan") and not any(c in s for c in ".eE"):
        s += ".0"
    return s


class _ReportDumper(yaml.SafeDumper):
    pass


_ReportDumper.add_representer(
    float,
    lambda dumper, value: dumper.represent_scalar(
        "tag:yaml.org,2002:float", _fmt_float(value)
    ),
)


def _json_dumps(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_json_dumps(x) for x in obj) + "]"
    if isinstance(obj, dict):
        return "{" + ",".join(
            f"{json.dumps(str(k))}:{_json_dumps(v)}" for k, v in obj.items()
        ) + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _pair(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _vector_out(v) -> list:
    return [_pair(z) for z in np.asarray(v, dtype=complex)]


def _matrix_out(m) -> list:
    return [_vector_out(row) for row in np.asarray(m, dtype=complex)]


def _real_matrix_out(m) -> list:
    return [[float(x) for x in row] for row in np.asarray(m, dtype=float)]


def _timestamp() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _render(header: dict, runs: list[dict], as_json: bool) -> str:
    if as_json:
        lines = []
        for run in runs:
            obj = dict(header)
            obj["run"] = run
            lines.append(_json_dumps(obj))
        return "\n".join(lines) + "\n"
    report = dict(header)
    report["runs"] = runs
    return yaml.dump(
        report, Dumper=_ReportDumper, sort_keys=False, default_flow_style=None,
    )


def _emit(text: str, args) -> None:
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_superpose(args) -> int:
    """Run the superposition protocol for one pair or a full sweep."""
    cfg = _load_config(args.config)
    tol = _merge_tolerances(cfg, args)
    states = _parse_state_set(cfg)
    _validate_states(states, tol)
    spec = _parse_spec(cfg)
    seed = _parse_seed(cfg, args)
    policy = _parse_policy(cfg, args)

    size = states.size
    if ("m" in cfg) != ("n" in cfg):
        raise ConfigError("give both m and n, or neither for a full sweep")
    if "m" in cfg:
        m, n = cfg["m"], cfg["n"]
        for label, value in (("m", m), ("n", n)):
            if not isinstance(value, int) or isinstance(value, bool) \
                    or not 0 <= value < size:
                raise ConfigError(f"{label} must be an index in [0, {size})")
        pairs = [(m, n)]
    else:
        pairs = [(m, n) for m in range(size) for n in range(size)]

    # surface amplitude cancellations before the heavier construction
    for i in range(size):
        for j in range(size):
            if i != j:
                build_omega(states, i, j, spec)

    bundle = build_distinguisher(states, seed)
    cond = condition_report(states, bundle.uks)
    runs = []
    for m, n in pairs:
        rep = run_protocol(states, m, n, spec, seed)
        runs.append({
            "m": rep.m,
            "n": rep.n,
            "alpha": _pair(rep.spec.alpha),
            "beta": _pair(rep.spec.beta),
            "decoded_indices": list(rep.decoded_indices),
            "fixed_point_residuals": [float(r) for r in rep.fixed_point_residuals],
            "fidelity": float(rep.fidelity),
            "ancilla_state": _vector_out(rep.ancilla_state),
            "expected_state": _vector_out(rep.expected),
        })
    header = {
        "command": "superpose",
        "timestamp": _timestamp(),
        "seed": seed,
        "policy": policy,
        "alpha": _pair(spec.alpha),
        "beta": _pair(spec.beta),
        "state_set": [_vector_out(s) for s in states],
        "condition_overlaps": _real_matrix_out(cond.overlaps),
        "condition2_min": float(cond.min_overlap),
        "condition1_deviation": [float(x) for x in cond.condition1_deviation],
        "tolerances": {k: float(v) for k, v in sorted(tol.items())},
    }
    _emit(_render(header, runs, args.json), args)
    threshold = 1.0 - tol["success_fidelity"]
    ok = all(r["fidelity"] >= threshold for r in runs)
    return EXIT_OK if ok else EXIT_PROTOCOL


def cmd_distinguish(args) -> int:
    """Discriminate every set member and report the decoded labels."""
    cfg = _load_config(args.config)
    tol = _merge_tolerances(cfg, args)
    states = _parse_state_set(cfg)
    _validate_states(states, tol)
    seed = _parse_seed(cfg, args)

    bundle = build_distinguisher(states, seed)
    cond = condition_report(states, bundle.uks)
    runs = []
    for j in range(states.size):
        r = distinguish(bundle, states[j])
        runs.append({
            "input_index": j,
            "decoded": r.decoded,
            "residual": float(r.residual),
            "unique": bool(r.unique),
            "fidelity_to_basis": float(r.fidelity_to_basis),
        })
    header = {
        "command": "distinguish",
        "timestamp": _timestamp(),
        "seed": seed,
        "state_set": [_vector_out(s) for s in states],
        "condition_overlaps": _real_matrix_out(cond.overlaps),
        "condition2_min": float(cond.min_overlap),
        "tolerances": {k: float(v) for k, v in sorted(tol.items())},
    }
    _emit(_render(header, runs, args.json), args)
    ok = all(r["decoded"] == r["input_index"] for r in runs)
    return EXIT_OK if ok else EXIT_PROTOCOL


def cmd_fixed_point(args) -> int:
    """Solve the self-consistency condition for a user-supplied circuit."""
    cfg = _load_config(args.config)
    policy = _parse_policy(cfg, args)
    if "unitary" not in cfg:
        raise ConfigError("config is missing the unitary key")
    u = _parse_matrix(cfg["unitary"], "unitary")
    res = np.abs(u.conj().T @ u - np.eye(u.shape[0])).max()
    if res > linalg.TOL_UNI:
        raise ConfigError(
            f"unitary fails U^dagger U = I by {_fmt_float(float(res))}"
        )
    if "rho_cr" not in cfg:
        raise ConfigError("config is missing the rho_cr key")
    node = cfg["rho_cr"]
    # a density matrix must use [re, im] entries (triple nesting);
    # double nesting is read as a pure-state vector
    if (isinstance(node, list) and node and isinstance(node[0], list)
            and node[0] and isinstance(node[0][0], list)):
        rho = _parse_matrix(node, "rho_cr")
        how = "a density matrix"
    else:
        vec = _parse_vector(node, "rho_cr")
        rho = np.outer(vec, vec.conj())
        how = f"a pure-state vector of {vec.size} amplitudes"
    if rho.shape[0] != rho.shape[1]:
        raise ConfigError("rho_cr must be square")
    dm_report = validate(linalg.DensityMatrix(rho))
    if not dm_report.passed:
        names = ", ".join(c.name for c in dm_report.failures())
        raise ConfigError(
            f"rho_cr (read as {how}) fails density-matrix validation: {names}"
        )
    if u.shape[0] % rho.shape[0] != 0:
        raise ConfigError(
            f"unitary dim {u.shape[0]} does not factor over rho_cr dim {rho.shape[0]}"
        )

    result = deutsch.fixed_point(u, rho, policy=policy)
    run = {
        "fixed_point": _matrix_out(result.fixed_point.entries),
        "residual": float(result.residual),
        "fixed_space_dim": result.fixed_space_dim,
        "unique": bool(result.unique),
        "entropy_nats": deutsch.von_neumann_entropy(result.fixed_point),
    }
    header = {
        "command": "fixed-point",
        "timestamp": _timestamp(),
        "policy": policy,
        "unitary": _matrix_out(u),
        "rho_cr": _matrix_out(rho),
    }
    _emit(_render(header, [run], args.json), args)
    return EXIT_OK


def _example_states() -> StateSet:
    s = 1 / np.sqrt(2)
    return StateSet((StateVector([1, 0]), StateVector([s, -s])))


def _example_reference(i: int, j: int, alpha: complex, beta: complex) -> np.ndarray:
    s = 1 / np.sqrt(2)
    eye = np.eye(2, dtype=complex)
    if (i, j) == (0, 0):
        return eye
    if (i, j) == (1, 1):
        hadamard = np.array([[s, s], [s, -s]], dtype=complex)
        flip = np.array([[0, 1], [1, 0]], dtype=complex)
        return hadamard @ flip
    if (i, j) == (1, 0):
        alpha, beta = beta, alpha
    g = np.sqrt(abs(alpha + beta * s) ** 2 + abs(beta) ** 2 / 2)
    return np.array([
        [alpha + beta * s, np.conj(beta) * s],
        [-beta * s, np.conj(alpha) + np.conj(beta) * s],
    ], dtype=complex) / g


def _column_phase_deviation(constructed: np.ndarray,
                            reference: np.ndarray) -> float:
    """Max-entry deviation with one free global phase per column."""
    worst = 0.0
    for c in range(reference.shape[1]):
        con = constructed[:, c]
        ref = reference[:, c]
        overlap = np.vdot(ref, con)
        phase = overlap / abs(overlap) if abs(overlap) > 1e-12 else 1.0
        worst = max(worst, float(np.abs(con - phase * ref).max()))
    return worst


def cmd_example(args) -> int:
    """Reproduce the canonical two-state construction at given amplitudes."""
    try:
        spec = SuperpositionSpec(args.alpha, args.beta)
    except ValueError as exc:
        raise ConfigError(str(exc))
    seed = args.seed if args.seed is not None else 0
    states = _example_states()
    bundle = build_distinguisher(states, seed)
    blocks = []
    worst = 0.0
    for i in range(2):
        for j in range(2):
            constructed = build_u_ij(states, i, j, spec, bundle.uks).entries
            reference = _example_reference(i, j, spec.alpha, spec.beta)
            if i == j:
                deviation = float(np.abs(constructed - reference).max())
            else:
                deviation = _column_phase_deviation(constructed, reference)
            worst = max(worst, deviation)
            blocks.append({
                "i": i,
                "j": j,
                "constructed": _matrix_out(constructed),
                "reference": _matrix_out(reference),
                "deviation": deviation,
            })
    header = {
        "command": "example",
        "timestamp": _timestamp(),
        "seed": seed,
        "alpha": _pair(spec.alpha),
        "beta": _pair(spec.beta),
        "state_set": [_vector_out(s) for s in states],
        "max_deviation": worst,
    }
    _emit(_render(header, blocks, args.json), args)
    return EXIT_OK if worst < _EXAMPLE_DEVIATION else EXIT_PROTOCOL


# ---------------------------------------------------------------------------
# argument parsing and dispatch


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None,
                        help="override the rng_seed from the config")
    parser.add_argument("--policy", choices=("require_unique", "max_entropy"),
                        default=None, help="fixed-point selection policy")
    parser.add_argument("--tolerance", action="append", metavar="KEY=VALUE",
                        help="override a tolerance (repeatable)")
    parser.add_argument("--out", default=None, metavar="PATH",
                        help="write the report to PATH instead of stdout")
    parser.add_argument("--json", action="store_true",
                        help="emit one JSON report object per run")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctcsim",
        description="Simulate Deutsch-CTC circuits: fixed points, state "
                    "discrimination, and superposition of set members.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("superpose",
                       help="run the superposition protocol from a config")
    p.add_argument("config")
    _add_common(p)
    p.set_defaults(func=cmd_superpose)

    p = sub.add_parser("distinguish",
                       help="discriminate every member of a state set")
    p.add_argument("config")
    _add_common(p)
    p.set_defaults(func=cmd_distinguish)

    p = sub.add_parser("fixed-point",
                       help="solve the self-consistency condition directly")
    p.add_argument("config")
    _add_common(p)
    p.set_defaults(func=cmd_fixed_point)

    p = sub.add_parser("example",
                       help="reproduce the two-state worked construction")
    p.add_argument("--alpha", type=float, default=1 / np.sqrt(2),
                   help="real target amplitude for the first state")
    p.add_argument("--beta", type=float, default=1 / np.sqrt(2),
                   help="real target amplitude for the second state")
    _add_common(p)
    p.set_defaults(func=cmd_example)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DegenerateSuperposition, NonUniqueFixedPoint,
            Condition2Exhausted) as exc:
        print(f"protocol error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PROTOCOL
    except CtcSimError as exc:
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - last-resort mapping to exit 1
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
