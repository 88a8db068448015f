"""Command-line front end.

    lauricella eval-fa --a 1 --b 1 --c 2 --z 0.5
    lauricella verify-lemma2 --a 3 --b 0.5,1 --format csv

Defaults < config file (key=value lines, path from --config or
$LAURICELLA_CONFIG) < command-line flags.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import fa, identities, pde, special
from .errors import DomainError, ParameterError, PoleError, WeightSignError
from .series import SeriesControl

CONFIG_ENV = "LAURICELLA_CONFIG"
COMMANDS = ("eval-2f1", "eval-fa", "verify-lemma1", "verify-lemma2", "verify-lemma3",
            "eval-q", "residual")
FORMATS = ("json", "csv", "plain")
REPORT_KEYS = ("command", "inputs", "value", "est_error", "weight_used", "converged",
               "lhs", "rhs", "abs_gap", "gap", "tolerance", "status")

EXIT_OK, EXIT_INPUT, EXIT_FAIL = 0, 1, 2

# per-command parameter defaults; vectors are tuples
PARAM_DEFAULTS = {
    "eval-2f1": {"a": 1.0, "b": 1.0, "c": 1.0, "z": 0.0},
    "eval-fa": {"n": None, "a": 1.0, "b": (1.0,), "c": (1.0,), "z": (0.0,),
                "method": "direct"},
    "verify-lemma1": {"n": 2, "trials": 10},
    "verify-lemma2": {"n": None, "a": 3.0, "b": (0.5, 1.0)},
    "verify-lemma3": {"n": None, "a": 4.0, "b": (0.5,), "c": (1.5,), "j": 10},
    "eval-q": {"m": 3, "n": None, "alpha": (), "k": 0, "x": (1.0, 1.0, 1.0),
               "xi": (0.5, 0.5, 0.5)},
    "residual": {"m": 3, "n": None, "alpha": (), "k": 0, "x": (1.0, 1.0, 1.0),
                 "xi": (0.5, 0.5, 0.5), "h": 1e-3, "order": 4},
}
VECTOR_KEYS = {"b", "c", "z", "alpha", "x", "xi"}
INT_KEYS = {"n", "trials", "j", "m", "k", "order"}
STR_KEYS = {"method"}
CONTROL_DEFAULTS = {"verify-lemma2": {"max_weight": 80}}

LEMMA1_TOL = 1e-9
LEMMA2_FLOOR = 1e-3
LEMMA3_TOL = 1e-2
RESIDUAL_TOL = 1e-4


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    control: SeriesControl = SeriesControl()
    output_format: str = "json"
    seed: int = 0

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ParameterError(f"unknown command {self.command!r}")
        if self.output_format not in FORMATS:
            raise ParameterError(f"unknown output format {self.output_format!r}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ParameterError(f"seed must be a nonnegative integer, got {self.seed!r}")

    def inputs(self) -> dict:
        out = {k: (list(v) if isinstance(v, tuple) else v) for k, v in self.params.items()}
        out.update(asdict(self.control))
        out["seed"] = self.seed
        return out


# ------------------------------------------------------------------ parsing

def _vector(text) -> tuple[float, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(float(v) for v in text)
    text = str(text).strip()
    if not text:
        return ()
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise ParameterError(f"cannot parse {text!r} as a comma-separated list of numbers")


def _coerce(key, value, vector_keys=VECTOR_KEYS):
    if value is None:
        return None
    if key in vector_keys:
        return _vector(value)
    if key in INT_KEYS:
        try:
            f = float(value)
        except ValueError:
            raise ParameterError(f"{key} must be an integer, got {value!r}")
        if not f.is_integer():
            raise ParameterError(f"{key} must be an integer, got {value!r}")
        return int(f)
    if key in STR_KEYS:
        return str(value)
    try:
        return float(value)
    except ValueError:
        raise ParameterError(f"{key} must be a number, got {value!r}")


def read_config(path) -> dict:
    """key=value lines; '#' starts a comment; dashes in keys become underscores."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lauricella", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        for key in PARAM_DEFAULTS[name]:
            p.add_argument(f"--{key}", default=None)
        p.add_argument("--max-weight", dest="max_weight", default=None)
        p.add_argument("--rel-tol", dest="rel_tol", default=None)
        p.add_argument("--plateau", default=None)
        p.add_argument("--seed", default=None)
        p.add_argument("--format", dest="output_format", choices=FORMATS, default=None)
        p.add_argument("--config", default=None, help=f"key=value file (default ${CONFIG_ENV})")
        p.add_argument("--timing", action="store_true",
                       help="append wall time to the report (breaks byte-identity)")
    return parser


def config_from_args(ns: argparse.Namespace, env=None) -> RunConfig:
    env = os.environ if env is None else env
    command = ns.command
    merged = dict(PARAM_DEFAULTS[command])
    merged.update(asdict(SeriesControl()))
    merged.update(CONTROL_DEFAULTS.get(command, {}))
    merged.update({"output_format": "json", "seed": 0})
    path = ns.config or env.get(CONFIG_ENV)
    if path:
        for key, value in read_config(path).items():
            if key not in merged:
                raise ParameterError(f"config key {key!r} is not used by {command}")
            merged[key] = value
    for key in merged:
        value = getattr(ns, key, None)
        if value is not None:
            merged[key] = value
    control = SeriesControl(max_weight=_coerce("n", merged.pop("max_weight")),
                            rel_tol=_coerce("rel_tol", merged.pop("rel_tol")),
                            plateau=_coerce("n", merged.pop("plateau")))
    fmt = str(merged.pop("output_format"))
    seed = _coerce("n", merged.pop("seed"))
    vector_keys = set() if command == "eval-2f1" else VECTOR_KEYS
    params = {k: _coerce(k, v, vector_keys) for k, v in merged.items()}
    cfg = RunConfig(command, params, control, fmt, seed)
    validate(cfg)
    return cfg


def _broadcast(vec, n, name):
    if len(vec) == n:
        return tuple(vec)
    if len(vec) == 1:
        return tuple(vec) * n
    raise ParameterError(f"{name} has {len(vec)} entries, expected 1 or {n}")


def validate(cfg: RunConfig) -> RunConfig:
    """Normalise vector lengths in place and check preconditions before dispatch."""
    p = cfg.params
    cmd = cfg.command
    if cmd == "eval-2f1":
        special._check_c(p["c"])
        if p["z"] > 1.0:
            raise DomainError(f"z = {p['z']!r} > 1 is outside the supported domain")
    elif cmd == "eval-fa":
        n = p["n"] or max(len(p["z"]), len(p["b"]), len(p["c"]))
        for key in ("b", "c", "z"):
            p[key] = _broadcast(p[key], n, key)
        p["n"] = n
        if p["method"] not in ("direct", "recursive", "decomposed"):
            raise ParameterError(f"unknown method {p['method']!r}")
        fa.LauricellaParams(p["a"], p["b"], p["c"])
        fa._check_strict(p["z"], True)
    elif cmd == "verify-lemma1":
        if p["n"] not in (2, 3, 4):
            raise ParameterError("verify-lemma1 supports n in {2, 3, 4}")
        if p["trials"] < 1:
            raise ParameterError("trials must be >= 1")
    elif cmd == "verify-lemma2":
        n = p["n"] or len(p["b"])
        p["b"] = _broadcast(p["b"], n, "b")
        p["n"] = n
        identities.SummationParams(p["a"], p["b"])
    elif cmd == "verify-lemma3":
        n = p["n"] or max(len(p["b"]), len(p["c"]))
        p["b"] = _broadcast(p["b"], n, "b")
        p["c"] = _broadcast(p["c"], n, "c")
        p["n"] = n
        if p["j"] < 0:
            raise ParameterError("j must be >= 0 (t = 2^-j <= 1)")
        identities.lemma3_rhs(fa.LauricellaParams(p["a"], p["b"], p["c"]))
    else:
        n = len(p["alpha"]) if p["n"] is None else p["n"]
        p["n"] = n
        pcfg = pde.SingularPdeConfig(p["m"], n, p["alpha"])
        pcfg.check_k(p["k"])
        pde.PointPair(p["x"], p["xi"]).validate(pcfg)
        if cmd == "residual" and not p["h"] > 0:
            raise ParameterError("h must be positive")
        if cmd == "residual" and p["order"] not in (2, 4):
            raise ParameterError("order must be 2 or 4")
    return cfg


# ------------------------------------------------------------------ dispatch

def _gap_fields(lhs, rhs, tolerance):
    abs_gap = abs(lhs - rhs)
    gap = abs_gap / abs(rhs) if rhs else math.inf
    return {"lhs": lhs, "rhs": rhs, "abs_gap": abs_gap, "gap": gap, "tolerance": tolerance}


def _result_fields(res):
    return {"value": res.value, "est_error": res.est_error,
            "weight_used": res.weight_used, "converged": res.converged}


def _lemma1_trials(p, ctl, seed):
    rng = np.random.default_rng(seed)
    n = p["n"]
    worst = None
    for _ in range(p["trials"]):
        a = rng.uniform(0.1, 2.0)
        b = rng.uniform(0.1, 2.0, n)
        c = rng.uniform(0.5, 3.0, n)
        z = rng.dirichlet(np.ones(n + 1))[:n] * rng.uniform(0.0, 0.5)
        params = fa.LauricellaParams(a, b, c)
        vals = [fa.fa_direct(params, z, ctl), fa.fa_recursive(params, z, ctl),
                fa.fa_decomposed(params, z, ctl)]
        gap = max(abs(u.value - v.value) / abs(v.value) for u in vals for v in vals)
        if worst is None or gap > worst[0]:
            worst = (gap, vals)
    return worst


def run(cfg: RunConfig) -> dict:
    """Evaluate one RunConfig; returns the report dict (without timing)."""
    p, ctl = cfg.params, cfg.control
    cmd = cfg.command
    report = {"command": cmd, "inputs": cfg.inputs()}
    verify = None
    if cmd == "eval-2f1":
        report.update(_result_fields(special.gauss_2f1(p["a"], p["b"], p["c"], p["z"], ctl)))
    elif cmd == "eval-fa":
        params = fa.LauricellaParams(p["a"], p["b"], p["c"])
        fn = {"direct": fa.fa_direct, "recursive": fa.fa_recursive,
              "decomposed": fa.fa_decomposed}[p["method"]]
        report.update(_result_fields(fn(params, p["z"], ctl)))
    elif cmd == "verify-lemma1":
        gap, (direct, _, decomposed) = _lemma1_trials(p, ctl, cfg.seed)
        report.update(_result_fields(decomposed))
        verify = _gap_fields(decomposed.value, direct.value, LEMMA1_TOL)
        verify["gap"] = gap
        ok = gap <= LEMMA1_TOL
    elif cmd == "verify-lemma2":
        sp = identities.SummationParams(p["a"], p["b"])
        res = identities.lemma2_lhs(sp, ctl)
        rhs = identities.lemma2_rhs(sp)
        report.update(_result_fields(res))
        verify = _gap_fields(res.value, rhs, max(res.est_error, LEMMA2_FLOOR * abs(rhs)))
        ok = verify["abs_gap"] <= verify["tolerance"]
    elif cmd == "verify-lemma3":
        params = fa.LauricellaParams(p["a"], p["b"], p["c"])
        res = identities.lemma3_lhs(params, 2.0 ** -p["j"], ctl)
        report.update(_result_fields(res))
        verify = _gap_fields(res.value, identities.lemma3_rhs(params), LEMMA3_TOL)
        ok = verify["gap"] <= LEMMA3_TOL
    else:
        pcfg = pde.SingularPdeConfig(p["m"], p["n"], p["alpha"])
        if cmd == "eval-q":
            pp = pde.PointPair(p["x"], p["xi"])
            report.update(_result_fields(pde.fundamental_solution(pcfg, p["k"], pp, ctl)))
        else:
            r = pde.pde_residual(pcfg, p["k"], p["x"], p["xi"], p["h"], ctl, p["order"])
            report.update({"value": r, "est_error": None, "weight_used": None,
                           "converged": None})
            verify = {"lhs": None, "rhs": None, "abs_gap": r, "gap": r,
                      "tolerance": RESIDUAL_TOL}
            ok = r <= RESIDUAL_TOL
    if verify is None:
        report["status"] = "ok"
    else:
        report.update(verify)
        report["status"] = "pass" if ok else "fail"
    return report


def exit_code(report: dict) -> int:
    return EXIT_FAIL if report.get("status") == "fail" else EXIT_OK


def format_report(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report)
    if fmt == "csv":
        buf = io.StringIO()
        header = list(REPORT_KEYS) + (["wall_time"] if "wall_time" in report else [])
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        row = []
        for key in header:
            v = report.get(key)
            if key == "inputs":
                v = json.dumps(v)
            elif v is None:
                v = ""
            elif isinstance(v, (float, np.floating)):
                v = repr(float(v))
            row.append(v)
        writer.writerow(row)
        return buf.getvalue().rstrip("\n")
    lines = []
    for key, v in report.items():
        if key == "inputs":
            v = ", ".join(f"{k}={w}" for k, w in v.items())
        lines.append(f"{key}: {v}")
    return "\n".join(lines)


def parse_report(text: str) -> tuple[RunConfig, dict]:
    """Rebuild (RunConfig, report) from a JSON report."""
    report = json.loads(text)
    inputs = dict(report["inputs"])
    control = SeriesControl(max_weight=inputs.pop("max_weight"),
                            rel_tol=inputs.pop("rel_tol"), plateau=inputs.pop("plateau"))
    seed = inputs.pop("seed")
    params = {k: (tuple(v) if isinstance(v, list) else v) for k, v in inputs.items()}
    return RunConfig(report["command"], params, control, "json", seed), report


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        start = time.perf_counter()
        report = run(cfg)
    except (ParameterError, DomainError, PoleError, WeightSignError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if ns.timing:
        report["wall_time"] = time.perf_counter() - start
    print(format_report(report, cfg.output_format))
    return exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
