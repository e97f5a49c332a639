"""``pauligraph`` command line.

Exit codes: 0 success, 2 configuration error, 3 resource cap exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import dynamics, graph as graphmod, matchgate, metrics
from .dla import GeneratorSet, PRESETS, lie_closure, pauli_linear_symmetries, resolve_model
from .errors import ContractError, ResourceLimitError
from .pauli import PauliString, parse

DEFAULTS = {
    "model": None,
    "model_file": None,
    "n": None,
    "seed": 0,
    "weight_cap": None,
    "depth": None,
    "trials": 0,
    "t_max": 10.0,
    "steps": 101,
    "format": None,
    "out": None,
    "threads": None,
    "sampler": "circuit",
    "coef_low": 0.0,
    "coef_high": 2 * np.pi,
    "method": "ode",
    "coefficients": None,
    "diameters": False,
    "p": None,
    "V": None,
    "W": None,
    "P": None,
    "Q": None,
    "R": None,
    "S": None,
    "all_components": False,
}


class ConfigError(ContractError):
    pass


def _common(parser: argparse.ArgumentParser) -> None:
    S = argparse.SUPPRESS
    parser.add_argument("--config", default=S, help="JSON file with option values (flags override it)")
    parser.add_argument("--model", default=S, help=f"preset ({', '.join(PRESETS)}) or JSON model file")
    parser.add_argument("--model-file", dest="model_file", default=S, help="JSON model file")
    parser.add_argument("--n", type=int, default=S, help="number of qubits")
    parser.add_argument("--seed", type=int, default=S, help="RNG seed (default 0)")
    parser.add_argument("--weight-cap", dest="weight_cap", type=int, default=S, help="delete strings heavier than this")
    parser.add_argument("--depth", type=int, default=S, help="random-circuit depth (default 50 * #generators)")
    parser.add_argument("--trials", type=int, default=S, help="Monte-Carlo samples (0 = exact only)")
    parser.add_argument("--t-max", dest="t_max", type=float, default=S, help="final time")
    parser.add_argument("--steps", type=int, default=S, help="number of time points")
    parser.add_argument("--format", choices=["json", "csv", "dot"], default=S, help="output format")
    parser.add_argument("--out", default=S, help="output file (default stdout)")
    parser.add_argument("--threads", type=int, default=S, help="worker threads (default: all cores)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pauligraph", description="Commutator graphs of Pauli generator sets.")
    sub = parser.add_subparsers(dest="command", required=True)
    S = argparse.SUPPRESS

    g = sub.add_parser("graph", help="build the commutator graph and export component statistics")
    _common(g)
    g.add_argument("--diameters", action="store_true", default=S, help="compute component diameters")
    g.add_argument("-p", default=S, help="only the component containing this string")

    m = sub.add_parser("metrics", help="exact chaos diagnostics with optional Monte-Carlo columns")
    m.add_argument("kind", choices=["frame", "otoc", "four-point", "spread", "symcheck", "symmetries"])
    _common(m)
    for flag in ("V", "W", "P", "Q", "R", "S"):
        m.add_argument(f"-{flag}", default=S, help=f"Pauli string {flag}")
    m.add_argument("--all-components", dest="all_components", action="store_true", default=S,
                   help="otoc: one row per component representative V")
    m.add_argument("--sampler", choices=["circuit", "hamiltonian"], default=S)
    m.add_argument("--coef-low", dest="coef_low", type=float, default=S)
    m.add_argument("--coef-high", dest="coef_high", type=float, default=S)

    for name, text in (("evolve", "trajectory CSV of graph and Krylov complexity"), ("krylov", "Lanczos coefficients")):
        e = sub.add_parser(name, help=text)
        _common(e)
        e.add_argument("-p", default=S, help="initial Pauli string")
        e.add_argument("--coefficients", default=S, help="comma-separated generator coefficients (default: sampled)")
        e.add_argument("--coef-low", dest="coef_low", type=float, default=S)
        e.add_argument("--coef-high", dest="coef_high", type=float, default=S)
        e.add_argument("--method", choices=["ode", "expm", "spectral"], default=S)

    mg = sub.add_parser("matchgate", help="per-kappa table of matchgate closed forms")
    _common(mg)
    return parser


def resolve_config(ns: argparse.Namespace) -> dict:
    """Defaults, then the config file, then explicit flags."""
    given = vars(ns).copy()
    command = given.pop("command")
    kind = given.pop("kind", None)
    cfg = dict(DEFAULTS)
    path = given.pop("config", None)
    if path is not None:
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        unknown = set(data) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(data)
    cfg.update(given)
    if cfg["threads"] is None:
        cfg["threads"] = os.cpu_count() or 1
    cfg["command"] = command
    if kind is not None:
        cfg["kind"] = kind
    return cfg


def _pauli(text, n=None) -> PauliString:
    try:
        p = parse(text)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if n is not None and p.n != n:
        raise ConfigError(f"{text} has {p.n} qubits, model has {n}")
    return p


def _model(cfg) -> GeneratorSet:
    model = cfg["model_file"] or cfg["model"]
    if model is None:
        raise ConfigError("give --model or --model-file")
    n = cfg["n"]
    if n is None:
        for key in ("p", "V", "W", "P", "Q"):
            if cfg.get(key):
                n = len(cfg[key])
                break
    gens = resolve_model(model, n)
    cfg["n"] = gens.n
    return gens


def _header(cfg) -> dict:
    return {k: cfg[k] for k in sorted(cfg) if k != "out"}


def _csv(rows, fields, cfg) -> str:
    buf = io.StringIO()
    buf.write(f"# config: {json.dumps(_header(cfg), sort_keys=True)}\n")
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def _json(obj, cfg) -> str:
    return json.dumps({"config": _header(cfg), **obj}, indent=2, sort_keys=False, default=str) + "\n"


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


# --- subcommands ---------------------------------------------------------------


def cmd_graph(cfg) -> str:
    gens = _model(cfg)
    fmt = cfg["format"] or "json"
    if cfg["p"]:
        p = _pauli(cfg["p"], gens.n)
        comp = graphmod.component_of(p, gens, cfg["weight_cap"])
        body = {
            "n": gens.n,
            "generators": gens.labels,
            "weight_cap": cfg["weight_cap"],
            "component_of": p.label,
            "size": comp.size,
            "members_sample": comp.labels()[:100],
        }
        if cfg["diameters"]:
            body["diameter"] = comp.diameter()
        return _json(body, cfg)
    g = graphmod.build_full(gens, cfg["weight_cap"])
    if fmt == "json":
        return _json(graphmod.to_json_dict(g, cfg["diameters"]), cfg)
    if fmt == "csv":
        return f"# config: {json.dumps(_header(cfg), sort_keys=True)}\n" + graphmod.export(g, "csv", cfg["diameters"])
    g.materialize_adjacency()
    return f"// config: {json.dumps(_header(cfg), sort_keys=True)}\n" + graphmod.export(g, "dot")


def _sampler(cfg) -> metrics.SamplerConfig:
    return metrics.SamplerConfig(cfg["sampler"], cfg["depth"], cfg["coef_low"], cfg["coef_high"])


def _need(cfg, *keys):
    missing = [k for k in keys if not cfg.get(k)]
    if missing:
        raise ConfigError("missing Pauli argument(s): " + ", ".join(f"-{k}" for k in missing))
    return [_pauli(cfg[k], cfg["n"]) for k in keys]


def _mc_fields(est) -> dict:
    if est is None:
        return {"mc_mean": "", "mc_std": "", "trials": 0}
    mean = est.mean
    return {"mc_mean": _fmt(mean if isinstance(mean, float) else complex(mean)), "mc_std": _fmt(est.std), "trials": est.count}


def cmd_metrics(cfg) -> str:
    gens = _model(cfg)
    kind = cfg["kind"]
    trials, seed, threads = cfg["trials"], cfg["seed"], cfg["threads"]
    sampler = _sampler(cfg)
    fmt = cfg["format"] or "json"

    if kind == "frame":
        g = graphmod.build_full(gens)
        body = {"frame_potential": metrics.frame_potential_2(g), "isolated": g.isolated_count,
                "components": g.num_components}
        if trials:
            est = metrics.monte_carlo_frame_potential(gens, trials, sampler, seed, threads)
            body["monte_carlo"] = {"mean": est.mean, "std": est.std, "trials": est.count, "sampler": est.sampler}
        return _json(body, cfg)

    if kind == "symmetries":
        syms = pauli_linear_symmetries(gens)
        return _json({"dla_dimension": lie_closure(gens).dimension, "pauli_symmetries": [s.label for s in syms]}, cfg)

    if kind == "otoc" and cfg["all_components"]:
        (W,) = _need(cfg, "W")
        g = graphmod.build_full(gens)
        reps = [c.strings()[0] for c in g.components()]
        ests = (metrics.monte_carlo_otoc_many(reps, W, gens, trials, sampler, seed, threads)
                if trials else [None] * len(reps))
        rows = []
        for label, (V, est) in enumerate(zip(reps, ests)):
            res = metrics.avg_otoc(V, W, g)
            rows.append({"component_id": label, "V": V.label, "size": res.size_v,
                         "analytic_value": str(res.value), **_mc_fields(est)})
        fields = ["component_id", "V", "size", "analytic_value", "mc_mean", "mc_std", "trials"]
        return _csv(rows, fields, cfg)

    if kind == "otoc":
        V, W = _need(cfg, "V", "W")
        res = metrics.avg_otoc(V, W, gens)
        body = {"V": V.label, "W": W.label, "value": str(res.value), "float": float(res.value),
                "component_size_V": res.size_v, "anticommuting_in_C_V": res.anti_v,
                "component_size_W": res.size_w, "anticommuting_in_C_W": res.anti_w}
        est = metrics.monte_carlo_otoc(V, W, gens, trials, sampler, seed, threads) if trials else None
    elif kind == "four-point":
        P, Q, R, S = _need(cfg, "P", "Q", "R", "S")
        val = metrics.four_point_avg(P, Q, R, S, gens)
        body = {"P": P.label, "Q": Q.label, "R": R.label, "S": S.label, "value": str(val),
                "real": str(val.re), "imag": str(val.im)}
        est = metrics.monte_carlo_four_point(P, Q, R, S, gens, trials, sampler, seed, threads) if trials else None
    elif kind == "spread":
        V, W = _need(cfg, "V", "W")
        val = metrics.spread_expectation(V, W, gens)
        body = {"V": V.label, "W": W.label, "value": str(val), "float": float(val)}
        est = metrics.monte_carlo_spread(V, W, gens, trials, sampler, seed, threads) if trials else None
    else:  # symcheck
        V, W = _need(cfg, "V", "W")
        body = {"V": V.label, "W": W.label, "holds": metrics.symcounting_check(V, W, gens)}
        est = None

    if fmt == "csv":
        row = {**{k: v for k, v in body.items()}, **_mc_fields(est)}
        return _csv([row], list(row), cfg)
    if est is not None:
        mean = est.mean if isinstance(est.mean, float) else [complex(est.mean).real, complex(est.mean).imag]
        body["monte_carlo"] = {"mean": mean, "std": est.std, "trials": est.count, "sampler": est.sampler}
    return _json(body, cfg)


def _hamiltonian(cfg, gens) -> GeneratorSet:
    if cfg["coefficients"] is not None:
        coeffs = cfg["coefficients"]
        if isinstance(coeffs, str):
            try:
                coeffs = [float(c) for c in coeffs.split(",")]
            except ValueError:
                raise ConfigError(f"bad coefficient list {cfg['coefficients']!r}") from None
        return gens.with_coefficients(coeffs)
    if gens.coefficients is not None:
        return gens
    rng = np.random.Generator(np.random.PCG64(cfg["seed"]))
    return dynamics.random_hamiltonian(gens, rng, cfg["coef_low"], cfg["coef_high"])


def cmd_evolve(cfg) -> str:
    gens = _model(cfg)
    (p,) = _need(cfg, "p")
    H = _hamiltonian(cfg, gens)
    cfg["coefficients"] = list(H.coefficients)
    if cfg["steps"] < 1 or cfg["t_max"] < 0:
        raise ConfigError("need steps >= 1 and t-max >= 0")
    times = np.linspace(0.0, cfg["t_max"], cfg["steps"]) if cfg["t_max"] > 0 else np.zeros(1)
    comp, traj = dynamics.evolve_trajectory(p, H, times, cfg["method"])
    chain = dynamics.lanczos(H, p, component=comp)
    G = dynamics.graph_complexity(traj, comp.distances_from(p))
    K = chain.complexity(traj)
    drift = np.abs(np.linalg.norm(traj, axis=1) - 1.0)
    rows = [{"t": _fmt(float(t)), "graph_complexity": _fmt(float(g)), "krylov_complexity": _fmt(float(k)),
             "norm_drift": _fmt(float(dr))} for t, g, k, dr in zip(times, G, K, drift)]
    return _csv(rows, ["t", "graph_complexity", "krylov_complexity", "norm_drift"], cfg)


def cmd_krylov(cfg) -> str:
    gens = _model(cfg)
    (p,) = _need(cfg, "p")
    H = _hamiltonian(cfg, gens)
    cfg["coefficients"] = list(H.coefficients)
    chain = dynamics.lanczos(H, p)
    rows = [{"n": i + 1, "b_n": _fmt(float(b))} for i, b in enumerate(chain.b)]
    return _csv(rows, ["n", "b_n"], cfg)


def cmd_matchgate(cfg) -> str:
    n = cfg["n"]
    if n is None or n < 1:
        raise ConfigError("matchgate table needs --n >= 1")
    rows = [{k: str(v) for k, v in row.items()} for row in matchgate.table(n)]
    return _csv(rows, ["kappa", "n", "size", "diameter", "corner_avg", "all_pairs_avg"], cfg)


COMMANDS = {
    "graph": cmd_graph,
    "metrics": cmd_metrics,
    "evolve": cmd_evolve,
    "krylov": cmd_krylov,
    "matchgate": cmd_matchgate,
}


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = resolve_config(ns)
        text = COMMANDS[cfg["command"]](cfg)
    except ResourceLimitError as exc:
        print(f"pauligraph: resource cap {exc.cap} exceeded: {exc}", file=sys.stderr)
        return 3
    except (ContractError, ValueError) as exc:
        print(f"pauligraph: {exc}", file=sys.stderr)
        return 2
    if cfg["out"]:
        Path(cfg["out"]).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
