"""Command-line interface.

Every command reads one nested configuration (YAML or JSON), applies flag
overrides, validates everything, then runs. Outputs go to ``--out`` as CSV
tables plus a diagnostics JSON embedding the fully resolved configuration
(or a single JSON with ``--format json``). Feeding that diagnostics file
back through ``--config`` reproduces the run.

Exit status: 0 success, 2 numerical failure, 3 inconclusive, 64 usage,
66 missing input.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import os
import re
import sys

import numpy as np
import yaml

from . import functions
from .additive import split_additive
from .errors import NumericalFailure
from .extrema import analytic_bm_factors, default_x_grid, extrema_distributions, wh_factors
from .grid import Grid, dawson_reference, dawson_via_cardinal
from .levy import KillingTime, LevyModel, char_fn_exp_time, char_fn_geom_time
from .montecarlo import SimConfig, ks_distance, simulate_extrema
from .multiplicative import factorize_multiplicative
from .posdef import Verdict, pd_report

EXIT_OK, EXIT_FAILURE, EXIT_INCONCLUSIVE, EXIT_USAGE, EXIT_NOINPUT = 0, 2, 3, 64, 66

COMMANDS = ("check-pd", "decompose", "factorize", "extrema", "simulate", "dawson")

DEFAULTS = {
    "grid": {"h": 0.25, "n_half": 512},
    "function": {"name": "gaussian", "params": {}},
    "model": {"mu": 0.0, "sigma": 1.0, "jumps": None},
    "killing": {"kind": "exponential", "q": 1.0},
    "tolerances": {"tol_residual": 1e-8, "tol_pd": None, "tol_mass": 0.02},
    "c": 0.0,
    "epsilon": 0.0,
    "seed": 0,
    "output": {"dir": "out", "format": "csv"},
    "pd": {"random_point_sets": 8, "set_size": 32},
    "split": {"method": "spectral"},
    "factorize": {"method": "auto", "normalize_at_zero": False},
    "extrema": {"reference": "roots", "x_min": None, "x_max": None, "n_x": 2001},
    "simulate": {
        "n_paths": 100000,
        "dt": 0.001,
        "n_workers": 1,
        "monitoring": "bridge",
        "chunk_paths": 4096,
        "cdf_file": None,
    },
    "dawson": {"z": [], "h": 0.1, "n_terms": 400},
}

# sections whose contents are free-form and not checked key by key
_OPEN = {("function", "params"), ("model", "jumps")}


class _Loader(yaml.SafeLoader):
    pass


# YAML 1.1 reads 1e-08 (no dot) as a string; accept every float that JSON writes
_Loader.add_implicit_resolver(
    "tag:yaml.org,2002:float",
    re.compile(r"^[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?$|^[-+]?\.(?:inf|Inf|INF)$|^\.(?:nan|NaN|NAN)$"),
    list("-+0123456789."),
)


class UsageError(Exception):
    pass


class MissingInput(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _merge(base, override, path=()):
    out = copy.deepcopy(base)
    for key, val in override.items():
        if key not in base:
            where = ".".join(path + (key,))
            raise UsageError(f"unknown config key {where!r}")
        if isinstance(base[key], dict) and path + (key,) not in _OPEN:
            if not isinstance(val, dict):
                raise UsageError(f"config section {'.'.join(path + (key,))!r} must be a mapping")
            out[key] = _merge(base[key], val, path + (key,))
        else:
            out[key] = copy.deepcopy(val)
    return out


def load_config(path: str | None) -> dict:
    if path is None:
        return copy.deepcopy(DEFAULTS)
    if not os.path.isfile(path):
        raise MissingInput(f"config file not found: {path}")
    with open(path, encoding="utf-8") as fh:
        try:
            doc = yaml.load(fh, Loader=_Loader)
        except yaml.YAMLError as exc:
            raise UsageError(f"malformed config {path}: {exc}") from None
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise UsageError("config must be a mapping")
    if "resolved_config" in doc:
        doc = doc["resolved_config"]
    return _merge(DEFAULTS, doc)


def _apply_flags(cfg: dict, args) -> dict:
    if args.out is not None:
        cfg["output"]["dir"] = args.out
    if args.format is not None:
        cfg["output"]["format"] = args.format
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.epsilon is not None:
        cfg["epsilon"] = args.epsilon
    if args.grid_h is not None:
        cfg["grid"]["h"] = args.grid_h
    if args.grid_n is not None:
        cfg["grid"]["n_half"] = args.grid_n
    if getattr(args, "z", None):
        cfg["dawson"]["z"] = list(args.z)
    if getattr(args, "step", None) is not None:
        cfg["dawson"]["h"] = args.step
    if getattr(args, "n_terms", None) is not None:
        cfg["dawson"]["n_terms"] = args.n_terms
    if getattr(args, "cdf_file", None) is not None:
        cfg["simulate"]["cdf_file"] = args.cdf_file
    return cfg


def _parse_z(v) -> complex:
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if isinstance(v, str):
        return complex(v.replace(" ", "").replace("i", "j"))
    raise ValueError(f"cannot read {v!r} as a complex number")


def _validate(cfg: dict, command: str) -> dict:
    """Build every object the command needs; any ValueError becomes a usage error."""
    try:
        built = {"grid": Grid(float(cfg["grid"]["h"]), int(cfg["grid"]["n_half"]))}
        if cfg["output"]["format"] not in ("csv", "json"):
            raise ValueError("output.format must be csv or json")
        if float(cfg["epsilon"]) < 0:
            raise ValueError("epsilon must be >= 0")
        if int(cfg["seed"]) < 0:
            raise ValueError("seed must be >= 0")
        tol = cfg["tolerances"]
        for key in ("tol_residual", "tol_mass"):
            if not float(tol[key]) > 0:
                raise ValueError(f"tolerances.{key} must be positive")
        if tol["tol_pd"] is not None and not float(tol["tol_pd"]) > 0:
            raise ValueError("tolerances.tol_pd must be positive")
        built["model"] = LevyModel.from_dict(cfg["model"])
        built["killing"] = KillingTime(cfg["killing"]["kind"], float(cfg["killing"]["q"]))
        name = cfg["function"]["name"]
        if command in ("check-pd", "decompose", "factorize"):
            if name != "killed":
                params = cfg["function"]["params"] or {}
                if not isinstance(params, dict):
                    raise ValueError("function.params must be a mapping")
                fn = functions.make(name, **params)
                built["function"] = built["grid"].sample(fn)
            elif built["killing"].kind == "exponential":
                built["function"] = char_fn_exp_time(built["model"], built["killing"].q, built["grid"])
            else:
                built["function"] = char_fn_geom_time(built["model"], built["killing"].q, grid=built["grid"])
        if cfg["split"]["method"] not in ("spectral", "cardinal"):
            raise ValueError("split.method must be spectral or cardinal")
        if cfg["factorize"]["method"] not in ("auto", "log", "wiener_hopf"):
            raise ValueError("factorize.method must be auto, log or wiener_hopf")
        if command in ("extrema", "simulate") or (command == "factorize" and _uses_wh(cfg)):
            if command != "simulate" and built["killing"].kind != "exponential":
                raise ValueError(f"{command} needs exponential killing")
            if command != "simulate" and not built["model"].sigma > 0:
                raise ValueError("Wiener-Hopf factors need sigma > 0")
        if command == "extrema":
            ex = cfg["extrema"]
            if (ex["x_min"] is None) != (ex["x_max"] is None):
                raise ValueError("give both extrema.x_min and extrema.x_max or neither")
            if ex["x_min"] is not None and not float(ex["x_min"]) < float(ex["x_max"]):
                raise ValueError("extrema.x_min must be below extrema.x_max")
            if int(ex["n_x"]) < 2:
                raise ValueError("extrema.n_x must be >= 2")
        if command == "simulate":
            sim = cfg["simulate"]
            built["sim"] = SimConfig(
                built["model"], built["killing"], int(sim["n_paths"]), float(sim["dt"]), int(cfg["seed"]),
                int(sim["n_workers"]), sim["monitoring"], int(sim["chunk_paths"]),
            )
        if command == "dawson":
            zs = [_parse_z(v) for v in cfg["dawson"]["z"]]
            if not zs:
                raise ValueError("dawson needs at least one z (config dawson.z or --z)")
            if not (float(cfg["dawson"]["h"]) > 0 and int(cfg["dawson"]["n_terms"]) >= 1):
                raise ValueError("dawson needs h > 0 and n_terms >= 1")
            built["z"] = zs
            cfg["dawson"]["z"] = [[z.real, z.imag] for z in zs]
    except (ValueError, TypeError, KeyError) as exc:
        raise UsageError(str(exc).strip("'\"")) from None
    return built


def _uses_wh(cfg):
    method = cfg["factorize"]["method"]
    if method == "auto":
        return cfg["function"]["name"] == "killed" and cfg["killing"]["kind"] == "exponential"
    return method == "wiener_hopf"


def _fmt(v) -> str:
    return "%.17g" % v


def _clean(obj):
    # JSON-safe: NaN/inf become null, numpy scalars become Python numbers
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    return obj


class _Writer:
    def __init__(self, cfg: dict, command: str):
        self.dir = cfg["output"]["dir"]
        self.format = cfg["output"]["format"]
        self.cfg = cfg
        self.stem = command.replace("-", "_")
        os.makedirs(self.dir, exist_ok=True)

    def _path(self, name):
        return os.path.join(self.dir, name)

    def emit(self, table: dict | None, diagnostics: dict, status: str = "ok") -> list[str]:
        doc = {"command": self.stem, "status": status, "diagnostics": diagnostics, "resolved_config": self.cfg}
        written = []
        if self.format == "json" or table is None:
            if table is not None:
                doc["table"] = {k: np.asarray(v).tolist() for k, v in table.items()}
            path = self._path(f"{self.stem}.json")
        else:
            csv_path = self._path(f"{self.stem}.csv")
            with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(",".join(table) + "\n")
                for row in zip(*table.values()):
                    fh.write(",".join(_fmt(v) for v in row) + "\n")
            written.append(csv_path)
            path = self._path(f"{self.stem}_diagnostics.json")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(_clean(doc), fh, indent=2, sort_keys=True)
            fh.write("\n")
        written.append(path)
        return written


def _complex_columns(prefix, values):
    v = np.asarray(values)
    return {f"re_{prefix}": v.real, f"im_{prefix}": v.imag}


def cmd_check_pd(cfg, built, writer):
    p = cfg["pd"]
    rep = pd_report(
        built["function"], int(p["random_point_sets"]), int(p["set_size"]), cfg["tolerances"]["tol_pd"], int(cfg["seed"])
    )
    writer.emit(None, {"report": rep.to_dict()}, rep.verdict.value)
    print(f"verdict: {rep.verdict.value} (min eigenvalue {rep.min_bochner_eigenvalue:.3e}, negative mass {rep.negative_spectral_mass:.3e})")
    return {Verdict.PD: EXIT_OK, Verdict.NOT_PD: EXIT_FAILURE, Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE}[rep.verdict]


def cmd_decompose(cfg, built, writer):
    f = built["function"]
    split = split_additive(f, cfg["split"]["method"], float(cfg["tolerances"]["tol_residual"]))
    table = {"lambda": f.x, **_complex_columns("f", f.values), **_complex_columns("fplus", split.plus), **_complex_columns("fminus", split.minus)}
    diag = {
        "method": split.method,
        "sum_residual": split.sum_residual,
        "wrongside_energy_plus": split.wrongside_energy_plus,
        "wrongside_energy_minus": split.wrongside_energy_minus,
        "error_bound": split.error_bound,
    }
    writer.emit(table, diag)
    print(f"sum residual {split.sum_residual:.3e}")
    return EXIT_OK


def cmd_factorize(cfg, built, writer):
    g = built["grid"]
    tol = cfg["tolerances"]
    if _uses_wh(cfg):
        model, q = built["model"], built["killing"].q
        wh = wh_factors(model, q, float(cfg["c"]), g, cfg["extrema"]["reference"], pd_tol=tol["tol_pd"])
        plus, minus, gp, gm = wh.psi_q_plus, wh.psi_q_minus, wh.g_plus, wh.g_minus
        diag = {
            "method": "wiener_hopf",
            "product_residual": wh.product_residual,
            "c_used": wh.c_used,
            "rate_plus": wh.rate_plus,
            "rate_minus": wh.rate_minus,
            "pd_plus": wh.pd_plus.to_dict(),
            "pd_minus": wh.pd_minus.to_dict(),
            **wh.diagnostics,
        }
        if model.jumps is None:
            bp, bm = analytic_bm_factors(model.mu, model.sigma, q)
            lam = g.points
            diag["oracle_error_plus"] = float(np.abs(plus.values - bp / (bp - 1j * lam)).max())
            diag["oracle_error_minus"] = float(np.abs(minus.values - bm / (bm + 1j * lam)).max())
    else:
        res = factorize_multiplicative(
            built["function"],
            tol=float(tol["tol_residual"]),
            epsilon=float(cfg["epsilon"]),
            normalize_at_zero=bool(cfg["factorize"]["normalize_at_zero"]),
            method=cfg["split"]["method"],
            retry_epsilon=None,
        )
        plus, minus, gp, gm = res.phi_plus, res.phi_minus, res.g_plus, res.g_minus
        diag = {
            "method": "log",
            "product_residual": res.product_residual,
            "const_lambda": [res.const_lambda.real, res.const_lambda.imag],
            "epsilon_used": res.epsilon_used,
            "normalization_factor": [res.normalization_factor.real, res.normalization_factor.imag],
            **res.diagnostics,
        }
    table = {
        "lambda": g.points,
        **_complex_columns("phi_plus", plus.values),
        **_complex_columns("phi_minus", minus.values),
        **_complex_columns("g_plus", gp.values),
        **_complex_columns("g_minus", gm.values),
    }
    writer.emit(table, diag)
    print(f"product residual {diag['product_residual']:.3e}")
    return EXIT_OK


def cmd_extrema(cfg, built, writer):
    tol = cfg["tolerances"]
    ex = cfg["extrema"]
    wh = wh_factors(built["model"], built["killing"].q, float(cfg["c"]), built["grid"], ex["reference"], pd_tol=tol["tol_pd"])
    if ex["x_min"] is None:
        x = default_x_grid(wh, int(ex["n_x"]))
    else:
        x = np.linspace(float(ex["x_min"]), float(ex["x_max"]), int(ex["n_x"]))
    d = extrema_distributions(wh, x, tol_mass=float(tol["tol_mass"]))
    table = {"x": d.x_grid, "pdf_sup": d.pdf_sup, "cdf_sup": d.cdf_sup, "pdf_inf": d.pdf_inf, "cdf_inf": d.cdf_inf}
    diag = {
        "mass_sup": d.mass_sup,
        "mass_inf": d.mass_inf,
        "negativity_sup": d.negativity_sup,
        "negativity_inf": d.negativity_inf,
        "product_residual": wh.product_residual,
        "c_used": wh.c_used,
        "rate_plus": wh.rate_plus,
        "rate_minus": wh.rate_minus,
        "pd_plus": wh.pd_plus.to_dict(),
        "pd_minus": wh.pd_minus.to_dict(),
        **wh.diagnostics,
    }
    writer.emit(table, diag)
    print(f"mass sup {d.mass_sup:.6f}, mass inf {d.mass_inf:.6f}")
    return EXIT_OK


def _read_cdf_file(path):
    data = np.genfromtxt(path, delimiter=",", names=True)
    names = data.dtype.names or ()
    for col in ("x", "cdf_sup", "cdf_inf"):
        if col not in names:
            raise UsageError(f"cdf file {path} lacks a {col!r} column")
    x = np.atleast_1d(data["x"])

    def interp(col):
        y = np.atleast_1d(data[col])
        return lambda t: np.interp(t, x, y, left=0.0, right=float(y[-1]))

    return interp("cdf_sup"), interp("cdf_inf")


def cmd_simulate(cfg, built, writer):
    cdf_file = cfg["simulate"]["cdf_file"]
    if cdf_file is not None and not os.path.isfile(cdf_file):
        raise MissingInput(f"cdf file not found: {cdf_file}")
    sim = built["sim"]
    M, I = simulate_extrema(sim)
    n = M.n
    table = {"rank": np.arange(1, n + 1), "ecdf": np.arange(1, n + 1) / n, "sup": M.sorted_samples, "inf": I.sorted_samples}
    diag = {"n_paths": n, **sim.diagnostics()}
    if cdf_file is not None:
        cs, ci = _read_cdf_file(cdf_file)
        diag["ks_sup"] = ks_distance(M, cs)
        diag["ks_inf"] = ks_distance(I, ci)
    writer.emit(table, diag)
    msg = f"simulated {n} paths"
    if "ks_sup" in diag:
        msg += f"; KS sup {diag['ks_sup']:.4f}, KS inf {diag['ks_inf']:.4f}"
    print(msg)
    return EXIT_OK


def cmd_dawson(cfg, built, writer):
    h = float(cfg["dawson"]["h"])
    n_terms = int(cfg["dawson"]["n_terms"])
    zs = built["z"]
    series = np.array([dawson_via_cardinal(z, h, n_terms) for z in zs])
    ref = np.array([dawson_reference(z) for z in zs])
    diff = np.abs(series - ref)
    table = {
        "re_z": [z.real for z in zs],
        "im_z": [z.imag for z in zs],
        **_complex_columns("series", series),
        **_complex_columns("reference", ref),
        "abs_diff": diff,
    }
    writer.emit(table, {"max_abs_diff": float(diff.max())})
    print(f"max |series - reference| = {diff.max():.3e}")
    return EXIT_OK


_HANDLERS = {
    "check-pd": cmd_check_pd,
    "decompose": cmd_decompose,
    "factorize": cmd_factorize,
    "extrema": cmd_extrema,
    "simulate": cmd_simulate,
    "dawson": cmd_dawson,
}

_HELP = {
    "check-pd": "decide positive definiteness of a sampled function",
    "decompose": "additive split f = f+ + f-",
    "factorize": "multiplicative split f = phi+ phi-",
    "extrema": "laws of the supremum and infimum at an exponential time",
    "simulate": "Monte-Carlo extrema, optionally scored against a cdf file",
    "dawson": "complex Dawson integral from its cardinal series",
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="YAML or JSON configuration file")
    common.add_argument("--out", metavar="DIR", help="output directory (default: out)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--seed", type=int)
    common.add_argument("--epsilon", type=float, help="constant added before taking logarithms")
    common.add_argument("--grid-h", type=float, dest="grid_h", help="grid spacing h")
    common.add_argument("--grid-n", type=int, dest="grid_n", help="grid half-width n_half")

    parser = _Parser(prog="wienerhopf", description="Positive definite Wiener-Hopf factorization on the real line.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common], help=_HELP[name], description=_HELP[name])
        if name == "dawson":
            p.add_argument("--z", action="append", help="evaluation point, e.g. 1+0.5j (repeatable)")
            p.add_argument("--step", type=float, help="series step h (default 0.1)")
            p.add_argument("--n-terms", type=int, dest="n_terms", help="series half-length (default 400)")
        if name == "simulate":
            p.add_argument("--cdf-file", dest="cdf_file", help="CSV with x, cdf_sup, cdf_inf columns to score against")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing command; choose from " + ", ".join(COMMANDS))
        cfg = _apply_flags(load_config(args.config), args)
        built = _validate(cfg, args.command)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MissingInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOINPUT

    writer = _Writer(cfg, args.command)
    try:
        return _HANDLERS[args.command](cfg, built, writer)
    except MissingInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOINPUT
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalFailure as exc:
        writer.emit(None, {"error": str(exc), **exc.diagnostics}, "failed")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
