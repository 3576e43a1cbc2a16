"""Command-line front end: ``dtmsgkp <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage or parameter error.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys

import numpy as np

from . import decoder as dec
from .codes import CodeSpec, Family, build_code, canonical_fixture_name, catalog, fixture
from .codes import verify_fixture_relation
from .errors import DtmsError, VerificationError
from .lattice import code_distance, default_cutoff, gram
from .optimize import distance_grid, optimize_distance
from .serialize import dumps, lattice_to_json

SEED_ENV = "DTMSGKP_SEED"
EXIT_OK, EXIT_VERIFY, EXIT_USAGE = 0, 1, 2

# Fallbacks used when neither a flag nor the config file sets a value.
DEFAULTS = {
    "seed": 0, "threads": 1, "output": None, "format": None,
    "family": "dtms", "n": 2, "d": 2, "gain": None, "phi": 0.0, "cutoff": None,
    "fixture": None, "mode": "css", "grid_gain": 60, "grid_phase": 45, "g_max": 4.0,
    "contour": None, "sigma_list": "0.1,0.2,0.3", "trials": 100000, "samples": None,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return v


def _sigma_list(text):
    try:
        vals = [float(x) for x in str(text).replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad sigma list {text!r}")
    if not vals or any(not (v > 0 and math.isfinite(v)) for v in vals):
        raise argparse.ArgumentTypeError("sigma values must be positive")
    return vals


def _gain(text):
    if str(text).lower() == "auto":
        return "auto"
    v = float(text)
    if not v >= 1:
        raise argparse.ArgumentTypeError(f"gain must be >= 1 or 'auto', got {text}")
    return v


CONVERTERS = {
    "seed": _nonneg_int, "threads": _positive_int, "n": _positive_int, "d": _positive_int,
    "gain": _gain, "phi": float, "cutoff": _positive_int, "grid_gain": _positive_int,
    "grid_phase": _positive_int, "g_max": float, "sigma_list": _sigma_list,
    "trials": _positive_int, "samples": _positive_int,
}


def _add_globals(p, suppress):
    kw = {"default": argparse.SUPPRESS} if suppress else {"default": None}
    p.add_argument("--seed", type=_nonneg_int, **kw,
                   help=f"RNG seed (default: ${SEED_ENV} or 0)")
    p.add_argument("--threads", type=_positive_int, **kw, help="worker threads")
    p.add_argument("--output", "-o", **kw, help="write to this file instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), **kw)
    p.add_argument("--config", **kw, help="flat 'key = value' file; flags override it")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dtmsgkp", description="dtms GKP codes: distances, optimization, decoding")
    _add_globals(p, suppress=False)
    common = _Parser(add_help=False)
    _add_globals(common, suppress=True)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    c = sub.add_parser("codes", parents=[common], help="list or show codes")
    c.add_argument("action", choices=("list", "show"))
    c.add_argument("name", nargs="?")
    c.add_argument("--d", type=_positive_int, default=None, help="square-qudit dimension")

    def code_flags(q, two_qubit_ok=True):
        q.add_argument("--family", choices=("dtms", "dtms2") if two_qubit_ok else ("dtms",),
                       default=None)
        q.add_argument("--n", type=_positive_int, default=None, help="number of modes")
        q.add_argument("--d", type=_positive_int, default=None, help="data qudit dimension")
        q.add_argument("--phi", type=float, default=None, help="beamsplitter phase")

    q = sub.add_parser("distance", parents=[common], help="code distance of one code")
    code_flags(q)
    q.add_argument("--gain", type=_gain, default=None)
    q.add_argument("--cutoff", type=_positive_int, default=None)
    q.add_argument("--fixture", default=None)

    q = sub.add_parser("optimize", parents=[common], help="maximize the distance")
    code_flags(q)
    q.add_argument("--mode", choices=("css", "balanced"), default=None)
    q.add_argument("--grid-gain", dest="grid_gain", type=_positive_int, default=None)
    q.add_argument("--grid-phase", dest="grid_phase", type=_positive_int, default=None)
    q.add_argument("--g-max", dest="g_max", type=float, default=None)
    q.add_argument("--cutoff", type=_positive_int, default=None)
    q.add_argument("--contour", default=None, help="write the (G, phi) distance grid CSV here")

    q = sub.add_parser("simulate", parents=[common], help="Monte Carlo logical error rates")
    code_flags(q)
    q.add_argument("--sigma-list", dest="sigma_list", type=_sigma_list, default=None)
    q.add_argument("--trials", type=_positive_int, default=None)
    q.add_argument("--gain", type=_gain, default=None, help="'auto' or a value")

    q = sub.add_parser("o2o", parents=[common], help="oscillator-level output variance")
    q.add_argument("--n", type=_positive_int, default=None)
    q.add_argument("--phi", type=float, default=None)
    q.add_argument("--sigma-list", dest="sigma_list", type=_sigma_list, default=None)
    q.add_argument("--trials", type=_positive_int, default=None)
    q.add_argument("--samples", type=_positive_int, default=None,
                   help="lattice-sum samples (default: same as trials)")
    q.add_argument("--gain", type=_gain, default=None, help="'auto' or a value")
    return p


def read_config(path) -> dict:
    """Parse flat ``key = value`` lines; '#' starts a comment, dashes become underscores."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            key, val = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = val
    return out


def resolve(args) -> argparse.Namespace:
    """Merge flags over config file over environment over built-in defaults."""
    ns = vars(args).copy()
    cfg = read_config(ns["config"]) if ns.get("config") else {}
    for key, val in cfg.items():
        if key not in DEFAULTS and key != "config":
            raise UsageError(f"unknown config key {key!r}")
        if ns.get(key) is None:
            conv = CONVERTERS.get(key)
            try:
                ns[key] = conv(val) if conv else val
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise UsageError(f"config key {key!r}: {exc}")
    if ns.get("seed") is None and os.environ.get(SEED_ENV):
        try:
            ns["seed"] = _nonneg_int(os.environ[SEED_ENV])
        except (ValueError, argparse.ArgumentTypeError):
            raise UsageError(f"${SEED_ENV} must be a non-negative integer")
    for key, val in DEFAULTS.items():
        if ns.get(key) is None:
            ns[key] = val
    if isinstance(ns["sigma_list"], str):
        ns["sigma_list"] = _sigma_list(ns["sigma_list"])
    return argparse.Namespace(**ns)


# ---------------------------------------------------------------------------
# output


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".12g") if math.isfinite(x) else ""
    return str(x)


def to_csv(rows, columns=None) -> str:
    rows = list(rows)
    if columns is None:
        columns = list(rows[0]) if rows else []
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(c, "")) for c in columns])
    return buf.getvalue()


def _clean(obj):
    # JSON has no NaN; report missing values as null
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def _emit(ns, text):
    if ns.output:
        with open(ns.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _render(ns, obj, rows, default="json"):
    fmt = ns.format or default
    return dumps(_clean(obj)) if fmt == "json" else to_csv(rows)


# ---------------------------------------------------------------------------
# commands


def _spec_from(ns) -> CodeSpec:
    fam = Family(ns.family)
    gain = ns.gain
    if gain == "auto" or gain is None:
        if fam is Family.DTMS:
            gain = dec.gain_lownoise(ns.n, ns.d) if ns.n > 1 else 1.0
        else:
            gain = dec.gain_two_qubit(ns.n)
    if fam is Family.DTMS:
        return CodeSpec.dtms(ns.n, ns.d, float(gain), ns.phi)
    if ns.d != 2:
        raise UsageError("two-qubit codes have d = 2")
    return CodeSpec.dtms2(ns.n, float(gain), ns.phi)


def cmd_codes(ns) -> int:
    if ns.action == "list":
        rows = catalog()
        cols = ["name", "kind", "n_modes", "known_distance", "parameters", "description"]
        _emit(ns, _render(ns, rows, [{c: r.get(c, "") for c in cols} for r in rows]))
        return EXIT_OK
    if not ns.name:
        raise UsageError("codes show needs a name")
    name = canonical_fixture_name(ns.name)
    fx = fixture(name, ns.d or 3)
    A = gram(fx.lattice)
    rep = code_distance(fx.lattice, fx.logicals, list(fx.local_dims),
                        cutoff=default_cutoff(fx.n_modes), verify=True)
    relation = "n/a"
    if fx.symplectic is not None:
        try:
            relation = "PASS" if verify_fixture_relation(name) else "FAIL"
        except VerificationError:
            relation = "FAIL"
    obj = {
        "name": fx.name, "description": fx.description, "n_modes": fx.n_modes,
        "local_dims": list(fx.local_dims), "lattice": lattice_to_json(fx.lattice),
        "dual": lattice_to_json(fx.dual), "gram": A.tolist(),
        "abs_det_gram": int(round(abs(np.linalg.det(A)))),
        "known_distance": float(fx.known_distance), "distance": rep.to_dict(),
        "verification_relation": relation,
    }
    row = {"name": fx.name, "n_modes": fx.n_modes, "abs_det_gram": obj["abs_det_gram"],
           "known_distance": fx.known_distance, "distance": rep.code_distance,
           "verification_relation": relation}
    _emit(ns, _render(ns, obj, [row]))
    return EXIT_OK if relation != "FAIL" else EXIT_VERIFY


def cmd_distance(ns) -> int:
    if ns.fixture:
        fx = fixture(ns.fixture, ns.d if ns.d != 2 else 3)
        cutoff = ns.cutoff or default_cutoff(fx.n_modes)
        rep = code_distance(fx.lattice, fx.logicals, list(fx.local_dims), cutoff=cutoff)
        head = {"fixture": fx.name}
    else:
        spec = _spec_from(ns)
        rep = code_distance(build_code(spec), cutoff=ns.cutoff)
        head = {"spec": spec.to_dict()}
    obj = {**head, **rep.to_dict()}
    row = {"code_distance": rep.code_distance, "cutoff": rep.cutoff,
           "verified": rep.verified_at_cutoff_plus_one, "worst_logical": rep.worst_logical}
    row.update({f"D_{k}": v for k, v in sorted(rep.pauli_distances.items())})
    _emit(ns, _render(ns, obj, [row]))
    return EXIT_OK if rep.verified_at_cutoff_plus_one else EXIT_VERIFY


def cmd_optimize(ns) -> int:
    if ns.family == "dtms2" and ns.d != 2:
        raise UsageError("two-qubit codes have d = 2")
    res = optimize_distance(ns.family, ns.n, ns.d, ns.mode, grid=(ns.grid_gain, ns.grid_phase),
                            g_max=ns.g_max, cutoff=ns.cutoff)
    if ns.contour:
        gains = np.linspace(1.0, ns.g_max, ns.grid_gain)
        phases = np.linspace(0.0, np.pi / 2, ns.grid_phase + 1)   # both ends, to expose the period
        table = distance_grid(ns.family, ns.n, ns.d, gains, phases, ns.cutoff)
        rows = [{"gain": G, "phase": p, "distance": table[i, j]}
                for i, G in enumerate(gains) for j, p in enumerate(phases)]
        with open(ns.contour, "w", encoding="utf-8", newline="") as fh:
            fh.write(to_csv(rows, ["gain", "phase", "distance"]))
    obj = res.to_dict()
    row = {"family": res.family, "N": res.n_modes, "d": res.d, "mode": res.mode,
           "G": res.gain, "phi": res.best_params["phase"], "distance": res.best_distance,
           "evaluations": res.evaluations, "verified": res.verified}
    _emit(ns, _render(ns, obj, [row]))
    return EXIT_OK if res.verified else EXIT_VERIFY


SIM_COLUMNS = ["family", "N", "k", "d", "G", "phi", "sigma", "trials", "px", "px_lo", "px_hi",
               "pz", "py", "pjoint", "sigma_out_sq", "seed"]


def cmd_simulate(ns) -> int:
    spec = _spec_from(ns)
    reports = [dec.simulate_error_rate(spec, s, ns.trials, ns.seed, ns.threads)
               for s in ns.sigma_list]
    rows = [r.csv_row() for r in reports]
    obj = {"spec": spec.to_dict(), "results": [r.to_dict() for r in reports]}
    _emit(ns, dumps(_clean(obj)) if ns.format == "json" else to_csv(rows, SIM_COLUMNS))
    return EXIT_OK


O2O_COLUMNS = ["N", "G", "phi", "sigma", "trials", "sigma_out_sq", "stderr", "lo", "hi",
               "sigma_out_over_sigma", "lattice_sum", "lattice_sum_stderr",
               "asymptotic_sigma_out_sq", "lower_bound", "seed"]


def cmd_o2o(ns) -> int:
    if ns.n < 2:
        raise UsageError("o2o codes need --n >= 2")
    rows = []
    for s in ns.sigma_list:
        if ns.gain == "auto" or ns.gain is None:
            # the closed form drops below 1 at large noise, where no squeezing is best
            G = max(1.0, dec.asymptotic_o2o(ns.n, s)[0])
        else:
            G = float(ns.gain)
        spec = CodeSpec.dtms(ns.n, 2, G, ns.phi)
        mc = dec.simulate_o2o_variance(spec, s, ns.trials, ns.seed, ns.threads)
        ls = dec.o2o_variance_lattice_sum(spec, s, ns.samples or ns.trials, ns.seed + 1,
                                          ns.threads)
        lo, hi = mc.interval
        rows.append({
            "N": ns.n, "G": G, "phi": ns.phi, "sigma": s, "trials": ns.trials,
            "sigma_out_sq": mc.value, "stderr": mc.stderr, "lo": lo, "hi": hi,
            "sigma_out_over_sigma": math.sqrt(mc.value) / s,
            "lattice_sum": ls.value, "lattice_sum_stderr": ls.stderr,
            "asymptotic_sigma_out_sq": dec.asymptotic_o2o(ns.n, s)[1],
            "lower_bound": s**2 / (2 * G - 1), "seed": ns.seed,
        })
    _emit(ns, dumps(_clean({"results": rows})) if ns.format == "json"
          else to_csv(rows, O2O_COLUMNS))
    return EXIT_OK


COMMANDS = {"codes": cmd_codes, "distance": cmd_distance, "optimize": cmd_optimize,
            "simulate": cmd_simulate, "o2o": cmd_o2o}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("missing command")
        ns = resolve(args)
        return COMMANDS[ns.command](ns)
    except UsageError as exc:
        print(f"dtmsgkp: error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except VerificationError as exc:
        print(f"dtmsgkp: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (DtmsError, ValueError, IndexError) as exc:
        print(f"dtmsgkp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"dtmsgkp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
