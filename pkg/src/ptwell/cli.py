"""Command-line front end.

Subcommands run the solvers and emit structured reports (json or csv) or
sampled curve data for external plotting. Output is deterministic:
identical configuration produces byte-identical bytes, with fixed field
ordering and 12-significant-digit numeric formatting (scientific notation
from |x| >= 1e6 on).

Exit codes: 0 success, 2 invalid flags or configuration, 3 solver
failure, 4 i/o failure. The PTWELL_LOG environment variable (error, info,
debug) sets diagnostic verbosity on stderr.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .constraint import hyperbola_asymptote, reflected_branch, xi_branch
from .errors import PTWellError, SolverError
from .matching import ThetaCurveSpec, envelope_asymptote, theta_asymptote, theta_curve
from .model import ModelParams, WaveVector, BoundState
from .spectrum import (
    EnergyWindow,
    SpectrumReport,
    complex_spectrum,
    count_real,
    critical_couplings,
    real_spectrum_bracket,
    real_spectrum_lattice,
    _locus_points,
)

__all__ = ["RunConfig", "main", "run", "report_to_json", "report_from_json"]

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# deterministic numeric formatting

def _fmt(x: float) -> str:
    """12 significant digits, shortest form, scientific from |x| >= 1e6."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"non-finite value in output: {x}")
    if x == 0.0:
        return "0"
    if abs(x) >= 1e6:
        mant, exp = f"{x:.11e}".split("e")
        mant = mant.rstrip("0").rstrip(".")
        return f"{mant}e{exp}"
    s = f"{x:.12g}"
    return s


def _json_value(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return _fmt(float(v))
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, dict):
        return "{" + ",".join(f"{json.dumps(str(k))}:{_json_value(u)}" for k, u in v.items()) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ",".join(_json_value(u) for u in v) + "]"
    raise TypeError(f"cannot serialize {type(v)!r}")


def _emit_json(payload: dict) -> str:
    return _json_value(payload) + "\n"


# ---------------------------------------------------------------------------
# report serialization

def _report_payload(report: SpectrumReport) -> dict:
    levels = []
    for i, st in enumerate(report.real_levels):
        levels.append(
            {
                "n": i,
                "s": st.wave.s if st.wave is not None else None,
                "t": st.wave.t if st.wave is not None else None,
                "E": float(st.energy.real) if isinstance(st.energy, complex) else float(st.energy),
                "A": st.A,
            }
        )
    pairs = [{"re": e.real, "im": e.imag} for e in report.complex_pairs]
    win = None
    if report.window is not None:
        w = report.window
        win = {"re_min": w.re_min, "re_max": w.re_max, "im_min": w.im_min, "im_max": w.im_max}
    diag = {k: report.diagnostics[k] for k in sorted(report.diagnostics)}
    return {
        "params": {"Z": report.params.Z, "omega": report.params.omega},
        "real_levels": levels,
        "complex_pairs": pairs,
        "window": win,
        "diagnostics": diag,
    }


def report_to_json(report: SpectrumReport) -> str:
    """Serialize a report deterministically."""
    return _emit_json(_report_payload(report))


def report_from_json(text: str) -> SpectrumReport:
    """Parse a serialized report back into SpectrumReport values.

    Parsed numbers are kept verbatim, so serializing the result reproduces
    the input bytes.
    """
    doc = json.loads(text)
    params = ModelParams(Z=float(doc["params"]["Z"]), omega=float(doc["params"]["omega"]))
    levels = []
    for item in doc["real_levels"]:
        wave = None
        if item.get("s") is not None:
            wave = WaveVector(float(item["s"]), float(item["t"]))
        levels.append(
            BoundState(
                kind="real",
                energy=float(item["E"]),
                params=params,
                wave=wave,
                A=None if item.get("A") is None else float(item["A"]),
            )
        )
    pairs = [complex(p["re"], p["im"]) for p in doc["complex_pairs"]]
    window = None
    if doc.get("window") is not None:
        w = doc["window"]
        window = EnergyWindow(w["re_min"], w["re_max"], w["im_min"], w["im_max"])
    return SpectrumReport(
        params=params,
        real_levels=levels,
        complex_pairs=pairs,
        window=window,
        diagnostics=doc.get("diagnostics", {}),
    )


def _report_csv(report: SpectrumReport) -> str:
    rows = ["kind,n,s,t,re,im,A"]
    for i, st in enumerate(report.real_levels):
        a = "" if st.A is None else _fmt(st.A)
        s_val = "" if st.wave is None else _fmt(st.wave.s)
        t_val = "" if st.wave is None else _fmt(st.wave.t)
        e_val = float(st.energy.real) if isinstance(st.energy, complex) else float(st.energy)
        rows.append(f"real,{i},{s_val},{t_val},{_fmt(e_val)},0,{a}")
    for j, e in enumerate(report.complex_pairs):
        rows.append(f"pair,{j},,,{_fmt(e.real)},{_fmt(e.imag)},")
    return "\n".join(rows) + "\n"


# ---------------------------------------------------------------------------
# configuration

_DEFAULTS = {
    "Z": 0.0,
    "omega": 0.0,
    "emax": 2000.0,
    "smax": 12.0,
    "kmax": 8,
    "method": "bracket",
    "window": "0,2000,-200,200",
    "n": 1,
    "family": None,
    "xi": "0,0.5,0.9,0.99",
    "p": 1,
    "stripe": 1,
    "sigma_max": 12.0,
    "points": 600,
    "format": "json",
    "output": None,
    "jobs": 1,
}

_CONVERTERS = {
    "Z": float,
    "omega": float,
    "emax": float,
    "smax": float,
    "kmax": int,
    "method": str,
    "window": str,
    "n": int,
    "family": str,
    "xi": str,
    "p": int,
    "stripe": int,
    "sigma_max": float,
    "points": int,
    "format": str,
    "output": str,
    "jobs": int,
}


@dataclass
class RunConfig:
    """Resolved invocation: subcommand plus every knob it may consume."""

    command: str
    params: ModelParams
    window: EnergyWindow | None = None
    e_max: float = 2000.0
    s_max: float = 12.0
    k_max: int = 8
    method: str = "bracket"
    n_pairs: int = 1
    family: str | None = None
    xi_values: tuple[float, ...] = ()
    p: int = 1
    stripe: int = 1
    sigma_max: float = 12.0
    points: int = 600
    format: str = "json"
    output: str | None = None
    jobs: int = 1
    z_values: tuple[float, ...] = field(default=())
    omega_values: tuple[float, ...] = field(default=())


def _read_config_file(path: str) -> dict:
    entries: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in _CONVERTERS:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
            entries[key] = _CONVERTERS[key](value.strip())
    return entries


def _parse_window(text: str) -> EnergyWindow:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4:
        raise ValueError(f"window needs four comma-separated numbers, got {text!r}")
    re0, re1, im0, im1 = (float(p) for p in parts)
    return EnergyWindow(re0, re1, im0, im1)


def _parse_float_list(text: str) -> tuple[float, ...]:
    return tuple(float(p.strip()) for p in str(text).split(",") if p.strip() != "")


def _resolve(args: argparse.Namespace) -> RunConfig:
    file_entries = _read_config_file(args.config) if args.config else {}

    def pick(key: str, default=None):
        flag = getattr(args, key, None)
        if flag is not None:
            return flag
        if key in file_entries:
            return file_entries[key]
        return _DEFAULTS[key] if default is None else default

    for key in ("emax", "smax", "sigma_max"):
        val = pick(key, _DEFAULTS[key])
        if val is not None and not math.isfinite(float(val)):
            raise ValueError(f"flag {key} must be finite, got {val}")

    z_values = _parse_float_list(str(pick("Z")))
    omega_values = _parse_float_list(str(pick("omega")))
    for name, values in (("Z", z_values), ("omega", omega_values)):
        if not values:
            raise ValueError(f"flag {name} must hold at least one number")
        if any(not math.isfinite(v) for v in values):
            raise ValueError(f"flag {name} must be finite, got {values}")
    if args.command != "sweep" and (len(z_values) != 1 or len(omega_values) != 1):
        raise ValueError("comma lists for --Z/--omega are only valid with the sweep command")
    params = ModelParams(Z=z_values[0], omega=omega_values[0])
    window = None
    if args.command == "complex":
        window = _parse_window(str(pick("window")))
        span = max(abs(window.im_min), abs(window.im_max), 1.0)
        if abs(window.im_min + window.im_max) > 1e-9 * span:
            raise ValueError(
                f"window must be symmetric about the real axis, got imaginary range "
                f"[{window.im_min}, {window.im_max}]"
            )
    return RunConfig(
        command=args.command,
        params=params,
        window=window,
        e_max=float(pick("emax", 400.0 if args.command == "critical" else None)),
        s_max=float(pick("smax")),
        k_max=int(pick("kmax")),
        method=str(pick("method")),
        n_pairs=int(pick("n")),
        family=pick("family"),
        xi_values=_parse_float_list(str(pick("xi"))),
        p=int(pick("p")),
        stripe=int(pick("stripe")),
        sigma_max=float(pick("sigma_max")),
        points=int(pick("points")),
        format=str(pick("format")),
        output=pick("output"),
        jobs=int(pick("jobs")),
        z_values=z_values,
        omega_values=omega_values,
    )


# ---------------------------------------------------------------------------
# curve sampling

def _segment(name: str, xs, ys) -> dict:
    return {"name": name, "points": [[float(x), float(y)] for x, y in zip(xs, ys)]}


def _theta_segments(cfg: RunConfig) -> list[dict]:
    om = cfg.params.omega
    segs = []
    for xi in cfg.xi_values:
        spec = ThetaCurveSpec(p=cfg.p, xi=xi, omega=om)
        pole = None
        if om != 0.0:
            pole = theta_asymptote(spec)
        pieces = []
        if pole is not None and -cfg.sigma_max < pole < cfg.sigma_max:
            gap = 1e-3 * max(1.0, abs(pole))
            pieces.append((-cfg.sigma_max, pole - gap))
            pieces.append((pole + gap, cfg.sigma_max))
        else:
            pieces.append((-cfg.sigma_max, cfg.sigma_max))
        for j, (a, b) in enumerate(pieces):
            sig = np.linspace(a, b, cfg.points)
            tau = [theta_curve(spec, float(x)) for x in sig]
            suffix = f"_part{j}" if len(pieces) > 1 else ""
            segs.append(_segment(f"theta_p{cfg.p:+d}_xi{_fmt(xi)}{suffix}", sig, tau))
    return segs


def _chain_locus(base: float, p: int, q: int, cfg: RunConfig) -> list[dict]:
    """Order locus samples into polyline chains by continuity in sigma."""
    params = cfg.params
    # solutions of some (p, q) families exist only as xi -> 1, where the
    # lattice line slope diverges; cluster samples there geometrically
    xis = np.unique(
        np.concatenate(
            [
                np.linspace(0.0, 1.0 - 1e-6, max(cfg.points // 4, 40)),
                1.0 - np.geomspace(1e-6, 0.05, 12),
            ]
        )
    )
    chains: list[list[tuple[float, float]]] = []
    tails: list[float] = []
    for xi in xis:
        tau_line = base + p * math.pi / 2.0 + q * math.pi * float(xi) / 2.0
        pts = _locus_points(float(xi), base, p, q, params, cfg.sigma_max)
        used = set()
        for sg, _, _, _ in pts:
            best = None
            for ci, tail in enumerate(tails):
                if ci in used:
                    continue
                d = abs(sg - tail)
                if d < 0.5 and (best is None or d < best[1]):
                    best = (ci, d)
            if best is None:
                chains.append([(sg, tau_line)])
                tails.append(sg)
                used.add(len(chains) - 1)
            else:
                chains[best[0]].append((sg, tau_line))
                tails[best[0]] = sg
                used.add(best[0])
    segs = []
    for ci, chain in enumerate(chains):
        if len(chain) < 2:
            continue
        segs.append(
            _segment(
                f"locus_k{int(round((base / math.pi - 1) / 2))}_p{p:+d}_q{q:+d}_c{ci}",
                [c[0] for c in chain],
                [c[1] for c in chain],
            )
        )
    return segs


def _hyperbola_segments(cfg: RunConfig) -> list[dict]:
    params = cfg.params
    om = params.omega
    segs = []
    if params.Z <= 0.0:
        return segs
    if om == 0.0:
        # sigma*tau = 2Z on the physical quadrant
        sig = np.linspace(2.0 * params.Z / (4.0 * cfg.sigma_max), cfg.sigma_max, cfg.points)
        segs.append(_segment("hyperbola", sig, 2.0 * params.Z / sig))
        return segs
    sig = np.linspace(-cfg.sigma_max, cfg.sigma_max, cfg.points)
    if om > 0.0:
        segs.append(_segment("hyperbola", sig, [xi_branch(float(x), params) for x in sig]))
    else:
        tau = np.linspace(0.0, 4.0 * cfg.sigma_max, cfg.points)
        segs.append(
            _segment("hyperbola", [reflected_branch(float(y), params) for y in tau], tau)
        )
    sig_neg = np.linspace(-cfg.sigma_max, -2.0001, cfg.points)
    if cfg.sigma_max > 2.0:
        segs.append(
            _segment(
                "hyperbola_asymptote", sig_neg, [hyperbola_asymptote(float(x), params) for x in sig_neg]
            )
        )
        for bs, tag in ((1, "upper"), (-1, "lower")):
            segs.append(
                _segment(
                    f"envelope_{tag}",
                    sig_neg,
                    [envelope_asymptote(float(x), om, bs) for x in sig_neg],
                )
            )
    return segs


def _curves_payload(cfg: RunConfig) -> dict:
    if cfg.family == "theta":
        segs = _theta_segments(cfg)
    elif cfg.family == "oval":
        base = (2 * cfg.stripe + 1) * math.pi
        segs = []
        for q in (1, -1):
            segs.extend(_chain_locus(base, cfg.p, q, cfg))
        segs.extend(_hyperbola_segments(cfg))
    elif cfg.family == "intersection":
        segs = []
        for k in range(0, cfg.stripe + 1):
            base = (2 * k + 1) * math.pi
            for p in (1, -1):
                for q in (1, -1):
                    segs.extend(_chain_locus(base, p, q, cfg))
        segs.extend(_hyperbola_segments(cfg))
    else:
        raise ValueError(f"unknown curve family {cfg.family!r}")
    return {
        "family": cfg.family,
        "params": {"Z": cfg.params.Z, "omega": cfg.params.omega},
        "segments": segs,
    }


def _curves_csv(payload: dict) -> str:
    rows = ["family,segment,sigma,tau"]
    for seg in payload["segments"]:
        for x, y in seg["points"]:
            rows.append(f"{payload['family']},{seg['name']},{_fmt(x)},{_fmt(y)}")
    return "\n".join(rows) + "\n"


# ---------------------------------------------------------------------------
# subcommand execution

def _spectrum_report(cfg: RunConfig) -> SpectrumReport:
    if cfg.method == "lattice":
        states = real_spectrum_lattice(cfg.params, k_max=cfg.k_max)
        states = [st for st in states if float(st.energy) <= cfg.e_max]
    elif cfg.method == "bracket":
        states = real_spectrum_bracket(cfg.params, s_max=cfg.s_max, e_max=cfg.e_max)
    else:
        raise ValueError(f"unknown method {cfg.method!r}")
    return SpectrumReport(
        params=cfg.params,
        real_levels=states,
        complex_pairs=[],
        window=None,
        diagnostics={"count": len(states), "e_max": cfg.e_max, "method": cfg.method},
    )


def _sweep_task(task: tuple) -> dict:
    z, om, e_max, s_max, method, k_max = task
    cfg = RunConfig(
        command="spectrum",
        params=ModelParams(Z=z, omega=om),
        e_max=e_max,
        s_max=s_max,
        method=method,
        k_max=k_max,
    )
    return _report_payload(_spectrum_report(cfg))


def _sweep_payload(cfg: RunConfig) -> dict:
    tasks = [
        (z, om, cfg.e_max, cfg.s_max, cfg.method, cfg.k_max)
        for z in cfg.z_values
        for om in cfg.omega_values
    ]
    if cfg.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            runs = list(pool.map(_sweep_task, tasks))
    else:
        runs = [_sweep_task(t) for t in tasks]
    return {"runs": runs}


def _sweep_csv(payload: dict) -> str:
    rows = ["Z,omega,kind,n,s,t,re,im,A"]
    for run in payload["runs"]:
        z = _fmt(run["params"]["Z"])
        om = _fmt(run["params"]["omega"])
        for item in run["real_levels"]:
            a = "" if item["A"] is None else _fmt(item["A"])
            rows.append(
                f"{z},{om},real,{item['n']},{_fmt(item['s'])},{_fmt(item['t'])},"
                f"{_fmt(item['E'])},0,{a}"
            )
        for j, p in enumerate(run["complex_pairs"]):
            rows.append(f"{z},{om},pair,{j},,,{_fmt(p['re'])},{_fmt(p['im'])},")
    return "\n".join(rows) + "\n"


def _execute(cfg: RunConfig) -> str:
    if cfg.command == "spectrum":
        report = _spectrum_report(cfg)
        return report_to_json(report) if cfg.format == "json" else _report_csv(report)
    if cfg.command == "count":
        n = count_real(cfg.params, cfg.e_max)
        payload = {
            "params": {"Z": cfg.params.Z, "omega": cfg.params.omega},
            "e_max": cfg.e_max,
            "count": n,
        }
        if cfg.format == "json":
            return _emit_json(payload)
        return "Z,omega,e_max,count\n" + ",".join(
            [_fmt(cfg.params.Z), _fmt(cfg.params.omega), _fmt(cfg.e_max), str(n)]
        ) + "\n"
    if cfg.command == "complex":
        report = complex_spectrum(cfg.params, cfg.window)
        return report_to_json(report) if cfg.format == "json" else _report_csv(report)
    if cfg.command == "critical":
        zs = critical_couplings(cfg.params.omega, cfg.n_pairs, tracking_e_max=cfg.e_max)
        payload = {
            "omega": cfg.params.omega,
            "tracking_e_max": cfg.e_max,
            "criticals": zs,
        }
        if cfg.format == "json":
            return _emit_json(payload)
        return "N,Z\n" + "".join(f"{i + 1},{_fmt(z)}\n" for i, z in enumerate(zs))
    if cfg.command == "curves":
        payload = _curves_payload(cfg)
        return _emit_json(payload) if cfg.format == "json" else _curves_csv(payload)
    if cfg.command == "sweep":
        payload = _sweep_payload(cfg)
        return _emit_json(payload) if cfg.format == "json" else _sweep_csv(payload)
    raise ValueError(f"unknown command {cfg.command!r}")


def run(cfg: RunConfig) -> int:
    """Execute a resolved configuration; returns the process exit status."""
    try:
        text = _execute(cfg)
    except (SolverError,) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except PTWellError as exc:
        # model-domain validation errors that survive config resolution are
        # solver-side conditions (window mismatch, pole hits), not usage
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        if cfg.output:
            with open(cfg.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 4
    return 0


# ---------------------------------------------------------------------------
# argument parsing

def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--Z", type=str, default=None, help="coupling strength (>= 0)")
    common.add_argument("--omega", type=str, default=None, help="contour shift parameter")
    common.add_argument("--config", type=str, default=None, help="key=value config file")
    common.add_argument("--output", type=str, default=None, help="output path (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default=None, help="output format")

    parser = argparse.ArgumentParser(
        prog="ptwell",
        description="Spectral solver for the complex-shifted square well.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_spec = sub.add_parser("spectrum", parents=[common], help="real levels up to an energy cap")
    p_spec.add_argument("--emax", type=float, default=None, help="energy cap")
    p_spec.add_argument("--smax", type=float, default=None, help="sweep range cap")
    p_spec.add_argument("--method", choices=("bracket", "lattice"), default=None)
    p_spec.add_argument("--kmax", type=int, default=None, help="stripe cap for the lattice method")

    p_count = sub.add_parser("count", parents=[common], help="number of real levels up to emax")
    p_count.add_argument("--emax", type=float, default=None)

    p_cx = sub.add_parser("complex", parents=[common], help="all eigenvalues in a window")
    p_cx.add_argument("--window", type=str, default=None, help="re_min,re_max,im_min,im_max")

    p_crit = sub.add_parser("critical", parents=[common], help="critical couplings")
    p_crit.add_argument("--n", type=int, default=None, help="number of pair mergers to locate")
    p_crit.add_argument("--emax", type=float, default=None, help="tracking window cap")

    p_curves = sub.add_parser("curves", parents=[common], help="sampled curve data for plotting")
    p_curves.add_argument(
        "--family", choices=("theta", "oval", "intersection"), default=None, required=False
    )
    p_curves.add_argument("--xi", type=str, default=None, help="comma list of xi values")
    p_curves.add_argument("--p", type=int, choices=(-1, 1), default=None)
    p_curves.add_argument("--stripe", type=int, default=None, help="stripe index k")
    p_curves.add_argument("--sigma-max", dest="sigma_max", type=float, default=None)
    p_curves.add_argument("--points", type=int, default=None)

    p_sweep = sub.add_parser("sweep", parents=[common], help="spectrum over a parameter grid")
    p_sweep.add_argument("--emax", type=float, default=None)
    p_sweep.add_argument("--smax", type=float, default=None)
    p_sweep.add_argument("--method", choices=("bracket", "lattice"), default=None)
    p_sweep.add_argument("--kmax", type=int, default=None)
    p_sweep.add_argument("--jobs", type=int, default=None, help="parallel workers")
    return parser


_LOG_LEVELS = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


def main(argv: list[str] | None = None) -> int:
    level_name = os.environ.get("PTWELL_LOG", "error").strip().lower()
    logging.basicConfig(
        level=_LOG_LEVELS.get(level_name, logging.ERROR),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "curves" and getattr(args, "family", None) is None:
        file_entries = {}
        if args.config:
            try:
                file_entries = _read_config_file(args.config)
            except (OSError, ValueError):
                pass
        if "family" not in file_entries:
            parser.error("curves requires --family")
    try:
        cfg = _resolve(args)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 4
    except (ValueError, PTWellError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
