"""Command-line front end: configuration, persistence, and CSV emission.

Subcommands
-----------
integrate   integrate one initial condition and dump the sampled trajectory
melnikov    sweep the homoclinic potential over (G0, sigma)
scattering  compare the numerical phase shift against its asymptotic law
manifold    solve an invariant chart, save it, and measure its defect
shadow      run the bounded-excursion demonstration and report excursions
verify      run the acceptance suite

Every run writes a JSON manifest (command, resolved configuration, version,
timestamps, and a sha256 inventory of the emitted files).  Exit codes:
0 success, 2 configuration error, 3 numerical failure, 4 acceptance failure.
"""

from __future__ import annotations

import argparse
import configparser
import dataclasses
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from .errors import ConfigError, ParinfError
from .params import Params, McGeheeState
from .flow import IntegratorConfig, integrate
from .dynamics import hamiltonian, jacobi_integral
from . import melnikov, scattering, manifold, shadow, acceptance

try:
    from importlib.metadata import version as _pkg_version
    VERSION = _pkg_version("artifact")
except Exception:  # pragma: no cover - not installed
    VERSION = "0.1.0"


# ---------------------------------------------------------------------------
# Configuration: sectioned key-value file with a closed schema.
# ---------------------------------------------------------------------------

# section -> key -> (type, default).  Booleans use "true"/"false".
SCHEMA = {
    "params": {
        "mu": (float, 0.5),
        "e0": (float, 0.0),
        "collision_floor": (float, 1e-6),
    },
    "integrator": {
        "rtol": (float, 1e-12),
        "atol": (float, 1e-13),
        "method": (str, "DOP853"),
    },
    "melnikov": {
        "n_harmonics": (int, 3),
        "tol": (float, 1e-12),
        "alpha0": (float, 0.0),
        "s0": (float, 0.0),
    },
    "scattering": {
        "branch": (str, "-"),
        "route": (str, "series"),
    },
    "manifold": {
        "alpha0": (float, 0.0),
        "g0": (float, 10.0),
        "order": (int, 8),
        "dps": (int, 50),
        "stable": (bool, True),
        "defect_dps": (int, 30),
    },
    "shadow": {
        "g0": (float, 5.0),
        "n_links": (int, 2),
        "min_ratio": (float, 10.0),
        "chain_length": (int, 50),
    },
}


def _coerce(section: str, key: str, raw: str):
    typ = SCHEMA[section][key][0]
    try:
        if typ is bool:
            low = raw.strip().lower()
            if low not in ("true", "false"):
                raise ValueError(raw)
            return low == "true"
        return typ(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: cannot parse {raw!r} as {typ.__name__}")


class RunConfig:
    """Resolved configuration: every schema key has a value."""

    def __init__(self, values: dict[str, dict[str, object]]):
        self.values = values

    @classmethod
    def defaults(cls) -> "RunConfig":
        return cls({s: {k: d for k, (_, d) in keys.items()}
                    for s, keys in SCHEMA.items()})

    @classmethod
    def parse(cls, path: str | Path) -> "RunConfig":
        cp = configparser.ConfigParser(interpolation=None)
        try:
            with open(path) as fh:
                cp.read_file(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}")
        except configparser.Error as exc:
            raise ConfigError(f"malformed config file {path}: {exc}")
        cfg = cls.defaults()
        for section in cp.sections():
            if section not in SCHEMA:
                raise ConfigError(f"unknown config section [{section}]")
            for key, raw in cp.items(section):
                if key not in SCHEMA[section]:
                    raise ConfigError(f"unknown key {key!r} in section [{section}]")
                cfg.values[section][key] = _coerce(section, key, raw)
        return cfg

    def emit(self) -> str:
        lines = []
        for section, keys in SCHEMA.items():
            lines.append(f"[{section}]")
            for key in keys:
                v = self.values[section][key]
                if isinstance(v, bool):
                    text = "true" if v else "false"
                elif isinstance(v, str):
                    text = v
                else:
                    text = repr(v)
                lines.append(f"{key} = {text}")
            lines.append("")
        return "\n".join(lines)

    def __eq__(self, other) -> bool:
        return isinstance(other, RunConfig) and self.values == other.values

    # convenience accessors -------------------------------------------------
    def params(self) -> Params:
        p = self.values["params"]
        return Params(mu=p["mu"], e0=p["e0"], collision_floor=p["collision_floor"])

    def integrator(self) -> IntegratorConfig:
        i = self.values["integrator"]
        return IntegratorConfig(rtol=i["rtol"], atol=i["atol"], method=i["method"])

    def as_dict(self) -> dict:
        return {s: dict(kv) for s, kv in self.values.items()}


# ---------------------------------------------------------------------------
# Output helpers: 17-significant-digit CSV and manifest with checksums.
# ---------------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


class Run:
    """Tracks outputs for one command and writes the manifest at the end."""

    def __init__(self, command: str, cfg: RunConfig, out_dir: Path):
        self.command = command
        self.cfg = cfg
        self.out_dir = out_dir
        self.start = time.strftime("%Y-%m-%dT%H:%M:%S%z")
        self.outputs: list[Path] = []
        out_dir.mkdir(parents=True, exist_ok=True)

    def path(self, name: str) -> Path:
        p = self.out_dir / name
        self.outputs.append(p)
        return p

    def finish(self) -> Path:
        manifest = {
            "command": self.command,
            "config": self.cfg.as_dict(),
            "version": VERSION,
            "started": self.start,
            "finished": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
            "outputs": [{"path": str(p.relative_to(self.out_dir)),
                         "sha256": _sha256(p)}
                        for p in self.outputs if p.exists()],
        }
        mpath = self.out_dir / "manifest.json"
        with open(mpath, "w") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return mpath


# ---------------------------------------------------------------------------
# Subcommands.
# ---------------------------------------------------------------------------

def cmd_integrate(cfg: RunConfig, args, run: Run) -> int:
    p = cfg.params()
    st = McGeheeState(x=args.x, alpha=args.alpha, y=args.y, G=args.G, s=args.s)
    traj = integrate(st, (args.t0, args.t1), p, cfg.integrator())
    ts = np.linspace(args.t0, args.t1, args.n_samples)
    rows = []
    for t in ts:
        u = traj(t)
        stt = McGeheeState(*u)
        rows.append([t, *u, hamiltonian(stt, p), jacobi_integral(stt, p)])
    write_csv(run.path("trajectory.csv"),
              ["t", "x", "alpha", "y", "G", "s", "H", "J"], rows)
    return 0


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse float list {text!r}")


def cmd_melnikov(cfg: RunConfig, args, run: Run) -> int:
    p = cfg.params()
    m = cfg.values["melnikov"]
    g_values = _parse_floats(args.G0)
    sigmas = np.linspace(0.0, 2 * np.pi, args.n_sigma, endpoint=False)
    rows = []
    for G0 in g_values:
        cs = [melnikov.harmonic(k, G0, p) for k in range(1, m["n_harmonics"] + 1)]
        for sig in sigmas:
            res = melnikov.poincare_function(m["alpha0"], G0, m["s0"], sig, p,
                                             n_harmonics=m["n_harmonics"],
                                             tol=m["tol"])
            th = res.theta0
            dL = -sum(2.0 * k * c * np.sin(k * th) for k, c in enumerate(cs, 1))
            rows.append([G0, sig, res.value, dL])
    write_csv(run.path("sweep.csv"), ["G0", "sigma", "L", "dL_dsigma"], rows)
    crit_rows = []
    for G0 in g_values:
        cp = melnikov.critical_points(m["alpha0"], G0, m["s0"], p,
                                      n_harmonics=m["n_harmonics"])
        crit_rows.append([G0, cp.sigma_minus, cp.sigma_plus,
                          cp.residual_ratio_minus, cp.residual_ratio_plus])
    write_csv(run.path("critical.csv"),
              ["G0", "sigma_minus", "sigma_plus",
               "residual_ratio_minus", "residual_ratio_plus"], crit_rows)
    return 0


def cmd_scattering(cfg: RunConfig, args, run: Run) -> int:
    p = cfg.params()
    sc = cfg.values["scattering"]
    rows = []
    for G in _parse_floats(args.G):
        fn = scattering.f_branch(G, p, branch=sc["branch"], route=sc["route"])
        fa = scattering.f_asymptotic(G, p)
        rows.append([G, fn, fa, fn / fa])
    write_csv(run.path("phase_shift.csv"),
              ["G", "f_numeric", "f_asymptotic", "ratio"], rows)
    return 0


def cmd_manifold(cfg: RunConfig, args, run: Run) -> int:
    p = cfg.params()
    mc = cfg.values["manifold"]
    alpha0 = args.alpha0 if args.alpha0 is not None else mc["alpha0"]
    G0 = args.G0 if args.G0 is not None else mc["g0"]
    order = args.order if args.order is not None else mc["order"]
    ch = manifold.formal_solve(alpha0, G0, p, k=order,
                               stable=mc["stable"], dps=mc["dps"])
    with open(run.path("chart.txt"), "w") as fh:
        fh.write(manifold.chart_to_text(ch))
    ts = _parse_floats(args.ts)
    defects = manifold.invariance_defect(ch, p, ts, dps=mc["defect_dps"])
    write_csv(run.path("defect.csv"), ["t", "defect"],
              [[t, float(d)] for t, d in zip(ts, defects)])
    return 0


def cmd_shadow(cfg: RunConfig, args, run: Run) -> int:
    p = cfg.params()
    sh = cfg.values["shadow"]
    n = args.n_links if args.n_links is not None else sh["n_links"]
    rep = shadow.oscillation_demo(p, G0=sh["g0"], n_excursions=n,
                                  min_ratio=sh["min_ratio"])
    write_csv(run.path("excursions.csv"),
              ["index", "r_in", "r_out", "ratio", "energy",
               "d_visit", "t_peri", "t_apo"],
              [[r["index"], r["r_in"], r["r_out"], r["ratio"], r["energy"],
                r["d_visit"], r["t_peri"], r["t_apo"]]
               for r in rep["excursions"]])
    report = {k: v for k, v in rep.items() if k != "excursions"}
    report["n_excursions"] = len(rep["excursions"])
    with open(run.path("report.json"), "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True, default=float)
        fh.write("\n")
    return 0


def cmd_verify(cfg: RunConfig, args, run: Run) -> int:
    results = acceptance.run_all(include_slow=args.slow, report=print)
    rows = [[r.index, r.name, r.ok, r.detail] for r in results]
    write_csv(run.path("acceptance.csv"), ["index", "name", "ok", "detail"],
              [[r[0], f'"{r[1]}"', r[2], f'"{r[3]}"'] for r in rows])
    return 0 if all(r.ok for r in results) else 4


# ---------------------------------------------------------------------------
# Entry point.
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="parinf",
        description="Numerical toolkit for near-parabolic three-body dynamics.")
    ap.add_argument("--config", help="path to a sectioned key-value config file")
    ap.add_argument("--out", default=None,
                    help="output directory (default runs/<command>)")
    sub = ap.add_subparsers(dest="command", required=True)

    pi = sub.add_parser("integrate", help="integrate one initial condition")
    pi.add_argument("--x", type=float, required=True)
    pi.add_argument("--alpha", type=float, default=0.0)
    pi.add_argument("--y", type=float, default=0.0)
    pi.add_argument("--G", type=float, required=True)
    pi.add_argument("--s", type=float, default=0.0)
    pi.add_argument("--t0", type=float, default=0.0)
    pi.add_argument("--t1", type=float, required=True)
    pi.add_argument("--n-samples", type=int, default=1000)

    pm = sub.add_parser("melnikov", help="sweep the homoclinic potential")
    pm.add_argument("--G0", default="5,8,12", help="comma-separated G0 list")
    pm.add_argument("--n-sigma", type=int, default=64)

    ps = sub.add_parser("scattering", help="phase shift vs. asymptotic law")
    ps.add_argument("--G", default="8,16,32", help="comma-separated G list")

    pman = sub.add_parser("manifold", help="solve and check an invariant chart")
    pman.add_argument("--alpha0", type=float, default=None)
    pman.add_argument("--G0", type=float, default=None)
    pman.add_argument("--order", type=int, default=None)
    pman.add_argument("--ts", default="0.01,0.02,0.03",
                      help="chart parameters at which to measure the defect")

    psh = sub.add_parser("shadow", help="bounded-excursion demonstration")
    psh.add_argument("--n-links", type=int, default=None)

    pv = sub.add_parser("verify", help="run the acceptance suite")
    pv.add_argument("--slow", action="store_true",
                    help="include the slow oscillation demonstration")
    return ap


COMMANDS = {
    "integrate": cmd_integrate,
    "melnikov": cmd_melnikov,
    "scattering": cmd_scattering,
    "manifold": cmd_manifold,
    "shadow": cmd_shadow,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = RunConfig.parse(args.config) if args.config else RunConfig.defaults()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    out_dir = Path(args.out) if args.out else Path("runs") / args.command
    run = Run(args.command, cfg, out_dir)
    try:
        code = COMMANDS[args.command](cfg, args, run)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        run.finish()
        return 2
    except ParinfError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        run.finish()
        return 3
    manifest = run.finish()
    print(f"manifest: {manifest}")
    return code


if __name__ == "__main__":
    sys.exit(main())
