"""Command-line front end: ``spinkick {evolve,distribution,optimize,sweep,oracle}``.

Times are in units of 1/g. A sample taken exactly at a kick time reports the
post-kick state. Long-basis indices in ``distribution`` output are 0-based:
index = (k1 + S1) * (2 S2 + 1) + (k2 + S2).

Every option can also come from ``--config FILE`` holding ``key = value``
lines (``#`` starts a comment; keys use the flag names with ``-`` or ``_``).
Flags given on the command line override the file.

Exit codes: 0 success, 2 configuration / validation error, 3 oracle
tolerance failure, 4 I/O error.
"""
from __future__ import annotations

import argparse
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import oracles
from .dynamics import EvolutionRequest, KickSchedule, dynamical_period, evolve
from .errors import SpinKickError
from .metrics import concurrence_series, partial_trace, purity
from .optimizer import Objective, optimize, unkicked_stats, window_taus
from .spin_core import SpinValue
from .state_prep import initial_state

log = logging.getLogger("spinkick")

EXIT_OK, EXIT_CONFIG, EXIT_ORACLE, EXIT_IO = 0, 2, 3, 4
EXACT_ORACLE_TOL = 1e-8
# band for the large-S average approximation; its S=1 gap is ~0.044
APPROX_ORACLE_TOL = 0.05


class IOFailure(Exception):
    pass


def fmt(x: float) -> str:
    """12 significant digits, locale independent."""
    s = format(float(x), ".12g")
    return "0" if s == "-0" else s


def parse_spin_list(text: str) -> list[SpinValue]:
    """``"0.5,1,3/2"`` or a range ``"0.5:12"`` (step 1/2) / ``"1:10:1"``."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) not in (2, 3):
            raise SpinKickError(f"bad spin range {text!r}")
        lo, hi = SpinValue.of(parts[0]), SpinValue.of(parts[1])
        step = SpinValue.of(parts[2]).twice_s if len(parts) == 3 else 1
        return [SpinValue(tw) for tw in range(lo.twice_s, hi.twice_s + 1, step)]
    return [SpinValue.of(p) for p in text.split(",") if p.strip()]


def _floats(text: str, what: str) -> list[float]:
    try:
        vals = [float(p) for p in str(text).split(",") if p.strip()]
    except ValueError as exc:
        raise SpinKickError(f"cannot parse {what} {text!r}") from exc
    if not all(math.isfinite(v) for v in vals):
        raise SpinKickError(f"{what} must be finite")
    return vals


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise SpinKickError(f"cannot parse boolean {text!r}")


def _float(text, what: str) -> float:
    return _floats(text, what)[0] if str(text).strip() else math.nan


@dataclass
class RunConfig:
    spin: SpinValue = field(default_factory=lambda: SpinValue(2))
    spin2: SpinValue | None = None
    g: float = 1.0
    kicks: tuple[float, float] | None = None
    angle: float = math.pi / 2
    t_max: float = 4 * math.pi
    dt: float = 0.01
    at: list[float] = field(default_factory=list)
    objective: Objective = Objective.MAX
    grid: float | None = None
    refine: bool = False
    out: str | None = None
    format: str = "csv"
    spins: list[SpinValue] = field(default_factory=list)
    seed: int = 0

    def schedule(self) -> KickSchedule:
        if self.kicks is None:
            return KickSchedule.free(self.g)
        return KickSchedule(self.kicks[0], self.kicks[1], g=self.g, angle=self.angle)

    @property
    def pair(self) -> tuple[SpinValue, SpinValue]:
        return self.spin, self.spin if self.spin2 is None else self.spin2


KEYS = ("spin", "spin2", "g", "kicks", "angle", "t_max", "dt", "at", "objective", "grid",
        "refine", "out", "format", "spins", "seed")


def read_config_file(path: str) -> dict[str, str]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise IOFailure(f"cannot read config {path}: {exc}") from exc
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SpinKickError(f"{path}:{lineno}: expected 'key = value'")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in KEYS:
            raise SpinKickError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = val
    return values


def build_config(values: dict) -> RunConfig:
    """Typed config from raw string (or already typed) values."""
    cfg = RunConfig()
    for key, val in values.items():
        if val is None:
            continue
        if key == "spin":
            cfg.spin = SpinValue.of(val)
        elif key == "spin2":
            cfg.spin2 = SpinValue.of(val)
        elif key in ("g", "angle", "t_max", "dt"):
            setattr(cfg, key, _float(val, key))
        elif key == "grid":
            cfg.grid = _float(val, key)
        elif key == "kicks":
            ts = _floats(val, "kick times")
            if len(ts) != 2:
                raise SpinKickError(f"--kicks needs exactly two times T1,T2, got {val!r}")
            cfg.kicks = (ts[0], ts[1])
        elif key == "at":
            cfg.at = _floats(val, "snapshot times")
        elif key == "objective":
            try:
                cfg.objective = Objective(str(val).strip())
            except ValueError as exc:
                raise SpinKickError(f"objective must be max, min or mean, got {val!r}") from exc
        elif key == "refine":
            cfg.refine = _bool(val)
        elif key == "out":
            cfg.out = str(val)
        elif key == "format":
            if str(val) not in ("csv", "json"):
                raise SpinKickError(f"format must be csv or json, got {val!r}")
            cfg.format = str(val)
        elif key == "spins":
            cfg.spins = parse_spin_list(str(val))
        elif key == "seed":
            cfg.seed = int(val)
        else:
            raise SpinKickError(f"unknown option {key!r}")
    if not (cfg.g > 0):
        raise SpinKickError(f"g must be positive, got {cfg.g}")
    if not (cfg.dt > 0):
        raise SpinKickError(f"dt must be positive, got {cfg.dt}")
    if not (cfg.t_max >= 0):
        raise SpinKickError(f"t-max must be non-negative, got {cfg.t_max}")
    if cfg.grid is not None and not cfg.grid > 0:
        raise SpinKickError(f"grid must be positive, got {cfg.grid}")
    cfg.schedule()  # validates t1 < t2
    return cfg


def _write(cfg: RunConfig, text: str):
    if cfg.out is None or cfg.out == "-":
        sys.stdout.write(text)
        return
    try:
        Path(cfg.out).write_text(text)
    except OSError as exc:
        raise IOFailure(f"cannot write {cfg.out}: {exc}") from exc


def sample_times(t_max: float, dt: float) -> np.ndarray:
    n = int(math.floor(t_max / dt + 1e-9))
    return dt * np.arange(n + 1)


def cmd_evolve(cfg: RunConfig) -> int:
    s1, s2 = cfg.pair
    times = sample_times(cfg.t_max, cfg.dt)
    snaps = evolve(EvolutionRequest(initial_state(s1, s2), cfg.schedule(), times))
    series = concurrence_series(snaps)
    conc = np.clip(series.concurrence, 0.0, 1.0)
    if cfg.format == "json":
        doc = {
            "spin": float(s1.s()), "spin2": float(s2.s()), "g": cfg.g,
            "kicks": list(cfg.kicks) if cfg.kicks else None,
            "t": [float(fmt(t)) for t in series.times],
            "concurrence": [float(fmt(c)) for c in conc],
            "purity": [float(fmt(p)) for p in series.purity],
        }
        _write(cfg, json.dumps(doc) + "\n")
    else:
        buf = io.StringIO()
        buf.write("t,concurrence,purity\n")
        for t, c, p in zip(series.times, conc, series.purity):
            buf.write(f"{fmt(t)},{fmt(c)},{fmt(p)}\n")
        _write(cfg, buf.getvalue())
    return EXIT_OK


def cmd_distribution(cfg: RunConfig) -> int:
    if cfg.kicks is None:
        raise SpinKickError("distribution needs a kick schedule (--kicks T1,T2)")
    if not cfg.at:
        raise SpinKickError("distribution needs snapshot times (--at T,...)")
    s1, s2 = cfg.pair
    times = np.array(sorted(cfg.at))
    snaps = evolve(EvolutionRequest(initial_state(s1, s2), cfg.schedule(), times))
    buf = io.StringIO()
    buf.write(f"# long-basis index is 0-based: index = (k1+S1)*(2*S2+1) + (k2+S2); S1={s1}, S2={s2}\n")
    buf.write("snapshot,index,probability\n")
    for t, st in snaps:
        for i, p in enumerate(st.probabilities()):
            buf.write(f"{fmt(t)},{i},{fmt(p)}\n")
    _write(cfg, buf.getvalue())
    return EXIT_OK


def optimization_record(cfg: RunConfig, spin: SpinValue) -> dict:
    res = optimize(spin, cfg.g, cfg.objective, cfg.grid, cfg.refine, cfg.angle, spin2=cfg.spin2)
    return {
        "spin": float(spin.s()),
        "g": cfg.g,
        "objective": cfg.objective.value,
        "t1": float(fmt(res.t1)),
        "t2": float(fmt(res.t2)),
        "objective_value": float(fmt(res.objective_value)),
        "c_max": float(fmt(res.c_max)),
        "c_min": float(fmt(res.c_min)),
        "c_mean": float(fmt(res.c_mean)),
        "evaluations": res.evaluations,
        "grid_step": float(fmt(res.grid_step)),
    }


def cmd_optimize(cfg: RunConfig) -> int:
    _write(cfg, json.dumps(optimization_record(cfg, cfg.spin), indent=2) + "\n")
    return EXIT_OK


def sweep_rows(cfg: RunConfig) -> list[tuple]:
    rows = []
    for spin in sorted(cfg.spins or [cfg.spin]):
        log.info("sweep: S=%s", spin)
        unk = unkicked_stats(spin, cfg.g)[2]
        res = optimize(spin, cfg.g, cfg.objective, cfg.grid, cfg.refine, cfg.angle)
        rows.append((spin, unk, res.c_mean, res.t1, res.t2))
    return rows


def cmd_sweep(cfg: RunConfig) -> int:
    buf = io.StringIO()
    buf.write("spin,avg_unkicked,avg_kicked,t1,t2\n")
    for spin, unk, kick, t1, t2 in sweep_rows(cfg):
        buf.write(f"{fmt(spin.s())},{fmt(unk)},{fmt(kick)},{fmt(t1)},{fmt(t2)}\n")
    _write(cfg, buf.getvalue())
    return EXIT_OK


def oracle_reports(spins: list[SpinValue], g: float = 1.0, n_times: int = 50, seed: int = 0) -> list[oracles.OracleReport]:
    """Closed forms against the matrix simulation (unkicked)."""
    rng = np.random.default_rng(seed)
    reports = []
    for spin in spins:
        times = np.sort(rng.uniform(0.0, 4 * np.pi / g, n_times))
        snaps = evolve(EvolutionRequest(initial_state(spin), KickSchedule.free(g), times))
        sim_p = np.array([purity(partial_trace(st)) for _, st in snaps])
        exact_p = oracles.purity_closed_form(spin, spin, g * times)
        i = int(np.argmax(np.abs(sim_p - exact_p)))
        reports.append(oracles.compare(f"purity S={spin} (worst of {n_times} times)", exact_p[i], sim_p[i], EXACT_ORACLE_TOL))
        sim_c = concurrence_series(snaps).concurrence
        closed = None
        if spin.twice_s == 1:
            closed = oracles.concurrence_half_closed_form(g * times)
            label = "C sin^2(gt/2) S=1/2"
        elif spin.twice_s == 2:
            closed = oracles.concurrence_s1_closed_form(g * times)
            label = "C 3(4-2c-c^2-c^4)/16 S=1"
        if closed is not None:
            i = int(np.argmax(np.abs(sim_c - closed)))
            reports.append(oracles.compare(f"{label} (worst of {n_times} times)", closed[i], sim_c[i], EXACT_ORACLE_TOL))
        avg = unkicked_stats(spin, g)[2]
        if spin.twice_s == 2:
            reports.append(oracles.compare("period average S=1 (75/128)", oracles.S1_AVG_EXACT, avg, EXACT_ORACLE_TOL))
        if spin.twice_s >= 2:
            reports.append(oracles.compare(f"large-S average approx S={spin}", oracles.avg_concurrence_large_s(spin), avg, APPROX_ORACLE_TOL))
    return reports


def cmd_oracle(cfg: RunConfig) -> int:
    spins = cfg.spins or [SpinValue(tw) for tw in range(1, 21)]
    reports = oracle_reports(spins, cfg.g, seed=cfg.seed)
    if cfg.format == "json":
        doc = [
            {"label": r.label, "analytic": float(fmt(r.analytic)), "simulated": float(fmt(r.simulated)),
             "abs_diff": float(fmt(r.abs_diff)), "tolerance": r.tolerance, "passed": r.passed}
            for r in reports
        ]
        _write(cfg, json.dumps(doc, indent=2) + "\n")
    else:
        buf = io.StringIO()
        buf.write("label,analytic,simulated,abs_diff,tolerance,status\n")
        for r in reports:
            tol = "" if r.tolerance is None else fmt(r.tolerance)
            buf.write(f"{r.label},{fmt(r.analytic)},{fmt(r.simulated)},{fmt(r.abs_diff)},{tol},{'ok' if r.passed else 'FAIL'}\n")
        _write(cfg, buf.getvalue())
    return EXIT_OK if all(r.passed for r in reports) else EXIT_ORACLE


COMMANDS = {
    "evolve": cmd_evolve,
    "distribution": cmd_distribution,
    "optimize": cmd_optimize,
    "sweep": cmd_sweep,
    "oracle": cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="file of 'key = value' lines; flags override it")
    common.add_argument("--spin", help="spin S, e.g. 1, 0.5, 3/2 (default 1)")
    common.add_argument("--spin2", help="second spin (default: same as --spin)")
    common.add_argument("--g", help="Ising coupling (default 1)")
    common.add_argument("--kicks", metavar="T1,T2", help="kick times; a sample exactly at a kick time is post-kick")
    common.add_argument("--angle", help="kick rotation angle in radians (default pi/2)")
    common.add_argument("--t-max", dest="t_max", help="last sample time (default 4 pi)")
    common.add_argument("--dt", help="sampling step (default 0.01)")
    common.add_argument("--at", metavar="T,...", help="snapshot times for distribution")
    common.add_argument("--objective", help="max | min | mean of post-kick concurrence (default max)")
    common.add_argument("--grid", help="kick-time grid step (default 0.05/g)")
    common.add_argument("--refine", action="store_const", const=True, help="coordinate refinement after the grid")
    common.add_argument("--spins", help="spin list '0.5,1,2' or range '0.5:12' for sweep/oracle")
    common.add_argument("--seed", help="seed for oracle sample times (default 0)")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", help="csv | json")
    common.add_argument("-v", "--verbose", action="store_const", const=True)

    parser = argparse.ArgumentParser(
        prog="spinkick",
        description="Two Ising-coupled spins with two pi/2 kicks: simulate, optimize, cross-check.",
        epilog="Exit codes: 0 ok, 2 config/validation error, 3 oracle failure, 4 I/O error.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "evolve": "concurrence and purity time series (CSV t,concurrence,purity)",
        "distribution": "long-basis probability snapshots at --at times",
        "optimize": "search kick times, print JSON result",
        "sweep": "unkicked vs optimized-kicked averages over a spin range",
        "oracle": "closed-form formulas vs simulation; exit 3 on mismatch",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text, description=text,
                       argument_default=argparse.SUPPRESS)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = vars(parser.parse_args(argv))
    command = args.pop("command")
    verbose = args.pop("verbose", False)
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        values = {}
        if "config" in args:
            values.update(read_config_file(args.pop("config")))
        values.update(args)
        cfg = build_config(values)
        return COMMANDS[command](cfg)
    except IOFailure as exc:
        print(f"spinkick: {exc}", file=sys.stderr)
        return EXIT_IO
    except SpinKickError as exc:
        print(f"spinkick: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
