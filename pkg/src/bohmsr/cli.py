"""Batch command-line front end.

Every subcommand writes a table (CSV with a header, or JSON) to ``--out`` or
stdout. Summaries and diagnostics go to a JSON sidecar next to ``--out``
(``<stem>.summary.json`` / ``<stem>.diagnostics.json``), to stderr when
writing to stdout, or inline when ``--format json``.

Exit codes: 0 success, 1 failed identity check, 2 parameter/domain error,
3 I/O error, 4 physics degeneracy (stall or node).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.integrate import quad

from . import barrier as barrier_mod
from . import relativity, trajectory, wavefield
from .errors import BohmError, DomainError, StallError
from .wavefield import PhysicalConstants, SuperpositionState


@dataclass
class RunConfig:
    command: str
    k: float | None = None
    rho: float = 0.0
    phi: float = 0.0
    v0: float | None = None
    c: float = 1.0
    hbar: float = 1.0
    m0: float = 1.0
    V0: float | None = None
    a: float | None = None
    x0: float | None = None
    t_end: float | None = None
    tol: float | None = None
    grid: int | None = None
    range: tuple[float, float] | None = None
    out: str | None = None
    format: str = "csv"
    kind: str = "massive"
    no_fit: bool = False

    @property
    def consts(self) -> PhysicalConstants:
        return PhysicalConstants(hbar=self.hbar, m0=self.m0, c=self.c)

    def wavenumber(self) -> float:
        if self.k is not None:
            if self.v0 is not None and not math.isclose(self.consts.wavenumber(self.v0), self.k, rel_tol=1e-12):
                raise DomainError(f"--k {self.k!r} and --v0 {self.v0!r} disagree; give one of them")
            return self.k
        if self.v0 is not None:
            return self.consts.wavenumber(self.v0)
        return 1.0

    def state(self) -> SuperpositionState:
        return SuperpositionState(k=self.wavenumber(), rho=self.rho, phi=self.phi)

    def validate(self):
        """Check everything the target command needs before any computation."""
        if self.format not in ("csv", "json"):
            raise DomainError(f"unknown format {self.format!r}")
        if self.kind not in ("massive", "photon"):
            raise DomainError(f"unknown kind {self.kind!r}")
        if self.grid is not None and self.grid < 1:
            raise DomainError("grid must be at least 1")
        if self.tol is not None and not self.tol > 0:
            raise DomainError("tol must be positive")
        if self.t_end is not None and not self.t_end > 0:
            raise DomainError("t-end must be positive")
        consts = self.consts
        if self.command in ("field", "traj"):
            self.state()
        if self.command == "traj" and self.V0 is not None:
            barrier_mod.SquareBarrier(self.V0, self.a if self.a is not None else 1.0)
        if self.command == "barrier-scan":
            barrier_mod.SquareBarrier(self.V0 if self.V0 is not None else 50.0, self.a if self.a is not None else 10.0)
        if self.range is not None:
            lo, hi = self.range
            if hi < lo:
                raise DomainError("range must satisfy LO <= HI")
        return consts


# -- argument handling -------------------------------------------------------


def _parse_range(text: str) -> tuple[float, float]:
    try:
        lo, hi = text.split(":")
        return float(lo), float(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    g = shared.add_argument_group("shared parameters")
    for flag in ("--k", "--rho", "--phi", "--v0", "--c", "--hbar", "--m0", "--V0", "--a", "--x0", "--t-end", "--tol"):
        g.add_argument(flag, type=float, default=None)
    g.add_argument("--grid", type=int, default=None, metavar="N")
    g.add_argument("--range", type=_parse_range, default=None, metavar="LO:HI")
    g.add_argument("--out", default=None, metavar="PATH")
    g.add_argument("--format", choices=("csv", "json"), default=None)
    g.add_argument("--config", default=None, metavar="PATH", help="JSON file of parameters; flags override it")

    parser = argparse.ArgumentParser(prog="bohmsr", description="Bohmian trajectories and emergent relativistic kinematics")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("field", parents=[shared], help="v, Q, R of the plane-wave superposition on a grid of x")
    sub.add_parser("traj", parents=[shared], help="integrate one trajectory (free field, or barrier when --V0 is given)")
    p = sub.add_parser("srcheck", parents=[shared], help="relativistic identities on a log grid of v0 (--range in units of c)")
    p.add_argument("--kind", choices=("massive", "photon"), default=None)
    sub.add_parser("fig1", parents=[shared], help="transmission versus energy (--range in units of E0)")
    p = sub.add_parser("barrier-scan", parents=[shared], help="thick-barrier average speed versus v0 and log-log slope")
    p.add_argument("--no-fit", action="store_true", default=None, help="emit rows only, skip the opacity check and fit")
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    values: dict = {}
    if args.config is not None:
        with open(args.config) as fh:
            try:
                values = json.load(fh)
            except json.JSONDecodeError as exc:
                raise DomainError(f"config file is not valid JSON: {exc}")
        values = {key.replace("-", "_"): val for key, val in values.items()}
        if "range" in values and isinstance(values["range"], str):
            values["range"] = _parse_range(values["range"])
    for key, val in vars(args).items():
        if key not in ("config", "command") and val is not None:
            values[key] = val
    known = {f.name for f in dataclasses.fields(RunConfig)}
    unknown = set(values) - known
    if unknown:
        raise DomainError(f"unknown parameters: {sorted(unknown)}")
    if "range" in values and values["range"] is not None:
        values["range"] = tuple(float(v) for v in values["range"])
    return RunConfig(command=args.command, **values)


# -- output ------------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _json_value(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {k: _json_value(v) for k, v in value.items()}
    return value


def _dump_json(obj) -> str:
    return json.dumps(_json_value(obj), indent=2, sort_keys=False) + "\n"


def emit(cfg: RunConfig, columns, rows, extra: dict | None = None, extra_name: str = "summary"):
    """Write the table and its sidecar."""
    if cfg.format == "json":
        doc = {"columns": list(columns), "rows": [dict(zip(columns, map(_json_value, r))) for r in rows]}
        if extra is not None:
            doc[extra_name] = extra
        _write(cfg.out, _dump_json(doc))
        return
    lines = [",".join(columns)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    _write(cfg.out, "\n".join(lines) + "\n")
    if extra is not None:
        if cfg.out is None:
            sys.stderr.write(_dump_json(extra))
        else:
            _write(str(sidecar_path(cfg.out, extra_name)), _dump_json(extra))


def sidecar_path(out: str, name: str) -> Path:
    p = Path(out)
    return p.with_name(f"{p.stem}.{name}.json")


def _write(path: str | None, text: str):
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", newline="") as fh:
        fh.write(text)


# -- subcommands -------------------------------------------------------------


def cmd_field(cfg: RunConfig) -> int:
    consts = cfg.validate()
    state = cfg.state()
    lo, hi = cfg.range if cfg.range is not None else (-state.period, 0.0)
    n = cfg.grid if cfg.grid is not None else 1001
    x = np.linspace(lo, hi, n)
    v = np.atleast_1d(wavefield.velocity_at(state, consts, x))
    Q = np.atleast_1d(wavefield.quantum_potential_at(state, consts, x))
    R = np.abs(wavefield.wavefunction(state, x)[0])
    emit(cfg, ("x", "v", "Q", "R"), zip(x, v, Q, R))
    return 0


def _barrier_crossing_time(sol, b, consts) -> float:
    current = barrier_mod.probability_current(sol, consts)

    def density(x):
        psi, _ = barrier_mod.barrier_wavefunction(sol, b, x)
        return float(abs(psi) ** 2)

    return quad(density, b.x_left, b.x_right, limit=200)[0] / current


def cmd_traj(cfg: RunConfig) -> int:
    consts = cfg.validate()
    tol = cfg.tol if cfg.tol is not None else trajectory.DEFAULT_TOL
    k = cfg.wavenumber()
    period = math.pi / k
    x0 = cfg.x0 if cfg.x0 is not None else -20.0 * period
    diag: dict = {"k": k, "x0": x0, "tol": tol}

    if cfg.V0 is None:
        state = cfg.state()
        diag.update(mode="free", rho=state.rho, phi=state.phi)
        if cfg.t_end is not None:
            t_end = cfg.t_end
        elif state.degenerate:
            t_end = 20.0 * period / consts.speed(k)
        else:
            t_end = trajectory.time_of_flight(state, consts, x0, x0 + 20.0 * period)
        run = lambda: trajectory.integrate_state(state, consts, x0, t_end, tol)  # noqa: E731
        x_limit = None
        v_theory = wavefield.average_velocity(state.rho, consts.speed(k))
    else:
        b = barrier_mod.SquareBarrier(cfg.V0, cfg.a if cfg.a is not None else 1.0)
        sol = barrier_mod.solve_barrier(b, consts.energy(k), consts)
        incident = sol.incident_state()
        diag.update(mode="barrier", V0=b.V0, a=b.a, E=sol.E, rho=incident.rho, phi=incident.phi, T_sq=sol.transmission)
        if cfg.t_end is not None:
            t_end = cfg.t_end
        else:
            t_end = (
                trajectory.time_of_flight(incident, consts, x0, b.x_left)
                + _barrier_crossing_time(sol, b, consts)
                + 4.0 * period / consts.speed(k)
            )
        run = lambda: trajectory.integrate_barrier(sol, b, consts, x0, t_end, tol)  # noqa: E731
        x_limit = b.x_left
        v_theory = wavefield.average_velocity(incident.rho, consts.speed(k))
    diag["t_end"] = t_end
    diag["v_av_theory"] = v_theory

    try:
        traj = run()
    except StallError as exc:
        diag.update(status="stalled", stall_x=exc.x, stall_t=exc.t, v_av=0.0)
        emit(cfg, ("t", "x", "v", "Q"), [], diag, "diagnostics")
        raise

    diag.update(traj.diagnostics())
    diag["status"] = "ok"
    try:
        diag["v_av"] = trajectory.measure_average_velocity(traj, k, x_limit=x_limit)
    except BohmError:
        diag["v_av"] = None
    if cfg.V0 is not None:
        inside = (traj.x >= b.x_left) & (traj.x <= b.x_right)
        diag["crossed_barrier"] = bool(traj.x[-1] > b.x_right)
        diag["v_min_inside"] = float(traj.v[inside].min()) if inside.any() else None
    emit(cfg, ("t", "x", "v", "Q"), traj.samples, diag, "diagnostics")
    return 0


def cmd_srcheck(cfg: RunConfig) -> int:
    consts = cfg.validate()
    c = consts.c
    if cfg.kind == "photon":
        lo, hi = cfg.range if cfg.range is not None else (1.0, 100.0)
        floor = 1.0
    else:
        lo, hi = cfg.range if cfg.range is not None else (math.sqrt(2.0), 1000.0)
        floor = math.sqrt(2.0)
    if lo < floor * (1.0 - 1e-12):
        raise DomainError(f"v0 grid starts at {lo!r} c, below the floor {floor!r} c for kind={cfg.kind}")
    n = cfg.grid if cfg.grid is not None else 200
    grid = np.array([lo]) if n == 1 or lo == hi else np.geomspace(lo, hi, n)
    rows = []
    for v0 in np.maximum(grid, floor) * c:
        rep = relativity.sr_report(relativity.SRParticle(consts.m0, c, float(v0)), cfg.kind)
        rows.append(dataclasses.astuple(rep))
    emit(cfg, [f.name for f in dataclasses.fields(relativity.SRReport)], rows)
    return 0 if all(r[-1] for r in rows) else 1


def cmd_fig1(cfg: RunConfig) -> int:
    consts = cfg.validate()
    E0 = consts.rest_energy
    lo, hi = cfg.range if cfg.range is not None else (1.0, 10.0)
    n = cfg.grid if cfg.grid is not None else 901
    table = relativity.transmission_curve(lo * E0, hi * E0, n, consts)
    tol = cfg.tol if cfg.tol is not None else 1e-10
    E_res = relativity.locate_resonance(consts, tol * E0)
    T_peak = relativity.massive_transmission_sq(relativity.SRParticle.from_energy(E_res, consts))
    summary = {
        "resonance_E_over_E0": E_res / E0,
        "peak_T_sq": T_peak,
        "first_T_sq": float(table[0, 1]),
        "last_T_sq": float(table[-1, 1]),
    }
    emit(cfg, ("E_over_E0", "T_sq"), table, summary)
    return 0


def cmd_barrier_scan(cfg: RunConfig) -> int:
    consts = cfg.validate()
    b = barrier_mod.SquareBarrier(cfg.V0 if cfg.V0 is not None else 50.0, cfg.a if cfg.a is not None else 10.0)
    lo, hi = cfg.range if cfg.range is not None else (0.05, 0.2)
    n = cfg.grid if cfg.grid is not None else 25
    slope = None
    if not cfg.no_fit:
        slope = barrier_mod.thick_barrier_scaling(b, (lo, hi), consts, n)
    v0s = np.array([lo]) if n == 1 or lo == hi else np.geomspace(lo, hi, n)
    table = barrier_mod.scan_barrier(b, v0s, consts)
    emit(cfg, ("v0", "T_sq", "v_av"), table, {"V0": b.V0, "a": b.a, "slope": slope})
    return 0


HANDLERS = {
    "field": cmd_field,
    "traj": cmd_traj,
    "srcheck": cmd_srcheck,
    "fig1": cmd_fig1,
    "barrier-scan": cmd_barrier_scan,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        return HANDLERS[cfg.command](cfg)
    except BohmError as exc:
        print(f"bohmsr {args.command}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (TypeError, ValueError) as exc:
        print(f"bohmsr {args.command}: invalid parameters: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"bohmsr {args.command}: I/O error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
