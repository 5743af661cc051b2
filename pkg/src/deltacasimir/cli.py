"""Command-line front end.

Every subcommand writes one JSON object ``{"meta": ..., "rows": [...]}`` or
a CSV table whose first line is ``# <meta as JSON>``. ``meta["config"]``
holds the full run configuration and parses back with
:meth:`RunConfig.from_dict`.

Exit codes: 0 success, 1 invalid configuration or input, 2 numerical
non-convergence, 3 capability rejection. ``verify`` exits 1 when any check
fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

import numpy as np

from .errors import (BracketError, CapabilityError, ConvergenceError, DeltaCasimirError,
                     OrderError)
from .models import Geometry, Model, Space, trace_resolvent_diff
from .numerics import QuadratureSpec

COMMANDS = ("trace", "measure", "zeta", "residue", "eta", "partition", "energy", "force",
            "spectrum", "constants", "verify", "sweep")
SWEEP_VARS = {"a": "a", "v": "v", "s_re": "s_re", "beta": "beta", "lambda_re": "lambda_re"}
SWEEPABLE = ("trace", "measure", "zeta", "residue", "eta", "partition", "energy", "force")
OUTDIR_ENV = "DELTACASIMIR_OUTDIR"


class ConfigError(DeltaCasimirError):
    """Invalid command line or parameter combination."""


@dataclass(frozen=True)
class RunConfig:
    """Parsed command line; echoed verbatim into the output metadata."""

    command: str
    geometry: str = "whole"
    dim: int = 1
    g_R: float | None = None
    b: float | None = None
    a: float = 1.0
    beta: float | None = None
    ell: float = 1.0
    tau: float | None = None
    s_re: float | None = None
    s_im: float = 0.0
    lambda_re: float | None = None
    lambda_im: float = 0.0
    v: float | None = None
    levels: int = 5
    variant: str = "derived"
    allow_bound_state: bool = False
    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    max_subdivisions: int = 4000
    tail_cutoff: float = 50.0
    tail_order: int = 12
    out_format: str = "json"
    out_path: str | None = None
    inner: str | None = None
    var: str | None = None
    start: float | None = None
    stop: float | None = None
    count: int | None = None
    scale: str = "linear"
    jobs: int = 1

    # -- serialisation ------------------------------------------------------

    def to_dict(self) -> dict:
        d = asdict(self)
        for k, v in d.items():
            if isinstance(v, float) and not math.isfinite(v):
                d[k] = str(v)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        names = {f.name for f in fields(cls)}
        kw = {}
        for k, v in d.items():
            if k not in names:
                raise ConfigError(f"unknown config field {k!r}")
            kw[k] = float(v) if isinstance(v, str) and v in ("inf", "-inf", "nan") else v
        return cls(**kw)

    # -- derived objects ----------------------------------------------------

    @property
    def quad(self) -> QuadratureSpec:
        try:
            return QuadratureSpec(self.abs_tol, self.rel_tol, self.max_subdivisions,
                                  self.tail_cutoff, self.tail_order)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    @property
    def geo(self) -> Geometry:
        return Geometry(Space(self.geometry), self.dim)

    def model(self) -> Model:
        if self.g_R is None and self.b is None:
            raise ConfigError("one of --gr or --b is required")
        if self.g_R is not None and self.b is not None:
            raise ConfigError("--gr and --b are mutually exclusive")
        if self.b is not None:
            return Model.from_b(self.geo, self.b, self.a)
        return Model(self.geo, self.g_R, self.a)


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _real(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    m = common.add_argument_group("model")
    m.add_argument("--geometry", choices=("whole", "half"), default="whole")
    m.add_argument("--dim", type=int, choices=(1, 2, 3), default=1)
    m.add_argument("--gr", dest="g_R", type=_real, help="renormalised coupling (inf allowed)")
    m.add_argument("--b", type=_real, help="reduced coupling instead of --gr")
    m.add_argument("--a", type=_real, default=1.0, help="delta position / wall distance")
    m.add_argument("--variant", choices=("derived", "paper"), default="derived",
                   help="derived formulas or the displayed reference formulas")
    m.add_argument("--allow-bound-state", action="store_true",
                   help="evaluate thermodynamic quantities from the continuum only")
    p = common.add_argument_group("inputs")
    p.add_argument("--lambda-re", type=_real)
    p.add_argument("--lambda-im", type=_real, default=0.0)
    p.add_argument("--v", type=_real)
    p.add_argument("--s-re", type=_real)
    p.add_argument("--s-im", type=_real, default=0.0)
    p.add_argument("--beta", type=_real)
    p.add_argument("--tau", type=_real)
    p.add_argument("--ell", type=_real, default=1.0)
    p.add_argument("--levels", type=int, default=5)
    q = common.add_argument_group("quadrature")
    q.add_argument("--abs-tol", type=_real, default=1e-10)
    q.add_argument("--rel-tol", type=_real, default=1e-9)
    q.add_argument("--max-subdivisions", type=int, default=4000)
    q.add_argument("--tail-cutoff", type=_real, default=50.0)
    q.add_argument("--tail-order", type=int, default=12)
    o = common.add_argument_group("output")
    o.add_argument("--format", dest="out_format", choices=("json", "csv"), default="json")
    o.add_argument("--out", dest="out_path", help=f"output file (relative to ${OUTDIR_ENV} if set)")

    parser = _Parser(prog="deltacasimir", description="Relative zeta functions and Casimir "
                     "quantities for point interactions")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "sweep":
            sp.add_argument("--inner", required=True, choices=SWEEPABLE, help="command to sweep")
            sp.add_argument("--var", required=True, choices=tuple(SWEEP_VARS))
            sp.add_argument("--start", type=_real, required=True)
            sp.add_argument("--stop", type=_real, required=True)
            sp.add_argument("--count", type=int, required=True)
            sp.add_argument("--scale", choices=("linear", "log"), default="linear")
            sp.add_argument("--jobs", type=int, default=1)
    return parser


def parse_config(argv) -> RunConfig:
    return RunConfig(**vars(build_parser().parse_args(argv)))


# ---------------------------------------------------------------------------
# evaluation


def _need(cfg: RunConfig, *names):
    for n in names:
        if getattr(cfg, n) is None:
            raise ConfigError(f"--{n.replace('_', '-')} is required for {cfg.command}")


def _c(re, im=0.0) -> complex:
    return complex(re, im)


def _complex_cols(prefix: str, z) -> dict:
    z = complex(z)
    return {f"{prefix}_re": z.real, f"{prefix}_im": z.imag}


def evaluate(cfg: RunConfig):
    """Run one non-sweep command; returns ``(rows, meta_extra)``."""
    cmd = cfg.command
    spec = cfg.quad
    variant = cfg.variant
    if cmd == "constants":
        from .thermo import In_constants

        c = In_constants(spec)
        return [{"I0": c.I0, "I1": c.I1, "I2": c.I2, "err_est": float(c.err_est)}], {}
    model = cfg.model()
    if cmd == "trace":
        _need(cfg, "lambda_re")
        lam = _c(cfg.lambda_re, cfg.lambda_im)
        r = trace_resolvent_diff(model, lam, variant=variant)
        return [{"lambda_re": lam.real, "lambda_im": lam.imag, **_complex_cols("r", r)}], {}
    if cmd == "measure":
        from .spectral import e_infinity, spectral_measure

        _need(cfg, "v")
        e = float(spectral_measure(model, cfg.v, variant))
        einf = float(e_infinity(model, cfg.v))
        return [{"v": cfg.v, "e": e, "e0": e - einf, "e_inf": einf}], {}
    if cmd == "zeta":
        from .zeta import relative_zeta

        _need(cfg, "s_re")
        z = relative_zeta(model, _c(cfg.s_re, cfg.s_im), spec, variant)
        row = {"s_re": z.s.real, "s_im": z.s.imag, **_complex_cols("zeta", z.value),
               **_complex_cols("zeta0", z.zeta0), **_complex_cols("zeta_inf", z.zeta_inf),
               "strip_ok": z.strip_ok}
        return [row], {"err_est": z.err_est}
    if cmd == "residue":
        from .thermo import laurent_data
        from .zeta import residue_closed

        lz = laurent_data(model, spec, variant)
        row = {"a": model.a, "residue": lz.residue.real, "finite_part": lz.finite_part.real}
        extra = {}
        try:
            row["residue_displayed"] = residue_closed(model, "paper")
            extra["residue_variant"] = "paper-stated" if variant == "paper" else "zeta-inf-derived"
        except CapabilityError:
            pass
        return [row], extra
    if cmd == "eta":
        from .thermo import log_eta

        tau = cfg.tau if cfg.tau is not None else cfg.beta
        if tau is None:
            raise ConfigError("--tau (or --beta) is required for eta")
        return [{"tau": tau, "log_eta": log_eta(model, tau, spec, cfg.allow_bound_state)}], {}
    if cmd == "partition":
        from .thermo import ThermalParams, log_partition

        _need(cfg, "beta")
        th = ThermalParams(cfg.beta, cfg.ell)
        val = log_partition(model, th, spec, variant, cfg.allow_bound_state)
        return [{"beta": cfg.beta, "ell": cfg.ell, "log_z": val}], _residue_flag(model, variant)
    if cmd == "energy":
        from .thermo import casimir_energy

        val = casimir_energy(model, cfg.ell, spec, variant, cfg.allow_bound_state)
        return [{"a": model.a, "ell": cfg.ell, "energy": val}], _residue_flag(model, variant)
    if cmd == "force":
        from .thermo import casimir_force

        p, err = casimir_force(model, cfg.ell, spec, variant, with_error=True)
        return [{"a": model.a, "force": p, "err_est": err}], _residue_flag(model, variant)
    if cmd == "spectrum":
        from .bound_states import point_spectrum

        res = point_spectrum(model, cfg.levels)
        rows = [{"k": k, "eigenvalue": lam} for k, lam in enumerate(res.eigenvalues, 1)]
        extra = {"has_bound_state": res.has_bound_state, "threshold": res.threshold,
                 "method": res.method, "statement_has_bound_state": res.statement_has_bound_state}
        return rows, extra
    raise ConfigError(f"command {cmd!r} cannot be evaluated directly")


def _residue_flag(model: Model, variant: str) -> dict:
    if model.geometry.label == "H3":
        return {"residue_variant": "paper-stated" if variant == "paper" else "zeta-inf-derived"}
    return {}


def _sweep_point(cfg: RunConfig):
    rows, extra = evaluate(cfg)
    if len(rows) != 1:
        raise ConfigError(f"{cfg.command} does not produce a single row per point")
    return rows[0], extra


def sweep_grid(cfg: RunConfig) -> np.ndarray:
    if cfg.count is None or cfg.count < 1:
        raise ConfigError("--count must be at least 1")
    if cfg.scale == "log":
        if not (cfg.start > 0 and cfg.stop > 0):
            raise ConfigError("log grids need positive --start and --stop")
        return np.geomspace(cfg.start, cfg.stop, cfg.count)
    return np.linspace(cfg.start, cfg.stop, cfg.count)


def run_sweep(cfg: RunConfig):
    """Evaluate the inner command on the grid; row order follows the grid."""
    if cfg.jobs < 1:
        raise ConfigError("--jobs must be at least 1")
    base = replace(cfg, command=cfg.inner)
    points = [replace(base, **{SWEEP_VARS[cfg.var]: float(x)}) for x in sweep_grid(cfg)]
    if cfg.jobs == 1:
        results = [_sweep_point(p) for p in points]
    else:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_sweep_point, points))
    rows = [r for r, _ in results]
    extra = dict(results[0][1]) if results else {}
    errs = [e.get("err_est") for _, e in results if e.get("err_est") is not None]
    if errs:
        extra["err_est"] = max(errs)
    return rows, extra


# ---------------------------------------------------------------------------
# output


def fmt_number(x):
    """Scientific notation with 15 significant digits; non-finite values as strings."""
    if isinstance(x, (bool, np.bool_)) or x is None or isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x) + 0.0  # drops the sign of zero
    if not math.isfinite(x):
        return str(x)
    return f"{x:.14e}"


def _json(v) -> str:
    """JSON text with numbers kept in :func:`fmt_number` form."""
    if isinstance(v, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json(x)}" for k, x in v.items()) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_json(x) for x in v) + "]"
    if isinstance(v, (bool, np.bool_)) or v is None:
        return json.dumps(bool(v) if v is not None else None)
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, (float, np.floating)) and not math.isfinite(v):
        return json.dumps(str(float(v)))
    return str(fmt_number(v))


def render(meta: dict, rows: list[dict], out_format: str) -> str:
    if out_format == "json":
        return _json({"meta": meta, "rows": rows}) + "\n"
    buf = io.StringIO()
    buf.write("# " + _json(meta) + "\n")
    header = list(rows[0]) if rows else []
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_csv_cell(fmt_number(r[k])) for k in header])
    return buf.getvalue()


def _csv_cell(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    return "" if v is None else v


def parse_output(text: str, out_format: str):
    """Inverse of :func:`render` (values as floats, bools and strings)."""
    if out_format == "json":
        d = json.loads(text)
        return d["meta"], d["rows"]
    lines = text.splitlines()
    meta = json.loads(lines[0][2:])
    reader = csv.DictReader(lines[1:])
    rows = []
    for r in reader:
        row = {}
        for k, v in r.items():
            if v in ("true", "false"):
                row[k] = v == "true"
            else:
                try:
                    row[k] = float(v) if any(ch in v for ch in ".en") else int(v)
                except ValueError:
                    row[k] = v
        rows.append(row)
    return meta, rows


def _resolve_out(path: str) -> Path:
    p = Path(path)
    base = os.environ.get(OUTDIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _emit(text: str, cfg: RunConfig):
    if cfg.out_path:
        _resolve_out(cfg.out_path).write_text(text)
    else:
        sys.stdout.write(text)


def run(cfg: RunConfig) -> int:
    """Execute a parsed configuration and write its output."""
    if cfg.command == "verify":
        from .verify import full_report

        rep = full_report(cfg.quad)
        sys.stdout.write(rep.table() + "\n")
        if cfg.out_path:
            meta = {"config": cfg.to_dict(), "passed": rep.passed}
            rows = [{k: (str(v) if k in ("value", "reference") else v) for k, v in c.items()}
                    for c in rep.as_dicts()]
            _resolve_out(cfg.out_path).write_text(render(meta, rows, cfg.out_format))
        return 0 if rep.passed else 1
    if cfg.command == "sweep":
        if cfg.var is None or cfg.inner is None:
            raise ConfigError("sweep needs --inner and --var")
        rows, extra = run_sweep(cfg)
    else:
        rows, extra = evaluate(cfg)
    meta = {"config": cfg.to_dict(), "tolerances": asdict(cfg.quad), "variant": cfg.variant, **extra}
    _emit(render(meta, rows, cfg.out_format), cfg)
    return 0


def main(argv=None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
        return run(cfg)
    except ConfigError as exc:
        print(f"deltacasimir: config error: {exc}", file=sys.stderr)
        return 1
    except CapabilityError as exc:
        print(f"deltacasimir: CapabilityError: {exc}", file=sys.stderr)
        return 3
    except (ConvergenceError, BracketError, OrderError) as exc:
        print(f"deltacasimir: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (DeltaCasimirError, ValueError) as exc:
        print(f"deltacasimir: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
