"""Command-line front end.

    jeft helgason  --model h2 [--lambda L] [--bump CENTER_R,SUPPORT | --suite K]
    jeft jeft      --model h3 --lambda 1.0
    jeft poisson   --model h2 --mode 1
    jeft spherical --model h3 --lambda 1.0
    jeft inverse   --model h2
    jeft verify    --model h2 [--check lemma2 ...] [--out manifest.json]

Transform subcommands write CSV (header, 17 significant digits, LF endings);
``verify`` writes a JSON manifest.  Exit codes: 0 success / all checks passed,
1 a verification failed, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import sys
from pathlib import Path

import numpy as np

from .geometry import DomainError, GridSizes, ModelParams, build_grids, sample_points
from .specfun import SphericalEvaluator
from .testfns import SUITE_NAMES, make_bump, suite
from .transforms import (
    HelgasonGrid,
    NotRadialError,
    helgason_grid,
    helgason_transform,
    inverse_helgason,
    jeft_composed,
    jeft_direct,
    poisson_transform,
    spherical_transform,
)
from .verify import CHECKS, VerifyConfig, manifest, run_checks

SUBCOMMANDS = ("helgason", "jeft", "poisson", "spherical", "inverse", "verify")

# config-file keys that mirror command-line flags
FLAG_KEYS = ("model", "nr", "nb", "nlambda", "radius", "lambda_max", "workers", "lambda", "bump", "suite", "mode", "route", "points")
VERIFY_KEYS = tuple(f.name for f in dataclasses.fields(VerifyConfig) if f.name not in ("model", "sizes", "workers"))


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="jeft", description="Fourier transforms on H^2 and H^3 (unit-ball models).")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in SUBCOMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--model", choices=("h2", "h3"), required=True)
        s.add_argument("--config", type=Path, help="file of 'key = value' lines; flags take precedence")
        s.add_argument("--nr", type=int, help="radial Gauss nodes")
        s.add_argument("--nb", help="boundary nodes (H^3: K for KxK2 or P,A)")
        s.add_argument("--nlambda", type=int, help="spectral Gauss nodes")
        s.add_argument("--radius", type=float, help="support radius R")
        s.add_argument("--lambda-max", dest="lambda_max", type=float, help="spectral cutoff Lambda")
        s.add_argument("--out", type=Path, help="output path (default: standard output)")
        s.add_argument("--workers", type=int, help="threads for grid fills")
        if name == "verify":
            s.add_argument("--check", action="append", choices=CHECKS, help="run only this check (repeatable)")
            s.add_argument("--timings", action="store_true", help="include wall times in the manifest")
            s.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a harness setting")
        else:
            s.add_argument("--lambda", dest="lam", type=float, help="single spectral value")
            fsel = s.add_mutually_exclusive_group()
            fsel.add_argument("--bump", help="CENTER_R,SUPPORT: bump at geodesic distance CENTER_R from o")
            fsel.add_argument("--suite", type=int, help=f"suite member 0-{len(SUITE_NAMES) - 1}")
        if name in ("jeft", "poisson", "inverse"):
            s.add_argument("--points", type=int, help="number of evaluation points (first is o)")
        if name == "jeft":
            s.add_argument("--route", choices=("direct", "composed"), help="definition or Poisson-of-Helgason")
        if name == "poisson":
            s.add_argument("--mode", type=int, help="boundary data: k-th Fourier mode (0 = constant)")
    return p


# -- configuration ----------------------------------------------------------


def read_config(path: Path, allowed) -> dict:
    try:
        text = path.read_text()
    except OSError as e:
        raise UsageError(f"cannot read config {path}: {e.strerror}") from None
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (t.strip() for t in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in allowed:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def _parse_nb(text, dim):
    if text is None:
        return None
    parts = [int(t) for t in str(text).replace("x", ",").split(",") if t.strip()]
    if dim == 2:
        if len(parts) != 1:
            raise UsageError("--nb for h2 is a single integer")
        return parts[0]
    if len(parts) == 1:
        return (parts[0], 2 * parts[0])
    if len(parts) == 2:
        return tuple(parts)
    raise UsageError("--nb for h3 is K or P,A")


def _parse_value(raw, kind):
    if raw is None or not isinstance(raw, str):
        return raw
    try:
        if kind is bool:
            return raw.lower() in ("1", "true", "yes")
        return kind(raw)
    except ValueError:
        raise UsageError(f"bad value {raw!r}") from None


def _merged(args, allowed) -> dict:
    """Config file values overridden by explicit flags."""
    cfg = read_config(args.config, allowed) if args.config else {}
    flags = {
        "model": args.model,
        "nr": args.nr,
        "nb": args.nb,
        "nlambda": args.nlambda,
        "radius": args.radius,
        "lambda_max": args.lambda_max,
        "workers": args.workers,
    }
    for opt, key in (("lam", "lambda"), ("bump", "bump"), ("suite", "suite"), ("mode", "mode"), ("route", "route"), ("points", "points")):
        if hasattr(args, opt):
            flags[key] = getattr(args, opt)
    for k, v in flags.items():
        if v is not None:
            cfg[k] = v
    return cfg


def _model_and_sizes(cfg: dict):
    try:
        dim = {"h2": 2, "h3": 3}[str(cfg["model"]).lower()]
    except KeyError:
        raise UsageError("model must be h2 or h3") from None
    kw = {}
    if "radius" in cfg:
        kw["support_radius"] = _parse_value(cfg["radius"], float)
    if "lambda_max" in cfg:
        kw["spectral_cutoff"] = _parse_value(cfg["lambda_max"], float)
    try:
        model = ModelParams(dim=dim, **kw)
        sizes = GridSizes.default(dim)
        if "nr" in cfg:
            sizes = sizes.replace(n_radial=_parse_value(cfg["nr"], int))
        if "nb" in cfg:
            sizes = sizes.replace(n_boundary=_parse_nb(cfg["nb"], dim))
        if "nlambda" in cfg:
            sizes = sizes.replace(n_spectral=_parse_value(cfg["nlambda"], int))
        build_grids(model, sizes)
    except ValueError as e:
        raise UsageError(str(e)) from None
    return model, sizes


def _function(cfg: dict, model: ModelParams):
    try:
        if cfg.get("bump") is not None:
            parts = [float(t) for t in str(cfg["bump"]).split(",")]
            if len(parts) != 2:
                raise UsageError("--bump expects CENTER_R,SUPPORT")
            return make_bump(model, parts[1], center_r=parts[0])
        k = _parse_value(cfg.get("suite", 0), int)
        if not 0 <= k < len(SUITE_NAMES):
            raise UsageError(f"--suite must be in 0..{len(SUITE_NAMES) - 1}")
        return suite(model)[k]
    except ValueError as e:
        raise UsageError(str(e)) from None


# -- output -----------------------------------------------------------------


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_csv(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def _coord_names(dim, prefix):
    return [f"{prefix}{i}" for i in range(dim)]


def _grid_csv(lam, pts, values, prefix) -> str:
    """Rows (lambda, point) in lambda-major order."""
    dim = pts.shape[1]
    header = ["lambda_re", "lambda_im", *_coord_names(dim, prefix), "value_re", "value_im"]
    lam = np.asarray(lam, dtype=complex).reshape(-1)
    values = np.asarray(values).reshape(len(lam), len(pts))
    rows = (
        (lam[i].real, lam[i].imag, *pts[j], values[i, j].real, values[i, j].imag)
        for i in range(len(lam))
        for j in range(len(pts))
    )
    return write_csv(header, rows)


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, newline="\n")


# -- subcommands ------------------------------------------------------------


def _lams(cfg, grid):
    if cfg.get("lambda") is not None:
        return np.array([_parse_value(cfg["lambda"], float)])
    return grid.spectral_nodes


def _points(cfg, model):
    n = _parse_value(cfg.get("points", 40), int)
    if n < 1:
        raise UsageError("--points must be >= 1")
    return sample_points(model.dim, n, min(1.5, 3 * model.support_radius / 8), seed=1)


def cmd_transform(command: str, cfg: dict) -> str:
    model, sizes = _model_and_sizes(cfg)
    grid = build_grids(model, sizes)
    workers = _parse_value(cfg.get("workers", 1), int)
    lam = _lams(cfg, grid)
    if command == "poisson":
        k = _parse_value(cfg.get("mode", 0), int)
        b = grid.boundary.nodes
        data = (b[:, 0] + 1j * b[:, 1]) ** abs(k) if k else np.ones(len(b))
        if k < 0:
            data = np.conj(data)
        x = _points(cfg, model)
        vals = poisson_transform(data, lam, x, grid, workers=workers)
        return _grid_csv(lam, x, vals, "x")
    f = _function(cfg, model)
    if command == "helgason":
        vals = helgason_transform(f, lam, grid.boundary.nodes, grid, workers=workers)
        return _grid_csv(lam, grid.boundary.nodes, vals, "b")
    if command == "jeft":
        x = _points(cfg, model)
        if cfg.get("route", "direct") == "composed":
            vals = jeft_composed(f, lam, x, grid, workers=workers)
        else:
            vals = jeft_direct(f, lam, x, grid)
        return _grid_csv(lam, x, vals, "x")
    if command == "spherical":
        vals = spherical_transform(f, lam, grid, SphericalEvaluator(model))
        vals = np.atleast_1d(vals)
        rows = ((l.real, l.imag, v.real, v.imag) for l, v in zip(lam.astype(complex), vals))
        return write_csv(["lambda_re", "lambda_im", "value_re", "value_im"], rows)
    if command == "inverse":
        F: HelgasonGrid = helgason_grid(f, grid, workers=workers)
        x = _points(cfg, model)
        vals = np.atleast_1d(inverse_helgason(F, x, workers=workers))
        header = [*_coord_names(model.dim, "x"), "value_re", "value_im", "exact"]
        exact = f(x)
        rows = ((*x[j], vals[j].real, vals[j].imag, exact[j]) for j in range(len(x)))
        return write_csv(header, rows)
    raise UsageError(f"unknown command {command}")


def cmd_verify(args, cfg: dict) -> tuple[str, bool]:
    model, sizes = _model_and_sizes(cfg)
    overrides = {}
    for item in args.set:
        if "=" not in item:
            raise UsageError(f"--set expects KEY=VALUE, got {item!r}")
        k, v = (t.strip() for t in item.split("=", 1))
        cfg[k.replace("-", "_")] = v
    fields = {f.name: f for f in dataclasses.fields(VerifyConfig)}
    base = VerifyConfig.for_model(model, sizes)
    for k in VERIFY_KEYS:
        if k in cfg:
            overrides[k] = _coerce(cfg[k], getattr(base, k))
    unknown = [k for k in cfg if k not in FLAG_KEYS and k not in fields]
    if unknown:
        raise UsageError(f"unknown setting(s): {', '.join(unknown)}")
    overrides["workers"] = _parse_value(cfg.get("workers", 1), int)
    try:
        vcfg = VerifyConfig.for_model(model, sizes, **overrides)
        reports = run_checks(vcfg, args.check)
    except DomainError as e:
        raise UsageError(str(e)) from None
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        sys.stderr.write(f"{status} {r.name}: {r.max_rel_error:.3e} (tol {r.tolerance:.1e})\n")
        for c in r.failed():
            sys.stderr.write(f"    failed {c.name}: {c.value:.3e} vs {c.bound} {c.tolerance:.1e}\n")
    return manifest(vcfg, reports, timings=args.timings), all(r.passed for r in reports)


def _coerce(raw, like):
    """Parse ``raw`` into the type of the default ``like``."""
    if not isinstance(raw, str):
        return raw
    if isinstance(like, bool):
        return _parse_value(raw, bool)
    if isinstance(like, int):
        try:
            return int(raw)
        except ValueError:
            pass
    if isinstance(like, (int, float)):
        return _parse_value(raw, float)
    if isinstance(like, tuple):
        parts = [t.strip() for t in raw.strip("()[] ").split(",") if t.strip()]
        try:
            return tuple(float(t) if "." in t or "e" in t.lower() else int(t) for t in parts)
        except ValueError:
            raise UsageError(f"bad tuple {raw!r}") from None
    return raw


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "verify":
            cfg = _merged(args, set(FLAG_KEYS) | set(VERIFY_KEYS))
            text, ok = cmd_verify(args, cfg)
            _emit(text, args.out)
            return 0 if ok else 1
        cfg = _merged(args, FLAG_KEYS)
        text = cmd_transform(args.command, cfg)
        _emit(text, args.out)
        return 0
    except UsageError as e:
        sys.stderr.write(f"jeft: error: {e}\n")
        return 2
    except (NotRadialError, DomainError) as e:
        sys.stderr.write(f"jeft: error: {e}\n")
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
