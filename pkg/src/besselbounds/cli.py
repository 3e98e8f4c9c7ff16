"""Command-line front end.

Subcommands: ``tabulate`` (oracle/bound table as CSV), ``verify`` (scan the
whole claim catalog), ``sharpness`` (fit error orders against the expected
constants), ``conjecture`` (map s = 1/(4P**2) - x**2 - nu**2), ``explore``
(integrate one rescaled-Riccati trajectory, or a seeded random batch).

Configuration precedence: command-line flags > ``--config`` key=value file
> built-in defaults.  Exit codes: 0 success, 1 claim violation, 2 usage
error, 3 oracle failure rate above 1%.  All CSV output uses '.' decimals,
17 significant digits and LF line endings so runs diff cleanly.
"""

import argparse
import math
import os
import sys
from dataclasses import dataclass, fields
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import nullclines as nc
from . import oracle
from . import riccati_lab
from . import verify
from .errors import BesselBoundsError, DomainError, EvaluationError
from .nullclines import EvalPoint

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_ORACLE = 3

ORACLE_FAILURE_LIMIT = 0.01      # above this failure fraction -> exit 3
_FMT = "%.17g"

_TABULATE_COLUMNS = (
    "nu", "x", "i_ratio", "k_ratio", "product", "U_I", "U_K",
    "lambda_I", "lambda_K", "lambda_O", "w_I", "w_K", "w_O",
    "product_upper", "product_lower_trig",
)


@dataclass
class RunConfig:
    """Effective settings for one CLI run (flags merged over config file)."""

    command: str = ""
    nu_min: float = -1.0
    nu_max: float = 20.0
    nu_step: float = 0.25
    x_min: float = 1e-3
    x_max: float = 1e3
    x_points: int = 121
    nu: Optional[float] = None       # single-row override, kept verbatim
    x: Optional[float] = None        # single-column override
    tol: float = verify.DEFAULT_TOL
    out: Optional[str] = None
    seed: int = 0
    a: float = 0.0
    x0: float = 1.0
    y0: Optional[float] = None
    sample: int = 0
    corrupt_claim: Optional[str] = None

    def config_lines(self) -> List[str]:
        out = []
        for f in fields(self):
            if f.name == "command":
                continue
            v = getattr(self, f.name)
            if v is None:
                continue
            if isinstance(v, float):
                out.append("%s=%s" % (f.name, _FMT % v))
            else:
                out.append("%s=%s" % (f.name, v))
        return out


def _read_config_file(path: str) -> dict:
    """Flat key=value text; '#' starts a comment; unknown keys rejected."""
    known = {f.name: f for f in fields(RunConfig) if f.name != "command"}
    values = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise DomainError(f"cannot read config file: {exc}")
    for ln, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"config line {ln}: expected key=value, got {raw!r}")
        key, _, txt = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in known:
            raise DomainError(f"config line {ln}: unknown key {key!r}")
        txt = txt.strip()
        ftype = known[key].type
        try:
            if ftype in ("int", int) or key in ("x_points", "seed", "sample"):
                values[key] = int(txt)
            elif key in ("out", "corrupt_claim"):
                values[key] = txt
            else:
                values[key] = float(txt)
        except ValueError:
            raise DomainError(f"config line {ln}: bad value for {key}: {txt!r}")
    return values


def _merge_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    file_values = _read_config_file(args.config) if args.config else {}
    for f in fields(RunConfig):
        if f.name == "command":
            continue
        cli_val = getattr(args, f.name, None)
        if cli_val is not None:
            setattr(cfg, f.name, cli_val)
        elif f.name in file_values:
            setattr(cfg, f.name, file_values[f.name])
    return cfg


def _nu_list(cfg: RunConfig) -> List[float]:
    """Ranged orders with the natural numbers dropped (small-x log terms);
    an explicit --nu bypasses the exclusion."""
    if cfg.nu is not None:
        return [cfg.nu]
    if cfg.nu_step <= 0 or cfg.nu_max < cfg.nu_min:
        return []
    n = int(math.floor((cfg.nu_max - cfg.nu_min) / cfg.nu_step + 1e-9))
    vals = [cfg.nu_min + k * cfg.nu_step for k in range(n + 1)]
    return [v for v in vals if v < 0.0 or v != round(v)]


def _x_list(cfg: RunConfig) -> List[float]:
    if cfg.x is not None:
        return [cfg.x]
    if cfg.x_points <= 0:
        return []
    if cfg.x_points == 1:
        return [cfg.x_min]
    return list(np.geomspace(cfg.x_min, cfg.x_max, cfg.x_points))


def _open_out(cfg: RunConfig):
    if cfg.out is None:
        return sys.stdout
    return open(cfg.out, "w", newline="")


def _csv_row(values: Sequence[float]) -> str:
    return ",".join(_FMT % v for v in values)


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------

def cmd_tabulate(cfg: RunConfig) -> int:
    nus, xs = _nu_list(cfg), _x_list(cfg)
    stream = _open_out(cfg)
    close = stream is not sys.stdout
    try:
        stream.write(",".join(_TABULATE_COLUMNS) + "\n")
        if not nus or not xs:
            return EXIT_OK
        grid = verify.Grid(tuple(nus), tuple(xs))
        table = verify.OracleTable(grid)
        points = failures = 0
        for nu in nus:
            row = table.rows[nu]
            for i, x in enumerate(xs):
                points += 1
                p = EvalPoint(nu, x)
                if row.error is None:
                    iv, kv = float(row.phi0[i]), float(row.phi1[i])
                    pv = 1.0 / (x * (iv - kv))
                else:
                    iv = kv = pv = math.nan
                    failures += 1
                roots = nc.cubic_roots(p)
                ws = nc.w_values(p)
                pb = nc.product_bounds(p)
                stream.write(_csv_row((
                    nu, x, iv, kv, pv,
                    nc.trig_bound_I(p).value, nc.trig_bound_K(p).value,
                    roots.lambda_I, roots.lambda_K, roots.lambda_O,
                    ws.w_I, ws.w_K, ws.w_O,
                    pb.upper.value, pb.lower_trig.value,
                )) + "\n")
        if points and failures / points > ORACLE_FAILURE_LIMIT:
            print(f"oracle failures: {failures}/{points}", file=sys.stderr)
            return EXIT_ORACLE
        return EXIT_OK
    finally:
        if close:
            stream.close()


def _claim_filename(claim_id: str) -> str:
    return claim_id.replace("[", "-").replace("]", "") + ".csv"


def cmd_verify(cfg: RunConfig) -> int:
    nus, xs = _nu_list(cfg), _x_list(cfg)
    if not nus or not xs:
        for cid in verify.bound_claims():
            print(f"{cid}: WARNING 0 points (empty grid)")
        return EXIT_OK
    grid = verify.Grid(tuple(nus), tuple(xs))
    table = verify.OracleTable(grid)
    if cfg.out is not None:
        os.makedirs(cfg.out, exist_ok=True)
    failing: List[str] = []
    points = failures = 0
    for cid in verify.bound_claims():
        claim = verify.get_claim(cid)
        if cfg.corrupt_claim == cid:
            claim = verify.corrupt_claim(claim)
        rep = verify.scan_bound(claim, tol=cfg.tol, table=table)
        points += rep.points_checked
        failures += len(rep.oracle_failures)
        status = "OK" if rep.ok() else "VIOLATION"
        if not rep.ok():
            failing.append(rep.claim_id)
        extra = ""
        if rep.unverified:
            extra += f" unverified={len(rep.unverified)}"
        if rep.oracle_failures:
            extra += f" oracle_failures={len(rep.oracle_failures)}"
        if rep.points_checked == 0:
            print(f"{rep.claim_id}: WARNING 0 points{extra}")
        else:
            print(f"{rep.claim_id}: {status} points={rep.points_checked} "
                  f"violations={len(rep.violations)} "
                  f"worst_margin={_FMT % rep.worst_margin}{extra}")
        if cfg.out is not None:
            verify.write_report_csv(
                rep, os.path.join(cfg.out, _claim_filename(rep.claim_id)))
    if failing:
        print("failing claims: " + ", ".join(failing))
        return EXIT_VIOLATION
    if points and failures / (points + failures) > ORACLE_FAILURE_LIMIT:
        print(f"oracle failures: {failures}", file=sys.stderr)
        return EXIT_ORACLE
    return EXIT_OK


def cmd_sharpness(cfg: RunConfig) -> int:
    if cfg.out is not None:
        os.makedirs(cfg.out, exist_ok=True)
    reports = verify.sharpness_battery()
    bad = False
    for rep in reports:
        exp_k = rep.stats.get("expected_exponent", math.nan)
        exp_c = rep.stats.get("expected_coefficient", math.nan)
        if rep.fitted is None:
            msgs = "; ".join(m for _, _, m in rep.oracle_failures)
            print(f"{rep.claim_id}: UNFITTABLE ({msgs})")
            continue
        k, c = rep.fitted
        ok = bool(rep.stats["fit_ok"])
        bad = bad or not ok
        print(f"{rep.claim_id}: {'PASS' if ok else 'FAIL'} "
              f"exponent={k:.4f} (expected {exp_k:g} +-0.15) "
              f"coefficient={c:.6g} (expected {exp_c:.6g} +-10%)")
        if cfg.out is not None:
            verify.write_report_csv(rep, os.path.join(
                cfg.out, _claim_filename(rep.claim_id)))
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_conjecture(cfg: RunConfig) -> int:
    nus, xs = _nu_list(cfg), _x_list(cfg)
    if not nus or not xs:
        print("conjecture-scan: WARNING 0 points (empty grid)")
        return EXIT_OK
    grid = verify.Grid(tuple(nus), tuple(xs))
    rep = verify.conjecture_scan(grid=grid)
    st = rep.stats
    print(f"points={rep.points_checked} unverified={len(rep.unverified)} "
          f"oracle_failures={len(rep.oracle_failures)}")
    print(f"sup s = {_FMT % st['sup_s']} at (nu={st['sup_s_nu']:g}, "
          f"x={_FMT % st['sup_s_x']})")
    print(f"sup s (verified rows) = {_FMT % st['sup_s_verified']} at "
          f"(nu={st['sup_s_verified_nu']:g}, x={_FMT % st['sup_s_verified_x']})")
    print(f"margin to proved cap 1/3: {_FMT % st['margin_proved_cap']}")
    print(f"margin to conjectured cap 1/5: {_FMT % st['margin_conjectured_cap']}"
          f" (reported, not gated)")
    if cfg.out is not None:
        verify.write_report_csv(rep, cfg.out)
    if rep.violations:
        print(f"violations of the proved cap: {len(rep.violations)}")
        return EXIT_VIOLATION
    return EXIT_OK


def _explore_band(nu: float, x0: float) -> Tuple[float, float]:
    p = EvalPoint(nu, x0)
    lo = oracle.k_ratio(p).value
    hi = oracle.i_ratio(p).value
    return lo, hi


def cmd_explore(cfg: RunConfig) -> int:
    x_lo, x_hi = cfg.x_min, cfg.x_max
    if not (0 < x_lo < cfg.x0 < x_hi):
        print(f"explore needs x_min < x0 < x_max, got ({x_lo}, {cfg.x0}, {x_hi})",
              file=sys.stderr)
        return EXIT_USAGE
    if cfg.y0 is None and cfg.sample <= 0:
        print("explore needs --y0 or --sample N", file=sys.stderr)
        return EXIT_USAGE

    starts: List[Tuple[int, float]] = []
    if cfg.y0 is not None:
        starts.append((0, cfg.y0))
    if cfg.sample > 0:
        # seeded uniform draws strictly inside the two principal branches
        lo, hi = _explore_band(cfg.nu if cfg.nu is not None else 0.5, cfg.x0)
        rng = np.random.default_rng(cfg.seed)
        scale = cfg.x0 ** (-cfg.a)
        for k, t in enumerate(rng.uniform(0.02, 0.98, size=cfg.sample)):
            starts.append((k + 1, scale * (lo + t * (hi - lo))))

    nu = cfg.nu if cfg.nu is not None else 0.5
    stream = _open_out(cfg)
    close = stream is not sys.stdout
    summary = sys.stderr if stream is sys.stdout else sys.stdout
    try:
        stream.write("sample,x,y\n")
        for tag, y0 in starts:
            try:
                traj = riccati_lab.solve_riccati(cfg.a, nu, cfg.x0, y0, x_lo, x_hi)
            except (DomainError, EvaluationError) as exc:
                print(f"sample {tag}: y0={_FMT % y0} error: {exc}", file=summary)
                continue
            for x, y in traj.samples:
                stream.write("%d,%s,%s\n" % (tag, _FMT % x, _FMT % y))
            cls = riccati_lab.classify(traj)
            note = ""
            if traj.blow_up_x is not None:
                note = f" blow_up_x={_FMT % traj.blow_up_x}"
            if traj.extrema:
                pts = "; ".join(f"{kind} at x={_FMT % xm}"
                                for xm, kind in traj.extrema)
                note += f" extrema: {pts}"
            print(f"sample {tag}: y0={_FMT % y0} class={cls.value}{note}",
                  file=summary)
        return EXIT_OK
    finally:
        if close:
            stream.close()


# ----------------------------------------------------------------------
# argument parsing
# ----------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("grid")
    g.add_argument("--nu-min", dest="nu_min", type=float, help="lowest order (default -1)")
    g.add_argument("--nu-max", dest="nu_max", type=float, help="highest order (default 20)")
    g.add_argument("--nu-step", dest="nu_step", type=float, help="order step (default 0.25)")
    g.add_argument("--x-min", dest="x_min", type=float, help="lowest argument (default 1e-3)")
    g.add_argument("--x-max", dest="x_max", type=float, help="highest argument (default 1e3)")
    g.add_argument("--x-points", dest="x_points", type=int, help="log-spaced count (default 121)")
    g.add_argument("--nu", type=float, help="single order (overrides the range)")
    g.add_argument("--x", type=float, help="single argument (overrides the range)")
    common.add_argument("--tol", type=float, help="violation tolerance (default 1e-12)")
    common.add_argument("--out", help="output path (tabulate/explore/conjecture: CSV file; verify/sharpness: report directory)")
    common.add_argument("--config", help="key=value config file")
    common.add_argument("--seed", type=int, help="seed for randomized sampling (default 0)")
    common.add_argument("--dump-config", action="store_true",
                        help="print the effective config as key=value lines and exit")

    ap = argparse.ArgumentParser(
        prog="besselbounds",
        description="Evaluate, tabulate and verify ratio/product bounds for "
                    "the modified Bessel recurrence flows.")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("tabulate", parents=[common],
                   help="CSV table of oracle values, bounds and nullcline data")
    pv = sub.add_parser("verify", parents=[common],
                        help="scan every registered bound claim over the grid")
    pv.add_argument("--corrupt-claim", dest="corrupt_claim",
                    help="deliberately corrupt this claim id (self-test hook)")
    sub.add_parser("sharpness", parents=[common],
                   help="fit sharpness error orders against expected constants")
    sub.add_parser("conjecture", parents=[common],
                   help="map s = 1/(4P^2) - x^2 - nu^2 and report its supremum")
    pe = sub.add_parser("explore", parents=[common],
                        help="integrate rescaled-Riccati trajectories")
    pe.add_argument("--a", type=float, help="rescaling exponent (default 0)")
    pe.add_argument("--x0", type=float, help="initial abscissa (default 1)")
    pe.add_argument("--y0", type=float, help="initial value")
    pe.add_argument("--sample", type=int,
                    help="also run N seeded-random starts between the principal branches")
    return ap


_COMMANDS = {
    "tabulate": cmd_tabulate,
    "verify": cmd_verify,
    "sharpness": cmd_sharpness,
    "conjecture": cmd_conjecture,
    "explore": cmd_explore,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _merge_config(args)
    except BesselBoundsError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if getattr(args, "dump_config", False):
        for line in cfg.config_lines():
            print(line)
        return EXIT_OK
    try:
        return _COMMANDS[cfg.command](cfg)
    except BesselBoundsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
