"""Command-line surface: series computation, verification campaigns, reports.

Four commands: series (stable Betti rows for a family and twists),
traces (brute force against the stable limit), moments (central-value
averages with the exact character identity), verify (invariant suites
of every module at a profile's scale).  Reports go to stdout, logs to
stderr; exit status 0 on success, 1 on any verification failure, 2 on
usage errors.  Output bytes depend only on the configuration, never on
worker count or timing.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

try:
    import tomllib
except ImportError:
    import tomli as tomllib

from . import arithstat, ffcurves, repchar, stable_series, symfunc
from .arithstat import mainterm_oracle, moment_sum, trace_report
from .ffcurves import FqContext
from .partitions import as_partition, box_partitions, partitions
from .stable_series import betti_table, fit_rational, vanishing_report
from .symfunc import SCHUR, Window

FAMILIES = {
    "braid-schur": stable_series.BRAID_SCHUR,
    "braid-symplectic": stable_series.BRAID_SYMPLECTIC,
    "hyperelliptic-closed": stable_series.HYPERELLIPTIC_CLOSED,
    "mcg-open": stable_series.MCG_OPEN,
    "mcg-closed": stable_series.MCG_CLOSED,
}
FORMATS = ("json", "csv", "pretty")
PROFILES = ("quick", "full")


class UsageError(ValueError):
    """Bad parameter combination detected before any computation."""


@dataclass(frozen=True)
class RunConfig:
    """One validated invocation."""

    command: str
    q: int = 3
    n: int = 5
    g: int = 1
    r: int = 1
    lams: tuple = ((),)
    family: str = "braid-schur"
    max_arity: int | None = None
    z_max: int = 8
    max_weight: int = 2
    slack: int = 2
    fmt: str = "json"
    workers: int = 1
    cache: str | None = None
    profile: str = "quick"

    def __post_init__(self):
        if self.command not in ("series", "traces", "moments", "verify"):
            raise UsageError("unknown command %r" % (self.command,))
        if self.fmt not in FORMATS:
            raise UsageError("format must be one of %s" % (FORMATS,))
        if self.workers < 1:
            raise UsageError("workers must be >= 1")
        if self.command == "series":
            if self.family not in FAMILIES:
                raise UsageError("family must be one of %s" % sorted(FAMILIES))
            if self.z_max < 0:
                raise UsageError("zmax must be >= 0")
            if self.max_arity is not None and self.max_arity < 0:
                raise UsageError("arity must be >= 0")
        if self.command == "traces":
            if self.n < 1:
                raise UsageError("n must be >= 1")
            if self.max_weight < 0:
                raise UsageError("max-weight must be >= 0")
            if self.slack < 1:
                raise UsageError("slack must be >= 1")
        if self.command == "moments":
            if self.g < 1:
                raise UsageError("g must be >= 1")
            if self.r < 0:
                raise UsageError("r must be >= 0")
        if self.command in ("traces", "moments"):
            if self.q < 3 or self.q % 2 == 0:
                raise UsageError("q must be an odd prime")
        if self.command == "verify" and self.profile not in PROFILES:
            raise UsageError("profile must be one of %s" % (PROFILES,))


# ---------------------------------------------------------------------------
# Partition list syntax: "2,1,1;4;∅" with "∅" or "" the empty one.


def parse_partition(text):
    text = text.strip()
    if text in ("", "∅"):
        return ()
    try:
        parts = [int(piece) for piece in text.split(",")]
    except ValueError:
        raise UsageError("bad partition %r" % (text,))
    if any(part < 1 for part in parts):
        raise UsageError("partition parts must be positive: %r" % (text,))
    return as_partition(sorted(parts, reverse=True))


def parse_partition_list(text):
    return tuple(parse_partition(piece) for piece in text.split(";"))


def _format_partition(lam):
    return ",".join(str(part) for part in lam) if lam else "∅"


# ---------------------------------------------------------------------------
# Emission.


def _csv_table(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _pretty_table(header, rows):
    cells = [header] + [[str(cell) for cell in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    lines = []
    for row in cells:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def _emit_series(config):
    table = betti_table(FAMILIES[config.family], list(config.lams), config.z_max,
                        max_arity=config.max_arity)
    rows = []
    for lam in config.lams:
        dims = [table.entries[(lam, k)] for k in range(config.z_max + 1)]
        rows.append((lam, dims))
    if config.fmt == "json":
        payload = {
            "family": config.family,
            "z_max": config.z_max,
            "rows": [{"lambda": list(lam), "dims": dims} for lam, dims in rows],
        }
        return json.dumps(payload) + "\n", 0
    if config.fmt == "csv":
        flat = [(_format_partition(lam), k, dim)
                for lam, dims in rows for k, dim in enumerate(dims)]
        return _csv_table(["lambda", "degree", "dim"], flat), 0
    lines = ["%s z<=%d" % (config.family, config.z_max)]
    for lam, dims in rows:
        lines.append("s[%s]: %s" % (_format_partition(lam),
                                    " ".join(str(d) for d in dims)))
    return "\n".join(lines) + "\n", 0


def _emit_traces(config):
    ctx = FqContext(*_prime_parts(config.q))
    report = trace_report(ctx, config.n, config.max_weight, slack=config.slack,
                          workers=config.workers, cache_path=config.cache)
    status = 0 if report.all_passed() else 1
    if config.fmt == "json":
        return report.to_json() + "\n", status
    if config.fmt == "csv":
        return report.to_csv(), status
    rows = [(_format_partition(tuple(row["lambda"])), row["brute"], row["stable"],
             row["bound"], "yes" if row["pass"] else "NO")
            for row in report.rows()]
    head = "TraceReport q=%d n=%d slack=%d\n" % (report.q, report.n, report.slack)
    return head + _pretty_table(["lambda", "brute", "stable", "bound", "pass"], rows), status


def _emit_moments(config):
    ctx = FqContext(*_prime_parts(config.q))
    report = moment_sum(ctx, config.g, config.r, workers=config.workers)
    if config.fmt == "json":
        return report.to_json() + "\n", 0
    if config.fmt == "csv":
        return report.to_csv(), 0
    row = report.rows()[0]
    lines = ["MomentReport q=%d g=%d r=%d" % (report.q, report.g, report.r)]
    for key in ("moment", "identity_rhs", "prediction", "thmc_bound"):
        lines.append("%s = %s" % (key, row[key]))
    return "\n".join(lines) + "\n", 0


def _prime_parts(q):
    # FqContext wants (p, e); the CLI accepts odd primes only.
    for p in range(3, q + 1, 2):
        if q % p == 0:
            if q == p:
                return p, 1
            raise UsageError("q must be an odd prime, got %d" % q)
    raise UsageError("q must be an odd prime, got %d" % q)


# ---------------------------------------------------------------------------
# Verification suites.


def _check_plethystic(arity):
    w = Window(0, arity, arity)
    x = symfunc.graded_zero(w)
    for j in range(1, arity + 1):
        x = x + symfunc.embed(symfunc.h(j), w, z_exp=j)
    y = symfunc.embed(symfunc.e(2), w, z_exp=2)
    one = symfunc.graded_const(Fraction(1), w)
    if symfunc.pleth_log(symfunc.pleth_exp(x)) != x:
        return False
    if symfunc.pleth_exp(symfunc.pleth_log(one + x)) != one + x:
        return False
    if symfunc.pleth_exp(x + y) != symfunc.multiply(
            symfunc.pleth_exp(x), symfunc.pleth_exp(y)):
        return False
    return True


def _check_braid_arity0(z_max):
    w = Window(0, z_max, 2)
    series = stable_series.braid_series(stable_series.SCHUR, w).in_basis(SCHUR)
    want = {0: Fraction(1), 1: Fraction(-1)}
    return all(series.coefficient(k, ()) == want.get(k, Fraction(0))
               for k in range(z_max + 1))


def _check_product_form(arity):
    w = Window(0, arity, arity)
    return stable_series.product_form_series(w) == stable_series.braid_series(
        stable_series.SCHUR, w)


def _check_vanishing(arity):
    w = Window(0, arity, arity)
    series = stable_series.braid_series(stable_series.SYMPLECTIC, w)
    return not vanishing_report(series)


def _check_rational_fit(z_max):
    t11 = betti_table(stable_series.BRAID_SCHUR, [(1, 1)], z_max).entries
    signed = [t11[((1, 1), k)] * (1 if k % 2 == 0 else -1) for k in range(z_max + 1)]
    fit = fit_rational(signed, 6)
    if (fit.num, fit.den) != ((1, -1), (1, 1)):
        return False
    t2 = betti_table(stable_series.BRAID_SCHUR, [(2,)], z_max).entries
    return all(t2[((2,), k)] == 0 for k in range(z_max + 1))


def _check_dimension_identity(max_gr):
    for g in range(1, max_gr + 1):
        for r in range(1, max_gr + 1):
            total = sum(
                repchar.weyl_dim_sp(lam, g)
                * repchar.weyl_dim_sp(repchar.lambda_dagger(lam, g, r).dominant, r)
                for lam in box_partitions(g, r))
            if total != 4 ** (g * r):
                return False
    for g in range(1, 3):
        for r in range(1, 3):
            if not repchar.jimbo_miwa_check(g, r):
                return False
    return True


def _check_dual_method(qs, max_deg):
    for q in qs:
        ctx = FqContext(q, 1)
        for n in range(1, max_deg + 1):
            charsums = ffcurves.batch_charsums(ctx, n)
            datas = ffcurves.batch_curve_data(ctx, n)
            for row, data in zip(charsums, datas):
                if row != ffcurves.lfunction_from_frobenius(data):
                    return False
    return True


def _check_rh_funceq(qs, max_deg):
    for q in qs:
        ctx = FqContext(q, 1)
        for n in range(2, max_deg + 1):
            for data in ffcurves.batch_curve_data(ctx, n):
                if ffcurves.rh_defect(data) > 1e-9:
                    return False
                if not ffcurves.functional_equation_holds(data):
                    return False
    return True


def _check_traces_triangle(q, n_max, workers):
    ctx = FqContext(q, 1)
    for n in range(5, n_max + 1):
        report = trace_report(ctx, n, 4, slack=2, workers=workers)
        if not report.all_passed():
            return False
    return True


def _check_moment_identity(grid, workers):
    for q, g, r in grid:
        ctx = FqContext(q, 1)
        report = moment_sum(ctx, g, r, workers=workers)
        if report.moment != report.identity_rhs or report.moment.sqrt_part:
            return False
    return True


def _check_mainterm(qs):
    import itertools
    for q in qs:
        mono = arithstat.stable_trace_genfunc(q, 4).in_basis(symfunc.MONOMIAL)
        for weight in range(5):
            for k in range(1, weight + 1):
                for comp in itertools.product(range(1, weight + 1), repeat=k):
                    if sum(comp) != weight:
                        continue
                    lam = tuple(sorted(comp, reverse=True))
                    if mainterm_oracle(q, comp) != mono.coefficient(lam):
                        return False
        if mainterm_oracle(q, ()) != Fraction(q - 1, q):
            return False
    return True


def _check_t_decay(qs, max_weight):
    for q in qs:
        maxima = []
        for weight in range(2, max_weight + 1, 2):
            best = max(abs(arithstat.stable_trace_T(lam, q, max_weight))
                       for lam in partitions(weight))
            maxima.append(best)
            if best > 1:
                return False
        if any(b > a for a, b in zip(maxima, maxima[1:])):
            return False
    return True


def _verify_checks(profile, workers):
    quick = profile == "quick"
    arity = 8 if quick else 12
    qs = (3,) if quick else (3, 5)
    n_max = 7 if quick else 9
    deg = 4 if quick else 6
    grid = [(3, 1, 1), (3, 1, 2)] if quick else [
        (3, g, r) for g in (1, 2) for r in (1, 2, 3)]
    return [
        ("plethystic-identities", lambda: _check_plethystic(arity)),
        ("braid-arity0", lambda: _check_braid_arity0(arity)),
        ("product-form-equality", lambda: _check_product_form(arity)),
        ("symplectic-vanishing", lambda: _check_vanishing(min(arity, 10))),
        ("rational-fit", lambda: _check_rational_fit(arity)),
        ("dimension-identity", lambda: _check_dimension_identity(2 if quick else 4)),
        ("dual-method-lfunction", lambda: _check_dual_method(qs, deg)),
        ("rh-functional-equation", lambda: _check_rh_funceq(qs, deg)),
        ("traces-triangle", lambda: _check_traces_triangle(3, n_max, workers)),
        ("moment-identity", lambda: _check_moment_identity(grid, workers)),
        ("mainterm-crosscheck", lambda: _check_mainterm(qs)),
        ("trace-decay", lambda: _check_t_decay(qs, 8)),
    ]


def _emit_verify(config):
    results = []
    for name, check in _verify_checks(config.profile, config.workers):
        start = time.time()
        ok = bool(check())
        print("# %s %s %.2fs" % ("pass" if ok else "FAIL", name,
                                 time.time() - start), file=sys.stderr)
        results.append((name, ok))
    status = 0 if all(ok for _, ok in results) else 1
    if config.fmt == "json":
        payload = {"profile": config.profile,
                   "rows": [{"check": name, "pass": ok} for name, ok in results]}
        return json.dumps(payload) + "\n", status
    if config.fmt == "csv":
        return _csv_table(["check", "pass"],
                          [(name, "true" if ok else "false")
                           for name, ok in results]), status
    rows = [(name, "pass" if ok else "FAIL") for name, ok in results]
    head = "verify profile=%s\n" % config.profile
    return head + _pretty_table(["check", "result"], rows), status


# ---------------------------------------------------------------------------
# Dispatch and argument handling.


def run(config):
    """Executes one config; prints the report; returns the exit status."""
    emit = {"series": _emit_series, "traces": _emit_traces,
            "moments": _emit_moments, "verify": _emit_verify}[config.command]
    text, status = emit(config)
    sys.stdout.write(text)
    return status


_OPTION_TYPES = {
    "q": int, "n": int, "g": int, "r": int, "zmax": int, "arity": int,
    "max_weight": int, "slack": int, "workers": int,
    "lambda": str, "family": str, "format": str, "cache": str, "profile": str,
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="homstab",
        description="Stable twisted homology series and their brute-force checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=FORMATS, default=None)
        p.add_argument("--config", default=None, metavar="FILE",
                       help="TOML config; flags override its values")

    p = sub.add_parser("series", help="stable Betti rows of one family")
    p.add_argument("--family", choices=sorted(FAMILIES), default=None)
    p.add_argument("--lambda", dest="lam", default=None, metavar="PLIST",
                   help='partitions, e.g. "2,1,1;4;∅"')
    p.add_argument("--zmax", type=int, default=None)
    p.add_argument("--arity", type=int, default=None)
    common(p)

    p = sub.add_parser("traces", help="brute force vs the stable limit")
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--max-weight", type=int, default=None)
    p.add_argument("--slack", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--cache", default=None, metavar="FILE")
    common(p)

    p = sub.add_parser("moments", help="central-value moments and identity")
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--g", type=int, default=None)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    common(p)

    p = sub.add_parser("verify", help="invariant suites of all modules")
    p.add_argument("--profile", choices=PROFILES, default=None)
    p.add_argument("--workers", type=int, default=None)
    common(p)
    return parser


def _load_config_file(path, command):
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except OSError as exc:
        raise UsageError("cannot read config %s: %s" % (path, exc))
    except tomllib.TOMLDecodeError as exc:
        raise UsageError("bad TOML in %s: %s" % (path, exc))
    table = doc.get(command, {})
    if not isinstance(table, dict):
        raise UsageError("config table [%s] must be a table" % command)
    out = {}
    for key, value in table.items():
        norm = key.replace("-", "_")
        if norm not in _OPTION_TYPES:
            raise UsageError("unknown config key %r" % key)
        out[norm] = value
    return out


def _resolve(args):
    command = args.command
    values = {}
    if getattr(args, "config", None):
        values.update(_load_config_file(args.config, command))
    flag_names = {
        "series": [("family", "family"), ("lam", "lambda"), ("zmax", "zmax"),
                   ("arity", "arity"), ("format", "format")],
        "traces": [("q", "q"), ("n", "n"), ("max_weight", "max_weight"),
                   ("slack", "slack"), ("workers", "workers"),
                   ("cache", "cache"), ("format", "format")],
        "moments": [("q", "q"), ("g", "g"), ("r", "r"),
                    ("workers", "workers"), ("format", "format")],
        "verify": [("profile", "profile"), ("workers", "workers"),
                   ("format", "format")],
    }[command]
    for attr, key in flag_names:
        flag = getattr(args, attr, None)
        if flag is not None:
            values[key] = flag
    lams = parse_partition_list(str(values["lambda"])) if "lambda" in values else ((),)
    try:
        return RunConfig(
            command=command,
            q=int(values.get("q", 3)),
            n=int(values.get("n", 5)),
            g=int(values.get("g", 1)),
            r=int(values.get("r", 1)),
            lams=lams,
            family=str(values.get("family", "braid-schur")),
            max_arity=None if values.get("arity") is None else int(values["arity"]),
            z_max=int(values.get("zmax", 8)),
            max_weight=int(values.get("max_weight", 2)),
            slack=int(values.get("slack", 2)),
            fmt=str(values.get("format", "json")),
            workers=int(values.get("workers", 1)),
            cache=values.get("cache"),
            profile=str(values.get("profile", "quick")),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(str(exc))


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _resolve(args)
        return run(config)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except ValueError as exc:
        # verification invariants violated inside a report constructor
        print("verification failure: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
