"""Command-line interface.

Every report is written to stdout as JSON (default) or CSV and carries the
tool version and the resolved run configuration.  Exit codes: 0 success,
2 bad arguments, 3 resource budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import __version__
from .core import Composition, EnumerationCapExceeded, Word, inversion_number, major_index
from .diagnostics import (
    NORMAL_CDF_METHOD,
    convergence_scan,
    empirical_moments,
    lemma_interpolation_check,
    marginal_normality_stat,
    sample_word,
)
from .foata import foata_inverse, foata_transform
from .gaussian import GaussianSpec, d2_closed_form, isserlis_moment, recurrence_moment
from .genpoly import joint_gf, joint_gf_by_ending, q_multinomial
from .moments import (
    DEFAULT_ORDER,
    ResourceBudgetExceeded,
    asymptotic_correlation,
    asymptotic_covariance,
    asymptotic_variance,
    centralize,
    class_mean,
    exact_correlation,
    mean,
    raw_moment_jets,
    table_from_jets,
    to_factorial,
)

DEFAULT_SEED = 20240607


@dataclass
class RunConfig:
    command: str
    counts: list | None = None
    multiplicities: list | None = None
    max_order: int | None = None
    orders: list | None = None
    scales: list | None = None
    samples: int | None = None
    seed: int = DEFAULT_SEED
    format: str = "json"
    threads: int = 1
    options: dict = field(default_factory=dict)


class UsageError(ValueError):
    pass


def fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def int_list(text: str) -> list:
    try:
        return [int(t) for t in text.split(",") if t.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def order_list(text: str) -> list:
    out = []
    for item in text.split(","):
        try:
            r, s = item.split(":")
            out.append((int(r), int(s)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected r:s pairs like 1:1,2:0, got {text!r}") from None
    return out


def fraction_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational number, got {text!r}") from None


# --------------------------------------------------------------------------
# subcommands: each returns (payload dict, csv header, csv rows)


def cmd_dist(args, cfg):
    if args.ending is None:
        f = joint_gf(args.counts)
    else:
        f = joint_gf_by_ending(args.counts, args.ending)
    recs = f.to_records()
    return {"terms": recs}, ["inv", "maj", "count"], [[r["inv"], r["maj"], r["count"]] for r in recs]


def cmd_qmultinomial(args, cfg):
    poly = q_multinomial(args.counts)
    recs = poly.to_records()
    payload = {"polynomial": poly.to_string(), "coefficients": recs}
    return payload, ["degree", "count"], [[r["degree"], r["count"]] for r in recs]


def cmd_moments(args, cfg):
    comp = Composition(tuple(args.counts))
    state = raw_moment_jets(comp, args.max_order)
    table = table_from_jets(state, args.ending)
    mu = mean(comp) if args.ending is None else class_mean(comp, args.ending)
    if args.center or args.factorial:
        table = centralize(table, mu)
    if args.factorial:
        table = to_factorial(table)
    recs = [{"r": r["r"], "s": r["s"], "value": r["value"]} for r in table.to_records()]
    payload = {"kind": table.kind, "scope": table.scope, "mean": fmt(mu), "moments": recs}
    rows = [[r["r"], r["s"], table.kind, r["value"]] for r in recs]
    return payload, ["r", "s", "kind", "value"], rows


def cmd_rho(args, cfg):
    if (args.counts is None) == (args.multiplicities is None):
        raise UsageError("rho needs exactly one of --counts or --multiplicities")
    if args.counts is not None:
        payload = {"mode": "exact", "rho": fmt(exact_correlation(args.counts))}
    else:
        m = args.multiplicities
        payload = {
            "mode": "asymptotic",
            "rho": fmt(asymptotic_correlation(m)),
            "variance_coefficient": fmt(asymptotic_variance(m)),
            "covariance_coefficient": fmt(asymptotic_covariance(m)),
        }
    rows = [[k, v] for k, v in payload.items()]
    return payload, ["quantity", "value"], rows


def cmd_gaussian(args, cfg):
    if args.ab is not None:
        if len(args.ab) != 2:
            raise UsageError("--ab takes two values a,b")
        g = GaussianSpec.two_letter(*args.ab)
    elif args.rho is not None:
        g = GaussianSpec(Fraction(1), args.rho)
    elif args.variance is not None and args.covariance is not None:
        g = GaussianSpec(args.variance, args.covariance)
    else:
        raise UsageError("gaussian needs --ab, --rho, or both --variance and --covariance")
    methods = ["isserlis", "recurrence", "d2"] if args.method == "all" else [args.method]
    out = {}
    for name in methods:
        if name == "isserlis":
            out[name] = isserlis_moment(args.r, args.s, g)
        elif name == "recurrence":
            out[name] = recurrence_moment(args.r, args.s, g)
        else:
            if args.ab is None:
                if args.method == "all":
                    continue
                raise UsageError("the d2 closed form needs --ab")
            out[name] = d2_closed_form(args.r, args.s, *args.ab)
    payload = {
        "variance": fmt(g.variance),
        "covariance": fmt(g.covariance),
        "moments": [{"method": k, "r": args.r, "s": args.s, "value": fmt(v)} for k, v in out.items()],
    }
    rows = [[k, args.r, args.s, fmt(v)] for k, v in out.items()]
    return payload, ["method", "r", "s", "value"], rows


def cmd_converge(args, cfg):
    rep = convergence_scan(args.multiplicities, args.orders, args.scales, workers=args.threads)
    recs = [
        {"scale": row.scale, "r": row.r, "s": row.s, "exact": fmt(row.exact),
         "limit": fmt(row.limit), "abs_error": fmt(row.abs_error)}
        for row in rep.rows
    ]
    payload = {"rho": fmt(rep.rho), "rows": recs}
    return payload, ["scale", "r", "s", "exact", "limit", "abs_error"], [list(r.values()) for r in recs]


def cmd_lemma_check(args, cfg):
    rep = lemma_interpolation_check(args.d, args.r, args.s, args.grid, args.ending)
    payload = {
        "r": rep.r, "s": rep.s, "d": rep.d, "ending": rep.ending, "grid": rep.grid,
        "degree_bound": rep.degree_bound, "points": rep.points, "monomials": rep.monomials,
        "exact_fit": rep.exact_fit, "fitted_degree": rep.fitted_degree,
        "held_out": len(rep.residuals),
        "nonzero_residuals": sum(1 for x in rep.residuals if x != 0),
        "is_polynomial": rep.is_polynomial,
    }
    rows = [[k, json.dumps(v)] for k, v in payload.items()]
    return payload, ["field", "value"], rows


def cmd_normality(args, cfg):
    stat = marginal_normality_stat(args.counts)
    payload = {"statistic": fmt(stat), "normal_cdf": NORMAL_CDF_METHOD}
    return payload, ["statistic"], [[fmt(stat)]]


def cmd_sample(args, cfg):
    comp = Composition(tuple(args.counts))
    if args.samples is None:
        words = []
        for k in range(args.words):
            w = sample_word(comp, args.seed + k)
            words.append({"seed": args.seed + k, "word": list(w),
                          "inv": inversion_number(w), "maj": major_index(w)})
        rows = [[w["seed"], " ".join(map(str, w["word"])), w["inv"], w["maj"]] for w in words]
        return {"words": words}, ["seed", "word", "inv", "maj"], rows
    orders = args.orders or [(1, 1), (2, 0)]
    rep = empirical_moments(comp, orders, args.samples, args.seed, workers=args.threads, center=args.centering)
    recs = [
        {"r": row.r, "s": row.s, "estimate": fmt(row.estimate), "stderr": fmt(row.stderr),
         "exact": None if row.exact is None else fmt(row.exact)}
        for row in rep.rows
    ]
    payload = {"centering": rep.centering, "scaling": rep.scaling, "sigma": fmt(rep.sigma), "estimates": recs}
    rows = [[r["r"], r["s"], r["estimate"], r["stderr"], r["exact"] or ""] for r in recs]
    return payload, ["r", "s", "estimate", "stderr", "exact"], rows


def cmd_foata(args, cfg):
    d = args.alphabet or max(args.word, default=1)
    w = Word(tuple(args.word), d)
    out = foata_inverse(w) if args.inverse else foata_transform(w)
    payload = {
        "input": list(w.letters), "output": list(out.letters), "inverse": args.inverse,
        "input_inv": inversion_number(w), "input_maj": major_index(w),
        "output_inv": inversion_number(out), "output_maj": major_index(out),
    }
    rows = [[" ".join(map(str, w.letters)), " ".join(map(str, out.letters))]]
    return payload, ["input", "output"], rows


COMMANDS = {
    "dist": cmd_dist,
    "qmultinomial": cmd_qmultinomial,
    "moments": cmd_moments,
    "rho": cmd_rho,
    "gaussian": cmd_gaussian,
    "converge": cmd_converge,
    "lemma-check": cmd_lemma_check,
    "normality": cmd_normality,
    "sample": cmd_sample,
    "foata": cmd_foata,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--threads", type=int, default=1)

    parser = argparse.ArgumentParser(prog="mahonian", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"mahonian {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("dist", parents=[common], help="joint (inv, maj) polynomial")
    p.add_argument("--counts", type=int_list, required=True)
    p.add_argument("--ending", type=int)

    p = sub.add_parser("qmultinomial", parents=[common], help="q-multinomial coefficient")
    p.add_argument("--counts", type=int_list, required=True)

    p = sub.add_parser("moments", parents=[common], help="exact mixed moments")
    p.add_argument("--counts", type=int_list, required=True)
    p.add_argument("--max-order", type=int, default=DEFAULT_ORDER)
    p.add_argument("--center", action="store_true")
    p.add_argument("--factorial", action="store_true", help="centred factorial moments")
    p.add_argument("--ending", type=int)

    p = sub.add_parser("rho", parents=[common], help="exact or limiting correlation")
    p.add_argument("--counts", type=int_list)
    p.add_argument("--multiplicities", type=int_list)

    p = sub.add_parser("gaussian", parents=[common], help="bivariate normal mixed moments")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--variance", type=fraction_arg)
    p.add_argument("--covariance", type=fraction_arg)
    p.add_argument("--rho", type=fraction_arg)
    p.add_argument("--ab", type=lambda t: [fraction_arg(x) for x in t.split(",")])
    p.add_argument("--method", choices=["isserlis", "recurrence", "d2", "all"], default="all")

    p = sub.add_parser("converge", parents=[common], help="standardized moments vs the normal limit")
    p.add_argument("--multiplicities", type=int_list, required=True)
    p.add_argument("--orders", type=order_list, default=[(1, 1), (2, 0), (2, 2)])
    p.add_argument("--scales", type=int_list, default=[5, 10, 20, 40])

    p = sub.add_parser("lemma-check", parents=[common], help="exact polynomial fit of factorial moments")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--grid", type=int, default=14)
    p.add_argument("--ending", type=int, default=1)

    p = sub.add_parser("normality", parents=[common], help="sup distance of maj CDF to the normal CDF")
    p.add_argument("--counts", type=int_list, required=True)

    p = sub.add_parser("sample", parents=[common], help="random words or Monte Carlo moments")
    p.add_argument("--counts", type=int_list, required=True)
    p.add_argument("--words", type=int, default=1)
    p.add_argument("--samples", type=int)
    p.add_argument("--orders", type=order_list)
    p.add_argument("--centering", choices=["exact", "sample"], default="exact")

    p = sub.add_parser("foata", parents=[common], help="Foata bijection on a word")
    p.add_argument("--word", type=int_list, required=True)
    p.add_argument("--alphabet", type=int)
    p.add_argument("--inverse", action="store_true")
    return parser


def _config(args) -> RunConfig:
    known = {"command", "counts", "multiplicities", "max_order", "orders", "scales",
             "samples", "seed", "format", "threads"}
    values = vars(args)
    cfg = RunConfig(**{k: values[k] for k in known if k in values})
    if cfg.orders is not None:
        cfg.orders = [list(o) for o in cfg.orders]
    cfg.options = {k: fmt(v) if isinstance(v, Fraction) else v
                   for k, v in sorted(values.items()) if k not in known}
    if isinstance(cfg.options.get("ab"), list):
        cfg.options["ab"] = [fmt(x) for x in cfg.options["ab"]]
    return cfg


def render(cfg: RunConfig, payload: dict, header: list, rows: list) -> str:
    if cfg.format == "json":
        doc = {"tool": "mahonian", "version": __version__, "config": asdict(cfg)}
        doc.update(payload)
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    buf.write(f"# mahonian {__version__}\n")
    buf.write(f"# config {json.dumps(asdict(cfg), sort_keys=True)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = _config(args)
    try:
        if args.threads < 1:
            raise UsageError("--threads must be at least 1")
        payload, header, rows = COMMANDS[args.command](args, cfg)
    except (ResourceBudgetExceeded, EnumerationCapExceeded) as exc:
        print(f"mahonian: resource budget exceeded: {exc}", file=stderr)
        return 3
    except (ValueError, ZeroDivisionError) as exc:
        print(f"mahonian {args.command}: {exc}", file=stderr)
        return 2
    stdout.write(render(cfg, payload, header, rows))
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
