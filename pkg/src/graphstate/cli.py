"""Command-line surface: analyze / exact / simulate / dist / verify.

Graph files are JSON documents with `vertices` (list of id lists),
`bonds` (list of id pairs), optional `subsystems` (list of {id, d},
default d=1) and optional `trace` (list of ids, overridable with
--trace).  Reports are JSON by default, CSV with --format csv.  Exit
codes: 0 ok, 1 usage, 2 validation, 3 budget/resource.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

import numpy as np

from .combinatorics import EnumerationCapError
from .graphs import GraphSpec, GraphValidationError, MarginalSpec
from .flow import SINK, SOURCE, build_network, max_flow
from .moments import (
    BudgetExceededError,
    DistributionId,
    classify,
    exact_moment,
    moment_table,
)
from .montecarlo import ResourceCapError, estimate
from .spectra import fc_density, fc_entropy, fc_support, mp_density, mp_entropy
from .weingarten import SingularWeingartenError

REPORT_SCHEMA = "graphstate-report/1"


class GraphFileError(ValueError):
    """Graph document failed to parse or validate; carries context."""


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# graph files
# ---------------------------------------------------------------------------

def parse_graph(path: str, trace_override=None) -> MarginalSpec:
    """Load a graph document; returns the marginal it describes.

    The trace set comes from the file's `trace` field unless overridden.
    Errors carry the offending field (and line/column for syntax errors).
    """
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise GraphFileError(f"{path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFileError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return marginal_from_dict(doc, source=path, trace_override=trace_override)


def marginal_from_dict(doc: dict, source: str = "<graph>", trace_override=None) -> MarginalSpec:
    if not isinstance(doc, dict):
        raise GraphFileError(f"{source}: top level must be an object")
    for key in ("vertices", "bonds"):
        if key not in doc:
            raise GraphFileError(f"{source}: missing required field '{key}'")
    vertices = doc["vertices"]
    bonds = doc["bonds"]
    if not isinstance(vertices, list) or not all(isinstance(b, list) for b in vertices):
        raise GraphFileError(f"{source}: field 'vertices' must be a list of id lists")
    if not isinstance(bonds, list) or not all(isinstance(e, list) and len(e) == 2 for e in bonds):
        raise GraphFileError(f"{source}: field 'bonds' must be a list of id pairs")

    dims = None
    if "subsystems" in doc:
        dims = {}
        for entry in doc["subsystems"]:
            if not isinstance(entry, dict) or "id" not in entry:
                raise GraphFileError(f"{source}: field 'subsystems' entries need an 'id'")
            dims[int(entry["id"])] = int(entry.get("d", 1))
    try:
        graph = GraphSpec(vertex_blocks=vertices, bonds=[tuple(e) for e in bonds], dims=dims)
    except GraphValidationError as exc:
        raise GraphFileError(f"{source}: {exc}") from exc

    trace = trace_override if trace_override is not None else doc.get("trace")
    if trace is None:
        raise GraphFileError(
            f"{source}: no trace set; add a 'trace' field or pass --trace")
    try:
        return graph.marginal(trace)
    except GraphValidationError as exc:
        raise GraphFileError(f"{source}: trace: {exc}") from exc


def graph_to_dict(marginal: MarginalSpec) -> dict:
    g = marginal.graph
    return {
        "subsystems": [{"id": i, "d": g.dim_of[i]} for i in range(1, g.n + 1)],
        "vertices": [list(b) for b in g.vertex_blocks],
        "bonds": [list(e) for e in g.bonds],
        "trace": sorted(marginal.traced),
    }


# ---------------------------------------------------------------------------
# report assembly
# ---------------------------------------------------------------------------

def _network_summary(marginal: MarginalSpec) -> dict:
    net = build_network(marginal)
    result = max_flow(net)
    name = {SOURCE: "source", SINK: "sink"}
    edges = [{"from": name.get(u, f"b{u + 1}" if isinstance(u, int) else u),
              "to": name.get(v, f"b{v + 1}" if isinstance(v, int) else v),
              "capacity": c}
             for (u, v), c in net.capacity]
    return {"edges": edges, "max_flow": result.value,
            "labels": {f"b{i + 1}": lab for i, lab in result.labels.items()}}


def _entropy_forecast(dist: DistributionId, x: int):
    """(log-term, constant) of the leading entropy E H ~ term*ln N + const."""
    if dist.kind == "dirac":
        return x, 0.0
    if dist.kind == "maximally_mixed":
        return x, math.log(float(dist.rank_coeff))
    if dist.kind == "free_poisson":
        scale = dist.rank_coeff if dist.rank_coeff is not None else 1
        return x, (math.log(float(dist.c * scale))
                   + mp_entropy(dist.c) / float(dist.c))
    if dist.kind == "fuss_catalan":
        return x, float(fc_entropy(dist.s))
    if dist.kind == "classical_product":
        total = 0.0
        for f in dist.factors:
            if f.kind == "free_poisson":
                total += mp_entropy(f.c)
            elif f.kind == "fuss_catalan":
                total += float(fc_entropy(f.s))
            else:
                return x, None
        return x, total
    return x, None


def cmd_analyze(marginal: MarginalSpec, p_max: int = 6) -> dict:
    """Flow, asymptotic moment table, law tag, and entropy/purity forecast."""
    reports = moment_table(marginal, p_max)
    dist = classify(marginal, p_max)
    x = -reports[1].exponent if p_max >= 2 else 0
    log_term, const = _entropy_forecast(dist, x)
    entropy = {"log_term": log_term, "constant": const}
    purity = None
    if p_max >= 2:
        purity = {"coefficient": str(reports[1].coefficient), "exponent": reports[1].exponent}
    return {
        "schema": REPORT_SCHEMA,
        "command": "analyze",
        "graph": graph_to_dict(marginal),
        "marginal": marginal.describe(),
        "network": _network_summary(marginal),
        "max_flow": x,
        "moments": [{"p": r.p, "exponent": r.exponent, "coefficient": str(r.coefficient),
                     "minimizers": r.minimizer_count} for r in reports],
        "distribution": dist.to_json(),
        "distribution_text": dist.describe(),
        "predictions": {"entropy": entropy, "purity": purity},
    }


def cmd_exact(marginal: MarginalSpec, N: int, p_max: int = 3) -> dict:
    """Exact finite-N moment table (rationals, plus float renderings)."""
    rows = []
    for p in range(1, p_max + 1):
        value = exact_moment(marginal, p, N)
        rows.append({"p": p, "value": str(value), "float": float(value)})
    return {
        "schema": REPORT_SCHEMA,
        "command": "exact",
        "graph": graph_to_dict(marginal),
        "N": N,
        "moments": rows,
    }


def cmd_simulate(marginal: MarginalSpec, N: int, trials: int, seed: int,
                 mode: str = "haar", p_max: int = 3, threads: int = 1) -> dict:
    rep = estimate(marginal, N, trials, p_list=tuple(range(1, p_max + 1)),
                   seed=seed, mode=mode, threads=threads)
    return {
        "schema": REPORT_SCHEMA,
        "command": "simulate",
        "graph": graph_to_dict(marginal),
        "estimate": rep.to_json(),
    }


def cmd_verify(marginal: MarginalSpec, N: int, trials: int, seed: int,
               p_max: int = 3, threads: int = 1, ladder=None) -> dict:
    """Analytic vs Monte Carlo comparison with deviation flags.

    Each sampled moment is compared against the exact finite-N value when
    the budget allows (else the asymptotic leading term); deviations above
    4 standard errors are flagged.  An optional N-ladder reports the
    rescaled drift toward the asymptotic coefficient.
    """
    analysis = cmd_analyze(marginal, p_max=p_max)
    rep = estimate(marginal, N, trials, p_list=tuple(range(1, p_max + 1)),
                   seed=seed, threads=threads)
    x = analysis["max_flow"]

    checks = []
    all_ok = True
    for row in analysis["moments"]:
        p = row["p"]
        try:
            reference = float(exact_moment(marginal, p, N))
            ref_kind = "exact"
        except (BudgetExceededError, SingularWeingartenError):
            reference = float(Fraction(row["coefficient"])) * N ** row["exponent"]
            ref_kind = "asymptotic"
        mean = rep.moment_mean[p]
        err = rep.moment_stderr[p]
        gap = mean - reference
        # absolute floor so deterministic moments (p=1) don't trip on
        # floating-point noise masquerading as a tiny stderr
        tol = max(4.0 * err, 1e-10 * max(1.0, abs(reference)))
        dev = gap / err if err > 0 else 0.0
        ok = abs(gap) <= tol
        all_ok = all_ok and ok
        checks.append({
            "p": p, "reference": reference, "reference_kind": ref_kind,
            "mc_mean": mean, "mc_stderr": err,
            "rescaled_mc": mean * N ** (x * (p - 1)),
            "asymptotic_coefficient": row["coefficient"],
            "deviation_stderr": dev, "ok": ok,
        })

    out = {
        "schema": REPORT_SCHEMA,
        "command": "verify",
        "graph": analysis["graph"],
        "max_flow": x,
        "distribution": analysis["distribution"],
        "predictions": analysis["predictions"],
        "estimate": rep.to_json(),
        "checks": checks,
        "all_ok": all_ok,
    }
    if ladder:
        drift = []
        for n_i in ladder:
            r_i = estimate(marginal, n_i, trials, p_list=(2,), seed=seed, threads=threads)
            drift.append({"N": n_i, "rescaled_m2": r_i.moment_mean[2] * n_i ** x,
                          "stderr": r_i.moment_stderr[2] * n_i ** x})
        out["drift_ladder"] = drift
    return out


def cmd_dist(family: str, c=None, s=None, grid: int = 256) -> dict:
    """Density grid for a limit law; CSV-friendly rows plus metadata."""
    if family == "mp":
        c = Fraction(c) if c is not None else Fraction(1)
        density = mp_density(c)
        meta = {"family": "mp", "c": str(c), "entropy": mp_entropy(c)}
    elif family == "fc":
        s = int(s) if s is not None else 2
        density = fc_density(s)
        meta = {"family": "fc", "s": s, "support": str(fc_support(s)),
                "entropy": float(fc_entropy(s))}
    else:
        raise UsageError(f"unknown family {family!r}; choose mp or fc")
    lo = density.lo if density.lo > 0 else density.hi / grid * 1e-3
    xs = np.linspace(lo, density.hi, grid)
    rows = [{"x": float(x), "density": float(density(x))} for x in xs]
    meta.update({"schema": REPORT_SCHEMA, "command": "dist",
                 "atom_at_zero": density.atom,
                 "support": [density.lo, density.hi], "grid": rows})
    return meta


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True)
    if fmt != "csv":
        raise UsageError(f"unknown format {fmt!r}")
    return _render_csv(report)


def _render_csv(report: dict) -> str:
    command = report.get("command")
    lines = []
    if command == "analyze":
        lines.append("p,exponent,coefficient,minimizers")
        for row in report["moments"]:
            lines.append(f"{row['p']},{row['exponent']},{row['coefficient']},{row['minimizers']}")
    elif command == "exact":
        lines.append("p,value,float")
        for row in report["moments"]:
            lines.append(f"{row['p']},{row['value']},{row['float']!r}")
    elif command == "simulate":
        lines.append("p,mean,stderr")
        est = report["estimate"]
        for p, cell in sorted(est["moments"].items(), key=lambda kv: int(kv[0])):
            lines.append(f"{p},{cell['mean']!r},{cell['stderr']!r}")
    elif command == "verify":
        lines.append("p,reference,mc_mean,mc_stderr,deviation_stderr,ok")
        for row in report["checks"]:
            lines.append(f"{row['p']},{row['reference']!r},{row['mc_mean']!r},"
                         f"{row['mc_stderr']!r},{row['deviation_stderr']!r},{row['ok']}")
    elif command == "dist":
        lines.append("x,density")
        for row in report["grid"]:
            lines.append(f"{row['x']!r},{row['density']!r}")
    else:
        raise UsageError(f"no csv rendering for command {command!r}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# argument parsing and dispatch
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="graphstate",
                     description="Spectral statistics of random graph-state marginals.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_graph=True):
        if needs_graph:
            p.add_argument("graph", help="path to a JSON graph document")
            p.add_argument("--trace", help="comma-separated subsystem ids to trace "
                                           "(overrides the file's trace set)")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("analyze", help="flow, asymptotic moments, limit-law tag")
    common(p)
    p.add_argument("--pmax", type=int, default=6)

    p = sub.add_parser("exact", help="exact finite-N moments")
    common(p)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--pmax", type=int, default=3)

    p = sub.add_parser("simulate", help="Monte Carlo moment estimates")
    common(p)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=("haar", "ginibre"), default="haar")
    p.add_argument("--pmax", type=int, default=3)
    p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("verify", help="analytic predictions against Monte Carlo")
    common(p)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pmax", type=int, default=3)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--ladder", help="comma-separated N values for drift trend")

    p = sub.add_parser("dist", help="density grids for the limit laws")
    common(p, needs_graph=False)
    p.add_argument("family", choices=("mp", "fc"))
    p.add_argument("--c", help="free Poisson parameter (mp)")
    p.add_argument("--s", type=int, help="Fuss-Catalan order (fc)")
    p.add_argument("--grid", type=int, default=256)

    return parser


def _parse_trace(arg):
    if arg is None:
        return None
    try:
        return [int(x) for x in arg.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"--trace expects comma-separated integers: {exc}") from exc


def run(argv) -> tuple[int, str]:
    """Execute a command line; returns (exit code, output text)."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "dist":
            report = cmd_dist(args.family, c=args.c, s=args.s, grid=args.grid)
        else:
            marginal = parse_graph(args.graph, trace_override=_parse_trace(args.trace))
            if args.command == "analyze":
                report = cmd_analyze(marginal, p_max=args.pmax)
            elif args.command == "exact":
                report = cmd_exact(marginal, args.N, p_max=args.pmax)
            elif args.command == "simulate":
                report = cmd_simulate(marginal, args.N, args.trials, args.seed,
                                      mode=args.mode, p_max=args.pmax,
                                      threads=args.threads)
            else:
                ladder = None
                if args.ladder:
                    ladder = [int(x) for x in args.ladder.split(",") if x.strip()]
                report = cmd_verify(marginal, args.N, args.trials, args.seed,
                                    p_max=args.pmax, threads=args.threads,
                                    ladder=ladder)
        return 0, render(report, args.format)
    except UsageError as exc:
        return 1, f"usage error: {exc}\n"
    except (GraphFileError, GraphValidationError, EnumerationCapError,
            SingularWeingartenError, ValueError) as exc:
        return 2, f"validation error: {exc}\n"
    except (BudgetExceededError, ResourceCapError) as exc:
        return 3, f"budget error: {exc}\n"


def main(argv=None) -> int:
    code, text = run(sys.argv[1:] if argv is None else argv)
    stream = sys.stdout if code == 0 else sys.stderr
    stream.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
