"""Command-line front end: ``thermoform <command> [system] [flags]``.

``system`` is a path to a description file (see :mod:`thermoform.sysfile`)
or a catalog key such as ``nottot`` or ``"similarity(N=3, r=1/2, d=2)"``.

Exit status: 0 on success, 2 for invalid input, 3 when a computation would
exceed the word budget, 1 for numerical failures.
"""

from __future__ import annotations

import argparse
import itertools
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import catalog, classes, gibbs, potentials, symbolic
from .pressure import affinity_dimension, pressure
from .errors import InvalidInputError, NumericalFailureError, ResourceLimitError, ThermoformError
from .sysfile import SystemFile, export_system, format_number, parse_system

COMMANDS = ("pressure", "dimension", "classes", "proximal", "mixing", "recode", "catalog", "gibbs", "reduce")

# result kinds
CERTIFIED = "certified-bound"
POINT = "point-estimate"
HEURISTIC = "heuristic"
EXACT = "exact"
INFO = "info"

DEFAULTS = {
    "depth": 8,
    "connector": 2,
    "window": 3,
    "tol": 1e-8,
    "cap": 256,
    "seed": None,
    "s": None,
    "blocks": 2,
    "format": "text",
}


@dataclass
class Result:
    key: str
    value: object
    kind: str


@dataclass
class RunReport:
    command: str
    parameters: dict
    results: list[Result] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)
    wall_time: float = 0.0
    document: str | None = None  # verbatim text output (exported systems)

    def add(self, key: str, value, kind: str) -> None:
        if any(r.key == key for r in self.results):
            raise ValueError(f"duplicate report key {key!r}")
        self.results.append(Result(key, value, kind))

    def get(self, key: str):
        for r in self.results:
            if r.key == key:
                return r.value
        raise KeyError(key)

    def records(self) -> str:
        """``key<TAB>value`` lines; wall time is left out so reruns compare equal."""
        lines = [f"command\t{self.command}"]
        lines += [f"param.{k}\t{_fmt(v)}" for k, v in sorted(self.parameters.items())]
        for r in self.results:
            lines.append(f"{r.key}\t{_fmt(r.value)}")
            lines.append(f"{r.key}.kind\t{r.kind}")
        lines += [f"flag.{i}\t{f}" for i, f in enumerate(self.flags, start=1)]
        return "\n".join(lines) + "\n"

    def text(self) -> str:
        if self.document is not None and not self.results:
            return self.document
        width = max((len(r.key) for r in self.results), default=0)
        lines = [f"# {self.command}  " + " ".join(f"{k}={_fmt(v)}" for k, v in sorted(self.parameters.items()))]
        for r in self.results:
            lines.append(f"{r.key.ljust(width)}  {_fmt(r.value)}  [{r.kind}]")
        for f in self.flags:
            lines.append(f"! {f}")
        lines.append(f"# wall time {self.wall_time:.3f} s")
        out = "\n".join(lines) + "\n"
        if self.document is not None:
            out += "\n" + self.document
        return out


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (list, tuple)):
        return " ".join(_fmt(x) for x in v)
    if v is None:
        return "none"
    return str(v)


def _vector(v: np.ndarray) -> str:
    return " ".join(format_number(x) for x in np.round(v, 15) + 0.0)


# ---------------------------------------------------------------------------
# system loading


def load_system(source: str, seed: int | None = None) -> SystemFile:
    """A description file when ``source`` names one, otherwise a catalog key."""
    if Path(source).is_file():
        return parse_system(Path(source))
    name, params = catalog.parse_key(source)
    if seed is not None and name == "random":
        params["seed"] = seed
    entry = catalog.build(name, **params)
    return SystemFile(entry.system)


def _need_system(rep: RunReport, opts: dict) -> SystemFile:
    if not opts.get("system"):
        raise InvalidInputError(f"{opts['command']} needs a system (file or catalog key)")
    sf = load_system(opts["system"], opts.get("seed"))
    for w in sf.warnings:
        print(f"thermoform: warning: {w}", file=sys.stderr)
    rep.flags.extend(f"note: {n}" for n in sf.notes)
    rep.flags.extend(f"warning: {w}" for w in sf.warnings)
    return sf


def _potential(system, s):
    if s is None:
        return potentials.GeneralisedPotential(system)
    return potentials.SingularValuePotential(system, s)


# ---------------------------------------------------------------------------
# commands


def _cmd_pressure(rep: RunReport, opts: dict) -> None:
    sf = _need_system(rep, opts)
    est = pressure(_potential(sf.system, opts["s"]), opts["depth"], opts["connector"], opts["window"])
    for n, a, ratio, up in est.records():
        rep.add(f"a.{n}", a, EXACT)
        rep.add(f"ratio.{n}", ratio, POINT)
        rep.add(f"upper.{n}", up, CERTIFIED)
    rep.add("upper", est.upper, CERTIFIED)
    rep.add("point", est.point, POINT)
    rep.add("lower", est.lower, CERTIFIED if est.lower_certified else HEURISTIC)
    rep.add("width", est.width, CERTIFIED if est.lower_certified else HEURISTIC)
    rep.add("connector_length", est.connector_length, HEURISTIC)
    rep.add("log_delta", est.log_delta, HEURISTIC)
    rep.add("kappa", est.kappa, EXACT)
    rep.add("lower_kappa", est.lower_kappa, HEURISTIC)
    rep.flags.extend(est.flags)


def _cmd_dimension(rep: RunReport, opts: dict) -> None:
    sf = _need_system(rep, opts)
    if sf.system.factor_count != 1:
        raise InvalidInputError("dimension needs a single-factor system")
    res = affinity_dimension(sf.system.generators[0], opts["depth"], opts["tol"],
                             m=min(opts["connector"], 1), L=min(opts["window"], 2))
    rep.add("s_lo", res.s_lo, POINT)
    rep.add("s_hi", res.s_hi, CERTIFIED if res.upper_certified else POINT)
    rep.add("point", res.point, POINT)
    rep.add("pressure_at_s_hi.upper", res.pressure_hi.upper, CERTIFIED)
    rep.add("pressure_at_s_lo.lower", res.pressure_lo.lower, HEURISTIC)
    rep.add("bisections", len(res.iterations), EXACT)
    rep.add("upper_certified", res.upper_certified, EXACT)
    if res.capped:
        rep.flags.append("bisection stopped at the iteration cap before reaching tol")
    if not res.lower_heuristic_ok:
        rep.flags.append("heuristic lower pressure at s_lo is not >= 0")


def _describe_class(rep: RunReport, prefix: str, c: classes.SubspaceClass) -> None:
    info = classes.classify(c)
    rep.add(f"{prefix}.size", len(c), EXACT)
    rep.add(f"{prefix}.equivariant", info.equivariant, EXACT)
    rep.add(f"{prefix}.transitive", info.transitive, EXACT)
    rep.add(f"{prefix}.primitive", info.primitive, EXACT)
    rep.add(f"{prefix}.period", info.period, EXACT)
    rep.add(f"{prefix}.exponent", info.exponent, EXACT)
    for r, member in enumerate(c.members, start=1):
        spans = " | ".join(" ; ".join(_vector(b) for b in W.basis.T) for W in member)
        rep.add(f"{prefix}.member.{r}", spans, INFO)


def _cmd_classes(rep: RunReport, opts: dict) -> None:
    sf = _need_system(rep, opts)
    system = sf.system
    extra = []
    if sf.seeds and len(sf.seeds) == system.factor_count:
        dims = tuple(sf.seeds[j][0].dim for j in range(system.factor_count))
        extra = list(itertools.product(*(sf.seeds[j] for j in range(system.factor_count))))
    else:
        dims = gibbs.minimal_orbit_dims(system, opts["cap"])
        if sf.seeds:
            rep.flags.append("seed subspaces given for some factors only; ignored")
    search = classes.find_finite_orbit_classes(system, dims, cap=opts["cap"], extra_seeds=extra)
    rep.add("dims", dims, HEURISTIC)
    rep.add("class_count", len(search), HEURISTIC)
    rep.add("seeds_tried", search.seeds_tried, EXACT)
    rep.add("overflows", search.overflows, EXACT)
    for k, c in enumerate(search, start=1):
        _describe_class(rep, f"class.{k}", c)
    rep.flags.append("seeded search: other finite-orbit classes may exist")


def _cmd_proximal(rep: RunReport, opts: dict) -> None:
    sf = _need_system(rep, opts)
    res = classes.find_simultaneous_proximal_word(sf.system, max_len=opts["depth"], tol=opts["tol"])
    rep.add("found", res.found, EXACT)
    rep.add("word", res.word, INFO)
    rep.add("searched_depth", res.depth, EXACT)
    for j, g in enumerate(res.gap_ratios, start=1):
        rep.add(f"gap_ratio.{j}", float(g), POINT)


def _cmd_mixing(rep: RunReport, opts: dict) -> None:
    sf = _need_system(rep, opts)
    p = _potential(sf.system, opts["s"])
    L = opts["window"]
    gaps = range(1, opts["depth"] + 1)
    scan = gibbs.correlation_ratio_scan(p, gaps, L)
    for r in scan:
        rep.add(f"deviation.{r.gap}", r.deviation, POINT)
        rep.add(f"witness.{r.gap}", f"{r.witness_i} {r.witness_j}", INFO)
    for q, groups in gibbs.parity_profile(scan).items():
        for res, v in groups.items():
            rep.add(f"parity.{q}.{res}", v, POINT)
    pre = gibbs.psi_mixing_precondition(p, opts["connector"], L)
    rep.add("delta_hat", pre.delta, HEURISTIC)
    rep.add("delta_hat.witness", f"{pre.witness[0]} {pre.connector} {pre.witness[1]}" if pre.witness else None, INFO)
    if opts["s"] is None:
        diag = gibbs.total_ergodicity_diagnostic(
            sf.system, gibbs.DiagnosticConfig(cap=opts["cap"], gaps=()))
        rep.add("verdict", diag.verdict, INFO)


def _emit_system(rep: RunReport, system, opts: dict) -> None:
    rep.document = export_system(system)
    if opts["format"] != "records":
        return
    for j, g in enumerate(system.generators, start=1):
        for i, M in enumerate(g, start=1):
            rep.add(f"matrix.{j}.{i}", " ; ".join(_vector(row) for row in M), EXACT)
    for j, b in enumerate(system.betas, start=1):
        rep.add(f"beta.{j}", b, EXACT)


def _cmd_recode(rep: RunReport, opts: dict) -> None:
    sf = _need_system(rep, opts)
    recoded = catalog.recode_system(sf.system, opts["blocks"])
    rep.add("alphabet", recoded.alphabet_size, EXACT)
    _emit_system(rep, recoded, opts)


def _cmd_catalog(rep: RunReport, opts: dict) -> None:
    args = opts.get("args") or []
    action = opts.get("system") or "list"
    if action == "list":
        if opts["format"] == "records":
            for k, name in enumerate(catalog.names(), start=1):
                rep.add(f"entry.{k}", name, INFO)
        rep.document = "\n".join(catalog.names()) + "\n"
        return
    if action != "export":
        raise InvalidInputError(f"catalog action must be 'list' or 'export', got {action!r}")
    if not args:
        raise InvalidInputError("catalog export needs an entry name")
    name, params = catalog.parse_key(args[0])
    if opts.get("seed") is not None and name == "random":
        params["seed"] = opts["seed"]
    entry = catalog.build(name, **params)
    rep.document = export_system(entry.system)
    _emit_system(rep, entry.system, opts)
    for f in entry.facts:
        rep.flags.append(f"fact [{f.provenance}] {f.statement}: {f.value}")


def _cmd_gibbs(rep: RunReport, opts: dict) -> None:
    sf = _need_system(rep, opts)
    p = _potential(sf.system, opts["s"])
    t = gibbs.gibbs_table(p, opts["depth"])
    avg = gibbs.ergodic_average(t, p)
    rep.add("log_normalizer", t.log_normalizer, EXACT)
    rep.add("entropy", avg.entropy, POINT)
    rep.add("ergodic_average", avg.value, POINT)
    rep.add("variational_residual", avg.residual, POINT)
    spectrum = gibbs.lyapunov_spectrum(sf.system, t)
    for j, e in enumerate(spectrum.exponents, start=1):
        for r, x in enumerate(e, start=1):
            rep.add(f"lyapunov.{j}.{r}", float(x), POINT)
    order = np.argsort(-t.log_weights, kind="stable")[: opts["cap"]]
    for idx in order:
        w = symbolic.lex_inverse(int(idx) + 1, t.alphabet_size, t.depth)
        rep.add(f"row.{w}", f"{_fmt(float(t.log_weights[idx]))} {_fmt(float(t.masses[idx]))}", POINT)
    if len(order) < len(t.log_weights):
        rep.flags.append(f"table truncated to the {len(order)} heaviest of {len(t.log_weights)} cylinders")


def _cmd_reduce(rep: RunReport, opts: dict) -> None:
    sf = _need_system(rep, opts)
    t = gibbs.gibbs_table(potentials.GeneralisedPotential(sf.system), opts["depth"])
    spectrum = gibbs.lyapunov_spectrum(sf.system, t)
    gap = opts["tol"] if opts.get("tol_given") else 1e-3
    degrees = gibbs.suggest_exterior_degrees(spectrum, gap)
    rep.add("degrees", degrees, HEURISTIC)
    for j, g in enumerate(spectrum.top_gaps(), start=1):
        rep.add(f"top_gap.{j}", g, POINT)
    _emit_system(rep, potentials.simple_top_reduction(sf.system, degrees), opts)


_DISPATCH = {
    "pressure": _cmd_pressure,
    "dimension": _cmd_dimension,
    "classes": _cmd_classes,
    "proximal": _cmd_proximal,
    "mixing": _cmd_mixing,
    "recode": _cmd_recode,
    "catalog": _cmd_catalog,
    "gibbs": _cmd_gibbs,
    "reduce": _cmd_reduce,
}


def run(command: str, flags: dict | None = None) -> RunReport:
    """Execute one subcommand; ``flags`` uses the long option names without dashes."""
    if command not in _DISPATCH:
        raise InvalidInputError(f"unknown command {command!r}; choose from {', '.join(COMMANDS)}")
    opts = dict(DEFAULTS)
    opts.update({k: v for k, v in (flags or {}).items() if v is not None})
    opts["tol_given"] = bool(flags and flags.get("tol") is not None)
    opts["command"] = command
    for key in ("depth", "cap", "blocks", "window"):
        if int(opts[key]) < 1:
            raise InvalidInputError(f"--{key} must be >= 1")
    if int(opts["connector"]) < 0:
        raise InvalidInputError("--connector must be >= 0")
    if not (opts["tol"] > 0 and math.isfinite(opts["tol"])):
        raise InvalidInputError("--tol must be positive")
    params = {k: opts[k] for k in DEFAULTS if k != "format" and opts[k] is not None}
    if opts.get("system"):
        params["system"] = opts["system"]
    rep = RunReport(command, params)
    t0 = time.perf_counter()
    _DISPATCH[command](rep, opts)
    rep.wall_time = time.perf_counter() - t0
    return rep


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thermoform", description=__doc__.split("\n")[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("system", nargs="?", help="description file or catalog key ('list'/'export' for catalog)")
    parser.add_argument("args", nargs="*", help="extra positional arguments (catalog export NAME)")
    parser.add_argument("--depth", type=int, help="word length / table depth (default 8)")
    parser.add_argument("--connector", type=int, help="connector length m (default 2)")
    parser.add_argument("--window", type=int, help="window L for connector and correlation scans (default 3)")
    parser.add_argument("--tol", type=float, help="tolerance (default 1e-8)")
    parser.add_argument("--cap", type=int, help="orbit cap / table rows shown (default 256)")
    parser.add_argument("--seed", type=int, help="seed for random catalog systems")
    parser.add_argument("--s", type=float, help="use the singular value potential phi^s")
    parser.add_argument("--blocks", type=int, help="block length for recode (default 2)")
    parser.add_argument("--format", choices=("text", "records"), default="text")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    flags = {k: v for k, v in vars(ns).items() if k != "command"}
    try:
        rep = run(ns.command, flags)
    except ResourceLimitError as exc:
        print(f"thermoform: resource limit: {exc}", file=sys.stderr)
        return 3
    except InvalidInputError as exc:
        print(f"thermoform: invalid input: {exc}", file=sys.stderr)
        return 2
    except NumericalFailureError as exc:
        print(f"thermoform: numerical failure: {exc}", file=sys.stderr)
        return 1
    except ThermoformError as exc:  # precondition failures are input problems
        print(f"thermoform: {exc}", file=sys.stderr)
        return 2
    out = rep.records() if ns.format == "records" else rep.text()
    sys.stdout.write(out)
    sys.stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
