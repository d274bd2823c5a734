"""Command-line surface.

Subcommands: analyze, reduce, solve, verify, sample, import-network.
Exit codes: 0 success; 1 a verification candidate failed or was
indeterminate; 2 input error (syntax, dimensions, bad flags); 3 the
system is infeasible or a region/cone came back empty.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from fractions import Fraction

from .errors import (
    ConditionViolated,
    DegenerateExponent,
    DomainError,
    EmptyCone,
    EmptyNetwork,
    EmptyRegion,
    IncompatibleSimplex,
    InfeasibleRegion,
    NotASolution,
    ParseError,
    PolyconeError,
    RangeError,
    SemanticError,
    UndeclaredSpecies,
)
from .linalg import LinalgError, Mat
from .model import GenSystem, SimplexChoice, param_vec
from .reduction import binomial_conditions, decompose, reduce_system
from .signchar import TrinomialProblem, solve_trinomial
from .solve import (
    describe_solution_set,
    sample_solutions,
    solve_on_slice,
    verify,
)
from .sysfile import (
    SystemFile,
    network_to_system,
    parse_network,
    parse_number,
    parse_system,
    serialize_system,
)

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_INPUT = 2
EXIT_EMPTY = 3

_INPUT_ERRORS = (
    ParseError,
    SemanticError,
    UndeclaredSpecies,
    EmptyNetwork,
    DomainError,
    DegenerateExponent,
    IncompatibleSimplex,
    LinalgError,
    OSError,
)
_EMPTY_ERRORS = (EmptyCone, EmptyRegion, InfeasibleRegion, RangeError)


def _fmt(v) -> str:
    """Scalar for display: exact rationals verbatim, floats trimmed."""
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def _fmt_vec(vec) -> str:
    return ",".join(_fmt(v) for v in vec)


def _mat_text(mat: Mat, indent: str = "  ") -> list[str]:
    if mat.ncols == 0 or mat.nrows == 0:
        return [f"{indent}(empty: {mat.nrows}x{mat.ncols})"]
    cells = [[_fmt(v) for v in row] for row in mat.entries]
    widths = [max(len(cells[r][c]) for r in range(mat.nrows)) for c in range(mat.ncols)]
    return [
        indent + "[ " + "  ".join(c.rjust(w) for c, w in zip(row, widths)) + " ]"
        for row in cells
    ]


class Writer:
    """Collects either prose lines or machine key=value lines."""

    def __init__(self, machine: bool, stream):
        self.machine = machine
        self.stream = stream

    def text(self, line: str = ""):
        if not self.machine:
            print(line, file=self.stream)

    def kv(self, key: str, value):
        if self.machine:
            print(f"{key}={value}", file=self.stream)

    def both(self, key: str, value, label: str | None = None):
        if self.machine:
            self.kv(key, value)
        else:
            self.text(f"{label or key} = {value}")

    def matrix(self, key: str, label: str, mat: Mat):
        if self.machine:
            self.kv(f"{key}.shape", f"{mat.nrows}x{mat.ncols}")
            for i, row in enumerate(mat.entries):
                self.kv(f"{key}.row.{i}", _fmt_vec(row))
        else:
            self.text(f"{label} ({mat.nrows}x{mat.ncols}):")
            for line in _mat_text(mat):
                self.text(line)


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r") as fh:
        return fh.read()


def _parse_simplex_flag(flag: str) -> SimplexChoice:
    """Per-class "u1,u2,..:level" blocks joined by ';'."""
    weights = []
    levels = []
    for block in flag.split(";"):
        if ":" not in block:
            raise ParseError(
                "simplex flag blocks look like 'u1,u2,..:level', joined by ';'"
            )
        upart, lpart = block.rsplit(":", 1)
        weights.append(tuple(parse_number(t.strip()) for t in upart.split(",")))
        levels.append(parse_number(lpart.strip()))
    return SimplexChoice(tuple(weights), tuple(levels))


def _system_to_float(sysm: GenSystem) -> GenSystem:
    B = Mat.from_rows(
        [tuple(float(v) for v in row) for row in sysm.B.entries],
        ncols=sysm.m,
        mode="float",
    )
    params = param_vec(
        [p if isinstance(p, str) else float(p) for p in sysm.params.entries]
    )
    return replace(sysm, B=B, params=params)


def _substitute_params(sysm: GenSystem, flag: str) -> GenSystem:
    values = {}
    for item in flag.split(","):
        if "=" not in item:
            raise SemanticError("params items look like name=value")
        name, val = item.split("=", 1)
        values[name.strip()] = parse_number(val.strip())
    names = {p for p in sysm.params.entries if isinstance(p, str)}
    unknown = sorted(set(values) - names)
    if unknown:
        raise SemanticError(f"unknown parameter names: {', '.join(unknown)}")
    new = [
        values.get(p, p) if isinstance(p, str) else p
        for p in sysm.params.entries
    ]
    return replace(sysm, params=param_vec(new))


def _load(args) -> SystemFile:
    sf = parse_system(_read_text(args.input))
    system = sf.system
    simplex = sf.simplex
    if args.params:
        system = _substitute_params(system, args.params)
    if args.float_mode:
        system = _system_to_float(system)
    if args.simplex:
        simplex = _parse_simplex_flag(args.simplex)
    return SystemFile(system, simplex)


def _parse_values(text: str):
    toks = [t for chunk in text.split(",") for t in chunk.split()]
    return tuple(parse_number(t) for t in toks)


# ---------------------------------------------------------------- analyze


def run_analyze(args, stream) -> int:
    sf = _load(args)
    sysm = sf.system
    red = reduce_system(sysm, sf.simplex, tol=args.tol)
    dec = decompose(sysm, sf.simplex)
    w = Writer(args.format == "machine", stream)
    sizes = ", ".join(str(s) for s in sysm.partition.sizes)
    noun = "class" if sysm.ell == 1 else "classes"
    w.text(
        f"system: {sysm.n} variables, {sysm.m} terms, "
        f"{sysm.ell} {noun} (sizes {sizes})"
    )
    w.kv("variables", sysm.n)
    w.kv("terms", sysm.m)
    w.kv("classes", sysm.ell)
    for i, s in enumerate(sysm.partition.sizes):
        w.kv(f"class.{i}.size", s)
    w.both("slice_dim", red.coefficients.dim, "coefficient slice dimension")
    w.both("rank", red.difference_dim, "difference matrix rank")
    d = red.freedom
    if d == 0:
        w.text("degrees of freedom: d = 0 -> explicit parametrization exists")
    else:
        w.text(
            f"degrees of freedom: d = {d} -> {d} binomial "
            f"condition{'s' if d != 1 else ''} remain"
        )
    w.kv("d", d)
    w.kv("parametrization", "explicit" if d == 0 else "conditional")
    w.both("generic", "yes" if red.is_generic else "no", "generic")
    per = ", ".join(str(f) for f in dec.freedoms)
    verdict = "yes" if dec.decomposable else "no"
    w.text(
        f"decomposable: {verdict} "
        f"(class freedoms {per}; together {sum(dec.freedoms)}, full {d})"
    )
    w.kv("decomposable", "true" if dec.decomposable else "false")
    for i, f in enumerate(dec.freedoms):
        w.kv(f"class.{i}.freedom", f)
    for note in red.warnings:
        w.both("warning", note)
    return EXIT_OK


# ----------------------------------------------------------------- reduce


def run_reduce(args, stream) -> int:
    sf = _load(args)
    red = reduce_system(sf.system, sf.simplex, tol=args.tol)
    w = Writer(args.format == "machine", stream)
    w.matrix("indicator", "class indicator", red.indicator)
    w.matrix("differencing", "differencing map", red.differencing)
    w.matrix(
        "stacked",
        "exponents stacked over the class indicator",
        red.system.B.vstack(red.indicator),
    )
    w.matrix("differences", "difference matrix", red.difference_matrix)
    w.matrix("dependency", "dependency basis", red.dependency_basis)
    w.matrix("geninv", "generalized inverse", red.geninv)
    w.matrix("lift", "lift exponents", red.lift_exponents)
    w.matrix("orthocomplement", "unconstrained directions", red.orthocomplement)
    w.both("d", red.freedom, "degrees of freedom")
    w.text(f"coefficient slice (dimension {red.coefficients.dim}):")
    w.kv("slice.dim", red.coefficients.dim)
    coords = red.coefficients.coordinates
    for j, form in enumerate(coords):
        label = red.system.monomial_label(j)
        if args.format == "machine":
            w.kv(f"slice.coordinate.{j}", form)
        else:
            w.text(f"  value of {label}: {form}")
    for i, con in enumerate(red.coefficients.constraints):
        if args.format == "machine":
            w.kv(f"slice.constraint.{i}", con)
        else:
            w.text(f"  constraint: {con}")
    conds = binomial_conditions(red)
    w.text(f"binomial conditions ({len(conds)}):")
    w.kv("conditions", len(conds))
    for i, c in enumerate(conds):
        w.text(f"  {c}")
        w.kv(f"condition.{i}", c)
    for note in red.warnings:
        w.both("warning", note)
    return EXIT_OK


# ------------------------------------------------------------------ solve


def _run_trinomial(args, stream) -> int:
    missing = [
        f"--{k}" for k in ("b1", "b2", "c1", "c2") if getattr(args, k) is None
    ]
    if missing:
        raise SemanticError(
            "trinomial mode needs " + ", ".join(missing)
        )
    problem = TrinomialProblem(
        e1=parse_number(args.b1),
        e2=parse_number(args.b2),
        c1=parse_number(args.c1),
        c2=parse_number(args.c2),
    )
    sol = solve_trinomial(problem)
    w = Writer(args.format == "machine", stream)
    w.text(
        f"trinomial: {_fmt(problem.c1)} * x^{_fmt(problem.e1)} + "
        f"{_fmt(problem.c2)} * x^{_fmt(problem.e2)} = 1"
    )
    for k in ("e1", "e2", "c1", "c2"):
        w.kv(k, _fmt(getattr(problem, k)))
    w.both("sign_changes", problem.sign_changes(), "sign changes")
    w.kv("count", sol.count)
    if sol.discriminant is None:
        w.kv("discriminant", "none")
        (root, _) = sol.roots[0]
        w.text(f"single monotone branch, one root x = {_fmt(root)}")
        w.kv("root.0", _fmt(root))
        w.kv("root.0.mult", 1)
        return EXIT_OK
    disc = _fmt(sol.discriminant)
    w.kv("discriminant", disc)
    if not sol.roots:
        w.text(f"discriminant = {disc}, no positive roots")
        return EXIT_EMPTY
    if len(sol.roots) == 1 and sol.roots[0][1] == 2:
        w.text(f"discriminant = {disc}, double root x = {_fmt(sol.roots[0][0])}")
    else:
        listed = ", ".join(f"x = {_fmt(r)}" for r, _ in sol.roots)
        w.text(f"discriminant = {disc}, roots {listed}")
    for i, (root, mult) in enumerate(sol.roots):
        w.kv(f"root.{i}", _fmt(root))
        w.kv(f"root.{i}.mult", mult)
    return EXIT_OK


def run_solve(args, stream) -> int:
    if args.input == "trinomial":
        return _run_trinomial(args, stream)
    sf = _load(args)
    red = reduce_system(sf.system, sf.simplex, tol=args.tol)
    sol = solve_on_slice(red)
    w = Writer(args.format == "machine", stream)
    conds = sol.conditions
    w.text(f"binomial conditions ({len(conds)}):")
    w.kv("conditions", len(conds))
    for i, c in enumerate(conds):
        w.text(f"  {c}")
        w.kv(f"condition.{i}", c)
    w.kv("branches", len(sol.branches))
    for bi, br in enumerate(sol.branches):
        w.text()
        path = "/".join(br.path) if br.path else "-"
        w.text(f"branch {bi} (path {path}):")
        w.kv(f"branch.{bi}.path", path)
        w.text(f"  free: {', '.join(br.free) or '-'}")
        w.kv(f"branch.{bi}.free", ", ".join(br.free) or "-")
        for sym, val in br.fixed:
            w.both(f"branch.{bi}.fixed.{sym}", _fmt(val), f"  {sym}")
        for sym, expr in br.solved:
            w.both(f"branch.{bi}.solved.{sym}", expr, f"  {sym}")
        for i, con in enumerate(br.region):
            w.text(f"  where {con}")
            w.kv(f"branch.{bi}.region.{i}", con)
        for i, pc in enumerate(br.leftover):
            w.text(f"  where {pc}")
            w.kv(f"branch.{bi}.leftover.{i}", pc)
        for i, rc in enumerate(br.residual):
            w.text(f"  residual {rc}")
            w.kv(f"branch.{bi}.residual.{i}", rc)
    w.text()
    if sol.parametrized:
        w.text("every branch is explicit; the solution set is parametrized by")
        w.text("the free slice coordinates and one torus factor per")
        w.text("unconstrained direction.")
    else:
        w.text("residual conditions remain; sampling stays available but the")
        w.text("parametrization is not fully explicit.")
    w.kv("parametrized", "true" if sol.parametrized else "false")
    desc = describe_solution_set(red)
    w.text()
    w.text("solution set over the slice coordinates:")
    for name, pp in zip(desc.variables, desc.products):
        w.both(f"variable.{name}", pp, f"  {name}")
    for i, c in enumerate(desc.conditions):
        w.text(f"  subject to {c}")
        w.kv(f"subject.{i}", c)
    for note in sol.warnings:
        w.both("warning", note)
    return EXIT_OK


# ----------------------------------------------------------------- verify


def run_verify(args, stream) -> int:
    sf = _load(args)
    sysm = sf.system
    candidates = []
    for given in args.x or ():
        candidates.append(_parse_values(given))
    if args.from_file:
        for line in _read_text(args.from_file).splitlines():
            line = line.strip()
            if line and not line.startswith("#"):
                candidates.append(_parse_values(line))
    if not candidates:
        raise SemanticError("no candidates: pass --x or --from")
    w = Writer(args.format == "machine", stream)
    tol = args.tol if args.tol is not None else 1e-9
    all_ok = True
    for ci, x in enumerate(candidates):
        try:
            report = verify(sysm, x, tol=tol)
        except (NotASolution, SemanticError) as exc:
            w.text(f"candidate {ci}: x = ({_fmt_vec(x)})")
            w.text(f"  fail ({exc})")
            w.kv(f"candidate.{ci}.verdict", "fail")
            w.kv(f"candidate.{ci}.reason", exc)
            all_ok = False
            continue
        if report.ok and not report.boundary:
            verdict = "ok"
        elif report.ok:
            verdict = "boundary, indeterminate"
            all_ok = False
        else:
            verdict = "fail"
            all_ok = False
        w.text(f"candidate {ci}: x = ({_fmt_vec(x)})")
        w.text(f"  {verdict} (max equation defect {_fmt(report.max_equation_defect)})")
        w.kv(f"candidate.{ci}.verdict", verdict.split(",")[0])
        w.kv(f"candidate.{ci}.max_defect", _fmt(report.max_equation_defect))
        for k, ch in enumerate(report.checks):
            if ch.verdict != "ok":
                w.text(
                    f"  class {ch.class_index} {ch.kind} row: "
                    f"value {_fmt(ch.value)} ({ch.verdict})"
                )
            w.kv(
                f"candidate.{ci}.check.{k}",
                f"{ch.class_index}:{ch.kind}:{ch.verdict}",
            )
    return EXIT_OK if all_ok else EXIT_VERIFY_FAIL


# ----------------------------------------------------------------- sample


def _projection_columns(tokens, variables):
    cols = []
    for tok in tokens:
        parts = [p.strip() for p in tok.split("+")]
        idxs = []
        for part in parts:
            if part in variables:
                idxs.append(variables.index(part))
            elif part == "xbar":
                hits = [i for i, v in enumerate(variables) if v.startswith("x")]
                if not hits:
                    raise SemanticError("xbar: no variables start with 'x'")
                idxs.extend(hits)
            else:
                raise SemanticError(f"unknown projection column {part!r}")
        cols.append((tok, tuple(idxs)))
    return cols


def run_sample(args, stream) -> int:
    sf = _load(args)
    red = reduce_system(sf.system, sf.simplex, tol=args.tol)
    fix = []
    if args.fix:
        for item in args.fix.split(","):
            if "=" not in item:
                raise SemanticError("fix items look like name=value")
            name, val = item.split("=", 1)
            fix.append((name.strip(), float(parse_number(val.strip()))))
    points = sample_solutions(
        red, count=args.count, seed=args.seed, fix=tuple(fix)
    )
    variables = sf.system.variables
    if args.project:
        cols = _projection_columns(
            [t.strip() for t in args.project.split(",")], variables
        )
    else:
        cols = [(name, (i,)) for i, name in enumerate(variables)]
    header = [name for name, _ in cols] + ["defect"]
    machine = args.format == "machine"
    if machine:
        print(f"columns={','.join(header)}", file=stream)
        print(f"count={len(points)}", file=stream)
    else:
        print("\t".join(header), file=stream)
    for pi, pt in enumerate(points):
        vals = [sum(float(pt.x[i]) for i in idxs) for _, idxs in cols]
        vals.append(pt.max_defect)
        row = "\t".join(_fmt(v) for v in vals)
        if machine:
            print(f"row.{pi}={row.replace(chr(9), ',')}", file=stream)
        else:
            print(row, file=stream)
    return EXIT_OK


# --------------------------------------------------------- import-network


def run_import(args, stream) -> int:
    net = parse_network(_read_text(args.input))
    sysm = network_to_system(net)
    if args.float_mode:
        sysm = _system_to_float(sysm)
    simplex = _parse_simplex_flag(args.simplex) if args.simplex else None
    print(serialize_system(SystemFile(sysm, simplex)), file=stream, end="")
    return EXIT_OK


# ------------------------------------------------------------------- main


def _add_common(p, with_input=True, input_help="system file ('-' for stdin)"):
    if with_input:
        p.add_argument("input", help=input_help)
    p.add_argument("--simplex", help="per-class 'u1,u2,..:level' joined by ';'")
    p.add_argument(
        "--params",
        help="substitute numeric parameter values, 'name=value,..'",
    )
    p.add_argument("--tol", type=float, default=None, help="numeric tolerance")
    p.add_argument(
        "--format", choices=("text", "machine"), default="text",
        help="machine output is line-oriented key=value",
    )
    mode = p.add_mutually_exclusive_group()
    mode.add_argument(
        "--exact", dest="float_mode", action="store_false",
        help="keep rational scalars exact (default)",
    )
    mode.add_argument(
        "--float", dest="float_mode", action="store_true",
        help="coerce every scalar to floating point",
    )
    p.set_defaults(float_mode=False)
    p.add_argument("--out", help="write output to a file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polycone",
        description=(
            "Reduce generalized polynomial systems over positive variables "
            "to binomial conditions on a bounded coefficient set, solve, "
            "verify, and sample."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="shape, freedom, and decomposability")
    _add_common(p)
    p.set_defaults(run=run_analyze)

    p = sub.add_parser("reduce", help="print every reduction matrix and the slice")
    _add_common(p)
    p.set_defaults(run=run_reduce)

    p = sub.add_parser(
        "solve",
        help="solve the binomial conditions (or: solve trinomial --b1 ..)",
    )
    _add_common(p, input_help="system file, or the word 'trinomial'")
    p.add_argument("--b1", help="first trinomial exponent")
    p.add_argument("--b2", help="second trinomial exponent")
    p.add_argument("--c1", help="first trinomial coefficient")
    p.add_argument("--c2", help="second trinomial coefficient")
    p.set_defaults(run=run_solve)

    p = sub.add_parser("verify", help="check candidate points against the cones")
    _add_common(p)
    p.add_argument(
        "--x", action="append",
        help="candidate point 'v1,v2,..' (repeatable)",
    )
    p.add_argument(
        "--from", dest="from_file",
        help="file of candidate points, one per line ('-' for stdin)",
    )
    p.set_defaults(run=run_verify)

    p = sub.add_parser("sample", help="draw verified samples from the solution set")
    _add_common(p)
    p.add_argument("--count", type=int, default=10, help="samples to draw")
    p.add_argument("--seed", type=int, default=0, help="base random seed")
    p.add_argument(
        "--project",
        help="output columns: variable names, name+name sums, or xbar",
    )
    p.add_argument(
        "--fix",
        help="pin variables along unconstrained directions, 'name=value,..'",
    )
    p.set_defaults(run=run_sample)

    p = sub.add_parser("import-network", help="convert a reaction network file")
    _add_common(p, input_help="network file ('-' for stdin)")
    p.set_defaults(run=run_import)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    stream = sys.stdout
    opened = None
    if getattr(args, "out", None):
        opened = open(args.out, "w")
        stream = opened
    try:
        return args.run(args, stream)
    except _EMPTY_ERRORS as exc:
        print(f"empty: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PolyconeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    finally:
        if opened is not None:
            opened.close()


if __name__ == "__main__":
    raise SystemExit(main())
