"""System and reaction-network file formats.

The system format is line-oriented and human-writable. Exact rationals
survive round trips: integers and p/q literals parse to Fractions, while
a ~ prefix (or a decimal point or exponent) marks a float. A file is

    variables x xp y yp
    define half 1/2          # optional named numbers

    class
      monomial 1 0 0 0       # one exponent column per line, n entries
      monomial 0 1 1 0
      params k1 k2           # one entry per monomial: name or number
      eq -1 1                # h-rep rows over the class coordinates
      strict ...
      nonstrict ...
      generator 0 1 open     # v-rep rays, open (default) or closed
      simplex 1 1 level 2    # optional slice choice
    end

with # comments and blank lines ignored. The network format declares
species then reactions:

    species X Xp Y Yp
    X -> Xp : k1
    Xp + Y <-> X + Yp : k2 k3   # forward rate, then backward
    2X -> 0 : k4 | X=1.5        # kinetic-order override on the reactant

Reversible arrows expand to two directed reactions. Overrides apply to
the written reactant side only; write two directed lines to override a
backward direction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    EmptyNetwork,
    ParseError,
    SemanticError,
    UndeclaredSpecies,
)
from .linalg import Mat, Scalar, rank
from .model import (
    ClassCone,
    ClassPartition,
    GenSystem,
    ParamVec,
    SimplexChoice,
)

_NAME = re.compile(r"^[A-Za-z_]\w*$")
_TERM = re.compile(r"^(\d+)?\s*\*?\s*([A-Za-z_]\w*)$")


def parse_number(token: str):
    """Fraction for integer or p/q literals; float for ~, ., e/E forms."""
    t = token[1:] if token.startswith("~") else token
    try:
        if token.startswith("~") or "." in t or "e" in t or "E" in t:
            return float(t)
        return Fraction(t)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad number {token!r}") from exc


def format_number(v: Scalar) -> str:
    if isinstance(v, float):
        return "~" + repr(v)
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


@dataclass(frozen=True)
class SystemFile:
    """A system plus the optional slice choice stored with it."""

    system: GenSystem
    simplex: SimplexChoice | None = None


class _ClassBlock:
    def __init__(self, lineno: int):
        self.lineno = lineno
        self.monomials: list[tuple] = []
        self.params: list | None = None
        self.eq: list[tuple] = []
        self.strict: list[tuple] = []
        self.nonstrict: list[tuple] = []
        self.generators: list[tuple] = []
        self.open_flags: list[bool] = []
        self.simplex: tuple | None = None


def parse_system(text: str) -> SystemFile:
    """Parse the system format; ParseError and SemanticError carry lines."""
    variables: tuple[str, ...] | None = None
    defines: dict[str, Scalar] = {}
    blocks: list[_ClassBlock] = []
    block: _ClassBlock | None = None

    def number(token: str, lineno: int):
        if token in defines:
            return defines[token]
        try:
            return parse_number(token)
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        head, *rest = line.split()
        if block is None:
            if head == "variables":
                if variables is not None:
                    raise ParseError(f"line {lineno}: variables given twice")
                if not rest or not all(_NAME.match(t) for t in rest):
                    raise ParseError(f"line {lineno}: variables need plain names")
                if len(set(rest)) != len(rest):
                    raise SemanticError(f"line {lineno}: duplicate variable name")
                variables = tuple(rest)
            elif head == "define":
                if len(rest) != 2 or not _NAME.match(rest[0]):
                    raise ParseError(f"line {lineno}: define takes a name and a number")
                defines[rest[0]] = number(rest[1], lineno)
            elif head == "class":
                if rest:
                    raise ParseError(f"line {lineno}: class takes no arguments")
                if variables is None:
                    raise ParseError(f"line {lineno}: variables must come first")
                block = _ClassBlock(lineno)
            else:
                raise ParseError(f"line {lineno}: unknown directive {head!r}")
            continue
        if head == "monomial":
            if len(rest) != len(variables):
                raise SemanticError(
                    f"line {lineno}: expected {len(variables)} exponents"
                )
            block.monomials.append(tuple(number(t, lineno) for t in rest))
        elif head == "params":
            if block.params is not None:
                raise ParseError(f"line {lineno}: params given twice")
            entries = []
            for t in rest:
                if t in defines:
                    entries.append(defines[t])
                elif _NAME.match(t):
                    entries.append(t)
                else:
                    entries.append(number(t, lineno))
            block.params = entries
        elif head in ("eq", "strict", "nonstrict"):
            row = tuple(number(t, lineno) for t in rest)
            getattr(block, head).append(row)
        elif head == "generator":
            flag = True
            if rest and rest[-1] in ("open", "closed"):
                flag = rest[-1] == "open"
                rest = rest[:-1]
            block.generators.append(tuple(number(t, lineno) for t in rest))
            block.open_flags.append(flag)
        elif head == "simplex":
            if block.simplex is not None:
                raise ParseError(f"line {lineno}: simplex given twice")
            if len(rest) < 3 or rest[-2] != "level":
                raise ParseError(
                    f"line {lineno}: simplex needs weights then 'level' and a value"
                )
            u = tuple(number(t, lineno) for t in rest[:-2])
            block.simplex = (u, number(rest[-1], lineno))
        elif head == "end":
            if rest:
                raise ParseError(f"line {lineno}: end takes no arguments")
            blocks.append(block)
            block = None
        else:
            raise ParseError(f"line {lineno}: unknown directive {head!r}")
    if block is not None:
        raise ParseError(f"line {block.lineno}: class block never ends")
    if variables is None:
        raise ParseError("no variables line")
    if not blocks:
        raise ParseError("no class blocks")

    cols: list[tuple] = []
    sizes = []
    params: list = []
    cones = []
    simplex_rows = []
    any_simplex = False
    for b in blocks:
        size = len(b.monomials)
        if size == 0:
            raise SemanticError(f"line {b.lineno}: class needs at least one monomial")
        if b.params is None:
            raise SemanticError(f"line {b.lineno}: class needs a params line")
        if len(b.params) != size:
            raise SemanticError(
                f"line {b.lineno}: {size} monomials but {len(b.params)} params"
            )
        for rows in (b.eq, b.strict, b.nonstrict, b.generators):
            for row in rows:
                if len(row) != size:
                    raise SemanticError(
                        f"line {b.lineno}: row length {len(row)} != class size {size}"
                    )
        cols.extend(b.monomials)
        sizes.append(size)
        params.extend(b.params)
        cones.append(
            ClassCone(
                size=size,
                eq=tuple(b.eq),
                strict=tuple(b.strict),
                nonstrict=tuple(b.nonstrict),
                generators=tuple(b.generators) if b.generators else None,
                open_flags=tuple(b.open_flags) if b.generators else None,
            )
        )
        if b.simplex is not None:
            if len(b.simplex[0]) != size:
                raise SemanticError(
                    f"line {b.lineno}: simplex weights length != class size"
                )
            any_simplex = True
        simplex_rows.append(b.simplex)
    system = GenSystem(
        variables=variables,
        B=Mat.from_cols(cols, nrows=len(variables)),
        partition=ClassPartition(tuple(sizes)),
        cones=tuple(cones),
        params=ParamVec(tuple(params)),
    )
    simplex = None
    if any_simplex:
        normals = []
        levels = []
        for size, chosen in zip(sizes, simplex_rows):
            if chosen is None:
                normals.append(tuple(Fraction(1) for _ in range(size)))
                levels.append(Fraction(1))
            else:
                normals.append(chosen[0])
                levels.append(chosen[1])
        simplex = SimplexChoice(tuple(normals), tuple(levels))
    return SystemFile(system=system, simplex=simplex)


def serialize_system(sf: SystemFile) -> str:
    """Canonical text for a SystemFile; parse(serialize(sf)) == sf."""
    sysm = sf.system
    out = ["variables " + " ".join(sysm.variables), ""]
    for ci, (start, stop) in enumerate(sysm.partition.slices()):
        cone = sysm.cones[ci]
        out.append("class")
        for j in range(start, stop):
            col = sysm.B.col(j)
            out.append("  monomial " + " ".join(format_number(v) for v in col))
        entries = []
        for j in range(start, stop):
            p = sysm.params[j]
            entries.append(p if isinstance(p, str) else format_number(p))
        out.append("  params " + " ".join(entries))
        for kind in ("eq", "strict", "nonstrict"):
            for row in getattr(cone, kind):
                out.append(
                    f"  {kind} " + " ".join(format_number(v) for v in row)
                )
        if cone.generators:
            for g, flag in zip(cone.generators, cone.open_flags):
                tail = "open" if flag else "closed"
                out.append(
                    "  generator "
                    + " ".join(format_number(v) for v in g)
                    + f" {tail}"
                )
        if sf.simplex is not None:
            u = sf.simplex.normals[ci]
            lvl = sf.simplex.levels[ci]
            out.append(
                "  simplex "
                + " ".join(format_number(v) for v in u)
                + f" level {format_number(lvl)}"
            )
        out.append("end")
        out.append("")
    return "\n".join(out)


@dataclass(frozen=True)
class Reaction:
    """One directed reaction with kinetic-order overrides on the reactants."""

    reactants: tuple[tuple[int, str], ...]
    products: tuple[tuple[int, str], ...]
    rate: str
    overrides: tuple[tuple[str, Scalar], ...] = ()


@dataclass(frozen=True)
class NetworkFile:
    species: tuple[str, ...]
    reactions: tuple[Reaction, ...]


def _parse_complex(text: str, species: set[str], lineno: int):
    text = text.strip()
    if text == "0":
        return ()
    terms = []
    for part in text.split("+"):
        part = part.strip()
        mt = _TERM.match(part)
        if not mt:
            raise ParseError(f"line {lineno}: bad complex term {part!r}")
        coeff = int(mt.group(1)) if mt.group(1) else 1
        name = mt.group(2)
        if name not in species:
            raise UndeclaredSpecies(f"line {lineno}: species {name!r} not declared")
        terms.append((coeff, name))
    return tuple(terms)


def parse_network(text: str) -> NetworkFile:
    species: list[str] = []
    declared: set[str] = set()
    reactions: list[Reaction] = []
    rates_seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        if line.startswith("species"):
            names = line.split()[1:]
            if not names or not all(_NAME.match(t) for t in names):
                raise ParseError(f"line {lineno}: species need plain names")
            for t in names:
                if t in declared:
                    raise SemanticError(f"line {lineno}: species {t!r} declared twice")
                declared.add(t)
                species.append(t)
            continue
        if ":" not in line:
            raise ParseError(f"line {lineno}: reaction needs ': rates'")
        lhs, rhs = line.split(":", 1)
        overrides: tuple[tuple[str, Scalar], ...] = ()
        if "|" in rhs:
            rhs, over = rhs.split("|", 1)
            pairs = []
            for item in over.split(","):
                item = item.strip()
                if "=" not in item:
                    raise ParseError(f"line {lineno}: override needs species=value")
                name, val = (s.strip() for s in item.split("=", 1))
                if name not in declared:
                    raise UndeclaredSpecies(
                        f"line {lineno}: species {name!r} not declared"
                    )
                pairs.append((name, parse_number(val)))
            overrides = tuple(pairs)
        rates = rhs.replace(",", " ").split()
        reversible = "<->" in lhs
        arrow = "<->" if reversible else "->"
        if lhs.count(arrow) != 1:
            raise ParseError(f"line {lineno}: need exactly one {arrow!r}")
        left, right = lhs.split(arrow)
        reactants = _parse_complex(left, declared, lineno)
        products = _parse_complex(right, declared, lineno)
        want = 2 if reversible else 1
        if len(rates) != want or not all(_NAME.match(r) for r in rates):
            raise ParseError(
                f"line {lineno}: expected {want} rate name(s) after ':'"
            )
        for r in rates:
            if r in rates_seen:
                raise SemanticError(f"line {lineno}: rate {r!r} used twice")
            rates_seen.add(r)
        reactions.append(Reaction(reactants, products, rates[0], overrides))
        if reversible:
            if overrides:
                raise ParseError(
                    f"line {lineno}: overrides on <-> are ambiguous; "
                    "write two directed reactions"
                )
            reactions.append(Reaction(products, reactants, rates[1]))
    return NetworkFile(species=tuple(species), reactions=tuple(reactions))


def network_to_system(net: NetworkFile) -> GenSystem:
    """Steady-state system of the network under (generalized) mass action.

    Columns are ordered by falling total degree, then falling exponent
    tuple (earlier species first); identical (monomial, rate) columns
    merge by summing their stoichiometric columns. The single class keeps
    one equation row per independent row of the stoichiometric matrix.
    """
    if not net.reactions:
        raise EmptyNetwork("the network has no reactions")
    index = {name: i for i, name in enumerate(net.species)}
    n = len(net.species)
    cols = {}
    order = []
    for rx in net.reactions:
        v = [Fraction(0)] * n
        stoich = [Fraction(0)] * n
        for coeff, name in rx.reactants:
            v[index[name]] += coeff
            stoich[index[name]] -= coeff
        for coeff, name in rx.products:
            stoich[index[name]] += coeff
        for name, value in rx.overrides:
            v[index[name]] = value
        key = (tuple(v), rx.rate)
        if key in cols:
            cols[key] = [a + b for a, b in zip(cols[key], stoich)]
        else:
            cols[key] = stoich
            order.append(key)
    order.sort(key=lambda k: (-sum(k[0]), tuple(-e for e in k[0]), k[1]))
    m = len(order)
    V = Mat.from_cols([list(k[0]) for k in order], nrows=n)
    N = Mat.from_cols([cols[k] for k in order], nrows=n)
    rows = []
    for i in range(n):
        cand = rows + [N.row(i)]
        if rank(Mat.from_rows(cand, ncols=m)) == len(cand):
            rows.append(N.row(i))
    return GenSystem(
        variables=net.species,
        B=V,
        partition=ClassPartition((m,)),
        cones=(ClassCone(size=m, eq=tuple(rows)),),
        params=ParamVec(tuple(k[1] for k in order)),
    )
