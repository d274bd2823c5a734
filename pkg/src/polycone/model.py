"""System model: monomial classes, coefficient cones, coefficient sets.

A generalized polynomial system over positive variables is stored as an
exponent matrix B (one column per monomial term), a partition of the m
terms into l classes, one coefficient cone per class (a polyhedral cone
with some faces removed, inside the open orthant), and a parameter vector
c with positive numeric or opaque symbolic entries.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .cones import (
    extreme_rays,
    facet_normals,
    facets_removed_everywhere,
    span_complement_rows,
    _dot,
)
from .errors import EmptyCone, IncompatibleSimplex, SemanticError
from .linalg import Mat, Scalar, rank
from .regions import LinearConstraint, implies
from .symbolic import AffineForm


@dataclass(frozen=True)
class ClassPartition:
    sizes: tuple[int, ...]

    def __post_init__(self):
        if not self.sizes or any(s < 1 for s in self.sizes):
            raise SemanticError("every class needs at least one monomial term")

    @property
    def m(self) -> int:
        return sum(self.sizes)

    @property
    def ell(self) -> int:
        return len(self.sizes)

    def slices(self) -> tuple[tuple[int, int], ...]:
        out = []
        start = 0
        for s in self.sizes:
            out.append((start, start + s))
            start += s
        return tuple(out)


@dataclass(frozen=True)
class ClassCone:
    """Coefficient cone of one class, in H- and/or V-representation.

    H-rep rows act on the class's terms: eq rows hold with equality, strict
    rows are > 0, nonstrict rows are >= 0; membership always additionally
    requires the point to be componentwise positive. V-rep generators are
    nonnegative, nonzero vectors; a generator flagged open must carry a
    strictly positive combination coefficient.
    """

    size: int
    eq: tuple[tuple[Scalar, ...], ...] = ()
    strict: tuple[tuple[Scalar, ...], ...] = ()
    nonstrict: tuple[tuple[Scalar, ...], ...] = ()
    generators: tuple[tuple[Scalar, ...], ...] | None = None
    open_flags: tuple[bool, ...] | None = None
    h_given: bool = True
    relint_exact: bool | None = None

    def __post_init__(self):
        for rows in (self.eq, self.strict, self.nonstrict):
            for r in rows:
                if len(r) != self.size:
                    raise SemanticError("cone row length does not match class size")
        if self.generators is not None:
            for g in self.generators:
                if len(g) != self.size:
                    raise SemanticError("generator length does not match class size")
                if any(x < 0 for x in g) or all(x == 0 for x in g):
                    raise SemanticError(
                        "generators must be nonnegative and nonzero"
                    )
            flags = self.open_flags
            if flags is None:
                object.__setattr__(self, "open_flags", tuple(True for _ in self.generators))
            elif len(flags) != len(self.generators):
                raise SemanticError("one openness flag per generator required")
            if not (self.eq or self.strict or self.nonstrict):
                # V-rep only: facets are derived, an empty H-rep would read
                # as the whole orthant
                object.__setattr__(self, "h_given", False)
        else:
            object.__setattr__(self, "h_given", True)

    @property
    def has_v(self) -> bool:
        return self.generators is not None

    @property
    def has_h(self) -> bool:
        return self.h_given

    def h_rows(self):
        """(eq, strict, nonstrict) rows, derived from generators if needed.

        Derived rows describe the closure facets plus the linear span; facet
        strictness follows the generator flags: a facet stays closed exactly
        when every open generator lies on it.
        """
        if self.h_given:
            return self.eq, self.strict, self.nonstrict
        gens = self.generators or ()
        eq = span_complement_rows(gens, self.size) if gens else ()
        strict, nonstrict = [], []
        for n in facet_normals(gens, self.size):
            on = [_dot(n, g) == 0 for g in gens]
            closed = all(on[j] for j in range(len(gens)) if self.open_flags[j])
            (nonstrict if closed else strict).append(n)
        return tuple(eq), tuple(strict), tuple(nonstrict)


@dataclass(frozen=True)
class ParamVec:
    entries: tuple[Fraction | float | str, ...]

    def __post_init__(self):
        for v in self.entries:
            if isinstance(v, str):
                continue
            if not v > 0:
                raise SemanticError(f"numeric parameter {v} must be positive")

    @property
    def numeric(self) -> bool:
        return all(not isinstance(v, str) for v in self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]


def param_vec(values) -> ParamVec:
    out = []
    for v in values:
        if isinstance(v, str):
            out.append(v)
        elif isinstance(v, float):
            out.append(v)
        else:
            out.append(Fraction(v))
    return ParamVec(tuple(out))


@dataclass(frozen=True)
class SimplexChoice:
    """Per class: a nonnegative normal vector u and a positive level.

    The coefficient set of a class is its cone sliced by u . y = level.
    """

    normals: tuple[tuple[Scalar, ...], ...]
    levels: tuple[Scalar, ...]

    @staticmethod
    def standard(partition: ClassPartition) -> "SimplexChoice":
        return SimplexChoice(
            tuple(tuple(Fraction(1) for _ in range(s)) for s in partition.sizes),
            tuple(Fraction(1) for _ in partition.sizes),
        )

    def __post_init__(self):
        if len(self.normals) != len(self.levels):
            raise SemanticError("one normal and level per class required")
        for u, lvl in zip(self.normals, self.levels):
            if any(x < 0 for x in u) or all(x == 0 for x in u):
                raise SemanticError("simplex normal must be nonnegative and nonzero")
            if not lvl > 0:
                raise SemanticError("simplex level must be positive")


@dataclass(frozen=True)
class GenSystem:
    """Generalized polynomial system (c o x^B) in C over positive x."""

    variables: tuple[str, ...]
    B: Mat
    partition: ClassPartition
    cones: tuple[ClassCone, ...]
    params: ParamVec

    def __post_init__(self):
        n, m = len(self.variables), self.partition.m
        if self.B.shape != (n, m):
            raise SemanticError(
                f"exponent matrix shape {self.B.shape} does not match "
                f"{n} variables x {m} terms"
            )
        if len(self.cones) != self.partition.ell:
            raise SemanticError("one cone per class required")
        for cone, size in zip(self.cones, self.partition.sizes):
            if cone.size != size:
                raise SemanticError("cone size does not match class size")
        if len(self.params) != m:
            raise SemanticError("one parameter entry per term required")

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def m(self) -> int:
        return self.partition.m

    @property
    def ell(self) -> int:
        return self.partition.ell

    def monomial_label(self, j: int) -> str:
        parts = []
        for i, name in enumerate(self.variables):
            e = self.B.entries[i][j]
            if e == 0:
                continue
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts) if parts else "1"


@dataclass(frozen=True)
class ValidationReport:
    witnesses: tuple[tuple[Scalar, ...], ...]
    notes: tuple[str, ...] = ()


def convert_h_to_v(cone: ClassCone) -> ClassCone:
    """Fill in the V-representation of an H-rep cone.

    Generators are the extreme rays of the closure, all flagged open: the
    all-strict combination set is the relative interior of the closure,
    which is contained in the represented cone whenever that is nonempty
    and equals it when every closure facet lies in a removed face.
    relint_exact records whether that equality holds.
    """
    if cone.has_v:
        return cone
    gens = extreme_rays(
        cone.size,
        eq_rows=cone.eq,
        ineq_rows=tuple(cone.strict) + tuple(cone.nonstrict),
    )
    exact = True
    if cone.nonstrict and gens:
        exact = facets_removed_everywhere(gens, cone.size, cone.strict)
    return replace(
        cone,
        generators=gens,
        open_flags=tuple(True for _ in gens),
        relint_exact=exact,
    )


def validate(system: GenSystem) -> ValidationReport:
    """Check invariants and produce a positive interior witness per class.

    Raises EmptyCone when a class cone contains no positive point that
    satisfies the strict rows strictly.
    """
    witnesses = []
    notes = []
    for i, cone in enumerate(system.cones):
        work = cone
        if not work.has_v:
            work = convert_h_to_v(work)
            if work.relint_exact is False:
                notes.append(
                    f"class {i}: kept closed faces are not representable by "
                    "generator flags; H-rep remains authoritative"
                )
        gens = work.generators or ()
        if not gens:
            raise EmptyCone(i, f"class {i}: cone closure has no rays")
        if cone.has_v and cone.has_h:
            for g in gens:
                for r in cone.eq:
                    if _dot(r, g) != 0:
                        raise SemanticError(
                            f"class {i}: generator violates an equation row"
                        )
                for r in cone.nonstrict + cone.strict:
                    if _dot(r, g) < 0:
                        raise SemanticError(
                            f"class {i}: generator violates an inequality row"
                        )
        w = tuple(sum(g[j] for g in gens) for j in range(cone.size))
        if not all(v > 0 for v in w):
            raise EmptyCone(
                i, f"class {i}: no positive point (witness {w} has zero entries)"
            )
        eq, strict, nonstrict = cone.h_rows() if cone.has_h else ((), (), ())
        for r in strict:
            if not _dot(r, w) > 0:
                raise EmptyCone(
                    i, f"class {i}: strict row {r} vanishes on the whole cone"
                )
        for r in eq:
            if _dot(r, w) != 0:
                raise SemanticError(
                    f"class {i}: generators inconsistent with equation rows"
                )
        witnesses.append(w)
    return ValidationReport(tuple(witnesses), tuple(notes))


@dataclass(frozen=True)
class ClassCoefficients:
    """Affine parametrization of one class's coefficient-set slice."""

    symbols: tuple[str, ...]
    coordinates: tuple[AffineForm, ...]
    constraints: tuple[LinearConstraint, ...]
    dim: int
    generators: tuple[tuple[Scalar, ...], ...]
    normal: tuple[Scalar, ...]
    level: Scalar


@dataclass(frozen=True)
class CoefficientSet:
    classes: tuple[ClassCoefficients, ...]

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(s for cc in self.classes for s in cc.symbols)

    @property
    def coordinates(self) -> tuple[AffineForm, ...]:
        return tuple(f for cc in self.classes for f in cc.coordinates)

    @property
    def constraints(self) -> tuple[LinearConstraint, ...]:
        return tuple(c for cc in self.classes for c in cc.constraints)

    @property
    def dim(self) -> int:
        return sum(cc.dim for cc in self.classes)


def coefficient_set(system: GenSystem, simplex: SimplexChoice | None = None) -> CoefficientSet:
    """Slice each class cone with its simplex, as an affine parametrization.

    With generators g_1..g_k and free coefficients t_1..t_{k-1}, the last
    coefficient is eliminated through u . y = level; the coordinates are
    affine forms in the free coefficients and the feasibility constraints
    keep each coefficient positive (or nonnegative for closed generators).
    """
    if simplex is None:
        simplex = SimplexChoice.standard(system.partition)
    if len(simplex.normals) != system.ell:
        raise SemanticError("simplex must provide one normal per class")
    classes = []
    for i, cone in enumerate(system.cones):
        u, level = simplex.normals[i], simplex.levels[i]
        if len(u) != cone.size:
            raise SemanticError(f"class {i}: simplex normal has wrong length")
        work = convert_h_to_v(cone)
        gens = work.generators
        flags = work.open_flags
        weights = [_dot(u, g) for g in gens]
        for g, wgt in zip(gens, weights):
            if not wgt > 0:
                raise IncompatibleSimplex(
                    f"class {i}: simplex normal {tuple(u)} is not positive on "
                    f"generator {tuple(g)}"
                )
        k = len(gens)
        syms = tuple(f"t{i + 1}_{j + 1}" for j in range(k - 1))
        last = AffineForm.make(
            level / weights[-1],
            {s: -weights[j] / weights[-1] for j, s in enumerate(syms)},
        )
        coeff_forms = [AffineForm.symbol(s) for s in syms] + [last]
        coords = []
        for r in range(cone.size):
            const = last.const * gens[-1][r]
            lin = {}
            for j, s in enumerate(syms):
                v = gens[j][r] + dict(last.terms).get(s, Fraction(0)) * gens[-1][r]
                if v:
                    lin[s] = v
            coords.append(AffineForm.make(const, lin))
        constraints = [
            LinearConstraint(f, strict=bool(fl))
            for f, fl in zip(coeff_forms, flags)
            if not f.is_constant or not f.const > 0
        ]
        if not all(flags):
            # closed generators can park coordinates on the orthant boundary;
            # membership in the cone still demands positivity
            for f in coords:
                cand = LinearConstraint(f, strict=True)
                if f.is_constant:
                    if not f.const > 0:
                        raise EmptyCone(i, f"class {i}: a coordinate is never positive")
                elif not implies(constraints, cand):
                    constraints.append(cand)
        gmat = Mat.from_cols(gens, nrows=cone.size)
        classes.append(
            ClassCoefficients(
                symbols=syms,
                coordinates=tuple(coords),
                constraints=tuple(constraints),
                dim=rank(gmat) - 1,
                generators=tuple(tuple(g) for g in gens),
                normal=tuple(u),
                level=level,
            )
        )
    return CoefficientSet(tuple(classes))
