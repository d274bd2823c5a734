"""Reduction of a generalized polynomial system to binomial conditions.

The coefficient vector of a solution lies on the simplex slice of each
class cone. Differencing the exponent columns within each class yields a
difference matrix whose kernel measures the degrees of freedom left after
the slice; each kernel basis column turns into one binomial condition on
the slice coordinates. A generalized inverse of the difference matrix
provides the exponents that lift slice points back to the variables, up to
a multiplicative factor from the orthogonal complement of the differences.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import SemanticError
from .linalg import Mat, column_canonical, generalized_inverse, kernel_basis, rank, rref
from .model import (
    ClassPartition,
    CoefficientSet,
    GenSystem,
    ParamVec,
    SimplexChoice,
    coefficient_set,
    validate,
)
from .symbolic import AffineForm, PowerProduct, _pow_scalar


def class_indicator(partition: ClassPartition) -> Mat:
    """0/1 matrix, one row per class marking its terms."""
    m = partition.m
    rows = []
    for start, stop in partition.slices():
        rows.append(tuple(Fraction(1 if start <= j < stop else 0) for j in range(m)))
    return Mat.from_rows(rows, ncols=m)


def differencing_matrix(partition: ClassPartition) -> Mat:
    """Columns e_j - e_anchor for each non-anchor term j, anchor last in class."""
    m = partition.m
    cols = []
    for start, stop in partition.slices():
        anchor = stop - 1
        for j in range(start, anchor):
            v = [Fraction(0)] * m
            v[j] = Fraction(1)
            v[anchor] = Fraction(-1)
            cols.append(tuple(v))
    return Mat.from_cols(cols, nrows=m)


def class_freedoms(system: GenSystem) -> tuple[int, ...]:
    """Degrees of freedom each class contributes on its own.

    For one class this is the kernel dimension of its exponent columns
    stacked over a row of ones; the whole system is decomposable when
    these sum to the system's degrees of freedom.
    """
    out = []
    for start, stop in system.partition.slices():
        block = system.B.take_cols(range(start, stop))
        ones = Mat.from_rows(
            [tuple(Fraction(1) for _ in range(stop - start))], ncols=stop - start
        )
        out.append(len(kernel_basis(block.vstack(ones)).vectors))
    return tuple(out)


@dataclass(frozen=True)
class ReducedSystem:
    """Outcome of the reduction; matrices are stored column-aligned with terms."""

    system: GenSystem
    simplex: SimplexChoice
    coefficients: CoefficientSet
    indicator: Mat          # ell x m, 0/1 class membership
    differencing: Mat       # m x (m - ell)
    difference_matrix: Mat  # n x (m - ell)
    dependency_basis: Mat   # m x d, canonical kernel of [B; indicator]
    geninv: Mat             # (m - ell) x n, generalized inverse of the differences
    lift_exponents: Mat     # m x n, differencing @ geninv
    orthocomplement: Mat    # n x q, basis of directions unconstrained by differences
    difference_dim: int
    warnings: tuple[str, ...] = ()

    @property
    def freedom(self) -> int:
        return self.dependency_basis.ncols

    @property
    def is_generic(self) -> bool:
        n = self.difference_matrix.nrows
        return self.difference_dim == min(n, self.difference_matrix.ncols)

    @property
    def is_decomposable(self) -> bool:
        return self.freedom == sum(class_freedoms(self.system))

    @property
    def mode(self) -> str:
        return self.difference_matrix.mode


def reduce_system(
    system: GenSystem,
    simplex: SimplexChoice | None = None,
    geninv: Mat | None = None,
    tol: float | None = None,
) -> ReducedSystem:
    """Reduce the system over its coefficient-set slice.

    geninv overrides the computed generalized inverse of the difference
    matrix; any matrix g with M g M = M is accepted.
    """
    report = validate(system)
    warnings = list(report.notes)
    if simplex is None:
        simplex = SimplexChoice.standard(system.partition)
    coeffs = coefficient_set(system, simplex)
    indicator = class_indicator(system.partition)
    differencing = differencing_matrix(system.partition)
    diff = system.B @ differencing
    stacked = system.B.vstack(indicator)
    dependency = column_canonical(kernel_basis(stacked, tol).mat(), tol)
    if geninv is None:
        geninv = generalized_inverse(diff, tol)
    else:
        if geninv.shape != (diff.ncols, diff.nrows):
            raise SemanticError(
                f"generalized inverse must have shape {(diff.ncols, diff.nrows)}"
            )
    check = diff @ geninv @ diff
    if diff.mode == "exact" and check.mode == "exact":
        if check.entries != diff.entries:
            raise SemanticError("not a generalized inverse of the difference matrix")
    else:
        scale = max(1.0, diff.max_abs())
        err = max(
            abs(float(a) - float(b))
            for ra, rb in zip(check.entries, diff.entries)
            for a, b in zip(ra, rb)
        ) if diff.ncols else 0.0
        if err > 1e-9 * scale:
            raise SemanticError("not a generalized inverse of the difference matrix")
    lift = differencing @ geninv
    ortho = column_canonical(kernel_basis(diff.t(), tol).mat(), tol)
    dim_l = rank(diff, tol)
    if diff.mode == "float":
        _, _, ws = rref(diff, tol)
        warnings.extend(ws)
    if dependency.ncols != system.m - system.ell - dim_l:
        raise SemanticError("kernel dimension inconsistent with difference rank")
    return ReducedSystem(
        system=system,
        simplex=simplex,
        coefficients=coeffs,
        indicator=indicator,
        differencing=differencing,
        difference_matrix=diff,
        dependency_basis=dependency,
        geninv=geninv,
        lift_exponents=lift,
        orthocomplement=ortho,
        difference_dim=dim_l,
        warnings=tuple(warnings),
    )


@dataclass(frozen=True)
class BinomialCondition:
    """lhs(t) = rhs(params): coordinate power product against parameter one."""

    lhs: PowerProduct
    rhs: PowerProduct
    exponents: tuple

    def __str__(self):
        return f"{self.lhs} = {self.rhs}"

    def residual(self, env: dict) -> float:
        """Relative defect |log lhs - log rhs| at a numeric assignment."""
        return abs(self.lhs.eval_log(env) - self.rhs.eval_log(env))


def binomial_conditions(red: ReducedSystem) -> tuple[BinomialCondition, ...]:
    """One condition per dependency-basis column.

    Coordinates with nonconstant affine forms collect on the left; their
    parameters, constant coordinates, and any leftover numeric factor
    collect on the right.
    """
    coords = red.coefficients.coordinates
    params = red.system.params
    out = []
    for kcol in range(red.dependency_basis.ncols):
        h = red.dependency_basis.col(kcol)
        lhs = PowerProduct.one()
        rhs = PowerProduct.one()
        for j, e in enumerate(h):
            if e == 0:
                continue
            f = coords[j]
            if f.is_constant:
                rhs = rhs.scaled(_pow_scalar(f.const, -e))
            else:
                lhs = lhs.times_base(f, e)
            p = params[j]
            if isinstance(p, str):
                rhs = rhs.times_base(AffineForm.symbol(p), e)
            else:
                rhs = rhs.scaled(_pow_scalar(p, e))
        if lhs.coeff != 1:
            rhs = rhs.scaled(1 / lhs.coeff)
            lhs = lhs.scaled(1 / lhs.coeff)
        out.append(BinomialCondition(lhs=lhs, rhs=rhs, exponents=tuple(h)))
    return tuple(out)


@dataclass(frozen=True)
class Decomposition:
    """Per-class subsystems and whether their slices multiply together.

    The full solved slice is the direct product of the per-class slices
    exactly when the per-class freedoms sum to the system's freedom; it is
    always contained in that product.
    """

    subsystems: tuple[GenSystem, ...]
    reduced: tuple[ReducedSystem, ...]
    freedoms: tuple[int, ...]
    total_freedom: int
    decomposable: bool


def class_subsystems(system: GenSystem) -> tuple[GenSystem, ...]:
    """One single-class system per class, over the same variables."""
    out = []
    for ci, (start, stop) in enumerate(system.partition.slices()):
        out.append(
            GenSystem(
                variables=system.variables,
                B=system.B.take_cols(range(start, stop)),
                partition=ClassPartition((stop - start,)),
                cones=(system.cones[ci],),
                params=ParamVec(system.params.entries[start:stop]),
            )
        )
    return tuple(out)


def decompose(system: GenSystem, simplex: SimplexChoice | None = None) -> Decomposition:
    """Reduce each class on its own and compare freedoms with the whole."""
    full = reduce_system(system, simplex)
    subs = class_subsystems(system)
    reduced = []
    for ci, sub in enumerate(subs):
        sub_simplex = None
        if simplex is not None:
            sub_simplex = SimplexChoice(
                (simplex.normals[ci],), (simplex.levels[ci],)
            )
        reduced.append(reduce_system(sub, sub_simplex))
    freedoms = tuple(r.freedom for r in reduced)
    return Decomposition(
        subsystems=subs,
        reduced=tuple(reduced),
        freedoms=freedoms,
        total_freedom=full.freedom,
        decomposable=full.freedom == sum(freedoms),
    )
