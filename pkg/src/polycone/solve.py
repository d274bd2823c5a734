"""Solving on the coefficient slice, lifting, verification, sampling.

Binomial conditions are eliminated by solve-and-substitute: a condition
containing a coordinate that appears nowhere inside an affine base is
solved for that coordinate as a power product of the others and
substituted away. Residual one-coordinate conditions of sign-
characteristic shape split the solution set into explicit root branches.
The surviving coordinates parametrize the solution set; lifting maps a
slice point to the variables through the stored exponents, with one
multiplicative factor per unconstrained direction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import exp, log

from .errors import (
    ConditionViolated,
    EmptyRegion,
    InfeasibleRegion,
    NotASolution,
    RangeError,
    SemanticError,
)
from .linalg import Scalar
from .model import GenSystem
from .reduction import BinomialCondition, ReducedSystem, binomial_conditions
from .regions import LinearConstraint, bounds, feasible, implies
from .signchar import SignChar, _nth_root_exact
from .symbolic import (
    AffineForm,
    PowerProduct,
    _pow_scalar,
    linearize_terms,
    log_scalar,
)


# largest bit size an exact power may reach before falling back to floats;
# everything below stays well inside float range for later conversions
_EXACT_POW_BITS = 900


def _safe_float_pow(v: Scalar, q: Scalar) -> float:
    try:
        return exp(float(q) * log_scalar(v))
    except OverflowError:
        return float("inf")


def _power_exactish(v: Scalar, q: Scalar) -> Scalar:
    """v ** q, staying rational when the root is rational and small."""
    if isinstance(v, Fraction) and isinstance(q, Fraction):
        base = v if q.denominator == 1 else _nth_root_exact(v, q.denominator)
        if base is not None:
            size = max(base.numerator.bit_length(), base.denominator.bit_length())
            if size * abs(q.numerator) <= _EXACT_POW_BITS:
                return _pow_scalar(base, Fraction(q.numerator))
            return _safe_float_pow(v, q)
    return _pow_scalar(v, q)


def _pp_power(pp: PowerProduct, q) -> PowerProduct:
    out = PowerProduct(_power_exactish(pp.coeff, q), ())
    for b, e in pp.factors:
        out = out.times_base(b, e * q)
    return out


def _substitute(pp: PowerProduct, sym: str, expr: PowerProduct) -> PowerProduct:
    """Replace a bare-symbol base by a power product."""
    out = PowerProduct(pp.coeff, ())
    for b, e in pp.factors:
        if b.as_symbol() == sym:
            out = out.times(_pp_power(expr, e))
        else:
            out = out.times_base(b, e)
    return out


def _pin_form(f: AffineForm, sym: str, val: Scalar) -> AffineForm:
    coeffs = dict(f.terms)
    c = coeffs.pop(sym, None)
    if c is None:
        return f
    return AffineForm.make(f.const + c * val, coeffs)


def _pin_product(pp: PowerProduct, sym: str, val: Scalar) -> PowerProduct:
    out = PowerProduct(pp.coeff, ())
    for b, e in pp.factors:
        out = out.times_base(_pin_form(b, sym, val), e)
    return out


@dataclass(frozen=True)
class ResidualCondition:
    """A binomial condition left after elimination: product = target."""

    product: PowerProduct
    target: Scalar
    source: int

    def __str__(self):
        return f"{self.product} = {self.target}"

    def defect(self, env: dict) -> float:
        return abs(self.product.eval_log(env) - log_scalar(self.target))


@dataclass(frozen=True)
class ProductConstraint:
    """sum(coeff * product) > 0 (or >= 0); kept when not linearizable."""

    terms: tuple[tuple[Scalar, PowerProduct], ...]
    strict: bool

    def eval(self, env: dict) -> Scalar:
        return sum(c * pp.eval(env) for c, pp in self.terms)

    def holds(self, env: dict) -> bool:
        v = self.eval(env)
        return v > 0 if self.strict else v >= 0

    def __str__(self):
        body = " + ".join(f"{c} * [{pp}]" for c, pp in self.terms)
        return f"{body} {'>' if self.strict else '>='} 0"


@dataclass(frozen=True)
class SolutionBranch:
    """One connected piece of the solved coefficient slice."""

    path: tuple[str, ...]
    fixed: tuple[tuple[str, Scalar], ...]
    solved: tuple[tuple[str, PowerProduct], ...]
    region: tuple[LinearConstraint, ...]
    leftover: tuple[ProductConstraint, ...]
    residual: tuple[ResidualCondition, ...]
    free: tuple[str, ...]

    def coordinate_env(self, values: dict) -> dict:
        """Full symbol environment from values for the free coordinates."""
        env = dict(values)
        env.update(self.fixed)
        for sym, expr in reversed(self.solved):
            env[sym] = expr.eval(env)
        return env


@dataclass(frozen=True)
class SliceSolution:
    reduced: ReducedSystem
    conditions: tuple[BinomialCondition, ...]
    branches: tuple[SolutionBranch, ...]
    warnings: tuple[str, ...] = ()

    @property
    def parametrized(self) -> bool:
        """True when every branch is fully explicit."""
        return all(not b.residual for b in self.branches)


def _select_eliminable(work, sym_rank):
    """Pick (work index, symbol) per the elimination rule, or None.

    Conditions with the fewest distinct coordinates go first (ties: lowest
    coordinate rank, then input order); within one condition the highest-
    ranked coordinate that appears only as a bare base anywhere is solved.
    """
    blocked = set()
    for pp, _, _ in work:
        for b, _ in pp.factors:
            if b.as_symbol() is None:
                blocked |= b.symbols()
    best = None
    for pos, (pp, _, _) in enumerate(work):
        syms = pp.symbols()
        eligible = [
            s
            for b, _ in pp.factors
            if (s := b.as_symbol()) is not None and s not in blocked
        ]
        if not eligible:
            continue
        key = (len(syms), min(sym_rank[s] for s in syms), pos)
        if best is None or key < best[0]:
            best = (key, pos, max(eligible, key=lambda s: sym_rank[s]))
    if best is None:
        return None
    return best[1], best[2]


def _solve_condition(pp: PowerProduct, target: Scalar, sym: str) -> PowerProduct:
    exp_s = None
    rest = PowerProduct(pp.coeff, ())
    for b, e in pp.factors:
        if b.as_symbol() == sym:
            exp_s = e
        else:
            rest = rest.times_base(b, e)
    inv = (Fraction(1) / exp_s) if isinstance(exp_s, Fraction) else 1.0 / exp_s
    return _pp_power(rest.invert().scaled(target), inv)


def _constant_consistent(value: Scalar, target: Scalar) -> bool:
    if isinstance(value, Fraction) and isinstance(target, Fraction):
        return value == target
    v, t = float(value), float(target)
    return abs(v - t) <= 1e-10 * max(1.0, abs(t))


def _rebuild_region(constraints, solved_map):
    """Substitute solved coordinates into the slice constraints.

    Returns (linear, leftover) or raises InfeasibleRegion when a constraint
    becomes a false constant.
    """
    carried = [c for c in constraints if not (c.symbols() & solved_map.keys())]
    linear = list(carried)
    leftover = []
    for c in [c for c in constraints if c.symbols() & solved_map.keys()]:
        terms = []
        if c.form.const != 0:
            terms.append((c.form.const, PowerProduct.one()))
        for s, cf in c.form.terms:
            if s in solved_map:
                terms.append((cf, solved_map[s]))
            else:
                terms.append((cf, PowerProduct.from_symbol(s)))
        if all(pp.is_constant for _, pp in terms):
            v = sum(cf * pp.coeff for cf, pp in terms)
            if (v > 0) if c.strict else (v >= 0):
                continue
            raise InfeasibleRegion(f"constraint {c} fails after substitution")
        signs = [cf * pp.coeff for cf, pp in terms]
        if all(s > 0 for s in signs) and _bases_implied_positive(terms, carried):
            continue
        if all(s < 0 for s in signs) and _bases_implied_positive(terms, carried):
            raise InfeasibleRegion(f"constraint {c} fails after substitution")
        if _clearable_bases_implied(terms, carried):
            lin = linearize_terms(terms)
            if lin is not None:
                if lin.is_constant:
                    ok = (lin.const > 0) if c.strict else (lin.const >= 0)
                    if not ok:
                        raise InfeasibleRegion(
                            f"constraint {c} fails after substitution"
                        )
                    continue
                linear.append(LinearConstraint(lin, c.strict))
                continue
        leftover.append(ProductConstraint(tuple(terms), c.strict))
    return linear, leftover


def _bases_implied_positive(terms, region) -> bool:
    for _, pp in terms:
        for b, _ in pp.factors:
            if not implies(region, LinearConstraint(b, strict=True)):
                return False
    return True


def _clearable_bases_implied(terms, region) -> bool:
    """Linearization multiplies by bases with negative exponents; those must
    be known positive for the multiplication to preserve the inequality."""
    mins = {}
    for _, pp in terms:
        for b, e in pp.factors:
            mins[b] = min(mins.get(b, Fraction(0)), e)
    for b, mn in mins.items():
        if mn < 0 and not implies(region, LinearConstraint(b, strict=True)):
            return False
    return True


def _signchar_shape(pp: PowerProduct, sym: str):
    """Match coeff * prod((a s)^e) * prod((b (1-s))^f) and return
    (alpha, beta, scale) or None."""
    alpha = Fraction(0)
    beta = Fraction(0)
    scale = Fraction(1)
    for b, e in pp.factors:
        coeffs = dict(b.terms)
        if set(coeffs) != {sym}:
            return None
        c1 = coeffs[sym]
        if b.const == 0:
            if not c1 > 0:
                return None
            alpha += e
            scale = scale * _power_exactish(c1, e)
        elif c1 == -b.const and b.const > 0:
            # a - a s = a (1 - s)
            beta += e
            scale = scale * _power_exactish(b.const, e)
        else:
            return None
    if alpha == 0 and beta == 0:
        return None
    return alpha, beta, scale * pp.coeff


def _pin_branch(conds, region, leftover, sym, val):
    """Substitute a numeric coordinate value; None when a constraint dies."""
    try:
        return _pin_branch_inner(conds, region, leftover, sym, val)
    except ValueError:
        # a base became nonpositive under a fractional exponent
        return None


def _pin_branch_inner(conds, region, leftover, sym, val):
    new_region = []
    for c in region:
        f = _pin_form(c.form, sym, val)
        if f.is_constant:
            if (f.const > 0) if c.strict else (f.const >= 0):
                continue
            return None
        new_region.append(LinearConstraint(f, c.strict))
    new_left = []
    for pc in leftover:
        terms = tuple((cf, _pin_product(pp, sym, val)) for cf, pp in pc.terms)
        if all(pp.is_constant for _, pp in terms):
            v = sum(cf * pp.coeff for cf, pp in terms)
            if (v > 0) if pc.strict else (v >= 0):
                continue
            return None
        new_left.append(ProductConstraint(terms, pc.strict))
    new_conds = []
    for rc in conds:
        pp = _pin_product(rc.product, sym, val)
        if pp.is_constant:
            if _constant_consistent(pp.coeff, rc.target):
                continue
            return None
        new_conds.append(ResidualCondition(pp, rc.target, rc.source))
    return new_conds, new_region, new_left


def _dispatch(conds, region, leftover, fixed, path):
    """Resolve single-coordinate residual conditions through sign
    characteristics, branching on the root structure."""
    for i, rc in enumerate(conds):
        syms = rc.product.symbols()
        if len(syms) != 1:
            continue
        (sym,) = syms
        shape = _signchar_shape(rc.product, sym)
        if shape is None:
            continue
        alpha, beta, scale = shape
        if not scale > 0 or not rc.target > 0:
            return []
        value = rc.target / scale
        char = SignChar(alpha, beta)
        branches = ("minus", "plus") if char.two_branched else ("whole",)
        out = []
        rest = conds[:i] + conds[i + 1 :]
        for br in branches:
            try:
                root = char.root(value, br)
            except RangeError:
                continue
            pinned = _pin_branch(rest, region, leftover, sym, root)
            if pinned is None:
                continue
            sub_conds, sub_region, sub_left = pinned
            out.extend(
                _dispatch(
                    sub_conds,
                    sub_region,
                    sub_left,
                    fixed + ((sym, root),),
                    path + (f"{sym}:{br}",),
                )
            )
            if br == "minus" and root == char.extremum()[0]:
                # double root; the plus branch would duplicate it
                break
        return out
    return [(conds, region, leftover, fixed, path)]


def solve_on_slice(red: ReducedSystem, conditions=None) -> SliceSolution:
    """Solve the binomial conditions over the coefficient slice.

    Returns explicit branches; raises InfeasibleRegion when the solved
    region is empty on every branch.
    """
    if conditions is None:
        conditions = binomial_conditions(red)
    warnings = list(red.warnings)
    sym_rank = {s: i for i, s in enumerate(red.coefficients.symbols)}
    work = []
    for i, cond in enumerate(conditions):
        if cond.rhs.symbols():
            raise SemanticError(
                "solving the conditions needs numeric parameter values"
            )
        target = cond.rhs.eval({})
        if not target > 0:
            raise InfeasibleRegion(f"condition {i} has nonpositive target")
        if cond.lhs.is_constant:
            if _constant_consistent(cond.lhs.coeff, target):
                continue
            raise InfeasibleRegion(f"condition {i} is violated identically")
        work.append((cond.lhs, target, i))
    solved: list[tuple[str, PowerProduct]] = []
    while True:
        pick = _select_eliminable(work, sym_rank)
        if pick is None:
            break
        pos, sym = pick
        pp, target, _ = work[pos]
        expr = _solve_condition(pp, target, sym)
        solved.append((sym, expr))
        rest = []
        for j, (q, t, idx) in enumerate(work):
            if j == pos:
                continue
            q2 = _substitute(q, sym, expr)
            if q2.is_constant:
                if _constant_consistent(q2.coeff, t):
                    continue
                raise InfeasibleRegion(f"condition {idx} is violated identically")
            rest.append((q2, t, idx))
        work = rest
    # back-substitution so each solved coordinate references free ones only
    final: dict[str, PowerProduct] = {}
    for sym, expr in reversed(solved):
        for s2, e2 in final.items():
            expr = _substitute(expr, s2, e2)
        final[sym] = expr
    solved = [(sym, final[sym]) for sym, _ in solved]
    residual = [ResidualCondition(pp, t, idx) for pp, t, idx in work]
    linear, leftover = _rebuild_region(
        red.coefficients.constraints, dict(solved)
    )
    raw_branches = _dispatch(tuple(residual), tuple(linear), tuple(leftover), (), ())
    branches = []
    for conds, region, left, fixed, path in raw_branches:
        if not feasible(region):
            continue
        pinned_solved = []
        for sym, expr in solved:
            for fs, fv in fixed:
                expr = _pin_product(expr, fs, fv)
            pinned_solved.append((sym, expr))
        fixed_syms = {s for s, _ in fixed}
        solved_syms = {s for s, _ in solved}
        free = tuple(
            s
            for s in red.coefficients.symbols
            if s not in fixed_syms and s not in solved_syms
        )
        if left:
            warnings.append("a nonlinear region constraint was kept unresolved")
        if conds:
            warnings.append("a residual condition could not be made explicit")
        branches.append(
            SolutionBranch(
                path=path,
                fixed=fixed,
                solved=tuple(pinned_solved),
                region=region,
                leftover=tuple(left),
                residual=tuple(conds),
                free=free,
            )
        )
    if not branches:
        raise InfeasibleRegion("no branch of the solved region is feasible")
    return SliceSolution(
        reduced=red,
        conditions=tuple(conditions),
        branches=tuple(branches),
        warnings=tuple(warnings),
    )


def _numeric_params(system: GenSystem):
    if not system.params.numeric:
        raise SemanticError("numeric parameter values required")
    return system.params.entries


def coefficient_point(red: ReducedSystem, branch: SolutionBranch, values: dict):
    """Coordinate vector on the slice from free-coordinate values."""
    env = branch.coordinate_env(values)
    return tuple(f.eval(env) for f in red.coefficients.coordinates), env


def lift(red: ReducedSystem, y, tau=(), tol: float = 1e-10):
    """Map a slice point to the variables.

    y lists one positive value per term; tau one positive factor per
    unconstrained direction. Raises ConditionViolated when y breaks a
    binomial condition beyond tol (relative, in logs).
    """
    params = _numeric_params(red.system)
    m = red.system.m
    if len(y) != m:
        raise SemanticError(f"expected {m} coordinate values")
    if any(not v > 0 for v in y):
        raise ConditionViolated("slice coordinates must be positive")
    q = red.orthocomplement.ncols
    if len(tau) != q:
        if not tau:
            tau = tuple(Fraction(1) for _ in range(q))
        else:
            raise SemanticError(f"expected {q} torus factors")
    if any(not v > 0 for v in tau):
        raise ConditionViolated("torus factors must be positive")
    dep = red.dependency_basis
    for k in range(dep.ncols):
        h = dep.col(k)
        exact = all(isinstance(v, Fraction) for v in list(y) + list(params)) and all(
            isinstance(e, Fraction) and e.denominator == 1 for e in h
        )
        if exact:
            lhs = Fraction(1)
            rhs = Fraction(1)
            for j, e in enumerate(h):
                lhs *= _pow_scalar(y[j], e)
                rhs *= _pow_scalar(params[j], e)
            if lhs != rhs:
                raise ConditionViolated(
                    f"binomial condition {k} fails exactly: {lhs} != {rhs}"
                )
        else:
            acc = 0.0
            for j, e in enumerate(h):
                acc += float(e) * (log_scalar(y[j]) - log_scalar(params[j]))
            if abs(acc) > tol:
                raise ConditionViolated(
                    f"binomial condition {k} fails by {acc} in logs"
                )
    E = red.lift_exponents
    W = red.orthocomplement
    out = []
    for i in range(red.system.n):
        v: Scalar = Fraction(1)
        for j in range(m):
            e = E.entries[j][i]
            if e == 0:
                continue
            z = y[j] / params[j]
            v = v * _power_exactish(z, e)
        for k in range(q):
            e = W.entries[i][k]
            if e != 0:
                v = v * _power_exactish(tau[k], e)
        out.append(v)
    return tuple(out)


@dataclass(frozen=True)
class RowCheck:
    class_index: int
    kind: str  # eq | strict | nonstrict | positive
    value: Scalar
    scale: Scalar
    verdict: str  # ok | boundary | fail


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    boundary: bool
    coefficient_values: tuple
    checks: tuple[RowCheck, ...]

    @property
    def max_equation_defect(self) -> float:
        worst = 0.0
        for ch in self.checks:
            if ch.kind == "eq" and ch.scale:
                worst = max(worst, abs(float(ch.value)) / float(ch.scale))
        return worst


def coefficient_vector(system: GenSystem, x):
    """c o x^B for a positive point x."""
    params = _numeric_params(system)
    if len(x) != system.n:
        raise SemanticError(f"expected {system.n} variable values")
    if any(not v > 0 for v in x):
        raise NotASolution("variables must be positive")
    out = []
    for j in range(system.m):
        v = params[j]
        for i in range(system.n):
            e = system.B.entries[i][j]
            if e != 0:
                v = v * _power_exactish(x[i], e)
        out.append(v)
    return tuple(out)


def verify(system: GenSystem, x, tol: float = 1e-9) -> VerifyReport:
    """Check that c o x^B lies in every class cone.

    Exact values are compared exactly; floats within tol (relative to the
    row scale) of a strict boundary come back as boundary verdicts.
    """
    y = coefficient_vector(system, x)
    checks = []
    ok = True
    boundary = False
    for ci, (cone, (start, stop)) in enumerate(
        zip(system.cones, system.partition.slices())
    ):
        ycls = y[start:stop]
        exact = all(isinstance(v, Fraction) for v in ycls)
        for v in ycls:
            scale = abs(v)
            if exact:
                verdict = "ok" if v > 0 else "fail"
            elif float(v) > tol * max(1.0, float(scale)):
                verdict = "ok"
            elif float(v) > -tol * max(1.0, float(scale)):
                verdict = "boundary"
            else:
                verdict = "fail"
            checks.append(RowCheck(ci, "positive", v, max(scale, 1), verdict))
        eq, strict, nonstrict = cone.h_rows()
        for kind, rows in (("eq", eq), ("strict", strict), ("nonstrict", nonstrict)):
            for r in rows:
                v = sum(rv * yv for rv, yv in zip(r, ycls))
                scale = max(
                    (abs(rv) * abs(yv) for rv, yv in zip(r, ycls)),
                    default=0,
                )
                if exact and all(isinstance(rv, (int, Fraction)) for rv in r):
                    if kind == "eq":
                        verdict = "ok" if v == 0 else "fail"
                    elif kind == "strict":
                        verdict = "ok" if v > 0 else "fail"
                    else:
                        verdict = "ok" if v >= 0 else "fail"
                else:
                    margin = tol * max(1.0, float(scale))
                    fv = float(v)
                    if kind == "eq":
                        verdict = "ok" if abs(fv) <= margin else "fail"
                    elif abs(fv) <= margin:
                        verdict = "boundary"
                    elif fv > 0:
                        verdict = "ok"
                    else:
                        verdict = "ok" if kind == "nonstrict" and fv >= 0 else "fail"
                checks.append(RowCheck(ci, kind, v, max(scale, 1), verdict))
    for ch in checks:
        if ch.verdict == "fail":
            ok = False
        elif ch.verdict == "boundary":
            boundary = True
    return VerifyReport(ok=ok, boundary=boundary, coefficient_values=y, checks=checks)


@dataclass(frozen=True)
class RoundTrip:
    normalized: tuple
    lifted: tuple
    coset_defect: float

    @property
    def ok(self) -> bool:
        return self.coset_defect <= 1e-10


def round_trip(red: ReducedSystem, x, tau=None, tol: float = 1e-9) -> RoundTrip:
    """Normalize c o x^B onto the slice, lift it back, compare cosets.

    The lifted point must agree with x up to a factor unconstrained by the
    differences: every difference column contracts the log ratio to zero.
    """
    report = verify(red.system, x, tol)
    if not report.ok:
        raise NotASolution("the point fails cone membership")
    y = list(report.coefficient_values)
    for ci, (start, stop) in enumerate(red.system.partition.slices()):
        u = red.simplex.normals[ci]
        level = red.simplex.levels[ci]
        s = sum(uv * yv for uv, yv in zip(u, y[start:stop])) / level
        for j in range(start, stop):
            y[j] = y[j] / s
    lifted = lift(red, tuple(y), tau or (), tol=max(tol, 1e-10))
    worst = 0.0
    M = red.difference_matrix
    for k in range(M.ncols):
        exact = all(
            isinstance(a, Fraction) and isinstance(b, Fraction)
            for a, b in zip(lifted, x)
        ) and all(
            isinstance(M.entries[i][k], Fraction)
            and M.entries[i][k].denominator == 1
            for i in range(M.nrows)
        )
        if exact:
            prod = Fraction(1)
            for i in range(M.nrows):
                prod *= _pow_scalar(lifted[i] / x[i], M.entries[i][k])
            if prod != 1:
                worst = max(worst, abs(log_scalar(prod)))
        else:
            acc = 0.0
            for i in range(M.nrows):
                acc += float(M.entries[i][k]) * (
                    log_scalar(lifted[i]) - log_scalar(x[i])
                )
            worst = max(worst, abs(acc))
    return RoundTrip(normalized=tuple(y), lifted=lifted, coset_defect=worst)


def binomial_normal_form(red: ReducedSystem, y):
    """Equivalent binomial equations at a slice point, one per difference.

    Each differencing column (term j against its class anchor) gives
    x^(difference column) = (y_j / c_j) * (c_anchor / y_anchor). The
    equations characterize the solution set exactly when the reduction
    leaves no degrees of freedom and every cone keeps only relint faces.
    """
    if red.freedom != 0:
        raise SemanticError(
            "normal form needs zero degrees of freedom; conditions remain"
        )
    params = _numeric_params(red.system)
    if len(y) != red.system.m or any(not v > 0 for v in y):
        raise SemanticError("a positive value per term is required")
    out = []
    col = 0
    for start, stop in red.system.partition.slices():
        anchor = stop - 1
        for j in range(start, anchor):
            rhs = (y[j] / params[j]) * (params[anchor] / y[anchor])
            expvec = tuple(
                red.difference_matrix.entries[i][col] for i in range(red.system.n)
            )
            out.append((expvec, rhs))
            col += 1
    return tuple(out)


@dataclass(frozen=True)
class SolutionDescription:
    """The rewrite of the variables over slice coordinates and torus factors."""

    variables: tuple[str, ...]
    products: tuple[PowerProduct, ...]
    tau_symbols: tuple[str, ...]
    conditions: tuple[BinomialCondition, ...]

    def __str__(self):
        lines = [
            f"{name} = {pp}" for name, pp in zip(self.variables, self.products)
        ]
        for c in self.conditions:
            lines.append(f"subject to {c}")
        return "\n".join(lines)


def describe_solution_set(red: ReducedSystem) -> SolutionDescription:
    """Symbolic lift of the whole slice, conditions attached.

    With zero degrees of freedom this is an explicit parametrization of
    the positive solution set by the free slice coordinates and one torus
    factor per unconstrained direction.
    """
    coords = red.coefficients.coordinates
    params = red.system.params
    E = red.lift_exponents
    W = red.orthocomplement
    taus = tuple(f"tau{k + 1}" for k in range(W.ncols))
    products = []
    for i in range(red.system.n):
        pp = PowerProduct.one()
        for j in range(red.system.m):
            e = E.entries[j][i]
            if e == 0:
                continue
            pp = pp.times_base(coords[j], e)
            p = params[j]
            if isinstance(p, str):
                pp = pp.times_base(AffineForm.symbol(p), -e)
            else:
                pp = pp.scaled(_power_exactish(p, -e))
        for k in range(W.ncols):
            e = W.entries[i][k]
            if e != 0:
                pp = pp.times_base(AffineForm.symbol(taus[k]), e)
        products.append(pp)
    return SolutionDescription(
        variables=red.system.variables,
        products=tuple(products),
        tau_symbols=taus,
        conditions=binomial_conditions(red),
    )


def fix_variables(red: ReducedSystem, x, targets):
    """Rescale x along the unconstrained directions to pin variables.

    targets lists (variable name, positive value) pairs; the move solves a
    linear system in the logs of the torus factors, so it works only in
    floats. Raises SemanticError when the directions cannot reach the
    targets.
    """
    if not targets:
        return tuple(x)
    W = red.orthocomplement
    q = W.ncols
    names = {name: i for i, name in enumerate(red.system.variables)}
    rows = []
    rhs = []
    for name, value in targets:
        if name not in names:
            raise SemanticError(f"unknown variable {name!r}")
        if not value > 0:
            raise SemanticError(f"target for {name} must be positive")
        i = names[name]
        rows.append([float(W.entries[i][k]) for k in range(q)])
        rhs.append(log_scalar(value) - log_scalar(x[i]))
    # Gaussian elimination with partial pivoting on [rows | rhs]
    t = len(rows)
    aug = [rows[i] + [rhs[i]] for i in range(t)]
    piv_cols = []
    r = 0
    for c in range(q):
        p = max(range(r, t), key=lambda i: abs(aug[i][c]), default=None)
        if p is None or abs(aug[p][c]) <= 1e-12:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        scale = aug[r][c]
        aug[r] = [v / scale for v in aug[r]]
        for i in range(t):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
        if r == t:
            break
    for i in range(r, t):
        if abs(aug[i][q]) > 1e-9:
            raise SemanticError(
                "the unconstrained directions cannot reach those targets"
            )
    s = [0.0] * q
    for i, c in enumerate(piv_cols):
        s[c] = aug[i][q]
    out = []
    for i in range(red.system.n):
        shift = sum(float(W.entries[i][k]) * s[k] for k in range(q))
        out.append(float(x[i]) * exp(shift))
    return tuple(out)


@dataclass(frozen=True)
class SamplePoint:
    branch_path: tuple[str, ...]
    values: tuple[tuple[str, float], ...]
    tau: tuple[float, ...]
    coefficients: tuple
    x: tuple
    max_defect: float


def sample_solutions(
    red: ReducedSystem,
    solution: SliceSolution | None = None,
    count: int = 10,
    seed: int = 0,
    tau_low: float = 0.5,
    tau_high: float = 2.0,
    fix=(),
) -> tuple[SamplePoint, ...]:
    """Draw verified solution samples from the solved branches.

    Free coordinates are drawn uniformly from their bounding box and
    rejected against the region; residual conditions reject at a 1e-10
    log defect; torus factors are drawn log-uniformly, then adjusted to
    pin any (variable, value) pairs in fix. Each draw reseeds from the
    sample index, so results are deterministic and order-independent.
    """
    if solution is None:
        solution = solve_on_slice(red)
    branches = list(solution.branches)
    if not branches:
        raise EmptyRegion("no branch to sample")
    out = []
    budget = 200 * max(count, 1)
    per = [count // len(branches)] * len(branches)
    for i in range(count % len(branches)):
        per[i] += 1
    attempt = 0
    for branch, want in zip(branches, per):
        if want == 0:
            continue
        if not feasible(branch.region):
            raise EmptyRegion("branch region became infeasible")
        box = {}
        for s in branch.free:
            lo, hi = bounds(branch.region, s)
            box[s] = (float(lo), float(hi))
        got = 0
        tries = 0
        while got < want and tries < budget:
            tries += 1
            attempt += 1
            rng = random.Random((seed * 0x9E3779B1 + attempt) % 2**63)
            values = {s: rng.uniform(*box[s]) for s in branch.free}
            if not all(c.holds(values) for c in branch.region):
                continue
            env = branch.coordinate_env(values)
            if not all(pc.holds(env) for pc in branch.leftover):
                continue
            if any(rc.defect(env) > 1e-10 for rc in branch.residual):
                continue
            y = tuple(f.eval(env) for f in red.coefficients.coordinates)
            if any(not v > 0 for v in y):
                continue
            tau = tuple(
                exp(rng.uniform(log(tau_low), log(tau_high)))
                for _ in range(red.orthocomplement.ncols)
            )
            x = lift(red, y, tau, tol=1e-8)
            if fix:
                x = fix_variables(red, x, fix)
            report = verify(red.system, x)
            if not report.ok:
                continue
            out.append(
                SamplePoint(
                    branch_path=branch.path,
                    values=tuple(sorted((s, float(v)) for s, v in values.items())),
                    tau=tau,
                    coefficients=y,
                    x=x,
                    max_defect=report.max_equation_defect,
                )
            )
            got += 1
        if got < want:
            raise EmptyRegion(
                f"sampling exhausted its budget after {got} accepted points"
            )
    return tuple(out)
