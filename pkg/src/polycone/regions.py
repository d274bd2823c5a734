"""Feasible regions cut out by strict and non-strict linear inequalities.

Exact Fourier-Motzkin elimination decides emptiness and produces coordinate
bounds at desk scale. Combining a strict constraint with anything yields a
strict constraint, which keeps emptiness decisions faithful for cones with
removed faces.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import Scalar
from .symbolic import AffineForm


@dataclass(frozen=True)
class LinearConstraint:
    """form > 0 (strict) or form >= 0 (non-strict)."""

    form: AffineForm
    strict: bool

    def eval(self, env) -> Scalar:
        return self.form.eval(env)

    def holds(self, env, tol=0) -> bool:
        v = self.form.eval(env)
        return v > tol if self.strict else v >= -tol

    def symbols(self) -> set[str]:
        return self.form.symbols()

    def negation(self) -> "LinearConstraint":
        neg = AffineForm.make(-self.form.const, {s: -c for s, c in self.form.terms})
        return LinearConstraint(neg, strict=not self.strict)

    def __str__(self) -> str:
        return f"{self.form} {'>' if self.strict else '>='} 0"


def constraint(const, coeffs, strict=True) -> LinearConstraint:
    return LinearConstraint(AffineForm.make(const, coeffs), strict)


def _normalized(c: LinearConstraint) -> LinearConstraint:
    """Scale so the largest |coefficient| is 1, for deduplication."""
    pivot = None
    for _, v in c.form.terms:
        if pivot is None or abs(v) > abs(pivot):
            pivot = v
    if pivot is None or pivot == 0:
        return c
    scale = Fraction(1) / abs(pivot) if isinstance(pivot, Fraction) else 1.0 / abs(pivot)
    form = AffineForm.make(c.form.const * scale, {s: v * scale for s, v in c.form.terms})
    return LinearConstraint(form, c.strict)


def eliminate(constraints, sym: str) -> list[LinearConstraint]:
    """Fourier-Motzkin elimination of one symbol."""
    pos, neg, rest = [], [], []
    for c in constraints:
        coeff = dict(c.form.terms).get(sym, 0)
        if coeff > 0:
            pos.append((coeff, c))
        elif coeff < 0:
            neg.append((coeff, c))
        else:
            rest.append(c)
    out = list(rest)
    for cp, p in pos:
        for cn, n in neg:
            # cp * n + (-cn) * p eliminates sym; signs keep the >= direction
            coeffs: dict[str, Scalar] = {}
            for s, v in p.form.terms:
                if s != sym:
                    coeffs[s] = coeffs.get(s, 0) + (-cn) * v
            for s, v in n.form.terms:
                if s != sym:
                    coeffs[s] = coeffs.get(s, 0) + cp * v
            const = (-cn) * p.form.const + cp * n.form.const
            out.append(LinearConstraint(AffineForm.make(const, coeffs),
                                        p.strict or n.strict))
    seen = set()
    dedup = []
    for c in out:
        cn = _normalized(c)
        key = (cn.form, cn.strict)
        if key not in seen:
            seen.add(key)
            dedup.append(cn)
    return dedup


def feasible(constraints) -> bool:
    """Exact emptiness decision for mixed strict/non-strict systems."""
    cs = list(constraints)
    syms = sorted({s for c in cs for s in c.symbols()})
    for s in syms:
        cs = eliminate(cs, s)
    for c in cs:
        v = c.form.const
        if c.strict and not v > 0:
            return False
        if not c.strict and not v >= 0:
            return False
    return True


def implies(constraints, target: LinearConstraint) -> bool:
    """True when every point of the region satisfies the target."""
    return not feasible(list(constraints) + [target.negation()])


def equivalent(region_a, region_b) -> bool:
    return all(implies(region_a, c) for c in region_b) and all(
        implies(region_b, c) for c in region_a
    )


def bounds(constraints, sym: str, cap: Fraction = Fraction(10**6)):
    """Interval bounds for one symbol over the region.

    Returns (lo, hi) with endpoints clamped to [-cap, cap] when the region
    leaves the symbol unbounded. Assumes the region is feasible.
    """
    cs = list(constraints)
    for other in sorted({s for c in cs for s in c.symbols()} - {sym}):
        cs = eliminate(cs, other)
    lo, hi = -cap, cap
    for c in cs:
        coeff = dict(c.form.terms).get(sym, 0)
        if coeff == 0:
            continue
        bound = -c.form.const / coeff
        if coeff > 0:
            lo = max(lo, bound)
        else:
            hi = min(hi, bound)
    return lo, hi
