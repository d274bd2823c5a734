"""Polyhedral cone computations at desk scale.

Everything here works on cones inside the nonnegative orthant, which keeps
them pointed and lets the double description method start from the standard
basis. Rays are exact, primitive integer vectors; output order is
lexicographically decreasing for reproducibility.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd

from .errors import DimensionTooLarge
from .linalg import Mat, kernel_basis, rank, rref
from .regions import LinearConstraint, constraint, feasible
from .symbolic import AffineForm

MAX_CONVERSION_DIM = 12


def _primitive(v):
    denom = 1
    for x in v:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    ints = [int(x * denom) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(Fraction(x) for x in ints)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def extreme_rays(dim: int, eq_rows=(), ineq_rows=()):
    """Extreme rays of {y >= 0 | eq.y = 0, ineq.y >= 0} by double description.

    Adjacency uses the combinatorial test on tight constraint sets, so the
    result is exact and independent of floating point.
    """
    if dim > MAX_CONVERSION_DIM:
        raise DimensionTooLarge(
            f"cone conversion supports at most {MAX_CONVERSION_DIM} monomials per class, got {dim}"
        )
    eq_rows = [tuple(Fraction(x) for x in r) for r in eq_rows]
    ineq_rows = [tuple(Fraction(x) for x in r) for r in ineq_rows]
    rays = [
        tuple(Fraction(1) if j == i else Fraction(0) for j in range(dim))
        for i in range(dim)
    ]
    # processed constraints; orthant rows are implicit from the start
    processed: list[tuple[tuple[Fraction, ...], bool]] = []

    def tight_set(ray):
        t = frozenset(
            [("o", j) for j in range(dim) if ray[j] == 0]
            + [("c", k) for k, (row, _) in enumerate(processed) if _dot(row, ray) == 0]
        )
        return t

    def cut(row, is_eq):
        nonlocal rays
        vals = [_dot(row, r) for r in rays]
        zero = [r for r, v in zip(rays, vals) if v == 0]
        pos = [(r, v) for r, v in zip(rays, vals) if v > 0]
        neg = [(r, v) for r, v in zip(rays, vals) if v < 0]
        keep = list(zero) if is_eq else list(zero) + [r for r, _ in pos]
        if pos and neg:
            tights = {r: tight_set(r) for r in rays}
            new = []
            for (p, vp), (n, vn) in ((a, b) for a in pos for b in neg):
                t = tights[p] & tights[n]
                adjacent = not any(
                    r != p and r != n and tights[r] >= t for r in rays
                )
                if adjacent:
                    w = tuple(vp * b - vn * a for a, b in zip(p, n))
                    new.append(_primitive(w))
            seen = set(keep)
            for w in new:
                if w not in seen and any(x != 0 for x in w):
                    seen.add(w)
                    keep.append(w)
        rays = keep
        processed.append((row, is_eq))

    for row in eq_rows:
        cut(row, True)
    for row in ineq_rows:
        cut(row, False)
    return tuple(sorted(rays, reverse=True))


def span_complement_rows(generators, dim: int):
    """Rows orthogonal to every generator (equations of the linear span)."""
    if not generators:
        return tuple(
            tuple(Fraction(1) if j == i else Fraction(0) for j in range(dim))
            for i in range(dim)
        )
    g = Mat.from_cols(generators, nrows=dim)
    return kernel_basis(g.t()).vectors


def facet_normals(generators, dim: int):
    """Facet inequalities of cone(generators), valid within its linear span.

    Brute-force: each facet is spanned by generators, so candidate normals
    come from (r-1)-subsets. Suitable only at desk scale.
    """
    gens = [tuple(Fraction(x) for x in g) for g in generators]
    if not gens:
        return ()
    gmat = Mat.from_cols(gens, nrows=dim)
    r = rank(gmat)
    if r <= 1:
        return ()
    comp = span_complement_rows(gens, dim)
    normals = []
    seen = set()
    for subset in combinations(range(len(gens)), r - 1):
        rows = [gens[i] for i in subset] + list(comp)
        kb = kernel_basis(Mat.from_rows(rows, ncols=dim))
        if kb.dim != 1:
            continue
        n = _primitive(kb.vectors[0])
        vals = [_dot(n, g) for g in gens]
        if all(v >= 0 for v in vals):
            pass
        elif all(v <= 0 for v in vals):
            n = tuple(-x for x in n)
        else:
            continue
        if any(v != 0 for v in vals) and n not in seen:
            seen.add(n)
            normals.append(n)
    return tuple(sorted(normals, reverse=True))


def member_of_vrep(generators, open_flags, y, positive_orthant=True) -> bool:
    """Exact membership in {sum lam_j g_j | lam_j > 0 if open else >= 0}.

    Solves G lam = y and checks the sign constraints over the solution
    affine space by Fourier-Motzkin. Membership in the represented cone
    also requires y > 0 when positive_orthant is set.
    """
    y = tuple(Fraction(v) for v in y)
    if positive_orthant and not all(v > 0 for v in y):
        return False
    gens = [tuple(Fraction(x) for x in g) for g in generators]
    if not gens:
        return False
    dim = len(y)
    aug = Mat.from_cols(gens + [y], nrows=dim)
    R, pivots, _ = rref(aug)
    k = len(gens)
    if k in pivots:
        return False  # inconsistent: y outside the linear span
    # particular solution and kernel of G lam = y
    lam0 = [Fraction(0)] * k
    for i, p in enumerate(pivots):
        lam0[p] = R.entries[i][k]
    kb = kernel_basis(Mat.from_cols(gens, nrows=dim))
    cons = []
    for j in range(k):
        coeffs = {f"t{idx}": vec[j] for idx, vec in enumerate(kb.vectors)}
        cons.append(constraint(lam0[j], coeffs, strict=bool(open_flags[j])))
    return feasible(cons)


def facets_removed_everywhere(generators, dim, removed_rows) -> bool:
    """True when every facet of the closure lies inside a removed hyperplane.

    removed_rows are the normals of removed faces (strict inequality rows);
    coordinate hyperplanes are always removed since the cone lives in the
    open orthant. In that case the represented cone equals the relative
    interior of its closure and the all-strict combination flags are exact.
    """
    gens = [tuple(Fraction(x) for x in g) for g in generators]
    removed = [tuple(Fraction(x) for x in r) for r in removed_rows]
    for n in facet_normals(gens, dim):
        on_facet = [g for g in gens if _dot(n, g) == 0]
        in_coord = any(all(g[j] == 0 for g in on_facet) for j in range(dim))
        in_removed = any(all(_dot(r, g) == 0 for g in on_facet) for r in removed)
        if not (in_coord or in_removed):
            return False
    return True
