"""Randomized solution-first systems shared by property and acceptance tests.

Each draw picks a positive point x first, then an exponent matrix and
positive parameters, computes the coefficient vector the point produces,
and builds every class cone around that vector. The point is therefore a
true solution of the constructed system, which makes lift/verify
soundness and coset recovery checkable without any search.
"""

import random
from fractions import Fraction
from math import log

from polycone.linalg import Mat, rank
from polycone.model import (
    ClassCone,
    ClassPartition,
    GenSystem,
    SimplexChoice,
    param_vec,
)
from polycone.reduction import ReducedSystem, reduce_system
from polycone.solve import round_trip, verify

F = Fraction


def _positive_fraction(rng: random.Random) -> Fraction:
    return F(rng.randint(1, 8), rng.randint(1, 8))


def build_system(rng: random.Random, float_mode: bool = False):
    """Return (system, x) with x a positive solution by construction."""
    n = rng.randint(1, 6)
    ell = rng.randint(1, 3)
    sizes = []
    budget = 10
    for i in range(ell):
        hi = min(4, budget - (ell - i - 1))
        s = rng.randint(1, hi)
        sizes.append(s)
        budget -= s
    m = sum(sizes)
    rows = [tuple(rng.randint(-3, 3) for _ in range(m)) for _ in range(n)]
    if float_mode:
        rows = [tuple(float(v) + rng.choice((0.0, 0.5)) for v in row) for row in rows]
    B = Mat.from_rows(rows, ncols=m)
    x = tuple(_positive_fraction(rng) for _ in range(n))
    params = [_positive_fraction(rng) for _ in range(m)]
    if float_mode:
        x = tuple(float(v) for v in x)
        params = [float(v) for v in params]
    y = []
    for j in range(m):
        v = params[j]
        for i in range(n):
            e = B.entries[i][j]
            if float_mode:
                v = float(v) * float(x[i]) ** float(e)
            else:
                v = v * x[i] ** int(e)
        y.append(v)
    cones = []
    start = 0
    for s in sizes:
        block = tuple(y[start : start + s])
        gens = [block]
        for _ in range(rng.randint(0, s)):
            g = tuple(F(rng.randint(0, 3)) for _ in range(s))
            if any(g):
                gens.append(g)
        rng.shuffle(gens)
        cones.append(
            ClassCone(
                size=s,
                generators=tuple(gens),
                open_flags=tuple(False for _ in gens),
            )
        )
        start += s
    system = GenSystem(
        variables=tuple(f"x{i}" for i in range(n)),
        B=B,
        partition=ClassPartition(tuple(sizes)),
        cones=tuple(cones),
        params=param_vec(params),
    )
    return system, x


def random_simplex(rng: random.Random, partition: ClassPartition) -> SimplexChoice:
    return SimplexChoice(
        tuple(
            tuple(F(rng.randint(1, 4)) for _ in range(s)) for s in partition.sizes
        ),
        tuple(F(rng.randint(1, 5)) for _ in partition.sizes),
    )


def _max_abs(mat: Mat) -> float:
    return max(
        (abs(float(v)) for row in mat.entries for v in row),
        default=0.0,
    )


def structural_defects(red: ReducedSystem) -> dict:
    """Named magnitudes that the reduction invariants say must vanish."""
    sysm = red.system
    stacked = sysm.B.vstack(red.indicator)
    out = {}
    out["kernel"] = _max_abs(stacked @ red.dependency_basis)
    out["indicator"] = _max_abs(red.indicator @ red.differencing)
    gen = red.difference_matrix @ red.geninv @ red.difference_matrix
    diff = [
        tuple(float(a) - float(b) for a, b in zip(ra, rb))
        for ra, rb in zip(gen.entries, red.difference_matrix.entries)
    ]
    out["geninv"] = max(
        (abs(v) for row in diff for v in row), default=0.0
    )
    return out


def check_counts(red: ReducedSystem) -> None:
    sysm = red.system
    assert red.freedom == sysm.m - sysm.ell - red.difference_dim
    assert rank(red.dependency_basis) == red.freedom
    for k in range(red.dependency_basis.ncols):
        col = red.dependency_basis.col(k)
        for start, stop in sysm.partition.slices():
            block = sum(col[start:stop])
            assert abs(float(block)) <= 1e-9


def normalize_to_slice(red: ReducedSystem, y):
    """Scale each class block of y onto the reduction's simplex slice."""
    out = list(y)
    for (start, stop), u, level in zip(
        red.system.partition.slices(), red.simplex.normals, red.simplex.levels
    ):
        total = sum(ui * yi for ui, yi in zip(u, out[start:stop]))
        for j in range(start, stop):
            out[j] = out[j] * level / total
    return tuple(out)


def coset_distance(red: ReducedSystem, x1, x2) -> float:
    """Largest difference-column pairing of the two points' log ratio."""
    logs = [log(float(a)) - log(float(b)) for a, b in zip(x1, x2)]
    worst = 0.0
    M = red.difference_matrix
    for k in range(M.ncols):
        worst = max(
            worst, abs(sum(float(M.entries[i][k]) * logs[i] for i in range(M.nrows)))
        )
    return worst


def check_solution_pipeline(red: ReducedSystem, x, tol: float = 1e-10) -> None:
    """Criterion: the built point round-trips and the lift verifies."""
    rt = round_trip(red, x)
    assert rt.coset_defect <= tol, f"coset defect {rt.coset_defect}"
    report = verify(red.system, rt.lifted, tol=1e-9)
    assert report.ok, "lifted point fails verification"


def run_solution_first_trial(rng: random.Random) -> ReducedSystem:
    """One full acceptance-style trial; returns the reduction for reuse."""
    float_mode = rng.random() < 0.2
    system, x = build_system(rng, float_mode=float_mode)
    red = reduce_system(system)
    defects = structural_defects(red)
    scale = max(1.0, _max_abs(red.difference_matrix))
    for name, mag in defects.items():
        assert mag <= 1e-9 * scale, f"{name} defect {mag}"
    check_counts(red)
    check_solution_pipeline(red, x)
    return red
