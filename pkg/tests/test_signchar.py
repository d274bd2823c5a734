"""Sign-characteristic functions and trinomial roots."""

import random
from fractions import Fraction
from math import sqrt

import pytest
from hypothesis import given, strategies as st

from oracles import dense_positive_roots, quadratic_positive_roots
from polycone.errors import (
    BranchError,
    DegenerateExponent,
    DomainError,
    RangeError,
)
from polycone.signchar import (
    SignChar,
    TrinomialProblem,
    _trinomial_kernel,
    solve_trinomial,
)

F = Fraction

nonzero_small = st.fractions(
    min_value=F(-8), max_value=F(8), max_denominator=4
).filter(lambda v: v != 0)


class TestSignChar:
    def test_degenerate_rejected(self):
        with pytest.raises(DegenerateExponent):
            SignChar(0, 0)

    def test_exact_eval(self):
        s = SignChar(F(1), F(-2))
        assert s.eval(F(1, 4)) == F(1, 4) * F(16, 9)

    def test_extremum_frozen(self):
        assert SignChar(F(1), F(1)).extremum() == (F(1, 2), F(1, 4))
        assert SignChar(F(2), F(1)).extremum() == (F(2, 3), F(4, 27))
        lam, val = SignChar(F(-1), F(-1)).extremum()
        assert lam == F(1, 2)
        assert val == 4
        assert SignChar(F(1), F(-2)).extremum() is None

    def test_monotone_direction(self):
        assert SignChar(F(1), F(-2)).increasing
        assert not SignChar(F(-1), F(2)).increasing
        assert SignChar(F(0), F(-3)).increasing
        assert SignChar(F(2), F(0)).increasing

    def test_golden_root(self):
        # lam / (1-lam)^2 = 1 at lam = (3 - sqrt(5)) / 2
        lam = SignChar(F(1), F(-2)).root(F(1))
        assert abs(lam - (3 - sqrt(5)) / 2) < 1e-14

    def test_exact_pure_power_roots(self):
        assert SignChar(F(1), F(0)).root(F(1, 3)) == F(1, 3)
        assert SignChar(F(0), F(2)).root(F(9, 16)) == F(1, 4)
        assert SignChar(F(-2), F(0)).root(F(16, 9)) == F(3, 4)

    def test_two_branch_roots(self):
        s = SignChar(F(1), F(1))
        lo = s.root(F(3, 16), "minus")
        hi = s.root(F(3, 16), "plus")
        assert abs(lo - 0.25) < 1e-13
        assert abs(hi - 0.75) < 1e-13
        with pytest.raises(BranchError):
            s.root(F(3, 16), "whole")

    def test_min_case_branches(self):
        s = SignChar(F(-1), F(-1))
        lo = s.root(F(16, 3), "minus")
        hi = s.root(F(16, 3), "plus")
        assert abs(lo - 0.25) < 1e-13
        assert abs(hi - 0.75) < 1e-13

    def test_beyond_extremum_raises(self):
        with pytest.raises(RangeError):
            SignChar(F(1), F(1)).root(F(1, 4) + F(1, 100), "minus")
        with pytest.raises(RangeError):
            SignChar(F(-1), F(-1)).root(F(4) - F(1, 100), "plus")

    def test_at_extremum_returns_location(self):
        assert SignChar(F(1), F(1)).root(F(1, 4), "minus") == F(1, 2)

    def test_nonpositive_value_rejected(self):
        with pytest.raises(DomainError):
            SignChar(F(1), F(1)).root(F(0), "minus")

    def test_monotone_needs_whole(self):
        with pytest.raises(BranchError):
            SignChar(F(1), F(-1)).root(F(2), "minus")

    @given(nonzero_small, nonzero_small, st.floats(min_value=0.02, max_value=0.98))
    def test_roundtrip_inversion(self, a, b, lam0):
        s = SignChar(a, b)
        v = s.eval(lam0)
        if s.two_branched:
            lam_star = float(a / (a + b))
            branch = "minus" if lam0 < lam_star else "plus"
        else:
            branch = "whole"
        lam = float(s.root(v, branch))
        got = s.eval(lam)
        assert abs(float(got) - float(v)) <= 1e-12 * max(1.0, abs(float(v)))

    @given(nonzero_small, nonzero_small)
    def test_monotone_or_unimodal(self, a, b):
        s = SignChar(a, b)
        grid = [i / 40 for i in range(1, 40)]
        vals = [s.eval_log(x) for x in grid]
        rises = [v2 > v1 for v1, v2 in zip(vals, vals[1:])]
        if not s.two_branched:
            assert all(rises) or not any(rises)
        else:
            # one switch at most, from rise to fall (max) or fall to rise (min)
            switches = sum(1 for r1, r2 in zip(rises, rises[1:]) if r1 != r2)
            assert switches <= 1


class TestTrinomialKernel:
    def test_frozen_kernels(self):
        assert _trinomial_kernel(F(2), F(1)) == (1, -2, 1)
        assert _trinomial_kernel(F(3), F(2)) == (2, -3, 1)
        assert _trinomial_kernel(F(1), F(-1)) == (1, 1, -2)
        assert _trinomial_kernel(F(2), F(-1)) == (1, 2, -3)
        assert _trinomial_kernel(F(1, 2), F(-1, 3)) == (2, 3, -5)

    @given(nonzero_small, nonzero_small)
    def test_kernel_direction(self, e1, e2):
        if e1 == e2:
            return
        h = _trinomial_kernel(e1, e2)
        assert e1 * h[0] + e2 * h[1] == 0
        assert sum(h) == 0
        assert h[0] > 0


class TestSolveTrinomial:
    def test_rejects_degenerate(self):
        with pytest.raises(DegenerateExponent):
            TrinomialProblem(F(0), F(2), F(1), F(1))
        with pytest.raises(DegenerateExponent):
            TrinomialProblem(F(2), F(2), F(1), F(1))
        with pytest.raises(DomainError):
            TrinomialProblem(F(2), F(1), F(-1), F(1))

    def test_golden_single_root(self):
        sol = solve_trinomial(TrinomialProblem(F(2), F(1), F(1), F(1)))
        assert sol.kernel == (1, -2, 1)
        assert sol.discriminant is None
        ((x, mult),) = sol.roots
        assert mult == 1
        assert abs(x - (sqrt(5) - 1) / 2) < 1e-14
        assert abs(float(sol.slice_roots[0]) - (3 - sqrt(5)) / 2) < 1e-14

    def test_quadratic_match(self):
        # c1 x + c2 x^-1 = 1 multiplied by x is c1 x^2 - x + c2 = 0
        sol = solve_trinomial(TrinomialProblem(F(1), F(-1), F(1, 5), F(1, 5)))
        expected = quadratic_positive_roots(0.2, -1.0, 0.2)
        got = sorted(float(x) for x, _ in sol.roots)
        assert len(got) == 2
        for g, e in zip(got, expected):
            assert abs(g - e) < 1e-12
        assert sol.discriminant == F(1, 4) - F(1, 25)

    def test_double_root(self):
        sol = solve_trinomial(TrinomialProblem(F(1), F(-1), F(1, 2), F(1, 2)))
        assert sol.discriminant == 0
        assert sol.roots == ((F(1), 2),)
        assert sol.count == 2

    def test_no_roots(self):
        sol = solve_trinomial(TrinomialProblem(F(1), F(-1), F(1), F(1)))
        assert float(sol.discriminant) < 0
        assert sol.roots == ()

    def test_sign_change_bound(self):
        assert TrinomialProblem(F(2), F(1), F(1), F(1)).sign_changes() == 1
        assert TrinomialProblem(F(1), F(-1), F(1), F(1)).sign_changes() == 2
        assert TrinomialProblem(F(-1), F(-2), F(1), F(1)).sign_changes() == 1

    def test_residuals_small(self):
        rng = random.Random(3)
        for _ in range(200):
            e1 = F(rng.randint(-6, 6))
            e2 = F(rng.randint(-6, 6))
            if e1 == 0 or e2 == 0 or e1 == e2:
                continue
            c1 = F(rng.randint(1, 40), rng.randint(1, 40))
            c2 = F(rng.randint(1, 40), rng.randint(1, 40))
            prob = TrinomialProblem(e1, e2, c1, c2)
            sol = solve_trinomial(prob)
            assert sol.count <= prob.sign_changes()
            assert (prob.sign_changes() - sol.count) % 2 == 0 or sol.discriminant == 0
            for x, _ in sol.roots:
                assert prob.residual(float(x)) <= 1e-9

    def test_root_count_vs_dense_oracle(self):
        rng = random.Random(5)
        checked = 0
        for _ in range(300):
            e1 = rng.randint(-5, 5)
            e2 = rng.randint(-5, 5)
            if e1 == 0 or e2 == 0 or e1 == e2:
                continue
            c1 = F(rng.randint(1, 30), rng.randint(1, 30))
            c2 = F(rng.randint(1, 30), rng.randint(1, 30))
            sol = solve_trinomial(TrinomialProblem(F(e1), F(e2), c1, c2))
            if sol.discriminant is not None and abs(float(sol.discriminant)) < 1e-6:
                continue
            shift = -min(e1, e2, 0)
            deg = max(e1, e2, 0) + shift
            coeffs = [0.0] * (deg + 1)
            coeffs[deg - (e1 + shift)] += float(c1)
            coeffs[deg - (e2 + shift)] += float(c2)
            coeffs[deg - shift] -= 1.0
            expected = dense_positive_roots(coeffs)
            got = sorted(float(x) for x, _ in sol.roots)
            assert len(got) == len(expected)
            for g, e in zip(got, expected):
                assert abs(g - e) <= 1e-7 * max(1.0, abs(e))
            checked += 1
        assert checked > 150

    def test_float_exponents_supported(self):
        sol = solve_trinomial(TrinomialProblem(1.5, -0.5, 0.3, 0.4))
        assert sol.count == 2
        prob = sol.problem
        for x, _ in sol.roots:
            assert prob.residual(float(x)) <= 1e-9
