"""Sign-characteristic functions and univariate trinomial solving.

The function lam^a * (1-lam)^b on (0,1) is monotone when a*b <= 0 (not
both zero) and otherwise has a single interior extremum at a/(a+b). Each
residual binomial condition in one free slice coordinate takes this shape,
so positive solutions of a trinomial come from inverting it on explicit
branches.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import exp, log, log1p

from .errors import (
    BranchError,
    DegenerateExponent,
    DomainError,
    RangeError,
)
from .linalg import Mat, Scalar, column_canonical, kernel_basis, to_exact
from .symbolic import _pow_scalar

_REL_TOL = 1e-12


def _nth_root_exact(v: Fraction, k: int) -> Fraction | None:
    """Exact k-th root of a positive rational, or None."""
    if v <= 0 or k <= 0:
        return None

    def iroot(x: int) -> int | None:
        if x in (0, 1):
            return x
        # a root of 2 or more needs k <= bit length; float pow may overflow
        if k > x.bit_length():
            return None
        r = 1 << -(-x.bit_length() // k)
        while True:
            nr = ((k - 1) * r + x // r ** (k - 1)) // k
            if nr >= r:
                break
            r = nr
        for cand in (r, r + 1):
            if cand**k == x:
                return cand
        return None

    p, q = iroot(v.numerator), iroot(v.denominator)
    if p is None or q is None:
        return None
    return Fraction(p, q)


def _pow_root(v: Scalar, inv_exp: Scalar) -> Scalar:
    """v ** (1/inv_exp), exact when the root is rational."""
    if isinstance(v, Fraction) and isinstance(inv_exp, Fraction):
        e = 1 / inv_exp
        if e.denominator == 1:
            return _pow_scalar(v, e)
        rt = _nth_root_exact(v, e.denominator)
        if rt is not None:
            return _pow_scalar(rt, Fraction(e.numerator))
    return exp(log(float(v)) / float(inv_exp))


@dataclass(frozen=True)
class SignChar:
    """lam^alpha * (1-lam)^beta over the open unit interval."""

    alpha: Scalar
    beta: Scalar

    def __post_init__(self):
        if isinstance(self.alpha, int):
            object.__setattr__(self, "alpha", Fraction(self.alpha))
        if isinstance(self.beta, int):
            object.__setattr__(self, "beta", Fraction(self.beta))
        if self.alpha == 0 and self.beta == 0:
            raise DegenerateExponent("both exponents vanish; the function is 1")

    def eval(self, lam: Scalar) -> Scalar:
        if not 0 < lam < 1:
            raise DomainError(f"argument {lam} outside (0, 1)")
        return _pow_scalar(lam, self.alpha) * _pow_scalar(1 - lam, self.beta)

    def eval_log(self, lam: float) -> float:
        lam = float(lam)
        if not 0.0 < lam < 1.0:
            raise DomainError(f"argument {lam} outside (0, 1)")
        return float(self.alpha) * log(lam) + float(self.beta) * log1p(-lam)

    @property
    def two_branched(self) -> bool:
        return self.alpha * self.beta > 0

    @property
    def increasing(self) -> bool:
        """Monotone direction; only meaningful when not two-branched."""
        if self.two_branched:
            raise BranchError("not monotone")
        return (self.alpha > 0) or (self.beta < 0)

    def extremum(self):
        """(location, value) of the interior extremum, or None when monotone.

        A maximum when both exponents are positive, a minimum when both are
        negative.
        """
        if not self.two_branched:
            return None
        lam = self.alpha / (self.alpha + self.beta)
        try:
            val = self.eval(lam)
        except (OverflowError, ValueError):
            val = exp(self.eval_log(float(lam)))
        return lam, val

    def _log_at(self, lam: float) -> float:
        return float(self.alpha) * log(lam) + float(self.beta) * log1p(-lam)

    def _bisect(self, lo: float, hi: float, logv: float) -> float:
        glo = self._log_at(lo) - logv
        a, b = lo, hi
        while True:
            mid = 0.5 * (a + b)
            if mid <= a or mid >= b:
                break
            g = self._log_at(mid) - logv
            if g == 0.0:
                return mid
            if (g < 0.0) == (glo < 0.0):
                a = mid
            else:
                b = mid
        # safeguarded Newton polish
        lam = 0.5 * (a + b)
        for _ in range(4):
            g = self._log_at(lam) - logv
            d = float(self.alpha) / lam - float(self.beta) / (1.0 - lam)
            if d == 0.0:
                break
            step = g / d
            cand = lam - step
            if not (a < cand < b):
                break
            lam = cand
        return lam

    def _probe_down(self, start: float, logv: float, want_negative: bool) -> float:
        lam = start
        for _ in range(2100):
            lam *= 0.5
            if lam <= 0.0:
                break
            g = self._log_at(lam) - logv
            if (g < 0.0) == want_negative:
                return lam
        raise RangeError("no bracket toward 0; value outside the range")

    def _probe_up(self, start: float, logv: float, want_negative: bool) -> float:
        gap = 1.0 - start
        for _ in range(2100):
            gap *= 0.5
            lam = 1.0 - gap
            if lam >= 1.0:
                break
            g = self._log_at(lam) - logv
            if (g < 0.0) == want_negative:
                return lam
        raise RangeError("no bracket toward 1; value outside the range")

    def root(self, value: Scalar, branch: str = "whole") -> Scalar:
        """Solve lam^alpha (1-lam)^beta = value for lam in (0, 1).

        branch is "whole" for the monotone case, "minus" or "plus" for the
        subinterval left or right of the extremum otherwise. Values beyond
        the extremum by more than a 1e-12 relative margin raise RangeError;
        within the margin the extremum location is returned.
        """
        if not value > 0:
            raise DomainError(f"the function is positive; value {value} is not")
        a, b = self.alpha, self.beta
        if self.two_branched:
            if branch == "whole":
                raise BranchError("two branches here; pick minus or plus")
            lam_star, v_star = self.extremum()
            margin = _REL_TOL * max(1.0, abs(float(v_star)))
            gap = float(value) - float(v_star)
            if (a > 0 and gap > margin) or (a < 0 and gap < -margin):
                raise RangeError(
                    f"value {value} beyond the extremum value {v_star}"
                )
            if abs(gap) <= margin:
                return lam_star
            logv = log(float(value))
            # away from the extremum the log residual flips sign: toward
            # either interval end it goes to -inf for a maximum (a > 0)
            # and +inf for a minimum
            if branch == "minus":
                lo = self._probe_down(float(lam_star), logv, want_negative=a > 0)
                return self._bisect(lo, float(lam_star), logv)
            if branch == "plus":
                hi = self._probe_up(float(lam_star), logv, want_negative=a > 0)
                return self._bisect(float(lam_star), hi, logv)
            raise BranchError(f"unknown branch {branch!r}")
        if branch != "whole":
            raise BranchError("single branch here; use whole")
        if a == 0:
            lam = 1 - _pow_root(value, b)
            if not 0 < lam < 1:
                raise RangeError(f"value {value} not attained")
            return lam
        if b == 0:
            lam = _pow_root(value, a)
            if not 0 < lam < 1:
                raise RangeError(f"value {value} not attained")
            return lam
        logv = log(float(value))
        inc = self.increasing
        lo = self._probe_down(1.0, logv, want_negative=inc)
        hi = self._probe_up(0.0, logv, want_negative=not inc)
        return self._bisect(lo, hi, logv)


@dataclass(frozen=True)
class TrinomialProblem:
    """c1 x^e1 + c2 x^e2 = 1 over x > 0, exponents distinct and nonzero."""

    e1: Scalar
    e2: Scalar
    c1: Scalar
    c2: Scalar

    def __post_init__(self):
        if self.e1 == 0 or self.e2 == 0:
            raise DegenerateExponent("zero exponent; the term is constant")
        if self.e1 == self.e2:
            raise DegenerateExponent("equal exponents; combine the terms")
        if not (self.c1 > 0 and self.c2 > 0):
            raise DomainError("coefficients must be positive")

    def residual(self, x: float) -> float:
        t1 = float(self.c1) * exp(float(self.e1) * log(x))
        t2 = float(self.c2) * exp(float(self.e2) * log(x))
        return abs(t1 + t2 - 1.0)

    def sign_changes(self) -> int:
        """Sign alternations of the coefficients in exponent order."""
        trio = sorted(
            [(self.e1, 1), (self.e2, 1), (0, -1)], key=lambda p: p[0], reverse=True
        )
        signs = [s for _, s in trio]
        return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


@dataclass(frozen=True)
class TrinomialSolution:
    problem: TrinomialProblem
    kernel: tuple[Scalar, Scalar, Scalar]
    char: SignChar
    target: Scalar
    extremum: tuple[Scalar, Scalar] | None
    discriminant: Scalar | None
    slice_roots: tuple[Scalar, ...]
    roots: tuple[tuple[Scalar, int], ...]

    @property
    def count(self) -> int:
        return sum(mult for _, mult in self.roots)


def _trinomial_kernel(e1: Scalar, e2: Scalar):
    stacked = Mat.from_rows(
        [(to_exact(e1), to_exact(e2), Fraction(0)), (1, 1, 1)]
        if not (isinstance(e1, float) or isinstance(e2, float))
        else [(float(e1), float(e2), 0.0), (1.0, 1.0, 1.0)]
    )
    col = column_canonical(kernel_basis(stacked).mat()).col(0)
    lead = next(v for v in col if v != 0)
    if lead < 0:
        col = tuple(-v for v in col)
    return col


def solve_trinomial(problem: TrinomialProblem) -> TrinomialSolution:
    """All positive roots, through the sign characteristic on the slice.

    The coefficient triple (c1 x^e1, c2 x^e2, 1) sweeps the slice point
    (lam, 1-lam, 1); the single binomial condition pins lam through the
    sign characteristic, and each admissible lam lifts to one root.
    """
    h = _trinomial_kernel(problem.e1, problem.e2)
    char = SignChar(h[0], h[1])
    target = _pow_scalar(problem.c1, h[0]) * _pow_scalar(problem.c2, h[1])
    ext = char.extremum()
    disc = None
    lams: list[Scalar] = []
    if ext is None:
        lams.append(char.root(target, "whole"))
        mults = [1]
    else:
        lam_star, v_star = ext
        # positive when two distinct slice roots exist, negative when none
        disc = (v_star - target) if char.alpha > 0 else (target - v_star)
        margin = 1e-10 * max(1.0, abs(float(v_star)))
        if abs(float(disc)) <= margin:
            lams.append(lam_star)
            mults = [2]
        elif float(disc) < 0:
            mults = []
        else:
            lams.append(char.root(target, "minus"))
            lams.append(char.root(target, "plus"))
            mults = [1, 1]
    roots = []
    for lam, mult in zip(lams, mults):
        x = _pow_root(lam / problem.c1, problem.e1)
        roots.append((x, mult))
    return TrinomialSolution(
        problem=problem,
        kernel=tuple(h),
        char=char,
        target=target,
        extremum=ext,
        discriminant=disc,
        slice_roots=tuple(lams),
        roots=tuple(roots),
    )
