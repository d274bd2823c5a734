"""Small symbolic layer: affine forms, power products, linearization.

Coefficient-set coordinates are affine forms in the free coefficients of a
class parametrization. Binomial conditions and lifted solutions are power
products whose bases are such affine forms (or bare parameter names), with
rational exponents. Arithmetic on parameters is deferred: a symbol is an
opaque name until a numeric environment is supplied.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import exp, log

from .linalg import Scalar, to_exact


def _num(v) -> Scalar:
    return v if isinstance(v, float) else to_exact(v)


def log_scalar(v) -> float:
    """log of a positive scalar, safe for arbitrarily large rationals."""
    if isinstance(v, Fraction):
        return log(v.numerator) - log(v.denominator)
    return log(float(v))


@dataclass(frozen=True)
class AffineForm:
    """const + sum(coeff * symbol); terms sorted by symbol, coeffs nonzero."""

    const: Scalar
    terms: tuple[tuple[str, Scalar], ...]

    @staticmethod
    def make(const, coeffs: dict[str, Scalar] | None = None) -> "AffineForm":
        items = tuple(
            sorted((s, _num(c)) for s, c in (coeffs or {}).items() if c != 0)
        )
        return AffineForm(_num(const), items)

    @staticmethod
    def symbol(name: str) -> "AffineForm":
        return AffineForm(Fraction(0), ((name, Fraction(1)),))

    @staticmethod
    def constant(v) -> "AffineForm":
        return AffineForm(_num(v), ())

    @property
    def is_constant(self) -> bool:
        return not self.terms

    def as_symbol(self) -> str | None:
        if self.const == 0 and len(self.terms) == 1 and self.terms[0][1] == 1:
            return self.terms[0][0]
        return None

    def symbols(self) -> set[str]:
        return {s for s, _ in self.terms}

    def eval(self, env: dict[str, Scalar]) -> Scalar:
        v = self.const
        for s, c in self.terms:
            v = v + c * env[s]
        return v

    def sort_key(self):
        return (self.terms, -1 if isinstance(self.const, float) else 0, str(self.const))

    def __str__(self) -> str:
        parts = []
        if self.const != 0 or not self.terms:
            parts.append(_fmt_num(self.const))
        for s, c in self.terms:
            if c == 1:
                parts.append(f"+ {s}" if parts else s)
            elif c == -1:
                parts.append(f"- {s}" if parts else f"-{s}")
            else:
                cs = _fmt_num(abs(c))
                sign = "-" if (c < 0) else "+"
                parts.append(f"{sign} {cs}*{s}" if parts else
                             (f"-{cs}*{s}" if c < 0 else f"{cs}*{s}"))
        return " ".join(parts)


def _fmt_num(v) -> str:
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return repr(v)


def _fmt_exp(e) -> str:
    return _fmt_num(e)


@dataclass(frozen=True)
class PowerProduct:
    """coeff * prod(base ** exponent) with affine-form bases.

    Bases are kept distinct by structural equality and sorted for a
    canonical representation. Exponents are Fractions in exact mode and
    floats otherwise; zero exponents are dropped.
    """

    coeff: Scalar
    factors: tuple[tuple[AffineForm, Scalar], ...]

    @staticmethod
    def one() -> "PowerProduct":
        return PowerProduct(Fraction(1), ())

    @staticmethod
    def number(v) -> "PowerProduct":
        return PowerProduct(_num(v), ())

    @staticmethod
    def from_base(base: AffineForm, exponent=1) -> "PowerProduct":
        return PowerProduct.one().times_base(base, exponent)

    @staticmethod
    def from_symbol(name: str, exponent=1) -> "PowerProduct":
        return PowerProduct.from_base(AffineForm.symbol(name), exponent)

    def times_base(self, base: AffineForm, exponent) -> "PowerProduct":
        exponent = _num(exponent)
        if exponent == 0:
            return self
        if base.is_constant:
            return PowerProduct(self.coeff * _pow_scalar(base.const, exponent), self.factors)
        d = dict(self.factors)
        d[base] = d.get(base, Fraction(0)) + exponent
        items = tuple(sorted(((b, e) for b, e in d.items() if e != 0),
                             key=lambda be: be[0].sort_key()))
        return PowerProduct(self.coeff, items)

    def times(self, other: "PowerProduct") -> "PowerProduct":
        out = PowerProduct(self.coeff * other.coeff, self.factors)
        for b, e in other.factors:
            out = out.times_base(b, e)
        return out

    def power(self, exponent) -> "PowerProduct":
        exponent = _num(exponent)
        if exponent == 0:
            return PowerProduct.one()
        out = PowerProduct(_pow_scalar(self.coeff, exponent), ())
        for b, e in self.factors:
            out = out.times_base(b, e * exponent)
        return out

    def invert(self) -> "PowerProduct":
        return self.power(-1)

    def scaled(self, v) -> "PowerProduct":
        return PowerProduct(self.coeff * _num(v), self.factors)

    @property
    def is_constant(self) -> bool:
        return not self.factors

    def symbols(self) -> set[str]:
        out = set()
        for b, _ in self.factors:
            out |= b.symbols()
        return out

    def eval(self, env: dict[str, Scalar]) -> Scalar:
        v = self.coeff
        for b, e in self.factors:
            v = v * _pow_scalar(b.eval(env), e)
        return v

    def eval_log(self, env: dict[str, float]) -> float:
        """log of the product for positive bases and coefficient."""
        fenv = {s: float(x) for s, x in env.items()}
        acc = log_scalar(self.coeff)
        for b, e in self.factors:
            acc += float(e) * log_scalar(b.eval(fenv))
        return acc

    def __str__(self) -> str:
        parts = []
        if self.coeff != 1 or not self.factors:
            parts.append(_fmt_num(self.coeff))
        for b, e in self.factors:
            name = b.as_symbol()
            bs = name if name else f"({b})"
            parts.append(bs if e == 1 else f"{bs}^{_fmt_exp(e)}")
        return " * ".join(parts) if parts else "1"


def _pow_scalar(base: Scalar, exponent: Scalar) -> Scalar:
    """base ** exponent, exact for integer exponents on rationals."""
    if isinstance(exponent, Fraction) and exponent.denominator == 1:
        exponent = int(exponent)
    if isinstance(exponent, int):
        if isinstance(base, Fraction):
            return base**exponent
        return float(base) ** exponent
    b = float(base)
    e = float(exponent)
    if b <= 0:
        raise ValueError(f"fractional power of non-positive base {b}")
    return exp(e * log(b))


# -- polynomial expansion for constraint linearization -----------------------

Monomial = tuple[tuple[str, int], ...]
Poly = dict[Monomial, Scalar]


def poly_zero() -> Poly:
    return {}


def poly_add(p: Poly, q: Poly) -> Poly:
    out = dict(p)
    for m, c in q.items():
        s = out.get(m, 0) + c
        if s == 0:
            out.pop(m, None)
        else:
            out[m] = s
    return out


def poly_mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            d = dict(m1)
            for s, e in m2:
                d[s] = d.get(s, 0) + e
            m = tuple(sorted(d.items()))
            s = out.get(m, 0) + c1 * c2
            if s == 0:
                out.pop(m, None)
            else:
                out[m] = s
    return out


def affine_to_poly(f: AffineForm) -> Poly:
    out: Poly = {}
    if f.const != 0:
        out[()] = f.const
    for s, c in f.terms:
        out[((s, 1),)] = c
    return out


def poly_pow(p: Poly, k: int) -> Poly:
    out: Poly = {(): Fraction(1)}
    for _ in range(k):
        out = poly_mul(out, p)
    return out


def poly_degree(p: Poly) -> int:
    deg = 0
    for m in p:
        deg = max(deg, sum(e for _, e in m))
    return deg


def linearize_terms(terms):
    """Try to reduce sum(coeff * power_product) ? 0 to an affine form.

    Multiplies through by the product of bases with negative minimum
    exponent (sound when every base is positive on the region), expands, and
    returns an AffineForm when the result has total degree <= 1. Returns
    None when the sum is genuinely nonlinear or exponents stay fractional.
    """
    mins: dict[AffineForm, Scalar] = {}
    for _, pp in terms:
        for b, e in pp.factors:
            mins[b] = min(mins.get(b, Fraction(0)), e)
    total = poly_zero()
    for coeff, pp in terms:
        p: Poly = {(): coeff * pp.coeff}
        exps = dict(pp.factors)
        for b, mn in mins.items():
            e = exps.get(b, Fraction(0)) - mn
            if isinstance(e, float):
                if abs(e - round(e)) > 1e-9:
                    return None
                e = int(round(e))
            elif isinstance(e, Fraction):
                if e.denominator != 1:
                    return None
                e = int(e)
            if e:
                p = poly_mul(p, poly_pow(affine_to_poly(b), e))
        total = poly_add(total, p)
    if poly_degree(total) > 1:
        return None
    const = total.get((), Fraction(0))
    coeffs = {}
    for m, c in total.items():
        if m:
            coeffs[m[0][0]] = c
    return AffineForm.make(const, coeffs)
