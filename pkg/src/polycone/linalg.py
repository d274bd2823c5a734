"""Dense linear algebra over exact rationals with a double-precision fallback.

Matrices are immutable and dense. Entries are either `fractions.Fraction`
(exact mode) or `float` (float mode); a matrix never mixes the two. Exact
mode is the default whenever every input entry is rational; float mode is
reserved for irrational data and compares pivots against a relative
tolerance EPS * max|entry| (overridable per call).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

EPS = 1e-12

Scalar = Fraction | float


class LinalgError(ValueError):
    pass


def to_exact(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, float):
        raise LinalgError("float entry in exact mode; pass mode='float' explicitly")
    raise LinalgError(f"unsupported scalar {v!r}")


def is_exact_scalar(v) -> bool:
    return isinstance(v, (Fraction, int))


@dataclass(frozen=True)
class Mat:
    """Immutable dense matrix with homogeneous scalar mode."""

    nrows: int
    ncols: int
    entries: tuple[tuple[Scalar, ...], ...]

    # -- construction ------------------------------------------------------

    @staticmethod
    def from_rows(rows, ncols: int | None = None, mode: str | None = None) -> "Mat":
        rows = [tuple(r) for r in rows]
        if rows:
            ncols = len(rows[0])
            if any(len(r) != ncols for r in rows):
                raise LinalgError("ragged rows")
        elif ncols is None:
            raise LinalgError("ncols required for a matrix with no rows")
        use_float = mode == "float" or any(
            isinstance(v, float) for r in rows for v in r
        )
        if use_float:
            ent = tuple(tuple(float(v) for v in r) for r in rows)
        else:
            ent = tuple(tuple(to_exact(v) for v in r) for r in rows)
        return Mat(len(rows), ncols, ent)

    @staticmethod
    def from_cols(cols, nrows: int | None = None, mode: str | None = None) -> "Mat":
        cols = [tuple(c) for c in cols]
        if cols:
            nrows = len(cols[0])
        elif nrows is None:
            raise LinalgError("nrows required for a matrix with no columns")
        return Mat.from_rows(
            [[c[i] for c in cols] for i in range(nrows)], ncols=len(cols), mode=mode
        )

    @staticmethod
    def identity(n: int) -> "Mat":
        one, zero = Fraction(1), Fraction(0)
        return Mat(n, n, tuple(
            tuple(one if i == j else zero for j in range(n)) for i in range(n)
        ))

    @staticmethod
    def zeros(nrows: int, ncols: int, mode: str = "exact") -> "Mat":
        zero = 0.0 if mode == "float" else Fraction(0)
        return Mat(nrows, ncols, tuple(tuple(zero for _ in range(ncols)) for _ in range(nrows)))

    # -- basic properties --------------------------------------------------

    @property
    def mode(self) -> str:
        for r in self.entries:
            for v in r:
                return "float" if isinstance(v, float) else "exact"
        return "exact"

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def row(self, i: int) -> tuple[Scalar, ...]:
        return self.entries[i]

    def col(self, j: int) -> tuple[Scalar, ...]:
        return tuple(r[j] for r in self.entries)

    def max_abs(self) -> float:
        m = 0.0
        for r in self.entries:
            for v in r:
                a = abs(float(v))
                if a > m:
                    m = a
        return m

    def is_zero(self, tol: float | None = None) -> bool:
        if self.mode == "exact":
            return all(v == 0 for r in self.entries for v in r)
        t = self._tol(tol)
        return all(abs(v) <= t for r in self.entries for v in r)

    def _tol(self, tol: float | None) -> float:
        if tol is not None:
            return tol
        return EPS * max(self.max_abs(), 1.0)

    # -- algebra -----------------------------------------------------------

    def t(self) -> "Mat":
        return Mat(self.ncols, self.nrows,
                   tuple(tuple(self.entries[i][j] for i in range(self.nrows))
                         for j in range(self.ncols)))

    def to_float(self) -> "Mat":
        return Mat(self.nrows, self.ncols,
                   tuple(tuple(float(v) for v in r) for r in self.entries))

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.ncols != other.nrows:
            raise LinalgError(f"shape mismatch {self.shape} @ {other.shape}")
        a, b = self, other
        if a.mode != b.mode:
            a, b = a.to_float(), b.to_float()
        zero = 0.0 if a.mode == "float" else Fraction(0)
        bt = b.t().entries
        ent = tuple(
            tuple(sum((ra[k] * rb[k] for k in range(a.ncols)), zero) for rb in bt)
            for ra in a.entries
        )
        return Mat(a.nrows, b.ncols, ent)

    def mulvec(self, v) -> tuple[Scalar, ...]:
        v = tuple(v)
        if len(v) != self.ncols:
            raise LinalgError("vector length mismatch")
        zero = 0.0 if self.mode == "float" or any(isinstance(x, float) for x in v) else Fraction(0)
        return tuple(sum((r[k] * v[k] for k in range(self.ncols)), zero) for r in self.entries)

    def scale(self, s: Scalar) -> "Mat":
        return Mat(self.nrows, self.ncols,
                   tuple(tuple(v * s for v in r) for r in self.entries))

    def hstack(self, other: "Mat") -> "Mat":
        if self.nrows != other.nrows:
            raise LinalgError("row mismatch in hstack")
        return Mat.from_rows(
            [tuple(a) + tuple(b) for a, b in zip(self.entries, other.entries)],
            ncols=self.ncols + other.ncols,
            mode="float" if "float" in (self.mode, other.mode) else None,
        )

    def vstack(self, other: "Mat") -> "Mat":
        if self.ncols != other.ncols:
            raise LinalgError("column mismatch in vstack")
        return Mat.from_rows(
            list(self.entries) + list(other.entries),
            ncols=self.ncols,
            mode="float" if "float" in (self.mode, other.mode) else None,
        )

    def take_cols(self, idx) -> "Mat":
        idx = tuple(idx)
        return Mat(self.nrows, len(idx),
                   tuple(tuple(r[j] for j in idx) for r in self.entries))


def diag(values, mode: str | None = None) -> Mat:
    values = tuple(values)
    n = len(values)
    rows = [[values[i] if i == j else 0 for j in range(n)] for i in range(n)]
    return Mat.from_rows(rows, ncols=n, mode=mode)


# -- elimination ------------------------------------------------------------


def rref(m: Mat, tol: float | None = None) -> tuple[Mat, tuple[int, ...], tuple[str, ...]]:
    """Reduced row echelon form.

    Returns (R, pivot column indices, warnings). Exact mode picks the first
    nonzero pivot; float mode uses partial pivoting and flags pivot decisions
    that fall within a factor of 10 of the threshold, since those make the
    computed rank ambiguous.
    """
    rows = [list(r) for r in m.entries]
    nr, nc = m.nrows, m.ncols
    exact = m.mode == "exact"
    thr = 0.0 if exact else (tol if tol is not None else EPS * max(m.max_abs(), 1.0))
    warnings: list[str] = []
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        if r >= nr:
            break
        if exact:
            pr = next((i for i in range(r, nr) if rows[i][c] != 0), None)
        else:
            pr = max(range(r, nr), key=lambda i: abs(rows[i][c]), default=None)
            if pr is not None:
                best = abs(rows[pr][c])
                if best <= thr:
                    if best > thr / 10.0:
                        warnings.append(
                            f"column {c}: rejected pivot {best:.3e} within 10x of threshold {thr:.3e}"
                        )
                    pr = None
                elif best < 10.0 * thr:
                    warnings.append(
                        f"column {c}: accepted pivot {best:.3e} within 10x of threshold {thr:.3e}"
                    )
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][c]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(nr):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    R = Mat(nr, nc, tuple(tuple(row) for row in rows))
    return R, tuple(pivots), tuple(warnings)


def rank(m: Mat, tol: float | None = None) -> int:
    return len(rref(m, tol)[1])


@dataclass(frozen=True)
class SubspaceBasis:
    """Ordered basis vectors of a subspace, stored as rows of a tuple."""

    ambient_dim: int
    vectors: tuple[tuple[Scalar, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def mat(self) -> Mat:
        """Basis vectors as matrix columns."""
        return Mat.from_cols(self.vectors, nrows=self.ambient_dim)

    def contains(self, v, tol: float | None = None) -> bool:
        """Membership test: v lies in the span of the basis."""
        v = tuple(v)
        if len(v) != self.ambient_dim:
            raise LinalgError("ambient dimension mismatch")
        if not self.vectors:
            m = Mat.from_rows([v])
            return m.is_zero(tol)
        stacked = Mat.from_rows(list(self.vectors) + [v], ncols=self.ambient_dim)
        return rank(stacked, tol) == rank(self.mat().t(), tol)


def kernel_basis(m: Mat, tol: float | None = None) -> SubspaceBasis:
    """Basis of the kernel, in reduced column echelon form.

    The basis carries an identity block on the free coordinates (pivots sit
    at the bottom of each vector), which makes it canonical for a given
    matrix and reproducible across runs.
    """
    R, pivots, _ = rref(m, tol)
    nc = m.ncols
    free = [c for c in range(nc) if c not in pivots]
    zero = 0.0 if m.mode == "float" else Fraction(0)
    one = 1.0 if m.mode == "float" else Fraction(1)
    vectors = []
    for f in free:
        v = [zero] * nc
        v[f] = one
        for i, p in enumerate(pivots):
            v[p] = -R.entries[i][f]
        vectors.append(tuple(v))
    return SubspaceBasis(nc, tuple(vectors))


def orthogonal_complement_of_image(m: Mat, tol: float | None = None) -> SubspaceBasis:
    """Basis of the orthogonal complement of the column space."""
    return kernel_basis(m.t(), tol)


def inverse(m: Mat, tol: float | None = None) -> Mat:
    if m.nrows != m.ncols:
        raise LinalgError("inverse of non-square matrix")
    n = m.nrows
    aug = m.hstack(Mat.identity(n) if m.mode == "exact" else Mat.identity(n).to_float())
    R, pivots, _ = rref(aug, tol)
    if tuple(pivots) != tuple(range(n)):
        raise LinalgError("matrix is singular")
    return Mat(n, n, tuple(tuple(r[n:]) for r in R.entries))


def generalized_inverse(m: Mat, tol: float | None = None) -> Mat:
    """A generalized inverse g with m @ g @ m == m, via rank factorization.

    m = F K with F the pivot columns of m and K the nonzero rows of the
    reduced row echelon form; g = K' (K K')^-1 (F' F)^-1 F'.
    """
    R, pivots, _ = rref(m, tol)
    r = len(pivots)
    if r == 0:
        return Mat.zeros(m.ncols, m.nrows, mode=m.mode)
    F = m.take_cols(pivots)
    K = Mat(r, m.ncols, tuple(R.entries[i] for i in range(r)))
    kkt_inv = inverse(K @ K.t(), tol)
    ftf_inv = inverse(F.t() @ F, tol)
    return K.t() @ kkt_inv @ ftf_inv @ F.t()


# -- canonical column form ---------------------------------------------------


def _primitive_column(col):
    """Scale an exact column to coprime integers, first nonzero entry > 0."""
    denom = 1
    for v in col:
        denom = denom * v.denominator // gcd(denom, v.denominator)
    ints = [int(v * denom) for v in col]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    lead = next((v for v in ints if v != 0), 0)
    if lead < 0:
        ints = [-v for v in ints]
    return tuple(Fraction(v) for v in ints)


def column_canonical(m: Mat, tol: float | None = None) -> Mat:
    """Canonical basis matrix for the column space of m.

    Columns are brought to reduced column echelon form with pivots at the
    bottom (matching kernel_basis output); exact columns are then cleared to
    primitive integers with positive leading entry.
    """
    rev = Mat.from_rows(list(reversed(m.entries)), ncols=m.ncols,
                        mode="float" if m.mode == "float" else None)
    R, pivots, _ = rref(rev.t(), tol)
    cols = []
    for i in range(len(pivots)):
        col = tuple(reversed(R.entries[i]))
        if m.mode == "exact":
            col = _primitive_column(col)
        cols.append(col)
    cols.reverse()
    if not cols:
        return Mat.zeros(m.nrows, 0, mode=m.mode)
    return Mat.from_cols(cols, nrows=m.nrows, mode="float" if m.mode == "float" else None)
