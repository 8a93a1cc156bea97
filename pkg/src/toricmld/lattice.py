"""Exact integer and rational linear algebra for lattice computations.

Vectors are tuples of ints (or Fractions), matrices are tuples of row
tuples.  A lattice homomorphism N -> N' is a matrix with rows indexed by
the target and columns by the source, applied to column vectors via
``apply_hom``.  Covectors (elements of the dual lattice M) are plain
tuples paired against vectors with ``dot``.

Empty matrices lose their column count, so the functions that can meet
them take an explicit ``ncols`` argument.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class LatticeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# vector / matrix helpers


def dot(u, v):
    if len(u) != len(v):
        raise LatticeError("dimension mismatch: %d vs %d" % (len(u), len(v)))
    return sum(a * b for a, b in zip(u, v))


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v):
    return tuple(c * a for a in v)


def vec_neg(v):
    return tuple(-a for a in v)


def is_zero(v):
    return all(a == 0 for a in v)


def identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def apply_hom(mat, v):
    """mat applied to the column vector v (rows = target coordinates)."""
    return tuple(dot(row, v) for row in mat)


def compose_covector(f, mat, ncols=None):
    """The covector f . mat, i.e. the pullback of f along mat."""
    if len(f) != len(mat):
        raise LatticeError("covector/hom mismatch")
    if ncols is None:
        if not mat:
            raise LatticeError("compose_covector with empty hom needs ncols")
        ncols = len(mat[0])
    return tuple(sum(f[i] * mat[i][j] for i in range(len(mat))) for j in range(ncols))


def mat_mul(a, b):
    return tuple(tuple(sum(ra[k] * b[k][j] for k in range(len(b)))
                       for j in range(len(b[0]) if b else 0)) for ra in a)


def transpose(mat, ncols=None):
    if not mat:
        if ncols is None:
            raise LatticeError("transpose of empty matrix needs ncols")
        return tuple(() for _ in range(ncols))
    return tuple(tuple(row[j] for row in mat) for j in range(len(mat[0])))


def content(v):
    """gcd of the entries (0 for the zero vector)."""
    g = 0
    for a in v:
        g = gcd(g, abs(a))
    return g


def primitive(v):
    """v divided by the gcd of its coordinates.  v must be nonzero."""
    g = content(v)
    if g == 0:
        raise LatticeError("primitive() of the zero vector")
    return tuple(a // g for a in v)


# ---------------------------------------------------------------------------
# Hermite and Smith normal forms


def hnf(m, ncols=None):
    """Row Hermite normal form.

    Returns (H, U) with U unimodular and U.m = H; pivots are positive,
    entries above a pivot are reduced modulo it, zero rows sit at the
    bottom.
    """
    rows = [list(r) for r in m]
    nr = len(rows)
    nc = len(rows[0]) if nr else (ncols or 0)
    U = [list(r) for r in identity(nr)]

    def row_op(i, j, q):
        rows[i] = [a - q * b for a, b in zip(rows[i], rows[j])]
        U[i] = [a - q * b for a, b in zip(U[i], U[j])]

    r = 0
    for c in range(nc):
        while True:
            nz = [i for i in range(r, nr) if rows[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(rows[i][c]), i))
            if i0 != r:
                rows[r], rows[i0] = rows[i0], rows[r]
                U[r], U[i0] = U[i0], U[r]
            done = True
            for i in range(r + 1, nr):
                if rows[i][c] != 0:
                    row_op(i, r, rows[i][c] // rows[r][c])
                    if rows[i][c] != 0:
                        done = False
            if done:
                break
        if r < nr and rows[r][c] != 0:
            if rows[r][c] < 0:
                rows[r] = [-a for a in rows[r]]
                U[r] = [-a for a in U[r]]
            for i in range(r):
                q = rows[i][c] // rows[r][c]
                if q:
                    row_op(i, r, q)
            r += 1
            if r == nr:
                break
    return tuple(tuple(x) for x in rows), tuple(tuple(x) for x in U)


def snf(m, nrows=None, ncols=None):
    """Smith normal form with transforms.

    Returns (D, U, V, Uinv, Vinv) with U.m.V = D, D diagonal with
    nonnegative entries d1 | d2 | ..., and U, V unimodular.
    """
    nr = len(m) if nrows is None else nrows
    nc = (len(m[0]) if m else ncols) if ncols is None else ncols
    if nc is None:
        raise LatticeError("snf of empty matrix needs ncols")
    D = [list(r) for r in m]
    U = [list(r) for r in identity(nr)]
    Ui = [list(r) for r in identity(nr)]
    V = [list(r) for r in identity(nc)]
    Vi = [list(r) for r in identity(nc)]

    def row_op(i, j, q):  # row i -= q * row j
        D[i] = [a - q * b for a, b in zip(D[i], D[j])]
        U[i] = [a - q * b for a, b in zip(U[i], U[j])]
        for row in Ui:  # col j += q * col i on the inverse
            row[j] += q * row[i]

    def col_op(i, j, q):  # col i -= q * col j
        for row in D:
            row[i] -= q * row[j]
        for row in V:
            row[i] -= q * row[j]
        Vi[j] = [a + q * b for a, b in zip(Vi[j], Vi[i])]

    def row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for row in Ui:
            row[i], row[j] = row[j], row[i]

    def col_swap(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def row_neg(i):
        D[i] = [-a for a in D[i]]
        U[i] = [-a for a in U[i]]
        for row in Ui:
            row[i] = -row[i]

    k = 0
    while k < min(nr, nc):
        while True:
            ent = [(abs(D[i][j]), i, j) for i in range(k, nr)
                   for j in range(k, nc) if D[i][j] != 0]
            if not ent:
                return (tuple(tuple(r) for r in D), tuple(tuple(r) for r in U),
                        tuple(tuple(r) for r in V), tuple(tuple(r) for r in Ui),
                        tuple(tuple(r) for r in Vi))
            _, i, j = min(ent)
            if i != k:
                row_swap(i, k)
            if j != k:
                col_swap(j, k)
            clean = True
            for i in range(k + 1, nr):
                if D[i][k] != 0:
                    row_op(i, k, D[i][k] // D[k][k])
                    if D[i][k] != 0:
                        clean = False
            for j in range(k + 1, nc):
                if D[k][j] != 0:
                    col_op(j, k, D[k][j] // D[k][k])
                    if D[k][j] != 0:
                        clean = False
            if not clean:
                continue
            # enforce the divisibility chain
            bad = None
            for i in range(k + 1, nr):
                for j in range(k + 1, nc):
                    if D[i][j] % D[k][k] != 0:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_op(k, bad, -1)
        if D[k][k] < 0:
            row_neg(k)
        k += 1
    return (tuple(tuple(r) for r in D), tuple(tuple(r) for r in U),
            tuple(tuple(r) for r in V), tuple(tuple(r) for r in Ui),
            tuple(tuple(r) for r in Vi))


def hom_is_surjective(mat, ncols):
    """True iff the map Z^ncols -> Z^nrows given by mat is onto."""
    nr = len(mat)
    if nr == 0:
        return True
    D, *_ = snf(mat, nr, ncols)
    return all(D[i][i] == 1 for i in range(nr)) if nr <= ncols else False


def kernel_basis(mat, ncols):
    """Saturated basis (list of vectors) of {v : mat.v = 0}."""
    nr = len(mat)
    if nr == 0:
        return [tuple(r) for r in identity(ncols)]
    D, _U, V, _Ui, _Vi = snf(mat, nr, ncols)
    rank = sum(1 for i in range(min(nr, ncols)) if D[i][i] != 0)
    return [tuple(V[i][j] for i in range(ncols)) for j in range(rank, ncols)]


def rational_rank(rows, ncols):
    rows = [list(map(Fraction, r)) for r in rows]
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c] / prow[c]
                rows[i] = [a - f * b for a, b in zip(rows[i], prow)]
        rank += 1
    return rank


def solve_rational(rows, rhs, ncols):
    """One exact solution x of rows.x = rhs, or None if inconsistent.

    Free variables are set to 0, so the result is deterministic.
    """
    aug = [list(map(Fraction, r)) + [Fraction(b)] for r, b in zip(rows, rhs)]
    pivots = []
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(aug)) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[rank], aug[piv] = aug[piv], aug[rank]
        prow = aug[rank]
        inv = 1 / prow[c]
        aug[rank] = [a * inv for a in prow]
        for i in range(len(aug)):
            if i != rank and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[rank])]
        pivots.append(c)
        rank += 1
    for i in range(rank, len(aug)):
        if aug[i][ncols] != 0:
            return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = aug[i][ncols]
    return tuple(x)


def solve_integral(rows, rhs, ncols):
    """Like solve_rational but demands an integral solution of rows.x = rhs."""
    x = solve_rational(rows, rhs, ncols)
    if x is None:
        return None
    if any(xi.denominator != 1 for xi in x):
        # a rational solution with fractional pivot values does not rule out
        # an integral one in general, but all call sites here solve systems
        # with a unique solution
        return None
    return tuple(int(xi) for xi in x)


# ---------------------------------------------------------------------------
# sublattices, quotients, hom extension


@dataclass(frozen=True)
class Sublattice:
    """A sublattice of Z^ambient_rank given by an HNF basis (rows)."""

    ambient_rank: int
    basis: tuple

    @property
    def rank(self):
        return len(self.basis)

    def contains(self, v):
        return self.coordinates(v) is not None

    def coordinates(self, v):
        """Integer coordinates of v in the basis, or None."""
        v = list(v)
        coords = [0] * len(self.basis)
        for i, row in enumerate(self.basis):
            p = next(j for j in range(self.ambient_rank) if row[j] != 0)
            if v[p] % row[p] != 0:
                return None
            c = v[p] // row[p]
            coords[i] = c
            v = [a - c * b for a, b in zip(v, row)]
        return tuple(coords) if all(a == 0 for a in v) else None

    def from_coordinates(self, c):
        v = (0,) * self.ambient_rank
        for ci, row in zip(c, self.basis):
            v = vec_add(v, vec_scale(ci, row))
        return v

    def is_saturated(self):
        if not self.basis:
            return True
        D, *_ = snf(self.basis, len(self.basis), self.ambient_rank)
        return all(D[i][i] == 1 for i in range(len(self.basis)))


def sublattice_from_vectors(rank, vectors):
    """The sublattice generated by the vectors (canonical HNF basis)."""
    if not vectors:
        return Sublattice(rank, ())
    H, _ = hnf(tuple(tuple(v) for v in vectors), rank)
    basis = tuple(r for r in H if not is_zero(r))
    return Sublattice(rank, basis)


def saturated_span(rank, vectors):
    """The saturation of the span of the vectors: span_R(vectors) cap Z^rank."""
    ann = kernel_basis(tuple(tuple(v) for v in vectors), rank)
    return sublattice_from_vectors(rank, kernel_basis(tuple(ann), rank))


def kernel_sublattice(phi):
    """Saturated kernel of a surjective functional phi: Z^n -> Z.

    phi is a covector; it must be primitive ("not primitive" otherwise).
    """
    n = len(phi)
    if content(phi) != 1:
        raise LatticeError("not primitive")
    return sublattice_from_vectors(n, kernel_basis((tuple(phi),), n))


@dataclass(frozen=True)
class QuotientPresentation:
    projection: tuple  # (n-r) x n integer matrix
    section: tuple     # n x (n-r) integer matrix, right inverse


def quotient_by_span(rank, sub):
    """Quotient of Z^rank by a saturated sublattice, with a splitting."""
    if not sub.is_saturated():
        raise LatticeError("sublattice not saturated")
    r = sub.rank
    if r == 0:
        return QuotientPresentation(identity(rank), identity(rank))
    G = transpose(sub.basis)  # columns are the basis vectors
    D, U, _V, Ui, _Vi = snf(G, rank, r)
    if any(D[i][i] != 1 for i in range(r)):
        raise LatticeError("sublattice not saturated")
    projection = tuple(U[i] for i in range(r, rank))
    section = tuple(tuple(Ui[i][j] for j in range(r, rank)) for i in range(rank))
    return QuotientPresentation(projection, section)


def extend_hom(sub, values):
    """Extend a functional on a saturated sublattice to all of Z^n.

    values are taken on the rows of sub.basis; the extension is pinned
    deterministically by zeroing the complement coordinates in the
    SNF-completed basis.
    """
    n = sub.ambient_rank
    r = sub.rank
    if r == 0:
        return (0,) * n
    if len(values) != r:
        raise LatticeError("value count does not match the basis")
    if not sub.is_saturated():
        raise LatticeError("sublattice not saturated")
    G = transpose(sub.basis)
    D, U, V, _Ui, _Vi = snf(G, n, r)
    if any(D[i][i] != 1 for i in range(r)):
        raise LatticeError("sublattice not saturated")
    vv = tuple(sum(values[i] * V[i][j] for i in range(r)) for j in range(r))
    g = vv + (0,) * (n - r)
    f = tuple(sum(g[i] * U[i][j] for i in range(n)) for j in range(n))
    for row, val in zip(sub.basis, values):
        assert dot(f, row) == val
    return f
