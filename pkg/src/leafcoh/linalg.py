"""Exact sparse linear algebra over the Gaussian rationals.

Everything reduces to one deterministic Gauss-Jordan elimination: columns are
scanned in ascending order and, among the not-yet-pivoted rows, the lowest
row index supplies the pivot.  Fractions are normalised at every step (the
Fraction type reduces by gcd), so results are exact and reproducible across
platforms; there is no floating point anywhere.

Matrices are sparse maps (row, col) -> scalar; vectors are dense tuples.
"""

from __future__ import annotations

from .algebra import GaussianRational, ONE, ZERO


class LinearAlgebraError(ValueError):
    pass


class Matrix:
    """A rows x cols matrix with a sparse entry map; no zero entries stored."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries=None):
        if rows < 0 or cols < 0:
            raise LinearAlgebraError("negative matrix dimensions")
        self.rows = rows
        self.cols = cols
        clean = {}
        for (r, c), v in (entries or {}).items():
            if not 0 <= r < rows or not 0 <= c < cols:
                raise LinearAlgebraError(f"entry ({r},{c}) out of bounds {rows}x{cols}")
            if not isinstance(v, GaussianRational):
                v = GaussianRational(v)
            if v:
                clean[(r, c)] = v
        self.entries = clean

    @classmethod
    def zero(cls, rows, cols):
        return cls(rows, cols)

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): ONE for i in range(n)})

    @classmethod
    def from_columns(cls, columns, rows: int):
        entries = {}
        for j, col in enumerate(columns):
            for i, v in enumerate(col):
                if v:
                    entries[(i, j)] = v
        return cls(rows, len(columns), entries)

    @classmethod
    def from_rows_list(cls, data):
        rows = len(data)
        cols = len(data[0]) if data else 0
        entries = {}
        for i, row in enumerate(data):
            for j, v in enumerate(row):
                entries[(i, j)] = v if isinstance(v, GaussianRational) else GaussianRational(v)
        return cls(rows, cols, entries)

    def row_dicts(self) -> list:
        rows = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def column(self, j) -> tuple:
        col = [ZERO] * self.rows
        for (r, c), v in self.entries.items():
            if c == j:
                col[r] = v
        return tuple(col)

    def matvec(self, vec) -> tuple:
        if len(vec) != self.cols:
            raise LinearAlgebraError("vector length does not match column count")
        out = [ZERO] * self.rows
        for (r, c), v in self.entries.items():
            x = vec[c]
            if x:
                out[r] = out[r] + v * x
        return tuple(out)

    def mul(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise LinearAlgebraError("shape mismatch in matrix product")
        other_rows = other.row_dicts()
        acc: dict = {}
        for (r, k), v in self.entries.items():
            for c, w in other_rows[k].items():
                key = (r, c)
                s = acc.get(key, ZERO) + v * w
                if s:
                    acc[key] = s
                else:
                    acc.pop(key, None)
        return Matrix(self.rows, other.cols, acc)

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def __neg__(self):
        return Matrix(self.rows, self.cols, {k: -v for k, v in self.entries.items()})

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise LinearAlgebraError("shape mismatch in matrix sum")
        acc = dict(self.entries)
        for k, v in other.entries.items():
            s = acc.get(k, ZERO) + v
            if s:
                acc[k] = s
            else:
                acc.pop(k, None)
        return Matrix(self.rows, self.cols, acc)

    def __sub__(self, other):
        return self + (-other)

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, {len(self.entries)} entries)"


def vstack(top: Matrix, bottom: Matrix) -> Matrix:
    if top.cols != bottom.cols:
        raise LinearAlgebraError("vstack needs equal column counts")
    entries = dict(top.entries)
    for (r, c), v in bottom.entries.items():
        entries[(top.rows + r, c)] = v
    return Matrix(top.rows + bottom.rows, top.cols, entries)


def hstack(left: Matrix, right: Matrix) -> Matrix:
    if left.rows != right.rows:
        raise LinearAlgebraError("hstack needs equal row counts")
    entries = dict(left.entries)
    for (r, c), v in right.entries.items():
        entries[(r, left.cols + c)] = v
    return Matrix(left.rows, left.cols + right.cols, entries)


# ---------------------------------------------------------------------------
# Elimination
# ---------------------------------------------------------------------------


def _gauss_jordan(rows: list, ncols: int) -> list:
    """In-place reduced echelon form on sparse row dicts.

    Returns the pivot columns in order; after the call row i holds pivot i
    with a leading 1 and zeros above and below it.  Pivot choice: ascending
    column, then the lowest remaining row.
    """
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        sel = None
        for i in range(r, nrows):
            if c in rows[i]:
                sel = i
                break
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        piv = rows[r]
        inv = piv[c].inverse()
        if inv != ONE:
            for k in list(piv):
                piv[k] = piv[k] * inv
        for i in range(nrows):
            if i == r:
                continue
            row = rows[i]
            a = row.get(c)
            if a is None:
                continue
            for k, v in piv.items():
                s = row.get(k, ZERO) - a * v
                if s:
                    row[k] = s
                else:
                    row.pop(k, None)
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def rank(M: Matrix) -> int:
    return len(_gauss_jordan(M.row_dicts(), M.cols))


class Subspace:
    """A subspace of coordinate space given by a linearly independent basis."""

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, basis):
        basis = [tuple(v) for v in basis]
        for v in basis:
            if len(v) != ambient_dim:
                raise LinearAlgebraError("basis vector length does not match ambient")
        if basis:
            got = rank(Matrix.from_columns(basis, ambient_dim))
            if got != len(basis):
                raise LinearAlgebraError(
                    f"basis is not independent (rank {got} of {len(basis)})"
                )
        self.ambient_dim = ambient_dim
        self.basis = basis

    @classmethod
    def from_span(cls, vectors, ambient_dim: int) -> "Subspace":
        """Deterministic independent basis of a span (pivot columns kept)."""
        vectors = [tuple(v) for v in vectors]
        if not vectors:
            return cls(ambient_dim, [])
        M = Matrix.from_columns(vectors, ambient_dim)
        keep = _pivot_columns(M)
        return cls(ambient_dim, [vectors[j] for j in keep])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, vec) -> bool:
        if not self.basis:
            return all(not v for v in vec)
        M = Matrix.from_columns(self.basis, self.ambient_dim)
        return solve(M, vec) is not None

    def __repr__(self):
        return f"Subspace(dim {self.dim} of {self.ambient_dim})"


def _pivot_columns(M: Matrix) -> list:
    rows = M.row_dicts()
    return _gauss_jordan(rows, M.cols)


def kernel_basis(M: Matrix) -> Subspace:
    """Null space basis; each vector satisfies M v = 0 exactly.

    Deterministic: one kernel vector per free column, in ascending order.
    """
    rows = M.row_dicts()
    pivots = _gauss_jordan(rows, M.cols)
    pivot_set = set(pivots)
    basis = []
    for j in range(M.cols):
        if j in pivot_set:
            continue
        vec = [ZERO] * M.cols
        vec[j] = ONE
        for i, pc in enumerate(pivots):
            v = rows[i].get(j)
            if v:
                vec[pc] = -v
        basis.append(tuple(vec))
    return Subspace(M.cols, basis)


def solve(M: Matrix, b) -> tuple | None:
    """One exact solution of M x = b, or None when none exists.

    Deterministic: free variables are set to zero.  A None answer is
    certified by the augmented matrix gaining rank.
    """
    if len(b) != M.rows:
        raise LinearAlgebraError("right-hand side length does not match rows")
    rows = M.row_dicts()
    for i, v in enumerate(b):
        if v:
            rows[i][M.cols] = v
    pivots = _gauss_jordan(rows, M.cols)
    nz = len(pivots)
    for row in rows[nz:]:
        if row:
            return None
    x = [ZERO] * M.cols
    for i, pc in enumerate(pivots):
        x[pc] = rows[i].get(M.cols, ZERO)
    return tuple(x)


def column_space(M: Matrix) -> Subspace:
    """Basis of the column space: the original pivot columns."""
    keep = _pivot_columns(M)
    return Subspace(M.rows, [M.column(j) for j in keep])


def quotient_dim(kernel: Subspace, image: Subspace) -> int:
    """dim(kernel / image); verifies image really sits inside the kernel.

    An inclusion failure means the complex is broken (d*d != 0 or budgets
    misconfigured) and raises LinearAlgebraError.
    """
    if kernel.ambient_dim != image.ambient_dim:
        raise LinearAlgebraError("quotient of subspaces of different ambient spaces")
    if image.dim:
        combined = Matrix.from_columns(list(kernel.basis) + list(image.basis), kernel.ambient_dim)
        if rank(combined) != kernel.dim:
            raise LinearAlgebraError(
                "image is not contained in the kernel: broken complex"
            )
    return kernel.dim - image.dim


def span_restricted_to(vectors, keep: list, ambient_dim: int) -> Subspace:
    """Vectors of span(vectors) supported on the coordinates in ``keep``.

    Returns the subspace in the restricted coordinate order keep[0], keep[1],
    ...; used to intersect an image with a smaller budget block.
    """
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        return Subspace(len(keep), [])
    keep_set = set(keep)
    outside = [i for i in range(ambient_dim) if i not in keep_set]
    M = Matrix.from_columns(vectors, ambient_dim)
    restricted_rows = Matrix(
        len(outside),
        len(vectors),
        {
            (ri, j): M.entries[(i, j)]
            for ri, i in enumerate(outside)
            for j in range(len(vectors))
            if (i, j) in M.entries
        },
    )
    combos = kernel_basis(restricted_rows)
    candidates = []
    for c in combos.basis:
        full = M.matvec(c)
        candidates.append(tuple(full[i] for i in keep))
    # input vectors may be dependent, so reduce the candidates to a basis
    return Subspace.from_span(candidates, len(keep))
