"""Exact sparse linear algebra over a coefficient field.

Matrices are stored as dicts mapping (row, col) to a nonzero scalar and act
on column vectors.  Subspaces are kept as reduced column echelon bases with
strictly increasing pivot rows, which makes the representation canonical:
two subspaces are equal exactly when their stored bases are identical.

Elimination routes: prime fields go through a vectorized dense routine on
int64 arrays (residue products stay far below 2^63), rationals use a dense
pass below DENSE_COLUMN_LIMIT columns and a dict-based sparse pass above it,
with pivots chosen by smallest bit size to damp coefficient growth.
"""

import numpy as np

from .errors import (
    AmbientMismatch,
    MixedFields,
    NotASubspace,
    NotWellDefined,
    ParseError,
)
from .fields import FieldElement, PrimeField, parse_field_token

DENSE_COLUMN_LIMIT = 64


class Matrix:
    """Sparse exact matrix; absent entries are zero, stored ones never are."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field, rows, cols, entries=None):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix dimensions")
        self.field = field
        self.rows = rows
        self.cols = cols
        clean = {}
        for (i, j), val in (entries or {}).items():
            if not isinstance(val, FieldElement):
                val = field.element(val)
            elif val.field != field:
                raise MixedFields(f"entry from {val.field}, matrix over {field}")
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i},{j}) outside {rows}x{cols}")
            if val:
                clean[(i, j)] = val
        self.entries = clean

    @classmethod
    def zeros(cls, field, rows, cols):
        return cls(field, rows, cols)

    @classmethod
    def identity(cls, field, n):
        one = field.one
        return cls(field, n, n, {(i, i): one for i in range(n)})

    @classmethod
    def from_rows(cls, field, rows_data):
        rows = len(rows_data)
        cols = len(rows_data[0]) if rows else 0
        entries = {}
        for i, row in enumerate(rows_data):
            if len(row) != cols:
                raise ValueError("ragged row data")
            for j, val in enumerate(row):
                entries[(i, j)] = val
        return cls(field, rows, cols, entries)

    @classmethod
    def from_column_dicts(cls, field, rows, columns):
        entries = {}
        for j, col in enumerate(columns):
            for i, val in col.items():
                entries[(i, j)] = val
        return cls(field, rows, len(columns), entries)

    def entry(self, i, j):
        return self.entries.get((i, j), self.field.zero)

    def column_dict(self, j):
        return {i: v for (i, jj), v in self.entries.items() if jj == j}

    def column_dicts(self):
        cols = [dict() for _ in range(self.cols)]
        for (i, j), v in self.entries.items():
            cols[j][i] = v
        return cols

    def apply(self, vec):
        """Image of a column vector given as a dict {row: scalar}."""
        out = {}
        for j, f in vec.items():
            if not f:
                continue
            for i, v in self._column_index().get(j, ()):
                cur = out.get(i)
                cur = cur + f * v if cur is not None else f * v
                if cur:
                    out[i] = cur
                else:
                    out.pop(i, None)
        return out

    def _column_index(self):
        index = {}
        for (i, j), v in self.entries.items():
            index.setdefault(j, []).append((i, v))
        return index

    def __matmul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.field != other.field:
            raise MixedFields("matrix product across fields")
        if self.cols != other.rows:
            raise AmbientMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        index = self._column_index()
        entries = {}
        for (k, j), w in other.entries.items():
            for i, v in index.get(k, ()):
                key = (i, j)
                cur = entries.get(key)
                cur = cur + v * w if cur is not None else v * w
                if cur:
                    entries[key] = cur
                else:
                    entries.pop(key, None)
        out = Matrix(self.field, self.rows, other.cols)
        out.entries = entries
        return out

    def _same_shape(self, other):
        if self.field != other.field:
            raise MixedFields("mixed-field matrix arithmetic")
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise AmbientMismatch("matrix shapes differ")

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._same_shape(other)
        entries = dict(self.entries)
        for key, v in other.entries.items():
            cur = entries.get(key)
            cur = cur + v if cur is not None else v
            if cur:
                entries[key] = cur
            else:
                entries.pop(key, None)
        out = Matrix(self.field, self.rows, self.cols)
        out.entries = entries
        return out

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        out = Matrix(self.field, self.rows, self.cols)
        out.entries = {key: -v for key, v in self.entries.items()}
        return out

    def scale(self, scalar):
        if not isinstance(scalar, FieldElement):
            scalar = self.field.element(scalar)
        out = Matrix(self.field, self.rows, self.cols)
        if scalar:
            out.entries = {key: scalar * v for key, v in self.entries.items()}
        return out

    def transpose(self):
        out = Matrix(self.field, self.cols, self.rows)
        out.entries = {(j, i): v for (i, j), v in self.entries.items()}
        return out

    @property
    def is_zero(self):
        return not self.entries

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"<Matrix {self.rows}x{self.cols} over {self.field}, {len(self.entries)} nonzero>"

    def render_text(self):
        """Rows between '|' delimiters, entries right-aligned per column."""
        cells = [
            [self.field.render(self.entry(i, j)) for j in range(self.cols)]
            for i in range(self.rows)
        ]
        widths = [
            max((len(cells[i][j]) for i in range(self.rows)), default=0)
            for j in range(self.cols)
        ]
        lines = []
        for i in range(self.rows):
            body = " ".join(cells[i][j].rjust(widths[j]) for j in range(self.cols))
            lines.append(f"| {body} |" if self.cols else "| |")
        return "\n".join(lines)


def hstack(mats):
    field = mats[0].field
    rows = mats[0].rows
    entries = {}
    offset = 0
    for m in mats:
        if m.field != field:
            raise MixedFields("hstack across fields")
        if m.rows != rows:
            raise AmbientMismatch("hstack row mismatch")
        for (i, j), v in m.entries.items():
            entries[(i, j + offset)] = v
        offset += m.cols
    out = Matrix(field, rows, offset)
    out.entries = entries
    return out


def render_matrix_machine(m):
    """Triplet form: header "rows cols field", one "i j scalar" line per entry."""
    lines = [f"{m.rows} {m.cols} {m.field.token()}"]
    for (i, j) in sorted(m.entries):
        lines.append(f"{i} {j} {m.field.render(m.entries[(i, j)])}")
    lines.append("end")
    return "\n".join(lines)


def parse_matrix_machine(lines, start=0):
    """Inverse of render_matrix_machine; returns (matrix, index after 'end')."""
    if start >= len(lines):
        raise ParseError("missing matrix header", line=start + 1)
    head = lines[start].split()
    if len(head) != 3:
        raise ParseError(f"bad matrix header {lines[start]!r}", line=start + 1)
    try:
        rows, cols = int(head[0]), int(head[1])
    except ValueError:
        raise ParseError(f"bad matrix header {lines[start]!r}", line=start + 1) from None
    field = parse_field_token(head[2])
    entries = {}
    i = start + 1
    while True:
        if i >= len(lines):
            raise ParseError("matrix block not closed with 'end'", line=len(lines))
        text = lines[i].strip()
        i += 1
        if text == "end":
            break
        parts = text.split()
        if len(parts) != 3:
            raise ParseError(f"bad matrix entry {text!r}", line=i)
        try:
            r, c = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"bad matrix entry {text!r}", line=i) from None
        entries[(r, c)] = field.parse(parts[2])
    try:
        return Matrix(field, rows, cols, entries), i
    except IndexError as exc:
        raise ParseError(str(exc), line=start + 1) from None


# ---------------------------------------------------------------------------
# elimination engines


def _bits(element):
    v = element.value
    return v.numerator.bit_length() + v.denominator.bit_length()


def _np_from_cols(columns, rows, p):
    A = np.zeros((rows, len(columns)), dtype=np.int64)
    for j, col in enumerate(columns):
        for i, v in col.items():
            A[i, j] = v.value % p
    return A


def _np_rcef(A, p, scan_rows=None):
    A = A % p
    nrows, ncols = A.shape
    scan = nrows if scan_rows is None else scan_rows
    pivots = []
    r = 0
    for row in range(scan):
        if r == ncols:
            break
        nz = np.nonzero(A[row, r:])[0]
        if nz.size == 0:
            continue
        j = r + int(nz[0])
        if j != r:
            A[:, [r, j]] = A[:, [j, r]]
        inv = pow(int(A[row, r]), p - 2, p)
        if inv != 1:
            A[:, r] = A[:, r] * inv % p
        coeffs = A[row].copy()
        coeffs[r] = 0
        if np.any(coeffs):
            A = (A - np.outer(A[:, r], coeffs)) % p
        pivots.append(row)
        r += 1
    return A, pivots


def _np_to_cols(field, A, count):
    columns = []
    for j in range(count):
        nz = np.nonzero(A[:, j])[0]
        columns.append({int(i): field.element(int(A[i, j])) for i in nz})
    return columns


def _np_from_matrix(m, p):
    A = np.zeros((m.rows, m.cols), dtype=np.int64)
    for (i, j), v in m.entries.items():
        A[i, j] = v.value % p
    return A


def _np_matmul(A, B, p):
    """A @ B mod p, chunked so int64 accumulators cannot overflow."""
    inner = A.shape[1]
    if inner == 0 or B.shape[1] == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    step = max(1, (1 << 62) // ((p - 1) ** 2))
    if inner <= step:
        return (A @ B) % p
    acc = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for s in range(0, inner, step):
        acc = (acc + A[:, s : s + step] @ B[s : s + step, :]) % p
    return acc


def _np_residuals(B, pivots, V, p):
    """Columns of V reduced modulo an RCEF basis B with the given pivot rows.

    Because pivot rows of B form an identity block, the readoff is a single
    slice, not a sequential elimination.
    """
    if B.shape[1] == 0 or V.shape[1] == 0:
        return V % p
    coords = V[list(pivots), :] % p
    return (V - _np_matmul(B, coords, p)) % p


def _py_rcef(field, columns, scan_rows, rational_pivots):
    cols = [dict(c) for c in columns]
    pivots = []
    r = 0
    for row in range(scan_rows):
        if r == len(cols):
            break
        cands = [j for j in range(r, len(cols)) if row in cols[j]]
        if not cands:
            continue
        if rational_pivots and len(cands) > 1:
            j = min(cands, key=lambda jj: _bits(cols[jj][row]))
        else:
            j = cands[0]
        cols[r], cols[j] = cols[j], cols[r]
        piv = cols[r]
        pv = piv[row]
        if pv.value != 1:
            inv = pv.inverse()
            for k in list(piv):
                piv[k] = piv[k] * inv
        for j2 in range(len(cols)):
            if j2 == r:
                continue
            other = cols[j2]
            f = other.get(row)
            if f is None:
                continue
            for k, v in piv.items():
                cur = other.get(k)
                cur = cur - f * v if cur is not None else -(f * v)
                if cur:
                    other[k] = cur
                else:
                    other.pop(k, None)
        pivots.append(row)
        r += 1
    return cols, pivots


def _py_rcef_dense(field, columns, nrows, scan_rows, rational_pivots):
    zero = field.zero
    cols = []
    for col in columns:
        dense = [zero] * nrows
        for i, v in col.items():
            dense[i] = v
        cols.append(dense)
    pivots = []
    r = 0
    for row in range(scan_rows):
        if r == len(cols):
            break
        cands = [j for j in range(r, len(cols)) if cols[j][row]]
        if not cands:
            continue
        if rational_pivots and len(cands) > 1:
            j = min(cands, key=lambda jj: _bits(cols[jj][row]))
        else:
            j = cands[0]
        cols[r], cols[j] = cols[j], cols[r]
        piv = cols[r]
        pv = piv[row]
        if pv.value != 1:
            inv = pv.inverse()
            piv = cols[r] = [x * inv if x else x for x in piv]
        for j2 in range(len(cols)):
            if j2 == r:
                continue
            other = cols[j2]
            f = other[row]
            if not f:
                continue
            cols[j2] = [a - f * b if b else a for a, b in zip(other, piv)]
        pivots.append(row)
        r += 1
    sparse = [{i: v for i, v in enumerate(col) if v} for col in cols]
    return sparse, pivots


def _rcef_columns(field, columns, nrows, scan_rows=None):
    """Canonical reduced column echelon.  Returns (pivot columns, pivots)."""
    scan = nrows if scan_rows is None else scan_rows
    if isinstance(field, PrimeField):
        p = field.characteristic
        A = _np_from_cols(columns, nrows, p)
        E, pivots = _np_rcef(A, p, scan_rows=scan)
        return _np_to_cols(field, E, len(pivots)), pivots
    if len(columns) <= DENSE_COLUMN_LIMIT:
        cols, pivots = _py_rcef_dense(field, columns, nrows, scan, True)
    else:
        cols, pivots = _py_rcef(field, columns, scan, True)
    return cols[: len(pivots)], pivots


def _kernel_columns(field, columns, nrows):
    """Canonical basis for the kernel of the map sending e_j to columns[j]."""
    ncols = len(columns)
    if isinstance(field, PrimeField):
        p = field.characteristic
        A = _np_from_cols(columns, nrows, p)
        B = np.vstack([A, np.eye(ncols, dtype=np.int64)])
        E, pivots = _np_rcef(B, p, scan_rows=nrows)
        K = E[nrows:, len(pivots):]
        KE, kp = _np_rcef(K, p)
        return _np_to_cols(field, KE, len(kp)), kp
    one = field.one
    stacked = []
    for j, col in enumerate(columns):
        ext = dict(col)
        ext[nrows + j] = one
        stacked.append(ext)
    if ncols <= DENSE_COLUMN_LIMIT:
        cols, pivots = _py_rcef_dense(field, stacked, nrows + ncols, nrows, True)
    else:
        cols, pivots = _py_rcef(field, stacked, nrows, True)
    raw = [
        {i - nrows: v for i, v in col.items() if i >= nrows}
        for col in cols[len(pivots):]
    ]
    return _rcef_columns(field, raw, ncols)


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """Linear subspace of k^n held as a canonical reduced column echelon basis."""

    __slots__ = ("field", "ambient_dim", "basis_columns", "pivots")

    def __init__(self, field, ambient_dim, basis_columns, pivots):
        self.field = field
        self.ambient_dim = ambient_dim
        self.basis_columns = tuple(basis_columns)
        self.pivots = tuple(pivots)

    @classmethod
    def zero(cls, field, ambient_dim):
        return cls(field, ambient_dim, (), ())

    @classmethod
    def full(cls, field, ambient_dim):
        one = field.one
        return cls(
            field,
            ambient_dim,
            tuple({i: one} for i in range(ambient_dim)),
            tuple(range(ambient_dim)),
        )

    @classmethod
    def spanned_by_columns(cls, field, ambient_dim, columns):
        columns = [c for c in columns if c]
        for col in columns:
            for i in col:
                if not 0 <= i < ambient_dim:
                    raise AmbientMismatch(f"coordinate {i} outside k^{ambient_dim}")
        # unit-vector spans come up constantly (coordinate filtrations); skip
        # elimination when the columns are visibly already an echelon basis
        if all(len(c) == 1 for c in columns):
            rows = {next(iter(c)) for c in columns}
            if len(rows) == len(columns):
                one = field.one
                ordered = sorted(rows)
                return cls(field, ambient_dim, tuple({i: one} for i in ordered), tuple(ordered))
        cols, pivots = _rcef_columns(field, columns, ambient_dim)
        return cls(field, ambient_dim, cols, pivots)

    @classmethod
    def spanned_by(cls, matrix):
        return cls.spanned_by_columns(matrix.field, matrix.rows, matrix.column_dicts())

    @property
    def dim(self):
        return len(self.pivots)

    @property
    def is_zero(self):
        return not self.pivots

    @property
    def is_full(self):
        return len(self.pivots) == self.ambient_dim

    def basis_matrix(self):
        return Matrix.from_column_dicts(self.field, self.ambient_dim, self.basis_columns)

    def reduce(self, vec):
        """Echelon readoff: coordinates along the basis plus the residual."""
        vec = {i: v for i, v in vec.items() if v}
        coords = []
        for col, pr in zip(self.basis_columns, self.pivots):
            f = vec.get(pr)
            if f is None:
                coords.append(self.field.zero)
                continue
            coords.append(f)
            for k, v in col.items():
                cur = vec.get(k)
                cur = cur - f * v if cur is not None else -(f * v)
                if cur:
                    vec[k] = cur
                else:
                    vec.pop(k, None)
        return coords, vec

    def contains_vector(self, vec):
        _, residual = self.reduce(vec)
        return not residual

    def contains(self, other):
        if other.ambient_dim != self.ambient_dim:
            raise AmbientMismatch("containment across different ambient spaces")
        return all(self.contains_vector(c) for c in other.basis_columns)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.ambient_dim == other.ambient_dim
            and self.pivots == other.pivots
            and self.basis_columns == other.basis_columns
        )

    def __repr__(self):
        return f"<Subspace dim {self.dim} of k^{self.ambient_dim} over {self.field}>"


def _check_pair(a, b):
    if a.field != b.field:
        raise MixedFields("subspaces over different fields")
    if a.ambient_dim != b.ambient_dim:
        raise AmbientMismatch("subspaces of different ambient spaces")


def echelonize(m):
    """Reduced column echelon form with the same shape; returns (matrix, rank)."""
    cols, pivots = _rcef_columns(m.field, m.column_dicts(), m.rows)
    out = Matrix.from_column_dicts(m.field, m.rows, cols)
    out.cols = m.cols
    return out, len(pivots)


def rank(m):
    return echelonize(m)[1]


def image(m):
    return Subspace.spanned_by(m)


def kernel(m):
    cols, pivots = _kernel_columns(m.field, m.column_dicts(), m.rows)
    return Subspace(m.field, m.cols, cols, pivots)


def subspace_sum(a, b):
    _check_pair(a, b)
    return Subspace.spanned_by_columns(
        a.field, a.ambient_dim, list(a.basis_columns) + list(b.basis_columns)
    )


def intersect(a, b):
    _check_pair(a, b)
    if a.is_full:
        return b
    if b.is_full:
        return a
    if a.is_zero or b.is_zero:
        return Subspace.zero(a.field, a.ambient_dim)
    acols = list(a.basis_columns)
    combined = acols + list(b.basis_columns)
    kern, _ = _kernel_columns(a.field, combined, a.ambient_dim)
    vectors = []
    for col in kern:
        vec = {}
        for j, f in col.items():
            if j >= len(acols):
                continue
            for i, v in acols[j].items():
                cur = vec.get(i)
                cur = cur + f * v if cur is not None else f * v
                if cur:
                    vec[i] = cur
                else:
                    vec.pop(i, None)
        if vec:
            vectors.append(vec)
    return Subspace.spanned_by_columns(a.field, a.ambient_dim, vectors)


def preimage(m, w):
    """Subspace of the source sent into w by m."""
    if m.field != w.field:
        raise MixedFields("preimage across fields")
    if m.rows != w.ambient_dim:
        raise AmbientMismatch("preimage target dimension mismatch")
    if w.is_full:
        return Subspace.full(m.field, m.cols)
    cols = m.column_dicts()
    shifted = [
        {i: -v for i, v in col.items()} for col in w.basis_columns
    ]
    kern, _ = _kernel_columns(m.field, cols + shifted, m.rows)
    projected = [
        {j: f for j, f in col.items() if j < m.cols} for col in kern
    ]
    return Subspace.spanned_by_columns(m.field, m.cols, [c for c in projected if c])


class QuotientPresentation:
    """Subquotient v/w presented on an explicit basis of representatives.

    Representatives are ambient vectors obtained by reducing the echelon
    basis of v modulo w and re-echelonizing, so the presentation is
    canonical for the pair (v, w).
    """

    __slots__ = ("field", "ambient_dim", "space", "relations", "rep_columns", "rep_pivots")

    def __init__(self, space, relations, rep_columns, rep_pivots):
        self.field = space.field
        self.ambient_dim = space.ambient_dim
        self.space = space
        self.relations = relations
        self.rep_columns = tuple(rep_columns)
        self.rep_pivots = tuple(rep_pivots)

    @property
    def dim(self):
        return len(self.rep_columns)

    @property
    def reps(self):
        return Matrix.from_column_dicts(self.field, self.ambient_dim, self.rep_columns)

    def coordinates(self, vec):
        """Class coordinates of an ambient vector lying in the numerator."""
        _, partial = self.relations.reduce(vec)
        helper = Subspace(self.field, self.ambient_dim, self.rep_columns, self.rep_pivots)
        coords, residual = helper.reduce(partial)
        if residual:
            raise NotASubspace("vector outside the presented subquotient")
        return coords

    def __eq__(self, other):
        return (
            isinstance(other, QuotientPresentation)
            and self.space == other.space
            and self.relations == other.relations
            and self.rep_columns == other.rep_columns
        )

    def __repr__(self):
        return f"<QuotientPresentation dim {self.dim} in k^{self.ambient_dim}>"


def quotient(v, w):
    """Present v/w; raises NotASubspace unless w is contained in v."""
    _check_pair(v, w)
    if w.is_zero:
        return QuotientPresentation(v, w, v.basis_columns, v.pivots)
    if v.field.kind == "prime" and v.ambient_dim:
        p = v.field.characteristic
        B = _np_from_cols(w.basis_columns, w.ambient_dim, p)
        V = _np_from_cols(v.basis_columns, v.ambient_dim, p)
        if np.any(_np_residuals(V, v.pivots, B, p)):
            raise NotASubspace("denominator not contained in numerator")
        R = _np_residuals(B, w.pivots, V, p)
        E, piv = _np_rcef(R, p)
        if len(piv) != v.dim - w.dim:
            raise NotASubspace("inconsistent quotient dimensions")
        reps = _np_to_cols(v.field, E, len(piv))
        return QuotientPresentation(v, w, reps, tuple(piv))
    if not v.contains(w):
        raise NotASubspace("denominator not contained in numerator")
    residuals = []
    for col in v.basis_columns:
        _, res = w.reduce(col)
        if res:
            residuals.append(res)
    comp = Subspace.spanned_by_columns(v.field, v.ambient_dim, residuals)
    if comp.dim != v.dim - w.dim:
        raise NotASubspace("inconsistent quotient dimensions")
    return QuotientPresentation(v, w, comp.basis_columns, comp.pivots)


def induced_map(m, src, tgt):
    """Matrix of the map that m induces between two quotient presentations."""
    if m.field != src.field or m.field != tgt.field:
        raise MixedFields("induced map across fields")
    if m.cols != src.ambient_dim or m.rows != tgt.ambient_dim:
        raise AmbientMismatch("induced map shape mismatch")
    if m.field.kind == "prime":
        return _np_induced_map(m, src, tgt)
    for col in src.relations.basis_columns:
        if not tgt.relations.contains_vector(m.apply(col)):
            raise NotWellDefined("relations are not carried into relations")
    entries = {}
    for j, rep in enumerate(src.rep_columns):
        y = m.apply(rep)
        try:
            coords = tgt.coordinates(y)
        except NotASubspace:
            raise NotWellDefined("image leaves the target subquotient") from None
        for i, c in enumerate(coords):
            if c:
                entries[(i, j)] = c
    return Matrix(m.field, tgt.dim, src.dim, entries)


def _np_induced_map(m, src, tgt):
    p = m.field.characteristic
    M = _np_from_matrix(m, p)
    trel = tgt.relations
    B_t = _np_from_cols(trel.basis_columns, trel.ambient_dim, p)
    if src.relations.dim:
        B_s = _np_from_cols(
            src.relations.basis_columns, src.relations.ambient_dim, p
        )
        Y = _np_residuals(B_t, trel.pivots, _np_matmul(M, B_s, p), p)
        if np.any(Y):
            raise NotWellDefined("relations are not carried into relations")
    if src.dim == 0:
        return Matrix.zeros(m.field, tgt.dim, 0)
    R = _np_from_cols(src.rep_columns, src.ambient_dim, p)
    Y = _np_residuals(B_t, trel.pivots, _np_matmul(M, R, p), p)
    if tgt.dim:
        T = _np_from_cols(tgt.rep_columns, tgt.ambient_dim, p)
        coords = Y[list(tgt.rep_pivots), :] % p
        Y = (Y - _np_matmul(T, coords, p)) % p
    else:
        coords = np.zeros((0, src.dim), dtype=np.int64)
    if np.any(Y):
        raise NotWellDefined("image leaves the target subquotient")
    entries = {}
    for i, j in zip(*np.nonzero(coords)):
        entries[(int(i), int(j))] = m.field.element(int(coords[i, j]))
    return Matrix(m.field, tgt.dim, src.dim, entries)


def apply_to_subspace(m, sub):
    """The image of a subspace of the source of m, as a subspace of its target."""
    if m.cols != sub.ambient_dim:
        raise AmbientMismatch("matrix does not act on this ambient space")
    if m.field != sub.field:
        raise MixedFields("matrix and subspace over different fields")
    if sub.is_zero or m.is_zero:
        return Subspace.zero(m.field, m.rows)
    if m.field.kind == "prime":
        p = m.field.characteristic
        M = _np_from_matrix(m, p)
        S = _np_from_cols(sub.basis_columns, sub.ambient_dim, p)
        E, piv = _np_rcef(_np_matmul(M, S, p), p)
        cols = _np_to_cols(m.field, E, len(piv))
        return Subspace(m.field, m.rows, tuple(cols), tuple(piv))
    cols = [m.apply(c) for c in sub.basis_columns]
    return Subspace.spanned_by_columns(m.field, m.rows, cols)
