"""Exact linear algebra: reduced row echelon elimination over any exact field
(Gaussian rationals or rational-function fields) and Smith normal form over
the integers (with unimodular transforms)."""

from __future__ import annotations

from .scalars import ExactScalar, ONE, ZERO


def _fieldify(v):
    """Accept any field element exposing is_zero/inverse/conj arithmetic."""
    if hasattr(v, "is_zero") and hasattr(v, "inverse"):
        return v
    return ExactScalar.coerce(v)


def _coerce_row(row):
    return [_fieldify(v) for v in row]


def rref(rows):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    m = [_coerce_row(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(m)):
            if not m[i][c].is_zero():
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = m[r][c].inverse()
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and not m[i][c].is_zero():
                factor = m[i][c]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows):
    return len(rref(rows)[1])


def kernel_basis(rows, ncols=None):
    """Basis of the right kernel (list of column vectors)."""
    if ncols is None:
        if not rows:
            raise ValueError("ncols required for empty matrix")
        ncols = len(rows[0])
    if not rows:
        return [[ONE if i == j else ZERO for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [ZERO] * ncols
        vec[fc] = ONE
        for r, pc in enumerate(pivots):
            vec[pc] = -red[r][fc]
        basis.append(vec)
    return basis


def solve_linear(rows, rhs):
    """One solution of A x = b over the scalar field, or None."""
    if not rows:
        return None if any(not _fieldify(v).is_zero() for v in rhs) else []
    ncols = len(rows[0])
    aug = [_coerce_row(r) + [_fieldify(b)] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None  # inconsistent
    x = [ZERO] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    return x


def column_space_completion(image_cols, candidate_cols, nrows):
    """Indices of candidates that extend span(image_cols) to a larger space."""
    chosen = []
    current = [list(col) for col in image_cols]
    base_rank = rank(_transpose(current, nrows)) if current else 0
    for idx, cand in enumerate(candidate_cols):
        trial = current + [list(cand)]
        if rank(_transpose(trial, nrows)) > base_rank:
            chosen.append(idx)
            current = trial
            base_rank += 1
    return chosen


def _transpose(cols, nrows):
    return [[cols[j][i] for j in range(len(cols))] for i in range(nrows)]


def matvec(rows, vec):
    return [sum((_fieldify(a) * _fieldify(v)
                 for a, v in zip(row, vec)), ZERO) for row in rows]


# ---------------------------------------------------------------------------
# integer Smith normal form
# ---------------------------------------------------------------------------

def smith_normal_form(matrix):
    """U @ A @ V = S diagonal with d_i | d_{i+1}; U, V unimodular.

    Returns (U, S, V, rank) with plain int entries.
    """
    a = [[int(v) for v in row] for row in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, k):
        for row in a:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while t < min(m, n):
        # find a nonzero pivot in the trailing block
        pivot = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < best):
                    best = abs(a[i][j])
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            # clear column t
            dirty = False
            for i in range(t + 1, m):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    add_row(i, t, -q)
                    if a[i][t] != 0:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    add_col(j, t, -q)
                    if a[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
            if not dirty:
                break
        if a[t][t] < 0:
            negate_row(t)
        # enforce divisibility d_t | trailing entries
        fixed = True
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if a[i][j] % a[t][t] != 0:
                    add_row(t, i, 1)
                    fixed = False
                    break
            if not fixed:
                break
        if fixed:
            t += 1
    s_rank = sum(1 for i in range(min(m, n)) if a[i][i] != 0)
    return u, a, v, s_rank


def integer_kernel_basis(matrix):
    """Basis of the integer kernel lattice of A (list of int vectors)."""
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    if m == 0:
        return [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    _, s, v, r = smith_normal_form(matrix)
    # kernel = V * (last n-r unit vectors)
    return [[v[i][j] for i in range(n)] for j in range(r, n)]
