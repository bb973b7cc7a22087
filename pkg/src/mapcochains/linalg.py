"""Exact Gaussian elimination over Q and F_p, plus integer Smith normal form.

Dense elimination runs on dtype=object numpy matrices.  Matrices with more
than DENSE_COLUMN_LIMIT columns are routed through a sparse eliminator with
Markowitz-style pivot selection; rank and kernel computations accept either
representation transparently.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .fields import FieldSpec

DENSE_COLUMN_LIMIT = 2000


def rref(a: np.ndarray, field: FieldSpec) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form.

    Args:
        a: matrix (m x n), dtype=object.
        field: coefficient field.

    Returns:
        (R, pivots): R is the fully reduced echelon form, pivots the list of
        pivot column indices (length = rank).
    """
    r = a.copy()
    m, n = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        sel = None
        for i in range(row, m):
            if r[i, col] != 0:
                sel = i
                break
        if sel is None:
            continue
        if sel != row:
            r[[row, sel]] = r[[sel, row]]
        inv = field.inv(r[row, col])
        if inv != 1:
            r[row, :] = [field.mul(inv, x) for x in r[row, :]]
        for i in range(m):
            if i != row and r[i, col] != 0:
                f = r[i, col]
                r[i, :] = [field.sub(x, field.mul(f, y)) for x, y in zip(r[i, :], r[row, :])]
        pivots.append(col)
        row += 1
    return r, pivots


def rank(a: np.ndarray, field: FieldSpec) -> int:
    if a.size == 0:
        return 0
    if a.shape[1] > DENSE_COLUMN_LIMIT:
        return sparse_rank(_to_sparse_rows(a), a.shape[1], field)
    return len(rref(a, field)[1])


def kernel_basis(a: np.ndarray, field: FieldSpec) -> np.ndarray:
    """Basis of the right null space, returned as columns of an (n x k) matrix."""
    m, n = a.shape
    if n == 0:
        return field.zeros(0, 0)
    if m == 0:
        return field.eye(n)
    if n > DENSE_COLUMN_LIMIT:
        return sparse_kernel_basis(_to_sparse_rows(a), n, field)
    r, pivots = rref(a, field)
    free = [j for j in range(n) if j not in pivots]
    out = field.zeros(n, len(free))
    for k, j in enumerate(free):
        out[j, k] = field.one
        for i, pc in enumerate(pivots):
            out[pc, k] = field.neg(r[i, j])
    return out


def column_space_pivots(a: np.ndarray, field: FieldSpec) -> list[int]:
    """Indices of a maximal independent subset of columns."""
    if a.size == 0:
        return []
    return rref(a, field)[1]


def image_basis(a: np.ndarray, field: FieldSpec) -> np.ndarray:
    """Basis of the column space: the pivot columns of a."""
    piv = column_space_pivots(a, field)
    return a[:, piv] if piv else field.zeros(a.shape[0], 0)


def solve(a: np.ndarray, b: np.ndarray, field: FieldSpec) -> np.ndarray:
    """Solve a @ x = b exactly (b may have several columns).

    Raises ValidationError when the system is inconsistent.
    """
    squeeze = b.ndim == 1
    bb = b.reshape(-1, 1) if squeeze else b
    m, n = a.shape
    aug = field.zeros(m, n + bb.shape[1])
    aug[:, :n] = a
    aug[:, n:] = bb
    r, pivots = rref(aug, field)
    for piv in pivots:
        if piv >= n:
            raise ValidationError("inconsistent linear system")
    x = field.zeros(n, bb.shape[1])
    for i, piv in enumerate(pivots):
        x[piv, :] = r[i, n:]
    return x[:, 0] if squeeze else x


def in_column_span(a: np.ndarray, v: np.ndarray, field: FieldSpec) -> bool:
    try:
        solve(a, v, field)
        return True
    except ValidationError:
        return False


def rank_decompose(a: np.ndarray, field: FieldSpec) -> tuple[int, np.ndarray, np.ndarray]:
    """Exact rank together with kernel and image bases.

    Returns:
        (rank, kernel, image): kernel columns span the right null space and
        image columns span the column space, both expressed in the ambient
        coordinates of a.
    """
    ker = kernel_basis(a, field)
    img = image_basis(a, field)
    return img.shape[1], ker, img


def quotient_by_span(span: np.ndarray, field: FieldSpec) -> tuple[list[int], np.ndarray, np.ndarray]:
    """Present the quotient of an ambient space by the column span of `span`.

    Args:
        span: (n x s) matrix whose columns span the subspace to kill.
        field: coefficient field.

    Returns:
        (keep, projection, section): `keep` lists the ambient coordinates that
        represent the quotient basis, `projection` is a (k x n) matrix sending
        a vector to its quotient coordinates, and `section` is the (n x k)
        coordinate inclusion; projection @ section is the identity and
        projection @ span = 0.
    """
    n = span.shape[0]
    if span.size == 0:
        return list(range(n)), field.eye(n), field.eye(n)
    r, pivots = rref(span.T.copy(), field)
    # Rows of r span the subspace; pivot coordinates get eliminated.
    keep = [j for j in range(n) if j not in pivots]
    proj = field.zeros(len(keep), n)
    for k, j in enumerate(keep):
        proj[k, j] = field.one
        # subtracting the span rows moves mass from pivot coords onto keep coords
        for i, piv in enumerate(pivots):
            proj[k, piv] = field.neg(r[i, j])
    section = field.zeros(n, len(keep))
    for k, j in enumerate(keep):
        section[j, k] = field.one
    return keep, proj, section


# -- sparse elimination -------------------------------------------------


def _to_sparse_rows(a: np.ndarray) -> list[dict[int, object]]:
    return [{j: a[i, j] for j in range(a.shape[1]) if a[i, j] != 0} for i in range(a.shape[0])]


def _markowitz_pivot(rows: list[dict[int, object]], col_count: dict[int, int]):
    """Pick (row, col) minimizing (nnz(row)-1)*(nnz(col)-1)."""
    best = None
    best_cost = None
    for i, row in enumerate(rows):
        if not row:
            continue
        rl = len(row) - 1
        for j in row:
            cost = rl * (col_count[j] - 1)
            if best_cost is None or cost < best_cost:
                best, best_cost = (i, j), cost
                if cost == 0:
                    return best
    return best


def sparse_eliminate(rows: list[dict[int, object]], ncols: int, field: FieldSpec):
    """Markowitz-pivoted elimination on dict-of-columns rows.

    Returns:
        (pivot_pairs, eliminated_rows): pivot_pairs is a list of (row, col)
        in elimination order; eliminated_rows the transformed rows, each with
        a unit pivot and zeros below earlier pivots.
    """
    work = [dict(r) for r in rows]
    col_count: dict[int, int] = {}
    for r in work:
        for j in r:
            col_count[j] = col_count.get(j, 0) + 1
    done: list[tuple[int, dict[int, object]]] = []
    pivot_cols: list[int] = []
    active = list(range(len(work)))
    while True:
        live = [work[i] for i in active]
        pick = _markowitz_pivot(live, col_count)
        if pick is None:
            break
        li, pc = pick
        i = active[li]
        row = work[i]
        inv = field.inv(row[pc])
        if inv != 1:
            row = {j: field.mul(inv, v) for j, v in row.items()}
        work[i] = {}
        for j in row:
            col_count[j] -= 1
        active.pop(li)
        for k in active:
            other = work[k]
            f = other.get(pc)
            if f is None or f == 0:
                continue
            for j in other:
                col_count[j] -= 1
            new = dict(other)
            for j, v in row.items():
                w = field.sub(new.get(j, field.zero), field.mul(f, v))
                if w == 0:
                    new.pop(j, None)
                else:
                    new[j] = w
            work[k] = new
            for j in new:
                col_count[j] = col_count.get(j, 0) + 1
        done.append((pc, row))
        pivot_cols.append(pc)
    return pivot_cols, done


def sparse_rank(rows: list[dict[int, object]], ncols: int, field: FieldSpec) -> int:
    return len(sparse_eliminate(rows, ncols, field)[0])


def sparse_kernel_basis(rows: list[dict[int, object]], ncols: int, field: FieldSpec) -> np.ndarray:
    """Kernel basis via back substitution on the sparse echelon rows."""
    pivot_cols, done = sparse_eliminate(rows, ncols, field)
    # Back-substitute so each pivot row has zeros at the other pivot columns.
    pivset = set(pivot_cols)
    reduced: dict[int, dict[int, object]] = {}
    for pc, row in reversed(done):
        new = dict(row)
        for j in list(new):
            if j != pc and j in reduced:
                f = new.pop(j)
                for jj, v in reduced[j].items():
                    w = field.sub(new.get(jj, field.zero), field.mul(f, v))
                    if w == 0:
                        new.pop(jj, None)
                    else:
                        new[jj] = w
        reduced[pc] = new
    free = [j for j in range(ncols) if j not in pivset]
    out = field.zeros(ncols, len(free))
    for k, j in enumerate(free):
        out[j, k] = field.one
        for pc, row in reduced.items():
            if j in row:
                out[pc, k] = field.neg(row[j])
    return out


# -- integer Smith normal form -------------------------------------------


def smith_normal_form(a) -> list[int]:
    """Diagonal of the Smith normal form of an integer matrix.

    Args:
        a: integer matrix as nested lists or dtype=object array.

    Returns:
        Nonnegative diagonal entries d_1 | d_2 | ... (zeros trimmed).
    """
    m0 = [list(map(int, row)) for row in a]
    if not m0 or not m0[0]:
        return []
    rows, cols = len(m0), len(m0[0])
    m = m0
    diag: list[int] = []
    top = 0
    while top < min(rows, cols):
        # find a nonzero entry to move to (top, top)
        piv = None
        for i in range(top, rows):
            for j in range(top, cols):
                if m[i][j] != 0:
                    if piv is None or abs(m[i][j]) < abs(m[piv[0]][piv[1]]):
                        piv = (i, j)
        if piv is None:
            break
        i, j = piv
        m[top], m[i] = m[i], m[top]
        for r in m:
            r[top], r[j] = r[j], r[top]
        while True:
            # clear column
            dirty = False
            for i in range(top + 1, rows):
                if m[i][top] != 0:
                    q = m[i][top] // m[top][top]
                    m[i] = [x - q * y for x, y in zip(m[i], m[top])]
                    if m[i][top] != 0:
                        m[top], m[i] = m[i], m[top]
                        dirty = True
            # clear row
            for j in range(top + 1, cols):
                if m[top][j] != 0:
                    q = m[top][j] // m[top][top]
                    for r in m:
                        r[j] -= q * r[top]
                    if m[top][j] != 0:
                        for r in m:
                            r[top], r[j] = r[j], r[top]
                        dirty = True
            if not dirty:
                break
        diag.append(abs(m[top][top]))
        top += 1
    # enforce divisibility d_i | d_{i+1}
    import math

    changed = True
    while changed:
        changed = False
        for i in range(len(diag) - 1):
            a_, b_ = diag[i], diag[i + 1]
            if a_ and b_ and b_ % a_ != 0:
                g = math.gcd(a_, b_)
                diag[i], diag[i + 1] = g, a_ * b_ // g
                changed = True
    return [d for d in diag if d != 0] + [0] * diag.count(0)
