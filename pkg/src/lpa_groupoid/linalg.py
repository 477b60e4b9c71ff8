"""Exact dense linear algebra over a :class:`~lpa_groupoid.fields.Field`.

Vectors are plain lists of field elements; matrices are lists of rows.
"""

from __future__ import annotations

from .fields import QQ, Field


def rref(rows, field: Field = QQ):
    """Reduced row echelon form. Returns ``(rows, pivot_columns)``."""
    m = [[field(x) for x in row] for row in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = field.one / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows, field: Field = QQ) -> int:
    return len(rref(rows, field)[1])


def nullspace(matrix, field: Field = QQ, ncols: int | None = None):
    """Basis of ``{x : matrix @ x = 0}``."""
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    reduced, pivots = rref(matrix, field) if matrix else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [field.zero] * ncols
        x[f] = field.one
        for row, p in zip(reduced, pivots):
            x[p] = -row[f]
        basis.append(x)
    return basis


def solve(matrix, rhs, field: Field = QQ):
    """One solution of ``matrix @ x = rhs`` or ``None`` when inconsistent."""
    ncols = len(matrix[0]) if matrix else 0
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    reduced, pivots = rref(aug, field)
    if ncols in pivots:
        return None
    x = [field.zero] * ncols
    for row, p in zip(reduced, pivots):
        x[p] = row[-1]
    return x


def span_basis(vectors, field: Field = QQ):
    """Canonical (RREF) basis of the span; equal spans give equal bases."""
    vectors = [v for v in vectors]
    if not vectors:
        return []
    return rref(vectors, field)[0]


def same_span(u, v, field: Field = QQ) -> bool:
    return span_basis(u, field) == span_basis(v, field)


def in_span(vector, basis, field: Field = QQ) -> bool:
    if not basis:
        return not any(vector)
    return rank(list(basis) + [vector], field) == rank(basis, field)


def contains_span(big, small, field: Field = QQ) -> bool:
    r = rank(big, field) if big else 0
    return all((rank(list(big) + [v], field) if big else (1 if any(v) else 0)) == r for v in small)


def intersect_spans(u, v, field: Field = QQ):
    """Basis of span(u) ∩ span(v)."""
    u = span_basis(u, field)
    v = span_basis(v, field)
    if not u or not v:
        return []
    # solve sum a_i u_i - sum b_j v_j = 0
    n = len(u[0])
    cols = [list(x) for x in u] + [[-y for y in x] for x in v]
    matrix = [[cols[j][i] for j in range(len(cols))] for i in range(n)]
    vectors = []
    for sol in nullspace(matrix, field, ncols=len(cols)):
        w = [field.zero] * n
        for a, x in zip(sol[: len(u)], u):
            if a:
                w = [p + a * q for p, q in zip(w, x)]
        vectors.append(w)
    return span_basis(vectors, field)


def matmul(a, b, field: Field = QQ):
    return [[sum((x * y for x, y in zip(row, col)), field.zero) for col in zip(*b)] for row in a]


def determinant(matrix, field: Field = QQ):
    m = [[field(x) for x in row] for row in matrix]
    n = len(m)
    det = field.one
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c]), None)
        if pivot is None:
            return field.zero
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            det = -det
        det *= m[c][c]
        inv = field.one / m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det
