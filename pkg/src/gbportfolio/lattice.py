"""Exact integer linear algebra: column Hermite normal form and lattice kernels.

Everything here works on lists of Python ints, so there is no overflow.
"""

from .errors import RankDeficient


def _xgcd(a, b):
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def column_hnf(A):
    """Column-style Hermite normal form.

    Returns ``(H, U, pivots)`` with ``H = A U``, ``U`` unimodular (N x N),
    ``H`` lower echelon: column k has its first nonzero entry in row
    ``pivots[k]`` (strictly increasing), it is positive, and entries to the
    left of each pivot in the same row are reduced into ``[0, pivot)``.
    Columns ``len(pivots):`` of ``H`` are zero.
    """
    m = len(A)
    N = len(A[0]) if m else 0
    # work column-major: cols[j] is column j of the current H
    cols = [[int(A[i][j]) for i in range(m)] for j in range(N)]
    ucols = [[int(i == j) for i in range(N)] for j in range(N)]
    pivots = []
    k = 0
    for i in range(m):
        if k == N:
            break
        for j in range(k + 1, N):
            b = cols[j][i]
            if b == 0:
                continue
            a = cols[k][i]
            g, s, t = _xgcd(a, b)
            if a == 0:
                p, q = 0, 1
            else:
                p, q = a // g, b // g
            # [col_k, col_j] <- [s*col_k + t*col_j, -q*col_k + p*col_j]
            ck, cj = cols[k], cols[j]
            cols[k] = [s * x + t * y for x, y in zip(ck, cj)]
            cols[j] = [-q * x + p * y for x, y in zip(ck, cj)]
            uk, uj = ucols[k], ucols[j]
            ucols[k] = [s * x + t * y for x, y in zip(uk, uj)]
            ucols[j] = [-q * x + p * y for x, y in zip(uk, uj)]
        piv = cols[k][i]
        if piv == 0:
            continue
        if piv < 0:
            cols[k] = [-x for x in cols[k]]
            ucols[k] = [-x for x in ucols[k]]
            piv = -piv
        for j in range(k):
            f = cols[j][i] // piv
            if f:
                cols[j] = [x - f * y for x, y in zip(cols[j], cols[k])]
                ucols[j] = [x - f * y for x, y in zip(ucols[j], ucols[k])]
        pivots.append(i)
        k += 1
    H = [[cols[j][i] for j in range(N)] for i in range(m)]
    U = [[ucols[j][i] for j in range(N)] for i in range(N)]
    return H, U, pivots


def lattice_kernel_basis(A):
    """Basis of ker_Z(A) for a full-row-rank integer matrix A.

    The returned vectors are the trailing columns of the unimodular
    transform that brings A to column HNF, so they span the full integer
    kernel (not just a finite-index sublattice).
    """
    m = len(A)
    if m == 0:
        raise ValueError("empty matrix")
    N = len(A[0])
    H, U, pivots = column_hnf(A)
    if len(pivots) < m:
        raise RankDeficient(f"matrix has rank {len(pivots)} < {m} rows")
    r = len(pivots)
    basis = [[U[i][j] for i in range(N)] for j in range(r, N)]
    for v in basis:
        assert all(sum(A[i][c] * v[c] for c in range(N)) == 0 for i in range(m))
    return basis


def kernel_membership(A, v):
    return all(sum(int(a) * int(x) for a, x in zip(row, v)) == 0 for row in A)


def same_lattice(basis1, basis2):
    """True when both integer bases generate the same lattice."""
    if len(basis1) != len(basis2):
        return False
    if not basis1:
        return True
    return _row_hnf(basis1) == _row_hnf(basis2)


def _row_hnf(vectors):
    # row HNF of the generators == column HNF of the transpose, transposed back
    N = len(vectors[0])
    At = [[vectors[r][c] for r in range(len(vectors))] for c in range(N)]
    H, _, pivots = column_hnf(At)
    return [tuple(H[i][k] for i in range(N)) for k in range(len(pivots))]
