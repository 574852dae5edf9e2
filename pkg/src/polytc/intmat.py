"""Integer matrix normal forms over arbitrary-precision Python ints.

Matrices are lists of row lists. Nothing here ever touches floats.
"""

from __future__ import annotations

from dataclasses import dataclass


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    # x*a + y*b == g, g >= 0
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def hermite_normal_form(rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Returns the nonzero rows in echelon form: pivots strictly increase
    left to right, every pivot is positive, and entries above a pivot are
    reduced into ``[0, pivot)``.
    """
    basis: list[list[int]] = []
    pivots: list[int] = []
    where: dict[int, int] = {}
    for row in rows:
        vec = list(row)
        if len(vec) != ncols:
            raise ValueError(f"row has {len(vec)} entries, expected {ncols}")
        while True:
            lead = next((j for j, v in enumerate(vec) if v), None)
            if lead is None:
                break
            k = where.get(lead)
            if k is None:
                basis.append(vec)
                pivots.append(lead)
                where[lead] = len(basis) - 1
                break
            piv = basis[k]
            a, b = piv[lead], vec[lead]
            if b % a == 0:
                q = b // a
                vec = [v - q * p for v, p in zip(vec, piv)]
            else:
                x, y, g = xgcd(a, b)
                ag, bg = a // g, b // g
                basis[k] = [x * p + y * v for p, v in zip(piv, vec)]
                vec = [ag * v - bg * p for p, v in zip(piv, vec)]
    order = sorted(range(len(basis)), key=pivots.__getitem__)
    basis = [basis[k] for k in order]
    pivots = [pivots[k] for k in order]
    return _reduce_echelon(basis, pivots)


def _reduce_echelon(basis: list[list[int]], pivots: list[int]) -> list[list[int]]:
    for k, j in enumerate(pivots):
        if basis[k][j] < 0:
            basis[k] = [-v for v in basis[k]]
    # ascending: row k is zero in earlier pivot columns
    for k in range(len(basis)):
        j = pivots[k]
        p = basis[k][j]
        for i in range(k):
            q = basis[i][j] // p
            if q:
                basis[i] = [u - q * v for u, v in zip(basis[i], basis[k])]
    return basis


def in_row_lattice(hnf: list[list[int]], vec: list[int]) -> bool:
    """Exact integer membership of ``vec`` in the row lattice of an HNF basis."""
    vec = list(vec)
    for row in hnf:
        j = next(i for i, v in enumerate(row) if v)
        if any(vec[:j]):
            return False
        if vec[j] % row[j]:
            return False
        q = vec[j] // row[j]
        if q:
            vec = [v - q * r for v, r in zip(vec, row)]
    return not any(vec)


@dataclass(frozen=True)
class SmithForm:
    """Smith normal form ``P * A * Q = D`` with only ``Q`` (and its inverse) tracked.

    ``diagonal`` holds the nonzero invariant factors d1 | d2 | ... ; its
    length is the rank. ``Q`` is ncols x ncols and unimodular.
    """

    diagonal: tuple[int, ...]
    ncols: int
    Q: tuple[tuple[int, ...], ...]
    Q_inv: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.diagonal if d > 1)

    @property
    def free_rank(self) -> int:
        return self.ncols - self.rank

    def cokernel_coordinates(self, vec: list[int]) -> list[tuple[int, int]]:
        """Coordinates of ``vec`` in ``Z^ncols / rowspace(A)``.

        Returns ``(value, modulus)`` pairs, torsion coordinates first then
        free ones (modulus 0). Unit invariant factors are dropped.
        """
        y = [sum(v * self.Q[i][j] for i, v in enumerate(vec) if v) for j in range(self.ncols)]
        out = []
        for j, d in enumerate(self.diagonal):
            if d > 1:
                out.append((y[j] % d, d))
        for j in range(self.rank, self.ncols):
            out.append((y[j], 0))
        return out

    def generator(self, j: int) -> list[int]:
        """Representative in ``Z^ncols`` of the j-th cokernel coordinate."""
        return list(self.Q_inv[j])


def smith_normal_form(rows: list[list[int]], ncols: int) -> SmithForm:
    A = [list(r) for r in rows]
    for r in A:
        if len(r) != ncols:
            raise ValueError(f"row has {len(r)} entries, expected {ncols}")
    m = len(A)
    Q = identity(ncols)
    Qi = identity(ncols)

    def col_swap(a: int, b: int) -> None:
        for r in A:
            r[a], r[b] = r[b], r[a]
        for r in Q:
            r[a], r[b] = r[b], r[a]
        Qi[a], Qi[b] = Qi[b], Qi[a]

    def col_addmul(dst: int, src: int, q: int) -> None:
        # column dst -= q * column src
        for r in A:
            r[dst] -= q * r[src]
        for r in Q:
            r[dst] -= q * r[src]
        Qi[src] = [s + q * d for s, d in zip(Qi[src], Qi[dst])]

    def col_combine(t: int, j: int, x: int, y: int, u: int, v: int) -> None:
        # [col_t, col_j] <- [x*col_t + y*col_j, u*col_t + v*col_j] with det 1
        for M in (A, Q):
            for r in M:
                a, b = r[t], r[j]
                r[t], r[j] = x * a + y * b, u * a + v * b
        # inverse of [[x, u], [y, v]] acting on rows t, j of Qi
        rt, rj = Qi[t], Qi[j]
        Qi[t] = [v * a - u * b for a, b in zip(rt, rj)]
        Qi[j] = [-y * a + x * b for a, b in zip(rt, rj)]

    diag: list[int] = []
    t = 0
    while t < min(m, ncols):
        best = None
        for i in range(t, m):
            for j in range(t, ncols):
                v = A[i][j]
                if v and (best is None or abs(v) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        A[t], A[i] = A[i], A[t]
        if j != t:
            col_swap(t, j)
        while True:
            done = True
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    a, b = p, A[i][t]
                    x, y, g = xgcd(a, b)
                    ag, bg = a // g, b // g
                    rt, ri = A[t], A[i]
                    A[t] = [x * u + y * w for u, w in zip(rt, ri)]
                    A[i] = [ag * w - bg * u for u, w in zip(rt, ri)]
                    p = A[t][t]
            for j in range(t + 1, ncols):
                if A[t][j]:
                    a, b = p, A[t][j]
                    if b % a == 0:
                        col_addmul(j, t, b // a)
                    else:
                        x, y, g = xgcd(a, b)
                        col_combine(t, j, x, y, -(b // g), a // g)
                        done = False
                    p = A[t][t]
            if not done or any(A[i][t] for i in range(t + 1, m)):
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, ncols) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            A[t] = [u + w for u, w in zip(A[t], A[bad[0]])]
        if A[t][t] < 0:
            A[t] = [-u for u in A[t]]
        diag.append(A[t][t])
        t += 1
    return SmithForm(
        diagonal=tuple(diag),
        ncols=ncols,
        Q=tuple(tuple(r) for r in Q),
        Q_inv=tuple(tuple(r) for r in Qi),
    )


def determinant(M: list[list[int]]) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]
