"""Exact linear algebra over F2, the integers, and the rationals.

Everything at desk scale: the diagrams this package works with produce
systems with a few hundred rows at most, so plain Gaussian elimination
(bitmask rows over F2, ``Fraction`` rows over Q) and a textbook Smith
normal form are enough.  No floating point is used anywhere; rational
feasibility is decided by an exact-fraction phase-I simplex.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Optional, Sequence


# ---------------------------------------------------------------------------
# matrix containers


@dataclass(frozen=True)
class BinaryMatrix:
    """A matrix over F2, stored as the set of positions holding a 1."""

    rows: int
    cols: int
    entries: frozenset

    def __post_init__(self):
        for (r, c) in self.entries:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise ValueError(f"entry {(r, c)} out of bounds")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "BinaryMatrix":
        nr = len(rows)
        nc = len(rows[0]) if rows else 0
        ent = frozenset(
            (i, j) for i, row in enumerate(rows) for j, v in enumerate(row) if v % 2
        )
        return cls(nr, nc, ent)

    def bitrows(self) -> list:
        """Rows as integers with bit j standing for column j."""
        out = [0] * self.rows
        for (r, c) in self.entries:
            out[r] |= 1 << c
        return out

    def mul_vec(self, vec: Sequence[int]) -> tuple:
        bits = 0
        for j, v in enumerate(vec):
            if v % 2:
                bits |= 1 << j
        return tuple((bin(row & bits).count("1")) % 2 for row in self.bitrows())


@dataclass(frozen=True)
class IntegerMatrix:
    """A matrix over Z, stored sparsely as position -> value."""

    rows: int
    cols: int
    entries: tuple  # sorted tuple of ((r, c), value) with value != 0

    def __post_init__(self):
        for ((r, c), v) in self.entries:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise ValueError(f"entry {(r, c)} out of bounds")
            if v == 0:
                raise ValueError("explicit zero entry")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntegerMatrix":
        nr = len(rows)
        nc = len(rows[0]) if rows else 0
        ent = tuple(
            sorted(((i, j), v) for i, row in enumerate(rows) for j, v in enumerate(row) if v)
        )
        return cls(nr, nc, ent)

    def dense(self) -> list:
        out = [[0] * self.cols for _ in range(self.rows)]
        for ((r, c), v) in self.entries:
            out[r][c] = v
        return out

    def mul_vec(self, vec: Sequence[int]) -> tuple:
        out = [0] * self.rows
        for ((r, c), v) in self.entries:
            out[r] += v * vec[c]
        return tuple(out)


# ---------------------------------------------------------------------------
# F2


def f2_rank_kernel(m: BinaryMatrix) -> tuple:
    """Rank and a kernel basis of ``m`` over F2.

    Returns ``(rank, basis)`` where each basis vector is a 0/1 tuple of
    length ``m.cols``; rank + len(basis) == m.cols.
    """
    rows = [r for r in m.bitrows() if r]
    pivots = {}  # col -> reduced row
    for row in rows:
        for col, prow in pivots.items():
            if (row >> col) & 1:
                row ^= prow
        if row:
            col = row.bit_length() - 1
            # back-substitute into existing rows to keep them reduced
            for c2 in list(pivots):
                if (pivots[c2] >> col) & 1:
                    pivots[c2] ^= row
            pivots[col] = row
    rank = len(pivots)
    basis = []
    pivot_cols = set(pivots)
    for j in range(m.cols):
        if j in pivot_cols:
            continue
        vec = [0] * m.cols
        vec[j] = 1
        for col, prow in pivots.items():
            if (prow >> j) & 1:
                vec[col] = 1
        basis.append(tuple(vec))
    return rank, basis


def f2_rank(rows: Sequence[int]) -> int:
    """Rank of a list of bitmask rows over F2 (convenience form)."""
    pivots = {}
    for row in rows:
        cur = row
        while cur:
            top = cur.bit_length() - 1
            if top in pivots:
                cur ^= pivots[top]
            else:
                pivots[top] = cur
                break
    return len(pivots)


# ---------------------------------------------------------------------------
# Z: Smith normal form and integer kernels


def smith_normal_form(mat: Sequence[Sequence[int]]) -> tuple:
    """Compute S = U * A * V in Smith normal form.

    Returns ``(S, U, V)`` as dense lists; U and V are unimodular, S is
    diagonal with s_i | s_{i+1}.  Textbook elimination with exact integer
    arithmetic; fine at this scale.
    """
    S = [list(row) for row in mat]
    nr = len(S)
    nc = len(S[0]) if nr else 0
    U = [[int(i == j) for j in range(nr)] for i in range(nr)]
    V = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row dst += k * row src
        S[dst] = [a + k * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        for row in S:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    def negate_row(i):
        S[i] = [-a for a in S[i]]
        U[i] = [-a for a in U[i]]

    t = 0
    while t < min(nr, nc):
        # find a nonzero pivot at (t, t) or beyond
        pr = pc = -1
        for i in range(t, nr):
            for j in range(t, nc):
                if S[i][j] != 0:
                    pr, pc = i, j
                    break
            if pr >= 0:
                break
        if pr < 0:
            break
        swap_rows(t, pr)
        swap_cols(t, pc)
        while True:
            # clear column t
            dirty = False
            for i in range(t + 1, nr):
                if S[i][t] != 0:
                    if S[i][t] % S[t][t] == 0:
                        add_row(i, t, -S[i][t] // S[t][t])
                    else:
                        q = S[i][t] // S[t][t]
                        add_row(i, t, -q)
                        swap_rows(i, t)
                        dirty = True
            for j in range(t + 1, nc):
                if S[t][j] != 0:
                    if S[t][j] % S[t][t] == 0:
                        add_col(j, t, -S[t][j] // S[t][t])
                    else:
                        q = S[t][j] // S[t][t]
                        add_col(j, t, -q)
                        swap_cols(j, t)
                        dirty = True
            if not dirty and all(S[i][t] == 0 for i in range(t + 1, nr)) and all(
                S[t][j] == 0 for j in range(t + 1, nc)
            ):
                break
        # divisibility fix-up: S[t][t] must divide everything below-right
        val = S[t][t]
        fixed = True
        for i in range(t + 1, nr):
            for j in range(t + 1, nc):
                if S[i][j] % val != 0:
                    add_row(t, i, 1)
                    fixed = False
                    break
            if not fixed:
                break
        if fixed:
            if S[t][t] < 0:
                negate_row(t)
            t += 1
    return S, U, V


def z_kernel_basis(m: IntegerMatrix) -> list:
    """A Z-basis of the integer kernel of ``m`` via Smith normal form.

    The basis is saturated: it spans ker(m) itself, not a finite-index
    sublattice.
    """
    if m.cols == 0:
        return []
    if m.rows == 0:
        return [tuple(int(i == j) for i in range(m.cols)) for j in range(m.cols)]
    S, _U, V = smith_normal_form(m.dense())
    rank = 0
    for i in range(min(m.rows, m.cols)):
        if S[i][i] != 0:
            rank += 1
    basis = []
    for j in range(rank, m.cols):
        basis.append(tuple(V[i][j] for i in range(m.cols)))
    return basis


def z_image_contains(m: IntegerMatrix, target: Sequence[int]) -> Optional[tuple]:
    """Solve m * x = target over Z; returns one solution or None."""
    if len(target) != m.rows:
        raise ValueError("target length mismatch")
    if m.cols == 0:
        return () if all(t == 0 for t in target) else None
    if m.rows == 0:
        return tuple(0 for _ in range(m.cols))
    S, U, V = smith_normal_form(m.dense())
    ub = [sum(U[i][k] * target[k] for k in range(m.rows)) for i in range(m.rows)]
    y = [0] * m.cols
    for i in range(m.rows):
        d = S[i][i] if i < min(m.rows, m.cols) else 0
        if d != 0:
            if ub[i] % d != 0:
                return None
            y[i] = ub[i] // d
        elif ub[i] != 0:
            return None
    x = tuple(sum(V[i][k] * y[k] for k in range(m.cols)) for i in range(m.cols))
    return x


def cokernel_residue(m: IntegerMatrix):
    """Return a function classifying vectors modulo the column span of ``m``.

    Two vectors b, b' get equal keys iff b - b' lies in the integer image
    of ``m``.  Used to split generators into boundary-equivalence classes
    with a single Smith reduction.
    """
    if m.rows == 0:
        return lambda b: ()
    if m.cols == 0:
        return lambda b: tuple(b)
    S, U, _V = smith_normal_form(m.dense())
    diag = [S[i][i] if i < min(m.rows, m.cols) else 0 for i in range(m.rows)]

    def key(b):
        if len(b) != m.rows:
            raise ValueError("vector length mismatch")
        ub = [sum(U[i][k] * b[k] for k in range(m.rows)) for i in range(m.rows)]
        return tuple(
            ub[i] % diag[i] if diag[i] != 0 else ub[i] for i in range(m.rows)
        )

    return key


# ---------------------------------------------------------------------------
# Q: dense elimination helpers for the disk-census and admissibility


def q_solve_unique(rows: Sequence[Sequence], rhs: Sequence) -> Optional[list]:
    """Solve A x = rhs over Q where A has full column rank.

    Returns the unique solution as Fractions, or None if the system is
    inconsistent.  Raises if the solution is not unique, which signals a
    caller bug (all callers pass injective systems).
    """
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    aug = [[Fraction(v) for v in row] + [Fraction(rhs[i])] for i, row in enumerate(rows)]
    pivots = []  # (row, col)
    r = 0
    for c in range(nc):
        pr = next((i for i in range(r, nr) if aug[i][c] != 0), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        pv = aug[r][c]
        aug[r] = [v / pv for v in aug[r]]
        for i in range(nr):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append((r, c))
        r += 1
        if r == nr:
            break
    for i in range(r, nr):
        if aug[i][nc] != 0:
            return None
    if len(pivots) < nc:
        raise ValueError("underdetermined system passed to q_solve_unique")
    sol = [Fraction(0)] * nc
    for (pr, pc) in pivots:
        sol[pc] = aug[pr][nc]
    return sol


def q_kernel_basis(rows: Sequence[Sequence]) -> list:
    """A basis of the rational kernel of the given dense matrix."""
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    mat = [[Fraction(v) for v in row] for row in rows]
    pivots = {}
    r = 0
    for c in range(nc):
        pr = next((i for i in range(r, nr) if mat[i][c] != 0), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        pv = mat[r][c]
        mat[r] = [v / pv for v in mat[r]]
        for i in range(nr):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots[c] = r
        r += 1
        if r == nr:
            break
    basis = []
    for j in range(nc):
        if j in pivots:
            continue
        vec = [Fraction(0)] * nc
        vec[j] = Fraction(1)
        for pc, pr in pivots.items():
            vec[pc] = -mat[pr][j]
        basis.append(vec)
    return basis


# ---------------------------------------------------------------------------
# positive kernel witnesses (rational feasibility, exact simplex)


def positive_kernel_witness(m: IntegerMatrix) -> Optional[tuple]:
    """A nonzero nonnegative integer vector in ker(m), or None.

    Decides feasibility of {v >= 0, m v = 0, sum(v) = 1} by an exact
    phase-I simplex with Bland's rule, then clears denominators.  The
    normalisation makes "nonzero" a linear condition, and any rational
    solution scales to an integer one.
    """
    n = m.cols
    if n == 0:
        return None
    dense = m.dense()
    rows = [[Fraction(v) for v in row] for row in dense]
    rows.append([Fraction(1)] * n)
    rhs = [Fraction(0)] * m.rows + [Fraction(1)]
    # make all right-hand sides nonnegative (they already are) and run phase I
    sol = _phase1_simplex(rows, rhs)
    if sol is None:
        return None
    denom = lcm(*(f.denominator for f in sol)) if sol else 1
    out = tuple(int(f * denom) for f in sol)
    assert any(out) and all(v >= 0 for v in out)
    assert all(v == 0 for v in m.mul_vec(out))
    return out


def _phase1_simplex(a_rows: list, b: list) -> Optional[list]:
    """Feasibility of {x >= 0, A x = b} with b >= 0; returns x or None."""
    nr = len(a_rows)
    nc = len(a_rows[0])
    # tableau columns: original variables, artificials, rhs
    T = []
    for i in range(nr):
        row = list(a_rows[i])
        row += [Fraction(int(i == j)) for j in range(nr)]
        row.append(b[i])
        T.append(row)
    basis = [nc + i for i in range(nr)]
    total = nc + nr

    def reduced_costs():
        # cost: minimise the sum of artificial variables
        costs = [Fraction(0)] * total
        for j in range(nc, total):
            costs[j] = Fraction(1)
        for i, bi in enumerate(basis):
            if costs[bi] != 0:
                f = costs[bi]
                for j in range(total):
                    costs[j] -= f * T[i][j]
        return costs

    while True:
        costs = reduced_costs()
        enter = next((j for j in range(total) if costs[j] < 0), None)
        if enter is None:
            break
        # ratio test, Bland tie-break on basis index
        leave = None
        best = None
        for i in range(nr):
            if T[i][enter] > 0:
                ratio = T[i][-1] / T[i][enter]
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best = ratio
                    leave = i
        if leave is None:
            # unbounded phase-I objective cannot happen; treat as infeasible
            return None
        pv = T[leave][enter]
        T[leave] = [v / pv for v in T[leave]]
        for i in range(nr):
            if i != leave and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [x - f * y for x, y in zip(T[i], T[leave])]
        basis[leave] = enter
    # objective value = sum of basic artificial values
    obj = sum(T[i][-1] for i in range(nr) if basis[i] >= nc)
    if obj != 0:
        return None
    sol = [Fraction(0)] * nc
    for i, bi in enumerate(basis):
        if bi < nc:
            sol[bi] = T[i][-1]
    return sol


def scale_to_integers(vec: Sequence[Fraction]) -> tuple:
    """Scale a rational vector by the lcm of denominators, divide by gcd."""
    fracs = [Fraction(v) for v in vec]
    if not fracs:
        return ()
    denom = lcm(*(f.denominator for f in fracs))
    ints = [int(f * denom) for f in fracs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(ints)
