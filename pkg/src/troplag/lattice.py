"""Exact integer and rational linear algebra.

Everything in here is plain ``int`` / ``fractions.Fraction`` arithmetic:
vector products, primitivity, Smith normal form, lattice indices, and a
small exact linear solver.  No floating point is used anywhere in the
package.  Vectors are tuples, matrices are tuples of row tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import WorkbenchError


# ---------------------------------------------------------------------------
# vectors


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vec_neg(u):
    return tuple(-a for a in u)


def vec_scale(c, u):
    return tuple(c * a for a in u)


def dot(u, v):
    if len(u) != len(v):
        raise WorkbenchError("DIMENSION_MISMATCH",
                             f"dot of lengths {len(u)} and {len(v)}")
    return sum(a * b for a, b in zip(u, v))


def is_zero(u):
    return all(a == 0 for a in u)


def content(v) -> int:
    """GCD of the coordinates (nonnegative; 0 for the zero vector)."""
    g = 0
    for a in v:
        g = gcd(g, abs(a))
    return g


def primitive_raw(v):
    """v divided by its content, orientation kept.  Zero stays zero."""
    g = content(v)
    if g == 0:
        return tuple(v)
    return tuple(a // g for a in v)


def gcd_primitive(v):
    """Split v as g * u with g = content(v) and u primitive.

    The sign of u is normalized so that its first nonzero coordinate is
    positive; hence g * u == v holds up to this sign flip only.  Use
    primitive_raw when the orientation of v must be preserved.
    """
    g = content(v)
    if g == 0:
        return 0, tuple(v)
    u = tuple(a // g for a in v)
    for a in u:
        if a != 0:
            if a < 0:
                u = vec_neg(u)
            break
    return g, u


def cross(u, v):
    """Vector product in Z^3 (or Q^3)."""
    if len(u) != 3 or len(v) != 3:
        raise WorkbenchError("DIMENSION_MISMATCH", "cross needs 3-vectors")
    return (u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0])


def mixed(u, v, w):
    """Mixed product (u x v) . w == det of the matrix with rows u, v, w."""
    return dot(cross(u, v), w)


def are_parallel(u, v):
    """True when u and v span at most a line (works in any dimension)."""
    n = len(u)
    for i in range(n):
        for j in range(i + 1, n):
            if u[i] * v[j] - u[j] * v[i] != 0:
                return False
    return True


def rot90(u):
    """Counterclockwise quarter turn in Z^2."""
    if len(u) != 2:
        raise WorkbenchError("DIMENSION_MISMATCH", "rot90 needs a 2-vector")
    return (-u[1], u[0])


# ---------------------------------------------------------------------------
# Smith normal form


def _mat_identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(inner))
                       for j in range(cols))
                 for i in range(rows))


def mat_transpose(a):
    return tuple(zip(*a)) if a else ()


def det_bareiss(rows) -> int:
    """Exact determinant of an integer matrix (fraction-free elimination)."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise WorkbenchError("DIMENSION_MISMATCH", "determinant needs a square matrix")
    a = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


@dataclass(frozen=True)
class SnfResult:
    """U * M * V == D with U, V unimodular and D a divisor chain."""
    U: tuple
    D: tuple
    V: tuple

    def divisors(self):
        r = min(len(self.D), len(self.D[0]) if self.D else 0)
        return tuple(self.D[i][i] for i in range(r) if self.D[i][i] != 0)

    def check(self, m) -> bool:
        if mat_mul(mat_mul(self.U, m), self.V) != self.D:
            return False
        if abs(det_bareiss(self.U)) != 1 or abs(det_bareiss(self.V)) != 1:
            return False
        r = min(len(self.D), len(self.D[0]) if self.D else 0)
        for i in range(r):
            d = self.D[i][i]
            if d < 0:
                return False
            if i + 1 < r:
                nxt = self.D[i + 1][i + 1]
                if d == 0 and nxt != 0:
                    return False
                if d != 0 and nxt % d != 0:
                    return False
        for i in range(len(self.D)):
            for j in range(len(self.D[0]) if self.D else 0):
                if i != j and self.D[i][j] != 0:
                    return False
        return True


def smith_normal_form(rows) -> SnfResult:
    """Smith normal form by elementary row/column operations.

    Pivot selection: smallest nonzero absolute value, ties broken by
    lowest row then column index, which makes the output deterministic.
    """
    a = [list(r) for r in rows]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    u = _mat_identity(nr)
    v = _mat_identity(nc)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while t < min(nr, nc):
        # locate pivot
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] != 0:
                    key = (abs(a[i][j]), i, j)
                    if best is None or key < best:
                        best = key
        if best is None:
            break
        _, pi, pj = best
        if pi != t:
            swap_rows(t, pi)
        if pj != t:
            swap_cols(t, pj)

        # clear row and column t; remainders may reappear, so iterate
        while True:
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    add_row(i, t, -q)
                    if a[i][t] != 0:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, nc):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    add_col(j, t, -q)
                    if a[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
            if not dirty:
                break

        # enforce divisibility of the remaining block by the pivot
        pivot = a[t][t]
        offender = None
        for i in range(t + 1, nr):
            for j in range(t + 1, nc):
                if a[i][j] % pivot != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(t, offender, 1)
            continue
        if a[t][t] < 0:
            negate_row(t)
        t += 1

    return SnfResult(tuple(tuple(r) for r in u),
                     tuple(tuple(r) for r in a),
                     tuple(tuple(r) for r in v))


def elementary_divisors(rows):
    return smith_normal_form(rows).divisors()


def lattice_index(gens) -> int:
    """Index of the sublattice spanned by gens inside its saturation.

    The saturation is the set of integer vectors in the rational span, and
    the index equals the product of the nonzero elementary divisors of the
    generator matrix.  A saturated (direct summand) sublattice gives 1.
    """
    gens = [tuple(g) for g in gens]
    if not gens:
        raise WorkbenchError("ZERO_SPAN", "no generators")
    if all(is_zero(g) for g in gens):
        raise WorkbenchError("ZERO_SPAN", "all generators are zero")
    idx = 1
    for d in elementary_divisors(gens):
        idx *= d
    return idx


# ---------------------------------------------------------------------------
# exact rational solving


@dataclass(frozen=True)
class SolveResult:
    status: str                 # "unique" | "none" | "underdetermined"
    solution: tuple | None
    kernel: tuple               # basis of the homogeneous solution space
    det: Fraction | None        # exact determinant when the matrix is square

    @property
    def unique(self):
        return self.status == "unique"


def solve_exact(rows, rhs) -> SolveResult:
    """Gaussian elimination over Q.

    Returns the unique solution, reports inconsistency, or returns a
    kernel basis together with one particular solution.
    """
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    if len(rhs) != nr:
        raise WorkbenchError("DIMENSION_MISMATCH",
                             f"{nr} rows versus {len(rhs)} right-hand sides")
    a = [[Fraction(x) for x in row] + [Fraction(rhs[i])]
         for i, row in enumerate(rows)]

    det = Fraction(1) if nr == nc else None
    pivots = []
    r = 0
    for c in range(nc):
        pr = next((i for i in range(r, nr) if a[i][c] != 0), None)
        if pr is None:
            if det is not None:
                det = Fraction(0)
            continue
        if pr != r:
            a[r], a[pr] = a[pr], a[r]
            if det is not None:
                det = -det
        if det is not None:
            det *= a[r][c]
        inv = a[r][c]
        a[r] = [x / inv for x in a[r]]
        for i in range(nr):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    if det is not None and r < nr:
        det = Fraction(0)

    for i in range(r, nr):
        if a[i][nc] != 0:
            return SolveResult("none", None, (), det)

    x = [Fraction(0)] * nc
    for i, c in enumerate(pivots):
        x[c] = a[i][nc]

    free = [c for c in range(nc) if c not in pivots]
    kernel = []
    for fc in free:
        k = [Fraction(0)] * nc
        k[fc] = Fraction(1)
        for i, c in enumerate(pivots):
            k[c] = -a[i][fc]
        kernel.append(tuple(k))

    if free:
        return SolveResult("underdetermined", tuple(x), tuple(kernel), det)
    return SolveResult("unique", tuple(x), (), det)


def rank_exact(rows) -> int:
    if not rows:
        return 0
    nc = len(rows[0])
    res = solve_exact(rows, [0] * len(rows))
    return nc - len(res.kernel)


# ---------------------------------------------------------------------------
# small integer solvers used by the corner-basis and splitting machinery


def _xgcd(a, b):
    """g, s, t with s*a + t*b == g == gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def solve_dot(v, target=1):
    """Deterministic x in Z^n with v . x == target, or None.

    Solvable exactly when content(v) divides target; coefficients come
    from chaining the extended Euclidean algorithm along the coordinates.
    """
    g = 0
    coeffs = []
    for a in v:
        g2, s, t = _xgcd(g, a)
        coeffs = [s * c for c in coeffs] + [t]
        g = g2
    if g == 0 or target % g != 0:
        return None
    m = target // g
    return tuple(m * c for c in coeffs)


def invert_unimodular(m):
    """Inverse of an integer matrix with determinant +-1."""
    n = len(m)
    d = det_bareiss(m)
    if abs(d) != 1:
        raise WorkbenchError("NOT_UNIMODULAR", f"determinant {d}")
    cols = []
    for j in range(n):
        rhs = [1 if i == j else 0 for i in range(n)]
        sol = solve_exact(m, rhs)
        cols.append(tuple(int(x) for x in sol.solution))
    return tuple(zip(*cols))


def complete_basis(u):
    """Rows (u, v, w) forming a Z^3 basis with det +1; u must be primitive."""
    if len(u) != 3 or content(u) != 1:
        raise WorkbenchError("NOT_PRIMITIVE", f"{u} is not a primitive 3-vector")
    snf = smith_normal_form([list(u)])
    w_mat = invert_unimodular(snf.V)  # first row of V^{-1} is +-u
    rows = [list(r) for r in w_mat]
    if tuple(rows[0]) != tuple(u):
        rows[0] = [-x for x in rows[0]]
        rows[1] = [-x for x in rows[1]]
    if tuple(rows[0]) != tuple(u):
        raise WorkbenchError("INTERNAL_INCONSISTENCY", "basis completion failed")
    if det_bareiss(rows) < 0:
        rows[2] = [-x for x in rows[2]]
    return tuple(tuple(r) for r in rows)


def solve_cross(u, t):
    """Deterministic z with u x z == t; u primitive, t orthogonal to u."""
    if dot(u, t) != 0:
        raise WorkbenchError("NO_SOLUTION", "target not orthogonal to u")
    _, v, w = complete_basis(u)
    # For a positively oriented basis (u, v, w): u x (a*v + b*w) spans the
    # orthogonal lattice of u, with dual pairings against w and v.
    z = vec_sub(vec_scale(dot(t, w), v), vec_scale(dot(t, v), w))
    if cross(u, z) != tuple(t):
        raise WorkbenchError("INTERNAL_INCONSISTENCY", "cross solve failed")
    return z
