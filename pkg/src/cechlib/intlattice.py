"""Exact linear algebra over the integers.

Smith normal form with unimodular transforms, integer linear solving with
feasibility certificates, column-style Hermite reduction for lattices, and
arithmetic in finitely generated abelian groups given by relation matrices.
Everything is arbitrary precision (plain Python ints) and deterministic:
the pivot rules and witness selection below are part of the output contract,
not an implementation detail.

Conventions:
  * matrices are immutable, entries row-major;
  * a relation matrix for a group presentation has one relation per column;
  * group elements are coordinate tuples, read modulo the relation lattice.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional

GroupElement = tuple[int, ...]

#: Node budget for the minimal-norm witness search.  Within the budget the
#: returned solution is exactly the lexicographically least among the
#: minimal-sup-norm integer solutions; if a search would exceed it, the
#: deterministic Babai-reduced solution is returned instead.
DEFAULT_SEARCH_BUDGET = 60_000


def vec_add(a: GroupElement, b: GroupElement) -> GroupElement:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vec_sub(a: GroupElement, b: GroupElement) -> GroupElement:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vec_neg(a: GroupElement) -> GroupElement:
    return tuple(-x for x in a)


def vec_scale(c: int, a: GroupElement) -> GroupElement:
    return tuple(c * x for x in a)


def zero_vec(n: int) -> GroupElement:
    return (0,) * n


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, row-major entries."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimensions")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"entry count {len(self.entries)} does not match "
                f"{self.rows}x{self.cols}"
            )

    @classmethod
    def from_rows(cls, rows: list[list[int]] | tuple, cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if rows:
            cols = len(rows[0])
        elif cols is None:
            cols = 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(itertools.chain.from_iterable(rows)))

    @classmethod
    def from_columns(cls, columns: list, rows: int | None = None) -> "IntMatrix":
        columns = [list(c) for c in columns]
        if columns:
            rows = len(columns[0])
        elif rows is None:
            rows = 0
        for c in columns:
            if len(c) != rows:
                raise ValueError("ragged columns")
        data = [columns[j][i] for i in range(rows) for j in range(len(columns))]
        return cls(rows, len(columns), tuple(data))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> GroupElement:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> GroupElement:
        return self.entries[j :: self.cols] if self.cols else ()

    def columns(self) -> list[GroupElement]:
        return [self.column(j) for j in range(self.cols)]

    def to_lists(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_columns([self.row(i) for i in range(self.rows)], rows=self.cols)

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"dimension mismatch: {self.cols} vs {other.rows}")
        n, k, m = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        out = [0] * (n * m)
        for i in range(n):
            arow = a[i * k : (i + 1) * k]
            base = i * m
            for t in range(k):
                av = arow[t]
                if av:
                    brow = b[t * m : (t + 1) * m]
                    for j in range(m):
                        out[base + j] += av * brow[j]
        return IntMatrix(n, m, tuple(out))

    def matvec(self, v: GroupElement) -> GroupElement:
        if len(v) != self.cols:
            raise ValueError(f"dimension mismatch: {len(v)} vs {self.cols}")
        return tuple(
            sum(self.entries[i * self.cols + j] * v[j] for j in range(self.cols))
            for i in range(self.rows)
        )

    def is_zero(self) -> bool:
        return all(e == 0 for e in self.entries)

    def __repr__(self) -> str:
        return f"IntMatrix({self.to_lists()!r})"


def hstack(left: IntMatrix, right: IntMatrix) -> IntMatrix:
    if left.rows != right.rows:
        raise ValueError("row count mismatch")
    rows = [list(left.row(i)) + list(right.row(i)) for i in range(left.rows)]
    return IntMatrix.from_rows(rows, cols=left.cols + right.cols)


def vstack(top: IntMatrix, bottom: IntMatrix) -> IntMatrix:
    if top.cols != bottom.cols:
        raise ValueError("column count mismatch")
    return IntMatrix(top.rows + bottom.rows, top.cols, top.entries + bottom.entries)


def block_diag(blocks: list[IntMatrix]) -> IntMatrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = [[0] * cols for _ in range(rows)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            out[r0 + i][c0 : c0 + b.cols] = list(b.row(i))
        r0 += b.rows
        c0 += b.cols
    return IntMatrix.from_rows(out, cols=cols)


@dataclass(frozen=True)
class SNFDecomposition:
    """U @ A @ V == S with U, V unimodular and S in Smith normal form."""

    S: IntMatrix
    U: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def rank(self) -> int:
        n = min(self.S.rows, self.S.cols)
        return sum(1 for i in range(n) if self.S.at(i, i) != 0)

    def diagonal(self) -> tuple[int, ...]:
        n = min(self.S.rows, self.S.cols)
        return tuple(self.S.at(i, i) for i in range(n))


def smith_normal_form(A: IntMatrix) -> SNFDecomposition:
    """Diagonalize A by unimodular row and column operations.

    Pivot rule: smallest absolute nonzero entry of the trailing submatrix,
    ties broken by lowest (row, col); rows are cleared before columns.
    Diagonal signs are normalized at the end.  The output is a pure function
    of the input, which the certificate formats rely on.
    """
    m, n = A.rows, A.cols
    S = [list(A.row(i)) for i in range(m)]
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    Ui = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    Vi = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def row_op(i: int, t: int, c: int) -> None:
        # row i += c * row t; U likewise; U_inv column t -= c * column i
        Si, St = S[i], S[t]
        for j in range(n):
            Si[j] += c * St[j]
        Uirow, Utrow = U[i], U[t]
        for j in range(m):
            Uirow[j] += c * Utrow[j]
        for r in range(m):
            Ui[r][t] -= c * Ui[r][i]

    def col_op(j: int, t: int, c: int) -> None:
        # col j += c * col t; V likewise; V_inv row t -= c * row j
        for i in range(m):
            S[i][j] += c * S[i][t]
        for i in range(n):
            V[i][j] += c * V[i][t]
        Vt, Vj = Vi[t], Vi[j]
        for k in range(n):
            Vt[k] -= c * Vj[k]

    def swap_rows(i: int, t: int) -> None:
        S[i], S[t] = S[t], S[i]
        U[i], U[t] = U[t], U[i]
        for r in range(m):
            Ui[r][i], Ui[r][t] = Ui[r][t], Ui[r][i]

    def swap_cols(j: int, t: int) -> None:
        for i in range(m):
            S[i][j], S[i][t] = S[i][t], S[i][j]
        for i in range(n):
            V[i][j], V[i][t] = V[i][t], V[i][j]
        Vi[j], Vi[t] = Vi[t], Vi[j]

    t = 0
    limit = min(m, n)
    while t < limit:
        pivot = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = abs(S[i][j])
                if v and (best is None or v < best):
                    best = v
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(pivot[0], t) if pivot[0] != t else None
        swap_cols(pivot[1], t) if pivot[1] != t else None

        while True:
            # rows first, then columns; restart on any remainder
            dirty = False
            for i in range(t + 1, m):
                if S[i][t]:
                    q = S[i][t] // S[t][t]
                    if q:
                        row_op(i, t, -q)
                    if S[i][t]:
                        dirty = True
            if dirty:
                move = min(
                    ((i, t) for i in range(t, m) if S[i][t]),
                    key=lambda ij: (abs(S[ij[0]][ij[1]]), ij),
                )
                if move[0] != t:
                    swap_rows(move[0], t)
                continue
            for j in range(t + 1, n):
                if S[t][j]:
                    q = S[t][j] // S[t][t]
                    if q:
                        col_op(j, t, -q)
                    if S[t][j]:
                        dirty = True
            if dirty:
                move = min(
                    ((t, j) for j in range(t, n) if S[t][j]),
                    key=lambda ij: (abs(S[ij[0]][ij[1]]), ij),
                )
                if move[1] != t:
                    swap_cols(move[1], t)
                continue
            # divisibility sweep over the trailing submatrix
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if S[i][j] % S[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_op(t, bad, 1)
        t += 1

    for i in range(limit):
        if S[i][i] < 0:
            for j in range(n):
                S[i][j] = -S[i][j]
            for j in range(m):
                U[i][j] = -U[i][j]
            for r in range(m):
                Ui[r][i] = -Ui[r][i]

    return SNFDecomposition(
        S=IntMatrix.from_rows(S, cols=n),
        U=IntMatrix.from_rows(U, cols=m),
        V=IntMatrix.from_rows(V, cols=n),
        U_inv=IntMatrix.from_rows(Ui, cols=m),
        V_inv=IntMatrix.from_rows(Vi, cols=n),
    )


def hnf_columns(M: IntMatrix) -> IntMatrix:
    """Column-style Hermite form of the lattice spanned by M's columns.

    Returns a staircase basis: each column has a positive pivot strictly
    lower than the previous one, entries left of a pivot reduced into
    [0, pivot).  Two generating sets span the same lattice iff their
    Hermite forms are equal, which makes this the canonical form used for
    lattice equality and for the witness enumeration.
    """
    cols = [list(c) for c in M.columns() if any(c)]
    r = 0
    for row in range(M.rows):
        while True:
            nz = [j for j in range(r, len(cols)) if cols[j][row] != 0]
            if len(nz) <= 1:
                break
            j0 = min(nz, key=lambda j: (abs(cols[j][row]), j))
            for j in nz:
                if j != j0:
                    q = cols[j][row] // cols[j0][row]
                    if q:
                        cj, c0 = cols[j], cols[j0]
                        for i in range(M.rows):
                            cj[i] -= q * c0[i]
            cols = [c for c in cols if any(c)]
        nz = [j for j in range(r, len(cols)) if cols[j][row] != 0]
        if nz:
            j0 = nz[0]
            cols[r], cols[j0] = cols[j0], cols[r]
            if cols[r][row] < 0:
                cols[r] = [-x for x in cols[r]]
            for j in range(r):
                q = cols[j][row] // cols[r][row]
                if q:
                    cj, cr = cols[j], cols[r]
                    for i in range(M.rows):
                        cj[i] -= q * cr[i]
            r += 1
    return IntMatrix.from_columns(cols[:r], rows=M.rows)


def lattice_basis(generators: IntMatrix) -> IntMatrix:
    """Independent columns spanning the same lattice as `generators`."""
    return hnf_columns(generators)


def lattice_equal(A: IntMatrix, B: IntMatrix) -> bool:
    if A.rows != B.rows:
        raise ValueError("ambient dimension mismatch")
    return hnf_columns(A) == hnf_columns(B)


@dataclass(frozen=True)
class InfeasibilityCertificate:
    """Proof that A @ x = b has no integer solution.

    `combination` is a row vector u with u @ A == 0 (mod `modulus`) entrywise
    while u @ b != 0 (mod `modulus`); modulus 0 means exact equality/inequality.
    Checking those two facts against the original system is all a verifier
    needs, no re-solve required.
    """

    combination: GroupElement
    modulus: int

    def check(self, A: IntMatrix, b: GroupElement) -> bool:
        u = self.combination
        if len(u) != A.rows or len(b) != A.rows:
            return False
        d = self.modulus
        ua = tuple(
            sum(u[i] * A.at(i, j) for i in range(A.rows)) for j in range(A.cols)
        )
        ub = sum(u[i] * b[i] for i in range(A.rows))
        if d == 0:
            return all(e == 0 for e in ua) and ub != 0
        return all(e % d == 0 for e in ua) and ub % d != 0


class _StaircaseLattice:
    """Pivot-structured basis supporting Babai reduction and box search."""

    def __init__(self, basis: IntMatrix):
        self.basis = basis
        self.n = basis.rows
        self.k = basis.cols
        self.pivots = []
        for j in range(self.k):
            col = basis.column(j)
            lead = next(i for i in range(self.n) if col[i] != 0)
            self.pivots.append(lead)

    def babai_reduce(self, x: list[int]) -> list[int]:
        for j in range(self.k):
            p = self.pivots[j]
            w = self.basis.at(p, j)
            q = (2 * x[p] + w) // (2 * w)  # nearest, ties toward the floor
            if q:
                col = self.basis.column(j)
                for i in range(self.n):
                    x[i] -= q * col[i]
        return x


class _Budget:
    __slots__ = ("left",)

    def __init__(self, n: int):
        self.left = n

    def spend(self) -> bool:
        self.left -= 1
        return self.left >= 0


def _search_min_norm(x0: list[int], lat: _StaircaseLattice, budget: _Budget) -> Optional[list[int]]:
    """Lexicographically least vector of minimal sup-norm in x0 + lattice.

    Iterative deepening on the norm bound; returns None if the node budget
    is exhausted before the search completes.
    """
    n, k = lat.n, lat.k
    start = lat.babai_reduce(list(x0))
    bound = max((abs(v) for v in start), default=0)
    pivots = lat.pivots
    cols = [lat.basis.column(j) for j in range(k)]
    # rows finalized once level j is fixed: [pivots[j], next pivot)
    segments = []
    for j in range(k):
        end = pivots[j + 1] if j + 1 < k else n
        segments.append(range(pivots[j], end))
    prefix = range(0, pivots[0]) if k else range(0, n)

    for beta in range(bound + 1):
        if any(abs(start[i]) > beta for i in prefix):
            continue
        best: Optional[list[int]] = None

        def dfs(level: int, x: list[int]) -> bool:
            nonlocal best
            if not budget.spend():
                return False
            if level == k:
                if best is None or x < best:
                    best = list(x)
                return True
            p = pivots[level]
            w = cols[level][p]
            lo = -((beta + x[p]) // w) if w > 0 else 0
            hi = (beta - x[p]) // w
            for tval in range(lo, hi + 1):
                y = [x[i] + tval * cols[level][i] for i in range(n)]
                if all(abs(y[i]) <= beta for i in segments[level]):
                    if not dfs(level + 1, y):
                        return False
            return True

        if not dfs(0, start):
            return None
        if best is not None:
            return best
    return start  # beta == bound always admits the Babai point


class SNFSolver:
    """Solve A @ x = b repeatedly for a fixed A, with certificates.

    The returned solution follows the deterministic witness rule: among all
    integer solutions, the lexicographically least coordinate vector of
    minimal sup-norm (best effort beyond the node budget, see
    DEFAULT_SEARCH_BUDGET).
    """

    def __init__(self, A: IntMatrix, budget: int = DEFAULT_SEARCH_BUDGET):
        self.A = A
        self.budget = budget
        self.snf = smith_normal_form(A)
        self.rank = self.snf.rank
        free_cols = [self.snf.V.column(j) for j in range(self.rank, A.cols)]
        basis = hnf_columns(IntMatrix.from_columns(free_cols, rows=A.cols))
        self.lattice = _StaircaseLattice(basis) if basis.cols else None

    def solve(self, b: GroupElement) -> Optional[GroupElement]:
        x, _ = self.solve_certified(b)
        return x

    def solve_certified(
        self, b: GroupElement
    ) -> tuple[Optional[GroupElement], Optional[InfeasibilityCertificate]]:
        A = self.A
        if len(b) != A.rows:
            raise ValueError(f"dimension mismatch: {len(b)} vs {A.rows}")
        c = self.snf.U.matvec(b)
        y = [0] * A.cols
        for i in range(min(A.rows, A.cols)):
            d = self.snf.S.at(i, i)
            if d:
                if c[i] % d:
                    return None, InfeasibilityCertificate(self.snf.U.row(i), d)
                y[i] = c[i] // d
        for i in range(self.rank, A.rows):
            if c[i]:
                return None, InfeasibilityCertificate(self.snf.U.row(i), 0)
        x0 = list(self.snf.V.matvec(tuple(y)))
        if self.lattice is None:
            return tuple(x0), None
        found = _search_min_norm(x0, self.lattice, _Budget(self.budget))
        if found is None:
            found = self.lattice.babai_reduce(x0)
        return tuple(found), None

    def solvable(self, b: GroupElement) -> bool:
        return self.solve_certified(b)[0] is not None


def solve_linear(A: IntMatrix, b: GroupElement) -> Optional[GroupElement]:
    """One integer solution of A @ x = b, or None (see SNFSolver for the rule)."""
    return SNFSolver(A).solve(b)


def solve_linear_certified(
    A: IntMatrix, b: GroupElement
) -> tuple[Optional[GroupElement], Optional[InfeasibilityCertificate]]:
    return SNFSolver(A).solve_certified(b)


class FGAbelianGroup:
    """Finitely generated abelian group on `generators` generators.

    Relations are the columns of the relation matrix; the zero-column matrix
    presents a free group.  Elements are coordinate tuples modulo the column
    lattice; `reduce` maps every element to its canonical representative.
    """

    __slots__ = ("generators", "relations", "_snf", "_structure")

    def __init__(self, generators: int, relations: IntMatrix | None = None):
        if relations is None:
            relations = IntMatrix.zeros(generators, 0)
        if relations.rows != generators:
            raise ValueError(
                f"relation matrix has {relations.rows} rows, expected {generators}"
            )
        self.generators = generators
        self.relations = relations
        self._snf: SNFDecomposition | None = None
        self._structure: tuple[int, tuple[int, ...]] | None = None

    @classmethod
    def free(cls, n: int) -> "FGAbelianGroup":
        return cls(n)

    @classmethod
    def cyclic(cls, k: int) -> "FGAbelianGroup":
        return cls(1, IntMatrix.from_rows([[k]]))

    @classmethod
    def of_invariants(cls, *divisors: int) -> "FGAbelianGroup":
        n = len(divisors)
        cols = [[divisors[j] if i == j else 0 for i in range(n)] for j in range(n) if divisors[j]]
        return cls(n, IntMatrix.from_columns(cols, rows=n))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FGAbelianGroup)
            and self.generators == other.generators
            and self.relations == other.relations
        )

    def __hash__(self) -> int:
        return hash((self.generators, self.relations))

    def _rel_snf(self) -> SNFDecomposition:
        if self._snf is None:
            self._snf = smith_normal_form(self.relations)
        return self._snf

    def structure(self) -> tuple[int, tuple[int, ...]]:
        """(free rank, torsion coefficients > 1 in divisor-chain order)."""
        if self._structure is None:
            snf = self._rel_snf()
            diag = [d for d in snf.diagonal() if d]
            torsion = tuple(d for d in diag if d > 1)
            self._structure = (self.generators - len(diag), torsion)
        return self._structure

    @property
    def free_rank(self) -> int:
        return self.structure()[0]

    @property
    def torsion(self) -> tuple[int, ...]:
        return self.structure()[1]

    def is_trivial(self) -> bool:
        rank, torsion = self.structure()
        return rank == 0 and not torsion

    def order(self) -> Optional[int]:
        rank, torsion = self.structure()
        if rank:
            return None
        out = 1
        for d in torsion:
            out *= d
        return out

    def isomorphic(self, other: "FGAbelianGroup") -> bool:
        return self.structure() == other.structure()

    def zero(self) -> GroupElement:
        return zero_vec(self.generators)

    def reduce(self, v: GroupElement) -> GroupElement:
        """Canonical representative of v modulo the relation lattice."""
        if len(v) != self.generators:
            raise ValueError(f"length mismatch: {len(v)} vs {self.generators}")
        snf = self._rel_snf()
        y = list(snf.U.matvec(v))
        for i in range(min(self.relations.rows, self.relations.cols)):
            d = snf.S.at(i, i)
            if d:
                y[i] %= d
        return snf.U_inv.matvec(tuple(y))

    def is_zero(self, v: GroupElement) -> bool:
        return all(x == 0 for x in self.reduce(v))

    def equal(self, a: GroupElement, b: GroupElement) -> bool:
        if len(a) != self.generators or len(b) != self.generators:
            raise ValueError("length mismatch")
        return self.reduce(a) == self.reduce(b)

    def elements(self) -> Iterator[GroupElement]:
        """All canonical representatives; only for finite groups."""
        if self.free_rank:
            raise ValueError("group is infinite")
        snf = self._rel_snf()
        n = self.generators
        diag = [snf.S.at(i, i) for i in range(min(self.relations.rows, self.relations.cols))]
        diag += [1] * (n - len(diag))  # rank deficit would mean free part, excluded above
        ranges = [range(d) for d in diag]
        for y in itertools.product(*ranges):
            yield self.reduce(snf.U_inv.matvec(tuple(y)))

    def describe(self) -> str:
        rank, torsion = self.structure()
        parts = ["Z"] * rank + [f"C{d}" for d in torsion]
        return " x ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"<FGAbelianGroup {self.describe()} on {self.generators} generators>"


def element_equal(G: FGAbelianGroup, a: GroupElement, b: GroupElement) -> bool:
    """True iff a - b lies in G's relation lattice."""
    return G.equal(a, b)


class GroupMorphism:
    """Homomorphism between presented groups, a matrix on generator coordinates."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: FGAbelianGroup, target: FGAbelianGroup, matrix: IntMatrix):
        if matrix.rows != target.generators or matrix.cols != source.generators:
            raise ValueError(
                f"matrix is {matrix.rows}x{matrix.cols}, expected "
                f"{target.generators}x{source.generators}"
            )
        self.source = source
        self.target = target
        self.matrix = matrix

    @classmethod
    def identity(cls, G: FGAbelianGroup) -> "GroupMorphism":
        return cls(G, G, IntMatrix.identity(G.generators))

    @classmethod
    def zero(cls, source: FGAbelianGroup, target: FGAbelianGroup) -> "GroupMorphism":
        return cls(source, target, IntMatrix.zeros(target.generators, source.generators))

    def apply(self, v: GroupElement) -> GroupElement:
        return self.matrix.matvec(v)

    def compose(self, inner: "GroupMorphism") -> "GroupMorphism":
        """self after inner."""
        if inner.target is not self.source and inner.target != self.source:
            raise ValueError("composition endpoint mismatch")
        return GroupMorphism(inner.source, self.target, self.matrix.mul(inner.matrix))

    def is_well_defined(self) -> bool:
        """Every source relation must map into the target relation lattice."""
        solver = SNFSolver(self.target.relations)
        return all(
            solver.solvable(self.matrix.matvec(col))
            for col in self.source.relations.columns()
        )

    def equal_on_generators(self, other: "GroupMorphism") -> bool:
        """Same map modulo target relations, checked generator by generator."""
        if self.matrix.cols != other.matrix.cols or self.matrix.rows != other.matrix.rows:
            return False
        return all(
            self.target.is_zero(vec_sub(self.matrix.column(j), other.matrix.column(j)))
            for j in range(self.matrix.cols)
        )

    def __repr__(self) -> str:
        return f"<GroupMorphism {self.source.describe()} -> {self.target.describe()}>"


@dataclass(frozen=True)
class MorphismAnalysis:
    kernel: FGAbelianGroup
    kernel_inclusion: GroupMorphism          # kernel -> source
    image: FGAbelianGroup
    image_inclusion: GroupMorphism           # image -> target
    image_projection: GroupMorphism          # source -> image
    cokernel: FGAbelianGroup
    cokernel_projection: GroupMorphism       # target -> cokernel


def preimage_lattice(f: GroupMorphism) -> IntMatrix:
    """Basis of {c : f(c) lies in the target relation lattice}."""
    stacked = hstack(f.matrix, f.target.relations)
    snf = smith_normal_form(stacked)
    n = f.source.generators
    cols = [snf.V.column(j)[:n] for j in range(snf.rank, stacked.cols)]
    return lattice_basis(IntMatrix.from_columns(cols, rows=n))


def analyze_morphism(f: GroupMorphism) -> MorphismAnalysis:
    """Kernel, image and cokernel of f, each with its structure morphism.

    Raises ValueError if f is not well defined (a source relation escapes
    the target relation lattice).
    """
    src, tgt = f.source, f.target
    K = preimage_lattice(f)
    ker_solver = SNFSolver(K)
    rel_cols = []
    for col in src.relations.columns():
        z = ker_solver.solve(col)
        if z is None:
            raise ValueError("ill-defined morphism: relation not preserved")
        rel_cols.append(z)
    kernel = FGAbelianGroup(K.cols, IntMatrix.from_columns(rel_cols, rows=K.cols))
    kernel_inclusion = GroupMorphism(kernel, src, K)

    image = FGAbelianGroup(src.generators, K)
    image_inclusion = GroupMorphism(image, tgt, f.matrix)
    image_projection = GroupMorphism(src, image, IntMatrix.identity(src.generators))

    cokernel = FGAbelianGroup(tgt.generators, hstack(tgt.relations, f.matrix))
    cokernel_projection = GroupMorphism(tgt, cokernel, IntMatrix.identity(tgt.generators))

    return MorphismAnalysis(
        kernel=kernel,
        kernel_inclusion=kernel_inclusion,
        image=image,
        image_inclusion=image_inclusion,
        image_projection=image_projection,
        cokernel=cokernel,
        cokernel_projection=cokernel_projection,
    )
