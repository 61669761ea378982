"""Independent oracles and random generators shared by the test suite.

Oracles here deliberately avoid the library's Smith-form machinery so that
they stay independent of the code paths they check.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import gcd

from cechlib.intlattice import (
    FGAbelianGroup,
    GroupMorphism,
    IntMatrix,
    SNFSolver,
    preimage_lattice,
    hstack,
)
from cechlib.nerve import Cover, build_nerve
from cechlib.sheaf import AbelianSheaf, constant_sheaf
from cechlib.cech import Cochain, coboundary, cohomology, cochain_add, cochain_scale, zero_cochain
from cechlib.connecting import ShortExactSequence, TwoStepExtension, splice


# ---------------------------------------------------------------------------
# integer linear algebra oracles


def minors_gcd(A: IntMatrix, k: int) -> int:
    """gcd of all k x k minors, by direct expansion (k small)."""
    rows = list(range(A.rows))
    cols = list(range(A.cols))
    g = 0
    for rsel in itertools.combinations(rows, k):
        for csel in itertools.combinations(cols, k):
            g = gcd(g, _det([[A.at(i, j) for j in csel] for i in rsel]))
    return abs(g)


def _det(m: list[list[int]]) -> int:
    n = len(m)
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        if m[0][j]:
            minor = [row[:j] + row[j + 1 :] for row in m[1:]]
            total += (-1) ** j * m[0][j] * _det(minor)
    return total


def box_solve(A: IntMatrix, b: tuple[int, ...], bound: int) -> list[tuple[int, ...]]:
    """All solutions of A x = b with every |x_i| <= bound, by enumeration."""
    out = []
    for x in itertools.product(range(-bound, bound + 1), repeat=A.cols):
        if A.matvec(x) == tuple(b):
            out.append(x)
    return out


def rational_rank(A: IntMatrix) -> int:
    """Rank over the rationals by fraction-free Gaussian elimination."""
    m = [[Fraction(A.at(i, j)) for j in range(A.cols)] for i in range(A.rows)]
    rank = 0
    for col in range(A.cols):
        pivot = next((i for i in range(rank, A.rows) if m[i][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [v * inv for v in m[rank]]
        for i in range(A.rows):
            if i != rank and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * bv for a, bv in zip(m[i], m[rank])]
        rank += 1
    return rank


def random_matrix(rng: random.Random, rows: int, cols: int, span: int = 9) -> IntMatrix:
    return IntMatrix.from_rows(
        [[rng.randint(-span, span) for _ in range(cols)] for _ in range(rows)],
        cols=cols,
    )


def random_unimodular(rng: random.Random, n: int, ops: int = 8) -> IntMatrix:
    m = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(ops):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = rng.randint(-2, 2)
        for k in range(n):
            m[i][k] += c * m[j][k]
    return IntMatrix.from_rows(m, cols=n)


# ---------------------------------------------------------------------------
# nerves and sheaves


def full_cover(n: int) -> Cover:
    labels = [f"U{i + 1}" for i in range(n)]
    subsets = [
        tuple(sorted(s))
        for r in range(1, n + 1)
        for s in itertools.combinations(range(n), r)
    ]
    return Cover(tuple(labels), tuple(subsets))


def nerve_catalog(max_opens: int = 4):
    """Representative nerves on <= max_opens opens (full, hollow, chains...)."""
    nerves = []
    for n in range(1, max_opens + 1):
        nerves.append(build_nerve(full_cover(n)))
    # hollow triangle
    nerves.append(
        build_nerve(Cover(("U1", "U2", "U3"), ((0,), (1,), (2,), (0, 1), (0, 2), (1, 2))))
    )
    # two disjoint opens
    nerves.append(build_nerve(Cover(("U1", "U2"), ((0,), (1,)))))
    if max_opens >= 4:
        # boundary of the tetrahedron: all triangles, no solid
        subsets = [(i,) for i in range(4)]
        subsets += list(itertools.combinations(range(4), 2))
        subsets += list(itertools.combinations(range(4), 3))
        nerves.append(build_nerve(Cover(("U1", "U2", "U3", "U4"), tuple(subsets))))
        # 4-cycle of opens
        nerves.append(
            build_nerve(
                Cover(
                    ("U1", "U2", "U3", "U4"),
                    ((0,), (1,), (2,), (3,), (0, 1), (1, 2), (2, 3), (0, 3)),
                )
            )
        )
    return nerves


GROUP_POOL = (
    FGAbelianGroup.free(1),
    FGAbelianGroup.free(2),
    FGAbelianGroup.cyclic(2),
    FGAbelianGroup.cyclic(3),
)


def random_sheaf(rng: random.Random, nerve, pool=GROUP_POOL) -> AbelianSheaf:
    """A valid sheaf: constant, globally scaled, or unimodularly twisted."""
    G = rng.choice(pool)
    style = rng.choice(("constant", "scaled", "twisted"))
    if style == "constant":
        return constant_sheaf(nerve, G)
    n = G.generators
    if style == "scaled":
        # one endomorphism used for every codim-1 restriction; composites agree
        M = random_matrix(rng, n, n, span=2)
        if not GroupMorphism(G, G, M).is_well_defined():
            M = IntMatrix.identity(n)
        groups = {s: G for s in nerve.all_simplices()}
        restr = {
            (face, s): GroupMorphism(G, G, M)
            for s in nerve.all_simplices()
            for face, _ in _codim1(s)
            if nerve.contains(face)
        }
        return AbelianSheaf(nerve, groups, restr)
    # twisted: restriction = P_s P_face^{-1} with unimodular potentials
    pots = {}
    for s in nerve.all_simplices():
        P = random_unimodular(rng, n)
        pots[s] = (P, _unimodular_inverse(P))
    groups = {s: G for s in nerve.all_simplices()}
    restr = {}
    for s in nerve.all_simplices():
        for face, _ in _codim1(s):
            if nerve.contains(face):
                Ps, _ = pots[s]
                _, Pfinv = pots[face]
                restr[(face, s)] = GroupMorphism(G, G, Ps.mul(Pfinv))
    return AbelianSheaf(nerve, groups, restr)


def _codim1(s):
    return [(s[:k] + s[k + 1 :], k) for k in range(len(s))] if len(s) > 1 else []


def _unimodular_inverse(P: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular integer matrix via Gauss-Jordan over Q."""
    n = P.rows
    m = [[Fraction(P.at(i, j)) for j in range(n)] + [Fraction(int(i == k)) for k in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next(i for i in range(col, n) if m[i][col])
        m[col], m[pivot] = m[pivot], m[col]
        inv = 1 / m[col][col]
        m[col] = [v * inv for v in m[col]]
        for i in range(n):
            if i != col and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    rows = [[int(m[i][n + j]) for j in range(n)] for i in range(n)]
    return IntMatrix.from_rows(rows, cols=n)


def random_cochain(rng: random.Random, F: AbelianSheaf, p: int, span: int = 4) -> Cochain:
    values = {}
    for s in F.nerve.simplices(p):
        n = F.group_at(s).generators
        values[s] = tuple(rng.randint(-span, span) for _ in range(n))
    return Cochain(p, values)


# ---------------------------------------------------------------------------
# brute-force cohomology oracle (finite coefficient groups)


def brute_force_h_order(F: AbelianSheaf, p: int) -> tuple[int, int]:
    """(#cocycles, #coboundaries) in degree p by full enumeration."""
    cocycles = 0
    for w in _all_cochains(F, p):
        dw = coboundary(F, w)
        if _is_zero_cochain(F, dw):
            cocycles += 1
    if p == 0:
        return cocycles, 1
    images = set()
    for e in _all_cochains(F, p - 1):
        de = coboundary(F, e)
        images.add(_canonical(F, de))
    return cocycles, len(images)


def _all_cochains(F: AbelianSheaf, p: int):
    simplices = F.nerve.simplices(p)
    if not simplices:
        yield zero_cochain(F, p)
        return
    pools = [list(F.group_at(s).elements()) for s in simplices]
    for combo in itertools.product(*pools):
        yield Cochain(p, dict(zip(simplices, combo)))


def _canonical(F: AbelianSheaf, w: Cochain):
    return tuple(F.group_at(s).reduce(w.values[s]) for s in F.nerve.simplices(w.degree))


def _is_zero_cochain(F: AbelianSheaf, w: Cochain) -> bool:
    return all(F.group_at(s).is_zero(v) for s, v in w.values.items())


def projective_plane_nerve():
    """Nerve modelled on the 6-vertex triangulation of the real projective
    plane: chi = 6 - 15 + 10 = 1, integral H^2 has 2-torsion."""
    triangles = [
        (0, 1, 3), (0, 1, 4), (0, 2, 3), (0, 2, 5), (0, 4, 5),
        (1, 2, 4), (1, 2, 5), (1, 3, 5), (2, 3, 4), (3, 4, 5),
    ]
    subsets = set()
    for t in triangles:
        subsets.add(t)
        for a, b in itertools.combinations(t, 2):
            subsets.add((a, b))
        for a in t:
            subsets.add((a,))
    labels = tuple(f"U{i + 1}" for i in range(6))
    return build_nerve(Cover(labels, tuple(sorted(subsets))))


# ---------------------------------------------------------------------------
# random short exact sequences and extensions


def _sheaf_with_endomorphism(rng: random.Random, nerve):
    """A sheaf M together with a commuting endomorphism family (per simplex)."""
    G = rng.choice((FGAbelianGroup.free(1), FGAbelianGroup.free(2),
                    FGAbelianGroup.cyclic(2), FGAbelianGroup.cyclic(3)))
    n = G.generators
    phi_base = random_matrix(rng, n, n, span=2)
    if not GroupMorphism(G, G, phi_base).is_well_defined():
        phi_base = IntMatrix.from_rows([[2 if i == j else 0 for j in range(n)] for i in range(n)])
    if rng.random() < 0.5:
        M = constant_sheaf(nerve, G)
        phi = {s: GroupMorphism(G, G, phi_base) for s in nerve.all_simplices()}
        return M, phi
    pots = {s: random_unimodular(rng, n) for s in nerve.all_simplices()}
    inv = {s: _unimodular_inverse(P) for s, P in pots.items()}
    groups = {s: G for s in nerve.all_simplices()}
    restr = {}
    for s in nerve.all_simplices():
        for face, _ in _codim1(s):
            if nerve.contains(face):
                restr[(face, s)] = GroupMorphism(G, G, pots[s].mul(inv[face]))
    M = AbelianSheaf(nerve, groups, restr)
    phi = {
        s: GroupMorphism(G, G, pots[s].mul(phi_base).mul(inv[s]))
        for s in nerve.all_simplices()
    }
    return M, phi


def random_ses(rng: random.Random, nerve) -> ShortExactSequence:
    """0 -> image(phi) -> M -> M/image(phi) -> 0 for a random commuting phi."""
    M, phi = _sheaf_with_endomorphism(rng, nerve)
    n = next(iter(M.groups.values())).generators
    kernel_groups = {}
    quot_groups = {}
    inject = {}
    project = {}
    for s in nerve.all_simplices():
        K = preimage_lattice(phi[s])
        kernel_groups[s] = FGAbelianGroup(n, K)
        quot_groups[s] = FGAbelianGroup(
            n, hstack(M.group_at(s).relations, phi[s].matrix)
        )
    kernel_restr = {}
    quot_restr = {}
    for (face, s), r in M.restrictions.items():
        kernel_restr[(face, s)] = GroupMorphism(
            kernel_groups[face], kernel_groups[s], r.matrix
        )
        quot_restr[(face, s)] = GroupMorphism(
            quot_groups[face], quot_groups[s], r.matrix
        )
    L = AbelianSheaf(nerve, kernel_groups, kernel_restr)
    N = AbelianSheaf(nerve, quot_groups, quot_restr)
    for s in nerve.all_simplices():
        inject[s] = GroupMorphism(kernel_groups[s], M.group_at(s), phi[s].matrix)
        project[s] = GroupMorphism(
            M.group_at(s), quot_groups[s], IntMatrix.identity(n)
        )
    return ShortExactSequence(L, M, N, inject, project)


def split_ses(nerve, G_left: FGAbelianGroup, G_right: FGAbelianGroup) -> ShortExactSequence:
    """0 -> L -> L (+) N -> N -> 0 with the obvious section."""
    a, b = G_left.generators, G_right.generators
    middle_group = FGAbelianGroup(
        a + b,
        _block_diag_pair(G_left.relations, G_right.relations),
    )
    L = constant_sheaf(nerve, G_left)
    N = constant_sheaf(nerve, G_right)
    M = constant_sheaf(nerve, middle_group)
    incl = IntMatrix.from_rows(
        [[1 if i == j else 0 for j in range(a)] for i in range(a)]
        + [[0] * a for _ in range(b)],
        cols=a,
    )
    proj = IntMatrix.from_rows(
        [[1 if j == a + i else 0 for j in range(a + b)] for i in range(b)],
        cols=a + b,
    )
    inject = {s: GroupMorphism(G_left, middle_group, incl) for s in nerve.all_simplices()}
    project = {s: GroupMorphism(middle_group, G_right, proj) for s in nerve.all_simplices()}
    return ShortExactSequence(L, M, N, inject, project)


def _block_diag_pair(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    rows = []
    for i in range(A.rows):
        rows.append(list(A.row(i)) + [0] * B.cols)
    for i in range(B.rows):
        rows.append([0] * A.cols + list(B.row(i)))
    return IntMatrix.from_rows(rows, cols=A.cols + B.cols)


def free_cover_ses(seq: ShortExactSequence) -> ShortExactSequence:
    """0 -> relations -> free -> kernel-sheaf-of-seq -> 0, used for splicing."""
    nerve = seq.kernel.nerve
    Q = seq.kernel
    n = next(iter(Q.groups.values())).generators
    free_groups = {s: FGAbelianGroup.free(n) for s in nerve.all_simplices()}
    free_restr = {
        key: GroupMorphism(free_groups[key[0]], free_groups[key[1]], r.matrix)
        for key, r in Q.restrictions.items()
    }
    M1 = AbelianSheaf(nerve, free_groups, free_restr)
    rel_groups = {}
    rel_basis = {}
    for s in nerve.all_simplices():
        K = Q.group_at(s).relations  # independent columns by construction
        rel_basis[s] = K
        rel_groups[s] = FGAbelianGroup.free(K.cols)
    rel_restr = {}
    for (face, s), r in Q.restrictions.items():
        solver = SNFSolver(rel_basis[s])
        cols = []
        for j in range(rel_basis[face].cols):
            z = solver.solve(r.matrix.matvec(rel_basis[face].column(j)))
            assert z is not None
            cols.append(z)
        rel_restr[(face, s)] = GroupMorphism(
            rel_groups[face],
            rel_groups[s],
            IntMatrix.from_columns(cols, rows=rel_basis[s].cols),
        )
    L = AbelianSheaf(nerve, rel_groups, rel_restr)
    inject = {
        s: GroupMorphism(rel_groups[s], free_groups[s], rel_basis[s])
        for s in nerve.all_simplices()
    }
    project = {
        s: GroupMorphism(free_groups[s], Q.group_at(s), IntMatrix.identity(n))
        for s in nerve.all_simplices()
    }
    return ShortExactSequence(L, M1, Q, inject, project)


def random_two_step(rng: random.Random, nerve) -> tuple[TwoStepExtension, ShortExactSequence, ShortExactSequence]:
    high = random_ses(rng, nerve)
    low = free_cover_ses(high)
    return splice(low, high), low, high


def random_cocycle(rng: random.Random, F: AbelianSheaf, p: int) -> Cochain:
    """A cocycle: random combination of basis classes plus a coboundary."""
    h = cohomology(F, p)
    out = zero_cochain(F, p)
    for rep in h.cycle_basis:
        c = rng.randint(-2, 2)
        if c:
            out = cochain_add(out, cochain_scale(c, rep))
    if p >= 1:
        out = cochain_add(out, coboundary(F, random_cochain(rng, F, p - 1, span=2)))
    return out


# ---------------------------------------------------------------------------
# random descent data


def random_descent_datum(rng: random.Random, band: AbelianSheaf):
    from cechlib.descent import GerbeDescentDatum, TorsorMorphism

    nerve = band.nerve
    objects = {i: f"x{i}" for (i,) in nerve.simplices(0)}
    transitions = {}
    for e in nerve.simplices(1):
        i, j = e
        n = band.group_at(e).generators
        offset = tuple(rng.randint(-3, 3) for _ in range(n))
        transitions[e] = TorsorMorphism(objects[j], objects[i], offset)
    defect = random_cocycle(rng, band, 2)
    return GerbeDescentDatum(band, objects, transitions, defect)


def random_automorphism(rng: random.Random, D):
    """Data of an actual automorphism: coherent twist = transition + cocycle."""
    from cechlib.descent import AutomorphismDatum, TorsorMorphism

    band = D.band
    nerve = band.nerve
    image_labels = {i: f"h{i}" for (i,) in nerve.simplices(0)}
    connectors = {}
    for (i,) in nerve.simplices(0):
        n = band.group_at((i,)).generators
        connectors[i] = TorsorMorphism(
            D.objects[i], image_labels[i], tuple(rng.randint(-3, 3) for _ in range(n))
        )
    twist_shift = random_cocycle(rng, band, 1)
    twists = {}
    for e in nerve.simplices(1):
        i, j = e
        twists[e] = TorsorMorphism(
            image_labels[j],
            image_labels[i],
            tuple(
                a + b
                for a, b in zip(D.transitions[e].offset, twist_shift.values[e])
            ),
        )
    return AutomorphismDatum(D, image_labels, connectors, twists)
