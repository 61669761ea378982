"""Cech cochains, the alternating coboundary, cohomology, and witnesses.

Sign convention: simplices carry strictly increasing indices and

    (d w)_{i_0..i_{p+1}} = sum_k (-1)^k  res(w_{i_0..^i_k..i_{p+1}})

with `res` the sheaf restriction from the omitted face into the simplex.
Cocycle and witness questions are flattened into one block integer linear
system over the generator coordinates of all simplices and solved through
the Smith-form machinery, so both answers come with exact certificates:
a witness cochain, or a row combination proving infeasibility.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .intlattice import (
    FGAbelianGroup,
    GroupElement,
    InfeasibilityCertificate,
    IntMatrix,
    SNFSolver,
    block_diag,
    hstack,
    lattice_basis,
    smith_normal_form,
    vec_add,
    vec_neg,
    vec_scale,
    vec_sub,
    zero_vec,
)
from .nerve import Simplex, faces
from .sheaf import AbelianSheaf


@dataclass(frozen=True)
class Cochain:
    """Degree-p assignment of group coordinates to the p-simplices."""

    degree: int
    values: dict[Simplex, GroupElement]

    def value(self, s: Simplex) -> GroupElement:
        return self.values[s]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Cochain)
            and self.degree == other.degree
            and self.values == other.values
        )


def zero_cochain(F: AbelianSheaf, p: int) -> Cochain:
    return Cochain(p, {s: F.group_at(s).zero() for s in F.nerve.simplices(p)})


def cochain_add(a: Cochain, b: Cochain) -> Cochain:
    if a.degree != b.degree:
        raise ValueError("degree mismatch")
    return Cochain(a.degree, {s: vec_add(v, b.values[s]) for s, v in a.values.items()})


def cochain_sub(a: Cochain, b: Cochain) -> Cochain:
    if a.degree != b.degree:
        raise ValueError("degree mismatch")
    return Cochain(a.degree, {s: vec_sub(v, b.values[s]) for s, v in a.values.items()})


def cochain_neg(a: Cochain) -> Cochain:
    return Cochain(a.degree, {s: vec_neg(v) for s, v in a.values.items()})


def cochain_scale(c: int, a: Cochain) -> Cochain:
    return Cochain(a.degree, {s: vec_scale(c, v) for s, v in a.values.items()})


def check_cochain(F: AbelianSheaf, w: Cochain) -> None:
    simplices = F.nerve.simplices(w.degree)
    for s in simplices:
        v = w.values.get(s)
        if v is None:
            raise ValueError(f"no value for simplex {s}")
        if len(v) != F.group_at(s).generators:
            raise ValueError(
                f"value at {s} has length {len(v)}, expected {F.group_at(s).generators}"
            )
    for s in w.values:
        if s not in simplices:
            raise ValueError(f"{s} is not a {w.degree}-simplex of the nerve")


class CochainSpace:
    """Flattened presentation of C^p: one generator block per simplex."""

    def __init__(self, F: AbelianSheaf, p: int):
        self.sheaf = F
        self.degree = p
        self.simplices = F.nerve.simplices(p)
        self.offsets: dict[Simplex, int] = {}
        total = 0
        for s in self.simplices:
            self.offsets[s] = total
            total += F.group_at(s).generators
        self.total = total
        self.relations = block_diag([F.group_at(s).relations for s in self.simplices]) \
            if self.simplices else IntMatrix.zeros(0, 0)
        self.group = FGAbelianGroup(total, self.relations)

    def flatten(self, w: Cochain) -> GroupElement:
        check_cochain(self.sheaf, w)
        out = [0] * self.total
        for s in self.simplices:
            base = self.offsets[s]
            for i, x in enumerate(w.values[s]):
                out[base + i] = x
        return tuple(out)

    def unflatten(self, v: GroupElement) -> Cochain:
        values = {}
        for s in self.simplices:
            base = self.offsets[s]
            n = self.sheaf.group_at(s).generators
            values[s] = tuple(v[base : base + n])
        return Cochain(self.degree, values)


def coboundary_matrix(F: AbelianSheaf, p: int) -> IntMatrix:
    """Matrix of d_p : C^p -> C^{p+1} on flattened coordinates."""
    src = CochainSpace(F, p)
    dst = CochainSpace(F, p + 1)
    rows = [[0] * src.total for _ in range(dst.total)]
    for t in dst.simplices:
        rbase = dst.offsets[t]
        for face, pos in faces(t):
            if not F.nerve.contains(face):
                continue
            sign = -1 if pos % 2 else 1
            m = F.restrictions[(face, t)].matrix
            cbase = src.offsets[face]
            for i in range(m.rows):
                row = rows[rbase + i]
                for j in range(m.cols):
                    e = m.at(i, j)
                    if e:
                        row[cbase + j] += sign * e
    return IntMatrix.from_rows(rows, cols=src.total)


def coboundary(F: AbelianSheaf, w: Cochain) -> Cochain:
    """The alternating sum of restrictions; additive in w."""
    check_cochain(F, w)
    p = w.degree
    if p + 1 > F.nerve.dim_cap:
        raise ValueError(
            f"degree {p + 1} exceeds the nerve dimension cap {F.nerve.dim_cap}"
        )
    values: dict[Simplex, GroupElement] = {}
    for t in F.nerve.simplices(p + 1):
        acc = F.group_at(t).zero()
        for face, pos in faces(t):
            part = F.restrictions[(face, t)].apply(w.values[face])
            acc = vec_add(acc, part if pos % 2 == 0 else vec_neg(part))
        values[t] = acc
    return Cochain(p + 1, values)


def is_cocycle(F: AbelianSheaf, w: Cochain) -> bool:
    """True iff dw vanishes element-wise modulo the relations."""
    check_cochain(F, w)
    if w.degree + 1 > F.nerve.dim_cap:
        return True  # top of the truncated complex
    dw = coboundary(F, w)
    return all(F.group_at(s).is_zero(v) for s, v in dw.values.items())


class CohomologyGroup:
    """Presentation of H^p = ker d_p / im d_{p-1} with cocycle representatives."""

    def __init__(self, F: AbelianSheaf, p: int):
        self.sheaf = F
        self.degree = p
        self.space = CochainSpace(F, p)
        n = self.space.total

        if p + 1 <= F.nerve.dim_cap and F.nerve.simplices(p + 1):
            d_up = coboundary_matrix(F, p)
            up_relations = CochainSpace(F, p + 1).relations
            stacked = hstack(d_up, up_relations)
            snf = smith_normal_form(stacked)
            cols = [snf.V.column(j)[:n] for j in range(snf.rank, stacked.cols)]
            self.cocycle_lattice = lattice_basis(IntMatrix.from_columns(cols, rows=n))
        else:
            self.cocycle_lattice = IntMatrix.identity(n)

        if p >= 1 and F.nerve.simplices(p - 1):
            d_down = coboundary_matrix(F, p - 1)
            boundary_gens = hstack(d_down, self.space.relations)
        else:
            boundary_gens = self.space.relations

        self._basis_solver = SNFSolver(self.cocycle_lattice)
        rel_cols = []
        for j in range(boundary_gens.cols):
            z = self._basis_solver.solve(boundary_gens.column(j))
            if z is None:
                raise ValueError("boundary outside the cocycle lattice; invalid sheaf")
            rel_cols.append(z)
        rank = self.cocycle_lattice.cols
        self.group = FGAbelianGroup(
            rank, IntMatrix.from_columns(rel_cols, rows=rank)
        )
        self.cycle_basis = [
            self.space.unflatten(self.cocycle_lattice.column(j)) for j in range(rank)
        ]

    def class_of(self, w: Cochain) -> GroupElement:
        """Coordinates of [w] in this presentation; w must be a cocycle."""
        v = self.space.flatten(w)
        z = self._basis_solver.solve(v)
        if z is None:
            raise ValueError("not a cocycle")
        return self.group.reduce(z)

    def representative(self, coords: GroupElement) -> Cochain:
        if len(coords) != self.group.generators:
            raise ValueError("coordinate length mismatch")
        flat = zero_vec(self.space.total)
        for j, c in enumerate(coords):
            if c:
                flat = vec_add(flat, vec_scale(c, self.cocycle_lattice.column(j)))
        return self.space.unflatten(flat)

    def is_trivial_class(self, w: Cochain) -> bool:
        return self.group.is_zero(self.class_of(w))


def cohomology(F: AbelianSheaf, p: int) -> CohomologyGroup:
    """H^p of a validated sheaf, with representative cocycles."""
    return CohomologyGroup(F, p)


@dataclass(frozen=True)
class WitnessOutcome:
    """Result of a coboundary-witness search.

    Exactly one of `witness` / `infeasibility` is set.  The infeasibility
    certificate refers to the stacked system [d_{p-1} | relations] in the
    flattened coordinates of C^p (simplices in lexicographic order).
    """

    witness: Optional[Cochain]
    infeasibility: Optional[InfeasibilityCertificate]


def witness_system(F: AbelianSheaf, p: int) -> tuple[IntMatrix, CochainSpace, int]:
    """The stacked system whose solvability decides exactness in degree p.

    Returns (matrix, target space, column count of the d-block).
    """
    target = CochainSpace(F, p)
    if p >= 1 and F.nerve.simplices(p - 1):
        d_down = coboundary_matrix(F, p - 1)
        return hstack(d_down, target.relations), target, d_down.cols
    return target.relations, target, 0


def coboundary_witness_certified(F: AbelianSheaf, w: Cochain) -> WitnessOutcome:
    if not is_cocycle(F, w):
        raise ValueError("input is not a cocycle")
    system, target, d_cols = witness_system(F, w.degree)
    b = target.flatten(w)
    x, cert = SNFSolver(system).solve_certified(b)
    if x is None:
        return WitnessOutcome(None, cert)
    if w.degree >= 1 and F.nerve.simplices(w.degree - 1):
        lower = CochainSpace(F, w.degree - 1)
        eta = lower.unflatten(x[:d_cols])
    else:
        eta = Cochain(w.degree - 1, {})
    return WitnessOutcome(eta, None)


def coboundary_witness(F: AbelianSheaf, w: Cochain) -> Optional[Cochain]:
    """A cochain eta with d(eta) = w modulo relations, or None if the class
    of w is nonzero (certified through the Smith form, not a search
    timeout)."""
    return coboundary_witness_certified(F, w).witness
