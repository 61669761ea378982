"""Short exact sequences of sheaves and lift-then-boundary constructions.

`connecting_map` realizes the degree-raising map of a short exact sequence
0 -> L -> M -> N -> 0: lift a cocycle of N simplex by simplex into M, take
the coboundary there, and pull the result back through the injection.
`staged_connecting` does the same through a four-term extension
L -> A -> B -> N, raising the degree by two; on spliced pairs of short
sequences it agrees with the composition of the two connecting maps.

Lifts are solved with the deterministic minimal-witness rule; callers can
inject their own `LiftingChoice` per simplex, which the choice-independence
properties exercise.  Every result carries its full lift transcript.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .cech import (
    Cochain,
    CochainSpace,
    coboundary,
    cohomology,
    is_cocycle,
)
from .intlattice import (
    FGAbelianGroup,
    GroupElement,
    GroupMorphism,
    IntMatrix,
    SNFSolver,
    hstack,
    lattice_equal,
    preimage_lattice,
)
from .nerve import Simplex, faces
from .sheaf import AbelianSheaf


class LiftError(ValueError):
    """A per-simplex exact-preimage solve failed; the sequence is not exact."""


@dataclass(frozen=True)
class SequenceIssue:
    kind: str
    simplex: tuple
    message: str

    def __str__(self) -> str:
        return f"[{self.kind}] at {self.simplex}: {self.message}"


@dataclass(frozen=True)
class ShortExactSequence:
    """0 -> kernel -> middle -> quotient -> 0 on a common nerve."""

    kernel: AbelianSheaf
    middle: AbelianSheaf
    quotient: AbelianSheaf
    inject: dict[Simplex, GroupMorphism]
    project: dict[Simplex, GroupMorphism]


# LiftingChoice: partial map simplex -> middle coordinates lying over the
# cocycle value there; missing simplices fall back to the deterministic solve.
LiftingChoice = dict[Simplex, GroupElement]


def _morphisms_commute(
    lower: GroupMorphism, upper: GroupMorphism, pre: GroupMorphism, post: GroupMorphism
) -> bool:
    """post o lower == upper o pre, compared modulo target relations."""
    return post.compose(lower).equal_on_generators(upper.compose(pre))


def validate_exact(seq: ShortExactSequence) -> list[SequenceIssue]:
    """Per-simplex injectivity / surjectivity / im = ker, and compatibility
    of both structure maps with restrictions.  Empty report means exact."""
    issues: list[SequenceIssue] = []
    nerve = seq.kernel.nerve
    for s in nerve.all_simplices():
        iota = seq.inject.get(s)
        pi = seq.project.get(s)
        if iota is None or pi is None:
            issues.append(SequenceIssue("missing-map", s, "structure map not assigned"))
            continue
        if not iota.is_well_defined() or not pi.is_well_defined():
            issues.append(SequenceIssue("ill-defined", s, "structure map not well defined"))
            continue
        ker_lattice = preimage_lattice(iota)
        if not FGAbelianGroup(
            ker_lattice.cols,
            _express_in(ker_lattice, seq.kernel.group_at(s).relations),
        ).is_trivial():
            issues.append(SequenceIssue("not-injective", s, "kernel of the injection is nonzero"))
        im_pi_plus_rel = hstack(pi.matrix, seq.quotient.group_at(s).relations)
        if not lattice_equal(
            im_pi_plus_rel,
            hstack(
                IntMatrix.identity(seq.quotient.group_at(s).generators),
                seq.quotient.group_at(s).relations,
            ),
        ):
            issues.append(SequenceIssue("not-surjective", s, "projection misses part of the quotient"))
        image_lattice = hstack(iota.matrix, seq.middle.group_at(s).relations)
        kernel_lattice = preimage_lattice(pi)
        if not lattice_equal(image_lattice, kernel_lattice):
            issues.append(SequenceIssue("im-ker-mismatch", s, "image of injection differs from kernel of projection"))
    for s in nerve.all_simplices():
        for face, _ in faces(s):
            if not face or not nerve.contains(face):
                continue
            if not _morphisms_commute(
                seq.inject[face],
                seq.inject[s],
                seq.kernel.restrictions[(face, s)],
                seq.middle.restrictions[(face, s)],
            ):
                issues.append(SequenceIssue("restriction", (face, s), "injection does not commute with restrictions"))
            if not _morphisms_commute(
                seq.project[face],
                seq.project[s],
                seq.middle.restrictions[(face, s)],
                seq.quotient.restrictions[(face, s)],
            ):
                issues.append(SequenceIssue("restriction", (face, s), "projection does not commute with restrictions"))
    return issues


def _express_in(basis: IntMatrix, generators: IntMatrix) -> IntMatrix:
    solver = SNFSolver(basis)
    cols = []
    for j in range(generators.cols):
        z = solver.solve(generators.column(j))
        if z is None:
            raise ValueError("generator outside the lattice")
        cols.append(z)
    return IntMatrix.from_columns(cols, rows=basis.cols)


def exact_preimage(
    f: GroupMorphism, value: GroupElement, override: Optional[GroupElement] = None
) -> GroupElement:
    """Some x with f(x) = value modulo target relations (deterministic)."""
    if override is not None:
        if not f.target.equal(f.apply(override), value):
            raise LiftError("injected lifting choice does not lie over the value")
        return override
    system = hstack(f.matrix, f.target.relations)
    x = SNFSolver(system).solve(value)
    if x is None:
        raise LiftError("exact preimage solve failed; sequence is not exact here")
    return x[: f.source.generators]


@dataclass(frozen=True)
class ConnectingResult:
    """Output cocycle plus the full provenance of every lift choice."""

    cocycle: Cochain          # degree p+1, in the kernel sheaf
    lift: Cochain             # degree p, in the middle sheaf
    boundary: Cochain         # degree p+1, in the middle sheaf
    is_cocycle: bool


def connecting_map(
    seq: ShortExactSequence,
    c: Cochain,
    lifting: Optional[LiftingChoice] = None,
) -> ConnectingResult:
    """Lift, take the boundary, pull back; the class of the output in the
    kernel sheaf is independent of the lift."""
    if not is_cocycle(seq.quotient, c):
        raise ValueError("input is not a cocycle of the quotient sheaf")
    lifting = lifting or {}
    lift_values: dict[Simplex, GroupElement] = {}
    for s in seq.quotient.nerve.simplices(c.degree):
        lift_values[s] = exact_preimage(seq.project[s], c.values[s], lifting.get(s))
    lift = Cochain(c.degree, lift_values)
    db = coboundary(seq.middle, lift)
    out_values: dict[Simplex, GroupElement] = {}
    for s, v in db.values.items():
        out_values[s] = exact_preimage(seq.inject[s], v)
    out = Cochain(c.degree + 1, out_values)
    return ConnectingResult(
        cocycle=out,
        lift=lift,
        boundary=db,
        is_cocycle=is_cocycle(seq.kernel, out),
    )


@dataclass(frozen=True)
class ObstructionQuotient:
    """H^p(quotient) / image(H^p(middle)), with the projection from H^p."""

    group: FGAbelianGroup
    projection: GroupMorphism          # from the H^p(quotient) presentation
    quotient_cohomology: object        # CohomologyGroup of the quotient sheaf


def obstruction_quotient(seq: ShortExactSequence, p: int) -> ObstructionQuotient:
    """Classes of the quotient sheaf modulo those visible from the middle:
    a class dies here exactly when it lifts, i.e. when its connecting image
    is trivial for the right reasons."""
    hn = cohomology(seq.quotient, p)
    hm = cohomology(seq.middle, p)
    image_cols = []
    for rep in hm.cycle_basis:
        pushed = Cochain(
            p,
            {s: seq.project[s].apply(v) for s, v in rep.values.items()},
        )
        image_cols.append(hn.class_of(pushed))
    extra = IntMatrix.from_columns(image_cols, rows=hn.group.generators)
    group = FGAbelianGroup(
        hn.group.generators, hstack(hn.group.relations, extra)
    )
    projection = GroupMorphism(
        hn.group, group, IntMatrix.identity(hn.group.generators)
    )
    return ObstructionQuotient(group=group, projection=projection, quotient_cohomology=hn)


@dataclass(frozen=True)
class TwoStepExtension:
    """Exact four-term sequence kernel -> first -> second -> quotient."""

    kernel: AbelianSheaf
    first: AbelianSheaf
    second: AbelianSheaf
    quotient: AbelianSheaf
    inject: dict[Simplex, GroupMorphism]    # kernel -> first
    middle: dict[Simplex, GroupMorphism]    # first -> second
    project: dict[Simplex, GroupMorphism]   # second -> quotient


def validate_two_step(ext: TwoStepExtension) -> list[SequenceIssue]:
    issues: list[SequenceIssue] = []
    nerve = ext.kernel.nerve
    for s in nerve.all_simplices():
        iota, mid, pi = ext.inject[s], ext.middle[s], ext.project[s]
        for name, f in (("inject", iota), ("middle", mid), ("project", pi)):
            if not f.is_well_defined():
                issues.append(SequenceIssue("ill-defined", s, f"{name} map not well defined"))
        ker_lattice = preimage_lattice(iota)
        if not FGAbelianGroup(
            ker_lattice.cols, _express_in(ker_lattice, ext.kernel.group_at(s).relations)
        ).is_trivial():
            issues.append(SequenceIssue("not-injective", s, "kernel of the first map is nonzero"))
        if not lattice_equal(
            hstack(iota.matrix, ext.first.group_at(s).relations), preimage_lattice(mid)
        ):
            issues.append(SequenceIssue("exactness", s, "sequence fails to be exact at the first middle sheaf"))
        if not lattice_equal(
            hstack(mid.matrix, ext.second.group_at(s).relations), preimage_lattice(pi)
        ):
            issues.append(SequenceIssue("exactness", s, "sequence fails to be exact at the second middle sheaf"))
        q = ext.quotient.group_at(s)
        if not lattice_equal(
            hstack(pi.matrix, q.relations),
            hstack(IntMatrix.identity(q.generators), q.relations),
        ):
            issues.append(SequenceIssue("not-surjective", s, "last map misses part of the quotient"))
    for s in nerve.all_simplices():
        for face, _ in faces(s):
            if not face or not nerve.contains(face):
                continue
            triples = (
                (ext.inject, ext.kernel, ext.first),
                (ext.middle, ext.first, ext.second),
                (ext.project, ext.second, ext.quotient),
            )
            for maps, src, tgt in triples:
                if not _morphisms_commute(
                    maps[face], maps[s],
                    src.restrictions[(face, s)], tgt.restrictions[(face, s)],
                ):
                    issues.append(SequenceIssue("restriction", (face, s), "map does not commute with restrictions"))
    return issues


@dataclass(frozen=True)
class StagedResult:
    cocycle: Cochain           # degree p+2, in the kernel sheaf
    lift: Cochain              # degree p, in the second middle sheaf
    first_boundary: Cochain    # degree p+1, in the second middle sheaf
    pullback: Cochain          # degree p+1, in the first middle sheaf
    second_boundary: Cochain   # degree p+2, in the first middle sheaf
    is_cocycle: bool


def staged_connecting(
    ext: TwoStepExtension,
    c: Cochain,
    lifting: Optional[LiftingChoice] = None,
    stage_two_lifting: Optional[LiftingChoice] = None,
) -> StagedResult:
    """Two lift-then-boundary stages; the class of the degree p+2 output is
    independent of both families of choices."""
    if not is_cocycle(ext.quotient, c):
        raise ValueError("input is not a cocycle of the quotient sheaf")
    lifting = lifting or {}
    stage_two_lifting = stage_two_lifting or {}
    lift_values = {
        s: exact_preimage(ext.project[s], c.values[s], lifting.get(s))
        for s in ext.quotient.nerve.simplices(c.degree)
    }
    lift = Cochain(c.degree, lift_values)
    db = coboundary(ext.second, lift)
    pull_values = {
        s: exact_preimage(ext.middle[s], v, stage_two_lifting.get(s))
        for s, v in db.values.items()
    }
    pullback = Cochain(c.degree + 1, pull_values)
    da = coboundary(ext.first, pullback)
    out_values = {s: exact_preimage(ext.inject[s], v) for s, v in da.values.items()}
    out = Cochain(c.degree + 2, out_values)
    return StagedResult(
        cocycle=out,
        lift=lift,
        first_boundary=db,
        pullback=pullback,
        second_boundary=da,
        is_cocycle=is_cocycle(ext.kernel, out),
    )


def splice(low: ShortExactSequence, high: ShortExactSequence) -> TwoStepExtension:
    """Join 0 -> L -> M1 -> Q -> 0 and 0 -> Q -> M2 -> N -> 0 along Q.

    The middle map is the composite M1 -> Q -> M2; the staged connecting map
    of the splice computes the composition of the two connecting maps.
    """
    nerve = low.kernel.nerve
    middle_maps = {}
    for s in nerve.all_simplices():
        if low.quotient.group_at(s) != high.kernel.group_at(s):
            raise ValueError(f"sequences do not share the joining sheaf at {s}")
        middle_maps[s] = high.inject[s].compose(
            GroupMorphism(
                low.middle.group_at(s),
                high.kernel.group_at(s),
                low.project[s].matrix,
            )
        )
    return TwoStepExtension(
        kernel=low.kernel,
        first=low.middle,
        second=high.middle,
        quotient=high.quotient,
        inject=low.inject,
        middle=middle_maps,
        project=high.project,
    )
