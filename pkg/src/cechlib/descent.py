"""Gerbe descent data with an abelian band, in offset arithmetic.

Hom-sets between descent objects are torsors over the band: a morphism is a
designated basepoint plus an offset in the band group of the simplex where
it lives.  Composition adds offsets and composes basepoints; inversion
negates.  The only basepoint composites that fail to cancel are the ones
around triangles, and the datum records those explicitly as its
`basepoint_defect`.  With that bookkeeping, every cocycle computation below
is a literal composition of torsor morphisms.

Bands must be commutative; declaring a noncommutative band raises
`NonabelianBandError` at construction instead of silently conjugating.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .cech import Cochain, check_cochain, coboundary, is_cocycle
from .connecting import ShortExactSequence, exact_preimage
from .intlattice import GroupElement, vec_add, vec_neg
from .nerve import Simplex
from .sheaf import AbelianSheaf


class NonabelianBandError(ValueError):
    """Only sheaves of abelian groups can serve as bands here."""


class LabelMismatchError(ValueError):
    """Torsor morphisms were composed along inconsistent object labels."""


@dataclass(frozen=True)
class TorsorMorphism:
    """Arrow between descent objects: labels plus a band offset."""

    source_label: str
    target_label: str
    offset: GroupElement

    def compose(self, inner: "TorsorMorphism") -> "TorsorMorphism":
        """self after inner; offsets add, basepoints compose."""
        if inner.target_label != self.source_label:
            raise LabelMismatchError(
                f"cannot compose {self.source_label}->{self.target_label} "
                f"after {inner.source_label}->{inner.target_label}"
            )
        return TorsorMorphism(
            inner.source_label, self.target_label, vec_add(self.offset, inner.offset)
        )

    def invert(self) -> "TorsorMorphism":
        return TorsorMorphism(self.target_label, self.source_label, vec_neg(self.offset))


class GerbeDescentDatum:
    """Objects per vertex, transition morphisms per edge, triangle defects.

    Transitions are stored on edges (i, j) with i < j, directed from the
    object at j to the object at i; the opposite orientation is the inverse.
    `basepoint_defect` is the degree-2 cochain of offsets picked up by the
    composite of basepoint morphisms around each triangle.
    """

    def __init__(
        self,
        band: AbelianSheaf,
        objects: dict[int, str],
        transitions: dict[Simplex, TorsorMorphism],
        basepoint_defect: Cochain,
        band_commutative: bool = True,
    ):
        if not band_commutative:
            raise NonabelianBandError(
                "noncommutative bands are out of scope: the offset arithmetic "
                "below absorbs conjugation only when the band is abelian"
            )
        self.band = band
        self.objects = dict(objects)
        self.transitions = dict(transitions)
        if basepoint_defect.degree != 2:
            raise ValueError("basepoint defect must be a degree-2 cochain")
        check_cochain(band, basepoint_defect)
        self.basepoint_defect = basepoint_defect
        for (i,) in band.nerve.simplices(0):
            if i not in self.objects:
                raise ValueError(f"no object label at vertex {i}")
        for e in band.nerve.simplices(1):
            t = self.transitions.get(e)
            if t is None:
                raise ValueError(f"no transition on edge {e}")
            i, j = e
            if t.source_label != self.objects[j] or t.target_label != self.objects[i]:
                raise LabelMismatchError(
                    f"transition on {e} should go {self.objects[j]} -> {self.objects[i]}"
                )
            if len(t.offset) != band.group_at(e).generators:
                raise ValueError(f"offset length mismatch on edge {e}")

    def transition(self, i: int, j: int) -> TorsorMorphism:
        """Arrow from the object at j to the object at i, either orientation."""
        if i < j:
            return self.transitions[(i, j)]
        return self.transitions[(j, i)].invert()


@dataclass(frozen=True)
class TransitionCocycle:
    cochain: Cochain
    is_cocycle: bool


def transition_cocycle(D: GerbeDescentDatum) -> TransitionCocycle:
    """Composite of the three transitions around each triangle, plus the
    basepoint defect; the verdict checks the degree-2 cocycle identity."""
    band = D.band
    values: dict[Simplex, GroupElement] = {}
    for t in band.nerve.simplices(2):
        i, j, k = t
        loop = (
            _restrict(D, (min(i, k), max(i, k)), t, D.transition(k, i))
            .compose(_restrict(D, (i, j), t, D.transition(i, j)))
            .compose(_restrict(D, (j, k), t, D.transition(j, k)))
        )
        if loop.source_label != loop.target_label:
            raise LabelMismatchError(f"triangle {t} does not close up")
        values[t] = vec_add(loop.offset, D.basepoint_defect.values[t])
    c = Cochain(2, values)
    return TransitionCocycle(c, is_cocycle(band, c))


def _restrict(
    D: GerbeDescentDatum, edge: Simplex, simplex: Simplex, m: TorsorMorphism
) -> TorsorMorphism:
    r = D.band.restriction(edge, simplex)
    return TorsorMorphism(m.source_label, m.target_label, r.apply(m.offset))


class AutomorphismDatum:
    """Data of an automorphism over the identity: where objects go, an arrow
    into each image object, and the images of the connecting morphisms."""

    def __init__(
        self,
        datum: GerbeDescentDatum,
        image_labels: dict[int, str],
        connectors: dict[int, TorsorMorphism],
        twists: dict[Simplex, TorsorMorphism],
    ):
        self.datum = datum
        self.image_labels = dict(image_labels)
        self.connectors = dict(connectors)
        self.twists = dict(twists)
        nerve = datum.band.nerve
        for (i,) in nerve.simplices(0):
            l = self.connectors.get(i)
            if l is None:
                raise ValueError(f"no connector at vertex {i}")
            if l.source_label != datum.objects[i] or l.target_label != self.image_labels[i]:
                raise LabelMismatchError(
                    f"connector at {i} should go "
                    f"{datum.objects[i]} -> {self.image_labels[i]}"
                )
            if len(l.offset) != datum.band.group_at((i,)).generators:
                raise ValueError(f"connector offset length mismatch at vertex {i}")
        for e in nerve.simplices(1):
            i, j = e
            tw = self.twists.get(e)
            if tw is None:
                raise ValueError(f"no twist on edge {e}")
            if (
                tw.source_label != self.image_labels[j]
                or tw.target_label != self.image_labels[i]
            ):
                raise LabelMismatchError(
                    f"twist on {e} should go "
                    f"{self.image_labels[j]} -> {self.image_labels[i]}"
                )
            if len(tw.offset) != datum.band.group_at(e).generators:
                raise ValueError(f"twist offset length mismatch on edge {e}")


@dataclass(frozen=True)
class AutomorphismCocycle:
    cochain: Cochain
    is_cocycle: bool


def automorphism_to_cocycle(
    D: GerbeDescentDatum, A: AutomorphismDatum
) -> AutomorphismCocycle:
    """Per edge, the automorphism  l_j^{-1} o twist^{-1} o l_i o g_ij  of the
    object at j, as a band offset; a coherent twist always yields a cocycle."""
    band = D.band
    values: dict[Simplex, GroupElement] = {}
    for e in band.nerve.simplices(1):
        i, j = e
        li = _restrict_vertex(D, i, e, A.connectors[i])
        lj = _restrict_vertex(D, j, e, A.connectors[j])
        loop = (
            lj.invert()
            .compose(A.twists[e].invert())
            .compose(li)
            .compose(D.transition(i, j))
        )
        if loop.source_label != loop.target_label:
            raise LabelMismatchError(f"automorphism square on {e} does not close up")
        values[e] = loop.offset
    c = Cochain(1, values)
    return AutomorphismCocycle(c, is_cocycle(band, c))


def _restrict_vertex(
    D: GerbeDescentDatum, vertex: int, edge: Simplex, m: TorsorMorphism
) -> TorsorMorphism:
    r = D.band.restriction((vertex,), edge)
    return TorsorMorphism(m.source_label, m.target_label, r.apply(m.offset))


@dataclass(frozen=True)
class GerbeClassifyingCocycle:
    cocycle: Cochain          # degree 3, valued in the kernel sheaf
    lift: Cochain             # degree 2, in the middle sheaf
    boundary: Cochain         # degree 3, in the middle sheaf
    transition: TransitionCocycle
    is_cocycle: bool


def gerbe21_classifying(
    D: GerbeDescentDatum, seq: ShortExactSequence
) -> GerbeClassifyingCocycle:
    """Classifying degree-3 cocycle of a gerbe-torsor.

    The datum's band must be the quotient sheaf of `seq`.  Each triangle
    value of the transition cocycle is lifted into the middle sheaf, the
    Cech boundary is taken there, and the result is pulled back through the
    injection on every tetrahedron.  This is the same lift-then-boundary
    walk as `connecting_map`, written out against the descent data; the two
    code paths must agree.
    """
    trans = transition_cocycle(D)
    if not trans.is_cocycle:
        raise ValueError("transition data is not a cocycle in the quotient sheaf")
    band = D.band
    lift_values: dict[Simplex, GroupElement] = {}
    for t in band.nerve.simplices(2):
        lift_values[t] = exact_preimage(seq.project[t], trans.cochain.values[t])
    lift = Cochain(2, lift_values)
    db = coboundary(seq.middle, lift)
    out_values = {s: exact_preimage(seq.inject[s], v) for s, v in db.values.items()}
    out = Cochain(3, out_values)
    return GerbeClassifyingCocycle(
        cocycle=out,
        lift=lift,
        boundary=db,
        transition=trans,
        is_cocycle=is_cocycle(seq.kernel, out),
    )
