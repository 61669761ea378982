"""Sheaves of abelian groups on a nerve.

A sheaf assigns a presented group to every simplex and a restriction
morphism to every codimension-1 face inclusion (from the face's group to
the simplex's group: smaller intersection, larger index set).  Deeper
restrictions are composites along the insert-smallest-missing-index chain,
which functoriality makes path independent; `validate_sheaf` checks exactly
that, plus well-definedness of every stored morphism.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .intlattice import FGAbelianGroup, GroupMorphism
from .nerve import Nerve, Simplex, faces


@dataclass(frozen=True)
class SheafIssue:
    kind: str  # "missing-restriction" | "endpoints" | "ill-defined" | "functoriality"
    location: tuple[Simplex, ...]
    message: str

    def __str__(self) -> str:
        where = " ".join(str(s) for s in self.location)
        return f"[{self.kind}] at {where}: {self.message}"


class AbelianSheaf:
    """Groups per simplex plus codim-1 restriction morphisms."""

    __slots__ = ("nerve", "groups", "restrictions", "_deep")

    def __init__(
        self,
        nerve: Nerve,
        groups: dict[Simplex, FGAbelianGroup],
        restrictions: dict[tuple[Simplex, Simplex], GroupMorphism],
    ):
        self.nerve = nerve
        self.groups = dict(groups)
        self.restrictions = dict(restrictions)
        self._deep: dict[tuple[Simplex, Simplex], GroupMorphism] = {}

    def group_at(self, s: Simplex) -> FGAbelianGroup:
        return self.groups[s]

    def restriction(self, face: Simplex, s: Simplex) -> GroupMorphism:
        """Restriction morphism along any inclusion face <= s (as index sets)."""
        if face == s:
            return GroupMorphism.identity(self.groups[s])
        key = (face, s)
        cached = self._deep.get(key)
        if cached is not None:
            return cached
        missing = [i for i in s if i not in face]
        if len(missing) + len(face) != len(s):
            raise ValueError(f"{face} is not a face of {s}")
        step = tuple(sorted(face + (missing[0],)))
        first = self.restrictions[(face, step)]
        morphism = self.restriction(step, s).compose(first)
        self._deep[key] = morphism
        return morphism


def constant_sheaf(nerve: Nerve, G: FGAbelianGroup) -> AbelianSheaf:
    """Same group everywhere, identity restrictions."""
    groups = {s: G for s in nerve.all_simplices()}
    restrictions = {}
    for s in nerve.all_simplices():
        for face, _ in faces(s):
            if face and nerve.contains(face):
                restrictions[(face, s)] = GroupMorphism.identity(G)
    return AbelianSheaf(nerve, groups, restrictions)


def validate_sheaf(F: AbelianSheaf) -> list[SheafIssue]:
    """Missing restrictions, wrong endpoints, ill-defined morphisms, and
    functoriality failures (the two codim-2 composites compared on
    generators).  An empty report means the sheaf is valid."""
    issues: list[SheafIssue] = []
    nerve = F.nerve
    for s in nerve.all_simplices():
        if s not in F.groups:
            issues.append(SheafIssue("missing-restriction", (s,), "no group assigned"))
    for s in nerve.all_simplices():
        for face, _ in faces(s):
            if not face or not nerve.contains(face):
                continue
            morphism = F.restrictions.get((face, s))
            if morphism is None:
                issues.append(
                    SheafIssue(
                        "missing-restriction", (face, s), "no restriction assigned"
                    )
                )
                continue
            if morphism.source != F.groups.get(face) or morphism.target != F.groups.get(s):
                issues.append(
                    SheafIssue(
                        "endpoints",
                        (face, s),
                        "restriction endpoints disagree with the assigned groups",
                    )
                )
                continue
            if not morphism.is_well_defined():
                issues.append(
                    SheafIssue(
                        "ill-defined",
                        (face, s),
                        "restriction does not preserve the source relations",
                    )
                )
    if issues:
        return issues
    # functoriality: for every codim-2 inclusion the two composites agree
    for s in nerve.all_simplices():
        if len(s) < 3:
            continue
        for deep in itertools.combinations(s, len(s) - 2):
            composites = []
            for mid, _ in faces(s):
                if set(deep) <= set(mid) and nerve.contains(mid):
                    composites.append(
                        (mid, F.restrictions[(mid, s)].compose(F.restrictions[(deep, mid)]))
                    )
            for (m1, c1), (m2, c2) in zip(composites, composites[1:]):
                if not c1.equal_on_generators(c2):
                    issues.append(
                        SheafIssue(
                            "functoriality",
                            (deep, s),
                            f"composites via {m1} and {m2} disagree",
                        )
                    )
    return issues
