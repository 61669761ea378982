"""Exact projective geometry over the rationals on P^0, P^1 and P^2.

Points and lines are primitive integer vectors with a canonical sign, so
equality is coordinate equality and intersections are cross products.
Rational functions are degree-zero multiplicative combinations of linear
forms; cycle maps send tuples of them to divisors by expanding principal
divisors and intersecting pairwise, with proportional pairs contributing
zero and components outside the working charts dropped.

The window machinery truncates the infinitely generated function and cycle
sheaves of a projective space to finitely generated models over the
standard chart cover: monomials in a chosen finite set of forms upstairs,
the cycles they can cut out downstairs, and the kernel in between,
assembled into a short exact sequence per chart intersection.  Every
nontriviality statement downstream of a window is relative to it, and the
certificates say so.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd
from typing import Optional

from .cech import (
    Cochain,
    WitnessOutcome,
    coboundary_witness_certified,
    cohomology,
    is_cocycle,
)
from .connecting import (
    ConnectingResult,
    ObstructionQuotient,
    ShortExactSequence,
    connecting_map,
    obstruction_quotient,
    validate_exact,
)
from .intlattice import (
    FGAbelianGroup,
    GroupElement,
    GroupMorphism,
    IntMatrix,
    SNFSolver,
    preimage_lattice,
    vec_sub,
)
from .nerve import Cover, Nerve, Simplex, build_nerve
from .sheaf import AbelianSheaf


def _normalize(coords: tuple[int, ...]) -> tuple[int, ...]:
    if all(c == 0 for c in coords):
        raise ValueError("zero vector has no projective normalization")
    g = 0
    for c in coords:
        g = gcd(g, c)
    out = tuple(c // g for c in coords)
    lead = next(c for c in out if c != 0)
    if lead < 0:
        out = tuple(-c for c in out)
    return out


@dataclass(frozen=True, order=True)
class ProjPoint:
    """Point of projective space: primitive vector, first nonzero entry > 0."""

    coords: tuple[int, ...]

    @classmethod
    def of(cls, *coords: int) -> "ProjPoint":
        return cls(_normalize(tuple(coords)))

    @property
    def ambient(self) -> int:
        return len(self.coords) - 1

    def in_charts(self, charts: tuple[int, ...]) -> bool:
        return all(self.coords[i] != 0 for i in charts)

    def __str__(self) -> str:
        return "[" + ",".join(str(c) for c in self.coords) + "]"


@dataclass(frozen=True, order=True)
class LinearForm:
    """Integer linear form, primitive, first nonzero coefficient > 0."""

    coefficients: tuple[int, ...]

    @classmethod
    def of(cls, *coefficients: int) -> "LinearForm":
        return cls(_normalize(tuple(coefficients)))

    @classmethod
    def axis(cls, i: int, ambient: int) -> "LinearForm":
        return cls.of(*(1 if j == i else 0 for j in range(ambient + 1)))

    @property
    def ambient(self) -> int:
        return len(self.coefficients) - 1

    def contains(self, p: ProjPoint) -> bool:
        return sum(a * b for a, b in zip(self.coefficients, p.coords, strict=True)) == 0

    def meets_charts(self, charts: tuple[int, ...]) -> bool:
        """Whether the zero locus intersects the chart intersection U_S.

        For a line (or a point of P^1) this fails exactly when the form is
        one of the chart axes.
        """
        n = self.ambient
        return all(self != LinearForm.axis(i, n) for i in charts)

    def __str__(self) -> str:
        parts = []
        for i, c in enumerate(self.coefficients):
            if c == 0:
                continue
            name = f"X{i + 1}"
            if c == 1:
                term = name
            elif c == -1:
                term = f"-{name}"
            else:
                term = f"{c}{name}"
            if parts and c > 0:
                parts.append("+")
            parts.append(term)
        return "".join(parts)


def line_intersection(f: LinearForm, g: LinearForm) -> ProjPoint:
    """Common zero of two non-proportional forms on P^2 (cross product)."""
    if f.ambient != 2 or g.ambient != 2:
        raise ValueError("line intersection requires ambient dimension 2")
    a, b = f.coefficients, g.coefficients
    cross = (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )
    if all(c == 0 for c in cross):
        raise ValueError(f"proportional forms {f} and {g} have no unique intersection")
    return ProjPoint(_normalize(cross))


@dataclass(frozen=True)
class RationalFunctionRep:
    """Degree-zero multiplicative combination of linear forms."""

    terms: tuple[tuple[LinearForm, int], ...]

    def __post_init__(self) -> None:
        if sum(e for _, e in self.terms) != 0:
            raise ValueError("total degree of a rational function must be zero")
        forms = [f for f, _ in self.terms]
        if forms != sorted(forms) or len(set(forms)) != len(forms):
            raise ValueError("terms must be sorted with distinct forms")
        if any(e == 0 for _, e in self.terms):
            raise ValueError("zero exponents must be dropped")

    @classmethod
    def from_exponents(cls, pairs) -> "RationalFunctionRep":
        acc: dict[LinearForm, int] = {}
        for f, e in pairs:
            acc[f] = acc.get(f, 0) + e
        terms = tuple(sorted((f, e) for f, e in acc.items() if e))
        return cls(terms)

    @classmethod
    def quotient(cls, numerator: LinearForm, denominator: LinearForm) -> "RationalFunctionRep":
        return cls.from_exponents([(numerator, 1), (denominator, -1)])

    def mul(self, other: "RationalFunctionRep") -> "RationalFunctionRep":
        return RationalFunctionRep.from_exponents(self.terms + other.terms)

    def inv(self) -> "RationalFunctionRep":
        return RationalFunctionRep.from_exponents([(f, -e) for f, e in self.terms])

    def __str__(self) -> str:
        if not self.terms:
            return "1"
        return " * ".join(f"({f})^{e}" for f, e in self.terms)


@dataclass(frozen=True)
class Divisor:
    """Formal sum: codimension 1 over forms, codimension 2 over points."""

    codim: int
    terms: tuple[tuple[object, int], ...]  # sorted, no zero coefficients

    @classmethod
    def of(cls, codim: int, parts: dict) -> "Divisor":
        terms = tuple(sorted(((k, v) for k, v in parts.items() if v), key=lambda t: t[0]))
        return cls(codim, terms)

    def coefficient(self, item) -> int:
        for k, v in self.terms:
            if k == item:
                return v
        return 0

    def add(self, other: "Divisor") -> "Divisor":
        if self.codim != other.codim:
            raise ValueError("codimension mismatch")
        acc: dict = {}
        for k, v in self.terms + other.terms:
            acc[k] = acc.get(k, 0) + v
        return Divisor.of(self.codim, acc)

    def neg(self) -> "Divisor":
        return Divisor(self.codim, tuple((k, -v) for k, v in self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def restrict(self, charts: tuple[int, ...]) -> "Divisor":
        """Drop components missing the chart intersection."""
        kept: dict = {}
        for k, v in self.terms:
            if isinstance(k, ProjPoint):
                if k.in_charts(charts):
                    kept[k] = v
            else:
                if k.meets_charts(charts):
                    kept[k] = v
        return Divisor.of(self.codim, kept)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for k, v in self.terms:
            prefix = "" if v == 1 else ("-" if v == -1 else f"{v}*")
            bits.append(f"{prefix}[{k}]")
        return " + ".join(bits).replace("+ -", "- ")


def principal_divisor(h: RationalFunctionRep, charts: tuple[int, ...] = ()) -> Divisor:
    parts: dict = {}
    for f, e in h.terms:
        if f.meets_charts(charts):
            parts[f] = parts.get(f, 0) + e
    return Divisor.of(1, parts)


def intersection_product(
    a: RationalFunctionRep, b: RationalFunctionRep, charts: tuple[int, ...] = ()
) -> Divisor:
    """Pairwise intersections of components with product multiplicities;
    proportional pairs intersect improperly and contribute zero."""
    parts: dict = {}
    for f, ef in a.terms:
        for g, eg in b.terms:
            if f == g:
                continue
            if f.ambient != 2:
                continue  # no codimension-2 cycles below the plane
            p = line_intersection(f, g)
            if p.in_charts(charts):
                parts[p] = parts.get(p, 0) + ef * eg
    return Divisor.of(2, parts)


def cycle_map(h: tuple[RationalFunctionRep, ...], charts: tuple[int, ...] = ()) -> Divisor:
    """Intersection product of the principal divisors of the components."""
    if len(h) == 1:
        return principal_divisor(h[0], charts)
    if len(h) == 2:
        return intersection_product(h[0], h[1], charts)
    raise ValueError(f"unsupported codimension {len(h)}")


@dataclass(frozen=True)
class Window:
    """Finitely generated truncation data over the standard chart cover."""

    ambient: int
    forms: tuple[LinearForm, ...]
    points: tuple[ProjPoint, ...]

    def __post_init__(self) -> None:
        if sorted(set(self.forms)) != list(self.forms):
            raise ValueError("window forms must be sorted and distinct")
        if sorted(set(self.points)) != list(self.points):
            raise ValueError("window points must be sorted and distinct")
        for f in self.forms:
            if f.ambient != self.ambient:
                raise ValueError("form ambient mismatch")
        for p in self.points:
            if p.ambient != self.ambient:
                raise ValueError("point ambient mismatch")
        if self.ambient == 2:
            for f, g in itertools.combinations(self.forms, 2):
                if line_intersection(f, g) not in self.points:
                    raise ValueError(
                        f"window not intersection-closed: {f} and {g} meet "
                        f"outside the point list"
                    )

    def chart_labels(self) -> tuple[str, ...]:
        return tuple(f"U{i + 1}" for i in range(self.ambient + 1))

    def stamp(self) -> str:
        forms = ", ".join(str(f) for f in self.forms)
        points = ", ".join(str(p) for p in self.points)
        return (
            f"window-relative statement: P^{self.ambient} with forms {{{forms}}}"
            f" and points {{{points}}}; claims do not extend beyond this window"
        )


def make_window(
    ambient: int,
    forms: tuple[LinearForm, ...],
    points: Optional[tuple[ProjPoint, ...]] = None,
) -> Window:
    forms = tuple(sorted(set(forms)))
    if points is None:
        pts = set()
        if ambient == 2:
            for f, g in itertools.combinations(forms, 2):
                pts.add(line_intersection(f, g))
        points = tuple(sorted(pts))
    return Window(ambient, forms, tuple(sorted(set(points))))


def standard_p2_window() -> Window:
    """The coordinate lines and their differences: 6 forms, 7 points with
    0/1 coordinates."""
    forms = [LinearForm.axis(i, 2) for i in range(3)]
    forms += [
        LinearForm.of(1, -1, 0),
        LinearForm.of(1, 0, -1),
        LinearForm.of(0, 1, -1),
    ]
    return make_window(2, tuple(forms))


def standard_p1_window() -> Window:
    forms = [LinearForm.axis(0, 1), LinearForm.axis(1, 1), LinearForm.of(1, -1)]
    return make_window(1, tuple(forms))


def point_space_window() -> Window:
    """The one-chart model of a point: a single unit form, no cycles."""
    return make_window(0, (LinearForm.of(1),))


class WindowSequence:
    """Per-simplex short exact sequence  kernel -> monomials -> cycles.

    The monomial sheaf is constant: free on the degree-l multisets of the
    window forms (forms act as functions on every chart, so identical form
    data means identical sections).  The cycle sheaf is free on the window
    cycles inside each chart intersection, with drop restrictions, and the
    structure map sends each multiset to the cycle its forms cut out there.
    """

    def __init__(self, window: Window, power: int):
        if power not in (1, 2):
            raise ValueError(f"unsupported codimension {power}")
        self.window = window
        self.power = power
        labels = window.chart_labels()
        n_charts = len(labels)
        subsets = [
            tuple(s)
            for r in range(1, n_charts + 1)
            for s in itertools.combinations(range(n_charts), r)
        ]
        self.nerve = build_nerve(Cover(labels, tuple(subsets)), dim_cap=max(window.ambient, 1))
        m = len(window.forms)
        if power == 1:
            self.multisets: tuple[tuple[int, ...], ...] = tuple((i,) for i in range(m))
        else:
            self.multisets = tuple(
                (i, j) for i in range(m) for j in range(i, m)
            )
        self.monomial_group = FGAbelianGroup.free(len(self.multisets))
        self.lines_at: dict[Simplex, tuple[LinearForm, ...]] = {}
        self.points_at: dict[Simplex, tuple[ProjPoint, ...]] = {}
        self.cycle_groups: dict[Simplex, FGAbelianGroup] = {}
        self.kernel_groups: dict[Simplex, FGAbelianGroup] = {}
        self._kernel_basis: dict[Simplex, IntMatrix] = {}
        self._kernel_solver: dict[Simplex, SNFSolver] = {}
        structure: dict[Simplex, GroupMorphism] = {}
        inject: dict[Simplex, GroupMorphism] = {}

        for s in self.nerve.all_simplices():
            self.lines_at[s] = tuple(
                f for f in window.forms if f.meets_charts(s)
            )
            self.points_at[s] = tuple(
                p for p in window.points if p.in_charts(s)
            )
            basis = self.lines_at[s] if power == 1 else self.points_at[s]
            cycle_group = FGAbelianGroup.free(len(basis))
            self.cycle_groups[s] = cycle_group
            rows = [[0] * len(self.multisets) for _ in basis]
            for col, ms in enumerate(self.multisets):
                item = self._cut_item(ms)
                if item is not None and item in basis:
                    rows[basis.index(item)][col] = 1
            ch = IntMatrix.from_rows(rows, cols=len(self.multisets))
            structure[s] = GroupMorphism(self.monomial_group, cycle_group, ch)
            K = preimage_lattice(structure[s])
            self._kernel_basis[s] = K
            self._kernel_solver[s] = SNFSolver(K)
            self.kernel_groups[s] = FGAbelianGroup.free(K.cols)
            inject[s] = GroupMorphism(self.kernel_groups[s], self.monomial_group, K)

        mono_groups = {s: self.monomial_group for s in self.nerve.all_simplices()}
        mono_restr = {}
        cycle_restr = {}
        kernel_restr = {}
        for s in self.nerve.all_simplices():
            for face in itertools.combinations(s, len(s) - 1):
                if not face:
                    continue
                mono_restr[(face, s)] = GroupMorphism.identity(self.monomial_group)
                src = self.lines_at[face] if power == 1 else self.points_at[face]
                dst = self.lines_at[s] if power == 1 else self.points_at[s]
                rows = [[1 if x == y else 0 for y in src] for x in dst]
                cycle_restr[(face, s)] = GroupMorphism(
                    self.cycle_groups[face],
                    self.cycle_groups[s],
                    IntMatrix.from_rows(rows, cols=len(src)),
                )
                solver = self._kernel_solver[s]
                cols = []
                for j in range(self._kernel_basis[face].cols):
                    z = solver.solve(self._kernel_basis[face].column(j))
                    if z is None:
                        raise AssertionError("kernel fails to restrict; window broken")
                    cols.append(z)
                kernel_restr[(face, s)] = GroupMorphism(
                    self.kernel_groups[face],
                    self.kernel_groups[s],
                    IntMatrix.from_columns(cols, rows=self._kernel_basis[s].cols),
                )
        monomials = AbelianSheaf(self.nerve, mono_groups, mono_restr)
        cycles = AbelianSheaf(self.nerve, self.cycle_groups, cycle_restr)
        kernels = AbelianSheaf(self.nerve, self.kernel_groups, kernel_restr)
        self.sequence = ShortExactSequence(kernels, monomials, cycles, inject, structure)

    def _cut_item(self, ms: tuple[int, ...]):
        forms = self.window.forms
        if self.power == 1:
            return forms[ms[0]]
        i, j = ms
        if i == j or self.window.ambient != 2:
            return None  # improper or empty intersection
        return line_intersection(forms[i], forms[j])

    # -- coordinate helpers -------------------------------------------------

    def monomial_of_forms(self, forms: tuple[LinearForm, ...]) -> GroupElement:
        idx = tuple(sorted(self.window.forms.index(f) for f in forms))
        if len(idx) != self.power:
            raise ValueError(f"expected {self.power} forms")
        col = self.multisets.index(idx)
        return tuple(1 if k == col else 0 for k in range(len(self.multisets)))

    def cycle_coords(self, s: Simplex, divisor: Divisor) -> GroupElement:
        basis = self.lines_at[s] if self.power == 1 else self.points_at[s]
        out = [0] * len(basis)
        for item, coeff in divisor.terms:
            if item not in basis:
                raise ValueError(f"{item} is not a window cycle on {s}")
            out[basis.index(item)] = coeff
        return tuple(out)

    def cycle_divisor(self, s: Simplex, coords: GroupElement) -> Divisor:
        basis = self.lines_at[s] if self.power == 1 else self.points_at[s]
        return Divisor.of(self.power, dict(zip(basis, coords, strict=True)))

    def kernel_coords(self, s: Simplex, monomial_vec: GroupElement) -> GroupElement:
        z = self._kernel_solver[s].solve(monomial_vec)
        if z is None:
            raise ValueError("monomial vector does not cut the zero cycle here")
        return z

    def kernel_to_monomials(self, s: Simplex, coords: GroupElement) -> GroupElement:
        return self._kernel_basis[s].matvec(coords)


def symmetric_power_window(window: Window, power: int) -> WindowSequence:
    """Assemble the windowed kernel -> monomials -> cycles exact sequence."""
    return WindowSequence(window, power)


@dataclass(frozen=True)
class LciIssue:
    edge: Simplex
    message: str


@dataclass(frozen=True)
class LciResult:
    """Gap cocycle of chart-wise cutting data for one subvariety.

    `cochain` is the degree-1 kernel-sheaf cocycle F_j - F_i.  When its
    class vanishes, `global_monomial` is a single monomial-sheaf element
    restricting to every F_i, and `global_forms` names it as a cutting
    tuple whenever it is a plain multiset.
    """

    cochain: Optional[Cochain]
    is_cocycle: bool
    issues: tuple[LciIssue, ...]
    witness: Optional[Cochain]
    infeasibility: object
    global_monomial: Optional[GroupElement]
    global_forms: Optional[tuple[LinearForm, ...]]
    window_stamp: str


def lci_cocycle(ws: WindowSequence, equations: dict[int, tuple[LinearForm, ...]]) -> LciResult:
    """Compare chart-wise cutting tuples of the same subvariety.

    `equations[i]` is the tuple of window forms cutting the subvariety out
    on chart i.  Disagreements (data cutting different cycles on an
    overlap) are reported per edge; otherwise the differences form a
    kernel-valued 1-cocycle whose class vanishes exactly when one global
    monomial element cuts the subvariety on every chart.
    """
    nerve = ws.nerve
    F: dict[int, GroupElement] = {}
    for (i,) in nerve.simplices(0):
        if i not in equations:
            raise ValueError(f"no cutting data for chart {i}")
        F[i] = ws.monomial_of_forms(tuple(equations[i]))
    issues = []
    values: dict[Simplex, GroupElement] = {}
    for e in nerve.simplices(1):
        i, j = e
        diff = vec_sub(F[j], F[i])
        if not ws.cycle_groups[e].is_zero(ws.sequence.project[e].apply(diff)):
            issues.append(
                LciIssue(e, "chart data cut different cycles on this overlap")
            )
            continue
        values[e] = ws.kernel_coords(e, diff)
    if issues:
        return LciResult(
            cochain=None,
            is_cocycle=False,
            issues=tuple(issues),
            witness=None,
            infeasibility=None,
            global_monomial=None,
            global_forms=None,
            window_stamp=ws.window.stamp(),
        )
    h = Cochain(1, values)
    kernel_sheaf = ws.sequence.kernel
    verdict = is_cocycle(kernel_sheaf, h)
    outcome = coboundary_witness_certified(kernel_sheaf, h)
    global_monomial = None
    global_forms = None
    if outcome.witness is not None:
        candidates = set()
        for (i,) in nerve.simplices(0):
            eta = ws.kernel_to_monomials((i,), outcome.witness.values[(i,)])
            candidates.add(vec_sub(F[i], eta))
        assert len(candidates) == 1, "monomial sheaf is constant; witnesses must agree"
        global_monomial = candidates.pop()
        ones = [k for k, c in enumerate(global_monomial) if c == 1]
        if sum(abs(c) for c in global_monomial) == 1 and len(ones) == 1:
            global_forms = tuple(
                ws.window.forms[idx] for idx in ws.multisets[ones[0]]
            )
    return LciResult(
        cochain=h,
        is_cocycle=verdict,
        issues=(),
        witness=outcome.witness,
        infeasibility=outcome.infeasibility,
        global_monomial=global_monomial,
        global_forms=global_forms,
        window_stamp=ws.window.stamp(),
    )


@dataclass(frozen=True)
class PlaneGerbeBundle:
    """Everything the three-chart plane demo computes, claims and evidence."""

    window: Window
    sequence_window: WindowSequence
    exactness_issues: tuple
    weil_cocycle: Cochain
    expected_points: dict[Simplex, ProjPoint]
    intersections_match: bool
    triple_restrictions_zero: bool
    weil_is_cocycle: bool
    weil_witness: WitnessOutcome
    connecting: ConnectingResult
    connecting_witness: WitnessOutcome
    obstruction: ObstructionQuotient
    window_stamp: str

    def claims(self) -> list[tuple[str, bool]]:
        """Claim names with verdicts, in evaluation order."""
        return [
            ("edge-values-are-the-stated-line-intersections", self.intersections_match),
            ("window-sequence-exact", not self.exactness_issues),
            ("triple-overlap-restrictions-vanish", self.triple_restrictions_zero),
            ("edge-family-is-a-cocycle", self.weil_is_cocycle),
            ("cocycle-class-nontrivial-in-window", self.weil_witness.witness is None),
            ("connecting-image-is-kernel-valued-cocycle", self.connecting.is_cocycle),
            (
                "connecting-class-nontrivial-in-window",
                self.connecting_witness.witness is None,
            ),
            ("degree-1-obstruction-quotient-nonzero", not self.obstruction.group.is_trivial()),
        ]


def p2_gerbe_example() -> PlaneGerbeBundle:
    """Three-chart plane demo: the coordinate-point edge family, its cocycle
    verdict, the window witness search, the connecting image in the kernel
    sheaf, and the degree-1 obstruction quotient."""
    window = standard_p2_window()
    ws = symmetric_power_window(window, 2)
    nerve = ws.nerve
    exactness = tuple(validate_exact(ws.sequence))

    expected: dict[Simplex, ProjPoint] = {}
    matches = True
    values: dict[Simplex, GroupElement] = {}
    for e in nerve.simplices(1):
        i, j = e
        k = next(t for t in range(3) if t not in e)
        difference = LinearForm.of(
            *(1 if t == i else (-1 if t == j else 0) for t in range(3))
        )
        axis = LinearForm.axis(k, 2)
        point = line_intersection(difference, axis)
        expected[e] = point
        coordinate_point = ProjPoint.of(*(1 if t in e else 0 for t in range(3)))
        matches = matches and point == coordinate_point
        values[e] = ws.cycle_coords(e, Divisor.of(2, {point: 1}))
    weil = Cochain(1, values)

    cycles = ws.sequence.quotient
    triple = (0, 1, 2)
    triple_zero = all(
        cycles.group_at(triple).is_zero(
            cycles.restrictions[(e, triple)].apply(weil.values[e])
        )
        for e in nerve.simplices(1)
    )
    weil_cocycle_verdict = is_cocycle(cycles, weil)
    weil_witness = coboundary_witness_certified(cycles, weil)
    connecting = connecting_map(ws.sequence, weil)
    connecting_witness = coboundary_witness_certified(
        ws.sequence.kernel, connecting.cocycle
    )
    obstruction = obstruction_quotient(ws.sequence, 1)
    return PlaneGerbeBundle(
        window=window,
        sequence_window=ws,
        exactness_issues=exactness,
        weil_cocycle=weil,
        expected_points=expected,
        intersections_match=matches,
        triple_restrictions_zero=triple_zero,
        weil_is_cocycle=weil_cocycle_verdict,
        weil_witness=weil_witness,
        connecting=connecting,
        connecting_witness=connecting_witness,
        obstruction=obstruction,
        window_stamp=window.stamp(),
    )
