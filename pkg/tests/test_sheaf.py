import random

from cechlib.intlattice import FGAbelianGroup, GroupMorphism, IntMatrix
from cechlib.sheaf import constant_sheaf, validate_sheaf

from support import full_cover, nerve_catalog, random_sheaf
from cechlib.nerve import Cover, build_nerve


def test_constant_sheaf_valid_everywhere():
    for nerve in nerve_catalog():
        F = constant_sheaf(nerve, FGAbelianGroup.free(1))
        assert validate_sheaf(F) == []


def test_constant_sheaf_shapes():
    hollow = build_nerve(
        Cover(("U1", "U2", "U3"), ((0,), (1,), (2,), (0, 1), (0, 2), (1, 2)))
    )
    F = constant_sheaf(hollow, FGAbelianGroup.cyclic(2))
    assert len([s for s in F.groups if len(s) == 1]) == 3
    assert len([s for s in F.groups if len(s) == 2]) == 3

    single = build_nerve(Cover(("U",), ((0,),)))
    G = constant_sheaf(single, FGAbelianGroup.free(3))
    assert list(G.groups) == [(0,)]
    assert G.restrictions == {}


def test_broken_restriction_located_at_triangle():
    nerve = build_nerve(full_cover(3))
    F = constant_sheaf(nerve, FGAbelianGroup.free(1))
    F.restrictions[((0, 1), (0, 1, 2))] = GroupMorphism(
        FGAbelianGroup.free(1), FGAbelianGroup.free(1), IntMatrix.from_rows([[2]])
    )
    issues = validate_sheaf(F)
    assert issues
    assert all(issue.kind == "functoriality" for issue in issues)
    assert all(issue.location[1] == (0, 1, 2) for issue in issues)


def test_missing_restriction_reported():
    nerve = build_nerve(full_cover(2))
    F = constant_sheaf(nerve, FGAbelianGroup.free(1))
    del F.restrictions[((0,), (0, 1))]
    issues = validate_sheaf(F)
    assert [i.kind for i in issues] == ["missing-restriction"]
    assert issues[0].location == ((0,), (0, 1))


def test_endpoint_mismatch_reported():
    nerve = build_nerve(full_cover(2))
    F = constant_sheaf(nerve, FGAbelianGroup.free(1))
    F.restrictions[((0,), (0, 1))] = GroupMorphism.identity(FGAbelianGroup.free(2))
    issues = validate_sheaf(F)
    assert [i.kind for i in issues] == ["endpoints"]


def test_random_sheaves_are_valid():
    rng = random.Random(9)
    for nerve in nerve_catalog():
        for _ in range(6):
            F = random_sheaf(rng, nerve)
            assert validate_sheaf(F) == []


def test_deep_restriction_composes_along_chain():
    rng = random.Random(10)
    nerve = build_nerve(full_cover(4))
    F = random_sheaf(rng, nerve)
    top = (0, 1, 2, 3)
    via_a = F.restrictions[((0, 1, 2), top)].compose(
        F.restrictions[((0, 1), (0, 1, 2))]
    )
    via_b = F.restrictions[((0, 1, 3), top)].compose(
        F.restrictions[((0, 1), (0, 1, 3))]
    )
    deep = F.restriction((0, 1), top)
    assert deep.equal_on_generators(via_a)
    assert deep.equal_on_generators(via_b)
    assert F.restriction(top, top).matrix == IntMatrix.identity(
        F.group_at(top).generators
    )
