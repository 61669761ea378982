import pytest

from cechlib.nerve import Cover, build_nerve, faces

from support import full_cover


def test_full_triangle():
    nerve = build_nerve(full_cover(3))
    assert nerve.simplices(0) == ((0,), (1,), (2,))
    assert nerve.simplices(1) == ((0, 1), (0, 2), (1, 2))
    assert nerve.simplices(2) == ((0, 1, 2),)
    assert nerve.simplices(3) == ()


def test_hollow_triangle():
    cover = Cover(("U1", "U2", "U3"), ((0,), (1,), (2,), (0, 1), (0, 2), (1, 2)))
    nerve = build_nerve(cover)
    assert len(nerve.simplices(1)) == 3
    assert nerve.simplices(2) == ()


def test_disjoint_opens():
    nerve = build_nerve(Cover(("A", "B"), ((0,), (1,))))
    assert nerve.simplices(0) == ((0,), (1,))
    assert nerve.simplices(1) == ()


def test_dim_cap_truncates():
    nerve = build_nerve(full_cover(4), dim_cap=1)
    assert nerve.simplices(1) == ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
    assert nerve.simplices(2) == ()
    assert nerve.max_dim() == 1


def test_missing_singleton_rejected():
    with pytest.raises(ValueError, match="singleton"):
        build_nerve(Cover(("A", "B"), ((0,), (0, 1))))


def test_downward_closure_violation_rejected():
    cover = Cover(("A", "B", "C"), ((0,), (1,), (2,), (0, 1, 2)))
    with pytest.raises(ValueError, match="downward-closure"):
        build_nerve(cover)


def test_unsorted_subset_rejected():
    with pytest.raises(ValueError, match="strictly increasing"):
        build_nerve(Cover(("A", "B"), ((0,), (1,), (1, 0))))


def test_faces_listing():
    assert faces((1, 2, 3)) == [((2, 3), 0), ((1, 3), 1), ((1, 2), 2)]
    assert faces((1, 2)) == [((2,), 0), ((1,), 1)]
    assert faces((1,)) == [((), 0)]


def test_face_of_face_identity():
    # deleting positions (j then k) equals deleting (k+1 then j) for j <= k
    s = (0, 1, 2, 3, 4)
    for j in range(len(s)):
        for k in range(len(s) - 1):
            first = s[:j] + s[j + 1 :]
            one = first[:k] + first[k + 1 :]
            if j <= k:
                second = s[: k + 1] + s[k + 2 :]
                two = second[:j] + second[j + 1 :]
                assert one == two


def test_determinism_and_labels():
    cover = full_cover(3)
    n1, n2 = build_nerve(cover), build_nerve(cover)
    assert n1.by_dimension == n2.by_dimension
    assert n1.label_of((0, 2)) == "U1,U3"
