import pytest
from hypothesis import given, settings, strategies as st

from ainf.cubical import (
    DegenerateFace, InvalidCubicalSet, PresentedCubicalSet, check_complex, circle, cross,
    interval, product, random_cubical_set, random_square_complex, torus,
)
from ainf.exactalg import Chain, homology_in_degree

import random


def square(p="p", q="q", r="r", s="s"):
    dims = {"a": 0, p: 1, q: 1, r: 1, s: 1, "S": 2}
    faces = {lab: {(1, 0): "a", (1, 1): "a"} for lab in (p, q, r, s)}
    faces["S"] = {(1, 0): p, (1, 1): q, (2, 0): r, (2, 1): s}
    return PresentedCubicalSet(dims, faces)


def test_one_cube_boundary():
    X = interval()
    assert X.boundary("I").terms == {"0": -1, "1": 1}


def test_two_cube_boundary_expansion():
    assert square().boundary("S").terms == {"p": -1, "q": 1, "r": 1, "s": -1}


def test_all_degenerate_faces_give_zero():
    X = PresentedCubicalSet(
        {"v": 0, "e": 1, "D": 2},
        {"e": {(1, 0): "v", (1, 1): "v"},
         "D": {(k, e): DegenerateFace("v", 1) for k in (1, 2) for e in (0, 1)}})
    assert not X.boundary("D")
    assert check_complex(X).ok


def test_circle_and_torus_homology():
    d = circle().differential()
    assert [homology_in_degree(d, n).rank for n in (0, 1)] == [1, 1]
    T = torus()
    assert check_complex(T).ok
    d = T.differential()
    assert [homology_in_degree(d, n).rank for n in (0, 1, 2)] == [1, 2, 1]


def test_torus_from_two_circles():
    T = product(circle(), circle())
    assert check_complex(T).ok
    d = T.differential()
    assert [homology_in_degree(d, n).rank for n in (0, 1, 2)] == [1, 2, 1]


def test_violated_face_identity_is_reported():
    X = PresentedCubicalSet(
        {"a": 0, "b": 0, "e": 1, "f": 1, "S": 2},
        {"e": {(1, 0): "a", (1, 1): "b"}, "f": {(1, 0): "a", (1, 1): "a"},
         "S": {(1, 0): "e", (1, 1): "f", (2, 0): "f", (2, 1): "f"}})
    rep = check_complex(X)
    assert not rep.ok
    assert rep.witness["kind"] == "face_identity" and rep.witness["cube"] == "S"


def test_empty_set_passes():
    assert check_complex(PresentedCubicalSet({}, {})).ok


def test_loader_rejects_bad_markers():
    with pytest.raises(InvalidCubicalSet):
        PresentedCubicalSet({"v": 0, "e": 1}, {"e": {(1, 0): DegenerateFace("v", 1), (1, 1): "v"}})
    with pytest.raises(InvalidCubicalSet):
        PresentedCubicalSet({"v": 0, "e": 1}, {"e": {(1, 0): "v"}})
    with pytest.raises(InvalidCubicalSet):
        PresentedCubicalSet({"v": 0, "e": 1}, {"e": {(1, 0): "w", (1, 1): "v"}})


def test_json_round_trip():
    X = random_square_complex(random.Random(3))
    Y = PresentedCubicalSet.from_json(X.to_json())
    assert Y.dims == X.dims and Y.faces == X.faces


def test_unknown_cube():
    with pytest.raises(KeyError):
        circle().boundary("nope")


def test_degenerate_faces_of_degenerate_cells():
    # faces of s_1(e) where e is an edge a->b
    X = interval()
    from ainf.cubical import Cell
    c = Cell("I", frozenset({1}))
    assert X.face(c, 1, 0) == Cell("I", frozenset())
    assert X.face(c, 2, 0) == Cell("0", frozenset({1}))
    assert X.face(c, 2, 1) == Cell("1", frozenset({1}))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_d_squared_zero_on_random_sets(seed):
    X = random_cubical_set(seed)
    rep = check_complex(X)
    assert rep.ok, rep.witness
    assert not any(isinstance(lab, DegenerateFace) for lab in X.labels)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_leibniz_rule(seed):
    rng = random.Random(seed)
    X = random_square_complex(rng, prefix="x")
    Y = random_square_complex(rng, prefix="y")
    XY = product(X, Y)
    for s in X.labels:
        p = X.dim(s)
        for t in Y.labels:
            st_ = cross(X, Y, Chain({s: 1}), Chain({t: 1}), XY)
            lhs = XY.boundary_chain(st_)
            rhs = cross(X, Y, X.boundary(s), Chain({t: 1}), XY) + \
                (-1) ** p * cross(X, Y, Chain({s: 1}), Y.boundary(t), XY)
            assert lhs == rhs, (s, t)


def test_leibniz_one_by_one_cube():
    I = interval()
    II = product(I, I)
    lhs = II.boundary(("I", "I"))
    assert lhs.terms == {("0", "I"): -1, ("1", "I"): 1, ("I", "0"): 1, ("I", "1"): -1}


def test_cross_bilinear_and_points():
    X, Y = interval(), circle()
    XY = product(X, Y)
    assert cross(X, Y, Chain({"0": 1}), Chain({"v": 1}), XY).terms == {("0", "v"): 1}
    a = cross(X, Y, Chain({"I": 1}), Chain({"e": 1, "v": 2}), XY)
    b = cross(X, Y, Chain({"I": 1}), Chain({"e": 1}), XY) + cross(X, Y, Chain({"I": 1}), Chain({"v": 2}), XY)
    assert a == b


def test_product_associative():
    rng = random.Random(11)
    A = random_square_complex(rng, prefix="a")
    B = random_square_complex(rng, prefix="b", n_squares=0)
    C = interval()
    left, right = product(product(A, B), C), product(A, product(B, C))
    assert left.dims == right.dims
    assert left.faces == right.faces
    assert check_complex(left).ok
