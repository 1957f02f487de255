import pytest
from hypothesis import given, settings, strategies as st

from ainf.cubical import check_complex
from ainf.exactalg import Chain, homology_in_degree
from ainf.pontryagin import (
    PERTURBATIONS, DigraphLoopModel, MalformedFixture, NonComposable, Path, PontryaginCategory,
    Square, associativity_defects, check_dg_identity, from_digraph_with_squares, random_digraph,
)

from oracles import loop_classes


def commuting_square():
    return from_digraph_with_squares(
        ["a", "x", "y", "c"],
        {"p": ("a", "x"), "q": ("x", "c"), "r": ("a", "y"), "s": ("y", "c")},
        [{"id": "h", "top": ["p", "q"], "bottom": ["r", "s"]}])


def test_single_loop_edge_has_trivial_differential():
    G = from_digraph_with_squares(["v"], {"e": ("v", "v")}, [])
    P = PontryaginCategory(G, max_len=5)
    gens = P.generators("v", "v")
    assert [len(p.letters) for p in gens] == [0, 1, 2, 3, 4, 5]
    assert all(not P.mu1(Chain({p: 1})) for p in gens)


def test_square_boundary_orientation():
    P = PontryaginCategory(commuting_square())
    h = Path("a", ("h",))
    assert P.mu1(Chain({h: 1})).terms == {Path("a", ("p", "q")): -1, Path("a", ("r", "s")): 1}


def test_mu1_of_a_point_is_zero():
    P = PontryaginCategory(commuting_square())
    assert not P.mu1(Chain({Path("a", ("p",)): 1}))


def test_mu1_linear():
    G = commuting_square()
    P = PontryaginCategory(G)
    h = Chain({Path("a", ("h",)): 1})
    assert P.mu1(h + h) == P.mu1(h) + P.mu1(h)


def test_mu1_rejects_inhomogeneous():
    P = PontryaginCategory(commuting_square())
    with pytest.raises(ValueError):
        P.mu1(Chain({Path("a", ("h",)): 1, Path("a", ("p",)): 1}))


def test_mu2_signs():
    G = from_digraph_with_squares(
        ["a", "x", "y", "c", "d"],
        {"p": ("a", "x"), "q": ("x", "c"), "r": ("a", "y"), "s": ("y", "c"), "f": ("c", "d")},
        [{"id": "h", "top": ["p", "q"], "bottom": ["r", "s"]}])
    P = PontryaginCategory(G)
    f, h, p = Chain({Path("c", ("f",)): 1}), Chain({Path("a", ("h",)): 1}), Chain({Path("a", ("p",)): 1})
    q = Chain({Path("x", ("q",)): 1})
    assert P.mu2(q, p).terms == {Path("a", ("p", "q")): 1}
    assert P.mu2(f, h).terms == {Path("a", ("h", "f")): -1}
    assert not P.mu2(f, Chain())
    with pytest.raises(NonComposable):
        P.mu2(p, f)


def test_concat_of_swap_with_fixed_path_is_a_one_cube():
    G = random_digraph(0)
    P = PontryaginCategory(G, max_len=6)
    cube = G.concat(Path("v0", ("l0",)), Path("v0", ("q",)))
    assert G.dim(cube) == 1 and G.length(cube) == 3


def test_malformed_squares():
    with pytest.raises(MalformedFixture):
        from_digraph_with_squares(["a", "b"], {"e": ("a", "b"), "f": ("a", "b")},
                                  [{"top": ["e", "f"], "bottom": ["e", "f"]}])
    with pytest.raises(MalformedFixture):
        from_digraph_with_squares(["a", "b", "c"], {"e": ("a", "b"), "f": ("b", "c"), "g": ("a", "c")},
                                  [{"top": ["e", "f"], "bottom": ["g"]}])


def test_empty_model_passes_vacuously():
    P = PontryaginCategory(DigraphLoopModel([], {}, []))
    assert check_dg_identity(P).ok


def test_commuting_square_fixture_passes():
    assert check_dg_identity(PontryaginCategory(commuting_square())).ok


@pytest.mark.parametrize("seed", range(12))
def test_dg_identity_on_digraph_family(seed):
    P = PontryaginCategory(random_digraph(seed), max_len=4)
    rep = check_dg_identity(P)
    assert rep.ok, rep.witness
    assert rep.details["pairs"] > 0


@pytest.mark.parametrize("name", sorted(PERTURBATIONS))
@pytest.mark.parametrize("seed", range(4))
def test_perturbations_are_detected(name, seed):
    P = PontryaginCategory(random_digraph(seed), max_len=4, convention=PERTURBATIONS[name])
    assert not check_dg_identity(P).ok


def test_relation_sign_perturbation_fails_with_terms():
    P = PontryaginCategory(random_digraph(1), max_len=4, convention=PERTURBATIONS["relation_sign_flipped"])
    rep = check_dg_identity(P)
    assert rep.witness["kind"] == "leibniz" and len(rep.witness["terms"]) == 3


@pytest.mark.parametrize("seed", range(6))
def test_strict_associativity_with_sign(seed):
    P = PontryaginCategory(random_digraph(seed), max_len=4)
    assert associativity_defects(P, limit=1) == []


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**5))
def test_hom_complexes_are_cubical(seed):
    G = random_digraph(seed)
    for a in G.vertices:
        for b in G.vertices:
            X = G.hom(a, b, 4)
            assert check_complex(X).ok


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**5), st.integers(2, 5))
def test_h0_matches_union_find(seed, max_len):
    G = random_digraph(seed)
    # an isolated extra square away from the rest of the graph
    G = DigraphLoopModel(G.vertices + ["w", "w1", "w2"],
                         {**G.edges, "i1": ("w", "w1"), "i2": ("w1", "w"), "i3": ("w", "w2"), "i4": ("w2", "w")},
                         list(G.squares.values()) + [Square("iso", ("i1", "i2"), ("i3", "i4"))])
    for v in ("v0", "w"):
        X = G.hom(v, v, max_len)
        d = X.differential()
        expected = loop_classes(G.vertices, G.edges,
                                [(s.top, s.bottom) for s in G.squares.values()], v, max_len)
        assert homology_in_degree(d, 0).rank == expected
