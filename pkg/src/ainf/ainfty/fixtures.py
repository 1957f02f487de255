"""Small categories with known structure, used by tests and the CLI."""

from __future__ import annotations

import random

from ..pontryagin import DigraphLoopModel, PontryaginCategory, Square, random_digraph
from .adapters import from_pontryagin
from .category import AInftyCategory
from .transfer import transfer


def square_with_tail() -> DigraphLoopModel:
    """Two paths a -> c filled by one square, followed by an edge c -> d."""
    edges = {"e1": ("a", "x"), "e2": ("x", "c"), "e3": ("a", "y"), "e4": ("y", "c"), "f": ("c", "d")}
    return DigraphLoopModel(["a", "x", "y", "c", "d"], edges, [Square("s", ("e1", "e2"), ("e3", "e4"))])


def mu3_fixture(d_max: int = 4):
    """Transfer along the cancellation of the square against its bottom path.

    The result has mu3(f, e4, e3) = +-(s.f), a chain-level product that is not
    associative, and an associative product on homology.
    Returns (A, W, functor W -> A, contraction).
    """
    A = from_pontryagin(PontryaginCategory(square_with_tail(), max_len=6), name="A")
    W, F, c = transfer(A, d_max=d_max, pairs=[("a:s", "a:e3.e4")])
    return A, W, F, c


def diamond_chain(seed: int) -> DigraphLoopModel:
    """Two or three filled diamonds in series, with a few random extra edges."""
    rng = random.Random(seed)
    n = rng.randint(2, 3)
    V = [f"v{i}" for i in range(n + 1)]
    edges: dict[str, tuple[str, str]] = {}
    squares = []
    for i in range(n):
        top, bot = f"t{i}", f"b{i}"
        V += [top, bot]
        edges[f"t{i}a"], edges[f"t{i}b"] = (V[i], top), (top, V[i + 1])
        edges[f"b{i}a"], edges[f"b{i}b"] = (V[i], bot), (bot, V[i + 1])
        squares.append(Square(f"s{i}", (f"t{i}a", f"t{i}b"), (f"b{i}a", f"b{i}b")))
    for j in range(rng.randint(0, 2)):
        a, b = sorted(rng.sample(range(n + 1), 2))
        edges[f"g{j}"] = (V[a], V[b])
    return DigraphLoopModel(V, edges, squares)


def dg_fixture(seed: int, max_len: int = 6) -> AInftyCategory:
    """Pontryagin category of a diamond chain (finite, since the digraph is acyclic)."""
    return from_pontryagin(PontryaginCategory(diamond_chain(seed), max_len=max_len), name=f"dg{seed}")


def transferred_fixture(seed: int, d_max: int = 4):
    """Cancel each square against its bottom path; returns (W, functor W -> A)."""
    m = diamond_chain(seed)
    A = from_pontryagin(PontryaginCategory(m, max_len=6), name=f"dg{seed}")
    pairs = []
    for sq in m.squares.values() if isinstance(m.squares, dict) else m.squares:
        start = m.edges[sq.bottom[0]][0]
        pairs.append((f"{start}:{sq.id}", f"{start}:{sq.bottom[0]}.{sq.bottom[1]}"))
    W, F, _ = transfer(A, d_max=d_max, pairs=pairs)
    return W, F
