"""Pontryagin DG category of a combinatorial loop model.

The concrete loop model here is a directed graph with declared commuting
squares.  A generator of the path space from ``a`` to ``b`` is a word whose
letters are edges or squares; a square is a 2-edge homotopy, so a word with
``n`` square letters is an ``n``-cube.  The face ``(k, eps)`` replaces the
``k``-th square by its top (``eps=0``) or bottom (``eps=1``) path, and
concatenation of words is the product of cubes with the first-traversed
path's coordinates first.

    mu1 = cubical boundary
    mu2(s2, s1) = (-1)^|s1| s2 . s1      (s1 traversed first)
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, replace
from typing import Any, Callable, Iterable, Iterator, Mapping, NamedTuple

from .cubical import PresentedCubicalSet
from .exactalg import Chain
from .report import CheckResult, check


class MalformedFixture(ValueError):
    pass


class NonComposable(ValueError):
    pass


class Path(NamedTuple):
    """A word of edge/square letters starting at ``start``."""

    start: str
    letters: tuple[str, ...]

    def __str__(self) -> str:
        return f"{self.start}:" + ".".join(self.letters)


@dataclass(frozen=True)
class Square:
    id: str
    top: tuple[str, str]
    bottom: tuple[str, str]


class DigraphLoopModel:
    """Loop model of a digraph with declared square homotopies."""

    def __init__(self, vertices: Iterable[str], edges: Mapping[str, tuple[str, str]],
                 squares: Iterable[Square]):
        self.vertices = [str(v) for v in vertices]
        vs = set(self.vertices)
        self.edges = {str(e): (str(a), str(b)) for e, (a, b) in edges.items()}
        for e, (a, b) in self.edges.items():
            if a not in vs or b not in vs:
                raise MalformedFixture(f"edge {e!r} has an unknown endpoint")
        self.squares: dict[str, Square] = {}
        self.ends: dict[str, tuple[str, str]] = dict(self.edges)
        for sq in squares:
            if sq.id in self.ends:
                raise MalformedFixture(f"duplicate letter {sq.id!r}")
            ends = []
            for side in (sq.top, sq.bottom):
                if len(side) != 2 or any(e not in self.edges for e in side):
                    raise MalformedFixture(f"square {sq.id!r}: sides must be two known edges")
                (a, b), (c, d) = self.edges[side[0]], self.edges[side[1]]
                if b != c:
                    raise MalformedFixture(f"square {sq.id!r}: side {side} is not a path")
                ends.append((a, d))
            if ends[0] != ends[1]:
                raise MalformedFixture(f"square {sq.id!r}: sides have different endpoints")
            self.squares[sq.id] = sq
            self.ends[sq.id] = ends[0]
        self._out: dict[str, list[str]] = {v: [] for v in self.vertices}
        for lab, (a, _) in self.ends.items():
            self._out[a].append(lab)

    # -------------------------------------------------------------- words

    def end(self, p: Path) -> str:
        return self.ends[p.letters[-1]][1] if p.letters else p.start

    def dim(self, p: Path) -> int:
        return sum(1 for x in p.letters if x in self.squares)

    def length(self, p: Path) -> int:
        return sum(2 if x in self.squares else 1 for x in p.letters)

    def validate(self, p: Path) -> None:
        here = p.start
        for x in p.letters:
            if x not in self.ends or self.ends[x][0] != here:
                raise MalformedFixture(f"{p} is not a path")
            here = self.ends[x][1]

    def face(self, p: Path, k: int, eps: int) -> Path:
        seen = 0
        for i, x in enumerate(p.letters):
            if x in self.squares:
                seen += 1
                if seen == k:
                    sq = self.squares[x]
                    side = sq.top if eps == 0 else sq.bottom
                    return Path(p.start, p.letters[:i] + side + p.letters[i + 1:])
        raise ValueError(f"{p} has no square coordinate {k}")

    def concat(self, s2: Path, s1: Path) -> Path:
        """s1 followed by s2."""
        if self.end(s1) != s2.start:
            raise NonComposable(f"{s1} ends at {self.end(s1)!r}, {s2} starts at {s2.start!r}")
        return Path(s1.start, s1.letters + s2.letters)

    def unit(self, v: str) -> Path:
        return Path(v, ())

    def paths(self, a: str, b: str | None, max_len: int) -> list[Path]:
        """All words from a (to b) of edge length at most max_len, in BFS order."""
        out = []
        queue = deque([Path(a, ())])
        while queue:
            p = queue.popleft()
            if b is None or self.end(p) == b:
                out.append(p)
            n = self.length(p)
            for x in self._out[self.end(p)]:
                step = 2 if x in self.squares else 1
                if n + step <= max_len:
                    queue.append(Path(a, p.letters + (x,)))
        return out

    def hom(self, a: str, b: str, max_len: int) -> PresentedCubicalSet:
        gens = self.paths(a, b, max_len)
        dims = {p: self.dim(p) for p in gens}
        faces = {p: {(k, e): self.face(p, k, e) for k in range(1, dims[p] + 1) for e in (0, 1)}
                 for p in gens}
        return PresentedCubicalSet(dims, faces)

    # -------------------------------------------------------------- I/O

    def to_json(self) -> dict[str, Any]:
        return {
            "vertices": list(self.vertices),
            "edges": [{"id": e, "src": a, "dst": b} for e, (a, b) in self.edges.items()],
            "squares": [{"id": s.id, "top": list(s.top), "bottom": list(s.bottom)}
                        for s in self.squares.values()],
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "DigraphLoopModel":
        try:
            edges = {str(e["id"]): (str(e["src"]), str(e["dst"])) for e in data["edges"]}
            squares = [Square(str(s.get("id", f"sq{i}")), tuple(s["top"]), tuple(s["bottom"]))
                       for i, s in enumerate(data.get("squares", []))]
            return cls(data["vertices"], edges, squares)
        except (KeyError, TypeError) as exc:
            raise MalformedFixture(f"malformed digraph fixture: {exc}") from exc


def from_digraph_with_squares(vertices, edges, squares) -> DigraphLoopModel:
    """Build a loop model; ``squares`` are dicts with ``top`` and ``bottom`` edge pairs."""
    sqs = []
    for i, s in enumerate(squares):
        if isinstance(s, Square):
            sqs.append(s)
        else:
            sqs.append(Square(str(s.get("id", f"sq{i}")), tuple(s["top"]), tuple(s["bottom"])))
    return DigraphLoopModel(vertices, edges, sqs)


def load(path: str) -> DigraphLoopModel:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MalformedFixture(str(exc)) from exc
    return DigraphLoopModel.from_json(data)


# ------------------------------------------------------------------ category

@dataclass(frozen=True)
class SignConvention:
    """Exponents of -1 used by the category; the defaults are the correct ones.

    ``mu2_exponent(d2, d1)`` and ``relation_exponent(d1, d2)`` take homological
    dimensions; ``face_exponent(k, eps)`` gives the boundary sign.
    """

    mu2_exponent: Callable[[int, int], int] = lambda d2, d1: d1
    relation_exponent: Callable[[int, int], int] = lambda d1, d2: d1 + 1
    face_exponent: Callable[[int, int], int] = lambda k, eps: k + eps


STANDARD = SignConvention()

# single-sign perturbations used to test that the identity check is sensitive
PERTURBATIONS: dict[str, SignConvention] = {
    "relation_sign_flipped": replace(STANDARD, relation_exponent=lambda d1, d2: d1),
    "mu2_sign_from_left_factor": replace(STANDARD, mu2_exponent=lambda d2, d1: d2),
    "mu2_sign_dropped": replace(STANDARD, mu2_exponent=lambda d2, d1: 0),
    "block_order_swapped": replace(STANDARD, mu2_exponent=lambda d2, d1: d1 + d1 * d2),
    "face_sign_ignores_index": replace(STANDARD, face_exponent=lambda k, eps: eps),
}


class PontryaginCategory:
    """DG category with mu1 = cubical boundary and mu2 = signed concatenation."""

    def __init__(self, model: DigraphLoopModel, max_len: int = 4,
                 convention: SignConvention = STANDARD):
        self.model = model
        self.max_len = max_len
        self.convention = convention

    @property
    def objects(self) -> list[str]:
        return self.model.vertices

    def generators(self, a: str, b: str) -> list[Path]:
        return self.model.paths(a, b, self.max_len)

    def _dim_of(self, chain: Chain) -> int | None:
        dims = {self.model.dim(p) for p in chain}
        if len(dims) > 1:
            raise ValueError(f"inhomogeneous chain with dimensions {sorted(dims)}")
        return next(iter(dims)) if dims else None

    def mu1(self, sigma: Chain) -> Chain:
        self._dim_of(sigma)
        out: dict[Path, int] = {}
        fe = self.convention.face_exponent
        for p, c in sigma.items():
            for k in range(1, self.model.dim(p) + 1):
                for e in (0, 1):
                    f = self.model.face(p, k, e)
                    v = out.get(f, 0) + c * (-1) ** fe(k, e)
                    if v:
                        out[f] = v
                    else:
                        out.pop(f)
        return Chain(out)

    def mu2(self, s2: Chain, s1: Chain) -> Chain:
        out: dict[Path, int] = {}
        m = self.model
        ex = self.convention.mu2_exponent
        for p1, c1 in s1.items():
            for p2, c2 in s2.items():
                q = m.concat(p2, p1)
                v = out.get(q, 0) + c1 * c2 * (-1) ** ex(m.dim(p2), m.dim(p1))
                if v:
                    out[q] = v
                else:
                    out.pop(q)
        return Chain(out)

    def dim(self, p: Path) -> int:
        return self.model.dim(p)

    def composable_pairs(self) -> Iterator[tuple[Path, Path]]:
        """All (s2, s1) with s1 in hom(a, b), s2 in hom(b, c) and total length within the cap."""
        m = self.model
        for a in self.objects:
            for s1 in m.paths(a, None, self.max_len):
                for s2 in m.paths(m.end(s1), None, self.max_len - m.length(s1)):
                    yield s2, s1


def mu1(P: PontryaginCategory, sigma: Chain) -> Chain:
    return P.mu1(sigma)


def mu2(P: PontryaginCategory, s2: Chain, s1: Chain) -> Chain:
    return P.mu2(s2, s1)


def check_dg_identity(P: PontryaginCategory, id: str = "pontryagin") -> CheckResult:
    """Check mu1^2 = 0 and the three-term Leibniz identity on all composable pairs."""
    m = P.model
    n_gens = 0
    for a in P.objects:
        for p in m.paths(a, None, P.max_len):
            n_gens += 1
            sq = P.mu1(P.mu1(Chain({p: 1})))
            if sq:
                return check(id, False, {"kind": "mu1_squared", "generator": str(p),
                                         "value": {str(k): v for k, v in sq.items()}})
    pairs = 0
    rel = P.convention.relation_exponent
    for s2, s1 in P.composable_pairs():
        pairs += 1
        c1, c2 = Chain({s1: 1}), Chain({s2: 1})
        t1 = P.mu1(P.mu2(c2, c1))
        t2 = P.mu2(c2, P.mu1(c1))
        t3 = (-1) ** rel(m.dim(s1), m.dim(s2)) * P.mu2(P.mu1(c2), c1)
        total = t1 + t2 + t3
        if total:
            fmt = lambda ch: {str(k): v for k, v in ch.items()}
            return check(id, False, {"kind": "leibniz", "s2": str(s2), "s1": str(s1),
                                     "terms": [fmt(t1), fmt(t2), fmt(t3)], "sum": fmt(total)})
    return check(id, True, generators=n_gens, pairs=pairs)


def associativity_defects(P: PontryaginCategory, limit: int | None = None) -> list[tuple]:
    """Triples where mu2(mu2(s3,s2),s1) != (-1)^|s1| mu2(s3, mu2(s2,s1))."""
    bad = []
    m = P.model
    for s2, s1 in P.composable_pairs():
        for s3 in m.paths(m.end(s2), None, P.max_len - m.length(s1) - m.length(s2)):
            c1, c2, c3 = Chain({s1: 1}), Chain({s2: 1}), Chain({s3: 1})
            lhs = P.mu2(P.mu2(c3, c2), c1)
            rhs = (-1) ** m.dim(s1) * P.mu2(c3, P.mu2(c2, c1))
            if lhs != rhs:
                bad.append((s3, s2, s1))
                if limit is not None and len(bad) >= limit:
                    return bad
    return bad


# ------------------------------------------------------------------ fixtures

def random_digraph(seed: int, n_vertices: int = 3, n_edges: int | None = None,
                   n_squares: int | None = None, acyclic: bool = False) -> DigraphLoopModel:
    """Random digraph with squares; vertex v0 always carries a commuting loop square
    (unless ``acyclic``), so that cubes of every dimension compose."""
    rng = random.Random(seed)
    V = [f"v{i}" for i in range(n_vertices)]
    n_edges = rng.randint(n_vertices, n_vertices + 2) if n_edges is None else n_edges
    edges: dict[str, tuple[str, str]] = {}
    for i in range(n_edges):
        if acyclic:
            a, b = sorted(rng.sample(range(n_vertices), 2)) if n_vertices > 1 else (0, 0)
            if a == b:
                continue
            edges[f"e{i}"] = (V[a], V[b])
        else:
            edges[f"e{i}"] = (rng.choice(V), rng.choice(V))
    squares = []
    if not acyclic:
        edges["l0"] = (V[0], V[0])
        edges["l1"] = (V[0], V[0])
        squares.append(Square("q", ("l0", "l1"), ("l1", "l0")))
    two_paths: dict[tuple[str, str], list[tuple[str, str]]] = {}
    for e, (a, b) in edges.items():
        for f, (c, d) in edges.items():
            if b == c:
                two_paths.setdefault((a, d), []).append((e, f))
    keys = sorted(k for k, v in two_paths.items() if len(v) >= 2)
    n_squares = rng.randint(1, 3) if n_squares is None else n_squares
    for i in range(n_squares if keys else 0):
        top, bottom = rng.sample(two_paths[rng.choice(keys)], 2)
        squares.append(Square(f"s{i}", top, bottom))
    return DigraphLoopModel(V, edges, squares)
