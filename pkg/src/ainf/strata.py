"""Boundary strata of the Stasheff spaces R_d and of the half-plane spaces Z_{2d}.

Abstract strata of the compactified Z_{2d}
------------------------------------------
The 2d boundary points are grouped into d segments (z_{2i-1}, z_{2i}).  A
stratum is either

* ``Open(segments)``: a half-plane whose segments are groups of consecutive
  original segments, produced by merges (the gap between two segments closes);
* ``Bubble(children)``: a disc with r >= 2 inputs, each input carrying a
  stratum of a smaller half-plane space.

Nested disc groupings and bubbling children describe the same configuration,
so both are ``Bubble`` nodes.  ``dim(Open) = #segments - 1`` and
``dim(Bubble) = r - 2 + sum(dim(child))``.

Formal boundary with Floer breaking
-----------------------------------
``boundary_formal`` works with products of moduli spaces drawn as trees: ``Z``
components (half-plane with segment labels and one output) and ``D``
components (disc with r >= 1 inputs; r = 1 is a strip).  Every edge carries an
integer id so that degrees persist through repeated faces.
"""

from __future__ import annotations

import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Callable, Iterator, Mapping, Sequence, Union


# ---------------------------------------------------------------- dimensions

def dim_Z(d: int) -> int:
    """2d marked points, d - 1 fixed gap ratios, modulo translations and dilations."""
    if d < 1:
        raise ValueError("d must be at least 1")
    return 2 * d - (d - 1) - 2


def dim_R(d: int) -> int:
    """Discs with d inputs and one output: d + 1 points modulo a 3-dimensional group."""
    if d < 2:
        raise ValueError("d must be at least 2")
    return d + 1 - 3


def compositions(d: int, min_parts: int = 1) -> Iterator[tuple[int, ...]]:
    """Ordered partitions of 1..d into consecutive blocks, as block sizes."""
    for cuts in range(d):
        for pos in combinations(range(1, d), cuts):
            if cuts + 1 < min_parts:
                continue
            edges = (0,) + pos + (d,)
            yield tuple(b - a for a, b in zip(edges, edges[1:]))


# ---------------------------------------------------------------- Stasheff

def codim1_R(d: int) -> list[tuple[int, int, int]]:
    """Facets of R_d as (d1, d2, k): a disc with d2 inputs attached at input k + 1."""
    if d < 2:
        raise ValueError("d must be at least 2")
    return [(d + 1 - d2, d2, k) for d2 in range(2, d) for k in range(0, d - d2 + 1)]


# ---------------------------------------------------------------- abstract Z strata

@dataclass(frozen=True)
class Open:
    segments: tuple[tuple[int, ...], ...]

    def __str__(self) -> str:
        return "Z[" + " ".join("".join(map(str, s)) for s in self.segments) + "]"


@dataclass(frozen=True)
class Bubble:
    children: tuple["Stratum", ...]

    def __str__(self) -> str:
        return "R(" + ", ".join(map(str, self.children)) + ")"


Stratum = Union[Open, Bubble]


def top_Z(d: int) -> Open:
    if d < 1:
        raise ValueError("d must be at least 1")
    return Open(tuple((i,) for i in range(1, d + 1)))


def dim(s: Stratum) -> int:
    if isinstance(s, Open):
        return len(s.segments) - 1
    return len(s.children) - 2 + sum(dim(c) for c in s.children)


def leaves(s: Stratum) -> tuple[int, ...]:
    if isinstance(s, Open):
        return tuple(i for seg in s.segments for i in seg)
    return tuple(i for c in s.children for i in leaves(c))


def events(s: Stratum) -> tuple[int, int]:
    """(merge events, bubble events) recorded in the stratum."""
    if isinstance(s, Open):
        return sum(len(seg) - 1 for seg in s.segments), 0
    m, b = 0, 1
    for c in s.children:
        cm, cb = events(c)
        m, b = m + cm, b + cb
    return m, b


def codim(s: Stratum) -> int:
    return len(leaves(s)) - 1 - dim(s)


def _blocks(seq: Sequence, sizes: Sequence[int]) -> list[tuple]:
    out, pos = [], 0
    for n in sizes:
        out.append(tuple(seq[pos:pos + n]))
        pos += n
    return out


def faces(s: Stratum) -> list[Stratum]:
    """Codimension-one faces in a fixed order: merges, then bubbles, then nested faces."""
    out: list[Stratum] = []
    if isinstance(s, Open):
        segs = s.segments
        for k in range(len(segs) - 1):
            out.append(Open(segs[:k] + (segs[k] + segs[k + 1],) + segs[k + 2:]))
        for sizes in compositions(len(segs), min_parts=2):
            out.append(Bubble(tuple(Open(b) for b in _blocks(segs, sizes))))
        return out
    ch = s.children
    r = len(ch)
    for i, c in enumerate(ch):
        for f in faces(c):
            out.append(Bubble(ch[:i] + (f,) + ch[i + 1:]))
    for j in range(2, r):
        for a in range(0, r - j + 1):
            out.append(Bubble(ch[:a] + (Bubble(ch[a:a + j]),) + ch[a + j:]))
    return out


def codim1_Z(d: int) -> list[Stratum]:
    return faces(top_Z(d))


def strata_Z(d: int) -> dict[Stratum, int]:
    """All strata of the compactified Z_{2d} with their codimension."""
    top = top_Z(d)
    seen = {top: 0}
    frontier = [top]
    while frontier:
        nxt = []
        for s in frontier:
            for f in faces(s):
                if f not in seen:
                    seen[f] = seen[s] + 1
                    nxt.append(f)
        frontier = nxt
    return seen


def check_mod2(d: int) -> dict[str, Any]:
    """Every codimension-two stratum must lie in exactly two facets."""
    incidences: dict[Stratum, list[Stratum]] = defaultdict(list)
    for F in codim1_Z(d):
        for G in faces(F):
            incidences[G].append(F)
    bad = {str(G): [str(F) for F in Fs] for G, Fs in incidences.items() if len(Fs) != 2 or Fs[0] == Fs[1]}
    dims_ok = all(dim(F) == dim_Z(d) - 1 for F in codim1_Z(d)) and \
        all(dim(G) == dim_Z(d) - 2 for G in incidences)
    return {"d": d, "facets": len(codim1_Z(d)), "codim2": len(incidences),
            "ok": not bad and dims_ok, "violations": bad, "dimensions_ok": dims_ok}


def weights(s: Stratum, w: Fraction = Fraction(1)) -> dict[str, Any]:
    """Rescaled end weights: each input of a bubble gets w/r, so the weights
    of the inputs sum to the weight of the output."""
    if isinstance(s, Open):
        return {"stratum": str(s), "weight": w}
    r = len(s.children)
    return {"stratum": str(s), "weight": w,
            "inputs": [weights(c, w / r) for c in s.children]}


def hasse_dot(d: int) -> str:
    """Face poset of the compactified Z_{2d} in DOT format."""
    S = strata_Z(d)
    names = {s: f"n{i}" for i, s in enumerate(sorted(S, key=lambda s: (S[s], str(s))))}
    lines = [f"digraph Z{2 * d} {{", "  rankdir=BT;"]
    for s, n in names.items():
        lines.append(f'  {n} [label="{s}\\ncodim {S[s]}"];')
    for s, n in names.items():
        for f in sorted(set(faces(s)), key=str):
            lines.append(f"  {names[f]} -> {n};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def z_to_stasheff(d: int) -> dict[str, Any]:
    """Relabel the half-plane markings as a disc with d + 1 inputs.

    The odd points z_1, z_3, ..., z_{2d-1} become inputs 1..d, the point z_2
    becomes input d + 1 and the point at infinity is the output.  The interior
    spaces have equal dimension, but the facet types differ once d >= 2: the
    half-plane space has merge facets, where a non-input marking collides.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    relabel = {f"z{2 * i - 1}": i for i in range(1, d + 1)}
    relabel["z2"] = d + 1
    relabel["infinity"] = "output"
    z_types = Counter("merge" if isinstance(F, Open) else "bubble" for F in codim1_Z(d))
    r_types = Counter({"disc": len(codim1_R(d + 1))}) if d + 1 >= 3 else Counter()
    return {
        "d": d,
        "relabel": relabel,
        "dim_Z": dim_Z(d),
        "dim_R": dim_R(d + 1),
        "interior_dimensions_agree": dim_Z(d) == dim_R(d + 1),
        "Z_facet_types": dict(z_types),
        "R_facet_types": dict(r_types),
        "extends_to_boundary": dict(z_types) == dict(r_types),
    }


# ---------------------------------------------------------------- formal boundary

class UnassignedSymbol(KeyError):
    pass


@dataclass(frozen=True)
class Piece:
    """Cube sigma_index with some coordinates fixed to 0 or 1."""
    index: int
    fixed: frozenset = frozenset()

    def __str__(self) -> str:
        if not self.fixed:
            return f"s{self.index}"
        f = ",".join(f"{k}={e}" for k, e in sorted(self.fixed))
        return f"s{self.index}[{f}]"


@dataclass(frozen=True)
class Z:
    segments: tuple[tuple[Piece, ...], ...]
    out: int

    def canon(self):
        return ("Z", tuple(tuple((p.index, tuple(sorted(p.fixed))) for p in seg) for seg in self.segments))

    def __str__(self) -> str:
        return "M(" + " ".join(".".join(map(str, seg)) for seg in self.segments) + ")"


@dataclass(frozen=True)
class D:
    children: tuple[Any, ...]   # children[0] feeds the first input x_1
    out: int

    def canon(self):
        return ("D", tuple(c.canon() for c in self.children))

    def __str__(self) -> str:
        return "D(" + ", ".join(map(str, self.children)) + ")"


Tree = Union[Z, D]


def edges(t: Tree) -> list[int]:
    """Edge ids in canonical order: own output first, then children in order."""
    out = [t.out]
    if isinstance(t, D):
        for c in t.children:
            out.extend(edges(c))
    return out


def components(t: Tree) -> list[Tree]:
    """Product order of the factors: children last to first, then the node."""
    out: list[Tree] = []
    if isinstance(t, D):
        for c in reversed(t.children):
            out.extend(components(c))
    out.append(t)
    return out


@dataclass
class Degrees:
    """Degree data: cube dimensions of the sigma_i and degrees of edges."""
    sigma: Mapping[int, int]
    x: Mapping[int, int]

    def s(self, i: int) -> int:
        try:
            return self.sigma[i]
        except KeyError:
            raise UnassignedSymbol(f"sigma_{i}") from None

    def e(self, n: int) -> int:
        try:
            return self.x[n]
        except KeyError:
            raise UnassignedSymbol(f"x#{n}") from None

    def piece(self, p: Piece) -> int:
        return self.s(p.index) - len(p.fixed)

    def segment(self, seg: tuple[Piece, ...]) -> int:
        return sum(self.piece(p) for p in seg)


def comp_dim(c: Tree, deg: Degrees) -> int:
    if isinstance(c, Z):
        return deg.e(c.out) + sum(deg.segment(s) for s in c.segments) + len(c.segments) - 1
    return deg.e(c.out) + len(c.children) - 2 - sum(deg.e(ch.out) for ch in c.children)


def dagger_sign(sizes: Sequence[int], mu_sigma: Sequence[int], mu_x: Sequence[int]) -> int:
    """Exponent of the product-versus-boundary orientation sign for a bubble
    into blocks of the given sizes, read literally."""
    r = len(sizes)
    dd = [0] + list(sizes)
    total = 0
    for k in range(1, r + 1):
        total += dd[k] * (sum(mu_sigma[:dd[k - 1]]) + sum(mu_x[:k - 1]))
    starts = [sum(sizes[:k]) for k in range(r + 1)]
    for k in range(1, r):
        last_k = sum(mu_sigma[starts[r - k]:])
        total += mu_x[k - 1] * last_k
    for k in range(1, r + 1):
        total += sum(sizes[:k]) * sum(sizes[:k - 1])
    return total


SignFn = Callable[[Degrees], int]


class _Fresh:
    def __init__(self, start: int):
        self.n = start

    def __call__(self) -> int:
        self.n += 1
        return self.n


def _local_faces(c: Tree, sub: Callable[[Tree], Tree], fresh: _Fresh,
                 sigma_dims: Mapping[int, int]) -> list[tuple[Tree, SignFn]]:
    """Faces of one component; ``sub`` rebuilds the whole tree around a replacement."""
    out: list[tuple[Tree, SignFn]] = []
    if isinstance(c, Z):
        segs, m = c.segments, len(c.segments)
        for k in range(m - 1):
            merged = segs[:k] + (segs[k] + segs[k + 1],) + segs[k + 2:]
            out.append((sub(Z(merged, c.out)), lambda deg, m=m: 2 * m + 1))
        # r = 1 is breaking off a strip at the output
        for sizes in compositions(m):
            kids = tuple(Z(b, fresh()) for b in _blocks(segs, sizes))

            def sign(deg, sizes=sizes, kids=kids, segs=segs):
                return dagger_sign(sizes, [deg.segment(s) for s in segs], [deg.e(k.out) for k in kids])
            out.append((sub(D(kids, c.out)), sign))
        coord = 0
        for si, seg in enumerate(segs):
            for pi, p in enumerate(seg):
                taken = {k for k, _ in p.fixed}
                for k in range(1, sigma_dims[p.index] + 1):
                    if k in taken:
                        continue
                    coord += 1
                    for e in (0, 1):
                        q = Piece(p.index, p.fixed | {(k, e)})
                        new = segs[:si] + (seg[:pi] + (q,) + seg[pi + 1:],) + segs[si + 1:]
                        out.append((sub(Z(new, c.out)), lambda deg, g=coord + e: g))
        return out
    ch, r = c.children, len(c.children)
    for j in range(1, r + 1):
        for k in range(0, r - j + 1):
            inner = D(ch[k:k + j], fresh())
            outer = D(ch[:k] + (inner,) + ch[k + j:], c.out)

            def sign(deg, k=k, ch=ch):
                return k + sum(deg.e(x.out) for x in ch[:k])
            out.append((sub(outer), sign))
    return out


def _rebuilders(t: Tree) -> Iterator[tuple[Tree, Callable[[Tree], Tree]]]:
    """Each component together with a function that substitutes it in t."""
    yield t, (lambda new: new)
    if isinstance(t, D):
        for i, c in enumerate(t.children):
            for comp, sub in _rebuilders(c):
                def wrap(new, i=i, sub=sub, t=t):
                    kids = t.children[:i] + (sub(new),) + t.children[i + 1:]
                    return D(kids, t.out)
                yield comp, wrap


def face_list(t: Tree, sigma_dims: Mapping[int, int], fresh: _Fresh) -> list[tuple[Tree, SignFn]]:
    """All codimension-one faces of a product tree with their sign exponents
    (local sign plus the Leibniz sign of the factors in front)."""
    order = components(t)
    out: list[tuple[Tree, SignFn]] = []
    for comp, sub in _rebuilders(t):
        idx = next(i for i, c in enumerate(order) if c is comp)
        before = order[:idx]

        def leib(deg, before=before):
            return sum(comp_dim(b, deg) for b in before)
        for tree, local in _local_faces(comp, sub, fresh, sigma_dims):
            out.append((tree, lambda deg, local=local, leib=leib: local(deg) + leib(deg)))
    return out


def top_tree(d: int) -> Z:
    return Z(tuple((Piece(i),) for i in range(1, d + 1)), 0)


def boundary_formal(S: Mapping[Tree, int], mu_sigma: Mapping[int, int], mu_x: Mapping[int, int],
                    mod2: bool = False) -> dict[Tree, int]:
    """Signed boundary of a formal combination of product trees.

    ``mu_x`` must assign a degree to every edge id, including the fresh ids of
    new edges (they are numbered after the largest id present in ``S``).
    """
    start = max((e for t in S for e in edges(t)), default=0)
    fresh = _Fresh(start)
    deg = Degrees(mu_sigma, mu_x)
    out: dict[Tree, int] = {}
    for t, coef in S.items():
        for i in _sigmas(t):
            deg.s(i)
        for f, sgn in face_list(t, mu_sigma, fresh):
            v = coef if mod2 else coef * (-1) ** (sgn(deg) % 2)
            out[f] = out.get(f, 0) + v
    if mod2:
        return {t: v % 2 for t, v in out.items() if v % 2}
    return {t: v for t, v in out.items() if v}


def _sigmas(t: Tree) -> set[int]:
    if isinstance(t, Z):
        return {p.index for seg in t.segments for p in seg}
    return set().union(*(_sigmas(c) for c in t.children))


@dataclass
class SecondFaces:
    """All two-step faces of the top tree, grouped by canonical shape."""
    d: int
    sigma_dims: dict[int, int]
    paths: dict[Any, list[tuple[SignFn, SignFn, list[int]]]] = field(default_factory=dict)


def second_faces(d: int, sigma_dims: Mapping[int, int]) -> SecondFaces:
    top = top_tree(d)
    fresh = _Fresh(0)
    res = SecondFaces(d, dict(sigma_dims))
    for F, s1 in face_list(top, sigma_dims, fresh):
        for G, s2 in face_list(F, sigma_dims, fresh):
            res.paths.setdefault(G.canon(), []).append((s1, s2, edges(G)))
    return res


def check_formal_mod2(d: int, sigma_dims: Mapping[int, int]) -> dict[str, Any]:
    """The boundary applied twice vanishes modulo 2: every codimension-two
    shape is reached an even number of times."""
    sf = second_faces(d, sigma_dims)
    odd = [str(k) for k, v in sf.paths.items() if len(v) % 2]
    return {"d": d, "sigma_dims": dict(sigma_dims), "shapes": len(sf.paths),
            "paths": sum(len(v) for v in sf.paths.values()), "odd": odd, "ok": not odd}


def signed_residues(d: int, sigma_dims: Mapping[int, int], seed: int = 0, trials: int = 1) -> dict[str, Any]:
    """Sum of signs over the two-step paths to every codimension-two shape,
    with edge degrees drawn at random per shape position.  Diagnostic only."""
    rng = random.Random(seed)
    sf = second_faces(d, sigma_dims)
    rows = []
    for key in sorted(sf.paths, key=repr):
        entries = sf.paths[key]
        n_edges = len(entries[0][2])
        for _ in range(trials):
            pos_deg = [rng.randint(-2, 2) for _ in range(n_edges)]
            total = 0
            for s1, s2, ids in entries:
                deg = Degrees(sigma_dims, dict(zip(ids, pos_deg)))
                total += (-1) ** ((s1(deg) + s2(deg)) % 2)
            rows.append({"shape": _shape_str(key), "paths": len(entries), "edge_degrees": pos_deg,
                         "residue": total})
    nonzero = [r for r in rows if r["residue"]]
    return {"d": d, "sigma_dims": dict(sigma_dims), "seed": seed, "shapes": len(sf.paths),
            "rows": rows, "nonzero": len(nonzero), "cancels": not nonzero}


def _shape_str(key) -> str:
    kind, body = key
    if kind == "Z":
        segs = []
        for seg in body:
            parts = []
            for i, fixed in seg:
                parts.append(f"s{i}" + ("[" + ",".join(f"{k}={e}" for k, e in fixed) + "]" if fixed else ""))
            segs.append(".".join(parts))
        return "M(" + " ".join(segs) + ")"
    return "D(" + ", ".join(_shape_str(c) for c in body) + ")"
