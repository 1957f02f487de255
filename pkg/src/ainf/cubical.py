"""Presented cubical sets and their normalized chain complexes.

A presented cubical set lists finitely many nondegenerate cubes together with
all of their codimension-one faces.  A face is either another listed cube or a
degeneracy ``s_j(tau)`` of a cube two dimensions down.  Iterated faces are
computed on normal forms ``(base, D)``: a nondegenerate base cube together with
the set ``D`` of collapsed coordinates.

The boundary uses the alternating convention

    d(sigma) = sum_k sum_eps (-1)^(k+eps) sigma o delta_{k,eps}

with degenerate faces discarded.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Any, Hashable, Iterable, Mapping, NamedTuple

from .exactalg import Chain, GradedModule, SparseMap, compose
from .report import CheckResult, check

Label = Hashable


class DegenerateFace(NamedTuple):
    """The face equals s_dir(of): ``of`` is a cube two dimensions down."""

    of: Label
    dir: int


class InvalidCubicalSet(ValueError):
    pass


class Cell(NamedTuple):
    base: Label
    collapsed: frozenset[int]

    @property
    def degenerate(self) -> bool:
        return bool(self.collapsed)


class PresentedCubicalSet:
    """Finite cubical set given by cubes, dimensions and face data.

    ``faces[label][(k, eps)]`` is a label or a :class:`DegenerateFace`.
    Construction checks that the data are well formed; the cubical identities
    are checked by :func:`check_complex`.
    """

    def __init__(self, dims: Mapping[Label, int], faces: Mapping[Label, Mapping[tuple[int, int], Any]],
                 arity: int = 1):
        self.dims = dict(dims)
        self.arity = arity
        self.faces: dict[Label, dict[tuple[int, int], Label | DegenerateFace]] = {}
        for lab, n in self.dims.items():
            if n < 0:
                raise InvalidCubicalSet(f"{lab!r} has negative dimension")
            table = dict(faces.get(lab, {}))
            want = {(k, e) for k in range(1, n + 1) for e in (0, 1)}
            if set(table) != want:
                missing = sorted(want - set(table))
                extra = sorted(set(table) - want)
                raise InvalidCubicalSet(f"{lab!r}: faces missing {missing} / unexpected {extra}")
            for key, f in table.items():
                if isinstance(f, DegenerateFace):
                    if f.of not in self.dims:
                        raise InvalidCubicalSet(f"{lab!r}{key}: unknown cube {f.of!r}")
                    if self.dims[f.of] != n - 2 or not 1 <= f.dir <= n - 1:
                        raise InvalidCubicalSet(f"{lab!r}{key}: inconsistent degeneracy marker {f}")
                else:
                    if f not in self.dims:
                        raise InvalidCubicalSet(f"{lab!r}{key}: unknown cube {f!r}")
                    if self.dims[f] != n - 1:
                        raise InvalidCubicalSet(f"{lab!r}{key}: face {f!r} has the wrong dimension")
            self.faces[lab] = table
        unknown = set(faces) - set(self.dims)
        if unknown:
            raise InvalidCubicalSet(f"faces given for unknown cubes {sorted(map(repr, unknown))}")
        self._module: GradedModule | None = None

    def __contains__(self, label: object) -> bool:
        return label in self.dims

    def __len__(self) -> int:
        return len(self.dims)

    @property
    def labels(self) -> list[Label]:
        return list(self.dims)

    @property
    def module(self) -> GradedModule:
        """Graded module on the nondegenerate cubes, graded by dimension."""
        if self._module is None:
            self._module = GradedModule("cubes", [(lab, n) for lab, n in self.dims.items()])
        return self._module

    def dim(self, label: Label) -> int:
        try:
            return self.dims[label]
        except KeyError:
            raise KeyError(f"unknown cube {label!r}") from None

    def cell(self, label: Label) -> Cell:
        self.dim(label)
        return Cell(label, frozenset())

    def cell_dim(self, c: Cell) -> int:
        return self.dims[c.base] + len(c.collapsed)

    def face(self, c: Cell | Label, k: int, eps: int) -> Cell:
        """Normal form of the (k, eps) face of a possibly degenerate cell."""
        if not isinstance(c, Cell):
            c = self.cell(c)
        n = self.cell_dim(c)
        if not 1 <= k <= n:
            raise ValueError(f"face index {k} out of range for a {n}-cell")
        shifted = frozenset(d if d < k else d - 1 for d in c.collapsed if d != k)
        if k in c.collapsed:
            return Cell(c.base, shifted)
        kb = k - sum(1 for d in c.collapsed if d < k)
        f = self.faces[c.base][(kb, eps)]
        if isinstance(f, DegenerateFace):
            fb, fd = f.of, {f.dir}
        else:
            fb, fd = f, set()
        free = [p for p in range(1, n) if p not in shifted]
        return Cell(fb, shifted | frozenset(free[j - 1] for j in fd))

    def boundary(self, sigma: Label) -> Chain:
        """Signed boundary of a cube; degenerate faces contribute nothing."""
        n = self.dim(sigma)
        out: dict[Label, int] = {}
        for k in range(1, n + 1):
            for eps in (0, 1):
                f = self.faces[sigma][(k, eps)]
                if isinstance(f, DegenerateFace):
                    continue
                v = out.get(f, 0) + (-1) ** (k + eps)
                if v:
                    out[f] = v
                else:
                    out.pop(f)
        return Chain(out, self.module)

    def boundary_chain(self, chain: Chain) -> Chain:
        out = Chain({}, self.module)
        for lab, c in chain.items():
            out = out + c * self.boundary(lab)
        return out

    def differential(self) -> SparseMap:
        return SparseMap(self.module, self.module, -1,
                         {lab: self.boundary(lab) for lab in self.dims}, name="d")

    # ------------------------------------------------------------------ I/O

    def to_json(self) -> dict[str, Any]:
        faces = {}
        for lab, table in self.faces.items():
            if not table:
                continue
            entry = {}
            for (k, e), f in sorted(table.items()):
                if isinstance(f, DegenerateFace):
                    entry[f"{k},{e}"] = {"degenerate": {"of": f.of, "dir": f.dir}}
                else:
                    entry[f"{k},{e}"] = {"cube": f}
            faces[lab] = entry
        return {"cubes": [{"label": lab, "dim": n} for lab, n in self.dims.items()], "faces": faces}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "PresentedCubicalSet":
        try:
            dims = {c["label"]: int(c["dim"]) for c in data["cubes"]}
            faces: dict[Label, dict[tuple[int, int], Any]] = {}
            for lab, entry in data.get("faces", {}).items():
                table = {}
                for key, val in entry.items():
                    k, e = (int(x) for x in key.split(","))
                    if "cube" in val:
                        table[(k, e)] = val["cube"]
                    else:
                        deg = val["degenerate"]
                        table[(k, e)] = DegenerateFace(deg["of"], int(deg["dir"]))
                faces[lab] = table
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise InvalidCubicalSet(f"malformed cubical fixture: {exc}") from exc
        return cls(dims, faces)


def boundary(X: PresentedCubicalSet, sigma: Label) -> Chain:
    return X.boundary(sigma)


def load(path: str, strict: bool = True) -> PresentedCubicalSet:
    """Load a JSON fixture; with ``strict`` the cubical identities must hold."""
    with open(path) as fh:
        X = PresentedCubicalSet.from_json(json.load(fh))
    if strict:
        rep = check_complex(X)
        if not rep.ok:
            raise InvalidCubicalSet(f"cubical identity violated: {rep.witness}")
    return X


def check_complex(X: PresentedCubicalSet, id: str = "cubical") -> CheckResult:
    """Verify the face identities on every cube and then d o d = 0."""
    identities = 0
    for sigma in X.labels:
        n = X.dim(sigma)
        for l in range(2, n + 1):
            for k in range(1, l):
                for e in (0, 1):
                    for e2 in (0, 1):
                        lhs = X.face(X.face(sigma, l, e2), k, e)
                        rhs = X.face(X.face(sigma, k, e), l - 1, e2)
                        identities += 1
                        if lhs != rhs:
                            return check(id, False, {
                                "kind": "face_identity", "cube": sigma, "k": k, "l": l,
                                "eps": e, "eps2": e2, "lhs": _cell_json(lhs), "rhs": _cell_json(rhs)})
    d = X.differential()
    dd = compose(d, d)
    for sigma in X.labels:
        img = dd.on(sigma)
        if img:
            return check(id, False, {"kind": "d_squared", "cube": sigma, "value": img.terms})
    return check(id, True, identities=identities, cubes=len(X))


def _cell_json(c: Cell) -> dict[str, Any]:
    return {"base": c.base, "collapsed": sorted(c.collapsed)}


# ------------------------------------------------------------------ products

def _as_tuple(label: Label, arity: int) -> tuple:
    return tuple(label) if arity > 1 else (label,)


def product(X: PresentedCubicalSet, Y: PresentedCubicalSet) -> PresentedCubicalSet:
    """Product presentation: cubes are pairs, faces act on the coordinate block
    of the corresponding factor (first dim(sigma) coordinates from sigma).

    Labels are flat tuples, so (X x Y) x Z and X x (Y x Z) coincide.
    """
    dims: dict[Label, int] = {}
    faces: dict[Label, dict] = {}
    for s, p in X.dims.items():
        ts = _as_tuple(s, X.arity)
        for t, q in Y.dims.items():
            tt = _as_tuple(t, Y.arity)
            lab = ts + tt
            dims[lab] = p + q
            table = {}
            for k in range(1, p + q + 1):
                for e in (0, 1):
                    if k <= p:
                        f = X.faces[s][(k, e)]
                        if isinstance(f, DegenerateFace):
                            table[(k, e)] = DegenerateFace(_as_tuple(f.of, X.arity) + tt, f.dir)
                        else:
                            table[(k, e)] = _as_tuple(f, X.arity) + tt
                    else:
                        f = Y.faces[t][(k - p, e)]
                        if isinstance(f, DegenerateFace):
                            table[(k, e)] = DegenerateFace(ts + _as_tuple(f.of, Y.arity), f.dir + p)
                        else:
                            table[(k, e)] = ts + _as_tuple(f, Y.arity)
            faces[lab] = table
    return PresentedCubicalSet(dims, faces, arity=X.arity + Y.arity)


def cross(X: PresentedCubicalSet, Y: PresentedCubicalSet, sigma: Chain, tau: Chain,
          XY: PresentedCubicalSet | None = None) -> Chain:
    """Bilinear cross product of chains on X and Y, as a chain on X x Y."""
    XY = XY if XY is not None else product(X, Y)
    out: dict[Label, int] = {}
    for s, a in sigma.items():
        X.dim(s)
        for t, b in tau.items():
            Y.dim(t)
            lab = _as_tuple(s, X.arity) + _as_tuple(t, Y.arity)
            if lab not in XY:
                raise ValueError("product presentation does not match the factors")
            v = out.get(lab, 0) + a * b
            if v:
                out[lab] = v
            else:
                out.pop(lab)
    return Chain(out, XY.module)


# ------------------------------------------------------------------ fixtures

def interval() -> PresentedCubicalSet:
    return PresentedCubicalSet({"0": 0, "1": 0, "I": 1}, {"I": {(1, 0): "0", (1, 1): "1"}})


def circle() -> PresentedCubicalSet:
    return PresentedCubicalSet({"v": 0, "e": 1}, {"e": {(1, 0): "v", (1, 1): "v"}})


def torus() -> PresentedCubicalSet:
    """One vertex, two loops a and b, and a square with opposite sides identified."""
    return PresentedCubicalSet(
        {"v": 0, "a": 1, "b": 1, "T": 2},
        {"a": {(1, 0): "v", (1, 1): "v"}, "b": {(1, 0): "v", (1, 1): "v"},
         "T": {(1, 0): "b", (1, 1): "b", (2, 0): "a", (2, 1): "a"}})


def random_square_complex(rng: random.Random, n_vertices: int = 3, n_edges: int = 4,
                          n_squares: int = 2, n_cones: int = 1, prefix: str = "") -> PresentedCubicalSet:
    """Random 2-dimensional presented cubical set.

    Squares are glued along existing edges with consistent corners; cones are
    2-cubes on a loop whose two remaining faces are degenerate.
    """
    V = [f"{prefix}v{i}" for i in range(n_vertices)]
    dims: dict[Label, int] = {v: 0 for v in V}
    faces: dict[Label, dict] = {}
    ends: dict[Label, tuple[Label, Label]] = {}

    def new_edge(a, b):
        e = f"{prefix}e{len(ends)}"
        dims[e] = 1
        faces[e] = {(1, 0): a, (1, 1): b}
        ends[e] = (a, b)
        return e

    for _ in range(n_edges):
        new_edge(rng.choice(V), rng.choice(V))
    for i in range(n_squares):
        # corners v(x1, x2); edges left x1=0, right x1=1, bottom x2=0, top x2=1
        c = {(a, b): rng.choice(V) for a in (0, 1) for b in (0, 1)}
        left = new_edge(c[0, 0], c[0, 1])
        right = new_edge(c[1, 0], c[1, 1])
        bottom = new_edge(c[0, 0], c[1, 0])
        top = new_edge(c[0, 1], c[1, 1])
        s = f"{prefix}s{i}"
        dims[s] = 2
        faces[s] = {(1, 0): left, (1, 1): right, (2, 0): bottom, (2, 1): top}
    for i in range(n_cones):
        v = rng.choice(V)
        loop = new_edge(v, v)
        s = f"{prefix}c{i}"
        dims[s] = 2
        faces[s] = {(1, 0): loop, (1, 1): loop,
                    (2, 0): DegenerateFace(v, 1), (2, 1): DegenerateFace(v, 1)}
    return PresentedCubicalSet(dims, faces)


def random_cubical_set(seed: int, max_gens: int = 200) -> PresentedCubicalSet:
    """Product of two random square complexes: cubes up to dimension 4."""
    rng = random.Random(seed)
    while True:
        A = random_square_complex(rng, rng.randint(1, 3), rng.randint(1, 3), rng.randint(0, 1),
                                  rng.randint(0, 1), prefix="x")
        B = random_square_complex(rng, rng.randint(1, 3), rng.randint(1, 3), rng.randint(1, 2),
                                  rng.randint(0, 1), prefix="y")
        if len(A) * len(B) <= max_gens:
            return product(A, B)
