"""Exact graded linear algebra over the integers.

Free modules on labeled generators, sparse integer chains, sparse maps and
integer homology via Smith normal form.  All arithmetic uses Python ints, so
nothing overflows.

>>> M = GradedModule("M", [("a", 0), ("b", 1)])
>>> (Chain({"a": 2}, M) + Chain({"a": -2, "b": 1}, M)).terms
{'b': 1}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Iterator, Mapping, Sequence

Label = Hashable
Matrix = list[list[int]]


class ModuleMismatch(ValueError):
    """Operands live in different modules."""


class ChainComplexError(ValueError):
    """Raised when d_out o d_in is nonzero; carries the first offending generator."""

    def __init__(self, message: str, witness: Label):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class GradedModule:
    """Free Z-module on an ordered list of (label, degree) generators."""

    name: str
    generators: tuple[tuple[Label, int], ...]
    _degrees: Mapping[Label, int] = field(init=False, repr=False, compare=False, hash=False)

    def __init__(self, name: str, generators: Iterable[tuple[Label, int]]):
        gens = tuple((lab, int(deg)) for lab, deg in generators)
        degrees = dict(gens)
        if len(degrees) != len(gens):
            seen = set()
            dup = next(lab for lab, _ in gens if lab in seen or seen.add(lab))
            raise ValueError(f"duplicate generator label {dup!r} in module {name!r}")
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "_degrees", degrees)

    def __contains__(self, label: object) -> bool:
        return label in self._degrees

    def __len__(self) -> int:
        return len(self.generators)

    @property
    def labels(self) -> list[Label]:
        return [lab for lab, _ in self.generators]

    def degree(self, label: Label) -> int:
        try:
            return self._degrees[label]
        except KeyError:
            raise KeyError(f"{label!r} is not a generator of {self.name!r}") from None

    def in_degree(self, n: int) -> "GradedModule":
        return GradedModule(f"{self.name}[{n}]", [(g, d) for g, d in self.generators if d == n])

    def permuted(self, order: Sequence[Label]) -> "GradedModule":
        """Same generators enumerated in a different order."""
        if sorted(map(repr, order)) != sorted(map(repr, self.labels)):
            raise ValueError("order must be a permutation of the generators")
        return GradedModule(self.name, [(g, self._degrees[g]) for g in order])


class Chain:
    """Finite integer combination of generators; zero coefficients are never stored."""

    __slots__ = ("_terms", "module")

    def __init__(self, terms: Mapping[Label, int] | None = None, module: GradedModule | None = None):
        clean = {}
        for lab, c in (terms or {}).items():
            c = int(c)
            if c:
                if module is not None and lab not in module:
                    raise ModuleMismatch(f"{lab!r} is not a generator of {module.name!r}")
                clean[lab] = c
        self._terms = clean
        self.module = module

    @classmethod
    def _raw(cls, terms: dict, module: GradedModule | None) -> "Chain":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj.module = module
        return obj

    @classmethod
    def generator(cls, label: Label, module: GradedModule | None = None, coeff: int = 1) -> "Chain":
        return cls({label: coeff}, module)

    @property
    def terms(self) -> dict[Label, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __iter__(self) -> Iterator[Label]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __getitem__(self, label: Label) -> int:
        return self._terms.get(label, 0)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Chain):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        if not self._terms:
            return "Chain(0)"
        parts = [f"{c:+d}*{lab!r}" for lab, c in self._terms.items()]
        return "Chain(" + " ".join(parts) + ")"

    def _join_module(self, other: "Chain") -> GradedModule | None:
        if self.module is not None and other.module is not None and self.module != other.module:
            raise ModuleMismatch(f"cannot combine chains over {self.module.name!r} and {other.module.name!r}")
        return self.module if self.module is not None else other.module

    def __add__(self, other: "Chain") -> "Chain":
        if not isinstance(other, Chain):
            if other == 0:
                return self
            return NotImplemented
        module = self._join_module(other)
        out = dict(self._terms)
        for lab, c in other._terms.items():
            v = out.get(lab, 0) + c
            if v:
                out[lab] = v
            else:
                out.pop(lab, None)
        return Chain._raw(out, module)

    __radd__ = __add__

    def __neg__(self) -> "Chain":
        return Chain._raw({lab: -c for lab, c in self._terms.items()}, self.module)

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __rmul__(self, k: int) -> "Chain":
        k = int(k)
        if not k:
            return Chain._raw({}, self.module)
        return Chain._raw({lab: k * c for lab, c in self._terms.items()}, self.module)

    __mul__ = __rmul__

    def degrees(self) -> set[int]:
        if self.module is None:
            raise ValueError("degree information needs a module")
        return {self.module.degree(lab) for lab in self._terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int | None:
        """Common degree of a homogeneous chain (None for the zero chain)."""
        degs = self.degrees()
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous chain with degrees {sorted(degs)}")
        return next(iter(degs)) if degs else None


def add(a: Chain, b: Chain) -> Chain:
    return a + b


class SparseMap:
    """Linear map between free modules given on generators."""

    __slots__ = ("source", "target", "shift", "_entries", "name")

    def __init__(self, source: GradedModule, target: GradedModule, shift: int,
                 entries: Mapping[Label, Chain | Mapping[Label, int]] | None = None, name: str = ""):
        self.source = source
        self.target = target
        self.shift = int(shift)
        self.name = name
        table = {}
        for lab, img in (entries or {}).items():
            if lab not in source:
                raise ModuleMismatch(f"entry on {lab!r}, which is not a generator of {source.name!r}")
            terms = img.terms if isinstance(img, Chain) else dict(img)
            img = Chain(terms, target)
            want = source.degree(lab) + self.shift
            for t in img:
                if target.degree(t) != want:
                    raise ValueError(
                        f"{name or 'map'}: {lab!r} (degree {source.degree(lab)}) hits {t!r} "
                        f"of degree {target.degree(t)}, expected {want}")
            if img:
                table[lab] = img
        self._entries = table

    @property
    def entries(self) -> dict[Label, Chain]:
        return dict(self._entries)

    def on(self, label: Label) -> Chain:
        if label not in self.source:
            raise ModuleMismatch(f"{label!r} is not a generator of {self.source.name!r}")
        return self._entries.get(label) or Chain._raw({}, self.target)

    def __call__(self, x: Chain) -> Chain:
        if x.module is not None and x.module != self.source:
            raise ModuleMismatch(f"map expects chains over {self.source.name!r}")
        out: dict[Label, int] = {}
        for lab, c in x.items():
            for t, e in self.on(lab).items():
                v = out.get(t, 0) + c * e
                if v:
                    out[t] = v
                else:
                    out.pop(t, None)
        return Chain._raw(out, self.target)

    def is_zero(self) -> bool:
        return not self._entries

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.shift == other.shift and self._entries == other._entries)

    def __repr__(self) -> str:
        return f"SparseMap({self.source.name}->{self.target.name}, shift={self.shift}, {len(self._entries)} entries)"

    def matrix(self) -> Matrix:
        """Dense integer matrix, rows indexed by target order and columns by source order."""
        row = {lab: i for i, lab in enumerate(self.target.labels)}
        src = self.source.labels
        M = [[0] * len(src) for _ in row]
        for j, lab in enumerate(src):
            for t, c in self.on(lab).items():
                M[row[t]][j] = c
        return M


def identity(module: GradedModule) -> SparseMap:
    return SparseMap(module, module, 0, {g: {g: 1} for g in module.labels}, name="id")


def zero_map(source: GradedModule, target: GradedModule, shift: int = 0) -> SparseMap:
    return SparseMap(source, target, shift, {}, name="0")


def compose(f: SparseMap, g: SparseMap) -> SparseMap:
    """The composite f o g."""
    if g.target != f.source:
        raise ModuleMismatch(f"cannot compose: target {g.target.name!r} is not source {f.source.name!r}")
    entries = {lab: f(g.on(lab)) for lab in g.source.labels}
    return SparseMap(g.source, f.target, f.shift + g.shift, entries, name=f"{f.name}o{g.name}")


def degree_part(f: SparseMap, n: int) -> SparseMap:
    """Restriction of a map on a graded module to the degree-n generators."""
    src = f.source.in_degree(n)
    tgt = f.target.in_degree(n + f.shift)
    return SparseMap(src, tgt, f.shift, {g: f.on(g).terms for g in src.labels}, name=f"{f.name}[{n}]")


def homology_in_degree(d: SparseMap, n: int) -> "HomologySummary":
    """Homology at degree n of a differential on a single graded module."""
    return homology(degree_part(d, n - d.shift), degree_part(d, n))


# ---------------------------------------------------------------- Smith form

@dataclass
class SmithForm:
    """D = U A V with U, V unimodular; the inverses are tracked as well."""

    D: Matrix
    U: Matrix
    V: Matrix
    U_inv: Matrix
    V_inv: Matrix
    rank: int

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(self.rank)]


def eye(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Matrix, B: Matrix, inner: int | None = None) -> Matrix:
    if inner is None:
        inner = len(B)
    ncols = len(B[0]) if B else 0
    out = [[0] * ncols for _ in A]
    for i, row in enumerate(A):
        o = out[i]
        for k in range(inner):
            a = row[k]
            if a:
                for j, b in enumerate(B[k]):
                    if b:
                        o[j] += a * b
    return out


def smith_normal_form(A: Sequence[Sequence[int]], ncols: int | None = None) -> SmithForm:
    """Smith normal form over Z with exact Python integers.

    The diagonal entries are positive and each divides the next.
    """
    D = [[int(x) for x in row] for row in A]
    m = len(D)
    n = ncols if ncols is not None else (len(D[0]) if D else 0)
    U, Ui, V, Vi = eye(m), eye(m), eye(n), eye(n)

    def row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for r in Ui:
            r[i], r[j] = r[j], r[i]

    def row_add(i, j, c):  # row_i += c * row_j
        Di, Dj = D[i], D[j]
        for k in range(n):
            if Dj[k]:
                Di[k] += c * Dj[k]
        Ui_, Uj = U[i], U[j]
        for k in range(m):
            if Uj[k]:
                Ui_[k] += c * Uj[k]
        for r in Ui:
            if r[i]:
                r[j] -= c * r[i]

    def row_neg(i):
        D[i] = [-x for x in D[i]]
        U[i] = [-x for x in U[i]]
        for r in Ui:
            r[i] = -r[i]

    def col_swap(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def col_add(i, j, c):  # col_i += c * col_j
        for r in D:
            if r[j]:
                r[i] += c * r[j]
        for r in V:
            if r[j]:
                r[i] += c * r[j]
        Vii, Vij = Vi[i], Vi[j]
        for k in range(n):
            if Vii[k]:
                Vij[k] -= c * Vii[k]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = D[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, i, j = best
        if i != t:
            row_swap(i, t)
        if j != t:
            col_swap(j, t)
        while True:
            dirty = False
            for i in range(t + 1, m):
                while D[i][t]:
                    row_add(i, t, -(D[i][t] // D[t][t]))
                    if D[i][t]:
                        row_swap(i, t)
            for j in range(t + 1, n):
                while D[t][j]:
                    col_add(j, t, -(D[t][j] // D[t][t]))
                    if D[t][j]:
                        col_swap(j, t)
                        dirty = True
            if dirty:
                continue
            p = D[t][t]
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p), None)
            if bad is None:
                break
            row_add(t, bad, 1)
        if D[t][t] < 0:
            row_neg(t)
        t += 1
    return SmithForm(D, U, V, Ui, Vi, t)


# ------------------------------------------------------------------ homology

@dataclass(frozen=True)
class HomologySummary:
    rank: int
    torsion: tuple[int, ...] = ()


def _check_square_zero(d_in: SparseMap, d_out: SparseMap) -> None:
    if d_in.target != d_out.source:
        raise ModuleMismatch("d_in must land in the source of d_out")
    for lab in d_in.source.labels:
        if d_out(d_in.on(lab)):
            raise ChainComplexError(f"d_out o d_in is nonzero on {lab!r}", lab)


def homology(d_in: SparseMap, d_out: SparseMap) -> HomologySummary:
    """Rank and torsion of ker(d_out)/im(d_in).

    ker(d_out) is a direct summand of the middle module, so the torsion of the
    quotient equals the torsion of coker(d_in).
    """
    _check_square_zero(d_in, d_out)
    n = len(d_out.source)
    r_out = smith_normal_form(d_out.matrix(), ncols=n).rank
    s_in = smith_normal_form(d_in.matrix(), ncols=len(d_in.source))
    torsion = tuple(x for x in s_in.diagonal if x > 1)
    return HomologySummary(n - r_out - s_in.rank, torsion)


@dataclass
class HomologyBasis:
    """Generators of ker(d_out)/im(d_in) with a coordinate map for cycles.

    ``orders[i]`` is 0 for a free generator and the cyclic order otherwise.
    """

    module: GradedModule
    representatives: list[Chain]
    orders: list[int]
    _proj: Matrix
    _change: Matrix
    _offset: int
    _d_out: SparseMap

    @property
    def summary(self) -> HomologySummary:
        return HomologySummary(sum(1 for o in self.orders if o == 0),
                               tuple(o for o in self.orders if o))

    def coordinates(self, z: Chain) -> tuple[int, ...]:
        if self._d_out(Chain(z.terms, self.module)):
            raise ValueError("not a cycle")
        labels = self.module.labels
        vec = [z[lab] for lab in labels]
        c = [sum(a * b for a, b in zip(row, vec)) for row in self._proj]
        y = [sum(a * b for a, b in zip(row, c)) for row in self._change][self._offset:]
        return tuple(v % o if o else v for v, o in zip(y, self.orders))

    def is_boundary(self, z: Chain) -> bool:
        return not any(self.coordinates(z))

    def combination(self, coords: Sequence[int]) -> Chain:
        out = Chain({}, self.module)
        for c, rep in zip(coords, self.representatives):
            out = out + c * rep
        return out


def homology_basis(d_in: SparseMap, d_out: SparseMap) -> HomologyBasis:
    _check_square_zero(d_in, d_out)
    B = d_out.source
    n = len(B)
    s_out = smith_normal_form(d_out.matrix(), ncols=n)
    r = s_out.rank
    K = [row[r:] for row in s_out.V]  # kernel basis as columns
    proj = [row[:] for row in s_out.V_inv[r:]]  # kernel coordinates of a cycle
    k = n - r
    Min = d_in.matrix()
    p = len(d_in.source)
    C = matmul(proj, Min, inner=n) if Min else [[0] * p for _ in range(k)]
    s_c = smith_normal_form(C, ncols=p)
    diag = s_c.diagonal
    offset = sum(1 for x in diag if x == 1)
    orders = [x for x in diag if x > 1] + [0] * (k - s_c.rank)
    reps = []
    for idx in range(offset, k):
        col = [row[idx] for row in s_c.U_inv]
        vec = [sum(K[i][j] * col[j] for j in range(k)) for i in range(n)]
        reps.append(Chain({lab: v for lab, v in zip(B.labels, vec)}, B))
    return HomologyBasis(B, reps, orders, proj, s_c.U, offset, d_out)


# ---------------------------------------------------------------------- JSON

def module_from_json(data: Mapping[str, Any], name: str = "M") -> GradedModule:
    return GradedModule(data.get("name", name), [(g["label"], g["degree"]) for g in data["generators"]])


def maps_from_json(data: Mapping[str, Any], module: GradedModule) -> dict[str, SparseMap]:
    out = {}
    for m in data.get("maps", []):
        entries = {}
        for src, img in m.get("entries", {}).items():
            terms: dict[Label, int] = {}
            for dst, c in img:
                terms[dst] = terms.get(dst, 0) + int(c)
            entries[src] = terms
        out[m["name"]] = SparseMap(module, module, m["shift"], entries, name=m["name"])
    return out


def to_json(module: GradedModule, maps: Iterable[SparseMap] = ()) -> dict[str, Any]:
    return {
        "generators": [{"label": g, "degree": d} for g, d in module.generators],
        "maps": [
            {"name": f.name, "shift": f.shift,
             "entries": {src: [[t, c] for t, c in img.items()] for src, img in f.entries.items()}}
            for f in maps
        ],
    }


def load_complex(path: str) -> tuple[GradedModule, dict[str, SparseMap]]:
    with open(path) as fh:
        data = json.load(fh)
    module = module_from_json(data)
    return module, maps_from_json(data, module)
