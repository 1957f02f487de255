"""A-infinity categories with finitely many generators and the relation checker.

Conventions.  A generator ``x`` has a source object, a target object and a
cohomological degree ``|x|``.  A composable tuple is written
``(x_d, ..., x_1)`` with ``x_1`` traversed first, so ``src(x_{j+1}) =
dst(x_j)``.  Structure maps are stored in that written order:
``mu[d][(x_d, ..., x_1)]`` is a sparse integer combination of generators in
``hom(src(x_1), dst(x_d))`` of degree ``sum |x_j| + 2 - d``.

The relation checked for every composable tuple is

    sum_{d1 + d2 = d + 1} sum_{k=0}^{d-d2} (-1)^{maltese(k)}
        mu_{d1}(x_d, ..., mu_{d2}(x_{k+d2}, ..., x_{k+1}), x_k, ..., x_1) = 0

with ``maltese(k) = k + |x_1| + ... + |x_k|``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Hashable, Iterable, Iterator, Mapping, Sequence

from ..exactalg import GradedModule
from ..parallel import ordered_map
from ..report import CheckResult, check

Label = Hashable
Sparse = dict  # label -> nonzero int


class DegreeRuleError(ValueError):
    pass


class MalformedCategory(ValueError):
    pass


def maltese(k: int, degrees: Sequence[int]) -> int:
    """k + |x_1| + ... + |x_k| for degrees listed as [|x_1|, |x_2|, ...]."""
    if k > len(degrees):
        raise ValueError("k exceeds the number of inputs")
    return k + sum(degrees[:k])


def dagger(degrees: Sequence[int]) -> int:
    """sum_k k |x_k| for degrees listed as [|x_1|, ..., |x_d|]."""
    return sum((k + 1) * deg for k, deg in enumerate(degrees))


def _acc(out: dict, lab: Label, c: int) -> None:
    v = out.get(lab, 0) + c
    if v:
        out[lab] = v
    else:
        out.pop(lab, None)


@dataclass(frozen=True)
class Gen:
    src: str
    dst: str
    degree: int


class AInftyCategory:
    """Objects, graded generators and sparse structure maps mu_1..mu_D."""

    def __init__(self, objects: Iterable[str], generators: Mapping[Label, Gen | tuple],
                 mu: Mapping[int, Mapping[tuple, Mapping[Label, int]]], name: str = "C"):
        self.name = name
        self.objects = list(objects)
        self.gens: dict[Label, Gen] = {}
        obj = set(self.objects)
        for lab, g in generators.items():
            g = g if isinstance(g, Gen) else Gen(*g)
            if g.src not in obj or g.dst not in obj:
                raise MalformedCategory(f"generator {lab!r} has an unknown object")
            self.gens[lab] = Gen(g.src, g.dst, int(g.degree))
        self.order = {lab: i for i, lab in enumerate(self.gens)}
        self.mu: dict[int, dict[tuple, Sparse]] = {}
        for d, table in mu.items():
            d = int(d)
            if d < 1:
                raise MalformedCategory("arity must be positive")
            clean = {}
            for key, out in table.items():
                key = tuple(key)
                out = {lab: int(c) for lab, c in dict(out).items() if int(c)}
                self._validate(d, key, out)
                if out:
                    clean[key] = out
            if clean:
                self.mu[d] = clean
        self.by_src: dict[str, list[Label]] = {o: [] for o in self.objects}
        for lab, g in self.gens.items():
            self.by_src[g.src].append(lab)

    @property
    def max_arity(self) -> int:
        return max((d for d, t in self.mu.items() if t), default=0)

    def _validate(self, d: int, key: tuple, out: Mapping[Label, int]) -> None:
        if len(key) != d:
            raise MalformedCategory(f"mu_{d} entry {key} has {len(key)} inputs")
        for x in key:
            if x not in self.gens:
                raise MalformedCategory(f"unknown generator {x!r}")
        ins = key[::-1]
        for a, b in zip(ins, ins[1:]):
            if self.gens[a].dst != self.gens[b].src:
                raise MalformedCategory(f"mu_{d} entry {key} is not composable")
        src, dst = self.gens[ins[0]].src, self.gens[ins[-1]].dst
        want = sum(self.gens[x].degree for x in key) + 2 - d
        for y in out:
            if y not in self.gens:
                raise MalformedCategory(f"unknown generator {y!r}")
            g = self.gens[y]
            if (g.src, g.dst) != (src, dst):
                raise DegreeRuleError(f"mu_{d}{key} -> {y!r} lands in the wrong hom space")
            if g.degree != want:
                raise DegreeRuleError(f"mu_{d}{key} -> {y!r}: degree {g.degree}, expected {want}")

    def degree(self, x: Label) -> int:
        return self.gens[x].degree

    def hom(self, a: str, b: str) -> GradedModule:
        return GradedModule(f"{self.name}({a},{b})",
                            [(lab, g.degree) for lab, g in self.gens.items() if (g.src, g.dst) == (a, b)])

    def mu_on(self, key: tuple) -> Sparse:
        """mu_d on a written-order tuple of generators (empty dict if zero)."""
        return self.mu.get(len(key), {}).get(key, {})

    def evaluate(self, chains: Sequence[Mapping[Label, int]]) -> Sparse:
        """Multilinear mu_d on chains given in written order."""
        table = self.mu.get(len(chains))
        if not table:
            return {}
        out: Sparse = {}
        keys: list[tuple[tuple, int]] = [((), 1)]
        for ch in chains:
            keys = [(k + (x,), c * a) for k, c in keys for x, a in ch.items()]
            if not keys:
                return {}
        for k, c in keys:
            for y, e in table.get(k, {}).items():
                _acc(out, y, c * e)
        return out

    def composable(self, d: int, first: Iterable[Label] | None = None) -> Iterator[tuple]:
        """Composable tuples of length d in written order, deterministic order."""
        starts = list(self.gens) if first is None else list(first)
        stack = [(x,) for x in reversed(starts)]
        while stack:
            ins = stack.pop()
            if len(ins) == d:
                yield ins[::-1]
                continue
            nxt = self.by_src[self.gens[ins[-1]].dst]
            for y in reversed(nxt):
                stack.append(ins + (y,))

    def structure_constants(self) -> list[tuple[int, tuple, Label]]:
        return [(d, key, y) for d in sorted(self.mu) for key, out in self.mu[d].items() for y in out]

    def with_flipped(self, d: int, key: tuple, y: Label) -> "AInftyCategory":
        mu = {e: {k: dict(v) for k, v in t.items()} for e, t in self.mu.items()}
        mu[d][key][y] = -mu[d][key][y]
        return AInftyCategory(self.objects, self.gens, mu, name=self.name)

    # ---------------------------------------------------------------- JSON

    def to_json(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "objects": list(self.objects),
            "generators": [{"label": lab, "src": g.src, "dst": g.dst, "degree": g.degree}
                           for lab, g in self.gens.items()],
            "mu": {str(d): [{"in": list(key), "out": [[y, c] for y, c in out.items()]}
                            for key, out in sorted(t.items(), key=lambda kv: self._key_order(kv[0]))]
                   for d, t in sorted(self.mu.items()) if t},
        }

    def _key_order(self, key: tuple) -> tuple:
        return tuple(self.order[x] for x in key)

    @classmethod
    def from_json(cls, data: Mapping[str, Any], name: str = "C") -> "AInftyCategory":
        try:
            gens = {g["label"]: Gen(g["src"], g["dst"], int(g["degree"])) for g in data["generators"]}
            mu: dict[int, dict[tuple, dict]] = {}
            for d, entries in data.get("mu", {}).items():
                table: dict[tuple, dict] = {}
                for e in entries:
                    out = table.setdefault(tuple(e["in"]), {})
                    for y, c in e["out"]:
                        out[y] = out.get(y, 0) + int(c)
                mu[int(d)] = table
            return cls(data["objects"], gens, mu, name=data.get("name", name))
        except (KeyError, TypeError) as exc:
            raise MalformedCategory(f"malformed category: {exc}") from exc


def load(path: str) -> AInftyCategory:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MalformedCategory(str(exc)) from exc
    return AInftyCategory.from_json(data)


# ---------------------------------------------------------------- relations

def relation_terms(C: AInftyCategory, xs: tuple) -> list[dict[str, Any]]:
    """All nonzero terms of the A-infinity relation on a written-order tuple."""
    d = len(xs)
    degs = [C.gens[x].degree for x in reversed(xs)]  # |x_1|, ..., |x_d|
    terms = []
    for d2 in range(1, d + 1):
        if not C.mu.get(d2):
            continue
        d1 = d + 1 - d2
        if not C.mu.get(d1):
            continue
        for k in range(0, d - d2 + 1):
            inner = C.mu_on(xs[d - k - d2:d - k])
            if not inner:
                continue
            sign = -1 if maltese(k, degs) % 2 else 1
            left, right = xs[:d - k - d2], xs[d - k:]
            value: Sparse = {}
            for y, c in inner.items():
                for z, e in C.mu_on(left + (y,) + right).items():
                    _acc(value, z, sign * c * e)
            if value:
                terms.append({"d1": d1, "d2": d2, "k": k, "sign": sign, "value": value})
    return terms


def relation_value(C: AInftyCategory, xs: tuple) -> Sparse:
    total: Sparse = {}
    for t in relation_terms(C, xs):
        for z, c in t["value"].items():
            _acc(total, z, c)
    return total


def check_ainfty(C: AInftyCategory, d_max: int = 4, id: str = "ainfty",
                 stop_at_first: bool = True) -> CheckResult:
    """Check the A-infinity relations on all composable tuples of length <= d_max.

    Tuples are visited by arity and then in generator order of x_1, x_2, ...,
    so the reported witness is the minimal failing tuple in that order.
    """
    counts = {}
    vacuous = []
    failures = []
    for d in range(1, d_max + 1):
        # no pair of nonzero operations composes to arity d: every term vanishes
        if not any(C.mu.get(d2) and C.mu.get(d + 1 - d2) for d2 in range(1, d + 1)):
            vacuous.append(d)
            continue
        chunks = [[x] for x in C.gens]

        def run(chunk, d=d):
            bad, n = [], 0
            for xs in C.composable(d, chunk):
                n += 1
                if relation_value(C, xs):
                    bad.append(xs)
                    if stop_at_first:
                        break
            return n, bad

        results = ordered_map(run, chunks)
        counts[d] = sum(n for n, _ in results)
        bad = [xs for _, b in results for xs in b]
        if bad:
            bad.sort(key=lambda xs: C._key_order(xs[::-1]))
            failures.extend(bad)
            if stop_at_first:
                break
    if failures:
        xs = failures[0]
        terms = relation_terms(C, xs)
        witness = {"tuple": list(xs), "d": len(xs),
                   "terms": [{**t, "value": _fmt(t["value"])} for t in terms],
                   "sum": _fmt(relation_value(C, xs)), "failures": len(failures)}
        return check(id, False, witness, d_max=d_max, tuples=counts, vacuous=vacuous)
    return check(id, True, d_max=d_max, tuples=counts, vacuous=vacuous)


def _fmt(v: Mapping) -> dict:
    return {str(k): c for k, c in v.items()}


def leibniz_defect(C: AInftyCategory, x2: Label, x1: Label) -> Sparse:
    """mu1 mu2(x2,x1) + mu2(x2, mu1 x1) + (-1)^(|x1|+1) mu2(mu1 x2, x1): the
    arity-two relation written out directly."""
    out: Sparse = {}
    m2 = C.mu_on((x2, x1))
    for z, c in C.evaluate([m2]).items():
        _acc(out, z, c)
    for z, c in C.evaluate([{x2: 1}, C.mu_on((x1,))]).items():
        _acc(out, z, c)
    s = (-1) ** (C.gens[x1].degree + 1)
    for z, c in C.evaluate([C.mu_on((x2,)), {x1: 1}]).items():
        _acc(out, z, s * c)
    return out


def chain_associativity_defects(C: AInftyCategory) -> list[tuple]:
    """Generator triples with mu2(mu2(a,b),c) != (-1)^|c| mu2(a, mu2(b,c))."""
    bad = []
    for a, b, c in C.composable(3):
        lhs = C.evaluate([C.mu_on((a, b)), {c: 1}])
        rhs = C.evaluate([{a: 1}, C.mu_on((b, c))])
        s = (-1) ** C.gens[c].degree
        if lhs != {z: s * v for z, v in rhs.items()}:
            bad.append((a, b, c))
    return bad
