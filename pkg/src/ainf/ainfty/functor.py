"""A-infinity functor data and the functor relation checker.

``F[d][(x_d, ..., x_1)]`` is a sparse combination of target generators of
degree ``sum |x_j| + 1 - d``.  For every composable source tuple the checker
compares

    LHS = sum_r sum_{s_1 + ... + s_r = d} mu^T_r(F^{s_r}(...), ..., F^{s_1}(x_{s_1}, ..., x_1))
    RHS = sum_{m, k} (-1)^{maltese(k)} F^{d-m+1}(x_d, ..., mu^S_m(x_{k+m}, ..., x_{k+1}), x_k, ..., x_1)

``paper-literal`` uses no signs on the left.  ``koszul`` multiplies each left
term by ``(-1)^{sum_{i<j} (1 - s_i) deg(block_j)}``, blocks numbered from the
right, which is the reordering sign of the unshifted tensor convention.
"""

from __future__ import annotations

import json
from typing import Any, Iterator, Mapping

from ..parallel import ordered_map
from ..report import CheckResult, check
from .category import AInftyCategory, DegreeRuleError, MalformedCategory, Sparse, _acc, _fmt, maltese

CONVENTIONS = ("paper-literal", "koszul")


def compositions(d: int) -> Iterator[tuple[int, ...]]:
    """Ordered tuples of positive integers summing to d."""
    if d == 0:
        yield ()
        return
    for first in range(1, d + 1):
        for rest in compositions(d - first):
            yield (first,) + rest


class AInftyFunctorData:
    def __init__(self, source: AInftyCategory, target: AInftyCategory, object_map: Mapping[str, str],
                 F: Mapping[int, Mapping[tuple, Mapping[Any, int]]]):
        self.source = source
        self.target = target
        self.object_map = dict(object_map)
        missing = set(source.objects) - set(self.object_map)
        if missing:
            raise MalformedCategory(f"object map misses {sorted(missing)}")
        self.F: dict[int, dict[tuple, Sparse]] = {}
        for d, table in F.items():
            d = int(d)
            clean = {}
            for key, out in table.items():
                key = tuple(key)
                out = {y: int(c) for y, c in dict(out).items() if int(c)}
                self._validate(d, key, out)
                if out:
                    clean[key] = out
            if clean:
                self.F[d] = clean

    def _validate(self, d: int, key: tuple, out: Mapping) -> None:
        S, T = self.source, self.target
        if len(key) != d:
            raise MalformedCategory(f"F^{d} entry {key} has {len(key)} inputs")
        for x in key:
            if x not in S.gens:
                raise MalformedCategory(f"unknown source generator {x!r}")
        ins = key[::-1]
        for a, b in zip(ins, ins[1:]):
            if S.gens[a].dst != S.gens[b].src:
                raise MalformedCategory(f"F^{d} entry {key} is not composable")
        src = self.object_map[S.gens[ins[0]].src]
        dst = self.object_map[S.gens[ins[-1]].dst]
        want = sum(S.gens[x].degree for x in key) + 1 - d
        for y in out:
            if y not in T.gens:
                raise MalformedCategory(f"unknown target generator {y!r}")
            g = T.gens[y]
            if (g.src, g.dst) != (src, dst):
                raise DegreeRuleError(f"F^{d}{key} -> {y!r} lands in the wrong hom space")
            if g.degree != want:
                raise DegreeRuleError(f"F^{d}{key} -> {y!r}: degree {g.degree}, expected {want}")

    def on(self, key: tuple) -> Sparse:
        return self.F.get(len(key), {}).get(key, {})

    def apply(self, chains: list[Mapping]) -> Sparse:
        """Multilinear F^d on source chains in written order."""
        table = self.F.get(len(chains))
        if not table:
            return {}
        keys = [((), 1)]
        for ch in chains:
            keys = [(k + (x,), c * a) for k, c in keys for x, a in ch.items()]
        out: Sparse = {}
        for k, c in keys:
            for y, e in table.get(k, {}).items():
                _acc(out, y, c * e)
        return out

    # ------------------------------------------------------------ relation

    def lhs(self, xs: tuple, convention: str = "paper-literal") -> Sparse:
        d = len(xs)
        S, T = self.source, self.target
        out: Sparse = {}
        for comp in compositions(d):
            # comp = (s_1, ..., s_r); block 1 holds x_1..x_{s_1}
            blocks, pos = [], d
            for s in comp:
                blocks.append(xs[pos - s:pos])
                pos -= s
            images = [self.on(b) for b in blocks]
            if any(not im for im in images):
                continue
            sign = 1
            if convention == "koszul":
                degs = [sum(S.gens[x].degree for x in b) for b in blocks]
                e = sum((1 - comp[i]) * degs[j] for i in range(len(comp)) for j in range(i + 1, len(comp)))
                sign = -1 if e % 2 else 1
            for z, c in T.evaluate(images[::-1]).items():
                _acc(out, z, sign * c)
        return out

    def rhs(self, xs: tuple) -> Sparse:
        d = len(xs)
        S = self.source
        degs = [S.gens[x].degree for x in reversed(xs)]
        out: Sparse = {}
        for m in range(1, d + 1):
            if not S.mu.get(m) or not self.F.get(d - m + 1):
                continue
            for k in range(0, d - m + 1):
                inner = S.mu_on(xs[d - k - m:d - k])
                if not inner:
                    continue
                sign = -1 if maltese(k, degs) % 2 else 1
                left, right = xs[:d - k - m], xs[d - k:]
                for y, c in inner.items():
                    for z, e in self.on(left + (y,) + right).items():
                        _acc(out, z, sign * c * e)
        return out

    # ------------------------------------------------------------ JSON

    def to_json(self) -> dict[str, Any]:
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "object_map": self.object_map,
            "F": {str(d): [{"in": list(k), "out": [[y, c] for y, c in v.items()]} for k, v in t.items()]
                  for d, t in sorted(self.F.items()) if t},
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "AInftyFunctorData":
        try:
            S = AInftyCategory.from_json(data["source"], name="S")
            T = AInftyCategory.from_json(data["target"], name="T")
            F: dict[int, dict] = {}
            for d, entries in data.get("F", {}).items():
                table: dict[tuple, dict] = {}
                for e in entries:
                    out = table.setdefault(tuple(e["in"]), {})
                    for y, c in e["out"]:
                        out[y] = out.get(y, 0) + int(c)
                F[int(d)] = table
            return cls(S, T, data["object_map"], F)
        except (KeyError, TypeError) as exc:
            raise MalformedCategory(f"malformed functor: {exc}") from exc


def load(path: str) -> AInftyFunctorData:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MalformedCategory(str(exc)) from exc
    return AInftyFunctorData.from_json(data)


def identity_functor(C: AInftyCategory) -> AInftyFunctorData:
    return AInftyFunctorData(C, C, {o: o for o in C.objects}, {1: {(x,): {x: 1} for x in C.gens}})


def check_functor(F: AInftyFunctorData, d_max: int = 4, convention: str = "paper-literal",
                  id: str = "functor") -> CheckResult:
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    S = F.source
    counts = {}
    for d in range(1, d_max + 1):
        def run(x, d=d):
            n = 0
            for xs in S.composable(d, [x]):
                n += 1
                lhs, rhs = F.lhs(xs, convention), F.rhs(xs)
                if lhs != rhs:
                    return n, (xs, lhs, rhs)
            return n, None

        results = ordered_map(run, list(S.gens))
        counts[d] = sum(n for n, _ in results)
        bad = [b for _, b in results if b is not None]
        if bad:
            xs, lhs, rhs = bad[0]
            return check(id, False, {"tuple": list(xs), "d": d, "lhs": _fmt(lhs), "rhs": _fmt(rhs)},
                         d_max=d_max, convention=convention, tuples=counts)
    return check(id, True, d_max=d_max, convention=convention, tuples=counts)
