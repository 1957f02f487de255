"""Homotopy transfer of a DG structure along a Gaussian-elimination contraction.

A contraction of the hom complexes consists of ``i: W -> A``, ``p: A -> W``
and ``h: A -> A`` of degree -1 with

    p i = 1,    i p - 1 = mu1 h + h mu1.

It is built by repeatedly cancelling a pair ``(s, b)`` where ``b`` occurs in
``mu1(s)`` with coefficient +1 or -1.  In the bar convention
``b_d(x_1, ..., x_d) = mu_d(x_d, ..., x_1)`` the transferred operations are

    lambda_n = sum_{k} b_2(H_k (x) H_{n-k}),   H_1 = i,   H_m = h lambda_m,
    mu^W_n  = p lambda_n      (n >= 2),

and ``F^1 = i, F^n = h lambda_n`` is an A-infinity functor ``W -> A``.  No
extra signs appear because every ``H_m`` has degree zero in the shifted
grading.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Sequence

from ..report import CheckResult, check
from .category import AInftyCategory, Gen, Sparse, _acc
from .functor import AInftyFunctorData

Label = Hashable
LinMap = dict  # label -> Sparse


def _apply(f: LinMap, chain: Sparse) -> Sparse:
    out: Sparse = {}
    for x, c in chain.items():
        for y, e in f.get(x, {}).items():
            _acc(out, y, c * e)
    return out


def _add(a: Sparse, b: Sparse, k: int = 1) -> Sparse:
    out = dict(a)
    for y, c in b.items():
        _acc(out, y, k * c)
    return out


@dataclass
class Contraction:
    kept: list[Label]
    d: LinMap            # differential on W
    i: LinMap            # W -> A
    p: LinMap            # A -> W
    h: LinMap            # A -> A
    pairs: list[tuple[Label, Label]] = field(default_factory=list)


def gaussian_contraction(A: AInftyCategory, pairs: Sequence[tuple[Label, Label]] | None = None,
                         max_pairs: int | None = None) -> Contraction:
    """Cancel pivot pairs of mu1.  With ``pairs=None`` pivots are chosen greedily
    in generator order among coefficients +-1."""
    kept = list(A.gens)
    d: LinMap = {x: dict(A.mu_on((x,))) for x in kept}
    i: LinMap = {x: {x: 1} for x in kept}
    p: LinMap = {x: {x: 1} for x in kept}
    h: LinMap = {}
    done: list[tuple[Label, Label]] = []

    def pick():
        for s in kept:
            for b, c in d[s].items():
                if c in (1, -1) and b != s:
                    return s, b
        return None

    todo = list(pairs) if pairs is not None else None
    while True:
        if max_pairs is not None and len(done) >= max_pairs:
            break
        if todo is not None:
            if not todo:
                break
            s, b = todo.pop(0)
            if d.get(s, {}).get(b) not in (1, -1):
                raise ValueError(f"{b!r} does not occur in mu1({s!r}) with coefficient +-1")
        else:
            nxt = pick()
            if nxt is None:
                break
            s, b = nxt
        e = d[s][b]
        ds = {y: c for y, c in d[s].items() if y not in (s, b)}
        kept = [x for x in kept if x not in (s, b)]
        new_d: LinMap = {}
        for w in kept:
            beta = d[w].get(b, 0)
            img = {y: c for y, c in d[w].items() if y not in (s, b)}
            if beta:
                img = _add(img, ds, -beta * e)
            new_d[w] = img
        i_s = i[s]
        new_i = {}
        for w in kept:
            beta = d[w].get(b, 0)
            new_i[w] = _add(i[w], i_s, -beta * e) if beta else i[w]
        new_p, new_h = {}, dict(h)
        for a, img in p.items():
            coef_b = img.get(b, 0)
            rest = {y: c for y, c in img.items() if y not in (s, b)}
            new_p[a] = _add(rest, ds, -e * coef_b) if coef_b else rest
            if coef_b:
                new_h[a] = _add(h.get(a, {}), i_s, -e * coef_b)
        d, i, p, h = new_d, new_i, new_p, {a: v for a, v in new_h.items() if v}
        done.append((s, b))
    return Contraction(kept, d, i, p, h, done)


def verify_contraction(A: AInftyCategory, c: Contraction, id: str = "contraction") -> CheckResult:
    """p i = 1, i p - 1 = mu1 h + h mu1, mu1 i = i d and p mu1 = d p."""
    mu1 = {x: dict(A.mu_on((x,))) for x in A.gens}
    for w in c.kept:
        if _apply(c.p, c.i[w]) != {w: 1}:
            return check(id, False, {"identity": "p i = 1", "generator": w})
        if _apply(mu1, c.i[w]) != _apply(c.i, c.d[w]):
            return check(id, False, {"identity": "mu1 i = i d", "generator": w})
    for a in A.gens:
        lhs = _add(_apply(c.i, c.p[a]), {a: 1}, -1)
        rhs = _add(_apply(mu1, c.h.get(a, {})), _apply(c.h, mu1[a]))
        if lhs != rhs:
            return check(id, False, {"identity": "i p - 1 = mu1 h + h mu1", "generator": a})
        if _apply(c.p, mu1[a]) != _apply(c.d, c.p[a]):
            return check(id, False, {"identity": "p mu1 = d p", "generator": a})
    return check(id, True, pairs=len(c.pairs), kept=len(c.kept))


class Transfer:
    """Transferred A-infinity structure on the kept generators."""

    def __init__(self, A: AInftyCategory, contraction: Contraction):
        if any(A.mu.get(n) for n in A.mu if n > 2):
            raise ValueError("homotopy transfer here starts from a DG category")
        self.A = A
        self.c = contraction
        self._lam: dict[tuple, Sparse] = {}

    def H(self, ins: tuple) -> Sparse:
        if len(ins) == 1:
            return self.c.i[ins[0]]
        return _apply(self.c.h, self.lam(ins))

    def lam(self, ins: tuple) -> Sparse:
        """lambda_n on inputs in traversal order (x_1, ..., x_n), n >= 2."""
        if ins in self._lam:
            return self._lam[ins]
        out: Sparse = {}
        for k in range(1, len(ins)):
            u, v = self.H(ins[:k]), self.H(ins[k:])
            if u and v:
                for z, c in self.A.evaluate([v, u]).items():
                    _acc(out, z, c)
        self._lam[ins] = out
        return out

    def category(self, d_max: int, name: str = "W") -> AInftyCategory:
        A, c = self.A, self.c
        gens = {x: A.gens[x] for x in c.kept}
        W0 = AInftyCategory(A.objects, gens, {}, name=name)
        mu: dict[int, dict[tuple, Sparse]] = {1: {(x,): v for x, v in c.d.items() if v}}
        for n in range(2, d_max + 1):
            table = {}
            for xs in W0.composable(n):
                out = _apply(c.p, self.lam(xs[::-1]))
                if out:
                    table[xs] = out
            mu[n] = table
        return AInftyCategory(A.objects, gens, mu, name=name)

    def inclusion_functor(self, W: AInftyCategory, d_max: int) -> AInftyFunctorData:
        """The A-infinity functor W -> A extending i."""
        F: dict[int, dict[tuple, Sparse]] = {1: {(x,): self.c.i[x] for x in W.gens}}
        for n in range(2, d_max + 1):
            table = {}
            for xs in W.composable(n):
                out = self.H(xs[::-1])
                if out:
                    table[xs] = out
            F[n] = table
        return AInftyFunctorData(W, self.A, {o: o for o in W.objects}, F)


def transfer(A: AInftyCategory, d_max: int = 4, pairs=None, max_pairs=None):
    """Return (W, functor W -> A, contraction)."""
    c = gaussian_contraction(A, pairs=pairs, max_pairs=max_pairs)
    T = Transfer(A, c)
    W = T.category(d_max)
    return W, T.inclusion_functor(W, d_max), c
