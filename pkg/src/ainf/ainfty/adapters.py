"""Export a Pontryagin category as a finite A-infinity category.

Degrees are stored cohomologically (cube dimension negated).  Words longer
than the length cap span an ideal, so truncating by the cap gives a quotient
DG category.
"""

from __future__ import annotations

from ..exactalg import Chain
from ..pontryagin import PontryaginCategory
from .category import AInftyCategory, Gen


def from_pontryagin(P: PontryaginCategory, name: str = "P") -> AInftyCategory:
    m = P.model
    gens: dict[str, Gen] = {}
    words = {}
    for a in P.objects:
        for w in m.paths(a, None, P.max_len):
            lab = str(w)
            words[lab] = w
            gens[lab] = Gen(a, m.end(w), -m.dim(w))
    mu1, mu2 = {}, {}
    for lab, w in words.items():
        img = P.mu1(Chain({w: 1}))
        if img:
            mu1[(lab,)] = {str(k): c for k, c in img.items()}
    for s2, s1 in P.composable_pairs():
        img = P.mu2(Chain({s2: 1}), Chain({s1: 1}))
        if img:
            mu2[(str(s2), str(s1))] = {str(k): c for k, c in img.items()}
    return AInftyCategory(P.objects, gens, {1: mu1, 2: mu2}, name=name)
