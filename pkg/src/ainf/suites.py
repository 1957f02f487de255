"""Verification suites, one per module, assembled into deterministic reports.

Every suite takes a seed and returns a :class:`VerificationReport`.  Fixtures
are generated from the seed, so the same seed always gives the same report.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Any

import numpy as np

from . import branes, c0bound, cubical, pontryagin, strata
from .ainfty import (
    AInftyCategory, AInftyFunctorData, chain_associativity_defects, check_ainfty, check_functor,
    homology_product, verify_contraction,
)
from .ainfty.fixtures import dg_fixture, mu3_fixture, transferred_fixture
from .parallel import ordered_map
from .report import CheckResult, VerificationReport, check, diagnostic


# ---------------------------------------------------------------- cubical

def cubical_suite(seed: int = 0, count: int = 20) -> VerificationReport:
    rep = VerificationReport("cubical", meta={"seed": seed, "fixtures": count})
    seeds = [seed * 1000 + i for i in range(count)]

    def run(s):
        X = cubical.random_cubical_set(s)
        res = cubical.check_complex(X, id=f"d_squared[{s}]")
        res.details.update(max_dim=max(X.dims.values()), generators=len(X))
        return res

    rep.extend(ordered_map(run, seeds))
    return rep


# ---------------------------------------------------------------- pontryagin

def pontryagin_suite(seed: int = 0, count: int = 10, max_len: int = 4,
                     model: pontryagin.DigraphLoopModel | None = None) -> VerificationReport:
    """Leibniz identity on a family of random digraphs (or one given model),
    and detection of every single-sign perturbation.  Detection is a gate for
    the generated family and a diagnostic for a single input model."""
    rep = VerificationReport("pontryagin", meta={"seed": seed, "max_len": max_len})
    models = [("input", model)] if model is not None else \
        [(str(seed * 1000 + i), pontryagin.random_digraph(seed * 1000 + i)) for i in range(count)]
    for name, G in models:
        P = pontryagin.PontryaginCategory(G, max_len=max_len)
        rep.add(pontryagin.check_dg_identity(P, id=f"leibniz[{name}]"))
        rep.add(check(f"associative[{name}]", not pontryagin.associativity_defects(P, limit=1)))
    missed = []
    injected = 0
    for name, G in models:
        for pert, conv in sorted(pontryagin.PERTURBATIONS.items()):
            injected += 1
            if pontryagin.check_dg_identity(pontryagin.PontryaginCategory(G, max_len, conv)).ok:
                missed.append([name, pert])
    if model is None:
        rep.add(check("perturbations_detected", not missed, {"missed": missed}, injected=injected,
                      detected=injected - len(missed)))
    else:
        # a small input may be unable to tell some conventions apart
        rep.add(diagnostic("perturbations_detected", missed=missed, injected=injected,
                           detected=injected - len(missed)))
    return rep


# ---------------------------------------------------------------- A-infinity

def flip_sensitivity(C: AInftyCategory, d_max: int = 4, id: str = "flips") -> CheckResult:
    """Flip each structure constant in turn; every flip must break a relation."""
    consts = C.structure_constants()
    accepted = [[d, list(key), str(y)] for d, key, y in consts
                if check_ainfty(C.with_flipped(d, key, y), d_max).ok]
    return check(id, not accepted, {"accepted": accepted}, flips=len(consts))


def ainfty_category_report(C: AInftyCategory, d_max: int = 4) -> VerificationReport:
    rep = VerificationReport("ainfty", meta={"name": C.name, "d_max": d_max, "generators": len(C.gens)})
    rep.add(check_ainfty(C, d_max, id=f"relations[{C.name}]"))
    return rep


def functor_report(F: AInftyFunctorData, d_max: int = 4, convention: str = "paper-literal") -> VerificationReport:
    rep = VerificationReport("functor", meta={"d_max": d_max, "convention": convention})
    rep.add(check_ainfty(F.source, d_max, id="source"))
    rep.add(check_ainfty(F.target, d_max, id="target"))
    rep.add(check_functor(F, d_max, convention, id="functor"))
    return rep


def ainfty_suite(seed: int = 0, d_max: int = 4) -> VerificationReport:
    rep = VerificationReport("ainfty", meta={"seed": seed, "d_max": d_max})
    A, W, F, c = mu3_fixture(d_max)
    rep.add(verify_contraction(A, c, id="mu3.contraction"))
    rep.add(check_ainfty(A, d_max, id="mu3.dg"))
    rep.add(check_ainfty(W, d_max, id="mu3.transferred"))
    rep.add(check_functor(F, d_max, "paper-literal", id="mu3.functor"))
    rep.add(flip_sensitivity(W, d_max, id="mu3.flips"))
    defects = chain_associativity_defects(W)
    hp = homology_product(W)
    rep.add(check("mu3.chain_product_not_associative", bool(defects) and bool(W.mu.get(3)),
                  None, defects=[list(x) for x in defects], mu3=len(W.mu.get(3, {}))))
    rep.add(check("mu3.homology_product_associative", hp["associative"],
                  hp["associativity"], classes=len(hp["classes"])))
    s = 2 + seed % 5
    dg = dg_fixture(s)
    rep.add(check_ainfty(dg, d_max, id=f"dg{s}"))
    T, G = transferred_fixture(s, d_max)
    rep.add(check_ainfty(T, d_max, id=f"transferred{s}"))
    rep.add(check_functor(G, d_max, "paper-literal", id=f"transferred{s}.functor"))
    rep.add(diagnostic(f"transferred{s}.koszul_mode",
                       ok=check_functor(G, d_max, "koszul").ok, mu3=len(T.mu.get(3, {})),
                       mu4=len(T.mu.get(4, {}))))
    return rep


# ---------------------------------------------------------------- strata

def strata_suite(seed: int = 0) -> VerificationReport:
    rep = VerificationReport("strata", meta={"seed": seed})
    rep.add(check("Z4_facets", len(strata.codim1_Z(2)) == 2, None, count=len(strata.codim1_Z(2))))
    rep.add(check("R3_facets", len(strata.codim1_R(3)) == 2, None, count=len(strata.codim1_R(3))))
    dims = {d: strata.dim_Z(d) for d in range(1, 11)}
    rep.add(check("dim_Z", all(v == d - 1 for d, v in dims.items()), dims, dims=dims))
    facets = {d: len(strata.codim1_R(d)) for d in range(2, 9)}
    expected = {d: d * (d - 1) // 2 - 1 for d in range(2, 9)}
    rep.add(check("stasheff_facets", facets == expected, {"got": facets, "want": expected}, counts=facets))
    for d in range(1, 5):
        res = strata.check_mod2(d)
        rep.add(check(f"mod2[d={d}]", res["ok"], res["violations"], facets=res["facets"], codim2=res["codim2"]))
    rng = random.Random(seed)
    for d in range(1, 5):
        sigma = {i: rng.randint(0, 2) for i in range(1, d + 1)}
        res = strata.check_formal_mod2(d, sigma)
        rep.add(check(f"formal_mod2[d={d}]", res["ok"], res["odd"], sigma_dims=sigma, shapes=res["shapes"]))
    for d in range(1, 4):
        sigma = {i: rng.randint(0, 2) for i in range(1, d + 1)}
        res = strata.signed_residues(d, sigma, seed=seed)
        rep.add(diagnostic(f"signed_residues[d={d}]", sigma_dims=sigma, shapes=res["shapes"],
                           nonzero=res["nonzero"], cancels=res["cancels"]))
    zs = strata.z_to_stasheff(2)
    rep.add(check("z_to_stasheff[d=2]", zs["interior_dimensions_agree"] and not zs["extends_to_boundary"],
                  zs, Z_facet_types=zs["Z_facet_types"], R_facet_types=zs["R_facet_types"]))
    return rep


def strata_report(space: str, d: int, list_: bool = False, check_: str | None = None,
                  signed: bool = False, assign: str = "random", seed: int = 0) -> VerificationReport:
    rep = VerificationReport("strata", meta={"space": space, "d": d, "seed": seed})
    if space == "R":
        facets = strata.codim1_R(d)
        rep.add(check("dimension", True, None, dim=strata.dim_R(d) if d >= 2 else 0))
        if list_:
            rep.add(check("codim1", True, None, count=len(facets),
                          strata=[f"({d1},{d2},{k})" for d1, d2, k in facets]))
    else:
        rep.add(check("dimension", strata.dim_Z(d) == d - 1, None, dim=strata.dim_Z(d)))
        if list_:
            facets = strata.codim1_Z(d)
            rep.add(check("codim1", True, None, count=len(facets), strata=[str(s) for s in facets]))
        if check_ == "mod2":
            res = strata.check_mod2(d)
            rep.add(check("mod2", res["ok"], res["violations"], facets=res["facets"], codim2=res["codim2"]))
            sigma = _sigma_dims(d, assign, seed)
            res = strata.check_formal_mod2(d, sigma)
            rep.add(check("formal_mod2", res["ok"], res["odd"], sigma_dims=sigma, shapes=res["shapes"]))
        if signed:
            sigma = _sigma_dims(d, assign, seed)
            res = strata.signed_residues(d, sigma, seed=seed)
            rep.add(diagnostic("signed_residues", **res))
    return rep


def _sigma_dims(d: int, assign: str, seed: int) -> dict[int, int]:
    if assign == "zero":
        return {i: 0 for i in range(1, d + 1)}
    rng = random.Random(seed)
    return {i: rng.randint(0, 2) for i in range(1, d + 1)}


# ---------------------------------------------------------------- branes

def branes_suite(seed: int = 0, frames: int = 1000) -> VerificationReport:
    rep = VerificationReport("branes", meta={"seed": seed, "frames": frames})
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in range(frames):
        n = 1 + k % 4
        U = branes.random_unitary(rng, n)
        A = branes.random_real_basis_change(rng, n)
        worst = max(worst, abs(branes.squared_phase(branes.LagrangianFrame(U @ A))
                               - branes.squared_phase(branes.LagrangianFrame(U))))
    rep.add(check("basis_invariance", worst <= 1e-9, {"max_deviation": worst}, max_deviation=worst))
    w = branes.frame_path_winding(branes.rotating_line(256), closed=True)
    rep.add(check("rotating_line_winding", w == 1, {"winding": w}, winding=w))
    turns = [int(t) for t in rng.integers(-2, 3, size=3)]
    w = branes.frame_path_winding(branes.frame_loop(rng, 3, turns, samples=400), closed=True)
    rep.add(check("frame_loop_winding", w == sum(turns), {"winding": w}, winding=w, turns=turns))
    py = random.Random(seed)
    bad = []
    for _ in range(1000):
        a0 = Fraction(py.uniform(-50, 50))
        a1 = Fraction(py.uniform(-50, 50))
        m = py.randint(-5, 5)
        base = branes.chord_degree(a0, a1)
        if branes.chord_degree(a0, a1 + m) != base + m or branes.chord_degree(a0 - m, a1) != base + m:
            bad.append([float(a0), float(a1), m])
    rep.add(check("chord_degree_shift", not bad, {"failures": bad[:5]}, samples=1000))
    for dim in range(1, 4):
        T = branes.PinTorsor(dim)
        res = branes.check_torsor(dim, T.labels, T.act)
        rep.add(check(f"pin_torsor[dim={dim}]", res["ok"], res["problems"], points=res["points"]))
    return rep


def maslov_report(frames: list, closed: bool) -> VerificationReport:
    rep = VerificationReport("branes", meta={"samples": len(frames), "closed": closed})
    phases = [branes.squared_phase(F) for F in frames]
    w = branes.maslov_winding(phases, closed)
    rep.add(check("maslov", True, None, winding=w, start_phase=[phases[0].real, phases[0].imag] if phases else None))
    return rep


# ---------------------------------------------------------------- everything

def c0_suite(seed: int = 0, grid: int = 100_000) -> VerificationReport:
    rep = c0bound.verify_all(grid=grid, seed=seed)
    rep.meta.update(seed=seed, grid=grid)
    return rep


def all_suites(seed: int = 0, d_max: int = 4, grid: int = 100_000) -> VerificationReport:
    parts = [cubical_suite(seed), pontryagin_suite(seed), ainfty_suite(seed, d_max),
             strata_suite(seed), branes_suite(seed), c0_suite(seed, grid)]
    return merge("all", parts, {"seed": seed, "d_max": d_max, "grid": grid})


def merge(name: str, parts: list[VerificationReport], meta: dict[str, Any]) -> VerificationReport:
    rep = VerificationReport(name, meta=dict(meta))
    for p in parts:
        for c in p.checks:
            c.id = f"{p.suite}.{c.id}"
            rep.add(c)
    rep.meta["suites"] = {p.suite: ("pass" if p.ok else "fail") for p in parts}
    return rep
