"""Squared phases of Lagrangian frames, gradings, Maslov winding and Pin torsors.

A frame is an n x n complex matrix whose columns v_1..v_n span a Lagrangian
subspace of C^n for the standard symplectic form ``omega(u, v) = Im <u, v>``.
Its squared phase is ``eta^2(v_1 ^ ... ^ v_n) / |.|`` with
``eta^2 = c (dz_1 ^ ... ^ dz_n)^2``, which equals ``c det(B)^2 / |c det(B)^2|``.
A real change of basis multiplies ``det(B)`` by a real number, so the squared
phase does not depend on the basis.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from typing import Iterable, Sequence

import numpy as np

LAGRANGIAN_TOL = 1e-10


class DegenerateFrame(ValueError):
    pass


class SamplingDensityError(ValueError):
    pass


class UnknownPoint(KeyError):
    pass


@dataclass(frozen=True)
class LagrangianFrame:
    basis: np.ndarray  # columns are the vectors
    eta2: complex = 1.0  # constant factor of the quadratic volume form

    def __post_init__(self):
        B = np.asarray(self.basis, dtype=complex)
        if B.ndim != 2 or B.shape[0] != B.shape[1]:
            raise DegenerateFrame("basis must be a square matrix")
        object.__setattr__(self, "basis", B)
        if self.eta2 == 0:
            raise DegenerateFrame("volume form must not vanish")
        scale = max(1.0, float(np.max(np.abs(B))) ** 2)
        if abs(np.linalg.det(B)) <= 1e-12 * scale ** (B.shape[0] / 2):
            raise DegenerateFrame("basis vectors are linearly dependent")
        omega = np.imag(B.conj().T @ B)
        if np.max(np.abs(omega)) > LAGRANGIAN_TOL * scale:
            raise DegenerateFrame(f"span is not Lagrangian: max |omega(v_i, v_j)| = {np.max(np.abs(omega)):.3e}")

    @property
    def n(self) -> int:
        return self.basis.shape[0]

    @classmethod
    def from_reals(cls, row: Sequence[float], n: int | None = None) -> "LagrangianFrame":
        """2n^2 reals: the real parts of the basis matrix row by row, then the
        imaginary parts in the same order."""
        row = [float(x) for x in row]
        if n is None:
            n = math.isqrt(len(row) // 2)
        if len(row) != 2 * n * n:
            raise ValueError(f"expected {2 * n * n} reals, got {len(row)}")
        re = np.array(row[:n * n]).reshape(n, n)
        im = np.array(row[n * n:]).reshape(n, n)
        return cls(re + 1j * im)

    def to_reals(self) -> list[float]:
        return [float(x) for x in np.real(self.basis).ravel()] + [float(x) for x in np.imag(self.basis).ravel()]


def squared_phase(F: LagrangianFrame) -> complex:
    z = F.eta2 * np.linalg.det(F.basis) ** 2
    return complex(z / abs(z))


def lift_phases(samples: Iterable[complex], start: float | None = None) -> list[float]:
    """Real lifts alpha with exp(2 pi i alpha) = sample by nearest-branch continuation."""
    samples = [complex(s) for s in samples]
    if not samples:
        return []
    a = math.atan2(samples[0].imag, samples[0].real) / (2 * math.pi)
    if start is not None:
        a += round(start - a)
    out = [a]
    for i, (p, q) in enumerate(zip(samples, samples[1:])):
        step = math.atan2((q / p).imag, (q / p).real) / (2 * math.pi)
        if abs(step) >= 0.5 - 1e-12:
            raise SamplingDensityError(f"phase jump of {abs(step):.3f} turns between samples {i} and {i + 1}")
        out.append(out[-1] + step)
    return out


def maslov_winding(samples: Sequence[complex], closed: bool = True) -> int | float:
    """lift(end) - lift(start); an exact integer for closed paths."""
    alpha = lift_phases(samples)
    if not alpha:
        return 0
    diff = alpha[-1] - alpha[0]
    if closed:
        if abs(complex(samples[0]) - complex(samples[-1])) > 1e-8:
            raise ValueError("closed path must end where it starts")
        return int(round(diff))
    return diff


def frame_path_winding(frames: Sequence[LagrangianFrame], closed: bool = True) -> int | float:
    return maslov_winding([squared_phase(F) for F in frames], closed)


def chord_degree(alpha0: float | Fraction, alpha1: float | Fraction) -> int:
    """floor(alpha1 - alpha0) + 1, evaluated exactly on the binary values given."""
    return math.floor(Fraction(alpha1) - Fraction(alpha0)) + 1


# ---------------------------------------------------------------- frame paths

def rotating_line(samples: int = 64) -> list[LagrangianFrame]:
    """The line e^{i pi t} R in C for t in [0, 1]; it returns to R."""
    return [LagrangianFrame(np.array([[np.exp(1j * math.pi * t)]])) for t in np.linspace(0.0, 1.0, samples)]


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    Z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_real_basis_change(rng: np.random.Generator, n: int, lo: float = 0.1, hi: float = 10.0) -> np.ndarray:
    """Random real matrix with |det| in [lo, hi]."""
    while True:
        A = rng.normal(size=(n, n))
        d = abs(np.linalg.det(A))
        if d < 1e-3:
            continue
        target = math.exp(rng.uniform(math.log(lo), math.log(hi)))
        A = A * (target / d) ** (1.0 / n)
        return A


def random_frame(rng: np.random.Generator, n: int) -> LagrangianFrame:
    """U R^n for a random unitary U, with a random real basis."""
    return LagrangianFrame(random_unitary(rng, n) @ random_real_basis_change(rng, n))


def frame_loop(rng: np.random.Generator, n: int, turns: Sequence[int], samples: int = 200) -> list[LagrangianFrame]:
    """Loop t -> U diag(e^{i pi k_j t}) R^n with a fixed unitary U and bases that
    change along the loop; its Maslov index is sum(k_j)."""
    U = random_unitary(rng, n)
    A0 = random_real_basis_change(rng, n)
    frames = []
    for t in np.linspace(0.0, 1.0, samples):
        D = np.diag([np.exp(1j * math.pi * k * t) for k in turns])
        R = np.eye(n) * (1.0 + 0.5 * math.sin(2 * math.pi * t))
        if n > 1:
            c, s = math.cos(2 * math.pi * t), math.sin(2 * math.pi * t)
            R[:2, :2] = R[:2, :2] @ np.array([[c, -s], [s, c]])
        frames.append(LagrangianFrame(U @ D @ A0 @ R))
    return frames


def read_frames(path: str, n: int | None = None) -> list[LagrangianFrame]:
    """CSV rows or a JSON list of rows (or {"frames": rows}) of 2n^2 reals."""
    if path.endswith(".json"):
        with open(path) as fh:
            data = json.load(fh)
        rows = data["frames"] if isinstance(data, dict) else data
        n = data.get("n", n) if isinstance(data, dict) else n
    else:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    return [LagrangianFrame.from_reals(r, n) for r in rows]


def write_frames(path: str, frames: Sequence[LagrangianFrame]) -> None:
    if path.endswith(".json"):
        with open(path, "w") as fh:
            json.dump({"n": frames[0].n if frames else 0, "frames": [F.to_reals() for F in frames]}, fh)
        return
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        for F in frames:
            w.writerow([repr(x) for x in F.to_reals()])


# ---------------------------------------------------------------- Pin torsor

@dataclass
class PinTorsor:
    """Pin structures up to isomorphism, modelled as labels with a free and
    transitive action of V = F_2^dim.  Label i corresponds to the bit vector
    of i, and beta acts by xor."""
    dim: int
    labels: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.labels:
            self.labels = [f"P{i}" for i in range(2 ** self.dim)]
        if len(self.labels) != 2 ** self.dim or len(set(self.labels)) != len(self.labels):
            raise ValueError("need 2^dim distinct labels")
        self.index = {p: i for i, p in enumerate(self.labels)}

    def vectors(self) -> list[tuple[int, ...]]:
        return list(iproduct((0, 1), repeat=self.dim))

    def _bits(self, beta: Sequence[int]) -> int:
        if len(beta) != self.dim or any(b not in (0, 1) for b in beta):
            raise ValueError(f"beta must be a 0/1 vector of length {self.dim}")
        return sum(b << (self.dim - 1 - k) for k, b in enumerate(beta))

    def act(self, beta: Sequence[int], P: str) -> str:
        if P not in self.index:
            raise UnknownPoint(P)
        return self.labels[self.index[P] ^ self._bits(beta)]


def torsor_act(T: PinTorsor, beta: Sequence[int], P: str) -> str:
    return T.act(beta, P)


def check_torsor(dim: int, points: Sequence[str], act) -> dict:
    """Exhaustive group-action, freeness and transitivity check of ``act``."""
    V = list(iproduct((0, 1), repeat=dim))
    zero = (0,) * dim
    add = lambda a, b: tuple((x + y) % 2 for x, y in zip(a, b))
    problems = []
    for P in points:
        if act(zero, P) != P:
            problems.append(("identity", P))
        for a in V:
            for b in V:
                if act(a, act(b, P)) != act(add(a, b), P):
                    problems.append(("compatibility", a, b, P))
        orbit = {act(a, P) for a in V}
        if len(orbit) != len(V):
            problems.append(("free", P))
        if orbit != set(points):
            problems.append(("transitive", P))
    return {"ok": not problems, "problems": problems[:10], "points": len(points)}
