"""Finite-dimensional real Lie algebras given by exact structure constants."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from . import linalg
from .rational import parse_rational, to_fraction


class StructureError(ValueError):
    """Malformed algebra data (wrong shape, bad index, unparsable entry)."""


@dataclass(frozen=True)
class DualVector:
    components: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(to_fraction(x) for x in self.components))

    def __len__(self):
        return len(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    @property
    def is_zero(self) -> bool:
        return not any(self.components)


@dataclass(frozen=True)
class LieAlgebra:
    """Structure constants ``C[a][b][c]`` = C_{ab}^c (0-based indices)."""

    dim: int
    C: tuple
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        n = self.dim
        if not isinstance(n, int) or n < 1:
            raise StructureError(f"dimension must be a positive integer, got {n!r}")
        rows = self.C
        if len(rows) != n:
            raise StructureError(f"C has {len(rows)} slices, expected {n} (offending index a={len(rows)})")
        frozen = []
        for a, sl in enumerate(rows):
            if len(sl) != n:
                raise StructureError(f"C[{a}] has length {len(sl)}, expected {n}")
            fa = []
            for b, row in enumerate(sl):
                if len(row) != n:
                    raise StructureError(f"C[{a}][{b}] has length {len(row)}, expected {n}")
                fa.append(tuple(to_fraction(x) for x in row))
            frozen.append(tuple(fa))
        object.__setattr__(self, "C", tuple(frozen))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"e{i + 1}" for i in range(n)))
        elif len(self.labels) != n:
            raise StructureError(f"{len(self.labels)} labels for dimension {n}")

    @classmethod
    def from_brackets(cls, dim: int, brackets: Iterable[Sequence], labels: Sequence[str] = (), one_based: bool = True):
        """Build from entries ``(a, b, c, value)`` meaning C_{ab}^c = value, a < b.

        The antisymmetric partner C_{ba}^c = -value is filled in.
        """
        C = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
        off = 1 if one_based else 0
        for entry in brackets:
            if len(entry) != 4:
                raise StructureError(f"bracket entry {entry!r} must have 4 fields")
            a, b, c = (int(entry[k]) - off for k in range(3))
            for idx in (a, b, c):
                if not 0 <= idx < dim:
                    raise StructureError(f"index {idx + off} out of range in bracket {entry!r}")
            if a >= b:
                raise StructureError(f"bracket {entry!r} must have a < b")
            val = entry[3]
            val = parse_rational(val) if isinstance(val, str) else to_fraction(val)
            C[a][b][c] = val
            C[b][a][c] = -val
        return cls(dim, C, tuple(labels))

    @classmethod
    def abelian(cls, n: int) -> "LieAlgebra":
        return cls(n, [[[0] * n for _ in range(n)] for _ in range(n)])

    def bracket_entries(self) -> list[tuple[int, int, int, Fraction]]:
        """Nonzero C_{ab}^c with a < b, 0-based."""
        n = self.dim
        return [(a, b, c, self.C[a][b][c]) for a in range(n) for b in range(a + 1, n) for c in range(n) if self.C[a][b][c]]

    def bracket(self, x: Sequence, y: Sequence) -> list[Fraction]:
        n = self.dim
        out = [Fraction(0)] * n
        for a in range(n):
            if not x[a]:
                continue
            for b in range(n):
                if not y[b]:
                    continue
                xy = x[a] * y[b]
                for c in range(n):
                    if self.C[a][b][c]:
                        out[c] += xy * self.C[a][b][c]
        return out

    def pairing_matrix(self, f: Sequence) -> list[list[Fraction]]:
        """M(f)_{ab} = C_{ab}^c f_c."""
        n = self.dim
        C = self.C
        return [[sum((C[a][b][c] * f[c] for c in range(n) if C[a][b][c]), Fraction(0)) for b in range(n)] for a in range(n)]

    def change_basis(self, P: Sequence[Sequence]) -> "LieAlgebra":
        """Structure constants in the basis e'_i = sum_j P[i][j] e_j."""
        n = self.dim
        P = linalg.as_matrix(P)
        Pinv = linalg.inverse(P)
        new = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                v = self.bracket(P[i], P[j])
                # express v = sum_k w_k e'_k  =>  w = v @ Pinv
                w = [sum((v[m] * Pinv[m][k] for m in range(n)), Fraction(0)) for k in range(n)]
                for k in range(n):
                    new[i][j][k] = w[k]
                    new[j][i][k] = -w[k]
        return LieAlgebra(n, new)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "labels": list(self.labels),
            "brackets": [[a + 1, b + 1, c + 1, str(v)] for a, b, c, v in self.bracket_entries()],
        }


@dataclass
class ValidationReport:
    valid: bool
    antisymmetry: list[tuple[int, int, int]] = field(default_factory=list)
    jacobi: list[tuple[int, int, int, int]] = field(default_factory=list)

    def to_json(self) -> dict:
        # 1-based for humans
        return {
            "valid": self.valid,
            "antisymmetry_violations": [[a + 1, b + 1, c + 1] for a, b, c in self.antisymmetry],
            "jacobi_violations": [[a + 1, b + 1, c + 1, e + 1] for a, b, c, e in self.jacobi],
        }


def validate(alg: LieAlgebra) -> ValidationReport:
    """Check antisymmetry and the Jacobi identity exactly; list every violation."""
    n = alg.dim
    C = alg.C
    anti = [(a, b, c) for a in range(n) for b in range(a, n) for c in range(n) if C[a][b][c] != -C[b][a][c]]
    jac = []
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for e in range(n):
                    s = Fraction(0)
                    for d in range(n):
                        s += C[a][b][d] * C[d][c][e] + C[b][c][d] * C[d][a][e] + C[c][a][d] * C[d][b][e]
                    if s:
                        jac.append((a, b, c, e))
    return ValidationReport(not anti and not jac, anti, jac)


def trace_vector(alg: LieAlgebra) -> tuple[DualVector, bool]:
    """C_a = sum_b C_{ab}^b and the unimodularity flag."""
    n = alg.dim
    tv = DualVector(tuple(sum((alg.C[a][b][b] for b in range(n)), Fraction(0)) for a in range(n)))
    return tv, tv.is_zero


def random_rational(rng: random.Random, bound: int, max_den: int = 1) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(-bound * den, bound * den), den)


def classical_index(alg: LieAlgebra, seed: int = 0, samples: int = 25, bound: int = 100) -> int:
    """ind g = dim g - generic rank of C_{ab}^c f_c, sampled at seeded rational f."""
    rng = random.Random(seed)
    n = alg.dim
    cap = n - n % 2
    best = 0
    for _ in range(samples):
        f = [random_rational(rng, bound) for _ in range(n)]
        best = max(best, linalg.rank(alg.pairing_matrix(f)))
        if best == cap:
            break
    return n - best


def load_algebra(source) -> LieAlgebra:
    """Load an algebra JSON document (path, JSON text, or parsed dict)."""
    if isinstance(source, (str, Path)) and not str(source).lstrip().startswith("{"):
        data = json.loads(Path(source).read_text(encoding="utf-8"))
    elif isinstance(source, str):
        data = json.loads(source)
    else:
        data = source
    if not isinstance(data, dict) or "dim" not in data:
        raise StructureError("algebra document must be an object with a 'dim' field")
    return LieAlgebra.from_brackets(int(data["dim"]), data.get("brackets", []), data.get("labels", ()))


def e2r_algebra() -> LieAlgebra:
    """e(2) + R: [e1,e3] = e2, [e2,e3] = -e1."""
    return LieAlgebra.from_brackets(4, [(1, 3, 2, 1), (2, 3, 1, -1)])


def so3_algebra() -> LieAlgebra:
    return LieAlgebra.from_brackets(3, [(1, 2, 3, 1), (2, 3, 1, 1), (1, 3, 2, -1)])


def sl2_algebra() -> LieAlgebra:
    """Basis (h, e, f): [h,e] = 2e, [h,f] = -2f, [e,f] = h."""
    return LieAlgebra.from_brackets(3, [(1, 2, 2, 2), (1, 3, 3, -2), (2, 3, 1, 1)], labels=("h", "e", "f"))


def heisenberg_algebra() -> LieAlgebra:
    return LieAlgebra.from_brackets(3, [(1, 2, 3, 1)], labels=("x", "y", "z"))
