"""Second Lie algebra cohomology with real coefficients, indices, central extensions."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .lie import DualVector, LieAlgebra, random_rational, validate
from .rational import parse_rational, to_fraction


class NotACocycleError(ValueError):
    pass


class UncertifiedIndexError(RuntimeError):
    def __init__(self, result: "IndexResult"):
        super().__init__(
            f"index search did not stabilise (best rank {result.rank} after {result.samples_used} samples)"
        )
        self.result = result


def _pairs(n: int) -> list[tuple[int, int]]:
    return [(a, b) for a in range(n) for b in range(a + 1, n)]


@dataclass(frozen=True)
class TwoCocycle:
    """Skew form F_{ab} on ``alg``.

    With ``check=True`` (default) the cocycle identity is enforced at
    construction; pass ``check=False`` to hold an arbitrary skew form.
    """

    alg: LieAlgebra
    F: tuple
    check: bool = field(default=True, compare=False)

    def __post_init__(self):
        n = self.alg.dim
        if len(self.F) != n or any(len(r) != n for r in self.F):
            raise ValueError(f"cocycle matrix must be {n}x{n}")
        F = tuple(tuple(to_fraction(x) for x in row) for row in self.F)
        for a in range(n):
            for b in range(a, n):
                if F[a][b] != -F[b][a]:
                    raise ValueError(f"F is not skew at ({a + 1},{b + 1})")
        object.__setattr__(self, "F", F)
        if self.check and not self.is_cocycle:
            raise NotACocycleError(f"cocycle identity fails at {self.violations()[0]}")

    @classmethod
    def from_entries(cls, alg: LieAlgebra, entries, one_based: bool = True, check: bool = True):
        n = alg.dim
        off = 1 if one_based else 0
        F = [[Fraction(0)] * n for _ in range(n)]
        for a, b, v in entries:
            a, b = int(a) - off, int(b) - off
            if not (0 <= a < n and 0 <= b < n) or a >= b:
                raise ValueError(f"bad cocycle entry ({a + off}, {b + off})")
            v = parse_rational(v) if isinstance(v, str) else to_fraction(v)
            F[a][b] = v
            F[b][a] = -v
        return cls(alg, F, check)

    @classmethod
    def from_vector(cls, alg: LieAlgebra, vec: Sequence, check: bool = True):
        n = alg.dim
        F = [[Fraction(0)] * n for _ in range(n)]
        for (a, b), v in zip(_pairs(n), vec):
            F[a][b] = to_fraction(v)
            F[b][a] = -to_fraction(v)
        return cls(alg, F, check)

    @classmethod
    def zero(cls, alg: LieAlgebra):
        return cls.from_vector(alg, [0] * len(_pairs(alg.dim)))

    @classmethod
    def coboundary(cls, alg: LieAlgebra, lam: Sequence):
        """(d lam)_{ab} = C_{ab}^c lam_c."""
        return cls(alg, alg.pairing_matrix([to_fraction(x) for x in lam]))

    def vector(self) -> list[Fraction]:
        return [self.F[a][b] for a, b in _pairs(self.alg.dim)]

    def violations(self) -> list[tuple[int, int, int]]:
        n = self.alg.dim
        C = self.alg.C
        F = self.F
        bad = []
        for a in range(n):
            for b in range(a + 1, n):
                for c in range(b + 1, n):
                    s = sum(
                        (C[a][b][d] * F[d][c] + C[b][c][d] * F[d][a] + C[c][a][d] * F[d][b] for d in range(n)),
                        Fraction(0),
                    )
                    if s:
                        bad.append((a, b, c))
        return bad

    @property
    def is_cocycle(self) -> bool:
        return not self.violations()

    def __add__(self, other: "TwoCocycle") -> "TwoCocycle":
        n = self.alg.dim
        return TwoCocycle(self.alg, [[self.F[a][b] + other.F[a][b] for b in range(n)] for a in range(n)], self.check and other.check)

    def __sub__(self, other: "TwoCocycle") -> "TwoCocycle":
        n = self.alg.dim
        return TwoCocycle(self.alg, [[self.F[a][b] - other.F[a][b] for b in range(n)] for a in range(n)], self.check and other.check)

    def scaled(self, k) -> "TwoCocycle":
        k = to_fraction(k)
        return TwoCocycle(self.alg, [[k * x for x in row] for row in self.F], self.check)

    @property
    def is_zero(self) -> bool:
        return not any(any(row) for row in self.F)

    def to_json(self) -> dict:
        return {"entries": [[a + 1, b + 1, str(self.F[a][b])] for a, b in _pairs(self.alg.dim) if self.F[a][b]]}

    def __str__(self):
        terms = [f"{self.F[a][b]}*e^{a + 1}^e^{b + 1}" for a, b in _pairs(self.alg.dim) if self.F[a][b]]
        return " + ".join(terms) if terms else "0"


def _cocycle_system(alg: LieAlgebra) -> list[list[Fraction]]:
    n = alg.dim
    C = alg.C
    pairs = _pairs(n)
    col = {p: i for i, p in enumerate(pairs)}

    def put(row, d, c, coeff):
        # coefficient * F_{dc}
        if d == c or not coeff:
            return
        if d < c:
            row[col[(d, c)]] += coeff
        else:
            row[col[(c, d)]] -= coeff

    rows = []
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                row = [Fraction(0)] * len(pairs)
                for d in range(n):
                    put(row, d, c, C[a][b][d])
                    put(row, d, a, C[b][c][d])
                    put(row, d, b, C[c][a][d])
                if any(row):
                    rows.append(row)
    return rows


def cocycle_space(alg: LieAlgebra) -> list[TwoCocycle]:
    """Rational basis of Z^2(g)."""
    N = len(_pairs(alg.dim))
    if N == 0:
        return []
    basis = linalg.nullspace(_cocycle_system(alg), ncols=N)
    return [TwoCocycle.from_vector(alg, v) for v in basis]


def _coboundary_matrix(alg: LieAlgebra) -> list[list[Fraction]]:
    """Rows: d(e^c) for each dual basis vector e^c."""
    n = alg.dim
    return [[alg.C[a][b][c] for a, b in _pairs(n)] for c in range(n)]


def coboundary_space(alg: LieAlgebra) -> list[TwoCocycle]:
    """Basis of B^2(g) = image of lam -> C_{ab}^c lam_c (RREF rows)."""
    if not _pairs(alg.dim):
        return []
    rows = linalg.row_space_basis(_coboundary_matrix(alg))
    return [TwoCocycle.from_vector(alg, r) for r in rows]


@dataclass
class CohomologyReport:
    z_dim: int
    b_dim: int
    h_dim: int
    z_basis: list[TwoCocycle]
    b_basis: list[TwoCocycle]
    h_representatives: list[TwoCocycle]

    def to_json(self) -> dict:
        return {
            "z_dim": self.z_dim,
            "b_dim": self.b_dim,
            "h_dim": self.h_dim,
            "z_basis": [c.to_json()["entries"] for c in self.z_basis],
            "b_basis": [c.to_json()["entries"] for c in self.b_basis],
            "h_representatives": [c.to_json()["entries"] for c in self.h_representatives],
        }


def cohomology(alg: LieAlgebra) -> CohomologyReport:
    z = cocycle_space(alg)
    b = coboundary_space(alg)
    reps = linalg.complement_basis([c.vector() for c in b], [c.vector() for c in z])
    h = [TwoCocycle.from_vector(alg, v) for v in reps]
    assert len(z) - len(b) == len(h)
    return CohomologyReport(len(z), len(b), len(h), z, b, h)


def trivialize(alg: LieAlgebra, F: TwoCocycle) -> DualVector | None:
    """lam with F = d lam, or None when [F] is nonzero in H^2."""
    if F.is_zero:
        return DualVector((0,) * alg.dim)
    if not _pairs(alg.dim):
        return DualVector((0,) * alg.dim)
    cols = _coboundary_matrix(alg)
    # unknowns lam_c: system sum_c C_{ab}^c lam_c = F_ab
    A = [list(r) for r in zip(*cols)]
    sol = linalg.solve(A, F.vector())
    return None if sol is None else DualVector(tuple(sol))


@dataclass
class IndexResult:
    index: int
    witness: DualVector
    certified_upper: bool
    q_dim: int
    rank: int
    samples_used: int = 0

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "q_dim": self.q_dim,
            "rank": self.rank,
            "certified_upper": self.certified_upper,
            "witness": [str(x) for x in self.witness],
            "samples_used": self.samples_used,
        }


def _shifted(alg: LieAlgebra, F: TwoCocycle, lam: Sequence[Fraction]) -> list[list[Fraction]]:
    M = alg.pairing_matrix(lam)
    n = alg.dim
    return [[F.F[a][b] + M[a][b] for b in range(n)] for a in range(n)]


def cohomological_index(
    alg: LieAlgebra,
    F: TwoCocycle,
    seed: int = 0,
    samples: int = 200,
    bound: int = 20,
    max_den: int = 8,
) -> IndexResult:
    """Index of the class [F]: dim g minus the generic rank of F + d lam.

    The rank is maximised over lam at 0, the trivialising functional (if any),
    ``samples`` seeded random rationals and, for dim <= 5, the lattice
    {-2..2}^dim. The witness rank is exact, so the returned index is a
    certified upper bound; ``certified_upper`` additionally requires the
    maximum to have stopped improving during the second half of the samples.
    """
    n = alg.dim
    cap = n - n % 2
    zero = [Fraction(0)] * n
    best_rank = linalg.rank(_shifted(alg, F, zero))
    best = zero
    candidates = []
    triv = trivialize(alg, F)
    if triv is not None:
        candidates.append(list(triv.components))
    for lam in candidates:
        rk = linalg.rank(_shifted(alg, F, lam))
        if rk > best_rank:
            best_rank, best = rk, lam

    rng = random.Random(seed)
    last_improved = -1
    used = 0
    for i in range(samples):
        if best_rank == cap:
            break
        lam = [random_rational(rng, bound, max_den) for _ in range(n)]
        used += 1
        rk = linalg.rank(_shifted(alg, F, lam))
        if rk > best_rank:
            best_rank, best, last_improved = rk, lam, i
    if best_rank < cap and n <= 5:
        from itertools import product

        for tup in product(range(-2, 3), repeat=n):
            lam = [Fraction(t) for t in tup]
            rk = linalg.rank(_shifted(alg, F, lam))
            if rk > best_rank:
                best_rank, best = rk, lam
                last_improved = samples
                if rk == cap:
                    break

    # exact re-certification of the witness
    witness_rank = linalg.rank(_shifted(alg, F, best))
    assert witness_rank == best_rank
    stabilized = best_rank == cap or last_improved < samples // 2
    index = n - best_rank
    if (n - index) % 2:
        raise ArithmeticError("rank of a skew form must be even")
    return IndexResult(index, DualVector(tuple(best)), stabilized, (n - index) // 2, best_rank, used)


@dataclass
class Verdict:
    q_dim: int
    integrable: bool
    index: IndexResult
    note: str = ""

    def line(self) -> str:
        return f"index={self.index.index} qdim={self.q_dim} integrable={str(self.integrable).lower()}"

    def to_json(self) -> dict:
        return {"q_dim": self.q_dim, "integrable": self.integrable, "index": self.index.to_json(), "note": self.note}


def integrability_verdict(alg: LieAlgebra, F: TwoCocycle, metric_arbitrary: bool = True, seed: int = 0) -> Verdict:
    """Reduced equation has q_dim = (dim - index)/2 variables; an ODE when q_dim <= 1."""
    res = cohomological_index(alg, F, seed=seed)
    if not res.certified_upper:
        raise UncertifiedIndexError(res)
    note = ""
    z = cocycle_space(alg)
    b = coboundary_space(alg)
    if len(z) == len(b):
        note = "H^2 = 0: every cocycle is trivial, the cohomological index equals the classical index"
    if not metric_arbitrary:
        note = (note + "; " if note else "") + "verdict stated for an arbitrary right-invariant metric"
    return Verdict(res.q_dim, res.q_dim <= 1, res, note)


@dataclass(frozen=True)
class CentralExtension:
    base: LieAlgebra
    cocycle: TwoCocycle
    extended: LieAlgebra


def extension_algebra(alg: LieAlgebra, F: TwoCocycle) -> LieAlgebra:
    """Brackets [e_a, e_b] = C_{ab}^c e_c + F_{ab} e_0 with e_0 at index 0 (no checks)."""
    n = alg.dim
    m = n + 1
    C = [[[Fraction(0)] * m for _ in range(m)] for _ in range(m)]
    for a in range(n):
        for b in range(n):
            C[a + 1][b + 1][0] = F.F[a][b]
            for c in range(n):
                C[a + 1][b + 1][c + 1] = alg.C[a][b][c]
    return LieAlgebra(m, C, ("e0",) + tuple(alg.labels))


def extend(alg: LieAlgebra, F: TwoCocycle) -> CentralExtension:
    if not F.is_cocycle:
        raise NotACocycleError(f"cannot extend by a non-cocycle; identity fails at {F.violations()[0]}")
    ext = extension_algebra(alg, F)
    report = validate(ext)
    if not report.valid:
        raise NotACocycleError(f"extension fails Jacobi at {report.jacobi[:1]}")
    return CentralExtension(alg, F, ext)


def casimir_check(ext: CentralExtension, K) -> bool:
    """True iff the polynomial K(f_0..f_n) is invariant under the coadjoint action.

    K is a :class:`kgfint.symb.TrigPolyExpr` on a chart of dimension n+1
    without a periodic coordinate.
    """
    alg = ext.extended
    m = alg.dim
    if K.chart.dim != m or K.chart.periodic is not None:
        raise ValueError(f"K must be a polynomial in {m} variables")
    grads = [K.diff(b) for b in range(m)]
    coords = [K.chart.variable(c) for c in range(m)]
    for a in range(m):
        total = K.chart.zero()
        for b in range(m):
            if grads[b].is_zero:
                continue
            lin = K.chart.zero()
            for c in range(m):
                if alg.C[a][b][c]:
                    lin = lin + coords[c] * alg.C[a][b][c]
            total = total + lin * grads[b]
        if not total.is_zero:
            return False
    return True
