"""Canonical polynomial x harmonic expressions over Gaussian-rational coefficients.

A term is ``coeff * x_0^n0 * ... * x_{d-1}^n{d-1} * h(x_p)`` where ``h`` is 1,
``cos(k x_p)`` or ``sin(k x_p)`` for the (single) periodic coordinate ``x_p``.
Harmonics are encoded as integers: 0 is the constant harmonic, ``k > 0`` is
``cos(k x_p)`` and ``-k`` is ``sin(k x_p)``. Products of harmonics are reduced
to the Fourier basis, so equal functions have identical term dictionaries.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ..rational import GaussRat

_HALF = Fraction(1, 2)


class ChartMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Chart:
    """Coordinate chart: dimension, optional periodic coordinate, display names."""

    dim: int
    periodic: int | None = None
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.names:
            object.__setattr__(self, "names", tuple(f"x{i + 1}" for i in range(self.dim)))
        if len(self.names) != self.dim:
            raise ValueError("one name per coordinate required")
        if self.periodic is not None and not 0 <= self.periodic < self.dim:
            raise ValueError(f"periodic coordinate {self.periodic} outside chart")

    def index(self, name: str) -> int:
        return self.names.index(name)

    def zero(self) -> "TrigPolyExpr":
        return TrigPolyExpr(self, {})

    def const(self, c) -> "TrigPolyExpr":
        c = GaussRat.coerce(c)
        return TrigPolyExpr(self, {(self._zero_mono, 0): c} if c else {})

    def one(self) -> "TrigPolyExpr":
        return self.const(1)

    def variable(self, i: int) -> "TrigPolyExpr":
        mono = [0] * self.dim
        mono[i] = 1
        return TrigPolyExpr(self, {(tuple(mono), 0): GaussRat(1)})

    def cos(self, k: int = 1) -> "TrigPolyExpr":
        return self._harmonic(k)

    def sin(self, k: int = 1) -> "TrigPolyExpr":
        return self._harmonic(-k)

    def _harmonic(self, h: int) -> "TrigPolyExpr":
        if self.periodic is None:
            raise ChartMismatch("chart has no periodic coordinate")
        if h == 0:
            return self.one()
        return TrigPolyExpr(self, {(self._zero_mono, h): GaussRat(1)})

    @property
    def _zero_mono(self) -> tuple[int, ...]:
        return (0,) * self.dim

    def coords(self) -> list["TrigPolyExpr"]:
        return [self.variable(i) for i in range(self.dim)]


def _harm_product(h1: int, h2: int) -> list[tuple[int, Fraction]]:
    """Product of two harmonics as a list of (harmonic, factor)."""
    if h1 == 0:
        return [(h2, Fraction(1))]
    if h2 == 0:
        return [(h1, Fraction(1))]
    a, b = abs(h1), abs(h2)
    out: list[tuple[int, Fraction]] = []

    def cos_(k, f):
        out.append((abs(k), f))  # cos(0) = 1 -> harmonic 0

    def sin_(k, f):
        if k > 0:
            out.append((-k, f))
        elif k < 0:
            out.append((k, -f))

    if h1 > 0 and h2 > 0:
        cos_(a - b, _HALF)
        cos_(a + b, _HALF)
    elif h1 < 0 and h2 < 0:
        cos_(a - b, _HALF)
        cos_(a + b, -_HALF)
    else:
        s, c = (a, b) if h1 < 0 else (b, a)
        # sin s cos c = (sin(s+c) + sin(s-c)) / 2
        sin_(s + c, _HALF)
        sin_(s - c, _HALF)
    return out


class TrigPolyExpr:
    __slots__ = ("chart", "terms", "_hash")

    def __init__(self, chart: Chart, terms: dict):
        self.chart = chart
        self.terms = {k: v for k, v in terms.items() if v}
        self._hash = None

    # -- construction helpers ------------------------------------------------
    def _new(self, terms: dict) -> "TrigPolyExpr":
        return TrigPolyExpr(self.chart, terms)

    def _coerce(self, other) -> "TrigPolyExpr":
        if isinstance(other, TrigPolyExpr):
            if other.chart != self.chart:
                raise ChartMismatch(f"{other.chart} vs {self.chart}")
            return other
        return self.chart.const(other)

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        terms = dict(self.terms)
        for k, v in o.terms.items():
            terms[k] = terms[k] + v if k in terms else v
        return self._new(terms)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, TrigPolyExpr):
            try:
                c = GaussRat.coerce(other)
            except TypeError:
                return NotImplemented
            if not c:
                return self.chart.zero()
            return self._new({k: v * c for k, v in self.terms.items()})
        o = self._coerce(other)
        terms: dict = {}
        for (m1, h1), c1 in self.terms.items():
            for (m2, h2), c2 in o.terms.items():
                mono = tuple(x + y for x, y in zip(m1, m2))
                c = c1 * c2
                for h, f in _harm_product(h1, h2):
                    key = (mono, h)
                    val = c * f
                    terms[key] = terms[key] + val if key in terms else val
        return self._new(terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = GaussRat.coerce(other)
        return self * (GaussRat(1) / c)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = self.chart.one()
        for _ in range(n):
            out = out * self
        return out

    # -- calculus -------------------------------------------------------------
    def diff(self, j: int) -> "TrigPolyExpr":
        terms: dict = {}

        def add(key, val):
            terms[key] = terms[key] + val if key in terms else val

        for (mono, h), c in self.terms.items():
            n = mono[j]
            if n:
                m2 = list(mono)
                m2[j] -= 1
                add((tuple(m2), h), c * n)
            if j == self.chart.periodic and h:
                k = abs(h)
                if h > 0:  # d cos(kx) = -k sin(kx)
                    add((mono, -k), c * (-k))
                else:  # d sin(kx) = k cos(kx)
                    add((mono, k), c * k)
        return self._new(terms)

    def integrate(self, j: int) -> "TrigPolyExpr":
        """An antiderivative in x_j (constant of integration zero)."""
        terms: dict = {}

        def add(key, val):
            terms[key] = terms[key] + val if key in terms else val

        for (mono, h), c in self.terms.items():
            if j != self.chart.periodic or h == 0:
                m2 = list(mono)
                m2[j] += 1
                add((tuple(m2), h), c / (mono[j] + 1))
                continue
            for power, harm, f in _periodic_antiderivative(mono[j], h):
                m2 = list(mono)
                m2[j] = power
                add((tuple(m2), harm), c * f)
        return self._new(terms)

    def subs(self, j: int, value) -> "TrigPolyExpr":
        """Substitute a Gaussian-rational value for x_j (periodic coordinate: only 0)."""
        value = GaussRat.coerce(value)
        periodic = j == self.chart.periodic
        if periodic and value:
            raise ValueError("only x_p = 0 can be substituted for the periodic coordinate")
        terms: dict = {}
        for (mono, h), c in self.terms.items():
            n = mono[j]
            if n and not value:
                continue
            factor = value**n if n else GaussRat(1)
            if periodic and h:
                if h < 0:
                    continue
                h = 0
            m2 = list(mono)
            m2[j] = 0
            key = (tuple(m2), h)
            val = c * factor
            terms[key] = terms[key] + val if key in terms else val
        return self._new(terms)

    def embed(self, chart: Chart) -> "TrigPolyExpr":
        """Same function on a chart with extra trailing coordinates."""
        if chart.dim < self.chart.dim or chart.periodic != self.chart.periodic:
            raise ChartMismatch("target chart must extend this chart")
        pad = (0,) * (chart.dim - self.chart.dim)
        return TrigPolyExpr(chart, {(mono + pad, h): c for (mono, h), c in self.terms.items()})

    def conjugate(self) -> "TrigPolyExpr":
        """Complex conjugate assuming all coordinates are real."""
        return self._new({k: v.conjugate() for k, v in self.terms.items()})

    # -- inspection -----------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        zm = self.chart._zero_mono
        return all(k == (zm, 0) for k in self.terms)

    def constant_value(self) -> GaussRat:
        if not self.is_constant:
            raise ValueError(f"expression {self} is not constant")
        return self.terms.get((self.chart._zero_mono, 0), GaussRat(0))

    def depends_on(self, j: int) -> bool:
        for mono, h in self.terms:
            if mono[j] or (j == self.chart.periodic and h):
                return True
        return False

    def degree(self, j: int) -> int:
        return max((mono[j] for mono, _ in self.terms), default=0)

    def univariate(self, j: int) -> dict[int, GaussRat]:
        """Coefficients by power of x_j; requires no other dependence."""
        out: dict[int, GaussRat] = {}
        for (mono, h), c in self.terms.items():
            if h or any(n for i, n in enumerate(mono) if i != j):
                raise ValueError(f"{self} depends on more than x{j + 1}")
            out[mono[j]] = c
        return out

    def eval_at(self, point: Sequence) -> complex:
        """Floating-point evaluation (coordinates may be complex)."""
        total = 0j
        p = self.chart.periodic
        for (mono, h), c in self.terms.items():
            val = complex(c)
            for x, n in zip(point, mono):
                if n:
                    val *= x**n
            if h:
                xp = point[p]
                val *= cmath.cos(h * xp) if h > 0 else cmath.sin(-h * xp)
            total += val
        return total

    # -- equality / printing --------------------------------------------------
    def _sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0][0]), tuple(-x for x in kv[0][0]), abs(kv[0][1]), -kv[0][1]))

    def __eq__(self, other):
        if isinstance(other, TrigPolyExpr):
            return self.chart == other.chart and self.terms == other.terms
        try:
            return self == self.chart.const(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.chart, frozenset(self.terms.items())))
        return self._hash

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        names = self.chart.names
        for (mono, h), c in self._sorted_items():
            factors = []
            for name, n in zip(names, mono):
                if n == 1:
                    factors.append(name)
                elif n:
                    factors.append(f"{name}^{n}")
            if h:
                xp = names[self.chart.periodic]
                k = abs(h)
                arg = xp if k == 1 else f"{k}*{xp}"
                factors.append(f"{'cos' if h > 0 else 'sin'}({arg})")
            if c == 1 and factors:
                s = "*".join(factors)
            elif c == -1 and factors:
                s = "-" + "*".join(factors)
            else:
                s = "*".join([str(c)] + factors)
            parts.append(s)
        out = parts[0]
        for s in parts[1:]:
            out += " - " + s[1:] if s.startswith("-") else " + " + s
        return out

    def __repr__(self):
        return f"TrigPolyExpr({self})"


def _periodic_antiderivative(n: int, h: int) -> list[tuple[int, int, Fraction]]:
    """Antiderivative of x^n * harmonic(h) as a list of (power, harmonic, coeff)."""
    k = abs(h)
    out: list[tuple[int, int, Fraction]] = []
    coeff = Fraction(1)
    power, harm = n, h
    # integration by parts until the polynomial factor is exhausted
    while True:
        if harm > 0:  # int x^p cos = x^p sin/k - p/k int x^(p-1) sin
            out.append((power, -k, coeff / k))
            nxt = -k
            coeff = coeff * (-Fraction(power, k))
        else:  # int x^p sin = -x^p cos/k + p/k int x^(p-1) cos
            out.append((power, k, -coeff / k))
            nxt = k
            coeff = coeff * Fraction(power, k)
        if power == 0:
            break
        power -= 1
        harm = nxt
    return out


def expr_sum(items: Iterable[TrigPolyExpr], chart: Chart) -> TrigPolyExpr:
    out = chart.zero()
    for it in items:
        out = out + it
    return out
