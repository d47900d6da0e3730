"""Root systems of types A-G in Bourbaki coordinates.

Simple roots follow the Bourbaki plates; fundamental weights are obtained
by inverting the Cartan matrix, so they live in the real span of the roots
(for A_r this is the sum-zero hyperplane of an (r+1)-dimensional space).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Set, Tuple

from .exactgeom import QVec, add, dot, qvec, scale, solve, sub, zero

SERIES = "ABCDEFG"

_MIN_RANK = {"A": 1, "B": 3, "C": 2, "D": 4}


class RootSystemError(ValueError):
    """Invalid root-system type or rank."""


class OrbitTooLarge(RuntimeError):
    """A Weyl orbit exceeded the requested cap."""


@dataclass(frozen=True, order=True)
class RootSystemType:
    series: str
    rank: int

    def __post_init__(self):
        s, r = self.series, self.rank
        if s not in SERIES:
            raise RootSystemError(f"unknown series {s!r}")
        if not isinstance(r, int) or r < 1:
            raise RootSystemError(f"rank must be a positive integer, got {r!r}")
        if s in _MIN_RANK and r < _MIN_RANK[s]:
            raise RootSystemError(f"{s}_r requires r >= {_MIN_RANK[s]}, got {r}")
        if s == "E" and r not in (6, 7, 8):
            raise RootSystemError("E_r requires r in {6, 7, 8}")
        if s == "F" and r != 4:
            raise RootSystemError("F_r requires r = 4")
        if s == "G" and r != 2:
            raise RootSystemError("G_r requires r = 2")

    def __str__(self) -> str:
        return f"{self.series}{self.rank}"

    @classmethod
    def parse(cls, text: str) -> "RootSystemType":
        text = text.strip().upper()
        if len(text) < 2 or not text[1:].isdigit():
            raise RootSystemError(f"cannot parse root-system type {text!r}")
        return cls(text[0], int(text[1:]))


def _e(n: int, *pairs) -> QVec:
    v = [Fraction(0)] * n
    for i, c in pairs:
        v[i] += Fraction(c)
    return tuple(v)


def _simple_roots(t: RootSystemType) -> List[QVec]:
    s, r = t.series, t.rank
    h = Fraction(1, 2)
    if s == "A":
        return [_e(r + 1, (i, 1), (i + 1, -1)) for i in range(r)]
    if s in "BCD":
        roots = [_e(r, (i, 1), (i + 1, -1)) for i in range(r - 1)]
        if s == "B":
            roots.append(_e(r, (r - 1, 1)))
        elif s == "C":
            roots.append(_e(r, (r - 1, 2)))
        else:
            roots.append(_e(r, (r - 2, 1), (r - 1, 1)))
        return roots
    if s == "E":
        a1 = (h, -h, -h, -h, -h, -h, -h, h)
        roots = [qvec(a1), _e(8, (0, 1), (1, 1)), _e(8, (0, -1), (1, 1))]
        roots += [_e(8, (i, -1), (i + 1, 1)) for i in range(1, 6)]
        return roots[:r]
    if s == "F":
        return [_e(4, (1, 1), (2, -1)), _e(4, (2, 1), (3, -1)), _e(4, (3, 1)),
                qvec((h, -h, -h, -h))]
    # G2 inside the sum-zero plane of a 3-space
    return [_e(3, (0, 1), (1, -1)), _e(3, (0, -2), (1, 1), (2, 1))]


def coroot(a: QVec) -> QVec:
    return scale(Fraction(2) / dot(a, a), a)


def canonical(v: QVec) -> QVec:
    """Canonical dictionary key of a vector (Fractions are already reduced)."""
    return tuple(Fraction(x) for x in v)


@dataclass(frozen=True)
class RootDatum:
    type: RootSystemType
    ambient_dim: int
    simple_roots: Tuple[QVec, ...]
    simple_coroots: Tuple[QVec, ...]
    positive_roots: Tuple[QVec, ...]
    fundamental_weights: Tuple[QVec, ...]
    cartan: Tuple[Tuple[int, ...], ...]
    _fund_coweights: Tuple[QVec, ...] = field(repr=False, default=())

    @property
    def rank(self) -> int:
        return self.type.rank

    @property
    def rho(self) -> QVec:
        out = zero(self.ambient_dim)
        for w in self.fundamental_weights:
            out = add(out, w)
        return out

    # coordinates -------------------------------------------------------

    def fw_coords(self, v: QVec) -> Tuple[Fraction, ...]:
        """Coefficients of ``v`` over the fundamental weights: <v, a_i^vee>."""
        return tuple(dot(v, c) for c in self.simple_coroots)

    def from_fw(self, coeffs: Sequence) -> QVec:
        if len(coeffs) != self.rank:
            raise RootSystemError(f"expected {self.rank} coefficients, got {len(coeffs)}")
        out = zero(self.ambient_dim)
        for c, w in zip(coeffs, self.fundamental_weights):
            if c:
                out = add(out, scale(c, w))
        return out

    def root_coords(self, v: QVec) -> Tuple[Fraction, ...]:
        """Coefficients over the simple roots (valid for v in the root span)."""
        return tuple(dot(v, c) for c in self._fund_coweights)

    def height(self, v: QVec) -> Fraction:
        return sum(self.root_coords(v), Fraction(0))

    def is_dominant(self, v: QVec) -> bool:
        return all(x >= 0 for x in self.fw_coords(v))

    # Weyl group --------------------------------------------------------

    def reflect(self, i: int, v: QVec) -> QVec:
        """Simple reflection s_i (0-based index)."""
        c = dot(v, self.simple_coroots[i])
        if c == 0:
            return v
        return sub(v, scale(c, self.simple_roots[i]))


def build(t: RootSystemType) -> RootDatum:
    """Realize the root system of type ``t``."""
    simple = _simple_roots(t)
    r = t.rank
    cor = [coroot(a) for a in simple]
    cartan = tuple(tuple(int(dot(simple[i], cor[j])) for j in range(r)) for i in range(r))
    # fundamental weights: w_i = sum_j (A^{-1})_{ij} a_j with A_ij = <a_i, a_j^vee>
    a = [[Fraction(cartan[i][j]) for j in range(r)] for i in range(r)]
    inv_rows = []
    for i in range(r):
        # row i of A^{-1} solves x A = e_i, i.e. A^T x = e_i
        at = [[a[k][j] for k in range(r)] for j in range(r)]
        x = solve(at, [Fraction(int(i == j)) for j in range(r)])
        assert x is not None
        inv_rows.append(x)
    n = len(simple[0])
    fund = []
    for i in range(r):
        w = zero(n)
        for j in range(r):
            if inv_rows[i][j]:
                w = add(w, scale(inv_rows[i][j], simple[j]))
        fund.append(w)
    coweights = tuple(scale(Fraction(2) / dot(a_, a_), w) for a_, w in zip(simple, fund))
    datum = RootDatum(t, n, tuple(simple), tuple(cor), (), tuple(fund), cartan, coweights)
    roots = weyl_orbit_set(datum, simple)
    pos = sorted((v for v in roots if _positive(datum, v)),
                 key=lambda v: (datum.height(v), v))
    return RootDatum(t, n, tuple(simple), tuple(cor), tuple(pos), tuple(fund), cartan, coweights)


def _positive(d: RootDatum, v: QVec) -> bool:
    c = d.root_coords(v)
    return all(x >= 0 for x in c) and any(x > 0 for x in c)


def simple_reflection(d: RootDatum, i: int, v: QVec) -> QVec:
    """s_i(v) = v - <v, a_i^vee> a_i for 1 <= i <= r (Bourbaki numbering)."""
    if not 1 <= i <= d.rank:
        raise RootSystemError(f"simple reflection index {i} out of range 1..{d.rank}")
    return d.reflect(i - 1, v)


def dominant_rep(d: RootDatum, v: QVec) -> QVec:
    """The dominant element of the Weyl orbit of ``v``."""
    return dominant_rep_word(d, v)[0]


def dominant_rep_word(d: RootDatum, v: QVec) -> Tuple[QVec, List[int]]:
    """Dominant representative and the (0-based) reflections applied, in order."""
    word: List[int] = []
    while True:
        for i, c in enumerate(d.simple_coroots):
            if dot(v, c) < 0:
                v = d.reflect(i, v)
                word.append(i)
                break
        else:
            return v, word


def weyl_orbit_set(d: RootDatum, seeds, cap: int | None = None) -> Set[QVec]:
    todo = list(dict.fromkeys(canonical(s) for s in seeds))
    seen = set(todo)
    while todo:
        v = todo.pop()
        for i in range(d.rank):
            w = d.reflect(i, v)
            if w not in seen:
                seen.add(w)
                if cap is not None and len(seen) > cap:
                    raise OrbitTooLarge(f"Weyl orbit exceeds cap {cap}")
                todo.append(w)
    return seen


def weyl_orbit(d: RootDatum, v: QVec, cap: int = 10 ** 6) -> Set[QVec]:
    """The full Weyl orbit of ``v``; raises :class:`OrbitTooLarge` past ``cap``."""
    if cap <= 0:
        raise ValueError("cap must be positive")
    return weyl_orbit_set(d, [v], cap)


def dual_weight(d: RootDatum, coeffs: Sequence[int]) -> Tuple[int, ...]:
    """Highest weight of the dual module, -w0(lambda), in fundamental coordinates."""
    v = d.from_fw(coeffs)
    dual = dominant_rep(d, scale(-1, v))
    return tuple(int(x) for x in d.fw_coords(dual))


_CACHE: Dict[RootSystemType, RootDatum] = {}


def root_datum(series: str, rank: int) -> RootDatum:
    """Memoized :func:`build`."""
    t = RootSystemType(series, rank)
    if t not in _CACHE:
        _CACHE[t] = build(t)
    return _CACHE[t]
