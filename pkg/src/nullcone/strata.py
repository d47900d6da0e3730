"""Instability stratification of the nullcone.

Candidate destabilizing directions are min-norm points of affine hulls of
weight subsets, moved into the dominant chamber.  A candidate ``lam``
defines a stratum when

* it is the min-norm point of the convex hull of its support
  ``{mu : <mu, lam> >= <lam, lam>}`` (the torus certificate), and
* the slice spanned by the weights on the hyperplane ``<mu, lam> = <lam, lam>``
  has semistable vectors for the Levi subgroup of ``lam``, the weights being
  shifted by ``-lam``.  That is decided by running the same analysis one
  level down: the slice has semistable vectors unless some nonempty stratum
  of the Levi action fills it.

A nonempty stratum has dimension ``dim L + #{a > 0 : <a, lam> > 0}``; the
nullcone dimension is the largest of these and the strata reaching it are
its components.

Internally every point set is scaled to integer coordinates.  The min-norm
point of an affine flat is then stored as a primitive integer normal ``v``
and level ``h = <p, v>`` (any ``p`` in the flat), with
``lam = h / <v, v> * v``; support and dominance tests are integer
comparisons.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd, lcm
from operator import mul
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .exactgeom import (
    QVec,
    affine_basis,
    dot,
    in_hull,
    is_zero,
    min_norm_point_affine,
    min_norm_point_hull,
    scale,
    sub,
)
from .rootsystem import RootDatum
from .weightsys import WeightSystem

log = logging.getLogger(__name__)

DEFAULT_MAX_SUBSETS = 10 ** 8
METHODS = ("flats", "subsets", "exhaustive")

# (root, coroot) pairs generating a Weyl group
Simple = Tuple[Tuple[QVec, QVec], ...]
IVec = Tuple[int, ...]


class BudgetExceeded(RuntimeError):
    """The subset budget (``max_subsets``) was exhausted."""

    def __init__(self, budget: int, visited: int):
        super().__init__(f"subset budget max_subsets={budget} exceeded after {visited} subsets")
        self.budget = budget
        self.visited = visited


class TrivialModule(ValueError):
    """The module has highest weight zero."""


@dataclass(frozen=True)
class EnumOptions:
    max_subsets: int = DEFAULT_MAX_SUBSETS
    max_subset_size: Optional[int] = None
    threads: int = 1
    # "flats": Weyl-reduced enumeration of affine flats (default);
    # "subsets": affinely independent subsets up to the affine rank;
    # "exhaustive": every subset, no size bound (small inputs only)
    method: str = "flats"

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown enumeration method {self.method!r}")
        if self.max_subsets < 1:
            raise ValueError("max_subsets must be positive")
        if self.threads < 1:
            raise ValueError("threads must be positive")


@dataclass
class Counters:
    subsets: int = 0
    flats: int = 0
    levi_checks: int = 0

    def add(self, other: "Counters") -> None:
        self.subsets += other.subsets
        self.flats += other.flats
        self.levi_checks += other.levi_checks

    def as_dict(self) -> Dict[str, int]:
        return {"subsets": self.subsets, "flats": self.flats, "levi_checks": self.levi_checks}


@dataclass(frozen=True)
class Candidate:
    lam: QVec
    norm2: Fraction
    support: FrozenSet[QVec]


@dataclass(frozen=True)
class Stratum:
    candidate: Candidate
    dim_L: int
    dim_flag: int
    dim_total: int


@dataclass(frozen=True)
class NullconeReport:
    dim_module: int
    dim_nullcone: int
    num_components: int
    strata: Tuple[Stratum, ...]
    counters: Dict[str, int] = field(default_factory=dict, compare=False)

    @property
    def components(self) -> Tuple[Stratum, ...]:
        return tuple(s for s in self.strata if s.dim_total == self.dim_nullcone)


# ---------------------------------------------------------------------------
# integer helpers


def _primitive(v: Sequence[int]) -> IVec:
    g = reduce(gcd, v, 0)
    return tuple(v) if g <= 1 else tuple(x // g for x in v)


def _idot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(map(mul, u, v))


def _solve_ff(a: List[List[int]], b: List[int]) -> Tuple[List[int], int]:
    """Fraction-free (Bareiss) solve: returns ``(x, det)`` with ``a x = det b``."""
    n = len(a)
    m = [list(row) + [rhs] for row, rhs in zip(a, b)]
    prev = 1
    for k in range(n):
        if m[k][k] == 0:
            swap = next(i for i in range(k + 1, n) if m[i][k] != 0)
            m[k], m[swap] = m[swap], m[k]
        mkk = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n + 1):
                row_i[j] = (row_i[j] * mkk - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = mkk
    det = m[n - 1][n - 1]
    x = [0] * n
    for i in reversed(range(n)):
        s = det * m[i][n] - sum(m[i][j] * x[j] for j in range(i + 1, n))
        x[i] = s // m[i][i]
    return x, det


def _nullspace_update(cols: List[IVec], d: Sequence[int]) -> Optional[List[IVec]]:
    """Restrict an integer basis of a subspace to the hyperplane orthogonal to ``d``.

    Returns ``None`` when ``d`` is orthogonal to the whole subspace.
    """
    c = [_idot(col, d) for col in cols]
    j = next((i for i, x in enumerate(c) if x != 0), None)
    if j is None:
        return None
    pivot, cj = cols[j], c[j]
    out = []
    for i, col in enumerate(cols):
        if i == j:
            continue
        ci = c[i]
        out.append(col if ci == 0 else _primitive([cj * x - ci * y for x, y in zip(col, pivot)]))
    return out


# ---------------------------------------------------------------------------
# integer view of a module under a (Levi) Weyl group


class _Lattice:
    """A W-stable weight multiset scaled to integer coordinates."""

    def __init__(self, module: Dict[QVec, int], simple: Simple, positive: Sequence[QVec]):
        self.points: List[QVec] = sorted(module)
        self.module = module
        self.simple = simple
        self.positive = tuple(positive)
        self.index = {p: i for i, p in enumerate(self.points)}
        self.n = len(self.points[0])
        dens = [x.denominator for p in self.points for x in p]
        dens += [x.denominator for a, _ in simple for x in a]
        dens += [x.denominator for a in self.positive for x in a]
        self.den = lcm(*dens) if dens else 1
        self.ints: List[IVec] = [tuple(int(x * self.den) for x in p) for p in self.points]
        self.arr = np.array(self.ints, dtype=np.int64).reshape(len(self.points), self.n)
        self.mult = np.array([module[p] for p in self.points], dtype=np.int64)
        self.sroots = [(tuple(int(x * self.den) for x in a), 0) for a, _ in simple]
        self.sroots = [(a, _idot(a, a)) for a, _ in self.sroots]
        self.pos_arr = np.array([[int(x * self.den) for x in a] for a in self.positive],
                                dtype=np.int64).reshape(len(self.positive), self.n)
        self.perms = [np.array([self.index[_reflect(a, ac, p)] for p in self.points])
                      for a, ac in simple]
        self.nonzero = [i for i, p in enumerate(self.points) if not is_zero(p)]

    @property
    def dim(self) -> int:
        return int(self.mult.sum())

    # geometry of one candidate (v, h)

    def lam(self, v: IVec, h: int) -> QVec:
        c = Fraction(h, _idot(v, v) * self.den)
        return tuple(c * x for x in v)

    def support_mask(self, v: IVec, h: int) -> np.ndarray:
        return self.arr @ np.array(v, dtype=np.int64) >= h

    def level_mask(self, v: IVec, h: int) -> np.ndarray:
        return self.arr @ np.array(v, dtype=np.int64) == h

    def dim_flag(self, v: IVec) -> int:
        if not len(self.positive):
            return 0
        return int((self.pos_arr @ np.array(v, dtype=np.int64) > 0).sum())

    def torus_certified(self, v: IVec, h: int, inside: bool = False) -> bool:
        """``lam`` lies in the hull of the weights on its hyperplane.

        ``inside`` short-cuts the test when ``lam`` is already known to be a
        convex combination of some of those weights.
        """
        if inside:
            return True
        idx = np.flatnonzero(self.level_mask(v, h))
        nv = _idot(v, v)
        target = tuple(Fraction(h * x) for x in v)
        pts = [tuple(Fraction(nv * x) for x in self.ints[i]) for i in idx]
        return in_hull(target, pts)

    def dominant(self, v: IVec) -> Tuple[IVec, List[int]]:
        word = []
        while True:
            for i, (a, q) in enumerate(self.sroots):
                c = _idot(v, a)
                if c < 0:
                    v = _primitive([q * x - 2 * c * y for x, y in zip(v, a)])
                    word.append(i)
                    break
            else:
                return v, word

    def from_lam(self, lam: QVec) -> Tuple[IVec, int]:
        """Integer (v, h) form of a rational min-norm point."""
        scaled = [x * self.den for x in lam]
        den = lcm(*(x.denominator for x in scaled))
        v = _primitive([int(x * den) for x in scaled])
        h = sum((x * y for x, y in zip(scaled, v)), Fraction(0))
        assert h.denominator == 1
        return v, int(h)

    # flats

    def flat_normal(self, basis: Sequence[int]) -> Optional[Tuple[IVec, int, bool]]:
        """Min-norm point of a flat as ``(v, h, inside)``, or ``None`` at the origin.

        ``inside`` says whether the point is a convex combination of the basis.
        """
        p0 = self.ints[basis[0]]
        if len(basis) == 1:
            if not any(p0):
                return None
            v = _primitive(p0)
            return v, _idot(p0, v), True
        dirs = [[x - y for x, y in zip(self.ints[b], p0)] for b in basis[1:]]
        gram = [[_idot(d, e) for e in dirs] for d in dirs]
        rhs = [_idot(d, p0) for d in dirs]
        x, det = _solve_ff(gram, rhs)
        w = [det * c for c in p0]
        for xj, d in zip(x, dirs):
            if xj:
                w = [a - xj * b for a, b in zip(w, d)]
        if not any(w):
            return None
        # barycentric weights are (det + sum x, -x_1, ..., -x_k) / det
        sgn = 1 if det > 0 else -1
        inside = (det + sum(x)) * sgn >= 0 and all(xj * sgn <= 0 for xj in x)
        v = _primitive(w)
        h = _idot(p0, v)
        if h < 0:
            v, h = tuple(-c for c in v), -h
        return v, h, inside

    def closure_cols(self, basis: Sequence[int]) -> List[IVec]:
        cols = [tuple(int(i == j) for j in range(self.n)) for i in range(self.n)]
        p0 = self.ints[basis[0]]
        for b in basis[1:]:
            cols = _nullspace_update(cols, [x - y for x, y in zip(self.ints[b], p0)])
        return cols

    def flat_mask(self, p0: int, cols: Optional[List[IVec]]) -> np.ndarray:
        if not cols:
            return np.ones(len(self.points), dtype=bool)
        m = np.array(cols, dtype=np.int64).T
        return np.all((self.arr - self.arr[p0]) @ m == 0, axis=1)

    def normalize(self, v: IVec, basis: Tuple[int, ...], mask: np.ndarray):
        """Move a flat so that its min-norm point is dominant."""
        dom, word = self.dominant(v)
        if not word:
            return dom, basis, mask
        perm = np.arange(len(self.points))
        for s in word:
            perm = self.perms[s][perm]
        new_mask = np.zeros_like(mask)
        new_mask[perm] = mask
        return dom, tuple(int(perm[b]) for b in basis), new_mask


def _reflect(root: QVec, coroot: QVec, v: QVec) -> QVec:
    c = dot(v, coroot)
    return v if c == 0 else sub(v, scale(c, root))


def _dominant(simple: Simple, v: QVec) -> QVec:
    while True:
        for a, ac in simple:
            if dot(v, ac) < 0:
                v = _reflect(a, ac, v)
                break
        else:
            return v


def _simple_of(d: RootDatum) -> Simple:
    return tuple(zip(d.simple_roots, d.simple_coroots))


# ---------------------------------------------------------------------------
# candidate enumeration


def _flat_candidates(lat: _Lattice, top: int, opts: EnumOptions,
                     counters: Counters) -> Dict[Tuple[IVec, int], bool]:
    """Dominant min-norm points of every affine flat spanned by the points.

    Flats are built level by level.  Each new flat is moved by the Weyl
    group until its min-norm point is dominant and deduplicated by its point
    set, so every Weyl orbit of flats keeps at least one representative.
    Flats through the origin are dropped along with all their extensions.
    """
    n_pts = len(lat.points)
    out: Dict[Tuple[IVec, int], bool] = {}
    seen = set()
    level = []

    def budget():
        counters.subsets += 1
        if counters.subsets > opts.max_subsets:
            raise BudgetExceeded(opts.max_subsets, counters.subsets)

    for i in lat.nonzero:
        budget()
        v, _, _ = lat.flat_normal((i,))
        mask = np.zeros(n_pts, dtype=bool)
        mask[i] = True
        v, basis, mask = lat.normalize(v, (i,), mask)
        key = mask.tobytes()
        if key in seen:
            continue
        seen.add(key)
        # the reflection walk may rescale v, so take the level from the moved point
        out[(v, _idot(lat.ints[basis[0]], v))] = True
        level.append((basis, mask))
    counters.flats += len(level)
    for _ in range(2, top + 1):
        nxt = []
        for basis, mask in level:
            cols = lat.closure_cols(basis)
            p0 = lat.ints[basis[0]]
            covered = mask.copy()
            for p in range(n_pts):
                if covered[p]:
                    continue
                budget()
                ncols = _nullspace_update(cols, [x - y for x, y in zip(lat.ints[p], p0)])
                m = lat.flat_mask(basis[0], ncols)
                covered |= m
                key = m.tobytes()
                if key in seen:
                    continue
                seen.add(key)
                nb = basis + (p,)
                normal = lat.flat_normal(nb)
                if normal is None:
                    continue
                v, nb, m = lat.normalize(normal[0], nb, m)
                inside = normal[2]
                moved = m.tobytes()
                if moved != key:
                    if moved in seen:
                        continue
                    seen.add(moved)
                vh = (v, _idot(lat.ints[nb[0]], v))
                out[vh] = out.get(vh, False) or inside
                nxt.append((nb, m))
        level = nxt
        counters.flats += len(level)
        log.debug("flats of dim %d: %d (candidates so far %d)", _ - 1, len(level), len(out))
        if not level:
            break
    return out


def _subset_candidates(lat: _Lattice, top: int, opts: EnumOptions, counters: Counters,
                       independent_only: bool = True) -> Dict[Tuple[IVec, int], bool]:
    """Literal subset enumeration, kept as an oracle for the flat search."""
    out: Dict[Tuple[IVec, int], bool] = {}
    for k in range(1, top + 1):
        for sub_ in combinations(lat.points, k):
            counters.subsets += 1
            if counters.subsets > opts.max_subsets:
                raise BudgetExceeded(opts.max_subsets, counters.subsets)
            if independent_only and len(affine_basis(sub_)) != k:
                continue
            lam = min_norm_point_affine(sub_)
            if not is_zero(lam):
                out[lat.from_lam(_dominant(lat.simple, lam))] = False
    return out


def _candidates(lat: _Lattice, opts: EnumOptions,
                counters: Counters) -> List[Tuple[IVec, int, bool]]:
    """All dominant candidates as ``(v, h, inside)``, in a fixed order."""
    if not lat.nonzero:
        return []
    rank = len(affine_basis(lat.points))
    top = rank if opts.max_subset_size is None else min(rank, opts.max_subset_size)
    if opts.method == "flats":
        found = _flat_candidates(lat, top, opts, counters)
    elif opts.method == "subsets":
        found = _subset_candidates(lat, top, opts, counters)
    else:
        found = _subset_candidates(lat, len(lat.points), opts, counters, independent_only=False)
    return sorted((v, h, inside) for (v, h), inside in found.items())


def enumerate_candidates(ws: WeightSystem, opts: EnumOptions = EnumOptions(),
                         counters: Optional[Counters] = None) -> List[Candidate]:
    """Dominant candidate directions with their supports, in canonical order."""
    counters = counters if counters is not None else Counters()
    if not ws.entries:
        raise ValueError("empty weight system")
    lat = _Lattice(dict(ws.entries), _simple_of(ws.datum), ws.datum.positive_roots)
    out = [_candidate(lat, v, h) for v, h, _ in _candidates(lat, opts, counters)]
    return sorted(out, key=lambda c: c.lam)


def _candidate(lat: _Lattice, v: IVec, h: int) -> Candidate:
    lam = lat.lam(v, h)
    sup = lat.support_mask(v, h)
    return Candidate(lam, dot(lam, lam), frozenset(p for p, s in zip(lat.points, sup) if s))


# ---------------------------------------------------------------------------
# filters


def optimality_filter(ws: WeightSystem, c: Candidate) -> bool:
    """Torus certificate: ``lam`` is the min-norm point of the hull of its support."""
    sup = [mu for mu in ws.entries if dot(mu, c.lam) >= c.norm2]
    return bool(sup) and min_norm_point_hull(sup) == c.lam


class _Levi:
    """Recursive test for semistable vectors in a Levi slice.

    Results are memoized per slice and shared by every candidate of one
    analysis.  Each slice records the work its own enumeration took, so the
    totals do not depend on the order (or thread) in which slices are reached.
    """

    def __init__(self, opts: EnumOptions):
        self.opts = opts
        self.memo: Dict[tuple, Tuple[bool, Counters]] = {}

    def counters(self) -> Counters:
        total = Counters()
        for _, work in self.memo.values():
            total.add(work)
        return total

    def nonempty(self, lat: _Lattice, v: IVec, h: int) -> bool:
        """Whether the stratum of a torus-certified candidate is nonempty."""
        sub_simple = tuple((a, ac) for (a, ac), (ai, _) in zip(lat.simple, lat.sroots)
                           if _idot(ai, v) == 0)
        if not sub_simple:
            # a torus slice is semistable iff the origin lies in the shifted
            # hull, which is the torus certificate itself
            return True
        pos = lat.positive
        sub_pos = tuple(a for a, s in zip(pos, lat.pos_arr @ np.array(v, dtype=np.int64)) if s == 0)
        lam = lat.lam(v, h)
        shifted: Dict[QVec, int] = {}
        for i in np.flatnonzero(lat.level_mask(v, h)):
            q = sub(lat.points[i], lam)
            shifted[q] = shifted.get(q, 0) + int(lat.mult[i])
        return not self.generically_unstable(sub_simple, sub_pos, shifted)

    def generically_unstable(self, simple: Simple, positive: Sequence[QVec],
                             module: Dict[QVec, int]) -> bool:
        """Whether a generic vector of the module lies in the nullcone."""
        key = (simple, tuple(sorted(module.items())))
        hit = self.memo.get(key)
        if hit is not None:
            return hit[0]
        work = Counters(levi_checks=1)
        lat = _Lattice(module, simple, positive)
        result = False
        dim = lat.dim
        for v, h, inside in _candidates(lat, self.opts, work):
            d_l = int(lat.mult[lat.support_mask(v, h)].sum())
            # a nonempty stratum never exceeds the module
            if d_l + lat.dim_flag(v) != dim:
                continue
            if lat.torus_certified(v, h, inside) and self.nonempty(lat, v, h):
                result = True
                break
        # a concurrent duplicate computes the same entry; either write is fine
        self.memo[key] = (result, work)
        return result


def levi_semistable(ws: WeightSystem, c: Candidate, opts: EnumOptions = EnumOptions()) -> bool:
    """Whether a torus-certified candidate's stratum is nonempty."""
    lat = _Lattice(dict(ws.entries), _simple_of(ws.datum), ws.datum.positive_roots)
    v, h = lat.from_lam(c.lam)
    return _Levi(opts).nonempty(lat, v, h)


def stratum_of(ws: WeightSystem, c: Candidate) -> Stratum:
    dim_l = sum(ws.entries[mu] for mu in c.support)
    dim_f = sum(1 for a in ws.datum.positive_roots if dot(a, c.lam) > 0)
    return Stratum(c, dim_l, dim_f, dim_l + dim_f)


def analyze(ws: WeightSystem, opts: EnumOptions = EnumOptions()) -> NullconeReport:
    """Stratify the nullcone and count its top-dimensional components."""
    if not ws.entries:
        raise ValueError("empty weight system")
    if not any(ws.highest) or all(is_zero(mu) for mu in ws.entries):
        raise TrivialModule("the trivial module has no nullcone to stratify")
    d = ws.datum
    counters = Counters()
    lat = _Lattice(dict(ws.entries), _simple_of(d), d.positive_roots)
    cands = _candidates(lat, opts, counters)

    levi = _Levi(opts)

    def evaluate(cand: Tuple[IVec, int, bool]) -> Optional[Stratum]:
        v, h, inside = cand
        if not lat.torus_certified(v, h, inside) or not levi.nonempty(lat, v, h):
            return None
        return stratum_of(ws, _candidate(lat, v, h))

    if opts.threads > 1:
        with ThreadPoolExecutor(max_workers=opts.threads) as pool:
            results = list(pool.map(evaluate, cands))
    else:
        results = [evaluate(vh) for vh in cands]
    counters.add(levi.counters())
    strata = sorted((s for s in results if s is not None),
                    key=lambda s: (-s.dim_total, d.fw_coords(s.candidate.lam)))
    top = strata[0].dim_total
    ncomp = sum(1 for s in strata if s.dim_total == top)
    log.debug("%s %s: %d candidates, %d strata", d.type, ws.highest, len(cands), len(strata))
    return NullconeReport(ws.dim, top, ncomp, tuple(strata), counters.as_dict())
