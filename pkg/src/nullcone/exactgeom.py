"""Exact rational linear algebra and convex geometry.

Everything here works over :class:`fractions.Fraction`; there are no
tolerances.  Vectors are plain tuples of Fractions (``QVec``).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, List, Optional, Sequence, Tuple

QVec = Tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


class DimensionError(ValueError):
    """Vectors of different lengths were combined."""


def qvec(coords: Iterable) -> QVec:
    """Coerce an iterable of ints/Fractions/'p/q' strings to a QVec."""
    return tuple(Fraction(c) for c in coords)


def _check(u: Sequence, v: Sequence) -> None:
    if len(u) != len(v):
        raise DimensionError(f"length mismatch: {len(u)} != {len(v)}")


def dot(u: QVec, v: QVec) -> Fraction:
    _check(u, v)
    return sum((a * b for a, b in zip(u, v)), ZERO)


def add(u: QVec, v: QVec) -> QVec:
    _check(u, v)
    return tuple(a + b for a, b in zip(u, v))


def sub(u: QVec, v: QVec) -> QVec:
    _check(u, v)
    return tuple(a - b for a, b in zip(u, v))


def scale(t, v: QVec) -> QVec:
    t = Fraction(t)
    return tuple(t * a for a in v)


def norm2(v: QVec) -> Fraction:
    return dot(v, v)


def zero(n: int) -> QVec:
    return (ZERO,) * n


def is_zero(v: QVec) -> bool:
    return all(a == 0 for a in v)


def combo(coeffs: Sequence[Fraction], points: Sequence[QVec]) -> QVec:
    """Linear combination ``sum(c_i * p_i)``."""
    n = len(points[0])
    out = [ZERO] * n
    for c, p in zip(coeffs, points):
        _check(p, out)
        if c:
            for k, a in enumerate(p):
                out[k] += c * a
    return tuple(out)


# ---------------------------------------------------------------------------
# elimination


def solve(a: List[List[Fraction]], b: List[Fraction]) -> Optional[List[Fraction]]:
    """Solve a square system exactly; ``None`` if singular."""
    n = len(a)
    m = [list(row) + [rhs] for row, rhs in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        row = [x / pv for x in m[col]]
        m[col] = row
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], row)]
    return [m[r][n] for r in range(n)]


def rank(vectors: Sequence[QVec]) -> int:
    """Rank of a list of vectors over the rationals."""
    rows = [list(v) for v in vectors]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][col]
        for i in range(r + 1, len(rows)):
            if rows[i][col] != 0:
                f = rows[i][col] / pv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def affine_basis(points: Sequence[QVec]) -> List[int]:
    """Indices of a maximal affinely independent subset, greedy in input order."""
    if not points:
        return []
    p0 = points[0]
    chosen = [0]
    # incremental echelon form of the difference vectors
    echelon: List[Tuple[int, List[Fraction]]] = []
    for idx in range(1, len(points)):
        v = list(sub(points[idx], p0))
        for col, row in echelon:
            if v[col] != 0:
                f = v[col] / row[col]
                v = [x - f * y for x, y in zip(v, row)]
        lead = next((c for c, x in enumerate(v) if x != 0), None)
        if lead is not None:
            echelon.append((lead, v))
            chosen.append(idx)
    return chosen


def affinely_independent(points: Sequence[QVec]) -> bool:
    return len(affine_basis(points)) == len(points)


@dataclass(frozen=True)
class AffineSpan:
    """A finite generating set for an affine subspace."""

    points: Tuple[QVec, ...]

    def __post_init__(self):
        if not self.points:
            raise ValueError("AffineSpan needs at least one point")
        n = len(self.points[0])
        for p in self.points:
            if len(p) != n:
                raise DimensionError("points of differing length")

    @property
    def dim(self) -> int:
        return len(affine_basis(self.points)) - 1


def _affine_min_norm(points: Sequence[QVec]) -> Tuple[QVec, List[Fraction]]:
    """Min-norm point of the affine hull of affinely independent points.

    Returns the point and its (unique) barycentric coordinates.
    """
    k = len(points)
    if k == 1:
        return points[0], [ONE]
    # bordered Gram system: G a + mu 1 = 0, sum a = 1
    g = [[dot(p, q) for q in points] + [ONE] for p in points]
    g.append([ONE] * k + [ZERO])
    rhs = [ZERO] * k + [ONE]
    sol = solve(g, rhs)
    if sol is None:
        raise ValueError("points are affinely dependent")
    coeffs = sol[:k]
    return combo(coeffs, points), coeffs


def min_norm_point_affine(span) -> QVec:
    """The point of the affine hull of ``span`` closest to the origin."""
    pts = span.points if isinstance(span, AffineSpan) else tuple(span)
    if not pts:
        raise ValueError("empty point set")
    n = len(pts[0])
    for p in pts:
        if len(p) != n:
            raise DimensionError("points of differing length")
    basis = [pts[i] for i in affine_basis(pts)]
    return _affine_min_norm(basis)[0]


def barycentric(p: QVec, points: Sequence[QVec]) -> Optional[List[Fraction]]:
    """Affine coordinates of ``p`` w.r.t. affinely independent ``points``.

    ``None`` when ``p`` is not in their affine hull.
    """
    k = len(points)
    p0 = points[0]
    diffs = [sub(q, p0) for q in points[1:]]
    target = sub(p, p0)
    if k == 1:
        return [ONE] if is_zero(target) else None
    g = [[dot(d, e) for e in diffs] for d in diffs]
    sol = solve(g, [dot(d, target) for d in diffs])
    if sol is None:
        raise ValueError("points are affinely dependent")
    if combo(sol, diffs) != target:
        return None
    return [ONE - sum(sol, ZERO)] + sol


# ---------------------------------------------------------------------------
# convex hulls


def in_hull(p: QVec, points: Sequence[QVec]) -> bool:
    """Exact convex-hull membership via phase-1 simplex with Bland's rule."""
    if not points:
        return False
    for q in points:
        _check(p, q)
    m = len(points)
    n = len(p)
    # equality rows: sum_i c_i q_i = p  and  sum_i c_i = 1
    rows = [[q[k] for q in points] for k in range(n)] + [[ONE] * m]
    rhs = list(p) + [ONE]
    for i in range(len(rows)):
        if rhs[i] < 0:
            rows[i] = [-x for x in rows[i]]
            rhs[i] = -rhs[i]
    nrows = len(rows)
    # tableau columns: m structural, nrows artificial
    tab = [rows[i] + [ONE if j == i else ZERO for j in range(nrows)] + [rhs[i]]
           for i in range(nrows)]
    basis = [m + i for i in range(nrows)]
    ncols = m + nrows
    # objective: minimise the sum of artificials, reduced costs below
    cost = [ZERO] * (ncols + 1)
    for i in range(nrows):
        for j in range(ncols + 1):
            cost[j] -= tab[i][j]
    for j in range(m, ncols):
        cost[j] = ZERO
    while True:
        enter = next((j for j in range(ncols) if cost[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(nrows):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:  # cannot happen for a bounded phase-1 problem
            break
        pv = tab[leave][enter]
        tab[leave] = [x / pv for x in tab[leave]]
        for i in range(nrows):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[leave])]
        f = cost[enter]
        cost = [x - f * y for x, y in zip(cost, tab[leave])]
        basis[leave] = enter
    return cost[-1] == 0


def hull_certificate(q: QVec, points: Sequence[QVec]) -> bool:
    """Check that ``q`` is the min-norm point of ``conv(points)``.

    ``q`` must lie in the hull and every generator must satisfy
    ``<v - q, q> >= 0``.
    """
    nq = norm2(q)
    if any(dot(v, q) < nq for v in points):
        return False
    return in_hull(q, points)


def _wolfe(points: Sequence[QVec]) -> QVec:
    """Wolfe's nearest-point iteration carried out in exact arithmetic."""
    x = min(points, key=norm2)
    active: List[QVec] = [x]
    weights: List[Fraction] = [ONE]
    while True:
        nx = norm2(x)
        p = min(points, key=lambda v: dot(x, v))
        if dot(x, p) >= nx or p in active:
            return x
        active.append(p)
        weights.append(ZERO)
        while True:
            y, alpha = _affine_min_norm(active)
            if all(a >= 0 for a in alpha):
                x, weights = y, alpha
                keep = [i for i, w in enumerate(weights) if w > 0]
                active = [active[i] for i in keep]
                weights = [weights[i] for i in keep]
                break
            theta = min(w / (w - a) for w, a in zip(weights, alpha) if a < 0)
            weights = [theta * a + (1 - theta) * w for w, a in zip(weights, alpha)]
            x = combo(weights, active)
            keep = [i for i, w in enumerate(weights) if w > 0]
            active = [active[i] for i in keep]
            weights = [weights[i] for i in keep]


def min_norm_point_hull(points: Sequence[QVec]) -> QVec:
    """The point of ``conv(points)`` closest to the origin.

    Computed by an exact Wolfe iteration; the optimality certificate is
    checked before returning.
    """
    if not points:
        raise ValueError("empty point set")
    pts = list(dict.fromkeys(points))
    n = len(pts[0])
    for v in pts:
        if len(v) != n:
            raise DimensionError("points of differing length")
    if len(pts) == 1:
        return pts[0]
    q = _wolfe(pts)
    if not hull_certificate(q, pts):
        raise ArithmeticError("min-norm certificate failed")  # pragma: no cover
    return q


def min_norm_point_hull_bruteforce(points: Sequence[QVec]) -> QVec:
    """Face enumeration: exponential, kept as an independent check."""
    pts = list(dict.fromkeys(points))
    dim = len(affine_basis(pts)) - 1
    best: Optional[QVec] = None
    for k in range(1, dim + 2):
        for sub_ in combinations(pts, k):
            if not affinely_independent(sub_):
                continue
            y, alpha = _affine_min_norm(sub_)
            if all(a >= 0 for a in alpha) and (best is None or norm2(y) < norm2(best)):
                best = y
    assert best is not None
    return best
