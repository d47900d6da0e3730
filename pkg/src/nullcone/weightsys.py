"""Weight systems of irreducible highest-weight modules.

Dominant weights are found by walking down root strings from the highest
weight; their multiplicities come from Freudenthal's recursion, ordered by
height below the highest weight.  Each dominant weight is then spread over
its Weyl orbit.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Sequence, Tuple

from .exactgeom import QVec, add, dot, norm2, scale, sub, zero
from .rootsystem import RootDatum, dominant_rep, weyl_orbit_set

DEFAULT_DIM_CAP = 300


class WeightError(ValueError):
    """Highest weight is not dominant integral or has the wrong length."""


class ModuleTooLarge(RuntimeError):
    """Module dimension exceeds the configured cap."""


def _check_highest(d: RootDatum, coeffs: Sequence[int]) -> Tuple[int, ...]:
    if len(coeffs) != d.rank:
        raise WeightError(f"{d.type} needs {d.rank} coefficients, got {len(coeffs)}")
    out = []
    for c in coeffs:
        if Fraction(c).denominator != 1 or c < 0:
            raise WeightError(f"highest weight must be dominant integral, got {tuple(coeffs)}")
        out.append(int(c))
    return tuple(out)


def weyl_dim(d: RootDatum, coeffs: Sequence[int]) -> int:
    """Weyl dimension formula: prod over positive roots of <l+rho, a>/<rho, a>."""
    lam = d.from_fw(_check_highest(d, coeffs))
    lr = add(lam, d.rho)
    num = Fraction(1)
    for a in d.positive_roots:
        num *= dot(lr, a) / dot(d.rho, a)
    assert num.denominator == 1
    return int(num)


@dataclass(frozen=True)
class WeightSystem:
    datum: RootDatum
    highest: Tuple[int, ...]
    entries: Mapping[QVec, int]

    @property
    def dim(self) -> int:
        return sum(self.entries.values())

    def weights(self) -> List[QVec]:
        """Distinct weights in canonical (sorted) order."""
        return sorted(self.entries)

    def scaled(self, t) -> "WeightSystem":
        """The same multiset with every weight multiplied by ``t``."""
        t = Fraction(t)
        return WeightSystem(self.datum, self.highest,
                            {scale(t, mu): m for mu, m in self.entries.items()})


def dominant_weights(d: RootDatum, lam: QVec) -> List[QVec]:
    """All dominant weights of the module with highest weight ``lam``."""
    seen = {lam}
    todo = [lam]
    while todo:
        mu = todo.pop()
        for a in d.positive_roots:
            k = dot(mu, a) * 2 / dot(a, a)
            for j in range(1, int(k) + 1):
                nu = dominant_rep(d, sub(mu, scale(j, a)))
                if nu not in seen:
                    seen.add(nu)
                    todo.append(nu)
    return sorted(seen, key=lambda mu: (d.height(sub(lam, mu)), mu))


def dominant_multiplicities(d: RootDatum, coeffs: Sequence[int]) -> Dict[QVec, int]:
    """Freudenthal multiplicities of the dominant weights."""
    lam = d.from_fw(_check_highest(d, coeffs))
    rho = d.rho
    top = norm2(add(lam, rho))
    mult: Dict[QVec, int] = {}
    for mu in dominant_weights(d, lam):
        if mu == lam:
            mult[mu] = 1
            continue
        total = Fraction(0)
        for a in d.positive_roots:
            k = 1
            while True:
                nu = add(mu, scale(k, a))
                m = mult.get(dominant_rep(d, nu), 0)
                if m == 0:  # weight strings are unbroken
                    break
                total += m * dot(nu, a)
                k += 1
        denom = top - norm2(add(mu, rho))
        val = 2 * total / denom
        assert val.denominator == 1 and val >= 0, (mu, val)
        if val:
            mult[mu] = int(val)
    return mult


def weight_system(d: RootDatum, coeffs: Sequence[int],
                  dim_cap: int = DEFAULT_DIM_CAP) -> WeightSystem:
    """All weights of the irreducible module with the given highest weight."""
    coeffs = _check_highest(d, coeffs)
    dim = weyl_dim(d, coeffs)
    if dim > dim_cap:
        raise ModuleTooLarge(f"module dimension {dim} exceeds cap {dim_cap}")
    entries: Dict[QVec, int] = {}
    for mu, m in dominant_multiplicities(d, coeffs).items():
        for nu in weyl_orbit_set(d, [mu]):
            entries[nu] = m
    return WeightSystem(d, coeffs, dict(sorted(entries.items())))


def weight_sum(ws: WeightSystem) -> QVec:
    out = zero(ws.datum.ambient_dim)
    for mu, m in ws.entries.items():
        out = add(out, scale(m, mu))
    return out
