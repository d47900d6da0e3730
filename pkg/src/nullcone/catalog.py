"""Simple groups acting irreducibly with a free algebra of invariants.

The classification is shipped as ``data/catalog.json``: one record per
(rank-parameterized) family, instantiated here up to a maximum rank.
Identical (type, weight) pairs arising from several lists collapse to a
single entry that remembers every list it came from.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Dict, List, NamedTuple, Optional, Tuple

from .rootsystem import RootSystemError, RootSystemType

LIST_IDS = ("i", "ii", "iii", "iv", "v")
TRDEG_CLASSES = ("zero", "one", "rank", "other")

# when one pair is listed several times, the most specific trdeg wins
_TRDEG_PRIORITY = {"one": 0, "zero": 1, "rank": 2, "other": 3}

DEFAULT_MAX_RANK = 8


@dataclass(frozen=True)
class CatalogEntry:
    type: RootSystemType
    highest: Tuple[int, ...]
    list_id: str
    trdeg_class: str
    expected_components: int = 1
    paper_dim_nullcone: Optional[int] = None
    caveat: Optional[str] = None
    also_in: Tuple[str, ...] = ()
    remark1: bool = False
    note: Optional[str] = None

    @property
    def lists(self) -> Tuple[str, ...]:
        return (self.list_id,) + self.also_in

    @property
    def label(self) -> str:
        terms = []
        for i, c in enumerate(self.highest, start=1):
            if c:
                terms.append(f"w{i}" if c == 1 else f"{c}w{i}")
        return f"({self.type}, {'+'.join(terms)})"


def catalog_path():
    return resources.files("nullcone").joinpath("data/catalog.json")


@lru_cache(maxsize=1)
def load_raw() -> dict:
    with catalog_path().open("r", encoding="utf-8") as fh:
        data = json.load(fh)
    if data.get("format") != "nullcone-catalog":
        raise ValueError("not a nullcone catalog file")
    return data


def _ranks(fam: dict, max_rank: int) -> List[int]:
    if "rank" in fam:
        return [fam["rank"]] if fam["rank"] <= max_rank else []
    ranks = range(fam["rank_min"], max_rank + 1)
    parity = fam.get("rank_parity")
    if parity == "even":
        return [r for r in ranks if r % 2 == 0]
    if parity == "odd":
        return [r for r in ranks if r % 2 == 1]
    return list(ranks)


def _weight(spec: Dict[str, int], r: int) -> Tuple[int, ...]:
    w = [0] * r
    for k, c in spec.items():
        i = r if k == "r" else int(k)
        w[i - 1] += c
    return tuple(w)


def entries(max_rank: int = DEFAULT_MAX_RANK) -> List[CatalogEntry]:
    """All catalog pairs with rank at most ``max_rank``, in file order."""
    if max_rank < 1:
        raise ValueError("max_rank must be >= 1")
    merged: Dict[Tuple[RootSystemType, Tuple[int, ...]], CatalogEntry] = {}
    for fam in load_raw()["families"]:
        for r in _ranks(fam, max_rank):
            try:
                t = RootSystemType(fam["series"], r)
            except RootSystemError:
                continue
            w = _weight(fam["weight"], r)
            rec = dict(fam, **fam.get("overrides", {}).get(str(r), {}))
            e = CatalogEntry(
                type=t,
                highest=w,
                list_id=rec["list"],
                trdeg_class=rec["trdeg_class"],
                expected_components=rec.get("expected_components", 1),
                paper_dim_nullcone=rec.get("paper_dim_nullcone"),
                caveat=rec.get("caveat"),
                remark1=bool(rec.get("remark1")),
                note=rec.get("note"),
            )
            key = (t, w)
            if key in merged:
                merged[key] = _merge(merged[key], e)
            else:
                merged[key] = e
    return list(merged.values())


def _merge(a: CatalogEntry, b: CatalogEntry) -> CatalogEntry:
    trdeg = min(a.trdeg_class, b.trdeg_class, key=_TRDEG_PRIORITY.__getitem__)
    return CatalogEntry(
        type=a.type,
        highest=a.highest,
        list_id=a.list_id,
        trdeg_class=trdeg,
        expected_components=max(a.expected_components, b.expected_components),
        paper_dim_nullcone=a.paper_dim_nullcone or b.paper_dim_nullcone,
        caveat=a.caveat or b.caveat,
        also_in=a.also_in + (b.list_id,),
        remark1=a.remark1 or b.remark1,
        note=a.note or b.note,
    )


class Expectation(NamedTuple):
    components: int
    dim_nullcone: Optional[int]
    source: Optional[str]


def expected(e: CatalogEntry, dim_module: int) -> Expectation:
    """Expected component count and, when known, nullcone dimension.

    ``source`` says where the dimension comes from: ``"trdeg"`` for the
    invariant-theoretic classes, ``"external"`` for adjoint modules (trdeg =
    rank by Chevalley restriction), ``"paper"`` for a stated value.  Values
    carrying a caveat are never returned as constraints.
    """
    if e.paper_dim_nullcone is not None and e.caveat is None:
        return Expectation(e.expected_components, e.paper_dim_nullcone, "paper")
    if e.trdeg_class == "zero":
        return Expectation(e.expected_components, dim_module, "trdeg")
    if e.trdeg_class == "one":
        return Expectation(e.expected_components, dim_module - 1, "trdeg")
    if e.trdeg_class == "rank":
        return Expectation(e.expected_components, dim_module - e.type.rank, "external")
    return Expectation(e.expected_components, None, None)


def find(series: str, rank: int, highest, max_rank: int = DEFAULT_MAX_RANK) -> Optional[CatalogEntry]:
    """The catalog entry for a pair, also matching its dual weight."""
    from .rootsystem import dual_weight, root_datum

    t = RootSystemType(series, rank)
    hw = tuple(int(c) for c in highest)
    targets = {hw, dual_weight(root_datum(series, rank), hw)}
    for e in entries(max(max_rank, rank)):
        if e.type == t and e.highest in targets:
            return e
    return None
