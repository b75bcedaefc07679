"""Difference and linear table metrics.

The LAT is produced by a fast Walsh-Hadamard transform over sign vectors,
one batched butterfly across all output masks at once; the DDT by a single
bincount over packed (difference, output) codes.  Normalized quantities are
exact Fractions with power-of-two denominators, never floats.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import CycleStructure, SBox, cycle_decomposition, is_bijective
from .util import exact_decimal

CSV_HEADER = "name,DU,MAX BIAS,DSAC,DBIC,NL"

_PARITY_CACHE: dict[int, np.ndarray] = {}


def _parity(n: int) -> np.ndarray:
    lut = _PARITY_CACHE.get(n)
    if lut is None:
        v = np.arange(1 << n, dtype=np.uint32)
        lut = (np.bitwise_count(v) & 1).astype(np.int8)
        _PARITY_CACHE[n] = lut
    return lut


def _fwht_rows(mat: np.ndarray) -> np.ndarray:
    """In-place Walsh-Hadamard butterflies along the last axis of a 2d array."""
    rows, size = mat.shape
    h = 1
    while h < size:
        mat = mat.reshape(rows, size // (2 * h), 2, h)
        top = mat[:, :, 0, :] + mat[:, :, 1, :]
        bot = mat[:, :, 0, :] - mat[:, :, 1, :]
        mat[:, :, 0, :] = top
        mat[:, :, 1, :] = bot
        mat = mat.reshape(rows, size)
        h *= 2
    return mat


def _lat_sums(table: np.ndarray, n: int) -> np.ndarray:
    """Walsh sums indexed [a][b]; row b of the transform input is the sign
    vector of x -> parity(b & S(x))."""
    size = 1 << n
    par = _parity(n)
    masks = np.arange(size, dtype=np.uint32)
    signs = 1 - 2 * par[np.bitwise_and.outer(masks, table.astype(np.uint32))].astype(np.int32)
    walsh = _fwht_rows(signs)  # walsh[b, a]
    return walsh.T.astype(np.int64)


def _ddt_counts(table: np.ndarray, n: int) -> np.ndarray:
    size = 1 << n
    x = np.arange(size)
    dy = table[np.bitwise_xor.outer(x, x)] ^ table[np.newaxis, :]
    codes = (x[:, np.newaxis] << n) | dy
    return np.bincount(codes.ravel(), minlength=size * size).reshape(size, size)


def _sac_deviations(table: np.ndarray, n: int) -> np.ndarray:
    size = 1 << n
    half = size // 2
    x = np.arange(size)
    out = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        diff = table ^ table[x ^ (1 << i)]
        for j in range(n):
            out[i, j] = abs(int(((diff >> j) & 1).sum()) - half)
    return out


def _bic_deviations(table: np.ndarray, n: int):
    """Raw |2^n/4 - joint flip count| for every input bit and output pair j<k."""
    size = 1 << n
    quarter = size // 4
    x = np.arange(size)
    pairs = [(j, k) for j in range(n) for k in range(j + 1, n)]
    out = np.empty((n, len(pairs)), dtype=np.int64)
    for i in range(n):
        diff = table ^ table[x ^ (1 << i)]
        bits = ((diff[:, np.newaxis] >> np.arange(n)) & 1).astype(np.int64)
        joint = bits.T @ bits
        out[i] = [abs(quarter - int(joint[j, k])) for j, k in pairs]
    return out, tuple(pairs)


@dataclass(frozen=True, eq=False)
class DDT:
    n: int
    counts: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.counts)
        c.flags.writeable = False
        object.__setattr__(self, "counts", c)


@dataclass(frozen=True, eq=False)
class LAT:
    n: int
    sums: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.sums)
        s.flags.writeable = False
        object.__setattr__(self, "sums", s)


@dataclass(frozen=True)
class SacReport:
    """Per (input bit, output bit) deviations from the ideal half rate."""

    deviations: np.ndarray  # raw ||A_ij| - 2^(n-1)|, shape (n, n)
    max_raw: int
    max_norm: Fraction
    mean_norm: Fraction


@dataclass(frozen=True)
class BicReport:
    deviations: np.ndarray  # raw counts, shape (n, n*(n-1)/2)
    pairs: tuple
    max_raw: int
    max_norm: Fraction


@dataclass(frozen=True)
class NonlinearityStats:
    nl: int
    component_min: int
    component_max: int
    component_avg: Fraction


@dataclass(frozen=True)
class MetricReport:
    n: int
    bijective: bool
    du: int
    du_count: int
    max_bias: int
    walsh_max: int  # raw |LAT| extreme over a != 0, b != 0
    nl: int
    nl_component_min: int
    nl_component_max: int
    nl_component_avg: Fraction
    dsac: SacReport
    dbic: BicReport
    cycles: CycleStructure | None
    degree: int | None = None
    ai: int | None = None
    ai_scope: str | None = None

    def to_dict(self) -> dict:
        """Key-ordered plain dict; rationals as exact decimal strings."""
        out = {
            "n": self.n,
            "bijective": self.bijective,
            "du": self.du,
            "du_count": self.du_count,
            "max_bias": self.max_bias,
            "walsh_max": self.walsh_max,
            "nl": self.nl,
            "nl_component_min": self.nl_component_min,
            "nl_component_max": self.nl_component_max,
            "nl_component_avg": exact_decimal(self.nl_component_avg),
            "dsac_max_raw": self.dsac.max_raw,
            "dsac_max": exact_decimal(self.dsac.max_norm),
            "dsac_mean": exact_decimal(self.dsac.mean_norm),
            "dbic_max_raw": self.dbic.max_raw,
            "dbic_max": exact_decimal(self.dbic.max_norm),
        }
        if self.cycles is not None:
            out["cycle_lengths"] = list(self.cycles.lengths)
            out["fixed_points"] = self.cycles.fixed_points
            out["opposite_fixed_points"] = self.cycles.opposite_fixed_points
        if self.degree is not None:
            out["degree"] = self.degree
        if self.ai is not None:
            out["ai"] = self.ai
            out["ai_scope"] = self.ai_scope
        return out

    def to_json(self, name: str | None = None) -> str:
        body = {"name": name, **self.to_dict()} if name else self.to_dict()
        return json.dumps(body, indent=2) + "\n"

    def csv_row(self, name: str) -> str:
        """One row in the `CSV_HEADER` column order."""
        return ",".join(
            [
                name,
                str(self.du),
                str(self.max_bias),
                exact_decimal(self.dsac.max_norm),
                exact_decimal(self.dbic.max_norm),
                str(self.nl),
            ]
        )


def compute_ddt(s: SBox) -> DDT:
    """counts[a][b] = #{x : S(x) xor S(x xor a) = b}."""
    return DDT(s.n, _ddt_counts(s.table, s.n))


def differential_uniformity(d: DDT) -> int:
    """Largest count over nonzero input differences (row 0 excluded)."""
    return int(d.counts[1:].max())


def du_max_count(d: DDT) -> int:
    du = differential_uniformity(d)
    return int(np.count_nonzero(d.counts[1:] == du))


def compute_lat(s: SBox) -> LAT:
    """sums[a][b] = sum over x of (-1)^(b.S(x) xor a.x)."""
    return LAT(s.n, _lat_sums(s.table, s.n))


def max_bias(l: LAT) -> int:
    """Half the extreme |Walsh sum| outside row/column zero.

    Entries are even, so halving is exact; the raw extreme is 2x this.
    """
    return int(np.abs(l.sums[1:, 1:]).max()) // 2


def _nl_stats(lat_sums: np.ndarray, n: int) -> NonlinearityStats:
    # per component b != 0 the max |sum| runs over every a, including a = 0
    col_max = np.abs(lat_sums[:, 1:]).max(axis=0)
    half = 1 << (n - 1)
    comps = half - col_max // 2
    return NonlinearityStats(
        nl=int(comps.min()),
        component_min=int(comps.min()),
        component_max=int(comps.max()),
        component_avg=Fraction(int(comps.sum()), comps.size),
    )


def nonlinearity(s: SBox) -> NonlinearityStats:
    """Minimum component nonlinearity, plus min/max/avg over all 2^n - 1
    nonzero output masks."""
    return _nl_stats(_lat_sums(s.table, s.n), s.n)


def dsac(s: SBox) -> SacReport:
    devs = _sac_deviations(s.table, s.n)
    size = s.size
    mx = int(devs.max())
    return SacReport(
        deviations=devs,
        max_raw=mx,
        max_norm=Fraction(mx, size),
        mean_norm=Fraction(int(devs.sum()), devs.size * size),
    )


def dbic(s: SBox) -> BicReport:
    devs, pairs = _bic_deviations(s.table, s.n)
    mx = int(devs.max())
    return BicReport(deviations=devs, pairs=pairs, max_raw=mx, max_norm=Fraction(mx, s.size))


def full_report(s: SBox, with_degree: bool = False, with_ai: bool = False) -> MetricReport:
    """Everything at once, one DDT and one LAT evaluation total.

    Degree and algebraic immunity are opt-in: they cost far more than the
    table metrics and are never wanted in bulk search loops.
    """
    ddt_counts = _ddt_counts(s.table, s.n)
    lat_sums = _lat_sums(s.table, s.n)
    du = int(ddt_counts[1:].max())
    nl_stats = _nl_stats(lat_sums, s.n)
    bijective = is_bijective(s)
    degree = ai = ai_scope = None
    if with_degree or with_ai:
        from . import anf  # deferred: anf pulls no extra deps but keeps import light

        if with_degree:
            degree = anf.algebraic_degree(s)
        if with_ai:
            ai = anf.sbox_algebraic_immunity(s)
            ai_scope = "coordinates"
    return MetricReport(
        n=s.n,
        bijective=bijective,
        du=du,
        du_count=int(np.count_nonzero(ddt_counts[1:] == du)),
        max_bias=int(np.abs(lat_sums[1:, 1:]).max()) // 2,
        walsh_max=int(np.abs(lat_sums[1:, 1:]).max()),
        nl=nl_stats.nl,
        nl_component_min=nl_stats.component_min,
        nl_component_max=nl_stats.component_max,
        nl_component_avg=nl_stats.component_avg,
        dsac=dsac(s),
        dbic=dbic(s),
        cycles=cycle_decomposition(s) if bijective else None,
        degree=degree,
        ai=ai,
        ai_scope=ai_scope,
    )


# raw integer metric values for search loops: client code compares these
# directly and rescales at the end (dsac/dbic raws are in units of 1/2^n)
RAW_METRICS = ("du", "max_bias", "dsac", "dbic", "nl")


def raw_metric_value(table: np.ndarray, n: int, metric: str) -> int:
    if metric == "du":
        return int(_ddt_counts(table, n)[1:].max())
    if metric == "max_bias":
        return int(np.abs(_lat_sums(table, n)[1:, 1:]).max()) // 2
    if metric == "nl":
        sums = _lat_sums(table, n)
        return (1 << (n - 1)) - int(np.abs(sums[:, 1:]).max()) // 2
    if metric == "dsac":
        return int(_sac_deviations(table, n).max())
    if metric == "dbic":
        return int(_bic_deviations(table, n)[0].max())
    raise ValueError(f"unknown metric {metric!r}; choose from {RAW_METRICS}")
