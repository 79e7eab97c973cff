"""Empirical side: sieve, primitive-root census by residue class, heuristic sums.

Primes are processed as numpy int64 arrays.  Every modular product stays below
p**2 < 2**63 because p <= 10**9, so no wider intermediates are needed.

p = 2 and primes dividing the numerator or denominator of g are never counted.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .arith import DomainError, format_rational, power_index, require_in_g
from .density import delta_closed, format_decimal, residues, times_artin

MAX_LIMIT = 10**9
SEGMENT = 1 << 20
CACHE_MAGIC = b"APRS1"
MIN_CHUNK = 50_000


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SieveTables:
    """Smallest-prime-factor table on [0, limit] and the primes up to limit.

    spf is uint32, so memory is 4 * (limit + 1) bytes (4 GB at the 10**9 cap).
    """

    limit: int
    spf: np.ndarray
    primes: np.ndarray

    def primes_upto(self, x: int) -> np.ndarray:
        return self.primes[: np.searchsorted(self.primes, x, side="right")]

    def pi(self, x: int) -> int:
        return int(np.searchsorted(self.primes, x, side="right"))


def _base_primes(n: int) -> np.ndarray:
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve)


def build_sieve(x: int) -> SieveTables:
    """Segmented smallest-prime-factor sieve up to x."""
    if not 2 <= x <= MAX_LIMIT:
        raise ConfigError(f"sieve limit must lie in [2, {MAX_LIMIT}], got {x}")
    spf = np.zeros(x + 1, dtype=np.uint32)
    base = _base_primes(math.isqrt(x))[::-1].tolist()
    for lo in range(0, x + 1, SEGMENT):
        hi = min(lo + SEGMENT, x + 1)
        seg = spf[lo:hi]
        # largest primes first so the smallest factor is written last
        for p in base:
            start = max(p * p, -(-lo // p) * p)
            if start < hi:
                seg[start - lo :: p] = p
    return _finish(x, spf)


def _finish(x: int, spf: np.ndarray) -> SieveTables:
    idx = np.arange(x + 1, dtype=np.uint32)
    unset = spf == 0
    unset[:2] = False
    spf[unset] = idx[unset]
    is_p = spf == idx
    is_p[:2] = False
    return SieveTables(x, spf, np.flatnonzero(is_p).astype(np.int64))


def save_sieve(tables: SieveTables, path: str | os.PathLike) -> None:
    with open(path, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(struct.pack("<Q", tables.limit))
        fh.write(tables.spf.astype("<u4", copy=False).tobytes())


def load_sieve(path: str | os.PathLike) -> SieveTables:
    data = Path(path).read_bytes()
    if data[:5] != CACHE_MAGIC:
        raise ConfigError(f"{path}: not a sieve cache (bad magic)")
    (limit,) = struct.unpack("<Q", data[5:13])
    spf = np.frombuffer(data, dtype="<u4", offset=13).astype(np.uint32)
    if spf.size != limit + 1:
        raise ConfigError(f"{path}: truncated sieve cache")
    spf[:2] = 0
    return _finish(limit, spf)


def get_sieve(x: int, cache: str | os.PathLike | None = None) -> SieveTables:
    """Build tables for x, reusing a cache file when it covers x."""
    if cache is not None and Path(cache).exists():
        try:
            tables = load_sieve(cache)
        except ConfigError:
            tables = None
        if tables is not None and tables.limit >= x:
            return tables
    tables = build_sieve(x)
    if cache is not None:
        save_sieve(tables, cache)
    return tables


# ---------------------------------------------------------------------------
# vectorised modular arithmetic

def powmod(base: np.ndarray, exp: np.ndarray, mod: np.ndarray) -> np.ndarray:
    result = np.ones_like(mod)
    b = base % mod
    e = exp.copy()
    while True:
        odd = (e & 1).astype(bool)
        result = np.where(odd, result * b % mod, result)
        e >>= 1
        if not e.any():
            return result
        b = b * b % mod


def _residue(n: int, primes: np.ndarray) -> np.ndarray:
    if -(2**63) < n < 2**63:
        return np.int64(n) % primes
    return np.array([n % p for p in primes.tolist()], dtype=np.int64)


def _g_mod(g: Fraction, primes: np.ndarray) -> np.ndarray:
    num = _residue(g.numerator, primes)
    if g.denominator == 1:
        return num
    inv = powmod(_residue(g.denominator, primes), primes - 2, primes)
    return num * inv % primes


def _prime_factor_walk(m: np.ndarray, spf: np.ndarray):
    """Yield (positions, q) for each distinct prime q of every m[i] > 1."""
    m = m.copy()
    pos = np.flatnonzero(m > 1)
    while pos.size:
        q = spf[m[pos]].astype(np.int64)
        yield pos, q
        sub = m[pos] // q
        rep = sub % q == 0
        while rep.any():
            sub[rep] //= q[rep]
            rep = sub % q == 0
        m[pos] = sub
        pos = pos[sub > 1]


def primitive_root_mask(g: Fraction, primes: np.ndarray, tables: SieveTables) -> np.ndarray:
    """Boolean mask: g generates (Z/pZ)* for each p (which must not divide g)."""
    gm = _g_mod(g, primes)
    ok = gm != 0
    for pos, q in _prime_factor_walk(primes - 1, tables.spf):
        p = primes[pos]
        ok[pos] &= powmod(gm[pos], (p - 1) // q, p) != 1
    return ok


def totient_ratio(primes: np.ndarray, tables: SieveTables) -> np.ndarray:
    """phi(p-1)/(p-1) for each p."""
    r = np.ones(primes.size, dtype=np.float64)
    for pos, q in _prime_factor_walk(primes - 1, tables.spf):
        r[pos] *= 1.0 - 1.0 / q
    return r


def is_primitive_root(g, p: int, tables: SieveTables | None = None) -> bool:
    g = Fraction(g)
    if p < 2 or (g.numerator * g.denominator) % p == 0:
        raise DomainError(f"p={p} divides g={g} or is not a prime")
    gm = g.numerator * pow(g.denominator, -1, p) % p
    m = p - 1
    while m > 1:
        if tables is not None and m <= tables.limit:
            q = int(tables.spf[m])
        else:
            q = next(d for d in range(2, m + 1) if m % d == 0)
        if pow(gm, (p - 1) // q, p) == 1:
            return False
        while m % q == 0:
            m //= q
    return True


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ResidueRecord:
    a: int
    count: int
    predicted_coeff: Fraction

    @property
    def predicted(self) -> float:
        return times_artin(self.predicted_coeff)


@dataclass(frozen=True)
class CensusReport:
    g: Fraction
    f: int
    x: int
    pi_x: int
    total_roots: int
    excluded: tuple[int, ...]
    records: tuple[ResidueRecord, ...] = field(default_factory=tuple)

    def record(self, a: int) -> ResidueRecord:
        return next(r for r in self.records if r.a == a)

    def empirical(self, a: int) -> float:
        return self.record(a).count / self.pi_x

    def to_dict(self) -> dict:
        return {
            "g": format_rational(self.g),
            "f": self.f,
            "x": self.x,
            "pi_x": self.pi_x,
            "total_roots": self.total_roots,
            "excluded": list(self.excluded),
            "normalization": "count/pi(x)",
            "residues": [
                {
                    "a": r.a,
                    "count": r.count,
                    "empirical": format(r.count / self.pi_x, ".12g"),
                    "predicted_coeff": format_rational(r.predicted_coeff),
                    "predicted": format_decimal(r.predicted_coeff),
                }
                for r in self.records
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["a", "count", "empirical", "predicted_coeff", "predicted"])
        for row in self.to_dict()["residues"]:
            w.writerow([row["a"], row["count"], row["empirical"], row["predicted_coeff"], row["predicted"]])
        return buf.getvalue()


def _candidate_primes(g: Fraction, x: int, tables: SieveTables) -> tuple[np.ndarray, tuple[int, ...]]:
    if x > tables.limit:
        raise ConfigError(f"sieve covers {tables.limit}, census asked for {x}")
    primes = tables.primes_upto(x)
    keep = (primes != 2) & (_residue(g.numerator * g.denominator, primes) != 0)
    return primes[keep], tuple(primes[~keep].tolist())


def _chunks(n: int, threads: int) -> list[slice]:
    k = max(1, min(threads, n // MIN_CHUNK))
    edges = np.linspace(0, n, k + 1).astype(int)
    return [slice(int(lo), int(hi)) for lo, hi in zip(edges[:-1], edges[1:])]


def run_census(g, f: int, x: int, tables: SieveTables | None = None, threads: int | None = None) -> CensusReport:
    """Count primes p <= x with g a primitive root, per reduced class mod f."""
    require_in_g(g)
    g = Fraction(g)
    if f < 1:
        raise DomainError(f"f must be positive, got {f}")
    if tables is None:
        tables = build_sieve(x)
    primes, excluded = _candidate_primes(g, x, tables)
    threads = threads or os.cpu_count() or 1

    def work(sl: slice) -> tuple[np.ndarray, int]:
        ps = primes[sl]
        roots = ps[primitive_root_mask(g, ps, tables)]
        return np.bincount(roots % f, minlength=f), roots.size

    parts = _chunks(primes.size, threads)
    if len(parts) == 1:
        results = [work(parts[0])]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, parts))
    by_residue = sum((r[0] for r in results), np.zeros(f, dtype=np.int64))
    total = sum(r[1] for r in results)

    records = tuple(
        ResidueRecord(a, int(by_residue[a % f]), delta_closed(a, f, g).coeff) for a in residues(f)
    )
    return CensusReport(g, f, x, tables.pi(x), int(total), excluded, records)


def heuristic_sum(g, f: int, a: int, x: int, tables: SieveTables | None = None) -> float:
    """2 * sum of phi(p-1)/(p-1) over p <= x, p = a (mod f), (g/p) = -1, (p-1, h) = 1."""
    g = Fraction(g)
    if g.denominator != 1:
        raise DomainError(f"heuristic needs an integer g, got {g}")
    if g in (-1, 0, 1):
        raise DomainError(f"heuristic needs g outside {{-1, 0, 1}}, got {g}")
    if tables is None:
        tables = build_sieve(x)
    h = power_index(g)
    primes, _ = _candidate_primes(g, x, tables)
    primes = primes[primes % f == a % f]
    if h > 1:
        primes = primes[np.gcd(primes - 1, h) == 1]
    nonres = powmod(_residue(int(g), primes), (primes - 1) // 2, primes) == primes - 1
    primes = primes[nonres]
    return 2.0 * math.fsum(totient_ratio(primes, tables).tolist())


def naive_artin_sum(x: int, tables: SieveTables | None = None) -> float:
    """sum_{p <= x} phi(p-1)/(p-1)."""
    if tables is None:
        tables = build_sieve(x)
    return math.fsum(totient_ratio(tables.primes_upto(x), tables).tolist())
