"""S-box containers, GF(2^n) arithmetic, power-map builders, cycle structure.

Field elements are ints whose bit i holds the coefficient of x^i, so field
addition is plain XOR and no translation layer is needed anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import IRREDUCIBLE


class SboxParseError(ValueError):
    """Raised when S-box text input cannot be parsed."""


class NotBijectiveError(ValueError):
    """Raised when an operation requires a permutation and the table is not one."""


class MonomialConditionError(ValueError):
    """Raised when a power-map family's parameter condition fails."""


MIN_N = 2
MAX_N = 12  # DDT/LAT are O(2^(2n)); 12 caps the largest table at 16M entries


@dataclass(frozen=True, eq=False)
class SBox:
    """An n-bit substitution table, not necessarily bijective.

    The table is held as a read-only int64 numpy array; mutation attempts
    raise. Equality compares width and contents.
    """

    n: int
    table: np.ndarray

    def __post_init__(self):
        if not MIN_N <= self.n <= MAX_N:
            raise ValueError(f"bit width n={self.n} outside supported range [{MIN_N}, {MAX_N}]")
        tab = np.array(self.table, dtype=np.int64, copy=True)
        size = 1 << self.n
        if tab.shape != (size,):
            raise ValueError(f"table must have exactly 2^{self.n} = {size} entries, got shape {tab.shape}")
        if tab.size and (tab.min() < 0 or tab.max() >= size):
            bad = int(np.argmax((tab < 0) | (tab >= size)))
            raise ValueError(f"table entry {int(tab[bad])} at index {bad} outside [0, {size})")
        tab.flags.writeable = False
        object.__setattr__(self, "table", tab)

    @property
    def size(self) -> int:
        return 1 << self.n

    def __len__(self):
        return self.size

    def __getitem__(self, x) -> int:
        return int(self.table[x])

    def __eq__(self, other):
        if not isinstance(other, SBox):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.n, self.table.tobytes()))

    def __repr__(self):
        head = ", ".join(str(int(v)) for v in self.table[:6])
        return f"SBox(n={self.n}, table=[{head}, ...])"


@dataclass(frozen=True)
class GFContext:
    """A binary field GF(2^n) fixed by its irreducible modulus mask."""

    n: int
    irreducible: int

    def __post_init__(self):
        if not MIN_N <= self.n <= MAX_N:
            raise ValueError(f"bit width n={self.n} outside supported range [{MIN_N}, {MAX_N}]")
        if self.irreducible.bit_length() != self.n + 1:
            raise ValueError(
                f"modulus 0x{self.irreducible:x} must have degree exactly n={self.n}"
            )

    @property
    def size(self) -> int:
        return 1 << self.n


def default_context(n: int) -> GFContext:
    """The shipped GF(2^n) context for 2 <= n <= 12 (n=8 is the AES field)."""
    try:
        return GFContext(n, IRREDUCIBLE[n])
    except KeyError:
        raise ValueError(f"no bundled irreducible polynomial for n={n}") from None


@dataclass(frozen=True)
class CycleStructure:
    cycles: tuple
    lengths: tuple
    fixed_points: int
    opposite_fixed_points: int


def parse_sbox(text: str, base: int = 10) -> SBox:
    """Parse whitespace/comma separated integer tokens into an SBox.

    Accepts base 10 or 16 (hex tokens may carry a 0x prefix).  The token
    count must be a power of two in [4, 4096]; bijectivity is not required.
    """
    if base not in (10, 16):
        raise SboxParseError(f"base must be 10 or 16, got {base}")
    tokens = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        for tok in line.replace(",", " ").split():
            tokens.append((lineno, tok))
    count = len(tokens)
    if count < 4 or count > 4096 or count & (count - 1):
        raise SboxParseError(
            f"token count {count} is not a power of two in [4, 4096]"
        )
    n = count.bit_length() - 1
    values = []
    for lineno, tok in tokens:
        body = tok[2:] if base == 16 and tok.lower().startswith("0x") else tok
        try:
            v = int(body, base)
        except ValueError:
            raise SboxParseError(
                f"line {lineno}: token {tok!r} is not a base-{base} integer"
            ) from None
        if not 0 <= v < count:
            raise SboxParseError(
                f"line {lineno}: value {v} outside [0, {count})"
            )
        values.append(v)
    return SBox(n, np.array(values, dtype=np.int64))


def format_sbox(s: SBox, per_line: int = 16) -> str:
    """Decimal 0-indexed listing, `per_line` entries per row."""
    rows = []
    for i in range(0, s.size, per_line):
        rows.append(", ".join(str(int(v)) for v in s.table[i : i + per_line]))
    return "\n".join(rows) + "\n"


def is_bijective(s: SBox) -> bool:
    return bool(np.array_equal(np.bincount(s.table, minlength=s.size), np.ones(s.size, dtype=np.int64)))


def inverse_sbox(s: SBox) -> SBox:
    if not is_bijective(s):
        raise NotBijectiveError("cannot invert a non-bijective S-box")
    inv = np.empty(s.size, dtype=np.int64)
    inv[s.table] = np.arange(s.size)
    return SBox(s.n, inv)


def hamming_distance(x: int, y: int, n: int) -> int:
    size = 1 << n
    if not (0 <= x < size and 0 <= y < size):
        raise ValueError(f"operands must lie in [0, 2^{n})")
    return (x ^ y).bit_count()


def gf_mul(ctx: GFContext, a: int, b: int) -> int:
    """Carry-less product of a and b reduced by ctx.irreducible."""
    size = ctx.size
    if not (0 <= a < size and 0 <= b < size):
        raise ValueError(f"field elements must lie in [0, {size})")
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a & size:
            a ^= ctx.irreducible
    return r


def gf_pow(ctx: GFContext, x: int, e: int) -> int:
    """Square-and-multiply. x^0 = 1 for every x by convention, 0^e = 0 for e > 0."""
    if e < 0:
        raise ValueError("exponent must be non-negative")
    if not 0 <= x < ctx.size:
        raise ValueError(f"field elements must lie in [0, {ctx.size})")
    result = 1
    base = x
    while e:
        if e & 1:
            result = gf_mul(ctx, result, base)
        base = gf_mul(ctx, base, base)
        e >>= 1
    return result


def trace(ctx: GFContext, x: int) -> int:
    """Tr(x) = x + x^2 + x^4 + ... + x^(2^(n-1)), always 0 or 1."""
    acc = 0
    cur = x
    for _ in range(ctx.n):
        acc ^= cur
        cur = gf_mul(ctx, cur, cur)
    return acc


_FAMILIES = ("gold", "kasami", "welch", "niho", "dobbertin", "inverse", "raw")


def _monomial_exponent(ctx: GFContext, family: str, i, e) -> int:
    n = ctx.n
    if family in ("gold", "kasami"):
        if i is None:
            raise MonomialConditionError(f"{family} requires parameter i")
        if i < 1:
            raise MonomialConditionError(f"{family} requires i >= 1, got i={i}")
        if math.gcd(i, n) != 1:
            raise MonomialConditionError(
                f"{family} requires gcd(i, n) = 1; gcd({i}, {n}) = {math.gcd(i, n)}"
            )
        return (1 << i) + 1 if family == "gold" else (1 << (2 * i)) - (1 << i) + 1
    if family in ("welch", "niho", "inverse"):
        if n % 2 == 0:
            raise MonomialConditionError(f"{family} requires odd n = 2t + 1, got n={n}")
        t = (n - 1) // 2
        if family == "welch":
            return (1 << t) + 3
        if family == "inverse":
            return (1 << (2 * t)) - 1
        if t % 2 == 0:
            return (1 << t) + (1 << (t // 2)) - 1
        return (1 << t) + (1 << ((3 * t + 1) // 2)) - 1
    if family == "dobbertin":
        if n % 5 != 0:
            raise MonomialConditionError(f"dobbertin requires n = 5i, got n={n}")
        k = n // 5
        return (1 << (4 * k)) + (1 << (3 * k)) + (1 << (2 * k)) + (1 << k) - 1
    if family == "raw":
        if e is None:
            raise MonomialConditionError("raw requires parameter e")
        if e < 1:
            raise MonomialConditionError(f"raw requires exponent e >= 1, got e={e}")
        return e
    raise MonomialConditionError(f"unknown family {family!r}; choose from {_FAMILIES}")


def build_monomial_sbox(ctx: GFContext, family: str, i: int | None = None, e: int | None = None) -> SBox:
    """Power map S(x) = x^e over ctx, exponent chosen by family.

    gold:      e = 2^i + 1,          gcd(i, n) = 1
    kasami:    e = 2^(2i) - 2^i + 1, gcd(i, n) = 1
    welch:     e = 2^t + 3,          n = 2t + 1
    niho:      e = 2^t + 2^(t/2) - 1 (t even) or 2^t + 2^((3t+1)/2) - 1 (t odd), n = 2t + 1
    dobbertin: e = 2^(4k) + 2^(3k) + 2^(2k) + 2^k - 1, n = 5k
    inverse:   e = 2^(2t) - 1,       n = 2t + 1
    raw:       e given directly, e >= 1

    Condition violations raise MonomialConditionError naming the condition.
    S(0) = 0 always (e >= 1 in every family).
    """
    exp = _monomial_exponent(ctx, family, i, e)
    table = np.fromiter(
        (gf_pow(ctx, x, exp) for x in range(ctx.size)), dtype=np.int64, count=ctx.size
    )
    return SBox(ctx.n, table)


def cycle_decomposition(s: SBox) -> CycleStructure:
    """Disjoint cycles of a permutation, each led by its smallest element.

    Cycles are ordered by that leading element; lengths come back as a
    sorted tuple so multiset comparisons are direct.
    """
    if not is_bijective(s):
        raise NotBijectiveError("cycle decomposition requires a permutation")
    size = s.size
    tab = s.table
    seen = bytearray(size)
    cycles = []
    for start in range(size):
        if seen[start]:
            continue
        cur = start
        cyc = []
        while not seen[cur]:
            seen[cur] = 1
            cyc.append(cur)
            cur = int(tab[cur])
        cycles.append(tuple(cyc))
    idx = np.arange(size)
    return CycleStructure(
        cycles=tuple(cycles),
        lengths=tuple(sorted(len(c) for c in cycles)),
        fixed_points=int(np.count_nonzero(tab == idx)),
        opposite_fixed_points=int(np.count_nonzero(tab == (idx ^ (size - 1)))),
    )
