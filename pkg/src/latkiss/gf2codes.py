"""Exact GF(2) linear code arithmetic on int bitsets (LSB = coordinate 0)."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DegenerateCode, FormatError, ResourceLimit

# Exhaustive 2^k sweeps only; this guard keeps them at desk scale.
MAX_SWEEP_DIM = 28


def mask_of(bits: Sequence[int] | str) -> int:
    """Pack bits (sequence of 0/1 or '01' string) into an int, LSB = index 0."""
    m = 0
    for i, b in enumerate(bits):
        v = int(b)
        if v not in (0, 1):
            raise FormatError(f"bit value {b!r} is not 0/1")
        if v:
            m |= 1 << i
    return m


def bits_of(mask: int, n: int) -> tuple[int, ...]:
    return tuple((mask >> i) & 1 for i in range(n))


def mask_str(mask: int, n: int) -> str:
    return "".join("1" if (mask >> i) & 1 else "0" for i in range(n))


def weight(mask: int) -> int:
    return mask.bit_count()


def rref(rows: list[int], n: int) -> list[int]:
    """Reduced row-echelon form over GF(2); returns nonzero rows, pivots ascending."""
    work = [r for r in rows if r]
    out: list[int] = []
    for col in range(n):
        bit = 1 << col
        pivot = next((r for r in work if r & bit), None)
        if pivot is None:
            continue
        work = [r ^ pivot if r & bit else r for r in work if r != pivot]
        out = [r ^ pivot if r & bit else r for r in out]
        out.append(pivot)
        work = [r for r in work if r]
    return sorted(out, key=lambda r: r & -r)


@dataclass
class BinaryCode:
    """A binary [n, k] linear code with generator rows in RREF.

    d and C_d are computed exhaustively on first use and cached; both caches,
    once filled, are exact (no probabilistic estimation anywhere).
    """

    n: int
    k: int
    gen_rows: list[int]
    d_cache: int | None = None
    min_weight_set_cache: list[int] | None = field(default=None, repr=False)

    def codewords(self) -> Iterable[int]:
        """All 2^k codewords via a Gray-code sweep (includes 0)."""
        cw = 0
        yield cw
        for m in range(1, 1 << self.k):
            cw ^= self.gen_rows[(m & -m).bit_length() - 1]
            yield cw

    def contains(self, mask: int) -> bool:
        r = mask
        for row in self.gen_rows:
            low = row & -row
            if r & low:
                r ^= row
        return r == 0


def make_code(rows: Iterable[Sequence[int] | str | int], n: int | None = None) -> BinaryCode:
    """Build a code from generator rows (bit strings, bit sequences, or masks + n)."""
    masks: list[int] = []
    length = n
    for row in rows:
        if isinstance(row, int):
            if length is None:
                raise FormatError("integer rows require an explicit length n")
            masks.append(row)
            continue
        if length is None:
            length = len(row)
        elif len(row) != length:
            raise FormatError(f"row length {len(row)} != {length}")
        masks.append(mask_of(row))
    if not masks or length is None:
        raise FormatError("no generator rows given")
    if any(m >> length for m in masks):
        raise FormatError("row mask wider than declared length")
    reduced = rref(masks, length)
    if not reduced:
        raise DegenerateCode("generator rows span only 0")
    return BinaryCode(n=length, k=len(reduced), gen_rows=reduced)


def _sweep_guard(code: BinaryCode) -> None:
    if code.k > MAX_SWEEP_DIM:
        raise ResourceLimit(
            f"codeword sweep needs 2^{code.k} > 2^{MAX_SWEEP_DIM} evaluations",
            size=1 << code.k,
        )


def min_distance(code: BinaryCode) -> int:
    """Exact minimum distance by exhaustive enumeration."""
    if code.d_cache is None:
        _sweep_guard(code)
        code.d_cache = min(weight(c) for c in code.codewords() if c)
    return code.d_cache


def min_weight_codewords(code: BinaryCode) -> list[int]:
    """The set C_d of all minimum-weight codewords, sorted ascending as masks."""
    if code.min_weight_set_cache is None:
        d = min_distance(code)
        code.min_weight_set_cache = sorted(
            c for c in code.codewords() if c and weight(c) == d
        )
    return list(code.min_weight_set_cache)


def lengthen(code: BinaryCode, positions: Sequence[int], n: int) -> BinaryCode:
    """Embed the code into length n, placing bit i at positions[i], zeros elsewhere.

    Weights are unchanged, so d, A_d and C_d carry over.
    """
    if len(positions) != code.n:
        raise FormatError(f"need {code.n} target positions, got {len(positions)}")
    if len(set(positions)) != len(positions):
        raise FormatError("duplicate target positions")
    if any(p < 0 or p >= n for p in positions):
        raise FormatError("target position out of range")

    def embed(mask: int) -> int:
        out = 0
        for i, p in enumerate(positions):
            if (mask >> i) & 1:
                out |= 1 << p
        return out

    new = make_code([embed(r) for r in code.gen_rows], n=n)
    new.d_cache = code.d_cache
    if code.min_weight_set_cache is not None:
        new.min_weight_set_cache = sorted(embed(c) for c in code.min_weight_set_cache)
    return new


# --- named code families -----------------------------------------------------
# Generator matrices are fixed canonical constants; tests re-derive d and A_d
# by exhaustive enumeration rather than trusting tables.

_GOLAY_B = [
    "110111000101",
    "101110001011",
    "011100010111",
    "111000101101",
    "110001011011",
    "100010110111",
    "000101101111",
    "001011011101",
    "010110111001",
    "101101110001",
    "011011100011",
    "111111111110",
]


def _repetition(n: int) -> BinaryCode:
    if n < 1:
        raise FormatError("repetition length must be >= 1")
    return make_code(["1" * n])


def _parity(n: int) -> BinaryCode:
    if n < 2:
        raise FormatError("parity length must be >= 2")
    rows = []
    for i in range(n - 1):
        bits = [0] * n
        bits[i] = bits[i + 1] = 1
        rows.append(bits)
    return make_code(rows)


def _reed_muller(r: int, m: int) -> BinaryCode:
    if not (0 <= r <= m) or m < 1:
        raise FormatError(f"reed_muller needs 0 <= r <= m, got ({r},{m})")
    n = 1 << m
    xs = [mask_of([(j >> i) & 1 for j in range(n)]) for i in range(m)]
    rows = [(1 << n) - 1]
    for deg in range(1, r + 1):
        for comb in itertools.combinations(range(m), deg):
            w = (1 << n) - 1
            for i in comb:
                w &= xs[i]
            rows.append(w)
    return make_code(rows, n=n)


def _golay24() -> BinaryCode:
    rows = []
    for i in range(12):
        rows.append((1 << i) | (mask_of(_GOLAY_B[i]) << 12))
    return make_code(rows, n=24)


_NAME_RE = re.compile(r"^\s*([a-zA-Z_][a-zA-Z_0-9]*)\s*(?:\(\s*([0-9,\s]*)\))?\s*$")


def named_code(name: str) -> BinaryCode:
    """Build a canonical code from a name like 'golay24' or 'reed_muller(1,4)'."""
    m = _NAME_RE.match(name)
    if not m:
        raise FormatError(f"cannot parse code name {name!r}")
    base, arg_text = m.group(1).lower(), m.group(2)
    args = [int(a) for a in arg_text.split(",")] if arg_text else []
    try:
        if base == "repetition":
            (n,) = args
            return _repetition(n)
        if base == "parity":
            (n,) = args
            return _parity(n)
        if base == "hamming8":
            return _reed_muller(1, 3)
        if base in ("reed_muller", "rm"):
            r, mm = args
            return _reed_muller(r, mm)
        if base == "golay24":
            return _golay24()
    except ValueError as exc:
        raise FormatError(f"bad arguments for code family {base!r}: {args}") from exc
    raise FormatError(f"unknown code family {base!r}")


def load_code(path: str) -> BinaryCode:
    """Read a generator matrix file: one row per line of '0'/'1' characters."""
    rows = []
    with open(path, "r", encoding="ascii") as fh:
        for line_no, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            if set(s) - {"0", "1"}:
                raise FormatError(f"{path}:{line_no}: row is not a 0/1 string")
            rows.append(s)
    return make_code(rows)


def code_summary(code: BinaryCode) -> dict:
    """n, k, d, A_d as a flat dict (forces the exhaustive sweep)."""
    cd = min_weight_codewords(code)
    return {"n": code.n, "k": code.k, "d": code.d_cache, "A_d": len(cd)}
