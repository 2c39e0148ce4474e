"""Generalized superballs: block gauges, parsing, Minkowski functional, integer minima."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    DomainError,
    FormatError,
    InvalidGauge,
    PartitionError,
    ResourceLimit,
)

GAUGE_ARITY_LIMIT = 8
BISECT_REL_TOL = 1e-12
BISECT_MAX_ITER = 200
PSD_PIVOT_TOL = 1e-12


@dataclass(frozen=True)
class WeightedLq:
    """f(x) = scale * (sum_i w_i |x_i|^q)^(1/q), q >= 1, w_i > 0, scale > 0."""

    q: float
    weights: tuple[float, ...]
    scale: float = 1.0

    def __post_init__(self):
        if self.q < 1:
            raise InvalidGauge(f"q = {self.q} < 1")
        if self.scale <= 0:
            raise InvalidGauge("scale must be positive")
        if not self.weights or any(w <= 0 for w in self.weights):
            raise InvalidGauge("weights must be positive")

    @property
    def arity(self) -> int:
        return len(self.weights)

    def value(self, x: Sequence[float]) -> float:
        s = sum(w * abs(v) ** self.q for w, v in zip(self.weights, x))
        return self.scale * s ** (1.0 / self.q)

    def value_np(self, X: np.ndarray) -> np.ndarray:
        s = np.abs(X) ** self.q @ np.asarray(self.weights)
        return self.scale * s ** (1.0 / self.q)

    def exact_key(self, nums: Sequence[int]):
        """Exact Fraction key monotone in f over integer numerators, or None."""
        if self.q != int(self.q):
            return None
        q = int(self.q)
        return sum(Fraction(w) * abs(z) ** q for w, z in zip(self.weights, nums))

    def box_radius(self) -> float:
        return max(1.0 / (self.scale * w ** (1.0 / self.q)) for w in self.weights)

    def unit_values(self) -> list[float]:
        return [self.scale * w ** (1.0 / self.q) for w in self.weights]

    def monotonicity_witness(self, pivot: int):
        return None  # each term is nonnegative and vanishes at a = 0


@dataclass(frozen=True)
class MaxNorm:
    """f(x) = max_i w_i |x_i|, w_i > 0."""

    weights: tuple[float, ...]

    def __post_init__(self):
        if not self.weights or any(w <= 0 for w in self.weights):
            raise InvalidGauge("weights must be positive")

    @property
    def arity(self) -> int:
        return len(self.weights)

    def value(self, x: Sequence[float]) -> float:
        return max(w * abs(v) for w, v in zip(self.weights, x))

    def value_np(self, X: np.ndarray) -> np.ndarray:
        return (np.abs(X) * np.asarray(self.weights)).max(axis=1)

    def exact_key(self, nums: Sequence[int]):
        return max(Fraction(w) * abs(z) for w, z in zip(self.weights, nums))

    def box_radius(self) -> float:
        return max(1.0 / w for w in self.weights)

    def unit_values(self) -> list[float]:
        return list(self.weights)

    def monotonicity_witness(self, pivot: int):
        return None  # the max over added coordinates is minimized at a = 0


def _check_spd(Q: tuple[tuple[float, ...], ...]) -> None:
    """Symmetric positive-definite check via Cholesky pivots (tolerance 1e-12)."""
    k = len(Q)
    if any(len(row) != k for row in Q):
        raise InvalidGauge("Q must be square")
    for i in range(k):
        for j in range(i):
            if abs(Q[i][j] - Q[j][i]) > PSD_PIVOT_TOL * max(1.0, abs(Q[i][j])):
                raise InvalidGauge("Q must be symmetric")
    L = [[0.0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1):
            s = Q[i][j] - sum(L[i][m] * L[j][m] for m in range(j))
            if i == j:
                if s <= PSD_PIVOT_TOL:
                    raise InvalidGauge(f"Q is not positive definite (pivot {s:.3e})")
                L[i][i] = math.sqrt(s)
            else:
                L[i][j] = s / L[j][j]


@dataclass(frozen=True)
class QuadFormSqrt:
    """f(x) = sqrt(x^T Q x) for a symmetric positive-definite Q."""

    Q: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        _check_spd(self.Q)

    @property
    def arity(self) -> int:
        return len(self.Q)

    def value(self, x: Sequence[float]) -> float:
        k = self.arity
        s = 0.0
        for i in range(k):
            for j in range(k):
                s += x[i] * self.Q[i][j] * x[j]
        return math.sqrt(max(s, 0.0))

    def value_np(self, X: np.ndarray) -> np.ndarray:
        Q = np.asarray(self.Q)
        return np.sqrt(np.maximum(np.einsum("ri,ij,rj->r", X, Q, X), 0.0))

    def exact_key(self, nums: Sequence[int]):
        k = self.arity
        s = Fraction(0)
        for i in range(k):
            for j in range(k):
                s += Fraction(self.Q[i][j]) * nums[i] * nums[j]
        return s

    def box_radius(self) -> float:
        inv = np.linalg.inv(np.asarray(self.Q))
        return float(np.sqrt(np.diag(inv).max()))

    def unit_values(self) -> list[float]:
        return [math.sqrt(self.Q[i][i]) for i in range(self.arity)]

    def monotonicity_witness(self, pivot: int):
        """Schur-complement minimum of Q(1, a) over a; witness a* if below Q_pp."""
        k = self.arity
        if k == 1:
            return None
        rest = [i for i in range(k) if i != pivot]
        Q = np.asarray(self.Q)
        Qrr = Q[np.ix_(rest, rest)]
        qr = Q[rest, pivot]
        a_star = -np.linalg.solve(Qrr, qr)
        schur = float(Q[pivot, pivot] - qr @ np.linalg.solve(Qrr, qr))
        if schur >= Q[pivot, pivot] - PSD_PIVOT_TOL * max(1.0, Q[pivot, pivot]):
            return None
        witness = [0.0] * k
        witness[pivot] = 1.0
        for i, a in zip(rest, a_star):
            witness[i] = float(a)
        return tuple(witness)


BlockGauge = WeightedLq | MaxNorm | QuadFormSqrt


@dataclass(frozen=True)
class Block:
    coords: tuple[int, ...]
    gauge: BlockGauge
    p: float

    def __post_init__(self):
        if self.p < 1:
            raise InvalidGauge(f"block exponent p = {self.p} < 1")
        if len(self.coords) != self.gauge.arity:
            raise FormatError(
                f"block has {len(self.coords)} coords but gauge arity {self.gauge.arity}"
            )


@dataclass(frozen=True)
class BodySpec:
    """A generalized superball: sum_j f_j(x_Sj)^(p_j) <= 1 over a coordinate partition."""

    n: int
    blocks: tuple[Block, ...]

    def __post_init__(self):
        seen: set[int] = set()
        for blk in self.blocks:
            for c in blk.coords:
                if c < 0 or c >= self.n:
                    raise PartitionError(f"coordinate {c} outside 0..{self.n - 1}")
                if c in seen:
                    raise PartitionError(f"coordinate {c} used by more than one block")
                seen.add(c)
        if len(seen) != self.n:
            missing = sorted(set(range(self.n)) - seen)
            raise PartitionError(f"coordinates not covered by any block: {missing}")

    @property
    def common_p(self) -> float | None:
        ps = {blk.p for blk in self.blocks}
        return ps.pop() if len(ps) == 1 else None

    @property
    def is_pure_lp(self) -> bool:
        """All singleton |.| blocks with one shared exponent."""
        return self.common_p is not None and all(
            len(b.coords) == 1
            and isinstance(b.gauge, WeightedLq)
            and b.gauge.weights == (1.0,)
            and b.gauge.scale == 1.0
            for b in self.blocks
        )


def lp_body(n: int, p: float) -> BodySpec:
    """The l_p ball as n singleton blocks with f = |.| and exponent p."""
    if p < 1:
        raise InvalidGauge(f"p = {p} < 1")
    one = WeightedLq(q=1.0, weights=(1.0,))
    return BodySpec(n=n, blocks=tuple(Block((i,), one, p) for i in range(n)))


def body_functional(spec: BodySpec, x: Sequence[float]) -> float:
    """G(x) = sum over blocks of f_j(x_Sj)^(p_j)."""
    if len(x) != spec.n:
        raise FormatError(f"vector has dim {len(x)}, body has dim {spec.n}")
    return sum(
        blk.gauge.value([x[c] for c in blk.coords]) ** blk.p for blk in spec.blocks
    )


def gauge_from_block_values(values: Sequence[float], exponents: Sequence[float]) -> float:
    """Solve sum_j a_j * lam^(-p_j) = 1 for lam, given a_j = f_j(x_j)^(p_j) >= 0.

    Closed form lam = (sum a_j)^(1/p) when all exponents are equal; otherwise
    bisection (the left side is strictly decreasing in lam).
    """
    total = sum(values)
    if total == 0.0:
        return 0.0
    ps = [p for a, p in zip(values, exponents) if a > 0.0]
    if len(set(ps)) == 1:
        return total ** (1.0 / ps[0])
    p_min = min(ps)

    def g(lam: float) -> float:
        return sum(a * lam ** -p for a, p in zip(values, exponents) if a > 0.0)

    hi = total ** (1.0 / p_min) + 1.0
    lo = hi * 2.2e-16
    for _ in range(BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if g(mid) > 1.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= BISECT_REL_TOL * hi:
            break
    return 0.5 * (lo + hi)


def gauge(spec: BodySpec, x: Sequence[float], method: str = "auto") -> float:
    """Minkowski functional of x: the unique lam > 0 with G(x/lam) = 1 (0 at x = 0).

    method: 'auto' uses the closed form when all block exponents coincide,
    'closed' forces it, 'bisect' forces bisection.
    """
    if len(x) != spec.n:
        raise FormatError(f"vector has dim {len(x)}, body has dim {spec.n}")
    values = [
        blk.gauge.value([x[c] for c in blk.coords]) ** blk.p for blk in spec.blocks
    ]
    exponents = [blk.p for blk in spec.blocks]
    total = sum(values)
    if total == 0.0:
        return 0.0
    if method == "closed" or (method == "auto" and spec.common_p is not None):
        p = spec.common_p
        if p is None:
            raise FormatError("closed form requires a common block exponent")
        return total ** (1.0 / p)
    if method in ("auto", "bisect"):
        return gauge_from_block_values(values, exponents)
    raise FormatError(f"unknown gauge method {method!r}")


def check_monotonicity(block_gauge: BlockGauge, pivot: int):
    """None if f(e_pivot) minimizes f over {x_pivot = 1}; else the minimizing witness."""
    if pivot < 0 or pivot >= block_gauge.arity:
        raise FormatError(f"pivot {pivot} outside gauge arity {block_gauge.arity}")
    return block_gauge.monotonicity_witness(pivot)


class IntegerMin(NamedTuple):
    value: float
    witnesses: list[tuple[int, ...]]


def min_integer_gauge(block_gauge: BlockGauge) -> IntegerMin:
    """rho = min f over nonzero integer points, with the full attaining set.

    Enumerates the box |z|_inf <= ceil(R*u) where u = min_i f(e_i) and R bounds
    coordinates over {f <= 1}; f(z) >= |z|_inf / R makes the box exhaustive.
    Ties are resolved with exact keys when the gauge admits them.
    """
    k = block_gauge.arity
    if k > GAUGE_ARITY_LIMIT:
        raise ResourceLimit(f"gauge arity {k} > {GAUGE_ARITY_LIMIT}")
    u = min(block_gauge.unit_values())
    radius = math.ceil(block_gauge.box_radius() * u + 1e-12)
    rng = np.arange(-radius, radius + 1)
    mesh = np.stack(np.meshgrid(*([rng] * k), indexing="ij"), axis=-1).reshape(-1, k)
    mesh = mesh[np.any(mesh != 0, axis=1)]
    vals = block_gauge.value_np(mesh.astype(np.float64))
    rho = float(vals.min())
    near = mesh[vals <= rho * (1 + 1e-9)]
    keys = [block_gauge.exact_key(tuple(int(v) for v in row)) for row in near]
    if all(kk is not None for kk in keys):
        kmin = min(keys)
        wits = [tuple(int(v) for v in row) for row, kk in zip(near, keys) if kk == kmin]
        rho = block_gauge.value([float(v) for v in wits[0]])
    else:
        wits = [tuple(int(v) for v in row) for row in near]
    return IntegerMin(rho, sorted(wits))


# --- body-DSL parsing ---------------------------------------------------------
#
#   body ::= line+
#   line ::= "block" "[" index ("," index)* "]" kind params "p=" real
#   kind ::= "lq" "q=" real "w=[" reals "]" ["scale=" real]
#          | "max" "w=[" reals "]"
#          | "quad" "Q=[[" rows "]]"
#
# Indices are 1-based in files, 0-based internally. '#' starts a comment.

_BLOCK_RE = re.compile(
    r"^block\s*\[(?P<coords>[0-9,\s]+)\]\s*(?P<kind>lq|max|quad)\s*(?P<params>.*?)\s*p\s*=\s*(?P<p>\S+)$"
)


def _parse_reals(text: str) -> tuple[float, ...]:
    vals = tuple(float(v) for v in text.split(",") if v.strip())
    if not vals:
        raise FormatError("empty number list")
    return vals


def _parse_params(kind: str, text: str) -> BlockGauge:
    def grab(name: str, required: bool = True) -> str | None:
        m = re.search(rf"{name}\s*=\s*(\[\[.*?\]\]|\[.*?\]|\S+)", text)
        if not m:
            if required:
                raise FormatError(f"missing {name}= in block params {text!r}")
            return None
        return m.group(1)

    if kind == "lq":
        q = float(grab("q"))
        w = _parse_reals(grab("w").strip("[]"))
        scale_text = grab("scale", required=False)
        scale = float(scale_text) if scale_text else 1.0
        return WeightedLq(q=q, weights=w, scale=scale)
    if kind == "max":
        w = _parse_reals(grab("w").strip("[]"))
        return MaxNorm(weights=w)
    if kind == "quad":
        body = grab("Q")
        if not (body.startswith("[[") and body.endswith("]]")):
            raise FormatError(f"Q must look like [[...],[...]], got {body!r}")
        rows = tuple(
            _parse_reals(chunk) for chunk in body[2:-2].split("],[")
        )
        return QuadFormSqrt(Q=rows)
    raise FormatError(f"unknown gauge kind {kind!r}")


def parse_body_spec(text: str) -> BodySpec:
    """Parse the line-oriented body DSL into a validated BodySpec."""
    blocks: list[Block] = []
    max_coord = -1
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _BLOCK_RE.match(line)
        if not m:
            raise FormatError(f"line {line_no}: cannot parse {line!r}")
        coords_1based = [int(c) for c in m.group("coords").split(",") if c.strip()]
        if any(c < 1 for c in coords_1based):
            raise FormatError(f"line {line_no}: indices are 1-based")
        coords = tuple(c - 1 for c in coords_1based)
        max_coord = max(max_coord, *coords)
        try:
            p = float(m.group("p"))
        except ValueError as exc:
            raise FormatError(f"line {line_no}: bad exponent {m.group('p')!r}") from exc
        blk_gauge = _parse_params(m.group("kind"), m.group("params"))
        blocks.append(Block(coords=coords, gauge=blk_gauge, p=p))
    if not blocks:
        raise FormatError("body text contains no blocks")
    return BodySpec(n=max_coord + 1, blocks=tuple(blocks))


def load_body(path: str) -> BodySpec:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_body_spec(fh.read())


def body_from_cli(text: str, n: int) -> BodySpec:
    """CLI body argument: 'lp:P' builds an l_p ball of dimension n, else a file path."""
    if text.startswith("lp:"):
        return lp_body(n, float(text[3:]))
    spec = load_body(text)
    if spec.n != n:
        raise FormatError(f"body dimension {spec.n} does not match lattice dim {n}")
    return spec
