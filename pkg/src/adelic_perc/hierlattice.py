"""The hierarchical lattice H^N_L: a direct sum of copies of (Z/L)^N with the
ultrametric L^h, h the last index at which two points differ (0-based)."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .arith_ff import BudgetError, FqField, Poly, enumeration_budget
from .magnitude import ExactMagnitude


@dataclass(frozen=True)
class HierParams:
    L: int
    N: int = 1

    def __post_init__(self):
        if self.L < 2 or self.N < 1:
            raise ValueError(f"need L >= 2 and N >= 1, got L={self.L}, N={self.N}")

    @property
    def block_count(self) -> int:
        """Number of distinct blocks, L^N."""
        return self.L**self.N


@dataclass(frozen=True)
class HierPoint:
    """Finitely supported point; ``blocks[i]`` is the i-th element of (Z/L)^N."""

    params: HierParams
    blocks: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        L, N = self.params.L, self.params.N
        blocks = []
        for blk in self.blocks:
            blk = (blk,) if isinstance(blk, int) else tuple(blk)
            if len(blk) != N:
                raise ValueError(f"block {blk} must have {N} entries")
            if any(not 0 <= c < L for c in blk):
                raise ValueError(f"block {blk} has entries outside Z/{L}")
            blocks.append(blk)
        zero = (0,) * N
        while blocks and blocks[-1] == zero:
            blocks.pop()
        object.__setattr__(self, "blocks", tuple(blocks))

    def is_zero(self) -> bool:
        return not self.blocks

    def block(self, i: int) -> tuple[int, ...]:
        return self.blocks[i] if i < len(self.blocks) else (0,) * self.params.N

    def to_text(self) -> str:
        return ",".join(";".join(str(c) for c in blk) for blk in self.blocks)

    @classmethod
    def from_text(cls, params: HierParams, text: str) -> "HierPoint":
        """Blocks separated by ",", entries within a block by ";"; short blocks are zero-padded."""
        text = text.strip()
        if not text:
            return cls(params)
        blocks = []
        for part in text.split(","):
            entries = [int(c) for c in part.split(";")]
            if len(entries) > params.N:
                raise ValueError(f"block {part!r} has more than N={params.N} entries")
            blocks.append(tuple(entries + [0] * (params.N - len(entries))))
        return cls(params, tuple(blocks))

    def to_code(self) -> int:
        """Integer code sum_i digit(block_i) * (L^N)^i; a bijection onto N."""
        base = self.params.block_count
        return sum(_block_digit(blk, self.params.L) * base**i for i, blk in enumerate(self.blocks))

    @classmethod
    def from_code(cls, params: HierParams, code: int) -> "HierPoint":
        base = params.block_count
        blocks = []
        while code:
            code, d = divmod(code, base)
            blocks.append(_digit_block(d, params))
        return cls(params, tuple(blocks))

    def __add__(self, other: "HierPoint") -> "HierPoint":
        return group_op(self, other, "add")

    def __sub__(self, other: "HierPoint") -> "HierPoint":
        return group_op(self, other, "sub")

    def __str__(self):
        return "(" + self.to_text() + ")"


def _block_digit(blk: tuple[int, ...], L: int) -> int:
    return sum(c * L**i for i, c in enumerate(blk))


def _digit_block(d: int, params: HierParams) -> tuple[int, ...]:
    return tuple((d // params.L**i) % params.L for i in range(params.N))


def group_op(a: HierPoint, b: HierPoint, op: str = "add") -> HierPoint:
    """Blockwise addition or subtraction mod L, with no carries."""
    if a.params != b.params:
        raise ValueError(f"mismatched parameters {a.params} vs {b.params}")
    if op not in ("add", "sub"):
        raise ValueError(f"unknown op {op!r}")
    L = a.params.L
    sign = 1 if op == "add" else -1
    n = max(len(a.blocks), len(b.blocks))
    blocks = tuple(
        tuple((x + sign * y) % L for x, y in zip(a.block(i), b.block(i))) for i in range(n)
    )
    return HierPoint(a.params, blocks)


def h_index(a: HierPoint, b: HierPoint) -> int | None:
    """Largest 0-based index where a and b differ; None if they are equal."""
    if a.params != b.params:
        raise ValueError(f"mismatched parameters {a.params} vs {b.params}")
    for i in range(max(len(a.blocks), len(b.blocks)) - 1, -1, -1):
        if a.block(i) != b.block(i):
            return i
    return None


def ultrametric(a: HierPoint, b: HierPoint) -> ExactMagnitude | int:
    """L^h(a, b), or 0 when a == b."""
    h = h_index(a, b)
    return 0 if h is None else ExactMagnitude(a.params.L, h)


def poly_iso(f: Poly) -> HierPoint:
    """F_q[t] -> H^1_q, coefficient i to block i (field elements are already 0..q-1)."""
    return HierPoint(HierParams(f.field.q, 1), tuple((c,) for c in f.coeffs))


def poly_iso_inverse(x: HierPoint, field: FqField) -> Poly:
    if x.params != HierParams(field.q, 1):
        raise ValueError(f"H^{x.params.N}_{x.params.L} is not isomorphic to {field}[t] this way")
    return Poly(field, tuple(blk[0] for blk in x.blocks))


def reduce_dimension(x: HierPoint) -> HierPoint:
    """H^N_L -> H^1_{L^N}: each block becomes one base-L digit sum a_i L^i."""
    L, N = x.params.L, x.params.N
    if L**N > 2**64:
        raise OverflowError(f"L^N = {L}^{N} exceeds 2^64")
    return HierPoint(HierParams(L**N, 1), tuple((_block_digit(blk, L),) for blk in x.blocks))


def enumerate_ball(params: HierParams, max_index: int, budget: int | None = None) -> list[HierPoint]:
    """All points supported on indices < max_index, in increasing ``to_code`` order."""
    if max_index < 0:
        raise ValueError("max_index must be >= 0")
    budget = enumeration_budget() if budget is None else budget
    count = params.block_count**max_index
    if count > budget:
        raise BudgetError(f"{count} points exceed budget {budget}")
    return [HierPoint.from_code(params, c) for c in range(count)]


def level_count(params: HierParams, h: int) -> int:
    """Number of points at distance exactly L^h from the origin."""
    B = params.block_count
    return (B - 1) * B**h


def random_point(params: HierParams, max_index: int, rng: random.Random) -> HierPoint:
    return HierPoint.from_code(params, rng.randrange(params.block_count**max_index))
