"""Exact partial-sum engine for the divisor ratio over digit classes.

One pass accumulates, as exact scaled integers, the total sum S, the
restricted sums S_A / S_B, the complement sum T_nonA and the complement
count; independent passes over multiples of q produce the twisted series
sum_{n<=m} ratio(q n) at two stop conventions per checkpoint x: m = x//q
(used by the five-multiple split identity) and m = x (used by the
linear-main-term checks).  Because every reduction is integer addition,
results are bit-identical for any segmentation or worker count.
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import digitset
from .multiplicative import (
    SCALE_EXP,
    DyadicValue,
    segment_ratio_numerators,
    sieve_segment,
)
from .primes import is_prime

MAX_LIMIT = 10**9
TWISTED_VALUE_BUDGET = 10**10
CSV_HEADER = ["x", "scale_exp", "S", "S_A", "S_B", "T_nonA", "count_nonA", "q", "twisted_limit", "twisted"]
# total numerators stay far below 2^127 for every permitted limit; the guard
# is kept anyway per the no-silent-wrap policy
NUMERATOR_CAP = 1 << 127


class CheckpointFormatError(ValueError):
    """Raised for unreadable or inconsistent checkpoint files."""


class EngineInvariantError(AssertionError):
    """Raised when an exact internal identity fails (never expected)."""


@dataclass(frozen=True)
class Checkpoint:
    """Exact partial-sum snapshot at threshold x.

    twisted maps q -> {stop m -> sum_{n<=m} ratio(q n)}; for each emitted
    checkpoint both m = x//q and m = x are present.
    """

    x: int
    S: DyadicValue
    S_A: DyadicValue
    S_B: DyadicValue
    T_nonA: DyadicValue
    count_nonA: int
    twisted: dict[int, dict[int, DyadicValue]] = field(default_factory=dict)


@dataclass
class EngineConfig:
    limit: int
    segment_size: int = 1 << 20
    refine_factor2: bool = True
    q_list: tuple[int, ...] = (1, 2, 3, 5, 7)
    thread_count: int = 1
    resume_path: str | None = None

    def __post_init__(self):
        if not 1 <= self.limit <= MAX_LIMIT:
            raise ValueError(f"limit must be in [1, {MAX_LIMIT}] (got {self.limit})")
        if self.segment_size < 1:
            raise ValueError("segment_size must be >= 1")
        if self.thread_count < 1:
            raise ValueError("thread_count must be >= 1")
        qs = tuple(sorted(set(int(q) for q in self.q_list)))
        if not qs:
            raise ValueError("q_list must not be empty")
        for q in qs:
            if q != 1 and not is_prime(q):
                raise ValueError(f"q values must be 1 or prime (got {q})")
        self.q_list = qs


def checkpoint_schedule(limit: int, refine_factor2: bool = True) -> list[int]:
    """Geometric thresholds: powers of ten, their doubles, and the limit."""
    points = {limit}
    decade = 10
    while decade <= limit:
        points.add(decade)
        if refine_factor2 and 2 * decade <= limit:
            points.add(2 * decade)
        decade *= 10
    return sorted(points)


def _segment_ranges(lo_n: int, hi_n: int, segment_size: int):
    """Half-open [a, b) segments covering the integer range (lo_n, hi_n]."""
    a = lo_n + 1
    while a <= hi_n:
        b = min(a + segment_size, hi_n + 1)
        yield a, b
        a = b


def _segment_class_sums(args) -> tuple[int, int, int, int, int]:
    """(S, S_A, S_B, T_nonA, count_nonA) numerator sums over [lo, hi)."""
    lo, hi = args
    table = sieve_segment(lo, hi)
    num = segment_ratio_numerators(table)
    n = np.arange(lo, hi, dtype=np.int64)
    mult5 = n % 5 == 0
    has05 = np.zeros(hi - lo, dtype=bool)
    v = n.copy()
    while True:
        live = v > 0
        if not live.any():
            break
        dig = v % 10
        has05 |= ((dig == 0) | (dig == 5)) & live
        v //= 10
    in_a = mult5 | has05
    s_all = int(num.sum())
    s_a = int(num[in_a].sum())
    s_b = int(num[has05 & ~mult5].sum())
    t_non = int(num[~in_a].sum())
    cnt = int((~in_a).sum())
    return s_all, s_a, s_b, t_non, cnt


def _multiple_sum_segment(args) -> int:
    """Numerator sum of ratio(q n) for n in (a, b]."""
    q, a, b = args
    table = sieve_segment(q * a + 1, q * b + 1)
    num = segment_ratio_numerators(table)
    return int(num[q - 1 :: q].sum())


def _pool_map(pool: ThreadPoolExecutor | None, fn, jobs):
    if pool is None:
        return [fn(j) for j in jobs]
    return list(pool.map(fn, jobs))


def twisted_sum(q: int, limit: int, segment_size: int = 1 << 20) -> DyadicValue:
    """Exact sum_{n<=limit} ratio(q n), sieved over multiples of q.

    Small limits go through per-n factorization instead of the sieve.
    """
    if q != 1 and not is_prime(q):
        raise ValueError(f"q must be 1 or prime (got {q})")
    if limit < 0:
        raise ValueError("limit must be >= 0")
    if q * limit > TWISTED_VALUE_BUDGET:
        raise ValueError(f"q*limit exceeds sieve budget {TWISTED_VALUE_BUDGET}")
    if limit == 0:
        return DyadicValue.zero()
    if limit <= 2000:
        from .multiplicative import divisor_ratio

        total = DyadicValue.zero()
        for n in range(1, limit + 1):
            total = total + divisor_ratio(q * n)
        return total
    chunk = max(1, segment_size // q)
    total = 0
    for a, b in _segment_ranges(0, limit, chunk):
        total += _multiple_sum_segment((q, a - 1, b - 1))
    return DyadicValue(total)


def _load_resume_state(config: EngineConfig, schedule: list[int]):
    """Prior checkpoints plus twisted anchors, validated against the schedule."""
    prior = load_checkpoints(config.resume_path)
    prior = [cp for cp in prior if cp.x <= config.limit]
    anchors: dict[int, dict[int, int]] = {q: {0: 0} for q in config.q_list}
    if not prior:
        return [], anchors, 0
    sched = set(schedule)
    for cp in prior:
        if cp.x not in sched:
            raise CheckpointFormatError(
                f"checkpoint x={cp.x} is not on the configured schedule; "
                f"resume requires a matching schedule"
            )
        if set(cp.twisted) != set(config.q_list):
            raise CheckpointFormatError(
                f"checkpoint x={cp.x} carries q={sorted(cp.twisted)}, "
                f"config wants q={list(config.q_list)}"
            )
    xs = sorted(cp.x for cp in prior)
    expected_prefix = [x for x in schedule if x <= xs[-1]]
    if xs != expected_prefix:
        raise CheckpointFormatError(
            f"persisted checkpoints {xs} do not form a schedule prefix "
            f"{expected_prefix}"
        )
    for cp in prior:
        for q, stops in cp.twisted.items():
            for m, val in stops.items():
                anchors[q][m] = val.numerator
    return sorted(prior, key=lambda c: c.x), anchors, xs[-1]


def _twisted_stop_values(
    q: int,
    needed: list[int],
    anchors: dict[int, int],
    segment_size: int,
    pool,
) -> None:
    """Fill anchors[m] for every needed stop m, resieving only the gaps."""
    chunk = max(1, segment_size // q)
    for stop in sorted(set(needed)):
        if stop in anchors:
            continue
        base = max(m for m in anchors if m <= stop)
        jobs = [(q, a - 1, b - 1) for a, b in _segment_ranges(base, stop, chunk)]
        anchors[stop] = anchors[base] + sum(_pool_map(pool, _multiple_sum_segment, jobs))


def _validate_checkpoint(cp: Checkpoint, q_list) -> None:
    if cp.S.numerator != cp.S_A.numerator + cp.T_nonA.numerator:
        raise EngineInvariantError(f"x={cp.x}: S != S_A + T_nonA")
    if 5 in q_list:
        five = cp.twisted[5][cp.x // 5].numerator
        if cp.S_A.numerator - cp.S_B.numerator != five:
            raise EngineInvariantError(f"x={cp.x}: S_A - S_B != twisted(5, x//5)")
    if cp.S.numerator < cp.x << SCALE_EXP:
        raise EngineInvariantError(f"x={cp.x}: mean ratio below 1")
    if cp.count_nonA != digitset.count_non_a(cp.x):
        raise EngineInvariantError(f"x={cp.x}: non-A count mismatch")
    if abs(cp.S.numerator) >= NUMERATOR_CAP:
        raise OverflowError(f"x={cp.x}: numerator exceeds 128 bits")


def accumulate(config: EngineConfig) -> list[Checkpoint]:
    """Run the engine to config.limit, one Checkpoint per schedule point.

    With resume_path set and readable, continues from the largest persisted
    checkpoint; the result is bit-identical to a fresh run.
    """
    schedule = checkpoint_schedule(config.limit, config.refine_factor2)
    anchors: dict[int, dict[int, int]] = {q: {0: 0} for q in config.q_list}
    prior: list[Checkpoint] = []
    x0 = 0
    if config.resume_path and os.path.exists(config.resume_path):
        prior, anchors, x0 = _load_resume_state(config, schedule)

    pool = ThreadPoolExecutor(config.thread_count) if config.thread_count > 1 else None
    try:
        new_points = [x for x in schedule if x > x0]

        # main pass: classify and sum every n in (x0, limit]
        if prior:
            last = prior[-1]
            s_all = last.S.numerator
            s_a = last.S_A.numerator
            s_b = last.S_B.numerator
            t_non = last.T_nonA.numerator
            cnt = last.count_nonA
        else:
            s_all = s_a = s_b = t_non = cnt = 0
        core: dict[int, tuple[int, int, int, int, int]] = {}
        prev = x0
        for x in new_points:
            jobs = list(_segment_ranges(prev, x, config.segment_size))
            for part in _pool_map(pool, _segment_class_sums, jobs):
                s_all += part[0]
                s_a += part[1]
                s_b += part[2]
                t_non += part[3]
                cnt += part[4]
            core[x] = (s_all, s_a, s_b, t_non, cnt)
            prev = x

        # twisted passes, one independent series per q
        for q in config.q_list:
            needed = [m for x in new_points for m in (x // q, x)]
            _twisted_stop_values(q, needed, anchors[q], config.segment_size, pool)
    finally:
        if pool is not None:
            pool.shutdown()

    out = list(prior)
    for x in new_points:
        s_all, s_a, s_b, t_non, cnt = core[x]
        twisted = {
            q: {m: DyadicValue(anchors[q][m]) for m in sorted({x // q, x})}
            for q in config.q_list
        }
        out.append(
            Checkpoint(
                x=x,
                S=DyadicValue(s_all),
                S_A=DyadicValue(s_a),
                S_B=DyadicValue(s_b),
                T_nonA=DyadicValue(t_non),
                count_nonA=cnt,
                twisted=twisted,
            )
        )
    for cp in out:
        _validate_checkpoint(cp, config.q_list)
    return out


def save_checkpoints(path: str, checkpoints: list[Checkpoint]) -> None:
    """Write the canonical checkpoint CSV (UTF-8, LF, integer numerators)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for cp in sorted(checkpoints, key=lambda c: c.x):
            for q in sorted(cp.twisted):
                for m in sorted(cp.twisted[q]):
                    w.writerow(
                        [
                            cp.x,
                            SCALE_EXP,
                            cp.S.numerator,
                            cp.S_A.numerator,
                            cp.S_B.numerator,
                            cp.T_nonA.numerator,
                            cp.count_nonA,
                            q,
                            m,
                            cp.twisted[q][m].numerator,
                        ]
                    )


def load_checkpoints(path: str) -> list[Checkpoint]:
    """Parse a checkpoint CSV; malformed content reports its line number."""
    with open(path, encoding="utf-8", newline="") as fh:
        lines = list(csv.reader(fh))
    if not lines or lines[0] != CSV_HEADER:
        raise CheckpointFormatError(f"{path}: line 1: bad or missing header")
    by_x: dict[int, dict] = {}
    for i, row in enumerate(lines[1:], start=2):
        if not row:
            continue
        if len(row) != len(CSV_HEADER):
            raise CheckpointFormatError(f"{path}: line {i}: expected {len(CSV_HEADER)} fields")
        try:
            x, scale, s_all, s_a, s_b, t_non, cnt, q, m, tw = (int(v) for v in row)
        except ValueError:
            raise CheckpointFormatError(f"{path}: line {i}: non-integer field") from None
        if scale != SCALE_EXP:
            raise CheckpointFormatError(
                f"{path}: line {i}: scale_exp {scale} != engine scale {SCALE_EXP}"
            )
        rec = by_x.setdefault(x, {"core": None, "twisted": {}})
        core = (s_all, s_a, s_b, t_non, cnt)
        if rec["core"] is None:
            rec["core"] = core
        elif rec["core"] != core:
            raise CheckpointFormatError(f"{path}: line {i}: inconsistent sums for x={x}")
        prev_val = rec["twisted"].setdefault(q, {}).get(m)
        if prev_val is not None and prev_val != tw:
            raise CheckpointFormatError(
                f"{path}: line {i}: conflicting twisted value for (x={x}, q={q}, m={m})"
            )
        rec["twisted"][q][m] = tw
    out = []
    for x in sorted(by_x):
        s_all, s_a, s_b, t_non, cnt = by_x[x]["core"]
        if s_all != s_a + t_non:
            raise CheckpointFormatError(f"{path}: checkpoint x={x}: S != S_A + T_nonA")
        out.append(
            Checkpoint(
                x=x,
                S=DyadicValue(s_all),
                S_A=DyadicValue(s_a),
                S_B=DyadicValue(s_b),
                T_nonA=DyadicValue(t_non),
                count_nonA=cnt,
                twisted={
                    q: {m: DyadicValue(v) for m, v in stops.items()}
                    for q, stops in by_x[x]["twisted"].items()
                },
            )
        )
    return out
