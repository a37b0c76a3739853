"""Randomized baseline: how many uniform draws until a nonresidue turns up.

All randomness comes from ``random.Random(seed)`` (Mersenne Twister), so a
fixed seed reproduces the sampled primes and trial counts exactly.  Wall
times are measured but kept apart from the deterministic fields.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import asdict, dataclass, field

from .engine import qnr_auto, qnr_general, qnr_least
from .intmath import is_prime
from .symbols import euler_criterion

TIMED_METHODS = {"auto": qnr_auto, "general": qnr_general, "least": qnr_least}


@dataclass
class BenchReport:
    bits: int
    count: int
    seed: int
    mean_trials: float
    max_trials: int
    distinct_primes: int
    timings: dict = field(default_factory=dict)

    def deterministic_dict(self) -> dict:
        out = asdict(self)
        out.pop("timings")
        return out

    def to_json(self, timings: bool = True, **kwargs) -> str:
        data = asdict(self) if timings else self.deterministic_dict()
        return json.dumps(data, sort_keys=True, **kwargs)


def random_prime(bits: int, rng: random.Random) -> int:
    """Uniform odd prime with exactly ``bits`` bits."""
    lo, hi = 1 << (bits - 1), (1 << bits) - 1
    while True:
        n = rng.randint(lo, hi) | 1
        if n <= hi and is_prime(n):
            return n


def trials_to_nonresidue(p: int, rng: random.Random) -> int:
    trials = 1
    while euler_criterion(rng.randrange(1, p), p) != -1:
        trials += 1
    return trials


def bench_randomized(bits: int, count: int, seed: int, timed_primes: int = 50) -> BenchReport:
    if bits < 3:
        raise ValueError(f"bits must be >= 3, got {bits}")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    rng = random.Random(seed)
    primes = []
    total = 0
    worst = 0
    for _ in range(count):
        p = random_prime(bits, rng)
        n = trials_to_nonresidue(p, rng)
        primes.append(p)
        total += n
        worst = max(worst, n)
    distinct = sorted(set(primes))

    timings = {}
    sample = distinct[:timed_primes]
    for name, fn in TIMED_METHODS.items():
        start = time.perf_counter()
        for p in sample:
            fn(p)
        elapsed = time.perf_counter() - start
        timings[name] = {"primes": len(sample), "seconds": elapsed, "per_prime_ms": 1e3 * elapsed / len(sample)}
    return BenchReport(bits, count, seed, total / count, worst, len(distinct), timings)
