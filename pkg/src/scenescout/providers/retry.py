"""Bounded retry with exponential backoff and jitter, plus a token bucket.

Retries are capped by config and each sleep is base * 2^attempt plus a
jitter drawn uniformly from [0, jitter_fraction * delay], never exceeding
max_delay. The RNG and clock are injectable so tests can pin them.
"""

from __future__ import annotations

import random
import threading
import time
from dataclasses import dataclass
from typing import Callable, TypeVar

from ..errors import ProviderError

T = TypeVar("T")


@dataclass(frozen=True)
class RetryPolicy:
    max_retries: int = 2
    base_delay_s: float = 0.5
    max_delay_s: float = 8.0
    jitter_fraction: float = 0.25

    def delay_for(self, attempt: int, rng: random.Random) -> float:
        delay = min(self.base_delay_s * (2**attempt), self.max_delay_s)
        jitter = rng.uniform(0.0, self.jitter_fraction * delay)
        return min(delay + jitter, self.max_delay_s * (1.0 + self.jitter_fraction))


def with_retries(
    fn: Callable[[], T],
    policy: RetryPolicy,
    *,
    idempotent: bool,
    rng: random.Random | None = None,
    sleep: Callable[[float], None] = time.sleep,
) -> T:
    """Run fn, retrying retryable ProviderErrors.

    Non-idempotent operations are never retried more times than the policy
    cap; non-retryable errors surface immediately.
    """
    rng = rng or random.Random()
    attempts_allowed = policy.max_retries if idempotent else min(policy.max_retries, 1)
    attempt = 0
    while True:
        try:
            return fn()
        except ProviderError as err:
            if not err.retryable or attempt >= attempts_allowed:
                raise
            delay = err.retry_after if err.retry_after is not None else policy.delay_for(attempt, rng)
            sleep(delay)
            attempt += 1


class TokenBucket:
    """Thread-safe token bucket shared across sessions for provider calls."""

    def __init__(self, rate_per_s: float, burst: float, clock: Callable[[], float] = time.monotonic):
        if rate_per_s <= 0 or burst <= 0:
            raise ValueError("rate and burst must be positive")
        self._rate = rate_per_s
        self._burst = burst
        self._tokens = burst
        self._clock = clock
        self._last = clock()
        self._lock = threading.Lock()

    def try_acquire(self, tokens: float = 1.0) -> bool:
        with self._lock:
            now = self._clock()
            self._tokens = min(self._burst, self._tokens + (now - self._last) * self._rate)
            self._last = now
            if self._tokens >= tokens:
                self._tokens -= tokens
                return True
            return False

    def acquire(self, tokens: float = 1.0, *, sleep: Callable[[float], None] = time.sleep) -> None:
        while not self.try_acquire(tokens):
            with self._lock:
                deficit = tokens - self._tokens
            sleep(max(deficit / self._rate, 0.001))
