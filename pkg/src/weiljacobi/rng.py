"""SplitMix64: a tiny splittable generator with a published reference algorithm.

Used instead of ``random.Random`` so that the sampled families are reproducible
bit-for-bit from a 64-bit seed in any language (Steele, Lea & Flood, 2014).
"""

from __future__ import annotations

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed: int = 0):
        self.state = seed & MASK

    def next64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK
        return _mix(self.state)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection (no modulo bias)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            x = self.next64()
            if x < limit:
                return x % bound

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], both ends included."""
        return lo + self.below(hi - lo + 1)

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def shuffle(self, seq: list) -> None:
        for i in range(len(seq) - 1, 0, -1):
            j = self.below(i + 1)
            seq[i], seq[j] = seq[j], seq[i]

    def split(self) -> SplitMix64:
        """An independent child stream."""
        return SplitMix64(self.next64())


def stream(seed: int, *path: int) -> SplitMix64:
    """Child generator addressed by a path, e.g. ``stream(seed, trial)``."""
    g = SplitMix64(seed)
    for p in path:
        g = SplitMix64(_mix((g.next64() + p * GOLDEN) & MASK))
    return g
