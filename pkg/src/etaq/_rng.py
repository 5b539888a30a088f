"""Deterministic 64-bit RNG used for seeded shuffles and annealing.

splitmix64 is pinned here (rather than random.Random) so that sequences are
reproducible across Python versions and platforms from the algorithm identifier
alone.
"""

MASK64 = (1 << 64) - 1

ALGORITHM_ID = "splitmix64-v1"


class SplitMix64:
    """splitmix64 generator (Steele, Lea, Flood 2014), 64-bit state."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n). Rejection sampling, no modulo bias."""
        if n <= 0:
            raise ValueError("randrange needs n >= 1")
        limit = MASK64 - (MASK64 % n)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randrange(i + 1)
            items[i], items[j] = items[j], items[i]
