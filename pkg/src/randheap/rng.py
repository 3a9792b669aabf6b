"""SplitMix64 bit generator.

Every random decision in the package (coin flips in the randomized cut
policies, workload generation) flows through this generator so that a seed
reproduces the same stream on every platform.

One step::

    state = (state + 0x9E3779B97F4A7C15) mod 2**64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2**64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) mod 2**64
    return z ^ (z >> 31)

A coin flip consumes exactly one step and returns the low bit
(1 = heads, 0 = tails).
"""

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int = 0):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = s = (self.state + GOLDEN_GAMMA) & MASK64
        z = ((s ^ (s >> 30)) * MIX1) & MASK64
        z = ((z ^ (z >> 27)) * MIX2) & MASK64
        return z ^ (z >> 31)

    def flip(self) -> int:
        """One fair coin: 1 for heads, 0 for tails."""
        self.state = s = (self.state + GOLDEN_GAMMA) & MASK64
        z = ((s ^ (s >> 30)) * MIX1) & MASK64
        z = ((z ^ (z >> 27)) * MIX2) & MASK64
        return (z ^ (z >> 31)) & 1

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection; bound >= 1."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        if bound & (bound - 1) == 0:
            return self.next_u64() & (bound - 1)
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % bound

    def uniform(self) -> float:
        """Float in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def fork(self) -> "SplitMix64":
        return SplitMix64(self.next_u64())
