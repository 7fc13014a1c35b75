"""Deterministic pseudo-random numbers for reproducible randomized checks.

The generator is xoshiro256** (Blackman/Vigna), seeded through splitmix64.
Both algorithms are fully specified by their public reference code, so any
implementation fed the same seed produces the same stream, independent of
platform or library versions.
"""

from __future__ import annotations

import math

_MASK = (1 << 64) - 1


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK


def splitmix64(state: int):
    """One splitmix64 step: returns (output, next_state)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31), state


class Xoshiro256StarStar:
    """xoshiro256** with 64-bit output, seeded via splitmix64."""

    def __init__(self, seed: int):
        self.s = []
        state = seed & _MASK
        for _ in range(4):
            out, state = splitmix64(state)
            self.s.append(out)
        if not any(self.s):  # all-zero state is a fixed point of the update
            self.s[0] = 1

    @classmethod
    def from_state(cls, s0: int, s1: int, s2: int, s3: int) -> "Xoshiro256StarStar":
        rng = cls.__new__(cls)
        rng.s = [s0 & _MASK, s1 & _MASK, s2 & _MASK, s3 & _MASK]
        return rng

    def next_u64(self) -> int:
        s = self.s
        result = (_rotl((s[1] * 5) & _MASK, 7) * 9) & _MASK
        t = (s[1] << 17) & _MASK
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def random(self) -> float:
        """Uniform double in [0, 1) with 53 bits, standard (x >> 11) * 2^-53."""
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] via rejection-free scaling (hi - lo small)."""
        span = hi - lo + 1
        return lo + int(self.random() * span) % span

    def complex_box(self, half_width: float = 1.0, center: complex = 0j) -> complex:
        """Uniform complex number in the axis-aligned square of given half width."""
        return center + complex(
            self.uniform(-half_width, half_width), self.uniform(-half_width, half_width)
        )

    def complex_disc(self, radius: float = 1.0, center: complex = 0j) -> complex:
        """Uniform complex number in the closed disc, by rejection."""
        while True:
            w = complex(self.uniform(-1.0, 1.0), self.uniform(-1.0, 1.0))
            if abs(w) <= 1.0:
                return center + radius * w

    def unit_complex(self) -> complex:
        """Complex number of modulus one."""
        phi = self.uniform(0.0, 2.0 * math.pi)
        return complex(math.cos(phi), math.sin(phi))

    def complex_normal(self) -> complex:
        """Standard complex normal (Box-Muller on two uniforms)."""
        u1 = self.random()
        while u1 == 0.0:
            u1 = self.random()
        u2 = self.random()
        r = math.sqrt(-math.log(u1))
        return complex(r * math.cos(2 * math.pi * u2), r * math.sin(2 * math.pi * u2))
