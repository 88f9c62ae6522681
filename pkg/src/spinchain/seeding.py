"""Deterministic seed derivation.

All randomness uses numpy's PCG64. Child seeds are derived by hashing the key
tuple ``(master, *indices)`` through ``SeedSequence`` and taking the first
64-bit word of its generated state.
"""

import numpy as np


def derive_seed(master: int, *indices: int) -> int:
    ss = np.random.SeedSequence([int(master) & (2**64 - 1), *(int(i) for i in indices)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))
