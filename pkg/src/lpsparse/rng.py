"""Counter-based random streams.

Draws are addressed by ``(seed, stream, index)`` through Philox's counter, so
any block of samples can be regenerated without replaying earlier ones and
the result does not depend on how work is chunked.
"""

import numpy as np

_WORDS_PER_BLOCK = 4  # Philox4x64 emits four 64-bit words per counter value
_MASK64 = (1 << 64) - 1


def counter_uniforms(seed: int, stream: int, start: int, count: int, width: int) -> np.ndarray:
    """Uniforms in [0, 1) of shape (count, width); row i is keyed by index start + i."""
    blocks = -(-width // _WORDS_PER_BLOCK)
    bitgen = np.random.Philox(key=[seed & _MASK64, stream & _MASK64])
    if start:
        bitgen.advance(start * blocks)
    raw = bitgen.random_raw(count * blocks * _WORDS_PER_BLOCK)
    raw = raw.reshape(count, blocks * _WORDS_PER_BLOCK)[:, :width]
    return (raw >> np.uint64(11)).astype(np.float64) * 2.0**-53


def generator(seed: int, stream: int = 0) -> np.random.Generator:
    """A plain Generator for instance recipes (not index-addressable)."""
    return np.random.Generator(np.random.Philox(key=[seed & _MASK64, stream & _MASK64]))
