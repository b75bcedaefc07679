"""A 64-bit toy SPN and its avalanche experiment.

Round = bytewise S-box, byte shuffle, bit permutation, round-key XOR; no
whitening key and no special last round.  Bit 0 is the most significant
bit of byte 0, and permutations are destination <- source: output position
i takes input position p[i].

Two implementations share the test surface: a straight scalar one working
on 8-byte `bytes` (the reference), and a vectorized one on uint64 arrays
that folds S-box plus both permutations of one byte lane into a single
8x256 table of 64-bit masks, so a round is eight gathers and a XOR.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import NotBijectiveError, SBox, is_bijective
from .data import DILLON_PERMUTATION, KEY_SBOX, PBOX8
from .util import exact_decimal

BLOCK_BYTES = 8
BLOCK_BITS = 64
AVALANCHE_CSV_HEADER = "name,rounds,distance"


def _check_perm(p, size, what):
    if sorted(p) != list(range(size)):
        raise ValueError(f"{what} must be a permutation of 0..{size - 1}")


@dataclass(frozen=True)
class SpnConfig:
    """Cipher parameterization. The S-box must be a bijective 8-bit table."""

    sbox: SBox
    rounds: int
    pbox8: tuple = PBOX8
    pbox64: tuple = DILLON_PERMUTATION
    key_sbox: tuple = KEY_SBOX

    def __post_init__(self):
        if self.sbox.n != 8:
            raise ValueError("cipher S-box must be 8x8")
        if not is_bijective(self.sbox):
            raise NotBijectiveError("cipher S-box must be bijective")
        if self.rounds < 0:
            raise ValueError("rounds must be >= 0")
        _check_perm(self.pbox8, 8, "pbox8")
        _check_perm(self.pbox64, 64, "pbox64")
        _check_perm(self.key_sbox, 16, "key_sbox")


@dataclass(frozen=True)
class RoundKeys:
    keys: tuple  # k_1 .. k_rounds, each 8 bytes

    def __len__(self):
        return len(self.keys)

    def __getitem__(self, i):
        return self.keys[i]


@dataclass(frozen=True)
class AvalancheReport:
    trials: int
    rounds: int
    mean_flips: Fraction
    distance_from_32: Fraction
    mean_abs_deviation: Fraction  # mean |flips - 32|, exposed alongside
    per_input_bit_means: tuple

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "rounds": self.rounds,
            "mean_flips": exact_decimal(self.mean_flips),
            "distance_from_32": exact_decimal(self.distance_from_32),
            "mean_abs_deviation": exact_decimal(self.mean_abs_deviation),
            "per_input_bit_means": [exact_decimal(m) for m in self.per_input_bit_means],
        }

    def csv_row(self, name: str) -> str:
        return f"{name},{self.rounds},{exact_decimal(self.distance_from_32)}"


def block_to_int(block: bytes) -> int:
    return int.from_bytes(block, "big")


def int_to_block(value: int) -> bytes:
    return int(value).to_bytes(BLOCK_BYTES, "big")


def _rotl_bytes(block: bytes, k: int) -> bytes:
    return bytes(block[(i + k) % BLOCK_BYTES] for i in range(BLOCK_BYTES))


def key_schedule(master: bytes, rounds: int, cfg: SpnConfig) -> RoundKeys:
    """k_0 = master; each next key: rotate bytes left once, push every nibble
    through the key S-box (high nibble first), XOR the round index into byte
    0, then XOR the previous key rotated left three bytes."""
    if len(master) != BLOCK_BYTES:
        raise ValueError("master key must be 8 bytes")
    if rounds < 0:
        raise ValueError("rounds must be >= 0")
    ks = cfg.key_sbox
    keys = []
    prev = bytes(master)
    for r in range(1, rounds + 1):
        t = bytearray(_rotl_bytes(prev, 1))
        for i in range(BLOCK_BYTES):
            t[i] = (ks[t[i] >> 4] << 4) | ks[t[i] & 0xF]
        t[0] ^= r & 0xFF
        rot3 = _rotl_bytes(prev, 3)
        prev = bytes(a ^ b for a, b in zip(t, rot3))
        keys.append(prev)
    return RoundKeys(tuple(keys))


def _bit(state: bytes, b: int) -> int:
    return (state[b >> 3] >> (7 - (b & 7))) & 1


def apply_pbox8(state: bytes, p) -> bytes:
    _check_perm(p, 8, "pbox8")
    return bytes(state[p[i]] for i in range(8))


def apply_pbox64(state: bytes, p) -> bytes:
    _check_perm(p, 64, "pbox64")
    out = bytearray(BLOCK_BYTES)
    for d in range(BLOCK_BITS):
        if _bit(state, p[d]):
            out[d >> 3] |= 1 << (7 - (d & 7))
    return bytes(out)


def encrypt_block(plaintext: bytes, master: bytes, cfg: SpnConfig) -> bytes:
    if len(plaintext) != BLOCK_BYTES:
        raise ValueError("plaintext must be 8 bytes")
    keys = key_schedule(master, cfg.rounds, cfg)
    tab = cfg.sbox.table
    state = bytes(plaintext)
    for r in range(cfg.rounds):
        state = bytes(int(tab[b]) for b in state)
        state = apply_pbox8(state, cfg.pbox8)
        state = apply_pbox64(state, cfg.pbox64)
        state = bytes(a ^ b for a, b in zip(state, keys[r]))
    return state


def decrypt_block(ciphertext: bytes, master: bytes, cfg: SpnConfig) -> bytes:
    if len(ciphertext) != BLOCK_BYTES:
        raise ValueError("ciphertext must be 8 bytes")
    keys = key_schedule(master, cfg.rounds, cfg)
    inv_s = np.empty(256, dtype=np.int64)
    inv_s[cfg.sbox.table] = np.arange(256)
    inv8 = [0] * 8
    for i, v in enumerate(cfg.pbox8):
        inv8[v] = i
    inv64 = [0] * 64
    for i, v in enumerate(cfg.pbox64):
        inv64[v] = i
    state = bytes(ciphertext)
    for r in range(cfg.rounds - 1, -1, -1):
        state = bytes(a ^ b for a, b in zip(state, keys[r]))
        state = apply_pbox64(state, inv64)
        state = apply_pbox8(state, inv8)
        state = bytes(int(inv_s[b]) for b in state)
    return state


# ---------------------------------------------------------------------------
# vectorized path


def _combined_bit_sources(cfg: SpnConfig):
    # chain both permutations: output bit d <- byte-shuffled bit pbox64[d]
    return [cfg.pbox8[cfg.pbox64[d] >> 3] * 8 + (cfg.pbox64[d] & 7) for d in range(64)]


def _build_round_tables(cfg: SpnConfig) -> np.ndarray:
    """tabs[i][v] = the full permuted 64-bit contribution of S(v) at byte i."""
    src = _combined_bit_sources(cfg)
    dest = [0] * 64
    for d, s in enumerate(src):
        dest[s] = d
    tabs = np.zeros((8, 256), dtype=np.uint64)
    sbox = cfg.sbox.table
    for i in range(8):
        for v in range(256):
            y = int(sbox[v])
            acc = 0
            for r in range(8):
                if (y >> (7 - r)) & 1:
                    acc |= 1 << (63 - dest[8 * i + r])
            tabs[i, v] = acc
    return tabs


def _build_inverse_bit_tables(cfg: SpnConfig) -> np.ndarray:
    """ptabs[i][v] = inverse combined bit permutation applied to byte i = v."""
    src = _combined_bit_sources(cfg)
    ptabs = np.zeros((8, 256), dtype=np.uint64)
    for i in range(8):
        for v in range(256):
            acc = 0
            for r in range(8):
                if (v >> (7 - r)) & 1:
                    # ciphertext bit 8i+r came from source bit src[8i+r]
                    acc |= 1 << (63 - src[8 * i + r])
            ptabs[i, v] = acc
    return ptabs


def _key_schedule_bulk(masters: np.ndarray, rounds: int, cfg: SpnConfig) -> np.ndarray:
    """Round keys for a whole batch of masters; shape (rounds, len(masters))."""
    ks = cfg.key_sbox
    lut = np.array([(ks[b >> 4] << 4) | ks[b & 0xF] for b in range(256)], dtype=np.uint64)
    prev = masters.astype(np.uint64, copy=True)
    out = np.empty((rounds, len(masters)), dtype=np.uint64)
    for r in range(1, rounds + 1):
        t = (prev << np.uint64(8)) | (prev >> np.uint64(56))
        acc = np.zeros_like(t)
        for i in range(8):
            sh = np.uint64(8 * (7 - i))
            acc |= lut[((t >> sh) & np.uint64(0xFF)).astype(np.int64)] << sh
        acc ^= np.uint64(r & 0xFF) << np.uint64(56)
        prev = acc ^ ((prev << np.uint64(24)) | (prev >> np.uint64(40)))
        out[r - 1] = prev
    return out


def _encrypt_states(states: np.ndarray, keys: np.ndarray, tabs: np.ndarray) -> np.ndarray:
    """states: (m, k) uint64 blocks; keys: (rounds, m), broadcast over k."""
    st = states.copy()
    for r in range(keys.shape[0]):
        acc = np.zeros_like(st)
        for i in range(8):
            sh = np.uint64(8 * (7 - i))
            acc ^= tabs[i][((st >> sh) & np.uint64(0xFF)).astype(np.int64)]
        st = acc ^ keys[r][:, np.newaxis]
    return st


def encrypt_blocks(plaintexts: np.ndarray, masters: np.ndarray, cfg: SpnConfig) -> np.ndarray:
    """Vectorized encryption of uint64 blocks (big-endian byte semantics)."""
    pts = np.asarray(plaintexts, dtype=np.uint64)
    keys = _key_schedule_bulk(np.asarray(masters, dtype=np.uint64), cfg.rounds, cfg)
    return _encrypt_states(pts[:, np.newaxis], keys, _build_round_tables(cfg))[:, 0]


def decrypt_blocks(ciphertexts: np.ndarray, masters: np.ndarray, cfg: SpnConfig) -> np.ndarray:
    cts = np.asarray(ciphertexts, dtype=np.uint64).copy()
    keys = _key_schedule_bulk(np.asarray(masters, dtype=np.uint64), cfg.rounds, cfg)
    ptabs = _build_inverse_bit_tables(cfg)
    inv_s = np.empty(256, dtype=np.uint64)
    inv_s[cfg.sbox.table] = np.arange(256, dtype=np.uint64)
    st = cts
    for r in range(cfg.rounds - 1, -1, -1):
        st = st ^ keys[r]
        acc = np.zeros_like(st)
        for i in range(8):
            sh = np.uint64(8 * (7 - i))
            acc ^= ptabs[i][((st >> sh) & np.uint64(0xFF)).astype(np.int64)]
        st = acc
        acc = np.zeros_like(st)
        for i in range(8):
            sh = np.uint64(8 * (7 - i))
            acc |= inv_s[((st >> sh) & np.uint64(0xFF)).astype(np.int64)] << sh
        st = acc
    return st


# ---------------------------------------------------------------------------
# avalanche experiment


def generate_pairs(trials: int, seed: int) -> np.ndarray:
    """(trials, 2) uint64 array of (plaintext, master) pairs."""
    rng = np.random.default_rng(seed)
    pts = rng.integers(0, 2 ** 64, size=trials, dtype=np.uint64)
    keys = rng.integers(0, 2 ** 64, size=trials, dtype=np.uint64)
    return np.stack([pts, keys], axis=1)


def save_pairs(path, pairs: np.ndarray) -> None:
    """16 bytes per trial: plaintext then master, each little-endian uint64."""
    with open(path, "wb") as fh:
        for p, k in np.asarray(pairs, dtype=np.uint64):
            fh.write(struct.pack("<QQ", int(p), int(k)))


def load_pairs(path) -> np.ndarray:
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) % 16:
        raise ValueError("pairs file length must be a multiple of 16 bytes")
    flat = [v for chunk in struct.iter_unpack("<QQ", blob) for v in chunk]
    return np.array(flat, dtype=np.uint64).reshape(-1, 2)


def avalanche_experiment(
    cfg: SpnConfig,
    trials: int | None = None,
    seed: int | None = None,
    pairs: np.ndarray | None = None,
) -> AvalancheReport:
    """Mean ciphertext Hamming distance over all single-bit plaintext flips.

    Each trial encrypts a baseline block and its 64 one-bit variants under
    one master key; the report aggregates trials x 64 flip events.  Passing
    the same seed (or an explicit pairs array) reuses the identical pair
    set across different S-boxes, which is what makes cross-S-box distance
    comparisons meaningful.
    """
    if pairs is not None:
        pairs = np.asarray(pairs, dtype=np.uint64)
        if pairs.ndim != 2 or pairs.shape[1] != 2 or len(pairs) == 0:
            raise ValueError("pairs must be a non-empty (trials, 2) array")
        if trials is not None and trials != len(pairs):
            raise ValueError(f"trials={trials} does not match {len(pairs)} stored pairs")
        trials = len(pairs)
    else:
        if trials is None or trials < 1:
            raise ValueError("trials must be >= 1")
        if seed is None:
            raise ValueError("seed is required when no pairs are supplied")
        pairs = generate_pairs(trials, seed)

    pts = pairs[:, 0]
    masters = pairs[:, 1]
    flippers = np.uint64(1) << (np.uint64(63) - np.arange(64, dtype=np.uint64))
    states = np.concatenate([pts[:, np.newaxis], pts[:, np.newaxis] ^ flippers[np.newaxis, :]], axis=1)
    keys = _key_schedule_bulk(masters, cfg.rounds, cfg)
    ct = _encrypt_states(states, keys, _build_round_tables(cfg))
    dist = np.bitwise_count(ct[:, 1:] ^ ct[:, 0:1]).astype(np.int64)

    events = trials * 64
    mean = Fraction(int(dist.sum()), events)
    per_bit = tuple(Fraction(int(c), trials) for c in dist.sum(axis=0))
    return AvalancheReport(
        trials=trials,
        rounds=cfg.rounds,
        mean_flips=mean,
        distance_from_32=abs(mean - 32),
        mean_abs_deviation=Fraction(int(np.abs(dist - 32).sum()), events),
        per_input_bit_means=per_bit,
    )
