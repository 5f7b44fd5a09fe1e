"""
Random tables with fixed margins and multinomial resamples, in seeded blocks.

Replicates are generated in blocks of ``block_size``; block k draws from
the k-th child of ``SeedSequence(seed)``, so the replicate stream does not
depend on how blocks are distributed over workers.
"""
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, Tuple, TypeVar

import numpy as np
from scipy.special import gammaln

from statfidelity_common.config import get_config

T = TypeVar("T")


def replicate_blocks(replicates: int, seed: int, block_size: Optional[int] = None) -> List[Tuple[np.random.SeedSequence, int]]:
    """(seed sequence, size) for each block of a run of ``replicates`` draws."""
    if block_size is None:
        block_size = int(get_config().get("MC_BLOCK_SIZE", 10000))
    n_blocks = -(-replicates // block_size)
    children = np.random.SeedSequence(seed).spawn(n_blocks)
    return [(children[k], min(block_size, replicates - k * block_size)) for k in range(n_blocks)]


def run_blocks(blocks: Sequence[Tuple[np.random.SeedSequence, int]],
               work: Callable[[np.random.Generator, int], T], workers: int = 1) -> List[T]:
    """Apply ``work(rng, size)`` to every block; results keep block order."""
    def _one(block):
        seq, size = block
        return work(np.random.default_rng(seq), size)

    if workers <= 1 or len(blocks) <= 1:
        return [_one(b) for b in blocks]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(_one, blocks))


def _hypergeometric(rng: np.random.Generator, good: np.ndarray, bad: np.ndarray,
                    nsample: np.ndarray) -> np.ndarray:
    # numpy rejects ngood = 0 or nbad = 0 in some versions; those draws are fixed anyway
    out = np.where(bad == 0, nsample, 0)
    mask = (nsample > 0) & (good > 0) & (bad > 0)
    if mask.any():
        out[mask] = rng.hypergeometric(good[mask], bad[mask], nsample[mask])
    return out


def sample_tables(row_sums: Sequence[int], col_sums: Sequence[int], size: int,
                  rng: np.random.Generator) -> np.ndarray:
    """
    ``size`` tables drawn from the fixed-margin (multiple hypergeometric)
    distribution, filling each column row by row from conditional
    hypergeometric draws. Returns an int64 array of shape (size, r, c).
    """
    row_sums = np.asarray(row_sums, dtype=np.int64)
    col_sums = np.asarray(col_sums, dtype=np.int64)
    r, c = len(row_sums), len(col_sums)
    tables = np.zeros((size, r, c), dtype=np.int64)
    row_left = np.tile(row_sums, (size, 1))
    for j in range(c - 1):
        need = np.full(size, col_sums[j], dtype=np.int64)
        pool = row_left.sum(axis=1)
        for i in range(r - 1):
            good = row_left[:, i]
            bad = pool - good
            x = _hypergeometric(rng, good, bad, need)
            tables[:, i, j] = x
            row_left[:, i] -= x
            need = need - x
            pool = bad
        tables[:, r - 1, j] = need
        row_left[:, r - 1] -= need
    tables[:, :, c - 1] = row_left
    return tables


def table_log_statistic(tables: np.ndarray) -> np.ndarray:
    """-sum(log x!) per table: the log table probability up to a margin constant."""
    return -gammaln(np.asarray(tables, dtype=float) + 1.0).sum(axis=(-2, -1))


def resample_tables(counts: np.ndarray, size: int, rng: np.random.Generator) -> np.ndarray:
    """Multinomial resamples of the cells at the observed grand total."""
    counts = np.asarray(counts, dtype=np.int64)
    n = int(counts.sum())
    probs = counts.ravel() / n
    return rng.multinomial(n, probs, size=size).reshape((size,) + counts.shape)
