"""numpy implementations of the batch kernels (used when the extension is absent)."""
import numpy as np


def inversion_number(word, d):
    w = np.asarray(word, dtype=np.int64)
    inv = 0
    for v in range(1, d):
        greater = w > v
        before = np.cumsum(greater) - greater
        inv += int(before[w == v].sum())
    return inv


def major_index(word):
    w = np.asarray(word, dtype=np.int64)
    if w.size < 2:
        return 0
    return int((np.flatnonzero(w[:-1] > w[1:]) + 1).sum())


def shuffle(base, swaps):
    w = np.array(base, dtype=np.int64)
    n = w.size
    for k in range(n - 1, 0, -1):
        j = swaps[n - 1 - k]
        w[k], w[j] = w[j], w[k]
    return w


def sample_stats(base, swaps, d):
    base = np.asarray(base, dtype=np.int64)
    swaps = np.asarray(swaps, dtype=np.int64)
    batch = swaps.shape[0]
    n = base.size
    if n == 0:
        return np.zeros(batch, np.int64), np.zeros(batch, np.int64)
    w = np.tile(base, (batch, 1))
    rows = np.arange(batch)
    # same swap sequence as the compiled kernel, vectorised over rows
    for k in range(n - 1, 0, -1):
        j = swaps[:, n - 1 - k]
        held = w[:, k].copy()
        w[:, k] = w[rows, j]
        w[rows, j] = held
    inv = np.zeros(batch, np.int64)
    for v in range(1, d):
        greater = w > v
        before = np.cumsum(greater, axis=1, dtype=np.int64) - greater
        inv += np.where(w == v, before, 0).sum(axis=1)
    desc = w[:, :-1] > w[:, 1:]
    maj = desc.astype(np.int64) @ np.arange(1, n, dtype=np.int64)
    return inv, maj
