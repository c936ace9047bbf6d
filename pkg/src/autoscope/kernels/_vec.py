"""Vectorized numpy fallbacks for the frontier-style kernels."""

import numpy as np


def close_mask(table, gen_idx):
    n = table.shape[0]
    member = np.zeros(n, dtype=bool)
    member[0] = True
    frontier = np.unique(np.concatenate((np.zeros(1, dtype=np.int64), np.asarray(gen_idx, dtype=np.int64))))
    if gen_idx.shape[0] == 0:
        return member.astype(np.uint8)
    while frontier.size:
        prods = np.unique(table[np.ix_(frontier, gen_idx)])
        new = prods[~member[prods]]
        member[new] = True
        frontier = new
    return member.astype(np.uint8)


def class_ids(table, inv, group_gens):
    n = table.shape[0]
    cid = np.full(n, -1, dtype=np.int32)
    if group_gens.shape[0] == 0:
        return np.arange(n, dtype=np.int32)
    inv_g = inv[group_gens]
    for s in range(n):
        if cid[s] >= 0:
            continue
        cid[s] = s
        frontier = np.array([s], dtype=np.int64)
        while frontier.size:
            parts = [table[table[ig, frontier], g] for ig, g in zip(inv_g, group_gens)]
            ys = np.unique(np.concatenate(parts))
            ys = ys[cid[ys] < 0]
            cid[ys] = s
            frontier = ys
    return cid
