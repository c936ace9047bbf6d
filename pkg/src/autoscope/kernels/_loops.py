"""Loop kernels over multiplication tables.

Plain Python functions written in a numba-compilable style (explicit
loops, preallocated arrays).  The package jits them when the numba
backend is active and runs them as-is otherwise.

Conventions: element 0 is the identity; ``table[i, j]`` is the index of
``e_i * e_j``; masks are uint8 arrays over element indices.
"""

import numpy as np


def close_mask(table, gen_idx):
    """Membership mask of the subgroup generated by ``gen_idx``."""
    n = table.shape[0]
    member = np.zeros(n, dtype=np.uint8)
    queue = np.empty(n, dtype=np.int32)
    member[0] = 1
    queue[0] = 0
    qn = 1
    head = 0
    while head < qn:
        x = queue[head]
        head += 1
        for j in range(gen_idx.shape[0]):
            y = table[x, gen_idx[j]]
            if member[y] == 0:
                member[y] = 1
                queue[qn] = y
                qn += 1
    return member


def class_ids(table, inv, group_gens):
    """Conjugacy class label per element (label = least element index in class)."""
    n = table.shape[0]
    cid = np.full(n, -1, dtype=np.int32)
    queue = np.empty(n, dtype=np.int32)
    for s in range(n):
        if cid[s] >= 0:
            continue
        cid[s] = s
        queue[0] = s
        qn = 1
        head = 0
        while head < qn:
            x = queue[head]
            head += 1
            for j in range(group_gens.shape[0]):
                g = group_gens[j]
                y = table[table[inv[g], x], g]
                if cid[y] < 0:
                    cid[y] = s
                    queue[qn] = y
                    qn += 1
    return cid


def iso_search(table_src, table_dst, gen_seq, cand_flat, cand_off, collect_stride, out_imgs, stop_after):
    """Backtracking search for bijective homomorphisms source -> target.

    ``gen_seq`` is a generating sequence of the source (element indices,
    each outside the subgroup generated by its predecessors).  Level k
    tries the candidate images ``cand_flat[cand_off[k]:cand_off[k+1]]``.
    A partial assignment is grown into the subgroup it generates while
    checking multiplicative consistency and injectivity, so every leaf
    reached is a bijective homomorphism on the whole source.

    Every ``collect_stride``-th success is copied into ``out_imgs`` (full
    element-index maps).  Returns ``(found, collected)``; stops early
    once ``found == stop_after`` if ``stop_after > 0``.
    """
    n = table_src.shape[0]
    m = gen_seq.shape[0]
    cap = out_imgs.shape[0]

    pos = np.full(n, -1, dtype=np.int32)    # source element -> closure position
    elts = np.empty(n, dtype=np.int32)      # position -> source element
    img = np.empty(n, dtype=np.int32)       # position -> image element
    img_seen = np.zeros(n, dtype=np.uint8)

    pos[0] = 0
    elts[0] = 0
    img[0] = 0
    img_seen[0] = 1
    cnt = 1

    ptr = np.empty(m, dtype=np.int64)
    start_cnt = np.empty(m, dtype=np.int32)

    found = 0
    collected = 0

    if m == 0:
        # trivial source: the empty map is the lone bijection when n == 1
        if n == 1:
            found = 1
            if cap > 0:
                out_imgs[0, 0] = 0
                collected = 1
        return found, collected

    k = 0
    ptr[0] = cand_off[0]
    while k >= 0:
        advanced = False
        while ptr[k] < cand_off[k + 1]:
            y = cand_flat[ptr[k]]
            ptr[k] += 1
            if img_seen[y] == 1:
                continue
            w = cnt
            g = gen_seq[k]
            pos[g] = cnt
            elts[cnt] = g
            img[cnt] = y
            img_seen[y] = 1
            cnt += 1
            ok = True
            # close under right multiplication: old positions get the new
            # generator, new positions get every active generator
            qa = 0
            qb = w
            jb = 0
            while True:
                if qa < w:
                    p_ = qa
                    j_ = k
                    qa += 1
                elif qb < cnt:
                    p_ = qb
                    j_ = jb
                    jb += 1
                    if jb > k:
                        jb = 0
                        qb += 1
                else:
                    break
                ge = gen_seq[j_]
                gy = img[pos[ge]]
                z = table_src[elts[p_], ge]
                zi = table_dst[img[p_], gy]
                pz = pos[z]
                if pz < 0:
                    if img_seen[zi] == 1:
                        ok = False
                        break
                    pos[z] = cnt
                    elts[cnt] = z
                    img[cnt] = zi
                    img_seen[zi] = 1
                    cnt += 1
                else:
                    if img[pz] != zi:
                        ok = False
                        break
            if not ok:
                for t in range(w, cnt):
                    img_seen[img[t]] = 0
                    pos[elts[t]] = -1
                cnt = w
                continue
            if k == m - 1:
                if found % collect_stride == 0 and collected < cap:
                    for t in range(cnt):
                        out_imgs[collected, elts[t]] = img[t]
                    collected += 1
                found += 1
                for t in range(w, cnt):
                    img_seen[img[t]] = 0
                    pos[elts[t]] = -1
                cnt = w
                if stop_after > 0 and found >= stop_after:
                    return found, collected
                continue
            start_cnt[k] = w
            k += 1
            ptr[k] = cand_off[k]
            advanced = True
            break
        if advanced:
            continue
        k -= 1
        if k >= 0:
            w = start_cnt[k]
            for t in range(w, cnt):
                img_seen[img[t]] = 0
                pos[elts[t]] = -1
            cnt = w
    return found, collected
