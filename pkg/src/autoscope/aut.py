"""Automorphism groups, isomorphism testing, characteristic subgroups.

An automorphism of a group with element table ``E`` is stored as an
*index map*: an int32 array ``f`` with ``f[i]`` the index of the image of
element ``i``.  Index maps compose like permutations (``q[p]`` applies
``p`` then ``q``), so the automorphism group acts as a permutation group
on the non-identity element indices.
"""

from __future__ import annotations

import os
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .group import ElementTable, PermGroup, SubgroupHandle, _first_moved, pidentity
from .structure import (
    center,
    conjugacy_class_ids,
    derived_series,
    order_structure,
    subgroup_from_indices,
    _prime_factors,
)

DEFAULT_AUT_CAP = 10_000


def aut_size_cap() -> int:
    return int(os.environ.get("AUTOSCOPE_AUT_CAP", DEFAULT_AUT_CAP))


# -- fingerprints ------------------------------------------------------------

def _relabel(columns: list[np.ndarray], split: int) -> tuple[np.ndarray, np.ndarray, int]:
    """Canonical integer labels for rows of the stacked feature columns.

    The feature matrix covers two element sets concatenated (split at
    ``split``); labels are comparable across both.
    """
    mat = np.stack(columns, axis=1)
    uniq, inverse = np.unique(mat, axis=0, return_inverse=True)
    return inverse[:split], inverse[split:], len(uniq)


def _feature_loop(tables: list[np.ndarray], invs: list[np.ndarray],
                  orders_list: list[np.ndarray], cids: list[np.ndarray]) -> list[np.ndarray]:
    """Iteratively refined per-element invariant labels, canonical across groups."""
    sizes = [t.shape[0] for t in tables]
    split = sizes[0]
    n_total = sum(sizes)
    primes = sorted(_prime_factors(max(1, n_total // len(tables))) | {2})

    csizes = []
    for cid in cids:
        _, invm, counts = np.unique(cid, return_inverse=True, return_counts=True)
        csizes.append(counts[invm])

    orders = np.concatenate(orders_list)
    csize = np.concatenate(csizes)
    if len(tables) == 1:
        lab, _, width = _relabel([orders, csize], n_total)
    else:
        a, b, width = _relabel([orders, csize], split)
        lab = np.concatenate([a, b])

    while True:
        cols = [lab]
        offset = 0
        pow_cols = {p: np.empty(n_total, dtype=np.int64) for p in primes}
        root_cols = {p: np.zeros(n_total, dtype=np.int64) for p in primes}
        for t, sz in zip(tables, sizes):
            idx = np.arange(sz)
            lab_part = lab[offset : offset + sz]
            for p in primes:
                powered = idx
                for _ in range(p - 1):
                    powered = t[powered, idx]
                pow_cols[p][offset : offset + sz] = lab_part[powered]
                cnt = np.zeros(sz, dtype=np.int64)
                np.add.at(cnt, powered, 1)
                root_cols[p][offset : offset + sz] = cnt
            offset += sz
        for p in primes:
            cols.append(pow_cols[p])
            cols.append(root_cols[p])
        if len(tables) == 1:
            new, _, new_width = _relabel(cols, n_total)
        else:
            a, b, new_width = _relabel(cols, split)
            new = np.concatenate([a, b])
        if new_width == width:
            return [new[sum(sizes[:i]) : sum(sizes[: i + 1])] for i in range(len(tables))]
        lab, width = new, new_width


def element_fingerprints(group: PermGroup) -> np.ndarray:
    """Per-element invariant labels; equal labels are necessary for any
    automorphism to map one element to the other."""
    et = group.etab()
    cid = conjugacy_class_ids(group)
    return _feature_loop([et.table], [et.inv], [et.orders.astype(np.int64)], [cid])[0]


def paired_fingerprints(g: PermGroup, h: PermGroup) -> tuple[np.ndarray, np.ndarray]:
    """Fingerprints for two groups on a shared label scale."""
    eg, eh = g.etab(), h.etab()
    out = _feature_loop(
        [eg.table, eh.table],
        [eg.inv, eh.inv],
        [eg.orders.astype(np.int64), eh.orders.astype(np.int64)],
        [conjugacy_class_ids(g), conjugacy_class_ids(h)],
    )
    return out[0], out[1]


def greedy_generating_sequence(group: PermGroup) -> np.ndarray:
    """A short generating sequence of element indices, greedy by
    descending element order (ties by index)."""
    et = group.etab()
    if et.n == 1:
        return np.zeros(0, dtype=np.int32)
    order_key = np.lexsort((np.arange(et.n), -et.orders.astype(np.int64)))
    chosen: list[int] = []
    covered = np.zeros(et.n, dtype=np.uint8)
    covered[0] = 1
    for i in order_key:
        if covered[i]:
            continue
        chosen.append(int(i))
        covered = kernels.close_mask(et.table, np.array(chosen, dtype=np.int32))
        if int(covered.sum()) == et.n:
            break
    return np.array(chosen, dtype=np.int32)


# -- homomorphisms -----------------------------------------------------------

class GroupHomomorphism:
    """A homomorphism given by images of the source group's generators."""

    def __init__(self, source: PermGroup, target: PermGroup, images: Sequence[np.ndarray]):
        self.source = source
        self.target = target
        self.images = [np.asarray(im, dtype=np.int32) for im in images]
        if len(self.images) != len(source.gens):
            raise ValueError("one image per source generator required")
        self._index_map: Optional[np.ndarray] = None

    def index_map(self) -> np.ndarray:
        """Full element-index map source -> target (follows the BFS tree)."""
        if self._index_map is None:
            es, et = self.source.etab(), self.target.etab()
            bfs_imgs = [et.idx(im) for sg, im in zip(self.source.gens, self.images)
                        if _first_moved(sg) >= 0]
            out = np.empty(es.n, dtype=np.int32)
            out[0] = 0
            Tt = et.table
            for i in range(1, es.n):
                out[i] = Tt[out[es.parent[i]], bfs_imgs[es.via_gen[i]]]
            self._index_map = out
        return self._index_map

    def is_valid(self) -> bool:
        """True iff the generator images respect the whole multiplication table."""
        es, et = self.source.etab(), self.target.etab()
        f = self.index_map()
        Ts, Tt = es.table, et.table
        for k in range(len(es._bfs_gens)):
            g = es.idx(es._bfs_gens[k])
            if not np.array_equal(f[Ts[:, g]], Tt[f, f[g]]):
                return False
        return True

    def is_bijective(self) -> bool:
        if self.source.order() != self.target.order():
            return False
        f = self.index_map()
        return len(np.unique(f)) == len(f)

    def kernel(self) -> SubgroupHandle:
        f = self.index_map()
        return subgroup_from_indices(self.source, np.nonzero(f == 0)[0])

    def image_order(self) -> int:
        return len(np.unique(self.index_map()))

    def __repr__(self) -> str:
        return f"GroupHomomorphism(|src|={self.source.order()}, |dst|={self.target.order()})"


def verify_homomorphism(h: GroupHomomorphism) -> bool:
    return h.is_valid()


# -- the automorphism group --------------------------------------------------

class AutomorphismGroup:
    """Aut(base) with stored generator index maps and a faithful action on
    the non-identity elements of base."""

    def __init__(self, base: PermGroup, gen_maps: list[np.ndarray], count: int):
        self.base = base
        self.maps = gen_maps
        self.count = count
        n = base.etab().n
        deg = max(n - 1, 1)
        perms = [m[1:] - 1 for m in gen_maps] if n > 1 else []
        if not perms:
            perms = [pidentity(deg)]
        self.action = PermGroup(deg, perms, names=[f"f{i}" for i in range(len(perms))])

    def order(self) -> int:
        return self.count

    @property
    def generator_maps(self) -> list[GroupHomomorphism]:
        et = self.base.etab()
        out = []
        for m in self.maps:
            images = [et.E[m[i]] for i in et.gen_indices]
            out.append(GroupHomomorphism(self.base, self.base, images))
        return out

    # -- subgroup actions ----------------------------------------------------

    def _map_of_action_elt(self, perm: np.ndarray) -> np.ndarray:
        """Lift an action permutation (degree n-1) back to an index map."""
        n = self.base.etab().n
        out = np.empty(n, dtype=np.int32)
        out[0] = 0
        out[1:] = perm + 1
        return out

    def apply_to_mask(self, m: np.ndarray, mask: np.ndarray) -> np.ndarray:
        out = np.zeros_like(mask)
        out[m[np.nonzero(mask)[0]]] = 1
        return out

    def orbit_of_subgroup(self, n: SubgroupHandle) -> tuple[list[np.ndarray], list[np.ndarray]]:
        """BFS orbit of the subgroup's mask under the stored generators.

        Returns (masks, transversal index maps u with orbit[k] = u_k(n)).
        """
        et = self.base.etab()
        start = n.mask()
        ident = np.arange(et.n, dtype=np.int32)
        masks = [start]
        trans = [ident]
        seen = {start.tobytes(): 0}
        head = 0
        while head < len(masks):
            cur_mask, cur_u = masks[head], trans[head]
            head += 1
            for m in self.maps:
                nxt = self.apply_to_mask(m, cur_mask)
                key = nxt.tobytes()
                if key not in seen:
                    seen[key] = len(masks)
                    masks.append(nxt)
                    trans.append(m[cur_u])
        return masks, trans

    def multiplicity(self, n: SubgroupHandle) -> int:
        masks, _ = self.orbit_of_subgroup(n)
        return len(masks)

    def is_characteristic(self, n: SubgroupHandle) -> bool:
        mask = n.mask()
        return all(np.array_equal(self.apply_to_mask(m, mask), mask) for m in self.maps)

    def kernel_fixing_generators(self, n: SubgroupHandle) -> SubgroupHandle:
        """Subgroup generated by the stored generators that fix n setwise.

        This replicates the generator-filter method: it can be a proper
        subgroup of the true setwise stabilizer.
        """
        mask = n.mask()
        keep = [m for m in self.maps
                if np.array_equal(self.apply_to_mask(m, mask), mask)]
        return self._action_subgroup(keep)

    def setwise_stabilizer(self, n: SubgroupHandle) -> SubgroupHandle:
        """The full stabilizer {f in Aut : f(n) = n}, via Schreier generators
        on the subgroup orbit."""
        et = self.base.etab()
        masks, trans = self.orbit_of_subgroup(n)
        index = {m.tobytes(): i for i, m in enumerate(masks)}
        inv_trans = []
        for u in trans:
            iu = np.empty_like(u)
            iu[u] = np.arange(len(u), dtype=u.dtype)
            inv_trans.append(iu)
        schreier: list[np.ndarray] = []
        seen_keys = set()
        for i, (mask_i, u) in enumerate(zip(masks, trans)):
            for m in self.maps:
                dest = index[self.apply_to_mask(m, mask_i).tobytes()]
                w = inv_trans[dest][m[u]]  # u then m then u_dest^-1
                key = w.tobytes()
                if key not in seen_keys:
                    seen_keys.add(key)
                    schreier.append(w)
        return self._action_subgroup(schreier)

    def _action_subgroup(self, maps: list[np.ndarray]) -> SubgroupHandle:
        perms = [m[1:] - 1 for m in maps]
        if not perms:
            perms = [pidentity(self.action.degree)]
        return SubgroupHandle(self.action, perms)

    def inner_subgroup(self) -> SubgroupHandle:
        et = self.base.etab()
        T, inv = et.table, et.inv
        maps = []
        for g in et.gen_indices:
            maps.append(T[T[inv[g], np.arange(et.n)], g].astype(np.int32))
        return self._action_subgroup(maps)

    def __repr__(self) -> str:
        return f"AutomorphismGroup(base order {self.base.order()}, order {self.count})"


def _candidate_arrays(fp_src: np.ndarray, fp_dst: np.ndarray,
                      gen_seq: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    cands = []
    for g in gen_seq:
        cands.append(np.nonzero(fp_dst == fp_src[g])[0].astype(np.int32))
    off = np.zeros(len(cands) + 1, dtype=np.int64)
    for i, c in enumerate(cands):
        off[i + 1] = off[i] + len(c)
    flat = np.concatenate(cands) if cands else np.zeros(0, dtype=np.int32)
    return flat, off


_COLLECT_ROWS = 192


def automorphism_group(group: PermGroup, cap: Optional[int] = None) -> AutomorphismGroup:
    """Compute Aut(group) by fingerprint-pruned backtracking."""
    cap = aut_size_cap() if cap is None else cap
    n = group.order()
    if n > cap:
        raise ValueError(f"group order {n} exceeds automorphism cap {cap}")
    et = group.etab()
    if et.n == 1:
        return AutomorphismGroup(group, [], 1)
    T = et.table
    fp = element_fingerprints(group)
    gen_seq = greedy_generating_sequence(group)
    cand_flat, cand_off = _candidate_arrays(fp, fp, gen_seq)

    out = np.zeros((_COLLECT_ROWS, et.n), dtype=np.int32)
    found, collected = kernels.aut_search(T, gen_seq, cand_flat, cand_off, 1, out)
    if found > _COLLECT_ROWS:
        # sample leaves evenly instead; retry with nearby strides if the
        # sample fails to generate everything
        for attempt in range(6):
            stride = max(1, found // _COLLECT_ROWS + 1 + attempt)
            out[:] = 0
            _, collected = kernels.aut_search(T, gen_seq, cand_flat, cand_off, stride, out)
            gens = _reduce_generators(out[:collected], et.n, found)
            if gens is not None:
                return AutomorphismGroup(group, gens, found)
        raise RuntimeError("automorphism sampling failed to generate the full group")
    gens = _reduce_generators(out[:collected], et.n, found)
    if gens is None:
        raise RuntimeError("automorphism enumeration inconsistent with its own count")
    return AutomorphismGroup(group, gens, found)


def _reduce_generators(pool: np.ndarray, n: int, target: int) -> Optional[list[np.ndarray]]:
    """Greedy minimal generating subset of the pooled maps; None if the
    pool generates fewer than ``target`` maps."""
    from .group import StabChain

    deg = max(n - 1, 1)
    chosen: list[np.ndarray] = []
    chain = StabChain(deg, [])
    for row in pool:
        perm = row[1:] - 1 if n > 1 else pidentity(1)
        if chain.contains(perm):
            continue
        chosen.append(row.copy())
        chain = StabChain(deg, [m[1:] - 1 for m in chosen])
        if chain.order() == target:
            return chosen
    if chain.order() == target:
        return chosen
    return None


def isomorphism_test(g: PermGroup, h: PermGroup,
                     cap: Optional[int] = None) -> Optional[GroupHomomorphism]:
    """An isomorphism g -> h, or None.  Cheap invariants first, then a
    fingerprint-pruned backtracking search."""
    cap = aut_size_cap() if cap is None else cap
    if g.order() != h.order():
        return None
    if g.order() > cap:
        raise ValueError(f"order {g.order()} exceeds cap {cap}")
    if g.order() == 1:
        return GroupHomomorphism(g, h, [h.identity() for _ in g.gens])
    if g.is_abelian() != h.is_abelian():
        return None
    if order_structure(g) != order_structure(h):
        return None
    if center(g).order() != center(h).order():
        return None
    if [s.order() for s in derived_series(g)] != [s.order() for s in derived_series(h)]:
        return None
    eg, eh = g.etab(), h.etab()
    cid_g = conjugacy_class_ids(g)
    cid_h = conjugacy_class_ids(h)
    if len(np.unique(cid_g)) != len(np.unique(cid_h)):
        return None
    fp_g, fp_h = paired_fingerprints(g, h)
    vals_g, counts_g = np.unique(fp_g, return_counts=True)
    vals_h, counts_h = np.unique(fp_h, return_counts=True)
    if not (np.array_equal(vals_g, vals_h) and np.array_equal(counts_g, counts_h)):
        return None
    gen_seq = greedy_generating_sequence(g)
    cand_flat, cand_off = _candidate_arrays(fp_g, fp_h, gen_seq)
    out = np.zeros((1, eg.n), dtype=np.int32)
    found, collected = kernels.iso_search(eg.table, eh.table, gen_seq,
                                          cand_flat, cand_off, 1, out, 1)
    if found == 0:
        return None
    fmap = out[0]
    images = [eh.E[fmap[i]] for i in eg.gen_indices]
    return GroupHomomorphism(g, h, images)


def is_complete(group: PermGroup, cap: Optional[int] = None) -> bool:
    """Trivial center and |Aut| = |G| (all automorphisms inner)."""
    if center(group).order() != 1:
        return False
    return automorphism_group(group, cap=cap).order() == group.order()
