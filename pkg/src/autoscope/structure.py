"""Structural queries on a finite group via its multiplication table.

Everything here works on element *indices* of a :class:`~autoscope.group.PermGroup`'s
element table; subgroups travel as index arrays or membership masks.
"""

from __future__ import annotations

import math
from typing import Iterable, Optional, Sequence

import numpy as np

from . import kernels
from .group import ElementTable, PermGroup, SubgroupHandle


# -- conjugacy ---------------------------------------------------------------

def conjugacy_class_ids(group: PermGroup) -> np.ndarray:
    """Per-element class label (= least element index in the class)."""
    et = group.etab()
    return kernels.class_ids(et.table, et.inv, et.gen_indices)


def conjugacy_classes(group: PermGroup) -> list[np.ndarray]:
    """Conjugacy classes as index arrays, ordered by least member."""
    cid = conjugacy_class_ids(group)
    reps = np.unique(cid)
    return [np.nonzero(cid == r)[0].astype(np.int32) for r in reps]


def order_structure(group: PermGroup) -> dict[int, int]:
    """Map element order -> count."""
    vals, counts = np.unique(group.etab().orders, return_counts=True)
    return {int(v): int(c) for v, c in zip(vals, counts)}


def format_order_structure(struct: dict[int, int]) -> str:
    return " ".join(f"{o}^{c}" for o, c in sorted(struct.items()))


def exponent(group: PermGroup) -> int:
    return int(np.lcm.reduce(group.etab().orders.astype(np.int64)))


# -- centralizers and the center --------------------------------------------

def centralizer_mask(group: PermGroup, elements: Sequence[int]) -> np.ndarray:
    """Mask of elements commuting with every listed element index."""
    T = group.etab().table
    n = T.shape[0]
    ok = np.ones(n, dtype=bool)
    for e in elements:
        ok &= T[:, e] == T[e, :]
    return ok.astype(np.uint8)


def center(group: PermGroup) -> SubgroupHandle:
    et = group.etab()
    mask = centralizer_mask(group, et.gen_indices.tolist())
    return subgroup_from_indices(group, np.nonzero(mask)[0])


def centralizer(group: PermGroup, elements: Sequence[int]) -> SubgroupHandle:
    mask = centralizer_mask(group, elements)
    return subgroup_from_indices(group, np.nonzero(mask)[0])


def subgroup_from_indices(group: PermGroup, indices: Iterable[int]) -> SubgroupHandle:
    et = group.etab()
    idx = np.asarray(list(indices), dtype=np.int64)
    handle = SubgroupHandle(group, [et.E[i] for i in idx])
    mask = np.zeros(et.n, dtype=np.uint8)
    mask[idx] = 1
    handle._mask = mask
    handle._order = int(len(idx))
    return handle


def subgroup_from_mask(group: PermGroup, mask: np.ndarray) -> SubgroupHandle:
    return subgroup_from_indices(group, np.nonzero(mask)[0])


# -- normal subgroups --------------------------------------------------------

def normal_closure_mask(group: PermGroup, seed: Sequence[int]) -> np.ndarray:
    """Membership mask of the normal closure of the seed element indices."""
    et = group.etab()
    T, inv = et.table, et.inv
    gens = et.gen_indices
    members = np.asarray(sorted(set(int(s) for s in seed)), dtype=np.int32)
    while True:
        mask = kernels.close_mask(T, members)
        cur = np.nonzero(mask)[0].astype(np.int32)
        # conjugate the subgroup by each group generator; collect anything new
        new = []
        for g in gens:
            conj = T[T[inv[g], cur], g]
            outside = conj[mask[conj] == 0]
            if outside.size:
                new.append(outside)
        if not new:
            return mask
        members = np.unique(np.concatenate([cur] + new)).astype(np.int32)


def is_normal_mask(group: PermGroup, mask: np.ndarray) -> bool:
    et = group.etab()
    T, inv = et.table, et.inv
    cur = np.nonzero(mask)[0]
    for g in et.gen_indices:
        conj = T[T[inv[g], cur], g]
        if not mask[conj].all():
            return False
    return True


def derived_subgroup(group: PermGroup) -> SubgroupHandle:
    et = group.etab()
    T, inv = et.table, et.inv
    gi = et.gen_indices
    comms = set()
    for a in gi:
        for b in gi:
            comms.add(int(T[T[T[inv[a], inv[b]], a], b]))
    mask = normal_closure_mask(group, sorted(comms))
    return subgroup_from_mask(group, mask)


def derived_series(group: PermGroup) -> list[SubgroupHandle]:
    out = [subgroup_from_indices(group, range(group.etab().n))]
    while out[-1].order() > 1:
        nxt = derived_subgroup(out[-1].as_group())
        # re-express inside the original parent
        et = group.etab()
        sub_et = out[-1].as_group().etab()
        idx = [et.idx(sub_et.E[i]) for i in nxt.indices()]
        handle = subgroup_from_indices(group, idx)
        if handle.order() == out[-1].order():
            break
        out.append(handle)
    return out


def normal_subgroups(group: PermGroup) -> list[SubgroupHandle]:
    """All normal subgroups, as handles, sorted by (order, mask key).

    Closes the set of principal normal closures (one per conjugacy class)
    under pairwise joins; every normal subgroup is a join of principal ones.
    """
    et = group.etab()
    T = et.table
    n = et.n
    classes = conjugacy_classes(group)

    found: dict[bytes, np.ndarray] = {}

    def add(mask: np.ndarray) -> bytes:
        key = np.packbits(mask).tobytes()
        if key not in found:
            found[key] = mask
        return key

    trivial = np.zeros(n, dtype=np.uint8)
    trivial[0] = 1
    add(trivial)
    principals = []
    for cls in classes:
        mask = normal_closure_mask(group, [int(cls[0])])
        if add(mask) not in [p[0] for p in principals]:
            principals.append((np.packbits(mask).tobytes(), mask))

    # joins: product of two normal subgroups is already a subgroup
    frontier = list(found.values())
    while frontier:
        next_frontier = []
        for mask in frontier:
            a_idx = np.nonzero(mask)[0]
            for _, pmask in principals:
                b_idx = np.nonzero(pmask)[0]
                if pmask[a_idx].all() or mask[b_idx].all():
                    continue  # containment either way: join is the larger
                prod = np.unique(T[np.ix_(a_idx, b_idx)])
                joined = np.zeros(n, dtype=np.uint8)
                joined[prod] = 1
                key = np.packbits(joined).tobytes()
                if key not in found:
                    found[key] = joined
                    next_frontier.append(joined)
        frontier = next_frontier

    handles = [subgroup_from_mask(group, m) for m in found.values()]
    handles.sort(key=lambda h: (h.order(), h.key()))
    return handles


def quotient(group: PermGroup, normal: SubgroupHandle) -> PermGroup:
    """The quotient by a normal subgroup, as the right-coset action."""
    et = group.etab()
    T = et.table
    mask = normal.mask()
    if not is_normal_mask(group, mask):
        raise ValueError("subgroup is not normal; quotient undefined")
    n_idx = np.nonzero(mask)[0]
    # right coset of x is N·x; label by least member
    coset_label = np.full(et.n, -1, dtype=np.int64)
    reps = []
    for x in range(et.n):
        if coset_label[x] >= 0:
            continue
        members = T[n_idx, x]
        coset_label[members] = len(reps)
        reps.append(int(members.min()))
    reps_arr = np.array(reps, dtype=np.int64)
    gens = []
    for g in et.gen_indices:
        gens.append(coset_label[T[reps_arr, g]].astype(np.int32))
    return PermGroup(len(reps), gens, names=group.names)


# -- Sylow subgroups ---------------------------------------------------------

def _p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


def normalizer_mask(group: PermGroup, sub_mask: np.ndarray) -> np.ndarray:
    """Mask of elements g with g^-1 S g = S."""
    et = group.etab()
    T, inv = et.table, et.inv
    idx = np.nonzero(sub_mask)[0]
    out = np.zeros(et.n, dtype=np.uint8)
    for g in range(et.n):
        conj = T[T[inv[g], idx], g]
        if sub_mask[conj].all():
            out[g] = 1
    return out


def sylow_subgroup(group: PermGroup, p: int) -> SubgroupHandle:
    """A Sylow p-subgroup, grown through normalizers."""
    et = group.etab()
    T = et.table
    orders = et.orders
    target = _p_part(et.n, p)
    if target == 1:
        return subgroup_from_indices(group, [0])
    # seed: any element of order p
    seeds = np.nonzero(orders == p)[0]
    if seeds.size == 0:
        raise ValueError(f"no element of order {p}")
    members = np.array([int(seeds[0])], dtype=np.int32)
    mask = kernels.close_mask(T, members)
    while int(mask.sum()) < target:
        nz = normalizer_mask(group, mask)
        grow = np.nonzero(nz & ~mask)[0]
        # any p-element of the normalizer extends the p-subgroup
        grow = grow[np.isin(orders[grow], [p**k for k in range(1, 30) if p**k <= et.n])]
        if grow.size == 0:
            raise RuntimeError("sylow growth stalled")
        members = np.concatenate([np.nonzero(mask)[0].astype(np.int32), grow[:1].astype(np.int32)])
        mask = kernels.close_mask(T, members)
    return subgroup_from_mask(group, mask)


# -- abelian invariants ------------------------------------------------------

def abelian_invariants(group: PermGroup) -> list[int]:
    """Invariant factors of an abelian group (largest first).

    Raises if the group is not abelian.
    """
    et = group.etab()
    if not group.is_abelian():
        raise ValueError("group is not abelian")
    n = et.n
    if n == 1:
        return []
    orders = et.orders
    primes = sorted(_prime_factors(n))
    per_prime: dict[int, list[int]] = {}
    for p in primes:
        # m_k = log_p #{x : x^{p^k} = 1} = sum_i min(lambda_i, k)
        ms = [0]
        k = 1
        while True:
            cnt = int(np.count_nonzero(p**k % orders.astype(np.int64) == 0))
            mk = round(math.log(cnt, p))
            ms.append(mk)
            if cnt == _p_part(n, p):
                break
            k += 1
        # conjugate partition: number of parts >= k is ms[k] - ms[k-1]
        parts_ge = [ms[k] - ms[k - 1] for k in range(1, len(ms))]
        lam = []
        for i, cnt_ge in enumerate(parts_ge, start=1):
            while len(lam) < cnt_ge:
                lam.append(0)
            for j in range(cnt_ge):
                lam[j] += 1
        per_prime[p] = sorted(lam, reverse=True)
    width = max(len(v) for v in per_prime.values())
    factors = []
    for i in range(width):
        f = 1
        for p, lam in per_prime.items():
            if i < len(lam):
                f *= p ** lam[i]
        factors.append(f)
    return factors


def _prime_factors(n: int) -> set[int]:
    out = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


def abelian_type(group: PermGroup, p: int) -> tuple[int, ...]:
    """Partition exponents of an abelian p-group: C_{p^a} x C_{p^b} x ... -> (a, b, ...)."""
    factors = abelian_invariants(group)
    lam = []
    for f in factors:
        k = 0
        while f % p == 0:
            f //= p
            k += 1
        if k:
            lam.append(k)
    return tuple(sorted(lam, reverse=True))


# -- direct decompositions ---------------------------------------------------

def direct_factor_pairs(group: PermGroup, normals: Optional[list[SubgroupHandle]] = None):
    """Yield (N, M) normal pairs with G = N x M internally, |N| <= |M|."""
    n = group.etab().n
    if normals is None:
        normals = normal_subgroups(group)
    by_order: dict[int, list[SubgroupHandle]] = {}
    for h in normals:
        by_order.setdefault(h.order(), []).append(h)
    for a in normals:
        oa = a.order()
        if oa == 1 or oa * oa > n:
            continue
        if n % oa:
            continue
        for b in by_order.get(n // oa, []):
            inter = a.mask() & b.mask()
            if int(inter.sum()) == 1:
                yield a, b


def is_directly_indecomposable(group: PermGroup) -> bool:
    for _ in direct_factor_pairs(group):
        return False
    return True
