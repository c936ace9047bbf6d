"""Permutation groups: stabilizer chains, element tables, subgroups.

Permutations are int32 image arrays; ``pmul(p, q)`` applies ``p`` first
(right action, so ``i^(pq) = (i^p)^q``).  The stabilizer chain is the
deterministic Schreier-Sims construction with base points chosen as the
least moved point, so orders, membership tests and element enumerations
are reproducible.
"""

from __future__ import annotations

import math
from typing import Iterable, Optional, Sequence

import numpy as np

from . import kernels
from .words import Word

Perm = np.ndarray

ELEMENT_CAP = 1_000_000
TABLE_CAP = 20_000


def pidentity(n: int) -> Perm:
    return np.arange(n, dtype=np.int32)


def pmul(p: Perm, q: Perm) -> Perm:
    """Apply ``p`` then ``q``."""
    return q[p]


def pinv(p: Perm) -> Perm:
    out = np.empty_like(p)
    out[p] = np.arange(len(p), dtype=p.dtype)
    return out


def ppow(p: Perm, n: int) -> Perm:
    if n < 0:
        return ppow(pinv(p), -n)
    result = pidentity(len(p))
    base = p
    while n:
        if n & 1:
            result = pmul(result, base)
        base = pmul(base, base)
        n >>= 1
    return result


def perm_order(p: Perm) -> int:
    seen = np.zeros(len(p), dtype=bool)
    order = 1
    for start in range(len(p)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        order = math.lcm(order, length)
    return order


def perm_cycles(p: Perm, one_based: bool = True) -> str:
    seen = np.zeros(len(p), dtype=bool)
    shift = 1 if one_based else 0
    parts = []
    for start in range(len(p)):
        if seen[start] or p[start] == start:
            seen[start] = True
            continue
        cyc = []
        j = start
        while not seen[j]:
            seen[j] = True
            cyc.append(j + shift)
            j = p[j]
        parts.append("(" + ",".join(map(str, cyc)) + ")")
    return "".join(parts) if parts else "()"


def _first_moved(p: Perm) -> int:
    diff = np.nonzero(p != np.arange(len(p), dtype=p.dtype))[0]
    return int(diff[0]) if diff.size else -1


class _Level:
    __slots__ = ("base", "gens", "orbit", "orbit_list", "checked")

    def __init__(self, base: int, degree: int):
        self.base = base
        self.gens: list[Perm] = []
        self.orbit: dict[int, Perm] = {base: pidentity(degree)}
        self.orbit_list: list[int] = [base]
        self.checked: list[int] = []  # per gen: orbit positions verified so far


class StabChain:
    """Deterministic Schreier-Sims stabilizer chain."""

    def __init__(self, degree: int, gens: Sequence[Perm]):
        self.degree = degree
        self.levels: list[_Level] = []
        for g in gens:
            self._absorb(np.asarray(g, dtype=np.int32), 0)
        self._complete()

    def _absorb(self, g: Perm, start: int):
        residue, level = self._sift(g, start)
        if _first_moved(residue) < 0:
            return
        if level == len(self.levels):
            self.levels.append(_Level(_first_moved(residue), self.degree))
        # the residue fixes the bases of levels start..level-1, so it belongs
        # to the generator set of every level from start down to level;
        # keeping the sets nested is what makes the Schreier tests sufficient
        for j in range(start, level + 1):
            lvl = self.levels[j]
            lvl.gens.append(residue)
            lvl.checked.append(0)
            # re-close the orbit; existing transversal entries never change
            head = 0
            while head < len(lvl.orbit_list):
                pt = lvl.orbit_list[head]
                head += 1
                u = lvl.orbit[pt]
                for s in lvl.gens:
                    q = int(s[pt])
                    if q not in lvl.orbit:
                        lvl.orbit[q] = pmul(u, s)
                        lvl.orbit_list.append(q)

    def _sift(self, g: Perm, start: int) -> tuple[Perm, int]:
        for i in range(start, len(self.levels)):
            lvl = self.levels[i]
            pt = int(g[lvl.base])
            if pt not in lvl.orbit:
                return g, i
            g = pmul(g, pinv(lvl.orbit[pt]))
        return g, len(self.levels)

    def _complete(self):
        # verify Schreier generators; orbit and gen lists only append, so a
        # per-generator watermark over orbit positions is safe to resume
        progress = True
        while progress:
            progress = False
            for i, lvl in enumerate(self.levels):
                k = 0
                while k < len(lvl.gens):
                    s = lvl.gens[k]
                    while lvl.checked[k] < len(lvl.orbit_list):
                        pt = lvl.orbit_list[lvl.checked[k]]
                        lvl.checked[k] += 1
                        u = lvl.orbit[pt]
                        u2 = lvl.orbit[int(s[pt])]
                        schreier = pmul(pmul(u, s), pinv(u2))
                        if _first_moved(schreier) >= 0:
                            self._absorb(schreier, i + 1)
                            progress = True
                    k += 1

    @property
    def base(self) -> list[int]:
        return [lvl.base for lvl in self.levels]

    def order(self) -> int:
        n = 1
        for lvl in self.levels:
            n *= len(lvl.orbit_list)
        return n

    def contains(self, g: Perm) -> bool:
        residue, _ = self._sift(np.asarray(g, dtype=np.int32), 0)
        return _first_moved(residue) < 0

    def sift(self, g: Perm) -> Perm:
        residue, _ = self._sift(np.asarray(g, dtype=np.int32), 0)
        return residue


class ElementTable:
    """BFS enumeration of all elements, with index lookup and products."""

    def __init__(self, group: "PermGroup", cap: int = ELEMENT_CAP):
        order = group.order()
        if order > cap:
            raise ValueError(f"group order {order} exceeds element cap {cap}")
        degree = group.degree
        gens = [g for g in group.gens if _first_moved(g) >= 0]
        rows = [pidentity(degree)]
        parent = [0]
        via = [-1]
        index: dict[bytes, int] = {rows[0].tobytes(): 0}
        head = 0
        while head < len(rows):
            cur = rows[head]
            for gi, g in enumerate(gens):
                new = pmul(cur, g)
                key = new.tobytes()
                if key not in index:
                    index[key] = len(rows)
                    rows.append(new)
                    parent.append(head)
                    via.append(gi)
            head += 1
        if len(rows) != order:
            raise RuntimeError("element enumeration disagrees with chain order")
        self.group = group
        self.n = order
        self.E = np.array(rows, dtype=np.int32)
        self.parent = np.array(parent, dtype=np.int32)
        self.via_gen = np.array(via, dtype=np.int32)
        self._bfs_gens = gens
        self._index = index
        self._inv: Optional[np.ndarray] = None
        self._orders: Optional[np.ndarray] = None
        self._table: Optional[np.ndarray] = None
        self._gen_idx: Optional[np.ndarray] = None

    def idx(self, perm: Perm) -> int:
        key = np.asarray(perm, dtype=np.int32).tobytes()
        got = self._index.get(key)
        if got is None:
            raise KeyError("permutation is not an element of this group")
        return got

    def idx_or_none(self, perm: Perm) -> Optional[int]:
        return self._index.get(np.asarray(perm, dtype=np.int32).tobytes())

    @property
    def gen_indices(self) -> np.ndarray:
        """Indices of the group's generators (identity gens resolve to 0)."""
        if self._gen_idx is None:
            self._gen_idx = np.array([self.idx(g) for g in self.group.gens], dtype=np.int32)
        return self._gen_idx

    @property
    def inv(self) -> np.ndarray:
        if self._inv is None:
            out = np.empty(self.n, dtype=np.int32)
            for i in range(self.n):
                out[i] = self.idx(pinv(self.E[i]))
            self._inv = out
        return self._inv

    @property
    def orders(self) -> np.ndarray:
        if self._orders is None:
            self._orders = np.array([perm_order(self.E[i]) for i in range(self.n)], dtype=np.int32)
        return self._orders

    @property
    def table(self) -> np.ndarray:
        if self._table is None:
            if self.n > TABLE_CAP:
                raise ValueError(f"order {self.n} exceeds multiplication-table cap {TABLE_CAP}")
            self._table = self._build_table()
        return self._table

    def _build_table(self) -> np.ndarray:
        n, E = self.n, self.E
        dtype = np.int16 if n <= np.iinfo(np.int16).max else np.int32
        base = self.group.chain.base
        if not base:
            return np.zeros((1, 1), dtype=dtype)
        radix_ok = self.group.degree ** len(base) < 2**62
        if radix_ok:
            mult = (self.group.degree ** np.arange(len(base), dtype=np.int64))
            keys = (E[:, base].astype(np.int64) * mult).sum(axis=1)
            sort = np.argsort(keys, kind="stable")
            skeys = keys[sort]
            out = np.empty((n, n), dtype=dtype)
            for i in range(n):
                block = E[:, E[i]]  # row j = e_i then e_j
                bk = (block[:, base].astype(np.int64) * mult).sum(axis=1)
                out[i] = sort[np.searchsorted(skeys, bk)]
            return out
        out = np.empty((n, n), dtype=dtype)
        for i in range(n):
            block = E[:, E[i]]
            out[i] = [self.idx(block[j]) for j in range(n)]
        return out

    def word_for(self, i: int) -> list[int]:
        """Generator indices (into the BFS generator list) composing element i."""
        path = []
        while i != 0:
            path.append(int(self.via_gen[i]))
            i = int(self.parent[i])
        return path[::-1]

    def extend_gen_map(self, images: Sequence[int]) -> np.ndarray:
        """Extend images of the BFS generators to an index map on all elements.

        ``images[k]`` is the element index assigned to BFS generator k; the
        map follows the BFS tree, so it is the unique homomorphic extension
        when one exists (verify separately).
        """
        out = np.empty(self.n, dtype=np.int32)
        out[0] = 0
        T = self.table
        img = np.asarray(images, dtype=np.int64)
        for i in range(1, self.n):
            out[i] = T[out[self.parent[i]], img[self.via_gen[i]]]
        return out

    def index_map_of_perm_action(self, action: Perm) -> np.ndarray:
        """Index map of a degree-preserving automorphism given pointwise.

        ``action`` conjugates: element p maps to ``action^-1 * p * action``.
        """
        a = np.asarray(action, dtype=np.int32)
        ai = pinv(a)
        out = np.empty(self.n, dtype=np.int32)
        for i in range(self.n):
            out[i] = self.idx(pmul(pmul(ai, self.E[i]), a))
        return out


class PermGroup:
    """A finite permutation group on ``degree`` points."""

    def __init__(self, degree: int, gens: Iterable[Perm], names: Optional[Sequence[str]] = None):
        self.degree = int(degree)
        self.gens = [np.asarray(g, dtype=np.int32) for g in gens]
        for g in self.gens:
            if g.shape != (self.degree,) or not np.array_equal(np.sort(g), np.arange(self.degree)):
                raise ValueError("generator is not a permutation of the stated degree")
        self.names = list(names) if names is not None else None
        if self.names is not None and len(self.names) != len(self.gens):
            raise ValueError("names must align with generators")
        self._chain: Optional[StabChain] = None
        self._etab: Optional[ElementTable] = None

    # -- chain-backed queries ------------------------------------------------

    @property
    def chain(self) -> StabChain:
        if self._chain is None:
            self._chain = StabChain(self.degree, self.gens)
        return self._chain

    def order(self) -> int:
        return self.chain.order()

    def contains(self, perm: Perm) -> bool:
        p = np.asarray(perm, dtype=np.int32)
        if p.shape != (self.degree,):
            return False
        return self.chain.contains(p)

    def is_trivial(self) -> bool:
        return all(_first_moved(g) < 0 for g in self.gens)

    def is_abelian(self) -> bool:
        for i, a in enumerate(self.gens):
            for b in self.gens[i + 1 :]:
                if not np.array_equal(pmul(a, b), pmul(b, a)):
                    return False
        return True

    # -- element table -------------------------------------------------------

    def etab(self, cap: int = ELEMENT_CAP) -> ElementTable:
        if self._etab is None:
            self._etab = ElementTable(self, cap)
        return self._etab

    def identity(self) -> Perm:
        return pidentity(self.degree)

    # -- words ---------------------------------------------------------------

    def evaluate(self, word: Word | str) -> Perm:
        """Evaluate a word in the named generators."""
        from .words import parse_word

        if isinstance(word, str):
            word = parse_word(word)
        if self.names is None:
            raise ValueError("group has no generator names; cannot evaluate words")
        lookup = {name: g for name, g in zip(self.names, self.gens)}
        out = pidentity(self.degree)
        for gen, exp in word.factors:
            if gen not in lookup:
                raise KeyError(f"unknown generator {gen!r}")
            out = pmul(out, ppow(lookup[gen], exp))
        return out

    def subgroup(self, gens: Iterable[Perm | Word | str]) -> "SubgroupHandle":
        resolved = []
        for g in gens:
            if isinstance(g, (Word, str)):
                resolved.append(self.evaluate(g))
            else:
                resolved.append(np.asarray(g, dtype=np.int32))
        return SubgroupHandle(self, resolved)

    def __repr__(self) -> str:
        got = f", order {self._chain.order()}" if self._chain is not None else ""
        return f"PermGroup(degree {self.degree}, {len(self.gens)} gens{got})"


class SubgroupHandle:
    """A subgroup of a parent :class:`PermGroup`, given by generators."""

    def __init__(self, parent: PermGroup, gens: Sequence[Perm]):
        self.parent = parent
        self.gens = [np.asarray(g, dtype=np.int32) for g in gens]
        self._mask: Optional[np.ndarray] = None
        self._group: Optional[PermGroup] = None
        self._order: Optional[int] = None

    def as_group(self) -> PermGroup:
        if self._group is None:
            self._group = PermGroup(self.parent.degree, self.gens or [pidentity(self.parent.degree)])
        return self._group

    def order(self) -> int:
        if self._order is None:
            if self._mask is not None:
                self._order = int(self._mask.sum())
            else:
                self._order = self.as_group().order()
        return self._order

    def mask(self) -> np.ndarray:
        """uint8 membership mask over the parent's element indices."""
        if self._mask is None:
            et = self.parent.etab()
            gen_idx = np.array([et.idx(g) for g in self.gens], dtype=np.int32)
            self._mask = kernels.close_mask(et.table, gen_idx)
        return self._mask

    def indices(self) -> np.ndarray:
        return np.nonzero(self.mask())[0].astype(np.int32)

    def key(self) -> bytes:
        """Canonical identity of the subgroup inside its parent."""
        return np.packbits(self.mask()).tobytes()

    def contains_index(self, i: int) -> bool:
        return bool(self.mask()[i])

    def index_in_parent(self) -> int:
        return self.parent.order() // self.order()

    def __repr__(self) -> str:
        return f"SubgroupHandle(order {self.order()} in degree-{self.parent.degree} parent)"


def from_cycles(degree: int, cycle_lists: Sequence[Sequence[Sequence[int]]], one_based: bool = True,
                names: Optional[Sequence[str]] = None) -> PermGroup:
    """Build a group from generators given as cycle lists."""
    gens = []
    shift = 1 if one_based else 0
    for cycles in cycle_lists:
        p = pidentity(degree)
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                p[a - shift] = b - shift
        gens.append(p)
    return PermGroup(degree, gens, names=names)
