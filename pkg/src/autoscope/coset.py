"""Coset enumeration over a presentation.

The enumerator is the relator-scanning (HLT) strategy with immediate
coincidence handling, followed by a breadth-first standardization pass.
For a complete table the standardized form depends only on the
presentation and the subgroup generators, not on the definition history,
so results are reproducible run to run.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .words import Presentation, Word, parse_word

DEFAULT_MAX_COSETS = 1_000_000


class EnumerationOverflow(RuntimeError):
    """Coset limit hit: raise the cap or check that the group is finite."""

    def __init__(self, max_cosets: int):
        super().__init__(
            f"coset enumeration exceeded {max_cosets} cosets; "
            "increase max_cosets (AUTOSCOPE_MAX_COSETS) or check the presentation "
            "for an infinite group"
        )
        self.max_cosets = max_cosets


def _word_to_cols(word: Word, col_of: dict[str, int]) -> tuple[int, ...]:
    """Flatten a word into a sequence of column indices (gen or inverse)."""
    cols = []
    for gen, exp in word.factors:
        col = col_of[gen]
        step = col if exp > 0 else col ^ 1
        cols.extend([step] * abs(exp))
    return tuple(cols)


@dataclass
class CosetTable:
    presentation: Presentation
    subgroup_words: tuple[Word, ...]
    table: np.ndarray  # (n_cosets, 2*n_gens), 0-based coset indices
    status: str = "complete"

    @property
    def n_cosets(self) -> int:
        return self.table.shape[0]

    def column(self, gen_index: int) -> np.ndarray:
        return self.table[:, 2 * gen_index]


def default_max_cosets() -> int:
    env = os.environ.get("AUTOSCOPE_MAX_COSETS")
    if env:
        return int(env)
    return DEFAULT_MAX_COSETS


def enumerate_cosets(
    pres: Presentation,
    subgroup: Sequence[Word | str] = (),
    max_cosets: Optional[int] = None,
) -> CosetTable:
    """Enumerate cosets of ``<subgroup>`` in the presented group.

    Returns a standardized, complete coset table or raises
    :class:`EnumerationOverflow`.
    """
    if max_cosets is None:
        max_cosets = default_max_cosets()
    gens = pres.generators
    ngen = len(gens)
    col_of = {g: 2 * i for i, g in enumerate(gens)}

    sub_words = tuple(parse_word(w) if isinstance(w, str) else w for w in subgroup)
    relator_cols = [_word_to_cols(r, col_of) for r in pres.relators]
    relator_cols = [r for r in relator_cols if r]
    subgroup_cols = [c for c in (_word_to_cols(w, col_of) for w in sub_words) if c]

    if ngen == 0:
        table = np.zeros((1, 0), dtype=np.int32)
        return CosetTable(pres, sub_words, table, "complete")

    # table[alpha][x]: 1-based coset or 0 for undefined; row 0 unused
    UNDEF = 0
    table: list[list[int]] = [None, [UNDEF] * (2 * ngen)]  # type: ignore[list-item]
    p = [0, 1]  # union-find over live cosets
    n_alive = 1
    dead_queue: list[tuple[int, int]] = []

    def rep(k: int) -> int:
        r = k
        while p[r] != r:
            r = p[r]
        while p[k] != r:
            p[k], k = r, p[k]
        return r

    def define(alpha: int, x: int) -> int:
        nonlocal n_alive
        if len(table) - 1 >= max_cosets:
            raise EnumerationOverflow(max_cosets)
        table.append([UNDEF] * (2 * ngen))
        beta = len(table) - 1
        p.append(beta)
        n_alive += 1
        table[alpha][x] = beta
        table[beta][x ^ 1] = alpha
        return beta

    def merge(a: int, b: int):
        a, b = rep(a), rep(b)
        if a == b:
            return
        if a > b:
            a, b = b, a
        nonlocal n_alive
        p[b] = a
        n_alive -= 1
        dead_queue.append((a, b))

    def set_entry(alpha: int, x: int, beta: int):
        """Record alpha^x = beta, merging on collision."""
        cur = table[alpha][x]
        if cur == UNDEF:
            table[alpha][x] = beta
            cur2 = table[beta][x ^ 1]
            if cur2 == UNDEF:
                table[beta][x ^ 1] = alpha
            else:
                merge(cur2, alpha)
        else:
            merge(cur, beta)

    def process_coincidences():
        while dead_queue:
            a, b = dead_queue.pop()
            a = rep(a)
            row = table[b]
            for x in range(2 * ngen):
                delta = row[x]
                if delta == UNDEF:
                    continue
                delta = rep(delta)
                row[x] = UNDEF
                # transfer b^x = delta onto a
                set_entry(rep(a), x, delta)
            # note: set_entry may push more pairs onto dead_queue

    def scan_and_fill(alpha: int, word: tuple[int, ...]):
        """Scan ``word`` at alpha, defining cosets for gaps; deduce at closure."""
        f, b = alpha, alpha
        i, j = 0, len(word) - 1
        while True:
            # scan forward as far as possible
            while i <= j:
                nxt = table[f][word[i]]
                if nxt == UNDEF:
                    break
                f = rep(nxt)
                i += 1
            if i > j:
                if f != b:
                    merge(f, b)
                    process_coincidences()
                return
            # scan backward
            while j >= i:
                prv = table[b][word[j] ^ 1]
                if prv == UNDEF:
                    break
                b = rep(prv)
                j -= 1
            if j < i:
                # both scans met over the same letters: the end cosets coincide
                merge(f, b)
                process_coincidences()
                return
            if j == i:
                # exactly one undefined letter left: deduce it
                set_entry(f, word[i], b)
                process_coincidences()
                return
            # fill the gap with a fresh coset and continue forward
            f = define(f, word[i])
            i += 1

    for w in subgroup_cols:
        scan_and_fill(1, w)

    alpha = 1
    while alpha < len(table):
        if rep(alpha) != alpha:
            alpha += 1
            continue
        for rel in relator_cols:
            scan_and_fill(alpha, rel)
            if rep(alpha) != alpha:
                break
        if rep(alpha) == alpha:
            for x in range(2 * ngen):
                if table[alpha][x] == UNDEF:
                    define(alpha, x)
        alpha += 1

    live = [k for k in range(1, len(table)) if rep(k) == k]
    # compress entries onto representatives
    index_of = {c: i for i, c in enumerate(live)}
    n = len(live)
    raw = np.empty((n, 2 * ngen), dtype=np.int32)
    for i, c in enumerate(live):
        row = table[c]
        for x in range(2 * ngen):
            v = row[x]
            if v == UNDEF:
                raise RuntimeError("incomplete table after enumeration")
            raw[i, x] = index_of[rep(v)]

    return CosetTable(pres, sub_words, _standardize(raw), "complete")


def _standardize(raw: np.ndarray) -> np.ndarray:
    """Renumber cosets in BFS order over columns; canonical for fixed input."""
    n, width = raw.shape
    new_of = np.full(n, -1, dtype=np.int32)
    order = np.empty(n, dtype=np.int32)
    new_of[0] = 0
    order[0] = 0
    count = 1
    head = 0
    while head < count:
        c = order[head]
        head += 1
        for x in range(width):
            d = raw[c, x]
            if new_of[d] < 0:
                new_of[d] = count
                order[count] = d
                count += 1
    if count != n:
        raise RuntimeError("coset graph not connected")
    out = np.empty_like(raw)
    for c in range(n):
        out[new_of[c]] = new_of[raw[c]]
    return out


def perm_rep(table: CosetTable):
    """The permutation action of the generators on the cosets."""
    from .group import PermGroup

    n = table.n_cosets
    gens = [table.table[:, 2 * i].astype(np.int32) for i in range(len(table.presentation.generators))]
    return PermGroup(n if n > 0 else 1, gens, names=list(table.presentation.generators))
