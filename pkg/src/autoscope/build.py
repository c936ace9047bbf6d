"""Constructions: direct/semidirect products, order-32p extensions,
holomorphs, wreath products.

All constructors return :class:`~autoscope.group.PermGroup` instances on
explicitly chosen point sets, keeping degrees as small as faithfulness
allows so that downstream element tables stay cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .group import PermGroup, Perm, SubgroupHandle, pidentity, pmul


def _pad(p: Perm, before: int, after: int) -> Perm:
    deg = before + len(p) + after
    out = np.arange(deg, dtype=np.int32)
    out[before : before + len(p)] = np.asarray(p, dtype=np.int32) + before
    return out


def direct_product(a: PermGroup, b: PermGroup) -> PermGroup:
    """A x B acting on the disjoint union of the two point sets."""
    gens = [_pad(g, 0, b.degree) for g in a.gens]
    gens += [_pad(g, a.degree, 0) for g in b.gens]
    names = None
    if a.names is not None and b.names is not None:
        names = list(a.names) + list(b.names)
        if len(set(names)) != len(names):
            names = None
    out = PermGroup(a.degree + b.degree, gens, names=names)
    assert out.order() == a.order() * b.order()
    return out


ActionImage = Union["np.ndarray", "object"]  # index map or GroupHomomorphism


def _action_index_maps(n: PermGroup, action: Sequence[ActionImage]) -> list[np.ndarray]:
    from .aut import GroupHomomorphism

    et = n.etab()
    maps = []
    for img in action:
        if isinstance(img, GroupHomomorphism):
            if img.source is not n or img.target is not n:
                raise ValueError("action homomorphism must be an endomap of n")
            if not (img.is_valid() and img.is_bijective()):
                raise ValueError("action image is not an automorphism of n")
            maps.append(img.index_map())
        else:
            m = np.asarray(img, dtype=np.int32)
            if m.shape != (et.n,) or len(np.unique(m)) != et.n or m[0] != 0:
                raise ValueError("action image is not a bijective index map fixing 1")
            T = et.table
            if not np.array_equal(m[T], T[np.ix_(m, m)]):
                raise ValueError("action image does not respect multiplication")
            maps.append(m)
    return maps


def semidirect_product(n: PermGroup, h: PermGroup,
                       action: Sequence[ActionImage]) -> PermGroup:
    """N @ H for an action given by one automorphism of N per generator of H.

    The result acts on |N| + deg(H) points: N regularly on its own element
    set, H on its original points, and H's generators twist the N block by
    their action automorphisms.  Raises if the assignment fails to define a
    homomorphism H -> Aut(N) (detected by the order of the generated group).
    """
    if len(action) != len(h.gens):
        raise ValueError("need exactly one action image per generator of h")
    et = n.etab()
    maps = _action_index_maps(n, action)
    nn = et.n
    deg = nn + h.degree
    gens = []
    T = et.table
    for g in et.gen_indices:
        gens.append(_pad(T[:, g].astype(np.int32), 0, h.degree))
    for m, hg in zip(maps, h.gens):
        p = np.concatenate([m, np.asarray(hg, dtype=np.int32) + nn]).astype(np.int32)
        gens.append(p)
    names = None
    if n.names is not None and h.names is not None:
        names = list(n.names) + list(h.names)
        if len(set(names)) != len(names):
            names = None
    out = PermGroup(deg, gens, names=names)
    if out.order() != n.order() * h.order():
        raise ValueError("action does not define a homomorphism h -> Aut(n): "
                         f"got order {out.order()}, want {n.order() * h.order()}")
    return out


@dataclass
class ExtensionSpec:
    """A C_p @ X extension: X of order 32 acting on C_p through its index-2
    quotient by ``kernel`` (the acting cosets invert C_p)."""

    base: PermGroup          # regular degree-32 representation of X
    kernel: SubgroupHandle   # index-2 subgroup of base acting trivially
    prime: int
    base_id: Optional[int] = None

    def __post_init__(self):
        if self.prime < 3 or self.prime % 2 == 0:
            raise ValueError("prime must be odd and at least 3")
        if self.kernel.index_in_parent() != 2:
            raise ValueError("kernel must have index 2 in the base group")


def build_32p(spec: ExtensionSpec) -> PermGroup:
    """The split extension C_p @ X on 32 + p points.

    X keeps its regular action on 32 points; the extra generator ``d`` is a
    p-cycle; generators of X outside the kernel invert the p-block.
    """
    base, kernel, p = spec.base, spec.kernel, spec.prime
    nb = base.degree
    et = base.etab()
    mask = kernel.mask()
    invert = np.empty(p, dtype=np.int32)
    invert[0] = 0
    invert[1:] = p - np.arange(1, p, dtype=np.int32)
    gens = []
    for g, gi in zip(base.gens, et.gen_indices):
        tail = np.arange(p, dtype=np.int32) if mask[gi] else invert
        gens.append(np.concatenate([g, tail + nb]).astype(np.int32))
    shift = np.concatenate([
        np.arange(nb, dtype=np.int32),
        (np.arange(p, dtype=np.int32) + 1) % p + nb,
    ]).astype(np.int32)
    gens.append(shift)
    names = (list(base.names) + ["d"]) if base.names is not None and "d" not in base.names else None
    out = PermGroup(nb + p, gens, names=names)
    assert out.order() == base.order() * p
    return out


def holomorph(a: PermGroup, require_abelian: bool = True) -> PermGroup:
    """Hol(A) = A @ Aut(A) in its natural affine action on the elements of A."""
    from .aut import automorphism_group

    if require_abelian and not a.is_abelian():
        raise ValueError("holomorph requested for a nonabelian group")
    et = a.etab()
    T = et.table
    gens = [T[:, g].astype(np.int32) for g in et.gen_indices]
    A = automorphism_group(a)
    gens += [m.copy() for m in A.maps]
    out = PermGroup(et.n, gens)
    assert out.order() == a.order() * A.order()
    return out


def wreath_product(a: PermGroup, top: PermGroup) -> PermGroup:
    """A wr T on deg(a)*deg(top) points, blocks permuted by the top group.

    The top action must be transitive so the block-0 copy of A together
    with the top generators generates the full base A^k.
    """
    k = top.degree
    da = a.degree
    orbit = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for pt in frontier:
            for t in top.gens:
                q = int(t[pt])
                if q not in orbit:
                    orbit.add(q)
                    nxt.append(q)
        frontier = nxt
    if len(orbit) != k:
        raise ValueError("top group must be transitive on its points")
    gens = [_pad(g, 0, (k - 1) * da) for g in a.gens]
    for t in top.gens:
        p = np.empty(k * da, dtype=np.int32)
        for i in range(k):
            p[i * da : (i + 1) * da] = int(t[i]) * da + np.arange(da, dtype=np.int32)
        gens.append(p)
    out = PermGroup(k * da, gens)
    assert out.order() == a.order() ** k * top.order()
    return out
