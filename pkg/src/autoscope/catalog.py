"""The order-32 catalog: base groups, kernel rows, and 32p companions.

Two plain-text files under ``autoscope/data`` hold the catalog:
``table1.txt`` lists the 51 groups of order 32 (presentation plus the
published automorphism invariants) and ``tables23.txt`` lists the index-2
kernel rows (record type 2) and the order-32p groups without a normal
Sylow 2-subgroup (record type 3).  :func:`load_catalog` parses both,
checks the structural invariants of the data, and returns a
:class:`Catalog` whose groups are built lazily and cached.

Constructed groups are named by a small recipe language, interpreted by
:meth:`Catalog.construct`:

=================  ====================================================
``#17``            catalog group 17 (order 32)
``C12``            cyclic group
``C2^4``           elementary abelian group
``S3 S4 A4 D4``    symmetric / alternating / dihedral atoms
``Q2``             quaternion group of order 8
``SL23``           SL(2,3), of order 24
``P:<relators>``   coset enumeration of a presentation
``G:<cycles>;..``  permutation group, one cycle string per generator
``D:<r>;<r>;..``   direct product of the parts
``W:<r>;<r>``      wreath product, base ``wr`` top
``H:<r>;..``       holomorph of the direct product of the parts
``A:<id>;<p>``     catalog group <id> acting on C_p by an automorphism
                   of order p (the first such in element order)
``U:<id>``         automorphism group of catalog group <id>
``V:<label>``      automorphism group of an order-16 reference group
``R16:<label>``    an order-16 reference group
``T3:<index>``     record <index> of the order-32p table
``B:(<recipe>)``   automorphism group of the inner recipe's result
=================  ====================================================

Parts of a compound recipe are separated by ``;`` at the outer nesting
level; parentheses group sub-recipes.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .words import parse_presentation
from .coset import enumerate_cosets, perm_rep
from .group import PermGroup, SubgroupHandle, from_cycles
from .structure import normal_closure_mask, subgroup_from_mask
from .aut import AutomorphismGroup, automorphism_group, isomorphism_test


class CatalogError(ValueError):
    """Malformed catalog data or an unresolvable recipe reference."""


# --------------------------------------------------------------------------
# reference presentations for the small orders that appear as kernels
# --------------------------------------------------------------------------

#: The 14 isomorphism types of order 16.  Abelian types are named by their
#: cyclic invariants; the rest carry conventional short labels.
REF16 = {
    "(1,1,1,1)": "a^2=b^2=c^2=d^2=(a,b)=(a,c)=(a,d)=(b,c)=(b,d)=(c,d)=1",
    "(2,1,1)":   "a^4=b^2=c^2=(a,b)=(a,c)=(b,c)=1",
    "(2,2)":     "a^4=b^4=(a,b)=1",
    "(3,1)":     "a^8=b^2=(a,b)=1",
    "(4)":       "a^16=1",
    "D4xC2":     "a^4=b^2=a^b*a=c^2=(a,c)=(b,c)=1",
    "Q2xC2":     "a^4=b^4=a^2*(b^-2)=a^b*a=c^2=(a,c)=(b,c)=1",
    "C4YQ2":     "a^4=b^2=c^2=(b,c)*a^2=(a,b)=(a,c)=1",
    "C4@C4":     "a^4=b^4=(a,b)*a^2=1",
    "(4,4|2,2)": "a^2=b^4=((a,b),a)=((a,b),b)=1",
    "<2,2|2>":   "a^8=b^2=a^b*(a^-5)=1",
    "<-2,4|2>":  "a^8=b^2=a^b*(a^-3)=1",
    "D8":        "a^8=b^2=a^b*a=1",
    "Q4":        "a^8=b^4=a^4*(b^-2)=a^b*a=1",
}

#: The 5 isomorphism types of order 8.
REF8 = {
    "C8":    "a^8=1",
    "C4xC2": "a^4=b^2=(a,b)=1",
    "C2^3":  "a^2=b^2=c^2=(a,b)=(a,c)=(b,c)=1",
    "D4":    "a^4=b^2=a^b*a=1",
    "Q8":    "a^4=b^4=a^2*(b^-2)=a^b*a=1",
}

#: Recipes for the factor labels of the kernel rows that do not carry an
#: inline ``factor_recipe``.  Labels of the form ``Aut(<id>)`` resolve to
#: ``U:<id>`` dynamically; ``order N`` labels and the two library tags
#: without a reconstruction stay unresolved.
FACTOR_RECIPES = {
    "1^5": "C2^5",
    "1^6": "C2^6",
    "(2,1,1)": "R16:(2,1,1)",
    "C8 x C2": "R16:(3,1)",
    "C4YQ2 x C2": "D:(R16:C4YQ2);C2",
    "D4 x 1^2": "D:D4;C2^2",
    "D4 x 1^3": "D:D4;C2^3",
    "D4 x D4": "D:D4;D4",
    "D4 x S4": "D:D4;S4",
    "S4 x 1^2": "D:S4;C2^2",
    "1^3 wr C2": "W:C2^3;C2",
    "#33": "#33",
    "#33 x C2": "D:#33;C2",
    "#33 x 1^2": "D:#33;C2^2",
    "Hol(2,1)": "H:C4;C2",
    "C2 x Hol(2,1)": "D:C2;(H:C4;C2)",
    "Hol(2,2)": "H:C4;C4",
    "Hol(2,1,1)": "H:C4;C2;C2",
    "Hol(3,1)": "H:C8;C2",
    "Hol(C8) x C2": "D:(H:C8);C2",
    "Hol(C16)": "H:C16",
    "Hol(1^4)": "H:C2^4",
    "Aut(2,1^3)": "U:2",
    "Aut(3,2)": "U:5",
    "Aut(2,1,1) x C2": "D:(V:(2,1,1));C2",
}

_AUT_LABEL = re.compile(r"^Aut\((\d+)\)$")


# --------------------------------------------------------------------------
# records
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CatalogEntry:
    """One group of order 32: a presentation plus its published invariants.

    ``expected`` is the JSON payload of the data row; ``aut_order`` is
    always present, the remaining keys (class counts, order structures,
    reconstruction recipes, subgroup censuses, notes) appear where the
    published record supplies them.
    """

    id: int
    family: str
    isoclinic_class: int
    presentation: str
    expected: dict

    @property
    def aut_order(self) -> int:
        return int(self.expected["aut_order"])


@dataclass(frozen=True)
class ExtensionRow:
    """One orbit of index-2 subgroups of a catalog group.

    ``actions`` are the generators that invert the odd-order cyclic group
    in the split extension; ``multiplicity`` is the orbit size under the
    automorphism group (``characteristic`` rows have orbit size 1);
    ``factor`` labels the complement of Hol(C_p) in the automorphism
    group of the extension; ``kernel`` is the order-16 isomorphism type.
    """

    base_id: int
    actions: tuple[str, ...]
    multiplicity: int
    characteristic: bool
    factor: str
    kernel: str
    extra: dict

    @property
    def key(self) -> str:
        return f"{self.base_id}{''.join(self.actions)}"

    @property
    def factor_order(self) -> int:
        return int(self.extra["factor_order"])


@dataclass(frozen=True)
class Table3Entry:
    """A group of order 32p whose Sylow 2-subgroup is not normal."""

    index: int
    name: str
    order: int
    recipe: str
    extra: dict


# --------------------------------------------------------------------------
# recipe text utilities
# --------------------------------------------------------------------------

def _split_parts(text: str) -> list[str]:
    """Split on ';' at parenthesis depth 0."""
    parts: list[str] = []
    depth, cur = 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == ";" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _strip_outer(part: str) -> str:
    """Drop parentheses that wrap the whole part."""
    part = part.strip()
    while part.startswith("(") and part.endswith(")"):
        depth = 0
        whole = True
        for i, ch in enumerate(part):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth == 0 and i != len(part) - 1:
                    whole = False
                    break
        if not whole:
            break
        part = part[1:-1].strip()
    return part


def _parse_cycles(text: str) -> list[list[int]]:
    out, i = [], 0
    while i < len(text):
        if text[i] != "(":
            raise CatalogError(f"bad cycle string {text!r}")
        j = text.index(")", i)
        out.append([int(t) for t in text[i + 1:j].split(",")])
        i = j + 1
    return out


def group_from_presentation(text: str,
                            max_cosets: Optional[int] = None) -> PermGroup:
    """Enumerate a presentation and return its regular permutation group."""
    pres = parse_presentation(text)
    table = (enumerate_cosets(pres) if max_cosets is None
             else enumerate_cosets(pres, max_cosets=max_cosets))
    return perm_rep(table)


# --------------------------------------------------------------------------
# the catalog
# --------------------------------------------------------------------------

class Catalog:
    """51 order-32 groups with their kernel rows and 32p companions.

    All group construction is lazy: entries, reference groups, atoms and
    automorphism groups are built on first use and cached on the catalog.
    """

    def __init__(self, entries: Sequence[CatalogEntry],
                 rows: Sequence[ExtensionRow],
                 table3: Sequence[Table3Entry]):
        self.entries: dict[int, CatalogEntry] = {e.id: e for e in entries}
        self.rows: list[ExtensionRow] = list(rows)
        self.table3: dict[int, Table3Entry] = {t.index: t for t in table3}
        self._groups: dict[int, PermGroup] = {}
        self._auts: dict[int, AutomorphismGroup] = {}
        self._refs: dict[str, PermGroup] = {}
        self._ref_auts: dict[str, AutomorphismGroup] = {}
        self._atoms: dict[str, PermGroup] = {}
        self._t3_groups: dict[int, PermGroup] = {}
        self._iso_keys: dict[int, dict] = {}

    # ---------------------------------------------------------- lookups
    def entry(self, gid: int) -> CatalogEntry:
        try:
            return self.entries[gid]
        except KeyError:
            raise CatalogError(f"no catalog group {gid}") from None

    def group(self, gid: int) -> PermGroup:
        """The regular permutation group of catalog entry ``gid``."""
        if gid not in self._groups:
            self._groups[gid] = group_from_presentation(
                self.entry(gid).presentation)
        return self._groups[gid]

    def aut(self, gid: int) -> AutomorphismGroup:
        """The automorphism group of catalog entry ``gid`` (cached)."""
        if gid not in self._auts:
            self._auts[gid] = automorphism_group(self.group(gid))
        return self._auts[gid]

    def expected_aut_order(self, gid: int) -> int:
        return self.entry(gid).aut_order

    def rows_for(self, gid: int) -> list[ExtensionRow]:
        return [r for r in self.rows if r.base_id == gid]

    def row(self, base_id: int, actions: Union[str, Sequence[str]]
            ) -> ExtensionRow:
        if isinstance(actions, str):
            actions = tuple(actions.split(","))
        else:
            actions = tuple(actions)
        for r in self.rows:
            if r.base_id == base_id and r.actions == actions:
                return r
        raise CatalogError(f"no kernel row {base_id}{''.join(actions)}")

    def generator_names(self, gid: int) -> tuple[str, ...]:
        """Generator letters of the entry's presentation, alphabetical."""
        return tuple(sorted(parse_presentation(
            self.entry(gid).presentation).generators))

    # ---------------------------------------------------------- kernels
    def kernel_words(self, row: ExtensionRow) -> list[str]:
        """Words whose normal closure is the row's index-2 kernel.

        The kernel is the normal closure of all generator squares, the
        non-acting generators, and the products of consecutive acting
        generators (in alphabetical generator order): killing those words
        is exactly what makes the sign map of the row well defined.
        """
        names = self.generator_names(row.base_id)
        acting = [g for g in names if g in row.actions]
        words = [f"{g}^2" for g in names]
        words += [g for g in names if g not in acting]
        words += [f"{x}*{y}" for x, y in zip(acting, acting[1:])]
        return words

    def kernel_subgroup(self, row: ExtensionRow) -> SubgroupHandle:
        """The index-2 kernel of ``row`` as a subgroup of its base group."""
        g = self.group(row.base_id)
        et = g.etab()
        seed = [et.idx(g.evaluate(w)) for w in self.kernel_words(row)]
        sub = subgroup_from_mask(g, normal_closure_mask(g, seed))
        if sub.order() != 16:
            raise CatalogError(
                f"kernel of row {row.key} has order {sub.order()}, not 16")
        return sub

    # ----------------------------------------------------- small groups
    def reference_group(self, label: str) -> PermGroup:
        """An order-16 or order-8 reference group by its label."""
        if label not in self._refs:
            if label in REF16:
                text = REF16[label]
            elif label in REF8:
                text = REF8[label]
            else:
                raise CatalogError(f"no reference group {label!r}")
            self._refs[label] = group_from_presentation(text)
        return self._refs[label]

    def table3_group(self, index: int) -> PermGroup:
        if index not in self._t3_groups:
            if index not in self.table3:
                raise CatalogError(f"no order-32p record {index}")
            self._t3_groups[index] = self.construct(self.table3[index].recipe)
        return self._t3_groups[index]

    def factor_recipe(self, row: ExtensionRow) -> Optional[str]:
        """A recipe for the row's factor label, or None if unresolved."""
        rec = row.extra.get("factor_recipe")
        if rec:
            return rec
        if row.factor in FACTOR_RECIPES:
            return FACTOR_RECIPES[row.factor]
        m = _AUT_LABEL.match(row.factor)
        if m:
            return f"U:{m.group(1)}"
        ref = row.extra.get("factor_matches_aut_of_entry")
        if ref:
            return f"U:{ref}"
        return None

    # ----------------------------------------------------------- recipes
    def _atom(self, name: str) -> PermGroup:
        if name in self._atoms:
            return self._atoms[name]
        if name.startswith("C2^"):
            k = int(name[3:])
            g = from_cycles(2 * k, [[[2 * i + 1, 2 * i + 2]] for i in range(k)])
        elif name == "S3":
            g = from_cycles(3, [[[1, 2, 3]], [[1, 2]]])
        elif name == "S4":
            g = from_cycles(4, [[[1, 2, 3, 4]], [[1, 2]]])
        elif name == "A4":
            g = from_cycles(4, [[[1, 2, 3]], [[1, 2], [3, 4]]])
        elif name == "D4":
            g = from_cycles(4, [[[1, 2, 3, 4]], [[1, 3]]])
        elif name == "Q2":
            g = self.reference_group("Q8")
        elif name == "SL23":
            g = group_from_presentation("a^3=b^3=(a*b)^2")
        elif name.startswith("C") and name[1:].isdigit():
            n = int(name[1:])
            g = from_cycles(n, [[list(range(1, n + 1))]])
        else:
            raise CatalogError(f"unknown recipe atom {name!r}")
        self._atoms[name] = g
        return g

    def construct(self, recipe: str) -> PermGroup:
        """Build the group a recipe describes (see the module docstring)."""
        from .build import (direct_product, holomorph, semidirect_product,
                            wreath_product)

        recipe = _strip_outer(recipe)
        if recipe.startswith("P:"):
            return group_from_presentation(recipe[2:])
        if recipe.startswith("G:"):
            specs = [_parse_cycles(p) for p in _split_parts(recipe[2:])]
            deg = max(pt for cycles in specs for c in cycles for pt in c)
            return from_cycles(deg, specs)
        if recipe.startswith("D:"):
            parts = [self.construct(p) for p in _split_parts(recipe[2:])]
            g = parts[0]
            for p in parts[1:]:
                g = direct_product(g, p)
            return g
        if recipe.startswith("W:"):
            base, top = [self.construct(p) for p in _split_parts(recipe[2:])]
            return wreath_product(base, top)
        if recipe.startswith("H:"):
            parts = [self.construct(p) for p in _split_parts(recipe[2:])]
            g = parts[0]
            for p in parts[1:]:
                g = direct_product(g, p)
            return holomorph(g)
        if recipe.startswith("U:"):
            return self.aut(int(recipe[2:])).action
        if recipe.startswith("V:"):
            label = recipe[2:]
            if label not in self._ref_auts:
                self._ref_auts[label] = automorphism_group(
                    self.reference_group(label))
            return self._ref_auts[label].action
        if recipe.startswith("R16:"):
            return self.reference_group(recipe[4:])
        if recipe.startswith("B:"):
            return automorphism_group(self.construct(recipe[2:])).action
        if recipe.startswith("T3:"):
            return self.table3_group(int(recipe[3:]))
        if recipe.startswith("A:"):
            sid_text, p_text = _split_parts(recipe[2:])
            sid, p = int(sid_text), int(p_text)
            base = self.group(sid)
            A = self.aut(sid)
            et = A.action.etab()
            hits = np.nonzero(et.orders == p)[0]
            if len(hits) == 0:
                raise CatalogError(
                    f"Aut of catalog group {sid} has no element of order {p}")
            m = A._map_of_action_elt(et.E[int(hits[0])])
            cp = self._atom(f"C{p}")
            return semidirect_product(base, cp, [m])
        if recipe.startswith("#"):
            return self.group(int(recipe[1:]))
        return self._atom(recipe)

    # ------------------------------------------------------ identification
    def _order_key(self, g: PermGroup) -> tuple:
        counts: dict[int, int] = {}
        for o in g.etab().orders:
            counts[int(o)] = counts.get(int(o), 0) + 1
        return tuple(sorted(counts.items()))

    def _key_table(self, order: int) -> dict:
        if order not in self._iso_keys:
            if order == 32:
                table = {f"#{gid}": self.group(gid) for gid in self.entries}
            elif order == 16:
                table = {lbl: self.reference_group(lbl) for lbl in REF16}
            elif order == 8:
                table = {lbl: self.reference_group(lbl) for lbl in REF8}
            else:
                raise CatalogError(f"no reference list for order {order}")
            self._iso_keys[order] = {
                name: (self._order_key(g), g) for name, g in table.items()}
        return self._iso_keys[order]

    def identify(self, g: PermGroup) -> Optional[str]:
        """Name the isomorphism type of ``g`` among the catalog's groups.

        Returns ``"#<id>"`` for order 32, the reference label for orders
        16 and 8, and None when ``g`` matches nothing (or has an order
        with no reference list).
        """
        n = g.order()
        if n not in (8, 16, 32):
            return None
        key = self._order_key(g)
        for name, (k, ref) in self._key_table(n).items():
            if k == key and isomorphism_test(g, ref):
                return name
        return None


# --------------------------------------------------------------------------
# loading
# --------------------------------------------------------------------------

def _data_lines(text: str):
    for ln, line in enumerate(text.splitlines(), start=1):
        line = line.rstrip()
        if not line or line.startswith("#"):
            continue
        yield ln, line


def _parse_table1(text: str) -> list[CatalogEntry]:
    entries = []
    for ln, line in _data_lines(text):
        parts = line.split(" | ", 4)
        if len(parts) != 5:
            raise CatalogError(f"table1 line {ln}: expected 5 fields")
        gid, family, klass, pres, payload = parts
        entries.append(CatalogEntry(int(gid), family, int(klass), pres,
                                    json.loads(payload)))
    return entries


def _parse_tables23(text: str) -> tuple[list[ExtensionRow], list[Table3Entry]]:
    rows: list[ExtensionRow] = []
    t3: list[Table3Entry] = []
    for ln, line in _data_lines(text):
        kind = line.split(" | ", 1)[0]
        if kind == "2":
            parts = line.split(" | ", 6)
            if len(parts) != 7:
                raise CatalogError(f"tables23 line {ln}: expected 7 fields")
            _, base_id, actions, mult, factor, kernel, payload = parts
            rows.append(ExtensionRow(
                base_id=int(base_id),
                actions=tuple(actions.split(",")),
                multiplicity=1 if mult == "*" else int(mult),
                characteristic=mult == "*",
                factor=factor,
                kernel=kernel,
                extra=json.loads(payload)))
        elif kind == "3":
            parts = line.split(" | ", 5)
            if len(parts) != 6:
                raise CatalogError(f"tables23 line {ln}: expected 6 fields")
            _, index, name, order, recipe, payload = parts
            t3.append(Table3Entry(int(index), name, int(order), recipe,
                                  json.loads(payload)))
        else:
            raise CatalogError(f"tables23 line {ln}: unknown record {kind!r}")
    return rows, t3


#: Number of catalog entries in each isoclinic family, families 1-8.
FAMILY_SIZES = (7, 15, 10, 9, 2, 2, 3, 3)

#: Number of kernel rows whose base group lies in each isoclinic family.
ROW_FAMILY_COUNTS = (12, 42, 30, 33, 4, 10, 6, 7)


def _validate(cat: Catalog) -> None:
    if sorted(cat.entries) != list(range(1, 52)):
        raise CatalogError("expected catalog ids 1..51")
    sizes = [0] * 8
    for e in cat.entries.values():
        if not 1 <= e.isoclinic_class <= 8:
            raise CatalogError(f"entry {e.id}: bad isoclinic class")
        sizes[e.isoclinic_class - 1] += 1
    if tuple(sizes) != FAMILY_SIZES:
        raise CatalogError(f"isoclinic family sizes {sizes}")
    if len(cat.rows) != 144:
        raise CatalogError(f"expected 144 kernel rows, got {len(cat.rows)}")
    counts = [0] * 8
    seen = set()
    for r in cat.rows:
        if r.base_id not in cat.entries:
            raise CatalogError(f"row {r.key}: unknown base group")
        if r.key in seen:
            raise CatalogError(f"duplicate kernel row {r.key}")
        seen.add(r.key)
        if not all(len(a) == 1 and a.isalpha() for a in r.actions):
            raise CatalogError(f"row {r.key}: bad action letters")
        if r.multiplicity < 1:
            raise CatalogError(f"row {r.key}: bad multiplicity")
        if r.kernel not in REF16 and "kernel_type_computed" not in r.extra:
            raise CatalogError(f"row {r.key}: unresolved kernel label "
                               f"{r.kernel!r}")
        if "factor_order" not in r.extra:
            raise CatalogError(f"row {r.key}: missing factor_order")
        counts[cat.entries[r.base_id].isoclinic_class - 1] += 1
    if tuple(counts) != ROW_FAMILY_COUNTS:
        raise CatalogError(f"kernel row family counts {counts}")
    if sorted(cat.table3) != list(range(1, 43)):
        raise CatalogError("expected order-32p records 1..42")
    for t in cat.table3.values():
        if t.order not in (96, 160, 224, 992):
            raise CatalogError(f"record {t.index}: unexpected order {t.order}")


def load_catalog(path: Optional[Union[str, Path]] = None,
                 validate: bool = True) -> Catalog:
    """Load the catalog from ``path`` (a directory) or the packaged data."""
    if path is None:
        base = resources.files("autoscope").joinpath("data")
        t1_text = (base / "table1.txt").read_text()
        t23_text = (base / "tables23.txt").read_text()
    else:
        base = Path(path)
        t1_text = (base / "table1.txt").read_text()
        t23_text = (base / "tables23.txt").read_text()
    entries = _parse_table1(t1_text)
    rows, t3 = _parse_tables23(t23_text)
    cat = Catalog(entries, rows, t3)
    if validate:
        _validate(cat)
    return cat
