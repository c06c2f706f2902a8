"""Finite presentations of adjoint mode theories.

A mode theory is a strict 2-category given by closed total tables: every
composite morphism, vertical composite of 2-cells, and whiskering is a named
table element, so equality of 2-cells is identity of names.  Four morphism
classes (tangible/sharp/transparent/sinister) gate the type formers, and each
sinister morphism carries a chosen right adjoint with unit and counit.

Identity morphisms and identity cells use the reserved names "id:<mode>" and
"id:<morphism>" and are synthesized when omitted from input files, together
with the unit-law rows of the four tables.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import IllTypedCellExpression, MalformedTable, NotComposable

CLASS_NAMES = ("tangible", "sharp", "transparent", "sinister")


@dataclass(frozen=True)
class Mode:
    name: str


@dataclass(frozen=True)
class Morphism:
    name: str
    src: str
    dst: str


@dataclass(frozen=True)
class Cell:
    name: str
    src: str  # morphism name
    dst: str  # morphism name


@dataclass(frozen=True)
class Adjoint:
    mor: str
    dagger: str
    unit: str
    counit: str


@dataclass(frozen=True)
class Violation:
    axiom: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def axioms(self) -> set[str]:
        return {v.axiom for v in self.violations}


def id_mor_name(mode: str) -> str:
    return "id:" + mode


def id_cell_name(mor: str) -> str:
    return "id:" + mor


class ModeTheory:
    """Immutable-after-construction 2-category presentation."""

    def __init__(self, modes, morphisms, cells, compose, vcompose,
                 whisker_left, whisker_right, classes, adjoints):
        self.modes: dict[str, Mode] = {m.name: m for m in modes}
        self.morphisms: dict[str, Morphism] = {m.name: m for m in morphisms}
        self.cells: dict[str, Cell] = {c.name: c for c in cells}
        self._compose: dict[tuple[str, str], str] = dict(compose)
        self._vcomp: dict[tuple[str, str], str] = dict(vcompose)
        self._wl: dict[tuple[str, str], str] = dict(whisker_left)
        self._wr: dict[tuple[str, str], str] = dict(whisker_right)
        self.classes: dict[str, frozenset[str]] = {
            k: frozenset(classes.get(k, ())) for k in CLASS_NAMES
        }
        self.adjoints: dict[str, Adjoint] = {a.mor: a for a in adjoints}
        self._synthesize_identities()
        self._check_references()

    # -- construction ----------------------------------------------------

    def _check_references(self):
        for m in self.morphisms.values():
            if m.src not in self.modes or m.dst not in self.modes:
                raise MalformedTable(f"morphism {m.name} references unknown mode")
        for c in self.cells.values():
            if c.src not in self.morphisms or c.dst not in self.morphisms:
                raise MalformedTable(f"cell {c.name} references unknown morphism")
            s, d = self.morphisms[c.src], self.morphisms[c.dst]
            if (s.src, s.dst) != (d.src, d.dst):
                raise MalformedTable(f"cell {c.name} is not between parallel morphisms")
        for cls in CLASS_NAMES:
            for name in self.classes[cls]:
                if name not in self.morphisms:
                    raise MalformedTable(f"class {cls} lists unknown morphism {name}")
        for a in self.adjoints.values():
            for ref, kind in ((a.mor, "morphism"), (a.dagger, "morphism")):
                if ref not in self.morphisms:
                    raise MalformedTable(f"adjoint entry references unknown {kind} {ref}")

    def _synthesize_identities(self):
        for p in self.modes:
            name = id_mor_name(p)
            if name not in self.morphisms:
                self.morphisms[name] = Morphism(name, p, p)
            elif (self.morphisms[name].src, self.morphisms[name].dst) != (p, p):
                raise MalformedTable(f"reserved name {name} must be the identity at {p}")
        for m in self.morphisms.values():
            name = id_cell_name(m.name)
            if name not in self.cells:
                self.cells[name] = Cell(name, m.name, m.name)
            elif (self.cells[name].src, self.cells[name].dst) != (m.name, m.name):
                raise MalformedTable(f"reserved name {name} must be the identity cell")
        # check adjoint cell references now that identity cells exist
        for a in self.adjoints.values():
            for ref in (a.unit, a.counit):
                if ref not in self.cells:
                    raise MalformedTable(f"adjoint entry references unknown cell {ref}")
        # unit-law rows, added only when absent so broken inputs stay broken
        for m in self.morphisms.values():
            self._compose.setdefault((id_mor_name(m.dst), m.name), m.name)
            self._compose.setdefault((m.name, id_mor_name(m.src)), m.name)
        for c in self.cells.values():
            self._vcomp.setdefault((id_cell_name(c.dst), c.name), c.name)
            self._vcomp.setdefault((c.name, id_cell_name(c.src)), c.name)
        for c in self.cells.values():
            s = self.morphisms.get(c.src)
            if s is None:
                continue  # caught by the reference check
            self._wl.setdefault((id_mor_name(s.dst), c.name), c.name)
            self._wr.setdefault((c.name, id_mor_name(s.src)), c.name)
        for m in self.morphisms.values():
            for r in self.morphisms.values():
                if r.dst != m.src:
                    continue
                mr = self._compose.get((m.name, r.name))
                if mr is not None:
                    self._wl.setdefault((m.name, id_cell_name(r.name)), id_cell_name(mr))
            for n in self.morphisms.values():
                if m.dst != n.src:
                    continue
                nm = self._compose.get((n.name, m.name))
                if nm is not None:
                    self._wr.setdefault((id_cell_name(n.name), m.name), id_cell_name(nm))

    # -- lookups ----------------------------------------------------------

    @property
    def compose_table(self):
        return self._compose

    @property
    def vcompose_table(self):
        return self._vcomp

    @property
    def wl_table(self):
        return self._wl

    @property
    def wr_table(self):
        return self._wr

    def cells_from_to(self, src_mor: str, dst_mor: str) -> list[Cell]:
        return sorted((c for c in self.cells.values()
                       if c.src == src_mor and c.dst == dst_mor),
                      key=lambda c: c.name)

    def mor(self, name: str) -> Morphism:
        try:
            return self.morphisms[name]
        except KeyError:
            raise MalformedTable(f"unknown morphism {name}") from None

    def cell(self, name: str) -> Cell:
        try:
            return self.cells[name]
        except KeyError:
            raise MalformedTable(f"unknown cell {name}") from None

    def id_mor(self, mode: str) -> str:
        if mode not in self.modes:
            raise MalformedTable(f"unknown mode {mode}")
        return id_mor_name(mode)

    def id_cell(self, mor: str) -> str:
        self.mor(mor)
        return id_cell_name(mor)

    def is_id_mor(self, mor: str) -> bool:
        return self.mor(mor).name == id_mor_name(self.mor(mor).src)

    def cell_modes(self, cell: str) -> tuple[str, str]:
        """(source mode, target mode) of the parallel morphisms under a cell."""
        m = self.mor(self.cell(cell).src)
        return m.src, m.dst

    def in_class(self, cls: str, mor: str) -> bool:
        return mor in self.classes[cls]

    def morphisms_into(self, mode: str) -> list[Morphism]:
        return sorted((m for m in self.morphisms.values() if m.dst == mode),
                      key=lambda m: m.name)

    def morphisms_between(self, src: str, dst: str) -> list[Morphism]:
        return sorted((m for m in self.morphisms.values()
                       if m.src == src and m.dst == dst), key=lambda m: m.name)

    def cells_between_homs(self, src_mode: str, dst_mode: str) -> list[Cell]:
        out = []
        for c in self.cells.values():
            m = self.morphisms[c.src]
            if (m.src, m.dst) == (src_mode, dst_mode):
                out.append(c)
        return sorted(out, key=lambda c: c.name)

    # -- algebra ----------------------------------------------------------

    def compose(self, g: str, f: str) -> str:
        """g∘f: first f, then g."""
        gm, fm = self.mor(g), self.mor(f)
        if fm.dst != gm.src:
            raise NotComposable(f"{g}∘{f}: target({f}) = {fm.dst} != source({g}) = {gm.src}")
        try:
            return self._compose[(g, f)]
        except KeyError:
            raise NotComposable(f"composite {g}∘{f} missing from table") from None

    def vcomp(self, b: str, a: str) -> str:
        """b∘a vertically: first a, then b."""
        bc, ac = self.cell(b), self.cell(a)
        if ac.dst != bc.src:
            raise IllTypedCellExpression(
                f"{b}∘{a}: target({a}) = {ac.dst} != source({b}) = {bc.src}")
        try:
            return self._vcomp[(b, a)]
        except KeyError:
            raise IllTypedCellExpression(f"vertical composite {b}∘{a} missing from table") from None

    def wl(self, m: str, c: str) -> str:
        """m◁c: post-whisker the cell c by the morphism m."""
        mm = self.mor(m)
        if mm.src != self.cell_modes(c)[1]:
            raise IllTypedCellExpression(f"{m}◁{c}: modes do not match")
        try:
            return self._wl[(m, c)]
        except KeyError:
            raise IllTypedCellExpression(f"whiskering {m}◁{c} missing from table") from None

    def wr(self, c: str, m: str) -> str:
        """c▷m: pre-whisker the cell c by the morphism m."""
        mm = self.mor(m)
        if mm.dst != self.cell_modes(c)[0]:
            raise IllTypedCellExpression(f"{c}▷{m}: modes do not match")
        try:
            return self._wr[(c, m)]
        except KeyError:
            raise IllTypedCellExpression(f"whiskering {c}▷{m} missing from table") from None

    def dagger(self, mor: str) -> Adjoint:
        if mor not in self.adjoints:
            raise IllTypedCellExpression(f"morphism {mor} has no adjoint assignment")
        return self.adjoints[mor]

    def cell_algebra(self, expr) -> str:
        """Evaluate a formal expression over cells.

        Grammar: a cell name, ("comp", b, a) for b∘a, ("wl", mor, e) for
        mor◁e, or ("wr", e, mor) for e▷mor.
        """
        if isinstance(expr, str):
            return self.cell(expr).name
        if not isinstance(expr, tuple) or not expr:
            raise IllTypedCellExpression(f"bad cell expression {expr!r}")
        op = expr[0]
        if op == "comp" and len(expr) == 3:
            return self.vcomp(self.cell_algebra(expr[1]), self.cell_algebra(expr[2]))
        if op == "wl" and len(expr) == 3:
            return self.wl(expr[1], self.cell_algebra(expr[2]))
        if op == "wr" and len(expr) == 3:
            return self.wr(self.cell_algebra(expr[1]), expr[2])
        raise IllTypedCellExpression(f"bad cell expression {expr!r}")

    # -- serialization ----------------------------------------------------

    def to_data(self) -> dict:
        """Canonical plain-data form (identities and unit rows elided)."""
        def keep_mor(name):
            return not name.startswith("id:")

        def keep_cell(name):
            return not name.startswith("id:")

        data = {
            "modes": sorted(self.modes),
            "morphisms": [{"name": m.name, "src": m.src, "dst": m.dst}
                          for m in sorted(self.morphisms.values(), key=lambda m: m.name)
                          if keep_mor(m.name)],
            "compose": sorted([g, f, h] for (g, f), h in self._compose.items()
                              if keep_mor(g) and keep_mor(f)),
            "cells": [{"name": c.name, "src": c.src, "dst": c.dst}
                      for c in sorted(self.cells.values(), key=lambda c: c.name)
                      if keep_cell(c.name)],
            "vcompose": sorted([b, a, c] for (b, a), c in self._vcomp.items()
                               if keep_cell(b) and keep_cell(a)),
            "whisker_left": sorted([m, c, r] for (m, c), r in self._wl.items()
                                   if keep_cell(c)),
            "whisker_right": sorted([c, m, r] for (c, m), r in self._wr.items()
                                    if keep_cell(c)),
            "classes": {k: sorted(self.classes[k]) for k in CLASS_NAMES},
            "adjoints": [{"mor": a.mor, "dagger": a.dagger,
                          "unit": a.unit, "counit": a.counit}
                         for a in sorted(self.adjoints.values(), key=lambda a: a.mor)],
        }
        return data


def mode_theory_from_data(data: dict) -> ModeTheory:
    if not isinstance(data, dict):
        raise MalformedTable("mode theory file must contain an object")
    try:
        modes = [Mode(str(n)) for n in data.get("modes", [])]
        morphisms = [Morphism(d["name"], d["src"], d["dst"])
                     for d in data.get("morphisms", [])]
        cells = [Cell(d["name"], d["src"], d["dst"]) for d in data.get("cells", [])]
        compose = {(g, f): h for g, f, h in data.get("compose", [])}
        vcompose = {(b, a): c for b, a, c in data.get("vcompose", [])}
        wl = {(m, c): r for m, c, r in data.get("whisker_left", [])}
        wr = {(c, m): r for c, m, r in data.get("whisker_right", [])}
        classes = data.get("classes", {})
        adjoints = [Adjoint(d["mor"], d["dagger"], d["unit"], d["counit"])
                    for d in data.get("adjoints", [])]
    except (KeyError, TypeError, ValueError) as e:
        raise MalformedTable(f"mode theory file is malformed: {e}") from None
    return ModeTheory(modes, morphisms, cells, compose, vcompose, wl, wr,
                      classes, adjoints)


def load_mode_theory(path) -> ModeTheory:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedTable(f"{path}: {e}") from None
    return mode_theory_from_data(data)


# -- validation ------------------------------------------------------------

def validate_mode_theory(mt: ModeTheory) -> ValidationReport:
    """Exhaustive axiom scan.  Raises MalformedTable for entries whose
    sources/targets do not line up; collects axiom violations otherwise."""
    out: list[Violation] = []

    def bad(axiom, msg):
        out.append(Violation(axiom, msg))

    _check_table_shapes(mt)
    _check_totality(mt, bad)

    # (a) identities transparent and sharp
    for p in mt.modes:
        i = id_mor_name(p)
        if not mt.in_class("transparent", i):
            bad("identity-transparent", f"identity {i} is not transparent")
        if not mt.in_class("sharp", i):
            bad("identity-sharp", f"identity {i} is not sharp")

    # (b) sharp-then-transparent composites tangible, plus the derived checks
    for m in mt.morphisms.values():
        if mt.in_class("sharp", m.name):
            for n in mt.morphisms.values():
                if n.src != m.dst or not mt.in_class("transparent", n.name):
                    continue
                comp = mt._compose.get((n.name, m.name))
                if comp is not None and not mt.in_class("tangible", comp):
                    bad("sharp-transparent-composite-tangible",
                        f"{n.name}∘{m.name} = {comp} is not tangible")
        if mt.in_class("sharp", m.name) and not mt.in_class("tangible", m.name):
            bad("sharp-tangible", f"sharp morphism {m.name} is not tangible")
        if mt.in_class("transparent", m.name) and not mt.in_class("tangible", m.name):
            bad("transparent-tangible", f"transparent morphism {m.name} is not tangible")

    _check_one_category(mt, bad)
    _check_two_category(mt, bad)
    _check_adjoints(mt, bad)
    return ValidationReport(tuple(out))


def _check_table_shapes(mt: ModeTheory):
    for (g, f), h in mt._compose.items():
        gm, fm, hm = mt.mor(g), mt.mor(f), mt.mor(h)
        if fm.dst != gm.src or (hm.src, hm.dst) != (fm.src, gm.dst):
            raise MalformedTable(f"compose entry ({g},{f})->{h} has mismatched modes")
    for (b, a), c in mt._vcomp.items():
        bc, ac, cc = mt.cell(b), mt.cell(a), mt.cell(c)
        if ac.dst != bc.src or (cc.src, cc.dst) != (ac.src, bc.dst):
            raise MalformedTable(f"vcompose entry ({b},{a})->{c} has mismatched cells")
    for (m, c), r in mt._wl.items():
        cc, rc = mt.cell(c), mt.cell(r)
        if mt.mor(m).src != mt.cell_modes(c)[1]:
            raise MalformedTable(f"whisker_left entry ({m},{c}) has mismatched modes")
        if mt.is_id_mor(m):
            continue  # 1◁β = β is definitional, not routed through compose
        want_src = mt._compose.get((m, cc.src))
        want_dst = mt._compose.get((m, cc.dst))
        if want_src is not None and want_dst is not None and \
                (rc.src, rc.dst) != (want_src, want_dst):
            raise MalformedTable(f"whisker_left entry ({m},{c})->{r} has wrong boundary")
    for (c, m), r in mt._wr.items():
        cc, rc = mt.cell(c), mt.cell(r)
        if mt.mor(m).dst != mt.cell_modes(c)[0]:
            raise MalformedTable(f"whisker_right entry ({c},{m}) has mismatched modes")
        if mt.is_id_mor(m):
            continue  # β▷1 = β is definitional
        want_src = mt._compose.get((cc.src, m))
        want_dst = mt._compose.get((cc.dst, m))
        if want_src is not None and want_dst is not None and \
                (rc.src, rc.dst) != (want_src, want_dst):
            raise MalformedTable(f"whisker_right entry ({c},{m})->{r} has wrong boundary")


def _check_totality(mt: ModeTheory, bad):
    for g in mt.morphisms.values():
        for f in mt.morphisms.values():
            if f.dst == g.src and (g.name, f.name) not in mt._compose:
                bad("table-totality", f"composite {g.name}∘{f.name} missing")
    for b in mt.cells.values():
        for a in mt.cells.values():
            if a.dst == b.src and (b.name, a.name) not in mt._vcomp:
                bad("table-totality", f"vertical composite {b.name}∘{a.name} missing")
    for m in mt.morphisms.values():
        for c in mt.cells.values():
            if m.src == mt.cell_modes(c.name)[1] and (m.name, c.name) not in mt._wl:
                bad("table-totality", f"whiskering {m.name}◁{c.name} missing")
            if m.dst == mt.cell_modes(c.name)[0] and (c.name, m.name) not in mt._wr:
                bad("table-totality", f"whiskering {c.name}▷{m.name} missing")


def _comp(mt, g, f):
    return mt._compose.get((g, f))


def _check_one_category(mt: ModeTheory, bad):
    for h in mt.morphisms.values():
        for g in mt.morphisms.values():
            if g.dst != h.src:
                continue
            hg = _comp(mt, h.name, g.name)
            for f in mt.morphisms.values():
                if f.dst != g.src:
                    continue
                gf = _comp(mt, g.name, f.name)
                if hg is None or gf is None:
                    continue
                left = _comp(mt, hg, f.name)
                right = _comp(mt, h.name, gf)
                if left is not None and right is not None and left != right:
                    bad("compose-associative",
                        f"({h.name}∘{g.name})∘{f.name} = {left} but "
                        f"{h.name}∘({g.name}∘{f.name}) = {right}")
    for f in mt.morphisms.values():
        lu = _comp(mt, id_mor_name(f.dst), f.name)
        ru = _comp(mt, f.name, id_mor_name(f.src))
        if lu is not None and lu != f.name:
            bad("compose-unital", f"id∘{f.name} = {lu}")
        if ru is not None and ru != f.name:
            bad("compose-unital", f"{f.name}∘id = {ru}")


def _check_two_category(mt: ModeTheory, bad):
    vc = mt._vcomp
    for c in mt.cells.values():
        for b in mt.cells.values():
            if b.dst != c.src:
                continue
            cb = vc.get((c.name, b.name))
            for a in mt.cells.values():
                if a.dst != b.src:
                    continue
                ba = vc.get((b.name, a.name))
                if cb is None or ba is None:
                    continue
                left = vc.get((cb, a.name))
                right = vc.get((c.name, ba))
                if left is not None and right is not None and left != right:
                    bad("vcompose-associative",
                        f"({c.name}∘{b.name})∘{a.name} != {c.name}∘({b.name}∘{a.name})")
    for a in mt.cells.values():
        lu = vc.get((id_cell_name(a.dst), a.name))
        ru = vc.get((a.name, id_cell_name(a.src)))
        if lu is not None and lu != a.name:
            bad("vcompose-unital", f"id∘{a.name} = {lu}")
        if ru is not None and ru != a.name:
            bad("vcompose-unital", f"{a.name}∘id = {ru}")

    # whiskering axioms, all guarded lookups
    for b in mt.cells.values():
        for a in mt.cells.values():
            if a.dst != b.src:
                continue
            ba = vc.get((b.name, a.name))
            if ba is None:
                continue
            for r in mt.morphisms.values():
                if r.dst == mt.cell_modes(a.name)[0]:
                    br = mt._wr.get((b.name, r.name))
                    ar = mt._wr.get((a.name, r.name))
                    bar = mt._wr.get((ba, r.name))
                    if br and ar and bar and vc.get((br, ar)) not in (None, bar):
                        bad("whisker-right-functorial",
                            f"({b.name}▷{r.name})∘({a.name}▷{r.name}) != "
                            f"({b.name}∘{a.name})▷{r.name}")
                if r.src == mt.cell_modes(a.name)[1]:
                    rb = mt._wl.get((r.name, b.name))
                    ra = mt._wl.get((r.name, a.name))
                    rba = mt._wl.get((r.name, ba))
                    if rb and ra and rba and vc.get((rb, ra)) not in (None, rba):
                        bad("whisker-left-functorial",
                            f"{r.name}◁({b.name}∘{a.name}) != "
                            f"({r.name}◁{b.name})∘({r.name}◁{a.name})")
    for n in mt.morphisms.values():
        for r in mt.morphisms.values():
            if r.dst == n.src:
                nr = _comp(mt, n.name, r.name)
                got = mt._wr.get((id_cell_name(n.name), r.name))
                if nr and got and got != id_cell_name(nr):
                    bad("whisker-right-identity", f"1_{n.name}▷{r.name} = {got}")
                got = mt._wl.get((n.name, id_cell_name(r.name)))
                if nr and got and got != id_cell_name(nr):
                    bad("whisker-left-identity", f"{n.name}◁1_{r.name} = {got}")
    for m in mt.morphisms.values():
        for b in mt.cells.values():
            if m.src != mt.cell_modes(b.name)[1]:
                continue
            mb = mt._wl.get((m.name, b.name))
            for s in mt.morphisms.values():
                if s.dst != mt.cell_modes(b.name)[0]:
                    continue
                bs = mt._wr.get((b.name, s.name))
                if mb is None or bs is None:
                    continue
                left = mt._wr.get((mb, s.name))
                right = mt._wl.get((m.name, bs))
                if left is not None and right is not None and left != right:
                    bad("whisker-associative",
                        f"({m.name}◁{b.name})▷{s.name} != {m.name}◁({b.name}▷{s.name})")


def _check_adjoints(mt: ModeTheory, bad):
    for name in sorted(mt.classes["sinister"]):
        if name not in mt.adjoints:
            bad("adjoint-missing", f"sinister morphism {name} has no adjoint entry")
            continue
        a = mt.adjoints[name]
        m, d = mt.mor(name), mt.mor(a.dagger)
        unit, counit = mt.cell(a.unit), mt.cell(a.counit)
        ok = True
        if (d.src, d.dst) != (m.dst, m.src):
            bad("adjoint-typing", f"{a.dagger} is not a candidate right adjoint of {name}")
            ok = False
        dm = _comp(mt, a.dagger, name)
        md = _comp(mt, name, a.dagger)
        if dm is None or md is None:
            ok = False
        if ok and (unit.src, unit.dst) != (id_mor_name(m.src), dm):
            bad("adjoint-typing", f"unit {a.unit} is not 1_{m.src} ⇒ {a.dagger}∘{name}")
            ok = False
        if ok and (counit.src, counit.dst) != (md, id_mor_name(m.dst)):
            bad("adjoint-typing", f"counit {a.counit} is not {name}∘{a.dagger} ⇒ 1_{m.dst}")
            ok = False
        if not ok:
            continue
        try:
            left = mt.vcomp(mt.wr(a.counit, name), mt.wl(name, a.unit))
            if left != id_cell_name(name):
                bad("triangle-left",
                    f"(ε▷{name})∘({name}◁η) = {left}, expected 1_{name}")
        except IllTypedCellExpression as e:
            bad("triangle-left", f"triangle for {name} not evaluable: {e}")
        try:
            right = mt.vcomp(mt.wl(a.dagger, a.counit), mt.wr(a.unit, a.dagger))
            if right != id_cell_name(a.dagger):
                bad("triangle-right",
                    f"({a.dagger}◁ε)∘(η▷{a.dagger}) = {right}, expected 1_{a.dagger}")
        except IllTypedCellExpression as e:
            bad("triangle-right", f"triangle for {name} not evaluable: {e}")
