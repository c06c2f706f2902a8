"""Finite categories, functors, natural transformations, and limits.

Everything is finite and checked exhaustively.  Identity arrows are
synthesized (named "id:<obj>" for string objects, ("id", obj) otherwise) and
never override user-supplied table rows.  Limits are found by brute-force
terminal-cone search with a configurable cap.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Hashable, Mapping, Optional

from .errors import CapExceeded, MalformedTable, NotComposable
from .mode_theory import ModeTheory


def id_name(obj):
    return f"id:{obj}" if isinstance(obj, str) else ("id", obj)


@dataclass(frozen=True)
class Arrow:
    name: Hashable
    src: Hashable
    dst: Hashable


class FinCat:
    def __init__(self, objects, arrows, compose, name: str = ""):
        """arrows: iterable of (name, src, dst); compose: mapping or iterable
        of (g, f, h) rows meaning g∘f = h."""
        self.name = name
        self.objects = list(dict.fromkeys(objects))
        self.arrows: dict = {}
        for (n, s, d) in arrows:
            if n in self.arrows:
                raise MalformedTable(f"duplicate arrow {n}")
            self.arrows[n] = Arrow(n, s, d)
        self.identities = {}
        for o in self.objects:
            i = id_name(o)
            self.identities[o] = i
            self.arrows.setdefault(i, Arrow(i, o, o))
        rows = compose.items() if isinstance(compose, Mapping) else \
            ((g, f, h) for (g, f, h) in compose)
        self.compose: dict = {}
        for item in rows:
            (g, f), h = (item[0], item[1]) if len(item) == 2 else \
                ((item[0], item[1]), item[2])
            self.compose[(g, f)] = h
        for n, a in self.arrows.items():
            self.compose.setdefault((n, self.identities.get(a.src, None)), n)
            self.compose.setdefault((self.identities.get(a.dst, None), n), n)
        for a in self.arrows.values():
            if a.src not in self.objects or a.dst not in self.objects:
                raise MalformedTable(f"arrow {a.name} has unknown endpoint")

    def arr(self, name) -> Arrow:
        try:
            return self.arrows[name]
        except KeyError:
            raise MalformedTable(f"unknown arrow {name!r} in {self.name}") \
                from None

    def id_arr(self, obj):
        if obj not in self.identities:
            raise MalformedTable(f"unknown object {obj!r} in {self.name}")
        return self.identities[obj]

    def hom(self, x, y) -> list:
        return [n for n, a in self.arrows.items()
                if a.src == x and a.dst == y]

    def comp(self, g, f):
        """g∘f (first f, then g)."""
        ga, fa = self.arr(g), self.arr(f)
        if fa.dst != ga.src:
            raise NotComposable(f"{g}∘{f}: {fa.dst} != {ga.src}")
        try:
            return self.compose[(g, f)]
        except KeyError:
            raise MalformedTable(f"missing composition {g}∘{f} "
                                 f"in {self.name}") from None

    def validate(self) -> list[str]:
        """Exhaustive category laws; returns human-readable violations."""
        out = []
        for n, a in self.arrows.items():
            if self.comp(n, self.identities[a.src]) != n or \
                    self.comp(self.identities[a.dst], n) != n:
                out.append(f"unit law fails at {n}")
        arrs = list(self.arrows.values())
        for f in arrs:
            for g in arrs:
                if g.src != f.dst:
                    continue
                try:
                    gf = self.comp(g.name, f.name)
                    ga = self.arr(gf)
                except (NotComposable, MalformedTable) as e:
                    out.append(str(e))
                    continue
                if (ga.src, ga.dst) != (f.src, g.dst):
                    out.append(f"composite {g.name}∘{f.name} has wrong "
                               f"boundary")
                    continue
                for h in arrs:
                    if h.src != g.dst:
                        continue
                    try:
                        if self.comp(h.name, gf) != \
                                self.comp(self.comp(h.name, g.name), f.name):
                            out.append(f"associativity fails at "
                                       f"{h.name},{g.name},{f.name}")
                    except (NotComposable, MalformedTable) as e:
                        out.append(str(e))
        return out

    def to_data(self) -> dict:
        return {
            "objects": list(self.objects),
            "arrows": [[a.name, a.src, a.dst] for a in self.arrows.values()
                       if a.name not in self.identities.values()],
            "compose": [[g, f, h] for (g, f), h in self.compose.items()
                        if g not in self.identities.values()
                        and f not in self.identities.values()],
        }


def poset_category(objects, leq: Callable, name: str = "") -> FinCat:
    """The thin category of a finite preorder; arrow x→y named 'x<=y'."""
    arrows, compose = [], []
    rel = [(x, y) for x in objects for y in objects if x != y and leq(x, y)]
    nm = {p: f"{p[0]}<={p[1]}" for p in rel}
    for (x, y) in rel:
        arrows.append((nm[(x, y)], x, y))
    for (x, y) in rel:
        for (y2, z) in rel:
            if y2 == y and (x, z) in nm:
                compose.append((nm[(y, z)], nm[(x, y)], nm[(x, z)]))
    return FinCat(objects, arrows, compose, name=name)


class FinFunctor:
    def __init__(self, src: FinCat, dst: FinCat, omap: dict, amap: dict,
                 name: str = ""):
        self.name = name
        self.src, self.dst = src, dst
        self.omap = dict(omap)
        self.amap = dict(amap)
        for o in src.objects:
            self.amap.setdefault(src.id_arr(o), dst.id_arr(self.omap[o]))

    def on_obj(self, o):
        return self.omap[o]

    def on_arr(self, a):
        return self.amap[a]

    def validate(self) -> list[str]:
        out = []
        for o in self.src.objects:
            if o not in self.omap or self.omap[o] not in self.dst.objects:
                out.append(f"object map misses {o}")
        for n, a in self.src.arrows.items():
            if n not in self.amap:
                out.append(f"arrow map misses {n}")
                continue
            fa = self.dst.arr(self.amap[n])
            if (fa.src, fa.dst) != (self.omap[a.src], self.omap[a.dst]):
                out.append(f"arrow image of {n} has wrong boundary")
        if out:
            return out  # later laws presuppose well-bounded tables
        for o in self.src.objects:
            if self.amap[self.src.id_arr(o)] != self.dst.id_arr(self.omap[o]):
                out.append(f"identity at {o} not preserved")
        for f in self.src.arrows.values():
            for g in self.src.arrows.values():
                if g.src != f.dst:
                    continue
                lhs = self.amap[self.src.comp(g.name, f.name)]
                rhs = self.dst.comp(self.amap[g.name], self.amap[f.name])
                if lhs != rhs:
                    out.append(f"composition not preserved at "
                               f"{g.name}∘{f.name}")
        return out

    def same_tables(self, other: "FinFunctor") -> bool:
        return self.omap == other.omap and \
            all(self.amap[a] == other.amap[a] for a in self.src.arrows)


def identity_functor(c: FinCat) -> FinFunctor:
    return FinFunctor(c, c, {o: o for o in c.objects},
                      {a: a for a in c.arrows}, name=f"Id({c.name})")


def compose_functors(g: FinFunctor, f: FinFunctor) -> FinFunctor:
    """g∘f (apply f first)."""
    return FinFunctor(f.src, g.dst,
                      {o: g.omap[f.omap[o]] for o in f.src.objects},
                      {a: g.amap[f.amap[a]] for a in f.src.arrows},
                      name=f"{g.name}∘{f.name}")


class FinNat:
    def __init__(self, src: FinFunctor, dst: FinFunctor, components: dict,
                 name: str = ""):
        self.name = name
        self.src, self.dst = src, dst
        self.components = dict(components)

    def at(self, obj):
        return self.components[obj]

    def validate(self) -> list[str]:
        out = []
        cat = self.dst.dst
        for o in self.src.src.objects:
            if o not in self.components:
                out.append(f"component missing at {o}")
                continue
            c = cat.arr(self.components[o])
            if (c.src, c.dst) != (self.src.omap[o], self.dst.omap[o]):
                out.append(f"component at {o} has wrong boundary")
        for f in self.src.src.arrows.values():
            lhs = cat.comp(self.dst.amap[f.name], self.components[f.src])
            rhs = cat.comp(self.components[f.dst], self.src.amap[f.name])
            if lhs != rhs:
                out.append(f"naturality fails at {f.name}")
        return out


def identity_nat(f: FinFunctor, name: str = "") -> FinNat:
    return FinNat(f, f, {o: f.dst.id_arr(f.omap[o]) for o in f.src.objects},
                  name=name)


# --- diagrams of categories over a mode theory --------------------------------

class Diagram:
    """A strict 2-functor from the mode theory to Cat: μ: p→q is sent to a
    functor C_μ : C_p → C_q, and a cell β: ρ ⇒ ρ' to a natural transformation
    C_β : C_ρ ⇒ C_ρ'."""

    def __init__(self, mt: ModeTheory, cats: dict, functors: dict,
                 nats: dict):
        self.mt = mt
        self.cats = dict(cats)
        self.functors = dict(functors)
        self.nats = dict(nats)
        for p in mt.modes:
            self.functors.setdefault(mt.id_mor(p),
                                     identity_functor(self.cats[p]))
        for name, f in list(self.functors.items()):
            self.nats.setdefault(mt.id_cell(name),
                                 identity_nat(f, name=mt.id_cell(name)))

    def cat(self, mode: str) -> FinCat:
        return self.cats[mode]

    def fun(self, mor: str) -> FinFunctor:
        return self.functors[mor]

    def nat(self, cell: str) -> FinNat:
        return self.nats[cell]

    def validate(self) -> list[str]:
        out = []
        for p, c in self.cats.items():
            out += [f"C_{p}: {v}" for v in c.validate()]
        for m in self.mt.morphisms.values():
            f = self.functors.get(m.name)
            if f is None:
                out.append(f"functor missing for {m.name}")
                continue
            if f.src is not self.cats[m.src] or f.dst is not self.cats[m.dst]:
                out.append(f"functor for {m.name} has wrong boundary")
                continue
            out += [f"C_{m.name}: {v}" for v in f.validate()]
        # strict functoriality on morphisms: C_{μ∘ν} = C_μ ∘ C_ν as tables
        for (mu, nu), comp in self.mt.compose_table.items():
            lhs = self.functors[comp]
            rhs = compose_functors(self.functors[mu], self.functors[nu])
            if not lhs.same_tables(rhs):
                out.append(f"strictness fails: C_({mu}∘{nu}) != "
                           f"C_{mu}∘C_{nu}")
        for c in self.mt.cells.values():
            n = self.nats.get(c.name)
            if n is None:
                out.append(f"natural transformation missing for {c.name}")
                continue
            if n.src is not self.functors[c.src] or \
                    n.dst is not self.functors[c.dst]:
                out.append(f"C_{c.name} has wrong boundary")
                continue
            out += [f"C_{c.name}: {v}" for v in n.validate()]
        # strict 2-functoriality on cells
        for (b, a), v in self.mt.vcompose_table.items():
            na, nb, nv = self.nats[a], self.nats[b], self.nats[v]
            cat = nv.dst.dst
            for o in nv.src.src.objects:
                if nv.at(o) != cat.comp(nb.at(o), na.at(o)):
                    out.append(f"C_({b}∘{a}) differs at {o}")
                    break
        for (m, c), w in self.mt.wl_table.items():
            nc, nw = self.nats[c], self.nats[w]
            fm = self.functors[m]
            for o in nc.src.src.objects:
                if nw.at(o) != fm.amap[nc.at(o)]:
                    out.append(f"C_({m}◁{c}) differs at {o}")
                    break
        for (c, m), w in self.mt.wr_table.items():
            nc, nw = self.nats[c], self.nats[w]
            fm = self.functors[m]
            for o in fm.src.objects:
                if nw.at(o) != nc.at(fm.omap[o]):
                    out.append(f"C_({c}▷{m}) differs at {o}")
                    break
        return out


# --- comma categories of the mode theory --------------------------------------

def comma(mt: ModeTheory, pi: str, nu: str) -> FinCat:
    """The category ϖ↓ν of pairs (σ, β: ϖ ⇒ ν∘σ) for ϖ: r→s, ν: p→s.

    Objects are the pairs; an arrow (σ,β) → (σ',β') is a cell γ: σ ⇒ σ'
    with (ν◁γ)∘β = β', named by the triple (γ, src pair, dst pair)."""
    mpi, mnu = mt.mor(pi), mt.mor(nu)
    if mpi.dst != mnu.dst:
        raise NotComposable(f"comma({pi},{nu}): targets differ")
    r, p = mpi.src, mnu.src
    objects = []
    for sigma in mt.morphisms_between(r, p):
        comp = mt.compose(nu, sigma.name)
        for beta in mt.cells_from_to(pi, comp):
            objects.append((sigma.name, beta.name))
    arrows = []
    for (s1, b1) in objects:
        for (s2, b2) in objects:
            for gamma in (c.name for c in mt.cells_from_to(s1, s2)):
                if mt.vcomp(mt.wl(nu, gamma), b1) == b2:
                    if gamma == mt.id_cell(s1) and (s1, b1) == (s2, b2):
                        continue  # synthesized identity
                    arrows.append(((gamma, (s1, b1), (s2, b2)),
                                   (s1, b1), (s2, b2)))
    cat = FinCat(objects, arrows, [], name=f"({pi}↓{nu})")
    # composition: compose the underlying cells
    for a in list(cat.arrows.values()):
        for b in list(cat.arrows.values()):
            if b.src != a.dst:
                continue
            cat.compose[(b.name, a.name)] = _comma_comp(mt, cat, b, a)
    return cat


def _comma_comp(mt, cat, b, a):
    ga = _cell_of(mt, cat, a)
    gb = _cell_of(mt, cat, b)
    g = mt.vcomp(gb, ga)
    if g == mt.id_cell(a.src[0]) and a.src == b.dst:
        return cat.id_arr(a.src)
    n = (g, a.src, b.dst)
    if n not in cat.arrows:
        raise MalformedTable(f"comma category not closed at {n}")
    return n


def _cell_of(mt, cat, arrow: Arrow):
    """The mode-theory cell underlying a comma-category arrow."""
    if isinstance(arrow.name, tuple) and len(arrow.name) == 2 and \
            arrow.name[0] == "id":
        return mt.id_cell(arrow.src[0])
    return arrow.name[0]


def comma_cell(mt: ModeTheory, cat: FinCat, arrow_name) -> str:
    return _cell_of(mt, cat, cat.arr(arrow_name))


# --- limits by terminal-cone search -------------------------------------------

@dataclass(frozen=True)
class Cone:
    apex: Hashable
    legs: tuple  # of (node key, arrow name) pairs, sorted by key

    def leg(self, key):
        return dict(self.legs)[key]


def _cones(c: FinCat, nodes: dict, edges, apex) -> list[Cone]:
    keys = sorted(nodes, key=repr)
    choices = [c.hom(apex, nodes[k]) for k in keys]
    out = []
    for combo in itertools.product(*choices):
        legs = dict(zip(keys, combo))
        if all(c.comp(e_arr, legs[a]) == legs[b] for (a, b, e_arr) in edges):
            out.append(Cone(apex, tuple(sorted(legs.items(), key=repr))))
    return out


def all_cones(c: FinCat, nodes: dict, edges, cap: Optional[int] = None,
              order: Optional[int] = None) -> list[Cone]:
    keys = sorted(nodes, key=repr)
    estimate = 0
    for apex in c.objects:
        n = 1
        for k in keys:
            n *= len(c.hom(apex, nodes[k]))
        estimate += n
    if cap is not None and estimate > cap:
        raise CapExceeded(f"cone search size {estimate} exceeds cap {cap}")
    out = []
    apexes = list(c.objects)
    if order is not None:
        random.Random(order).shuffle(apexes)
    for apex in apexes:
        out.extend(_cones(c, nodes, edges, apex))
    if order is not None:
        random.Random(order + 1).shuffle(out)
    return out


def _factorizations(c: FinCat, lim: Cone, k: Cone) -> list:
    return [m for m in c.hom(k.apex, lim.apex)
            if all(c.comp(dict(lim.legs)[key], m) == arr
                   for key, arr in k.legs)]


def limit(c: FinCat, nodes: dict, edges=(), cap: Optional[int] = None,
          order: Optional[int] = None) -> Optional[Cone]:
    """Terminal cone over the diagram, or None when absent.

    nodes: mapping key → object; edges: (src key, dst key, arrow) triples.
    """
    cones = all_cones(c, nodes, edges, cap=cap, order=order)
    for cand in cones:
        if all(len(_factorizations(c, cand, k)) == 1 for k in cones):
            return cand
    return None


def is_terminal_cone(c: FinCat, nodes: dict, edges, cone: Cone,
                     cap: Optional[int] = None) -> bool:
    cones = all_cones(c, nodes, edges, cap=cap)
    return all(len(_factorizations(c, cone, k)) == 1 for k in cones)


def check_preserves_limit(f: FinFunctor, nodes: dict, edges, cone: Cone,
                          cap: Optional[int] = None) -> bool:
    """True iff the image of a limit cone is again a limit cone."""
    img_nodes = {k: f.omap[o] for k, o in nodes.items()}
    img_edges = [(a, b, f.amap[e]) for (a, b, e) in edges]
    img_cone = Cone(f.omap[cone.apex],
                    tuple(sorted(((k, f.amap[a]) for k, a in cone.legs),
                                 key=repr)))
    return is_terminal_cone(f.dst, img_nodes, img_edges, img_cone, cap=cap)


# --- serialization -------------------------------------------------------------

def fincat_from_data(data: dict, name: str = "") -> FinCat:
    return FinCat(data["objects"],
                  [tuple(a) for a in data["arrows"]],
                  [tuple(r) for r in data["compose"]],
                  name=name)


def load_diagram(path) -> Diagram:
    """Read a diagram file; its mode-theory path is relative to the file."""
    import json
    from pathlib import Path

    from .mode_theory import load_mode_theory, validate_mode_theory

    path = Path(path)
    data = json.loads(path.read_text(encoding="utf-8"))
    mt = load_mode_theory(path.parent / data["mode_theory"])
    report = validate_mode_theory(mt)
    if not report.ok:
        raise MalformedTable("diagram's mode theory fails validation: " +
                             "; ".join(v.axiom for v in report.violations))
    return diagram_from_data(mt, data)


def diagram_from_data(mt: ModeTheory, data: dict) -> Diagram:
    cats = {p: fincat_from_data(d, name=p)
            for p, d in data["categories"].items()}
    functors = {}
    for mor, fd in data.get("functors", {}).items():
        m = mt.mor(mor)
        functors[mor] = FinFunctor(cats[m.src], cats[m.dst],
                                   fd["objects"], fd.get("arrows", {}),
                                   name=mor)
    diagram = Diagram(mt, cats, functors, {})
    for cell, nd in data.get("naturals", {}).items():
        c = mt.cell(cell)
        diagram.nats[cell] = FinNat(diagram.functors[c.src],
                                    diagram.functors[c.dst],
                                    nd["components"], name=cell)
    # re-synthesize identity nats now that all functors exist
    for name_, f in diagram.functors.items():
        diagram.nats.setdefault(mt.id_cell(name_),
                                identity_nat(f, name=mt.id_cell(name_)))
    return diagram
