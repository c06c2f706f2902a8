"""Co-dextrification of a diagram of categories.

Given a diagram C over a mode theory, the codex category at mode r has as
objects families Gamma^mu (one object of C_p per morphism mu: p -> r) together
with structure maps Gamma^alpha : Gamma^nu -> C_rho(Gamma^mu), one per
decomposition alpha: mu => nu . rho, subject to identity, cocycle, and
cell-action coherence.  Structure maps are keyed on the full decomposition
triple (nu, rho, alpha), not just the cell.

Everything here is finite: codex categories are enumerated exhaustively and
handed back as plain FinCats so the limit machinery applies to them unchanged.
Lock functors act by composition on the index; reflect projects a component;
incl builds its right adjoint pointwise from limits over comma categories.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (CapExceeded, LimitAbsent, MalformedTable, NotColax,
                     NotComposable)
from .fincat import (Diagram, FinCat, FinFunctor, FinNat, comma, comma_cell,
                     compose_functors, identity_functor, limit)


@dataclass(frozen=True)
class OplaxObject:
    """One object of a codex category.

    components: sorted tuple of (morphism name, object) pairs.
    structure: sorted tuple of ((nu, rho, alpha), arrow) pairs.
    """
    mode: str
    components: tuple
    structure: tuple

    def component(self, mu):
        return dict(self.components)[mu]

    def smap(self, triple):
        return dict(self.structure)[triple]


@dataclass
class CodexCategory:
    diagram: Diagram
    mode: str
    cat: FinCat

    @property
    def objects(self):
        return self.cat.objects


def decomposition_triples(mt, r) -> list:
    """All (nu, rho, alpha) with nu: q->r, rho: p->q, alpha: mu => nu.rho."""
    out = []
    for rho in mt.morphisms.values():
        for nu in mt.morphisms.values():
            if nu.dst != r or rho.dst != nu.src:
                continue
            comp = mt.compose(nu.name, rho.name)
            for c in mt.cells.values():
                if c.dst == comp:
                    out.append((nu.name, rho.name, c.name))
    return sorted(out)


def _is_identity_triple(mt, t) -> bool:
    nu, rho, alpha = t
    return mt.is_id_mor(rho) and alpha == mt.id_cell(mt.cell(alpha).src)


def _structure_violations(d, comps, smaps, trips) -> list[str]:
    """Cocycle and cell-action equations, assuming boundaries are fine."""
    mt = d.mt
    out = []
    for t1 in trips:
        nu1, rho1, a1 = t1
        mu1 = mt.cell(a1).src
        # cocycle: decompose nu1 further by any t2 = (nu2, rho2, a2)
        for t2 in trips:
            nu2, rho2, a2 = t2
            if mt.cell(a2).src != nu1:
                continue
            t3 = (nu2, mt.compose(rho2, rho1),
                  mt.vcomp(mt.wr(a2, rho1), a1))
            c2 = d.cat(mt.mor(nu2).src)
            lhs = c2.comp(d.fun(rho2).amap[smaps[t1]], smaps[t2])
            if lhs != smaps[t3]:
                out.append(f"cocycle fails at {t1} then {t2}")
        # cell action: whisker the decomposition by any beta: rho1 => sigma
        for beta in mt.cells.values():
            if beta.src != rho1:
                continue
            t3 = (nu1, beta.dst, mt.vcomp(mt.wl(nu1, beta.name), a1))
            cq = d.cat(mt.mor(nu1).src)
            lhs = cq.comp(d.nat(beta.name).at(comps[mu1]), smaps[t1])
            if lhs != smaps[t3]:
                out.append(f"cell action fails at {t1} with {beta.name}")
    return out


def check_oplax_object(d, obj: OplaxObject) -> list[str]:
    """Independent verification of all codex-object axioms."""
    mt = d.mt
    comps = dict(obj.components)
    smaps = dict(obj.structure)
    mus = [m.name for m in mt.morphisms_into(obj.mode)]
    if sorted(comps) != sorted(mus):
        return ["component index set does not match morphisms into the mode"]
    trips = decomposition_triples(mt, obj.mode)
    if sorted(smaps) != trips:
        return ["structure map index set does not match decompositions"]
    out = []
    for t in trips:
        nu, rho, alpha = t
        mu = mt.cell(alpha).src
        cq = d.cat(mt.mor(nu).src)
        arr = cq.arr(smaps[t])
        if (arr.src, arr.dst) != (comps[nu], d.fun(rho).omap[comps[mu]]):
            out.append(f"structure map at {t} has wrong boundary")
        if _is_identity_triple(mt, t) and smaps[t] != cq.id_arr(comps[mu]):
            out.append(f"identity decomposition at {t} is not the identity")
    if out:
        return out
    return _structure_violations(d, comps, smaps, trips)


def _theta_squares_ok(d, trips, g, h, theta) -> bool:
    mt = d.mt
    for t in trips:
        nu, rho, alpha = t
        mu = mt.cell(alpha).src
        cq = d.cat(mt.mor(nu).src)
        lhs = cq.comp(d.fun(rho).amap[theta[mu]], g.smap(t))
        rhs = cq.comp(h.smap(t), theta[nu])
        if lhs != rhs:
            return False
    return True


def check_oplax_morphism(cx: CodexCategory, arrow_name) -> list[str]:
    d, mt = cx.diagram, cx.diagram.mt
    a = cx.cat.arr(arrow_name)
    theta = theta_components(cx, arrow_name)
    trips = decomposition_triples(mt, cx.mode)
    out = []
    for mu, arr in theta.items():
        cp = d.cat(mt.mor(mu).src)
        ab = cp.arr(arr)
        if (ab.src, ab.dst) != (a.src.component(mu), a.dst.component(mu)):
            out.append(f"component at {mu} has wrong boundary")
    if not out and not _theta_squares_ok(d, trips, a.src, a.dst, theta):
        out.append("a structure square does not commute")
    return out


def _identity_family(d, obj: OplaxObject) -> dict:
    mt = d.mt
    return {mu: d.cat(mt.mor(mu).src).id_arr(v) for mu, v in obj.components}


def theta_components(cx: CodexCategory, arrow_name) -> dict:
    """Per-index components of a codex arrow."""
    a = cx.cat.arr(arrow_name)
    if arrow_name == cx.cat.identities.get(a.src):
        return _identity_family(cx.diagram, a.src)
    return dict(arrow_name[0])


def _theta_name(cx: CodexCategory, comps: dict, src: OplaxObject,
                dst: OplaxObject):
    """The canonical arrow name for a component family; must exist."""
    if src == dst and comps == _identity_family(cx.diagram, src):
        return cx.cat.id_arr(src)
    name = (tuple(sorted(comps.items())), src, dst)
    cx.cat.arr(name)
    return name


def enumerate_codex(d: Diagram, r: str, cap=None) -> CodexCategory:
    """Exhaustively build the codex category at mode r as a FinCat."""
    mt = d.mt
    mus = [m.name for m in mt.morphisms_into(r)]
    trips = decomposition_triples(mt, r)
    est = 1
    for mu in mus:
        est *= len(d.cat(mt.mor(mu).src).objects)
    if cap is not None and est > cap:
        raise CapExceeded(f"codex at {r}: component search size {est} "
                          f"exceeds cap {cap}")

    objs: list[OplaxObject] = []
    for combo in itertools.product(
            *(d.cat(mt.mor(mu).src).objects for mu in mus)):
        comps = dict(zip(mus, combo))
        choices = []
        feasible = True
        for t in trips:
            nu, rho, alpha = t
            mu = mt.cell(alpha).src
            cq = d.cat(mt.mor(nu).src)
            target = d.fun(rho).omap[comps[mu]]
            if _is_identity_triple(mt, t):
                opts = [cq.id_arr(comps[mu])]
            else:
                opts = cq.hom(comps[nu], target)
            if not opts:
                feasible = False
                break
            choices.append(opts)
        if not feasible:
            continue
        for pick in itertools.product(*choices):
            smaps = dict(zip(trips, pick))
            if not _structure_violations(d, comps, smaps, trips):
                objs.append(OplaxObject(r, tuple(sorted(comps.items())),
                                        tuple(sorted(smaps.items()))))

    arrows = []
    for g in objs:
        for h in objs:
            homs = [d.cat(mt.mor(mu).src).hom(g.component(mu),
                                              h.component(mu))
                    for mu in mus]
            for combo in itertools.product(*homs):
                theta = dict(zip(mus, combo))
                if not _theta_squares_ok(d, trips, g, h, theta):
                    continue
                if g == h and theta == _identity_family(d, g):
                    continue  # synthesized by FinCat
                name = (tuple(sorted(theta.items())), g, h)
                arrows.append((name, g, h))

    cat = FinCat(objs, arrows, [], name=f"Codex({r})")
    cx = CodexCategory(d, r, cat)
    for a in list(cat.arrows.values()):
        for b in list(cat.arrows.values()):
            if b.src != a.dst or (b.name, a.name) in cat.compose:
                continue
            ta = theta_components(cx, a.name)
            tb = theta_components(cx, b.name)
            comps = {mu: d.cat(mt.mor(mu).src).comp(tb[mu], ta[mu])
                     for mu in mus}
            cat.compose[(b.name, a.name)] = _theta_name(cx, comps,
                                                        a.src, b.dst)
    return cx


# --- lock functors and reflection ----------------------------------------------

def lock_functor(cx_r: CodexCategory, cx_q: CodexCategory,
                 mu: str) -> FinFunctor:
    """The lock along mu: q -> r, acting by composition on the index."""
    d, mt = cx_r.diagram, cx_r.diagram.mt
    m = mt.mor(mu)
    if (m.src, m.dst) != (cx_q.mode, cx_r.mode):
        raise NotComposable(f"lock_functor: {mu} is not {cx_q.mode} -> "
                            f"{cx_r.mode}")
    nus = [n.name for n in mt.morphisms_into(cx_q.mode)]
    trips = decomposition_triples(mt, cx_q.mode)
    omap = {}
    for g in cx_r.objects:
        comps = {nu: g.component(mt.compose(mu, nu)) for nu in nus}
        smaps = {t: g.smap((mt.compose(mu, t[0]), t[1], mt.wl(mu, t[2])))
                 for t in trips}
        omap[g] = OplaxObject(cx_q.mode, tuple(sorted(comps.items())),
                              tuple(sorted(smaps.items())))
    amap = {}
    for name, a in cx_r.cat.arrows.items():
        th = theta_components(cx_r, name)
        comps = {nu: th[mt.compose(mu, nu)] for nu in nus}
        amap[name] = _theta_name(cx_q, comps, omap[a.src], omap[a.dst])
    return FinFunctor(cx_r.cat, cx_q.cat, omap, amap, name=f"lock({mu})")


def lock_cell(cx_r: CodexCategory, cx_q: CodexCategory, beta: str) -> FinNat:
    """The lock action of a cell beta: mu => mu2 (both q -> r), a natural
    transformation lock(mu2) => lock(mu)."""
    d, mt = cx_r.diagram, cx_r.diagram.mt
    c = mt.cell(beta)
    fm2 = lock_functor(cx_r, cx_q, c.dst)
    fm = lock_functor(cx_r, cx_q, c.src)
    nus = [n.name for n in mt.morphisms_into(cx_q.mode)]
    comps = {}
    for g in cx_r.objects:
        th = {}
        for nu in nus:
            o = mt.mor(nu).src
            cell = mt.wr(beta, nu)
            th[nu] = g.smap((mt.compose(c.dst, nu), mt.id_mor(o), cell))
        comps[g] = _theta_name(cx_q, th, fm2.omap[g], fm.omap[g])
    return FinNat(fm2, fm, comps, name=f"lock({beta})")


def reflect(cx_q: CodexCategory, mu: str) -> FinFunctor:
    """Project the mu-component; mu: p -> q."""
    d, mt = cx_q.diagram, cx_q.diagram.mt
    m = mt.mor(mu)
    if m.dst != cx_q.mode:
        raise NotComposable(f"reflect: {mu} does not land in {cx_q.mode}")
    cp = d.cat(m.src)
    omap = {g: g.component(mu) for g in cx_q.objects}
    amap = {name: theta_components(cx_q, name)[mu] for name in cx_q.cat.arrows}
    return FinFunctor(cx_q.cat, cp, omap, amap, name=f"reflect({mu})")


# --- the right adjoint of reflect ----------------------------------------------

@dataclass
class Adjunction:
    """reflect(pi) left adjoint to incl(pi), with all the witnesses."""
    pi: str
    reflect: FinFunctor  # codex at s -> C_r
    incl: FinFunctor     # C_r -> codex at s
    unit: FinNat         # Id => incl . reflect
    counit: FinNat       # reflect . incl => Id
    cones: dict          # (object of C_r, nu) -> limit cone over comma(pi,nu)


def incl(cx_s: CodexCategory, pi: str, cap=None) -> Adjunction:
    """Right adjoint to reflect(pi), computed pointwise by limits over the
    comma categories pi down nu."""
    d, mt = cx_s.diagram, cx_s.diagram.mt
    m = mt.mor(pi)
    if m.dst != cx_s.mode:
        raise NotComposable(f"incl: {pi} does not land in {cx_s.mode}")
    r, s = m.src, m.dst
    cr = d.cat(r)
    nus = [n.name for n in mt.morphisms_into(s)]
    commas = {nu: comma(mt, pi, nu) for nu in nus}
    trips = decomposition_triples(mt, s)

    cones = {}
    omap = {}
    for g in cr.objects:
        comps = {}
        for nu in nus:
            k = commas[nu]
            cq = d.cat(mt.mor(nu).src)
            nodes = {o: d.fun(o[0]).omap[g] for o in k.objects}
            edges = [(a.src, a.dst, d.nat(comma_cell(mt, k, n)).at(g))
                     for n, a in k.arrows.items()
                     if n not in k.identities.values()]
            cone = limit(cq, nodes, edges, cap=cap)
            if cone is None:
                raise LimitAbsent(f"incl({pi}): component at {nu} of {g} "
                                  "has no limit")
            comps[nu] = cone.apex
            cones[(g, nu)] = cone
        smaps = {}
        for t in trips:
            nu, rho, alpha = t
            mu = mt.cell(alpha).src
            cq = d.cat(mt.mor(nu).src)
            frho = d.fun(rho)
            conemu, conenu = cones[(g, mu)], cones[(g, nu)]
            target = frho.omap[comps[mu]]
            cands = []
            for u in cq.hom(comps[nu], target):
                if all(cq.comp(frho.amap[conemu.leg(o)], u) ==
                       conenu.leg((mt.compose(rho, o[0]),
                                   mt.vcomp(mt.wr(alpha, o[0]), o[1])))
                       for o in commas[mu].objects):
                    cands.append(u)
            if len(cands) != 1:
                raise LimitAbsent(f"incl({pi}): structure map at {t} of {g} "
                                  f"has {len(cands)} factorizations")
            smaps[t] = cands[0]
        obj = OplaxObject(s, tuple(sorted(comps.items())),
                          tuple(sorted(smaps.items())))
        if obj not in cx_s.objects:
            raise MalformedTable(f"incl({pi}): computed object for {g} was "
                                 "not enumerated")
        omap[g] = obj

    amap = {}
    for fname, fa in cr.arrows.items():
        comps = {}
        for nu in nus:
            cq = d.cat(mt.mor(nu).src)
            c1, c2 = cones[(fa.src, nu)], cones[(fa.dst, nu)]
            cands = [u for u in cq.hom(omap[fa.src].component(nu),
                                       omap[fa.dst].component(nu))
                     if all(cq.comp(c2.leg(o), u) ==
                            cq.comp(d.fun(o[0]).amap[fname], c1.leg(o))
                            for o in commas[nu].objects)]
            if len(cands) != 1:
                raise LimitAbsent(f"incl({pi}): image of {fname} at {nu} has "
                                  f"{len(cands)} factorizations")
            comps[nu] = cands[0]
        amap[fname] = _theta_name(cx_s, comps, omap[fa.src], omap[fa.dst])
    incl_f = FinFunctor(cr, cx_s.cat, omap, amap, name=f"incl({pi})")
    refl_f = reflect(cx_s, pi)

    counit_key = (mt.id_mor(r), mt.id_cell(pi))
    counit = FinNat(compose_functors(refl_f, incl_f), identity_functor(cr),
                    {g: cones[(g, pi)].leg(counit_key) for g in cr.objects},
                    name=f"counit({pi})")

    unit_comps = {}
    for delta in cx_s.objects:
        g = delta.component(pi)
        comps = {}
        for nu in nus:
            cq = d.cat(mt.mor(nu).src)
            cone = cones[(g, nu)]
            cands = [u for u in cq.hom(delta.component(nu),
                                       omap[g].component(nu))
                     if all(cq.comp(cone.leg(o), u) ==
                            delta.smap((nu, o[0], o[1]))
                            for o in commas[nu].objects)]
            if len(cands) != 1:
                raise LimitAbsent(f"incl({pi}): unit at {nu} of {delta} has "
                                  f"{len(cands)} factorizations")
            comps[nu] = cands[0]
        unit_comps[delta] = _theta_name(cx_s, comps, delta, omap[g])
    unit = FinNat(identity_functor(cx_s.cat),
                  compose_functors(incl_f, refl_f), unit_comps,
                  name=f"unit({pi})")
    return Adjunction(pi, refl_f, incl_f, unit, counit, cones)


def transpose(cx_s: CodexCategory, adj: Adjunction, delta: OplaxObject, f):
    """Adjoint transpose of f: delta^pi -> g across reflect(pi) -| incl(pi)."""
    return cx_s.cat.comp(adj.incl.amap[f], adj.unit.at(delta))


def mate(cx_s: CodexCategory, adj_mu: Adjunction, adj_nu: Adjunction,
         rho: str, alpha: str) -> FinNat:
    """The mate incl(mu) => incl(nu) . C_rho of the structure-map operation,
    for alpha: mu => nu . rho."""
    d, mt = cx_s.diagram, cx_s.diagram.mt
    mu, nu = adj_mu.pi, adj_nu.pi
    c = mt.cell(alpha)
    if c.src != mu or c.dst != mt.compose(nu, rho):
        raise NotComposable(f"mate: {alpha} is not {mu} => {nu}.{rho}")
    q = mt.mor(nu).src
    cq = d.cat(q)
    comps = {}
    for g in d.cat(mt.mor(mu).src).objects:
        x = adj_mu.incl.omap[g]
        f = cq.comp(d.fun(rho).amap[adj_mu.counit.at(g)],
                    x.smap((nu, rho, alpha)))
        comps[g] = transpose(cx_s, adj_nu, x, f)
    return FinNat(adj_mu.incl, compose_functors(adj_nu.incl, d.fun(rho)),
                  comps, name=f"mate({rho},{alpha})")


# --- the right adjoint of the lock ---------------------------------------------

@dataclass
class RightAdjoint:
    """lock(pi) left adjoint to the limit-assembled functor."""
    pi: str
    functor: FinFunctor  # codex at r -> codex at s
    lock: FinFunctor     # codex at s -> codex at r
    unit: dict           # object of codex at s -> arrow there
    counit: dict         # object of codex at r -> arrow there
    cones: dict          # object of codex at r -> limit cone


def codex_right_adjoint(cx_r: CodexCategory, cx_s: CodexCategory, pi: str,
                        adjs: dict, cap=None) -> RightAdjoint:
    """Right adjoint to lock(pi), pi: r -> s, assembled as a limit of
    inclusions; adjs maps every composite pi . mu to its Adjunction."""
    d, mt = cx_r.diagram, cx_r.diagram.mt
    m = mt.mor(pi)
    if (m.src, m.dst) != (cx_r.mode, cx_s.mode):
        raise NotComposable(f"codex_right_adjoint: {pi} is not "
                            f"{cx_r.mode} -> {cx_s.mode}")
    mus = [x.name for x in mt.morphisms_into(cx_r.mode)]
    trips = [t for t in decomposition_triples(mt, cx_r.mode)
             if not _is_identity_triple(mt, t)]
    mates = {}
    for t in trips:
        nu, rho, alpha = t
        mu = mt.cell(alpha).src
        mates[t] = mate(cx_s, adjs[mt.compose(pi, mu)],
                        adjs[mt.compose(pi, nu)], rho, mt.wl(pi, alpha))

    cones = {}
    omap = {}
    for delta in cx_r.objects:
        nodes = {("n", mu): adjs[mt.compose(pi, mu)].incl.omap[
            delta.component(mu)] for mu in mus}
        edges = []
        for t in trips:
            nu, rho, alpha = t
            mu = mt.cell(alpha).src
            a_nu = adjs[mt.compose(pi, nu)]
            nodes[("c", t)] = a_nu.incl.omap[
                d.fun(rho).omap[delta.component(mu)]]
            edges.append((("n", nu), ("c", t), a_nu.incl.amap[delta.smap(t)]))
            edges.append((("n", mu), ("c", t),
                          mates[t].at(delta.component(mu))))
        cone = limit(cx_s.cat, nodes, edges, cap=cap)
        if cone is None:
            raise LimitAbsent(f"codex_right_adjoint({pi}): no limit "
                              f"for {delta}")
        omap[delta] = cone.apex
        cones[delta] = cone

    def node_maps(theta, a):
        out = {}
        for mu in mus:
            out[("n", mu)] = adjs[mt.compose(pi, mu)].incl.amap[theta[mu]]
        for t in trips:
            nu, rho, alpha = t
            mu = mt.cell(alpha).src
            out[("c", t)] = adjs[mt.compose(pi, nu)].incl.amap[
                d.fun(rho).amap[theta[mu]]]
        return out

    amap = {}
    for name, a in cx_r.cat.arrows.items():
        theta = theta_components(cx_r, name)
        nmaps = node_maps(theta, a)
        c1, c2 = cones[a.src], cones[a.dst]
        cands = [u for u in cx_s.cat.hom(omap[a.src], omap[a.dst])
                 if all(cx_s.cat.comp(c2.leg(k), u) ==
                        cx_s.cat.comp(nmaps[k], c1.leg(k)) for k in nmaps)]
        if len(cands) != 1:
            raise LimitAbsent(f"codex_right_adjoint({pi}): image of an arrow "
                              f"has {len(cands)} factorizations")
        amap[name] = cands[0]
    functor = FinFunctor(cx_r.cat, cx_s.cat, omap, amap, name=f"radj({pi})")
    lock = lock_functor(cx_s, cx_r, pi)

    counit = {}
    for delta in cx_r.objects:
        apex = omap[delta]
        comps = {}
        for mu in mus:
            pim = mt.compose(pi, mu)
            legc = theta_components(cx_s, cones[delta].leg(("n", mu)))[pim]
            cp = d.cat(mt.mor(mu).src)
            comps[mu] = cp.comp(adjs[pim].counit.at(delta.component(mu)),
                                legc)
        counit[delta] = _theta_name(cx_r, comps, lock.omap[apex], delta)

    unit = {}
    for gamma in cx_s.objects:
        delta = lock.omap[gamma]
        cone = cones[delta]
        wanted = {("n", mu): adjs[mt.compose(pi, mu)].unit.at(gamma)
                  for mu in mus}
        for t in trips:
            nu = t[0]
            edge = adjs[mt.compose(pi, nu)].incl.amap[delta.smap(t)]
            wanted[("c", t)] = cx_s.cat.comp(edge, wanted[("n", nu)])
        cands = [u for u in cx_s.cat.hom(gamma, omap[delta])
                 if all(cx_s.cat.comp(cone.leg(k), u) == v
                        for k, v in wanted.items())]
        if len(cands) != 1:
            raise LimitAbsent(f"codex_right_adjoint({pi}): unit at {gamma} "
                              f"has {len(cands)} factorizations")
        unit[gamma] = cands[0]
    return RightAdjoint(pi, functor, lock, unit, counit, cones)


# --- bundles and global checks --------------------------------------------------

@dataclass
class CodexBundle:
    """Codex categories at every mode with both adjoint families."""
    diagram: Diagram
    codexes: dict
    adjunctions: dict     # morphism -> Adjunction (reflect -| incl)
    right_adjoints: dict  # morphism -> RightAdjoint (lock -| radj)


def build_bundle(d: Diagram, cap=None) -> CodexBundle:
    mt = d.mt
    codexes = {p: enumerate_codex(d, p, cap=cap) for p in mt.modes}
    adjs = {m.name: incl(codexes[m.dst], m.name, cap=cap)
            for m in mt.morphisms.values()}
    radjs = {m.name: codex_right_adjoint(codexes[m.src], codexes[m.dst],
                                         m.name, adjs, cap=cap)
             for m in mt.morphisms.values()}
    return CodexBundle(d, codexes, adjs, radjs)


def isomorphic(cat: FinCat, a, b) -> bool:
    for f in cat.hom(a, b):
        for g in cat.hom(b, a):
            if cat.comp(g, f) == cat.id_arr(a) and \
                    cat.comp(f, g) == cat.id_arr(b):
                return True
    return False


def psnat_component(bundle: CodexBundle, pi: str, delta: OplaxObject):
    """The canonical comparison (radj(pi) delta)^1 -> C_pi(delta^1)."""
    d, mt = bundle.diagram, bundle.diagram.mt
    r, s = mt.mor(pi).src, mt.mor(pi).dst
    radj = bundle.right_adjoints[pi]
    leg = radj.cones[delta].leg(("n", mt.id_mor(r)))
    outer = theta_components(bundle.codexes[s], leg)[mt.id_mor(s)]
    inner_cone = bundle.adjunctions[pi].cones[
        (delta.component(mt.id_mor(r)), mt.id_mor(s))]
    inner = inner_cone.leg((pi, mt.id_cell(pi)))
    return d.cat(s).comp(inner, outer)


def verify_2functor(bundle: CodexBundle) -> list[tuple]:
    """Strictness of locks and coherence of their right adjoints."""
    d, mt = bundle.diagram, bundle.diagram.mt
    cx = bundle.codexes
    report = []
    for p in mt.modes:
        f = lock_functor(cx[p], cx[p], mt.id_mor(p))
        ok = f.same_tables(identity_functor(cx[p].cat))
        report.append((f"lock-identity:{p}", ok, "" if ok else
                       f"lock(1_{p}) is not the identity"))
    for (g, f), h in mt.compose_table.items():
        gm, fm = mt.mor(g), mt.mor(f)
        lg = lock_functor(cx[gm.dst], cx[gm.src], g)
        lf = lock_functor(cx[fm.dst], cx[fm.src], f)
        lh = lock_functor(cx[gm.dst], cx[fm.src], h)
        ok = lh.same_tables(compose_functors(lf, lg))
        report.append((f"lock-strict:{g}.{f}", ok, "" if ok else
                       f"lock({h}) differs from lock({f}).lock({g})"))
        rg = bundle.right_adjoints[g].functor
        rf = bundle.right_adjoints[f].functor
        rh = bundle.right_adjoints[h].functor
        bad = [delta for delta in cx[fm.src].objects
               if not isomorphic(cx[gm.dst].cat, rh.omap[delta],
                                 rg.omap[rf.omap[delta]])]
        report.append((f"radj-compose:{g}.{f}", not bad, "" if not bad else
                       f"composite right adjoints differ at {bad[0]}"))
    for beta in mt.cells.values():
        c = mt.cell(beta.name)
        ms = mt.mor(c.src)
        if ms.src == ms.dst and mt.is_id_mor(c.src) and mt.is_id_mor(c.dst):
            continue
        nat = lock_cell(cx[ms.dst], cx[ms.src], beta.name)
        bad = nat.validate()
        report.append((f"lock-cell:{beta.name}", not bad,
                       "; ".join(bad)))
    return report


# --- the universal property -----------------------------------------------------

def reflect_colax(bundle: CodexBundle):
    """The identity-component projections as a colax transformation into the
    base diagram, with the canonical comparison cells."""
    d, mt = bundle.diagram, bundle.diagram.mt
    g = {p: reflect(bundle.codexes[p], mt.id_mor(p)) for p in mt.modes}
    gamma = {}
    for m in mt.morphisms.values():
        gamma[m.name] = {delta: psnat_component(bundle, m.name, delta)
                         for delta in bundle.codexes[m.src].objects}
    return g, gamma


def dextrify_colax(bundle: CodexBundle, g: dict, gamma: dict,
                   target: CodexBundle) -> dict:
    """Lift a colax transformation out of the codex family into the codex of
    its target diagram: per mode r, a functor with object part
    (G hat Gamma)^mu = G_p(lock(mu) Gamma).

    g: mode -> FinFunctor from bundle's codex to the target diagram's
    category at that mode; gamma: morphism rho -> per-object comparison
    G_q(radj(rho) Delta) -> E_rho(G_p Delta)."""
    d, mt = bundle.diagram, bundle.diagram.mt
    e = target.diagram
    out = {}
    for r in mt.modes:
        cx_r = bundle.codexes[r]
        tx_r = target.codexes[r]
        mus = [x.name for x in mt.morphisms_into(r)]
        locks = {mu: lock_functor(cx_r, bundle.codexes[mt.mor(mu).src], mu)
                 for mu in mus}
        trips = decomposition_triples(mt, r)
        omap = {}
        for gobj in cx_r.objects:
            comps = {mu: g[mt.mor(mu).src].omap[locks[mu].omap[gobj]]
                     for mu in mus}
            smaps = {}
            for t in trips:
                nu, rho, alpha = t
                mu = mt.cell(alpha).src
                p, q = mt.mor(mu).src, mt.mor(nu).src
                if _is_identity_triple(mt, t):
                    smaps[t] = e.cat(q).id_arr(comps[mu])
                    continue
                lock_mu = locks[mu].omap[gobj]
                lock_nu = locks[nu].omap[gobj]
                lock_nurho = locks[mt.compose(nu, rho)].omap[gobj]
                cell_comps = {}
                for tau in (x.name for x in mt.morphisms_into(p)):
                    o = mt.mor(tau).src
                    cell_comps[tau] = gobj.smap(
                        (mt.compose(mt.compose(nu, rho), tau), mt.id_mor(o),
                         mt.wr(alpha, tau)))
                cx_p = bundle.codexes[p]
                dalpha = _theta_name(cx_p, cell_comps, lock_nurho, lock_mu)
                radj_rho = bundle.right_adjoints[rho]
                mhat = bundle.codexes[q].cat.comp(
                    radj_rho.functor.amap[dalpha], radj_rho.unit[lock_nu])
                try:
                    comparison = gamma[rho][lock_mu]
                except KeyError:
                    raise NotColax(f"missing colax cell for {rho} "
                                   f"at {lock_mu}") from None
                smaps[t] = e.cat(q).comp(comparison, g[q].amap[mhat])
            obj = OplaxObject(r, tuple(sorted(comps.items())),
                              tuple(sorted(smaps.items())))
            if obj not in tx_r.cat.arrows and obj not in tx_r.objects:
                raise NotColax(f"dextrified object for {gobj} violates the "
                               "codex axioms")
            omap[gobj] = obj
        amap = {}
        for name, a in cx_r.cat.arrows.items():
            th = theta_components(cx_r, name)
            comps = {mu: g[mt.mor(mu).src].amap[locks[mu].amap[name]]
                     for mu in mus}
            amap[name] = _theta_name(tx_r, comps, omap[a.src], omap[a.dst])
        out[r] = FinFunctor(cx_r.cat, tx_r.cat, omap, amap,
                            name=f"dextrify({r})")
    return out
