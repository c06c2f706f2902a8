"""Codex categories: enumeration oracles, adjunctions, and dextrification."""

from functools import lru_cache

import pytest

from matt.bundled import diagram_path, theory_path
from matt.codex import (build_bundle, check_oplax_object,
                        check_oplax_morphism, dextrify_colax,
                        enumerate_codex, isomorphic, lock_functor, mate,
                        psnat_component, reflect, reflect_colax, transpose,
                        verify_2functor, OplaxObject)
from matt.errors import CapExceeded, LimitAbsent
from matt.fincat import (Diagram, FinCat, FinFunctor, load_diagram,
                         poset_category)
from matt.mode_theory import load_mode_theory


@lru_cache(maxsize=None)
def diag(name):
    return load_diagram(diagram_path(name))


@lru_cache(maxsize=None)
def bundle(name):
    return build_bundle(diag(name))


# --- enumeration oracles ---------------------------------------------------------

def test_single_arrow_codex_at_q():
    d = diag("single_arrow")
    cx = enumerate_codex(d, "q")
    # components are pairs (x at 1_q, y at mu) with an arrow x -> C_mu(y);
    # C_mu is the identity on the 2-chain, so exactly the pairs x <= y
    pairs = sorted((o.component("id:q"), o.component("mu"))
                   for o in cx.objects)
    assert pairs == [("0", "0"), ("0", "1"), ("1", "1")]


def test_single_arrow_codex_matches_comma_brute_force():
    d = diag("single_arrow")
    cx = enumerate_codex(d, "q")
    cq, cp = d.cat("q"), d.cat("p")
    fmu = d.fun("mu")
    brute = [(x, y, f) for x in cq.objects for y in cp.objects
             for f in cq.hom(x, fmu.omap[y])]
    assert len(cx.objects) == len(brute) == 3


def test_single_arrow_codex_at_p_is_base_category():
    d = diag("single_arrow")
    cx = enumerate_codex(d, "p")
    r = reflect(cx, "id:p")
    assert r.validate() == []
    assert len(cx.objects) == len(d.cat("p").objects)
    assert len(set(r.omap.values())) == len(cx.objects)
    assert len(cx.cat.arrows) == len(d.cat("p").arrows)


def test_comonad_codex_at_p():
    d = diag("comonad")
    cx = enumerate_codex(d, "p")
    pairs = sorted((o.component("id:p"), o.component("m"))
                   for o in cx.objects)
    assert pairs == [("0", "0"), ("0", "2"), ("1", "2"), ("2", "2")]


def test_reflective_codex_at_q():
    d = diag("reflective")
    cx = enumerate_codex(d, "q")
    pairs = sorted((o.component("id:q"), o.component("mu"))
                   for o in cx.objects)
    assert pairs == [("0", "0"), ("1", "1"), ("1", "2")]


def test_semilattice_codex_at_p():
    d = diag("semilattice")
    cx = enumerate_codex(d, "p")
    assert len(cx.objects) == 4


def test_trivial_codex_is_base_category():
    d = diag("trivial")
    cx = enumerate_codex(d, "p")
    assert len(cx.objects) == len(d.cat("p").objects)


@pytest.mark.parametrize("name,mode", [("single_arrow", "q"),
                                       ("comonad", "p"),
                                       ("reflective", "q"),
                                       ("reflective", "p"),
                                       ("semilattice", "p")])
def test_codex_category_is_lawful(name, mode):
    d = diag(name)
    cx = enumerate_codex(d, mode)
    assert cx.cat.validate() == []
    for o in cx.objects:
        assert check_oplax_object(d, o) == []
    for a in cx.cat.arrows:
        assert check_oplax_morphism(cx, a) == []


def test_corrupted_object_rejected():
    d = diag("comonad")
    cx = enumerate_codex(d, "p")
    good = next(o for o in cx.objects
                if o.component("id:p") == "0" and o.component("m") == "2")
    # replace the nonidentity structure map target: breaks the boundary
    bad = OplaxObject("p", good.components,
                      tuple((t, "id:0") for t, _ in good.structure))
    assert check_oplax_object(d, bad) != []


def test_enumeration_cap():
    with pytest.raises(CapExceeded):
        enumerate_codex(diag("reflective"), "q", cap=1)


# --- lock, reflect, incl ---------------------------------------------------------

def test_lock_strictness_reflective():
    report = verify_2functor(bundle("reflective"))
    assert all(ok for _, ok, _ in report), \
        [(n, det) for n, ok, det in report if not ok]


def test_lock_functor_validates():
    b = bundle("comonad")
    f = lock_functor(b.codexes["p"], b.codexes["p"], "m")
    assert f.validate() == []


def test_reflect_projects_component():
    b = bundle("single_arrow")
    cx = b.codexes["q"]
    r = reflect(cx, "mu")
    for o in cx.objects:
        assert r.omap[o] == o.component("mu")


@pytest.mark.parametrize("name", ["trivial", "single_arrow", "comonad",
                                  "semilattice", "reflective",
                                  "nonpreserving"])
def test_adjunction_triangles(name):
    d = diag(name)
    b = bundle(name)
    mt = d.mt
    for m, adj in b.adjunctions.items():
        cr = d.cat(mt.mor(m).src)
        cx = b.codexes[mt.mor(m).dst]
        assert adj.incl.validate() == []
        assert adj.unit.validate() == []
        assert adj.counit.validate() == []
        for delta in cx.objects:
            g = delta.component(m)
            lhs = cr.comp(adj.counit.at(g),
                          adj.reflect.amap[adj.unit.at(delta)])
            assert lhs == cr.id_arr(g), (m, delta)
        for g in cr.objects:
            x = adj.incl.omap[g]
            lhs = cx.cat.comp(adj.incl.amap[adj.counit.at(g)],
                              adj.unit.at(x))
            assert lhs == cx.cat.id_arr(x), (m, g)


def test_adjunction_hom_bijection():
    d = diag("reflective")
    b = bundle("reflective")
    mt = d.mt
    for m, adj in b.adjunctions.items():
        cr = d.cat(mt.mor(m).src)
        cx = b.codexes[mt.mor(m).dst]
        for delta in cx.objects:
            for g in cr.objects:
                below = cr.hom(delta.component(m), g)
                above = cx.cat.hom(delta, adj.incl.omap[g])
                images = {transpose(cx, adj, delta, f) for f in below}
                assert images == set(above), (m, delta, g)


def test_incl_along_identity_is_fully_faithful():
    for name in ["single_arrow", "comonad", "reflective"]:
        d = diag(name)
        b = bundle(name)
        for p in d.mt.modes:
            adj = b.adjunctions[d.mt.id_mor(p)]
            cp = d.cat(p)
            for g in cp.objects:
                eps = adj.counit.at(g)
                a = cp.arr(eps)
                assert any(cp.comp(h, eps) == cp.id_arr(a.src) and
                           cp.comp(eps, h) == cp.id_arr(a.dst)
                           for h in cp.hom(a.dst, a.src)), (name, p, g)


def test_limit_absent_when_component_has_no_limit():
    # discrete C_p has no terminal object, so the empty comma at id:q
    # leaves incl(id:q) without a limit to take
    mt = load_mode_theory(theory_path("single_arrow"))
    cp = FinCat(["a", "b"], [], [], name="discrete")
    cq = poset_category(["0", "1"], lambda x, y: x <= y, name="chain")
    fmu = FinFunctor(cp, cq, {"a": "0", "b": "1"}, {})
    d = Diagram(mt, {"p": cp, "q": cq}, {"mu": fmu}, {})
    assert d.validate() == []
    from matt.codex import enumerate_codex, incl
    cx = enumerate_codex(d, "q")
    with pytest.raises(LimitAbsent):
        incl(cx, "id:q")


# --- mates and the right adjoint of the lock ------------------------------------

def test_mate_is_natural():
    d = diag("reflective")
    b = bundle("reflective")
    # eta: id:p => nu . mu, so the mate goes incl(id:p) => incl(nu) . C_mu
    cx = b.codexes["p"]
    nat = mate(cx, b.adjunctions["id:p"], b.adjunctions["nu"], "mu", "eta")
    assert nat.validate() == []


@pytest.mark.parametrize("name", ["single_arrow", "comonad", "semilattice",
                                  "reflective"])
def test_radj_triangles(name):
    d = diag(name)
    b = bundle(name)
    mt = d.mt
    for m, ra in b.right_adjoints.items():
        cxr = b.codexes[mt.mor(m).src]
        cxs = b.codexes[mt.mor(m).dst]
        assert ra.functor.validate() == []
        for delta in cxr.objects:
            x = ra.functor.omap[delta]
            lhs = cxs.cat.comp(ra.functor.amap[ra.counit[delta]],
                               ra.unit[x])
            assert lhs == cxs.cat.id_arr(x), (m, delta)
        for gamma in cxs.objects:
            x = ra.lock.omap[gamma]
            lhs = cxr.cat.comp(ra.counit[x], ra.lock.amap[ra.unit[gamma]])
            assert lhs == cxr.cat.id_arr(x), (m, gamma)


@pytest.mark.parametrize("name", ["single_arrow", "comonad", "reflective"])
def test_psnat_components_are_iso(name):
    d = diag(name)
    b = bundle(name)
    for m in d.mt.morphisms.values():
        cq = d.cat(m.dst)
        for delta in b.codexes[m.src].objects:
            phi = psnat_component(b, m.name, delta)
            a = cq.arr(phi)
            assert any(cq.comp(h, phi) == cq.id_arr(a.src) and
                       cq.comp(phi, h) == cq.id_arr(a.dst)
                       for h in cq.hom(a.dst, a.src)), (m.name, delta)


# --- dextrification --------------------------------------------------------------

@pytest.mark.parametrize("name", ["single_arrow", "comonad"])
def test_dextrify_round_trip(name):
    d = diag(name)
    b = bundle(name)
    mt = d.mt
    g, gamma = reflect_colax(b)
    ghat = dextrify_colax(b, g, gamma, b)
    for r in mt.modes:
        cx = b.codexes[r]
        assert ghat[r].validate() == []
        for obj in cx.objects:
            im = ghat[r].omap[obj]
            # the identity component comes back on the nose
            assert im.component(mt.id_mor(r)) == g[r].omap[obj]
            # the whole object comes back up to isomorphism
            assert isomorphic(cx.cat, im, obj), (r, obj)


def test_dextrify_missing_cell_raises():
    from matt.errors import NotColax
    b = bundle("single_arrow")
    g, gamma = reflect_colax(b)
    gamma = {m: {} for m in gamma}  # strip all comparison cells
    with pytest.raises(NotColax):
        dextrify_colax(b, g, gamma, b)


def test_enumeration_is_order_independent():
    # rebuilding from a reloaded diagram yields the same objects
    d1 = load_diagram(diagram_path("reflective"))
    d2 = load_diagram(diagram_path("reflective"))
    a = enumerate_codex(d1, "q")
    bq = enumerate_codex(d2, "q")
    assert [(o.components, o.structure) for o in a.objects] == \
           [(o.components, o.structure) for o in bq.objects]
