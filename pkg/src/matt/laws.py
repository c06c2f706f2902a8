"""Executable law suite for a diagram of categories.

Each law is a self-contained check over the diagram and its codex bundle.
Laws report PASS or FAIL with a short counterexample; errors raised while
building the needed structure (absent limits, blown caps) fail the law that
asked for it instead of aborting the suite.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor

from .codex import (build_bundle, dextrify_colax, isomorphic,
                    psnat_component, reflect_colax, transpose,
                    verify_2functor)
from .errors import MattError, MalformedTable, ParseError
from .fincat import check_preserves_limit, limit, load_diagram


def _iso_arrow(cat, f) -> bool:
    a = cat.arr(f)
    return any(cat.comp(h, f) == cat.id_arr(a.src) and
               cat.comp(f, h) == cat.id_arr(a.dst)
               for h in cat.hom(a.dst, a.src))


def law_adjunction(d, bundle, cap):
    """Hom bijection and both triangles for every reflect -| incl pair."""
    mt = d.mt
    for m, adj in bundle.adjunctions.items():
        cr = d.cat(mt.mor(m).src)
        cx = bundle.codexes[mt.mor(m).dst]
        for delta in cx.objects:
            g0 = delta.component(m)
            lhs = cr.comp(adj.counit.at(g0),
                          adj.reflect.amap[adj.unit.at(delta)])
            if lhs != cr.id_arr(g0):
                return False, f"triangle fails for {m} at {delta}"
            for g in cr.objects:
                below = cr.hom(g0, g)
                above = cx.cat.hom(delta, adj.incl.omap[g])
                if {transpose(cx, adj, delta, f) for f in below} != \
                        set(above):
                    return False, f"hom bijection fails for {m} at " \
                                  f"({delta}, {g})"
        for g in cr.objects:
            x = adj.incl.omap[g]
            lhs = cx.cat.comp(adj.incl.amap[adj.counit.at(g)],
                              adj.unit.at(x))
            if lhs != cx.cat.id_arr(x):
                return False, f"triangle fails for {m} at {g}"
    return True, ""


def law_up_ff(d, bundle, cap):
    """Inclusion along an identity is fully faithful: its counit is iso."""
    for p in d.mt.modes:
        adj = bundle.adjunctions[d.mt.id_mor(p)]
        cp = d.cat(p)
        for g in cp.objects:
            if not _iso_arrow(cp, adj.counit.at(g)):
                return False, f"counit at {g} in mode {p} is not iso"
    return True, ""


def law_lock_strictness(d, bundle, cap):
    report = verify_2functor(bundle)
    bad = [(n, det) for n, ok, det in report
           if not ok and n.startswith("lock-")]
    if bad:
        return False, f"{bad[0][0]}: {bad[0][1]}"
    return True, ""


def law_2functor(d, bundle, cap):
    report = verify_2functor(bundle)
    bad = [(n, det) for n, ok, det in report if not ok]
    if bad:
        return False, f"{bad[0][0]}: {bad[0][1]}"
    return True, ""


def law_radj_triangles(d, bundle, cap):
    mt = d.mt
    for m, ra in bundle.right_adjoints.items():
        cxr = bundle.codexes[mt.mor(m).src]
        cxs = bundle.codexes[mt.mor(m).dst]
        for delta in cxr.objects:
            x = ra.functor.omap[delta]
            if cxs.cat.comp(ra.functor.amap[ra.counit[delta]],
                            ra.unit[x]) != cxs.cat.id_arr(x):
                return False, f"right triangle fails for {m} at {delta}"
        for gamma in cxs.objects:
            x = ra.lock.omap[gamma]
            if cxr.cat.comp(ra.counit[x],
                            ra.lock.amap[ra.unit[gamma]]) != \
                    cxr.cat.id_arr(x):
                return False, f"left triangle fails for {m} at {gamma}"
    return True, ""


def law_pseudonat(d, bundle, cap):
    """The identity-component comparison of each right adjoint is iso."""
    for m in d.mt.morphisms.values():
        cq = d.cat(m.dst)
        for delta in bundle.codexes[m.src].objects:
            if not _iso_arrow(cq, psnat_component(bundle, m.name, delta)):
                return False, f"comparison for {m.name} at {delta} " \
                              "is not iso"
    return True, ""


def _binary_limits(cat, cap):
    for x, y in itertools.combinations_with_replacement(cat.objects, 2):
        nodes = {"l": x, "r": y}
        cone = limit(cat, nodes, [], cap=cap)
        if cone is not None:
            yield nodes, cone
    cone = limit(cat, {}, [], cap=cap)
    if cone is not None:
        yield {}, cone


def law_limit_preservation(d, bundle, cap):
    """Every functor in the diagram preserves the binary and empty limits
    that exist in its source."""
    for m in d.mt.morphisms.values():
        f = d.fun(m.name)
        for nodes, cone in _binary_limits(f.src, cap):
            if not check_preserves_limit(f, nodes, [], cone, cap=cap):
                what = "terminal object" if not nodes else \
                    f"meet of {nodes['l']} and {nodes['r']}"
                return False, f"{m.name} does not preserve the {what}"
    return True, ""


def law_pointwise_limits(d, bundle, cap):
    """Reflections and locks preserve the limits the codex category has."""
    mt = d.mt
    for p in mt.modes:
        cx = bundle.codexes[p]
        fs = [bundle.adjunctions[m.name].reflect for m in
              mt.morphisms.values() if m.dst == p]
        fs += [bundle.right_adjoints[m.name].lock for m in
               mt.morphisms.values() if m.dst == p]
        for nodes, cone in _binary_limits(cx.cat, cap):
            for f in fs:
                if not check_preserves_limit(f, nodes, [], cone, cap=cap):
                    return False, f"{f.name} does not preserve a limit " \
                                  f"in the codex at {p}"
    return True, ""


def law_universal_property(d, bundle, cap):
    """Dextrifying the component projections is the identity up to iso."""
    mt = d.mt
    g, gamma = reflect_colax(bundle)
    ghat = dextrify_colax(bundle, g, gamma, bundle)
    for r in mt.modes:
        cx = bundle.codexes[r]
        for obj in cx.objects:
            im = ghat[r].omap[obj]
            if im.component(mt.id_mor(r)) != g[r].omap[obj]:
                return False, f"identity component drifts at {r}: {obj}"
            if not isomorphic(cx.cat, im, obj):
                return False, f"round trip not iso at {r}: {obj}"
    return True, ""


LAWS = {
    "adjunction": law_adjunction,
    "up-ff": law_up_ff,
    "lock-strictness": law_lock_strictness,
    "radj-triangles": law_radj_triangles,
    "pseudonat": law_pseudonat,
    "pointwise-limits": law_pointwise_limits,
    "limit-preservation": law_limit_preservation,
    "2functor": law_2functor,
    "universal-property": law_universal_property,
}

# laws that only read the diagram, never the codex bundle
_NO_BUNDLE = {"limit-preservation"}


def run_law_suite(path, only=None, cap=None, jobs=1) -> dict:
    """Run the laws against the diagram at path.

    Returns {law name: (ok, detail)}.  A law that cannot even build what it
    checks (absent limit, blown cap) fails with that error as its detail.
    """
    d = load_diagram(path)
    bad = d.validate()
    if bad:
        raise MalformedTable("diagram fails validation: " + "; ".join(bad))
    if only is not None:
        if only not in LAWS:
            raise ParseError(f"unknown law {only!r}; known: "
                             + ", ".join(sorted(LAWS)))
        selected = {only: LAWS[only]}
    else:
        selected = LAWS

    bundle = None
    bundle_err = None
    if any(name not in _NO_BUNDLE for name in selected):
        try:
            bundle = build_bundle(d, cap=cap)
        except MattError as e:
            bundle_err = e

    def run_one(item):
        name, law = item
        if bundle is None and name not in _NO_BUNDLE:
            return name, (False, str(bundle_err))
        try:
            return name, law(d, bundle, cap)
        except MattError as e:
            return name, (False, str(e))

    items = sorted(selected.items())
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_one, items))
    else:
        results = [run_one(i) for i in items]
    return dict(results)
