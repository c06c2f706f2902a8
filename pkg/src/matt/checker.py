"""Bidirectional type checker and conversion for the modal kernel.

Checking is parameterized by a validated mode theory and a signature of
constants.  Conversion is type-directed: η at function types and at the
negative modality (via open after a unit key), weak-head β everywhere,
structural comparison at the positive modality and at base types.
"""

from __future__ import annotations

from .errors import (ConversionFailure, ExpectedF, ExpectedPi, ExpectedU,
                     KeyTypeMismatch, MattError, ModeMismatch, NotSharp,
                     NotSinister, NotTransparent, UnknownConstant)
from .mode_theory import ModeTheory
from .syntax import (App, Const, Context, FMod, Lam, LetMod, ModIntro, Open,
                     Pi, Shut, Signature, TConst, UMod, Var, apply_key,
                     empty_context, find_var, fresh, locks_after_map,
                     locks_of, push_lock, push_var, rename_var, subst)


class NoMotive(MattError):
    code = "NoMotive"


class Kernel:
    def __init__(self, mt: ModeTheory, sig: Signature | None = None):
        self.mt = mt
        self.sig = sig if sig is not None else Signature()
        self.trace: list[str] = []

    # -- helpers ----------------------------------------------------------

    def _mor(self, ctx: Context, m: str) -> str:
        """The surface grammar writes an omitted annotation as "id"."""
        return self.mt.id_mor(ctx.mode) if m == "id" else m

    def _la(self, ctx: Context):
        return locks_after_map(self.mt, ctx)

    def _subst_top(self, ctx: Context, body, name: str, repl):
        return subst(self.mt, self.sig, body, name, repl, self._la(ctx))

    def _key(self, ctx: Context, t, cell: str):
        return apply_key(self.mt, self.sig, t, cell, self._la(ctx))

    def _spine_types(self, ctx: Context, name: str, args):
        """Instantiate a constant's telescope against a spine, checking each
        argument; returns the elaborated spine and the instantiated result."""
        mt, sig = self.mt, self.sig
        decl = sig.lookup(name)
        if decl.mode != ctx.mode:
            raise ModeMismatch(
                f"constant {name} lives at mode {decl.mode}, used at {ctx.mode}")
        if len(args) != len(decl.params):
            raise UnknownConstant(
                f"constant {name} expects {len(decl.params)} arguments, "
                f"got {len(args)}")
        remaining = [p.ty for p in decl.params]
        result = decl.result
        out = []
        for i, (arg, p) in enumerate(zip(args, decl.params)):
            ty = remaining[i]
            arg_e = self.check(push_lock(mt, ctx, p.mor), arg, ty)
            out.append(arg_e)
            for j in range(i + 1, len(remaining)):
                remaining[j] = self._subst_top(ctx, remaining[j], p.name, arg_e)
            if result is not None:
                result = self._subst_top(ctx, result, p.name, arg_e)
        return tuple(out), result

    # -- type formation ----------------------------------------------------

    def check_type(self, ctx: Context, a):
        mt = self.mt
        if isinstance(a, Pi):
            mor = self._mor(ctx, a.mor)
            if not mt.in_class("sharp", mor):
                raise NotSharp(f"Pi annotation {mor} is not sharp", a.span)
            dom = self.check_type(push_lock(mt, ctx, mor), a.dom)
            cod = self.check_type(push_var(mt, ctx, a.var, mor, dom, a.span),
                                  a.cod)
            return Pi(mor, a.var, dom, cod, a.span)
        if isinstance(a, FMod):
            mor = self._mor(ctx, a.mor)
            if not mt.in_class("sharp", mor):
                raise NotSharp(f"F annotation {mor} is not sharp", a.span)
            return FMod(mor, self.check_type(push_lock(mt, ctx, mor), a.ty),
                        a.span)
        if isinstance(a, UMod):
            mor = self._mor(ctx, a.mor)
            if not mt.in_class("sinister", mor):
                raise NotSinister(f"U annotation {mor} is not sinister", a.span)
            dag = mt.dagger(mor).dagger
            return UMod(mor, self.check_type(push_lock(mt, ctx, dag), a.ty),
                        a.span)
        if isinstance(a, TConst):
            if not self.sig.is_type_const(a.name):
                raise UnknownConstant(f"{a.name} is not a type constant", a.span)
            args, _ = self._spine_types(ctx, a.name, a.args)
            return TConst(a.name, args, a.span)
        raise UnknownConstant(f"not a type expression: {a!r}")

    # -- inference ---------------------------------------------------------

    def infer(self, ctx: Context, t):
        mt = self.mt
        if isinstance(t, Var):
            hit = find_var(mt, ctx, t.name)
            if hit is None:
                raise UnknownConstant(f"unbound variable {t.name}", t.span)
            entry, prefix, suffix = hit
            delta = locks_of(mt, suffix, prefix.mode)
            key = t.key
            if key is None:
                key = mt.id_cell(delta)
            cell = mt.cell(key)
            if cell.src != entry.mor or cell.dst != delta:
                raise KeyTypeMismatch(
                    f"key {key} : {cell.src} ⇒ {cell.dst} on {t.name}, "
                    f"needed {entry.mor} ⇒ {delta}", t.span)
            ty = apply_key(mt, self.sig, entry.ty, key,
                           locks_after_map(mt, prefix))
            return ty, Var(t.name, key, t.span)
        if isinstance(t, App):
            fty, fn = self.infer(ctx, t.fn)
            if not isinstance(fty, Pi):
                raise ExpectedPi(f"application head has type {show(fty)}", t.span)
            arg = self.check(push_lock(mt, ctx, fty.mor), t.arg, fty.dom)
            ty = self._subst_top(ctx, fty.cod, fty.var, arg)
            return ty, App(fn, arg, fty.mor, t.span)
        if isinstance(t, ModIntro):
            mor = self._mor(ctx, t.mor)
            if not mt.in_class("sharp", mor):
                raise NotSharp(f"mod annotation {mor} is not sharp", t.span)
            ty, body = self.infer(push_lock(mt, ctx, mor), t.body)
            return FMod(mor, ty), ModIntro(mor, body, t.span)
        if isinstance(t, Shut):
            mor = self._mor(ctx, t.mor)
            if not mt.in_class("sinister", mor):
                raise NotSinister(f"shut annotation {mor} is not sinister", t.span)
            dag = mt.dagger(mor).dagger
            ty, body = self.infer(push_lock(mt, ctx, dag), t.body)
            return UMod(mor, ty), Shut(mor, body, t.span)
        if isinstance(t, Open):
            mor = self._mor(ctx, t.mor)
            if not mt.in_class("sinister", mor):
                raise NotSinister(f"open annotation {mor} is not sinister", t.span)
            ty, body = self.infer(push_lock(mt, ctx, mor), t.body)
            if not isinstance(ty, UMod) or ty.mor != mor:
                raise ExpectedU(f"open expects U[{mor}], got {show(ty)}", t.span)
            counit = mt.dagger(mor).counit
            return self._key(ctx, ty.ty, counit), Open(mor, body, t.span)
        if isinstance(t, LetMod):
            return self._infer_letmod(ctx, t)
        if isinstance(t, Const):
            decl = self.sig.lookup(t.name)
            if decl.result is None:
                raise UnknownConstant(f"{t.name} is a type constant", t.span)
            args, result = self._spine_types(ctx, t.name, t.args)
            return result, Const(t.name, args, t.span)
        if isinstance(t, Lam):
            raise ExpectedPi("cannot infer the type of a bare λ", t.span)
        raise UnknownConstant(f"not a term: {t!r}")

    def _infer_letmod(self, ctx: Context, t: LetMod):
        mt = self.mt
        frame = self._mor(ctx, t.frame)
        mor = self._mor(push_lock(mt, ctx, frame), t.mor) \
            if t.mor == "id" else t.mor
        if not mt.in_class("sharp", mor):
            raise NotSharp(f"let-mod annotation {mor} is not sharp", t.span)
        if not mt.in_class("transparent", frame):
            raise NotTransparent(f"let-mod frame {frame} is not transparent",
                                 t.span)
        t = LetMod(frame, mor, t.yvar, t.motive, t.scrutinee, t.xvar, t.body,
                   t.span)
        dty, d = self.infer(push_lock(mt, ctx, t.frame), t.scrutinee)
        if not isinstance(dty, FMod) or dty.mor != t.mor:
            raise ExpectedF(f"scrutinee has type {show(dty)}, "
                            f"expected F[{t.mor}]", t.span)
        if t.motive is None:
            raise NoMotive("a let-mod in inference position needs a motive",
                           t.span)
        a_ty = dty.ty  # lives in ctx ⧸ frame ⧸ mor
        ctx_y = push_var(mt, ctx, t.yvar, t.frame, FMod(t.mor, a_ty), t.span)
        motive = self.check_type(ctx_y, t.motive)
        nm = mt.compose(t.frame, t.mor)
        ctx_x = push_var(mt, ctx, t.xvar, nm, a_ty, t.span)
        branch_ty = subst(mt, self.sig, motive, t.yvar,
                          ModIntro(t.mor, Var(t.xvar, mt.id_cell(nm))),
                          locks_after_map(mt, ctx_x))
        body = self.check(ctx_x, t.body, branch_ty)
        ty = self._subst_top(ctx, motive, t.yvar, d)
        return ty, LetMod(t.frame, t.mor, t.yvar, motive, d, t.xvar, body, t.span)

    # -- checking ----------------------------------------------------------

    def check(self, ctx: Context, t, a):
        mt = self.mt
        if isinstance(t, Lam) and isinstance(a, Pi):
            dom = a.dom
            ctx2 = push_var(mt, ctx, t.var, a.mor, dom, t.span)
            cod = rename_var(a.cod, a.var, t.var)
            body = self.check(ctx2, t.body, cod)
            return Lam(t.var, body, t.span)
        if isinstance(t, ModIntro) and isinstance(a, FMod) and t.mor == a.mor:
            body = self.check(push_lock(mt, ctx, t.mor), t.body, a.ty)
            return ModIntro(t.mor, body, t.span)
        if isinstance(t, Shut) and isinstance(a, UMod) and t.mor == a.mor:
            dag = mt.dagger(t.mor).dagger
            body = self.check(push_lock(mt, ctx, dag), t.body, a.ty)
            return Shut(t.mor, body, t.span)
        if isinstance(t, LetMod) and t.motive is None:
            # the expected type, which cannot mention y, serves as motive
            t = LetMod(t.frame, t.mor, t.yvar, a, t.scrutinee, t.xvar,
                       t.body, t.span)
        ty, t_e = self.infer(ctx, t)
        if not self.convert_types(ctx, ty, a):
            raise ConversionFailure(
                f"inferred {show(ty)} but expected {show(a)}",
                getattr(t, "span", None), self.trace)
        return t_e

    # -- conversion --------------------------------------------------------

    def convert_types(self, ctx: Context, a, b) -> bool:
        mt = self.mt
        if type(a) is not type(b):
            self.trace.append(f"type head mismatch: {show(a)} vs {show(b)}")
            return False
        if isinstance(a, Pi):
            if a.mor != b.mor:
                return False
            if not self.convert_types(push_lock(mt, ctx, a.mor), a.dom, b.dom):
                return False
            z = fresh("z")
            ctx2 = push_var(mt, ctx, z, a.mor, a.dom)
            return self.convert_types(ctx2, rename_var(a.cod, a.var, z),
                                      rename_var(b.cod, b.var, z))
        if isinstance(a, FMod):
            return a.mor == b.mor and \
                self.convert_types(push_lock(mt, ctx, a.mor), a.ty, b.ty)
        if isinstance(a, UMod):
            if a.mor != b.mor:
                return False
            dag = mt.dagger(a.mor).dagger
            return self.convert_types(push_lock(mt, ctx, dag), a.ty, b.ty)
        if isinstance(a, TConst):
            if a.name != b.name:
                self.trace.append(f"type constants differ: {a.name} vs {b.name}")
                return False
            return self._convert_spines(ctx, a.name, a.args, b.args)
        return False

    def _convert_spines(self, ctx: Context, name: str, xs, ys) -> bool:
        mt = self.mt
        decl = self.sig.lookup(name)
        remaining = [p.ty for p in decl.params]
        for i, (p, x, y) in enumerate(zip(decl.params, xs, ys)):
            if not self.convert(push_lock(mt, ctx, p.mor), remaining[i], x, y):
                return False
            for j in range(i + 1, len(remaining)):
                remaining[j] = self._subst_top(ctx, remaining[j], p.name, x)
        return True

    def convert(self, ctx: Context, a, t, u) -> bool:
        """Type-directed term conversion at type a."""
        mt = self.mt
        if isinstance(a, Pi):
            z = fresh("z")
            ctx2 = push_var(mt, ctx, z, a.mor, a.dom)
            zv = Var(z, mt.id_cell(a.mor))
            cod = rename_var(a.cod, a.var, z)
            return self.convert(ctx2, cod, App(t, zv, a.mor), App(u, zv, a.mor))
        if isinstance(a, UMod):
            adj = mt.dagger(a.mor)
            ctx2 = push_lock(mt, ctx, adj.dagger)
            t2 = Open(a.mor, self._key(ctx, t, adj.unit))
            u2 = Open(a.mor, self._key(ctx, u, adj.unit))
            return self.convert(ctx2, a.ty, t2, u2)
        if isinstance(a, FMod):
            tw, uw = self.whnf(ctx, t), self.whnf(ctx, u)
            if isinstance(tw, ModIntro) and isinstance(uw, ModIntro):
                if tw.mor != uw.mor:
                    return False
                return self.convert(push_lock(mt, ctx, a.mor), a.ty,
                                    tw.body, uw.body)
            return self._whnf_eq(ctx, tw, uw, reduced=True)
        return self._whnf_eq(ctx, t, u)

    # -- weak-head reduction -------------------------------------------------

    def whnf(self, ctx: Context, t):
        mt = self.mt
        while True:
            if isinstance(t, App):
                fn = self.whnf(ctx, t.fn)
                if isinstance(fn, Lam):
                    t = self._subst_top(ctx, fn.body, fn.var, t.arg)
                    continue
                return App(fn, t.arg, t.mor, t.span)
            if isinstance(t, LetMod):
                d = self.whnf(push_lock(mt, ctx, t.frame), t.scrutinee)
                if isinstance(d, ModIntro) and d.mor == t.mor:
                    t = self._subst_top(ctx, t.body, t.xvar, d.body)
                    continue
                return LetMod(t.frame, t.mor, t.yvar, t.motive, d, t.xvar,
                              t.body, t.span)
            if isinstance(t, Open):
                body = self.whnf(push_lock(mt, ctx, t.mor), t.body)
                if isinstance(body, Shut) and body.mor == t.mor:
                    counit = mt.dagger(t.mor).counit
                    t = self._key(ctx, body.body, counit)
                    continue
                return Open(t.mor, body, t.span)
            return t

    def _whnf_eq(self, ctx: Context, t, u, reduced=False) -> bool:
        """Untyped structural comparison of weak-head normal forms."""
        mt = self.mt
        if not reduced:
            t, u = self.whnf(ctx, t), self.whnf(ctx, u)
        if isinstance(t, Var) and isinstance(u, Var):
            ok = t.name == u.name and t.key == u.key
            if not ok:
                self.trace.append(f"variables differ: {t.name}^{t.key} vs "
                                  f"{u.name}^{u.key}")
            return ok
        if isinstance(t, App) and isinstance(u, App):
            return self._whnf_eq(ctx, t.fn, u.fn, reduced=True) and \
                self._whnf_eq(push_lock(mt, ctx, t.mor) if t.mor else ctx,
                              t.arg, u.arg)
        if isinstance(t, Lam) and isinstance(u, Lam):
            z = fresh("z")
            return self._whnf_eq(ctx, rename_var(t.body, t.var, z),
                                 rename_var(u.body, u.var, z))
        if isinstance(t, ModIntro) and isinstance(u, ModIntro):
            return t.mor == u.mor and \
                self._whnf_eq(push_lock(mt, ctx, t.mor), t.body, u.body)
        if isinstance(t, Shut) and isinstance(u, Shut):
            if t.mor != u.mor:
                return False
            dag = mt.dagger(t.mor).dagger
            return self._whnf_eq(push_lock(mt, ctx, dag), t.body, u.body)
        if isinstance(t, Open) and isinstance(u, Open):
            return t.mor == u.mor and \
                self._whnf_eq(push_lock(mt, ctx, t.mor), t.body, u.body)
        if isinstance(t, LetMod) and isinstance(u, LetMod):
            if (t.frame, t.mor) != (u.frame, u.mor):
                return False
            if not self._whnf_eq(push_lock(mt, ctx, t.frame), t.scrutinee,
                                 u.scrutinee):
                return False
            z = fresh("z")
            return self._whnf_eq(ctx, rename_var(t.body, t.xvar, z),
                                 rename_var(u.body, u.xvar, z))
        if isinstance(t, Const) and isinstance(u, Const):
            if t.name != u.name:
                self.trace.append(f"constants differ: {t.name} vs {u.name}")
                return False
            decl = self.sig.lookup(t.name)
            return all(self._whnf_eq(push_lock(mt, ctx, p.mor), x, y)
                       for p, x, y in zip(decl.params, t.args, u.args))
        self.trace.append(f"head mismatch: {show(t)} vs {show(u)}")
        return False


def show(t) -> str:
    """Compact printer for diagnostics."""
    if isinstance(t, Var):
        return t.name if t.key is None else f"{t.name}^{t.key}"
    if isinstance(t, Lam):
        return f"\\{t.var}. {show(t.body)}"
    if isinstance(t, App):
        return f"({show(t.fn)} {show(t.arg)})"
    if isinstance(t, ModIntro):
        return f"mod[{t.mor}] {show(t.body)}"
    if isinstance(t, LetMod):
        return (f"(let[{t.frame},{t.mor}] mod {t.xvar} = {show(t.scrutinee)} "
                f"in {show(t.body)})")
    if isinstance(t, Shut):
        return f"shut[{t.mor}] {show(t.body)}"
    if isinstance(t, Open):
        return f"open[{t.mor}] {show(t.body)}"
    if isinstance(t, Const):
        return " ".join([t.name] + [show(a) for a in t.args])
    if isinstance(t, Pi):
        return f"({t.var} :^{t.mor} {show(t.dom)}) -> {show(t.cod)}"
    if isinstance(t, FMod):
        return f"F[{t.mor}] {show(t.ty)}"
    if isinstance(t, UMod):
        return f"U[{t.mor}] {show(t.ty)}"
    if isinstance(t, TConst):
        return " ".join([t.name] + [show(a) for a in t.args])
    return repr(t)


__all__ = ["Kernel", "NoMotive", "show", "empty_context"]
