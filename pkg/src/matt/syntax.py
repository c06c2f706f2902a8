"""Contexts, terms, and types, with lock normalization and key transport.

Variables are named; the parser alpha-freshens every binder so names are
globally unique within a checking run, which makes substitution capture-free
without index shifting.  Every variable occurrence carries a 2-cell key
(None until the checker resolves the `omitted key` sugar).

Key transport follows the substitution calculus: applying a cell β at the
final lock of a term's context whiskers β on the right each time the
traversal crosses a lock inside the term, and whiskers on the left by the
per-variable segment locks taken from the ambient context.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

from .errors import ModeMismatch, NotTangible, UnknownConstant
from .mode_theory import ModeTheory

_fresh_counter = itertools.count()


def fresh(stem: str = "x") -> str:
    """A name the surface grammar cannot produce."""
    return f"{stem}!{next(_fresh_counter)}"


Span = Optional[tuple]


# --- terms and types --------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str
    key: Optional[str]  # cell name; None until elaborated
    span: Span = field(default=None, compare=False)


@dataclass(frozen=True)
class Lam:
    var: str
    body: "Term"
    span: Span = field(default=None, compare=False)


@dataclass(frozen=True)
class App:
    fn: "Term"
    arg: "Term"
    mor: Optional[str] = None  # annotation of the Pi domain; filled by infer
    span: Span = field(default=None, compare=False)


@dataclass(frozen=True)
class ModIntro:
    mor: str
    body: "Term"
    span: Span = field(default=None, compare=False)


@dataclass(frozen=True)
class LetMod:
    frame: str  # ν
    mor: str    # μ
    yvar: str
    motive: Optional["TypeExpr"]
    scrutinee: "Term"
    xvar: str
    body: "Term"
    span: Span = field(default=None, compare=False)


@dataclass(frozen=True)
class Shut:
    mor: str
    body: "Term"
    span: Span = field(default=None, compare=False)


@dataclass(frozen=True)
class Open:
    mor: str
    body: "Term"
    span: Span = field(default=None, compare=False)


@dataclass(frozen=True)
class Const:
    name: str
    args: tuple
    span: Span = field(default=None, compare=False)


@dataclass(frozen=True)
class Pi:
    mor: str
    var: str
    dom: "TypeExpr"
    cod: "TypeExpr"
    span: Span = field(default=None, compare=False)


@dataclass(frozen=True)
class FMod:
    mor: str
    ty: "TypeExpr"
    span: Span = field(default=None, compare=False)


@dataclass(frozen=True)
class UMod:
    mor: str
    ty: "TypeExpr"
    span: Span = field(default=None, compare=False)


@dataclass(frozen=True)
class TConst:
    name: str
    args: tuple
    span: Span = field(default=None, compare=False)


Term = Union[Var, Lam, App, ModIntro, LetMod, Shut, Open, Const]
TypeExpr = Union[Pi, FMod, UMod, TConst]


# --- signatures -------------------------------------------------------------

@dataclass(frozen=True)
class Param:
    name: str
    mor: str
    ty: TypeExpr


@dataclass(frozen=True)
class ConstDecl:
    name: str
    mode: str
    params: tuple  # of Param
    result: Optional[TypeExpr]  # None for type constants


class Signature:
    def __init__(self):
        self.decls: dict[str, ConstDecl] = {}

    def declare(self, decl: ConstDecl):
        if decl.name in self.decls:
            raise UnknownConstant(f"constant {decl.name} declared twice")
        self.decls[decl.name] = decl

    def lookup(self, name: str) -> ConstDecl:
        try:
            return self.decls[name]
        except KeyError:
            raise UnknownConstant(f"unknown constant {name}") from None

    def is_type_const(self, name: str) -> bool:
        return self.lookup(name).result is None


# --- contexts ---------------------------------------------------------------

@dataclass(frozen=True)
class LockEntry:
    mor: str


@dataclass(frozen=True)
class VarEntry:
    name: str
    mor: str
    ty: TypeExpr


@dataclass(frozen=True)
class Context:
    mode: str          # current mode (after all entries)
    entries: tuple = ()

    def var_entries(self):
        return [e for e in self.entries if isinstance(e, VarEntry)]


def empty_context(mode: str) -> Context:
    return Context(mode, ())


def push_lock(mt: ModeTheory, ctx: Context, mor: str) -> Context:
    m = mt.mor(mor)
    if m.dst != ctx.mode:
        raise ModeMismatch(f"lock {mor} expects mode {m.dst}, context is at {ctx.mode}")
    if mt.is_id_mor(mor):
        return ctx
    entries = ctx.entries
    if entries and isinstance(entries[-1], LockEntry):
        merged = mt.compose(entries[-1].mor, mor)
        entries = entries[:-1]
        if not mt.is_id_mor(merged):
            entries = entries + (LockEntry(merged),)
        return Context(m.src, entries)
    return Context(m.src, entries + (LockEntry(mor),))


def push_var(mt: ModeTheory, ctx: Context, name: str, mor: str, ty: TypeExpr,
             span: Span = None) -> Context:
    m = mt.mor(mor)
    if m.dst != ctx.mode:
        raise ModeMismatch(
            f"variable annotation {mor} expects mode {m.dst}, context is at {ctx.mode}",
            span)
    if not mt.in_class("tangible", mor):
        raise NotTangible(f"variable annotation {mor} is not tangible", span)
    return Context(ctx.mode, ctx.entries + (VarEntry(name, mor, ty),))


def locks_of(mt: ModeTheory, entries, start_mode: str) -> str:
    """Composite of the lock morphisms in a segment read left to right.

    The segment starts at `start_mode`; the result is a morphism from the
    segment's final mode into `start_mode` (identity when no locks).
    """
    acc = mt.id_mor(start_mode)
    for e in entries:
        if isinstance(e, LockEntry):
            acc = mt.compose(acc, e.mor)
    return acc


def locks_after_map(mt: ModeTheory, ctx: Context) -> dict[str, str]:
    """For each variable in the context, the composite of all locks after it
    (a morphism from ctx.mode into the variable's mode)."""
    out: dict[str, str] = {}
    acc = mt.id_mor(ctx.mode)
    for e in reversed(ctx.entries):
        if isinstance(e, LockEntry):
            # prepend: the later locks already in acc sit to the right
            acc = mt.compose(e.mor, acc)
        else:
            out[e.name] = acc
    return out


def mode_at(mt: ModeTheory, ctx: Context, i: int) -> str:
    """Mode of the context truncated to its first i entries.

    Each lock μ: p→q in the dropped suffix moved the mode from q to p, so
    replaying the suffix backward restores each lock's target mode.
    """
    mode = ctx.mode
    for e in reversed(ctx.entries[i:]):
        if isinstance(e, LockEntry):
            mode = mt.mor(e.mor).dst
    return mode


def find_var(mt: ModeTheory, ctx: Context, name: str):
    """(entry, prefix Context, suffix entries after the variable) or None."""
    for i in range(len(ctx.entries) - 1, -1, -1):
        e = ctx.entries[i]
        if isinstance(e, VarEntry) and e.name == name:
            prefix = Context(mode_at(mt, ctx, i), ctx.entries[:i])
            return e, prefix, ctx.entries[i + 1:]
    return None


# --- key transport and substitution ----------------------------------------

def apply_key(mt: ModeTheory, sig: Signature, t, beta: str,
              locks_after: Mapping[str, str]):
    """Transport a checked term/type along the key substitution ⟦1⟧β applied
    at the final lock of its context.

    `locks_after` maps each ambient variable to the composite of locks
    between it and that final lock.
    """
    return _ak(mt, sig, t, beta, locks_after)


def _ak(mt, sig, t, c, la):
    if isinstance(t, Var):
        d = la.get(t.name)
        if d is None:
            return t  # bound inside the transported term
        key = mt.vcomp(mt.wl(d, c), t.key)
        return Var(t.name, key, t.span)
    if isinstance(t, Lam):
        return Lam(t.var, _ak(mt, sig, t.body, c, la), t.span)
    if isinstance(t, App):
        assert t.mor is not None, "apply_key requires an elaborated term"
        return App(_ak(mt, sig, t.fn, c, la),
                   _ak(mt, sig, t.arg, mt.wr(c, t.mor), la), t.mor, t.span)
    if isinstance(t, ModIntro):
        return ModIntro(t.mor, _ak(mt, sig, t.body, mt.wr(c, t.mor), la), t.span)
    if isinstance(t, LetMod):
        motive = _ak(mt, sig, t.motive, c, la) if t.motive is not None else None
        return LetMod(t.frame, t.mor, t.yvar, motive,
                      _ak(mt, sig, t.scrutinee, mt.wr(c, t.frame), la),
                      t.xvar, _ak(mt, sig, t.body, c, la), t.span)
    if isinstance(t, Shut):
        dag = mt.dagger(t.mor).dagger
        return Shut(t.mor, _ak(mt, sig, t.body, mt.wr(c, dag), la), t.span)
    if isinstance(t, Open):
        return Open(t.mor, _ak(mt, sig, t.body, mt.wr(c, t.mor), la), t.span)
    if isinstance(t, Const):
        decl = sig.lookup(t.name)
        args = tuple(_ak(mt, sig, a, mt.wr(c, p.mor), la)
                     for a, p in zip(t.args, decl.params))
        return Const(t.name, args, t.span)
    if isinstance(t, Pi):
        return Pi(t.mor, t.var, _ak(mt, sig, t.dom, mt.wr(c, t.mor), la),
                  _ak(mt, sig, t.cod, c, la), t.span)
    if isinstance(t, FMod):
        return FMod(t.mor, _ak(mt, sig, t.ty, mt.wr(c, t.mor), la), t.span)
    if isinstance(t, UMod):
        dag = mt.dagger(t.mor).dagger
        return UMod(t.mor, _ak(mt, sig, t.ty, mt.wr(c, dag), la), t.span)
    if isinstance(t, TConst):
        decl = sig.lookup(t.name)
        args = tuple(_ak(mt, sig, a, mt.wr(c, p.mor), la)
                     for a, p in zip(t.args, decl.params))
        return TConst(t.name, args, t.span)
    raise TypeError(f"apply_key: unexpected node {t!r}")


def subst(mt: ModeTheory, sig: Signature, body, name: str, repl,
          locks_after: Mapping[str, str]):
    """body[name ← repl].

    `repl` is typed in Γ⧸μ where μ is the substituted variable's annotation
    and Γ is the prefix before it; `locks_after` is locks_after_map of the
    context `repl`'s free variables live in.  Each occurrence name^α is
    replaced by repl transported along α.
    """
    def go(t):
        if isinstance(t, Var):
            if t.name == name:
                return apply_key(mt, sig, repl, t.key, locks_after)
            return t
        if isinstance(t, Lam):
            return Lam(t.var, go(t.body), t.span)
        if isinstance(t, App):
            return App(go(t.fn), go(t.arg), t.mor, t.span)
        if isinstance(t, ModIntro):
            return ModIntro(t.mor, go(t.body), t.span)
        if isinstance(t, LetMod):
            motive = go(t.motive) if t.motive is not None else None
            return LetMod(t.frame, t.mor, t.yvar, motive, go(t.scrutinee),
                          t.xvar, go(t.body), t.span)
        if isinstance(t, Shut):
            return Shut(t.mor, go(t.body), t.span)
        if isinstance(t, Open):
            return Open(t.mor, go(t.body), t.span)
        if isinstance(t, Const):
            return Const(t.name, tuple(go(a) for a in t.args), t.span)
        if isinstance(t, Pi):
            return Pi(t.mor, t.var, go(t.dom), go(t.cod), t.span)
        if isinstance(t, FMod):
            return FMod(t.mor, go(t.ty), t.span)
        if isinstance(t, UMod):
            return UMod(t.mor, go(t.ty), t.span)
        if isinstance(t, TConst):
            return TConst(t.name, tuple(go(a) for a in t.args), t.span)
        raise TypeError(f"subst: unexpected node {t!r}")

    return go(body)


def rename_var(t, old: str, new: str):
    """Rename free occurrences of a variable, keys untouched."""
    def go(u):
        if isinstance(u, Var):
            return Var(new, u.key, u.span) if u.name == old else u
        if isinstance(u, Lam):
            return u if u.var == old else Lam(u.var, go(u.body), u.span)
        if isinstance(u, App):
            return App(go(u.fn), go(u.arg), u.mor, u.span)
        if isinstance(u, ModIntro):
            return ModIntro(u.mor, go(u.body), u.span)
        if isinstance(u, LetMod):
            motive = u.motive
            if motive is not None and u.yvar != old:
                motive = go(motive)
            body = u.body if u.xvar == old else go(u.body)
            return LetMod(u.frame, u.mor, u.yvar, motive, go(u.scrutinee),
                          u.xvar, body, u.span)
        if isinstance(u, Shut):
            return Shut(u.mor, go(u.body), u.span)
        if isinstance(u, Open):
            return Open(u.mor, go(u.body), u.span)
        if isinstance(u, Const):
            return Const(u.name, tuple(go(a) for a in u.args), u.span)
        if isinstance(u, Pi):
            dom = go(u.dom)
            cod = u.cod if u.var == old else go(u.cod)
            return Pi(u.mor, u.var, dom, cod, u.span)
        if isinstance(u, FMod):
            return FMod(u.mor, go(u.ty), u.span)
        if isinstance(u, UMod):
            return UMod(u.mor, go(u.ty), u.span)
        if isinstance(u, TConst):
            return TConst(u.name, tuple(go(a) for a in u.args), u.span)
        raise TypeError(f"rename_var: unexpected node {u!r}")

    return go(t)
