"""Bidirectional checking, weak-head reduction, and conversion."""

import pytest

from matt.bundled import theory_path
from matt.checker import Kernel, NoMotive
from matt.errors import (ConversionFailure, ExpectedF, ExpectedPi,
                         KeyTypeMismatch, NotSharp, NotSinister,
                         NotTransparent, UnknownConstant)
from matt.mode_theory import load_mode_theory
from matt.syntax import (App, Const, ConstDecl, FMod, Lam, LetMod, ModIntro,
                         Open, Param, Pi, Shut, Signature, TConst, UMod, Var,
                         empty_context, push_var)


def kernel(theory, consts=()):
    mt = load_mode_theory(theory_path(theory))
    sig = Signature()
    for decl in consts:
        sig.declare(decl)
    return Kernel(mt, sig)


A = TConst("A", ())
B = TConst("B", ())


def single_arrow_kernel():
    return kernel("single_arrow", [
        ConstDecl("A", "p", (), None),
        ConstDecl("A2", "p", (), None),
        ConstDecl("B", "q", (), None),
        ConstDecl("a0", "p", (), A),
    ])


# --- positives ---------------------------------------------------------------

def test_identity_function_checks():
    k = single_arrow_kernel()
    ctx = empty_context("q")
    ty = Pi("id:q", "x", B, B)
    t = k.check(ctx, Lam("x", Var("x", None)), k.check_type(ctx, ty))
    assert isinstance(t, Lam)
    assert t.body.key == "id:id:q"  # the omitted key elaborates to an identity


def test_modal_intro_checks():
    k = single_arrow_kernel()
    ctx = empty_context("q")
    t = k.check(ctx, ModIntro("mu", Const("a0", ())), FMod("mu", A))
    assert isinstance(t, ModIntro)


def test_modal_elim_infers_and_reduces():
    k = single_arrow_kernel()
    ctx = push_var(k.mt, empty_context("q"), "y", "id:q", FMod("mu", A))
    t = LetMod("id:q", "mu", "w", FMod("mu", A), Var("y", None), "x",
               ModIntro("mu", Var("x", None)))
    ty, t_e = k.infer(ctx, t)
    assert k.convert_types(ctx, ty, FMod("mu", A))
    # with a mod-scrutinee the let reduces to the substituted branch
    t2 = LetMod("id:q", "mu", "w", FMod("mu", A),
                ModIntro("mu", Const("a0", ())), "x",
                ModIntro("mu", Var("x", "id:mu")))
    red = k.whnf(empty_context("q"), t2)
    assert red == ModIntro("mu", Const("a0", ()))


def test_variable_under_lock_uses_key():
    # semilattice: a is sharp and transparent; le : a => id:p opens the lock
    k = kernel("semilattice", [ConstDecl("A", "p", (), None),
                               ConstDecl("a0", "p", (), A)])
    ctx = push_var(k.mt, empty_context("p"), "x", "id:p", A)
    # x used under an a-lock needs a key id:p => a; none exists
    with pytest.raises(KeyTypeMismatch):
        k.check(ctx, ModIntro("a", Var("x", None)), FMod("a", A))
    # the other direction works: x :^a A used at an identity boundary via le
    ctx2 = push_var(k.mt, empty_context("p"), "y", "a", A)
    ty, _ = k.infer(ctx2, Var("y", "le"))
    assert k.convert_types(ctx2, ty, A)


def test_letmod_with_nonidentity_transparent_frame():
    k = kernel("semilattice", [ConstDecl("A", "p", (), None)])
    ctx = push_var(k.mt, empty_context("p"), "z", "a", FMod("a", A))
    t = LetMod("a", "a", "w", FMod("a", A), Var("z", "id:a"), "x",
               ModIntro("a", Var("x", None)))
    ty, _ = k.infer(ctx, t)
    assert k.convert_types(ctx, ty, FMod("a", A))


def test_shut_open_round_trip_type():
    k = kernel("2ltt", [ConstDecl("B", "f", (), None),
                        ConstDecl("b0", "f", (), TConst("B", ()))])
    ctx = empty_context("f")
    ty, t = k.infer(ctx, Open("iota", Shut("iota", Const("b0", ()))))
    assert k.convert_types(ctx, ty, TConst("B", ()))
    assert k.convert(ctx, TConst("B", ()), t, Const("b0", ()))


def test_telescoped_constant():
    mt_list = Pi("id:p", "x", A, A)
    k = kernel("single_arrow", [
        ConstDecl("A", "p", (), None),
        ConstDecl("a0", "p", (), A),
        ConstDecl("El", "p", (Param("x", "id:p", A),), None),
        ConstDecl("refl", "p", (Param("x", "id:p", A),),
                  TConst("El", (Var("x", "id:id:p"),))),
    ])
    ctx = empty_context("p")
    ty, t = k.infer(ctx, Const("refl", (Const("a0", ()),)))
    assert ty == TConst("El", (Const("a0", ()),))
    assert k.check_type(ctx, ty)
    assert k.check_type(ctx, mt_list)


# --- conversion --------------------------------------------------------------

def test_beta_pi():
    k = single_arrow_kernel()
    ctx = empty_context("p")
    redex = App(Lam("x", Var("x", "id:id:p")), Const("a0", ()), mor="id:p")
    assert k.convert(ctx, A, redex, Const("a0", ()))


def test_eta_pi():
    k = single_arrow_kernel()
    pi = Pi("id:p", "x", A, A)
    ctx = push_var(k.mt, empty_context("p"), "f", "id:p", pi)
    f = Var("f", "id:id:p")
    expanded = Lam("x", App(f, Var("x", "id:id:p"), mor="id:p"))
    assert k.convert(ctx, pi, f, expanded)


def test_beta_f():
    k = single_arrow_kernel()
    ctx = empty_context("q")
    t = LetMod("id:q", "mu", "w", FMod("mu", A),
               ModIntro("mu", Const("a0", ())), "x",
               ModIntro("mu", Var("x", "id:mu")))
    assert k.convert(ctx, FMod("mu", A), t, ModIntro("mu", Const("a0", ())))


def test_no_eta_f():
    k = single_arrow_kernel()
    fa = FMod("mu", A)
    ctx = push_var(k.mt, empty_context("q"), "y", "id:q", fa)
    y = Var("y", "id:id:q")
    expanded = LetMod("id:q", "mu", "w", fa, y, "x",
                      ModIntro("mu", Var("x", "id:mu")))
    ty, exp_e = k.infer(ctx, expanded)  # well typed...
    assert k.convert_types(ctx, ty, fa)
    assert not k.convert(ctx, fa, y, exp_e)  # ...but not judgmentally equal


def test_beta_u_and_eta_u():
    k = kernel("2ltt", [ConstDecl("B", "f", (), None),
                        ConstDecl("b0", "f", (), TConst("B", ()))])
    bty = TConst("B", ())
    # beta: open (shut M) == M
    ctx = empty_context("f")
    assert k.convert(ctx, bty, Open("iota", Shut("iota", Const("b0", ()))),
                     Const("b0", ()))
    # eta: M == shut (open M) for M : U[iota] B
    uty = UMod("iota", bty)
    ctx_e = push_var(k.mt, empty_context("e"), "M", "id:e", uty)
    m = Var("M", "id:id:e")
    expanded = Shut("iota", Open("iota", Var("M", "id:id:e")))
    ty, exp_e = k.infer(ctx_e, expanded)
    assert k.convert_types(ctx_e, ty, uty)
    assert k.convert(ctx_e, uty, m, exp_e)


def test_dra_round_trips_on_shut_terms():
    # five distinct U-typed terms, each convertible to its eta-expansion
    k = kernel("2ltt", [
        ConstDecl("B", "f", (), None),
        ConstDecl("b0", "f", (), TConst("B", ())),
        ConstDecl("g", "f", (Param("x", "id:f", TConst("B", ())),),
                  TConst("B", ())),
    ])
    bty = TConst("B", ())
    uty = UMod("iota", bty)
    b0 = Const("b0", ())
    terms = [
        Shut("iota", b0),
        Shut("iota", Const("g", (b0,))),
        Shut("iota", Const("g", (Const("g", (b0,)),))),
        Shut("iota", Open("iota", Shut("iota", b0))),
        Shut("iota", Open("iota", Shut("iota", Const("g", (b0,))))),
    ]
    ctx = empty_context("e")
    for t in terms:
        ty, t_e = k.infer(ctx, t)
        assert k.convert_types(ctx, ty, uty)
        expanded = Shut("iota", Open("iota", t_e))
        _, exp_e = k.infer(ctx, expanded)
        assert k.convert(ctx, uty, t_e, exp_e), t


def test_conversion_failure_reports():
    k = single_arrow_kernel()
    ctx = empty_context("p")
    with pytest.raises(ConversionFailure):
        k.check(ctx, Const("a0", ()), TConst("A2", ()))


# --- negatives ---------------------------------------------------------------

def test_pi_over_sinister_rejected():
    k = kernel("2ltt", [ConstDecl("C", "e", (), None),
                        ConstDecl("D", "f", (), None)])
    ctx = empty_context("f")
    with pytest.raises(NotSharp):
        k.check_type(ctx, Pi("iota", "x", TConst("C", ()), TConst("D", ())))


def test_f_over_sinister_rejected():
    k = kernel("2ltt", [ConstDecl("C", "e", (), None)])
    with pytest.raises(NotSharp):
        k.check_type(empty_context("f"), FMod("iota", TConst("C", ())))


def test_u_needs_sinister():
    k = single_arrow_kernel()
    with pytest.raises(NotSinister):
        k.check_type(empty_context("p"), UMod("mu", B))


def test_key_type_mismatch():
    k = single_arrow_kernel()
    ctx = push_var(k.mt, empty_context("q"), "x", "id:q", B)
    with pytest.raises(KeyTypeMismatch):
        k.infer(ctx, Var("x", "id:mu"))


def test_letmod_frame_must_be_transparent():
    k = single_arrow_kernel()
    ctx = push_var(k.mt, empty_context("q"), "y", "id:q", FMod("mu", A))
    t = LetMod("mu", "id:p", "w", A, Var("y", None), "x", Var("x", None))
    with pytest.raises(NotTransparent):
        k.infer(ctx, t)


def test_letmod_scrutinee_must_be_modal():
    k = single_arrow_kernel()
    ctx = push_var(k.mt, empty_context("q"), "y", "id:q", B)
    t = LetMod("id:q", "mu", "w", B, Var("y", None), "x", Var("w", None))
    with pytest.raises(ExpectedF):
        k.infer(ctx, t)


def test_letmod_inference_needs_motive():
    k = single_arrow_kernel()
    ctx = push_var(k.mt, empty_context("q"), "y", "id:q", FMod("mu", A))
    t = LetMod("id:q", "mu", "w", None, Var("y", None), "x",
               ModIntro("mu", Var("x", None)))
    with pytest.raises(NoMotive):
        k.infer(ctx, t)
    # in checking position the expected type supplies the motive
    assert k.check(ctx, t, FMod("mu", A))


def test_application_head_must_be_pi():
    k = single_arrow_kernel()
    ctx = empty_context("p")
    with pytest.raises(ExpectedPi):
        k.infer(ctx, App(Const("a0", ()), Const("a0", ())))


def test_unbound_variable():
    k = single_arrow_kernel()
    with pytest.raises(UnknownConstant):
        k.infer(empty_context("p"), Var("ghost", None))


def test_constant_arity_and_mode_checked():
    k = single_arrow_kernel()
    with pytest.raises(UnknownConstant):
        k.infer(empty_context("p"), Const("a0", (Const("a0", ()),)))
    from matt.errors import ModeMismatch
    with pytest.raises(ModeMismatch):
        k.infer(empty_context("q"), Const("a0", ()))


# --- soundness of elaboration ------------------------------------------------

def test_elaborated_terms_recheck():
    k = single_arrow_kernel()
    ctx = push_var(k.mt, empty_context("q"), "y", "id:q", FMod("mu", A))
    t = LetMod("id:q", "mu", "w", FMod("mu", A), Var("y", None), "x",
               ModIntro("mu", Var("x", None)))
    ty, t_e = k.infer(ctx, t)
    assert k.check_type(ctx, ty)          # inferred types are well formed
    assert k.check(ctx, t_e, ty) == t_e   # elaboration is stable
