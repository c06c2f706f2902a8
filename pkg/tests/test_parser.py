"""Surface grammar: tokenizing, parsing, and name resolution."""

import pytest

from matt.errors import ParseError
from matt.parser import (Parser, SurfaceConst, SurfaceDef, SurfaceModeTheory,
                         parse_program, resolve_term, resolve_type)
from matt.syntax import (App, Const, ConstDecl, FMod, Lam, LetMod, ModIntro,
                         Open, Param, Pi, Shut, Signature, TConst, UMod, Var)


def test_empty_file():
    assert parse_program("") == []


def test_mode_theory_decl():
    [d] = parse_program('mode-theory "foo.mt";')
    assert isinstance(d, SurfaceModeTheory)
    assert d.path == "foo.mt"


def test_const_type_decl():
    [d] = parse_program("const A : Type @ p;")
    assert isinstance(d, SurfaceConst)
    assert d.name == "A" and d.result is None and d.mode == "p"
    assert d.params == []


def test_const_telescope():
    [d] = parse_program("const El : (x :^ id:p A) Type @ p;")
    [(name, mor, ty, _)] = d.params
    assert name == "x" and mor == "id:p"
    assert ty == TConst("A", ())


def test_def_decl_with_lambda():
    [d] = parse_program("def idA @ p : (x : A) -> A = \\x. x;")
    assert isinstance(d, SurfaceDef)
    assert d.ty == Pi("id", "x", TConst("A", ()), TConst("A", ()))
    assert d.term == Lam("x", Var("x", None))


def test_qualified_names_and_keys():
    [d] = parse_program("def k @ p : A = x^id:id:p;")
    assert d.term == Var("x", "id:id:p")


def test_modal_formers():
    [d] = parse_program("def m @ q : F[mu] A = mod[mu] a0;")
    assert d.ty == FMod("mu", TConst("A", ()))
    assert d.term == ModIntro("mu", Var("a0", None))
    [d] = parse_program("def u @ e : U[iota] B = shut[iota] open[iota] M;")
    assert d.ty == UMod("iota", TConst("B", ()))
    assert d.term == Shut("iota", Open("iota", Var("M", None)))


def test_let_mod_with_motive():
    src = "def e @ q : B = let[id:q, mu] mod x = y in x motive B;"
    [d] = parse_program(src)
    t = d.term
    assert isinstance(t, LetMod)
    assert t.frame == "id:q" and t.mor == "mu"
    assert t.motive == TConst("B", ())
    assert t.scrutinee == Var("y", None) and t.body == Var("x", None)


def test_application_is_left_associative():
    [d] = parse_program("def a @ p : A = f x y;")
    assert d.term == App(App(Var("f", None), Var("x", None)), Var("y", None))


def test_parse_errors_carry_spans():
    with pytest.raises(ParseError) as e:
        parse_program("def bad @ p : A = ;")
    assert e.value.span is not None
    with pytest.raises(ParseError):
        parse_program("const A : Type @ p")  # missing semicolon
    with pytest.raises(ParseError):
        parse_program("def x @ p : A = ?;")


def test_resolution_freshens_binders():
    sig = Signature()
    [d] = parse_program("def f @ p : A = \\x. \\x. x;")
    t = resolve_term(d.term, {}, sig)
    assert isinstance(t, Lam) and isinstance(t.body, Lam)
    assert t.var != t.body.var              # shadowing split apart
    assert t.body.body == Var(t.body.var, None)  # inner binder wins


def test_resolution_distinguishes_constants_and_variables():
    sig = Signature()
    sig.declare(ConstDecl("A", "p", (), None))
    a_ty = TConst("A", ())
    sig.declare(ConstDecl("c", "p", (), a_ty))
    sig.declare(ConstDecl("g", "p", (Param("x", "id:p", a_ty),), a_ty))
    [d] = parse_program("def f @ p : A = \\c. g c;")
    t = resolve_term(d.term, {}, sig)
    # the lambda binder shadows the constant c; g resolves with one argument
    assert isinstance(t.body, Const) and t.body.name == "g"
    assert t.body.args[0].name == t.var
    # outside any binder the same spine uses the constant
    [d2] = parse_program("def f2 @ p : A = g c;")
    t2 = resolve_term(d2.term, {}, sig)
    assert t2 == Const("g", (Const("c", ()),))


def test_resolution_rejects_underapplied_constant():
    sig = Signature()
    sig.declare(ConstDecl("A", "p", (), None))
    sig.declare(ConstDecl("g", "p",
                          (Param("x", "id:p", TConst("A", ())),),
                          TConst("A", ())))
    [d] = parse_program("def f @ p : A = g;")
    with pytest.raises(ParseError):
        resolve_term(d.term, {}, sig)


def test_resolve_type_arity():
    sig = Signature()
    sig.declare(ConstDecl("A", "p", (), None))
    sig.declare(ConstDecl("El", "p",
                          (Param("x", "id:p", TConst("A", ())),), None))
    with pytest.raises(ParseError):
        resolve_type(TConst("El", ()), {}, sig)
    with pytest.raises(ParseError):
        resolve_type(TConst("Ghost", ()), {}, sig)


def test_comments_and_whitespace():
    src = """
    -- a comment
    const A : Type @ p;  -- trailing
    """
    [d] = parse_program(src)
    assert d.name == "A"
