"""The bundled .matt corpus: every positive file checks cleanly, every
negative file fails with exactly the error code named in its comment."""

import re

from matt.bundled import FIXTURES
from matt.cli import check_file

CORPUS = FIXTURES / "corpus"

POSITIVE = sorted(p for p in CORPUS.glob("*_ok.matt"))
NEGATIVE = sorted(p for p in CORPUS.glob("*.matt") if p not in POSITIVE)


def expected_code(path):
    m = re.search(r"-- expected: (\w+)", path.read_text())
    assert m, f"{path.name} lacks an expected-error comment"
    return m.group(1)


def test_corpus_is_large_enough():
    total = 0
    for p in POSITIVE:
        diags, n = check_file(p, None)
        assert not diags, (p.name, [d.render() for d in diags])
        total += n
    assert total >= 25, total
    assert len(NEGATIVE) >= 15


def test_positive_files_individually():
    for p in POSITIVE:
        diags, n = check_file(p, None)
        assert not diags, (p.name, [d.render() for d in diags])
        assert n > 0


def test_negative_files_fail_with_predicted_code():
    for p in NEGATIVE:
        code = expected_code(p)
        diags, _ = check_file(p, None)
        assert diags, f"{p.name} unexpectedly checked"
        assert diags[0].code == code, (p.name, diags[0].render())
        assert len(diags) == 1, [d.render() for d in diags]


def test_declaration_order_permutation_is_verdict_stable():
    # reordering independent declarations must not change any verdict
    src = "\n".join(line for line in
                    (CORPUS / "trivial_ok.matt").read_text().splitlines()
                    if not line.lstrip().startswith("--"))
    decls = [d.strip() for d in src.split(";") if d.strip()]
    # keep the mode-theory line first and all consts before the defs that
    # use them; swap the two independent defs
    idx = [i for i, d in enumerate(decls) if d.startswith("def")]
    assert len(idx) >= 2
    permuted = decls[:]
    permuted[idx[0]], permuted[idx[1]] = permuted[idx[1]], permuted[idx[0]]
    alt = ";\n".join(permuted) + ";\n"
    tmp = CORPUS / "_permuted_tmp.matt"
    try:
        tmp.write_text(alt)
        diags, n = check_file(tmp, None)
        assert not diags, [d.render() for d in diags]
        assert n == len(decls) - 1  # mode-theory line is not a checked decl
    finally:
        tmp.unlink(missing_ok=True)
