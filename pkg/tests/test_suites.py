import pytest

from moufang.corpus import default_corpus, distinct_groups, moufang_corpus, random_extensions, three_divisible_corpus
from moufang.errors import UnknownSuite
from moufang.loopcore import dihedral, normal_subloops
from moufang.suites import SUITES, Check, SuiteResult, loop_checks, run_suite


def test_corpus_shape():
    corpus = default_corpus()
    kinds = [e.kind for e in corpus]
    assert kinds.count("extension") == 20
    assert kinds.count("chein") == 6
    assert max(e.loop.n for e in corpus) <= 24
    assert len({e.name for e in corpus}) == len(corpus)


def test_groups_distinct_up_to_isomorphism():
    names = [name for name, _ in distinct_groups(8)]
    assert "dihedral-4" in names and "cyclic-4" in names
    # built-in families only: cyclic, dihedral, quaternion
    assert sum(1 for name, G in distinct_groups(8) if G.n == 8) == 3


def test_extensions_are_seeded():
    a = [L for _, L in random_extensions(5, 4)]
    b = [L for _, L in random_extensions(5, 4)]
    assert a == b


def test_sub_corpora():
    assert all(e.moufang for e in moufang_corpus())
    three = three_divisible_corpus()
    assert all(e.loop.n % 3 for e in three)
    assert {16, 20} <= {e.loop.n for e in three if e.kind == "chein"}


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        run_suite("nope", default_corpus())


def test_deficient_suite_fails():
    r = SuiteResult("x")
    assert r.deficient and not r.ok
    r.checks.append(Check("q", "i", True))
    assert r.ok
    r.checks.append(Check("q", "j", False, (1, 2)))
    assert not r.ok and r.failures[0].as_dict()["witness"] == [1, 2]


def test_suites_on_subcorpus():
    corpus = tuple(e for e in three_divisible_corpus() if e.loop.n <= 16)
    for name in ("thm-2.5", "prop-2.4", "thm-5.7", "cor-3.6"):
        r = run_suite(name, corpus)
        assert r.ok, r.as_dict()


def test_negative_control_finds_chein(md4):
    checks = list(SUITES["negative-control"]("md4", md4, 200_000))
    assert len(checks) == 4


def test_loop_checks_groups():
    out = loop_checks("d8", dihedral(8))
    assert out["thm-2.2"]["ok"]
    assert all(v.get("ok", True) for v in out.values())


def test_normal_subloops_nonempty_on_corpus():
    assert all(normal_subloops(e.loop) for e in default_corpus())
