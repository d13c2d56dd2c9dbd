"""Smoke tests for the btsel Python extension."""

import math

import pytest

import btsel


def test_version():
    assert btsel.__version__.count(".") == 2


def test_bleu_identity():
    corpus = [["a", "b", "c"], ["d", "e", "f", "g"]]
    assert btsel.bleu(corpus, corpus) == 100.0
    assert btsel.ter(corpus, corpus) == 0.0
    assert btsel.chrf3(corpus, corpus) == 100.0


def test_bleu_brevity_penalty():
    got = btsel.bleu([["a", "b", "c", "d"]], [["a", "b", "c", "d", "e"]])
    assert abs(got - math.exp(-0.25) * 100.0) < 1e-9


def test_compute_phi():
    expected = math.log(32.24 * (100 - 46.83) * 53.70)
    assert abs(btsel.compute_phi(32.24, 46.83, 53.70) - expected) < 1e-9
    with pytest.raises(ValueError):
        btsel.compute_phi(10.0, 100.0, 5.0)


def test_diversity_metrics():
    doc = [["a", "a", "b"]]
    assert abs(btsel.ttr(doc) - 2.0 / 3.0) < 1e-12
    assert abs(btsel.yules_i(doc) - 4.5) < 1e-12
    assert abs(btsel.mtld(doc) - 3.0) < 1e-12
    assert btsel.mtld([["a"]]) is None
    assert btsel.yules_i([["a", "b", "c"]]) is None


def test_fda_score():
    assert btsel.fda_score(["a", "b", "d"], [["a", "b", "c"]]) == pytest.approx(1.0)
    after = btsel.fda_score(["a", "b", "d"], [["a", "b", "c"]], selected=[["a", "b", "d"]])
    assert after == pytest.approx(0.5)


def test_each_from_all_covers_every_target():
    targets = [[f"t{i}"] for i in range(10)]
    systems = [
        ("good", [["a", "b"] for _ in range(10)]),
        ("bad", [[f"x{i}"] for i in range(10)]),
    ]
    pool = btsel.Pool(targets, systems)
    result = btsel.select_each_from_all(pool, [["a", "b", "c"]])
    assert len(result["records"]) == 10
    assert result["per_system_counts"]["good"] == 10
    seen_targets = {rec[2] for rec in result["records"]}
    assert seen_targets == set(range(10))


def test_from_all_duplicate_targets_allowed():
    targets = [["t0"]]
    systems = [
        ("p", [["a", "b"]]),
        ("q", [["b", "c"]]),
    ]
    pool = btsel.Pool(targets, systems)
    result = btsel.select_from_all(pool, [["a", "b", "c"]], budget=2)
    assert len(result["records"]) == 2
    assert {rec[1] for rec in result["records"]} == {"p", "q"}


def test_load_corpus(tmp_path):
    path = tmp_path / "corpus.txt"
    path.write_text("a b c\n\nd e\n", encoding="utf-8")
    sentences = btsel.load_corpus(str(path))
    assert len(sentences) == 2
    assert sentences[0].tokens == ["a", "b", "c"]
    assert sentences[1].line_no == 2
    with pytest.raises(ValueError):
        btsel.load_corpus(str(path), policy="error")
