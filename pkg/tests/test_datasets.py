import json
import os

import pytest

from reaug.datasets import (AugmentMethod, EntityType, PseudoSample, RelationType, Sample, compute_stats, export,
                            flatten, load_scierc, load_split, load_spert, split_sample_id)
from reaug.datasets.synth import generate_corpus, write_corpus
from reaug.datasets.utils import group_documents
from reaug.errors import CorpusFormatError


def _records(path):
    with open(path, "r", encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]


def test_load_converts_document_offsets(by_id):
    first = by_id["A00-1001#0"]
    assert [(e.start, e.end, e.type) for e in first.entities] == [
        (0, 1, EntityType.MATERIAL),
        (10, 11, EntityType.OTHER_SCIENTIFIC_TERM),
        (17, 21, EntityType.OTHER_SCIENTIFIC_TERM),
    ]
    assert first.entities[2].surface == "strictly syntactic cross-serial agreement"
    assert [(r.subject, r.object, r.type) for r in first.relations] == [(2, 1, RelationType.FEATURE_OF)]

    # second sentence starts at document token 22
    second = by_id["A00-1001#1"]
    assert second.entities[0].span == (1, 2)
    assert second.entities[0].surface == "agreement"
    assert [e.surface for e in second.entities if e.type == EntityType.MATERIAL] == ["English", "languages", "French"]


def test_flatten_ids_follow_document_order(mini_samples):
    assert [s.id for s in mini_samples] == [
        "A00-1001#0", "A00-1001#1", "B00-2002#0", "B00-2002#1", "C00-3003#0", "C00-3003#1", "C00-3003#2"
    ]
    assert split_sample_id("C00-3003#2") == ("C00-3003", 2)
    assert split_sample_id("no-index") is None


def test_stats_on_fixture(mini_samples):
    stats = compute_stats(mini_samples)
    assert (stats.sample_count, stats.entity_count, stats.relation_count) == (7, 21, 10)
    assert stats.entity_type_count == 5
    assert stats.relation_type_count == 6
    assert stats.entity_types["OtherScientificTerm"] == 7
    assert stats.relation_types["Used-for"] == 3
    assert stats.summary() == "samples: 7, entities: 21(5), relations: 10(6)"


def test_stats_are_additive(synth_samples):
    left, right = synth_samples[:100], synth_samples[100:]
    total = compute_stats(left) + compute_stats(right)
    assert total.to_dict() == compute_stats(synth_samples).to_dict()


def test_empty_corpus(tmp_path):
    path = tmp_path / "empty.json"
    path.write_text("", encoding="utf-8")
    samples = flatten(load_scierc(path))
    assert samples == []
    assert compute_stats(samples).to_dict()["sample_count"] == 0
    assert export(samples, "spert", tmp_path / "out.json").read_text(encoding="utf-8") == "[]\n"
    assert export(samples, "scierc", tmp_path / "out.scierc.json").read_text(encoding="utf-8") == ""


def test_bracketable(by_id):
    assert by_id["A00-1001#0"].bracketable
    assert by_id["C00-3003#1"].bracketable
    # nested "information extraction" inside "information extraction systems"
    assert not by_id["C00-3003#2"].bracketable
    with_bracket = Sample.build("x#0", ["a", "[b]", "c"], [(0, 1, "Task")])
    assert not with_bracket.bracketable


@pytest.mark.parametrize("format", ["scierc", "marker"])
def test_document_export_round_trip(tmp_path, mini_path, mini_samples, format):
    out = export(mini_samples, format, tmp_path / f"train.{format}.json")
    expected = _records(mini_path)
    if format == "marker":
        for record in expected:
            record.pop("clusters")
    assert _records(out) == expected
    assert flatten(load_scierc(out)) == mini_samples


def test_marker_records_lead_with_doc_key(tmp_path, mini_samples):
    out = export(mini_samples, "marker", tmp_path / "train.json")
    assert list(_records(out)[0]) == ["doc_key", "sentences", "ner", "relations"]


def test_spert_export(tmp_path, by_id, mini_samples):
    out = export(mini_samples, "spert", tmp_path / "train.json")
    records = {r["orig_id"]: r for r in json.loads(out.read_text(encoding="utf-8"))}
    assert len(records) == 7

    b0 = records["B00-2002#0"]
    assert b0["tokens"] == list(by_id["B00-2002#0"].tokens)
    assert b0["entities"] == [
        {"type": "Generic", "start": 4, "end": 5},
        {"type": "Generic", "start": 11, "end": 12},
        {"type": "Generic", "start": 14, "end": 16},
    ]
    assert b0["relations"] == [
        {"type": "Evaluate-for", "head": 0, "tail": 1},
        {"type": "Compare", "head": 1, "tail": 2},
    ]

    assert records["C00-3003#0"]["entities"] == [
        {"type": "Generic", "start": 1, "end": 2},
        {"type": "Method", "start": 5, "end": 6},
    ]
    assert records["C00-3003#0"]["relations"] == [{"type": "Compare", "head": 1, "tail": 0}]
    assert records["C00-3003#2"]["entities"] == [
        {"type": "Task", "start": 0, "end": 2},
        {"type": "Method", "start": 0, "end": 3},
    ]
    assert records["C00-3003#1"]["entities"] == [] and records["C00-3003#1"]["relations"] == []

    assert load_spert(out) == mini_samples


def test_export_rejects_unknown_format(tmp_path, mini_samples):
    with pytest.raises(ValueError, match="Must be one of"):
        export(mini_samples, "conll", tmp_path / "x.json")


def _pseudo(tokens, code, counter, origin_id):
    method = AugmentMethod.PARAPHRASE if code == "p" else AugmentMethod.GENERATE
    return PseudoSample.build(f"pga_{code}_{counter:06d}#0", tokens, [(0, 1, "Method")],
                              method=method,
                              origin_id=origin_id,
                              attempts=1)


def test_pseudo_samples_become_single_sentence_documents(mini_samples):
    pseudo = [
        _pseudo(["CRF", "works", "."], "p", 0, "A00-1001#0"),
        _pseudo(["SVM", "fails", "."], "g", 0, "A00-1001#1"),
    ]
    documents = group_documents(mini_samples + pseudo)
    assert [key for key, _ in documents] == ["A00-1001", "B00-2002", "C00-3003", "pga_p_000000", "pga_g_000000"]
    assert [len(sentences) for _, sentences in documents] == [2, 2, 3, 1, 1]


def test_loose_sample_ids_get_unique_keys():
    samples = [Sample.build("x", ["a"], []), Sample.build("x", ["b"], [])]
    assert [key for key, _ in group_documents(samples)] == ["x", "x~1"]


def test_unknown_entity_type_reports_line(tmp_path, mini_path):
    lines = mini_path.read_text(encoding="utf-8").splitlines()
    lines[1] = lines[1].replace('"Task"', '"Dataset"')
    path = tmp_path / "bad.json"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    with pytest.raises(CorpusFormatError, match="Dataset") as info:
        load_scierc(path)
    assert info.value.line == 2


def test_span_outside_sentence_is_rejected(tmp_path):
    record = {"doc_key": "D", "sentences": [["a", "b"]], "ner": [[[1, 2, "Task"]]], "relations": [[]]}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(record) + "\n", encoding="utf-8")
    with pytest.raises(CorpusFormatError, match="outside sentence 0"):
        load_scierc(path)


def test_duplicate_doc_key_is_rejected(tmp_path, mini_path):
    first = mini_path.read_text(encoding="utf-8").splitlines()[0]
    path = tmp_path / "dup.json"
    path.write_text(first + "\n" + first + "\n", encoding="utf-8")
    with pytest.raises(CorpusFormatError, match="duplicate doc_key") as info:
        load_scierc(path)
    assert info.value.line == 2


def test_relation_on_unknown_span_is_rejected(tmp_path):
    record = {
        "doc_key": "D",
        "sentences": [["a", "b"]],
        "ner": [[[0, 0, "Task"]]],
        "relations": [[[0, 0, 1, 1, "Compare"]]],
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(record) + "\n", encoding="utf-8")
    with pytest.raises(CorpusFormatError, match="unknown span"):
        load_scierc(path)


def test_synthetic_corpus_is_deterministic(tmp_path):
    a = flatten(generate_corpus(20, seed=3))
    b = flatten(generate_corpus(20, seed=3))
    assert a == b
    assert flatten(generate_corpus(20, seed=4)) != a
    nested = flatten(generate_corpus(50, seed=3, overlap_rate=1.0))
    assert any(not s.bracketable for s in nested)

    path = tmp_path / "synth.json"
    write_corpus(generate_corpus(20, seed=3), path)
    assert flatten(load_scierc(path)) == a


SCIERC_DIR = os.environ.get("SCIERC_DIR")


@pytest.mark.skipif(SCIERC_DIR is None, reason="set SCIERC_DIR to the processed SciERC release")
def test_release_statistics():
    stats = {stage: compute_stats(flatten(load_split(SCIERC_DIR, stage))) for stage in ("train", "dev", "test")}
    assert [stats[s].sample_count for s in ("train", "dev", "test")] == [1861, 275, 551]
    total = stats["train"] + stats["dev"] + stats["test"]
    assert (total.entity_count, total.relation_count) == (8089, 4716)
    assert (total.entity_type_count, total.relation_type_count) == (6, 7)
