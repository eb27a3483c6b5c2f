import csv
import json
import math

import numpy as np
import pytest

from helpers import ScriptedTransport
from reaug.datasets import AugmentMethod, PseudoSample
from reaug.errors import FidelityInputError
from reaug.fidelity import (BaseEmbeddingProvider, EmbeddingCache, HttpEmbeddingProvider, PrecomputedEmbeddingProvider,
                            cosine_pairs, embed_sentences, project_2d, run_fidelity, select_pairs)
from reaug.llm import TransportResponse


class LetterCountProvider(BaseEmbeddingProvider):

    def __init__(self):
        self.requests = []

    def embed(self, sentences):
        self.requests.append(list(sentences))
        return [[1.0 + s.lower().count(chr(ord("a") + k)) for k in range(26)] for s in sentences]


def _pseudo(origin):
    return PseudoSample.build(origin.id + "~", origin.tokens,
                              [(e.start, e.end, e.type) for e in origin.entities],
                              [(r.subject, r.object, r.type) for r in origin.relations],
                              method=AugmentMethod.PARAPHRASE,
                              origin_id=origin.id,
                              attempts=1)


def test_cosine_pairs():
    sims = cosine_pairs([[1, 2, 2], [1, 0, 0], [3, 4, 0], [0, 0, 0]], [[2, 1, 2], [0, 1, 0], [3, 4, 0], [1, 1, 1]])
    assert sims[0] == pytest.approx(8 / 9)
    assert sims[1] == 0.0
    assert sims[2] == pytest.approx(1.0, abs=1e-9)
    assert sims[3] == 0.0
    assert cosine_pairs([], []) == []


def test_cosine_is_scale_invariant():
    rng = np.random.default_rng(0)
    a, b = rng.normal(size=(10, 8)), rng.normal(size=(10, 8))
    assert cosine_pairs(a, b) == pytest.approx(cosine_pairs(a * 3.5, b * 0.25))


def test_cosine_rejects_mismatched_inputs():
    with pytest.raises(FidelityInputError):
        cosine_pairs([[1, 0]], [[1, 0], [0, 1]])
    with pytest.raises(FidelityInputError):
        cosine_pairs([[1, 0]], [[1, 0, 0]])


def test_projection_of_axis_aligned_points():
    points = project_2d([[2, 0, 0], [-2, 0, 0], [0, 1, 0], [0, -1, 0]], ["a", "b", "c", "d"])
    coords = [(p.x, p.y) for p in points]
    assert coords == pytest.approx([(2, 0), (-2, 0), (0, 1), (0, -1)])
    assert [p.group for p in points] == ["a", "b", "c", "d"]


def _power_iteration(matrix, iterations=10_000):
    vector = np.array([1.0, 0.5, 0.25])
    for _ in range(iterations):
        vector = matrix @ vector
        vector /= np.linalg.norm(vector)
    return float(vector @ matrix @ vector), vector


def test_projection_matches_power_iteration_oracle():
    points = np.array([[3.0, 1.0, 0.0], [-1.0, 2.0, 1.0], [0.0, -2.0, 2.0], [-2.0, -1.0, -3.0]])
    centered = points - points.mean(axis=0)
    covariance = centered.T @ centered / (len(points) - 1)
    first_value, first = _power_iteration(covariance)
    _, second = _power_iteration(covariance - first_value * np.outer(first, first))
    axes = []
    for axis in (first, second):
        leading = axis[np.flatnonzero(np.abs(axis) > 1e-12)[0]]
        axes.append(axis if leading > 0 else -axis)
    expected = centered @ np.stack(axes, axis=1)

    points_2d = project_2d(points, ["o"] * 4)
    assert np.array([(p.x, p.y) for p in points_2d]) == pytest.approx(expected, abs=1e-9)


def test_projection_preserves_distances_within_a_plane():
    rng = np.random.default_rng(1)
    basis, _ = np.linalg.qr(rng.normal(size=(5, 2)))
    vectors = rng.normal(size=(12, 2)) @ basis.T + 4.0
    points = project_2d(vectors, ["x"] * 12)
    projected = np.array([(p.x, p.y) for p in points])
    for i in range(12):
        for j in range(i + 1, 12):
            distance = np.linalg.norm(vectors[i] - vectors[j])
            assert np.linalg.norm(projected[i] - projected[j]) == pytest.approx(distance, abs=1e-9)


def test_projection_of_degenerate_inputs():
    same = project_2d([[1.0, 2.0, 3.0]] * 4, ["x"] * 4)
    assert all(p.x == 0.0 and p.y == 0.0 for p in same)
    line = project_2d([[0, 0], [1, 1], [3, 3]], ["x"] * 3)
    assert [p.y for p in line] == pytest.approx([0.0, 0.0, 0.0])
    assert [p.x for p in line] == pytest.approx([-4 / 3 * math.sqrt(2), -1 / 3 * math.sqrt(2), 5 / 3 * math.sqrt(2)])
    with pytest.raises(FidelityInputError):
        project_2d([[1, 2]], ["x"])
    with pytest.raises(FidelityInputError):
        project_2d([[1, 2], [3, 4]], ["x"])


def test_embedding_cache_serves_repeats(tmp_path):
    provider = LetterCountProvider()
    cache = EmbeddingCache(tmp_path / "embeddings.jsonl")
    first = embed_sentences(["a b", "c d", "a b"], provider, cache)
    assert provider.requests == [["a b", "c d"]]
    second = embed_sentences(["c d", "a b"], provider, cache)
    assert len(provider.requests) == 1
    assert np.array_equal(second, first[[1, 0]])

    reloaded = EmbeddingCache(tmp_path / "embeddings.jsonl")
    assert len(reloaded) == 2
    embed_sentences(["a b"], provider, reloaded)
    assert len(provider.requests) == 1


def test_precomputed_provider(tmp_path):
    path = tmp_path / "vectors.jsonl"
    path.write_text(json.dumps({"sentence": "hello", "vector": [1, 0]}) + "\n", encoding="utf-8")
    provider = PrecomputedEmbeddingProvider(path)
    assert provider.embed(["hello"]) == [[1.0, 0.0]]
    with pytest.raises(FidelityInputError, match="no precomputed vector"):
        provider.embed(["goodbye"])


def test_http_provider_orders_by_index():

    def responder(payload, index):
        data = [{"index": i, "embedding": [float(i), 1.0]} for i in range(len(payload["input"]))]
        return TransportResponse(200, {"data": data[::-1]})

    transport = ScriptedTransport(responder)
    provider = HttpEmbeddingProvider("http://embed", "text-embedding-ada-002", transport=transport, batch_size=2,
                                     api_key="sk-test")
    assert provider.embed(["a", "b", "c"]) == [[0.0, 1.0], [1.0, 1.0], [0.0, 1.0]]
    assert [call[1]["input"] for call in transport.calls] == [["a", "b"], ["c"]]
    assert transport.calls[0][2]["Authorization"] == "Bearer sk-test"


def test_select_pairs(mini_samples, by_id):
    pseudo = [_pseudo(s) for s in mini_samples]
    pairs = select_pairs(mini_samples, pseudo, n=10)
    # the nested origin is left out
    assert len(pairs) == 6
    assert pairs[0] == (" ".join(by_id["A00-1001#0"].tokens), ) * 2
    drawn = select_pairs(mini_samples, pseudo, n=3, seed=4)
    assert len(drawn) == 3 and drawn == select_pairs(mini_samples, pseudo, n=3, seed=4)
    assert set(drawn) <= set(pairs)


def test_run_fidelity_writes_outputs(tmp_path, by_id, mini_samples):
    paraphrase = [_pseudo(by_id["A00-1001#0"]), _pseudo(by_id["B00-2002#0"])]
    origin = by_id["B00-2002#1"]
    tokens = "A method uses intrinsic object structure to do robust visual tracking .".split()
    generated = PseudoSample.build("pga_g_000000#0",
                                   tokens, [(1, 2, "Method"), (3, 6, "OtherScientificTerm"), (8, 11, "Task")],
                                   method=AugmentMethod.GENERATE,
                                   origin_id=origin.id,
                                   attempts=1)
    provider = LetterCountProvider()
    reports = run_fidelity(mini_samples, {"paraphrase": paraphrase, "generate": [generated]}, provider, tmp_path)

    assert reports["paraphrase"].similarities == pytest.approx([1.0, 1.0])
    assert 0.0 < reports["generate"].mean < 1.0
    summary = json.loads((tmp_path / "fidelity.json").read_text(encoding="utf-8"))
    assert summary["paraphrase"]["pairs"] == 2
    assert summary["generate"]["min"] == pytest.approx(reports["generate"].min)

    with open(tmp_path / "projection.csv", newline="", encoding="utf-8") as f:
        rows = list(csv.DictReader(f))
    groups = [row["group"] for row in rows]
    assert groups == ["original", "paraphrase", "original", "paraphrase", "original", "generate"]
    assert all(math.isfinite(float(row["x"])) and math.isfinite(float(row["y"])) for row in rows)


def test_run_fidelity_rejects_unknown_groups(tmp_path, mini_samples):
    with pytest.raises(FidelityInputError, match="Must be one of"):
        run_fidelity(mini_samples, {"backtranslate": []}, LetterCountProvider(), tmp_path)
