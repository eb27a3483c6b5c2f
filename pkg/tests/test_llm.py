import json
import threading

import pytest

from helpers import ForbiddenTransport, ScriptedTransport, completion_response
from reaug.datasets import AugmentMethod
from reaug.errors import CacheMissError, TransportError
from reaug.llm import (CompletionCache, CompletionParams, CompletionRecord, LLMGateway, TransportResponse, digest,
                       send_with_retries)
from reaug.prompts import GenerateInput, PromptText, build_generate_prompt, build_paraphrase_prompt

MODEL = "text-davinci-003"


def _prompt(text: str, origin: str = "x#0") -> PromptText:
    return PromptText(text=text, kind=AugmentMethod.PARAPHRASE, origin_sample_id=origin)


def _params(**kwargs) -> CompletionParams:
    return CompletionParams.for_method(AugmentMethod.PARAPHRASE, MODEL, **kwargs)


def _echo(payload, index):
    return completion_response("answer to " + payload["prompt"])


def test_digest_goldens(by_id, fixtures_dir):
    goldens = json.loads((fixtures_dir / "digests.json").read_text(encoding="utf-8"))
    paraphrase = build_paraphrase_prompt(by_id["A00-1001#0"])
    generate = build_generate_prompt(GenerateInput.from_sample(by_id["B00-2002#1"]))
    assert digest(paraphrase, CompletionParams.for_method(AugmentMethod.PARAPHRASE, MODEL)) == goldens["paraphrase@0.5"]
    assert digest(generate, CompletionParams.for_method(AugmentMethod.GENERATE, MODEL)) == goldens["generate@1.0"]


def test_digest_covers_every_parameter():
    prompt = _prompt("hello")
    base = digest(prompt, _params())
    variants = [
        digest(_prompt("hello "), _params()),
        digest(prompt, _params(temperature=0.7)),
        digest(prompt, _params(max_tokens=256)),
        digest(prompt, _params(stop_sequences=("\n",))),
        digest(prompt, CompletionParams.for_method(AugmentMethod.PARAPHRASE, "gpt-3.5-turbo-instruct")),
    ]
    assert len({base, *variants}) == len(variants) + 1
    # origin and kind are not part of the request
    assert digest(PromptText("hello", AugmentMethod.GENERATE, "other#3"), _params()) == base
    assert digest(prompt, _params(temperature=0.5)) == base


def test_params_validation():
    with pytest.raises(ValueError):
        _params(temperature=2.5)
    with pytest.raises(ValueError):
        _params(max_tokens=0)
    assert _params().to_wire("p") == {"model": MODEL, "prompt": "p", "temperature": 0.5, "max_tokens": 512, "stop": []}


def test_record_then_replay_is_identical_without_network(tmp_path):
    path = tmp_path / "completions.jsonl"
    prompts = [_prompt(f"prompt {i}", f"d#{i}") for i in range(10)]
    transport = ScriptedTransport(_echo)
    recorder = LLMGateway(url="http://llm", mode="record", cache=CompletionCache(path), transport=transport)
    recorded = [recorder.complete(p, _params()) for p in prompts]
    assert len(transport.calls) == 10
    assert len(path.read_text(encoding="utf-8").splitlines()) == 10

    replayer = LLMGateway(mode="replay", cache=CompletionCache(path), transport=ForbiddenTransport())
    replayed = [replayer.complete(p, _params()) for p in prompts]
    assert [r.raw_text for r in replayed] == [r.raw_text for r in recorded]
    assert replayer.network_calls == 0


def test_record_mode_reads_through_the_cache(tmp_path):
    transport = ScriptedTransport(_echo)
    gateway = LLMGateway(url="http://llm", mode="record", cache=CompletionCache(tmp_path / "c.jsonl"),
                         transport=transport)
    first = gateway.complete(_prompt("same"), _params())
    second = gateway.complete(_prompt("same"), _params())
    assert first == second
    assert len(transport.calls) == 1


def test_replay_miss_raises():
    gateway = LLMGateway(mode="replay", transport=ForbiddenTransport())
    with pytest.raises(CacheMissError, match="origin x#0"):
        gateway.complete(_prompt("never recorded"), _params())
    assert gateway.network_calls == 0


def test_attempts_are_cached_separately():
    transport = ScriptedTransport(lambda payload, index: completion_response(f"call {index}"))
    gateway = LLMGateway(url="http://llm", mode="record", cache=CompletionCache(), transport=transport)
    texts = [gateway.complete(_prompt("p"), _params(), attempt=a).raw_text for a in (1, 2, 1)]
    assert texts == ["call 0", "call 1", "call 0"]


def test_live_mode_persists_nothing(tmp_path):
    cache = CompletionCache(tmp_path / "c.jsonl")
    transport = ScriptedTransport(_echo)
    gateway = LLMGateway(url="http://llm", mode="live", cache=cache, transport=transport)
    gateway.complete(_prompt("p"), _params())
    gateway.complete(_prompt("p"), _params())
    assert len(transport.calls) == 2
    assert len(cache) == 0
    assert not (tmp_path / "c.jsonl").exists()


def test_cache_put_is_idempotent(tmp_path):
    path = tmp_path / "c.jsonl"
    cache = CompletionCache(path)
    record = CompletionRecord("d" * 64, "text", 1, "ok", 1.0)
    assert cache.put(record)
    assert not cache.put(CompletionRecord("d" * 64, "other", 1, "ok", 2.0))
    assert len(path.read_text(encoding="utf-8").splitlines()) == 1
    reloaded = CompletionCache(path)
    assert reloaded.get("d" * 64).raw_text == "text"
    assert ("d" * 64, 1) in reloaded and ("d" * 64, 2) not in reloaded


def test_failed_records_carry_no_text():
    with pytest.raises(ValueError):
        CompletionRecord("d", "partial", 1, "timeout", 0.0)


def test_retries_back_off_exponentially(sleeps):
    responses = [TransportResponse(503)] * 4 + [completion_response("ok")]
    transport = ScriptedTransport(lambda payload, index: responses[index])
    body = send_with_retries(transport, "http://llm", {}, {}, max_attempts=5, backoff_seconds=1.0, sleep=sleeps)
    assert body["choices"][0]["text"] == "ok"
    assert sleeps.waits == [1.0, 2.0, 4.0, 8.0]


def test_retry_after_is_honoured(sleeps):
    responses = [TransportResponse(429, headers={"Retry-After": "7"}), completion_response("ok")]
    transport = ScriptedTransport(lambda payload, index: responses[index])
    send_with_retries(transport, "http://llm", {}, {}, sleep=sleeps)
    assert sleeps.waits == [7.0]


def test_client_errors_are_not_retried(sleeps):
    transport = ScriptedTransport(lambda payload, index: TransportResponse(401))
    with pytest.raises(TransportError, match="401"):
        send_with_retries(transport, "http://llm", {}, {}, sleep=sleeps)
    assert len(transport.calls) == 1
    assert sleeps.waits == []


def test_exhausted_retries_keep_the_failure_status(sleeps):
    transport = ScriptedTransport(lambda payload, index: TransportError("slow", status="timeout"))
    with pytest.raises(TransportError) as info:
        send_with_retries(transport, "http://llm", {}, {}, max_attempts=3, sleep=sleeps)
    assert info.value.status == "timeout"
    assert len(transport.calls) == 3
    assert sleeps.waits == [1.0, 2.0]


def test_transport_failure_writes_no_record(tmp_path, sleeps):
    path = tmp_path / "c.jsonl"
    gateway = LLMGateway(url="http://llm", mode="record", cache=CompletionCache(path), sleep=sleeps,
                         transport=ScriptedTransport(lambda payload, index: TransportResponse(500)))
    with pytest.raises(TransportError) as info:
        gateway.complete(_prompt("p"), _params())
    assert info.value.record.transport_status == "http_error"
    assert info.value.record.raw_text == ""
    assert not path.exists()


def test_api_key_is_sent_as_bearer_token():
    transport = ScriptedTransport(_echo)
    gateway = LLMGateway(url="http://llm", mode="live", transport=transport, api_key="sk-test")
    gateway.complete(_prompt("p"), _params())
    url, payload, headers = transport.calls[0]
    assert url == "http://llm"
    assert headers["Authorization"] == "Bearer sk-test"
    assert payload == _params().to_wire("p")


def test_concurrency_is_bounded():
    transport = ScriptedTransport(_echo, delay=0.02)
    gateway = LLMGateway(url="http://llm", mode="live", transport=transport, concurrency=2)
    threads = [threading.Thread(target=gateway.complete, args=(_prompt(f"p{i}"), _params())) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(transport.calls) == 8
    assert transport.max_in_flight <= 2
