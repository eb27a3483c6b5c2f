from reaug.augment import AugmentPolicy
from reaug.datasets import flatten
from reaug.datasets.synth import generate_corpus
from reaug.llm import CompletionCache, CompletionRecord, LLMGateway, digest
from reaug.prompts import GenerateInput, build_generate_prompt, build_paraphrase_prompt, render_bracketed

MODEL_NAME = "text-davinci-003"
NUM_DOCS = 2000


def get_samples(num_docs=NUM_DOCS, seed=0):
    return [s for s in flatten(generate_corpus(num_docs, seed=seed)) if s.entities]


def get_replay_gateway(samples, method, concurrency=4):
    """A replay gateway whose cache answers every prompt with the sample's own bracketed sentence."""
    policy = AugmentPolicy.for_method(method, MODEL_NAME)
    cache = CompletionCache()
    for sample in samples:
        if method == "paraphrase":
            prompt = build_paraphrase_prompt(sample)
        else:
            prompt = build_generate_prompt(GenerateInput.from_sample(sample), sample.id)
        cache.put(CompletionRecord(digest(prompt, policy.params), render_bracketed(sample).text, 1, "ok", 0.0))
    return policy, LLMGateway(mode="replay", cache=cache, concurrency=concurrency)
