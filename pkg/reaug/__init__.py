# Synthesize, filter and score LLM pseudo-samples for span-based relation extraction corpora
