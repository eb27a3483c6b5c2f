from .bracket import BracketedText, plain_sentence, render_bracketed
from .builder import (SENTINEL, SLOT, GenerateInput, PromptText, build_generate_prompt, build_paraphrase_prompt,
                      load_template, template_parts)

__all__ = [
    'BracketedText', 'plain_sentence', 'render_bracketed', 'SENTINEL', 'SLOT', 'GenerateInput', 'PromptText',
    'build_generate_prompt', 'build_paraphrase_prompt', 'load_template', 'template_parts'
]
