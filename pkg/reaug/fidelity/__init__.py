from .embeddings import (BaseEmbeddingProvider, EmbeddingCache, HttpEmbeddingProvider, PrecomputedEmbeddingProvider,
                         embed_sentences)
from .analysis import (GROUPS, FidelityReport, ProjectedPoint, cosine_pairs, project_2d, run_fidelity, select_pairs,
                       write_projection_csv)

__all__ = [
    'BaseEmbeddingProvider', 'EmbeddingCache', 'HttpEmbeddingProvider', 'PrecomputedEmbeddingProvider',
    'embed_sentences', 'GROUPS', 'FidelityReport', 'ProjectedPoint', 'cosine_pairs', 'project_2d', 'run_fidelity',
    'select_pairs', 'write_projection_csv'
]
