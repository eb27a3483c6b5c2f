from .types import (STAGES, AugmentMethod, Document, DocumentSet, EntityMention, EntityType, PseudoSample,
                    RelationMention, RelationType, Sample)
from .scierc import load_scierc, load_split, flatten, sample_id, split_sample_id
from .spert import load_spert
from .export import FORMATS, export
from .label_counter import DatasetStats, LabelCounter, compute_stats

__all__ = [
    'STAGES', 'AugmentMethod', 'Document', 'DocumentSet', 'EntityMention', 'EntityType', 'PseudoSample',
    'RelationMention', 'RelationType', 'Sample', 'load_scierc', 'load_split', 'flatten', 'sample_id',
    'split_sample_id', 'load_spert', 'FORMATS', 'export', 'DatasetStats', 'LabelCounter', 'compute_stats'
]
