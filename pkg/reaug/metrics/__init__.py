from .predictions import (PredictedEntity, PredictedRelation, PredictionSet, SamplePrediction, load_predictions,
                          predictions_from_samples)
from .scorer import REGIMES, RegimeScore, ScoreReport, score

__all__ = [
    'PredictedEntity', 'PredictedRelation', 'PredictionSet', 'SamplePrediction', 'load_predictions',
    'predictions_from_samples', 'REGIMES', 'RegimeScore', 'ScoreReport', 'score'
]
