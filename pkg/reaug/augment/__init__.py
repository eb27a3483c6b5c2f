from .policy import AugmentPolicy, RunReport
from .runner import Checkpoint, Outcome, augment_one, load_samples, run_augment, save_run
from .assembly import combine, sole, subset

__all__ = [
    'AugmentPolicy', 'RunReport', 'Checkpoint', 'Outcome', 'augment_one', 'load_samples', 'run_augment', 'save_run',
    'combine', 'sole', 'subset'
]
