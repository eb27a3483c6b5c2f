from typing import List, Sequence

import numpy as np

from ..datasets.types import PseudoSample, Sample
from ..errors import DuplicateIdError, SubsetRangeError


def combine(original: Sequence[Sample], pseudo_sets: Sequence[Sequence[PseudoSample]]) -> List[Sample]:
    """Concatenate the original set with the pseudo sets, in the given order."""
    combined = list(original)
    for pseudo in pseudo_sets:
        combined.extend(pseudo)
    seen = set()
    for sample in combined:
        if sample.id in seen:
            raise DuplicateIdError(f"sample id {sample.id!r} occurs more than once")
        seen.add(sample.id)
    return combined


def subset(pseudo: Sequence[PseudoSample], n: int, seed: int) -> List[PseudoSample]:
    """Draw ``n`` samples uniformly without replacement with ``numpy.random.default_rng(seed)``.

    The selection keeps the input order, so ``n == len(pseudo)`` returns the set unchanged.
    """
    if not 0 <= n <= len(pseudo):
        raise SubsetRangeError(f"n must lie in [0, {len(pseudo)}], got {n}")
    rng = np.random.default_rng(seed)
    chosen = np.sort(rng.choice(len(pseudo), size=n, replace=False))
    return [pseudo[int(i)] for i in chosen]


def sole(pseudo: Sequence[PseudoSample]) -> List[Sample]:
    """The pseudo-samples alone, as a standalone training split; provenance is kept."""
    return list(pseudo)
