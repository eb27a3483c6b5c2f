import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from ..datasets.types import PseudoSample, Sample
from ..errors import FidelityInputError
from ..prompts.bracket import plain_sentence
from ..utils import get_logger, write_json
from .embeddings import BaseEmbeddingProvider, EmbeddingCache, embed_sentences

GROUPS = ["original", "paraphrase", "generate"]
DEFAULT_PAIRS = 400
EPS = 1e-12

logger = get_logger()


class ProjectedPoint(NamedTuple):
    x: float
    y: float
    group: str


@dataclass
class FidelityReport:
    similarities: List[float] = field(default_factory=list)
    projection: List[ProjectedPoint] = field(default_factory=list)

    @property
    def mean(self) -> float:
        return float(np.mean(self.similarities)) if self.similarities else 0.0

    @property
    def median(self) -> float:
        return float(np.median(self.similarities)) if self.similarities else 0.0

    @property
    def min(self) -> float:
        return float(np.min(self.similarities)) if self.similarities else 0.0

    def to_dict(self) -> Dict:
        return {
            "pairs": len(self.similarities),
            "mean": self.mean,
            "median": self.median,
            "min": self.min,
            "similarities": list(self.similarities),
        }


def cosine_pairs(origs, pseudos) -> List[float]:
    """Cosine similarity of each ``(origs[i], pseudos[i])``; a zero vector scores 0."""
    origs = np.atleast_2d(np.asarray(origs, dtype=np.float64))
    pseudos = np.atleast_2d(np.asarray(pseudos, dtype=np.float64))
    if len(origs) != len(pseudos):
        raise FidelityInputError(f"got {len(origs)} original and {len(pseudos)} pseudo vectors")
    if origs.size == 0:
        return []
    if origs.shape[1] != pseudos.shape[1]:
        raise FidelityInputError(f"vector dimensions differ: {origs.shape[1]} vs {pseudos.shape[1]}")
    norms = np.linalg.norm(origs, axis=1) * np.linalg.norm(pseudos, axis=1)
    dots = np.einsum("ij,ij->i", origs, pseudos)
    sims = np.divide(dots, norms, out=np.zeros_like(dots), where=norms > 0)
    return [float(s) for s in np.clip(sims, -1.0, 1.0)]


def _principal_axes(centered: np.ndarray) -> np.ndarray:
    covariance = centered.T @ centered / max(len(centered) - 1, 1)
    eigenvalues, eigenvectors = np.linalg.eigh(covariance)
    order = np.argsort(eigenvalues, kind="stable")[::-1][:2]
    axes = eigenvectors[:, order]
    for k in range(axes.shape[1]):
        nonzero = np.flatnonzero(np.abs(axes[:, k]) > EPS)
        if nonzero.size and axes[nonzero[0], k] < 0:
            axes[:, k] = -axes[:, k]
    return axes


def project_2d(vectors, tags: Sequence[str]) -> List[ProjectedPoint]:
    """Project onto the top two principal axes of the centered data.

    Each axis is signed so its first nonzero loading is positive. Identical inputs all
    land on the origin; one-dimensional inputs get a zero ``y``.
    """
    vectors = np.asarray(vectors, dtype=np.float64)
    if vectors.ndim != 2 or len(vectors) < 2:
        raise FidelityInputError("projection needs at least 2 vectors")
    if len(tags) != len(vectors):
        raise FidelityInputError(f"got {len(tags)} tags for {len(vectors)} vectors")
    centered = vectors - vectors.mean(axis=0)
    if not np.any(np.abs(centered) > EPS):
        coords = np.zeros((len(vectors), 2))
    else:
        coords = centered @ _principal_axes(centered)
        if coords.shape[1] < 2:
            coords = np.hstack([coords, np.zeros((len(coords), 2 - coords.shape[1]))])
    return [ProjectedPoint(float(x), float(y), tag) for (x, y), tag in zip(coords, tags)]


def select_pairs(originals: Sequence[Sample],
                 pseudo: Sequence[PseudoSample],
                 n: int = DEFAULT_PAIRS,
                 seed: Optional[int] = None) -> List[Tuple[str, str]]:
    """``(origin sentence, pseudo sentence)`` pairs of pseudo-samples whose origin is bracketable.

    The first ``n`` in pseudo order by default; a seed draws ``n`` at random instead.
    """
    by_id = {s.id: s for s in originals}
    pairs = [(plain_sentence(by_id[p.origin_id]), plain_sentence(p))
             for p in pseudo
             if p.origin_id in by_id and by_id[p.origin_id].bracketable]
    if seed is None or n >= len(pairs):
        return pairs[:n]
    chosen = np.sort(np.random.default_rng(seed).choice(len(pairs), size=n, replace=False))
    return [pairs[int(i)] for i in chosen]


def write_projection_csv(path: Union[str, Path], points: Sequence[ProjectedPoint]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["x", "y", "group"])
        for point in points:
            writer.writerow([repr(point.x), repr(point.y), point.group])


def run_fidelity(originals: Sequence[Sample],
                 pseudo_sets: Mapping[str, Sequence[PseudoSample]],
                 provider: BaseEmbeddingProvider,
                 output_dir: Union[str, Path],
                 n: int = DEFAULT_PAIRS,
                 seed: Optional[int] = None,
                 cache: Optional[EmbeddingCache] = None) -> Dict[str, FidelityReport]:
    """Score origin/pseudo closeness per method and write ``projection.csv`` and ``fidelity.json``."""
    for group in pseudo_sets:
        if group not in GROUPS[1:]:
            raise FidelityInputError(f"Supplied group was {group}. Must be one of {GROUPS[1:]}.")
    cache = cache if cache is not None else EmbeddingCache()

    reports = {}
    sentences: Dict[str, str] = {}
    for group, pseudo in pseudo_sets.items():
        pairs = select_pairs(originals, pseudo, n, seed)
        if not pairs:
            raise FidelityInputError(f"no {group} pseudo-samples with a known bracketable origin")
        origs = embed_sentences([o for o, _ in pairs], provider, cache)
        pseudos = embed_sentences([p for _, p in pairs], provider, cache)
        reports[group] = FidelityReport(similarities=cosine_pairs(origs, pseudos))
        for o, p in pairs:
            sentences.setdefault(f"original\t{o}", o)
            sentences.setdefault(f"{group}\t{p}", p)

    keys = list(sentences)
    tags = [key.split("\t", 1)[0] for key in keys]
    points = project_2d(embed_sentences([sentences[k] for k in keys], provider, cache), tags)
    for group, report in reports.items():
        report.projection = [p for p in points if p.group in ("original", group)]

    output_dir = Path(output_dir)
    write_projection_csv(output_dir / "projection.csv", points)
    write_json(output_dir / "fidelity.json", {group: report.to_dict() for group, report in reports.items()})
    for group, report in reports.items():
        logger.info(f"{group}: {len(report.similarities):,} pairs, mean cosine {report.mean:.4f}, "
                    f"median {report.median:.4f}, min {report.min:.4f}")
    return reports
