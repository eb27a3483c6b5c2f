import json
import threading
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from tqdm import tqdm

from ..datasets.scierc import sample_id
from ..datasets.types import AugmentMethod, PseudoSample, Sample
from ..datasets.utils import pseudo_doc_key
from ..errors import AugmentAborted, CheckpointMismatchError, CorpusFormatError, TransportError
from ..llm.gateway import LLMGateway
from ..postproc.defect_log import BENIGN, DefectLog, DefectRecord, severity_of
from ..postproc.parsing import DefectClass, ParsedCompletion, parse_bracketed, quote_depth
from ..postproc.realign import realign_generated, realign_paraphrase
from ..prompts.bracket import render_bracketed
from ..prompts.builder import GenerateInput, build_generate_prompt, build_paraphrase_prompt
from ..utils import get_logger, write_json
from .policy import AugmentPolicy, RunReport

PRODUCED = "produced"
DISCARDED = "discarded"
SKIPPED = "skipped"

logger = get_logger()


@dataclass
class Outcome:
    """What happened to one origin sample."""

    origin_id: str
    status: str
    attempts: int = 0
    first_defect: Optional[str] = None
    benign: bool = False
    sample: Optional[PseudoSample] = None
    defects: List[DefectRecord] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            "origin_id": self.origin_id,
            "status": self.status,
            "attempts": self.attempts,
            "first_defect": self.first_defect,
            "benign": self.benign,
            "sample": None if self.sample is None else self.sample.to_dict(),
            "defects": [d.to_dict() for d in self.defects],
        }

    @classmethod
    def from_dict(cls, payload: Dict) -> "Outcome":
        return cls(origin_id=payload["origin_id"],
                   status=payload["status"],
                   attempts=payload["attempts"],
                   first_defect=payload["first_defect"],
                   benign=payload["benign"],
                   sample=None if payload["sample"] is None else PseudoSample.from_dict(payload["sample"]),
                   defects=[DefectRecord(**d) for d in payload["defects"]])


class Checkpoint:
    """Line-delimited record of finished origin samples, appended as they finish.

    Every line carries the fingerprint of the policy that produced it; outcomes of
    another method or other sampling parameters are never resumed.
    """

    def __init__(self, path: Union[str, Path], fingerprint: str):
        self.path = Path(path)
        self.fingerprint = fingerprint
        self._lock = threading.Lock()

    def load(self) -> Dict[str, Outcome]:
        done = {}
        if not self.path.exists():
            return done
        with open(self.path, "r", encoding="utf-8") as f:
            for line_number, line in enumerate(f, start=1):
                if not line.strip():
                    continue
                payload = json.loads(line)
                if payload.get("fingerprint") != self.fingerprint:
                    raise CheckpointMismatchError(
                        f"{self.path} line {line_number} was written with another method or other sampling "
                        f"parameters; remove it or choose another output directory")
                outcome = Outcome.from_dict(payload)
                done[outcome.origin_id] = outcome
        return done

    def append(self, outcome: Outcome) -> None:
        payload = dict(outcome.to_dict(), fingerprint=self.fingerprint)
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as f:
                f.write(json.dumps(payload, ensure_ascii=False, sort_keys=True) + "\n")

    def clear(self) -> None:
        self.path.unlink(missing_ok=True)


def _attempt(policy: AugmentPolicy, gateway: LLMGateway, prompt, origin: Sample, g: Optional[GenerateInput],
             attempt: int, keep_quotes: int = 0):
    record = gateway.complete(prompt, policy.params, attempt=attempt)
    parsed = parse_bracketed(record.raw_text, keep_quotes=keep_quotes)
    if not isinstance(parsed, ParsedCompletion):
        return parsed, record.raw_text
    if policy.method == AugmentMethod.PARAPHRASE:
        return realign_paraphrase(parsed, origin, attempts=attempt), record.raw_text
    return realign_generated(parsed, g, origin_id=origin.id, attempts=attempt), record.raw_text


def augment_one(sample: Sample, policy: AugmentPolicy, gateway: LLMGateway) -> Outcome:
    """Build the prompt, complete it and post-process the answer, retrying paraphrase defects."""
    g = None
    keep_quotes = 0
    if policy.method == AugmentMethod.PARAPHRASE:
        if not sample.bracketable:
            return Outcome(origin_id=sample.id, status=SKIPPED)
        prompt = build_paraphrase_prompt(sample)
        # quotes wrapping the origin itself are part of the sentence, not of the answer
        keep_quotes = quote_depth(render_bracketed(sample).text)
    else:
        g = GenerateInput.from_sample(sample)
        prompt = build_generate_prompt(g, origin_sample_id=sample.id)

    outcome = Outcome(origin_id=sample.id, status=DISCARDED)
    for attempt in range(1, policy.max_attempts + 1):
        result, raw_text = _attempt(policy, gateway, prompt, sample, g, attempt, keep_quotes)
        outcome.attempts = attempt
        if isinstance(result, PseudoSample):
            outcome.status = PRODUCED
            outcome.sample = result
            break
        severity = severity_of(result, g)
        outcome.defects.append(
            DefectRecord.create(sample.id, policy.method.value, result, raw_text, attempt, severity))
        if severity == BENIGN:
            outcome.benign = True
            break
        if attempt == 1:
            outcome.first_defect = DefectClass(result).value
    return outcome


def _assign_ids(outcomes: Sequence[Outcome], method: AugmentMethod) -> List[PseudoSample]:
    pseudo = []
    for outcome in outcomes:
        if outcome.sample is not None:
            pseudo.append(outcome.sample.with_id(sample_id(pseudo_doc_key(method.code, len(pseudo)), 0)))
    return pseudo


def _report(outcomes: Sequence[Outcome], method: AugmentMethod) -> RunReport:
    report = RunReport(method=method.value, inputs=len(outcomes))
    for outcome in outcomes:
        report.attempts_total += outcome.attempts
        if outcome.status == PRODUCED:
            report.produced += 1
        elif outcome.status == SKIPPED:
            report.skipped += 1
        else:
            report.discarded += 1
        if outcome.benign:
            report.benign += 1
        if outcome.first_defect is not None:
            report.defects[outcome.first_defect] += 1
    return report


def run_augment(samples: Sequence[Sample],
                policy: AugmentPolicy,
                gateway: LLMGateway,
                checkpoint_path: Optional[Union[str, Path]] = None,
                defect_log: Optional[DefectLog] = None,
                progress: bool = True) -> Tuple[List[PseudoSample], RunReport]:
    """Augment every sample concurrently and return the pseudo-samples in origin order.

    Pseudo-samples are numbered ``pga_<p|g>_<counter>#0`` in origin order. A transport
    failure aborts the run; with a checkpoint the finished samples are kept and skipped
    on the next live or record run with the same policy. The checkpoint is removed once
    every sample has finished. Replay runs ignore checkpoints.
    """
    checkpoint = None
    if checkpoint_path is not None and gateway.mode != "replay":
        checkpoint = Checkpoint(checkpoint_path, policy.fingerprint)
    done = checkpoint.load() if checkpoint is not None else {}
    if done:
        logger.info(f"resuming from {checkpoint.path}: {len(done):,} samples already finished")

    outcomes: List[Optional[Outcome]] = [done.get(s.id) for s in samples]
    pending = [i for i, outcome in enumerate(outcomes) if outcome is None]

    with ThreadPoolExecutor(max_workers=gateway.concurrency) as executor:
        futures = {executor.submit(augment_one, samples[i], policy, gateway): i for i in pending}
        bar = tqdm(as_completed(futures), total=len(futures), desc=f"augment ({policy.method.value})", ncols=0,
                   disable=not progress)
        try:
            for future in bar:
                outcome = future.result()
                outcomes[futures[future]] = outcome
                if checkpoint is not None:
                    checkpoint.append(outcome)
        except TransportError as e:
            for future in futures:
                future.cancel()
            raise AugmentAborted(f"{e}; finished samples are kept in {checkpoint_path}" if checkpoint else str(e),
                                 checkpoint_path=checkpoint_path) from e
        finally:
            bar.close()
    if checkpoint is not None:
        checkpoint.clear()

    if defect_log is not None:
        defect_log.extend(d for outcome in outcomes for d in outcome.defects)
    pseudo = _assign_ids(outcomes, policy.method)
    report = _report(outcomes, policy.method)
    logger.info(report.summary())
    return pseudo, report


def save_run(output_dir: Union[str, Path], pseudo: Sequence[PseudoSample], report: RunReport,
             defect_log: Optional[DefectLog] = None) -> None:
    """Write ``pseudo.jsonl``, ``report.json`` and ``defects.jsonl`` under ``output_dir``."""
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    with open(output_dir / "pseudo.jsonl", "w", encoding="utf-8") as f:
        for sample in pseudo:
            f.write(json.dumps(sample.to_dict(), ensure_ascii=False) + "\n")
    write_json(output_dir / "report.json", report.to_dict())
    if defect_log is not None:
        defect_log.write(output_dir / "defects.jsonl")


def load_samples(path: Union[str, Path]) -> List[Sample]:
    """Read a line-delimited file of serialized samples, e.g. ``pseudo.jsonl``."""
    samples = []
    with open(path, "r", encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                samples.append(Sample.from_dict(json.loads(line)))
            except CorpusFormatError as e:
                raise CorpusFormatError(str(e), line=line_number) from None
            except (ValueError, TypeError, KeyError) as e:
                raise CorpusFormatError(f"malformed sample record ({e})", line=line_number) from None
    return samples
