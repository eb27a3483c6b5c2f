"""
1. parse + realign throughput
2. replayed augmentation throughput per worker count
3. export elapsed time
"""
import tempfile
from pathlib import Path

from contexttimer import Timer
from tqdm import tqdm

from reaug.augment import run_augment
from reaug.datasets import export
from reaug.postproc import parse_bracketed, realign_paraphrase
from reaug.prompts import render_bracketed
from reaug.utils import get_mem_info
from data_utils import get_replay_gateway, get_samples


def benchmark_realign(samples):
    texts = [render_bracketed(s).text for s in samples]
    with Timer() as timer:
        for sample, text in tqdm(zip(samples, texts), total=len(samples), ncols=0, desc="realign"):
            realign_paraphrase(parse_bracketed(text), sample)
    print(f"realign: {len(samples)} samples in {timer.elapsed:.2f}s, {len(samples) / timer.elapsed:.0f} samples/s")


def benchmark_augment(samples, method, concurrency):
    policy, gateway = get_replay_gateway(samples, method, concurrency=concurrency)
    with Timer() as timer:
        pseudo, report = run_augment(samples, policy, gateway, progress=False)
    print(f"{method} with {concurrency} workers: {report.produced} produced in {timer.elapsed:.2f}s, "
          f"cache hits {gateway.cache.hits}")
    return pseudo


if __name__ == "__main__":
    with Timer() as timer:
        samples = get_samples()
    print(f"Generating {len(samples)} synthetic samples costs: {timer.elapsed:.2f} s")
    print(get_mem_info())

    benchmark_realign(samples)

    for method in ["paraphrase", "generate"]:
        for concurrency in [1, 4, 16]:
            pseudo = benchmark_augment(samples, method, concurrency)
            print('=' * 50 + '\n')

    with tempfile.TemporaryDirectory() as tmp:
        for format in ["scierc", "spert", "marker"]:
            with Timer() as timer:
                export(samples + pseudo, format, Path(tmp) / f"train.{format}.json")
            print(f"export {format}: {timer.elapsed:.2f}s")
