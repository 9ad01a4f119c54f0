"""Shell and cloud synthesis of noised bitext.

A shell run samples one artificial language at a fixed radius and applies it
to every source line. A cloud run splits the corpus into K contiguous chunks
and noises chunk i with a fresh language at radius theta_max * i / K.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .errors import EmptyBitext, MalformedLine, TooFewLines, ValidationError
from .noisers import (
    CLOUD_MAX_DIALS,
    RANDAUG_CLOUD_MAX_DIALS,
    RANDAUG_SHELL_DIALS,
    SHELL_DIALS,
    ArtificialLanguage,
    NoiseDials,
    RandaugDials,
    RandaugNoiser,
    Resources,
    sample_language,
)
from .seeding import derive_rng, derive_seed

log = logging.getLogger(__name__)

DEFAULT_K = 10


@dataclass(frozen=True)
class RadiusSchedule:
    mode: str = "shell"
    shell: NoiseDials = SHELL_DIALS
    k: int = DEFAULT_K
    theta_max: NoiseDials = CLOUD_MAX_DIALS

    def __post_init__(self):
        if self.mode not in ("shell", "cloud"):
            raise ValidationError(f"unknown schedule mode {self.mode!r}")
        if self.k < 1:
            raise ValidationError("K must be >= 1")


def schedule_radii(sched: RadiusSchedule) -> list[NoiseDials]:
    if sched.mode == "shell":
        return [sched.shell]
    return [sched.theta_max.scaled(i / sched.k) for i in range(1, sched.k + 1)]


@dataclass
class Bitext:
    src: list[str]
    tgt: list[str]

    def __post_init__(self):
        if len(self.src) != len(self.tgt):
            raise ValidationError(f"bitext sides differ: {len(self.src)} vs {len(self.tgt)} lines")

    def __len__(self) -> int:
        return len(self.src)


def read_bitext(src_path, tgt_path=None) -> Bitext:
    """Two line-aligned files, or one ``src<TAB>tgt`` file when ``tgt_path`` is None."""
    if tgt_path is not None:
        with open(src_path, encoding="utf-8") as f:
            src = f.read().splitlines()
        with open(tgt_path, encoding="utf-8") as f:
            tgt = f.read().splitlines()
        return Bitext(src, tgt)
    src, tgt = [], []
    with open(src_path, encoding="utf-8") as f:
        for no, line in enumerate(f.read().splitlines(), 1):
            a, sep, b = line.partition("\t")
            if not sep or "\t" in b:
                raise MalformedLine(no, "expected src<TAB>tgt")
            src.append(a)
            tgt.append(b)
    return Bitext(src, tgt)


def write_lines(lines: Iterable[str], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for line in lines:
            f.write(line + "\n")


def _map_lines(fn: Callable[[int, str], str], lines: Sequence[str], workers: int) -> list[str]:
    if workers <= 1 or len(lines) < 2:
        return [fn(i, line) for i, line in enumerate(lines)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(len(lines)), lines, chunksize=64))


def chunk_bounds(n: int, k: int) -> list[tuple[int, int]]:
    """K contiguous [start, end) ranges; the first n % k chunks get one extra line."""
    if n < k:
        raise TooFewLines(n, k)
    q, r = divmod(n, k)
    bounds = []
    start = 0
    for i in range(k):
        end = start + q + (1 if i < r else 0)
        bounds.append((start, end))
        start = end
    return bounds


@dataclass
class Chunk:
    radius: int
    start: int
    end: int
    dials: object
    languages: list = field(default_factory=list)
    seeds: list = field(default_factory=list)


@dataclass
class NoisedCorpus:
    bitext: Bitext
    chunks: list[Chunk]
    seed: int
    mode: str

    @property
    def radius_index(self) -> list[int]:
        out = []
        for c in self.chunks:
            out.extend([c.radius] * (c.end - c.start))
        return out

    @property
    def languages(self) -> list[ArtificialLanguage]:
        return [lang for c in self.chunks for lang in c.languages]

    def metadata(self, language_paths: Sequence[str] = ()) -> dict:
        paths = iter(language_paths)
        chunks = []
        for c in self.chunks:
            d = c.dials
            entry = {
                "radius": c.radius,
                "start": c.start,
                "end": c.end,
                "dials": dict(zip(_dial_names(d), _dial_values(d))),
                "seeds": c.seeds,
            }
            if c.languages:
                entry["languages"] = [next(paths, None) for _ in c.languages]
            chunks.append(entry)
        return {"mode": self.mode, "seed": self.seed, "lines": len(self.bitext), "chunks": chunks}


def _dial_names(d) -> list[str]:
    return ["theta_rc", "theta_rw"] if isinstance(d, RandaugDials) else ["theta_p", "theta_m", "theta_f", "theta_c"]


def _dial_values(d) -> list[float]:
    return [d.theta_rc, d.theta_rw] if isinstance(d, RandaugDials) else list(d.as_tuple())


def _noise_range(
    src: Sequence[str],
    start: int,
    end: int,
    dials: NoiseDials,
    res: Resources,
    seed: int,
    langs_per_radius: int,
    workers: int,
) -> tuple[list[str], list[ArtificialLanguage], list[int]]:
    """Noise src[start:end], splitting it evenly across ``langs_per_radius`` languages."""
    out: list[str] = []
    langs, seeds = [], []
    span = end - start
    parts = chunk_bounds(span, langs_per_radius) if span >= langs_per_radius else [(0, span)]
    for j, (a, b) in enumerate(parts):
        lseed = seed if langs_per_radius == 1 else derive_seed(seed, "lang", j)
        lang = sample_language(dials, res, lseed)
        out.extend(_map_lines(lambda i, line: lang.apply(line, res), src[start + a : start + b], workers))
        langs.append(lang)
        seeds.append(lseed)
    return out, langs, seeds


def make_shell_corpus(
    bitext: Bitext,
    dials: NoiseDials,
    res: Resources,
    seed: int,
    workers: int = 1,
    langs_per_radius: int = 1,
) -> NoisedCorpus:
    if not len(bitext):
        raise EmptyBitext("bitext is empty")
    noised, langs, seeds = _noise_range(
        bitext.src, 0, len(bitext), dials, res, seed, langs_per_radius, workers
    )
    chunk = Chunk(1, 0, len(bitext), dials, langs, seeds)
    return NoisedCorpus(Bitext(noised, list(bitext.tgt)), [chunk], seed, "shell")


def make_cloud_corpus(
    bitext: Bitext,
    sched: RadiusSchedule,
    res: Resources,
    seed: int,
    workers: int = 1,
    langs_per_radius: int = 1,
) -> NoisedCorpus:
    if sched.mode != "cloud":
        raise ValidationError("make_cloud_corpus needs a cloud schedule")
    radii = schedule_radii(sched)
    bounds = chunk_bounds(len(bitext), sched.k)
    noised: list[str] = []
    chunks = []
    for i, ((start, end), dials) in enumerate(zip(bounds, radii), 1):
        rseed = derive_seed(seed, "radius", i)
        lines, langs, seeds = _noise_range(
            bitext.src, start, end, dials, res, rseed, langs_per_radius, workers
        )
        noised.extend(lines)
        chunks.append(Chunk(i, start, end, dials, langs, seeds))
        log.debug("radius %d: lines %d-%d dials %s", i, start, end, dials.as_tuple())
    return NoisedCorpus(Bitext(noised, list(bitext.tgt)), chunks, seed, "cloud")


def make_randaug_corpus(
    bitext: Bitext,
    dials: RandaugDials | None,
    res: Resources,
    seed: int,
    cloud_k: int | None = None,
    theta_max: RandaugDials | None = None,
    workers: int = 1,
) -> NoisedCorpus:
    """randaug baseline; shell when ``cloud_k`` is None, otherwise K graded radii."""
    if not len(bitext):
        raise EmptyBitext("bitext is empty")
    alphabet = res.vocab.alphabet
    if cloud_k is None:
        plan = [(1, 0, len(bitext), dials or RANDAUG_SHELL_DIALS)]
        mode = "randaug-shell"
    else:
        tmax = theta_max or RANDAUG_CLOUD_MAX_DIALS
        plan = [
            (i, a, b, tmax.scaled(i / cloud_k))
            for i, (a, b) in enumerate(chunk_bounds(len(bitext), cloud_k), 1)
        ]
        mode = "randaug-cloud"
    noised: list[str] = []
    chunks = []
    for radius, a, b, rd in plan:
        noiser = RandaugNoiser(rd, alphabet, res.vocab)

        def fn(i, line, a=a, noiser=noiser):
            return noiser.apply(line, derive_rng(seed, "randaug", a + i))

        noised.extend(_map_lines(fn, bitext.src[a:b], workers))
        chunks.append(Chunk(radius, a, b, rd))
    return NoisedCorpus(Bitext(noised, list(bitext.tgt)), chunks, seed, mode)


def run_theta_sweep(
    bitext: Bitext,
    dimension: str,
    grid: Sequence[float],
    res: Resources,
    seed: int,
    workers: int = 1,
) -> list[tuple[float, NoisedCorpus]]:
    """One shell corpus per grid value, all other dials at zero."""
    if dimension not in ("p", "m", "f"):
        raise ValidationError(f"sweep dimension must be p, m or f, got {dimension!r}")
    return [
        (theta, make_shell_corpus(bitext, NoiseDials().with_dim(dimension, theta), res, seed, workers))
        for theta in grid
    ]


def write_noised_corpus(corpus: NoisedCorpus, out_dir) -> dict:
    """Write src/tgt, per-line radius index, languages and a JSON sidecar."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_lines(corpus.bitext.src, out / "src.txt")
    write_lines(corpus.bitext.tgt, out / "tgt.txt")
    write_lines(map(str, corpus.radius_index), out / "radius.txt")
    paths = []
    if corpus.languages:
        (out / "languages").mkdir(exist_ok=True)
        for c in corpus.chunks:
            for j, lang in enumerate(c.languages):
                rel = f"languages/radius{c.radius:02d}_{j}.lang"
                lang.save(out / rel)
                paths.append(rel)
    meta = corpus.metadata(paths)
    with open(out / "metadata.json", "w", encoding="utf-8") as f:
        json.dump(meta, f, indent=2, ensure_ascii=False, sort_keys=True)
        f.write("\n")
    return meta
