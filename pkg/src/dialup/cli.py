"""Command-line entry point.

Every subcommand reads its options from flags, falling back to a JSON config
file (``--config``) and then to built-in defaults. Exit codes: 0 success,
2 validation error, 1 runtime error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .dtm import SwapMode, swap_corpus
from .errors import DialupError, LengthMismatch, ValidationError
from .langgen import (
    RadiusSchedule,
    make_cloud_corpus,
    make_randaug_corpus,
    make_shell_corpus,
    read_bitext,
    run_theta_sweep,
    write_lines,
    write_noised_corpus,
)
from .lexicon import (
    induce_lexicon_ibm1,
    load_lexicon,
    merge_lexicons,
    project_function_words,
    read_crl_function_words,
    read_lexicon,
    write_word_set,
)
from .metrics import ChrfParams, chrf, corpus_chrf, function_word_share, noise_rate_report
from .noisers import (
    CLOUD_MAX_DIALS,
    RANDAUG_CLOUD_MAX_DIALS,
    RANDAUG_SHELL_DIALS,
    SHELL_DIALS,
    ArtificialLanguage,
    NoiseDials,
    RandaugDials,
    Resources,
    sample_language,
)
from .resources import (
    ResourcePaths,
    build_vocabulary,
    extract_function_words,
    extract_suffixes,
    parse_conllu,
    read_function_words,
    train_char_ngram,
    write_char_ngram,
    write_function_words,
    write_suffixes,
    write_vocabulary,
)
from .seeding import DEFAULT_SEED

log = logging.getLogger("dialup")

DEFAULTS = {
    "seed": DEFAULT_SEED,
    "workers": 1,
    "g2p": "latn_tur",
    "inventory": None,
    "dials": None,
    "k": 10,
    "theta_max": None,
    "randaug": None,
    "langs_per_radius": 1,
    "max_suffix_len": 4,
    "min_suffix_freq": 5,
    "top_k": 100,
    "ngram_order": 3,
    "iterations": 10,
    "threshold": 0.1,
    "max_n": 6,
    "beta": 2.0,
    "source": None,
}


class JsonFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        payload = {"level": record.levelname.lower(), "logger": record.name, "msg": record.getMessage()}
        payload.update(getattr(record, "fields", {}))
        return json.dumps(payload, ensure_ascii=False, sort_keys=True)


def _event(msg: str, **fields) -> None:
    log.info(msg, extra={"fields": fields})


# --------------------------------------------------------------------------
# option helpers


def _parse_floats(value, n: int, name: str) -> list[float]:
    if isinstance(value, dict):
        raise ValidationError(f"{name}: use a list, not an object")
    if isinstance(value, str):
        parts = [p for p in value.replace(" ", "").split(",") if p]
    else:
        parts = list(value)
    try:
        out = [float(p) for p in parts]
    except (TypeError, ValueError):
        raise ValidationError(f"{name}: expected {n} comma-separated numbers, got {value!r}") from None
    if len(out) != n:
        raise ValidationError(f"{name}: expected {n} values, got {len(out)}")
    return out


def _dials(value, default: NoiseDials) -> NoiseDials:
    if value is None:
        return default
    if isinstance(value, dict):
        return NoiseDials(**{f"theta_{k}" if not k.startswith("theta_") else k: float(v) for k, v in value.items()})
    return NoiseDials(*_parse_floats(value, 4, "dials"))


def _randaug(value, default: RandaugDials) -> RandaugDials:
    if value is None:
        return default
    return RandaugDials(*_parse_floats(value, 2, "randaug dials"))


def _need(args, *names: str) -> None:
    for name in names:
        if getattr(args, name, None) in (None, ""):
            raise ValidationError(f"--{name.replace('_', '-')} is required")


def _need_files(*paths) -> None:
    for p in paths:
        if p is not None and not Path(p).exists():
            raise ValidationError(f"no such file: {p}")


def _bitext(args):
    if args.bitext:
        _need_files(args.bitext)
        return read_bitext(args.bitext)
    _need(args, "src", "tgt")
    _need_files(args.src, args.tgt)
    return read_bitext(args.src, args.tgt)


def _resources(args) -> Resources:
    _need(args, "resources")
    paths = ResourcePaths.in_dir(args.resources)
    _need_files(paths.function_words, paths.suffixes, paths.charlm, paths.vocab, args.inventory)
    return Resources.load(args.resources, args.g2p, args.inventory)


def _read_lines(path) -> list[str]:
    with open(path, encoding="utf-8") as f:
        return f.read().splitlines()


# --------------------------------------------------------------------------
# commands


def cmd_resources_build(args) -> int:
    _need(args, "conllu", "corpus", "out")
    _need_files(args.conllu, args.corpus)
    with open(args.conllu, encoding="utf-8") as f:
        corpus = parse_conllu(f, strict=not args.lenient)
    funcs = extract_function_words(corpus)
    with open(args.corpus, encoding="utf-8") as f:
        vocab = build_vocabulary(f)
    suffixes = extract_suffixes(vocab, args.max_suffix_len, args.min_suffix_freq, args.top_k)
    model = train_char_ngram(vocab, args.ngram_order)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    paths = ResourcePaths.in_dir(out)
    write_function_words(funcs, paths.function_words)
    write_suffixes(suffixes, paths.suffixes)
    write_char_ngram(model, paths.charlm)
    write_vocabulary(vocab, paths.vocab)
    print(f"sentences\t{len(corpus)}")
    print(f"tokens\t{sum(len(s) for s in corpus.sentences)}")
    print(f"function_words\t{len(funcs)}")
    print(f"vocabulary\t{len(vocab)}")
    print(f"suffixes\t{len(suffixes)}")
    print(f"ngram_histories\t{len(model.counts)}")
    return 0


def cmd_lang_sample(args) -> int:
    _need(args, "out")
    res = _resources(args)
    lang = sample_language(_dials(args.dials, SHELL_DIALS), res, args.seed)
    lang.save(args.out)
    _event("sampled language", path=str(args.out), seed=args.seed,
           phonemes=len(lang.phoneme_map), suffixes=len(lang.suffix_map),
           function_words=len(lang.function_word_map))
    return 0


def _write_reports(corpus, original, res, out: Path) -> None:
    parts = []
    for c in corpus.chunks:
        for lang in c.languages:
            rep = noise_rate_report(original[c.start : c.end], corpus.bitext.src[c.start : c.end], lang, res)
            parts.append(rep.to_tsv(label=str(c.radius), header=not parts))
    (out / "noise_report.tsv").write_text("".join(parts), encoding="utf-8")


def cmd_noise(args) -> int:
    _need(args, "out")
    bitext = _bitext(args)
    res = _resources(args)
    mode = args.mode
    if mode == "shell":
        corpus = make_shell_corpus(
            bitext, _dials(args.dials, SHELL_DIALS), res, args.seed, args.workers, args.langs_per_radius
        )
    elif mode == "cloud":
        sched = RadiusSchedule("cloud", k=args.k, theta_max=_dials(args.theta_max, CLOUD_MAX_DIALS))
        corpus = make_cloud_corpus(bitext, sched, res, args.seed, args.workers, args.langs_per_radius)
    elif mode == "randaug-shell":
        corpus = make_randaug_corpus(
            bitext, _randaug(args.randaug, RANDAUG_SHELL_DIALS), res, args.seed, workers=args.workers
        )
    else:
        corpus = make_randaug_corpus(
            bitext, None, res, args.seed, cloud_k=args.k,
            theta_max=_randaug(args.randaug, RANDAUG_CLOUD_MAX_DIALS), workers=args.workers,
        )
    out = Path(args.out)
    write_noised_corpus(corpus, out)
    if corpus.languages:
        _write_reports(corpus, bitext.src, res, out)
    _event("noised corpus", mode=mode, lines=len(bitext), chunks=len(corpus.chunks), out=str(out))
    return 0


def cmd_sweep(args) -> int:
    _need(args, "dim", "grid", "out")
    grid = [float(g) for g in str(args.grid).split(",") if g.strip()] if isinstance(args.grid, str) else list(args.grid)
    bitext = _bitext(args)
    res = _resources(args)
    out = Path(args.out)
    rows = ["theta\tphonemes\tsuffixes\tfunction_words\tdir"]
    for theta, corpus in run_theta_sweep(bitext, args.dim, grid, res, args.seed, args.workers):
        sub = out / f"theta_{theta:g}"
        write_noised_corpus(corpus, sub)
        _write_reports(corpus, bitext.src, res, sub)
        lang = corpus.languages[0]
        rows.append(
            f"{theta:g}\t{len(lang.phoneme_map)}\t{len(lang.suffix_map)}\t{len(lang.function_word_map)}\t{sub.name}"
        )
    out.mkdir(parents=True, exist_ok=True)
    text = "\n".join(rows) + "\n"
    (out / "sweep.tsv").write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return 0


def cmd_lexicon(args) -> int:
    _need(args, "out")
    action = args.action
    if action == "load":
        _need(args, "input")
        _need_files(args.input)
        with open(args.input, encoding="utf-8") as f:
            lex = load_lexicon(f, args.source or Path(args.input).stem)
        lex.save(args.out)
    elif action == "merge":
        if not args.inputs:
            raise ValidationError("lexicon merge needs at least one input lexicon")
        _need_files(*args.inputs)
        lex = merge_lexicons([read_lexicon(p) for p in args.inputs])
        lex.save(args.out)
    elif action == "induce":
        bitext = _bitext(args)
        lex = induce_lexicon_ibm1(zip(bitext.src, bitext.tgt), args.iterations, args.threshold)
        lex.save(args.out)
    else:
        _need(args, "lexicon", "function_words")
        _need_files(args.lexicon, args.function_words)
        crl = project_function_words(read_lexicon(args.lexicon), read_function_words(args.function_words))
        write_word_set(crl, args.out)
        print(f"crl_function_words\t{len(crl)}")
        return 0
    print(f"entries\t{len(lex)}")
    return 0


def cmd_dtm(args) -> int:
    _need(args, "lexicon")
    _need_files(args.lexicon, args.input, args.crl_funcs, args.function_words)
    lex = read_lexicon(args.lexicon)
    if args.crl_funcs:
        funcs = read_crl_function_words(args.crl_funcs)
    elif args.function_words:
        funcs = project_function_words(lex, read_function_words(args.function_words))
    else:
        raise ValidationError("dtm swap needs --crl-funcs or --function-words")
    lines = _read_lines(args.input) if args.input else sys.stdin.read().splitlines()
    out_lines, report = swap_corpus(lines, lex, funcs, SwapMode(args.mode))
    if args.output:
        write_lines(out_lines, args.output)
    else:
        for line in out_lines:
            sys.stdout.write(line + "\n")
    if args.report:
        Path(args.report).write_text(report.summary_tsv(), encoding="utf-8")
    else:
        sys.stderr.write(report.summary_tsv())
    if args.trace:
        Path(args.trace).write_text(report.trace_tsv(), encoding="utf-8")
    return 0


def cmd_metrics(args) -> int:
    which = args.which
    if which == "chrf":
        _need(args, "hyp", "ref")
        _need_files(args.hyp, args.ref)
        params = ChrfParams(args.max_n, args.beta)
        hyp, ref = _read_lines(args.hyp), _read_lines(args.ref)
        score = chrf(hyp[0], ref[0], params) if len(hyp) == len(ref) == 1 else corpus_chrf(hyp, ref, params)
        print(f"{score:.2f}")
    elif which == "func-share":
        _need(args, "input", "function_words")
        _need_files(args.input, args.function_words)
        share = function_word_share(_read_lines(args.input), read_function_words(args.function_words))
        print(f"{share:.4f}")
    else:
        _need(args, "original")
        if not args.lang and not args.metadata:
            raise ValidationError("noise-report needs --lang or --metadata")
        _need_files(args.original, args.noised, args.lang, args.metadata)
        res = _resources(args)
        original = _read_lines(args.original)
        if args.lang:
            _need(args, "noised")
            rep = noise_rate_report(original, _read_lines(args.noised), ArtificialLanguage.load(args.lang), res)
            sys.stdout.write(rep.to_tsv())
            return 0
        base = Path(args.metadata).parent
        with open(args.metadata, encoding="utf-8") as f:
            meta = json.load(f)
        noised = _read_lines(args.noised or base / "src.txt")
        if len(noised) != len(original):
            raise LengthMismatch(len(original), len(noised))
        first = True
        for chunk in meta["chunks"]:
            a, b = chunk["start"], chunk["end"]
            for rel in chunk.get("languages") or []:
                lang = ArtificialLanguage.load(base / rel)
                rep = noise_rate_report(original[a:b], noised[a:b], lang, res)
                sys.stdout.write(rep.to_tsv(label=str(chunk["radius"]), header=first))
                first = False
    return 0


# --------------------------------------------------------------------------
# parser


def _common(p: argparse.ArgumentParser, *groups: str) -> None:
    if "seed" in groups:
        p.add_argument("--seed", type=int, help="64-bit seed (default %d)" % DEFAULT_SEED)
        p.add_argument("--workers", type=int, help="threads for per-line work")
    if "res" in groups:
        p.add_argument("--resources", help="directory written by `resources build`")
        p.add_argument("--g2p", help="shipped G2P table id or path to a table file")
        p.add_argument("--inventory", help="phoneme feature inventory (default: bundled IPA)")
    if "bitext" in groups:
        p.add_argument("--bitext", help="src<TAB>tgt file")
        p.add_argument("--src", help="source side (with --tgt)")
        p.add_argument("--tgt", help="target side (with --src)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dialup", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="JSON config file; flags override its values")
    parser.add_argument("--log-level", default="WARNING")
    parser.add_argument("--version", action="version", version=__version__)
    top = parser.add_subparsers(dest="group", required=True)

    # resources
    g = top.add_parser("resources", help="build HRL resources").add_subparsers(dest="action", required=True)
    p = g.add_parser("build")
    p.add_argument("--conllu")
    p.add_argument("--corpus", help="monolingual HRL text, one sentence per line")
    p.add_argument("--out")
    p.add_argument("--max-suffix-len", type=int)
    p.add_argument("--min-suffix-freq", type=int)
    p.add_argument("--top-k", type=int)
    p.add_argument("--ngram-order", type=int)
    p.add_argument("--lenient", action="store_true", help="skip malformed CoNLL-U lines")
    p.set_defaults(func=cmd_resources_build)

    # lang
    g = top.add_parser("lang", help="artificial languages").add_subparsers(dest="action", required=True)
    p = g.add_parser("sample")
    _common(p, "seed", "res")
    p.add_argument("--dials", help="theta_p,theta_m,theta_f,theta_c")
    p.add_argument("--out")
    p.set_defaults(func=cmd_lang_sample)

    # noise
    p = top.add_parser("noise", help="noise HRL bitext")
    p.add_argument("mode", choices=["shell", "cloud", "randaug-shell", "randaug-cloud"])
    _common(p, "seed", "res", "bitext")
    p.add_argument("--dials", help="shell dials theta_p,theta_m,theta_f,theta_c")
    p.add_argument("--theta-max", help="cloud max radius theta_p,theta_m,theta_f,theta_c")
    p.add_argument("--k", type=int, help="number of cloud radii")
    p.add_argument("--randaug", help="theta_rc,theta_rw (max radius for randaug-cloud)")
    p.add_argument("--langs-per-radius", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_noise)

    # sweep
    p = top.add_parser("sweep", help="one-dimensional theta sweep")
    _common(p, "seed", "res", "bitext")
    p.add_argument("--dim", choices=["p", "m", "f"])
    p.add_argument("--grid", help="comma-separated theta values")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    # lexicon
    p = top.add_parser("lexicon", help="bilingual lexicon tools")
    p.add_argument("action", choices=["load", "merge", "induce", "project"])
    _common(p, "bitext")
    p.add_argument("inputs", nargs="*", help="lexicons to merge, highest priority first")
    p.add_argument("--input")
    p.add_argument("--source", help="source tag for `load`")
    p.add_argument("--iterations", type=int)
    p.add_argument("--threshold", type=float)
    p.add_argument("--lexicon")
    p.add_argument("--function-words", help="HRL function-word list")
    p.add_argument("--out")
    p.set_defaults(func=cmd_lexicon)

    # dtm
    g = top.add_parser("dtm", help="swap CRL words for HRL words").add_subparsers(dest="action", required=True)
    p = g.add_parser("swap")
    p.add_argument("--mode", required=True, choices=[m.value for m in SwapMode])
    p.add_argument("--lexicon")
    p.add_argument("--crl-funcs", help="projected CRL function-word list")
    p.add_argument("--function-words", help="HRL function-word list (projected on the fly)")
    p.add_argument("--input", help="CRL text (default stdin)")
    p.add_argument("--output", help="swapped text (default stdout)")
    p.add_argument("--report", help="summary TSV (default stderr)")
    p.add_argument("--trace", help="per-token trace TSV")
    p.set_defaults(func=cmd_dtm)

    # metrics
    p = top.add_parser("metrics", help="diagnostics")
    p.add_argument("which", choices=["chrf", "noise-report", "func-share"])
    _common(p, "res")
    p.add_argument("--hyp")
    p.add_argument("--ref")
    p.add_argument("--max-n", type=int)
    p.add_argument("--beta", type=float)
    p.add_argument("--original")
    p.add_argument("--noised")
    p.add_argument("--lang")
    p.add_argument("--metadata")
    p.add_argument("--input")
    p.add_argument("--function-words")
    p.set_defaults(func=cmd_metrics)
    return parser


def _apply_config(args: argparse.Namespace) -> None:
    config = {}
    if args.config:
        _need_files(args.config)
        with open(args.config, encoding="utf-8") as f:
            try:
                config = json.load(f)
            except json.JSONDecodeError as e:
                raise ValidationError(f"bad config {args.config}: {e}") from None
        if not isinstance(config, dict):
            raise ValidationError("config must be a JSON object")
    for key, value in vars(args).items():
        if value is None or value is False and key == "lenient":
            if key in config:
                setattr(args, key, config[key])
            elif key in DEFAULTS:
                setattr(args, key, DEFAULTS[key])
    for key in ("k", "langs_per_radius", "workers"):
        if getattr(args, key, None) is not None and int(getattr(args, key)) < 1:
            raise ValidationError(f"--{key.replace('_', '-')} must be >= 1")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(JsonFormatter())
    root = logging.getLogger("dialup")
    root.handlers[:] = [handler]
    root.setLevel(str(args.log_level).upper())
    root.propagate = False
    try:
        _apply_config(args)
        return args.func(args)
    except ValidationError as e:
        log.error(str(e), extra={"fields": {"kind": "validation"}})
        print(f"dialup: error: {e}", file=sys.stderr)
        return 2
    except (DialupError, OSError, KeyError) as e:
        log.error(str(e), extra={"fields": {"kind": type(e).__name__}})
        print(f"dialup: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
