"""``seqtag`` command-line interface."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from seqtag.corpus import (
    Corpus,
    CorpusFormatError,
    Sentence,
    SplitError,
    corpus_stats,
    oov_rate,
    read_conll,
    save_conll,
    split,
    write_conll,
)
from seqtag.crf import CrfModel, CrfTrainConfig, predict_words, rank_transitions, train_crf
from seqtag.evaluate import confusion_matrix, evaluate, render_report
from seqtag.neural import NeuralConfig, preset, train_neural
from seqtag.serialization import ModelFormatError, load_model, save_model
from seqtag.tagset import TagsetError
from seqtag.validation import TrainingError

DEFAULT_SEED = 42

# exit codes, one per failure family
EXIT_MISSING_FILE = 3
EXIT_PARSE = 4
EXIT_TAGSET = 5
EXIT_SPLIT = 6
EXIT_EMPTY = 7
EXIT_MODEL = 8
EXIT_USAGE = 2


class CliError(Exception):
    def __init__(self, message, code=1):
        super().__init__(message)
        self.code = code


def _read(path) -> Corpus:
    if path is None:
        raise CliError("--in is required for this command", EXIT_USAGE)
    if not os.path.exists(path):
        raise CliError(f"no such file: {path}", EXIT_MISSING_FILE)
    return read_conll(path)


def _write_text(path, text):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _load(path):
    if path is None:
        raise CliError("--model is required for this command", EXIT_USAGE)
    if not os.path.exists(path):
        raise CliError(f"no such file: {path}", EXIT_MISSING_FILE)
    return load_model(path)


def predict_corpus(model, corpus: Corpus) -> Corpus:
    out = []
    for sent in corpus.sentences:
        words = sent.words
        if isinstance(model, CrfModel):
            labels = predict_words(model, words)
        else:
            labels = model.predict(words)
        out.append(Sentence.from_pairs(words, labels))
    return Corpus(tuple(out), corpus.name)


def _predictions(args, gold: Corpus):
    if args.pred is not None:
        if not os.path.exists(args.pred):
            raise CliError(f"no such file: {args.pred}", EXIT_MISSING_FILE)
        return read_conll(args.pred).y
    if args.model is not None:
        return predict_corpus(_load(args.model), gold).y
    raise CliError("give --pred or --model", EXIT_USAGE)


# ---------------------------------------------------------------- commands

def cmd_stats(args):
    stats = corpus_stats(_read(args.inp))
    if args.json:
        _write_text(args.out, json.dumps(stats.as_dict(), indent=2) + "\n")
        return
    lines = [
        f"sentences\t{stats.sentence_count}",
        f"tokens\t{stats.token_count}",
        f"types\t{stats.type_count}",
        f"entity_tokens\t{stats.entity_token_count}",
        f"other_tokens\t{stats.other_token_count}",
    ]
    lines += [f"mentions:{k}\t{v}" for k, v in stats.per_kind_counts.items()]
    _write_text(args.out, "\n".join(lines) + "\n")


def cmd_split(args):
    if args.out is None:
        raise CliError("split needs --out DIR", EXIT_USAGE)
    corpus = _read(args.inp)
    train, test = split(corpus, args.test_fraction, args.seed)
    os.makedirs(args.out, exist_ok=True)
    save_conll(train, os.path.join(args.out, "train.conll"))
    save_conll(test, os.path.join(args.out, "test.conll"))
    print(f"train\t{len(train)}\ntest\t{len(test)}\noov%\t{oov_rate(train, test):.2f}")


def _log_path(args):
    return args.log if args.log is not None else args.model + ".log"


def cmd_train_crf(args):
    if args.model is None:
        raise CliError("train-crf needs --model PATH to write the model", EXIT_USAGE)
    if not args.search and (args.c1 is None or args.c2 is None):
        raise CliError("train-crf needs --c1 and --c2, or --search", EXIT_USAGE)
    corpus = _read(args.inp)
    config = CrfTrainConfig(c1=args.c1, c2=args.c2, max_iterations=args.max_iterations,
                            cv_folds=args.cv_folds, search_iterations=args.search_iterations,
                            search=args.search, seed=args.seed)
    model = train_crf(corpus, config)
    save_model(model, args.model)
    _write_text(_log_path(args), "".join(f"{i}\t{v!r}\n" for i, v in enumerate(model.history)))
    tc = model.metadata["train_config"]
    print(f"c1\t{tc['c1']!r}\nc2\t{tc['c2']!r}\niterations\t{len(model.history) - 1}")


def _neural_config(args) -> NeuralConfig:
    overrides = {k: v for k, v in {
        "word_emb_dim": args.word_emb, "char_emb_dim": args.char_emb,
        "char_hidden_dim": args.char_hidden, "word_hidden_dim": args.word_hidden,
        "epochs": args.epochs, "batch_size": args.batch_size, "learning_rate": args.lr,
        "dropout": args.dropout, "seed": args.seed,
    }.items() if v is not None}
    if args.preset:
        return preset(args.preset, **overrides)
    return NeuralConfig(**overrides)


def cmd_train_neural(args):
    if args.model is None:
        raise CliError("train-neural needs --model PATH to write the model", EXIT_USAGE)
    corpus = _read(args.inp)
    config = _neural_config(args)
    model = train_neural(corpus, config)
    save_model(model, args.model)
    _write_text(_log_path(args),
                "".join(f"{e}\t{loss!r}\t{lr!r}\n" for e, loss, lr in model.history))
    print(f"epochs\t{len(model.history)}\nfinal_loss\t{model.history[-1][1]!r}")


def cmd_predict(args):
    model = _load(args.model)
    _write_text(args.out, write_conll(predict_corpus(model, _read(args.inp))))


def cmd_eval(args):
    gold = _read(args.inp)
    report = evaluate(gold, _predictions(args, gold))
    _write_text(args.out, report.to_json() + "\n" if args.json else render_report(report))


def cmd_confmat(args):
    gold = _read(args.inp)
    cm = confusion_matrix(gold, _predictions(args, gold), filter=args.filter)
    _write_text(args.out, cm.to_csv())


def cmd_transitions(args):
    model = _load(args.model)
    if not isinstance(model, CrfModel):
        raise CliError("transitions needs a CRF model", EXIT_MODEL)
    top, bottom = rank_transitions(model, args.k)
    lines = ["rank\tfrom\tto\tweight"]
    lines += [f"top{i + 1}\t{a}\t{b}\t{w:.6f}" for i, (a, b, w) in enumerate(top)]
    lines += [f"bottom{i + 1}\t{a}\t{b}\t{w:.6f}" for i, (a, b, w) in enumerate(bottom)]
    _write_text(args.out, "\n".join(lines) + "\n")


COMMANDS = {
    "stats": cmd_stats,
    "split": cmd_split,
    "train-crf": cmd_train_crf,
    "train-neural": cmd_train_neural,
    "predict": cmd_predict,
    "eval": cmd_eval,
    "confmat": cmd_confmat,
    "transitions": cmd_transitions,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="seqtag", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--in", dest="inp", metavar="PATH")
        p.add_argument("--out", metavar="PATH")
        p.add_argument("--model", metavar="PATH")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        if name == "stats":
            p.add_argument("--json", action="store_true")
        if name == "split":
            p.add_argument("--test-fraction", type=float, default=0.2)
        if name == "train-crf":
            p.add_argument("--c1", type=float)
            p.add_argument("--c2", type=float)
            p.add_argument("--search", action="store_true")
            p.add_argument("--max-iterations", type=int, default=100)
            p.add_argument("--cv-folds", type=int, default=3)
            p.add_argument("--search-iterations", type=int, default=50)
        if name == "train-neural":
            p.add_argument("--preset", choices=["bhojpuri", "magahi", "maithili"])
            p.add_argument("--word-emb", type=int)
            p.add_argument("--char-emb", type=int)
            p.add_argument("--char-hidden", type=int)
            p.add_argument("--word-hidden", type=int)
            p.add_argument("--epochs", type=int)
            p.add_argument("--batch-size", type=int)
            p.add_argument("--lr", type=float)
            p.add_argument("--dropout", type=float)
        if name.startswith("train-"):
            p.add_argument("--log", metavar="PATH", help="training log (default: MODEL.log)")
        if name in ("eval", "confmat"):
            p.add_argument("--pred", metavar="PATH", help="predicted CoNLL file")
        if name == "eval":
            p.add_argument("--json", action="store_true")
        if name == "confmat":
            p.add_argument("--filter", action="store_true")
        if name == "transitions":
            p.add_argument("--k", type=int, default=5)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        COMMANDS[args.command](args)
    except CliError as exc:
        print(f"seqtag: error: {exc}", file=sys.stderr)
        return exc.code
    except CorpusFormatError as exc:
        print(f"seqtag: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except TagsetError as exc:
        print(f"seqtag: tagset error: {exc}", file=sys.stderr)
        return EXIT_TAGSET
    except SplitError as exc:
        print(f"seqtag: split error: {exc}", file=sys.stderr)
        return EXIT_SPLIT
    except TrainingError as exc:
        print(f"seqtag: empty corpus: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except ModelFormatError as exc:
        print(f"seqtag: model load error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except (ValueError, OSError) as exc:
        print(f"seqtag: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
