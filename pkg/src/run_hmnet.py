#!/usr/bin/env python3

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import pandas as pd

from src.config import ConfigLoader, RunConfig, TrainConfig
from src.data import (
    Featurizer, Meeting, RoleTable, build_role_table, build_tag_vocabs, build_vocab,
    convert_articles, read_articles, read_meetings, read_role_table, truncate_meeting,
    write_meetings,
)
from src.evaluation import (
    ExtractiveOracleSummarizer, build_report, copy_from_train,
    corpus_means, evaluate_system, random_baseline, score_summaries, scores_frame,
    write_report, write_table,
)
from src.exceptions import ConfigParseError, HMNetError, SchemaError
from src.logging_setup import setup_logging
from src.model import HMNetModel, HMNetSummarizer
from src.model.gradcheck_suite import TOLERANCE, run_gradcheck_suite, suite_passed
from src.training import (
    CheckpointCallback, DevSelectionCallback, RAdamState, Trainer, load_checkpoint,
    save_checkpoint,
)

COMMANDS = ("convert", "pretrain", "finetune", "summarize", "evaluate", "oracle", "gradcheck", "grid")

EXIT_OK = 0
EXIT_DATA_ERROR = 2
EXIT_RUNTIME_ERROR = 3


class _ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors as configuration errors (exit 1) instead of exiting directly."""

    def error(self, message):
        raise ConfigParseError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="hmnet", description="Hierarchical meeting summarization")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", default="config/toy.yaml", help="YAML profile")
    parser.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="KEY=VALUE", help="Override a config value (repeatable)")
    parser.add_argument("--seed", type=int, default=None, help="Seed for every random stream")
    parser.add_argument("--out", default=None, help="Primary output path")
    return parser


def parse_config(path: str, overrides: Sequence[str] = (), seed: Optional[int] = None) -> RunConfig:
    """Load a profile; command-line overrides win over file values."""
    overrides = list(overrides)
    if seed is not None:
        overrides += [f"seed={seed}", f"pretrain.seed={seed}", f"finetune.seed={seed}"]
    return ConfigLoader.load(path, overrides)


class HMNetRunner:
    """
    Executes one command against a validated configuration.

    Every command reads its inputs from ``config.paths`` and writes its
    primary output to ``out`` (or a configured default path).
    """

    def __init__(self, config: RunConfig, out: Optional[str] = None):
        self.config = config
        self.out = out
        self.logger = logging.getLogger(self.__class__.__name__)

    def dispatch(self, command: str) -> int:
        if command not in COMMANDS:
            raise ConfigParseError(f"unknown command {command!r}")
        self.logger.info(f"Running {command} with profile {self.config.profile}")
        return getattr(self, f"run_{command}")()

    def _out(self, default: Optional[str], what: str) -> Path:
        path = self.out or default
        if not path:
            raise ConfigParseError(f"no output path for {what}; pass --out")
        return Path(path)

    # Data

    def run_convert(self) -> int:
        ConfigLoader.validate_paths(self.config, ["articles"])
        articles = read_articles(self.config.paths.articles)
        meetings = convert_articles(articles, self.config.data.articles_per_meeting, self.config.seed)
        out = self._out(self.config.paths.pretrain_data, "converted meetings")
        write_meetings(meetings, out)
        self.logger.info(f"Converted {len(articles)} articles into {len(meetings)} pseudo meetings at {out}")
        return EXIT_OK

    def build_featurizer(self, corpus: Sequence[Meeting]) -> Featurizer:
        pos_vocab, ent_vocab = build_tag_vocabs(corpus)
        roles = build_role_table(corpus)
        if self.config.paths.role_table:
            # Table roles keep their ids; corpus-only roles (e.g. news speakers) follow.
            table = read_role_table(self.config.paths.role_table)
            roles = RoleTable(table.roles + [r for r in roles.roles if r not in table])
        vocab = build_vocab(corpus, self.config.data.min_freq, self.config.data.max_vocab_size)
        self.logger.info(
            f"Vocabulary {len(vocab)} tokens, {len(roles)} roles, "
            f"{len(pos_vocab)} POS tags, {len(ent_vocab)} entity tags"
        )
        return Featurizer(vocab, pos_vocab, ent_vocab, roles)

    def _truncated(self, meetings: Sequence[Meeting], model: HMNetModel) -> List[Meeting]:
        return [truncate_meeting(m, model.config) for m in meetings]

    def _read_optional(self, key: str) -> List[Meeting]:
        path = getattr(self.config.paths, key)
        if not path:
            return []
        ConfigLoader.validate_paths(self.config, [key])
        return read_meetings(path)

    # Training

    def _train(self, stage: str, model: HMNetModel, corpus: Sequence[Meeting],
               train_config: TrainConfig) -> int:
        paths = self.config.paths
        checkpoint_dir = Path(paths.checkpoint_dir)
        features = [model.featurizer.featurize(m) for m in self._truncated(corpus, model)]

        callbacks = [CheckpointCallback(str(checkpoint_dir), stage)]
        dev = self._read_optional("dev_data")
        selector = None
        if dev:
            selector = DevSelectionCallback(dev, self.config.decode, str(checkpoint_dir / f"{stage}-best.ckpt"))
            callbacks.append(selector)

        trainer = Trainer(
            model,
            train_config,
            state=RAdamState.from_config(train_config),
            callbacks=callbacks,
            log_path=paths.train_log,
        )
        trainer.train(features)
        out = self._out(str(checkpoint_dir / f"{stage}.ckpt"), f"{stage} checkpoint")
        if selector is not None and selector.best_step is not None:
            self.logger.info(
                f"Best dev ROUGE-1 {selector.best_score:.4f} at step {selector.best_step}; "
                f"writing it to {out}"
            )
            best = load_checkpoint(selector.path)
            save_checkpoint(best.model, best.state, best.train_config, out)
        else:
            save_checkpoint(trainer.model, trainer.state, train_config, out)
        return EXIT_OK

    def run_pretrain(self) -> int:
        ConfigLoader.validate_paths(self.config, ["pretrain_data"])
        corpus = read_meetings(self.config.paths.pretrain_data)
        # Meetings seen later in finetuning share the vocabulary built here.
        vocab_corpus = list(corpus) + self._read_optional("train_data")
        model = HMNetModel.create(self.config.model, self.build_featurizer(vocab_corpus), self.config.seed)
        return self._train("pretrain", model, corpus, self.config.pretrain)

    def run_finetune(self) -> int:
        ConfigLoader.validate_paths(self.config, ["train_data"])
        corpus = read_meetings(self.config.paths.train_data)
        if self.config.paths.pretrained_checkpoint:
            ConfigLoader.validate_paths(self.config, ["pretrained_checkpoint"])
            model = load_checkpoint(self.config.paths.pretrained_checkpoint).model
            self.logger.info(f"Finetuning from {self.config.paths.pretrained_checkpoint}")
        else:
            model = HMNetModel.create(self.config.model, self.build_featurizer(corpus), self.config.seed)
        return self._train("finetune", model, corpus, self.config.finetune)

    # Decoding and evaluation

    def _summarizer(self) -> HMNetSummarizer:
        ConfigLoader.validate_paths(self.config, ["model_checkpoint"])
        model = load_checkpoint(self.config.paths.model_checkpoint).model
        return HMNetSummarizer(model, self.config.decode)

    def _test_meetings(self) -> List[Meeting]:
        ConfigLoader.validate_paths(self.config, ["test_data"])
        return read_meetings(self.config.paths.test_data)

    def run_summarize(self) -> int:
        summarizer = self._summarizer()
        meetings = self._test_meetings()
        out = self._out(self.config.paths.summaries, "summaries")
        out.parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w", encoding="utf-8") as f:
            for meeting in meetings:
                summary = summarizer.summarize(meeting)
                f.write(json.dumps({"id": meeting.id, "summary": summary}) + "\n")
        self.logger.info(f"Wrote {len(meetings)} summaries to {out}")
        return EXIT_OK

    def run_evaluate(self) -> int:
        meetings = self._test_meetings()
        summaries_path = self.config.paths.summaries
        if summaries_path and Path(summaries_path).exists():
            summaries = read_summaries(summaries_path)
            documents = score_summaries(summaries, meetings)
            name = "HMNet"
        else:
            summarizer = self._summarizer()
            documents = evaluate_system(summarizer, meetings)
            name = summarizer.get_name()
        report = build_report(name, documents)
        write_report(report, self._out("report.json", "evaluation report"))
        self._log_means(name, report["corpus"])
        return EXIT_OK

    def run_oracle(self) -> int:
        meetings = self._test_meetings()
        ev = self.config.eval
        oracle = ExtractiveOracleSummarizer(ev.oracle_k)
        documents = evaluate_system(oracle, meetings)

        baselines: Dict[str, Dict] = {
            "random": _scores_to_dict(random_baseline(
                [(m.sentences(), m.summary) for m in meetings], ev.oracle_k, ev.random_trials, self.config.seed,
            )),
        }
        train = self._read_optional("train_data")
        if train:
            baselines["copy_from_train"] = _scores_to_dict(copy_from_train(
                [m.summary for m in train], [(m.id, m.summary) for m in meetings],
                ev.copy_trials, self.config.seed,
            ))
        else:
            self.logger.warning("paths.train_data not set; skipping Copy-from-Train")

        report = build_report(oracle.get_name(), documents, baselines)
        out = self._out("oracle_report.json", "oracle report")
        write_report(report, out)
        with open(out.with_suffix(".summaries.jsonl"), "w", encoding="utf-8") as f:
            for meeting in meetings:
                f.write(json.dumps({"id": meeting.id, "summary": oracle.summarize(meeting)}) + "\n")
        self._log_means(oracle.get_name(), report["corpus"])
        return EXIT_OK

    def run_gradcheck(self) -> int:
        results = run_gradcheck_suite(self.config.seed)
        if self.out:
            write_table(pd.DataFrame(
                [{"case": name, "max_relative_error": error} for name, error in results.items()]
            ), self.out)
        if suite_passed(results):
            self.logger.info(f"All {len(results)} gradient checks passed")
            return EXIT_OK
        failed = [name for name, error in results.items() if not error < TOLERANCE]
        self.logger.error(f"Gradient checks failed: {', '.join(failed)}")
        return EXIT_RUNTIME_ERROR

    def run_grid(self) -> int:
        """
        Two-stage decoding search: min_len at a fixed beam, then beam size at
        the chosen min_len, each scored by dev ROUGE-1 F1.
        """
        summarizer = self._summarizer()
        ConfigLoader.validate_paths(self.config, ["dev_data"])
        dev = read_meetings(self.config.paths.dev_data)
        test = self._read_optional("test_data")
        ev = self.config.eval

        rows = []
        for min_len in ev.grid_min_lens:
            rows.append(self._grid_row(summarizer, "min_len", min_len, ev.grid_stage1_beam, dev, test))
        best_min_len = max(rows, key=lambda r: r["dev_rouge1"])["min_len"]

        stage2 = []
        for beam_size in ev.grid_beam_sizes:
            stage2.append(self._grid_row(summarizer, "beam_size", best_min_len, beam_size, dev, test))
        best = max(stage2, key=lambda r: r["dev_rouge1"])
        rows.extend(stage2)
        rows.append({**best, "stage": "selected"})

        table = pd.DataFrame(rows)
        write_table(table, self._out("grid.csv", "grid table"))
        self.logger.info(f"Selected min_len={best['min_len']} beam_size={best['beam_size']}\n{table.to_string(index=False)}")
        return EXIT_OK

    def _grid_row(self, summarizer: HMNetSummarizer, stage: str, min_len: int, beam_size: int,
                  dev: Sequence[Meeting], test: Sequence[Meeting]) -> Dict:
        decoder = summarizer.with_decoding(
            min_len=min_len,
            beam_size=beam_size,
            max_len=max(self.config.decode.max_len, min_len + 1),
        )
        row = {
            "stage": stage,
            "min_len": min_len,
            "beam_size": beam_size,
            "dev_rouge1": corpus_means(scores_frame(evaluate_system(decoder, dev)))["rouge-1_f"],
        }
        if test:
            row["test_rouge1"] = corpus_means(scores_frame(evaluate_system(decoder, test)))["rouge-1_f"]
        self.logger.info(f"grid {stage}: min_len={min_len} beam={beam_size} dev R-1={row['dev_rouge1']:.4f}")
        return row

    def _log_means(self, name: str, means: Dict) -> None:
        parts = [f"{key}={means[key]:.4f}" for key in ("rouge-1_f", "rouge-2_f", "rouge-su4_f") if key in means]
        self.logger.info(f"{name}: {' '.join(parts)}")


def _scores_to_dict(scores) -> Dict[str, Dict[str, float]]:
    return {metric: score.as_dict() for metric, score in scores.items()}


def read_summaries(path: str) -> Dict[str, List[str]]:
    """Summaries written by ``summarize``: one JSON object with id and summary per line."""
    summaries = {}
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            if line.strip():
                try:
                    record = json.loads(line)
                    summaries[record["id"]] = list(record["summary"])
                except (ValueError, KeyError, TypeError) as e:
                    raise SchemaError(f"{path}: bad summary record: {e}") from e
    return summaries


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        config = parse_config(args.config, args.overrides, args.seed)
        logger = setup_logging(config.logging)
        logger.info(f"Effective configuration:\n{ConfigLoader.dump(config)}")
        return HMNetRunner(config, args.out).dispatch(args.command)
    except HMNetError as e:
        logging.error(f"{e.__class__.__name__}: {e}")
        return e.exit_code
    except OSError as e:
        logging.error(f"I/O error: {e}")
        return EXIT_DATA_ERROR
    except Exception as e:
        logging.exception(f"Fatal error: {e}")
        return EXIT_RUNTIME_ERROR
    finally:
        logging.shutdown()


if __name__ == "__main__":
    sys.exit(main())
