"""Command-line entry point orchestrating the event-to-sentence pipeline:
eventify -> train -> build-index -> tune -> realize -> fill -> evaluate."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .decoders import MCBeamConfig, mc_beam_decode
from .ensemble import (
    EnsembleConfig,
    THRESHOLDED,
    CascadeDecision,
    render_utilization,
    tune_thresholds,
    utilization,
)
from .eventify import eventify_corpus, story_from_dict
from .jsonl import make_header, read_jsonl, write_jsonl
from .lexicon import load_gender_csv, load_lexicon
from .metrics import MetricReport, corpus_perplexity, evaluate_corpus, render_report
from .ngram import NGramModel, train as train_model
from .retedit import RetrievalIndex, build_index
from .realize import RealizerSuite, fill_decisions, realize_events
from .slotfill import EntityPool
from .templater import TemplateConfig
from .types import EventTuple


class UserError(Exception):
    pass


def _need(path: str, produced_by: str) -> Path:
    p = Path(path)
    if not p.exists():
        raise UserError(f"missing {p}; produce it with `eventsent {produced_by}`")
    return p


def _load_pairs(path: str | Path):
    _, records = read_jsonl(path)
    return [
        (EventTuple.from_list(r["event"]), list(r["sentence"])) for r in records
    ]


def _load_events(path: str | Path) -> list[EventTuple]:
    _, records = read_jsonl(path)
    return [EventTuple.from_list(r["event"]) for r in records]


# --- subcommand implementations ---------------------------------------------


def cmd_eventify(args) -> int:
    lexicon = load_lexicon(_need(args.lexicon, "eventify --lexicon"))
    _, raw = read_jsonl(_need(args.corpus, "preprocess"))
    stories = [story_from_dict(r) for r in raw]
    per_story, split = eventify_corpus(stories, lexicon, seed=args.seed)
    params = {"lexicon": str(args.lexicon), "corpus": str(args.corpus), "seed": args.seed}
    for name, subset in (
        ("train", split.train),
        ("valid", split.validation),
        ("test", split.test),
    ):
        records = [
            {
                "story_id": story.id,
                "index": i,
                "event": event.to_list(),
                "sentence": sentence,
            }
            for story in subset
            for i, (event, sentence) in enumerate(per_story[story.id])
        ]
        write_jsonl(
            f"{args.out_prefix}.{name}.jsonl",
            records,
            make_header("eventify", {**params, "split": name}, seed=args.seed),
        )
        print(f"{name}: {len(subset)} stories, {len(records)} events")
    return 0


def cmd_train(args) -> int:
    pairs = _load_pairs(_need(args.events, "eventify"))
    model = train_model(
        pairs, order=args.order, copy_bias=args.copy_bias, direction=args.direction
    )
    model.save(args.out)
    print(f"trained {args.direction} {args.order}-gram model, |V|={len(model.vocab)}")
    return 0


def cmd_build_index(args) -> int:
    pairs = _load_pairs(_need(args.events, "eventify"))
    index = build_index(pairs, dim=args.dim, seed=args.seed)
    index.save(args.out)
    print(f"indexed {len(index)} pairs (dim {index.dim})")
    return 0


def _load_suite(args) -> RealizerSuite:
    lexicon = load_lexicon(_need(args.lexicon, "eventify --lexicon"))
    frame_map = None
    if getattr(args, "frame_map", None):
        with open(args.frame_map, encoding="utf-8") as fh:
            frame_map = json.load(fh)
    return RealizerSuite(
        forward_model=NGramModel.load(_need(args.model, "train")),
        backward_model=NGramModel.load(_need(args.backward_model, "train --direction backward")),
        index=RetrievalIndex.load(_need(args.index, "build-index")),
        lexicon=lexicon,
        frame_map=frame_map,
        mc_config=MCBeamConfig(
            beam_width=args.width,
            playouts_per_node=args.playouts,
            alpha=args.alpha,
            max_length=args.max_length,
            rng_seed=args.seed,
        ),
        template_config=TemplateConfig(top_k=args.top_k, rng_seed=args.seed),
        beam_width=args.width,
        max_length=args.max_length,
        fsm_horizon=args.horizon,
    )


def cmd_tune(args) -> int:
    pairs = _load_pairs(_need(args.events, "eventify"))
    suite = _load_suite(args)
    with open(_need(args.grid_file, "tune --grid-file"), encoding="utf-8") as fh:
        grid = json.load(fh)
    thresholds = tune_thresholds(pairs, suite.members(), grid)
    doc = {"thresholds": thresholds, "header": make_header("tune", vars_for_hash(args))}
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2)
    print(json.dumps(thresholds, sort_keys=True))
    return 0


def vars_for_hash(args) -> dict:
    return {k: str(v) for k, v in vars(args).items() if k != "func"}


def cmd_realize(args) -> int:
    events = _load_events(_need(args.events, "eventify"))
    suite = _load_suite(args)
    trace: list[dict] | None = [] if args.trace else None
    decisions: list[CascadeDecision]
    if args.decoder == "ensemble":
        thresholds = {m: 0.5 for m in THRESHOLDED}
        if args.thresholds:
            with open(args.thresholds, encoding="utf-8") as fh:
                thresholds = json.load(fh)["thresholds"]
        decisions = realize_events(events, suite, EnsembleConfig(thresholds))
    else:
        decisions = []
        members = suite.members()
        name = {"beam": "beam", "mc": "mc_beam", "fsm": "fsm",
                "template": "templates", "retedit": "retedit"}[args.decoder]
        for event in events:
            if name == "mc_beam" and trace is not None:
                sentence, conf = mc_beam_decode(
                    suite.forward_model, event, suite.mc_config, trace=trace
                )
            else:
                sentence, conf = members[name](event)
            if sentence is None:  # FSM Failure: fall back to beam
                sentence, conf = members["beam"](event)
                name_used = "beam"
            else:
                name_used = name
            decisions.append(CascadeDecision(event, sentence, name_used, conf, [name]))
    header = make_header("realize", vars_for_hash(args), seed=args.seed)
    write_jsonl(
        args.out,
        [
            {
                "event": d.event.to_list(),
                "sentence": d.sentence,
                "member_used": d.member_used,
                "confidence": round(d.confidence, 12),
                "invoked": d.invoked,
            }
            for d in decisions
        ],
        header,
    )
    if trace is not None:
        write_jsonl(args.trace, trace, header)
    print(f"realized {len(decisions)} events -> {args.out}")
    return 0


def cmd_fill(args) -> int:
    _, records = read_jsonl(_need(args.input, "realize"))
    lexicon = load_lexicon(_need(args.lexicon, "eventify --lexicon"))
    if args.gender_csv:
        lexicon = type(lexicon)(
            lexicon.hypernyms,
            lexicon.hyponyms,
            lexicon.lemma_index,
            lexicon.verb_index,
            lexicon.frame_table,
            load_gender_csv(args.gender_csv),
        )
    pool = EntityPool.load(_need(args.pool, "fill --pool"))
    decisions = [
        CascadeDecision(
            EventTuple.from_list(r["event"]), list(r["sentence"]),
            r.get("member_used", "beam"), r.get("confidence", 0.0),
        )
        for r in records
    ]
    filled = fill_decisions(decisions, pool, lexicon, seed=args.seed)
    write_jsonl(
        args.out,
        [
            {"event": d.event.to_list(), "generalized": d.sentence, "filled": text}
            for d, text in zip(decisions, filled)
        ],
        make_header("fill", vars_for_hash(args), seed=args.seed),
    )
    for text in filled:
        print(text)
    return 0


def cmd_evaluate(args) -> int:
    _, pred = read_jsonl(_need(args.pred, "realize"))
    _, gold = read_jsonl(_need(args.gold, "eventify"))
    pred_sents = [list(r["sentence"]) for r in pred]
    gold_sents = [list(r["sentence"]) for r in gold]
    if len(pred_sents) != len(gold_sents):
        raise UserError("pred and gold files differ in length")
    report = evaluate_corpus(pred_sents, gold_sents)
    gold_ppl = corpus_perplexity([t for s in gold_sents for t in s])
    rows = {
        "predicted": report,
        "gold": MetricReport(gold_ppl, 1.0, 100.0 if all(len(s) >= 4 for s in gold_sents) else 0.0,
                             sum(map(len, gold_sents)) / len(gold_sents)),
    }
    print(render_report(rows))
    return 0


def cmd_report_utilization(args) -> int:
    _, records = read_jsonl(_need(args.log, "realize"))
    decisions = [
        CascadeDecision(
            EventTuple.from_list(r["event"]), list(r["sentence"]),
            r["member_used"], r.get("confidence", 0.0),
        )
        for r in records
    ]
    print(render_utilization([utilization(decisions, source=args.source)]))
    return 0


def cmd_pipeline(args) -> int:
    with open(_need(args.config, "pipeline --config"), encoding="utf-8") as fh:
        cfg = json.load(fh)

    class A:  # argparse-shaped view over the config file
        pass

    a = A()
    for key, default in (
        ("lexicon", None), ("model", None), ("backward_model", None),
        ("index", None), ("frame_map", None), ("width", 5), ("alpha", 0.5),
        ("playouts", 3), ("max_length", 12), ("horizon", 25), ("top_k", 3),
        ("seed", 0),
    ):
        setattr(a, key, cfg.get(key, default))
    suite = _load_suite(a)
    events = _load_events(_need(cfg["events_in"], "eventify"))
    thresholds = cfg.get("thresholds", {m: 0.5 for m in THRESHOLDED})
    decisions = realize_events(events, suite, EnsembleConfig(dict(thresholds)))
    pool = EntityPool.load(_need(cfg["pool"], "fill --pool"))
    filled = fill_decisions(decisions, pool, suite.lexicon, seed=cfg.get("seed", 0))
    out_dir = Path(cfg.get("out_dir", "."))
    out_dir.mkdir(parents=True, exist_ok=True)
    header = make_header("pipeline", {"config": cfg}, seed=cfg.get("seed", 0))
    write_jsonl(
        out_dir / "realized.jsonl",
        [
            {
                "event": d.event.to_list(),
                "sentence": d.sentence,
                "member_used": d.member_used,
                "confidence": round(d.confidence, 12),
                "filled": text,
            }
            for d, text in zip(decisions, filled)
        ],
        header,
    )
    with open(out_dir / "story.txt", "w", encoding="utf-8") as fh:
        fh.write("\n".join(filled) + "\n")
    print(render_utilization([utilization(decisions, source="pipeline")]))
    print(f"wrote {out_dir / 'realized.jsonl'} and {out_dir / 'story.txt'}")
    return 0


# --- parser -------------------------------------------------------------------


def _add_suite_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", required=True)
    p.add_argument("--backward-model", dest="backward_model", required=True)
    p.add_argument("--index", required=True)
    p.add_argument("--lexicon", required=True)
    p.add_argument("--frame-map", dest="frame_map")
    p.add_argument("--width", type=int, default=5)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--playouts", type=int, default=3)
    p.add_argument("--max-length", dest="max_length", type=int, default=12)
    p.add_argument("--horizon", type=int, default=25)
    p.add_argument("--top-k", dest="top_k", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eventsent")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eventify", help="corpus -> event/sentence pairs + splits")
    p.add_argument("--lexicon", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--out-prefix", dest="out_prefix", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_eventify)

    p = sub.add_parser("train", help="train an n-gram realization model")
    p.add_argument("--events", required=True)
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--copy-bias", dest="copy_bias", type=float, default=0.3)
    p.add_argument("--direction", choices=["forward", "backward"], default="forward")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("build-index", help="build the retrieve-and-edit index")
    p.add_argument("--events", required=True)
    p.add_argument("--dim", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build_index)

    p = sub.add_parser("tune", help="grid-search ensemble thresholds")
    p.add_argument("--events", required=True)
    p.add_argument("--grid-file", dest="grid_file", required=True)
    p.add_argument("--out", required=True)
    _add_suite_args(p)
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("realize", help="events -> generalized sentences")
    p.add_argument("--events", required=True)
    p.add_argument(
        "--decoder",
        choices=["beam", "mc", "fsm", "template", "retedit", "ensemble"],
        default="ensemble",
    )
    p.add_argument("--thresholds")
    p.add_argument("--trace")
    p.add_argument("--out", required=True)
    _add_suite_args(p)
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("fill", help="slot-fill generalized sentences")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--pool", required=True)
    p.add_argument("--lexicon", required=True)
    p.add_argument("--gender-csv", dest="gender_csv")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fill)

    p = sub.add_parser("evaluate", help="score predictions against gold")
    p.add_argument("--pred", required=True)
    p.add_argument("--gold", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("report-utilization", help="member usage table from a run log")
    p.add_argument("--log", required=True)
    p.add_argument("--source", default="test")
    p.set_defaults(func=cmd_report_utilization)

    p = sub.add_parser("pipeline", help="realize + fill an event file end to end")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_pipeline)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UserError as exc:
        print(json.dumps({"error": "user", "message": str(exc)}), file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(
            json.dumps({"error": "internal", "type": type(exc).__name__, "message": str(exc)}),
            file=sys.stderr,
        )
        return 2


if __name__ == "__main__":
    sys.exit(main())
