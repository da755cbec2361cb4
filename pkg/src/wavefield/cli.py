"""Command-line surface: store lifecycle, associative traces, generation,
and the eval/bench suites.

All commands print a JSON report on stdout and a short human summary on
stderr. Exit codes: 0 success, 1 usage error, 2 data or store error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .errors import WaveFieldError
from .evalbench import run_capacity_eval, run_latency_bench, run_negation_eval
from .generator import FactKB, generate
from .hrr import unitary_cue
from .mapper import Lexicon, apply_morph, default_rules, encode_base, map_text, parse
from .pattern import Kernel, WavePattern, normalize, superpose
from .store import SlotStore, SuperTrace


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(obj, summary: str) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")
    sys.stderr.write(summary + "\n")


def _load_probe(args, lexicon_seed) -> tuple[WavePattern, str]:
    if args.text is not None:
        lexicon = Lexicon(args._dim, seed=lexicon_seed)
        return map_text(args.text, lexicon, default_rules()), args.text
    data = json.loads(Path(args.pattern_file).read_text(encoding="utf-8"))
    pattern = WavePattern(np.array(data["amplitude"], dtype=np.float64),
                          np.array(data["phase"], dtype=np.float64))
    return pattern, str(args.pattern_file)


def _build_parser() -> _Parser:
    parser = _Parser(prog="wavefield",
                     description="Phase-coded memory engine CLI")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="ingest a JSONL fact file into a store")
    p.add_argument("--facts", required=True)
    p.add_argument("--store", required=True)
    p.add_argument("--dim", type=int, default=256)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("put", help="store one pattern under an id")
    p.add_argument("--store", required=True)
    p.add_argument("--id", type=int, required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--text")
    src.add_argument("--pattern-file")
    p.add_argument("--seed", type=int, default=None,
                   help="lexicon seed for --text (default: store seed)")

    p = sub.add_parser("query", help="exact top-k scan of a store")
    p.add_argument("--store", required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--text")
    src.add_argument("--pattern-file")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--kernel", choices=["coherence", "energy"], default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("delete", help="tombstone a record")
    p.add_argument("--store", required=True)
    p.add_argument("--id", type=int, required=True)

    p = sub.add_parser("compact", help="rewrite segments without tombstones")
    p.add_argument("--store", required=True)

    p = sub.add_parser("assoc-store", help="add key/value pairs to a trace")
    p.add_argument("--trace", required=True)
    p.add_argument("--pairs", required=True,
                   help='JSONL of {"key","value","label"} text pairs')
    p.add_argument("--dim", type=int, default=1024)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("assoc-recall", help="recall from a trace by key text")
    p.add_argument("--trace", required=True)
    p.add_argument("--key", required=True)
    p.add_argument("--k", type=int, default=1)

    p = sub.add_parser("generate", help="answer a query from a fact KB")
    p.add_argument("--kb", required=True,
                   help="facts JSONL file or a directory built by `build`")
    p.add_argument("--query", required=True)
    p.add_argument("--max-steps", type=int, default=8)
    p.add_argument("--dim", type=int, default=1024)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("eval", help="evaluation suites")
    esub = p.add_subparsers(dest="suite", required=True)
    e = esub.add_parser("negation", help="negation retrieval precision")
    e.add_argument("--dim", type=int, default=256)
    e.add_argument("--n", type=int, default=100)
    e.add_argument("--distractors", type=int, default=0)
    e.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("bench", help="benchmarks")
    bsub = p.add_subparsers(dest="bench_kind", required=True)
    b = bsub.add_parser("latency", help="scan latency and throughput")
    b.add_argument("--dim", type=int, default=256)
    b.add_argument("--n", type=int, default=10000)
    b.add_argument("--queries", type=int, default=50)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--k", type=int, default=10)
    b.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("capacity", help="superposition capacity sweep")
    p.add_argument("--dim", type=int, default=1024)
    p.add_argument("--counts", default="10,50,100",
                   help="comma-separated item counts")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--candidates", type=int, default=100)

    return parser


def _cmd_build(args) -> None:
    lexicon = Lexicon(args.dim, seed=args.seed)
    kb = FactKB.from_jsonl(args.facts, lexicon)
    kb.save(args.store)
    _emit(
        {"store": str(args.store), "facts": len(kb), "dim": args.dim,
         "seed": args.seed},
        f"built {len(kb)} facts into {args.store}",
    )


def _cmd_put(args) -> None:
    with SlotStore.open(args.store) as store:
        args._dim = store.dim
        seed = args.seed if args.seed is not None else (store.seed or 0)
        pattern, source = _load_probe(args, seed)
        store.put(args.id, pattern)
        store.flush()
        _emit(
            {"store": str(args.store), "id": args.id, "count": store.count,
             "live": store.live_count},
            f"put id {args.id} from {source}",
        )


def _cmd_query(args) -> None:
    with SlotStore.open(args.store) as store:
        args._dim = store.dim
        seed = args.seed if args.seed is not None else (store.seed or 0)
        probe, source = _load_probe(args, seed)
        kernel = Kernel(args.kernel) if args.kernel else None
        results = store.query_topk(probe, k=args.k, kernel=kernel,
                                   workers=args.workers)
        payload = [
            {"id": r.id, "score": r.score.value, "rank": r.rank}
            for r in results
        ]
        _emit(payload,
              f"{len(results)} results from {store.live_count} live records "
              f"for {source!r}")


def _cmd_delete(args) -> None:
    with SlotStore.open(args.store) as store:
        try:
            store.delete(args.id)
        except KeyError as exc:
            raise WaveFieldError(str(exc)) from exc
        store.flush()
        _emit({"store": str(args.store), "deleted": args.id,
               "live": store.live_count},
              f"tombstoned id {args.id}")


def _cmd_compact(args) -> None:
    with SlotStore.open(args.store) as store:
        removed = store.compact()
        _emit({"store": str(args.store), "removed": removed,
               "live": store.live_count},
              f"compacted away {removed} dead records")


def _trace_path(raw: str) -> Path:
    # np.savez appends .npz itself; normalize so save and load agree.
    path = Path(raw)
    return path if path.suffix == ".npz" else path.with_suffix(path.suffix + ".npz")


def _key_cue(text: str, lexicon: Lexicon, rules) -> WavePattern:
    """Binding cue for key text: an un-rotated real word bag, whitened onto
    the unitary class so correlation unbinding stays well conditioned."""
    acc = None
    for unit in parse(text, rules):
        p = encode_base(lexicon.vector(unit.root))
        for affix in unit.affixes:
            p = apply_morph(p, rules.by_id(affix))
        acc = p if acc is None else superpose(acc, p)
    return unitary_cue(normalize(acc))


def _cmd_assoc_store(args) -> None:
    path = _trace_path(args.trace)
    if path.exists():
        trace = SuperTrace.load(path)
        with np.load(path) as data:
            seed = int(data["seed"]) if "seed" in data else args.seed
    else:
        trace = SuperTrace(args.dim)
        seed = args.seed
    lexicon = Lexicon(trace.dim, seed=seed)
    rules = default_rules()
    added = 0
    for lineno, raw in enumerate(Path(args.pairs).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        obj = json.loads(line)
        try:
            key, value, label = obj["key"], obj["value"], obj["label"]
        except KeyError as exc:
            raise WaveFieldError(
                f"{args.pairs}:{lineno}: missing field {exc}"
            ) from None
        trace.store_assoc(_key_cue(key, lexicon, rules),
                          map_text(value, lexicon, rules), label)
        added += 1
    trace.save(path, extra={"seed": seed})
    _emit({"trace": str(path), "added": added, "pairs": trace.pair_count,
           "dim": trace.dim},
          f"stored {added} pairs ({trace.pair_count} total)")


def _cmd_assoc_recall(args) -> None:
    path = _trace_path(args.trace)
    trace = SuperTrace.load(path)
    with np.load(path) as data:
        seed = int(data["seed"]) if "seed" in data else 0
    lexicon = Lexicon(trace.dim, seed=seed)
    key = _key_cue(args.key, lexicon, default_rules())
    result = trace.recall_assoc(key, k=args.k)
    payload = {
        "matches": [{"label": label, "score": score.value}
                    for label, score in result.matches],
        "below_threshold": result.below_threshold,
    }
    top = result.matches[0]
    _emit(payload, f"top match {top[0]!r} at {top[1].value:.3f}"
          + (" (below threshold)" if result.below_threshold else ""))


def _cmd_generate(args) -> None:
    kb_path = Path(args.kb)
    if kb_path.is_dir():
        kb = FactKB.load(kb_path)
    else:
        lexicon = Lexicon(args.dim, seed=args.seed)
        kb = FactKB.from_jsonl(kb_path, lexicon)
    result = generate(args.query, kb, max_steps=args.max_steps)
    payload = {
        "tokens": result.tokens,
        "history": [
            {"step": h.step, "label": h.label, "score": h.score,
             "below_threshold": h.below_threshold}
            for h in result.history
        ],
        "config": {"kb": str(args.kb), "query": args.query,
                   "max_steps": args.max_steps, "dim": kb.dim,
                   "seed": kb.lexicon.seed},
    }
    _emit(payload, f"answer: {' '.join(result.tokens) or '(no resonant fact)'}")


def _cmd_eval(args) -> None:
    report = run_negation_eval(args.dim, args.n, args.distractors, args.seed)
    _emit(report.to_dict(),
          f"negation precision@1: resonance "
          f"{report.metrics['precision_at_1_resonance']:.3f}, amplitude "
          f"baseline {report.metrics['precision_at_1_amplitude_cosine']:.3f}")


def _cmd_bench(args) -> None:
    report = run_latency_bench(args.dim, args.n, args.queries, args.seed,
                               k=args.k, workers=args.workers)
    _emit(report.to_dict(),
          f"{report.metrics['comparisons_per_sec']:.3g} comparisons/sec, "
          f"p99 {report.metrics['p99_query_micros']:.0f} us")


def _cmd_capacity(args) -> None:
    try:
        counts = [int(c) for c in args.counts.split(",") if c.strip()]
    except ValueError:
        raise UsageError(f"--counts must be comma-separated integers, "
                         f"got {args.counts!r}") from None
    report = run_capacity_eval(args.dim, counts, args.trials, args.seed,
                               candidates=args.candidates)
    summary = ", ".join(f"n={row['n_items']}: {row['recall_accuracy']:.3f}"
                        for row in report.details["rows"])
    _emit(report.to_dict(), f"recall accuracy {summary}")


_COMMANDS = {
    "build": _cmd_build,
    "put": _cmd_put,
    "query": _cmd_query,
    "delete": _cmd_delete,
    "compact": _cmd_compact,
    "assoc-store": _cmd_assoc_store,
    "assoc-recall": _cmd_assoc_recall,
    "generate": _cmd_generate,
    "eval": _cmd_eval,
    "bench": _cmd_bench,
    "capacity": _cmd_capacity,
}


def cli_main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        _COMMANDS[args.command](args)
        return 0
    except SystemExit as exc:  # --help and friends
        return 0 if exc.code in (0, None) else int(exc.code)
    except json.JSONDecodeError as exc:
        sys.stderr.write(f"error: invalid JSON: {exc}\n")
        return 2
    except (UsageError, ValueError) as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 1
    except (WaveFieldError, OSError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
