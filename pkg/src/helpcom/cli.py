"""Command-line pipeline: extract, graph, history, filter, sample,
generate, score, report, and import-comments.

Commands communicate only through the run directory's record files, so
each stage is independently re-runnable and auditable. Extraction writes
the full method universe once; the filter and sample stages narrow the
evaluation set by flipping each record's ``selected`` flag rather than
deleting records, so helper bodies stay available to prompt rendering.

Exit codes: 0 success, 1 usage error, 2 data error, 3 provider error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .config import PipelineConfig, config_digest, discover_source_files, load_config
from .errors import ConfigError, ExtractionError, HelpcomError, HistoryError, ProviderError, StoreError
from .extraction import decode_source, extract_file
from .graph import (
    DEPENDENT,
    FULL,
    IMMEDIATE,
    HelperChain,
    build_index,
    classify,
    dependency_stats,
    group_by_caller,
    helper_closure,
    resolve_invocation,
)
from .history import commit_share, engagement_summary, method_history
from .metrics import (
    bleu4_smoothed,
    build_scorecard,
    cider,
    embedding_cosine,
    llm_judge,
    meteor,
    oms_ss,
    oms_ssl,
    rouge_l,
    side_score,
    tokenize,
)
from .prompts import (
    BASELINE,
    DEFAULT_TEMPLATE,
    HELPCOM1,
    HELPCOMN,
    JUDGE_RUBRIC,
    GeneratedComment,
    generate_comment,
    render_prompt,
)
from .providers import (
    EmbeddingAlignmentProvider,
    HashEmbeddingProvider,
    HttpAlignmentProvider,
    HttpCompletionProvider,
    HttpEmbeddingProvider,
    MockCompletionProvider,
    prompt_digest,
)
from .stats import significance_matrix
from .store import (
    KIND_CHAIN,
    KIND_GENERATED_COMMENT,
    KIND_HISTORY,
    KIND_INVOCATION,
    KIND_METHOD,
    KIND_RESOLUTION,
    KIND_SCORECARD,
    RunManifest,
    filter_by_alignment,
    filter_commented,
    load_records,
    stratified_sample,
    write_records,
)

log = logging.getLogger("helpcom")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_PROVIDER = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on usage errors, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _run_paths(config: PipelineConfig, run_id: str) -> dict[str, Path]:
    run_dir = config.run_dir(run_id)
    return {
        "dir": run_dir,
        "manifest": run_dir / "manifest.json",
        KIND_METHOD: run_dir / "method.jsonl",
        KIND_INVOCATION: run_dir / "invocation.jsonl",
        KIND_RESOLUTION: run_dir / "resolution.jsonl",
        KIND_CHAIN: run_dir / "chain.jsonl",
        KIND_HISTORY: run_dir / "history.jsonl",
        KIND_GENERATED_COMMENT: run_dir / "generated_comment.jsonl",
        KIND_SCORECARD: run_dir / "scorecard.jsonl",
        "report": run_dir / "report.json",
    }


def _update_manifest(paths, args, stage: str, **counts) -> None:
    manifest_path = paths["manifest"]
    if manifest_path.exists():
        manifest = RunManifest.load(manifest_path)
    else:
        manifest = RunManifest(run_id=args.run_id, created_at=_now())
    manifest.config_digest = config_digest(args.config)
    manifest.tool_version = __version__
    manifest.updated_at = _now()
    manifest.stages[stage] = manifest.updated_at
    manifest.counts.update({k: int(v) for k, v in counts.items()})
    manifest.save(manifest_path)


def _selected(methods):
    return [m for m in methods if getattr(m, "selected", True)]


def _dependent_roots(chains) -> set[str]:
    return {c.root_id for c in chains}


def _chains_by_root(chains, mode: str) -> dict[str, HelperChain]:
    return {c.root_id: c for c in chains if c.mode == mode}


# ---------------------------------------------------------------- commands


def cmd_extract(args) -> int:
    config = load_config(args.config)
    repos = [config.repo(args.repo)] if args.repo else list(config.repos)
    if not repos:
        raise ConfigError("config lists no repositories")
    paths = _run_paths(config, args.run_id)

    methods, invocations, files_parsed = [], [], 0
    for repo in repos:
        for ref in discover_source_files(repo):
            full = repo.root_path / ref.path
            try:
                content = decode_source(full.read_bytes(), ref.path)
            except ExtractionError as exc:
                log.warning("skipping %s: %s", ref.path, exc)
                continue
            file_methods, file_invocations = extract_file(ref, content, repo.language)
            methods.extend(file_methods)
            invocations.extend(file_invocations)
            files_parsed += 1

    write_records(paths[KIND_METHOD], methods)
    write_records(paths[KIND_INVOCATION], invocations)
    _update_manifest(paths, args, "extract", files_parsed=files_parsed, methods=len(methods))
    print(f"extract: {files_parsed} files, {len(methods)} methods, "
          f"{len(invocations)} invocations -> {paths['dir']}")
    return EXIT_OK


def cmd_graph(args) -> int:
    config = load_config(args.config)
    paths = _run_paths(config, args.run_id)
    methods = load_records(paths[KIND_METHOD], KIND_METHOD)
    invocations = load_records(paths[KIND_INVOCATION], KIND_INVOCATION)
    if not methods:
        raise StoreError("no methods extracted; run `helpcom extract` first")

    resolutions, chains = [], []
    labels: dict[str, str] = {}
    for repo_name in sorted({m.repo for m in methods}):
        repo_methods = [m for m in methods if m.repo == repo_name]
        ids = {m.method_id for m in repo_methods}
        repo_invocations = [i for i in invocations if i.caller_id in ids]
        index = build_index(repo_methods)
        repo_resolutions = [resolve_invocation(index, inv) for inv in repo_invocations]
        resolutions.extend(repo_resolutions)
        labels.update(classify(index, repo_resolutions))
        grouped = group_by_caller(repo_resolutions)
        for method in repo_methods:
            if labels[method.method_id] != DEPENDENT:
                continue
            for mode in (IMMEDIATE, FULL):
                chains.append(helper_closure(index, grouped, method.method_id, mode))

    write_records(paths[KIND_RESOLUTION], resolutions)
    write_records(paths[KIND_CHAIN], chains)
    stats = dependency_stats(labels)
    _update_manifest(
        paths, args, "graph",
        methods=len(methods),
        dependent=stats.n_dependent,
        independent=stats.n_independent,
    )
    print(
        f"graph: {stats.n_dependent} dependent ({stats.pct_dependent}%), "
        f"{stats.n_independent} independent ({stats.pct_independent}%)"
    )
    return EXIT_OK


def cmd_history(args) -> int:
    config = load_config(args.config)
    paths = _run_paths(config, args.run_id)
    methods = load_records(paths[KIND_METHOD], KIND_METHOD)
    if args.repo:
        methods = [m for m in methods if m.repo == args.repo]

    records, skipped = [], 0
    # one repository at a time: git index locking dislikes interleaving
    for repo_name in sorted({m.repo for m in methods}):
        repo = config.repo(repo_name)
        for method in (m for m in methods if m.repo == repo_name):
            try:
                records.append(method_history(repo, method))
            except HistoryError as exc:
                skipped += 1
                log.warning("history skipped for %s: %s", method.name, exc)
    write_records(paths[KIND_HISTORY], records)
    _update_manifest(paths, args, "history", history_records=len(records))
    print(f"history: {len(records)} methods mined, {skipped} skipped")

    chain_path = paths[KIND_CHAIN]
    if chain_path.exists() and records:
        roots = _dependent_roots(load_records(chain_path, KIND_CHAIN))
        dep = [r for r in records if r.method_id in roots]
        indep = [r for r in records if r.method_id not in roots]
        if dep and indep:
            for which in ("commits", "authors"):
                d = engagement_summary(dep, which)
                i = engagement_summary(indep, which)
                print(f"  {which}: dependent mean {d.mean:.2f} (median {d.median}), "
                      f"independent mean {i.mean:.2f} (median {i.median})")
            share = commit_share(dep, indep)
            print(f"  commit share: dependent {share[0]}%, independent {share[1]}%")
    return EXIT_OK


def _alignment_provider(config: PipelineConfig):
    if config.alignment.endpoint:
        return HttpAlignmentProvider(
            config.alignment.endpoint, config.alignment.model,
            config.alignment.api_key_env,
        )
    return EmbeddingAlignmentProvider(HashEmbeddingProvider(salt="alignment-fallback"))


def cmd_filter(args) -> int:
    config = load_config(args.config)
    paths = _run_paths(config, args.run_id)
    methods = load_records(paths[KIND_METHOD], KIND_METHOD)
    threshold = config.side_threshold if args.threshold is None else args.threshold

    provider = _alignment_provider(config)
    commented = filter_commented(methods)
    for method in commented:
        method.side = side_score(provider, method.body_text, method.doc_comment)
    surviving = {m.method_id for m in filter_by_alignment(commented, threshold)}

    for method in methods:
        method.selected = method.method_id in surviving
    write_records(paths[KIND_METHOD], methods)
    _update_manifest(
        paths, args, "filter",
        commented=len(commented), selected=len(surviving),
    )
    print(f"filter: {len(commented)} commented methods, "
          f"{len(surviving)} at alignment >= {threshold}")
    return EXIT_OK


def cmd_sample(args) -> int:
    config = load_config(args.config)
    paths = _run_paths(config, args.run_id)
    methods = load_records(paths[KIND_METHOD], KIND_METHOD)
    chains = load_records(paths[KIND_CHAIN], KIND_CHAIN)
    roots = _dependent_roots(chains)

    pool = _selected(methods)
    class_of = {
        m.method_id: DEPENDENT if m.method_id in roots else "independent"
        for m in pool
    }
    sampled = {
        m.method_id
        for m in stratified_sample(pool, class_of, args.n_per_class, args.seed)
    }
    for method in methods:
        method.selected = method.method_id in sampled
    write_records(paths[KIND_METHOD], methods)
    _update_manifest(paths, args, "sample", selected=len(sampled))
    print(f"sample: {args.n_per_class} per class with seed {args.seed} "
          f"-> {len(sampled)} methods")
    return EXIT_OK


def _completion_provider(config: PipelineConfig, mock_path):
    if mock_path:
        return MockCompletionProvider.from_file(mock_path)
    if config.completion.endpoint:
        return HttpCompletionProvider(
            config.completion.endpoint, config.completion.model,
            config.completion.api_key_env,
        )
    raise ProviderError(
        "no completion provider: configure provider.completion.endpoint "
        "or pass --mock-provider"
    )


def _merge_records(path, new_records, strategy: str, kind: str):
    existing = load_records(path, kind) if path.exists() else []
    kept = [r for r in existing if r.strategy != strategy]
    return kept + list(new_records)


def cmd_generate(args) -> int:
    config = load_config(args.config)
    paths = _run_paths(config, args.run_id)
    methods = load_records(paths[KIND_METHOD], KIND_METHOD)
    by_id = {m.method_id: m for m in methods}
    provider = _completion_provider(config, args.mock_provider)

    if args.strategy == BASELINE:
        chain_of = {}
        targets = _selected(methods)
    else:
        mode = IMMEDIATE if args.strategy == HELPCOM1 else FULL
        chain_of = _chains_by_root(load_records(paths[KIND_CHAIN], KIND_CHAIN), mode)
        targets = [m for m in _selected(methods) if m.method_id in chain_of]

    comments = []
    for method in targets:
        prompt = render_prompt(
            method,
            chain_of.get(method.method_id),
            DEFAULT_TEMPLATE,
            config.context_token_budget,
            by_id,
        )
        comment = generate_comment(
            provider, prompt, config.temperature, method.method_id,
            retries=config.retries,
        )
        comment.created_at = None  # timestamps live in the manifest only
        comments.append(comment)

    merged = _merge_records(
        paths[KIND_GENERATED_COMMENT], comments, args.strategy, KIND_GENERATED_COMMENT
    )
    write_records(paths[KIND_GENERATED_COMMENT], merged)
    _update_manifest(paths, args, f"generate:{args.strategy}",
                     comments_generated=len(merged))
    print(f"generate[{args.strategy}]: {len(comments)} comments "
          f"({provider.model_id})")
    return EXIT_OK


def _judge_providers(config: PipelineConfig, mock_path):
    if mock_path:
        mock = MockCompletionProvider.from_file(mock_path)
        models = config.judge_models or ("mock-judge",)
        return {model: mock for model in models}
    if config.judge_endpoint and config.judge_models:
        return {
            model: HttpCompletionProvider(
                config.judge_endpoint, model, config.judge_api_key_env
            )
            for model in config.judge_models
        }
    return {}


_RUBRIC_DIGEST = prompt_digest(
    "\x1f".join(
        (
            JUDGE_RUBRIC.instruction_text,
            JUDGE_RUBRIC.target_section_header,
            JUDGE_RUBRIC.helper_section_header,
            JUDGE_RUBRIC.output_constraint_text,
        )
    )
)


def cmd_score(args) -> int:
    config = load_config(args.config)
    paths = _run_paths(config, args.run_id)
    methods = {m.method_id: m for m in load_records(paths[KIND_METHOD], KIND_METHOD)}
    comments = load_records(paths[KIND_GENERATED_COMMENT], KIND_GENERATED_COMMENT)
    if args.strategy:
        comments = [c for c in comments if c.strategy == args.strategy]
    if not comments:
        raise StoreError("no generated comments to score")

    sbert = (
        HttpEmbeddingProvider(config.embedding.endpoint, config.embedding.model,
                              config.embedding.api_key_env)
        if config.embedding.endpoint
        else HashEmbeddingProvider(salt="sbert-role")
    )
    usenc = (
        HttpEmbeddingProvider(config.embedding_alt.endpoint, config.embedding_alt.model,
                              config.embedding_alt.api_key_env)
        if config.embedding_alt.endpoint
        else HashEmbeddingProvider(salt="usenc-role")
    )
    alignment = _alignment_provider(config)
    judges = _judge_providers(config, args.mock_provider)

    cards = []
    strategies = sorted({c.strategy for c in comments})
    for strategy in strategies:
        pairs = []
        for comment in comments:
            if comment.strategy != strategy:
                continue
            method = methods.get(comment.method_id)
            if method is None:
                raise StoreError(f"comment references unknown method {comment.method_id}")
            if not (method.doc_comment and method.doc_comment.strip()):
                log.warning("no reference comment for %s; skipping", method.name)
                continue
            pairs.append((comment, method))
        if not pairs:
            continue
        if len(pairs) < 2:
            raise StoreError(
                f"strategy {strategy!r} has {len(pairs)} scored pair(s); "
                "the consensus metric needs a reference corpus of at least 2"
            )
        cand_tokens = [tokenize(c.text) for c, _m in pairs]
        ref_tokens = [tokenize(m.doc_comment) for _c, m in pairs]
        cider_scores = cider(cand_tokens, ref_tokens)
        for (comment, method), cand, ref, cider_raw in zip(
            pairs, cand_tokens, ref_tokens, cider_scores
        ):
            llm_scores = {
                model: llm_judge(provider, method.body_text, comment.text, JUDGE_RUBRIC)
                for model, provider in judges.items()
            }
            cards.append(
                build_scorecard(
                    method_id=method.method_id,
                    strategy=strategy,
                    bleu_raw=bleu4_smoothed(cand, ref),
                    meteor_raw=meteor(cand, ref),
                    rouge_l_raw=rouge_l(cand, ref),
                    cider_raw=cider_raw,
                    sbert_cos_raw=embedding_cosine(sbert, comment.text, method.doc_comment),
                    usenc_cos_raw=embedding_cosine(usenc, comment.text, method.doc_comment),
                    side_raw=side_score(alignment, method.body_text, comment.text),
                    llm_scores=llm_scores or None,
                    ss_weights=(config.weights.syn_ss, config.weights.sem_ss),
                    ssl_weights=(
                        config.weights.syn_ssl,
                        config.weights.sem_ssl,
                        config.weights.llm_ssl,
                    ),
                    rubric_digest=_RUBRIC_DIGEST if llm_scores else None,
                )
            )

    existing = (
        load_records(paths[KIND_SCORECARD], KIND_SCORECARD)
        if paths[KIND_SCORECARD].exists()
        else []
    )
    scored_strategies = {c.strategy for c in cards}
    merged = [c for c in existing if c.strategy not in scored_strategies] + cards
    write_records(paths[KIND_SCORECARD], merged)
    _update_manifest(paths, args, "score", cards_scored=len(merged))
    print(f"score: {len(cards)} cards across {len(scored_strategies)} strategies")
    return EXIT_OK


_REPORT_COLUMNS = (
    "bleu", "meteor", "rouge_l", "cider", "sbert_cos", "usenc_cos", "side",
)


def _strategy_row(cards, config: PipelineConfig):
    n = len(cards)
    row = {col: sum(getattr(c, col) for c in cards) / n for col in _REPORT_COLUMNS}
    judge_keys = set.intersection(*(set(c.llm_scores) for c in cards))
    for judge in sorted(judge_keys):
        row[f"llm:{judge}"] = sum(c.llm_scores[judge] for c in cards) / n
    syn = sum(c.syn_avg for c in cards) / n
    sem = sum(c.sem_avg for c in cards) / n
    row["oms_ss"] = sum(c.oms_ss for c in cards) / n
    recomputed = oms_ss(syn, sem, (config.weights.syn_ss, config.weights.sem_ss))
    consistency = abs(recomputed - row["oms_ss"]) < 1e-9
    if judge_keys and all(c.oms_ssl is not None for c in cards):
        row["oms_ssl"] = sum(c.oms_ssl for c in cards) / n
        llm = sum(c.llm_avg for c in cards) / n
        recomputed_ssl = oms_ssl(
            syn, sem, llm,
            (config.weights.syn_ssl, config.weights.sem_ssl, config.weights.llm_ssl),
        )
        consistency = consistency and abs(recomputed_ssl - row["oms_ssl"]) < 1e-9
    return row, consistency


def cmd_report(args) -> int:
    config = load_config(args.config)
    paths = _run_paths(config, args.run_id)
    cards = load_records(paths[KIND_SCORECARD], KIND_SCORECARD)
    groups: dict[str, list] = {}
    for card in cards:
        groups.setdefault(card.strategy, []).append(card)
    reference = args.reference_strategy
    if reference not in groups:
        raise StoreError(f"reference strategy {reference!r} has no scorecards")
    if len(groups) < 2:
        raise StoreError("need scorecards for at least 2 strategies to compare")

    order = [reference] + sorted(s for s in groups if s != reference)
    ref_by_id = {c.method_id: c for c in groups[reference]}
    document = {"reference_strategy": reference, "strategies": {}}
    notes = []
    for strategy in order:
        row, consistency = _strategy_row(groups[strategy], config)
        significant: dict[str, bool | None] = {}
        if strategy != reference:
            common = [c for c in groups[strategy] if c.method_id in ref_by_id]
            if common:
                ref_common = [ref_by_id[c.method_id] for c in common]
                matrix = significance_matrix(ref_common, common, paired=True)
                for metric, result in matrix.items():
                    if metric in row:
                        significant[metric] = None if result is None else result.significant
                        if result is None:
                            notes.append(
                                f"{strategy}/{metric}: all paired differences zero; "
                                "signed-rank test degenerate"
                            )
            else:
                notes.append(f"{strategy}: no methods in common with {reference}")
        document["strategies"][strategy] = {
            "n_cards": len(groups[strategy]),
            "metrics": {k: round(v, 2) for k, v in row.items()},
            "significant_vs_reference": significant,
            "oms_consistency_ok": consistency,
        }

    paths["report"].write_text(
        json.dumps(document, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    print(_format_report_table(document))
    for note in notes:
        print(f"  note: {note}")
    print(f"report -> {paths['report']}")
    return EXIT_OK


def _format_report_table(document) -> str:
    strategies = list(document["strategies"])
    columns: list[str] = []
    for strategy in strategies:
        for key in document["strategies"][strategy]["metrics"]:
            if key not in columns:
                columns.append(key)
    width = max(len(s) for s in strategies) + 2
    header = "strategy".ljust(width) + "  ".join(c.rjust(10) for c in columns)
    lines = [header, "-" * len(header)]
    for strategy in strategies:
        info = document["strategies"][strategy]
        cells = []
        for col in columns:
            value = info["metrics"].get(col)
            if value is None:
                cells.append("-".rjust(10))
                continue
            star = "*" if info["significant_vs_reference"].get(col) else ""
            cells.append(f"{star}{value:.2f}".rjust(10))
        lines.append(strategy.ljust(width) + "  ".join(cells))
    return "\n".join(lines)


def cmd_import_comments(args) -> int:
    config = load_config(args.config)
    paths = _run_paths(config, args.run_id)
    methods = {m.method_id for m in load_records(paths[KIND_METHOD], KIND_METHOD)}

    import_path = Path(args.path)
    if not import_path.is_file():
        raise StoreError(f"import file not found: {import_path}")
    records, seen = [], set()
    with import_path.open("r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                doc = json.loads(line)
                method_id, text = doc["method_id"], doc["text"]
            except (ValueError, KeyError) as exc:
                raise StoreError(f"{import_path}:{lineno}: malformed row: {exc}") from exc
            if method_id not in methods:
                raise StoreError(f"{import_path}:{lineno}: unknown method_id {method_id}")
            if method_id in seen:
                raise StoreError(
                    f"{import_path}:{lineno}: duplicate method_id {method_id}; "
                    "one comment per method per strategy"
                )
            if not str(text).strip():
                raise StoreError(f"{import_path}:{lineno}: empty comment text")
            seen.add(method_id)
            records.append(_imported_comment(method_id, str(text), args.strategy, config))

    merged = _merge_records(
        paths[KIND_GENERATED_COMMENT], records, args.strategy, KIND_GENERATED_COMMENT
    )
    write_records(paths[KIND_GENERATED_COMMENT], merged)
    _update_manifest(paths, args, f"import:{args.strategy}",
                     comments_generated=len(merged))
    print(f"import-comments[{args.strategy}]: {len(records)} comments")
    return EXIT_OK


def _imported_comment(method_id, text, strategy, config: PipelineConfig):
    return GeneratedComment(
        method_id=method_id,
        strategy=strategy,
        provider_model="imported",
        text=text.strip(),
        prompt_digest=prompt_digest(text),  # no prompt existed; key the text
        temperature=config.temperature,
        created_at=None,
    )


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="helpcom", description=__doc__)
    parser.add_argument("--version", action="version", version=f"helpcom {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--config", required=True, help="pipeline config file")
        p.add_argument("--run-id", required=True, help="run directory name")

    p = sub.add_parser("extract", help="extract methods and invocations")
    common(p)
    p.add_argument("--repo", help="limit to one configured repository")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("graph", help="resolve helpers, classify, build chains")
    common(p)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("history", help="mine per-method git history")
    common(p)
    p.add_argument("--repo", help="limit to one configured repository")
    p.set_defaults(func=cmd_history)

    p = sub.add_parser("filter", help="keep commented methods above the alignment threshold")
    common(p)
    p.add_argument("--threshold", type=float, help="alignment threshold override")
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("sample", help="stratified sample per dependency class")
    common(p)
    p.add_argument("--n-per-class", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("generate", help="generate comments with one strategy")
    common(p)
    p.add_argument("--strategy", required=True, choices=[BASELINE, HELPCOM1, HELPCOMN])
    p.add_argument("--mock-provider", help="file-backed mock completion provider")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("score", help="score generated comments against references")
    common(p)
    p.add_argument("--strategy", help="score only this strategy")
    p.add_argument("--mock-provider", help="file-backed mock judge provider")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("report", help="per-strategy table with significance marks")
    common(p)
    p.add_argument("--reference-strategy", required=True)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("import-comments", help="ingest externally generated comments")
    common(p)
    p.add_argument("--strategy", required=True, help="label for the imported comments")
    p.add_argument("path", help="JSONL file of {method_id, text} rows")
    p.set_defaults(func=cmd_import_comments)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ProviderError as exc:
        print(f"helpcom: provider error: {exc}", file=sys.stderr)
        return EXIT_PROVIDER
    except (HelpcomError, ValueError) as exc:
        print(f"helpcom: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
