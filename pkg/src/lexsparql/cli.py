"""Command-line pipelines: lint, populate, split, prompts, check, eval, mock-serve, report."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import dataset as ds
from .generalize import GeneralizationError, export_generalization, make_generalization_set
from .kgexec import (
    EndpointConfig, EndpointError, EndpointLimits, LocalExecutor, QueryError, RemoteExecutor,
    SnapshotError, default_snapshot, load_snapshot, serve_mock,
)
from .metrics import (
    SCENARIOS, AggregateReport, MetricsError, aggregate, evaluate_record, format_report,
    write_report_json,
)
from .population import PopulationError, build_dataset, fetch_catalog, write_manifest
from .registry import RegistryError, default_registry, load_registry_path, unregistered
from .sparqlcheck import PROFILES, get_profile, run_checks
from .templates import RenderError, TemplateError, default_catalog, load_catalog_dir

log = logging.getLogger("lexsparql")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_ENDPOINT = 4
EXIT_VALIDATION = 5

ENDPOINT_ENV = "LEXSPARQL_ENDPOINT"
MOCK_PREFIX = "mock:"


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    endpoint: str = MOCK_PREFIX
    user_agent: str = ""
    limits: EndpointLimits = field(default_factory=EndpointLimits)
    catalog_path: Optional[str] = None
    registry_path: Optional[str] = None
    seed: int = 0
    k: int = 1
    check_profile: str = "appendix_c"
    scenario: str = "non_generalization"
    output: str = "out"

    def __post_init__(self):
        if self.k < 1:
            raise ConfigError("k must be at least 1")
        if self.check_profile not in PROFILES:
            raise ConfigError(f"unknown check profile {self.check_profile!r}")
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}")

    @property
    def is_mock(self) -> bool:
        return self.endpoint.startswith(MOCK_PREFIX)

    def manifest_lines(self) -> list[str]:
        return [f"seed = {self.seed}", f"k = {self.k}", f"profile = {self.check_profile}",
                f"scenario = {self.scenario}"]


_INT_KEYS = {"seed", "k", "max_rows", "max_retries"}
_FLOAT_KEYS = {"timeout", "min_interval", "backoff"}
_KEYS = _INT_KEYS | _FLOAT_KEYS | {
    "endpoint", "user_agent", "catalog", "registry", "profile", "scenario", "out",
}


def parse_config(text: str) -> dict[str, str]:
    values = {}
    for n, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"config line {n}: expected key = value")
        if key not in _KEYS:
            raise ConfigError(f"config line {n}: unknown key {key!r}")
        values[key] = value
    return values


def build_config(values: dict[str, str], env: Optional[dict] = None) -> RunConfig:
    env = os.environ if env is None else env
    values = dict(values)
    if env.get(ENDPOINT_ENV):
        values["endpoint"] = env[ENDPOINT_ENV]
    try:
        typed = {k: int(v) for k, v in values.items() if k in _INT_KEYS}
        typed.update({k: float(v) for k, v in values.items() if k in _FLOAT_KEYS})
    except ValueError as exc:
        raise ConfigError(f"bad number in config: {exc}") from None
    try:
        limits = EndpointLimits(
            max_rows_per_query=typed.get("max_rows", 30000),
            per_query_timeout=typed.get("timeout", 60.0),
            min_request_interval=typed.get("min_interval", 0.0),
            max_retries=typed.get("max_retries", 3),
            backoff_initial=typed.get("backoff", 2.0),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return RunConfig(
        endpoint=values.get("endpoint", MOCK_PREFIX),
        user_agent=values.get("user_agent", ""),
        limits=limits,
        catalog_path=values.get("catalog"),
        registry_path=values.get("registry"),
        seed=typed.get("seed", 0),
        k=typed.get("k", 1),
        check_profile=values.get("profile", "appendix_c"),
        scenario=values.get("scenario", "non_generalization"),
        output=values.get("out", "out"),
    )


# --- shared plumbing ----------------------------------------------------------

def _catalog(cfg: RunConfig):
    return load_catalog_dir(cfg.catalog_path) if cfg.catalog_path else default_catalog()


def _registry(cfg: RunConfig):
    if not cfg.registry_path:
        return default_registry()
    base = Path(cfg.registry_path)
    languages = base.with_name("languages.csv")
    pool = base.with_name("pool.csv")
    return load_registry_path(base, languages if languages.exists() else None, pool if pool.exists() else None)


def _executor(cfg: RunConfig):
    if cfg.is_mock:
        path = cfg.endpoint[len(MOCK_PREFIX):]
        return LocalExecutor(load_snapshot(path) if path else default_snapshot())
    kwargs = {"user_agent": cfg.user_agent} if cfg.user_agent else {}
    return RemoteExecutor(EndpointConfig(cfg.endpoint, limits=cfg.limits, **kwargs))


def _out(cfg: RunConfig) -> Path:
    path = Path(cfg.output)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _read_records(path: Path) -> list[ds.DatasetRecord]:
    with open(path, encoding="utf-8") as fh:
        return ds.load_jsonl(fh)


def _write_lines(path: Path, lines: Sequence[str]) -> None:
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def _load_split(out: Path) -> ds.SplitResult:
    train = _read_records(out / "train.jsonl")
    test = _read_records(out / "test.jsonl")
    ids = (out / "test_ids.txt").read_text(encoding="utf-8").split()
    if len(ids) != len(test):
        raise ds.DatasetError("test_ids.txt does not match test.jsonl")
    return ds.SplitResult(train, test, {}, ids)


# --- commands -----------------------------------------------------------------

def cmd_lint(cfg: RunConfig, args) -> int:
    registry = _registry(cfg)
    catalog = _catalog(cfg)
    problems = []
    for spec in catalog:
        missing = unregistered(spec.properties_used, registry) - set(registry.pool)
        if missing:
            problems.append(f"{spec.id}: properties not in registry or pool: {sorted(missing)}")
    for p in problems:
        print(p, file=sys.stderr)
    counts = ", ".join(f"{k} {v}" for k, v in sorted(catalog.counts().items()))
    print(f"registry: {len(registry)} properties; catalog: {len(catalog)} templates ({counts})")
    return EXIT_VALIDATION if problems else EXIT_OK


def cmd_populate(cfg: RunConfig, args) -> int:
    catalog = _catalog(cfg)
    executor = _executor(cfg)
    ids = args.templates.split(",") if args.templates else None
    rows = fetch_catalog(catalog, executor, cfg.limits, ids, workers=args.workers)
    records = build_dataset(catalog, rows, cfg.seed)
    out = _out(cfg)
    with open(out / "dataset.jsonl", "w", encoding="utf-8", newline="\n") as fh:
        ds.export_jsonl(records, fh)
    with open(out / "manifest.txt", "w", encoding="utf-8", newline="\n") as fh:
        write_manifest(fh, executor.describe(), rows, cfg.limits)
        for line in cfg.manifest_lines():
            fh.write(line + "\n")
    truncated = [tid for tid, r in rows.items() if r.truncated]
    print(f"{len(records)} records from {len(rows)} templates -> {out / 'dataset.jsonl'}")
    for tid in truncated:
        print(f"warning: {tid} truncated at {cfg.limits.max_rows_per_query} rows", file=sys.stderr)
    return EXIT_OK


def cmd_split(cfg: RunConfig, args) -> int:
    out = _out(cfg)
    source = Path(args.dataset) if args.dataset else out / "dataset.jsonl"
    records = _read_records(source)
    result = ds.split(records, ds.SplitConfig(
        test_fraction=Fraction(args.test_fraction), test_cap=args.test_cap, seed=cfg.seed))
    with open(out / "train.jsonl", "w", encoding="utf-8", newline="\n") as fh:
        ds.export_jsonl(result.train, fh)
    with open(out / "test.jsonl", "w", encoding="utf-8", newline="\n") as fh:
        ds.export_jsonl(result.test, fh)
    with open(out / "train.txt", "w", encoding="utf-8", newline="\n") as fh:
        ds.export_training_text(result.train, fh)
    _write_lines(out / "test_ids.txt", result.test_ids)
    _write_lines(out / "split_manifest.txt", cfg.manifest_lines() + [
        f"counts.{tid} = {a} {b}" for tid, (a, b) in sorted(result.per_template_counts.items())
    ])
    print(f"train {len(result.train)}, test {len(result.test)}")
    return EXIT_OK


def _generalization_set(cfg: RunConfig, out: Path, split_result: ds.SplitResult):
    catalog = _catalog(cfg)
    gen = make_generalization_set(catalog, split_result.test, _executor(cfg), cfg.seed, split_result.test_ids)
    with open(out / "generalization.jsonl", "w", encoding="utf-8", newline="\n") as fh:
        export_generalization(gen, fh)
    return gen


def cmd_prompts(cfg: RunConfig, args) -> int:
    out = _out(cfg)
    split_result = _load_split(out)
    if cfg.scenario == "non_generalization":
        prompts = ds.build_prompts(split_result, args.n_examples, cfg.seed)
    else:
        gen = _generalization_set(cfg, out, split_result)
        prompts = []
        for g in gen:
            base = g.base_record_id.rsplit("#", 1)[0]
            prompt = ds.build_fewshot_prompt(base, split_result.train, g.utterance, args.n_examples, cfg.seed)
            prompts.append({"id": g.base_record_id, "prompt": prompt})
    name = "prompts.jsonl" if cfg.scenario == "non_generalization" else "prompts_generalization.jsonl"
    with open(out / name, "w", encoding="utf-8", newline="\n") as fh:
        n = ds.export_prompts(prompts, fh)
    print(f"{n} prompts -> {out / name}")
    return EXIT_OK


def cmd_check(cfg: RunConfig, args) -> int:
    out = _out(cfg)
    profile = get_profile(cfg.check_profile)
    if args.known_qitems:
        text = Path(args.known_qitems).read_text(encoding="utf-8")
        ids = [w for line in text.splitlines() for w in line.split("#", 1)[0].split()]
        profile = replace(profile, known_qitems=profile.known_qitems | frozenset(ids))
    source = Path(args.input) if args.input else out / "test.jsonl"
    rows = []
    with open(source, encoding="utf-8") as fh:
        for n, doc in enumerate(ds.read_jsonl(fh)):
            queries = doc.get("responses") or [doc.get("query", "")]
            for j, q in enumerate(queries):
                rid = doc.get("id", f"{doc.get('template_name', 'record')}#{n}")
                rows.append({"id": rid, "response": j, **run_checks(q, profile).to_dict()})
    with open(out / "checks.jsonl", "w", encoding="utf-8", newline="\n") as fh:
        for r in rows:
            fh.write(json.dumps(r, ensure_ascii=False) + "\n")
    total = sum((Fraction(r["ratio"]) for r in rows), Fraction(0))
    mean = total / len(rows) if rows else Fraction(0)
    print(f"{len(rows)} queries checked with {cfg.check_profile}; mean ratio {float(mean):.4f}")
    return EXIT_OK


def _golds(cfg: RunConfig, out: Path) -> dict[str, ds.DatasetRecord]:
    if cfg.scenario == "non_generalization":
        split_result = _load_split(out)
        return dict(zip(split_result.test_ids, split_result.test))
    path = out / "generalization.jsonl"
    if not path.exists():
        _generalization_set(cfg, out, _load_split(out))
    golds = {}
    with open(path, encoding="utf-8") as fh:
        for doc in ds.read_jsonl(fh):
            golds[doc["id"]] = ds.DatasetRecord(doc["utterance"], doc.get("template_name", "ask"), doc["query"])
    return golds


def cmd_eval(cfg: RunConfig, args) -> int:
    out = _out(cfg)
    golds = _golds(cfg, out)
    executor = _executor(cfg)
    profile = get_profile(cfg.check_profile)
    with open(args.predictions, encoding="utf-8") as fh:
        predictions = list(ds.read_jsonl(fh))
    evals = []
    for doc in predictions:
        rid = doc.get("id")
        if rid not in golds:
            raise ds.DatasetError(f"prediction for unknown test id {rid!r}")
        responses = list(doc.get("responses") or [])[:cfg.k]
        if len(responses) < cfg.k:
            raise ds.DatasetError(f"{rid}: {len(responses)} responses, k = {cfg.k}")
        evals.append(evaluate_record(golds[rid], responses, executor, profile, rid))
    report = aggregate(evals, cfg.scenario, cfg.k, args.bleu_mode)
    with open(out / f"evaluations_{cfg.scenario}_k{cfg.k}.jsonl", "w", encoding="utf-8", newline="\n") as fh:
        for e in evals:
            fh.write(json.dumps(e.to_json(), ensure_ascii=False) + "\n")
    reports = _merge_reports(out, report)
    (out / "report.txt").write_text(format_report(reports, args.model), encoding="utf-8")
    print(format_report([report], args.model), end="")
    print(f"records {report.n_records}, voided {report.n_voided}, seed {cfg.seed}")
    return EXIT_OK


def _merge_reports(out: Path, report: AggregateReport) -> list[AggregateReport]:
    path = out / "report.json"
    existing = []
    if path.exists():
        existing = [AggregateReport.from_json(d) for d in json.loads(path.read_text(encoding="utf-8"))]
    merged = [r for r in existing if (r.scenario, r.k) != (report.scenario, report.k)] + [report]
    merged.sort(key=lambda r: (r.k, SCENARIOS.index(r.scenario)))
    path.write_text(write_report_json(merged), encoding="utf-8")
    return merged


def cmd_report(cfg: RunConfig, args) -> int:
    out = _out(cfg)
    path = Path(args.report) if args.report else out / "report.json"
    reports = [AggregateReport.from_json(d) for d in json.loads(path.read_text(encoding="utf-8"))]
    text = format_report(reports, args.model)
    (out / "report.txt").write_text(text, encoding="utf-8")
    print(text, end="")
    return EXIT_OK


def cmd_mock_serve(cfg: RunConfig, args) -> int:
    path = args.snapshot or (cfg.endpoint[len(MOCK_PREFIX):] if cfg.is_mock else "")
    snapshot = load_snapshot(path) if path else default_snapshot()
    endpoint = serve_mock(snapshot, args.bind)
    print(f"serving {len(snapshot)} triples at {endpoint.url}", flush=True)
    try:
        endpoint.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        endpoint.shutdown()
    return EXIT_OK


COMMANDS = {
    "lint": cmd_lint, "populate": cmd_populate, "split": cmd_split, "prompts": cmd_prompts,
    "check": cmd_check, "eval": cmd_eval, "mock-serve": cmd_mock_serve, "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value config file")
    common.add_argument("--seed", type=int)
    common.add_argument("--k", type=int)
    common.add_argument("--profile", choices=sorted(PROFILES))
    common.add_argument("--scenario", choices=SCENARIOS)
    common.add_argument("--out", help="output directory")
    common.add_argument("--endpoint", help="endpoint URL or mock:<snapshot path>")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="lexsparql", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("lint", parents=[common], help="validate registry and catalog")
    p = sub.add_parser("populate", parents=[common], help="fetch bindings and write dataset.jsonl")
    p.add_argument("--templates", help="comma-separated template ids")
    p.add_argument("--workers", type=int, default=1)
    p = sub.add_parser("split", parents=[common], help="per-template train/test split")
    p.add_argument("--dataset", help="input JSONL (default: <out>/dataset.jsonl)")
    p.add_argument("--test-fraction", default="1/10")
    p.add_argument("--test-cap", type=int, default=20)
    p = sub.add_parser("prompts", parents=[common], help="few-shot prompts for the test set")
    p.add_argument("--n-examples", type=int, default=2)
    p = sub.add_parser("check", parents=[common], help="granularity checks over a JSONL of queries")
    p.add_argument("--input", help="JSONL with query or responses fields")
    p.add_argument("--known-qitems", help="file of Q-item ids treated as known")
    p = sub.add_parser("eval", parents=[common], help="score predictions.jsonl against the test set")
    p.add_argument("--predictions", required=True)
    p.add_argument("--bleu-mode", choices=("first", "best"), default="first")
    p.add_argument("--model", default="predictions")
    p = sub.add_parser("mock-serve", parents=[common], help="serve a snapshot over SPARQL HTTP")
    p.add_argument("--snapshot")
    p.add_argument("--bind", default="127.0.0.1:8890")
    p = sub.add_parser("report", parents=[common], help="render report.json as a table")
    p.add_argument("--report")
    p.add_argument("--model", default="predictions")
    return parser


def resolve_config(args, env: Optional[dict] = None) -> RunConfig:
    values = {}
    if args.config:
        try:
            values = parse_config(Path(args.config).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
    cfg = build_config(values, env)
    overrides = {}
    if args.endpoint:
        overrides["endpoint"] = args.endpoint
    for flag, key in (("seed", "seed"), ("k", "k"), ("profile", "check_profile"),
                      ("scenario", "scenario"), ("out", "output")):
        value = getattr(args, flag)
        if value is not None:
            overrides[key] = value
    return replace(cfg, **overrides) if overrides else cfg


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EndpointError as exc:
        print(f"endpoint error: {exc}", file=sys.stderr)
        return EXIT_ENDPOINT
    except (RegistryError, TemplateError, RenderError, SnapshotError, ds.DatasetError, PopulationError,
            GeneralizationError, MetricsError, QueryError, KeyError, ValueError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
