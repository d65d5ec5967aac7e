from __future__ import annotations

import argparse
import csv
import logging
import sys
from io import StringIO
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from pydantic import ValidationError

from .config import APP_VERSION, DEFAULT_BAR_BOUND, DEFAULT_THREADS, DEFAULT_WEIGHT_BOUND, LOG_LEVEL
from .di import Container, get_container
from .exactla import CoefficientRing, RingError
from .extengine import ModuleStructureError, TamenessViolation, compute_Nui
from .extengine.ext import ext_of_Bu
from .freegroup import WordParseError
from .mcg import catalog
from .models import BarRow, CheckResult, ExtRow, HomologyRow, JobConfig, ResultEnvelope, homology_csv
from .services.candidates import ParsedCandidate, evaluate_all, load_candidates
from .services.pipelines import MemoryGuardError, compare, run_cellular, run_structured
from .services.verify import SUITES, UnknownSuiteError, run_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class UsageError(ValueError):
    pass


def _setup_logging(verbosity: int) -> None:
    level = {0: LOG_LEVEL, 1: "INFO"}.get(verbosity, "DEBUG")
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def _ring(config: JobConfig) -> CoefficientRing:
    if config.coeff == "fp":
        if config.p is None:
            raise UsageError("--p is required for --coeff fp")
        return CoefficientRing.prime_field(config.p)
    return CoefficientRing.parse(config.coeff)


def _require(value: Optional[int], flag: str) -> int:
    if value is None:
        raise UsageError(f"{flag} is required")
    return value


def _envelope(config: JobConfig, **fields: Any) -> ResultEnvelope:
    return ResultEnvelope(version=APP_VERSION, config=config, **fields)


# ---------------------------------------------------------------------------
# commands


def cmd_betti(config: JobConfig, container: Optional[Container]) -> ResultEnvelope:
    g = _require(config.g, "--g")
    max_n = _require(config.max_n, "--max-n")
    ring = _ring(config)
    bounds = {"max_n": max_n}
    if config.pipeline == "cellular":
        rows = run_cellular(g, ring, max_n, config.threads, container)
        return _envelope(config, bounds=bounds, rows=[r.model_dump() for r in rows], provenance=["cellular"])
    structured = run_structured(g, ring, max_n, container)
    provenance = sorted({r.pipeline for r in structured})
    if config.pipeline == "structured":
        return _envelope(config, bounds=bounds, rows=[r.model_dump() for r in structured], provenance=provenance)
    cellular = run_cellular(g, ring, max_n, config.threads, container)
    discrepancies = compare(cellular, structured)
    return _envelope(
        config,
        bounds=bounds,
        rows=[r.model_dump() for r in cellular],
        provenance=sorted({"cellular", *provenance}),
        discrepancies=discrepancies,
        status="failed" if discrepancies else "ok",
    )


def cmd_nui(config: JobConfig) -> ResultEnvelope:
    u = _require(config.u, "--u")
    p = _require(config.p, "--p")
    decomposition = compute_Nui(u, p)
    pieces = decomposition.nonempty()
    if config.i is not None:
        pieces = {config.i: pieces[config.i]} if config.i in pieces else {}
    rows = [BarRow(i=i, m=m, c=c).model_dump() for i, bars in sorted(pieces.items()) for m, c in bars.bars]
    identity = decomposition.poincare_identity()
    logger.info(f"[cmd_nui] block diagonal per step: {dict(sorted(decomposition.block_diagonal.items()))}")
    checks = [CheckResult(name="poincare identity", ok=identity)]
    return _envelope(
        config,
        bounds={"h": decomposition.h},
        rows=rows,
        provenance=["structured"],
        checks=checks,
        status="ok" if identity else "failed",
    )


def cmd_ext(config: JobConfig) -> ResultEnvelope:
    u = _require(config.u, "--u")
    p = _require(config.p, "--p")
    W, B = config.weight_bound, config.bar_bound
    assembled, oracle = ext_of_Bu(u, p, W, B, config.threads)
    keys = sorted(set(assembled.coeffs) | set(oracle.coeffs))
    rows = [ExtRow(weight=w, bar_degree=s, assembled=assembled[(w, s)], oracle=oracle[(w, s)]).model_dump() for w, s in keys]
    discrepancies = [
        {"weight": w, "bar_degree": s, "assembled": a, "oracle": o} for w, s, a, o in assembled.differences(oracle)
    ]
    return _envelope(
        config,
        bounds={"weight_bound": W, "bar_bound": B},
        rows=rows,
        provenance=["structured", "cobar"],
        discrepancies=discrepancies,
        status="failed" if discrepancies else "ok",
    )


def cmd_mcg(config: JobConfig) -> ResultEnvelope:
    g = _require(config.g, "--g")
    p = _require(config.p, "--p")
    if config.candidates:
        candidates = load_candidates(Path(config.candidates), g)
    else:
        candidates = [ParsedCandidate(c.label, 0, c.phi) for c in catalog(g, p)]
    reports = evaluate_all(candidates, g, p, config.weight_bound, config.max_n)
    bounds = {"weight_bound": config.weight_bound}
    if config.max_n is not None:
        bounds["max_n"] = config.max_n
    failed = any(r.error for r in reports)
    return _envelope(
        config,
        bounds=bounds,
        rows=[r.model_dump() for r in reports],
        provenance=["mcg"],
        status="failed" if failed else "ok",
    )


def cmd_verify(config: JobConfig, container: Optional[Container]) -> ResultEnvelope:
    suite = config.suite or "fast"
    checks = run_suite(suite, config.threads, container)
    return _envelope(
        config,
        checks=checks,
        provenance=["cellular", "structured"],
        status="ok" if all(c.ok for c in checks) else "failed",
    )


def cmd_history(config: JobConfig, args: argparse.Namespace, container: Container) -> ResultEnvelope:
    with container.session() as session:
        repo = container.job_repo(session)
        records = repo.list(args.filter_command, args.limit, args.offset)
        total = repo.count(args.filter_command)
    rows = [
        {"id": r.record_id, "command": r.command, "status": r.status, "created_at": r.created_at.isoformat()}
        for r in records
    ]
    return _envelope(config, bounds={"total": total, "limit": args.limit, "offset": args.offset}, rows=rows)


# ---------------------------------------------------------------------------
# output


def _rows_csv(rows: List[Dict[str, Any]]) -> str:
    buffer = StringIO()
    if rows:
        writer = csv.DictWriter(buffer, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return buffer.getvalue()


def render(envelope: ResultEnvelope) -> str:
    if envelope.config.output_format == "json":
        return envelope.model_dump_json(indent=2) + "\n"
    if envelope.config.command == "betti":
        return homology_csv([HomologyRow.model_validate(r) for r in envelope.rows])
    if envelope.config.command == "verify":
        return _rows_csv([c.model_dump() for c in envelope.checks])
    return _rows_csv(envelope.rows)


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# parser


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("--format", dest="output_format", choices=("csv", "json"), default="json")
    parser.add_argument("--output", default=None, help="write the result to a file instead of stdout")
    parser.add_argument("--threads", type=int, default=DEFAULT_THREADS)
    parser.add_argument("--no-cache", dest="use_cache", action="store_false")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="confhom",
        description="Гомологии конфигурационных пространств поверхностей с краем.",
    )
    parser.add_argument("--version", action="version", version=APP_VERSION)
    sub = parser.add_subparsers(dest="command", required=True)

    betti = sub.add_parser("betti", help="homology table of C_n(S_g,1)")
    betti.add_argument("--g", type=int, required=True)
    betti.add_argument("--p", type=int, default=None)
    betti.add_argument("--coeff", choices=("fp", "q", "z"), default="fp")
    betti.add_argument("--max-n", type=int, required=True)
    betti.add_argument("--pipeline", choices=("cellular", "structured", "both"), default="cellular")
    _common(betti)

    for name, text in (("nui", "narrow pieces N_(u,i)"), ("barcode", "barcode of one piece N_(u,i)")):
        cmd = sub.add_parser(name, help=text)
        cmd.add_argument("--u", type=int, required=True)
        cmd.add_argument("--p", type=int, required=True)
        cmd.add_argument("--i", type=int, required=name == "barcode", default=None)
        _common(cmd)

    ext = sub.add_parser("ext", help="assembled Ext(B_u) against the cobar oracle")
    ext.add_argument("--u", type=int, required=True)
    ext.add_argument("--p", type=int, required=True)
    ext.add_argument("--weight-bound", type=int, default=DEFAULT_WEIGHT_BOUND)
    ext.add_argument("--bar-bound", type=int, default=DEFAULT_BAR_BOUND)
    _common(ext)

    mcg = sub.add_parser("mcg", help="validate mapping-class candidates")
    mcg.add_argument("--g", type=int, required=True)
    mcg.add_argument("--p", type=int, required=True)
    mcg.add_argument("--candidates", default=None, help="file with `name: g1 -> word; ...` lines")
    mcg.add_argument("--weight-bound", type=int, default=8)
    mcg.add_argument("--max-n", type=int, default=None, help="also check the action on H_*(C_n) for n <= max-n")
    _common(mcg)

    verify = sub.add_parser("verify", help="run a verification suite")
    verify.add_argument("suite", help=f"one of {sorted(SUITES)}")
    _common(verify)

    history = sub.add_parser("history", help="list stored jobs")
    history.add_argument("--command", dest="filter_command", default=None)
    history.add_argument("--limit", type=int, default=20)
    history.add_argument("--offset", type=int, default=0)
    _common(history)
    return parser


def _config(args: argparse.Namespace) -> JobConfig:
    values = {k: v for k, v in vars(args).items() if v is not None and k not in ("verbose", "output", "filter_command")}
    return JobConfig.model_validate(values)


def _run(args: argparse.Namespace, config: JobConfig, container: Container) -> ResultEnvelope:
    store = container if config.use_cache else None
    if config.command == "betti":
        return cmd_betti(config, store)
    if config.command in ("nui", "barcode"):
        return cmd_nui(config)
    if config.command == "ext":
        return cmd_ext(config)
    if config.command == "mcg":
        return cmd_mcg(config)
    if config.command == "verify":
        return cmd_verify(config, store)
    return cmd_history(config, args, container)


def main(argv: Optional[Sequence[str]] = None, container: Optional[Container] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _setup_logging(args.verbose)
    container = container or get_container()
    try:
        config = _config(args)
        envelope = _run(args, config, container)
    except (ValidationError, RingError, WordParseError, UnknownSuiteError, UsageError, MemoryGuardError) as exc:
        print(f"confhom {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TamenessViolation, ModuleStructureError) as exc:
        logger.error(f"[main] {exc}")
        return EXIT_FAILED
    except ValueError as exc:
        print(f"confhom {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception:  # noqa: BLE001
        logger.exception(f"[main] {args.command} failed")
        return EXIT_FAILED

    _emit(render(envelope), args.output)
    if config.use_cache and config.command != "history":
        with container.session() as session:
            run_id = container.job_repo(session).add(envelope)
        logger.info(f"[main] stored job {run_id}")
    return EXIT_OK if envelope.ok else EXIT_FAILED
