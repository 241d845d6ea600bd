"""Subcommand handlers. Each takes the parsed arguments and returns an exit code."""
import time
from argparse import Namespace
from pathlib import Path

import structlog
from pydantic import ValidationError

from src.commands.exceptions import (
    CommandFailed,
    DocumentFormatException,
    DocumentNotFoundException,
)
from src.commands.schemas import (
    BlockSchema,
    ColorLinealitySchema,
    DecompositionCheckSchema,
    InstanceDocument,
    InstanceKind,
    PickSchema,
    PolyhedronSchema,
    ReportDocument,
    SubspaceSchema,
    WitnessSchema,
    picks_of,
)
from src.commands.selftest import run_selftest
from src.commands.spec import Command, ExitCode
from src.commands.storage import dao
from src.geometry.cone import VectorSet, lineality_space, solution_dimension
from src.geometry.gen import GeneratorSpec, generate
from src.geometry.reay import reay_decompose, reay_decompose_weak, verify_decomposition
from src.geometry.verify import (
    Verdict,
    VerificationReport,
    VerifyMode,
    lift_to_polyhedra,
    verify_colorful_lineality,
    verify_colorful_solutions,
    verify_monochromatic,
    verify_nonhomogeneous,
)
from src.settings import settings
from src.utils import get_service_name
from src.version import __version__

logger = structlog.get_logger(__name__)

VERDICT_EXIT_CODES = {
    Verdict.CONCLUSION_HOLDS: ExitCode.OK,
    Verdict.HYPOTHESIS_FAILS: ExitCode.HYPOTHESIS_FAILS,
    Verdict.TIGHTNESS_WITNESS: ExitCode.TIGHTNESS_WITNESS,
    Verdict.COUNTEREXAMPLE: ExitCode.INVARIANT_BREACH,
}


def _input_error(error_type: str, message: str) -> CommandFailed:
    return CommandFailed(ExitCode.INPUT_ERROR, error_type, message)


def _load(path: Path) -> tuple[InstanceDocument, str]:
    try:
        return dao.load_instance(path)
    except DocumentNotFoundException as e:
        logger.warning("load_instance: document not found", path=str(path))
        raise _input_error("DocumentNotFound", e.message)
    except DocumentFormatException as e:
        logger.warning("load_instance: malformed document", path=str(path))
        raise _input_error("DocumentFormat", e.message)


def _report(command: Command, digest: str | None = None, **fields) -> ReportDocument:
    return ReportDocument(
        command=command.value,
        tool=get_service_name(),
        version=__version__,
        input_hash=f"sha256:{digest}" if digest else None,
        **fields,
    )


def _finish(args: Namespace, report: ReportDocument, started: float) -> None:
    if args.timing:
        report.timing_ms = round((time.perf_counter() - started) * 1000, 3)
    dao.save_report(report, args.output)


def _resolve_k(args: Namespace, document: InstanceDocument) -> int:
    k = args.k if args.k is not None else document.k
    if k is None:
        raise _input_error("MissingParameter", "k is neither given nor stored in the instance")
    return k


def _resolve_jobs(args: Namespace) -> int:
    jobs = args.jobs if args.jobs is not None else int(settings.get("jobs", 1))
    if jobs < 1:
        raise _input_error("InvalidParameter", "jobs must be positive")
    return jobs


def gen_instance(args: Namespace) -> ExitCode:
    """Generate an instance and write it as an instance document.

    Raises:
        CommandFailed: If the generator parameters are out of range
    """
    logger.info("gen_instance: started", kind=args.kind, d=args.d, k=args.k, seed=args.seed)
    try:
        spec = GeneratorSpec(
            kind=args.kind,
            d=args.d,
            k=args.k,
            seed=args.seed,
            colors=args.colors,
            extra=args.extra,
            size=args.size,
            tight=args.tight,
        )
    except ValidationError as e:
        raise _input_error("InvalidParameter", "; ".join(err["msg"] for err in e.errors()))
    result = generate(spec)
    if isinstance(result, VectorSet):
        document = InstanceDocument.from_vector_set(result, spec.k)
    else:
        document = InstanceDocument.from_system(result, spec.k)
    dao.save_instance(document, args.output)
    logger.info("gen_instance: completed", colors=len(document.colors))
    return ExitCode.OK


def lineality(args: Namespace) -> ExitCode:
    """Report the lineality space of every color (or of ``--color i``)."""
    started = time.perf_counter()
    document, digest = _load(args.file)
    system = document.to_system()
    logger.info("lineality: started", colors=len(system), color=args.color)
    if args.color is not None and not 0 <= args.color < len(system):
        raise _input_error("InvalidParameter", f"No color {args.color}")
    indices = range(len(system)) if args.color is None else [args.color]
    entries = []
    for i in indices:
        color = system.colors[i]
        entries.append(
            ColorLinealitySchema.from_lineality(
                i,
                lineality_space(color),
                None if color.has_zero() else solution_dimension(color),
            )
        )
    _finish(args, _report(Command.LINEALITY, digest, lineality=entries), started)
    logger.info("lineality: completed")
    return ExitCode.OK


def decompose(args: Namespace) -> ExitCode:
    """Build a Colorful Reay decomposition and verify it independently."""
    started = time.perf_counter()
    document, digest = _load(args.file)
    k = _resolve_k(args, document)
    system = document.to_system()
    strong = not args.weak
    logger.info("decompose: started", k=k, strong=strong, colors=len(system))
    builder = reay_decompose if strong else reay_decompose_weak
    decomposition = builder(system, k)
    check = verify_decomposition(decomposition, system, k, strong=strong)
    blocks = [
        BlockSchema(
            index_set=list(block.index_set),
            picks=picks_of(block.selection, system),
            subspace=SubspaceSchema.from_subspace(subspace),
        )
        for block, subspace in zip(decomposition.blocks, decomposition.block_subspaces)
    ]
    report = _report(
        Command.DECOMPOSE,
        digest,
        k=k,
        blocks=blocks,
        verification=DecompositionCheckSchema(
            strong=strong,
            passed=check.passed,
            failed_clause=check.failed_clause.value if check.failed_clause else None,
            message=check.message,
        ),
    )
    _finish(args, report, started)
    if not check.passed:
        logger.error("decompose: verification failed", clause=check.failed_clause)
        return ExitCode.INVARIANT_BREACH
    logger.info("decompose: completed", m=decomposition.m)
    return ExitCode.OK


def _witness(
    result: VerificationReport, document: InstanceDocument, families
) -> WitnessSchema | None:
    if result.violation_value is None:
        return None
    if result.subset is not None:
        system = document.to_system()
        picks = [PickSchema.from_vector(0, i, system.colors[0][i]) for i in result.subset]
    elif families is not None:
        picks = [
            PickSchema(color=c, index=i, polyhedron=PolyhedronSchema.from_polyhedron(families[c][i]))
            for c, i in result.violation.picks
        ]
    else:
        picks = picks_of(result.violation, document.to_system())
    return WitnessSchema(picks=picks, value=result.violation_value)


def verify(args: Namespace) -> ExitCode:
    """Check a colorful Helly theorem on an instance.

    Exit code follows the verdict: 0 conclusion holds, 2 hypothesis fails,
    3 tightness witness, 5 counterexample.
    """
    started = time.perf_counter()
    document, digest = _load(args.file)
    k = _resolve_k(args, document)
    jobs = _resolve_jobs(args)
    mode = VerifyMode(args.mode)
    enforce = not args.loose_colors
    logger.info("verify: started", mode=mode.value, k=k, enforce=enforce, jobs=jobs)
    families = None
    match mode:
        case VerifyMode.SOLUTIONS:
            result = verify_colorful_solutions(document.to_system(), k, enforce, jobs)
        case VerifyMode.LINEALITY:
            result = verify_colorful_lineality(document.to_system(), k, enforce, jobs)
        case VerifyMode.POLY:
            if document.kind == InstanceKind.HOMOGENEOUS:
                families = lift_to_polyhedra(document.to_system())
            else:
                families = document.to_families()
            result = verify_nonhomogeneous(families, k, enforce, jobs)
        case VerifyMode.MONO:
            system = document.to_system()
            if len(system) != 1:
                raise _input_error("InvalidParameter", "mono mode needs exactly one color")
            result = verify_monochromatic(system.colors[0], k, jobs)
    report = _report(
        Command.VERIFY,
        digest,
        k=k,
        mode=mode.value,
        verdict=result.verdict.value,
        cap=result.cap,
        witness=_witness(result, document, families),
        color=result.color,
        color_values=list(result.color_values) if result.color_values else None,
    )
    _finish(args, report, started)
    logger.info("verify: completed", verdict=result.verdict.value)
    return VERDICT_EXIT_CODES[result.verdict]


def selftest(args: Namespace) -> ExitCode:
    """Run the acceptance checks at the scale set by settings, ``--full`` and
    ``--max-d`` (which wins over both)."""
    started = time.perf_counter()
    scale = "selftest_full" if args.full else "selftest"
    default_max_d = int(settings.get(f"{scale}_max_d", 5 if args.full else 3))
    max_d = args.max_d if args.max_d is not None else default_max_d
    if max_d < 2:
        raise _input_error("InvalidParameter", "max-d must be at least 2")
    instances = int(settings.get(f"{scale}_instances", 20 if args.full else 10))
    jobs = _resolve_jobs(args)
    logger.info("selftest: started", max_d=max_d, instances=instances, full=args.full, jobs=jobs)
    checks = run_selftest(
        max_d=max_d,
        instances=instances,
        vectors_per_color=int(settings.get("selftest_vectors_per_color", 3)),
        jobs=jobs,
    )
    passed = all(check.passed for check in checks)
    _finish(args, _report(Command.SELFTEST, checks=checks, passed=passed), started)
    logger.info("selftest: completed", passed=passed)
    return ExitCode.OK if passed else ExitCode.INVARIANT_BREACH


HANDLERS = {
    Command.GEN: gen_instance,
    Command.LINEALITY: lineality,
    Command.DECOMPOSE: decompose,
    Command.VERIFY: verify,
    Command.SELFTEST: selftest,
}
