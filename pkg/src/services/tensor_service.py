# src/services/tensor_service.py
"""Orchestration behind the CLI: load inputs, run the library, build reports."""
import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from ..analyzer.certificates import Certificate, certificates_for, check_certificate, hull_certificates
from ..analyzer.classifier import answers_yes, classify
from ..analyzer.models.verdict_models import HullVerdict, Verdict
from ..analyzer.spectral import spectral_radius
from ..analyzer.structure import is_irreducible, is_weakly_irreducible, weakly_irreducible_partition
from ..core.constants import ExitCode, TensorClass, TensorFileFormat, TensorKind, VerdictLabel
from ..core.exceptions import CertificateException, OracleException, TensorToolException
from ..core.tensor import Tensor
from ..interval.hull import hull_new
from ..interval.hull_certifier import HullCertifier
from ..oracle import cw_refine, matrix_rho, subset_irreducible
from ..reporting.report_writer import ReportWriter
from ..utils.config_manager import ConfigManager
from ..utils.file_utils import read_tensor_file, write_tensor_file
from ..utils.generators import generate
from ..utils.logger import configure_logging, setup_logger
from ..utils.report_utils import build_report, create_error_report

MATRIX_AGREEMENT_TOL = 1e-8


@dataclass
class CommandOutcome:
    command: str
    exit_code: ExitCode
    lines: List[str] = field(default_factory=list)
    results: Dict[str, Any] = field(default_factory=dict)
    certificates: List[Dict[str, Any]] = field(default_factory=list)
    inputs: Dict[str, Union[str, Path]] = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def text(self) -> str:
        return "\n".join(self.lines)


def _fmt(value: Optional[float]) -> str:
    return "n/a" if value is None else f"{value:.12g}"


def _vector(values) -> str:
    return "[" + ", ".join(f"{v:.6g}" for v in values) + "]"


def verdict_exit_code(verdict: Verdict) -> ExitCode:
    if verdict.inconclusive or verdict.label == VerdictLabel.NO_COUNTEREXAMPLE_FOUND:
        return ExitCode.INCONCLUSIVE
    if answers_yes(verdict):
        return ExitCode.OK
    return ExitCode.CERTIFIED_NO


def hull_exit_code(result: HullVerdict) -> ExitCode:
    if result.label == VerdictLabel.YES:
        return ExitCode.OK
    if result.label == VerdictLabel.CERTIFIED_NO:
        return ExitCode.CERTIFIED_NO
    return ExitCode.INCONCLUSIVE


class TensorAnalysisService:
    def __init__(self, config_path: Optional[str] = None, seed: int = 0, threads: Optional[int] = None):
        self.config_manager = ConfigManager(config_path)
        self.config = self.config_manager.config
        logging_config = self.config_manager.get_logging()
        configure_logging(str(logging_config['level']), logging_config.get('format'),
                          logging_config.get('file_path'))
        self.logger = setup_logger(__name__)
        self.seed = seed
        self.threads = threads
        reporting = self.config_manager.get_reporting()
        self.include_timing = bool(reporting.get('include_timing', True))
        self.report_writer = ReportWriter(indent=int(reporting.get('json_indent', 2)))

    # -- analyze ------------------------------------------------------------

    def run_analyze(self, path: Union[str, Path], cross_check: bool = False) -> CommandOutcome:
        started = time.perf_counter()
        try:
            A = read_tensor_file(path)
            spectral = spectral_radius(A, self.config_manager.get_spectral_options())
            weak = is_weakly_irreducible(A) if A.dim > 1 else True
            partition = weakly_irreducible_partition(A)
            cap = self.config_manager.get_irreducible_cap()
            irreducible = is_irreducible(A, cap) if A.dim <= cap else None
        except TensorToolException as e:
            self.logger.error(f"analyze failed: {e}")
            raise

        results: Dict[str, Any] = {
            'order': A.order,
            'dim': A.dim,
            'spectral': spectral.to_dict(),
            'lower_witness': None if spectral.lower_witness is None else spectral.lower_witness.tolist(),
            'weakly_irreducible': weak,
            'irreducible': irreducible,
            'partition': partition.to_dict(),
        }
        if not weak:
            results['spectral']['perron'] = None

        lines = [
            f"tensor: order {A.order}, dim {A.dim}",
            f"spectral radius: {_fmt(spectral.rho)}  bracket [{_fmt(spectral.lower)}, {_fmt(spectral.upper)}]"
            f"  ({spectral.iterations} iterations, {'converged' if spectral.converged else 'NOT converged'})",
            f"weakly irreducible: {str(weak).lower()}",
            f"irreducible: {'not checked (dim above cap)' if irreducible is None else str(irreducible).lower()}",
            "partition: " + " ".join("{" + ",".join(str(i) for i in block) + "}" for block in partition.blocks),
        ]
        if weak and spectral.perron is not None:
            lines.append(f"perron vector: {_vector(spectral.perron)}")

        exit_code = ExitCode.OK if spectral.converged else ExitCode.INCONCLUSIVE
        if not spectral.converged:
            self.logger.warning("Power iteration did not reach the requested bracket width")

        if cross_check:
            checks = self._cross_check(A, spectral.rho, weak, irreducible)
            results['cross_check'] = checks
            for name, check in checks.items():
                lines.append(f"cross-check {name}: {'agrees' if check['agrees'] else 'DISAGREES'}"
                             + (f" ({check['detail']})" if check.get('detail') else ""))
            if not all(check['agrees'] for check in checks.values()):
                self.logger.warning("Oracle cross-check disagrees with the main path")
                exit_code = ExitCode.INCONCLUSIVE

        return CommandOutcome('analyze', exit_code, lines, results, [], {'tensor': path},
                              time.perf_counter() - started)

    def _cross_check(self, A: Tensor, rho: float, weak: bool,
                     irreducible: Optional[bool]) -> Dict[str, Dict[str, Any]]:
        oracle = self.config_manager.get_oracle_settings()
        tol = self.config_manager.get_spectral_options().tol
        checks: Dict[str, Dict[str, Any]] = {}
        if A.order == 2 and A.dim <= oracle.matrix_cap:
            value = matrix_rho(A.data)
            checks['matrix_rho'] = {
                'value': value,
                'agrees': abs(value - rho) <= MATRIX_AGREEMENT_TOL * max(1.0, abs(rho)),
                'detail': f"eigvals rho {_fmt(value)}",
            }
        if weak:
            try:
                bracket = cw_refine(A, oracle.cw_effort)
                checks['cw_refine'] = {
                    'lo': bracket.lo,
                    'hi': bracket.hi,
                    'agrees': bracket.contains(rho, slack=10 * tol * max(1.0, abs(rho))),
                    'detail': f"bracket [{_fmt(bracket.lo)}, {_fmt(bracket.hi)}]",
                }
            except OracleException as e:
                self.logger.warning(f"cw_refine skipped: {e}")
        if A.dim <= oracle.subset_cap and irreducible is not None:
            value = subset_irreducible(A, oracle.subset_cap)
            checks['subset_irreducible'] = {'value': value, 'agrees': value == irreducible, 'detail': ''}
        return checks

    # -- classify -----------------------------------------------------------

    def run_classify(self, path: Union[str, Path], cls: Union[str, TensorClass]) -> CommandOutcome:
        started = time.perf_counter()
        cls = TensorClass(cls)
        try:
            A = read_tensor_file(path)
            verdict = classify(A, cls, self.config_manager.get_spectral_options(),
                               self.config_manager.get_tolerances(),
                               self.config_manager.get_search_budget(self.seed))
            certificates = [c.to_dict() for c in certificates_for(verdict, A)]
        except TensorToolException as e:
            self.logger.error(f"classify failed: {e}")
            raise

        lines = [f"tensor: order {A.order}, dim {A.dim}", f"class: {cls.value}"]
        lines.extend(self._verdict_lines(verdict))
        lines.append(f"certificates: {len(certificates)}")
        return CommandOutcome('classify', verdict_exit_code(verdict), lines,
                              verdict.to_dict(), certificates, {'tensor': path},
                              time.perf_counter() - started)

    @staticmethod
    def _verdict_lines(verdict: Verdict) -> List[str]:
        lines = [f"verdict: {verdict.label.value}" + (" (inconclusive)" if verdict.inconclusive else "")]
        if verdict.margin is not None:
            lines.append(f"margin: {_fmt(verdict.margin)}")
        if verdict.bracket is not None:
            lines.append(f"bracket: [{_fmt(verdict.bracket[0])}, {_fmt(verdict.bracket[1])}]")
        if verdict.s is not None:
            lines.append(f"s: {_fmt(verdict.s)}")
        if verdict.index is not None:
            lines.append(f"offending entry: {tuple(verdict.index)}")
        if verdict.value is not None and verdict.tensor_class not in (TensorClass.M, TensorClass.STRONG_M):
            lines.append(f"value: {_fmt(verdict.value)}")
        if verdict.certificate is not None:
            lines.append(f"certificate: {_vector(verdict.certificate)}")
        lines.append(f"method: {verdict.method}{' (exact)' if verdict.exact else ''}")
        if verdict.detail:
            lines.append(f"detail: {verdict.detail}")
        return lines

    # -- interval -----------------------------------------------------------

    def run_interval(self, lower_path: Union[str, Path], upper_path: Union[str, Path],
                     cls: Union[str, TensorClass], interior: bool = False) -> CommandOutcome:
        started = time.perf_counter()
        cls = TensorClass(cls)
        # hull M-certification is only meaningful in its strong form
        target = TensorClass.STRONG_M if cls == TensorClass.M else cls
        try:
            hull = hull_new(read_tensor_file(lower_path), read_tensor_file(upper_path))
            certifier = HullCertifier(self.config_manager.get_hull_settings(self.threads, self.seed))
            result = certifier.certify(hull, target, interior)
            certificates = [c.to_dict() for c in hull_certificates(result, hull)]
        except TensorToolException as e:
            self.logger.error(f"interval failed: {e}")
            raise

        lines = [
            f"hull: order {hull.order}, dim {hull.dim}{' (interior)' if interior else ''}",
            f"class: {target.value}",
            f"verdict: {result.label.value}{' (exact)' if result.exact else ''}",
        ]
        if result.vertex_evaluations:
            lines.append(f"vertices: {len(result.vertex_records)} records, "
                         f"{result.vertex_evaluations} evaluations")
        for name, verdict in result.endpoint_verdicts.items():
            lines.append(f"endpoint {name}: {verdict.label.value}"
                         + ("" if verdict.margin is None else f" margin {_fmt(verdict.margin)}"))
        if result.witness_sign is not None:
            lines.append(f"witness sign vector: {tuple(result.witness_sign)}")
        if result.witness_vector is not None:
            lines.append(f"witness vector: {_vector(result.witness_vector)}")
        if result.inconclusive_vertices:
            lines.append(f"inconclusive vertices: {len(result.inconclusive_vertices)}")
        if result.note:
            lines.append(f"note: {result.note}")
        lines.append(f"certificates: {len(certificates)}")

        inputs = {'lower': lower_path, 'upper': upper_path}
        return CommandOutcome('interval', hull_exit_code(result), lines, result.to_dict(),
                              certificates, inputs, time.perf_counter() - started)

    # -- gen ----------------------------------------------------------------

    def run_gen(self, kind: Union[str, TensorKind], order: int, dim: int, seed: int = 0,
                sparsity: float = 0.0, out: Optional[str] = None,
                fmt: Union[str, TensorFileFormat] = TensorFileFormat.DENSE) -> List[str]:
        """Write the generated tensor(s); returns the written paths."""
        kind = TensorKind(kind)
        generated = generate(kind, order, dim, seed, sparsity)
        if kind == TensorKind.RANDOM_HULL:
            lower, upper = generated
            stem = Path(out)
            if stem.suffix == '.json':
                stem = stem.with_suffix('')
            paths = [
                write_tensor_file(f"{stem}_lower.json", lower, fmt),
                write_tensor_file(f"{stem}_upper.json", upper, fmt),
            ]
        else:
            paths = [write_tensor_file(out, generated, fmt)]
        self.logger.info(f"Generated {kind.value} order={order} dim={dim} seed={seed}: {', '.join(paths)}")
        return paths

    # -- verify -------------------------------------------------------------

    def run_verify(self, report_path: Union[str, Path]) -> CommandOutcome:
        try:
            report = json.loads(Path(report_path).read_text(encoding='utf-8'))
        except (OSError, json.JSONDecodeError) as e:
            raise CertificateException(f"cannot read report {report_path}: {e}")
        entries = report.get('certificates', []) if isinstance(report, dict) else None
        if not isinstance(entries, list):
            raise CertificateException("report has no certificate list")
        if not entries:
            return CommandOutcome('verify', ExitCode.OK, ["nothing to verify"])

        lines: List[str] = []
        failures = 0
        for position, entry in enumerate(entries):
            try:
                ok, message = check_certificate(Certificate.from_dict(entry))
            except CertificateException as e:
                ok, message = False, str(e)
            failures += not ok
            lines.append(f"[{position}] {'ok' if ok else 'FAILED'} {message}")
        lines.append(f"{len(entries) - failures}/{len(entries)} certificates verified")
        if failures:
            self.logger.error(f"{failures} certificate(s) failed verification")
        return CommandOutcome('verify', ExitCode.ERROR if failures else ExitCode.OK, lines)

    # -- reports ------------------------------------------------------------

    def build(self, outcome: CommandOutcome, argv: Sequence[str], omit_timing: bool = False) -> Dict[str, Any]:
        timing = None
        if self.include_timing and not omit_timing:
            timing = {'elapsed_seconds': outcome.elapsed}
        return build_report(outcome.command, argv, self.seed, outcome.inputs, outcome.results,
                            outcome.certificates, timing)

    def save_error(self, command: str, argv: Sequence[str], error: Exception,
                   json_out: Optional[str]) -> Optional[str]:
        """Write an error report when a JSON report was requested"""
        if not json_out:
            return None
        return self.report_writer.save_json_report(create_error_report(command, argv, str(error)), json_out)

    def save(self, outcome: CommandOutcome, argv: Sequence[str], json_out: Optional[str] = None,
             excel_out: Optional[str] = None, omit_timing: bool = False) -> Dict[str, str]:
        report = self.build(outcome, argv, omit_timing)
        paths = {}
        if json_out:
            paths['json'] = self.report_writer.save_json_report(report, json_out)
        if excel_out:
            paths['excel'] = self.report_writer.save_excel_report(report, excel_out)
        return paths
