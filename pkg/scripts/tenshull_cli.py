import sys
from typing import Optional

import click

from src.core.constants import TOOL_NAME, TOOL_VERSION, ExitCode, TensorClass, TensorFileFormat, TensorKind
from src.core.exceptions import TensorToolException
from src.services.tensor_service import CommandOutcome, TensorAnalysisService

CLASS_CHOICES = [c.value for c in TensorClass]
KIND_CHOICES = [k.value for k in TensorKind]
FORMAT_CHOICES = [f.value for f in TensorFileFormat]


def _argv() -> list:
    return sys.argv[1:]


def _service(ctx: click.Context, seed: int = 0, threads: Optional[int] = None) -> TensorAnalysisService:
    return TensorAnalysisService(ctx.obj.get('config'), seed=seed, threads=threads)


def _fail(error: Exception, service: Optional[TensorAnalysisService] = None, command: str = '',
          json_out: Optional[str] = None):
    if service is not None and json_out:
        try:
            service.save_error(command, _argv(), error, json_out)
        except OSError:
            pass
    click.echo(f"Error: {error}", err=True)
    sys.exit(int(ExitCode.ERROR))


def _finish(service: TensorAnalysisService, outcome: CommandOutcome, json_out: Optional[str],
            excel_out: Optional[str], omit_timing: bool):
    click.echo(outcome.text)
    try:
        paths = service.save(outcome, _argv(), json_out, excel_out, omit_timing)
    except (OSError, ValueError) as e:
        _fail(e)
    for kind, path in paths.items():
        click.echo(f"{kind} report: {path}", err=True)
    sys.exit(int(outcome.exit_code))


def report_options(func):
    func = click.option('--omit-timing', is_flag=True, help='Leave wall-clock fields out of the JSON report')(func)
    func = click.option('--excel-out', type=click.Path(dir_okay=False), help='Write tables to an Excel workbook')(func)
    func = click.option('--json-out', type=click.Path(dir_okay=False), help='Write the machine report as JSON')(func)
    return func


def budget_options(func):
    func = click.option('--threads', type=click.IntRange(min=1), envvar='TENSHULL_THREADS',
                        help='Worker threads (default: available cores)')(func)
    func = click.option('--seed', type=int, default=0, show_default=True, help='Seed for randomized searches')(func)
    return func


@click.group()
@click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False),
              help='Path to a config.yaml overriding the bundled one')
@click.version_option(version=TOOL_VERSION, prog_name=TOOL_NAME)
@click.pass_context
def cli(ctx, config_path):
    """tenshull: spectral radius, M/P/PSD classification and interval hull certification of tensors."""
    ctx.ensure_object(dict)
    ctx.obj['config'] = config_path


@cli.command()
@click.argument('tensor_file', type=click.Path(dir_okay=False))
@click.option('--cross-check', is_flag=True, help='Re-derive the results with the brute-force oracles')
@report_options
@click.pass_context
def analyze(ctx, tensor_file, cross_check, json_out, excel_out, omit_timing):
    """Spectral radius, Perron vector, irreducibility and block partition of a nonnegative tensor."""
    service = None
    try:
        service = _service(ctx)
        outcome = service.run_analyze(tensor_file, cross_check)
    except TensorToolException as e:
        _fail(e, service, 'analyze', json_out)
    _finish(service, outcome, json_out, excel_out, omit_timing)


@cli.command('classify')
@click.argument('tensor_file', type=click.Path(dir_okay=False))
@click.option('--class', 'tensor_class', type=click.Choice(CLASS_CHOICES), required=True,
              help='Class to decide')
@budget_options
@report_options
@click.pass_context
def classify_cmd(ctx, tensor_file, tensor_class, seed, threads, json_out, excel_out, omit_timing):
    """Decide membership of a tensor in an M / P / PSD class."""
    service = None
    try:
        service = _service(ctx, seed, threads)
        outcome = service.run_classify(tensor_file, tensor_class)
    except TensorToolException as e:
        _fail(e, service, 'classify', json_out)
    _finish(service, outcome, json_out, excel_out, omit_timing)


@cli.command()
@click.option('--lower', 'lower_file', type=click.Path(dir_okay=False), required=True, help='Lower endpoint A')
@click.option('--upper', 'upper_file', type=click.Path(dir_okay=False), required=True, help='Upper endpoint B')
@click.option('--class', 'tensor_class', type=click.Choice(CLASS_CHOICES), required=True,
              help='Class to certify for the whole hull (m means strong-m)')
@click.option('--interior', is_flag=True, help='Certify only the open interior of the hull')
@budget_options
@report_options
@click.pass_context
def interval(ctx, lower_file, upper_file, tensor_class, interior, seed, threads, json_out, excel_out,
             omit_timing):
    """Certify a class for every member of the interval hull [lower, upper]."""
    service = None
    try:
        service = _service(ctx, seed, threads)
        outcome = service.run_interval(lower_file, upper_file, tensor_class, interior)
    except TensorToolException as e:
        _fail(e, service, 'interval', json_out)
    _finish(service, outcome, json_out, excel_out, omit_timing)


@cli.command()
@click.option('--order', type=click.IntRange(min=1), required=True)
@click.option('--dim', type=click.IntRange(min=1), required=True)
@click.option('--kind', type=click.Choice(KIND_CHOICES), required=True)
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('--sparsity', type=float, default=0.0, show_default=True,
              help='Probability that a random entry is zeroed')
@click.option('--out', type=click.Path(dir_okay=False), required=True,
              help='Output file (random-hull writes <out>_lower.json and <out>_upper.json)')
@click.option('--format', 'fmt', type=click.Choice(FORMAT_CHOICES), default='dense', show_default=True)
@click.pass_context
def gen(ctx, order, dim, kind, seed, sparsity, out, fmt):
    """Generate a test tensor file."""
    try:
        service = _service(ctx, seed)
        paths = service.run_gen(kind, order, dim, seed, sparsity, out, fmt)
    except TensorToolException as e:
        _fail(e)
    for path in paths:
        click.echo(path)


@cli.command()
@click.argument('report_file', type=click.Path(dir_okay=False))
@click.pass_context
def verify(ctx, report_file):
    """Re-check every certificate embedded in a JSON report."""
    try:
        service = _service(ctx)
        outcome = service.run_verify(report_file)
    except TensorToolException as e:
        _fail(e)
    click.echo(outcome.text)
    sys.exit(int(outcome.exit_code))


def main():
    cli(obj={})


if __name__ == "__main__":
    main()
