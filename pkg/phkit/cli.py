import logging
import sys

import click

from phkit import create_config
from phkit.exceptions import InvalidInputError, PhkitError
from phkit.services.analysis_service import AnalysisService
from phkit.services.matrix_io import MatrixIO
from phkit.utils.validators import (
    parse_float_list,
    parse_grid,
    validate_output_format,
    validate_sample_count,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_INTERNAL = 3


def _respond(ctx, producer, text=False, output=None):
    output = output or ctx.obj.output
    try:
        result = producer()
        stdout = click.get_text_stream("stdout")
        if text:
            MatrixIO.write_text(result, output, stdout)
        else:
            MatrixIO.write_json(result, output, stdout)
    except PhkitError as e:
        logger.error(f"Validation error in {ctx.info_name}: {str(e)}")
        click.echo(f"error: {str(e)}", err=True)
        ctx.exit(EXIT_VALIDATION)
    except OSError as e:
        logger.error(f"I/O error in {ctx.info_name}: {str(e)}")
        click.echo(f"error: {str(e)}", err=True)
        ctx.exit(EXIT_IO)
    except Exception as e:
        logger.exception(f"Error in {ctx.info_name}: {str(e)}")
        click.echo("error: internal error", err=True)
        ctx.exit(EXIT_INTERNAL)


@click.group()
@click.option("--atol", type=float, default=None, help="Absolute tolerance.")
@click.option("--rtol", type=float, default=None, help="Relative tolerance.")
@click.option("--seed", type=int, default=None, help="Seed for randomized checks.")
@click.option("--out", "output", type=click.Path(dir_okay=False), default=None)
@click.option("--env", "config_name", default=None, help="Configuration profile.")
@click.pass_context
def cli(ctx, atol, rtol, seed, output, config_name):
    """2x2 PT-symmetric and pseudo-Hermitian matrix toolkit."""
    try:
        ctx.obj = create_config(
            config_name, atol=atol, rtol=rtol, seed=seed, output=output
        )
    except PhkitError as e:
        click.echo(f"error: {str(e)}", err=True)
        ctx.exit(EXIT_VALIDATION)


@cli.command()
@click.option("--matrix", "matrix_path", required=True, type=click.Path())
@click.pass_context
def classify(ctx, matrix_path):
    """Classify a matrix into S1-S4 or NotPT."""
    _respond(
        ctx,
        lambda: AnalysisService.classify(MatrixIO.read_matrix(matrix_path), ctx.obj),
    )


@cli.command()
@click.option("--g", "g_path", required=True, type=click.Path())
@click.option("--pt-only", is_flag=True, help="PT restriction for singular G.")
@click.option("--params", default=None, help="Comma-separated k0,k1,... weights.")
@click.option("--numeric", is_flag=True, help="Force the nullspace basis.")
@click.option("--verify", is_flag=True, help="Check H^dagger G = G H residuals.")
@click.pass_context
def ensemble(ctx, g_path, pt_only, params, numeric, verify):
    """Pseudo-Hermitian ensemble of a Hermitian metric."""

    def produce():
        weights = None if params is None else parse_float_list(params, "params")
        return AnalysisService.ensemble(
            MatrixIO.read_matrix(g_path),
            ctx.obj,
            pt_only=pt_only,
            params=weights,
            verify=verify,
            numeric=numeric,
        )

    _respond(ctx, produce)


@cli.command()
@click.option("--g1", "g1_path", required=True, type=click.Path())
@click.option("--g2", "g2_path", required=True, type=click.Path())
@click.option("--verify", is_flag=True)
@click.pass_context
def common(ctx, g1_path, g2_path, verify):
    """Traceless matrix pseudo-Hermitian with respect to two metrics."""
    _respond(
        ctx,
        lambda: AnalysisService.common(
            MatrixIO.read_matrix(g1_path),
            MatrixIO.read_matrix(g2_path),
            ctx.obj,
            verify=verify,
        ),
    )


@cli.command()
@click.option("--g", "g_path", required=True, type=click.Path())
@click.option("--level", type=float, required=True)
@click.option("--samples", type=int, default=None)
@click.option("--seed", "sample_seed", type=int, default=None)
@click.pass_context
def quadric(ctx, g_path, level, samples, sample_seed):
    """Determinant quadratic form of the traceless ensemble and its level set."""
    _respond(
        ctx,
        lambda: AnalysisService.quadric(
            MatrixIO.read_matrix(g_path),
            level,
            ctx.obj,
            samples=validate_sample_count(samples),
            seed=sample_seed,
        ),
    )


@cli.command()
@click.option("--h", "h_path", required=True, type=click.Path())
@click.option("--d", "half_trace", type=float, required=True)
@click.option("--verify", is_flag=True)
@click.pass_context
def inverse(ctx, h_path, half_trace, verify):
    """All Hermitian metrics of fixed half-trace for a PT-symmetric matrix."""
    _respond(
        ctx,
        lambda: AnalysisService.inverse(
            MatrixIO.read_matrix(h_path), half_trace, ctx.obj, verify=verify
        ),
    )


@cli.command()
@click.option("--surface", "surface_path", required=True, type=click.Path())
@click.option("--level", type=float, default=None)
@click.option("--grid", "grid_text", default=None, help="min,max,res")
@click.option("--format", "fmt", default="csv", help="csv or json")
@click.option("--index", type=int, default=None, help="Quadric index 1..6.")
@click.option("--field", is_flag=True, help="Write the sampled field table.")
@click.option("--out", "output", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def export(ctx, surface_path, level, grid_text, fmt, index, field, output):
    """Grid samples or isosurface points of a quadric or determinant form."""

    def produce():
        if not validate_output_format(fmt):
            raise InvalidInputError(f"unsupported format {fmt!r}; use csv or json")
        grid = None
        if grid_text is not None:
            grid = parse_grid(grid_text, ctx.obj.grid_resolution)
        return AnalysisService.export(
            MatrixIO.read_json(surface_path),
            ctx.obj,
            level=level,
            grid=grid,
            fmt=fmt.lower(),
            index=index,
            field=field,
        )

    _respond(ctx, produce, text=True, output=output)


def main(argv=None):
    # without standalone mode click returns ctx.exit codes instead of raising
    try:
        result = cli.main(args=argv, prog_name="phkit", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return EXIT_VALIDATION
    return result if isinstance(result, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
