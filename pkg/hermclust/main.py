# hermclust/main.py
import click
from pydantic import ValidationError

from hermclust.cli.cli_router import register_commands
from hermclust.core.errors import EXIT_IO, EXIT_USAGE, HermclustError
from hermclust.core.log import configure_logging


def _first_error(exc: ValidationError) -> str:
    err = exc.errors()[0]
    loc = ".".join(str(x) for x in err.get("loc", ())) or "input"
    return f"{loc}: {err.get('msg', 'invalid value')}"


class HermclustGroup(click.Group):
    """Turns package errors into one stderr line and the exit code they carry."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except HermclustError as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(exc.exit_code)
        except ValidationError as exc:
            click.echo(f"error: invalid input: {_first_error(exc)}", err=True)
            ctx.exit(EXIT_USAGE)
        except OSError as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(EXIT_IO)


@click.group(cls=HermclustGroup)
@click.option("--log-level", default=None, help="DEBUG, INFO, WARNING ... (default from HERMCLUST_LOG_LEVEL)")
def cli(log_level):
    """Spectral clustering of directed graphs under the directed stochastic block model."""
    configure_logging(log_level)


register_commands(cli)


def main():
    cli(prog_name="hermclust")
