# klyachko/main.py
"""
Main CLI application
This file sets up logging and registers every command
"""
import logging
import sys

import click

from .commands import bigness, model, sections
from .config import settings
from .errors import EXIT_INVALID

LOGGER_NAME = "klyachko"


def configure_logging(level: str) -> logging.Logger:
    """One stderr handler on the package logger; stdout carries reports only"""
    logger = logging.getLogger(LOGGER_NAME)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    logger.addHandler(handler)
    logger.setLevel(level)
    logger.propagate = False
    return logger


class KlyachkoGroup(click.Group):
    """Usage errors exit with the invalid-input code like every other bad input"""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except click.UsageError as exc:
            exc.exit_code = EXIT_INVALID
            raise


@click.group(cls=KlyachkoGroup)
@click.version_option("1.0.0", prog_name="klyachko")
@click.option("--log-level", default=None, help="Override KLY_LOG_LEVEL for this run")
def cli(log_level):
    """Exact computations for toric vector bundles given by Klyachko filtrations"""
    level = (log_level or settings.log_level).upper()
    configure_logging(level)
    logging.getLogger(LOGGER_NAME).debug("🚀 log level %s, budget %d", level, settings.sym_budget)


# Register commands
for command in model.commands + sections.commands + bigness.commands:
    cli.add_command(command)


def main():
    cli(prog_name="klyachko")


if __name__ == "__main__":
    main()
