# klyachko/commands/common.py
"""
Shared pieces of the command layer: the options every command takes and the
load -> run -> emit sequence behind each of them.
"""
import logging
from typing import Any, Dict

import click

from ..errors import EXIT_INVALID, ModelInvalidError
from ..services.command_service import command_service
from ..services.report_service import report_service
from ..storage.model_store import model_store

logger = logging.getLogger(__name__)

model_path = click.argument("model_path", metavar="MODEL", type=click.Path(dir_okay=False))

output_format = click.option(
    "--format", "fmt",
    type=click.Choice(["text", "json"]),
    default="text",
    show_default=True,
    help="Report format on stdout",
)

budget_option = click.option(
    "--budget",
    type=click.IntRange(min=1),
    default=None,
    help="Cap on dim Sym^(pl) E (default: KLY_BUDGET or 2000)",
)


def execute(ctx: click.Context, command: str, path: str, fmt: str, params: Dict[str, Any]) -> None:
    """Load the model, run the command, print the report, exit with its code"""
    try:
        model = model_store.load(path)
    except ModelInvalidError as exc:
        logger.error("❌ %s: %s", path, exc.message)
        report = report_service.build(
            command, params, exc.context.get("digest", ""), error=exc.to_dict(),
        )
        click.echo(report_service.emit(report, fmt), nl=False)
        ctx.exit(EXIT_INVALID)
    report, code = command_service.run(command, model, params)
    click.echo(report_service.emit(report, fmt), nl=False)
    logger.info("📄 %s report emitted (exit %d)", command, code)
    ctx.exit(code)
