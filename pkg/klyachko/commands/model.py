# klyachko/commands/model.py
"""
Model file commands
"""
import click

from .common import execute, model_path, output_format


@click.command("validate")
@model_path
@output_format
@click.pass_context
def validate(ctx: click.Context, model_path: str, fmt: str):
    """Parse and fully validate a model file (fan, filtrations, compatibility)"""
    execute(ctx, "validate", model_path, fmt, {})


commands = [validate]
