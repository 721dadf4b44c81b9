# klyachko/commands/sections.py
"""
Global sections: H0 by weight, section polytopes, image dimensions
"""
import click

from ..config import settings
from .common import budget_option, execute, model_path, output_format


@click.command("h0")
@model_path
@click.option("--sym", type=click.IntRange(min=1), default=1, show_default=True, help="Compute H0 of Sym^p E")
@click.option("--check", is_flag=True, help="Also compute the ground-set span and compare")
@budget_option
@output_format
@click.pass_context
def h0(ctx: click.Context, model_path: str, sym: int, check: bool, budget, fmt: str):
    """H0(X, Sym^p E) by torus weight"""
    execute(ctx, "h0", model_path, fmt, {"sym": sym, "check": check, "budget": budget})


@click.command("polytope")
@model_path
@click.option("--element", required=True, help="Comma-separated coordinates, integers or a/b")
@click.option("--sym", type=click.IntRange(min=1), default=1, show_default=True,
              help="Read the element in Sym^p E (monomial coordinates)")
@budget_option
@output_format
@click.pass_context
def polytope(ctx: click.Context, model_path: str, element: str, sym: int, budget, fmt: str):
    """The section polytope of one element: inequalities, dimension, lattice points"""
    execute(ctx, "polytope", model_path, fmt, {"element": element, "sym": sym, "budget": budget})


@click.command("image-dims")
@model_path
@click.option("--p", "p", type=click.IntRange(min=1), default=settings.default_p, show_default=True)
@click.option("--lmax", "l_max", type=click.IntRange(min=1), default=settings.default_l_max, show_default=True)
@budget_option
@output_format
@click.pass_context
def image_dims(ctx: click.Context, model_path: str, p: int, l_max: int, budget, fmt: str):
    """dim of the image of Sym^l H0(Sym^p E) in H0(Sym^(pl) E), l = 1..lmax"""
    execute(ctx, "image-dims", model_path, fmt, {"p": p, "l_max": l_max, "budget": budget})


commands = [h0, polytope, image_dims]
