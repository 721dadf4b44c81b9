# klyachko/commands/bigness.py
"""
Bigness commands: L(X,E), weight points, the α estimator and the combined
verdict
"""
import click

from ..config import settings
from .common import budget_option, execute, model_path, output_format

p_option = click.option("--p", "p", type=click.IntRange(min=1), default=settings.default_p, show_default=True)
l_max_option = click.option(
    "--lmax", "l_max", type=click.IntRange(min=1), default=settings.default_l_max, show_default=True,
)
p_max_option = click.option(
    "--pmax", "p_max", type=click.IntRange(min=1), default=settings.default_p_max, show_default=True,
    help="Largest symmetric power scanned for L(X,E)",
)


@click.command("l-span")
@model_path
@p_max_option
@budget_option
@output_format
@click.pass_context
def l_span(ctx: click.Context, model_path: str, p_max: int, budget, fmt: str):
    """The subspace L(X,E) of M_Q spanned by generator polytopes"""
    execute(ctx, "l-span", model_path, fmt, {"p_max": p_max, "budget": budget})


@click.command("weights")
@model_path
@p_option
@p_max_option
@budget_option
@output_format
@click.pass_context
def weights(ctx: click.Context, model_path: str, p: int, p_max: int, budget, fmt: str):
    """Weight points W_p in M_Q / L(X,E) and their convex hull vertices"""
    execute(ctx, "weights", model_path, fmt, {"p": p, "p_max": p_max, "budget": budget})


@click.command("alpha")
@model_path
@p_option
@l_max_option
@p_max_option
@budget_option
@output_format
@click.pass_context
def alpha(ctx: click.Context, model_path: str, p: int, l_max: int, p_max: int, budget, fmt: str):
    """The α sequence (an estimator, never a decision)"""
    execute(ctx, "alpha", model_path, fmt, {"p": p, "l_max": l_max, "p_max": p_max, "budget": budget})


@click.command("big")
@model_path
@click.option("--degree-bound", "degree_bound", type=click.IntRange(min=1),
              default=settings.default_degree_bound, show_default=True,
              help="Largest degree searched for a full-dimensional section polytope")
@p_option
@l_max_option
@p_max_option
@budget_option
@output_format
@click.pass_context
def big(ctx: click.Context, model_path: str, degree_bound: int, p: int, l_max: int, p_max: int, budget, fmt: str):
    """Bigness verdict with its certificate"""
    params = {"degree_bound": degree_bound, "p": p, "l_max": l_max, "p_max": p_max, "budget": budget}
    execute(ctx, "big", model_path, fmt, params)


commands = [l_span, weights, alpha, big]
