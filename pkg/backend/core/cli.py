"""
Command line: shapetensor {tensors, reconstruct, counterexample, converge,
noise, distance}.

Exit codes: 0 success, 2 input error, 3 optimizer failure, 4 the
reconstruction has no output (Case 4). Logs go to stderr, summaries to stdout.
"""

import functools
import logging
import sys
from pathlib import Path
from typing import Callable, List, Optional

import click
import numpy as np
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from core.adapters import AdapterFactory
from core.bodies.distances import hausdorff, translative_hausdorff
from core.bodies.polytope import Polytope
from core.bodies.reference import surface_area_measure
from core.exceptions import (
    FitError,
    LinearProgramError,
    MinkowskiError,
    PolytopeError,
    ReconstructionError,
    RecordFormatError,
    ShapeTensorError,
)
from core.harmonics.special import total_dim
from core.models import BodySpec, CaseTag, HarmonicVector, TensorSet
from core.reconstruct.algorithms import ShapeReconstructor
from core.reconstruct.noise import relative_sigma
from core.settings import RunConfig
from core.stability.experiments import (
    convergence_experiment,
    noise_experiment,
    summarize_noise,
)
from core.tensors.bijection import harmonic_to_moment, harmonic_vector, moment_to_harmonic
from core.tensors.moments import tensor_set
from core.uniqueness.counterexamples import (
    agreement_rank,
    agreement_table,
    counterexample_pair,
)

logger = logging.getLogger("shapetensor")
console = Console()

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_OPTIMIZER = 3
EXIT_NO_OUTPUT = 4

OPTIMIZER_ERRORS = (FitError, MinkowskiError, ReconstructionError, LinearProgramError)
INPUT_ERRORS = (RecordFormatError, ValueError, ValidationError, OSError, PolytopeError)


def setup_logging(verbose: bool, quiet: bool) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def exit_codes(command: Callable) -> Callable:
    """Map library exceptions to the documented exit codes"""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except OPTIMIZER_ERRORS as e:
            logger.error("Optimizer failure: %s", e)
            sys.exit(EXIT_OPTIMIZER)
        except INPUT_ERRORS as e:
            logger.error("Input error: %s", e)
            sys.exit(EXIT_INPUT)
        except ShapeTensorError as e:
            logger.error("%s", e)
            sys.exit(EXIT_OPTIMIZER)
    return wrapper


def parse_list(text: Optional[str], cast: Callable) -> Optional[List]:
    """Comma-separated values, e.g. "2,4,6" """
    if text is None:
        return None
    try:
        return [cast(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise click.BadParameter(f"Cannot parse list {text!r}") from None


def load_body(argument: str) -> BodySpec:
    """
    A body.json path, an OFF mesh or a preset name (ball, ellipsoid, pyramid,
    cube, square, polygonM).
    """
    path = Path(argument)
    if path.suffix.lower() == ".off":
        mesh = AdapterFactory.load(path)
        return BodySpec.polytope(vertices=mesh.vertices.tolist())
    if path.suffix.lower() == ".json" or path.exists():
        loaded = AdapterFactory.load(path)
        if not isinstance(loaded, BodySpec):
            raise RecordFormatError("expected a body record", str(path), "kind")
        return loaded
    return BodySpec.preset(argument)


def run_config(ctx: click.Context, command: str, **flags) -> RunConfig:
    return RunConfig.from_sources(command, ctx.obj.get('config'), **flags)


# ============= GROUP =============


@click.group(name="shapetensor")
@click.option("--verbose", "-v", is_flag=True, help="Debug logging")
@click.option("--quiet", "-q", is_flag=True, help="Warnings only")
@click.option("--config", "config_file", type=click.Path(path_type=Path),
              help="JSON run configuration; flags override it")
@click.pass_context
def cli(ctx: click.Context, verbose: bool, quiet: bool, config_file: Optional[Path]):
    """Surface tensors, harmonic intrinsic volumes and polytope reconstruction."""
    setup_logging(verbose, quiet)
    ctx.ensure_object(dict)
    ctx.obj['config'] = config_file


# ============= COMMANDS =============


@cli.command()
@click.argument("body")
@click.option("--so", "s_o", type=int, help="Maximal rank s_o")
@click.option("--resolution", type=click.Choice(["coarse", "medium", "fine"]))
@click.option("--out", "output", type=click.Path(path_type=Path))
@click.pass_context
@exit_codes
def tensors(ctx, body, s_o, resolution, output):
    """Surface tensors and harmonic intrinsic volumes of BODY."""
    config = run_config(ctx, "tensors", input=body, s_o=s_o, resolution=resolution,
                        output=output)
    if config.s_o is None:
        raise ValueError("--so is required")
    spec = load_body(body)
    measure = surface_area_measure(spec, config.resolution)
    surface = tensor_set(measure, config.s_o)
    harmonics = harmonic_vector(measure, config.s_o)

    AdapterFactory.save(surface, config.output / "tensors.json")
    AdapterFactory.save(harmonics, config.output / "harmonics.json")
    console.print(f"m_s_o = {total_dim(spec.dim, config.s_o)}")
    console.print(f"surface area = {measure.total_mass:.12g}")


@cli.command()
@click.argument("record")
@click.option("--noisy", is_flag=True, default=None,
              help="Least-squares algorithm for noisy harmonic intrinsic volumes")
@click.option("--so", "s_o", type=int, help="Use only degrees/ranks up to s_o")
@click.option("--seed", type=int)
@click.option("--starts", type=int)
@click.option("--tol", type=float, help="Exact-fit tolerance relative to |target|")
@click.option("--out", "output", type=click.Path(path_type=Path))
@click.pass_context
@exit_codes
def reconstruct(ctx, record, noisy, s_o, seed, starts, tol, output):
    """Reconstruct a polytope from tensors.json or harmonics.json."""
    config = run_config(ctx, "reconstruct", input=record, noisy=noisy, s_o=s_o,
                        seed=seed, starts=starts, tol=tol, output=output)
    data = AdapterFactory.load(config.input)
    if isinstance(data, TensorSet):
        if config.s_o is not None and config.s_o != data.max_rank:
            data = TensorSet(data.dim, config.s_o,
                             {r: t for r, t in data.tensors.items() if r <= config.s_o},
                             data.scaled)
        harmonics = moment_to_harmonic(data)
    elif isinstance(data, HarmonicVector):
        harmonics = data.truncated(config.s_o) if config.s_o is not None else data
        data = harmonic_to_moment(harmonics)
    else:
        raise RecordFormatError("expected a tensors or harmonics record", str(config.input))

    reconstructor = ShapeReconstructor(config.solver_config())
    result = (reconstructor.from_harmonics(harmonics) if config.noisy
              else reconstructor.from_tensors(data))

    AdapterFactory.save(result, config.output / "result.json")
    if result.case in (CaseTag.CASE2_LOWER_DIM, CaseTag.CASE3_POLYTOPE):
        AdapterFactory.save(result.polytope, config.output / "mesh.off")
    console.print(f"case = {result.case.value}")
    console.print(f"residual = {result.residual:.6e}")
    if result.case is CaseTag.CASE4_NO_OUTPUT:
        console.print("The algorithm has no output.")
        sys.exit(EXIT_NO_OUTPUT)


@cli.command()
@click.argument("n", type=int)
@click.argument("m", type=int)
@click.option("--out", "output", type=click.Path(path_type=Path))
@click.pass_context
@exit_codes
def counterexample(ctx, n, m, output):
    """Polytope with M facets in R^N and a non-polytope with equal low tensors."""
    config = run_config(ctx, "counterexample", output=output)
    polytope_measure, other_measure = counterexample_pair(n, m)
    max_degree = m - n + 2
    table = agreement_table(polytope_measure, other_measure, max_degree)

    AdapterFactory.save(table, config.output / "counterexample.csv")
    AdapterFactory.save(harmonic_vector(polytope_measure, max_degree),
                        config.output / "polytope_harmonics.json")
    AdapterFactory.save(harmonic_vector(other_measure, max_degree),
                        config.output / "body_harmonics.json")
    console.print(f"agreement up to rank {agreement_rank(table)}")


@cli.command()
@click.argument("body")
@click.option("--so", "degrees", required=True, help="Comma-separated s_o values, e.g. 2,4,6")
@click.option("--seed", type=int)
@click.option("--starts", type=int)
@click.option("--resolution", type=click.Choice(["coarse", "medium", "fine"]))
@click.option("--out", "output", type=click.Path(path_type=Path))
@click.pass_context
@exit_codes
def converge(ctx, body, degrees, seed, starts, resolution, output):
    """Reconstruction error of BODY as s_o grows."""
    config = run_config(ctx, "converge", input=body, seed=seed, starts=starts,
                        resolution=resolution, output=output)
    table = convergence_experiment(load_body(body), parse_list(degrees, int),
                                   config.solver_config(), config.resolution)
    AdapterFactory.save(table, config.output / "converge.csv")

    summary = Table(title=f"Convergence: {body}")
    for column in ("s_o", "residual", "dt"):
        summary.add_column(column, justify="right")
    for row in table.itertuples():
        summary.add_row(str(row.s_o), f"{row.residual:.3e}", f"{row.dt:.4e}")
    console.print(summary)


@cli.command()
@click.argument("body")
@click.option("--so", "s_o", type=int)
@click.option("--sigma2", help="Comma-separated noise variances")
@click.option("--relative", is_flag=True,
              help="Read --sigma2 as fractions of the degree-0 entry (std = f * psi_0)")
@click.option("--trials", type=int)
@click.option("--seed", type=int)
@click.option("--starts", type=int)
@click.option("--resolution", type=click.Choice(["coarse", "medium", "fine"]))
@click.option("--out", "output", type=click.Path(path_type=Path))
@click.pass_context
@exit_codes
def noise(ctx, body, s_o, sigma2, relative, trials, seed, starts, resolution, output):
    """Least-squares reconstruction of BODY from noisy harmonic intrinsic volumes."""
    config = run_config(ctx, "noise", input=body, s_o=s_o, sigma2=parse_list(sigma2, float),
                        trials=trials, seed=seed, starts=starts, resolution=resolution,
                        output=output)
    if config.s_o is None:
        raise ValueError("--so is required")
    spec = load_body(body)
    variances = config.sigma2
    if relative:
        exact = harmonic_vector(surface_area_measure(spec, config.resolution), config.s_o)
        variances = [s ** 2 for s in relative_sigma(exact, variances)]

    table = noise_experiment(spec, config.s_o, variances, config.trials,
                             config.solver_config(), config.seed, config.resolution,
                             threads=config.threads)
    AdapterFactory.save(table, config.output / "noise.csv")

    summary = summarize_noise(table)
    view = Table(title=f"Noise: {body}, s_o={config.s_o}")
    for column in summary.columns:
        view.add_column(str(column), justify="right")
    for row in summary.itertuples(index=False):
        view.add_row(*[f"{v:.4g}" if isinstance(v, float) else str(v) for v in row])
    console.print(view)


@cli.command()
@click.argument("first", type=click.Path(path_type=Path))
@click.argument("second", type=click.Path(path_type=Path))
@click.option("--out", "output", type=click.Path(path_type=Path),
              help="Write the distances as JSON to this file")
@click.pass_context
@exit_codes
def distance(ctx, first, second, output):
    """Hausdorff and translative Hausdorff distance of two OFF meshes."""
    run_config(ctx, "distance", input=first)
    bodies = [AdapterFactory.load(path) for path in (first, second)]
    if not all(isinstance(b, Polytope) for b in bodies):
        raise RecordFormatError("distance needs two OFF meshes")
    plain = float(hausdorff(*bodies))
    translative, shift = translative_hausdorff(*bodies, return_translation=True)
    record = {
        'kind': 'distance',
        'hausdorff': plain,
        'translative_hausdorff': float(translative),
        'translation': np.asarray(shift).tolist(),
    }
    if output is not None:
        AdapterFactory.save(record, output)
    console.print(f"hausdorff = {plain:.6e}")
    console.print(f"translative hausdorff = {float(translative):.6e}")


def main():
    cli(obj={})


if __name__ == "__main__":
    main()
