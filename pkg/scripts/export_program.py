import logging

import click

from obddlab.errors import CapExceededError
from obddlab.harness import export_program


@click.command()
@click.argument("spec")
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--epsilon", type=float, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--verbose", "-v", count=True)
def main(spec, path, epsilon, seed, verbose):
    """Build the program named by SPEC and write it to PATH as JSON."""
    logging.basicConfig(level=logging.WARNING - 10 * min(verbose, 2))

    if epsilon is not None and "epsilon=" not in spec:
        spec = f"{spec}{',' if ':' in spec else ':'}epsilon={epsilon}"
    if seed is not None and "seed=" not in spec:
        spec = f"{spec}{',' if ':' in spec else ':'}seed={seed}"

    click.echo(f"Building {spec}")

    try:
        program = export_program(spec, path)
    except CapExceededError as exc:
        click.echo(f"Cap exceeded: {exc}", err=True)
        raise SystemExit(1)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc

    click.echo("------------------")
    click.echo(f"Wrote {program.n}-variable program of width {program.width} to {path}")


if __name__ == "__main__":
    main()
