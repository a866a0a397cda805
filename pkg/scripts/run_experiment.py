import logging

import click

from obddlab.config import COMMANDS, ExperimentConfig
from obddlab.constants import ReportFormat
from obddlab.harness import run


def run_experiment(config):
    click.echo(f"Running {config.cmd} with seed {config.seed}")

    report = run(config)

    click.echo("------------------")
    click.echo(f"Function: {report.function} (n={report.n})")
    click.echo(f"Width/dimension: {report.width_or_dim}")
    if report.min_accept is not None or report.max_reject is not None:
        click.echo(f"Min accept: {report.min_accept}  Max reject: {report.max_reject}")
    if report.total:
        click.echo(f"Agree: {report.agree}/{report.total}")
    for name, passed in report.verdicts.items():
        click.echo(f"  {name}: {'pass' if passed else 'FAIL'}")
    if report.reason:
        click.echo(f"Reason: {report.reason}")
    if config.out:
        click.echo(f"Report written to {config.out}")
    click.echo("------------------")

    return report.exit_code


@click.command()
@click.option("--cmd", type=click.Choice(COMMANDS), help="Experiment to run.")
@click.option("--fn", "fn", default=None, help='Function spec, e.g. "eq:q=2".')
@click.option("--program", default=None, help='Builder spec, e.g. "mod-qobdd:p=3,n=6".')
@click.option("--q", type=int, default=None)
@click.option("--p", type=int, default=None)
@click.option("--m", type=int, default=None)
@click.option("--k", type=int, default=None)
@click.option("--n", type=int, default=None)
@click.option("--epsilon", type=float, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--samples", type=int, default=None)
@click.option("--orders", default=None, help='"all", "id" or a number of random orders.')
@click.option("--mode", type=click.Choice(["plain", "xor"]), default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--format", "fmt", type=click.Choice([f.value for f in ReportFormat]), default=None)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--verbose", "-v", count=True)
@click.pass_context
def main(ctx, config_path, verbose, fmt, **flags):
    """Run one experiment and write its report."""
    logging.basicConfig(
        level=logging.WARNING - 10 * min(verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    flags["format"] = fmt
    try:
        if config_path:
            config = ExperimentConfig.load(config_path, **flags)
        else:
            if flags["cmd"] is None:
                raise click.UsageError("--cmd is required without --config")
            config = ExperimentConfig.from_mapping(
                {key: value for key, value in flags.items() if value is not None}
            )
        code = run_experiment(config)
    except click.UsageError:
        raise
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    ctx.exit(code)


if __name__ == "__main__":
    main()
