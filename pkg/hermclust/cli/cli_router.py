# hermclust/cli/cli_router.py
import click

from hermclust.cli.commands import benchmark, cluster, evaluate, generate, theory


def register_commands(group: click.Group) -> None:
    group.add_command(generate.command, name="generate")
    group.add_command(cluster.command, name="cluster")
    group.add_command(benchmark.command, name="benchmark")
    group.add_command(theory.command, name="theory")
    group.add_command(evaluate.command, name="evaluate")
