#!/usr/bin/env python3
"""
vcstream - Main Application
Command-line entry point: run a stream file, generate instances, sweep seeds

    python -m vcstream.app run --input stream.txt [--mode pdpsa] [--seed 7]
    python -m vcstream.app gen --gen promised --n 40 --k 4 --output s.txt
    python -m vcstream.app sweep --mode dpsa --trials 300 --workers 8
"""

import logging
import sys
from pathlib import Path
from typing import List

import click
import numpy as np
from dotenv import load_dotenv

from vcstream.config.config import ConfigManager, get_config, reload_config
from vcstream.config.profiles import get_profile
from vcstream.core import Config, StreamUpdate
from vcstream.errors import ConfigError, VcStreamError
from vcstream.services.runner import RunOptions, run_stream, run_sweep
from vcstream.utils.generators import (
    gen_disjointness_gadget,
    gen_index_gadget,
    gen_promised_stream,
    gen_random_stream,
    index_gadget_stream,
    validate_disjointness_gadget,
    validate_index_gadget,
)
from vcstream.utils.run_tracker import get_run_tracker
from vcstream.utils.stream_io import MODES, QUERY, StreamFile, read_stream, write_stream

logger = logging.getLogger(__name__)

SCRIPTS_DIR = Path(__file__).resolve().parent.parent / "SCRIPTS"


def configure_logging(config: ConfigManager):
    """Root logging from the YAML `logging` section; third-party loggers quieted"""
    logging_config = config.get_logging_config()
    level = 'DEBUG' if config.is_debug() else logging_config.get('level', 'INFO')
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format=logging_config.get('format', '%(asctime)s [%(levelname)s] %(name)s: %(message)s'),
    )
    logging.getLogger('networkx').setLevel(logging.WARNING)
    logging.getLogger('hypothesis').setLevel(logging.WARNING)
    logger.debug("✅ Logging configured")


def build_config(manager: ConfigManager, n: int, k: int, delta, c, alpha, seed) -> Config:
    try:
        return Config.from_manager(manager, n=n, k=k, delta=delta, c=c, alpha=alpha, seed=seed)
    except ConfigError as e:
        logger.error(f"❌ {e.user_message}")
        sys.exit(e.exit_code)


@click.group()
@click.option('--config', 'config_file', type=click.Path(exists=True, dir_okay=False),
              help='Alternative YAML configuration file')
@click.option('--profile', type=click.Choice(['default', 'desk', 'testing']),
              help='Run profile (defaults to VCSTREAM_PROFILE)')
@click.pass_context
def cli(ctx, config_file, profile):
    """Parameterized vertex cover over graph streams"""
    load_dotenv()
    try:
        config = reload_config(config_file) if config_file else get_config()
    except ConfigError as e:
        click.echo(f"error={e.user_message}", err=True)
        sys.exit(e.exit_code)
    configure_logging(config)
    if not config.validate_config():
        logger.error("❌ Configuration validation failed - exiting")
        sys.exit(1)
    logger.info(f"🔧 Environment: {config.get_environment()}")
    ctx.obj = {'config': config, 'profile': get_profile(profile)}


# ==================== run ====================

@cli.command()
@click.option('--input', 'input_file', required=True, type=click.Path(exists=True, dir_okay=False))
@click.option('--mode', type=click.Choice(MODES), help='Overrides the header mode')
@click.option('--n', type=int, help='Overrides the header vertex count')
@click.option('--k', type=int, help='Overrides the header parameter')
@click.option('--delta', type=float)
@click.option('--c', type=float)
@click.option('--alpha', type=float)
@click.option('--seed', type=int)
@click.option('--validate', is_flag=True, help='Reject invalid streams while parsing')
@click.option('--approx', is_flag=True, help='dpsa: gate on the distinct-edge estimate')
@click.option('--strict-degrees', is_flag=True, help='pdpsa: branch on exact degrees')
@click.option('--audit', is_flag=True, help='pdpsa: check invariants after every update')
@click.pass_context
def run(ctx, input_file, mode, n, k, delta, c, alpha, seed, validate, approx, strict_degrees, audit):
    """Replay a stream file and print the report"""
    manager: ConfigManager = ctx.obj['config']
    profile = ctx.obj['profile']
    try:
        stream = read_stream(input_file, validate=validate)
    except VcStreamError as e:
        logger.error(f"❌ {e.user_message} {e.technical_details}".rstrip())
        click.echo(f"error={e.user_message}")
        click.echo(f"exit_code={e.exit_code}")
        sys.exit(e.exit_code)

    if alpha is None and profile.ALPHA != 1.0:
        alpha = profile.ALPHA
    config = build_config(manager, n or stream.n, stream.k if k is None else k, delta, c, alpha, seed)
    options = RunOptions(approx=approx, strict_degrees=strict_degrees,
                         audit=audit or profile.AUDIT, dpsa=manager.get_dpsa_config())
    report = run_stream(stream, config, mode=mode, options=options)
    click.echo(report.render(), nl=False)
    sys.exit(report.exit_code)


# ==================== gen ====================

def _bits(text: str) -> List[int]:
    if not text or any(ch not in '01' for ch in text):
        raise click.BadParameter(f"expected a 0/1 string, got {text!r}")
    return [int(ch) for ch in text]


def _graph_stream(graph, k: int, mode: str) -> StreamFile:
    items = [StreamUpdate.insert(e.u, e.v) for e in graph.edges()]
    return StreamFile.build(graph.n, k, mode, items + [QUERY])


@cli.command()
@click.option('--gen', 'kind', required=True,
              type=click.Choice(['random', 'promised', 'index', 'disjointness']))
@click.option('--output', required=True, type=click.Path(dir_okay=False))
@click.option('--n', type=int, default=20, show_default=True)
@click.option('--k', type=int, default=3, show_default=True)
@click.option('--length', type=int, help='Updates to generate (profile default)')
@click.option('--churn', type=float, help='Deletion fraction (profile default)')
@click.option('--mode', type=click.Choice(MODES), help='Header mode for random streams')
@click.option('--seed', type=int)
@click.option('--matrix', help='index: rows of X as 0/1 strings separated by commas')
@click.option('--I', 'row', type=int, default=1, show_default=True, help='index: Bob row')
@click.option('--J', 'col', type=int, default=1, show_default=True, help='index: Bob column')
@click.option('--x', 'x_bits', help='disjointness: Alice bit string')
@click.option('--y', 'y_bits', help='disjointness: Bob bit string')
@click.option('--pad', type=int, default=0, show_default=True, help='disjointness: padding triangles')
@click.pass_context
def gen(ctx, kind, output, n, k, length, churn, mode, seed, matrix, row, col, x_bits, y_bits, pad):
    """Generate an instance, re-validate it with an oracle, and write it"""
    manager: ConfigManager = ctx.obj['config']
    profile = ctx.obj['profile']
    seed = manager.get_stream_defaults().get('seed', 0) if seed is None else seed
    length = profile.STREAM_LENGTH if length is None else length
    churn = profile.CHURN if churn is None else churn
    rng = np.random.default_rng(seed)

    try:
        if kind == 'random':
            stream = gen_random_stream(n, length, rng, delete_rate=churn, k=k, mode=mode or 'dpsa')
        elif kind == 'promised':
            stream = gen_promised_stream(build_config(manager, n, k, None, None, None, seed),
                                         length, churn, rng=rng, mode=mode or 'pdpsa')
        elif kind == 'index':
            if not matrix:
                raise click.BadParameter("index gadget needs --matrix")
            X = [_bits(r) for r in matrix.split(',')]
            stream = index_gadget_stream(X, row, col)
            if not validate_index_gadget(X, row, col, gen_index_gadget(X, row, col)):
                raise VcStreamError("index gadget failed oracle re-validation")
        else:
            x, y = _bits(x_bits or ''), _bits(y_bits or '')
            graph = gen_disjointness_gadget(x, y, pad)
            if not validate_disjointness_gadget(x, y, graph):
                raise VcStreamError("disjointness gadget failed oracle re-validation")
            stream = _graph_stream(graph, pad, 'fvs')
    except (VcStreamError, ValueError) as e:
        message = e.user_message if isinstance(e, VcStreamError) else str(e)
        logger.error(f"❌ Generation failed: {message}")
        click.echo(f"error={message}")
        sys.exit(getattr(e, 'exit_code', 1))

    path = write_stream(stream, output)
    click.echo(f"output={path}")
    click.echo(f"n={stream.n}")
    click.echo(f"k={stream.k}")
    click.echo(f"updates={len(stream.items) - stream.query_count}")


# ==================== sweep ====================

@cli.command()
@click.option('--mode', required=True, type=click.Choice(MODES))
@click.option('--n', type=int, default=20, show_default=True)
@click.option('--k', type=int, default=3, show_default=True)
@click.option('--trials', type=int, help='Replays (profile default)')
@click.option('--length', type=int, help='Updates per replay (profile default)')
@click.option('--churn', type=float, help='Deletion fraction (profile default)')
@click.option('--workers', type=int, help='Thread pool size (harness.workers)')
@click.option('--delta', type=float)
@click.option('--alpha', type=float)
@click.option('--seed', type=int)
@click.option('--approx', is_flag=True)
@click.option('--log-dir', type=click.Path(file_okay=False), help='Also write split error/info log files')
@click.pass_context
def sweep(ctx, mode, n, k, trials, length, churn, workers, delta, alpha, seed, approx, log_dir):
    """Monte-Carlo replays of generated streams, judged by the oracles"""
    manager: ConfigManager = ctx.obj['config']
    profile = ctx.obj['profile']
    if log_dir is None and manager.get_environment() == 'production':
        log_dir = manager.get_logging_config().get('file_dir')
    if log_dir:
        if str(SCRIPTS_DIR) not in sys.path:
            sys.path.insert(0, str(SCRIPTS_DIR))
        import log_module
        log_module.setup_logging(log_dir)

    if alpha is None:
        alpha = profile.ALPHA
    base = build_config(manager, n, k, delta, None, alpha, seed)
    summary = run_sweep(
        mode, base,
        trials=profile.TRIALS if trials is None else trials,
        length=profile.STREAM_LENGTH if length is None else length,
        churn=profile.CHURN if churn is None else churn,
        workers=workers or manager.get_workers(),
        options=RunOptions(approx=approx, audit=profile.AUDIT, dpsa=manager.get_dpsa_config(),
                           oracle_limits=manager.get_oracle_limits()),
    )
    for line in get_run_tracker().summary_lines():
        click.echo(line)
    exit_codes = manager.get_exit_codes()
    sys.exit(exit_codes.get('ok', 0) if summary['failed_runs'] == 0
             else exit_codes.get('sketch_failure', 5))


if __name__ == '__main__':
    cli()
