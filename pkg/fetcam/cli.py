import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import NoReturn, Optional

import click
import numpy as np
from loguru import logger

from fetcam import __version__
from fetcam.array.grid_io import random_queries, random_words, read_grid, read_queries, write_grid
from fetcam.array.tcam_array import program
from fetcam.array.waveform import scenario_instance, waveform_trace
from fetcam.array_types import ArrayShapeError, Scenario, ScenarioError
from fetcam.cell_types import CellDesign, CellEncodingError
from fetcam.configuration.configuration_manager import ConfigurationManager, RunConfig
from fetcam.configuration.configuration_types import ConfigurationError, InputFormatError
from fetcam.device_types import DeviceError
from fetcam.exploration.fom import FOM_SIZE, build_fom_report
from fetcam.exploration.search_report import run_queries, write_search_results, write_search_rows
from fetcam.exploration.sweep import run_sweep, write_sweep_csv
from fetcam.exploration.validation import validate
from fetcam.performance.calibration import CalibrationError
from fetcam.performance.timing import TimingParams

LOG_FILE_NAME = "logging.log"

EXIT_VALIDATION = 2
EXIT_INPUT = 3

# Errors caused by the configuration or the input files rather than by the tool.
INPUT_ERRORS = (ConfigurationError, InputFormatError, DeviceError, CellEncodingError, ArrayShapeError,
                CalibrationError, ScenarioError)


@dataclass
class Session:
    """The state shared by every command of one invocation."""
    manager: ConfigurationManager
    run: RunConfig
    out: Path
    designs: tuple[CellDesign, ...]
    designs_selected: bool
    early_termination: Optional[bool]

    def timing(self) -> TimingParams:
        return self.manager.effective_timing()


def fail(err: Exception) -> NoReturn:
    """Report an input or configuration error and exit."""
    logger.error(str(err))
    click.echo(f"Error: {err}", err=True)
    sys.exit(EXIT_INPUT)


@click.group()
@click.version_option(__version__)
@click.option("--config", "-c", "config_path", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="The YAML or JSON configuration file.")
@click.option("--out", "-o", type=click.Path(file_okay=False, path_type=Path), default=Path("fetcam-out"),
              show_default=True, help="The output directory.")
@click.option("--seed", "-s", type=int, help="Override the random seed.")
@click.option("--threads", "-t", type=click.IntRange(min=1), help="Override the number of worker threads.")
@click.option("--no-early-termination", is_flag=True, default=False, help="Always run both search steps.")
@click.option("--design", "-d", "design_labels", multiple=True, help="Restrict to a design (repeatable).")
@click.option("--verbose", "-v", is_flag=True, default=False, help="Log debug messages to stderr.")
@click.pass_context
def main(ctx: click.Context, config_path: Optional[Path], out: Path, seed: Optional[int], threads: Optional[int],
         no_early_termination: bool, design_labels: tuple[str, ...], verbose: bool) -> None:
    """Simulate FeFET TCAM arrays and explore their design space."""
    out.mkdir(parents=True, exist_ok=True)

    # Output logs.
    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if verbose else "INFO")
    logger.add(out.joinpath(LOG_FILE_NAME), level="DEBUG")

    try:
        manager = ConfigurationManager(config_path)
        run = manager.run_config()
        designs = tuple(CellDesign.from_label(label) for label in design_labels) or run.designs
    except INPUT_ERRORS as err:
        fail(err)

    overrides = {}
    if seed is not None:
        overrides["seed"] = seed
    if threads is not None:
        overrides["threads"] = threads
    run = replace(run, **overrides)

    logger.info(f"Configuration: {config_path or 'built-in defaults'}")
    logger.info(f"Designs: {', '.join(design.label for design in designs)}")
    ctx.obj = Session(manager=manager, run=run, out=out, designs=designs, designs_selected=bool(design_labels),
                      early_termination=False if no_early_termination else None)


@main.command("validate")
@click.pass_obj
def validate_command(session: Session) -> None:
    """Check the divider constraints, memory windows and cell truth tables."""
    try:
        report = validate(session.manager)
    except INPUT_ERRORS as err:
        fail(err)

    for line in report.lines():
        click.echo(line)
    with open(session.out.joinpath("validation.txt"), "w") as stream:
        stream.write("\n".join(report.lines()) + "\n")

    if not report.ok:
        for check in report.failures:
            logger.error(f"Validation failed: {check.name}: {check.detail}")
        sys.exit(EXIT_VALIDATION)
    logger.info(f"All {len(report.checks)} checks passed")


@main.command("search")
@click.option("--contents", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="The stored words, one row of 0/1/X per line; random when omitted.")
@click.option("--queries", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="The queries, one row of 0/1 per line; random when omitted.")
@click.pass_obj
def search_command(session: Session, contents: Optional[Path], queries: Optional[Path]) -> None:
    """Program the array and search it with every query."""
    run = session.run
    rng = np.random.default_rng(run.seed)
    try:
        words = read_grid(contents) if contents else random_words(rng, run.rows, run.cols)
        query_codes = read_queries(queries) if queries else random_queries(rng, run.random_queries, words.shape[1])
        if not contents or not queries:
            write_grid(session.out.joinpath("contents.txt"), words)
            write_grid(session.out.joinpath("queries.txt"), query_codes)

        timing = session.timing()
        results = []
        for design in session.designs:
            config = session.manager.array_config(design, timing, rows=words.shape[0], cols=words.shape[1],
                                                  early_termination=session.early_termination)
            programmed = program(config, words)
            logger.info(f"{design.label}: programmed {config.rows} x {config.cols} in {programmed.write_steps} "
                        f"write steps ({programmed.write_energy * 1e15:.4g} fJ)")
            results.append(run_queries(config, programmed.state, query_codes, run.threads))
    except INPUT_ERRORS as err:
        fail(err)

    write_search_results(results, session.out.joinpath("search_results.csv"))
    write_search_rows(results, session.out.joinpath("search_rows.csv"))
    logger.info(f"Searched {len(query_codes)} queries: results written to {session.out}")


@main.command("sweep")
@click.option("--strict", is_flag=True, default=False, help="Exit with status 2 when a trend is violated.")
@click.pass_obj
def sweep_command(session: Session, strict: bool) -> None:
    """Sweep the word length and check the latency and energy trends."""
    try:
        timing = session.timing()
        configs = [session.manager.array_config(design, timing, rows=1, cols=word_len)
                   for design in session.designs for word_len in session.run.word_lengths]
        result = run_sweep(configs, session.run.threads)
    except INPUT_ERRORS as err:
        fail(err)

    write_sweep_csv(result, session.out.joinpath("sweep.csv"))
    logger.info(f"Swept {len(result.points)} points: {sum(t.passed for t in result.trends)}/{len(result.trends)} "
                f"trends hold")
    if strict and not result.ok:
        logger.error("Sweep trends violated")
        sys.exit(EXIT_VALIDATION)


@main.command("fom")
@click.pass_obj
def fom_command(session: Session) -> None:
    """Report the figures of merit of every design at 64 x 64."""
    try:
        timing = session.timing()
        configs = [session.manager.array_config(design, timing, rows=FOM_SIZE, cols=FOM_SIZE)
                   for design in session.designs]
        report = build_fom_report(configs, session.manager.fom_targets())
    except INPUT_ERRORS as err:
        fail(err)

    report.write_csv(session.out.joinpath("fom.csv"))
    report.write_json(session.out.joinpath("fom.json"))
    logger.info(f"Figures of merit written to {session.out}")


@main.command("waveform")
@click.option("--scenario", type=click.Choice([scenario.label for scenario in Scenario]), default="match",
              show_default=True, help="The single-row search case to trace.")
@click.option("--time-step", type=float, help="The sample spacing in seconds.")
@click.pass_obj
def waveform_command(session: Session, scenario: str, time_step: Optional[float]) -> None:
    """Trace the select lines, match line and SA output of a two-step search."""
    chosen = Scenario[scenario.upper()]
    designs = session.designs if session.designs_selected else \
        tuple(design for design in session.designs if design.is_paired)

    try:
        if not designs:
            raise ScenarioError("No 1.5T1Fe design selected")

        timing = session.timing()
        for design in designs:
            config = session.manager.array_config(design, timing, early_termination=session.early_termination)
            single, state, query = scenario_instance(config, chosen)
            trace = waveform_trace(single, state, query, time_step or timing.trace_step)
            path = session.out.joinpath(f"waveform_{design.label}_{chosen.label}.csv")
            trace.write_csv(path)
            logger.info(f"{design.label}: {chosen.label} trace with {len(trace.time)} samples written to {path}")
    except INPUT_ERRORS as err:
        fail(err)


if __name__ == "__main__":
    main()
