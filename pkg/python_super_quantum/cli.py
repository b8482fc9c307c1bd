# cli.py
"""superq: command-line runs of the bound, interference and box analyses.

Reports go to standard output (or ``--out``); logs and diagnostics go to
standard error. Exit codes: 0 success, 1 computation failure, 2 input error,
3 invariant breach.
"""
from fractions import Fraction
from pathlib import Path
from typing import Callable, List, Optional
import logging
import sys
import time

import click
from rich.console import Console
from rich.markup import escape

from python_super_quantum.bounds import (
    LOGIC_PENTAGON_BOUND,
    MAX_SEARCH_DIM,
    MIN_SEARCH_DIM,
    PENTAGON_EVENTS,
    UMBRELLA_VALUE,
    WeightedEventFamily,
    bound_report,
    kcbs_correlator_sum,
    kcbs_value,
    quantum_value,
    search_pentagon_projectors,
    umbrella_projectors,
)
from python_super_quantum.boxes import (
    ALGEBRAIC_CHSH_MAX,
    CANONICAL_CHSH_ANGLES,
    CANONICAL_PR_BOX,
    TSIRELSON_BOUND,
    NoSignalingBox,
    box_to_pentagon,
    chsh,
    chsh_symmetrized,
    classical_chsh_max,
    correlators,
    no_signaling_check,
    parse_box,
    pr_boxes,
    quantum_chsh,
    serialize_box,
    tsirelson_grid_search,
)
from python_super_quantum.config import LOG_LEVELS, Settings, load_settings
from python_super_quantum.errors import (
    ComputationError,
    InputError,
    InvalidDimensionError,
    InvariantBreachError,
)
from python_super_quantum.fixtures import BOX, LOGIC, registry
from python_super_quantum.hilbert import (
    FLOAT_TOL,
    i2_witness,
    interference_corpus,
    property_suite,
    search_i2_witness,
)
from python_super_quantum.logic_core import (
    GreechieLogic,
    LogicState,
    parse_logic,
    pentagon_logic,
    pentagon_state,
    serialize_logic,
)
from python_super_quantum.rational_lp import format_rational, parse_rational
from python_super_quantum.report import RunReport

logger = logging.getLogger(__name__)

console = Console(stderr=True)

EXIT_FAILURE = 1
EXIT_INPUT = 2
EXIT_BREACH = 3


def _configure_logging(level: str):
    logging.basicConfig(
        level=getattr(logging, level),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )
    logging.getLogger().setLevel(getattr(logging, level))


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise InputError(f"Cannot read {path}: {e.strerror or e}") from e


def _load_logic(source: str) -> GreechieLogic:
    if source in registry:
        return registry.build(source, LOGIC)
    return parse_logic(_read_text(source))


def _load_box(source: str) -> NoSignalingBox:
    if source in registry:
        return registry.build(source, BOX)
    return parse_box(_read_text(source))


def _split(text: str) -> List[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _command_echo(ctx: click.Context) -> str:
    options = []
    for name, value in sorted(ctx.params.items()):
        if name in ("source", "out", "timing") or value is None or value is False:
            continue
        flag = "--" + name.replace("_", "-")
        options.append(flag if value is True else f"{flag}={value}")
    head = ["superq", ctx.info_name]
    if "source" in ctx.params:
        head.append(ctx.params["source"])
    return " ".join(head + options)


def _emit(ctx: click.Context, build: Callable[[], RunReport]):
    """Run one analysis, print its report and map errors to exit codes"""
    out: Optional[str] = ctx.params.get("out")
    started = time.perf_counter()
    try:
        report = build()
    except InputError as e:
        logger.error(f"{ctx.info_name} failed: {e}")
        console.print(f"[bold red]error:[/bold red] {escape(str(e))}")
        ctx.exit(EXIT_INPUT)
    except InvariantBreachError as e:
        logger.error(f"{ctx.info_name} aborted: {e}")
        console.print(f"[bold red]invariant breach:[/bold red] {escape(str(e))}")
        ctx.exit(EXIT_BREACH)
    except ComputationError as e:
        logger.error(f"{ctx.info_name} failed: {e}")
        console.print(f"[bold red]computation failed:[/bold red] {escape(str(e))}")
        ctx.exit(EXIT_FAILURE)

    elapsed = time.perf_counter() - started
    logger.info(f"{ctx.info_name} finished in {elapsed:.3f}s")
    if ctx.params.get("timing"):
        report.wall_time = elapsed
    text = report.render()
    if out:
        Path(out).write_text(text)
        console.print(f"Report written to {escape(out)}")
    else:
        click.echo(text, nl=False)


def _settings(ctx: click.Context) -> Settings:
    return ctx.obj["settings"]


def _new_report(ctx: click.Context, inputs: dict, seed: Optional[int] = None) -> RunReport:
    return RunReport(
        command=_command_echo(ctx),
        inputs=inputs,
        seed=seed,
        float_digits=_settings(ctx).report.float_digits,
    )


def _describe_state(state: LogicState) -> str:
    return " ".join(f"{atom}={format_rational(value)}" for atom, value in state.assignment)


out_option = click.option("--out", type=click.Path(dir_okay=False), help="Write the report to a file")
timing_option = click.option("--timing", is_flag=True, help="Append wall time to the report")


@click.group()
@click.option("--config", "config_path", type=click.Path(dir_okay=False), help="Settings YAML file")
@click.option("--log-level", type=click.Choice(LOG_LEVELS, case_sensitive=False), help="Logging level")
@click.pass_context
def cli(ctx: click.Context, config_path: Optional[str], log_level: Optional[str]):
    """Bounds, interference terms and no-signaling boxes for super-quantum probability."""
    try:
        settings = load_settings(config_path)
    except InputError as e:
        console.print(f"[bold red]error:[/bold red] {escape(str(e))}")
        ctx.exit(EXIT_INPUT)
    _configure_logging((log_level or settings.logging.level).upper())
    ctx.ensure_object(dict)
    ctx.obj["settings"] = settings


@cli.command()
@click.argument("source")
@click.option("--weights", help="Comma-separated exact weights, e.g. 1,1,0,0,0")
@click.option("--events", help="Comma-separated atoms forming the family")
@out_option
@timing_option
@click.pass_context
def bounds(ctx, source, weights, events, out, timing):
    """Classical and logic-level maxima of a weighted sum of atom probabilities.

    SOURCE is a logic JSON file or a built-in name (pentagon).
    """
    def build() -> RunReport:
        logic = _load_logic(source)
        is_pentagon = logic == pentagon_logic()
        chosen = tuple(_split(events)) if events else (PENTAGON_EVENTS if is_pentagon else logic.atoms)
        exact = [parse_rational(w) for w in _split(weights)] if weights else [Fraction(1)] * len(chosen)
        family = WeightedEventFamily(logic, chosen, exact)
        pentagon_family = is_pentagon and family.events == PENTAGON_EVENTS
        projectors = umbrella_projectors() if pentagon_family else None
        result = bound_report(family, projectors)

        report = _new_report(ctx, {
            "command": "bounds",
            "logic": serialize_logic(logic),
            "events": list(family.events),
            "weights": [format_rational(w) for w in family.weights],
        })
        report.add("logic", source)
        report.add("events", family.events)
        report.add("weights", family.weights)
        report.add("classical-max", result.classical_max)
        report.add("logic-max", result.logic_max)
        report.add("dispersion-free-max", result.dispersion_free_max)
        report.add("maximizers", len(result.logic_maximizers))
        report.add("unique-maximizer", result.unique_maximizer)
        for index, state in enumerate(result.logic_maximizers, start=1):
            report.add(f"maximizer-{index}", _describe_state(state))
        if is_pentagon:
            wright = pentagon_state(logic)
            report.add("maximizer-is-pentagon-state", result.logic_maximizers == (wright,))
        if pentagon_family:
            report.add("quantum-umbrella", result.quantum_value)
            if all(w == 1 for w in family.weights):
                best = result.logic_maximizers[0]
                report.add("kcbs-logic-min", kcbs_value([best[e] for e in PENTAGON_EVENTS]))
                report.add("kcbs-classical-min", 5 - 4 * result.classical_max)
                report.add("kcbs-quantum-min", 5 - 4 * result.quantum_value)
        return report

    _emit(ctx, build)


@cli.command()
@click.option("--dim", type=int, help="Hilbert-space dimension (3..6)")
@click.option("--trials", type=int, help="Number of random C5 realizations")
@click.option("--seed", type=int, help="Master seed")
@click.option("--refine-steps", type=int, help="Local improvement steps per trial")
@out_option
@timing_option
@click.pass_context
def quantum(ctx, dim, trials, seed, refine_steps, out, timing):
    """Search rank-one projector realizations of the pentagon."""
    defaults = _settings(ctx).search
    dim = defaults.dim if dim is None else dim
    trials = defaults.trials if trials is None else trials
    seed = defaults.seed if seed is None else seed
    refine_steps = defaults.refine_steps if refine_steps is None else refine_steps

    def build() -> RunReport:
        found = search_pentagon_projectors(dim, trials, seed, refine_steps, defaults.max_retries)
        graph = WeightedEventFamily.pentagon().graph
        umbrella = quantum_value(umbrella_projectors(), graph)
        report = _new_report(ctx, {
            "command": "quantum", "dim": dim, "trials": trials,
            "refine_steps": refine_steps, "max_retries": defaults.max_retries,
        }, seed)
        report.add("dim", dim)
        report.add("trials", trials)
        report.add("refine-steps", refine_steps)
        report.add("best-value", found.value)
        report.add("best-trial", found.best_trial)
        report.add("umbrella-value", umbrella)
        report.add("sqrt5", UMBRELLA_VALUE)
        report.add("gap-to-sqrt5", UMBRELLA_VALUE - found.value)
        probabilities = found.event_probabilities()
        for k, probability in enumerate(probabilities, start=1):
            report.add(f"mu(e{k})-at-best", probability)
        report.add("kcbs-at-best", kcbs_value(probabilities))
        report.add("kcbs-correlators-at-best", kcbs_correlator_sum(probabilities))
        report.add("logic-bound", LOGIC_PENTAGON_BOUND)
        report.add("below 5/2", found.below_logic_bound)
        return report

    _emit(ctx, build)


@cli.command()
@click.option("--dim", type=int, help="Single dimension; defaults to the configured list")
@click.option("--samples", type=int, help="Number of random instances")
@click.option("--seed", type=int, help="Master seed")
@click.option("--search-witness", is_flag=True, help="Also grid-search a fresh I2 witness")
@out_option
@timing_option
@click.pass_context
def interference(ctx, dim, samples, seed, search_witness, out, timing):
    """Randomized check that I3 vanishes and T_e is orthogonally additive."""
    defaults = _settings(ctx).interference
    dims = [dim] if dim is not None else list(defaults.dims)
    samples = defaults.samples if samples is None else samples
    seed = defaults.seed if seed is None else seed

    def build() -> RunReport:
        if dim is not None and not MIN_SEARCH_DIM <= dim <= MAX_SEARCH_DIM:
            raise InvalidDimensionError(
                f"Interference dimension must be in {MIN_SEARCH_DIM}..{MAX_SEARCH_DIM}, got {dim}"
            )
        summary = interference_corpus(dims, samples, seed)
        if summary.max_abs_i3 > FLOAT_TOL:
            raise InvariantBreachError(f"|I3| reached {summary.max_abs_i3:.3e} (seed={seed})")
        if summary.max_t_residual > FLOAT_TOL:
            raise InvariantBreachError(f"T-additivity residual reached {summary.max_t_residual:.3e} (seed={seed})")
        u_report, t_report = property_suite(dims[0], 20, seed)
        witness = i2_witness()

        report = _new_report(ctx, {"command": "interference", "dims": dims, "samples": samples}, seed)
        report.add("dims", tuple(dims))
        report.add("samples", samples)
        report.add("max-abs-i3", summary.max_abs_i3)
        report.add("max-t-residual", summary.max_t_residual)
        report.add("max-jordan-gap", summary.max_t_form_gap)
        report.add("max-abs-i2", summary.max_abs_i2)
        report.add("i3-within-tolerance", summary.max_abs_i3 <= FLOAT_TOL)
        report.add("t-additive", summary.max_t_residual <= FLOAT_TOL)
        report.add("u-properties-max-residual", u_report.max_residual)
        report.add("t-properties-max-residual", t_report.max_residual)
        report.add("i2-witness", witness.value)
        report.add("i2-witness-nonzero", abs(witness.value) >= 0.1)
        if search_witness:
            found = search_i2_witness(_settings(ctx).interference.witness_grid_steps)
            report.add("i2-grid-search", found.value)
        return report

    _emit(ctx, build)


@cli.command()
@click.argument("source")
@click.option("--pentagon", is_flag=True, help="Embed the box into the pentagon scenario")
@out_option
@timing_option
@click.pass_context
def box(ctx, source, pentagon, out, timing):
    """No-signaling verdict and CHSH value of a box.

    SOURCE is a box JSON file or a built-in name (pr1..pr8, uniform).
    """
    def build() -> RunReport:
        loaded = _load_box(source)
        check = no_signaling_check(loaded)
        report = _new_report(ctx, {"command": "box", "box": serialize_box(loaded), "pentagon": pentagon})
        report.add("box", source)
        report.add("no-signaling", "ok" if check.ok else "violated")
        for violation in check.violations:
            report.add("violation", violation)
        report.add("correlators", correlators(loaded).values)
        report.add("chsh", chsh(loaded))
        report.add("chsh-symmetrized", chsh_symmetrized(loaded))
        if pentagon:
            embedding = box_to_pentagon(loaded)
            for k, value in enumerate(embedding.probabilities, start=1):
                report.add(f"mu(e{k})", value)
            for first, second, observable in embedding.certificate:
                report.add(f"e{first} exclusive e{second}", observable)
            logic_value = bound_report(WeightedEventFamily.pentagon()).logic_max
            report.add("sum", embedding.total)
            report.add("kcbs", kcbs_value(embedding.probabilities))
            report.add("equals-logic-max", embedding.total == logic_value)
        return report

    _emit(ctx, build)


@cli.command("chsh-bounds")
@click.option("--grid-steps", type=int, help="Angle grid resolution for the singlet search")
@out_option
@timing_option
@click.pass_context
def chsh_bounds(ctx, grid_steps, out, timing):
    """Classical, quantum and algebraic CHSH tiers."""
    steps = _settings(ctx).chsh.grid_steps if grid_steps is None else grid_steps

    def build() -> RunReport:
        singlet = quantum_chsh(CANONICAL_CHSH_ANGLES)
        if abs(singlet - TSIRELSON_BOUND) > FLOAT_TOL:
            raise InvariantBreachError(f"Singlet CHSH {singlet!r} differs from 2√2")
        family = pr_boxes()
        family_ok = all(
            no_signaling_check(b).ok and chsh_symmetrized(b) == ALGEBRAIC_CHSH_MAX for b in family
        )
        report = _new_report(ctx, {"command": "chsh-bounds", "grid_steps": steps})
        report.add("classical", classical_chsh_max())
        report.add("quantum", singlet)
        report.add("quantum-grid-best", tsirelson_grid_search(steps))
        report.add("tsirelson", TSIRELSON_BOUND)
        report.add("algebraic", chsh(CANONICAL_PR_BOX))
        report.add("pr-boxes", len(family))
        report.add("pr-boxes-no-signaling-and-maximal", family_ok)
        return report

    _emit(ctx, build)


def main():
    cli(prog_name="superq")


if __name__ == "__main__":
    main()
