import csv
import io
import json
import logging
import sys
import time
from collections.abc import Iterator
from contextlib import contextmanager
from enum import StrEnum
from functools import partial
from pathlib import Path
from typing import Annotated, Any

import typer
from pydantic import BaseModel, Field, ValidationError, model_validator

from .cliques import (
    CliqueMode,
    iter_condition_sets,
    max_condition_set,
    reference_max_condition_set,
)
from .config import (
    CLIQUE_BUDGET,
    COVER_BUDGET,
    INSTANCE_BUDGET,
    MONOMIAL_BUDGET,
    NEQ_MAX_N,
    RECTANGLE_BUDGET,
    SET_BUDGET,
    default_threads,
)
from .counting import bound_table, check_counting_inequalities, separation_table
from .covers import (
    CoverTarget,
    communication_lower_bound,
    cover_to_csv,
    diagonal_cover_lower_bound,
    heq_cover,
    neq_cover,
    theorem_applies,
    theorem_cover_exponent,
    verify_cover,
)
from .errors import NdcommError, ParameterError
from .heq_models import HeqParams
from .heqfun import InstanceMode, all_inputs, enumerate_instances, heq, neq
from .polymethod import certify_independence
from .protocol_verify import verify_strong_nondeterminism, verify_weak_nondeterminism
from .protocols import PROTOCOLS, proof_space
from .results_db import add_run
from .version import __version__

log = logging.getLogger(__name__)

app = typer.Typer(no_args_is_help=True, add_completion=False)


class OutputFormat(StrEnum):
    json = "json"
    csv = "csv"


class Settings(BaseModel):
    threads: int = Field(ge=1)
    record: bool = False
    timing: bool = False
    output: Path | None = None
    output_format: OutputFormat = OutputFormat.json


class RunConfig(BaseModel):
    """Everything that determines a report's content"""

    command: str
    protocol: str | None = None
    function: str | None = None
    k: int | None = Field(default=None, ge=1)
    kprime: int | None = Field(default=None, ge=1)
    n: int | None = Field(default=None, ge=1)
    mode: str | None = None
    target: str | None = None
    seed: int | None = None
    count: int | None = Field(default=None, ge=0)
    iterations: int | None = Field(default=None, ge=1)
    budget: int | None = Field(default=None, gt=0)
    rect_budget: int | None = Field(default=None, gt=0)
    set_budget: int | None = Field(default=None, gt=0)
    k_range: str | None = None
    kprime_range: str | None = None
    all_valid_sets: bool | None = None
    cross_check: bool | None = None

    @model_validator(mode="after")
    def check_seed(self):
        if self.mode in ("sample", "heuristic") and self.seed is None:
            raise ValueError(f"{self.mode} mode needs --seed")
        return self

    @property
    def params(self) -> HeqParams:
        if self.k is None or self.kprime is None:
            raise ParameterError(f"{self.command} needs --k and --kprime")
        return HeqParams(k=self.k, kprime=self.kprime)


def parse_range(text: str, k: int | None = None) -> range:
    """Inclusive A..B, or a single value; with k given, 'k' and '2k' are allowed"""

    def endpoint(token: str) -> int:
        token = token.strip()
        if k is not None and token in ("k", "2k"):
            return k if token == "k" else 2 * k
        try:
            return int(token)
        except ValueError as err:
            raise ParameterError(f"bad range endpoint {token!r} in {text!r}") from err

    low, sep, high = text.partition("..")
    start = endpoint(low)
    stop = endpoint(high) if sep else start
    if stop < start and k is None:
        raise ParameterError(f"empty range {text!r}")
    return range(start, stop + 1)


@contextmanager
def diagnostics() -> Iterator[None]:
    """Map library errors to exit status 2 with a one-line message"""
    try:
        yield
    except (NdcommError, ValidationError) as err:
        if isinstance(err, ValidationError):
            message = err.errors()[0]["msg"]
        else:
            message = str(err)
        typer.echo(f"error: {message}", err=True)
        raise typer.Exit(2) from err


def _rows_to_csv(rows: list[dict[str, Any]]) -> str:
    out = io.StringIO()
    writer = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return out.getvalue()


def emit(
    ctx: typer.Context,
    config: RunConfig,
    result: Any,
    failures: list,
    started: float,
    csv_text: str | None = None,
):
    """Write the report, archive it if asked, and exit 0 iff no failures"""
    settings: Settings = ctx.obj
    duration = time.perf_counter() - started
    passed = not failures
    envelope = {
        "tool": "ndcomm",
        "version": __version__,
        "command": config.command,
        "config": config.model_dump(mode="json", exclude_none=True),
        "result": result,
        "failures": failures,
        "passed": passed,
    }
    if settings.timing:
        envelope["duration_s"] = round(duration, 6)
    report = json.dumps(envelope, indent=2) + "\n"

    text = report
    if settings.output_format == OutputFormat.csv:
        if csv_text is None:
            typer.echo(f"error: {config.command} has no CSV output", err=True)
            raise typer.Exit(2)
        text = csv_text
    if settings.output:
        settings.output.write_text(text, encoding="utf-8")
    else:
        typer.echo(text, nl=False)

    if settings.record:
        add_run(
            command=config.command,
            config=config.model_dump_json(exclude_none=True),
            passed=passed,
            failures=len(failures),
            duration=duration,
            report=report,
        )
    log.info(f"{config.command} finished in {duration:.3f}s, passed={passed}")
    raise typer.Exit(0 if passed else 1)


@app.callback()
def main(
    ctx: typer.Context,
    verbose: Annotated[bool, typer.Option("--verbose", "-v")] = False,
    quiet: Annotated[bool, typer.Option("--quiet", "-q")] = False,
    threads: Annotated[
        int | None, typer.Option(envvar="NDCOMM_THREADS", min=1)
    ] = None,
    record: Annotated[bool, typer.Option(help="Archive the run in runs.db")] = False,
    timing: Annotated[bool, typer.Option(help="Embed the duration")] = False,
    output: Annotated[Path | None, typer.Option("--output", "-o")] = None,
    output_format: Annotated[
        OutputFormat, typer.Option("--format")
    ] = OutputFormat.json,
):
    """Nondeterministic communication complexity lab"""
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )
    ctx.obj = Settings(
        threads=threads or default_threads(),
        record=record,
        timing=timing,
        output=output,
        output_format=output_format,
    )


@app.command()
def verify(
    ctx: typer.Context,
    protocol: Annotated[
        str, typer.Option(help="quantum-heq, classical-heq or neq")
    ] = "quantum-heq",
    k: Annotated[int | None, typer.Option("--k")] = None,
    kprime: Annotated[int | None, typer.Option("--kprime")] = None,
    n: Annotated[int | None, typer.Option("--n")] = None,
    mode: Annotated[InstanceMode, typer.Option()] = InstanceMode.exhaustive,
    count: Annotated[int | None, typer.Option()] = None,
    seed: Annotated[int | None, typer.Option()] = None,
    budget: Annotated[int, typer.Option()] = INSTANCE_BUDGET,
):
    """Check a protocol against weak or strong nondeterminism"""
    started = time.perf_counter()
    with diagnostics():
        if protocol == "neq":
            if n is None:
                raise ParameterError("the neq protocol needs --n")
            config = RunConfig(command="verify", protocol=protocol, n=n)
            report = verify_strong_nondeterminism(n, max_n=NEQ_MAX_N)
        elif protocol in PROTOCOLS:
            config = RunConfig(
                command="verify",
                protocol=protocol,
                k=k,
                kprime=kprime,
                mode=str(mode),
                count=count,
                seed=seed,
                budget=budget,
            )
            params = config.params
            instances = enumerate_instances(
                params, mode, count=count, seed=seed, budget=budget
            )
            report = verify_weak_nondeterminism(
                PROTOCOLS[protocol],
                heq,
                instances,
                proof_space(params),
                name=protocol,
                params={"k": params.k, "kprime": params.kprime},
                threads=ctx.obj.threads,
            )
        else:
            raise ParameterError(f"unknown protocol {protocol!r}")
    result = report.model_dump(mode="json", exclude={"failures"})
    failures = [c.model_dump(mode="json") for c in report.failures]
    emit(ctx, config, result, failures, started)


@app.command()
def bounds(
    ctx: typer.Context,
    k: Annotated[str, typer.Option("--k", help="Range A..B")] = "3..8",
    kprime: Annotated[
        str, typer.Option("--kprime-rel", "--kprime", help="Range, 'k'/'2k' allowed")
    ] = "k..12",
    separation: Annotated[
        str, typer.Option(help="k range of the k' = 2k table")
    ] = "3..20",
):
    """Counting inequalities and the table of lower and upper bounds"""
    started = time.perf_counter()
    with diagnostics():
        config = RunConfig(command="bounds", k_range=k, kprime_range=kprime)
        cells = [(a, b) for a in parse_range(k) for b in parse_range(kprime, a)]
        report = check_counting_inequalities(cells, threads=ctx.obj.threads)
        table = bound_table(cells)
        quadratic = separation_table(parse_range(separation))
    rows = [row.model_dump(mode="json") for row in table + quadratic]
    result = {
        "counting": report.model_dump(mode="json", exclude={"violations"}),
        "bounds": [row.model_dump(mode="json") for row in table],
        "separation": [row.model_dump(mode="json") for row in quadratic],
    }
    failures = [v.model_dump(mode="json") for v in report.violations]
    emit(ctx, config, result, failures, started, _rows_to_csv(rows))


@app.command()
def cover(
    ctx: typer.Context,
    function: Annotated[str, typer.Option(help="heq or neq")] = "heq",
    k: Annotated[int | None, typer.Option("--k")] = None,
    kprime: Annotated[int | None, typer.Option("--kprime")] = None,
    n: Annotated[int | None, typer.Option("--n")] = None,
    target: Annotated[
        CoverTarget | None, typer.Option(help="diagonal for heq, all-ones for neq")
    ] = None,
    budget: Annotated[int, typer.Option()] = COVER_BUDGET,
    rectangle_budget: Annotated[int, typer.Option()] = RECTANGLE_BUDGET,
    clique_bound: Annotated[
        bool, typer.Option(help="Compare with the codeword-free set bound")
    ] = False,
):
    """Exact minimum 1-cover and the communication bound it gives"""
    started = time.perf_counter()
    failures = []
    with diagnostics():
        if function == "neq":
            if n is None:
                raise ParameterError("the neq function needs --n")
            target = target or CoverTarget.all_ones
            config = RunConfig(
                command="cover",
                function=function,
                n=n,
                target=str(target),
                budget=budget,
                rect_budget=rectangle_budget,
            )
            size, rects = neq_cover(n, target, budget, rectangle_budget)
            values = list(range(2**n))
            problems = verify_cover(partial(neq, n=n), values, values, rects)
        elif function == "heq":
            target = target or CoverTarget.diagonal
            config = RunConfig(
                command="cover",
                function=function,
                k=k,
                kprime=kprime,
                target=str(target),
                budget=budget,
                rect_budget=rectangle_budget,
            )
            params = config.params
            size, rects = heq_cover(params, target, budget, rectangle_budget)
            inputs = list(all_inputs(params))
            problems = verify_cover(heq, inputs, inputs, rects)
        else:
            raise ParameterError(f"unknown function {function!r}")
        failures += problems
        result: dict[str, Any] = {
            "size": size,
            "communication_lower_bound": communication_lower_bound(size),
        }
        if clique_bound and function == "heq":
            max_a = max_condition_set(params).size
            lower = diagonal_cover_lower_bound(params, max_a)
            result["max_condition_set"] = max_a
            result["diagonal_cover_lower_bound"] = lower
            if target == CoverTarget.diagonal and size < lower:
                failures.append(f"cover size {size} below the set bound {lower}")
    result["cover"] = rects.model_dump(mode="json")
    emit(ctx, config, result, failures, started, cover_to_csv(rects))


@app.command()
def clique(
    ctx: typer.Context,
    k: Annotated[int | None, typer.Option("--k")] = None,
    kprime: Annotated[int | None, typer.Option("--kprime")] = None,
    mode: Annotated[CliqueMode, typer.Option()] = CliqueMode.exact,
    seed: Annotated[int | None, typer.Option()] = None,
    iterations: Annotated[int, typer.Option()] = 20_000,
    time_budget: Annotated[float, typer.Option(help="Seconds")] = 60.0,
    budget: Annotated[int, typer.Option()] = CLIQUE_BUDGET,
    cross_check: Annotated[bool, typer.Option()] = False,
):
    """Largest codeword-free set, exact or heuristic"""
    started = time.perf_counter()
    failures = []
    with diagnostics():
        config = RunConfig(
            command="clique",
            k=k,
            kprime=kprime,
            mode=str(mode),
            seed=seed,
            iterations=iterations if mode == CliqueMode.heuristic else None,
            budget=budget,
            cross_check=cross_check or None,
        )
        params = config.params
        found = max_condition_set(
            params,
            mode,
            seed=seed,
            iterations=iterations,
            time_budget=time_budget,
            budget=budget,
        )
        result = found.model_dump(mode="json")
        result["witness"] = [str(a) for a in found.witness]
        if theorem_applies(params.k, params.kprime):
            result["cover_exponent"] = theorem_cover_exponent(params.k, params.kprime)
        if cross_check:
            reference = reference_max_condition_set(params, budget)
            result["reference_size"] = reference.size
            if mode == CliqueMode.exact and reference.size != found.size:
                failures.append(
                    f"exact size {found.size} != reference size {reference.size}"
                )
            if found.size > reference.size:
                failures.append(f"size {found.size} above the maximum {reference.size}")
    emit(ctx, config, result, failures, started)


@app.command()
def polycheck(
    ctx: typer.Context,
    k: Annotated[int | None, typer.Option("--k")] = None,
    kprime: Annotated[int | None, typer.Option("--kprime")] = None,
    all_valid_sets: Annotated[bool, typer.Option()] = False,
    budget: Annotated[int, typer.Option()] = MONOMIAL_BUDGET,
    set_budget: Annotated[
        int, typer.Option(help="Most sets --all-valid-sets may enumerate")
    ] = SET_BUDGET,
):
    """Polynomial independence certificates for codeword-free sets"""
    started = time.perf_counter()
    failures = []
    certificates = []
    with diagnostics():
        config = RunConfig(
            command="polycheck",
            k=k,
            kprime=kprime,
            budget=budget,
            set_budget=set_budget if all_valid_sets else None,
            all_valid_sets=all_valid_sets or None,
        )
        params = config.params
        if all_valid_sets:
            sets = list(iter_condition_sets(params, max_sets=set_budget))
        else:
            sets = [max_condition_set(params).witness]
        for inputs in sets:
            cert = certify_independence(inputs, budget)
            label = " ".join(str(a) for a in inputs)
            certificates.append(
                {"set": label, **cert.model_dump(mode="json"), "passed": cert.passed}
            )
            failures += [f"{label}: {problem}" for problem in cert.failures]
    result = {
        "sets_checked": len(certificates),
        "largest_set": max(c["size"] for c in certificates),
        "certificates": certificates,
    }
    emit(ctx, config, result, failures, started)
