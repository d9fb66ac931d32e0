"""chtg command line: trace scans, elliptic windows, certificates, searches and number theory."""

import logging
from pathlib import Path
from typing import NoReturn, Optional

import typer
from pydantic import ValidationError

from app.core.config import Settings
from app.core.errors import ChtgError
from app.core.logging import configure_logging
from app.schemas import Command, NtFunction, OutputFormat, RunConfig, Verdict
from app.services import reports
from app.utils.reporting import Report, get_renderer

logger = logging.getLogger(__name__)

EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3

app = typer.Typer(
    name="chtg",
    help="Complex hyperbolic (m,m,inf)-triangle groups: traces, elliptic windows and non-discreteness certificates.",
    no_args_is_help=True,
    pretty_exceptions_enable=False,
)

M_OPTION = typer.Option(None, "--m", help="Order m of the (m,m,inf)-triangle (>= 2).")
STEPS_OPTION = typer.Option(None, "--alpha-steps", help="Number of grid points in [0, 2pi).")
N_MAX_OPTION = typer.Option(None, "--n-max", help="Largest root-of-unity order searched.")
PRECISION_OPTION = typer.Option(None, "--precision-bits", help="Working precision in bits (53..4096).")
FORMAT_OPTION = typer.Option(OutputFormat.JSON, "--format", help="Output format.")
OUT_OPTION = typer.Option(None, "--out", help="Write the report here instead of stdout.")


def _fail(exc: Exception) -> NoReturn:
    if isinstance(exc, ValidationError):
        message = "; ".join(err["msg"] for err in exc.errors())
    else:
        message = str(exc)
    typer.echo(f"error: {message}", err=True)
    raise typer.Exit(code=EXIT_USAGE)


def _config(command: Command, **fields) -> tuple[RunConfig, Settings]:
    """Validate the options against RunConfig; environment settings fill the defaults."""
    settings = Settings()
    defaults = {
        "alpha_steps": settings.alpha_steps,
        "n_max": settings.n_max,
        "precision_bits": settings.precision_bits,
    }
    for key, value in defaults.items():
        if fields.get(key) is None:
            fields[key] = value
    try:
        config = RunConfig(
            command=command,
            precision_cap_bits=max(settings.precision_cap_bits, fields["precision_bits"]),
            **fields,
        )
    except ValidationError as exc:
        _fail(exc)
    settings = settings.model_copy(update={
        "precision_bits": config.precision_bits,
        "precision_cap_bits": config.precision_cap_bits,
    })
    return config, settings


def _emit(report: Report, config: RunConfig) -> None:
    text = get_renderer(config.output_format).render(report, config.command)
    if config.output_path is not None:
        config.output_path.write_text(text if text.endswith("\n") else text + "\n")
        logger.info("report written to %s", config.output_path)
    else:
        typer.echo(text, nl=not text.endswith("\n"))


@app.callback()
def main(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging on stderr."),
) -> None:
    configure_logging("DEBUG" if verbose else None)


@app.command()
def scan(
    m: Optional[int] = M_OPTION,
    alpha_steps: Optional[int] = STEPS_OPTION,
    precision_bits: Optional[int] = PRECISION_OPTION,
    output_format: OutputFormat = FORMAT_OPTION,
    out: Optional[Path] = OUT_OPTION,
) -> None:
    """Trace, discriminant and class on an alpha grid."""
    config, settings = _config(
        Command.SCAN, m=m, alpha_steps=alpha_steps, precision_bits=precision_bits,
        output_format=output_format, output_path=out,
    )
    try:
        rows = reports.scan_rows(config.m, config.alpha_steps, settings)
    except (ChtgError, ValueError) as exc:
        _fail(exc)
    _emit(rows, config)


@app.command()
def windows(
    m: Optional[int] = M_OPTION,
    alpha_steps: Optional[int] = STEPS_OPTION,
    output_format: OutputFormat = FORMAT_OPTION,
    out: Optional[Path] = OUT_OPTION,
) -> None:
    """Alpha-intervals on which the product is regular elliptic."""
    config, settings = _config(
        Command.WINDOWS, m=m, alpha_steps=alpha_steps, output_format=output_format, output_path=out,
    )
    try:
        found = reports.window_report(config.m, config.alpha_steps, settings)
    except (ChtgError, ValueError) as exc:
        _fail(exc)
    _emit(found, config)


@app.command()
def certify(
    m: Optional[int] = M_OPTION,
    alpha: Optional[float] = typer.Option(None, "--alpha", help="Angular invariant in radians."),
    alpha_turns: Optional[str] = typer.Option(None, "--alpha-turns", help="alpha = 2 pi t for a rational t such as 1/8."),
    n_max: Optional[int] = N_MAX_OPTION,
    precision_bits: Optional[int] = PRECISION_OPTION,
    output_format: OutputFormat = FORMAT_OPTION,
    out: Optional[Path] = OUT_OPTION,
) -> None:
    """Certify that a regular elliptic (m,m,inf) representation is not discrete or not faithful."""
    config, settings = _config(
        Command.CERTIFY, m=m, alpha=alpha, alpha_turns=alpha_turns, n_max=n_max,
        precision_bits=precision_bits, output_format=output_format, output_path=out,
    )
    try:
        certificate = reports.certificate_report(
            config.m, config.alpha, config.alpha_turns, config.n_max, settings,
        )
    except (ChtgError, ValueError) as exc:
        _fail(exc)
    _emit(certificate, config)
    if certificate.verdict == Verdict.INCONCLUSIVE:
        raise typer.Exit(code=EXIT_INCONCLUSIVE)


@app.command()
def search(
    m: Optional[int] = M_OPTION,
    n_max: Optional[int] = N_MAX_OPTION,
    precision_bits: Optional[int] = PRECISION_OPTION,
    full: bool = typer.Option(False, "--full", help="Examine every ordered triple instead of one per symmetry orbit."),
    output_format: OutputFormat = FORMAT_OPTION,
    out: Optional[Path] = OUT_OPTION,
) -> None:
    """Exhaustive search for circle-consistent finite-order regular elliptic traces."""
    config, settings = _config(
        Command.SEARCH, m=m, n_max=n_max, precision_bits=precision_bits,
        output_format=output_format, output_path=out,
    )
    try:
        summary = reports.search_report(config.m, config.n_max, settings, symmetry_reduced=not full)
    except (ChtgError, ValueError) as exc:
        _fail(exc)
    _emit(summary, config)


@app.command()
def nt(
    function: NtFunction = typer.Argument(..., help="phi, moebius or cyclopoly."),
    x: int = typer.Argument(..., help="Positive integer argument."),
    output_format: OutputFormat = typer.Option(OutputFormat.TEXT, "--format", help="Output format."),
    out: Optional[Path] = OUT_OPTION,
) -> None:
    """Euler phi, Moebius mu or the cyclotomic polynomial of x."""
    config, _ = _config(Command.NT, output_format=output_format, output_path=out)
    try:
        result = reports.nt_value(function, x)
    except (ChtgError, ValueError) as exc:
        _fail(exc)
    _emit(result, config)


if __name__ == "__main__":
    app()
