"""
Semigroup commands. Each runs its seeded suite, or a single check when a
generator matrix is supplied.
"""

from typing import Any, Literal

from ..dynamics import (
    LAPLACE_TOL,
    GeneratorSpec,
    convolution_margin,
    convolution_suite,
    growth_estimate,
    growth_suite,
    hyperbolicity_constant,
    hyperbolicity_suite,
    laplace_check,
    laplace_suite,
)
from ..formats import CMATRIX_SCHEMA, STEP_SCHEMA, decode_cmatrix, decode_step
from .base import CommandError, CommandResult, OutputFormat, ReportCommand
from .inequalities import verdict
from .run import run

_TRIALS = {"type": "integer", "minimum": 1}
_P = {"type": "number", "minimum": 1}


def _generator(matrix: dict[str, Any]) -> GeneratorSpec:
    return GeneratorSpec.classify(decode_cmatrix(matrix))


class LaplaceCommand(ReportCommand):
    """(lambda - A)^{-1} g against the Laplace integral of e^{tA} g."""

    name: Literal["laplace"] = "laplace"
    description = "Compare (lambda - A)^{-1} g with the quadrature of integral e^{s(A - lambda)} g ds for metzler A."
    properties = {
        "trials": _TRIALS,
        "matrix": CMATRIX_SCHEMA,
        "lam": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
        "g": {"type": "array", "items": {"type": "number", "minimum": 0}, "minItems": 1},
        "steps": {"type": "integer", "minimum": 2},
    }

    async def __call__(
        self,
        *,
        trials: int = 100,
        matrix: dict[str, Any] | None = None,
        lam: list[float] | None = None,
        g: list[float] | None = None,
        steps: int = 4096,
        seed: int = 0,
        output_format: OutputFormat = "json",
        tol_report: bool = False,
        **kwargs,
    ) -> CommandResult:
        if matrix is None:
            report = await run(laplace_suite, trials, seed, timeout=self.timeout)
            return self.result(report.to_dict(), output_format=output_format, seed=seed, verdict=verdict(report), violations=report.violations)
        if lam is None or g is None:
            raise CommandError("laplace with a matrix needs both lam and g")
        spec = _generator(matrix)
        error = await run(laplace_check, spec, complex(*lam), g, None, steps, timeout=self.timeout)
        passes = error <= LAPLACE_TOL
        violations = [] if passes else [{"check": "laplace", "value": error, "bound": LAPLACE_TOL}]
        return self.result(
            {"relative_error": error, "tolerance": LAPLACE_TOL, "passes": passes},
            output_format=output_format,
            seed=None,
            verdict=f"relative error {error:.3e} (tolerance {LAPLACE_TOL:g})",
            violations=violations,
        )


class ConvolutionCommand(ReportCommand):
    """The convolution bound ||integral e^{sA} f(t-s) ds||_{L_p} <= ||A^{-1}|| ||f||_{L_p}."""

    name: Literal["convolution"] = "convolution"
    description = "Margin of the convolution bound by ||A^{-1}|| for a stable metzler A and a periodic step function."
    properties = {
        "trials": _TRIALS,
        "matrix": CMATRIX_SCHEMA,
        "step": STEP_SCHEMA,
        "p": _P,
        "horizon": {"type": "number", "exclusiveMinimum": 0},
        "points": {"type": "integer", "minimum": 2},
    }

    async def __call__(
        self,
        *,
        trials: int = 100,
        matrix: dict[str, Any] | None = None,
        step: dict[str, Any] | None = None,
        p: float = 2.0,
        horizon: float = 40.0,
        points: int = 256,
        seed: int = 0,
        output_format: OutputFormat = "json",
        tol_report: bool = False,
        **kwargs,
    ) -> CommandResult:
        if matrix is None:
            report = await run(convolution_suite, trials, seed, horizon, timeout=self.timeout)
            return self.result(report.to_dict(), output_format=output_format, seed=seed, verdict=verdict(report), violations=report.violations)
        if step is None:
            raise CommandError("convolution with a matrix needs a step function")
        result = await run(
            convolution_margin, _generator(matrix), decode_step(step), horizon, p, points, timeout=self.timeout
        )
        violations = [] if result.holds else [{"check": "convolution", "value": result.margin, "bound": -result.tolerance}]
        return self.result(
            result.to_dict(),
            output_format=output_format,
            seed=None,
            verdict=f"margin {result.margin:.6g} (quadrature tolerance {result.tolerance:.2e})",
            violations=violations,
        )


class HyperbolicityCommand(ReportCommand):
    """The Fourier-multiplier constant of (ik - A)^{-1}."""

    name: Literal["hyperbolicity"] = "hyperbolicity"
    description = "Lower estimate, and for p = 2 the exact value, of the multiplier constant of (ik - A)^{-1}."
    properties = {
        "trials": _TRIALS,
        "matrix": CMATRIX_SCHEMA,
        "n_modes": {"type": "integer", "minimum": 0},
        "p": _P,
        "points": {"type": "integer", "minimum": 2},
        "families": {"type": "integer", "minimum": 0},
    }

    async def __call__(
        self,
        *,
        trials: int = 25,
        matrix: dict[str, Any] | None = None,
        n_modes: int = 32,
        p: float = 2.0,
        points: int | None = None,
        families: int = 16,
        seed: int = 0,
        output_format: OutputFormat = "json",
        tol_report: bool = False,
        **kwargs,
    ) -> CommandResult:
        if matrix is None:
            report = await run(hyperbolicity_suite, trials, seed, n_modes, timeout=self.timeout)
            return self.result(report.to_dict(), output_format=output_format, seed=seed, verdict=verdict(report), violations=report.violations)
        result = await run(
            hyperbolicity_constant, _generator(matrix), n_modes, p, points, families, seed, timeout=self.timeout
        )
        if not result.spectrum_clear:
            summary = "spectrum meets iZ; no constant"
        else:
            summary = f"c_lower {result.c_lower:.6g} (quadrature tolerance {result.tolerance:.2e})"
            if result.c_exact_p2 is not None:
                summary += f", c_exact_p2 {result.c_exact_p2:.6g}"
        return self.result(result.to_dict(), output_format=output_format, seed=seed, verdict=summary)


class GrowthCommand(ReportCommand):
    """Growth bound fitted from ||e^{tA}|| against the spectral bound."""

    name: Literal["growth"] = "growth"
    description = "Fit the growth bound of e^{tA} and compare it with the spectral bound s(A)."
    properties = {
        "trials": _TRIALS,
        "matrix": CMATRIX_SCHEMA,
        "t_max": {"type": "number", "exclusiveMinimum": 0},
        "samples": {"type": "integer", "minimum": 8},
    }

    async def __call__(
        self,
        *,
        trials: int = 50,
        matrix: dict[str, Any] | None = None,
        t_max: float = 200.0,
        samples: int = 64,
        seed: int = 0,
        output_format: OutputFormat = "json",
        tol_report: bool = False,
        **kwargs,
    ) -> CommandResult:
        if matrix is None:
            report = await run(growth_suite, trials, seed, t_max, samples, timeout=self.timeout)
            return self.result(report.to_dict(), output_format=output_format, seed=seed, verdict=verdict(report), violations=report.violations)
        estimate = await run(growth_estimate, _generator(matrix), t_max, samples, timeout=self.timeout)
        document = estimate.to_dict()
        if not tol_report:
            document.pop("samples")
        violations = [] if estimate.consistent else [
            {"check": "growth", "value": estimate.omega_hat, "bound": estimate.s_value}
        ]
        return self.result(
            document,
            output_format=output_format,
            seed=None,
            verdict=f"omega_hat {estimate.omega_hat:.6g}, s(A) {estimate.s_value:.6g} (tolerance {estimate.tolerance:g})",
            violations=violations,
        )
