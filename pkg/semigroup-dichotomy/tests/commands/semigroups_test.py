import json

import numpy as np
import pytest

from semigroup_dichotomy.commands import (
    CommandError,
    ConvolutionCommand,
    GrowthCommand,
    HyperbolicityCommand,
    LaplaceCommand,
)
from semigroup_dichotomy.formats import encode_cmatrix, encode_step
from semigroup_dichotomy.lattice import StepFunction
from semigroup_dichotomy.shiftblock import make_shift


@pytest.fixture
def stable_matrix():
    return encode_cmatrix(make_shift(2) - 2.0 * np.eye(2))


@pytest.mark.asyncio
async def test_laplace_single_check(stable_matrix):
    result = await LaplaceCommand()(matrix=stable_matrix, lam=[0.0, 0.0], g=[1.0, 1.0])
    document = json.loads(result.output)
    assert document["passes"] is True
    assert document["relative_error"] <= 1e-6
    assert document["seed"] is None
    assert not result.violations


@pytest.mark.asyncio
async def test_laplace_needs_lambda_and_g(stable_matrix):
    with pytest.raises(CommandError, match="needs both lam and g"):
        await LaplaceCommand()(matrix=stable_matrix, lam=[0.0, 0.0])


@pytest.mark.asyncio
async def test_laplace_suite():
    result = await LaplaceCommand()(trials=10, seed=4)
    document = json.loads(result.output)
    assert document["check"] == "laplace"
    assert document["trials"] == 10
    assert not result.violations


@pytest.mark.asyncio
async def test_convolution_single_check():
    result = await ConvolutionCommand()(
        matrix=encode_cmatrix([[-1.0]]), step=encode_step(StepFunction.constant([1.0])), horizon=20.0
    )
    document = json.loads(result.output)
    assert document["holds"] is True
    assert document["margin"] >= 0.0


@pytest.mark.asyncio
async def test_convolution_needs_a_step_function(stable_matrix):
    with pytest.raises(CommandError, match="needs a step function"):
        await ConvolutionCommand()(matrix=stable_matrix)


@pytest.mark.asyncio
async def test_convolution_suite():
    result = await ConvolutionCommand()(trials=5, seed=1)
    assert json.loads(result.output)["trials"] == 5
    assert not result.violations


@pytest.mark.asyncio
async def test_hyperbolicity_single_check():
    result = await HyperbolicityCommand()(matrix=encode_cmatrix([[-1.0]]), n_modes=4, families=4)
    document = json.loads(result.output)
    assert document["spectrum_clear"] is True
    assert document["c_exact_p2"] == pytest.approx(1.0)
    assert "c_exact_p2 1" in result.system


@pytest.mark.asyncio
async def test_hyperbolicity_reports_spectrum_on_the_axis():
    result = await HyperbolicityCommand()(matrix=encode_cmatrix([[0.0, -1.0], [1.0, 0.0]]), n_modes=2)
    document = json.loads(result.output)
    assert document["spectrum_clear"] is False
    assert result.system.endswith("spectrum meets iZ; no constant")


@pytest.mark.asyncio
async def test_hyperbolicity_suite():
    result = await HyperbolicityCommand()(trials=3, n_modes=8)
    assert json.loads(result.output)["check"] == "hyperbolicity"
    assert not result.violations


@pytest.mark.asyncio
async def test_growth_single_check_hides_samples_unless_asked():
    matrix = encode_cmatrix([[-1.0]])
    plain = json.loads((await GrowthCommand()(matrix=matrix, t_max=20.0, samples=16)).output)
    assert "samples" not in plain
    assert plain["consistent"] is True
    detailed = json.loads((await GrowthCommand()(matrix=matrix, t_max=20.0, samples=16, tol_report=True)).output)
    assert len(detailed["samples"]) == 16


@pytest.mark.asyncio
async def test_growth_suite():
    result = await GrowthCommand()(trials=5, t_max=100.0)
    assert json.loads(result.output)["trials"] == 5
    assert not result.violations
