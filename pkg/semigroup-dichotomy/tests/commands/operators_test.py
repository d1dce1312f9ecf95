import json
import math

import pytest

from semigroup_dichotomy.commands import BmCommand, CommandError, CounterexampleCommand, DsumCommand, ShiftCommand
from semigroup_dichotomy.errors import SpectrumError


@pytest.fixture
def shift_command():
    return ShiftCommand()


@pytest.fixture
def bm_command():
    return BmCommand()


@pytest.fixture
def dsum_command():
    return DsumCommand()


@pytest.fixture
def counterexample_command():
    return CounterexampleCommand()


@pytest.mark.asyncio
async def test_shift_on_the_unit_circle(shift_command):
    result = await shift_command(m=16, points=8)
    document = json.loads(result.output)
    assert document["command"] == "shift"
    assert len(document["rows"]) == 8
    assert all(row["norm"] >= 4.0 and row["within_bounds"] for row in document["rows"])
    assert document["rows"][0]["lower"] == pytest.approx(4.0)
    assert not result.violations
    assert "0 bound violations" in result.system


@pytest.mark.asyncio
async def test_shift_outside_the_disk_as_csv(shift_command):
    result = await shift_command(m=10, radius=3.0, points=4, output_format="csv")
    lines = result.output.splitlines()
    assert lines[0] == "re,im,norm,lower,upper,within_bounds"
    assert len(lines) == 5
    first = lines[1].split(",")
    assert first[0] == "3.0"
    assert first[3] == ""
    assert float(first[4]) == 0.5
    assert first[5] == "true"


@pytest.mark.asyncio
async def test_bm_defaults_to_one_plus_im(bm_command):
    result = await bm_command(m=9)
    document = json.loads(result.output)
    (report,) = document["resolvent"]
    assert report["lambda"] == [1.0, 9.0]
    assert report["norm"] >= 3.0
    assert report["attained"] == {"M": 9, "n": 1}
    assert report["certified"] is True


@pytest.mark.asyncio
async def test_bm_envelope(bm_command):
    result = await bm_command(m=8, lambdas=[[1.0, 0.0]], times=[0.0, 0.5, 1.0])
    document = json.loads(result.output)
    assert [row["t"] for row in document["exp"]] == [0.0, 0.5, 1.0]
    assert all(row["norm"] <= row["envelope"] for row in document["exp"])
    assert document["exp"][1]["envelope"] == pytest.approx(math.exp(2.5))
    assert not result.violations


@pytest.mark.asyncio
async def test_bm_csv_with_upper_bounds(bm_command):
    result = await bm_command(m=4, lambdas=[[1.0, 4.0], [2.0, 0.0]], output_format="csv", tol_report=True)
    lines = result.output.splitlines()
    assert lines[0] == "re,im,norm,attained_M,attained_n,certified,upper_bound"
    assert len(lines) == 3


@pytest.mark.asyncio
async def test_bm_rejects_spectrum_points(bm_command):
    with pytest.raises(SpectrumError):
        await bm_command(m=3, lambdas=[[0.0, 3.0]])


@pytest.mark.asyncio
async def test_dsum_on_a_grid(dsum_command):
    result = await dsum_command(m_max=8, re_axis=[-2.0, 2.0, 3], im_axis=[0.5, 0.5, 1])
    document = json.loads(result.output)
    assert [(row["re"], row["im"]) for row in document["rows"]] == [(-2.0, 0.5), (0.0, 0.5), (2.0, 0.5)]
    assert all(row["certified"] for row in document["rows"])
    assert document["M_max"] == 8


@pytest.mark.asyncio
async def test_dsum_notes_skipped_points(dsum_command):
    result = await dsum_command(m_max=4, lambdas=[[0.0, 1.0], [2.0, 0.0]], times=[1.0])
    document = json.loads(result.output)
    assert len(document["rows"]) == 1
    assert any("skipped" in note for note in document["notes"])
    assert document["exp"][0]["norm"] <= math.exp(5.0)


@pytest.mark.asyncio
async def test_dsum_needs_a_grid(dsum_command):
    with pytest.raises(CommandError, match="needs either lambdas"):
        await dsum_command(m_max=4, re_axis=[0.0, 1.0, 2])


@pytest.mark.asyncio
async def test_counterexample_scan(counterexample_command):
    result = await counterexample_command(m_max=16, output_format="csv")
    lines = result.output.splitlines()
    assert lines[0] == "re,im,norm,attained_M,attained_n,certified"
    assert len(lines) == 17
    last = lines[-1].split(",")
    assert last[:2] == ["1.0", "16.0"]
    assert float(last[2]) >= 4.0
    assert last[3:] == ["16", "1", "true"]
    assert not result.violations
    assert "sqrt(k)=4" in result.system


@pytest.mark.asyncio
async def test_counterexample_contrast(counterexample_command):
    result = await counterexample_command(m_max=4, seed=5)
    document = json.loads(result.output)
    assert document["seed"] == 5
    assert document["contrast"]["clear"] is True
    assert document["contrast"]["line_distance"] == pytest.approx(1.0)
    assert any("Gearhart" in note for note in document["notes"])
    assert any("alone is hyperbolic" in note for note in document["notes"])
