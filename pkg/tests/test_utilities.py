import hashlib
import math

import pytest

from parrondo_channels.exceptions import ParameterError
from parrondo_channels.utilities import (
    binomial_stderr,
    check_probability,
    check_uniform,
    derive_seed,
    mean_and_stderr,
    output_file,
    residue,
)


@pytest.mark.parametrize("memory, expected", [(0, 0), (4, 1), (-1, 2), (-3, 0), (-4, 2), (2**61 + 1, (2**61 + 1) % 3)])
def test_residue(memory, expected):
    assert residue(memory) == expected


def test_derive_seed():
    expected = int.from_bytes(hashlib.sha256(b"0:0").digest()[:8], "big")
    assert derive_seed(0, 0) == expected
    assert derive_seed(7, 3) == derive_seed(7, 3)
    assert len({derive_seed(7, i) for i in range(1000)}) == 1000
    assert derive_seed(1, 23) != derive_seed(12, 3)
    assert 0 <= derive_seed(2**63, 5) < 2**64


def test_probability_checks():
    assert check_probability(1) == 1.0
    assert check_uniform(0.0) == 0.0
    for bad in (-0.1, 1.1, math.nan):
        with pytest.raises(ParameterError):
            check_probability(bad)
    with pytest.raises(ParameterError):
        check_uniform(1.0)


def test_mean_and_stderr():
    assert mean_and_stderr(0, 0, 0) == (None, None)
    assert mean_and_stderr(5, 25, 1) == (5.0, 0.0)
    # values 1, 2, 3
    mean, stderr = mean_and_stderr(6, 14, 3)
    assert mean == 2.0
    assert stderr == pytest.approx(1 / math.sqrt(3))


def test_binomial_stderr():
    assert binomial_stderr(0.5, 100) == pytest.approx(0.05)
    assert binomial_stderr(0.5, 0) == 0.0
    assert binomial_stderr(1.0, 10) == 0.0


def test_output_file(tmp_path):
    path = output_file(tmp_path / "a", "b", "c.json", mkdir=True)
    assert path == tmp_path / "a" / "b" / "c.json"
    assert path.parent.is_dir()
    assert not output_file(tmp_path / "x", "y.json").parent.exists()
