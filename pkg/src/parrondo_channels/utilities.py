import hashlib
import math
from pathlib import Path

from .exceptions import ParameterError


def residue(memory: int) -> int:
    """Nonnegative residue of `memory` modulo 3, also for negative memory values."""
    return ((memory % 3) + 3) % 3


def derive_seed(base_seed: int, index: int) -> int:
    """Seed of trajectory `index`: first 8 bytes (big-endian) of sha256("base_seed:index")."""
    digest = hashlib.sha256(f"{base_seed}:{index}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def check_probability(value: float, name: str = "p") -> float:
    if not (0.0 <= value <= 1.0) or math.isnan(value):
        raise ParameterError(f"'{name}' must be a probability in [0, 1], got {value}.")
    return float(value)


def check_uniform(value: float, name: str = "u") -> float:
    if not (0.0 <= value < 1.0) or math.isnan(value):
        raise ParameterError(f"'{name}' must lie in [0, 1), got {value}.")
    return float(value)


def mean_and_stderr(total: int | float, total_sq: int | float, count: int) -> tuple[float | None, float | None]:
    """Sample mean and standard error of the mean from sufficient statistics."""
    if count <= 0:
        return None, None
    mean = total / count
    if count == 1:
        return mean, 0.0
    variance = max(0.0, (total_sq - count * mean * mean) / (count - 1))
    return mean, math.sqrt(variance / count)


def binomial_stderr(rate: float, count: int) -> float:
    if count <= 0:
        return 0.0
    return math.sqrt(max(0.0, rate * (1.0 - rate)) / count)


def output_file(out_dir: str | Path, *parts: str, mkdir: bool = False) -> Path:
    path = Path(out_dir, *parts)
    if mkdir:
        path.parent.mkdir(parents=True, exist_ok=True)
    return path
