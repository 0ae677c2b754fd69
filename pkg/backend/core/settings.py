"""
Validated run configuration for the command line.

Values come from, in increasing priority: defaults, the environment (.env is
loaded first), a JSON file given with --config, and command-line flags.
"""

import json
import os
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, field_validator

from core.exceptions import RecordFormatError
from core.reconstruct.config import SolverConfig

THREADS_VARIABLE = "SHAPETENSOR_THREADS"

Command = Literal["tensors", "reconstruct", "counterexample", "converge", "noise", "distance"]
Resolution = Literal["coarse", "medium", "fine"]


def default_threads() -> int:
    """Thread cap from SHAPETENSOR_THREADS (after loading .env), default 1"""
    load_dotenv()
    raw = os.environ.get(THREADS_VARIABLE, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"{THREADS_VARIABLE} must be an integer, got {raw!r}") from None


class RunConfig(BaseModel):
    """Everything one CLI invocation needs; unknown keys are rejected"""

    model_config = ConfigDict(extra="forbid")

    command: Command
    input: Optional[Path] = None
    output: Path = Path(".")
    s_o: Optional[int] = Field(default=None, ge=1)
    seed: int = Field(default=0, ge=0)
    starts: int = Field(default=12, ge=1)
    tol: float = Field(default=1e-6, gt=0)
    resolution: Resolution = "medium"
    sigma2: List[float] = Field(default_factory=lambda: [0.0])
    trials: int = Field(default=1, ge=1)
    noisy: bool = False
    threads: int = Field(default_factory=default_threads, ge=1)

    @field_validator('sigma2')
    @classmethod
    def _non_negative(cls, values: List[float]) -> List[float]:
        if any(v < 0 for v in values):
            raise ValueError("variances must be >= 0")
        return values

    def solver_config(self) -> SolverConfig:
        """Solver settings implied by this run"""
        return SolverConfig(starts=self.starts, seed=self.seed, exact_tol=self.tol,
                            threads=self.threads)

    @classmethod
    def from_sources(cls, command: str, config_file: Optional[Path] = None,
                     **flags: Any) -> 'RunConfig':
        """
        Merge a JSON config file with command-line flags (flags set to None are
        treated as absent).

        Raises:
            RecordFormatError: If the config file is not valid JSON
            pydantic.ValidationError: If the merged values are invalid
        """
        data: Dict[str, Any] = {}
        if config_file is not None:
            try:
                data = json.loads(Path(config_file).read_text())
            except json.JSONDecodeError as e:
                raise RecordFormatError(
                    e.msg, str(config_file), f"line {e.lineno}, column {e.colno}"
                ) from e
            if not isinstance(data, dict):
                raise RecordFormatError("config must be a JSON object", str(config_file))
        data.update({key: value for key, value in flags.items() if value is not None})
        data['command'] = command
        return cls(**data)
