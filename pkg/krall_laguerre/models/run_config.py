from dataclasses import dataclass
from typing import Optional, Tuple

from sympy import Basic, Rational

from krall_laguerre.models.enums import Command, OutputFormat


@dataclass(frozen=True)
class RunConfig:
    """
    A validated command line run. Rationals are already parsed; `beta` may hold symbols for
    symbolic genericity runs.
    """

    command: Command
    alpha: Rational = Rational(0)
    k: int = 0
    beta: Tuple[Basic, ...] = ()
    u: Tuple[Rational, ...] = ()
    symbolic: bool = False
    verify_n: Optional[int] = None
    output_format: OutputFormat = OutputFormat.JSON
    seed: Optional[int] = None
    generator: Optional[int] = None
    eigenvalue: Tuple[Rational, ...] = ()
    order_cap: Optional[int] = None
    probe: bool = False
    max_deg: Optional[int] = None
    matrix: Tuple[Rational, ...] = ()
    output: Optional[str] = None
    metrics_file: Optional[str] = None
