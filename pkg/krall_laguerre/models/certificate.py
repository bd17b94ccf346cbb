from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple


@dataclass(frozen=True)
class Certificate:
    """
    The outcome of an exact identity check over a finite index range.
    """

    claim: str
    range: Tuple[int, int]
    passed: bool
    witness: Optional[Any] = None
    details: Dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed
