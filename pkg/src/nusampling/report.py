from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

__all__ = ["ReconstructionReport", "to_jsonable"]


def to_jsonable(obj):
    """Convert numpy scalars/arrays (complex included) into JSON-ready values.

    Complex numbers become ``[re, im]`` pairs.
    """
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


@dataclass
class ReconstructionReport:
    method: str
    coefficients: Any = None
    residuals: List[float] = field(default_factory=list)
    iterations: int = 0
    termination: str = ""
    degree: Optional[int] = None
    tau: Optional[float] = None
    success: bool = True
    errors: Dict[str, float] = field(default_factory=dict)
    extra: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self):
        return to_jsonable(asdict(self))

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)
