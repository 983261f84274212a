from typing import Any, Dict, List, Optional, Tuple

import numpy as np


class WeingartenError(Exception):
    """Base error carrying a process exit code"""
    exit_code = 1
    category = "error"

    def __init__(self, message: str, nodes: Optional[List[Tuple[int, int]]] = None,
                 details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.nodes = list(nodes or [])
        self.details = dict(details or {})

    def describe(self) -> str:
        """One-line diagnostic with the first offending nodes"""
        text = f"{self.category}: {self}"
        if self.nodes:
            shown = ", ".join(f"({i},{j})" for i, j in self.nodes[:8])
            more = f" (+{len(self.nodes) - 8} more)" if len(self.nodes) > 8 else ""
            text += f" at nodes {shown}{more}"
        return text


class ConfigError(WeingartenError):
    exit_code = 2
    category = "config error"


class PreconditionError(WeingartenError):
    exit_code = 3
    category = "precondition violation"


class NumericalError(WeingartenError):
    exit_code = 4
    category = "numerical failure"


class VerificationError(WeingartenError):
    exit_code = 5
    category = "verification failure"


def offending_nodes(mask, offset: Tuple[int, int] = (0, 0)) -> List[Tuple[int, int]]:
    """Grid indices where a boolean mask is set"""
    idx = np.argwhere(np.asarray(mask))
    return [(int(i) + offset[0], int(j) + offset[1]) for i, j in idx]
