from __future__ import annotations

from typing import Union

import numpy as np
from numpy.typing import NDArray
from typing_extensions import Literal, TypeAlias

__all__ = (
    "LogLevel",
    "OperatorTag",
    "TwoModeTag",
    "SuiteName",
    "RealArray",
    "ComplexArray",
    "ArrayLike",
)

LogLevel: TypeAlias = Literal["debug", "info", "warning", "error", "critical"]

OperatorTag: TypeAlias = Literal[
    "kplus",
    "kminus",
    "kz",
    "kx",
    "ky",
    "p_hat",
    "n_hat",
    "e_lower",
    "casimir",
]
TwoModeTag: TypeAlias = Literal["ax", "ay", "aplus", "aminus", "n", "ell"]
SuiteName: TypeAlias = Literal[
    "specfun",
    "algebra",
    "states",
    "fields",
    "twomode",
    "asymptotic",
    "figures",
]

RealArray: TypeAlias = NDArray[np.float64]
ComplexArray: TypeAlias = NDArray[np.complex128]
ArrayLike: TypeAlias = Union[float, RealArray]
