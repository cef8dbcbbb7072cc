"""
Array field types
numpy arrays as frozen pydantic fields: validated into read-only copies, serialized as lists.
"""

from typing import Annotated, Any, List

import numpy as np
from pydantic import BeforeValidator, PlainSerializer


def _readonly(values: Any, dtype: Any) -> np.ndarray:
    array = np.array(values, dtype=dtype, copy=True)
    if array.ndim == 0:
        array = array.reshape(1)
    array.setflags(write=False)
    return array


def _as_float_array(values: Any) -> np.ndarray:
    return _readonly(values, np.float64)


def _as_int_array(values: Any) -> np.ndarray:
    return _readonly(values, np.int64)


def _as_bit_array(values: Any) -> np.ndarray:
    array = np.asarray(values)
    if array.size and not np.isin(array, (0, 1)).all():
        raise ValueError("bits must contain only 0 and 1")
    return _readonly(array, np.uint8)


def to_jsonable(array: np.ndarray) -> List[Any]:
    """Nested list with NaN / ±inf mapped to None"""
    if array.dtype.kind != "f":
        return array.tolist()
    out = array.astype(object)
    out[~np.isfinite(array)] = None
    return out.tolist()


FloatArray = Annotated[
    np.ndarray,
    BeforeValidator(_as_float_array),
    PlainSerializer(to_jsonable, return_type=list),
]

IntArray = Annotated[
    np.ndarray,
    BeforeValidator(_as_int_array),
    PlainSerializer(to_jsonable, return_type=list),
]

BitArray = Annotated[
    np.ndarray,
    BeforeValidator(_as_bit_array),
    PlainSerializer(to_jsonable, return_type=list),
]
