from typing import Iterable, Sequence

import numpy as np


def pop_from_dict_by_set(dictionary: dict, valid_keys: set) -> dict:
    """ remove and create new dict with key value pairs of dictionary, where key is in valid_keys """
    new_dictionary = {}

    for key in list(dictionary.keys()):
        if key in valid_keys:
            new_dictionary[key] = dictionary.pop(key)

    return new_dictionary


def check_kwargs_empty(kwargs_dict, raise_error=False) -> bool:
    """ returns True if kwargs are empty, False otherwise, raises error if not empty """

    if len(kwargs_dict) > 0:
        if raise_error:
            raise ValueError(f"{list(kwargs_dict.keys())} are not supported arguments. Look at the documentation for supported arguments.")
        else:
            return False
    else:
        return True


def as_points(values: Iterable, name: str = "points") -> np.ndarray:
    """ convert a sequence of (x, y) pairs to a read-only float64 array of shape (n, 2) """
    points = np.array(values, dtype=np.float64)
    if points.ndim == 1 and points.size % 2 == 0:
        points = points.reshape(-1, 2)
    if points.ndim != 2 or points.shape[1] != 2:
        raise ValueError(f"{name} must be a sequence of planar points, got array of shape {points.shape}")
    if not np.all(np.isfinite(points)):
        raise ValueError(f"{name} contain non-finite coordinates")
    points.setflags(write=False)
    return points


def cross_2d(a: Sequence[float], b: Sequence[float]):
    """ z-component of the cross product of planar vectors (broadcasts over leading axes) """
    a = np.asarray(a)
    b = np.asarray(b)
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]
