import numpy as np
from scipy.spatial import cKDTree

from chamber import Event


def find_ambiguous_pairs(
    events: list[Event], input_tol: float, min_angle_gap: float
) -> np.ndarray:
    """Index pairs (i, j), i < j, with near-identical inputs but distant angles.

    Inputs must differ by less than `input_tol` in max-norm while the track
    angles differ by more than `min_angle_gap` degrees: the left-right
    ambiguity no network can resolve from the drift values alone.
    """
    if not events:
        return np.empty((0, 2), dtype=np.int64)
    inputs = np.vstack([e.inputs for e in events])
    angles = np.array([e.target_angle_deg for e in events])

    pairs = cKDTree(inputs).query_pairs(r=input_tol, p=np.inf, output_type="ndarray")
    if len(pairs) == 0:
        return np.empty((0, 2), dtype=np.int64)
    gap = np.abs(inputs[pairs[:, 0]] - inputs[pairs[:, 1]])
    close = gap.max(axis=1) < input_tol
    far = np.abs(angles[pairs[:, 0]] - angles[pairs[:, 1]]) > min_angle_gap
    found = pairs[close & far]
    return found[np.lexsort((found[:, 1], found[:, 0]))]
