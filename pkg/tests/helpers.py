"""Shared sampling helpers for the test suite."""

import numpy as np

from mnm.model import domain_margin, eval_jet2
from mnm.rng import Xoshiro256StarStar


def tame_points(
    model,
    center,
    half_width,
    count,
    seed=5,
    margin=0.25,
    value_cap=1e4,
    grad_cap=1e3,
    max_attempts=60000,
):
    """Random in-domain points where residual values/derivatives stay moderate.

    Keeps finite-difference oracles inside their accuracy envelope: central
    differences with step h resolve derivatives to ~eps*|g|/h, so bounding |g|
    bounds the oracle error well below the comparison tolerances.
    """
    rng = Xoshiro256StarStar(seed)
    pts = []
    attempts = 0
    while len(pts) < count and attempts < max_attempts:
        attempts += 1
        z = np.array([rng.complex_box(half_width, center) for _ in range(model.n)])
        if domain_margin(model, z) < margin:
            continue
        try:
            jets = [eval_jet2(model, j, z) for j in range(model.m)]
        except Exception:
            continue
        if any(abs(j.value) ** 2 > value_cap for j in jets):
            continue
        if any(np.max(np.abs(j.grad)) > grad_cap for j in jets):
            continue
        pts.append(z)
    assert len(pts) == count, f"could only sample {len(pts)}/{count} tame points"
    return pts
