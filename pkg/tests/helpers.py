"""Shared query generators for the test suite."""
import numpy as np

from hlgf.contour import GreenQuery, LatticeModel, van_hove_frequencies


def random_model(rng, d, isotropic=False):
    if isotropic:
        return LatticeModel.isotropic(d)
    return LatticeModel(tuple(float(x) for x in np.round(rng.uniform(0.4, 1.5, d), 3)))


def random_r(rng, d, rmax=3):
    return tuple(int(x) for x in rng.integers(-rmax, rmax + 1, d))


def random_generic_omega(rng, model, gap=0.05):
    """In-band frequency at least ``gap`` from every van Hove frequency."""
    vh = np.array(van_hove_frequencies(model))
    W = model.band_edge
    while True:
        w = float(rng.uniform(-W, W))
        if np.min(np.abs(vh - w)) >= gap:
            return w


def random_generic_query(rng, dims=(1, 2, 3, 4), gap=0.05, rmax=3):
    d = int(rng.choice(dims))
    model = random_model(rng, d)
    return GreenQuery(model, random_r(rng, d, rmax), random_generic_omega(rng, model, gap))
