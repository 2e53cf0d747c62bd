"""Shared fixtures: the reference scenario and cached solver runs.

The four standard designs (each algorithm at similarity levels 0.2 and
1.0) take a few seconds each, so they are computed lazily once per
session and shared by every test that needs a finished waveform.
"""
import numpy as np
import pytest

from fda_waveopt import (
    SinrModel,
    Source,
    SourceSet,
    SystemConfig,
    build_constraints,
    mmadmm_run,
    padmm_run,
    reference_olfm,
)


def table_sources() -> SourceSet:
    """One 20 dB target plus two 30 dB interferences.

    The second interference shares the target's angle and is separated
    in range only, which is what makes the scenario interesting for a
    range-dependent array.
    """
    target = Source(range_m=15075.0, angle_rad=np.deg2rad(20.0),
                    power_db=20.0, kind="target")
    mainlobe = Source(range_m=14985.0, angle_rad=np.deg2rad(-30.0),
                      power_db=30.0)
    samelobe = Source(range_m=14970.0, angle_rad=np.deg2rad(20.0),
                      power_db=30.0)
    return SourceSet(target=target, interferences=(mainlobe, samelobe))


@pytest.fixture(scope="session")
def cfg():
    return SystemConfig()


@pytest.fixture(scope="session")
def sources():
    return table_sources()


@pytest.fixture(scope="session")
def reference(cfg):
    return reference_olfm(cfg)


@pytest.fixture(scope="session")
def model(cfg, sources):
    return SinrModel(cfg, sources)


class DesignCache:
    """Lazily computed solver results keyed by (algorithm, level)."""

    def __init__(self, cfg, sources, reference):
        self._cfg = cfg
        self._sources = sources
        self._reference = reference
        self._cache = {}

    def get(self, algo: str, level: float):
        key = (algo, level)
        if key not in self._cache:
            cs = build_constraints(self._cfg, self._reference, level)
            run = mmadmm_run if algo == "mmadmm" else padmm_run
            self._cache[key] = run(self._cfg, self._sources, cs)
        return self._cache[key]

    def constraints(self, level: float):
        return build_constraints(self._cfg, self._reference, level)


@pytest.fixture(scope="session")
def designs(cfg, sources, reference):
    return DesignCache(cfg, sources, reference)
