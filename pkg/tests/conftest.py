import warnings

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(autouse=True)
def _quiet_regime_warnings():
    from udwsignal.scenario import PerturbativeRegimeWarning
    from udwsignal.signal import PerturbativeWarning

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PerturbativeWarning)
        warnings.simplefilter("ignore", PerturbativeRegimeWarning)
        yield
