import numpy as np
import pytest

from teff import PowerLaw, parse_potential


@pytest.fixture(scope="session")
def coulomb():
    return PowerLaw(b=-1.0, mu=-1.0)


@pytest.fixture(scope="session")
def oscillator():
    # V = r^2 / 2, i.e. unit angular frequency
    return PowerLaw(b=0.5, mu=2.0)


@pytest.fixture(scope="session")
def yukawa():
    return parse_potential("screened:kind=exp,Z=1")


@pytest.fixture(scope="session")
def yukawa_table(tmp_path_factory):
    """Yukawa Z=2 sampled densely enough for interpolation-level accuracy."""
    r = np.geomspace(1e-4, 40.0, 4000)
    v = -2.0 * np.exp(-r) / r
    path = tmp_path_factory.mktemp("tables") / "yukawa2.dat"
    body = "# r V\n" + "\n".join(f"{ri:.16e} {vi:.16e}" for ri, vi in zip(r, v))
    path.write_text(body)
    return path
