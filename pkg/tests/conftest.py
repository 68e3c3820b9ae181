import pytest

from pseudolattices.blowup import standard_model


@pytest.fixture(scope="session")
def m0():
    return standard_model("M0")


@pytest.fixture(scope="session")
def models():
    out = {f"M{k}": standard_model("Mk", k) for k in range(6)}
    out.update({f"D{c}": standard_model("Dc", c) for c in range(-3, 4)})
    return out
