from pathlib import Path

import pytest

from recop import BivectorField, Chart

PROBLEM_DIR = Path(__file__).resolve().parent.parent / "problems"

# Expression corpus for derivative checks: every expression is smooth on
# the closed box [-1, 1]^3 (bases and denominators bounded away from the
# singular loci).
AD_CORPUS = [
    "z1",
    "z1 + z2*z3",
    "z1*z2*z3",
    "z1^2 + z2^2 + z3^2",
    "sin(z1)",
    "cos(z1*z2)",
    "exp(z3)",
    "exp(z1*z2)",
    "log(2 + z1)",
    "sqrt(2 + z2)",
    "1/(3 + z1)",
    "z1/(2 + z2)",
    "(z1 + z2)/(3 + z3)",
    "z1^3",
    "z2^4 - z1^2",
    "(1 + z1^2)^0.5",
    "(2 + z1)^1.5",
    "(2 + z1)^z2",
    "sin(z1)*cos(z2) + exp(z3)",
    "sin(z1*z2*z3)",
    "exp(sin(z1) + cos(z2))",
    "log(3 + z1*z2)",
    "sqrt(5 + z1*z2*z3)",
    "-z1*z2 + z3",
    "2^z1",
    "z1^2*z2 + z2^2*z3 + z3^2*z1",
    "cos(z1)^2 + sin(z1)^2",
    "exp(-z1^2 - z2^2)",
    "log(exp(z1) + exp(z2))",
    "sqrt(z1^2 + z2^2 + z3^2 + 1)",
]


@pytest.fixture(scope="session")
def chart3():
    return Chart(("z1", "z2", "z3"))


@pytest.fixture(scope="session")
def chart4():
    return Chart(("z1", "z2", "z3", "z4"))


@pytest.fixture(scope="session")
def w_const(chart3):
    """d1 ^ d2 on R^3."""
    return BivectorField.from_upper_strings(chart3, {(0, 1): "1"})


@pytest.fixture(scope="session")
def w_const_double(chart3):
    return BivectorField.from_upper_strings(chart3, {(0, 1): "2"})


@pytest.fixture(scope="session")
def w_exp_scale(chart3):
    return BivectorField.from_upper_strings(chart3, {(0, 1): "exp(z3)"})


@pytest.fixture(scope="session")
def so3(chart3):
    """Lie-Poisson bivector of so(3)*: w12=z3, w13=-z2, w23=z1."""
    return BivectorField.from_upper_strings(
        chart3, {(0, 1): "z3", (0, 2): "-z2", (1, 2): "z1"}
    )


@pytest.fixture(scope="session")
def so3_casimir_scaled(chart3):
    """so(3)* scaled by 1 + |z|^2 (a function of its Casimir)."""
    scale = "(1 + z1^2 + z2^2 + z3^2)"
    return BivectorField.from_upper_strings(
        chart3,
        {(0, 1): f"{scale} * z3", (0, 2): f"-{scale} * z2", (1, 2): f"{scale} * z1"},
    )


@pytest.fixture(scope="session")
def w_non_poisson(chart3):
    """w12=1, w23=z2: Jacobi residual is exactly 1 everywhere."""
    return BivectorField.from_upper_strings(chart3, {(0, 1): "1", (1, 2): "z2"})
