import cmath

from hypothesis import settings

settings.register_profile("default", deadline=None)
settings.load_profile("default")


def to_complex(x):
    """Numeric value of a Cyclotomic, straight from its power-basis coefficients."""
    n = x.conductor
    return sum(complex(float(v)) * cmath.exp(2j * cmath.pi * k / n) for k, v in x.coeffs.items())


def close(a, b, tol=1e-9):
    return abs(complex(a) - complex(b)) < tol
