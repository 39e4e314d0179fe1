import math

import numpy as np
from hypothesis import strategies as st

from projifs.geometry import Matrix2


def sl2_from_params(alpha: float, r: float, beta: float) -> Matrix2:
    """R(alpha) diag(e^r, e^-r) R(beta); every SL(2) matrix arises this way."""
    ca, sa = math.cos(alpha), math.sin(alpha)
    cb, sb = math.cos(beta), math.sin(beta)
    er, emr = math.exp(r), math.exp(-r)
    return Matrix2(
        ca * er * cb - sa * emr * sb,
        -ca * er * sb - sa * emr * cb,
        sa * er * cb + ca * emr * sb,
        -sa * er * sb + ca * emr * cb,
    )


@st.composite
def sl2_matrices(draw, max_log: float = 3.0):
    alpha = draw(st.floats(0.0, math.pi, allow_nan=False))
    beta = draw(st.floats(0.0, math.pi, allow_nan=False))
    r = draw(st.floats(-max_log, max_log, allow_nan=False))
    return sl2_from_params(alpha, r, beta)


def random_sl2(rng: np.random.Generator, max_log: float = 3.0) -> Matrix2:
    alpha, beta = rng.uniform(0.0, math.pi, size=2)
    r = rng.uniform(-max_log, max_log)
    return sl2_from_params(alpha, r, beta)
