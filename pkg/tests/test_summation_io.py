import math
from fractions import Fraction

import mpmath
import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from logvvmf.io import decode_complex, decode_mu, dumps, encode_complex, encode_mu
from logvvmf.summation import Neumaier, chunked_sum

finite = st.floats(-1e12, 1e12, allow_nan=False)


@given(st.lists(finite, min_size=1, max_size=200))
@settings(max_examples=100)
def test_compensated_sum_matches_fsum(xs):
    acc = Neumaier(())
    for x in xs:
        acc.add(x)
    assert abs(acc.value.real - math.fsum(xs)) <= 1e-15 * sum(abs(x) for x in xs) + 1e-300


def test_cancellation():
    acc = Neumaier((), dtype=float)
    for x in (1e16, 1.0, -1e16):
        acc.add(x)
    assert acc.value == 1.0


@given(st.integers(1, 8))
@settings(max_examples=8, deadline=None)
def test_chunked_sum_thread_independent(threads):
    rng = np.random.default_rng(0)
    data = rng.normal(size=(40, 64, 3)) * 10.0 ** rng.integers(-8, 8, size=(40, 1, 1))

    def make(i):
        return data[i].astype(complex)

    ref = chunked_sum(make, 40, (3,), threads=1)
    assert chunked_sum(make, 40, (3,), threads=threads).tobytes() == ref.tobytes()


@given(st.complex_numbers(allow_nan=False, allow_infinity=False))
def test_complex_roundtrip(z):
    assert decode_complex(encode_complex(z)) == z


def test_mpmath_keeps_digits():
    with mpmath.workdps(30):
        re, _ = encode_complex(mpmath.mpc(1, 0) / 3)
    assert len(re.replace("0.", "")) >= 29


def test_mu_codec():
    assert decode_mu("1/3") == Fraction(1, 3)
    assert encode_mu(Fraction(2, 5)) == "2/5"
    assert isinstance(decode_mu(0.1234567891234), float)


def test_dumps_canonical():
    assert dumps({"b": 1, "a": [1, 2]}) == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'
