import pytest
from hypothesis import given, settings, strategies as st

from codecontrast import kernels

tokens = st.lists(st.sampled_from(["a", "b", "c", "x", ";", "(", ")"]), max_size=30)


@pytest.mark.parametrize("a,b,d", [([], [], 0), (["a"], [], 1), (list("abc"), list("axc"), 1),
                                   (list("kitten"), list("sitting"), 3)])
def test_known_distances(a, b, d):
    assert kernels.edit_distance(a, b) == d == kernels.edit_distance_python(a, b)


@settings(max_examples=200, deadline=None)
@given(tokens, tokens)
def test_backends_agree(a, b):
    want = kernels.edit_distance_python(a, b)
    assert kernels.edit_distance(a, b) == want
    if kernels.BACKEND == "cython":
        assert kernels.edit_distance_compiled(a, b) == want
    assert want == kernels.edit_distance_python(b, a)
    assert abs(len(a) - len(b)) <= want <= max(len(a), len(b))


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")


def test_env_forces_pure_fallback():
    import os
    import subprocess
    import sys

    env = {**os.environ, "CODECONTRAST_PURE": "1"}
    out = subprocess.run([sys.executable, "-c", "from codecontrast import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
