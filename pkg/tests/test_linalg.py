import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from golden_ep.linalg import InnerProductSpace, Vector, combine, dot, norm, read_rows, write_rows

E2 = InnerProductSpace.euclidean(2)


def test_dot_examples():
    assert dot(Vector([1, 2], E2), Vector([3, 4], E2)) == 11
    assert dot(Vector([1.5, -2], E2), E2.zeros()) == 0


@pytest.mark.parametrize("N", [2, 11, 101, 1001])
def test_quadrature_weights_sum_to_one(N):
    space = InnerProductSpace.l2(N)
    one = Vector(np.ones(N), space)
    assert dot(one, one) == pytest.approx(1.0, abs=1e-12)
    assert np.all(space.weights > 0)


def test_norm_examples():
    assert norm(Vector([3, 4], E2)) == 5
    assert norm(E2.zeros()) == 0


@pytest.mark.parametrize("N", [101, 401])
def test_norm_of_sqrt_2t_is_one(N):
    # int_0^1 2t dt = 1; trapezoid integrates the linear integrand exactly
    space = InnerProductSpace.l2(N)
    v = space.sample(lambda t: np.sqrt(2 * t))
    assert norm(v) == pytest.approx(1.0, abs=1.0 / N**2)


def test_combine_examples():
    a, b = Vector([2, 0], E2), Vector([0, 2], E2)
    assert combine(1.0, a, b) == a
    assert combine(0.0, a, b) == b
    mid = combine(0.5, a, b)
    assert mid == Vector([1, 1], E2)
    assert dot(mid, mid) == 0.5 * 4 + 0.5 * 4 - 0.25 * 8 == 2


def test_space_mismatch_is_an_error():
    with pytest.raises(ValueError):
        dot(Vector([1, 2], E2), Vector([1, 2, 3], InnerProductSpace.euclidean(3)))
    with pytest.raises(ValueError):
        dot(Vector([1, 2], E2), Vector([1, 2], InnerProductSpace.l2(2)))
    with pytest.raises(ValueError):
        Vector([1, 2, 3], E2)


def test_vectors_reject_nonfinite_and_mutation():
    with pytest.raises(ValueError):
        Vector([np.nan, 1], E2)
    v = Vector([1, 2], E2)
    with pytest.raises(ValueError):
        v.coords[0] = 5
    with pytest.raises(AttributeError):
        v.coords = np.zeros(2)


def _hbh_defect(t, a, b):
    lhs = norm(combine(t, a, b)) ** 2
    rhs = t * norm(a) ** 2 + (1 - t) * norm(b) ** 2 - t * (1 - t) * norm(a - b) ** 2
    scale = 1 + abs(t * norm(a) ** 2) + abs((1 - t) * norm(b) ** 2) + abs(t * (1 - t)) * norm(a - b) ** 2
    return abs(lhs - rhs) / scale


@pytest.mark.parametrize("space", [InnerProductSpace.euclidean(7), InnerProductSpace.l2(51)])
def test_convex_combination_identity_on_random_triples(space, rng):
    worst = 0.0
    for _ in range(1000):
        t = rng.uniform(-3, 3)
        a = Vector(rng.standard_normal(space.dim), space)
        b = Vector(rng.standard_normal(space.dim), space)
        worst = max(worst, _hbh_defect(t, a, b))
    assert worst < 1e-10


def test_dot_symmetric_and_bilinear(rng):
    space = InnerProductSpace.l2(33)
    for _ in range(200):
        a, b, c = (Vector(rng.standard_normal(33), space) for _ in range(3))
        s = rng.uniform(-5, 5)
        assert abs(dot(a, b) - dot(b, a)) < 1e-12
        assert abs(dot(s * a + c, b) - (s * dot(a, b) + dot(c, b))) < 1e-12 * (1 + abs(s)) * 10
        assert abs(dot(a, s * b + c) - (s * dot(a, b) + dot(a, c))) < 1e-12 * (1 + abs(s)) * 10


finite = st.floats(-1e3, 1e3, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(t=st.floats(-10, 10), a=arrays(float, 4, elements=finite), b=arrays(float, 4, elements=finite))
def test_convex_combination_identity_property(t, a, b):
    space = InnerProductSpace.euclidean(4)
    assert _hbh_defect(t, Vector(a, space), Vector(b, space)) < 1e-10


def test_row_serialisation_round_trips(tmp_path, rng):
    space = InnerProductSpace.l2(17)
    vs = [Vector(rng.standard_normal(17), space) for _ in range(3)]
    path = tmp_path / "v.csv"
    write_rows(path, vs)
    back = read_rows(path, space)
    assert back == vs
    assert "," in path.read_text().splitlines()[0]
