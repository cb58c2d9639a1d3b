import numpy as np

from tricap import make_rng


def test_same_arguments_same_stream():
    a = make_rng(5, 1, 2).integers(0, 1 << 30, size=16)
    b = make_rng(5, 1, 2).integers(0, 1 << 30, size=16)
    assert np.array_equal(a, b)


def test_distinct_streams_differ():
    base = make_rng(5).integers(0, 1 << 30, size=16)
    for stream in [(0,), (1,), (1, 0), (2, 7)]:
        other = make_rng(5, *stream).integers(0, 1 << 30, size=16)
        assert not np.array_equal(base, other)


def test_seed_changes_stream():
    a = make_rng(1, 3).integers(0, 1 << 30, size=16)
    b = make_rng(2, 3).integers(0, 1 << 30, size=16)
    assert not np.array_equal(a, b)
