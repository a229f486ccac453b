"""Shared fixtures: the packaged curve catalog and an independent a_p oracle."""

from __future__ import annotations

import numpy as np
import pytest

from watkins.data import load_fixtures, record_from_row


@pytest.fixture(scope="session")
def fixture_rows():
    return load_fixtures()


@pytest.fixture(scope="session")
def records(fixture_rows):
    return {label: record_from_row(row) for label, row in fixture_rows.items()}


def brute_ap(model, p: int) -> int:
    """Trace of Frobenius by exhausting the full (x, y) grid mod p.

    Shares nothing with the library's counting code: no completed
    square, no group law, just the affine equation evaluated at every
    point.  Only meant for small p.
    """
    assert p <= 3000, "oracle is quadratic in p; keep it small"
    a1, a2, a3, a4, a6 = (a % p for a in model.ainvs())
    xs = np.arange(p, dtype=np.int64)
    ys = xs.reshape(-1, 1)
    lhs = (ys * ys + (a1 * xs % p) * ys + a3 * ys) % p
    rhs = (xs * xs % p * xs + a2 * xs % p * xs + a4 * xs + a6) % p
    affine = int(np.count_nonzero(lhs == rhs[None, :]))
    return p - affine  # p + 1 - (affine + 1)
