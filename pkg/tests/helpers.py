"""Fixtures and a tiny-instance sampler shared by the test modules."""
from __future__ import annotations

import numpy as np
from hypothesis import strategies as st

from sdtp.model import SdtpInstance

EX1 = SdtpInstance.from_lists(2, [(2, 1, 5)], {1: [(0, 2), (8, 10)], 2: [(9, 12)]}, name="ex1")
EX2 = SdtpInstance.from_lists(2, [(2, 1, 5)], {1: [(0, 2), (8, 10)], 2: [(20, 22)]}, name="ex2")
EX3 = SdtpInstance.from_lists(2, [(1, 2, -3), (2, 1, 2)], {1: [(0, 100)], 2: [(0, 100)]}, name="ex3")

EX1_TEXT = "p sdtp 2 1 2\na 2 1 5\nd 1 2 0 2 8 10\nd 2 1 9 12\n"
EX3_TEXT = "p sdtp 2 2 2\na 1 2 -3\na 2 1 2\nd 1 1 0 100\nd 2 1 0 100\n"

VALUE_RANGE = (-30, 30)


def _domain(g: np.random.Generator, k: int) -> list[tuple[int, int]]:
    pts = np.sort(g.choice(np.arange(VALUE_RANGE[0], VALUE_RANGE[1] + 1), size=2 * k, replace=False))
    ivs = [(int(pts[2 * c]), int(pts[2 * c + 1])) for c in range(k)]
    # occasionally collapse an interval to a single value
    return [(l, l) if g.random() < 0.15 else (l, u) for l, u in ivs]


def tiny_instance(seed: int, max_n: int = 6, max_k: int = 3, max_m1: int = 10, wmax: int = 20) -> SdtpInstance:
    """Random instance with at most ``max_n`` time-points and ``max_k`` intervals each."""
    g = np.random.default_rng(seed)
    n = int(g.integers(1, max_n + 1))
    doms = {i: _domain(g, int(g.integers(1, max_k + 1))) for i in range(1, n + 1)}
    c1 = []
    if n >= 2:
        for _ in range(int(g.integers(0, max_m1 + 1))):
            i, j = (int(v) for v in g.choice(np.arange(1, n + 1), size=2, replace=False))
            c1.append((i, j, int(g.integers(-wmax, wmax + 1))))
    return SdtpInstance.from_lists(n, c1, doms, name=f"tiny{seed}")


@st.composite
def tiny_instances(draw, max_n: int = 5, max_k: int = 3, max_m1: int = 8, wmax: int = 20):
    n = draw(st.integers(1, max_n))
    doms = {}
    for i in range(1, n + 1):
        k = draw(st.integers(1, max_k))
        cuts = sorted(draw(st.sets(st.integers(*VALUE_RANGE), min_size=2 * k, max_size=2 * k)))
        doms[i] = [(cuts[2 * c], cuts[2 * c + 1]) for c in range(k)]
    c1 = []
    if n >= 2:
        pairs = st.tuples(st.integers(1, n), st.integers(1, n), st.integers(-wmax, wmax)).filter(lambda t: t[0] != t[1])
        c1 = draw(st.lists(pairs, max_size=max_m1))
    return SdtpInstance.from_lists(n, c1, doms)
