import pytest

from hecache.he import keygen
from hecache.ring import DEFAULT_PARAMS, DESK_PARAMS, Params, RandomStream


class ZeroStream:
    """Degenerate randomness: every draw is zero.

    With the sampler conventions (ternary draw 0 -> 0, gauss 0 -> 0)
    this makes u = e1 = e2 = 0, turning encryption deterministic.
    """

    def randrange(self, start, stop=None):
        return 0 if stop is None else start

    def random(self):
        return 0.0

    def gauss(self, sigma):
        return 0.0

    def getrandbits(self, k):
        return 0

    def bit(self):
        return 0

    def split(self):
        return self


def schoolbook_negacyclic(a, b, q):
    """O(N^2) reference for multiplication modulo X^N + 1."""
    n = len(a)
    out = [0] * n
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            k = i + j
            if k < n:
                out[k] += ai * bj
            else:
                out[k - n] -= ai * bj
    return tuple(c % q for c in out)


@pytest.fixture(scope="session")
def desk():
    return DESK_PARAMS


@pytest.fixture(scope="session")
def default():
    return DEFAULT_PARAMS


@pytest.fixture(scope="session")
def default_keys():
    return keygen(DEFAULT_PARAMS, RandomStream(0xA11CE))


@pytest.fixture(scope="session")
def desk_keys():
    return keygen(DESK_PARAMS, RandomStream(0xB0B))


@pytest.fixture
def zero_rng():
    return ZeroStream()


@pytest.fixture
def tiny():
    # q = 17 admits tiny hand-checkable examples; delta=2 keeps q > 2*delta^2
    return Params(N=8, q=17, delta=2)
