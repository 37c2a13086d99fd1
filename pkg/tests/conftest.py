import functools

import pytest
from hypothesis import HealthCheck, settings

from aggsolve.oracle import DEFAULT_SIGNATURE, Signature, enumerate_universe
from aggsolve.syntax import parse, parse_term
from aggsolve.terms import Theory

settings.register_profile(
    "default", deadline=None, max_examples=150,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

L, M, C, S = Theory.LIST, Theory.MSET, Theory.CLIST, Theory.SET
ALL_THEORIES = list(Theory)


def T(text, theory=None):
    """Parse one term, reserved names allowed."""
    return parse_term(text, theory, allow_reserved=True)


def P(text, theory=None):
    """Parse a conjunction, reserved names allowed."""
    return parse(text, theory, allow_reserved=True)


@functools.lru_cache(maxsize=None)
def universe(theory, depth=3, signature=DEFAULT_SIGNATURE):
    return enumerate_universe(theory, signature, depth)


SMALL = Signature(("nil", "a", "b"), ())


@pytest.fixture(params=ALL_THEORIES, ids=lambda t: t.value)
def theory(request):
    return request.param
