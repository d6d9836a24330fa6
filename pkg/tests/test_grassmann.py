import random
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from m11pi.grassmann import (
    BudgetExceeded,
    GeneratorAllocator,
    GrassmannContext,
    GrassmannElement,
    parity_projection,
    word,
    word_mul,
)
from m11pi.scalars import GF, QQ

CTX = GrassmannContext(QQ, 6, True)


def E(ctx, *parts):
    out = GrassmannElement.zero(ctx)
    for idx, c in parts:
        out = out + GrassmannElement.monomial(ctx, idx, c)
    return out


def test_word_mul_examples():
    assert word_mul(word(2), word(1)) == (-1, word(1, 2))
    assert word_mul(word(1), word(1))[0] == 0
    assert word_mul(word(1, 2), word(3)) == (1, word(1, 2, 3))


def test_elem_examples():
    e1, e2 = E(CTX, ((1,), 1)), E(CTX, ((2,), 1))
    assert (e1 * e2 + e2 * e1).is_zero()
    x = E(CTX, ((1, 2), 1), ((3, 4), 1))
    assert x * x == E(CTX, ((1, 2, 3, 4), 2))
    y = E(CTX, ((1,), 1), ((1, 2), 1))
    assert parity_projection(y, 1) == e1
    assert parity_projection(y, 0) == E(CTX, ((1, 2), 1))


def test_non_unital_rejects_empty_word():
    ctx = GrassmannContext(QQ, 3, False)
    with pytest.raises(Exception):
        GrassmannElement.one(ctx)


def test_allocator():
    a = GeneratorAllocator(4)
    b1, b2 = a.fresh_block(2), a.fresh_block(2)
    assert list(b1) == [1, 2] and list(b2) == [3, 4]
    assert not set(b1) & set(b2)
    with pytest.raises(BudgetExceeded):
        a.fresh_block(1)


def _random(ctx, rng, parity=None, terms=3):
    words = [w for n in range(0, ctx.N + 1) for w in combinations(range(1, ctx.N + 1), n)]
    words = [w for w in words if (ctx.unital or w) and (parity is None or len(w) % 2 == parity)]
    parts = [(rng.choice(words), rng.randint(-3, 3)) for _ in range(terms)]
    return E(ctx, *parts)


def test_supercommutativity_exhaustive_small():
    for N in range(1, 5):
        ctx = GrassmannContext(QQ, N, True)
        words = [w for n in range(N + 1) for w in combinations(range(1, N + 1), n)]
        for u in words:
            for v in words:
                x, y = E(ctx, (u, 1)), E(ctx, (v, 1))
                s = -1 if (len(u) % 2) * (len(v) % 2) else 1
                assert x * y == (y * x).scale(s)


@given(st.integers(0, 10_000))
def test_random_laws(seed):
    rng = random.Random(seed)
    ctx = GrassmannContext(GF(5) if seed % 2 else QQ, 7, bool(seed % 3))
    x, y, z = (_random(ctx, rng) for _ in range(3))
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert parity_projection(x, 0) + parity_projection(x, 1) == x
    odd = _random(ctx, rng, parity=1)
    assert (odd * odd).is_zero()
    ev = parity_projection(x, 0)
    assert ev * y == y * ev
    u, v = _random(ctx, rng, parity=1), _random(ctx, rng, parity=1)
    assert u * v == -(v * u)
