"""Shared fixtures and the test-local reference evaluator.

``brute_grundy`` recurses directly on ``legal_moves``/``apply_move`` with a
plain dictionary memo.  It knows nothing about the engine's reduction,
canonical keys, or search kernels, which makes it a genuinely independent
oracle for small positions.
"""

from __future__ import annotations

import pytest

from arrows.engine import GrundyEngine
from arrows.states import State


def brute_grundy(state: State, _memo: dict | None = None) -> int:
    memo = _memo if _memo is not None else {}
    key = state.slots
    if key in memo:
        return memo[key]
    values = {brute_grundy(state.apply_move(m), memo) for m in state.legal_moves()}
    g = 0
    while g in values:
        g += 1
    memo[key] = g
    return g


def brute_completion_parities(state: State, _memo: dict | None = None) -> set[int]:
    """Parities (0 even / 1 odd) of added-arrow counts over all terminal lines."""
    memo = _memo if _memo is not None else {}
    key = state.slots
    if key in memo:
        return memo[key]
    moves = state.legal_moves()
    if not moves:
        out = {0}
    else:
        out = set()
        for m in moves:
            out |= {p ^ 1 for p in brute_completion_parities(state.apply_move(m), memo)}
    memo[key] = out
    return out


@pytest.fixture(scope="module")
def engine() -> GrundyEngine:
    return GrundyEngine()
