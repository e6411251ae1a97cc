"""Pure-Python exhaustive search kernel.

One kernel instance serves one graph under one rule set (the ``guarded``
vector says at which vertices sinks/sources are forbidden).  Positions are
ternary codes, one digit per edge in edge-index order: 0 unmarked, 1 pointing
low->high endpoint, 2 the reverse.  Both evaluations memoize on the exact
code, so repeated queries against the same graph share work.

``arrows._kernel_c`` is the compiled twin with the same interface; the active
backend is chosen in ``arrows.kernel``.
"""

from __future__ import annotations

BACKEND = "python"

_EVEN, _ODD = 1, 2  # reachable-parity bits for move_parity


class NaiveKernel:
    """Memoized mex recursion over all followers, no reduction, no splitting."""

    def __init__(self, vertex_count, edge_u, edge_v, guarded):
        self.n = int(vertex_count)
        self.eu = [int(u) for u in edge_u]
        self.ev = [int(w) for w in edge_v]
        self.m = len(self.eu)
        self.guarded = [bool(b) for b in guarded]
        if len(self.ev) != self.m or len(self.guarded) != self.n:
            raise ValueError("inconsistent kernel arrays")
        self.pow3 = [3**i for i in range(self.m)]
        self._grundy: dict[int, int] = {}
        self._parity: dict[int, int] = {}
        self.nodes = 0

    def _profile(self, code: int):
        slots = [0] * self.m
        unmarked = [0] * self.n
        ins = [0] * self.n
        outs = [0] * self.n
        for i in range(self.m):
            code, s = divmod(code, 3)
            slots[i] = s
            u, w = self.eu[i], self.ev[i]
            if s == 0:
                unmarked[u] += 1
                unmarked[w] += 1
            elif s == 1:
                outs[u] += 1
                ins[w] += 1
            else:
                outs[w] += 1
                ins[u] += 1
        return slots, unmarked, ins, outs

    def _children(self, code: int):
        slots, unmarked, ins, outs = self._profile(code)
        guarded = self.guarded
        out = []
        for i in range(self.m):
            if slots[i]:
                continue
            u, w = self.eu[i], self.ev[i]
            u_last = unmarked[u] == 1
            w_last = unmarked[w] == 1
            if not (
                (guarded[w] and w_last and outs[w] == 0)
                or (guarded[u] and u_last and ins[u] == 0)
            ):
                out.append(code + self.pow3[i])
            if not (
                (guarded[u] and u_last and outs[u] == 0)
                or (guarded[w] and w_last and ins[w] == 0)
            ):
                out.append(code + 2 * self.pow3[i])
        return out

    def grundy(self, code: int) -> int:
        got = self._grundy.get(code)
        if got is not None:
            return got
        self.nodes += 1
        seen = 0
        for child in self._children(code):
            seen |= 1 << self.grundy(child)
        g = 0
        while seen & (1 << g):
            g += 1
        self._grundy[code] = g
        return g

    def move_parity(self, code: int) -> int:
        """Bitmask of reachable completion parities: 1 even, 2 odd, 3 both."""
        got = self._parity.get(code)
        if got is not None:
            return got
        children = self._children(code)
        if not children:
            mask = _EVEN
        else:
            mask = 0
            for child in children:
                sub = self.move_parity(child)
                mask |= ((sub & _EVEN) << 1) | ((sub & _ODD) >> 1)
                if mask == 3:
                    break
        self._parity[code] = mask
        return mask
