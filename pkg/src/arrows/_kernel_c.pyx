# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled exhaustive search kernel; interface-identical twin of _kernel_py.

Positions are ternary codes over the edge slots.  The per-graph memo tables
live in C++ hash maps, and the recursion runs entirely in C, which is what
makes the exhaustive oracle sweeps cheap.
"""

from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector

BACKEND = "c"

cdef int MAX_EDGES = 40
cdef int MAX_VERTICES = 64

cdef int _EVEN = 1
cdef int _ODD = 2


cdef class NaiveKernel:
    cdef int n, m
    cdef int eu[40]
    cdef int ev[40]
    cdef unsigned char guarded[64]
    cdef long long pow3[40]
    cdef unordered_map[long long, int] gmemo
    cdef unordered_map[long long, int] pmemo
    cdef public long long nodes

    def __init__(self, vertex_count, edge_u, edge_v, guarded):
        cdef int i
        self.n = vertex_count
        self.m = len(edge_u)
        if len(edge_v) != self.m or len(guarded) != self.n:
            raise ValueError("inconsistent kernel arrays")
        if self.m > MAX_EDGES or self.n > MAX_VERTICES:
            raise ValueError("graph too large for the compiled kernel")
        for i in range(self.m):
            self.eu[i] = edge_u[i]
            self.ev[i] = edge_v[i]
        for i in range(self.n):
            self.guarded[i] = 1 if guarded[i] else 0
        cdef long long p = 1
        for i in range(self.m):
            self.pow3[i] = p
            p *= 3
        self.nodes = 0

    cdef int _nchildren(self, long long code, long long* children):
        cdef int slots[40]
        cdef int unmarked[64]
        cdef int ins[64]
        cdef int outs[64]
        cdef int i, s, u, w, count
        cdef long long c = code
        for i in range(self.n):
            unmarked[i] = 0
            ins[i] = 0
            outs[i] = 0
        for i in range(self.m):
            s = <int>(c % 3)
            c = c // 3
            slots[i] = s
            u = self.eu[i]
            w = self.ev[i]
            if s == 0:
                unmarked[u] += 1
                unmarked[w] += 1
            elif s == 1:
                outs[u] += 1
                ins[w] += 1
            else:
                outs[w] += 1
                ins[u] += 1
        count = 0
        for i in range(self.m):
            if slots[i]:
                continue
            u = self.eu[i]
            w = self.ev[i]
            if not ((self.guarded[w] and unmarked[w] == 1 and outs[w] == 0)
                    or (self.guarded[u] and unmarked[u] == 1 and ins[u] == 0)):
                children[count] = code + self.pow3[i]
                count += 1
            if not ((self.guarded[u] and unmarked[u] == 1 and outs[u] == 0)
                    or (self.guarded[w] and unmarked[w] == 1 and ins[w] == 0)):
                children[count] = code + 2 * self.pow3[i]
                count += 1
        return count

    cdef int _grundy(self, long long code):
        cdef long long children[80]
        cdef int count, i, g
        cdef unsigned long long seen = 0
        cdef unordered_map[long long, int].iterator it = self.gmemo.find(code)
        if it != self.gmemo.end():
            return self.gmemo[code]
        self.nodes += 1
        count = self._nchildren(code, children)
        for i in range(count):
            seen |= (<unsigned long long>1) << self._grundy(children[i])
        g = 0
        while seen & ((<unsigned long long>1) << g):
            g += 1
        self.gmemo[code] = g
        return g

    cdef int _parity(self, long long code):
        cdef unordered_map[long long, int].iterator it = self.pmemo.find(code)
        if it != self.pmemo.end():
            return self.pmemo[code]
        cdef long long children[80]
        cdef int count, i, mask, sub
        count = self._nchildren(code, children)
        if count == 0:
            mask = _EVEN
        else:
            mask = 0
            for i in range(count):
                sub = self._parity(children[i])
                mask |= ((sub & _EVEN) << 1) | ((sub & _ODD) >> 1)
                if mask == 3:
                    break
        self.pmemo[code] = mask
        return mask

    def grundy(self, code):
        return self._grundy(code)

    def move_parity(self, code):
        """Bitmask of reachable completion parities: 1 even, 2 odd, 3 both."""
        return self._parity(code)
