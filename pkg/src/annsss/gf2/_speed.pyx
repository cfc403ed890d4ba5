# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled GF(2) kernel: pivot rows live in packed uint64 buffers.

Same API as ``_pure``; vectors still cross the boundary as Python ints
(converted once per call), so callers never see the packing.
"""

from libc.stdlib cimport calloc, free, realloc
from libc.string cimport memcpy

cdef extern from *:
    """
    typedef unsigned long long u64;
    static inline int top_bit64(u64 x) { return 63 - __builtin_clzll(x); }
    """
    ctypedef unsigned long long u64
    int top_bit64(u64 x)

BACKEND_NAME = "compiled"

cdef enum:
    WORD = 64


cdef class SpanSolver:
    """Incremental GF(2) span membership with a retained pivot cache."""

    cdef u64 *rows          # pivot rows, row-major, nwords words each
    cdef Py_ssize_t *slot   # pivot bit index -> row slot (-1: free)
    cdef Py_ssize_t nrows, cap_rows, nwords, nbits
    cdef u64 *scratch

    def __cinit__(self):
        self.nrows = 0
        self.cap_rows = 0
        self.nwords = 1
        self.nbits = 0
        self.rows = NULL
        self.slot = NULL
        self.scratch = <u64 *> calloc(self.nwords, sizeof(u64))
        if self.scratch is NULL:
            raise MemoryError()

    def __dealloc__(self):
        free(self.rows)
        free(self.slot)
        free(self.scratch)

    @property
    def rank(self):
        return self.nrows

    cdef int _grow_bits(self, Py_ssize_t need_bits) except -1:
        cdef Py_ssize_t new_words, i, j
        cdef u64 *nr
        cdef Py_ssize_t *ns
        if need_bits <= self.nbits:
            return 0
        new_words = (need_bits + WORD - 1) // WORD
        if new_words > self.nwords:
            nr = <u64 *> calloc((self.cap_rows if self.cap_rows else 1) * new_words,
                                sizeof(u64))
            if nr is NULL:
                raise MemoryError()
            for i in range(self.nrows):
                memcpy(nr + i * new_words, self.rows + i * self.nwords,
                       self.nwords * sizeof(u64))
            free(self.rows)
            self.rows = nr
            free(self.scratch)
            self.scratch = <u64 *> calloc(new_words, sizeof(u64))
            if self.scratch is NULL:
                raise MemoryError()
            self.nwords = new_words
        ns = <Py_ssize_t *> realloc(self.slot, need_bits * sizeof(Py_ssize_t))
        if ns is NULL:
            raise MemoryError()
        for j in range(self.nbits, need_bits):
            ns[j] = -1
        self.slot = ns
        self.nbits = need_bits
        return 0

    cdef int _grow_rows(self) except -1:
        cdef Py_ssize_t new_cap = self.cap_rows * 2 if self.cap_rows else 16
        cdef u64 *nr = <u64 *> calloc(new_cap * self.nwords, sizeof(u64))
        if nr is NULL:
            raise MemoryError()
        if self.rows is not NULL:
            memcpy(nr, self.rows, self.nrows * self.nwords * sizeof(u64))
            free(self.rows)
        self.rows = nr
        self.cap_rows = new_cap
        return 0

    cdef int _load(self, vec) except -1:
        """Unpack a Python int into the scratch buffer."""
        cdef Py_ssize_t bits = vec.bit_length()
        cdef const unsigned char[::1] view
        if bits > self.nbits:
            self._grow_bits(bits)
        data = vec.to_bytes(self.nwords * 8, "little")
        view = data
        memcpy(self.scratch, &view[0], self.nwords * 8)
        return 0

    cdef Py_ssize_t _top_bit(self):
        """Index of the highest set bit in scratch, or -1."""
        cdef Py_ssize_t w
        for w in range(self.nwords - 1, -1, -1):
            if self.scratch[w]:
                return w * WORD + top_bit64(self.scratch[w])
        return -1

    cdef Py_ssize_t _reduce_scratch(self):
        """Eliminate scratch against the pivots; returns its final top bit (-1 if 0)."""
        cdef Py_ssize_t t, s, w
        cdef u64 *row
        while True:
            t = self._top_bit()
            if t < 0:
                return -1
            s = self.slot[t]
            if s < 0:
                return t
            row = self.rows + s * self.nwords
            for w in range(t // WORD, -1, -1):
                self.scratch[w] ^= row[w]

    cdef object _scratch_to_int(self):
        data = (<unsigned char *> self.scratch)[: self.nwords * 8]
        return int.from_bytes(data, "little")

    def add(self, vec):
        """Insert a vector; returns True if it enlarged the span."""
        cdef Py_ssize_t t
        if vec < 0:
            raise ValueError("negative vector")
        self._load(vec)
        t = self._reduce_scratch()
        if t < 0:
            return False
        if self.nrows == self.cap_rows:
            self._grow_rows()
        memcpy(self.rows + self.nrows * self.nwords, self.scratch,
               self.nwords * sizeof(u64))
        self.slot[t] = self.nrows
        self.nrows += 1
        return True

    def reduce(self, vec):
        """Residual of vec modulo the current span."""
        if vec < 0:
            raise ValueError("negative vector")
        self._load(vec)
        self._reduce_scratch()
        return self._scratch_to_int()

    def contains(self, vec):
        if vec < 0:
            raise ValueError("negative vector")
        self._load(vec)
        return self._reduce_scratch() < 0

    def clone(self):
        cdef SpanSolver other = SpanSolver.__new__(SpanSolver)
        other._grow_bits(self.nbits if self.nbits else 1)
        while other.cap_rows < self.nrows:
            other._grow_rows()
        if self.nrows:
            memcpy(other.rows, self.rows, self.nrows * self.nwords * sizeof(u64))
        if self.nbits:
            memcpy(other.slot, self.slot, self.nbits * sizeof(Py_ssize_t))
        other.nrows = self.nrows
        return other


def rank_of_rows(rows):
    """GF(2) rank of the given rows."""
    cdef SpanSolver solver = SpanSolver()
    cdef Py_ssize_t n = 0
    for row in rows:
        if solver.add(row):
            n += 1
    return n


def mul_rows(a_rows, b_rows):
    """Rows of the product A*B (ints as bitsets; not a hot path)."""
    out = []
    for m in a_rows:
        acc = 0
        while m:
            low = m & -m
            acc ^= b_rows[low.bit_length() - 1]
            m ^= low
        out.append(acc)
    return out
