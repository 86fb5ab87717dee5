# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled search kernel for groups of order <= 64.

Mirrors ``zerosum._pykernel`` exactly: same traversal order, same pruning,
same node accounting.  Bitsets are single machine words; the non-abelian DP
table is an open-addressing hash map with count vectors packed 6 bits per
distinct element (up to 20 distinct elements, beyond which SupportOverflow
tells the engine to rerun on the pure lane).
"""

from libc.stdint cimport uint8_t, uint64_t, int64_t
from libc.stdlib cimport calloc, free, malloc

from ._pykernel import LimitExceeded, SupportOverflow

LANE = "cython"
MAX_ORDER = 64

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil

DEF MAX_SUPPORT = 20
DEF MAX_DEPTH = 72

cdef int OK = 0
cdef int ABORT_BUDGET = 1
cdef int ERR_LIMIT = 2
cdef int ERR_SUPPORT = 3


cdef class Context:
    cdef public int n
    cdef public int identity
    cdef public bint abelian
    cdef int chunks
    cdef int* mul
    cdef int* inv
    cdef uint64_t* trans   # n * 8 * 256

    def __cinit__(self, int n, mul_flat, inv, int identity, bint abelian):
        if n > MAX_ORDER:
            raise ValueError(f"compiled kernel supports order <= {MAX_ORDER}")
        self.n = n
        self.identity = identity
        self.abelian = abelian
        self.chunks = (n + 7) >> 3
        self.mul = <int*>malloc(n * n * sizeof(int))
        self.inv = <int*>malloc(n * sizeof(int))
        self.trans = <uint64_t*>calloc(<size_t>n * 2048, sizeof(uint64_t))
        if self.mul == NULL or self.inv == NULL or self.trans == NULL:
            raise MemoryError()
        cdef int i
        for i in range(n * n):
            self.mul[i] = mul_flat[i]
        for i in range(n):
            self.inv[i] = inv[i]
        cdef int e, pos, v, r, low
        cdef uint64_t* tab
        for e in range(n):
            for pos in range(self.chunks):
                tab = self.trans + ((<size_t>e << 11) + (<size_t>pos << 8))
                for v in range(1, 256):
                    low = v & (-v)
                    r = (pos << 3) + _bit_index(low)
                    if r < n:
                        tab[v] = tab[v ^ low] | (<uint64_t>1 << self.mul[r * n + e])
                    else:
                        tab[v] = tab[v ^ low]

    def __dealloc__(self):
        if self.mul != NULL:
            free(self.mul)
        if self.inv != NULL:
            free(self.inv)
        if self.trans != NULL:
            free(self.trans)


cdef inline int _bit_index(int v) nogil:
    cdef int i = 0
    while not (v & 1):
        v >>= 1
        i += 1
    return i


cdef inline uint64_t _translate(Context ctx, uint64_t mask, int e) nogil:
    cdef uint64_t out = 0
    cdef uint64_t* t = ctx.trans + (<size_t>e << 11)
    cdef int pos
    for pos in range(ctx.chunks):
        out |= t[(pos << 8) + <int>((mask >> (pos << 3)) & 0xFF)]
    return out


def build_context(int n, mul_flat, inv, int identity, bint abelian):
    return Context(n, mul_flat, inv, identity, abelian)


def translate(Context ctx, mask, int e):
    return _translate(ctx, <uint64_t>mask, e)


# ---------------------------------------------------------------------------
# Stand-alone reachability (layered DP, same layout as the pure lane)
# ---------------------------------------------------------------------------

def reachable(Context ctx, elems, counts, until_mask=0, state_cap=100_000_000):
    cdef int k = len(elems)
    cdef list el = [int(e) for e in elems]
    cdef list ct = [int(c) for c in counts]
    cdef int total = sum(ct)
    cdef uint64_t until = <uint64_t>until_mask
    cdef uint64_t result = 0, t, new
    cdef int64_t states_seen = 1
    cdef int64_t cap = state_cap
    cdef int i, step
    layer = {(0,) * k: 1 << ctx.identity}
    for step in range(total):
        nxt = {}
        for state, mask in layer.items():
            for i in range(k):
                if state[i] < ct[i]:
                    child = state[:i] + (state[i] + 1,) + state[i + 1:]
                    t = _translate(ctx, <uint64_t>mask, el[i])
                    prev = nxt.get(child)
                    if prev is None:
                        states_seen += 1
                        if states_seen > cap:
                            raise LimitExceeded(
                                f"reachability DP exceeds the state cap {state_cap}")
                        new = t
                    else:
                        new = <uint64_t>prev | t
                    nxt[child] = new
                    if until & new:
                        return result | new, True
        layer = nxt
        for mask in layer.values():
            result |= <uint64_t>mask
    return result, False


# ---------------------------------------------------------------------------
# Canonical DFS (max-length search / fixed-length enumeration)
# ---------------------------------------------------------------------------

cdef class _Search:
    cdef Context ctx
    cdef int mode            # 0 = max, 1 = enum
    cdef int target
    cdef int64_t budget
    cdef int64_t nodes
    cdef int root_best
    cdef int path[MAX_DEPTH]
    cdef int witness[MAX_DEPTH]
    cdef int witness_len
    cdef bint have_witness
    cdef list found
    # general-lane state
    cdef int support[MAX_SUPPORT]
    cdef int64_t scounts[MAX_SUPPORT]
    cdef int spt
    cdef int64_t live
    cdef int64_t state_cap
    cdef uint64_t gain
    # open-addressing map (tombstone deletion)
    cdef uint64_t* keys_lo
    cdef uint64_t* keys_hi
    cdef uint64_t* vals
    cdef uint8_t* slot_state  # 0 empty, 1 used, 2 tombstone
    cdef int64_t cap
    cdef int64_t used
    cdef int64_t filled
    # undo stack of inserted keys
    cdef uint64_t* undo_lo
    cdef uint64_t* undo_hi
    cdef int64_t undo_top
    cdef int64_t undo_cap

    def __cinit__(self, Context ctx, int mode, int target, int64_t budget,
                  int64_t state_cap):
        self.ctx = ctx
        self.mode = mode
        self.target = target
        self.budget = budget
        self.state_cap = state_cap
        self.found = []
        self.cap = 0
        self.keys_lo = NULL
        self.keys_hi = NULL
        self.vals = NULL
        self.slot_state = NULL
        self.undo_lo = NULL
        self.undo_hi = NULL
        if not ctx.abelian:
            self._map_init(1024)
            self.undo_cap = 4096
            self.undo_lo = <uint64_t*>malloc(self.undo_cap * sizeof(uint64_t))
            self.undo_hi = <uint64_t*>malloc(self.undo_cap * sizeof(uint64_t))
            if self.undo_lo == NULL or self.undo_hi == NULL:
                raise MemoryError()

    def __dealloc__(self):
        if self.keys_lo != NULL:
            free(self.keys_lo)
        if self.keys_hi != NULL:
            free(self.keys_hi)
        if self.vals != NULL:
            free(self.vals)
        if self.slot_state != NULL:
            free(self.slot_state)
        if self.undo_lo != NULL:
            free(self.undo_lo)
        if self.undo_hi != NULL:
            free(self.undo_hi)

    # -- hash map -----------------------------------------------------

    cdef int _map_init(self, int64_t cap) except -1:
        self.keys_lo = <uint64_t*>malloc(cap * sizeof(uint64_t))
        self.keys_hi = <uint64_t*>malloc(cap * sizeof(uint64_t))
        self.vals = <uint64_t*>malloc(cap * sizeof(uint64_t))
        self.slot_state = <uint8_t*>calloc(cap, 1)
        if (self.keys_lo == NULL or self.keys_hi == NULL or self.vals == NULL
                or self.slot_state == NULL):
            raise MemoryError()
        self.cap = cap
        self.used = 0
        self.filled = 0
        return 0

    cdef inline int64_t _probe_start(self, uint64_t lo, uint64_t hi) nogil:
        cdef uint64_t h = lo * <uint64_t>0x9E3779B97F4A7C15
        h ^= hi * <uint64_t>0xC2B2AE3D27D4EB4F
        h ^= h >> 29
        h *= <uint64_t>0xBF58476D1CE4E5B9
        h ^= h >> 32
        return <int64_t>(h & <uint64_t>(self.cap - 1))

    cdef int64_t _find(self, uint64_t lo, uint64_t hi) nogil:
        cdef int64_t h = self._probe_start(lo, hi)
        cdef uint8_t st
        while True:
            st = self.slot_state[h]
            if st == 0:
                return -1
            if st == 1 and self.keys_lo[h] == lo and self.keys_hi[h] == hi:
                return h
            h = (h + 1) & (self.cap - 1)

    cdef int _insert(self, uint64_t lo, uint64_t hi, uint64_t val) except -1:
        if (self.filled + 1) * 10 >= self.cap * 7:
            self._rehash()
        cdef int64_t h = self._probe_start(lo, hi)
        while self.slot_state[h] == 1:
            h = (h + 1) & (self.cap - 1)
        if self.slot_state[h] == 0:
            self.filled += 1
        self.slot_state[h] = 1
        self.keys_lo[h] = lo
        self.keys_hi[h] = hi
        self.vals[h] = val
        self.used += 1
        return 0

    cdef int _rehash(self) except -1:
        cdef int64_t old_cap = self.cap
        cdef uint64_t* olo = self.keys_lo
        cdef uint64_t* ohi = self.keys_hi
        cdef uint64_t* ova = self.vals
        cdef uint8_t* ost = self.slot_state
        cdef int64_t new_cap = old_cap
        if self.used * 10 >= old_cap * 4:
            new_cap = old_cap * 2
        self._map_init(new_cap)
        cdef int64_t i, h
        for i in range(old_cap):
            if ost[i] == 1:
                h = self._probe_start(olo[i], ohi[i])
                while self.slot_state[h] == 1:
                    h = (h + 1) & (self.cap - 1)
                self.slot_state[h] = 1
                self.keys_lo[h] = olo[i]
                self.keys_hi[h] = ohi[i]
                self.vals[h] = ova[i]
                self.used += 1
                self.filled += 1
        free(olo)
        free(ohi)
        free(ova)
        free(ost)
        return 0

    cdef void _remove(self, uint64_t lo, uint64_t hi) nogil:
        cdef int64_t h = self._find(lo, hi)
        if h >= 0:
            self.slot_state[h] = 2
            self.used -= 1

    # -- undo stack -----------------------------------------------------

    cdef int _undo_push(self, uint64_t lo, uint64_t hi) except -1:
        cdef uint64_t* nlo
        cdef uint64_t* nhi
        cdef int64_t i
        if self.undo_top >= self.undo_cap:
            self.undo_cap *= 2
            nlo = <uint64_t*>malloc(self.undo_cap * sizeof(uint64_t))
            nhi = <uint64_t*>malloc(self.undo_cap * sizeof(uint64_t))
            if nlo == NULL or nhi == NULL:
                raise MemoryError()
            for i in range(self.undo_top):
                nlo[i] = self.undo_lo[i]
                nhi[i] = self.undo_hi[i]
            free(self.undo_lo)
            free(self.undo_hi)
            self.undo_lo = nlo
            self.undo_hi = nhi
        self.undo_lo[self.undo_top] = lo
        self.undo_hi[self.undo_top] = hi
        self.undo_top += 1
        return 0

    cdef void _undo_to(self, int64_t mark, bint grew) nogil:
        while self.undo_top > mark:
            self.undo_top -= 1
            self._remove(self.undo_lo[self.undo_top], self.undo_hi[self.undo_top])
            self.live -= 1
        if grew:
            self.spt -= 1
        else:
            self.scounts[self.spt - 1] -= 1

    # -- sub-multiset DP ------------------------------------------------

    cdef uint64_t _ensure(self, uint64_t lo, uint64_t hi, int* err) except? 0:
        """Value of a DP state, computing and registering it if absent."""
        cdef int64_t idx = self._find(lo, hi)
        if idx >= 0:
            return self.vals[idx]
        cdef uint64_t mask = 0, pm
        cdef uint64_t plo, phi
        cdef int j, c
        for j in range(self.spt):
            if j < 10:
                c = <int>((lo >> (6 * j)) & 63)
            else:
                c = <int>((hi >> (6 * (j - 10))) & 63)
            if c:
                plo = lo
                phi = hi
                if j < 10:
                    plo -= <uint64_t>1 << (6 * j)
                else:
                    phi -= <uint64_t>1 << (6 * (j - 10))
                pm = self._ensure(plo, phi, err)
                if err[0]:
                    return 0
                mask |= _translate(self.ctx, pm, self.support[j])
        self.live += 1
        if self.live > self.state_cap:
            err[0] = ERR_LIMIT
            return 0
        self._insert(lo, hi, mask)
        self._undo_push(lo, hi)
        return mask

    cdef int _append_gen(self, int e) except -1:
        """Add one copy of e; leaves the union of new states in self.gain."""
        cdef int pos
        if self.spt > 0 and self.support[self.spt - 1] == e:
            pos = self.spt - 1
            self.scounts[pos] += 1
        else:
            if self.spt >= MAX_SUPPORT:
                return ERR_SUPPORT
            pos = self.spt
            self.support[pos] = e
            self.scounts[pos] = 1
            self.spt += 1
        cdef double est = 1.0
        cdef int j
        for j in range(pos):
            est *= <double>(self.scounts[j] + 1)
        if <double>self.live + est > <double>self.state_cap:
            return ERR_LIMIT
        cdef int64_t dig[MAX_SUPPORT]
        for j in range(pos):
            dig[j] = 0
        cdef uint64_t top_lo = 0, top_hi = 0
        if pos < 10:
            top_lo = <uint64_t>self.scounts[pos] << (6 * pos)
        else:
            top_hi = <uint64_t>self.scounts[pos] << (6 * (pos - 10))
        cdef uint64_t gain = 0, lo, hi, v
        cdef int err = 0
        while True:
            lo = top_lo
            hi = top_hi
            for j in range(pos):
                if j < 10:
                    lo += <uint64_t>dig[j] << (6 * j)
                else:
                    hi += <uint64_t>dig[j] << (6 * (j - 10))
            v = self._ensure(lo, hi, &err)
            if err:
                return err
            gain |= v
            j = 0
            while j < pos:
                if dig[j] < self.scounts[j]:
                    dig[j] += 1
                    break
                dig[j] = 0
                j += 1
            if j == pos:
                break
        self.gain = gain
        return OK

    # -- DFS ------------------------------------------------------------

    cdef void _record_witness(self, int newlen):
        cdef int i
        self.root_best = newlen
        self.witness_len = newlen
        self.have_witness = True
        for i in range(newlen):
            self.witness[i] = self.path[i]

    cdef int _visit_ab(self, int e, uint64_t reach, int length) except -1:
        self.nodes += 1
        if self.nodes > self.budget:
            return ABORT_BUDGET
        cdef int newlen = length + 1
        self.path[length] = e
        if self.mode == 1 and newlen == self.target:
            self.found.append(tuple([self.path[i] for i in range(newlen)]))
            return OK
        cdef uint64_t child = reach | _translate(self.ctx, reach, e) | (<uint64_t>1 << e)
        cdef int potential = newlen + (self.ctx.n - 1 - __builtin_popcountll(child))
        cdef bint descend
        if self.mode == 0:
            if newlen > self.root_best:
                self._record_witness(newlen)
            descend = potential > self.root_best
        else:
            descend = potential >= self.target
        cdef int f, rc
        if descend:
            for f in range(e, self.ctx.n):
                if not (child >> self.ctx.inv[f]) & 1:
                    rc = self._visit_ab(f, child, newlen)
                    if rc:
                        return rc
        return OK

    cdef int _visit_gen(self, int e, uint64_t reach, int length) except -1:
        self.nodes += 1
        if self.nodes > self.budget:
            return ABORT_BUDGET
        cdef int newlen = length + 1
        self.path[length] = e
        if self.mode == 1 and newlen == self.target:
            self.found.append(tuple([self.path[i] for i in range(newlen)]))
            return OK
        cdef int64_t mark = self.undo_top
        cdef bint grew = not (self.spt > 0 and self.support[self.spt - 1] == e)
        cdef int rc = self._append_gen(e)
        if rc:
            return rc
        cdef uint64_t child = reach | self.gain
        cdef int potential = newlen + (self.ctx.n - 1 - __builtin_popcountll(child))
        cdef bint descend
        if self.mode == 0:
            if newlen > self.root_best:
                self._record_witness(newlen)
            descend = potential > self.root_best
        else:
            descend = potential >= self.target
        cdef int f
        rc = OK
        if descend:
            for f in range(e, self.ctx.n):
                if not (child >> self.ctx.inv[f]) & 1:
                    rc = self._visit_gen(f, child, newlen)
                    if rc:
                        break
        self._undo_to(mark, grew)
        return rc

def greedy(Context ctx):
    """Leftmost canonical descent; see the pure lane for the contract."""
    cdef _Search s = _Search(ctx, 0, 0, 1 << 60, 100_000_000)
    cdef uint64_t reach = 0
    cdef int start = 1, e, rc
    cdef list path = []
    if not ctx.abelian:
        s._insert(0, 0, <uint64_t>1 << ctx.identity)
        s.live = 1
    while True:
        e = start
        while e < ctx.n and (reach >> ctx.inv[e]) & 1:
            e += 1
        if e >= ctx.n:
            return len(path), tuple(path), len(path)
        if ctx.abelian:
            reach = reach | _translate(ctx, reach, e) | (<uint64_t>1 << e)
        else:
            rc = s._append_gen(e)
            if rc == ERR_SUPPORT:
                raise SupportOverflow("greedy support exceeds the packed-key width")
            if rc == ERR_LIMIT:
                raise LimitExceeded(f"search DP exceeds the state cap {s.state_cap}")
            reach |= s.gain
        path.append(e)
        start = e


def search(Context ctx, str mode, int target, int floor_len, budget,
           int lo, int hi, state_cap=100_000_000):
    """Same contract as the pure lane's ``search``."""
    cdef int imode = 0 if mode == "max" else 1
    cdef _Search s = _Search(ctx, imode, target, <int64_t>budget,
                             <int64_t>state_cap)
    cdef int n = ctx.n
    if lo < 1:
        lo = 1
    if hi > n:
        hi = n
    cdef bint complete = True
    cdef int best_len = floor_len
    witness = None
    cdef int64_t total_nodes = 0
    cdef int root, rc
    if not ctx.abelian:
        # the DP table starts from (and unwinds back to) the empty state
        s._insert(0, 0, <uint64_t>1 << ctx.identity)
        s.live = 1
    for root in range(lo, hi):
        s.nodes = 0
        s.root_best = floor_len
        s.have_witness = False
        if ctx.abelian:
            rc = s._visit_ab(root, 0, 0)
        else:
            rc = s._visit_gen(root, 0, 0)
        if rc == ABORT_BUDGET:
            complete = False
        elif rc == ERR_SUPPORT:
            raise SupportOverflow(
                f"search support exceeds {MAX_SUPPORT} distinct elements")
        elif rc == ERR_LIMIT:
            raise LimitExceeded(f"search DP exceeds the state cap {state_cap}")
        total_nodes += s.nodes
        if s.root_best > best_len:
            best_len = s.root_best
            if s.have_witness:
                witness = tuple([s.witness[i] for i in range(s.witness_len)])
    return {
        "complete": complete,
        "best_len": best_len,
        "witness": witness,
        "found": s.found,
        "nodes": total_nodes,
    }
