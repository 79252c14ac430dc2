"""Reduced ordered algebraic decision diagrams with complex terminals (QuIDDs).

A QuIDD stores a 2^k-entry complex vector, or a 2^k x 2^k matrix, as a
canonical DAG: internal nodes test one bit of the binary index, sinks hold
amplitudes.  Every node is interned in a manager, so structural equality is
reference equality and repeated subarrays are stored exactly once.

Conventions
-----------
* Qubit i of a vector owns decision variable 2*i.  A matrix interleaves
  row and column variables, r_0 < c_0 < r_1 < c_1 < ..., with row variable
  2*i and column variable 2*i + 1 for qubit i.  The interleaving is what
  keeps matrix-vector products cheap on compressed operands.
* The variable order is fixed and shared by all diagrams of a manager.
  The low edge is index bit 0, the high edge bit 1.
* Bit 0 of an index is the most significant, so the dense array position
  of a path equals the integer value of its bit string.
* A node skipped on a path means the function ignores that bit: both
  branches would be equal, and the reduction rule removed the node.
* Terminal values are interned on a 1e-12 grid per component; the first
  value seen in a grid cell is kept verbatim as the cell representative,
  so amplitudes are never rounded, only deduplicated.

A manager and every ref it issued are confined to one thread of control.
Refs from different managers must never be mixed.
"""

from __future__ import annotations

import math
from collections import namedtuple
from dataclasses import dataclass

import numpy as np

# Sorts after every real decision variable, so terminals never win a
# top-variable comparison.
TERMINAL_VAR = 1 << 30

# Quantization pitch of the terminal grid.  Cells only need to be wide
# enough to absorb round-off between different computation paths that
# should agree (a few ulp for order-one values); wider cells let a snapped
# amplitude perturb the state norm measurably once amplitudes shrink to
# 2^(-k/2) at large k.
GRID = 1e-15

_ADD = "add"
_MUL = "mul"


class QuiddError(Exception):
    """Base class for diagram-level failures."""


class InvalidAmplitudeError(QuiddError):
    """NaN or infinite amplitude offered to the terminal table."""


class VariableOrderError(QuiddError):
    """Node construction that would violate the fixed variable order."""


class SpaceMismatchError(QuiddError):
    """Operands drawn from incompatible variable spaces."""


class SizeCapError(QuiddError):
    """Dense expansion request beyond the configured qubit cap."""


NodeCount = namedtuple("NodeCount", "internal terminal")


@dataclass(frozen=True)
class VarSpace:
    """Decision-variable layout for k qubits, either 'vector' or 'matrix'."""

    kind: str
    k: int

    def __post_init__(self):
        if self.kind not in ("vector", "matrix"):
            raise ValueError(f"unknown space kind: {self.kind!r}")
        if self.k < 1:
            raise ValueError("qubit count must be >= 1")

    @property
    def levels(self) -> int:
        """Number of decision levels in a path through a full diagram."""
        return self.k if self.kind == "vector" else 2 * self.k

    def var_at_level(self, level: int) -> int:
        # Vectors sit on the even (row) variables only.
        return 2 * level if self.kind == "vector" else level

    def row_var(self, qubit: int) -> int:
        return 2 * qubit

    def col_var(self, qubit: int) -> int:
        if self.kind != "matrix":
            raise SpaceMismatchError("column variables exist only in matrix spaces")
        return 2 * qubit + 1


def vector_space(k: int) -> VarSpace:
    return VarSpace("vector", k)


def matrix_space(k: int) -> VarSpace:
    return VarSpace("matrix", k)


class QuiddManager:
    """Interning manager owning the unique table, terminals and the op cache.

    Nodes are integer refs into parallel arrays.  Nodes are never freed;
    ``nodes_created`` is therefore both the total allocation count and the
    peak.  Live-set sizes are measured by reachability from explicit roots
    via :meth:`count_nodes`.
    """

    def __init__(self, cache_enabled: bool = True,
                 dense_cap: int = 20, matrix_dense_cap: int = 12,
                 cache_limit: int = 400_000):
        self._var: list[int] = []
        self._low: list[int] = []
        self._high: list[int] = []
        self._value: list[complex | None] = []
        self._maxvar: list[int] = []        # -1 for terminals
        self._hasodd: list[bool] = []       # touches a column variable
        self._unique: dict[tuple[int, int, int], int] = {}
        self._terminals: dict[tuple[int, int], int] = {}
        self._cache: dict = {}
        self.cache_enabled = cache_enabled
        self.cache_limit = cache_limit
        self.dense_cap = dense_cap
        self.matrix_dense_cap = matrix_dense_cap

    # ------------------------------------------------------------------
    # construction and inspection

    @property
    def nodes_created(self) -> int:
        """Total nodes ever interned (monotone; equals peak allocation)."""
        return len(self._var)

    def terminal(self, value) -> int:
        """Intern an amplitude sink, quantized to the grid for equality."""
        z = complex(value)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise InvalidAmplitudeError(f"non-finite amplitude: {value!r}")
        return self._term(z)

    def _term(self, z: complex) -> int:
        # Hot-path interner: callers guarantee z is already a complex built
        # from finite inputs, so only overflow needs catching here.
        try:
            key = (round(z.real / GRID), round(z.imag / GRID))
        except (OverflowError, ValueError):
            raise InvalidAmplitudeError(f"non-finite amplitude: {z!r}") from None
        ref = self._terminals.get(key)
        if ref is None:
            if key == (0, 0):
                z = 0j      # canonical zero keeps annihilator shortcuts exact
            ref = self._new(TERMINAL_VAR, -1, -1, z)
            self._terminals[key] = ref
        return ref

    def node(self, var: int, low: int, high: int) -> int:
        """Intern an internal node; collapses to the child when low == high."""
        if not 0 <= var < TERMINAL_VAR:
            raise VariableOrderError(f"variable index out of range: {var}")
        if var >= self._var[low] or var >= self._var[high]:
            raise VariableOrderError(
                f"variable {var} does not precede children "
                f"({self._var[low]}, {self._var[high]})")
        if low == high:
            return low
        key = (var, low, high)
        ref = self._unique.get(key)
        if ref is None:
            ref = self._new(var, low, high, None)
            self._unique[key] = ref
        return ref

    def _new(self, var, low, high, value) -> int:
        ref = len(self._var)
        self._var.append(var)
        self._low.append(low)
        self._high.append(high)
        self._value.append(value)
        if value is not None:
            self._maxvar.append(-1)
            self._hasodd.append(False)
        else:
            self._maxvar.append(max(var, self._maxvar[low], self._maxvar[high]))
            self._hasodd.append(bool(var & 1)
                                or self._hasodd[low] or self._hasodd[high])
        return ref

    def is_terminal(self, ref: int) -> bool:
        return self._value[ref] is not None

    def value(self, ref: int) -> complex:
        v = self._value[ref]
        if v is None:
            raise QuiddError("value() on an internal node")
        return v

    def var(self, ref: int) -> int:
        return self._var[ref]

    def low(self, ref: int) -> int:
        return self._low[ref]

    def high(self, ref: int) -> int:
        return self._high[ref]

    def _cof(self, ref: int, var: int, bit: int) -> int:
        if self._var[ref] == var:
            return self._high[ref] if bit else self._low[ref]
        return ref

    # ------------------------------------------------------------------
    # elementwise operations

    def apply(self, op: str, a: int, b: int) -> int:
        """Pointwise combine two diagrams; op is 'add' or 'mul'."""
        if op not in (_ADD, _MUL):
            raise ValueError(f"unknown apply op: {op!r}")
        if (self._value[a] is None and self._value[b] is None
                and self._hasodd[a] != self._hasodd[b]):
            raise SpaceMismatchError(
                "elementwise op between vector and matrix diagrams")
        return self._apply_rec(op, a, b)

    def _apply_rec(self, op: str, a: int, b: int) -> int:
        value, var, low, high = self._value, self._var, self._low, self._high
        adding = op == _ADD
        va, vb = value[a], value[b]
        # Identity and annihilator shortcuts return operands untouched, so
        # e.g. multiplying by a constant-one diagram is reference-neutral.
        if adding:
            if va == 0:
                return b
            if vb == 0:
                return a
        else:
            if va == 0 or vb == 0:
                return self._term(0j)
            if va == 1:
                return b
            if vb == 1:
                return a
        if va is not None:
            if vb is not None:
                return self._term(va + vb if adding else va * vb)
            return self._apply_const(op, a, b)
        if vb is not None:
            return self._apply_const(op, b, a)
        key = (op, a, b) if a <= b else (op, b, a)   # both ops commute
        cache = self._cache if self.cache_enabled else None
        if cache is not None:
            hit = cache.get(key)
            if hit is not None:
                return hit
        wa, wb = var[a], var[b]
        w = wa if wa < wb else wb
        a0, a1 = (low[a], high[a]) if wa == w else (a, a)
        b0, b1 = (low[b], high[b]) if wb == w else (b, b)
        r = self.node(w, self._apply_rec(op, a0, b0), self._apply_rec(op, a1, b1))
        if cache is not None:
            if len(cache) >= self.cache_limit:
                cache.clear()
            cache[key] = r
        return r

    def _apply_const(self, op: str, c: int, x: int) -> int:
        # One operand is a terminal: walk the other diagram alone.  This is
        # the inner loop of a matrix-vector multiply, where every level adds
        # its own constant partial sum into the accumulated result.
        key = (op, c, x)
        cache = self._cache if self.cache_enabled else None
        if cache is not None:
            hit = cache.get(key)
            if hit is not None:
                return hit
        value, low, high = self._value, self._low, self._high
        cv = value[c]
        lo, hi = low[x], high[x]
        vlo, vhi = value[lo], value[hi]
        if op == _ADD:
            rlo = (self._term(cv + vlo) if vlo is not None
                   else self._apply_const(op, c, lo))
            rhi = (self._term(cv + vhi) if vhi is not None
                   else self._apply_const(op, c, hi))
        else:
            rlo = (self._term(cv * vlo) if vlo is not None
                   else self._apply_const(op, c, lo))
            rhi = (self._term(cv * vhi) if vhi is not None
                   else self._apply_const(op, c, hi))
        r = rlo if rlo == rhi else self.node(self._var[x], rlo, rhi)
        if cache is not None:
            if len(cache) >= self.cache_limit:
                cache.clear()
            cache[key] = r
        return r

    def scalar_mul(self, scalar, a: int) -> int:
        z = complex(scalar)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise InvalidAmplitudeError(f"non-finite scalar: {scalar!r}")
        if z == 1:
            return a
        if z == 0:
            return self.terminal(0)
        return self._apply_rec(_MUL, self.terminal(z), a)

    # ------------------------------------------------------------------
    # tensor product

    def tensor(self, a: int, b: int, left_qubits: int) -> int:
        """Tensor product with ``a`` on the ``left_qubits`` high-order qubits.

        ``b`` is re-indexed below ``a``'s qubits and grafted onto ``a``'s
        terminals.  Works for vectors and matrices alike because both use
        a variable offset of 2 per qubit.
        """
        if left_qubits < 0:
            raise ValueError("left_qubits must be >= 0")
        if (self._value[a] is None and self._value[b] is None
                and self._hasodd[a] != self._hasodd[b]):
            raise SpaceMismatchError("tensor operands live in different space kinds")
        return self._graft(a, self._shift(b, 2 * left_qubits))

    def _shift(self, b: int, delta: int) -> int:
        if delta == 0 or self._value[b] is not None:
            return b
        key = ("shift", b, delta)
        if self.cache_enabled:
            hit = self._cache.get(key)
            if hit is not None:
                return hit
        r = self.node(self._var[b] + delta,
                      self._shift(self._low[b], delta),
                      self._shift(self._high[b], delta))
        if self.cache_enabled:
            self._cache[key] = r
        return r

    def _graft(self, a: int, b: int) -> int:
        va = self._value[a]
        if va is not None:
            return self.scalar_mul(va, b)
        key = ("graft", a, b)
        if self.cache_enabled:
            hit = self._cache.get(key)
            if hit is not None:
                return hit
        r = self.node(self._var[a], self._graft(self._low[a], b),
                      self._graft(self._high[a], b))
        if self.cache_enabled:
            self._cache[key] = r
        return r

    # ------------------------------------------------------------------
    # matrix algebra

    def _check_vector(self, v: int, k: int) -> None:
        if self._hasodd[v]:
            raise SpaceMismatchError("vector operand uses column variables")
        if self._maxvar[v] > 2 * (k - 1):
            raise SpaceMismatchError(
                f"vector operand exceeds {k} qubits (max var {self._maxvar[v]})")

    def _check_matrix(self, g: int, k: int) -> None:
        if self._maxvar[g] > 2 * k - 1:
            raise SpaceMismatchError(
                f"matrix operand exceeds {k} qubits (max var {self._maxvar[g]})")

    def matvec(self, gate: int, vec: int, k: int) -> int:
        """Multiply a matrix diagram into a vector diagram over k qubits."""
        if k < 1:
            raise SpaceMismatchError("k must be >= 1")
        self._check_matrix(gate, k)
        self._check_vector(vec, k)
        ref, off = self._matvec_rec(0, gate, vec, k)
        if off == 0:
            return ref
        return self._apply_rec(_ADD, self._term(off), ref)

    def _matvec_rec(self, m: int, g: int, w: int, k: int) -> tuple[int, complex]:
        # Returns (ref, off) meaning the true block result is ref with off
        # added to every entry.  Keeping the uniform part symbolic lets a
        # level pass its partial sums upward without rewriting the deep
        # child, so a product against a mostly-constant gate touches each
        # result node once instead of once per level.
        value = self._value
        gv, wv = value[g], value[w]
        if gv == 0 or wv == 0:
            return self._term(0j), 0j
        if gv is not None:
            # Constant block: every row sums the same entries, so the whole
            # result is uniform and lives entirely in the offset.
            return self._term(0j), gv * self._vecsum_rec(m, w, k)
        if wv is not None:
            # Constant vector segment: the result is the block's row-sum
            # profile scaled once, and the profile caches per gate node.
            return self._apply_rec(_MUL, w, self._rowsum_rec(m, g, k)), 0j
        key = ("mv", m, g, w)
        cache = self._cache if self.cache_enabled else None
        if cache is not None:
            hit = cache.get(key)
            if hit is not None:
                return hit
        rv = 2 * m
        cv = rv + 1
        cof = self._cof
        g0 = cof(g, rv, 0)
        g1 = cof(g, rv, 1)
        g00, g01 = cof(g0, cv, 0), cof(g0, cv, 1)
        g10, g11 = cof(g1, cv, 0), cof(g1, cv, 1)
        w0, w1 = cof(w, rv, 0), cof(w, rv, 1)
        m1 = m + 1
        l0, c00 = self._matvec_rec(m1, g00, w0, k)
        l1, c01 = self._matvec_rec(m1, g01, w1, k)
        lo = self._apply_rec(_ADD, l0, l1)
        lo_off = c00 + c01
        h0, c10 = self._matvec_rec(m1, g10, w0, k)
        h1, c11 = self._matvec_rec(m1, g11, w1, k)
        hi = self._apply_rec(_ADD, h0, h1)
        hi_off = c10 + c11
        if lo_off == hi_off:
            off = lo_off
        elif value[hi] is not None:
            # Fold the offset difference into whichever side is a bare
            # terminal; the non-terminal side keeps its subtree untouched.
            off = lo_off
            hi = self._term(value[hi] + (hi_off - lo_off))
        elif value[lo] is not None:
            off = hi_off
            lo = self._term(value[lo] + (lo_off - hi_off))
        else:
            off = lo_off
            hi = self._apply_rec(_ADD, self._term(hi_off - lo_off), hi)
        r = (lo if lo == hi else self.node(rv, lo, hi)), off
        if cache is not None:
            if len(cache) >= self.cache_limit:
                cache.clear()
            cache[key] = r
        return r

    def _vecsum_rec(self, m: int, w: int, k: int) -> complex:
        """Sum of all 2^(k-m) entries of a vector diagram below level m."""
        wv = self._value[w]
        if wv is not None:
            return wv * (1 << (k - m))
        key = ("vs", m, w)
        cache = self._cache if self.cache_enabled else None
        if cache is not None:
            hit = cache.get(key)
            if hit is not None:
                return hit
        if self._var[w] == 2 * m:
            r = (self._vecsum_rec(m + 1, self._low[w], k)
                 + self._vecsum_rec(m + 1, self._high[w], k))
        else:
            r = 2 * self._vecsum_rec(m + 1, w, k)
        if cache is not None:
            cache[key] = r
        return r

    def _rowsum_rec(self, m: int, g: int, k: int) -> int:
        """Vector of per-row sums of a matrix block below level m."""
        gv = self._value[g]
        if gv is not None:
            return self._term(gv * (1 << (k - m)))
        key = ("rs", m, g)
        cache = self._cache if self.cache_enabled else None
        if cache is not None:
            hit = cache.get(key)
            if hit is not None:
                return hit
        rv = 2 * m
        cv = rv + 1
        cof = self._cof
        g0 = cof(g, rv, 0)
        g1 = cof(g, rv, 1)
        m1 = m + 1
        lo = self._apply_rec(_ADD, self._rowsum_rec(m1, cof(g0, cv, 0), k),
                             self._rowsum_rec(m1, cof(g0, cv, 1), k))
        hi = self._apply_rec(_ADD, self._rowsum_rec(m1, cof(g1, cv, 0), k),
                             self._rowsum_rec(m1, cof(g1, cv, 1), k))
        r = self.node(rv, lo, hi)
        if cache is not None:
            cache[key] = r
        return r

    def matmat(self, a: int, b: int, k: int) -> int:
        """Matrix product of two k-qubit matrix diagrams."""
        if k < 1:
            raise SpaceMismatchError("k must be >= 1")
        self._check_matrix(a, k)
        self._check_matrix(b, k)
        return self._matmat_rec(0, a, b, k)

    def _matmat_rec(self, m: int, a: int, b: int, k: int) -> int:
        value = self._value
        av, bv = value[a], value[b]
        if av == 0 or bv == 0:
            return self.terminal(0)
        if av is not None and bv is not None:
            return self.terminal(av * bv * (1 << (k - m)))
        key = ("mm", m, a, b)
        if self.cache_enabled:
            hit = self._cache.get(key)
            if hit is not None:
                return hit
        rv = 2 * m
        cv = rv + 1
        cof = self._cof
        a0, a1 = cof(a, rv, 0), cof(a, rv, 1)
        a00, a01 = cof(a0, cv, 0), cof(a0, cv, 1)
        a10, a11 = cof(a1, cv, 0), cof(a1, cv, 1)
        b0, b1 = cof(b, rv, 0), cof(b, rv, 1)
        b00, b01 = cof(b0, cv, 0), cof(b0, cv, 1)
        b10, b11 = cof(b1, cv, 0), cof(b1, cv, 1)
        m1 = m + 1
        add = self._apply_rec
        mm = self._matmat_rec
        c00 = add(_ADD, mm(m1, a00, b00, k), mm(m1, a01, b10, k))
        c01 = add(_ADD, mm(m1, a00, b01, k), mm(m1, a01, b11, k))
        c10 = add(_ADD, mm(m1, a10, b00, k), mm(m1, a11, b10, k))
        c11 = add(_ADD, mm(m1, a10, b01, k), mm(m1, a11, b11, k))
        r = self.node(rv, self.node(cv, c00, c01), self.node(cv, c10, c11))
        if self.cache_enabled:
            self._cache[key] = r
        return r

    def matrix_diagonal(self, gate: int, k: int) -> int:
        """Extract the diagonal of a matrix diagram as a vector diagram."""
        self._check_matrix(gate, k)
        return self._diag_rec(0, gate, k)

    def _diag_rec(self, m: int, g: int, k: int) -> int:
        if self._value[g] is not None or m == k:
            return g
        key = ("diag", m, g)
        if self.cache_enabled:
            hit = self._cache.get(key)
            if hit is not None:
                return hit
        rv = 2 * m
        cv = rv + 1
        g00 = self._cof(self._cof(g, rv, 0), cv, 0)
        g11 = self._cof(self._cof(g, rv, 1), cv, 1)
        r = self.node(rv, self._diag_rec(m + 1, g00, k),
                      self._diag_rec(m + 1, g11, k))
        if self.cache_enabled:
            self._cache[key] = r
        return r

    # ------------------------------------------------------------------
    # scalar queries

    def inner_product(self, u: int, v: int, k: int) -> complex:
        """<u|v> with the left operand conjugated."""
        self._check_vector(u, k)
        self._check_vector(v, k)
        return self._inner_rec(0, u, v, k)

    def _inner_rec(self, m: int, u: int, v: int, k: int) -> complex:
        value = self._value
        uv, vv = value[u], value[v]
        if uv == 0 or vv == 0:
            return 0j
        if uv is not None and vv is not None:
            return uv.conjugate() * vv * (1 << (k - m))
        key = ("ip", m, u, v)
        if self.cache_enabled:
            hit = self._cache.get(key)
            if hit is not None:
                return hit
        w = 2 * m
        cof = self._cof
        r = (self._inner_rec(m + 1, cof(u, w, 0), cof(v, w, 0), k)
             + self._inner_rec(m + 1, cof(u, w, 1), cof(v, w, 1), k))
        if self.cache_enabled:
            self._cache[key] = r
        return r

    def entry_at(self, vec: int, index, k: int | None = None) -> complex:
        """Amplitude of one basis state.

        ``index`` may be an int (requires ``k``) or a bit string such as
        '01101', most significant bit first.
        """
        if isinstance(index, str):
            k = len(index)
            x = int(index, 2)
        else:
            x = int(index)
            if k is None:
                raise ValueError("k is required for integer indices")
        if not 0 <= x < (1 << k):
            raise IndexError(f"index {x} out of range for {k} qubits")
        cur = vec
        var, low, high = self._var, self._low, self._high
        for i in range(k):
            if var[cur] == 2 * i:
                cur = high[cur] if (x >> (k - 1 - i)) & 1 else low[cur]
        v = self._value[cur]
        if v is None:
            raise SpaceMismatchError("diagram is deeper than the given k")
        return v

    def matrix_entry(self, gate: int, row: int, col: int, k: int) -> complex:
        if not (0 <= row < (1 << k) and 0 <= col < (1 << k)):
            raise IndexError(f"entry ({row}, {col}) out of range for {k} qubits")
        cur = gate
        var, low, high = self._var, self._low, self._high
        for i in range(k):
            rbit = (row >> (k - 1 - i)) & 1
            cbit = (col >> (k - 1 - i)) & 1
            if var[cur] == 2 * i:
                cur = high[cur] if rbit else low[cur]
            if var[cur] == 2 * i + 1:
                cur = high[cur] if cbit else low[cur]
        v = self._value[cur]
        if v is None:
            raise SpaceMismatchError("diagram is deeper than the given k")
        return v

    def count_nodes(self, *roots: int) -> NodeCount:
        """Reachable internal and terminal node counts, deduplicated."""
        seen = set()
        stack = list(roots)
        internal = terminal = 0
        value, low, high = self._value, self._low, self._high
        while stack:
            n = stack.pop()
            if n in seen:
                continue
            seen.add(n)
            if value[n] is not None:
                terminal += 1
            else:
                internal += 1
                stack.append(low[n])
                stack.append(high[n])
        return NodeCount(internal, terminal)

    # ------------------------------------------------------------------
    # dense conversion

    def from_dense(self, entries, space: VarSpace) -> int:
        """Build a diagram from a dense numpy array (vector or matrix)."""
        arr = np.asarray(entries, dtype=np.complex128)
        n = 1 << space.k
        if space.kind == "vector":
            if arr.shape != (n,):
                raise SpaceMismatchError(
                    f"expected shape ({n},), got {arr.shape}")
            flat = arr
        else:
            if arr.shape != (n, n):
                raise SpaceMismatchError(
                    f"expected shape ({n}, {n}), got {arr.shape}")
            # Interleave row and column bits into the flat path order.
            axes = [ax for q in range(space.k) for ax in (q, space.k + q)]
            flat = arr.reshape([2] * (2 * space.k)).transpose(axes).reshape(-1)
        if not np.all(np.isfinite(flat)):
            raise InvalidAmplitudeError("non-finite entries in dense input")
        levels = space.levels
        terminal = self.terminal
        node = self.node
        var_at = space.var_at_level

        def build(level, lo, hi):
            if level == levels:
                return terminal(flat[lo])
            mid = (lo + hi) >> 1
            return node(var_at(level), build(level + 1, lo, mid),
                        build(level + 1, mid, hi))

        return build(0, 0, len(flat))

    def to_dense(self, ref: int, space: VarSpace) -> np.ndarray:
        """Expand a diagram into a dense numpy array.  Guarded by size caps."""
        cap = self.dense_cap if space.kind == "vector" else self.matrix_dense_cap
        if space.k > cap:
            raise SizeCapError(
                f"dense expansion of k={space.k} {space.kind} exceeds cap {cap}")
        levels = space.levels
        memo: dict[tuple[int, int], np.ndarray] = {}
        value, var, low, high = self._value, self._var, self._low, self._high
        var_at = space.var_at_level

        def expand(n, level):
            key = (n, level)
            out = memo.get(key)
            if out is not None:
                return out
            if value[n] is not None:
                out = np.full(1 << (levels - level), value[n], dtype=np.complex128)
            elif var[n] > var_at(level):
                half = expand(n, level + 1)
                out = np.concatenate([half, half])
            else:
                out = np.concatenate([expand(low[n], level + 1),
                                      expand(high[n], level + 1)])
            memo[key] = out
            return out

        flat = expand(ref, 0)
        if space.kind == "vector":
            return flat
        k = space.k
        axes = [2 * q for q in range(k)] + [2 * q + 1 for q in range(k)]
        return flat.reshape([2] * (2 * k)).transpose(axes).reshape(1 << k, 1 << k)

    # ------------------------------------------------------------------
    # diagnostics

    def dump(self, *roots: int) -> str:
        """Plain-text adjacency listing of the reachable subgraph.

        One line per node, ascending id:
        ``<id> <var> <low-id> <high-id>`` for internal nodes and
        ``<id> T <re> <im>`` for terminals.
        """
        seen = set()
        stack = list(roots)
        while stack:
            n = stack.pop()
            if n in seen:
                continue
            seen.add(n)
            if self._value[n] is None:
                stack.append(self._low[n])
                stack.append(self._high[n])
        lines = []
        for n in sorted(seen):
            v = self._value[n]
            if v is None:
                lines.append(f"{n} {self._var[n]} {self._low[n]} {self._high[n]}")
            else:
                lines.append(f"{n} T {v.real:.17g} {v.imag:.17g}")
        return "\n".join(lines)
