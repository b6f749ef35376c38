"""Classical and quantum code constructions and distance estimation.

Quantum codes are built from classical seeds via the hypergraph product,
from protographs via the lifted product, and bias-tailored variants apply a
Hadamard rotation to every sector-two qubit. The rotation is bookkeeping on
the code object: the stored parity checks stay the CSS pair and simulation
swaps the error-channel components on rotated qubits instead.

Orientation convention: hx rows support the X-type stabilisers, so X errors
are detected by hz (syndrome hz @ e_x) and Z errors by hx. Sector one holds
the first n1*n2 qubit columns of a product code.
"""

from __future__ import annotations

import itertools
from collections import Counter, deque
from dataclasses import dataclass
from math import comb

import numpy as np

from . import _kernels
from .circulant import Protograph, proto_hstack, proto_tensor, proto_transpose
from .errors import DimensionError, DomainError, LiftSizeError, NotACssCodeError
from .gf2 import BinaryMatrix, matmul, matvec, nullspace_basis, rank


@dataclass(frozen=True)
class ClassicalCode:
    """A classical linear code given by a parity check matrix.

    d is None when the distance was not established; when present it is the
    exact minimum weight over nonzero codewords.
    """

    h: BinaryMatrix
    n: int
    k: int
    d: int | None


@dataclass(frozen=True)
class CssCode:
    hx: BinaryMatrix
    hz: BinaryMatrix
    n: int
    k: int
    lx: BinaryMatrix
    lz: BinaryMatrix
    sector1_size: int
    name: str = ""


@dataclass(frozen=True)
class RotatedCode:
    """A CSS code with a Hadamard applied to the qubits in `rotated`."""

    css: CssCode
    rotated: frozenset[int]
    name: str = ""

    @property
    def hx(self) -> BinaryMatrix:
        return self.css.hx

    @property
    def hz(self) -> BinaryMatrix:
        return self.css.hz

    @property
    def lx(self) -> BinaryMatrix:
        return self.css.lx

    @property
    def lz(self) -> BinaryMatrix:
        return self.css.lz

    @property
    def n(self) -> int:
        return self.css.n

    @property
    def k(self) -> int:
        return self.css.k

    @property
    def sector1_size(self) -> int:
        return self.css.sector1_size


AnyCode = "CssCode | RotatedCode"


@dataclass(frozen=True)
class SideBound:
    """What is known about one minimisation problem over logicals.

    value is the exact minimum when exact is True. lower is always a valid
    lower bound (cols+1 when no logical exists at all on this side); upper
    is the lightest logical observed, if any.
    """

    value: int | None
    exact: bool
    lower: int
    upper: int | None
    method: str


@dataclass(frozen=True)
class DistanceReport:
    d: SideBound
    dx: SideBound
    dz: SideBound


class _RowBasis:
    """Incremental GF(2) row basis keyed by lowest set bit."""

    def __init__(self, cols: int):
        self.cols = cols
        self.rows: list[tuple[int, np.ndarray]] = []

    @staticmethod
    def _pivot(words: np.ndarray) -> int | None:
        for w in range(words.shape[0]):
            x = int(words[w])
            if x:
                return w * 64 + ((x & -x).bit_length() - 1)
        return None

    def _reduce(self, v: np.ndarray) -> np.ndarray:
        for piv, row in self.rows:
            if (int(v[piv >> 6]) >> (piv & 63)) & 1:
                v ^= row
        return v

    def add(self, words: np.ndarray) -> bool:
        """Insert if independent of the current span; returns True if added."""
        v = self._reduce(words.copy())
        piv = self._pivot(v)
        if piv is None:
            return False
        idx = 0
        while idx < len(self.rows) and self.rows[idx][0] < piv:
            idx += 1
        self.rows.insert(idx, (piv, v))
        return True


def css_logicals(hx: BinaryMatrix, hz: BinaryMatrix) -> tuple[BinaryMatrix, BinaryMatrix]:
    """Deterministic logical bases for a CSS pair.

    Lx rows span nullspace(hz) modulo rowspace(hx); Lz rows span
    nullspace(hx) modulo rowspace(hz). The pairing lx @ lz^T is invertible.
    """
    if hx.cols != hz.cols:
        raise DimensionError(f"check matrices act on {hx.cols} vs {hz.cols} qubits")
    if not matmul(hx, hz.transpose()).is_zero():
        raise NotACssCodeError("hx @ hz^T != 0")
    lx = _coset_representatives(hz, hx)
    lz = _coset_representatives(hx, hz)
    k = hx.cols - rank(hx) - rank(hz)
    if lx.rows != k or lz.rows != k:
        raise NotACssCodeError("logical extraction disagrees with rank count")
    if k and rank(matmul(lx, lz.transpose())) != k:
        raise NotACssCodeError("logical pairing is singular")
    return lx, lz


def _coset_representatives(kernel_of: BinaryMatrix, modulo: BinaryMatrix) -> BinaryMatrix:
    basis = _RowBasis(kernel_of.cols)
    for i in range(modulo.rows):
        basis.add(modulo.words[i])
    keep = [v for v in nullspace_basis(kernel_of) if basis.add(v.words)]
    return BinaryMatrix.from_rows(keep, cols=kernel_of.cols)


def _make_css(hx: BinaryMatrix, hz: BinaryMatrix, sector1_size: int, name: str) -> CssCode:
    lx, lz = css_logicals(hx, hz)
    return CssCode(
        hx=hx,
        hz=hz,
        n=hx.cols,
        k=lx.rows,
        lx=lx,
        lz=lz,
        sector1_size=sector1_size,
        name=name,
    )


def _binary_to_protograph(h: BinaryMatrix) -> Protograph:
    dense = h.to_array()
    return Protograph(
        1, [[(0,) if dense[i, j] else 0 for j in range(h.cols)] for i in range(h.rows)]
    )


def _product_protographs(a1: Protograph, a2: Protograph) -> tuple[Protograph, Protograph]:
    """The X/Z block protographs of the (lifted) product construction."""
    m1, n1 = a1.shape
    m2, n2 = a2.shape

    def eye(m: int) -> Protograph:
        return Protograph.identity(a1.L, m)

    ax = proto_hstack([proto_tensor(a1, eye(n2)), proto_tensor(eye(m1), proto_transpose(a2))])
    az = proto_hstack([proto_tensor(eye(n1), a2), proto_tensor(proto_transpose(a1), eye(m2))])
    return ax, az


def hypergraph_product(h1: BinaryMatrix, h2: BinaryMatrix, name: str = "") -> CssCode:
    """CSS hypergraph product of two classical parity check matrices.

    hx = [h1 x I_n2 | I_m1 x h2^T], hz = [I_n1 x h2 | h1^T x I_m2], with
    N = n1*n2 + m1*m2 qubits and sector one the first n1*n2 of them.
    """
    a1 = _binary_to_protograph(h1)
    a2 = _binary_to_protograph(h2)
    code = lifted_product(a1, a2, name=name or f"hgp_{h1.rows}x{h1.cols}_{h2.rows}x{h2.cols}")
    return code


def lifted_product(a1: Protograph, a2: Protograph, name: str = "") -> CssCode:
    """Lifted product of two protographs sharing a lift size.

    The block protograph is assembled first and lifted once, so the length
    is L*(m1'*m2' + n1'*n2') rather than the L^2 scaling of lifting the
    seeds before taking the product.
    """
    if a1.L != a2.L:
        raise LiftSizeError(f"lift sizes differ: {a1.L} vs {a2.L}")
    ax, az = _product_protographs(a1, a2)
    hx = ax.lift()
    hz = az.lift()
    sector1 = a1.L * a1.cols * a2.cols
    label = name or f"lifted_product_L{a1.L}_{a1.rows}x{a1.cols}_{a2.rows}x{a2.cols}"
    return _make_css(hx, hz, sector1, label)


def hadamard_rotate(code: "CssCode | RotatedCode", name: str = "") -> RotatedCode:
    """Toggle the Hadamard rotation on every sector-two qubit."""
    if isinstance(code, RotatedCode):
        sector2 = frozenset(range(code.sector1_size, code.n))
        return RotatedCode(
            css=code.css,
            rotated=code.rotated ^ sector2,
            name=name or code.name,
        )
    sector2 = frozenset(range(code.sector1_size, code.n))
    return RotatedCode(css=code, rotated=sector2, name=name or (code.name + "_rotated"))


def bias_tailored_lifted_product(a1: Protograph, a2: Protograph, name: str = "") -> RotatedCode:
    base = lifted_product(a1, a2)
    label = name or f"bias_tailored_L{a1.L}_{a1.rows}x{a1.cols}_{a2.rows}x{a2.cols}"
    return hadamard_rotate(base, name=label)


def _twisted_toric_protographs(n1: int, n2: int) -> tuple[Protograph, Protograph]:
    if n1 < 2 or n2 < 1:
        raise DomainError(f"need n1 >= 2 and n2 >= 1, got ({n1}, {n2})")
    L = n1 * n2
    a1 = Protograph(L, [[(0, n2)]])
    a2 = Protograph(L, [[(0, 1)]])
    return a1, a2


def twisted_toric_css(n1: int, n2: int) -> CssCode:
    """The un-rotated CSS twisted toric code on an n1 x n2 lattice."""
    a1, a2 = _twisted_toric_protographs(n1, n2)
    return lifted_product(a1, a2, name=f"twisted_toric_css_{n1}x{n2}")


def xzzx_twisted_toric(n1: int, n2: int) -> RotatedCode:
    """XZZX twisted toric code: the bias-tailored product of 1x1 seeds."""
    a1, a2 = _twisted_toric_protographs(n1, n2)
    return bias_tailored_lifted_product(a1, a2, name=f"xzzx_twisted_toric_{n1}x{n2}")


def classical_params(h: BinaryMatrix, dmax: int | None = None, enum_budget: int = 2**24) -> ClassicalCode:
    """[n, k, d] of the code with parity check matrix h.

    d is exact when the codeword count 2^k fits the enumeration budget, or
    when a bounded support search up to weight dmax finds a codeword.
    Otherwise d is None.
    """
    n = h.cols
    k = n - rank(h)
    d: int | None = None
    if k == 0:
        return ClassicalCode(h=h, n=n, k=0, d=None)
    if 2**k <= enum_budget:
        basis = nullspace_basis(h)
        packed = np.stack([v.words for v in basis])
        d = int(_kernels.min_kernel_weight(packed))
    elif dmax is not None:
        cols = _columns_as_ints(h)
        found = _support_search_first(cols, [1] * n, n, dmax)
        if found is not None:
            d = found
    return ClassicalCode(h=h, n=n, k=k, d=d)


def tanner_girth(h: BinaryMatrix) -> int | None:
    """Shortest cycle length in the bipartite factor graph, None if acyclic."""
    dense = h.to_array()
    m, n = dense.shape
    adj: list[list[int]] = [[] for _ in range(m + n)]
    for i in range(m):
        for j in np.nonzero(dense[i])[0]:
            adj[i].append(m + int(j))
            adj[m + int(j)].append(i)
    best: int | None = None
    for root in range(m + n):
        dist = [-1] * (m + n)
        parent = [-1] * (m + n)
        dist[root] = 0
        q = deque([root])
        while q:
            u = q.popleft()
            if best is not None and 2 * dist[u] >= best:
                continue
            for v in adj[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    q.append(v)
                elif parent[u] != v:
                    cycle = dist[u] + dist[v] + 1
                    if best is None or cycle < best:
                        best = cycle
    return best


def _columns_as_ints(m: BinaryMatrix) -> list[int]:
    dense = m.to_array()
    out = []
    for j in range(m.cols):
        col = 0
        for i in np.nonzero(dense[:, j])[0]:
            col |= 1 << int(i)
        out.append(col)
    return out


def _support_search_first(cols: list[int], labels: list[int], n: int, wmax: int) -> int | None:
    """Smallest support size whose column XOR vanishes with nonzero label XOR."""
    for w in range(1, wmax + 1):
        for support in itertools.combinations(range(n), w):
            acc = 0
            lab = 0
            for j in support:
                acc ^= cols[j]
                lab ^= labels[j]
            if acc == 0 and lab != 0:
                return w
    return None


def _support_search_cost(n: int, wmax: int) -> int:
    return sum(comb(n, w) for w in range(1, wmax + 1))


def _min_cycle_with_label(m: BinaryMatrix, lab: BinaryMatrix) -> int | None:
    """Exact minimum over column-weight-2 kernels via label-augmented BFS.

    Kernel vectors of a column-weight-2 matrix are edge-disjoint unions of
    cycles in the graph whose vertices are rows and whose edges are columns.
    The lightest kernel vector with nonzero label is the shortest cycle
    whose edge labels XOR to something nonzero; BFS over (vertex, label)
    states from every start vertex finds it.
    """
    n_states = 1 << lab.rows
    dense = m.to_array()
    lab_dense = lab.to_array()
    v_count = m.rows
    adj: list[list[tuple[int, int]]] = [[] for _ in range(v_count)]
    for j in range(m.cols):
        ends = np.nonzero(dense[:, j])[0]
        label = 0
        for i in np.nonzero(lab_dense[:, j])[0]:
            label |= 1 << int(i)
        a, b = int(ends[0]), int(ends[1])
        adj[a].append((b, label))
        adj[b].append((a, label))
    best: int | None = None
    for start in range(v_count):
        dist = np.full(v_count * n_states, -1, dtype=np.int32)
        dist[start * n_states] = 0
        q = deque([(start, 0)])
        while q:
            u, l = q.popleft()
            du = int(dist[u * n_states + l])
            if best is not None and du + 1 > best:
                break
            for v, el in adj[u]:
                nl = l ^ el
                if v == start and nl != 0:
                    cand = du + 1
                    if best is None or cand < best:
                        best = cand
                state = v * n_states + nl
                if dist[state] < 0:
                    dist[state] = du + 1
                    q.append((v, nl))
    return best


def _min_logical(
    m: BinaryMatrix,
    lab: BinaryMatrix,
    wmax: int,
    kernel_budget: int,
    candidates: BinaryMatrix | None = None,
) -> SideBound:
    """Minimum weight of u with m @ u = 0 and lab @ u != 0."""
    n = m.cols
    if lab.rows == 0:
        return SideBound(None, True, n + 1, None, "void")
    col_weights = m.column_weights() if n else np.zeros(0, dtype=np.int64)
    lab_col_nonzero = lab.to_array().any(axis=0) if n else np.zeros(0, dtype=bool)
    zero_cols = np.nonzero((col_weights == 0) & lab_col_nonzero)[0]
    if zero_cols.size:
        return SideBound(1, True, 1, 1, "unit_column")

    ker_dim = n - rank(m)
    if ker_dim == 0:
        return SideBound(None, True, n + 1, None, "kernel_enum")
    upper = None
    if candidates is not None and candidates.rows:
        upper = int(candidates.row_weights().min())

    if 2**ker_dim <= kernel_budget and lab.rows <= 64:
        basis = nullspace_basis(m)
        packed = np.stack([v.words for v in basis])
        labels = np.empty(len(basis), dtype=np.uint64)
        for i, v in enumerate(basis):
            bits = matvec(lab, v).to_array()
            val = 0
            for b in np.nonzero(bits)[0]:
                val |= 1 << int(b)
            labels[i] = val
        got = int(_kernels.min_labeled_kernel_weight(packed, labels))
        if got < 0:
            return SideBound(None, True, n + 1, None, "kernel_enum")
        return SideBound(got, True, got, got, "kernel_enum")

    if n and col_weights.size and (col_weights == 2).all() and lab.rows <= 6:
        got = _min_cycle_with_label(m, lab)
        if got is None:
            return SideBound(None, True, n + 1, None, "cycle_bfs")
        return SideBound(got, True, got, got, "cycle_bfs")

    if _support_search_cost(n, wmax) <= 2_000_000:
        cols = _columns_as_ints(m)
        labels_int = _columns_as_ints(lab)
        got = _support_search_first(cols, labels_int, n, wmax)
        if got is not None:
            return SideBound(got, True, got, got, "support_enum")
        return SideBound(None, False, wmax + 1, upper, "support_enum")

    return SideBound(None, False, 1, upper, "bounds_only")


def _combine_sides(a: SideBound, b: SideBound) -> SideBound:
    """Minimum of two side problems, propagating exactness where possible."""
    exact_vals = [s.value for s in (a, b) if s.exact and s.value is not None]
    voids = [s for s in (a, b) if s.exact and s.value is None]
    uppers = [u for u in (a.upper, b.upper) if u is not None]
    upper = min(uppers) if uppers else None
    lower = min(a.lower, b.lower)
    method = f"{a.method}+{b.method}" if a.method != b.method else a.method
    if exact_vals:
        v = min(exact_vals)
        others = [s for s in (a, b) if not (s.exact and s.value is not None)]
        if all(s.exact for s in (a, b)) or all(s.lower >= v for s in others):
            return SideBound(v, True, v, v, method)
        return SideBound(None, False, lower, min(v, upper) if upper else v, method)
    if len(voids) == 2:
        return SideBound(None, True, lower, None, method)
    return SideBound(None, False, lower, upper, method)


def quantum_distance(code, wmax: int = 6, kernel_budget: int = 2**22) -> DistanceReport:
    """Distance bounds for a CSS or rotated code.

    d is the full Pauli distance: for CSS codes the minimum logical weight
    is attained on a pure-X or pure-Z operator, and the Hadamard rotation
    preserves every logical weight, so both cases reduce to the two
    one-sided problems on the CSS pair. dx and dz are the infinite-bias
    distances in the code's own frame: for rotated codes a physical X-only
    error decouples into the two qubit sectors.
    """
    css = code.css if isinstance(code, RotatedCode) else code
    cx = _min_logical(css.hz, css.lz, wmax, kernel_budget, candidates=css.lx)
    cz = _min_logical(css.hx, css.lx, wmax, kernel_budget, candidates=css.lz)
    d = _combine_sides(cx, cz)
    rotated = isinstance(code, RotatedCode) and bool(code.rotated)
    if not rotated:
        return DistanceReport(d=d, dx=cx, dz=cz)
    s1 = css.sector1_size
    expected = frozenset(range(s1, css.n))
    if code.rotated != expected:
        raise DomainError("sector-decoupled distances need the full sector-two rotation")
    hz1, hz2 = _column_split(css.hz, s1)
    hx1, hx2 = _column_split(css.hx, s1)
    lz1, lz2 = _column_split(css.lz, s1)
    lx1, lx2 = _column_split(css.lx, s1)
    dx = _combine_sides(
        _min_logical(hz1, lz1, wmax, kernel_budget),
        _min_logical(hx2, lx2, wmax, kernel_budget),
    )
    dz = _combine_sides(
        _min_logical(hx1, lx1, wmax, kernel_budget),
        _min_logical(hz2, lz2, wmax, kernel_budget),
    )
    return DistanceReport(d=d, dx=dx, dz=dz)


def _column_split(m: BinaryMatrix, at: int) -> tuple[BinaryMatrix, BinaryMatrix]:
    dense = m.to_array()
    return BinaryMatrix.from_array(dense[:, :at]), BinaryMatrix.from_array(dense[:, at:])


def symplectic_frame(code) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Dense frame-X/frame-Z components of stabilisers and logicals.

    Returns (fx, fz, lfx, lfz). For a CSS code the stabiliser rows are the
    X-type generators (hx | 0) stacked over the Z-type (0 | hz). A rotation
    swaps the two components on every rotated column.
    """
    css = code.css if isinstance(code, RotatedCode) else code
    hx = css.hx.to_array()
    hz = css.hz.to_array()
    fx = np.concatenate([hx, np.zeros_like(hz)], axis=0)
    fz = np.concatenate([np.zeros_like(hx), hz], axis=0)
    lfx = np.concatenate([css.lx.to_array(), np.zeros_like(css.lz.to_array())], axis=0)
    lfz = np.concatenate([np.zeros_like(css.lx.to_array()), css.lz.to_array()], axis=0)
    if isinstance(code, RotatedCode) and code.rotated:
        idx = sorted(code.rotated)
        for a, b in ((fx, fz), (lfx, lfz)):
            tmp = a[:, idx].copy()
            a[:, idx] = b[:, idx]
            b[:, idx] = tmp
    return fx, fz, lfx, lfz


_PAULI_COMPONENTS = {0: (1, 0), 1: (0, 1), 2: (1, 1)}


def logical_weight_multiset(code, wmax: int) -> Counter:
    """Counts of logical Pauli operators by weight, up to weight wmax.

    Exhausts every support of size <= wmax and every X/Z/Y assignment on
    it, so only use this on small codes. An operator counts as logical when
    it commutes with all stabilisers and anticommutes with some logical
    basis element.
    """
    fx, fz, lfx, lfz = (a.astype(np.int64) for a in symplectic_frame(code))
    n = fx.shape[1]
    counts: Counter = Counter()
    for w in range(1, wmax + 1):
        assigns = np.array(
            [[_PAULI_COMPONENTS[(p // 3**i) % 3] for i in range(w)] for p in range(3**w)],
            dtype=np.int64,
        )
        ax = assigns[:, :, 0]
        az = assigns[:, :, 1]
        for support in itertools.combinations(range(n), w):
            x = np.zeros((3**w, n), dtype=np.int64)
            z = np.zeros((3**w, n), dtype=np.int64)
            x[:, support] = ax
            z[:, support] = az
            commutes = ((x @ fz.T + z @ fx.T) % 2 == 0).all(axis=1)
            labelled = ((x @ lfz.T + z @ lfx.T) % 2 != 0).any(axis=1)
            counts[w] += int(np.count_nonzero(commutes & labelled))
    return counts
