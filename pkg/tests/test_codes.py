import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from biasqec.circulant import Protograph, RingElement, lift
from biasqec.codes import (
    CssCode,
    RotatedCode,
    bias_tailored_lifted_product,
    classical_params,
    css_logicals,
    hadamard_rotate,
    hypergraph_product,
    lifted_product,
    logical_weight_multiset,
    quantum_distance,
    symplectic_frame,
    tanner_girth,
    twisted_toric_css,
    xzzx_twisted_toric,
)
from biasqec.errors import DomainError, LiftSizeError, NotACssCodeError
from biasqec.formats import read_alist, read_protograph, packaged_data_path
from biasqec.gf2 import BinaryMatrix, hstack, kron, matmul, rank


def rep_code(length):
    return lift(Protograph(length, [[(0, 1)]]))


def random_protograph(rng, L, rows, cols, max_weight=2):
    def elem():
        w = int(rng.integers(0, max_weight + 1))
        return RingElement(L, rng.integers(0, L, size=w))

    return Protograph(L, [[elem() for _ in range(cols)] for _ in range(rows)])


# --- classical parameters ---


def test_repetition_code_params():
    c = classical_params(rep_code(3))
    assert (c.n, c.k, c.d) == (3, 1, 3)


def test_lifted_a3_params():
    a3 = Protograph(3, [[(1, 2), (0,), 0], [0, (0, 1), (1,)]])
    c = classical_params(lift(a3))
    assert (c.n, c.k, c.d) == (9, 3, 3)


def test_a13_params_and_girth():
    h = lift(read_protograph(packaged_data_path("a13.proto")))
    c = classical_params(h)
    assert (c.n, c.k, c.d) == (52, 3, 26)
    assert tanner_girth(h) == 6


def test_seed_code_params():
    c = classical_params(read_alist(packaged_data_path("seed_16_4_6.alist")))
    assert (c.n, c.k, c.d) == (16, 4, 6)


def test_classical_params_k_zero_and_bounded_search():
    c = classical_params(BinaryMatrix.identity(3))
    assert (c.k, c.d) == (0, None)
    # force the bounded support search path with a tiny enumeration budget
    c = classical_params(rep_code(3), dmax=3, enum_budget=1)
    assert c.d == 3
    c = classical_params(rep_code(3), dmax=2, enum_budget=1)
    assert c.d is None


def test_girth_of_forest_is_none():
    assert tanner_girth(BinaryMatrix.from_array([[1, 1, 0], [0, 0, 1]])) is None
    assert tanner_girth(BinaryMatrix.from_array([[1, 1], [1, 1]])) == 4


# --- hypergraph product ---


def test_toric_code_parameters():
    toric = hypergraph_product(rep_code(3), rep_code(2))
    assert (toric.n, toric.k) == (12, 2)
    assert toric.sector1_size == 6
    rep = quantum_distance(toric)
    assert rep.d.value == 2 and rep.d.exact


def test_hgp_matches_direct_kron_construction():
    h1 = rep_code(3)
    h2 = rep_code(2)
    code = hypergraph_product(h1, h2)
    n1, m1 = h1.cols, h1.rows
    n2, m2 = h2.cols, h2.rows
    hx = hstack([kron(h1, BinaryMatrix.identity(n2)), kron(BinaryMatrix.identity(m1), h2.transpose())])
    hz = hstack([kron(BinaryMatrix.identity(n1), h2), kron(h1.transpose(), BinaryMatrix.identity(m2))])
    assert code.hx == hx
    assert code.hz == hz


def test_hgp_of_seed_code():
    seed = read_alist(packaged_data_path("seed_16_4_6.alist"))
    code = hypergraph_product(seed, seed)
    assert (code.n, code.k) == (400, 16)
    assert code.sector1_size == 256


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=2**31 - 1))
def test_hgp_k_formula(seed):
    rng = np.random.default_rng(seed)
    h1 = BinaryMatrix.from_array((rng.random((int(rng.integers(1, 4)), int(rng.integers(1, 5)))) < 0.5).astype(np.uint8))
    h2 = BinaryMatrix.from_array((rng.random((int(rng.integers(1, 4)), int(rng.integers(1, 5)))) < 0.5).astype(np.uint8))
    code = hypergraph_product(h1, h2)
    k1 = h1.cols - rank(h1)
    k2 = h2.cols - rank(h2)
    k1t = h1.rows - rank(h1)
    k2t = h2.rows - rank(h2)
    assert code.k == k1 * k2 + k1t * k2t
    assert code.n == h1.cols * h2.cols + h1.rows * h2.rows


# --- lifted product ---


def test_lifted_product_416():
    a13 = read_protograph(packaged_data_path("a13.proto"))
    code = lifted_product(a13, a13)
    assert (code.n, code.k) == (416, 18)
    assert code.sector1_size == 208


def test_lifted_product_882():
    a1 = read_protograph(packaged_data_path("l63_1x1.proto"))
    a2 = read_protograph(packaged_data_path("l63_7x7.proto"))
    code = lifted_product(a1, a2)
    assert (code.n, code.k) == (882, 24)


def test_lifted_product_rejects_mixed_l():
    with pytest.raises(LiftSizeError):
        lifted_product(Protograph(3, [[(0,)]]), Protograph(4, [[(0,)]]))


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=2**31 - 1))
def test_product_commutation_and_length_law(seed):
    rng = np.random.default_rng(seed)
    L = int(rng.integers(1, 17))
    m1, n1 = int(rng.integers(1, 4)), int(rng.integers(1, 4))
    m2, n2 = int(rng.integers(1, 4)), int(rng.integers(1, 4))
    a1 = random_protograph(rng, L, m1, n1)
    a2 = random_protograph(rng, L, m2, n2)
    from biasqec.codes import _product_protographs

    ax, az = _product_protographs(a1, a2)
    hx, hz = ax.lift(), az.lift()
    assert matmul(hx, hz.transpose()).is_zero()
    # product-then-lift length stays linear in L
    assert hx.cols == L * (m1 * m2 + n1 * n2)


def test_length_law_vs_lift_then_product():
    rng = np.random.default_rng(21)
    L = 4
    a1 = random_protograph(rng, L, 2, 2, max_weight=1)
    a2 = random_protograph(rng, L, 1, 2, max_weight=1)
    lifted_first = hypergraph_product(a1.lift(), a2.lift())
    product_first = lifted_product(a1, a2)
    assert product_first.n == L * (2 * 1 + 2 * 2)
    assert lifted_first.n == L * L * (2 * 1 + 2 * 2)


def test_commutation_at_spec_size_bound():
    rng = np.random.default_rng(7)
    a1 = random_protograph(rng, 16, 8, 8, max_weight=1)
    a2 = random_protograph(rng, 16, 8, 8, max_weight=1)
    from biasqec.codes import _product_protographs

    ax, az = _product_protographs(a1, a2)
    assert matmul(ax.lift(), az.lift().transpose()).is_zero()


# --- logical bases ---


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=2**31 - 1))
def test_css_logicals_properties(seed):
    rng = np.random.default_rng(seed)
    h1 = BinaryMatrix.from_array((rng.random((int(rng.integers(1, 4)), int(rng.integers(2, 5)))) < 0.5).astype(np.uint8))
    h2 = BinaryMatrix.from_array((rng.random((int(rng.integers(1, 4)), int(rng.integers(2, 5)))) < 0.5).astype(np.uint8))
    code = hypergraph_product(h1, h2)
    assert code.lx.rows == code.k and code.lz.rows == code.k
    if code.k:
        assert matmul(code.hz, code.lx.transpose()).is_zero()
        assert matmul(code.hx, code.lz.transpose()).is_zero()
        assert rank(matmul(code.lx, code.lz.transpose())) == code.k


def test_css_logicals_rejects_noncommuting():
    h = BinaryMatrix.from_array([[1, 1, 0]])
    g = BinaryMatrix.from_array([[1, 0, 0]])
    with pytest.raises(NotACssCodeError):
        css_logicals(h, g)


def test_css_logicals_k_zero():
    # [[1,0]] style: single qubit fully constrained by complementary checks
    hx = BinaryMatrix.from_array([[1, 0], [0, 1]])
    hz = BinaryMatrix.zeros(0, 2)
    lx, lz = css_logicals(hx, hz)
    assert lx.rows == 0 and lz.rows == 0


# --- rotation ---


def test_hadamard_rotate_indices_and_involution():
    css = twisted_toric_css(3, 2)
    rot = hadamard_rotate(css)
    assert rot.rotated == frozenset(range(6, 12))
    again = hadamard_rotate(rot)
    assert again.rotated == frozenset()
    assert (rot.n, rot.k) == (css.n, css.k)


def test_xzzx_twisted_toric_params():
    code = xzzx_twisted_toric(3, 2)
    assert (code.n, code.k) == (12, 2)
    rep = quantum_distance(code)
    assert rep.d.value == 3 and rep.d.exact
    assert rep.dx.value == 6 and rep.dx.exact


def test_xzzx_rejects_bad_lattice():
    with pytest.raises(DomainError):
        xzzx_twisted_toric(1, 5)
    with pytest.raises(DomainError):
        xzzx_twisted_toric(4, 0)


def test_xzzx_480_distance():
    code = xzzx_twisted_toric(16, 15)
    assert (code.n, code.k) == (480, 2)
    rep = quantum_distance(code)
    assert rep.d.value == 16 and rep.d.exact
    assert rep.dx.value == 240 and rep.dx.exact


def test_bias_tailored_416_infinite_bias_distance():
    a13 = read_protograph(packaged_data_path("a13.proto"))
    code = bias_tailored_lifted_product(a13, a13)
    assert (code.n, code.k) == (416, 18)
    rep = quantum_distance(code)
    assert rep.dx.value == 26 and rep.dx.exact
    assert rep.d.upper is not None and rep.d.upper <= 26


def test_rotation_preserves_distance_report():
    css = twisted_toric_css(3, 2)
    rot = hadamard_rotate(css)
    assert quantum_distance(css).d == quantum_distance(rot).d


# --- symplectic structure ---


def test_xzzx_z_frame_is_two_closed_loops():
    for n1, n2 in [(3, 2), (8, 7)]:
        code = xzzx_twisted_toric(n1, n2)
        _, fz, _, _ = symplectic_frame(code)
        half = code.n // 2
        live = fz[fz.any(axis=1)]
        assert live.shape[0] == code.n
        in_one = live[:, :half].any(axis=1)
        in_two = live[:, half:].any(axis=1)
        assert not (in_one & in_two).any(), "each check acts on one sector only"
        for block in (live[in_one][:, :half], live[in_two][:, half:]):
            assert block.shape == (half, half)
            assert (block.sum(axis=0) == 2).all() and (block.sum(axis=1) == 2).all()
            # single closed loop: the incidence graph is connected
            seen = {0}
            frontier = [0]
            while frontier:
                r = frontier.pop()
                for j in np.nonzero(block[r])[0]:
                    for r2 in np.nonzero(block[:, j])[0]:
                        if int(r2) not in seen:
                            seen.add(int(r2))
                            frontier.append(int(r2))
            assert len(seen) == half


def test_bias_tailored_z_frame_decouples_into_seed_copies():
    a13 = read_protograph(packaged_data_path("a13.proto"))
    code = bias_tailored_lifted_product(a13, a13)
    _, fz, _, _ = symplectic_frame(code)
    s1 = code.sector1_size
    b = lift(a13).to_array()
    bt = lift(a13).transpose().to_array()
    x_rows = fz[: code.hx.rows]
    z_rows = fz[code.hx.rows :]
    assert not x_rows[:, :s1].any() and not z_rows[:, s1:].any()
    assert np.array_equal(z_rows[:, :s1], np.kron(np.eye(4, dtype=np.uint8), b))
    assert np.array_equal(x_rows[:, s1:], np.kron(np.eye(4, dtype=np.uint8), bt))


def test_rotation_preserves_logical_weight_multiset_small_codes():
    toric = hypergraph_product(rep_code(3), rep_code(2))
    assert logical_weight_multiset(toric, 4) == logical_weight_multiset(hadamard_rotate(toric), 4)
    css32 = twisted_toric_css(3, 2)
    assert logical_weight_multiset(css32, 4) == logical_weight_multiset(xzzx_twisted_toric(3, 2), 4)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=2**31 - 1))
def test_rotation_preserves_params_and_weight_multisets(seed):
    rng = np.random.default_rng(seed)
    L = int(rng.integers(2, 4))
    a1 = random_protograph(rng, L, 1, int(rng.integers(1, 3)), max_weight=2)
    a2 = random_protograph(rng, L, 1, 1, max_weight=2)
    css = lifted_product(a1, a2)
    rot = hadamard_rotate(css)
    assert (rot.n, rot.k) == (css.n, css.k)
    if css.n <= 12:
        wmax = min(4, css.n)
        assert logical_weight_multiset(css, wmax) == logical_weight_multiset(rot, wmax)
