import numpy as np
import pytest

from clusterqec.gf2 import (
    BinaryMatrix,
    BinaryVector,
    PauliVector,
    in_rowspace,
    kernel_basis,
    kronecker,
    rank,
    solve_consistent,
    trace_inner_product,
)

from oracles import dense_rank_gf2, dense_solve_gf2


def random_sparse(rng, rows, cols, density=0.15):
    dense = rng.random((rows, cols)) < density
    return BinaryMatrix.from_dense(dense.astype(np.uint8))


# ── types ─────────────────────────────────────────────────────────────


def test_vector_validation():
    with pytest.raises(ValueError):
        BinaryVector(3, (0, 0))
    with pytest.raises(ValueError):
        BinaryVector(3, (2, 1))
    with pytest.raises(ValueError):
        BinaryVector(3, (3,))


def test_vector_roundtrip_and_xor():
    v = BinaryVector.from_dense([1, 0, 1, 1])
    assert v.support == (0, 2, 3)
    assert v.weight == 3
    assert (v + v).weight == 0
    w = BinaryVector(4, (1, 2))
    assert (v + w).support == (0, 1, 3)
    assert v.dot(w) == 1


def test_matrix_validation():
    with pytest.raises(ValueError):
        BinaryMatrix(1, 3, ((0, 0),))
    with pytest.raises(ValueError):
        BinaryMatrix(1, 3, ((2, 1),))
    with pytest.raises(ValueError):
        BinaryMatrix(1, 3, ((5,),))
    with pytest.raises(ValueError):
        BinaryMatrix(2, 3, ((0,),))


def test_matrix_dense_roundtrip():
    rng = np.random.default_rng(0)
    dense = (rng.random((7, 11)) < 0.3).astype(np.uint8)
    m = BinaryMatrix.from_dense(dense)
    assert np.array_equal(m.to_dense(), dense)
    assert np.array_equal(m.transpose().to_dense(), dense.T)


# ── rank ──────────────────────────────────────────────────────────────


def test_rank_identity_and_zero():
    assert rank(BinaryMatrix.identity(3)) == 3
    assert rank(BinaryMatrix.zeros(4, 5)) == 0


def test_rank_repetition_circulant():
    # 15x15 circulant with first row {0,1}: one dependency (rows sum to 0).
    sup = tuple(tuple(sorted(((0 + r) % 15, (1 + r) % 15))) for r in range(15))
    m = BinaryMatrix(15, 15, sup)
    assert rank(m) == dense_rank_gf2(m.to_dense()) == 14


@pytest.mark.parametrize("shape", [(20, 20), (60, 45), (120, 200), (200, 200)])
def test_rank_matches_transpose_and_oracle(shape):
    rng = np.random.default_rng(shape[0] * 1000 + shape[1])
    m = random_sparse(rng, *shape, density=0.05)
    r = rank(m)
    assert r == rank(m.transpose())
    assert r == dense_rank_gf2(m.to_dense())


# ── kernel ────────────────────────────────────────────────────────────


def test_kernel_identity_empty():
    assert kernel_basis(BinaryMatrix.identity(4)) == []


def test_kernel_single_row():
    m = BinaryMatrix.from_dense([[1, 1, 0]])
    basis = kernel_basis(m)
    assert len(basis) == 2
    for v in basis:
        assert m.mul_vec(v).weight == 0


def test_kernel_repetition_circulant_all_ones():
    sup = tuple(tuple(sorted(((0 + r) % 15, (1 + r) % 15))) for r in range(15))
    m = BinaryMatrix(15, 15, sup)
    basis = kernel_basis(m)
    assert len(basis) == 1
    assert basis[0].support == tuple(range(15))


def test_kernel_counts_and_membership_random():
    rng = np.random.default_rng(7)
    for _ in range(10):
        m = random_sparse(rng, 18, 30, density=0.2)
        basis = kernel_basis(m)
        assert len(basis) == 30 - rank(m)
        for v in basis:
            assert m.mul_vec(v).weight == 0
        # independence
        stack = BinaryMatrix.from_rows(len(basis), 30, [v.support for v in basis])
        assert rank(stack) == len(basis)


# ── rowspace membership ───────────────────────────────────────────────


def test_in_rowspace_trivials():
    m = BinaryMatrix.from_dense([[1, 1, 0, 0]])
    assert in_rowspace(m, BinaryVector(4))
    assert not in_rowspace(m, BinaryVector(4, (2,)))
    ident = BinaryMatrix.identity(4)
    assert in_rowspace(ident, BinaryVector(4, (0, 3)))


def test_in_rowspace_length_mismatch():
    with pytest.raises(ValueError):
        in_rowspace(BinaryMatrix.identity(3), BinaryVector(4, (0,)))


# ── trace inner product ───────────────────────────────────────────────


def test_trace_inner_product_anticommuting_pair():
    x1 = PauliVector.from_ops(1, xs=[0])
    z1 = PauliVector.from_ops(1, zs=[0])
    assert trace_inner_product(x1, z1) == 1


def test_trace_inner_product_commuting_pair():
    xx = PauliVector.from_ops(2, xs=[0, 1])
    zz = PauliVector.from_ops(2, zs=[0, 1])
    assert trace_inner_product(xx, zz) == 0


def test_trace_inner_product_self_zero():
    rng = np.random.default_rng(3)
    for _ in range(20):
        n = 10
        e = PauliVector(
            n,
            BinaryVector.from_dense(rng.integers(0, 2, n)),
            BinaryVector.from_dense(rng.integers(0, 2, n)),
        )
        assert trace_inner_product(e, e) == 0


def test_trace_inner_product_symmetric_bilinear():
    rng = np.random.default_rng(11)
    n = 12
    def rand_pauli():
        return PauliVector(
            n,
            BinaryVector.from_dense(rng.integers(0, 2, n)),
            BinaryVector.from_dense(rng.integers(0, 2, n)),
        )
    for _ in range(30):
        a, b, c = rand_pauli(), rand_pauli(), rand_pauli()
        assert trace_inner_product(a, b) == trace_inner_product(b, a)
        lhs = trace_inner_product(a + b, c)
        rhs = (trace_inner_product(a, c) + trace_inner_product(b, c)) % 2
        assert lhs == rhs


def test_trace_inner_product_length_mismatch():
    with pytest.raises(ValueError):
        trace_inner_product(PauliVector.identity(2), PauliVector.identity(3))


# ── kronecker ─────────────────────────────────────────────────────────


def test_kronecker_identities():
    i6 = kronecker(BinaryMatrix.identity(2), BinaryMatrix.identity(3))
    assert np.array_equal(i6.to_dense(), np.eye(6, dtype=np.uint8))
    a = BinaryMatrix.from_dense([[1, 0, 1], [0, 1, 1]])
    assert kronecker(a, BinaryMatrix.from_dense([[1]])) == a


def test_kronecker_explicit():
    a = BinaryMatrix.from_dense([[1, 1]])
    b = BinaryMatrix.identity(2)
    out = kronecker(a, b)
    assert np.array_equal(
        out.to_dense(), np.array([[1, 0, 1, 0], [0, 1, 0, 1]], dtype=np.uint8)
    )


def test_kronecker_rank_multiplicative():
    rng = np.random.default_rng(23)
    for _ in range(6):
        a = random_sparse(rng, 4, 5, density=0.4)
        b = random_sparse(rng, 3, 6, density=0.4)
        k = kronecker(a, b)
        assert np.array_equal(k.to_dense(), np.kron(a.to_dense(), b.to_dense()) % 2)
        assert rank(k) == dense_rank_gf2(a.to_dense()) * dense_rank_gf2(b.to_dense())


# ── solve ─────────────────────────────────────────────────────────────


def test_solve_trivials():
    m = BinaryMatrix.from_dense([[1, 0], [0, 1]])
    s = BinaryVector(2, (1,))
    assert solve_consistent(m, s).support == (1,)
    zero = solve_consistent(m, BinaryVector(2))
    assert m.mul_vec(zero).weight == 0
    m2 = BinaryMatrix.from_dense([[1, 1]])
    x = solve_consistent(m2, BinaryVector(1, (0,)))
    assert m2.mul_vec(x).support == (0,)


def test_solve_length_mismatch():
    with pytest.raises(ValueError):
        solve_consistent(BinaryMatrix.identity(3), BinaryVector(2, (0,)))


def test_solve_consistency_criterion_random():
    rng = np.random.default_rng(29)
    for _ in range(30):
        m = random_sparse(rng, 8, 6, density=0.3)
        s = BinaryVector.from_dense(rng.integers(0, 2, 8))
        x = solve_consistent(m, s)
        oracle = dense_solve_gf2(m.to_dense(), s.to_dense())
        assert (x is None) == (oracle is None)
        if x is not None:
            assert m.mul_vec(x).bits == s.bits


# ── pauli strings ─────────────────────────────────────────────────────


def test_pauli_string_roundtrip():
    e = PauliVector.from_string(9, "X0,Y3,Z7")
    assert e.weight == 3
    assert e.to_string() == "X0,Y3,Z7"
    assert e.u.support == (3, 7)
    assert e.v.support == (0, 3)
    assert PauliVector.from_string(4, "").weight == 0


def test_pauli_string_errors():
    with pytest.raises(ValueError):
        PauliVector.from_string(4, "W1")
    with pytest.raises(ValueError):
        PauliVector.from_string(4, "X9")
    with pytest.raises(ValueError):
        PauliVector.from_ops(4, xs=[1], zs=[1])
