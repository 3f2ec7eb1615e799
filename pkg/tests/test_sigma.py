import random

import pytest
from hypothesis import given, settings, strategies as st

from zkmc.crypto import group as grp
from zkmc.crypto.field import R
from zkmc.crypto.pedersen import DimensionError
from zkmc.crypto.transcript import Transcript
from zkmc.crypto.wire import Reader, Writer
from zkmc.sigma import params as P
from zkmc.sigma.rangeproof import RangeError, RangeProof, bit_length, range_prove, range_verify
from zkmc.sigma.zkmm import ZkmmProof, commit_out, zkmm_prove, zkmm_verify
from zkmc.sigma.zkmmeq import ZkmmeqProof, ZkmmeqProver, check, extract, zkmmeq_prove, zkmmeq_verify
from zkmc.sigma.zkrp import (ZkrpProof, flatten, lift, matrix_positions, shift_commitment, vector_positions,
                             zkrp_prove, zkrp_simulate, zkrp_verify)


_SP = P.setup(4, 3, M=15, rng=random.Random(9), insecure=True)


@pytest.fixture(scope="module")
def sp():
    return _SP


def com(sp, v, r):
    return grp.msm([sp.g, sp.h], [v % R, r])


def matrix_commit(sp, A, r):
    """GT commitment of a matrix at the flattened positions."""
    pos = matrix_positions(sp, len(A), len(A[0]))
    c = grp.msm(list(sp.gs[p] for p in pos) + [sp.h], [v % R for v in flatten(A)] + [r])
    return lift(sp, c), pos


def test_bit_length():
    assert bit_length(15) == (4, False)
    assert bit_length(10) == (4, True)
    assert bit_length(2 ** 32) == (33, True)
    with pytest.raises(ValueError):
        bit_length(0)


@pytest.mark.parametrize("M", [15, 10])
def test_range_boundaries(sp, M):
    rng = random.Random(M)
    for v in (0, 1, M):
        r = P.sample(rng)
        c = com(sp, v, r)
        pr = range_prove(sp, [v], [r], [c], M, Transcript("t"), rng)
        assert range_verify(sp, [c], M, pr, Transcript("t"))
    with pytest.raises(RangeError):
        range_prove(sp, [M + 1], [1], [com(sp, M + 1, 1)], M, Transcript("t"), rng)
    with pytest.raises(RangeError):
        range_prove(sp, [-1], [1], [com(sp, -1, 1)], M, Transcript("t"), rng)


@pytest.mark.parametrize("M,v", [(15, 16), (10, 11), (10, -1)])
def test_range_rejects_forged_opening(sp, M, v):
    """A prover claiming an in-range opening for an out-of-range commitment is caught."""
    rng = random.Random(1)
    r = P.sample(rng)
    c = com(sp, v, r)
    for fake in (0, M, v % (M + 1)):
        pr = range_prove(sp, [fake], [r], [c], M, Transcript("t"), rng)
        assert not range_verify(sp, [c], M, pr, Transcript("t"))


def test_range_proof_wire_and_binding(sp):
    rng = random.Random(2)
    vs = [3, 7]
    rs = [P.sample(rng) for _ in vs]
    cs = [com(sp, v, r) for v, r in zip(vs, rs)]
    pr = range_prove(sp, vs, rs, cs, 10, Transcript("t"), rng)
    w = Writer(b"RP")
    pr.write(w)
    r = Reader(w.done(), b"RP")
    back = RangeProof.read(r)
    r.end()
    assert back == pr and range_verify(sp, cs, 10, back, Transcript("t"))
    assert not range_verify(sp, cs, 10, pr, Transcript("other"))
    d0 = pr.decs[0]
    b0 = d0[0]
    from dataclasses import replace
    bad = replace(pr, decs=((replace(b0, z1=(b0.z1 + 1) % R),) + d0[1:],) + pr.decs[1:])
    assert not range_verify(sp, cs, 10, bad, Transcript("t"))


@given(st.lists(st.integers(0, 15), min_size=1, max_size=6))
@settings(max_examples=10, deadline=None)
def test_zkrp_vector_completeness(entries):
    sp = _SP
    rng = random.Random(len(entries))
    r_A = P.sample(rng)
    pos = vector_positions(sp, len(entries))
    c = grp.msm([sp.gs[p] for p in pos] + [sp.h], entries + [r_A])
    chat = lift(sp, c)
    pr, _ = zkrp_prove(sp, entries, pos, chat, r_A, 15, Transcript("z"), rng)
    assert zkrp_verify(sp, chat, pos, 15, pr, Transcript("z"))


def test_zkrp_matrix_and_tamper(sp):
    rng = random.Random(4)
    A = [[1, 2, 3], [4, 5, 15], [0, 0, 7]]
    r_A = P.sample(rng)
    chat, pos = matrix_commit(sp, A, r_A)
    pr, rs = zkrp_prove(sp, flatten(A), pos, chat, r_A, 15, Transcript("z"), rng)
    assert len(rs) == 9
    assert zkrp_verify(sp, chat, pos, 15, pr, Transcript("z"))
    # different committed matrix
    chat2, _ = matrix_commit(sp, [[1, 2, 3], [4, 5, 14], [0, 0, 7]], r_A)
    assert not zkrp_verify(sp, chat2, pos, 15, pr, Transcript("z"))
    w = Writer(b"ZR")
    pr.write(w)
    assert ZkrpProof.read(Reader(w.done(), b"ZR")) == pr
    with pytest.raises(DimensionError):
        matrix_positions(sp, 5, 1)


def test_zkrp_shifted_interval(sp):
    """v + M in [0, 2M] realizes v in [-M, M]."""
    M = 7
    rng = random.Random(6)
    for v in (-M, 0, M):
        r = P.sample(rng)
        c = grp.msm([sp.gs[0], sp.h], [v % R, r]) + shift_commitment(sp, [0], M)
        chat = lift(sp, c)
        pr, _ = zkrp_prove(sp, [v + M], [0], chat, r, 2 * M, Transcript("s"), rng)
        assert zkrp_verify(sp, chat, [0], 2 * M, pr, Transcript("s"))
    for v in (-M - 1, M + 1):
        with pytest.raises(RangeError):
            zkrp_prove(sp, [v + M], [0], lift(sp, grp.G1()), 0, 2 * M, Transcript("s"), rng)


def test_zkrp_simulator(sp):
    rng = random.Random(8)
    pos = matrix_positions(sp, 2, 2)
    pre = grp.smul(sp.g, P.sample(rng))  # arbitrary statement, no witness known
    pr = zkrp_simulate(sp, pre, pos, 15, Transcript("z"), rng)
    assert zkrp_verify(sp, lift(sp, pre), pos, 15, pr, Transcript("z"))


def test_zkmm(sp):
    rng = random.Random(10)
    A = [[1, 2], [3, 4]]
    ents = [[P.sample(rng) for _ in row] for row in A]
    ecs = [[com(sp, a, r) for a, r in zip(row, rr)] for row, rr in zip(A, ents)]
    x, r_x = [1, 1], P.sample(rng)
    c_x = commit_out(sp, x, r_x)
    r_out = P.sample(rng)
    pr, c_out = zkmm_prove(sp, A, ecs, ents, x, c_x, r_x, r_out, Transcript("m"), rng)
    assert c_out == commit_out(sp, [3, 7], r_out)
    assert zkmm_verify(sp, ecs, c_x, c_out, pr, Transcript("m"))
    assert not zkmm_verify(sp, ecs, c_x, commit_out(sp, [3, 8], r_out), pr, Transcript("m"))
    w = Writer(b"MM")
    pr.write(w)
    assert ZkmmProof.read(Reader(w.done(), b"MM")) == pr
    # one-row matrix: the output commitment is a scalar commitment
    ecs1 = [[com(sp, 2, ents[0][0]), com(sp, 5, ents[0][1])]]
    pr1, c1 = zkmm_prove(sp, [[2, 5]], ecs1, [ents[0]], x, c_x, r_x, r_out, Transcript("m"), rng)
    assert pr1.S is None and c1 == com(sp, 7, r_out)
    assert zkmm_verify(sp, ecs1, c_x, c1, pr1, Transcript("m"))
    with pytest.raises(DimensionError):
        zkmm_prove(sp, [[1, 2, 3]], ecs1, [ents[0]], x, c_x, r_x, r_out, Transcript("m"), rng)


def _eq_instance(sp, rng):
    x = [rng.randrange(16) for _ in range(3)]
    r_x = P.sample(rng)
    mats = [[[1, 0, 2], [0, 1, 1]], [[3, 1, 0]]]
    stmts = []
    for A in mats:
        r = P.sample(rng)
        y = [sum(a * v for a, v in zip(row, x)) for row in A]
        stmts.append((commit_out(sp, y, r), r, A))
    return x, r_x, commit_out(sp, x, r_x), stmts


def test_zkmmeq_roundtrip(sp):
    rng = random.Random(12)
    x, r_x, c_x, stmts = _eq_instance(sp, rng)
    pr = zkmmeq_prove(sp, stmts, x, c_x, r_x, Transcript("e"), rng)
    pub = [(c, A) for c, _, A in stmts]
    assert zkmmeq_verify(sp, pub, c_x, pr, Transcript("e"))
    bad = [(stmts[0][0] + sp.g, stmts[0][2])] + pub[1:]
    assert not zkmmeq_verify(sp, bad, c_x, pr, Transcript("e"))
    w = Writer(b"EQ")
    pr.write(w)
    assert ZkmmeqProof.read(Reader(w.done(), b"EQ")) == pr


def test_zkmmeq_extraction(sp):
    rng = random.Random(13)
    x, r_x, c_x, stmts = _eq_instance(sp, rng)
    pub = [(c, A) for c, _, A in stmts]
    p = ZkmmeqProver(sp, stmts, x, r_x, rng)
    t_x, ts = p.first()
    e1, e2 = P.sample(rng), P.sample(rng)
    t1, t2 = (e1, *p.respond(e1)), (e2, *p.respond(e2))
    assert check(sp, pub, c_x, t_x, ts, *t1) and check(sp, pub, c_x, t_x, ts, *t2)
    xx, rr, rs = extract(t1, t2)
    assert xx == x and rr == r_x and rs == [r for _, r, _ in stmts]
    with pytest.raises(ValueError):
        extract(t1, t1)


def test_params_serialization_guard():
    sp = P.setup(2, 2, M=7, rng=random.Random(1), insecure=True)
    data = sp.to_bytes()
    with pytest.raises(ValueError):
        P.SymParams.from_bytes(data)
    back = P.SymParams.from_bytes(data, allow_insecure=True)
    assert back.digest() == sp.digest()
    secure = P.setup(2, 2, M=7)
    assert secure.trapdoor is None
    assert P.SymParams.from_bytes(secure.to_bytes()).digest() == secure.digest()
