import random

import pytest
from helpers import random_explicit, random_ranking

from zkmc import kzg
from zkmc import protocol_explicit as pe
from zkmc.benchmarks import exb, handshake_explicit
from zkmc.crypto import field as F
from zkmc.crypto.field import R
from zkmc.explicit import (DomainOverflow, batches_for, build_embedding, build_membership_polys, indicator_poly,
                           plaintext_disjointness)
from zkmc.model import check_ranking_explicit

# (d, a) -> (|S|, sum of batch sizes); frozen from the enumeration
EXB_TABLE = {(1, 2): (32, 104), (1, 3): (96, 888), (2, 3): (192, 3504), (1, 4): (256, 6208)}


@pytest.mark.parametrize("da", sorted(EXB_TABLE))
def test_exb_table(da):
    sys_, spec, V = exb(*da)
    b = batches_for(sys_, spec, V)
    assert (sys_.size, b.total) == EXB_TABLE[da]
    d, a = da
    W = a * d * 2 ** a
    assert b.total == 3 * W * W // 2 + W


def test_embedding_is_injective_and_disjoint():
    emb = build_embedding(5)
    assert (emb.D1.size, emb.D2.size) == (8, 32)
    e1 = {emb.e1(s) for s in range(5)}
    e2 = {emb.e2(s, t) for s in range(5) for t in range(5)}
    assert len(e1) == 5 and len(e2) == 25
    assert all(F.evaluate(emb.D1.vanishing(), x) == 0 for x in e1)
    assert all(F.evaluate(emb.D2.vanishing(), x) == 0 for x in e2)
    with pytest.raises(DomainOverflow):
        build_embedding(1 << 17)


def test_indicator_poly_values():
    emb = build_embedding(6)
    p = indicator_poly(emb.D1, [1, 4])
    assert [F.evaluate(p, emb.e1(s)) for s in range(6)] == [0, 1, 0, 0, 1, 0]


def test_hiding_keeps_domain_values():
    emb = build_embedding(4)
    p = indicator_poly(emb.D2, [3])
    ph = kzg.hide(p, emb.D2, 12345)
    assert all(F.evaluate(ph, x) == F.evaluate(p, x) for x in emb.D2.points())
    assert F.degree(ph) == emb.D2.size


def test_kzg_vanishing_roundtrip(srs64):
    emb = build_embedding(4)
    p = indicator_poly(emb.D2, [0, 5])
    E = [emb.D2.point(i) for i in (1, 2, 9)]
    r = 77
    c = kzg.commit_hiding(srs64, p, emb.D2, r)
    pi = kzg.prove_vanishing(srs64, p, r, emb.D2, E)
    assert kzg.verify_vanishing(srs64, c, E, pi)
    assert not kzg.verify_vanishing(srs64, c, E + [emb.D2.point(3)], pi)
    with pytest.raises(kzg.NonZeroRemainder):
        kzg.prove_vanishing(srs64, p, r, emb.D2, [emb.D2.point(5)])


def test_srs_serialization_and_release_guard(srs64):
    small = kzg.setup(8, 4, rng=random.Random(1), insecure=True)
    data = small.to_bytes()
    with pytest.raises(kzg.SetupError):
        kzg.SRS.from_bytes(data)
    back = kzg.SRS.from_bytes(data, allow_insecure=True)
    assert back.g1s == small.g1s and back.g2s == small.g2s and back.check()
    secure = kzg.setup(8, 4)
    assert secure.tau is None and kzg.SRS.from_bytes(secure.to_bytes()).check()


def test_explicit_prove_verify_exb(srs64):
    sys_, spec, V = exb(1, 2)
    bundle = pe.prove(sys_, spec, V, srs64, random.Random(5))
    cert = pe.PublicCert.of(sys_, spec, V)
    assert pe.verify(bundle, cert, srs64).ok
    back = pe.ExplicitProofBundle.from_bytes(bundle.to_bytes())
    assert pe.verify(back, cert, srs64).ok


def test_explicit_rejects_wrong_cert_and_invalid_ranking(srs64):
    sys_, spec, V = exb(1, 2)
    bundle = pe.prove(sys_, spec, V, srs64, random.Random(5))
    other = exb(1, 2)[2]
    rows = [list(r) for r in other.values]
    rows[0][1] = 0 if rows[0][1] else 1
    from zkmc.model import ExplicitRanking
    changed = ExplicitRanking(other.qnames, tuple(map(tuple, rows)))
    v = pe.verify(bundle, pe.PublicCert(sys_.size, sys_.labels, spec, changed), srs64)
    assert not v.ok and v.reason.startswith("digest")
    bad = ExplicitRanking.constant(sys_.size, spec.states, 0)
    with pytest.raises(pe.CertificateInvalid):
        pe.prove(sys_, spec, bad, srs64, random.Random(5))


def test_handshake_explicit_model():
    sys_, spec, V = handshake_explicit()
    assert sys_.size == 4096
    assert check_ranking_explicit(sys_, spec, V).ok


def test_membership_polys_match_system():
    rng = random.Random(3)
    sys_, spec = random_explicit(rng, 12)
    emb = build_embedding(sys_.size)
    P = build_membership_polys(sys_, emb, rng)
    n = sys_.size
    for s in range(n):
        assert F.evaluate(P.p_S0, emb.e1(s)) == (1 if s in sys_.init else 0)
        for t in range(n):
            assert F.evaluate(P.p_T, emb.e2(s, t)) == (1 if (s, t) in sys_.transitions else 0)
    assert 0 <= P.r_S0 < R


def test_disjointness_matches_check_small():
    rng = random.Random(11)
    for _ in range(50):
        sys_, spec = random_explicit(rng, 10)
        V = random_ranking(rng, sys_, spec)
        assert plaintext_disjointness(sys_, batches_for(sys_, spec, V)) == check_ranking_explicit(sys_, spec, V).ok
