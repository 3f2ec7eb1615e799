"""Explicit-state scheme: commit to (S0, T) and prove they avoid the public batches."""
from __future__ import annotations

import json
from dataclasses import dataclass

from . import kzg
from .crypto import group as grp
from .crypto.wire import Reader, Writer
from .explicit import (BatchSets, Embedding, build_embedding, build_membership_polys, enumerate_batches,
                       plaintext_disjointness)
from .lang import _automaton_json, _ranking_json
from .model import BuchiSpec, ExplicitRanking, ExplicitSystem

MAGIC = b"ZKEP"


class CertificateInvalid(ValueError):
    """The ranking does not certify the system: it meets a batch."""


@dataclass(frozen=True)
class PublicCert:
    """Everything the verifier is allowed to see."""
    nstates: int
    labels: tuple
    spec: BuchiSpec
    ranking: ExplicitRanking

    @classmethod
    def of(cls, sys: ExplicitSystem, spec: BuchiSpec, V: ExplicitRanking) -> "PublicCert":
        return cls(sys.size, sys.labels, spec, V)

    def embedding(self) -> Embedding:
        return build_embedding(self.nstates)

    def batches(self) -> BatchSets:
        return enumerate_batches(self.nstates, self.labels, self.spec, self.ranking, self.embedding())

    def digest(self) -> bytes:
        doc = {"n": self.nstates, "aps": list(self.spec.aps), "labels": [sorted(l) for l in self.labels],
               "automaton": _automaton_json(self.spec), "ranking": _ranking_json(self.ranking)}
        return grp.digest(b"zkep-cert", json.dumps(doc, sort_keys=True).encode(), self.embedding().params())


@dataclass(frozen=True)
class ExplicitProofBundle:
    digest: bytes
    c_S0: object
    c_T: object
    pi_S0: object
    pi_T: object

    FIELDS = ("c_S0", "c_T", "pi_S0", "pi_T")

    def to_bytes(self) -> bytes:
        w = Writer(MAGIC).raw(self.digest)
        for f in self.FIELDS:
            w.g1(getattr(self, f))
        return w.done()

    @classmethod
    def from_bytes(cls, data: bytes) -> "ExplicitProofBundle":
        r = Reader(data, MAGIC)
        d = r._take(32)
        pts = [r.g1() for _ in cls.FIELDS]
        r.end()
        return cls(d, *pts)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str = "accept"

    def __bool__(self):
        return self.ok


def required_degree(nstates: int, batches: BatchSets | None = None) -> tuple[int, int]:
    emb = build_embedding(nstates)
    t2 = max(len(batches.trans_points()), len(batches.E_init)) if batches else emb.D2.size
    return emb.D2.size, max(1, t2)


def prove(sys: ExplicitSystem, spec: BuchiSpec, V: ExplicitRanking, srs: kzg.SRS, rng) -> ExplicitProofBundle:
    cert = PublicCert.of(sys, spec, V)
    emb = cert.embedding()
    b = cert.batches()
    if not plaintext_disjointness(sys, b):
        raise CertificateInvalid("the system meets a batch: the ranking is not a certificate")
    if srs.t < emb.D2.size:
        raise kzg.DegreeOverflow(f"SRS degree {srs.t} below pair domain size {emb.D2.size}")
    P = build_membership_polys(sys, emb, rng)
    c0 = kzg.commit_hiding(srs, P.p_S0, emb.D1, P.r_S0)
    cT = kzg.commit_hiding(srs, P.p_T, emb.D2, P.r_T)
    p0 = kzg.prove_vanishing(srs, P.p_S0, P.r_S0, emb.D1, b.E_init)
    pT = kzg.prove_vanishing(srs, P.p_T, P.r_T, emb.D2, b.trans_points())
    return ExplicitProofBundle(cert.digest(), c0, cT, p0, pT)


def verify(bundle: ExplicitProofBundle, cert: PublicCert, srs: kzg.SRS) -> Verdict:
    if bundle.digest != cert.digest():
        return Verdict(False, "digest: bundle was produced for a different certificate")
    b = cert.batches()
    if not kzg.verify_vanishing(srs, bundle.c_S0, b.E_init, bundle.pi_S0):
        return Verdict(False, "init: initial-state commitment does not vanish on E_init")
    if not kzg.verify_vanishing(srs, bundle.c_T, b.trans_points(), bundle.pi_T):
        return Verdict(False, "trans: transition commitment does not vanish on E_step and E_fair")
    return Verdict(True)
