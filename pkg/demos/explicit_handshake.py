"""A prover convinces a verifier that a 32-state handshake never waits forever.

The verifier sees the property automaton, the ranking and the state labels.
It never sees which states are initial or which transitions exist.
"""
import random
import time

from zkmc import kzg
from zkmc import protocol_explicit as pe
from zkmc.benchmarks import handshake_small
from zkmc.crypto import group as grp
from zkmc.model import check_ranking_explicit

sys_, spec, V = handshake_small()
print(f"model: {sys_.size} states, {len(sys_.transitions)} transitions (private)")
print("plaintext check of the ranking:", "valid" if check_ranking_explicit(sys_, spec, V).ok else "INVALID")

cert = pe.PublicCert.of(sys_, spec, V)
b = cert.batches()
print(f"public batches: |E_init| = {len(b.E_init)}, total points = {b.total}")

t, t2 = pe.required_degree(sys_.size, b)
srs = kzg.setup(t, t2, rng=random.Random(1), insecure=True)  # demo only: the trapdoor is kept

t0 = time.perf_counter()
bundle = pe.prove(sys_, spec, V, srs, random.Random(2))
print(f"proof: {len(bundle.to_bytes())} bytes in {time.perf_counter() - t0:.2f}s")
print("verifier:", pe.verify(bundle, cert, srs).reason)

# a prover who alters one commitment is caught
forged = pe.ExplicitProofBundle(bundle.digest, bundle.c_S0, bundle.c_T + grp.g1(), bundle.pi_S0, bundle.pi_T)
print("tampered transition commitment:", pe.verify(forged, cert, srs).reason)
