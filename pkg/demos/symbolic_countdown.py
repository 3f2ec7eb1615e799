"""Zero-knowledge proof of a piecewise-linear ranking for a small counter program.

The program counts x down to zero. The automaton accepts runs where x >= 1
forever, so an accepted proof means no such run exists. Only the shape of the
program (variable names and row counts) and the ranking are public.
"""
import random
import time

from zkmc import protocol_symbolic as ps
from zkmc.lang import parse
from zkmc.lp import farkas_witness
from zkmc.obligations import count, generate

TEXT = """system {
  var x : 0..3;
  var y : 0..1;
  init: x = 3, y = 0;
  command dec: guard x >= 1 update x' = x - 1;
  command stop: guard x <= 0 update x' = x, y' = 1;
}
automaton {
  states: q0, q1;
  initial: q0;
  aps:
    p := x >= 1;
  trans:
    q0 -- true --> q0;
    q0 -- {p} --> q1;
    q1 -- {p} --> q1 fair;
}
ranking {
  at q0:
    case x >= 0 -> x + 1;
    case x <= -1 -> 0;
  at q1:
    case x >= 1 -> x;
    case x <= 0 -> 0;
}
"""
M = 255

sys_, spec, rk = parse(TEXT, M).triple()
obs = generate(sys_, spec, rk)
total, kinds = count(spec, rk, sys_)
print(f"{total} obligations: {kinds}")
for ob in obs[:3]:
    w = farkas_witness(ob, M)
    print(f"  {ob.kind:10s} command {ob.command:2d}: lambda={w.lam} mu={w.mu} slack={w.slack}")

shape = ps.PublicShape.of(sys_)
sp = ps.setup(shape, ps.public_obligations(shape, spec, rk), M, rng=random.Random(1), insecure=True)
t0 = time.perf_counter()
rep = ps.prove_all(sp, sys_, spec, rk, seed=7)
data = rep.bundle.to_bytes()
print(f"bundle: {len(data)} bytes in {time.perf_counter() - t0:.1f}s")

v = ps.verify_all(sp, ps.SymbolicBundle.from_bytes(data), shape, spec, rk)
print(f"verifier: {'accept' if v.ok else 'reject'} ({v.count} obligations)")

# the same bundle does not certify a different ranking
other = TEXT.replace("case x >= 1 -> x;", "case x >= 1 -> 2*x;")
_, spec2, rk2 = parse(other, M).triple()
print("against another ranking:", ps.verify_all(sp, rep.bundle, shape, spec2, rk2).failures[0])
