"""Command-line entry point: check, cert, setup, prove, verify, bench.

Exit codes: 0 accept / valid, 1 reject / invalid certificate, 2 usage or
malformed input.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import kzg
from . import protocol_explicit as pe
from . import protocol_symbolic as ps
from .crypto.encoding import DEFAULT_M
from .crypto.wire import WireError
from .explicit import plaintext_disjointness
from .lang import ParseError, parse, parse_explicit, parse_public, print_explicit, print_public
from .lp import BoundExceeded, NoWitness, farkas_witness
from .model import ExplicitSystem, check_ranking_explicit, check_wellformedness
from .obligations import count, generate
from .sigma.params import SymParams, default_rng

OK, REJECT, USAGE = 0, 1, 2
PUBLIC_FORMAT = "zkgc-public"


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _load_unit(path: str, M: int):
    return parse(_read(path), M)


def _out(msg: str) -> None:
    print(msg, flush=True)


# ---------------------------------------------------------------- public certificates

def public_cert_text(unit) -> str:
    sys_, spec, rk = unit.triple()
    if isinstance(sys_, ExplicitSystem):
        return print_explicit(sys_, spec, rk, public_only=True)
    shape = ps.PublicShape.of(sys_)
    doc = {"format": PUBLIC_FORMAT, "version": 1, "shape": shape.to_json(),
           "certificate": print_public(spec, rk, list(shape.names))}
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def load_public(text: str, M: int):
    """('explicit', PublicCert) or ('symbolic', (shape, spec, rk))."""
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"public certificate is not JSON: {e}") from None
    if not isinstance(d, dict):
        raise UsageError("public certificate must be a JSON object")
    if d.get("format") == "zkx":
        u = parse_explicit(text, public_only=True)
        sys_, spec, rk = u.triple()
        return "explicit", pe.PublicCert(sys_.size, sys_.labels, spec, rk)
    if d.get("format") == PUBLIC_FORMAT:
        shape = ps.PublicShape.from_json(d["shape"])
        from .model import Var
        spec, rk = parse_public(d["certificate"], [Var(n, 0, 0) for n in shape.names], M)
        return "symbolic", (shape, spec, rk)
    raise UsageError("unknown public certificate format")


def _scheme_of(unit) -> str:
    return "explicit" if isinstance(unit.system, ExplicitSystem) else "symbolic"


def _want_scheme(args, actual: str) -> None:
    if args.scheme and args.scheme != actual:
        raise UsageError(f"input is a {actual} model but --scheme {args.scheme} was given")


# ---------------------------------------------------------------- commands

def cmd_check(args) -> int:
    unit = _load_unit(args.unit, args.bound)
    _want_scheme(args, _scheme_of(unit))
    sys_, spec, rk = unit.triple()
    if isinstance(sys_, ExplicitSystem):
        rep = check_ranking_explicit(sys_, spec, rk)
        for line in rep.lines():
            _out(f"ranking: {line}")
        disjoint = plaintext_disjointness(sys_, pe.PublicCert.of(sys_, spec, rk).batches())
        _out(f"batches: {'disjoint' if disjoint else 'system meets a batch'}")
        return OK if rep.ok and disjoint else REJECT
    wf = check_wellformedness(rk, spec)
    for line in wf.lines():
        _out(f"well-formedness: {line}")
    total, kinds = count(spec, rk, sys_)
    _out(f"obligations: {total} " + json.dumps(kinds, sort_keys=True))
    bad = 0
    for i, ob in enumerate(generate(sys_, spec, rk)):
        try:
            farkas_witness(ob, args.bound)
        except NoWitness as e:
            bad += 1
            _out(f"obligation {i} ({ob.kind}, command {ob.command}): satisfiable at {e.point}")
        except BoundExceeded:
            bad += 1
            _out(f"obligation {i} ({ob.kind}): witness exceeds M = {args.bound}")
    _out(f"discharged: {total - bad}/{total}")
    return OK if wf.ok and not bad else REJECT


def cmd_cert(args) -> int:
    unit = _load_unit(args.unit, args.bound)
    text = public_cert_text(unit)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return OK


def _rng(args):
    if args.seed is not None and not args.insecure_setup:
        raise UsageError("--seed is a test-mode option and requires --insecure-setup")
    return default_rng(args.seed)


def _setup_for(kind, pub, args):
    rng = _rng(args)
    if kind == "explicit":
        t, t2 = pe.required_degree(pub.nstates, pub.batches())
        return kzg.setup(t, t2, rng=rng, insecure=args.insecure_setup)
    shape, spec, rk = pub
    return ps.setup(shape, ps.public_obligations(shape, spec, rk), args.bound, rng=rng, insecure=args.insecure_setup)


def cmd_setup(args) -> int:
    kind, pub = load_public(_read(args.public), args.bound)
    _want_scheme(args, kind)
    params = _setup_for(kind, pub, args)
    Path(args.output).write_bytes(params.to_bytes())
    _out(f"{kind} parameters written to {args.output}" + (" (INSECURE: trapdoor retained)" if args.insecure_setup else ""))
    return OK


def _load_params(kind: str, path: str, args):
    data = Path(path).read_bytes()
    try:
        if kind == "explicit":
            return kzg.SRS.from_bytes(data, allow_insecure=args.insecure_setup)
        return SymParams.from_bytes(data, allow_insecure=args.insecure_setup)
    except (kzg.SetupError, ValueError) as e:
        raise UsageError(f"parameters: {e}") from None


def cmd_prove(args) -> int:
    unit = _load_unit(args.unit, args.bound)
    kind = _scheme_of(unit)
    _want_scheme(args, kind)
    params = _load_params(kind, args.params, args)
    sys_, spec, rk = unit.triple()
    if kind == "explicit":
        try:
            bundle = pe.prove(sys_, spec, rk, params, _rng(args))
        except pe.CertificateInvalid as e:
            _out(f"prove: {e}")
            return REJECT
        Path(args.output).write_bytes(bundle.to_bytes())
    else:
        if params.M != args.bound:
            raise UsageError(f"parameters were made for M = {params.M}, not {args.bound}")
        _rng(args)
        try:
            rep = ps.prove_all(params, sys_, spec, rk, seed=args.seed, batch=args.batch, threads=args.threads)
        except (NoWitness, BoundExceeded, ps.WitnessInvalid) as e:
            _out(f"prove: certificate does not discharge every obligation ({e})")
            return REJECT
        Path(args.output).write_bytes(rep.bundle.to_bytes())
    _out(f"{kind} proof written to {args.output}")
    return OK


def cmd_verify(args) -> int:
    kind, pub = load_public(_read(args.public), args.bound)
    _want_scheme(args, kind)
    params = _load_params(kind, args.params, args)
    data = Path(args.bundle).read_bytes()
    try:
        if kind == "explicit":
            v = pe.verify(pe.ExplicitProofBundle.from_bytes(data), pub, params)
            _out("accept" if v.ok else f"reject: {v.reason}")
            return OK if v.ok else REJECT
        shape, spec, rk = pub
        rep = ps.verify_all(params, ps.SymbolicBundle.from_bytes(data), shape, spec, rk, batch=args.batch)
    except WireError as e:
        _out(f"reject: malformed bundle ({e})")
        return REJECT
    if rep.ok:
        _out(f"accept: {rep.count} obligations")
        return OK
    for i, chk in rep.failures[:20]:
        _out(f"reject: obligation {i} failed {chk}" if i >= 0 else f"reject: {chk} mismatch")
    return REJECT


# ---------------------------------------------------------------- bench

def _builtin(name: str, M: int):
    from . import benchmarks as bm
    if name == "handshake":
        return bm.handshake_symbolic(M)
    if name == "handshake_small":
        return bm.handshake_small()
    if name.startswith("exb_i") and "a" in name[5:]:
        d, a = name[5:].split("a")
        return bm.exb(int(d), int(a))
    raise UsageError(f"unknown built-in model {name!r}")


def bench_row(name: str, triple, M: int, seed, batch: int = ps.DEFAULT_BATCH, threads: int = 1) -> dict:
    sys_, spec, rk = triple
    rng = default_rng(seed)
    row = {"model": name}
    t0 = time.perf_counter()
    if isinstance(sys_, ExplicitSystem):
        cert = pe.PublicCert.of(sys_, spec, rk)
        b = cert.batches()
        t1 = time.perf_counter()
        t, t2 = pe.required_degree(sys_.size, b)
        srs = kzg.setup(t, t2, rng=rng, insecure=seed is not None)
        t2_ = time.perf_counter()
        bundle = pe.prove(sys_, spec, rk, srs, rng)
        t3 = time.perf_counter()
        ok = bool(pe.verify(bundle, cert, srs))
        t4 = time.perf_counter()
        row.update(scheme="explicit", states=sys_.size, sum_E=b.total)
    else:
        obs = generate(sys_, spec, rk)
        wits = [farkas_witness(ob, M) for ob in obs]
        t1 = time.perf_counter()
        shape = ps.PublicShape.of(sys_)
        sp = ps.setup(shape, ps.public_obligations(shape, spec, rk), M, rng=rng, insecure=seed is not None)
        t2_ = time.perf_counter()
        rep = ps.prove_all(sp, sys_, spec, rk, seed=seed, batch=batch, threads=threads, witnesses=wits)
        t3 = time.perf_counter()
        ok = bool(ps.verify_all(sp, rep.bundle, shape, spec, rk, batch=batch))
        t4 = time.perf_counter()
        row.update(scheme="symbolic", obligations=len(obs), count=count(spec, rk, sys_)[0])
    row.update(enum=round(t1 - t0, 4), setup=round(t2_ - t1, 4), prover=round(t3 - t2_, 4),
               verifier=round(t4 - t3, 4), ok=ok)
    return row


def cmd_bench(args) -> int:
    _rng(args)
    status = OK
    for name in args.models:
        if Path(name).exists():
            triple = _load_unit(name, args.bound).triple()
        else:
            triple = _builtin(name, args.bound)
        start = time.perf_counter()
        row = bench_row(name, triple, args.bound, args.seed, args.batch, args.threads)
        if args.budget and time.perf_counter() - start > args.budget:
            row["timeout"] = True
            status = REJECT
        if not row["ok"]:
            status = REJECT
        _out(json.dumps(row, sort_keys=True))
    return status


# ---------------------------------------------------------------- wiring

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zkmc", description="Zero-knowledge model checking with ranking certificates.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scheme", choices=("explicit", "symbolic"))
    common.add_argument("--bound", "-M", type=int, default=DEFAULT_M, help="witness bound M (default 2^32)")
    common.add_argument("--batch", type=int, default=ps.DEFAULT_BATCH, help="obligations per batch")
    common.add_argument("--threads", type=int, default=1, help="worker processes for proving")
    common.add_argument("--insecure-setup", action="store_true", help="test mode: keep trapdoors, allow seeds")
    common.add_argument("--seed", type=int, help="deterministic randomness (test mode only)")
    sub = p.add_subparsers(dest="cmd", required=True)
    c = sub.add_parser("check", parents=[common], help="plaintext certificate check")
    c.add_argument("unit")
    c = sub.add_parser("cert", parents=[common], help="export the public certificate")
    c.add_argument("unit")
    c.add_argument("-o", "--output")
    c = sub.add_parser("setup", parents=[common], help="generate public parameters")
    c.add_argument("public")
    c.add_argument("-o", "--output", required=True)
    c = sub.add_parser("prove", parents=[common], help="produce a proof bundle")
    c.add_argument("unit")
    c.add_argument("--params", required=True)
    c.add_argument("-o", "--output", required=True)
    c = sub.add_parser("verify", parents=[common], help="verify a bundle against public inputs only")
    c.add_argument("public")
    c.add_argument("--params", required=True)
    c.add_argument("--bundle", required=True)
    c = sub.add_parser("bench", parents=[common], help="time the pipeline; JSON lines")
    c.add_argument("models", nargs="+", help="unit files or built-in names (handshake, handshake_small, exb_i1a2, ...)")
    c.add_argument("--budget", type=float, default=0, help="seconds per model; 0 disables")
    return p


HANDLERS = {"check": cmd_check, "cert": cmd_cert, "setup": cmd_setup, "prove": cmd_prove,
            "verify": cmd_verify, "bench": cmd_bench}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    try:
        return HANDLERS[args.cmd](args)
    except ParseError as e:
        for d in e.diagnostics:
            print(f"{getattr(args, 'unit', '')}:{d}", file=sys.stderr)
        return USAGE
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
