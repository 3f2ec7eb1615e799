"""Symbolic scheme: one zero-knowledge Farkas argument per proof obligation.

For an obligation with secret rows (A_s, b_s) and public rows (G_p, h_p) the
prover shows knowledge of lam, mu in [0, M] with A_s^T lam + G_p^T mu = 0 and
delta = -b_s^T lam - h_p^T mu - 1 in [0, M], without revealing A_s or b_s.
Commitments to A_s^T and -b_s^T, and their range proofs, are made once per
command and shared by every obligation of that command.
"""
from __future__ import annotations

import hashlib
import json
import random
import secrets
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from .crypto import group as grp
from .crypto.field import R
from .crypto.pedersen import DimensionError, commit_matrix
from .crypto.transcript import Transcript
from .crypto.wire import Reader, Writer
from .lp import FarkasWitness, farkas_witness
from .model import BuchiSpec, Command, LinSys, PiecewiseRanking, SymbolicSystem, Var
from .obligations import Obligation, generate
from .sigma.params import SymParams, sample, setup as sym_setup
from .sigma.rangeproof import RangeError
from .sigma.zkmm import ZkmmProof, commit_out, zkmm_prove, zkmm_verify
from .sigma.zkmmeq import ZkmmeqProof, zkmmeq_prove, zkmmeq_verify
from .sigma.zkrp import (ZkrpProof, flatten, lift, matrix_positions, shift_commitment, vector_positions,
                         zkrp_prove, zkrp_verify)

MAGIC = b"ZKSB"
DEFAULT_BATCH = 200
INIT = -1  # command index of the initial condition

CHECKS = ("pi_lam", "pi_mu", "pi_A", "pi_b", "pi_alpha", "pi_beta", "pi_delta", "pi_eta")
COMPONENTS = ("c_lam", "c_mu", "c_alpha", "c_beta", "c_gamma") + CHECKS


class WitnessInvalid(ValueError):
    pass


# ---------------------------------------------------------------- public shape

@dataclass(frozen=True)
class PublicShape:
    """What the verifier knows about the hidden system: names and row counts."""
    names: tuple
    init_rows: int
    command_rows: tuple

    @classmethod
    def of(cls, sys: SymbolicSystem) -> "PublicShape":
        return cls(tuple(v.name for v in sys.vars), len(sys.init), tuple(len(c.rel) for c in sys.commands))

    @property
    def nvars(self) -> int:
        return len(self.names)

    def rows(self, command: int) -> int:
        return self.init_rows if command == INIT else self.command_rows[command]

    def placeholder(self) -> SymbolicSystem:
        """A system with this shape and no constraints, for public obligation generation."""
        n = self.nvars
        vars_ = tuple(Var(v, 0, 0) for v in self.names)
        return SymbolicSystem(vars_, LinSys.empty(n), tuple(Command(f"c{i}", LinSys.empty(2 * n))
                                                            for i in range(len(self.command_rows))))

    def to_json(self) -> dict:
        return {"vars": list(self.names), "init_rows": self.init_rows, "command_rows": list(self.command_rows)}

    @classmethod
    def from_json(cls, d: dict) -> "PublicShape":
        return cls(tuple(d["vars"]), int(d["init_rows"]), tuple(int(x) for x in d["command_rows"]))


@dataclass(frozen=True)
class PublicObligation:
    index: int
    kind: str
    command: int
    G_p: tuple
    h_p: tuple
    width: int
    key: bytes

    @classmethod
    def of(cls, i: int, ob: Obligation) -> "PublicObligation":
        return cls(i, ob.kind, ob.command, tuple(ob.G_p), tuple(ob.h_p), ob.width, ob.public_key())


def public_obligations(shape: PublicShape, spec: BuchiSpec, rk: PiecewiseRanking) -> list[PublicObligation]:
    return [PublicObligation.of(i, ob) for i, ob in enumerate(generate(shape.placeholder(), spec, rk))]


def model_digest(shape: PublicShape, spec: BuchiSpec, rk: PiecewiseRanking) -> bytes:
    from .lang import print_public
    doc = json.dumps(shape.to_json(), sort_keys=True).encode()
    return grp.digest(b"zksp-model", doc, print_public(spec, rk, list(shape.names)).encode())


def dims_for(shape: PublicShape, pubs: Sequence[PublicObligation]) -> tuple[int, int]:
    """(m_bar, n_bar) covering every matrix and vector in the obligation set."""
    width = 2 * shape.nvars
    rows = [shape.init_rows, *shape.command_rows] + [len(p.G_p) for p in pubs]
    n_bar = max(rows + [1])
    # vectors of length width also need bases: m_bar * n_bar >= width holds since m_bar = width
    return max(width, 1), n_bar


def setup(shape: PublicShape, pubs, M: int, rng=None, insecure: bool = False) -> SymParams:
    m_bar, n_bar = dims_for(shape, pubs)
    return sym_setup(m_bar, n_bar, M, rng=rng, insecure=insecure)


# ---------------------------------------------------------------- commitments per command

@dataclass(frozen=True)
class CommandCommitment:
    c_A: object          # GT, two-tier commitment to A_s^T
    c_b: object          # G1, vector commitment to -b_s^T
    pi_A: ZkrpProof
    pi_b: ZkrpProof
    rows: int            # secret row count (columns of A_s^T)
    width: int


@dataclass
class CommandSecret:
    AT: list             # A_s^T as a list of rows
    negb: list
    r_A: int
    r_b: int
    ent_A: list          # per-entry randomness of pi_A, as a width x rows grid
    ent_b: list


@dataclass
class SystemCommitment:
    public: dict                       # command index -> CommandCommitment
    secret: dict = field(default_factory=dict)  # prover side only

    def public_only(self) -> "SystemCommitment":
        return SystemCommitment(dict(self.public))


def _rel(sys: SymbolicSystem, command: int) -> LinSys:
    return sys.init.pad(0, sys.nvars) if command == INIT else sys.commands[command].rel


def _command_transcript(digest: bytes, sp: SymParams, command: int, c_A, c_b) -> Transcript:
    tr = Transcript("zksp-command")
    tr.append("model", digest).append("params", sp.digest()).append_int("command", command)
    tr.append("c_A", c_A.serialize()).append_point("c_b", c_b)
    return tr


def _grid(flat: Sequence, m: int, n: int) -> list:
    """Undo column-major flattening into an m x n grid."""
    return [[flat[j * m + i] for j in range(n)] for i in range(m)]


def _unshift(sp: SymParams, coms, M: int) -> list:
    Mg = grp.smul(sp.g, M)
    return [c - Mg for c in coms]


def commit_command(sp: SymParams, digest: bytes, rel: LinSys, command: int, rng) -> tuple[CommandCommitment, CommandSecret]:
    width, rows = rel.width, len(rel)
    AT = [[rel.A[j][i] for j in range(rows)] for i in range(width)]
    negb = [-v for v in rel.b]
    if max([abs(v) for r in AT for v in r] + [abs(v) for v in negb] + [0]) > sp.M:
        raise WitnessInvalid(f"system coefficient exceeds M = {sp.M}")
    r_A, r_b = sample(rng), sample(rng)
    c_A = commit_matrix(sp.pedersen(), AT, r_A).point
    c_b = commit_out(sp, negb, r_b)
    tr = _command_transcript(digest, sp, command, c_A, c_b)
    posA = matrix_positions(sp, width, rows)
    chat = c_A * lift(sp, shift_commitment(sp, posA, sp.M))
    pi_A, entA = zkrp_prove(sp, [v + sp.M for v in flatten(AT)], posA, chat, r_A, 2 * sp.M, tr, rng)
    posb = vector_positions(sp, rows)
    bhat = lift(sp, c_b + shift_commitment(sp, posb, sp.M))
    pi_b, entb = zkrp_prove(sp, [v + sp.M for v in negb], posb, bhat, r_b, 2 * sp.M, tr, rng)
    pub = CommandCommitment(c_A, c_b, pi_A, pi_b, rows, width)
    sec = CommandSecret(AT, negb, r_A, r_b, _grid(entA, width, rows), [entb])
    return pub, sec


def verify_command(sp: SymParams, digest: bytes, command: int, cc: CommandCommitment) -> Optional[str]:
    """Checks on the per-command range proofs; None when both pass."""
    try:
        posA = matrix_positions(sp, cc.width, cc.rows)
        posb = vector_positions(sp, cc.rows)
    except DimensionError:
        return "pi_A"
    tr = _command_transcript(digest, sp, command, cc.c_A, cc.c_b)
    chat = cc.c_A * lift(sp, shift_commitment(sp, posA, sp.M))
    if not zkrp_verify(sp, chat, posA, 2 * sp.M, cc.pi_A, tr):
        return "pi_A"
    bhat = lift(sp, cc.c_b + shift_commitment(sp, posb, sp.M))
    if not zkrp_verify(sp, bhat, posb, 2 * sp.M, cc.pi_b, tr):
        return "pi_b"
    return None


def commit_system(sp: SymParams, digest: bytes, sys: SymbolicSystem, commands: Sequence[int], rng) -> SystemCommitment:
    sc = SystemCommitment({})
    for i in sorted(set(commands)):
        sc.public[i], sc.secret[i] = commit_command(sp, digest, _rel(sys, i), i, rng)
    return sc


# ---------------------------------------------------------------- obligation proofs

@dataclass(frozen=True)
class ObligationProof:
    c_lam: object
    c_mu: object
    c_alpha: object
    c_beta: object
    c_gamma: object
    pi_lam: ZkrpProof
    pi_mu: ZkrpProof
    pi_A: ZkrpProof
    pi_b: ZkrpProof
    pi_alpha: ZkmmProof
    pi_beta: ZkmmProof
    pi_delta: ZkrpProof
    pi_eta: ZkmmeqProof

    def write(self, w: Writer) -> None:
        """Everything except pi_A and pi_b, which the bundle stores once per command."""
        for p in (self.c_lam, self.c_mu, self.c_alpha, self.c_beta, self.c_gamma):
            w.g1(p)
        for p in (self.pi_lam, self.pi_mu, self.pi_alpha, self.pi_beta, self.pi_delta, self.pi_eta):
            p.write(w)

    @classmethod
    def read(cls, r: Reader, cc: CommandCommitment) -> "ObligationProof":
        cs = [r.g1() for _ in range(5)]
        lam, mu = ZkrpProof.read(r), ZkrpProof.read(r)
        al, be = ZkmmProof.read(r), ZkmmProof.read(r)
        de, eta = ZkrpProof.read(r), ZkmmeqProof.read(r)
        return cls(*cs, lam, mu, cc.pi_A, cc.pi_b, al, be, de, eta)

    def to_bytes(self) -> bytes:
        w = Writer(b"ZKOP")
        self.write(w)
        return w.done()


def _ob_transcript(digest: bytes, sp: SymParams, pub: PublicObligation, cc: CommandCommitment) -> Transcript:
    tr = Transcript("zksp-obligation")
    tr.append("model", digest).append("params", sp.digest()).append_int("index", pub.index)
    tr.append("public", pub.key).append("c_A", cc.c_A.serialize()).append_point("c_b", cc.c_b)
    return tr


def _neg_T(G: Sequence[Sequence[int]], width: int) -> list:
    """-G^T as a list of rows (width x len(G))."""
    return [[-G[r][c] for r in range(len(G))] for c in range(width)]


def prove_obligation(sp: SymParams, digest: bytes, pub: PublicObligation, wit: FarkasWitness,
                     ob: Obligation, syscom: SystemCommitment, rng) -> ObligationProof:
    cc, sec = syscom.public[pub.command], syscom.secret[pub.command]
    if not wit.check(ob.A_s, ob.b_s, ob.G_p, ob.h_p, sp.M):
        raise WitnessInvalid("witness does not satisfy the obligation within [0, M]")
    lam, mu = list(wit.lam), list(wit.mu)
    if len(lam) != cc.rows or len(mu) != len(pub.G_p):
        raise DimensionError("witness length does not match the obligation")
    tr = _ob_transcript(digest, sp, pub, cc)
    r_lam, r_mu, r_alpha, r_beta, r_gamma = (sample(rng) for _ in range(5))
    c_lam = commit_out(sp, lam, r_lam)
    c_mu = commit_out(sp, mu, r_mu)
    try:
        pi_lam, _ = zkrp_prove(sp, lam, vector_positions(sp, len(lam)), lift(sp, c_lam), r_lam, sp.M, tr, rng)
        pi_mu, _ = zkrp_prove(sp, mu, vector_positions(sp, len(mu)), lift(sp, c_mu), r_mu, sp.M, tr, rng)
    except RangeError as e:
        raise WitnessInvalid(str(e)) from None
    entA = _grid(_unshift(sp, cc.pi_A.coms, sp.M), cc.width, cc.rows)
    pi_alpha, c_alpha = zkmm_prove(sp, sec.AT, entA, sec.ent_A, lam, c_lam, r_lam, r_alpha, tr, rng)
    entb = [_unshift(sp, cc.pi_b.coms, sp.M)]
    pi_beta, c_beta = zkmm_prove(sp, [sec.negb], entb, sec.ent_b, lam, c_lam, r_lam, r_beta, tr, rng)
    gamma = -sum(h * u for h, u in zip(pub.h_p, mu))
    c_gamma = commit_out(sp, [gamma], r_gamma)
    c_delta = c_beta + c_gamma - sp.g
    delta = wit.slack
    try:
        pi_delta, _ = zkrp_prove(sp, [delta], [0], lift(sp, c_delta), (r_beta + r_gamma) % R, sp.M, tr, rng)
    except RangeError as e:
        raise WitnessInvalid(str(e)) from None
    stmts = [(c_alpha, r_alpha, _neg_T(pub.G_p, pub.width)), (c_gamma, r_gamma, [[-h for h in pub.h_p]])]
    pi_eta = zkmmeq_prove(sp, stmts, mu, c_mu, r_mu, tr, rng)
    return ObligationProof(c_lam, c_mu, c_alpha, c_beta, c_gamma, pi_lam, pi_mu, cc.pi_A, cc.pi_b,
                           pi_alpha, pi_beta, pi_delta, pi_eta)


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    failed: Optional[str] = None

    def __bool__(self):
        return self.ok

    @property
    def index(self) -> Optional[int]:
        return None if self.failed is None else CHECKS.index(self.failed) + 1


def verify_obligation(sp: SymParams, digest: bytes, pub: PublicObligation, cc: CommandCommitment,
                      pi: ObligationProof, command_ok: Optional[bool] = None) -> CheckResult:
    """The eight checks in order; command_ok skips re-checking cached command proofs."""
    if pi.pi_A is not cc.pi_A or pi.pi_b is not cc.pi_b:
        # proofs carried with the obligation must be the command's
        if pi.pi_A != cc.pi_A:
            return CheckResult(False, "pi_A")
        if pi.pi_b != cc.pi_b:
            return CheckResult(False, "pi_b")
    if cc.width != pub.width:
        return CheckResult(False, "pi_A")
    try:
        tr = _ob_transcript(digest, sp, pub, cc)
        nl, nm = cc.rows, len(pub.G_p)
        if not zkrp_verify(sp, lift(sp, pi.c_lam), vector_positions(sp, nl), sp.M, pi.pi_lam, tr):
            return CheckResult(False, "pi_lam")
        if not zkrp_verify(sp, lift(sp, pi.c_mu), vector_positions(sp, nm), sp.M, pi.pi_mu, tr):
            return CheckResult(False, "pi_mu")
        if command_ok is None:
            bad = verify_command(sp, digest, pub.command, cc)
            if bad:
                return CheckResult(False, bad)
        elif not command_ok:
            return CheckResult(False, "pi_A")
        entA = _grid(_unshift(sp, cc.pi_A.coms, sp.M), cc.width, cc.rows)
        if not zkmm_verify(sp, entA, pi.c_lam, pi.c_alpha, pi.pi_alpha, tr):
            return CheckResult(False, "pi_alpha")
        if not zkmm_verify(sp, [_unshift(sp, cc.pi_b.coms, sp.M)], pi.c_lam, pi.c_beta, pi.pi_beta, tr):
            return CheckResult(False, "pi_beta")
        c_delta = pi.c_beta + pi.c_gamma - sp.g
        if not zkrp_verify(sp, lift(sp, c_delta), [0], sp.M, pi.pi_delta, tr):
            return CheckResult(False, "pi_delta")
        stmts = [(pi.c_alpha, _neg_T(pub.G_p, pub.width)), (pi.c_gamma, [[-h for h in pub.h_p]])]
        if not zkmmeq_verify(sp, stmts, pi.c_mu, pi.pi_eta, tr):
            return CheckResult(False, "pi_eta")
    except (DimensionError, ValueError, IndexError):
        return CheckResult(False, "malformed")
    return CheckResult(True)


# ---------------------------------------------------------------- whole sets

@dataclass
class SymbolicBundle:
    digest: bytes
    sp_digest: bytes
    commands: dict        # command index -> CommandCommitment
    proofs: list          # ObligationProof per obligation index
    ob_commands: list     # command index per obligation

    def to_bytes(self) -> bytes:
        w = Writer(MAGIC).raw(self.digest).raw(self.sp_digest)
        w.u32(len(self.commands))
        for i in sorted(self.commands):
            cc = self.commands[i]
            w.bigint(i).u32(cc.rows).u32(cc.width).gt(cc.c_A).g1(cc.c_b)
            cc.pi_A.write(w)
            cc.pi_b.write(w)
        w.u32(len(self.proofs))
        for cmd, p in zip(self.ob_commands, self.proofs):
            w.bigint(cmd)
            p.write(w)
        return w.done()

    @classmethod
    def from_bytes(cls, data: bytes) -> "SymbolicBundle":
        r = Reader(data, MAGIC)
        digest, spd = r._take(32), r._take(32)
        cmds = {}
        for _ in range(r.u32()):
            i = r.bigint()
            rows, width = r.u32(), r.u32()
            c_A, c_b = r.gt(), r.g1()
            cmds[i] = CommandCommitment(c_A, c_b, ZkrpProof.read(r), ZkrpProof.read(r), rows, width)
        proofs, obc = [], []
        for _ in range(r.u32()):
            i = r.bigint()
            if i not in cmds:
                from .crypto.wire import WireError
                raise WireError(f"obligation refers to unknown command {i}")
            obc.append(i)
            proofs.append(ObligationProof.read(r, cmds[i]))
        r.end()
        return cls(digest, spd, cmds, proofs, obc)


def obligation_rng(seed: Optional[int], index: int):
    """Per-obligation randomness; seeded runs derive it from (seed, index) only."""
    if seed is None:
        return secrets.SystemRandom()
    h = hashlib.sha256(b"zksp-rng" + seed.to_bytes(16, "little", signed=True) + index.to_bytes(8, "little", signed=True))
    return random.Random(int.from_bytes(h.digest(), "little"))


@dataclass
class ProveReport:
    bundle: SymbolicBundle
    witnesses: list


_WORK: dict = {}


def _prove_batch(idx: Sequence[int]) -> list[bytes]:
    w = _WORK
    out = []
    for i in idx:
        p = prove_obligation(w["sp"], w["digest"], w["pubs"][i], w["wits"][i], w["obs"][i], w["syscom"],
                             obligation_rng(w["seed"], i))
        wr = Writer(b"ZKOP")
        p.write(wr)
        out.append(wr.done())
    return out


def _batches(n: int, size: int) -> list[list[int]]:
    size = max(1, size)
    return [list(range(s, min(n, s + size))) for s in range(0, n, size)]


def prove_all(sp: SymParams, sys: SymbolicSystem, spec: BuchiSpec, rk: PiecewiseRanking, seed: Optional[int] = None,
              batch: int = DEFAULT_BATCH, threads: int = 1, witnesses=None) -> ProveReport:
    shape = PublicShape.of(sys)
    digest = model_digest(shape, spec, rk)
    obs = generate(sys, spec, rk)
    pubs = [PublicObligation.of(i, ob) for i, ob in enumerate(obs)]
    wits = witnesses if witnesses is not None else [farkas_witness(ob, sp.M) for ob in obs]
    syscom = commit_system(sp, digest, sys, [ob.command for ob in obs], obligation_rng(seed, -1))
    proofs: list = []
    _WORK.update(sp=sp, digest=digest, pubs=pubs, wits=wits, obs=obs, syscom=syscom, seed=seed)
    try:
        chunks = _batches(len(obs), batch)
        if threads > 1 and len(chunks) > 1:
            import multiprocessing as mp
            with ProcessPoolExecutor(max_workers=threads, mp_context=mp.get_context("fork")) as ex:
                results = list(ex.map(_prove_batch, chunks))
        else:
            results = [_prove_batch(c) for c in chunks]
    finally:
        _WORK.clear()
    for chunk, recs in zip(chunks, results):
        for i, rec in zip(chunk, recs):
            cc = syscom.public[obs[i].command]
            rd = Reader(rec, b"ZKOP")
            proofs.append(ObligationProof.read(rd, cc))
            rd.end()
    bundle = SymbolicBundle(digest, sp.digest(), dict(syscom.public), proofs, [ob.command for ob in obs])
    return ProveReport(bundle, wits)


@dataclass
class VerifyReport:
    ok: bool
    count: int
    failures: list  # (index, check)

    def __bool__(self):
        return self.ok


def verify_all(sp: SymParams, bundle: SymbolicBundle, shape: PublicShape, spec: BuchiSpec, rk: PiecewiseRanking,
               batch: int = DEFAULT_BATCH) -> VerifyReport:
    digest = model_digest(shape, spec, rk)
    pubs = public_obligations(shape, spec, rk)
    if bundle.digest != digest or bundle.sp_digest != sp.digest():
        return VerifyReport(False, len(pubs), [(-1, "digest")])
    if len(bundle.proofs) != len(pubs):
        return VerifyReport(False, len(pubs), [(-1, "count")])
    cmd_ok = {}
    for i, cc in bundle.commands.items():
        expect_rows = shape.rows(i) if (i == INIT or 0 <= i < len(shape.command_rows)) else -1
        cmd_ok[i] = cc.rows == expect_rows and verify_command(sp, digest, i, cc) is None
    failures = []
    for chunk in _batches(len(pubs), batch):
        for i in chunk:
            pub = pubs[i]
            cc = bundle.commands.get(pub.command)
            if cc is None or bundle.ob_commands[i] != pub.command:
                failures.append((i, "command"))
                continue
            res = verify_obligation(sp, digest, pub, cc, bundle.proofs[i], cmd_ok[pub.command])
            if not res:
                failures.append((i, res.failed))
    return VerifyReport(not failures, len(pubs), failures)
