"""Equation suites: tetrahedron, 3D reflection (types C and B) and the F4 relation.

An equation is data: two ordered factor lists written as operator products,
so the rightmost factor acts on the input state first.
"""

from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import product
from typing import NamedTuple, Sequence

from .kmat import comb_k, k_conserved, k_elem, k_elem_oracle, k_kernel, k_slice
from .qpoly import ONE, TruncPoly
from .qseries import qbinom, qfact
from .rmat import comb_r, r_conserved, r_elem, r_elem_oracle, r_slice
from .tensorop import (K_BASES, R_BASES, S_BASES, SlotError, SlotSignature, SparseVec,
                       apply_k, apply_r, check_r_recursions, ket)

__all__ = [
    "Factor",
    "EquationSpec",
    "VerifyReport",
    "TETRAHEDRON",
    "REFLECTION_C",
    "REFLECTION_B",
    "F4",
    "F4_STATE",
    "infer_signature",
    "evaluate_side",
    "verify_equation",
    "verify_tetrahedron",
    "verify_reflection_c",
    "verify_reflection_b",
    "verify_f4",
    "verify_suites",
    "SUITES",
    "SUITE_BOUNDS",
    "reports_to_csv",
    "FactorPool",
    "default_jobs",
]


class Factor(NamedTuple):
    op: str                 # "R", "S" or "K"
    slots: tuple[int, ...]

    @property
    def kind(self) -> str:
        if self.op == "K" and list(self.slots) == sorted(self.slots, reverse=True):
            return "K-reversed"
        return self.op

    @property
    def label(self) -> str:
        if max(self.slots) > 9:
            return f"{self.op}({','.join(map(str, self.slots))})"
        return self.op + "".join(map(str, self.slots))

    def bases(self) -> tuple[str, ...]:
        return {"R": R_BASES, "S": S_BASES, "K": K_BASES}[self.op]


def _factors(text: str) -> tuple[Factor, ...]:
    """Parse "R356 R246" or "S(14,15,16) K(16,10,8,7)"."""
    out = []
    for tok in text.split():
        op, rest = tok[0], tok[1:]
        if rest.startswith("("):
            slots = tuple(int(x) for x in rest.strip("()").split(","))
        else:
            slots = tuple(int(ch) for ch in rest)
        out.append(Factor(op, slots))
    return tuple(out)


def infer_signature(nslots: int, factors: Sequence[Factor]) -> SlotSignature:
    """The unique slot-base assignment compatible with every factor.

    Raises SlotError if two factors disagree on a slot or some slot is left
    unconstrained.
    """
    assigned: dict[int, tuple[str, Factor]] = {}
    for f in factors:
        for s, b in zip(f.slots, f.bases()):
            if not 1 <= s <= nslots:
                raise SlotError(f"{f.label}: slot {s} outside 1..{nslots}")
            prev = assigned.get(s)
            if prev is not None and prev[0] != b:
                raise SlotError(f"slot {s}: {prev[1].label} needs {prev[0]}, {f.label} needs {b}")
            assigned[s] = (b, f)
    free = [s for s in range(1, nslots + 1) if s not in assigned]
    if free:
        raise SlotError(f"slots {free} are not touched by any factor; base is not determined")
    return SlotSignature(assigned[s][0] for s in range(1, nslots + 1))


@dataclass(frozen=True)
class EquationSpec:
    name: str
    nslots: int
    lhs: tuple[Factor, ...]
    rhs: tuple[Factor, ...]
    signature: SlotSignature | None = None

    def __post_init__(self):
        inferred = infer_signature(self.nslots, self.lhs + self.rhs)
        if self.signature is not None and tuple(self.signature) != tuple(inferred):
            raise SlotError(f"{self.name}: declared signature {self.signature} != inferred {inferred}")
        object.__setattr__(self, "signature", inferred)

    @classmethod
    def reversed_pair(cls, name: str, nslots: int, lhs: str,
                      signature: SlotSignature | None = None) -> "EquationSpec":
        """Equation whose right side is the left product in reverse order."""
        left = _factors(lhs)
        return cls(name, nslots, left, left[::-1], signature)


TETRAHEDRON = EquationSpec.reversed_pair(
    "tetrahedron", 6, "R356 R246 R145 R123", SlotSignature(["q"] * 6))

REFLECTION_C = EquationSpec.reversed_pair(
    "reflection-C", 9, "R456 R489 K3579 R269 R258 K1678 K1234",
    SlotSignature.from_q2_slots(9, (1, 3, 7)))

REFLECTION_B = EquationSpec.reversed_pair(
    "reflection-B", 9, "S456 S489 K9753 S269 S258 K8761 K4321",
    SlotSignature.from_q2_slots(9, (2, 4, 5, 6, 8, 9)))

F4 = EquationSpec.reversed_pair("F4", 24, """
    S(14,15,16) S(9,11,16) K(16,10,8,7) K(9,13,15,17) S(4,5,16)
    R(7,12,17) S(1,2,16) R(6,10,17) S(9,14,18) K(1,3,5,17)
    S(11,15,18) K(18,12,8,6) S(1,4,18) S(1,8,15) R(7,13,19)
    K(1,6,11,19) K(4,12,15,19) R(3,10,19) S(4,8,11) K(1,7,14,20)
    S(2,5,18) R(6,13,20) R(3,12,20) S(1,9,21) K(2,10,15,20)
    S(4,14,21) K(21,13,8,3) S(2,11,21) S(2,8,14) R(6,7,22)
    K(2,3,4,22) S(5,15,21) K(11,13,14,22) R(10,12,22) K(2,6,9,23)
    R(3,7,23) R(19,20,22) K(16,17,18,22) R(10,13,23) K(5,12,14,23)
    R(3,6,24) K(16,19,21,23) K(4,7,9,24) R(17,20,23) K(5,10,11,24)
    R(12,13,24) R(17,19,24) K(18,20,21,24) S(5,8,9) R(22,23,24)
""")

F4_STATE = (1, 1, 1, 1, 0, 1, 1, 0, 1, 0, 1, 0, 1, 0, 1, 1, 0, 2, 1, 1, 0, 1, 0, 1)

EQUATIONS = {"te": TETRAHEDRON, "rc": REFLECTION_C, "rb": REFLECTION_B, "f4": F4}


# -- evaluation ---------------------------------------------------------------

def _apply_factor(v: SparseVec, f: Factor, mode: str, trunc: int | None,
                  signature: SlotSignature) -> SparseVec:
    if f.op == "K":
        return apply_k(v, f.slots, "forward", mode, trunc, signature)
    return apply_r(v, f.slots, f.op, mode, trunc, signature)


def default_jobs() -> int:
    """Worker count from QTETRA_JOBS, else 1."""
    raw = os.environ.get("QTETRA_JOBS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"QTETRA_JOBS must be an integer, got {raw!r}") from None
    if n < 1:
        raise ValueError("QTETRA_JOBS must be >= 1")
    return n


def _apply_chunk(args):
    items, f, mode, trunc, signature = args
    return dict(_apply_factor(SparseVec._trusted(dict(items)), f, mode, trunc, signature))


class FactorPool:
    """Applies a factor by splitting the input vector across worker processes.

    Factors are linear, so the partial images are simply added.  Element
    caches live per worker and warm up independently.
    """

    def __init__(self, jobs: int, min_chunk: int = 256):
        self.jobs = jobs
        self.min_chunk = min_chunk
        self._ex = ProcessPoolExecutor(max_workers=jobs)

    def apply_factor(self, v, f, mode, trunc, signature):
        if len(v) < 2 * self.min_chunk:
            return _apply_factor(v, f, mode, trunc, signature)
        items = list(v.items())
        step = max(self.min_chunk, -(-len(items) // self.jobs))
        chunks = [(items[k:k + step], f, mode, trunc, signature)
                  for k in range(0, len(items), step)]
        acc: dict = {}
        for part in self._ex.map(_apply_chunk, chunks):
            for s, c in part.items():
                prev = acc.get(s)
                acc[s] = c if prev is None else prev + c
        return SparseVec._trusted({s: c for s, c in acc.items() if c})

    def close(self):
        self._ex.shutdown()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def evaluate_side(spec: EquationSpec, factors: Sequence[Factor], v: SparseVec,
                  mode: str = "quantum", trunc: int | None = None,
                  pool=None) -> tuple[SparseVec, list[dict]]:
    """Apply an operator product (rightmost first); also return the step trace."""
    trace = []
    for f in reversed(factors):
        if pool is not None and len(v) > 1:
            v = pool.apply_factor(v, f, mode, trunc, spec.signature)
        else:
            v = _apply_factor(v, f, mode, trunc, spec.signature)
        step = {"factor": f.label, "terms": len(v)}
        if mode == "comb":
            step["state"] = ket(v.single_state())
        trace.append(step)
    return v, trace


@dataclass
class VerifyReport:
    command: str
    inputs: dict
    mode: str
    passed: bool
    counts: dict = field(default_factory=dict)
    elapsed_ms: float = 0.0
    details: list = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return {k: d[k] for k in ("command", "inputs", "mode", "pass", "counts",
                                  "elapsed_ms", "details")}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def reports_to_csv(reports: Sequence[VerifyReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["command", "inputs", "mode", "pass", "lhs", "rhs", "elapsed_ms"])
    for r in reports:
        w.writerow([r.command, json.dumps(r.inputs, sort_keys=True), r.mode,
                    "true" if r.passed else "false",
                    r.counts.get("lhs", ""), r.counts.get("rhs", ""), f"{r.elapsed_ms:.1f}"])
    return buf.getvalue()


def verify_equation(spec: EquationSpec, state: Sequence[int], mode: str = "quantum",
                    trunc: int | None = None, pool=None) -> VerifyReport:
    state = tuple(state)
    if len(state) != spec.nslots:
        raise ValueError(f"{spec.name} needs {spec.nslots} occupations, got {len(state)}")
    if any(x < 0 for x in state):
        raise ValueError(f"negative occupation in {state}")
    if mode not in ("quantum", "comb"):
        raise ValueError(f"unknown mode {mode!r}")
    if trunc is not None and mode == "comb":
        raise ValueError("truncation applies to quantum mode only")
    start = time.perf_counter()
    v0 = SparseVec.basis(state, ONE if trunc is None else TruncPoly(trunc, [1]))
    lhs, ltrace = evaluate_side(spec, spec.lhs, v0, mode, trunc, pool)
    rhs, rtrace = evaluate_side(spec, spec.rhs, v0, mode, trunc, pool)
    elapsed = (time.perf_counter() - start) * 1000
    inputs = {"equation": spec.name, "state": ket(state)}
    if trunc is not None:
        inputs["trunc"] = trunc
    details = [{"side": "lhs", "steps": ltrace}, {"side": "rhs", "steps": rtrace}]
    if mode == "comb":
        details.append({"final": ket(lhs.single_state())})
    report = VerifyReport(
        command=f"verify {spec.name}", inputs=inputs,
        mode=mode if trunc is None else f"truncated {trunc}",
        passed=lhs == rhs, counts={"lhs": len(lhs), "rhs": len(rhs)},
        elapsed_ms=round(elapsed, 1), details=details)
    report.lhs_vector, report.rhs_vector = lhs, rhs
    return report


def verify_tetrahedron(state: Sequence[int], mode: str = "quantum", pool=None) -> VerifyReport:
    return verify_equation(TETRAHEDRON, state, mode, pool=pool)


def verify_reflection_c(state: Sequence[int], mode: str = "quantum", pool=None) -> VerifyReport:
    return verify_equation(REFLECTION_C, state, mode, pool=pool)


def verify_reflection_b(state: Sequence[int], mode: str = "quantum", pool=None) -> VerifyReport:
    return verify_equation(REFLECTION_B, state, mode, pool=pool)


def verify_f4(state: Sequence[int] = F4_STATE, trunc: int = 6, pool=None) -> VerifyReport:
    return verify_equation(F4, state, "quantum", trunc, pool=pool)


# -- structural suites --------------------------------------------------------

def _suite(name: str, bound: int, checked: int, failures: list, started: float) -> VerifyReport:
    return VerifyReport(
        command=f"suite {name}", inputs={"bound": bound}, mode="exact",
        passed=not failures, counts={"checked": checked, "failures": len(failures)},
        elapsed_ms=round((time.perf_counter() - started) * 1000, 1),
        details=failures[:20])


def _indices(bound: int, n: int):
    return product(range(bound + 1), repeat=n)


def suite_r_conservation(bound: int) -> VerifyReport:
    t, bad, n = time.perf_counter(), [], 0
    for idx in _indices(bound, 6):
        inp, out = idx[:3], idx[3:]
        if not r_conserved(inp, out):
            n += 1
            if r_elem(inp, out):
                bad.append(list(idx))
    return _suite("r-conservation", bound, n, bad, t)


def suite_r_involution(bound: int) -> VerifyReport:
    t, bad, n = time.perf_counter(), [], 0
    for inp in _indices(bound, 3):
        v = SparseVec.basis(inp)
        n += 1
        if apply_r(apply_r(v, (1, 2, 3)), (1, 2, 3)) != v:
            bad.append(list(inp))
    return _suite("r-involution", bound, n, bad, t)


def _r_pairs(bound: int):
    for inp in _indices(bound, 3):
        for out in r_slice(inp):
            if max(out) <= bound:
                yield inp, out


def suite_r_symmetry(bound: int) -> VerifyReport:
    t, bad, n = time.perf_counter(), [], 0
    for inp, out in _r_pairs(bound):
        n += 1
        a, b, c = out
        i, j, k = inp
        lhs = qfact(a) * qfact(b) * qfact(c) * r_elem(inp, out)
        rhs = qfact(i) * qfact(j) * qfact(k) * r_elem(out, inp)
        if lhs != rhs:
            bad.append([*inp, *out])
    return _suite("r-weighted-symmetry", bound, n, bad, t)


def suite_r_reversal(bound: int) -> VerifyReport:
    t, bad, n = time.perf_counter(), [], 0
    for inp, out in _r_pairs(bound):
        n += 1
        if r_elem(inp, out) != r_elem(inp[::-1], out[::-1]):
            bad.append([*inp, *out])
    return _suite("r-reversal", bound, n, bad, t)


def suite_r_parity(bound: int) -> VerifyReport:
    t, bad, n = time.perf_counter(), [], 0
    for inp, out in _r_pairs(bound):
        v = r_elem(inp, out)
        if not v:
            continue
        n += 1
        xi = ((out[0] - inp[1]) * (out[2] - inp[1])) % 2
        if not v.is_polynomial() or v.lowest_parity() != xi:
            bad.append([*inp, *out])
    return _suite("r-polynomial-parity", bound, n, bad, t)


def suite_r_oracle(bound: int) -> VerifyReport:
    t, bad, n = time.perf_counter(), [], 0
    for inp, out in _r_pairs(bound):
        n += 1
        if r_elem(inp, out) != r_elem_oracle(inp, out):
            bad.append([*inp, *out])
    return _suite("r-oracle", bound, n, bad, t)


def suite_r_recursions(bound: int) -> VerifyReport:
    t = time.perf_counter()
    rep = check_r_recursions(bound)
    bad = [{"recursion": name, "index": idx} for name, r in rep["recursions"].items()
           for idx in r["mismatches"]]
    n = sum(r["checked"] for r in rep["recursions"].values())
    return _suite("r-recursions", bound, n, bad, t)


def suite_comb_r(total: int) -> VerifyReport:
    """comb_r vs q=0 values and involutivity on every state with i+j+k <= total."""
    t, bad, n = time.perf_counter(), [], 0
    for inp in _indices(total, 3):
        if sum(inp) > total:
            continue
        n += 1
        img = comb_r(inp)
        at0 = {out: r_elem(inp, out).at_zero() for out in r_slice(inp)}
        expect = {out: (1 if out == img else 0) for out in at0}
        if at0 != expect or comb_r(img) != inp or not r_conserved(inp, img):
            bad.append(list(inp))
    return _suite("comb-r", total, n, bad, t)


def _k_pairs(bound: int):
    for inp in _indices(bound, 4):
        for out in k_slice(inp):
            if max(out) <= bound:
                yield inp, out


def suite_k_conservation(bound: int) -> VerifyReport:
    t, bad, n = time.perf_counter(), [], 0
    for idx in _indices(bound, 8):
        inp, out = idx[:4], idx[4:]
        if not k_conserved(inp, out):
            n += 1
            if k_elem(inp, out):
                bad.append(list(idx))
    return _suite("k-conservation", bound, n, bad, t)


def suite_k_involution(bound: int) -> VerifyReport:
    t, bad, n = time.perf_counter(), [], 0
    for inp in _indices(bound, 4):
        v = SparseVec.basis(inp)
        n += 1
        if apply_k(apply_k(v, (1, 2, 3, 4)), (1, 2, 3, 4)) != v:
            bad.append(list(inp))
    return _suite("k-involution", bound, n, bad, t)


def suite_k_symmetry(bound: int) -> VerifyReport:
    t, bad, n = time.perf_counter(), [], 0
    for inp, out in _k_pairs(bound):
        n += 1
        a, i, b, j = inp
        c, m, d, nn = out
        lhs = qfact(c, 4) * qfact(m) * qfact(d, 4) * qfact(nn) * k_elem(inp, out)
        rhs = qfact(a, 4) * qfact(i) * qfact(b, 4) * qfact(j) * k_elem(out, inp)
        if lhs != rhs:
            bad.append([*inp, *out])
    return _suite("k-weighted-symmetry", bound, n, bad, t)


def suite_k_kernel_symmetry(bound: int) -> VerifyReport:
    """(q^4)_c (q^2)_m (q^2)_n K^{cm0n}_{ai0j} = (q^4)_a (q^2)_i (q^2)_j K^{ai0j}_{cm0n}."""
    t, bad, n = time.perf_counter(), [], 0
    for a, i, j in _indices(bound, 3):
        for c, m, _, nn in k_slice((a, i, 0, j)):
            if _ != 0 or max(c, m, nn) > bound:
                continue
            n += 1
            lhs = qfact(c, 4) * qfact(m) * qfact(nn) * k_kernel(a, i, j, c, m, nn)
            rhs = qfact(a, 4) * qfact(i) * qfact(j) * k_kernel(c, m, nn, a, i, j)
            if lhs != rhs:
                bad.append([a, i, 0, j, c, m, 0, nn])
    return _suite("k-kernel-symmetry", bound, n, bad, t)


def suite_k_parity(bound: int) -> VerifyReport:
    t, bad, n = time.perf_counter(), [], 0
    for inp, out in _k_pairs(bound):
        v = k_elem(inp, out)
        if not v:
            continue
        n += 1
        eta = (inp[1] * inp[3] + out[1] * out[3]) % 2
        if not v.is_polynomial() or v.lowest_parity() != eta:
            bad.append([*inp, *out])
    return _suite("k-polynomial-parity", bound, n, bad, t)


def suite_k_oracle(bound: int) -> VerifyReport:
    t, bad, n = time.perf_counter(), [], 0
    for inp, out in _k_pairs(bound):
        n += 1
        if k_elem(inp, out) != k_elem_oracle(inp, out):
            bad.append([*inp, *out])
    return _suite("k-oracle", bound, n, bad, t)


def suite_comb_k(total: int) -> VerifyReport:
    """comb_k vs q=0 values, involutivity and charge conservation; index sum <= total."""
    t, bad, n = time.perf_counter(), [], 0
    for inp in _indices(total, 4):
        if sum(inp) > total:
            continue
        n += 1
        img = comb_k(inp)
        ok = min(img) >= 0 and comb_k(img) == inp and k_conserved(inp, img)
        if ok:
            for out in k_slice(inp):
                if k_elem(inp, out).at_zero() != (1 if out == img else 0):
                    ok = False
                    break
        if not ok:
            bad.append(list(inp))
    return _suite("comb-k", total, n, bad, t)


# default per-suite bounds (index bound, or index-sum bound for comb-*)
SUITE_BOUNDS = {
    "r-conservation": 6, "r-involution": 5, "r-weighted-symmetry": 5, "r-reversal": 5,
    "r-recursions": 5, "r-polynomial-parity": 5, "r-oracle": 4, "comb-r": 9,
    "k-conservation": 4, "k-involution": 3, "k-weighted-symmetry": 3,
    "k-kernel-symmetry": 5, "k-polynomial-parity": 3, "k-oracle": 3, "comb-k": 8,
}

SUITES = {
    "r-conservation": suite_r_conservation, "r-involution": suite_r_involution,
    "r-weighted-symmetry": suite_r_symmetry, "r-reversal": suite_r_reversal,
    "r-recursions": suite_r_recursions, "r-polynomial-parity": suite_r_parity,
    "r-oracle": suite_r_oracle, "comb-r": suite_comb_r,
    "k-conservation": suite_k_conservation, "k-involution": suite_k_involution,
    "k-weighted-symmetry": suite_k_symmetry, "k-kernel-symmetry": suite_k_kernel_symmetry,
    "k-polynomial-parity": suite_k_parity, "k-oracle": suite_k_oracle, "comb-k": suite_comb_k,
}


def verify_suites(bound: int | None = None, names: Sequence[str] | None = None) -> list[VerifyReport]:
    """Run the structural suites.

    With ``bound=None`` each suite uses its entry in SUITE_BOUNDS; an integer
    bound applies to every suite (comb-* suites then use index sum <= 2*bound).
    """
    if bound is not None and bound < 1:
        raise ValueError("bound must be >= 1")
    names = list(SUITES) if names is None else list(names)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"unknown suites {unknown}")
    out = []
    for n in names:
        if bound is None:
            b = SUITE_BOUNDS[n]
        else:
            b = 2 * bound if n.startswith("comb-") else bound
        out.append(SUITES[n](b))
    return out
