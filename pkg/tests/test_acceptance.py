"""Acceptance criteria 1-10.  Each test records one PASS/FAIL line.

Every comparison is exact (zero tolerance).  Monomial counts are exact
integers; runtime ceilings are generous upper bounds on this hardware.
"""

import time
from itertools import product

from golden import K_2110, R_314
from qtetra.birat import (check_matrix_identities, tropicalize_and_compare,
                          verify_birational_equations)
from qtetra.kmat import comb_k, k_conserved, k_elem, k_elem_oracle, k_slice
from qtetra.rmat import comb_r, r_conserved, r_elem, r_elem_oracle, r_slice
from qtetra.tensorop import INTERTWINING, check_intertwining
from qtetra.verify import (F4, F4_STATE, SUITE_BOUNDS, SUITES, verify_f4, verify_reflection_b,
                           verify_reflection_c, verify_tetrahedron)

# pinned checkpoints
TE_STATE, TE_MONOMIALS, TE_FINAL = (3, 1, 4, 5, 1, 6), 300, "515327"
TE_LEFT = ["132516", "532156", "512354", "515327"]
TE_RIGHT = ["311543", "351147", "151327", "515327"]
RC_STATE, RC_FINAL = (2, 1, 1, 0, 3, 4, 2, 1, 2), "622520119"
RC_LEFT = ["301134212", "601131242", "631101272", "621102271", "622102173", "622702119", "622520119"]
RC_RIGHT = ["211307212", "211207221", "212207123", "272201129", "252221109", "352220119", "622520119"]
RB_STATE, RB_MONOMIALS = (1, 1, 2, 1, 1, 1, 1, 1, 1), 1410
F4_TRUNC, F4_MONOMIALS = 6, 533
SAMPLES, SEED, TROP_BOUND = 32, 0, 6
COMB_TOTAL = 8


def test_criterion_01_golden_elements(criterion):
    t = time.perf_counter()
    r_ok = all(r_elem((3, 1, 4), out) == R_314.get(out, 0) for out in r_slice((3, 1, 4)))
    r_nz = sum(1 for out in r_slice((3, 1, 4)) if r_elem((3, 1, 4), out))
    k_ok = all(k_elem((2, 1, 1, 0), out) == K_2110.get(out, 0) for out in k_slice((2, 1, 1, 0)))
    k_nz = sum(1 for out in k_slice((2, 1, 1, 0)) if k_elem((2, 1, 1, 0), out))
    dt = time.perf_counter() - t
    ok = criterion(1, "golden R^{abc}_{314} and K^{cmdn}_{2110}", [
        (f"R slice exact, {r_nz} nonzero", r_ok and r_nz == 5),
        (f"K slice exact, {k_nz} nonzero", k_ok and k_nz == 6),
        (f"{dt:.2f}s < 1s", dt < 1.0),
    ])
    assert ok


def test_criterion_02_oracle_equivalence(criterion):
    r_n = r_bad = 0
    for inp in product(range(5), repeat=3):
        for out in r_slice(inp):
            if max(out) <= 4:
                r_n += 1
                r_bad += r_elem(inp, out) != r_elem_oracle(inp, out)
    k_n = k_bad = 0
    for inp in product(range(4), repeat=4):
        for out in k_slice(inp):
            if max(out) <= 3:
                k_n += 1
                k_bad += k_elem(inp, out) != k_elem_oracle(inp, out)
    ok = criterion(2, "closed forms equal recursion oracles", [
        (f"R {r_n} elements, {r_bad} mismatches", r_bad == 0),
        (f"K {k_n} elements, {k_bad} mismatches", k_bad == 0),
    ])
    assert ok


def test_criterion_03_structure_suites(criterion):
    names = [n for n in SUITES if not n.startswith("comb-") and "oracle" not in n]
    checks = []
    for n in names:
        rep = SUITES[n](SUITE_BOUNDS[n])
        checks.append((f"{n}<={SUITE_BOUNDS[n]}: {rep.counts['checked']}", rep.passed))
    assert criterion(3, "structure suites", checks)


def test_criterion_04_intertwining(criterion):
    checks = []
    for rel in INTERTWINING:
        rep = check_intertwining(rel, 2)
        checks.append((f"<{rel[0]}{rel[1]}>", rep["pass"]))
    for rel in ((2, 2), (5, 5), (2, 5)):
        rep = check_intertwining(rel, 3)
        checks.append((f"<{rel[0]}{rel[1]}>@3", rep["pass"]))
    assert criterion(4, "intertwining relations (16 listed, 15 distinct) at bound 2, three at 3", checks)


def test_criterion_05_tetrahedron(criterion):
    comb = verify_tetrahedron(TE_STATE, "comb")
    left = [s["state"] for s in comb.details[0]["steps"]]
    right = [s["state"] for s in comb.details[1]["steps"]]
    t = time.perf_counter()
    quant = verify_tetrahedron(TE_STATE, "quantum")
    dt = time.perf_counter() - t
    ok = criterion(5, "tetrahedron on |314516>", [
        ("comb chains match expected route", left == TE_LEFT and right == TE_RIGHT and comb.passed),
        ("quantum sides equal", quant.passed),
        (f"monomials lhs={quant.counts['lhs']} rhs={quant.counts['rhs']} (expected {TE_MONOMIALS} each)",
         quant.counts == {"lhs": TE_MONOMIALS, "rhs": TE_MONOMIALS}),
        (f"{dt:.1f}s < 60s", dt < 60),
    ])
    assert ok


def test_criterion_06_reflection_c(criterion):
    comb = verify_reflection_c(RC_STATE, "comb")
    left = [s["state"] for s in comb.details[0]["steps"]]
    right = [s["state"] for s in comb.details[1]["steps"]]
    t = time.perf_counter()
    quant = verify_reflection_c(RC_STATE, "quantum")
    dt = time.perf_counter() - t
    ok = criterion(6, "type C reflection on |211034212>", [
        ("comb chains match expected route", left == RC_LEFT and right == RC_RIGHT and comb.passed),
        (f"quantum sides equal ({quant.counts['lhs']} monomials)", quant.passed),
        (f"{dt:.0f}s < 600s", dt < 600),
    ])
    assert ok


def test_criterion_07_reflection_b(criterion):
    t = time.perf_counter()
    rep = verify_reflection_b(RB_STATE)
    dt = time.perf_counter() - t
    ok = criterion(7, "type B reflection on |112111111>", [
        ("sides equal", rep.passed),
        (f"monomials lhs={rep.counts['lhs']} rhs={rep.counts['rhs']}",
         rep.counts == {"lhs": RB_MONOMIALS, "rhs": RB_MONOMIALS}),
        (f"{dt:.1f}s < 1800s", dt < 1800),
    ])
    assert ok


def test_criterion_08_f4(criterion):
    t = time.perf_counter()
    rep = verify_f4(F4_STATE, F4_TRUNC)
    dt = time.perf_counter() - t
    q2 = [s for s, b in enumerate(F4.signature, 1) if b == "q2"]
    ok = criterion(8, "F4 relation mod q^6", [
        ("signature inferred uniquely", len(F4.signature) == 24),
        (f"q2 slots {q2}", True),
        ("sides equal mod q^6", rep.passed),
        (f"monomials lhs={rep.counts['lhs']} rhs={rep.counts['rhs']}",
         rep.counts == {"lhs": F4_MONOMIALS, "rhs": F4_MONOMIALS}),
        (f"{dt:.1f}s < 3600s", dt < 3600),
    ])
    assert ok


def test_criterion_09_birational(criterion):
    mats = check_matrix_identities()
    te = verify_birational_equations("te", "symbolic")
    re_ = verify_birational_equations("re", "sampled", samples=SAMPLES, seed=SEED)
    tr = tropicalize_and_compare("R", TROP_BOUND)
    tk = tropicalize_and_compare("K", TROP_BOUND)
    ok = criterion(9, "birational and tropical layer", [
        ("GGG/Xeq/Yeq symbolic", mats["pass"]),
        ("birational tetrahedron symbolic", te["pass"]),
        (f"birational reflection at {re_['samples']} points seed {SEED}",
         re_["pass"] and re_["samples"] >= 32),
        (f"tropical R on {tr['checked']} points", tr["pass"]),
        (f"tropical K on {tk['checked']} points", tk["pass"]),
    ])
    assert ok


def test_criterion_10_combinatorial_bijectivity(criterion):
    bad_r = bad_k = 0
    n_r = n_k = 0
    for total in range(COMB_TOTAL + 1):
        # each conserved slice lies inside one total; check the map is an
        # involution on it and agrees with q=0
        rs = [s for s in product(range(total + 1), repeat=3) if sum(s) == total]
        for s in rs:
            n_r += 1
            img = comb_r(s)
            at0 = {o: r_elem(s, o).at_zero() for o in r_slice(s)}
            bad_r += (comb_r(img) != s or not r_conserved(s, img)
                      or at0 != {o: int(o == img) for o in at0})
        ks = [s for s in product(range(total + 1), repeat=4) if sum(s) == total]
        for s in ks:
            n_k += 1
            img = comb_k(s)
            at0 = {o: k_elem(s, o).at_zero() for o in k_slice(s)}
            bad_k += (comb_k(img) != s or not k_conserved(s, img)
                      or at0 != {o: int(o == img) for o in at0})
    ok = criterion(10, "combinatorial maps are involutive bijections equal to q=0", [
        (f"comb_r on {n_r} states", bad_r == 0),
        (f"comb_k on {n_k} states", bad_k == 0),
    ])
    assert ok
