#!/usr/bin/env python3
"""Smoke test for the bks_py extension module.

Builds are done with cargo (`cargo build -p bks-python [--release]`); this
script locates the resulting cdylib, imports it under the proper module
name, and exercises the main types and operations end to end.
"""

import pathlib
import shutil
import sys
import sysconfig
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def locate_cdylib() -> pathlib.Path:
    candidates = [
        ROOT / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libbks_py.so", "libbks_py.dylib", "bks_py.dll")
    ]
    for path in candidates:
        if path.exists():
            return path
    sys.exit(
        "bks_py cdylib not found; run `cargo build -p bks-python` first\n"
        "searched: " + ", ".join(str(c) for c in candidates)
    )


def import_bks_py():
    cdylib = locate_cdylib()
    stage = pathlib.Path(tempfile.mkdtemp(prefix="bks_py_"))
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    shutil.copy2(cdylib, stage / f"bks_py{suffix}")
    sys.path.insert(0, str(stage))
    import bks_py

    return bks_py


def main() -> None:
    bks = import_bks_py()
    checks = 0

    def ok(condition: bool, label: str) -> None:
        nonlocal checks
        assert condition, f"FAILED: {label}"
        checks += 1
        print(f"ok {checks:2d} - {label}")

    # --- rays ---------------------------------------------------------
    ray = bks.Ray([0, 2, -2, 0])
    ok(ray.components == [0, 1, -1, 0], "canonicalization divides out the gcd")
    ok(bks.Ray([-1, 1, 1, 1]).components == [1, -1, -1, -1], "sign convention")
    ok(bks.Ray(["1/2", "-1/2", 0, 0]) == bks.Ray([1, -1, 0, 0]), "rational input")

    import fractions

    half = fractions.Fraction(1, 2)
    ok(bks.Ray([half, -half, 0, 0]) == bks.Ray([1, -1, 0, 0]), "Fraction input")

    up = bks.Ray([1, 0])
    down = bks.Ray([0, 1])
    ok(up.perp2() == down, "perp2 pairs (1,0) with (0,1)")
    ok(up.tensor(bks.Ray([1, -1])).components == [1, -1, 0, 0], "tensor product")
    singlet = bks.Ray([0, 1, -1, 0])
    ok(singlet.factorize() is None, "the singlet direction is entangled")
    u, w = bks.Ray([1, 0, 1, 0]).factorize()
    ok((u, w) == (bks.Ray([1, 1]), bks.Ray([1, 0])), "rank-1 factorization")
    ok(singlet.lift(4).dim == 8, "lifting appends zeros")

    # --- catalog and solvers ------------------------------------------
    ok(bks.catalog_names() == ["cabello14", "singlet5"], "catalog names")
    cabello, kind, _notes = bks.catalog_entry("cabello14")
    ok(kind == "state-independent", "cabello14 kind")
    outcome = cabello.solve(method="brute")
    ok(outcome.verdict == "UNSAT", "cabello14 is UNSAT")
    ok(outcome.nodes_explored == 2**14, "exhaustive search visits 16384 nodes")
    ok(cabello.solve().verdict == "UNSAT", "backtracking solver agrees")
    cert = cabello.parity_certificate()
    ok(cert == [0, 1, 2, 3, 4], "parity certificate uses all five equations")
    ok(cabello.verify_certificate(cert), "certificate verifies")

    singlet5, kind, _notes = bks.catalog_entry("singlet5")
    ok(kind == "state-specific", "singlet5 kind")
    outcome = singlet5.solve(method="brute")
    ok(outcome.verdict == "UNSAT" and outcome.nodes_explored == 32, "singlet5 UNSAT in 32 nodes")
    ok(singlet5.parity_certificate() == [0, 1, 2], "three-equation certificate")
    ok(singlet5.count("condition-d") == 5, "condition-d count")
    ok(singlet5.count("full") == 7, "full count")
    ok(singlet5.count("full-with-state") == 8, "full-with-state count")
    ok(singlet5.merit_ratio() == (5, 4), "merit ratio 5/4")
    ok(singlet5.lift(4).merit_ratio() == (5, 8), "lifted merit ratio 5/8")
    ok(singlet5.lift(4).solve().verdict == "UNSAT", "lifting preserves the verdict")

    # Removing any single equation yields a satisfiable system.
    for index in range(3):
        variant = singlet5.without_equation(index)
        ok(variant.solve().verdict == "SAT", f"drop-one variant {index} is SAT")

    # --- round trip and exports ---------------------------------------
    text = singlet5.serialize()
    reparsed = bks.System.parse(text)
    ok(reparsed.serialize() == text, "serialize/parse round trip")
    ok(reparsed.equations()[0][0] == "6", "labels survive the round trip")
    ok("u2 -- u3;" in singlet5.export_dot(), "orthogonal edge in DOT export")
    cnf = singlet5.export_cnf()
    ok(cnf.splitlines()[1].startswith("p cnf 5 "), "CNF header")
    ok(bks.check_dimacs(cnf) == "UNSAT", "CNF brute force agrees")

    # --- derivations ---------------------------------------------------
    triad = [bks.Ray([1, 1, -1, 1]), bks.Ray([1, -1, 0, 0]), bks.Ray([0, 0, 1, 1])]
    ok(
        bks.complete_to_basis(triad, 4) == bks.Ray([1, 1, 1, -1]),
        "triad completes to the omitted ray",
    )
    ok(bks.condition_d_check(triad, singlet), "triad spans a subspace containing the state")
    derivation = bks.singlet_relation(
        [bks.Ray([1, -1, 0, 0]), bks.Ray([0, 0, 1, 1]), bks.Ray([1, 0, 1, 0]), bks.Ray([0, 1, 0, -1])]
    )
    ok(
        derivation.factorizations[0] == (bks.Ray([1, 0]), bks.Ray([1, -1])),
        "first factorization",
    )
    derived = singlet5.derive_state()
    ok(derived.var_count == 5, "state substitution leaves the reduced system intact")
    ok(singlet5.provenances() == ["state-derived", "state-derived", "singlet-relation"],
       "structural provenance per equation")

    print(f"\nall {checks} smoke checks passed")


if __name__ == "__main__":
    main()
