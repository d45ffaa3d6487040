#!/usr/bin/env python3
"""Smoke test for the spcodes_py extension module.

Builds nothing itself: it locates the compiled cdylib under target/, stages
it under an importable name, and exercises the public surface end to end.
"""

import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load_module():
    candidates = [
        ROOT / "target" / "release" / "libspcodes_py.so",
        ROOT / "target" / "debug" / "libspcodes_py.so",
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit(
            "libspcodes_py.so not found; build it first with\n"
            "  cargo build -p spcodes-python --release --features extension-module"
        )
    stage = Path(tempfile.mkdtemp(prefix="spcodes_py_"))
    shutil.copy2(built, stage / "spcodes_py.so")
    sys.path.insert(0, str(stage))
    import spcodes_py

    return spcodes_py


def main():
    sp = load_module()

    lin = sp.Partition.linear()
    assert lin.core_dimension() == 4, lin.core_dimension()
    assert len(lin.classes()) == 8 and all(len(c) == 16 for c in lin.classes())

    # Linear x linear through a 3-cycle on the first three classes.
    sigma = [1, 2, 0, 3, 4, 5, 6, 7]
    code = sp.double(lin, lin, sigma)
    assert len(code) == 2048 and code.length == 16
    assert sp.is_extended_perfect(code)
    assert sp.rank(code) == 13, sp.rank(code)
    assert sp.kernel_dimension(code) == 8, sp.kernel_dimension(code)
    basis = sp.kernel_basis(code)
    assert len(basis) == 8
    words = set(code.masks())
    assert all(b ^ w in words for b in basis for w in words)

    report = sp.verify(code)
    assert report.passed, report.failed_checks()
    assert report.kappa == 8 and report.vertices == 8
    assert report.loop_multiplicity == 28, report.loop_multiplicity
    assert report.text.startswith("VERDICT: PASS")

    q = sp.quotient(code)
    assert q.vertices == 8
    assert all(s == 140 for s in q.vertex_sums), q.vertex_sums
    assert all(m == 28 for m in q.loop_multiplicities), q.loop_multiplicities

    profiles = sp.type_profiles(code)
    assert len(profiles) == 8
    assert all(letters == "3" * 16 for _, letters in profiles), profiles
    assert sp.homogeneity(code) == "STS-homogeneous"

    # The identity permutation doubles to the linear code: kappa out of range.
    linear16 = sp.double(lin, lin, list(range(8)))
    assert sp.kernel_dimension(linear16) == 11
    try:
        sp.verify(linear16)
    except ValueError as e:
        assert "11" in str(e), e
    else:
        sys.exit("expected verify() to reject a kernel of dimension 11")

    # Swapping the last two classes gives the kappa = 9 code.
    code9 = sp.double(lin, lin, [0, 1, 2, 3, 4, 5, 7, 6])
    report9 = sp.verify(code9)
    assert report9.passed, report9.failed_checks()
    assert report9.kappa == 9 and report9.vertices == 4
    assert report9.loop_multiplicity == 44

    # Decomposition round-trips the construction.
    p2, q2, sigma2 = sp.decompose(code)
    assert p2.fingerprint() == lin.fingerprint()
    assert q2.fingerprint() == lin.fingerprint()
    redoubled = sp.double(p2, q2, sigma2)
    assert redoubled == code

    # Unit codes and partition search.
    units = sp.unit_codes()
    assert len(units) == 30
    assert all(len(u) == 16 and u.length == 8 for u in units)
    parts = sp.search_partitions(units[0], 2)
    assert 1 <= len(parts) <= 2
    assert len({p.fingerprint() for p in parts}) == len(parts)

    # File round-trips.
    with tempfile.TemporaryDirectory() as td:
        cpath = Path(td) / "roundtrip.code"
        code.write(cpath)
        assert sp.Code.read(cpath) == code
        ppath = Path(td) / "roundtrip.part"
        lin.write(ppath)
        assert sp.Partition.read(ppath) == lin

    print("smoke: all python binding checks passed")


if __name__ == "__main__":
    main()
