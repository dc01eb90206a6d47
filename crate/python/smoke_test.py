#!/usr/bin/env python3
"""Smoke test for the contactcurves Python extension.

Builds nothing itself: it locates the compiled cdylib under target/ (debug or
release), exposes it as an importable module, and drives the main types end
to end. Run after `cargo build -p contact-curves-py`:

    python3 python/smoke_test.py
"""

import json
import math
import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def import_contactcurves():
    candidates = [
        ROOT / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libcontactcurves.so", "contactcurves.so", "libcontactcurves.dylib")
    ]
    lib = next((p for p in candidates if p.exists()), None)
    if lib is None:
        sys.exit("build the extension first: cargo build -p contact-curves-py")
    stage = pathlib.Path(tempfile.mkdtemp(prefix="contactcurves-"))
    shutil.copy2(lib, stage / "contactcurves.so")
    sys.path.insert(0, str(stage))
    import contactcurves

    return contactcurves


def approx(a, b, tol=1e-5):
    assert abs(a - b) < tol, f"{a} != {b} (tol {tol})"


def main():
    cc = import_contactcurves()
    print(f"contactcurves {cc.__version__}")

    # Structure self-checks on both builtin manifolds.
    rkmn = cc.Manifold.rkmn()
    assert rkmn.dim == 3 and not rkmn.homogeneous
    report = json.loads(rkmn.structure_check_json(points=100, seed=0))
    assert report["pass"], report
    assert report["structure"]["h_nonzero"]

    e2 = cc.Manifold.e2(2.0)
    assert e2.homogeneous
    assert json.loads(e2.structure_check_json())["pass"]

    # Spec-file loading with a parameter override.
    spec_doc = (ROOT / "specs" / "e2.json").read_text()
    from_spec = cc.Manifold.from_spec(spec_doc, params=[("c2", 2.0)])
    assert from_spec.dim == 3

    # The reference curve: order 3, k1 = k2 = 1, g(T,φhT) = -1.
    curve = cc.Curve.example1(span=(0.0, 1.0), step=1e-3)
    assert len(curve) == 1001 and curve.legendre
    fren = json.loads(curve.frenet_json())
    assert fren["order"] == 3
    approx(fren["curvatures"][0]["max"], 1.0, 1e-6)
    approx(fren["curvatures"][1]["max"], 1.0, 1e-6)
    approx(fren["legendre_scalar"]["min"], -1.0, 1e-9)

    # Normal-bundle proper condition holds with λ = -1, and T3.4 verifies.
    cls = json.loads(curve.classify_json("c-proper-normal"))
    assert cls["verdict"] == "holds"
    approx(cls["lambda"]["min"], -1.0)
    thm = json.loads(curve.verify_theorem_json("T3.4"))
    assert thm["verdict"] == "pass", thm

    # The tangent parallel condition is obstructed.
    cls = json.loads(curve.classify_json("c-parallel-tangent"))
    assert cls["verdict"] == "fails" and cls["max_residual"] > 1.0

    # Helix family: tangent-proper λ = 2, normal-proper λ = 1.
    helix = cc.Curve.e2_helix(2.0, 3 * math.pi / 4, span=(0.0, 2.0))
    cls = json.loads(helix.classify_json("c-proper-tangent"))
    assert cls["verdict"] == "holds"
    approx(cls["lambda"]["max"], 2.0)
    cls = json.loads(helix.classify_json("c-proper-normal"))
    assert cls["verdict"] == "holds"
    approx(cls["lambda"]["max"], 1.0)
    thm = json.loads(helix.verify_theorem_json("T3.3"))
    assert thm["verdict"] == "pass", thm

    # CSV round trip.
    with tempfile.TemporaryDirectory() as d:
        path = str(pathlib.Path(d) / "helix.csv")
        helix.to_csv(path)
        back = cc.Curve.from_csv(path)
        assert len(back) == len(helix)
        assert json.loads(back.frenet_json())["order"] == 3

        # Sweep table.
        out = str(pathlib.Path(d) / "sweep.csv")
        n = cc.sweep_to_csv(
            "circle",
            [1.0, 2.0],
            [2 * math.pi / 3, 3 * math.pi / 4],
            ["c-proper-tangent"],
            out,
            span=(0.0, 1.0),
        )
        assert n == 4
        lines = pathlib.Path(out).read_text().strip().splitlines()
        assert lines[0].startswith("family,c2,theta,kind,verdict")
        assert len(lines) == 5
        assert all(",holds," in line for line in lines[1:])

    # Frenet integration with a prescribed curvature expression.
    circle = cc.Curve.integrate(
        cc.Manifold.e2(2.0),
        [[math.sqrt(0.5), -math.sqrt(0.5), 0.0], [0.0, 0.0, 1.0]],
        ["1"],
        (0.0, 2.0),
    )
    fren = json.loads(circle.frenet_json())
    assert fren["order"] == 2
    approx(fren["curvatures"][0]["max"], 1.0, 1e-6)

    print("smoke test: all checks passed")


if __name__ == "__main__":
    main()
