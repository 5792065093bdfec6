#!/usr/bin/env python3
"""Smoke test for the monotet_py extension module.

Build the extension first:

    cargo build --release -p monotet-py

then run this script with the same Python the build targeted:

    python3 python/smoke_test.py
"""

import math
import os
import sys
import tempfile

REPO = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def import_module():
    candidates = [
        os.path.join(REPO, "target", "release", "libmonotet_py.so"),
        os.path.join(REPO, "target", "debug", "libmonotet_py.so"),
    ]
    lib = next((c for c in candidates if os.path.exists(c)), None)
    if lib is None:
        sys.exit("build the extension first: cargo build --release -p monotet-py")
    shim_dir = tempfile.mkdtemp(prefix="monotet-py-")
    link = os.path.join(shim_dir, "monotet_py.so")
    os.symlink(lib, link)
    sys.path.insert(0, shim_dir)
    import monotet_py

    return monotet_py


def approx(a, b, rel=1e-6):
    return abs(a - b) <= rel * max(1.0, abs(b))


def main():
    mt = import_module()

    # Corner tetrahedron: closed-form volume and centroid.
    corner = mt.Tetrahedron((0, 0, 0), (10, 0, 0), (0, 10, 0), (0, 0, 10))
    assert approx(corner.volume_mm3(), 1000.0 / 6.0), corner.volume_mm3()
    assert all(approx(x, 2.5) for x in corner.centroid())
    assert corner.obtuse_paths() == []
    print("PASS corner tetrahedron volume/centroid/paths")

    # Regular tetrahedron: rests on every face at the centroid.
    s = 100.0 / (2.0 * math.sqrt(2.0))
    regular = mt.Tetrahedron((s, s, s), (s, -s, -s), (-s, s, -s), (-s, -s, s))
    assert sorted(mt.stable_faces(regular, regular.centroid())) == ["A", "B", "C", "D"]
    angles = regular.dihedral_angles()
    assert all(approx(a, math.degrees(math.acos(1.0 / 3.0)), 1e-9) for a in angles.values())
    print("PASS regular tetrahedron stability/dihedrals")

    # Reference build: zones reproduce the golden volumes.
    scene = mt.load_scene(os.path.join(REPO, "scenes", "reference.toml"))
    ref = scene["tetrahedron"]
    zones = mt.loading_zones(ref)
    got = {z["pattern"]: z for z in zones}
    expected = {
        "B->A->D<-C": ("I", 1.4318),
        "C->D->A<-B": ("I", 0.5716),
        "B->A->D->C": ("II", 0.0199),
        "C->D->A->B": ("II", 0.0067),
    }
    assert set(got) == set(expected), got.keys()
    for pattern, (ztype, vol) in expected.items():
        z = got[pattern]
        assert z["type"] == ztype
        assert approx(z["volume_cm3"], vol, 1e-4), (pattern, z["volume_cm3"])
        assert len(z["vertices"]) == 4
    print("PASS reference loading zones")

    # Two-material design: tungsten carbide works for the big Type I zone.
    frame = scene["frame"]
    fit = mt.fit_core(ref, frame, scene["core_density"], "B->A->D<-C")
    assert fit["functional"] and fit["margin_mm"] > 0.0, fit
    assert fit["pattern"] == "B->A->D<-C", fit
    print(f"PASS design fit (margin {fit['margin_mm']:.3f} mm)")

    rho = mt.min_core_density(ref, frame, "B->A->D->C")
    assert rho is not None and 180.0 < rho < 290.0, rho
    print(f"PASS Type II density threshold ({rho:.1f} g/cm3)")

    # Tumbling: the frozen two-edge roller.
    hep = mt.load_scene(os.path.join(REPO, "scenes", "heppes.toml"))["tetrahedron"]
    trace = mt.tumble(hep, hep.centroid(), "B")
    faces = [f for f, _ in trace]
    heights = [h for _, h in trace]
    assert faces == ["B", "C", "D"], faces
    assert heights[0] > heights[1] > heights[2], heights
    print("PASS two-edge tumble trace")

    # Convex hull: cube corners plus interior points.
    pts = [(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)]
    pts += [(0.5, 0.5, 0.5), (0.25, 0.5, 0.75)]
    hull = mt.convex_hull(pts)
    assert len(hull["vertices"]) == 8, hull["vertices"]
    assert approx(hull["volume_mm3"], 1.0, 1e-9)
    print("PASS convex hull")

    print("all smoke tests passed")


if __name__ == "__main__":
    main()
