"""Smoke test for the shapeclust Python extension.

Run after `maturin develop` or after building the cdylib with
`cargo build -p shapeclust-py --features extension-module --release`;
in the latter case the library is picked up from the workspace target dir.
"""

import math
import os
import shutil
import sys
import tempfile
from pathlib import Path


def import_shapeclust():
    try:
        import shapeclust

        return shapeclust
    except ImportError:
        pass
    target = Path(__file__).resolve().parents[3] / "target"
    for profile in ("release", "debug"):
        for name in ("libshapeclust_py.so", "libshapeclust_py.dylib", "shapeclust_py.dll"):
            lib = target / profile / name
            if lib.exists():
                stage = Path(tempfile.mkdtemp())
                ext = ".pyd" if name.endswith(".dll") else ".so"
                shutil.copy(lib, stage / f"shapeclust{ext}")
                sys.path.insert(0, str(stage))
                import shapeclust

                return shapeclust
    sys.exit("shapeclust extension not found; build it first")


sc = import_shapeclust()


def check_config():
    cfg = sc.ShapeConfig("surface:4x8")
    assert (cfg.kind, cfg.n, str(cfg)) == ("surface", 32, "surface:4x8")
    assert sc.ShapeConfig.centerline(20).n == 20
    try:
        sc.ShapeConfig.centerline(1)
    except ValueError:
        pass
    else:
        raise AssertionError("N=1 must be rejected")


def check_fit_and_sort():
    # a horizontal bar, 200 x 10 pixels
    points = [(float(u), float(v)) for v in range(10) for u in range(200)]
    cfg = sc.ShapeConfig.centerline(8)
    for method in ("som", "kma", "fcm", "gmm"):
        params = sc.ClusterParams(method, seed=4)
        centroids = sc.fit(points, cfg, params)
        assert len(centroids) == 8
        assert all(0 <= u <= 199 and 0 <= v <= 9 for u, v in centroids)
        shape = sc.sort(centroids, cfg)
        us = [u for u, _ in shape.points]
        assert us == sorted(us) or us == sorted(us, reverse=True), (method, us)
        assert sc.fit(points, cfg, params) == centroids, "same seed, same result"

    shape = sc.detect_points(points, cfg)
    assert len(shape) == 8 and not shape.closed
    assert 0.0 <= shape.spacing_cv() < 0.2


def check_metrics():
    pts = [(0.0, 0.0), (0.0, 1.0), (10.0, 0.0), (10.0, 1.0)]
    labels = sc.assign_labels(pts, [(0.0, 0.5), (10.0, 0.5)])
    assert labels == [0, 0, 1, 1]
    # a = 1, b = mean(10, sqrt(101)) for every point
    b = (10.0 + math.sqrt(101.0)) / 2.0
    assert abs(sc.silhouette(pts, labels) - (b - 1.0) / b) < 1e-12
    # between = 4 * 25 = 100 over k-1 = 1; within = 4 * 0.25 = 1 over m-k = 2
    assert abs(sc.calinski_harabasz(pts, labels) - 200.0) < 1e-9


def check_lift():
    k = sc.Intrinsics(600.0, 600.0, 320.0, 180.0)
    x, y, z = sc.backproject_pixel(420.0, 180.0, 1200.0, k)
    assert abs(x - 200.0) < 1e-9 and abs(y) < 1e-9 and z == 1200.0
    u, v = k.project(x, y, z)
    assert abs(u - 420.0) < 1e-9 and abs(v - 180.0) < 1e-9

    depth = sc.DepthFrame(4, 1, [1000, 0, 1000, 1000])
    shape = sc.sort([(0.0, 0.0), (1.0, 0.0), (3.0, 0.0)], sc.ShapeConfig.centerline(3))
    lifted = shape.lift(depth, sc.Intrinsics(100.0, 100.0, 0.0, 0.0))
    assert [p[2] for p in lifted] == [1000.0, 1000.0, 1000.0], "hole filled from a neighbour"


def check_files():
    with tempfile.TemporaryDirectory() as tmp:
        data = os.path.join(tmp, "data")
        assert sc.synth(sc.ShapeConfig.centerline(10), 2, 7, data) == 2
        shape, secs = sc.detect_file(os.path.join(data, "masks", "0000.pgm"), sc.ShapeConfig.centerline(10))
        assert len(shape) == 10 and secs >= 0.0
        depth = sc.DepthFrame.read(os.path.join(data, "depth", "0000.pgm"))
        assert (depth.width, depth.height) == (640, 360)
        report = sc.bench(data, ["som", "kma"], seed=1)
        lines = report.splitlines()
        assert lines[0] == "method,sc,ch,time_s"
        assert [l.split(",")[0] for l in lines[1:]] == ["KMA", "SOM"]
        try:
            sc.detect_file(os.path.join(tmp, "missing.pgm"), sc.ShapeConfig.centerline(10))
        except OSError:
            pass
        else:
            raise AssertionError("missing file must raise OSError")


if __name__ == "__main__":
    for check in (check_config, check_fit_and_sort, check_metrics, check_lift, check_files):
        check()
        print(f"ok  {check.__name__}")
    print("python smoke test passed")
