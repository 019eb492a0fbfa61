"""Smoke test for the projkit_py extension.

Build and install first, e.g. `cd crates/py && maturin develop --release`.
"""

import json
import math
import sys

import projkit_py as pk


def close(a, b, tol=1e-10):
    return abs(a - b) <= tol


def main():
    failures = []

    def check(name, ok):
        print(("ok   " if ok else "FAIL ") + name)
        if not ok:
            failures.append(name)

    theta = 0.6
    p = pk.Projection.span([[1, 0]])
    q = pk.Projection.span([[math.cos(theta), math.sin(theta)]])
    d = pk.decompose_pair(p, q)
    check("projection rank", p.rank == 1 and p.complement().rank == 1)
    check("generic angle", len(d.generic_angles) == 1 and close(d.generic_angles[0], theta))
    check("norm distance", close(pk.pair_norm_distance(p, q), math.sin(theta)))
    check("d_a", close(pk.d_a(p, q), theta))

    alpha = 1 / math.cos(theta) ** 2
    check("dist from alpha", close(pk.dist_from_alpha(alpha), math.sin(theta)))
    check("d_a from alpha", close(pk.d_a_from_alpha(alpha), theta, 1e-7))

    value, branch, out = pk.closed_form("II", math.pi / 2, 0.3, 0.5)
    check("case II at right angle", close(value, min(math.cos(0.3) ** 2, math.cos(0.5) ** 2), 1e-12))
    oracle = pk.oracle_min("I", 1.2, 0.2, 0.4)
    check("oracle agrees", abs(oracle - pk.closed_form("I", 1.2, 0.2, 0.4)[0]) <= 1e-4)

    numeric, recipe, _, dist = pk.maximin([0, 1, 0])
    check("maximin boundary", close(numeric, recipe, 1e-8) and close(dist, math.sqrt(2 / 3)))

    rep = json.loads(pk.run_example("3.5", {"theta": math.pi / 3}))
    check("catalog 3.5", rep["pass"] and rep["schema"] == "projkit-report/1")

    try:
        pk.run_example("no-such-entry")
        check("unknown entry raises", False)
    except ValueError:
        check("unknown entry raises", True)

    try:
        pk.Projection([[0.5, 0], [0, 0.5]])
        check("non-projection raises", False)
    except ValueError:
        check("non-projection raises", True)

    print(f"{len(failures)} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
