"""Smoke test for the Python extension.

Build and install first, e.g. `maturin develop -m crates/python/Cargo.toml`.
"""

import math

import grandlorentz as gl


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol * max(1.0, abs(b))


def main():
    a = gl.Sequence([1.0, 1.0])
    assert len(a) == 2
    assert close(a.lorentz_norm(2.0, 2.0), math.sqrt(2.0))
    assert a.rearranged() == [1.0, 1.0]

    value, radius = gl.Sequence([3.0, -1j, 0.5]).star_norm(4.0, 2.0)
    assert value > 0 and radius >= 0

    try:
        gl.Sequence([1.0]).lambda_norm(4.0, 3.0)
    except gl.DivergentError:
        pass
    else:
        raise AssertionError("expected DivergentError")

    try:
        gl.Sequence([float("nan")])
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")

    one = gl.StepFunction(2, [1, 1, 1, 1])
    assert one.level == 2
    assert close(one.lorentz_norm(2.0, 2.0), 1.0)
    g, eps = one.grand_norm(1.0, 1.0, 1.0)
    assert abs(g - 0.5) < 1e-6, g
    w = one.walsh().entries()
    assert close(w[0].real, 1.0) and all(abs(z) < 1e-15 for z in w[1:])
    t = one.trig(k_max=3)
    assert len(t) == 7 and close(t[3].real, 1.0)

    assert close(gl.eps_argmax(100, 1.0, 2.0), 0.5 / math.log(100))

    reports = gl.verify("remark38", seed=7, count=20)
    assert len(reports) == 40
    assert all(r["verdict"] == "pass" for r in reports)
    assert reports[0]["params"]["q"] in (3.0, 4.0)

    print("smoke test ok:", len(reports), "remark38 checks")


if __name__ == "__main__":
    main()
