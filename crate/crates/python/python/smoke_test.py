"""Smoke test for the pyvofwave extension."""

import math

import pyvofwave as vw


def main():
    assert abs(vw.gamma(5.0) - 24.0) < 1e-12
    assert abs(vw.gamma(0.5) - math.sqrt(math.pi)) < 1e-13
    # E_{(1,2),1}(z, 0) = exp(z)
    assert abs(vw.ml2(1.0, 2.0, 1.0, -0.7, 0.0) - math.exp(-0.7)) < 1e-13

    # mu = 0: T'' + T - T(0) + kappa T = 0
    kappa = math.pi**2
    w = math.sqrt(kappa + 1.0)
    t1, t2 = vw.mode_functions(kappa, 0.0, 0.3)
    assert abs(t1 - (1.0 + kappa * math.cos(w * 0.3)) / (kappa + 1.0)) < 1e-10
    assert abs(t2 - math.sin(w * 0.3) / w) < 1e-10

    a, b = vw.kernel_weights(10, 0.01, 0.4)
    assert len(a) == 10 and len(b) == 11
    assert abs(sum(b)) < 1e-10 * abs(b[-1])

    nodes, weights = vw.gauss_rule(6)
    assert abs(sum(w * x**11 for x, w in zip(nodes, weights)) - 1 / 12) < 1e-14

    assert abs(vw.co_rate(3.280e-3, 2.245e-3, 100, 200) - 0.547) < 5e-4
    assert vw.ao_rate(0.0, 10) is None

    mu = vw.MuProfile("linear", 0.2, 0.6, 1.0)
    assert abs(mu(0.5) - 0.4) < 1e-15 and mu.kind == "linear"

    exp = vw.Experiment.benchmark("ex1")
    run = exp.run(n_modes=20, n_steps=100)
    assert abs(run.error - 3.280e-3) / 3.280e-3 < 0.01, run.error
    u = run.field([0.25, 0.5])
    assert len(u) == 2 and all(math.isfinite(v) for v in u)

    rows = vw.Experiment("problem = ex2-i\nN = 20\ntaus = 0.01, 0.005").table("time")
    assert rows[0][2] is None and abs(rows[1][2] - 0.392) < 0.01, rows

    try:
        vw.Experiment("no_such_key = 1")
    except ValueError:
        pass
    else:
        raise AssertionError("bad config accepted")

    print("pyvofwave smoke test ok")


if __name__ == "__main__":
    main()
