"""Smoke test for the porac_py extension module."""

import math

import porac_py as p


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol


def main():
    g33 = p.Game(3, 3)
    assert g33.pnc_bound == (5, 6)
    assert g33.parity_set() == ["111"]
    value, encoding, decoder = g33.classical_search()
    assert value == (5, 6) and len(encoding) == 8 and len(decoder) >= 1

    s = p.explicit_strategy(g33)
    assert close(s.success_probability(), 0.5 + (1 + math.sqrt(2)) / 6)
    assert s.po_violation() < 1e-12
    rho = s.state("000")
    assert close(sum(rho[i][i].real for i in range(s.dim)), 1.0)
    assert close(p.delta_trace(g33), 8 + 8 * math.sqrt(2))
    assert p.ontic_trace_bound(g33) == 16
    assert p.ontic_trace_bound(p.Game(4, 4)) == 48
    assert p.ontic_trace_bound(p.Game(4, 3)) == 32

    r = p.seesaw(p.Game(4, 3), restarts=10, seed=7)
    assert r.value > 0.76 and r.po_violation < 1e-8
    assert close(r.strategy.success_probability(), r.value)

    expectation, success = p.bell()
    assert close(expectation, 2 + 2 * math.sqrt(2))
    two_bit, po = p.two_bit()
    assert close(two_bit, success) and po < 1e-12
    assert close(p.two_bit(ignore_message=True)[0], 0.5)

    assignment, fidelity = p.interferometer_match()
    assert sorted(assignment) == g33.inputs() and fidelity > 1 - 1e-12

    assert p.pauli("Y") == [[0j, -1j], [1j, 0j]]
    forwarding = [[1.0, 0.0] if x[0] == "0" else [0.0, 1.0] for x in g33.inputs()]
    assert g33.po_violation(forwarding) == 0.0 and g33.po_via_fourier(forwarding)
    parity = [[1.0, 0.0] if x.count("1") % 2 == 0 else [0.0, 1.0] for x in g33.inputs()]
    assert g33.po_violation(parity) > 0.5 and not g33.po_via_fourier(parity)

    try:
        p.Game(2, 3)
    except ValueError:
        pass
    else:
        raise AssertionError("invalid game accepted")
    print("porac_py smoke test passed")


if __name__ == "__main__":
    main()
