#!/usr/bin/env python3
"""Generate frozen reference values for the test suite.

All values are computed with mpmath at 60+ decimal digits, far beyond f64,
so the committed numbers are exact to the last printed digit. The spherical
Bessel values double as the power-series reference: mpmath evaluates the
defining series/connection formulas in arbitrary precision, which is what a
term-by-term series summation converges to.

Run from the repo root:  python3 tools/gen_reference.py
Writes crates/photon-fcs/tests/data/bessel_reference.json and prints the
scalar constants that are frozen directly into test source.
"""

import json
from mpmath import mp, mpf, mpc, besselj, sqrt, cos, sin, exp, pi, binomial, diff

mp.dps = 60


def sph_j(n, z):
    """Spherical Bessel function of the first kind, integer n >= -1."""
    z = mpc(z)
    if n == -1:
        return cos(z) / z
    return sqrt(pi / (2 * z)) * besselj(n + mpf(1) / 2, z)


def sph_j_series(n, z, tol=mpf("1e-50")):
    """Direct power-series summation (independent cross-check of sph_j)."""
    z = mpc(z)
    # j_n(z) = z^n * sum_k (-z^2/2)^k / (k! (2n+2k+1)!!)
    dfac = mpf(1)
    for i in range(3, 2 * n + 2, 2):
        dfac *= i
    term = z ** n / dfac
    total = term
    k = 0
    while abs(term) > tol * max(abs(total), mpf(1)):
        k += 1
        term *= (-z * z / 2) / (k * (2 * n + 2 * k + 1))
        total += term
        if k > 20000:
            raise RuntimeError("series did not converge")
    return total


def rho_of(gamma, delta):
    return (mpc(delta) + 1j * mpc(gamma)) / 2


def c_coeff(n, rho):
    """c_n(rho) = rho e^{i rho} [j_{n-1}(rho) - i j_n(rho)]."""
    return rho * exp(1j * rho) * (sph_j(n - 1, rho) - 1j * sph_j(n, rho))


def kernel(gamma, delta, w):
    """Closed trig form of the generating kernel."""
    a = mpc(delta) + 1j * mpc(gamma)
    kl = sqrt(a * a + 8 * mpc(gamma) * mpc(w))
    if abs(kl) < mpf("1e-30"):
        return exp(1j * a / 2) * (1 - 1j * a / 2)
    return exp(1j * a / 2) * (cos(kl / 2) - 1j * a * sin(kl / 2) / kl)


def s_nm_bessel(gamma, delta, n, m):
    """Binomial Bessel sum for the photon-pair scattering coefficient."""
    rho = rho_of(gamma, delta)
    q = -mpc(gamma) / (2 * rho)
    total = mpc(0)
    for p in range(n + 1):
        total += binomial(n, p) * q ** (p + m) * c_coeff(p + m, rho)
    return total


def s_nm_derivative(gamma, delta, n, m):
    """(1/2^{n+m}) (d/dw + 2)^n (d/dw)^m kernel |_{w=0} via high-precision
    numerical differentiation -- fully independent of the Bessel route."""
    total = mpc(0)
    for p in range(n + 1):
        d = diff(lambda w: kernel(gamma, delta, w), 0, p + m)
        total += binomial(n, p) * 2 ** (n - p) * d
    return total / 2 ** (n + m)


def fmt(z):
    z = mpc(z)
    return [float(z.real), float(z.imag)]


def main():
    # --- spherical Bessel reference grid -------------------------------
    grid_re = [mpf("0.1"), mpf(1), mpf(10), mpf(50)]
    grid_im = [mpf(0), mpf("0.5"), mpf(5), mpf(25)]
    records = []
    for a in grid_re:
        for b in grid_im:
            rho = mpc(a, b)
            for n in range(0, 101):
                records.append({"n": n, "rho": fmt(rho), "j": fmt(sph_j(n, rho))})
    # spot checks at the outer edge of the supported domain
    spots = [(200, mpc(200, 0)), (300, mpc(200, 0)), (300, mpc(120, 80)),
             (150, mpc(30, 15)), (5, mpc(2, 3)), (0, mpc(3, -1))]
    for n, rho in spots:
        records.append({"n": n, "rho": fmt(rho), "j": fmt(sph_j(n, rho))})

    # sanity: connection formula agrees with the direct series
    for n, rho in [(5, mpc(2, 3)), (12, mpc(1, "0.5")), (40, mpc(10, 5)), (0, mpc("0.1", 25))]:
        d = abs(sph_j(n, rho) - sph_j_series(n, rho))
        assert d < mpf("1e-45") * max(1, abs(sph_j(n, rho))), (n, rho, d)

    out = {"comment": "spherical Bessel j_n(rho), 60-digit reference, [re, im] pairs",
           "records": records}
    path = "crates/photon-fcs/tests/data/bessel_reference.json"
    import os
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w") as f:
        json.dump(out, f, indent=None, separators=(",", ":"))
    print(f"wrote {path} with {len(records)} records")

    # --- scalar constants frozen into test source ----------------------
    mp.dps = 60
    print("\nj_5(2+3i)              =", mpc(sph_j(5, mpc(2, 3))))
    print("j_-1(pi)               =", mpc(sph_j(-1, pi)))
    print("c_2(rho=1+1i)          =", mpc(c_coeff(2, mpc(1, 1))))
    print("c_3(rho=50)            =", mpc(c_coeff(3, mpf(50))))
    print("c_3(50) - i^3 abs      =", abs(c_coeff(3, mpf(50)) - mpc(0, -1)))

    # c_2 via kernel derivatives: c_k = (-rho/gamma)^k d^k/dw^k kernel|_0
    # rho = 1+1i corresponds to gamma = 2, delta = 2
    g, d_ = mpf(2), mpf(2)
    rho = rho_of(g, d_)
    assert abs(rho - mpc(1, 1)) < mpf("1e-50")
    c2_jet = (-rho / g) ** 2 * diff(lambda w: kernel(g, d_, w), 0, 2)
    print("c_2 via kernel deriv   =", mpc(c2_jet))
    print("  route difference     =", abs(c2_jet - c_coeff(2, mpc(1, 1))))

    # s_21 at gamma=2, delta=1, both routes
    s21_b = s_nm_bessel(mpf(2), mpf(1), 2, 1)
    s21_d = s_nm_derivative(mpf(2), mpf(1), 2, 1)
    print("\ns_21(gamma=2,delta=1)  =", mpc(s21_b))
    print("  derivative route     =", mpc(s21_d))
    print("  route difference     =", abs(s21_b - s21_d))

    # extra frozen spot values for the coefficient tests
    for (g, d_, n, m) in [(5, 1, 5, 3), (1, 0, 10, 0), (10, 5, 0, 7), (1, 0, 1, 0)]:
        v = s_nm_bessel(mpf(g), mpf(d_), n, m)
        print(f"s_{{{n},{m}}}(gamma={g},delta={d_}) =", mpc(v))

    # kernel values
    kv = kernel(mpf(1), mpf(1), mpc("0.3", "0.1"))
    print("\nkernel(g=1,d=1,w=0.3+0.1i) =", mpc(kv))
    kv2 = kernel(mpf(1), mpf(1), mpf("0.2"))
    print("kernel(g=1,d=1,w=0.2)      =", mpc(kv2))

    # large-argument magnitude sanity for the asymptotic overlay test
    from mpmath import cosh
    print("\ncos(sqrt(2))           =", cos(sqrt(mpf(2))))
    # squeezed closed-form helper values (|zeta|=1, theta=0, T=0.5)
    from mpmath import atanh, tanh
    zp = atanh(mpf("0.25") * tanh(mpf(1)))   # T^2 as printed
    zc = atanh(mpf("0.5") * tanh(mpf(1)))    # T (general-route equivalent)
    print("atanh(T^2 tanh 1), T=0.5 =", zp)
    print("atanh(T   tanh 1), T=0.5 =", zc)


if __name__ == "__main__":
    main()
