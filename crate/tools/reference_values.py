"""Multiprecision reference values frozen into the Rust test-suite.

Everything here is computed from the closed-form transfer functions with mpmath,
independently of the Rust code paths. Run with `python3 tools/reference_values.py`.
"""
import sys
from multiprocessing import Pool

import mpmath as mp

mp.mp.dps = 30
A = mp.mpf("0.045")
B = mp.mpf("0.5")


def log_side(s, upper=True):
    # principal log, with an explicit side for points on the negative axis
    if mp.im(s) == 0 and mp.re(s) < 0:
        return mp.log(-mp.re(s)) + (1j * mp.pi if upper else -1j * mp.pi)
    return mp.log(s)


def m2(s, a=A, b=B, upper=True):
    ls = log_side(s, upper)
    return (mp.log(b) + ls) / (mp.log(a) + ls) * (a * s - 1) / (b * s - 1)


def m(s, **kw):
    return mp.sqrt(m2(s, **kw))


def p_tilde(x, s, **kw):
    z = s * m(s, **kw)
    return mp.sinh(x * z) / mp.sinh(z)


def t_tilde(x, s, **kw):
    mm = m(s, **kw)
    z = s * mm
    return mp.cosh(x * z) / (mm * mp.sinh(z))


def forcing(s, c=mp.mpf("0.1"), tau=mp.mpf(1)):
    return c * tau**2 / (1 + tau * s) ** 2


def bromwich(F, t, omega_max=12000, sigma=mp.mpf("20.3")):
    """Vertical-line trapezoid with period 2t; aliasing ~ e^{-2 sigma}."""
    t = mp.mpf(t)
    c = sigma / t
    h = mp.pi / t
    total = mp.re(F(mp.mpc(c, 0))) / 2
    k = 1
    while k * h <= omega_max:
        s = mp.mpc(c, k * h)
        total += mp.re(F(s) * mp.expj(k * h * t))
        k += 1
    return mp.exp(c * t) * h / mp.pi * total


def field(job):
    name, x, t = job
    x = mp.mpf(x)
    if name == "P":
        F = lambda s: p_tilde(x, s)
    elif name == "u_H":
        F = lambda s: p_tilde(x, s) / s
    elif name == "T":
        F = lambda s: t_tilde(x, s) * 1
    elif name == "sigma_H":
        F = lambda s: t_tilde(x, s)
    elif name == "u_F":
        F = lambda s: forcing(s) * p_tilde(x, s)
    elif name == "u_total":
        F = lambda s: (1 / s + forcing(s)) * p_tilde(x, s)
    elif name == "sigma_total":
        F = lambda s: (1 + s * forcing(s)) * t_tilde(x, s)
    else:
        raise ValueError(name)
    v1 = bromwich(F, t, omega_max=9000)
    v2 = bromwich(F, t, omega_max=13000)
    return name, float(x), float(t), v2, abs(v2 - v1)


def cut_p(x, q):
    return -mp.im(p_tilde(x, mp.mpc(-q, 0), upper=True)) / mp.pi


def cut_integral(job):
    x, t = mp.mpf(job[0]), mp.mpf(job[1])
    pts = [0, mp.mpf("1e-6"), mp.mpf("1e-3"), mp.mpf("0.1"), 1 / B, 1 / A, 100, 1000]
    return job[0], job[1], mp.quad(lambda q: cut_p(x, q) * mp.exp(-q * t), pts)


def main():
    out = []
    s1 = mp.mpf(1)
    out.append(("M(1)", m(s1)))
    out.append(("P(0.5, 2e^{i pi/4})", p_tilde(mp.mpf("0.5"), 2 * mp.expjpi(mp.mpf("0.25")))))
    out.append(("T(0.25, 1+i)", t_tilde(mp.mpf("0.25"), mp.mpc(1, 1))))
    out.append(("M(3+4i)", m(mp.mpc(3, 4))))
    out.append(("M(q=2 upper)", m(mp.mpc(-2, 0), upper=True)))

    guesses = {1: mp.mpc(-1.0063, 5.5359), 2: mp.mpc(-2.1524, 12.0963), 10: mp.mpc(-9.5769, 72.193),
               100: mp.mpc(-56.3475, 832.652), 400: mp.mpc(-157.6424, 3488.2095)}
    poles = {}
    for n, g in guesses.items():
        poles[n] = mp.findroot(lambda s: s * m(s) - 1j * n * mp.pi, g)
        out.append((f"pole {n}", poles[n]))

    def res_t(x, n, t):
        s = poles[n]
        d = mp.diff(lambda z: mp.sinh(z * m(z)), s)
        return mp.cosh(x * s * m(s)) * mp.exp(s * t) / (m(s) * d)

    def res_p(x, n, t):
        s = poles[n]
        d = mp.diff(lambda z: mp.sinh(z * m(z)), s)
        return mp.sinh(x * s * m(s)) * mp.exp(s * t) / d

    out.append(("res_T(x=0.75, n=2, t=2)", res_t(mp.mpf("0.75"), 2, 2)))
    out.append(("res_T(x=0.6, n=2, t=2)", res_t(mp.mpf("0.6"), 2, 2)))
    out.append(("res_P(x=0.5, n=1, t=1)", res_p(mp.mpf("0.5"), 1, 1)))
    out.append(("res_P(x=0.3, n=10, t=0.5)", res_p(mp.mpf("0.3"), 10, mp.mpf("0.5"))))
    out.append(("res_P(x=0.35, n=10, t=0.05)", res_p(mp.mpf("0.35"), 10, mp.mpf("0.05"))))

    for label, val in out:
        print(f"{label}: {mp.nstr(val, 20)}")
    sys.stdout.flush()

    cut_jobs = [("0.25", "1"), ("0.1", "0.5"), ("0.37", "2.5"), ("0.5", "1"), ("0.62", "0.8"),
                ("0.75", "3"), ("0.83", "1.7"), ("0.9", "4"), ("0.15", "7"), ("0.55", "12")]
    field_jobs = [("P", "0.5", "2"), ("T", "0.25", "5"), ("u_F", "0.5", "1")]
    for x in ("0.25", "0.5", "0.75"):
        for t in ("1", "5", "10"):
            field_jobs.append(("u_H", x, t))
            field_jobs.append(("sigma_H", x, t))
    for x, t in (("0.25", "1"), ("0.5", "1"), ("0.75", "1"), ("0.25", "2"), ("0.5", "5"), ("0.75", "5")):
        field_jobs.append(("u_total", x, t))
        field_jobs.append(("sigma_total", x, t))
    field_jobs.append(("sigma_H", "0.25", "15"))
    field_jobs.append(("sigma_H", "0.75", "15"))

    with Pool() as pool:
        for x, t, v in pool.imap(cut_integral, cut_jobs):
            print(f"cut_P x={x} t={t}: {mp.nstr(v, 17)}")
            sys.stdout.flush()
        for name, x, t, v, d in pool.imap(field, field_jobs):
            print(f"{name} x={x} t={t}: {mp.nstr(v, 17)}  (truncation check {mp.nstr(d, 3)})")
            sys.stdout.flush()


if __name__ == "__main__":
    main()
