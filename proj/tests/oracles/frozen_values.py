"""High-precision reference values frozen into the C++ tests.

Run with `python3 tests/oracles/frozen_values.py`; every number printed here
is computed independently of the library with mpmath at 50 digits.
"""
from mpmath import mp, mpf, sqrt, erfc, exp, log, quad, inf, pi

mp.dps = 50

ns = ni = mpf(1) / 100
kappa = mpf(1) / 100
nb = mpf(20)


def snr_pc(ns, ni, c, kappa, nb, eps_r=0, eps_i=0):
    mu = 2 * ni + 1 + eps_i
    omega = 2 * nb + 1 + eps_r
    gamma = 2 * kappa * ns + 2 * nb + 1 + eps_r
    kc2 = kappa * c * c
    return kc2 / (sqrt(kc2 + mu * (1 + gamma)) + sqrt(mu * (1 + omega))) ** 2


cq = 2 * sqrt(ns * (ni + 1))
print("c_q(0.01,0.01)          ", cq)
print("sqrt(kappa)*c_q         ", sqrt(kappa) * cq)
print("snr QI+PC               ", snr_pc(ns, ni, cq, kappa, nb))
print("snr QI+Cal+PC           ", snr_pc(ns, ni, cq, kappa, nb, 1, 0))
print("snr QI+Het+PC           ", snr_pc(ns, ni, cq, kappa, nb, 1, 1))
print("erfc(1)                 ", erfc(1))
print("0.5 erfc(1)             ", erfc(1) / 2)
print("0.5 erfc(sqrt(0.5))     ", erfc(sqrt(mpf(1) / 2)) / 2)
print("erfc(5)                 ", erfc(5))
print("erfc(-2.5)              ", erfc(mpf(-5) / 2))
print("erfc(10)                ", erfc(10))
print("ln erfc(sqrt 700)       ", log(erfc(sqrt(700))))
print("ln erfc(30)             ", log(erfc(30)))
print("ln erfc(100)            ", log(erfc(100)))
print("cs qcb exponent ref    ", kappa * ns * (sqrt(nb + 1) - sqrt(nb)) ** 2)
print("cs hom arg ref M=1     ", sqrt(kappa * ns / (4 * nb + 2)))
print("p hom ref M=1          ", erfc(sqrt(kappa * ns / (4 * nb + 2))) / 2)
print("0.5 exp(-1)             ", exp(-1) / 2)
print("closed-form xi ref     ", 4 * (1 + nb) / (4 + 4 * nb + kappa * ns))
# 1-D classical Chernoff overlap by direct quadrature of the defining integral
def gauss(x, m, v):
    return exp(-(x - m) ** 2 / (2 * v)) / sqrt(2 * pi * v)
c1 = quad(lambda x: gauss(x, 0, 1) ** mpf(0.5) * gauss(x, 0, 2) ** mpf(0.5), [-inf, inf])
print("1-D overlap s=1/2       ", c1, " exponent ", -log(c1))
c2 = quad(lambda x: gauss(x, 0, 1) ** mpf(0.3) * gauss(x, mpf(0.7), mpf(1.5)) ** mpf(0.7), [-inf, inf])
print("1-D overlap s=0.3 mean  ", c2)
# asymptotic checks
for (nbv, niv) in [(mpf(10) ** 6, mpf(1) / 100), (mpf(10) ** 6, mpf(10) ** -6)]:
    c = 2 * sqrt(ns * (niv + 1))
    s_pc = snr_pc(ns, niv, c, kappa, nbv)
    s_het = snr_pc(ns, niv, c, kappa, nbv, 1, 1)
    s_hom = kappa * ns / (4 * nbv + 2)
    print("NB=%s NI=%s" % (nbv, niv))
    print("   pc/asym   ", s_pc * 2 * nbv * (1 + 2 * niv) / ((1 + niv) * kappa * ns))
    print("   het/asym  ", s_het * 4 * nbv / (kappa * ns))
    print("   pc/hom    ", s_pc / s_hom, " target ", 2 * (1 + niv) / (1 + 2 * niv))
