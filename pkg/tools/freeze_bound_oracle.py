#!/usr/bin/env python3
"""Arbitrary-precision reference evaluation of the confidence-budget and
loss-gap-bound formulas.

Run once to produce the frozen regression constants used by
tests/test_acceptance.py (criterion 4).  Independent of the package: only
mpmath, no imports from driftcache.
"""

import math

from mpmath import mp, mpf

mp.dps = 60

PI = mp.pi
E = mp.e


def bernoulli_psi(p, a_min, a_max, alpha_min, alpha_max):
    first = a_min * (p - alpha_max) ** 2 / (1 + a_max * (alpha_min - p) / 3)
    second = (p - alpha_min) ** 2
    return min(first, second)


def budget_general(mu, delta, lengths, beta, one_minus_zeta_rate, j_terms=4000):
    """delta/2 - exp(-mu) - sum beta(a_i) - exp(-mu) * sum_j sum_i (1-zeta) mu^j/j!

    one_minus_zeta_rate: per-user exponent c, with 1-zeta(j) = min(1, 2 exp(-c j)).
    """
    two_m = len(lengths)
    void = mp.exp(-mu)
    mixing = mp.fsum(beta(a) for a in lengths[1 : two_m - 1])
    total = mp.mpf(0)
    for j in range(1, j_terms + 1):
        pmf = mp.exp(j * mp.log(mu) - mu - mp.loggamma(j + 1))
        one_minus = min(mpf(1), 2 * mp.exp(-one_minus_zeta_rate * j))
        total += pmf * one_minus * two_m
    return delta / 2 - void - mixing - total, void, mixing, total


def budget_bracket(mu, delta, lengths, beta, m, inner_decay):
    """delta/2 - (exp(-mu) + sum beta + 4m [exp(-mu) (exp(-mu exp(-inner_decay)) - 1)])"""
    two_m = len(lengths)
    void = mp.exp(-mu)
    mixing = mp.fsum(beta(a) for a in lengths[1 : two_m - 1])
    bracket = mp.exp(-mu) * (mp.exp(-mu * mp.exp(-inner_decay)) - 1)
    return delta / 2 - (void + mixing + 4 * m * bracket), void, mixing, bracket


def gap_bound(residual, coef, a_max, t, r_pair, d_pair):
    dev = coef * mp.sqrt(a_max * mp.log(2 / residual) / t)
    return 2 * max(r_pair) + max(d_pair) + dev, dev


def report(name, residual, eps, dev):
    print(f"{name}:")
    print(f"  residual_delta = {mp.nstr(residual, 30)}")
    print(f"  epsilon        = {mp.nstr(eps, 30)}")
    print(f"  deviation      = {mp.nstr(dev, 30)}")


def main():
    # P1: general form, Bernoulli count bound, equal blocks
    lam_u, R = 1e-4, 400.0
    mu = mpf(lam_u) * PI * mpf(R) ** 2
    lengths = [5] * 6
    a_min, a_max, m, t = 5, 5, 3, 30
    p, al_min, al_max = 0.1, 0.2, 0.9
    psi = bernoulli_psi(mpf(p), a_min, a_max, mpf(al_min), mpf(al_max))
    rate = psi * a_min / (2 * mpf(p))
    beta = lambda s: mpf("0.05") * mpf("0.5") ** s
    res, void, mixing, mass = budget_general(mu, mpf("0.2"), lengths, beta, rate)
    coef = 20 * mpf(al_max) * mpf(1) * a_max / (mpf(1) * a_min * mpf(al_min))
    eps, dev = gap_bound(res, coef, a_max, t, (mpf("0.02"), mpf("0.025")), (mpf("0.01"), mpf("0.012")))
    report("P1 general+bernoulli", res, eps, dev)
    print(f"  void={mp.nstr(void, 20)} mixing={mp.nstr(mixing, 20)} count_mass={mp.nstr(mass, 20)}")

    # P2: general form, Poisson count bound, unequal blocks
    lam_u, R = 1e-4, 350.0
    mu = mpf(lam_u) * PI * mpf(R) ** 2
    lengths = [6, 5, 5, 5, 5, 4]
    a_min, a_max, m, t = 4, 6, 3, 30
    lam_r, slot = mpf("0.09"), mpf("1.0")
    rate = a_min * lam_r * slot
    al_min, al_max = lam_r * slot / E**2, lam_r * slot * E
    beta = lambda s: mpf("0.02") * mpf("0.8") ** s
    res, void, mixing, mass = budget_general(mu, mpf("0.15"), lengths, beta, rate)
    coef = 100 * al_max * mpf(1) * a_max / (mpf(1) * a_min * al_min)
    eps, dev = gap_bound(res, coef, a_max, t, (mpf("0.1"), mpf("0.09")), (mpf("0.3"), mpf("0.25")))
    report("P2 general+poisson", res, eps, dev)
    print(f"  void={mp.nstr(void, 20)} mixing={mp.nstr(mixing, 20)} count_mass={mp.nstr(mass, 20)}")

    # P3: Bernoulli bracket form (inner decay phi = 2 exactly by construction)
    lam_u, R = 3.0 / (math.pi * 100.0**2), 100.0
    mu = mpf(lam_u) * PI * mpf(R) ** 2
    lengths = [5] * 10
    a_min, a_max, m, t = 5, 5, 5, 50
    p = 0.1
    al_min = 0.1 + math.sqrt(0.08)
    al_max = 0.9
    psi = bernoulli_psi(mpf(p), a_min, a_max, mpf(al_min), mpf(al_max))
    phi = a_min * psi / (2 * mpf(p))
    beta = lambda s: mpf(0)
    res, void, mixing, bracket = budget_bracket(mu, mpf("0.2"), lengths, beta, m, phi)
    coef = 50 * mpf(al_max) * mpf(1) * a_max / (mpf(1) * a_min * mpf(al_min))
    eps, dev = gap_bound(res, coef, a_max, t, (mpf("0.05"), mpf("0.04")), (mpf("0.3"), mpf("0.2")))
    report("P3 bernoulli bracket", res, eps, dev)
    print(f"  phi={mp.nstr(phi, 20)} bracket={mp.nstr(bracket, 20)}")

    # P4: Poisson bracket form at the published geometry (mu = 100 pi)
    lam_u, R = 1e-4, 1000.0
    mu = mpf(lam_u) * PI * mpf(R) ** 2
    lengths = [10] * 10
    a_min, a_max, m, t = 10, 10, 5, 100
    lam_r, slot = mpf("0.09"), mpf("1.0")
    beta = lambda s: mpf(0)
    res, void, mixing, bracket = budget_bracket(mu, mpf("0.2"), lengths, beta, m, a_min * lam_r * slot)
    coef = 100 * mpf(1) * a_max * E / (a_min * mpf(1))
    eps, dev = gap_bound(res, coef, a_max, t, (mpf("0.02"), mpf("0.03")), (mpf("0.05"), mpf("0.04")))
    report("P4 poisson bracket", res, eps, dev)
    print(f"  bracket={mp.nstr(bracket, 20)}")

    # P5: general form, Bernoulli count bound, unequal blocks, B != R0
    lam_u, R = 1.5e-4, 400.0
    mu = mpf(lam_u) * PI * mpf(R) ** 2
    lengths = [7, 7, 6, 6, 6, 6, 5, 5]
    a_min, a_max, m, t = 5, 7, 4, 48
    p, al_min, al_max = 0.05, 0.15, 0.8
    psi = bernoulli_psi(mpf(p), a_min, a_max, mpf(al_min), mpf(al_max))
    rate = psi * a_min / (2 * mpf(p))
    beta = lambda s: mpf("0.1") * mpf("0.6") ** s
    res, void, mixing, mass = budget_general(mu, mpf("0.12"), lengths, beta, rate)
    B, R0 = mpf(3e6), mpf(1e6)
    coef = 30 * mpf(al_max) * B * a_max / (R0 * a_min * mpf(al_min))
    eps, dev = gap_bound(res, coef, a_max, t, (mpf("1.2"), mpf("1.0")), (mpf("0.8"), mpf("0.9")))
    report("P5 general+bernoulli unequal", res, eps, dev)
    print(f"  void={mp.nstr(void, 20)} mixing={mp.nstr(mixing, 20)} count_mass={mp.nstr(mass, 20)}")


if __name__ == "__main__":
    main()
