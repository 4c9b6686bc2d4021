#!/usr/bin/env python3
"""Arbitrary-precision reference values for the compression bounds.

Written independently of the Rust evaluator: every formula is transcribed
term by term and evaluated with mpmath at 60 significant digits on the exact
binary values of the sampled f64 parameters.

Regenerate with:
    python3 crates/core/tests/oracle/bounds_oracle.py > crates/core/tests/fixtures/bounds_oracle.json
"""

import json
import random

from mpmath import mp, mpf, sqrt, log, e

mp.dps = 60


def q_bound(n, alpha, k, b, delta, L):
    n, alpha, k, b, delta, L = map(mpf, (n, alpha, k, b, delta, L))
    lc = log(4 * e**2 / delta)
    coef = 20 * sqrt(k / n) + 20 * sqrt(b / n) + 15 * sqrt(lc / n) + 1
    rest = (
        (6 * L + 18) * k / n
        + 8 * L * sqrt(k / n)
        + (2 * L + 12) * b / n
        + 7 * L * sqrt(b / n)
        + (3 * L + 10) * lc / n
        + 6 * L * sqrt(lc / n)
    )
    return coef * alpha + rest


def hoeffding(n, alpha, k, b, delta, L):
    n, k, b, delta, L = map(mpf, (n, k, b, delta, L))
    m = n - 2 * k
    return sqrt(4 * L**2 / m * (k * log(4) + log(4 / delta))) + sqrt(L**2 / m * b * log(2))


def _bernstein_shape(n, alpha, t, b, L):
    a = 5 * sqrt(8 * t / n) + 4 * sqrt(8 * b * log(2) / n)
    return (
        alpha * a
        + 2 * L * sqrt(8 * t / n)
        + (28 + 8 * L) * t / (3 * n)
        + L * sqrt(8 * b * log(2) / n)
        + 28 * b * log(2) / (3 * n)
    )


def bernstein(n, alpha, k, b, delta, L):
    n, alpha, k, b, delta, L = map(mpf, (n, alpha, k, b, delta, L))
    t = log(4 / delta) + k * log(4)
    return _bernstein_shape(n, alpha, t, b, L)


def sample_dependent(n, alpha, k, b, delta, L):
    n, alpha, k, b, delta, L = map(mpf, (n, alpha, k, b, delta, L))
    t = log(4 * (k + 1) * (k + 2) * (b + 1) * (b + 2) / delta) + k * log(4)
    return _bernstein_shape(n, alpha, t, b, L)


def final(n, alpha, k, b, delta, L):
    n, alpha, k, b, delta, L = map(mpf, (n, alpha, k, b, delta, L))
    lc = log(4 * e**2 / delta)
    b1 = 20 * sqrt(k / n) + 20 * sqrt(b / n) + 15 * sqrt(lc / n)
    b2 = (
        (6 * k / n + 8 * sqrt(k / n) + 2 * b / n + 7 * sqrt(b / n) + 3 * lc / n + 6 * sqrt(lc / n)) * L
        + 18 * k / n
        + 12 * b / n
        + 10 * lc / n
    )
    return b1 * alpha + b2


def emp_bernstein(mean, n, delta, L):
    mean, n, delta, L = map(mpf, (mean, n, delta, L))
    c = log(4 / delta)
    return mean * sqrt(2 * c / (n - 1)) + L * sqrt(2 * c / (n - 1)) + 7 * L * c / (3 * (n - 1))


def fmt(x):
    return mp.nstr(x, 40, strip_zeros=False)


def main():
    rng = random.Random(20240611)
    cases = []
    for _ in range(1000):
        n = int(10 ** rng.uniform(1.5, 6.5))
        kmax = max(0, (n - 5) // 4 - 1)
        k = rng.randint(0, min(kmax, 5000))
        # keep k < n/4 - 1 so every mode's size condition holds
        while not (4 * k + 4 < n):
            k -= 1
        b = rng.randint(0, 300)
        L = rng.uniform(0.0, 10.0)
        alpha = rng.uniform(0.0, L)
        delta = 10 ** rng.uniform(-8, -0.0005)
        eb_n = rng.randint(2, 10**6)
        eb_L = rng.uniform(1e-3, 10.0)
        eb_mean = rng.uniform(0.0, eb_L)
        cases.append(
            {
                "n": n,
                "alpha": alpha,
                "k": k,
                "b": b,
                "delta": delta,
                "l": L,
                "q": fmt(q_bound(n, alpha, k, b, delta, L)),
                "hoeffding": fmt(hoeffding(n, alpha, k, b, delta, L)),
                "bernstein": fmt(bernstein(n, alpha, k, b, delta, L)),
                "sample_dependent": fmt(sample_dependent(n, alpha, k, b, delta, L)),
                "final": fmt(final(n, alpha, k, b, delta, L)),
                "eb_mean": eb_mean,
                "eb_n": eb_n,
                "eb_l": eb_L,
                "empirical_bernstein": fmt(emp_bernstein(eb_mean, eb_n, delta, eb_L)),
            }
        )
    # the fixed example tuple n=1000, alpha=0.1, k=10, b=5, delta=0.05, L=1
    ex = {"n": 1000, "alpha": 0.1, "k": 10, "b": 5, "delta": 0.05, "l": 1.0}
    ex["q"] = fmt(q_bound(1000, 0.1, 10, 5, 0.05, 1.0))
    print(json.dumps({"example": ex, "cases": cases}, indent=1))


if __name__ == "__main__":
    main()
