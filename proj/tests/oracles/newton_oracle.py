#!/usr/bin/env python3
"""Independent oracle for the U_3 / Hauptmodul / Newton-identity pipeline.

Uses plain Python integers and fractions with direct infinite-product
expansion (no pentagonal tricks), so it shares no code path with the C++
library. Prints the values that the C++ tests freeze.
"""
import sys
from fractions import Fraction


def product_series(factors, n):
    """prod_{k>=1} (1 - q^{d k})^{e} over (d, e) in factors, to n terms."""
    s = [0] * n
    s[0] = 1
    for d, e in factors:
        k = 1
        while d * k < n:
            step = d * k
            for _ in range(abs(e)):
                if e > 0:
                    for j in range(n - 1, step - 1, -1):
                        s[j] -= s[j - step]
                else:
                    for j in range(step, n):
                        s[j] += s[j - step]
            k += 1
    return s


def shift(s, k):
    return ([0] * k + s)[: len(s)]


def mul(a, b):
    n = min(len(a), len(b))
    r = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j in range(n - i):
                r[i + j] += x * b[j]
    return r


def u3(s):
    return s[::3]


def decompose(g, powers, degree):
    r = list(g)
    coeffs = []
    for j in range(degree + 1):
        c = r[j]
        coeffs.append(c)
        if c:
            for k in range(len(r)):
                r[k] -= c * powers[j][k]
    assert all(x == 0 for x in r), "nonzero residual"
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def pmul(a, b):
    if not a or not b:
        return []
    r = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            r[i + j] += x * y
    return r


def padd(a, b, sign=1):
    n = max(len(a), len(b))
    r = [Fraction(0)] * n
    for i, x in enumerate(a):
        r[i] += x
    for i, x in enumerate(b):
        r[i] += sign * x
    while r and r[-1] == 0:
        r.pop()
    return r


def pscale(a, c):
    r = [x * c for x in a]
    while r and r[-1] == 0:
        r.pop()
    return r


def v3(x):
    x = abs(x)
    v = 0
    while x % 3 == 0:
        x //= 3
        v += 1
    return v


def main():
    i_max = int(sys.argv[1]) if len(sys.argv) > 1 else 10
    out_terms = int(sys.argv[2]) if len(sys.argv) > 2 else 120
    big = 3 * out_terms
    A = shift(product_series([(3, 4), (6, 4), (1, -4), (2, -4)], big), 1)
    F = shift(product_series([(9, 1), (18, 1), (1, -1), (2, -1)], big), 1)
    print("F", F[:10])
    print("A", A[:5])
    a_small = A[:out_terms]
    powers = [[1] + [0] * (out_terms - 1)]
    for j in range(1, 3 * i_max + 2):
        powers.append(mul(powers[-1], a_small))
    ua, ufa = [], []
    Ai = [1] + [0] * (big - 1)
    for i in range(0, i_max + 1):
        if i > 0:
            Ai = mul(Ai, A)
        g = u3(Ai)[:out_terms]
        h = u3(mul(F, Ai))[:out_terms]
        pa = decompose(g, powers, 3 * i) if i > 0 else [1]
        pf = decompose(h, powers, 3 * i + 1)
        ua.append([Fraction(x) for x in pa])
        ufa.append([Fraction(x) for x in pf])
        print(f"U(A^{i})", pa)
        print(f"U(F*A^{i})", pf)
    p1, p2, p3 = (pscale(ua[k], 3) for k in (1, 2, 3))
    e1 = p1
    e2 = pscale(padd(pmul(e1, p1), p2, -1), Fraction(1, 2))
    e3 = pscale(padd(padd(pmul(e2, p1), pmul(e1, p2), -1), p3), Fraction(1, 3))
    for name, e in (("sigma1", e1), ("sigma2", e2), ("sigma3", e3)):
        print(name, [str(x) for x in e])
    for seq, label in ((ua, "A"), (ufa, "FA")):
        for i in range(3, i_max + 1):
            rhs = padd(padd(pmul(e1, seq[i - 1]), pmul(e2, seq[i - 2]), -1), pmul(e3, seq[i - 3]))
            assert padd(seq[i], rhs, -1) == [], (label, i)
    print("recurrence ok")
    print("val U(A^i)", [min(v3(int(x)) for x in ua[i] if x) for i in range(1, i_max + 1)])
    print("val U(FA^i)", [min(v3(int(x)) for x in ufa[i] if x) for i in range(0, i_max + 1)])
    print("deg U(A^i)", [len(ua[i]) - 1 for i in range(1, i_max + 1)])
    print("deg U(FA^i)", [len(ufa[i]) - 1 for i in range(0, i_max + 1)])


if __name__ == "__main__":
    main()
