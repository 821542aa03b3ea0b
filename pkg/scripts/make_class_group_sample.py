"""Generate the shipped sample of imaginary quadratic class groups.

Class groups are computed from reduced positive definite binary quadratic
forms of fundamental discriminant D < 0 under Gauss composition; the abelian
invariants follow from counting the elements killed by each prime power.

    python scripts/make_class_group_sample.py --max-abs 5000 > src/clmlab/data/sample_class_groups.csv
"""

from __future__ import annotations

import argparse
import sys
from math import gcd

from sympy import factorint


def is_fundamental(d: int) -> bool:
    if d % 4 == 1:
        return all(e == 1 for e in factorint(abs(d)).values())
    if d % 4 == 0:
        m = d // 4
        if m % 4 not in (2, 3):
            return False
        return all(e == 1 for e in factorint(abs(m)).values())
    return False


def reduce_form(a: int, b: int, c: int) -> tuple[int, int, int]:
    while True:
        if c < a or (c == a and b < 0):
            a, b, c = c, -b, a
            continue
        if b > a or b <= -a:
            k = (a - b) // (2 * a)
            b, c = b + 2 * k * a, a * k * k + b * k + c
            continue
        return a, b, c


def reduced_forms(d: int) -> list[tuple[int, int, int]]:
    out = []
    a = 1
    while 3 * a * a <= -d:
        for b in range(-a + 1, a + 1):
            if (b * b - d) % (4 * a):
                continue
            c = (b * b - d) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            out.append((a, b, c))
        a += 1
    return out


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def compose(f, g):
    """Gauss composition (Shanks' formulation via two extended gcds)."""
    a1, b1, c1 = f
    a2, b2, c2 = g
    if a1 > a2:
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, y1, _ = _xgcd(a2, a1)
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, x2, y2 = _xgcd(s, d)
        y2 = -y2
    v1, v2 = a1 // d1, a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (c2 * d1 + r * (b2 + v2 * r)) // v1
    return reduce_form(a3, b3, c3)


def class_group_invariants(d: int) -> tuple[int, ...]:
    forms = reduced_forms(d)
    h = len(forms)
    ident = reduce_form(1, d % 2, (d % 2 - d) // 4)
    orders = []
    for f in forms:
        x, k = f, 1
        while x != ident:
            x, k = compose(x, f), k + 1
            if k > h:
                raise ArithmeticError(f"composition does not close for D={d}")
        orders.append(k)
    # p-parts: #{x : x^(p^k) = 1} = p^(sum_i min(lambda_i, k))
    chain: list[int] = []
    parts_by_p = {}
    for p, e in factorint(h).items():
        counts = []
        for k in range(e + 1):
            n = sum(1 for o in orders if (p**k) % o == 0)
            counts.append(_log(n, p))
        lam = []  # number of parts >= k is counts[k] - counts[k-1]
        ge = [counts[k] - counts[k - 1] for k in range(1, e + 1)]
        for k in range(1, e + 1):
            nxt = ge[k] if k < e else 0
            lam.extend([k] * (ge[k - 1] - nxt))
        parts_by_p[p] = sorted(lam, reverse=True)
    length = max((len(v) for v in parts_by_p.values()), default=0)
    for i in range(length):
        val = 1
        for p, lam in parts_by_p.items():
            if i < len(lam):
                val *= p ** lam[i]
        chain.append(val)
    return tuple(sorted(chain))


def _log(n: int, p: int) -> int:
    k = 0
    while n > 1:
        if n % p:
            raise ArithmeticError("element count is not a prime power")
        n //= p
        k += 1
    return k


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-abs", type=int, default=5000)
    args = ap.parse_args(argv)
    out = sys.stdout
    out.write("label,invariants\n")
    for a in range(3, args.max_abs + 1):
        d = -a
        if not is_fundamental(d):
            continue
        inv = class_group_invariants(d)
        out.write(f"{d},{'.'.join(map(str, inv))}\n")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
