"""Regenerate oracle_values.json with mpmath brute-force series.

Run from the repository root:  python3 tests/fixtures/generate_oracles.py
Everything is summed term by term at 60 significant digits; no library
hypergeometric routine is involved.
"""

import itertools
import json
import pathlib
import random

import mpmath as mp

mp.mp.dps = 60
STOP = mp.mpf(10) ** -40


def gauss_series(a, b, c, z):
    a, b, c, z = map(mp.mpf, (a, b, c, z))
    term = total = mp.mpf(1)
    i = 0
    while True:
        term *= (a + i) * (b + i) / ((c + i) * (i + 1)) * z
        total += term
        i += 1
        if abs(term) < STOP * abs(total) and i > 5:
            return total


def fa_series(a, b, c, z):
    """Shell-by-shell sum of the n-variable series at 60 digits."""
    n = len(z)
    a = mp.mpf(a)
    b, c, z = [list(map(mp.mpf, v)) for v in (b, c, z)]
    total = mp.mpf(0)
    w = 0
    quiet = 0
    while True:
        shell = mp.mpf(0)
        for p in itertools.product(range(w + 1), repeat=n - 1):
            last = w - sum(p)
            if last < 0:
                continue
            p = p + (last,)
            t = mp.rf(a, w)
            for bk, ck, zk, pk in zip(b, c, z, p):
                t *= mp.rf(bk, pk) / mp.rf(ck, pk) * zk ** pk / mp.factorial(pk)
            shell += t
        total += shell
        quiet = quiet + 1 if abs(shell) < STOP * abs(total) else 0
        if quiet >= 3:
            return total
        w += 1


def main():
    rng = random.Random(20240601)
    cases = []
    fixed_2f1 = [(1, 1, 2, 0.5), (0.5, 0.5, 1.5, 0.25), (2.3, -1.7, 3.1, 0.9),
                 (1.5, 2.5, 0.75, 0.6), (0.3, 0.7, 1.2, -0.5), (3.2, 1.1, 2.4, -0.85)]
    for a, b, c, z in fixed_2f1:
        cases.append({"kind": "gauss_2f1", "a": a, "b": b, "c": c, "z": z})
    for _ in range(16):
        a, b = rng.uniform(-2.5, 3.0), rng.uniform(0.1, 3.0)
        c = rng.uniform(0.3, 4.0)
        z = rng.choice([rng.uniform(0.0, 0.9), rng.uniform(-0.9, 0.0)])
        cases.append({"kind": "gauss_2f1", "a": a, "b": b, "c": c, "z": z})
    for n in (2, 2, 2, 2, 2, 2, 3, 3, 3, 3, 3, 3):
        a = rng.uniform(0.1, 2.0)
        b = [rng.uniform(-1.0, 2.0) for _ in range(n)]
        c = [rng.uniform(0.5, 3.0) for _ in range(n)]
        raw = [rng.uniform(-1.0, 1.0) for _ in range(n)]
        scale = rng.uniform(0.05, 0.5) / sum(abs(v) for v in raw)
        z = [v * scale for v in raw]
        cases.append({"kind": "fa_direct", "a": a, "b": b, "c": c, "z": z})
    # nonnegative cases used to audit the truncation-error estimate
    for _ in range(20):
        a = rng.uniform(0.1, 2.0)
        b = [rng.uniform(0.1, 2.0) for _ in range(2)]
        c = [rng.uniform(0.5, 3.0) for _ in range(2)]
        zsum = rng.uniform(0.3, 0.7)
        w = rng.uniform(0.1, 0.9)
        cases.append({"kind": "fa_tail", "a": a, "b": b, "c": c,
                      "z": [w * zsum, (1 - w) * zsum]})
    for case in cases:
        if case["kind"] == "gauss_2f1":
            v = gauss_series(case["a"], case["b"], case["c"], case["z"])
        else:
            v = fa_series(case["a"], case["b"], case["c"], case["z"])
        case["value"] = mp.nstr(v, 30)
    path = pathlib.Path(__file__).with_name("oracle_values.json")
    path.write_text(json.dumps({"digits": 60, "cases": cases}, indent=1) + "\n")
    print(f"wrote {len(cases)} cases to {path}")


if __name__ == "__main__":
    main()
