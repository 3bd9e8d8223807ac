#!/usr/bin/env python3
"""Independent oracle for the frozen constants in the unit tests.

Plain fractions.Fraction arithmetic, pointwise definitions only (no
breakpoint algebra), so it shares no code paths with the library.
Run it and compare against the literals in tests/unit/*.cpp.
"""
from fractions import Fraction as F


def interp(points, x):
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        if x0 <= x <= x1:
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    raise ValueError(x)


def tent(d):
    def t(x):
        m = min(int(x * d), d - 1)
        return d * x - m if m % 2 == 0 else 1 + m - d * x
    return t


def reflect(g):
    return lambda x: 1 - g(1 - x)


def block_sum(parts):
    n = len(parts)

    def h(x):
        i = min(int(x * n), n - 1)
        return parts[i](n * x - i) / n + F(i, n)
    return h


def oplus(g, d):
    return block_sum([g if i % 2 == 0 else reflect(g) for i in range(d)])


def grid(den):
    return [F(i, den) for i in range(den + 1)]


def sup(fn, den=720):
    best, at = F(-1), None
    for x in grid(den):
        v = abs(fn(x))
        if v > best:
            best, at = v, x
    return best, at


ident = lambda x: x
bump_pts = [(F(0), F(0)), (F(1, 2), F(3, 4)), (F(1), F(1))]
bump = lambda x: interp(bump_pts, x)

print("eval bump(1/4) =", bump(F(1, 4)))
print("T2(3/4) =", tent(2)(F(3, 4)))
print("T5(3/10) =", tent(5)(F(3, 10)))
print("T2oT2 == T4 on grid/720:", all(tent(2)(tent(2)(x)) == tent(4)(x) for x in grid(720)))
print("sup|id - bump| =", sup(lambda x: x - bump(x)))
print("sup|T2 - T4| =", sup(lambda x: tent(2)(x) - tent(4)(x)))
print("reflect bump at 1/2 =", reflect(bump)(F(1, 2)))
print("block_sum[g, g~](1/4) =", block_sum([bump, reflect(bump)])(F(1, 4)))
print("oplus^2(g)(3/4) =", oplus(bump, 2)(F(3, 4)))
print("knaster_dist((0,0),(1,1/2)) lower =", F(1, 2) * 1 + F(1, 2) * F(1, 2))

# diag_dist((0,g),(0,id)), p1 = 2, N = 1:
# S(t) = 1/2 |g(T2 t) - T2 t| + 1/2 |oplus^2(g)(t) - t|
S = lambda t: F(1, 2) * abs(bump(tent(2)(t)) - tent(2)(t)) + F(1, 2) * abs(oplus(bump, 2)(t) - t)
lo, at = sup(S)
print("diag_dist lower =", lo, "at t =", at, "upper (tail(1) = 1/2) =", lo + F(1, 2))

# straighten(T2, peak-at-1/3): g o h = T2 with g = (0,0),(1/3,1),(1,0)
g_pts = [(F(0), F(0)), (F(1, 3), F(1)), (F(1), F(0))]
h_pts = [(F(0), F(0)), (F(1, 2), F(1, 3)), (F(1), F(1))]
print("straighten h = (0,0),(1/2,1/3),(1,1) satisfies g o h = T2:",
      all(interp(g_pts, interp(h_pts, x)) == tent(2)(x) for x in grid(720)))
bad = [(F(0), F(0)), (F(1, 3), F(1, 2)), (F(1), F(1))]
print("listed h = (0,0),(1/3,1/2),(1,1) satisfies it:",
      all(interp(g_pts, interp(bad, x)) == tent(2)(x) for x in grid(720)))

# signature of (0,0),(1/4,1/2),(3/4,5/8),(1,1): roots of f(x) - x
sig_pts = [(F(0), F(0)), (F(1, 4), F(1, 2)), (F(3, 4), F(5, 8)), (F(1), F(1))]
runs = []
for x in grid(720)[1:-1]:
    s = (interp(sig_pts, x) > x) - (interp(sig_pts, x) < x)
    if not runs or runs[-1] != s:
        runs.append(s)
print("signature of f:", "".join("+" if s > 0 else "-" for s in runs if s))
print("root of f - x in (1/4,3/4):", [x for x in grid(720)[1:-1] if interp(sig_pts, x) == x])

# norm bound example: parts with sup_dist = 1/10, d = 5
print("norm bound 1/10 / 5 =", F(1, 10) / 5)

# the literals frozen in the C++ tests
assert bump(F(1, 4)) == F(3, 8)
assert sup(lambda x: x - bump(x)) == (F(1, 4), F(1, 2))
assert sup(lambda x: tent(2)(x) - tent(4)(x)) == (F(1), F(1, 2))
assert (lo, at) == (F(3, 16), F(1, 4)) and lo + F(1, 2) == F(11, 16)
assert all(interp(g_pts, interp(h_pts, x)) == tent(2)(x) for x in grid(720))
assert [s for s in runs if s] == [1, -1]
assert [x for x in grid(720)[1:-1] if interp(sig_pts, x) == x] == [F(7, 12)]
print("oracle values agree")
