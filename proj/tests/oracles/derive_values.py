"""Independent high-precision oracles for frozen test values.

Run: python3 tests/oracles/derive_values.py
Every number frozen into the C++ tests with an "oracle" comment is printed here.
Nothing in this script shares code with the C++ implementation.
"""
import mpmath as mp

mp.mp.dps = 40


def phi(m, r):
    return 1 + m / (2 * r)


def area(m, r):
    return phi(m, r) ** 4 * 4 * mp.pi * r ** 2


def volume(m, r):
    return 4 * mp.pi * mp.quad(lambda t: phi(m, t) ** 6 * t ** 2, [m / 2, r])


def radius_for_volume(m, v):
    return mp.findroot(lambda r: volume(m, r) - v, (3 * v / (4 * mp.pi)) ** (mp.mpf(1) / 3))


def chart(m, r):
    p = phi(m, r)
    c = (r ** 3 * p ** 7 / (1 - m / (2 * r))) ** (mp.mpf(1) / 3)
    alpha = p ** (-mp.mpf(2) / 3) * (1 - m / (2 * r)) ** (mp.mpf(2) / 3)
    v0 = volume(m, r) - 4 * mp.pi * c ** 3 / 3
    return c, alpha, v0


def u(m, r, s):
    c, alpha, v0 = chart(m, r)
    if s <= c:
        return alpha
    rho = radius_for_volume(m, 4 * mp.pi * s ** 3 / 3 + v0)
    return area(m, rho) / (4 * mp.pi * s ** 2)


def main():
    one = mp.mpf(1)
    print("sphere_area(1,1)      =", mp.nstr(area(one, one), 17))
    print("sphere_area(1,0.5)    =", mp.nstr(area(one, mp.mpf('0.5')), 17))
    print("mean_curv(1,1)        =", mp.nstr(phi(one, one) ** -3 * (1 - one / 2) * 2, 17))
    print("volume_to(1,2)        =", mp.nstr(volume(one, mp.mpf(2)), 17))
    print("volume_to(1,10)       =", mp.nstr(volume(one, mp.mpf(10)), 17))
    c, a, v0 = chart(one, mp.mpf(10))
    print("chart(1,10) c         =", mp.nstr(c, 17))
    print("chart(1,10) alpha     =", mp.nstr(a, 17))
    print("chart(1,10) V0        =", mp.nstr(v0, 17))
    c, a, v0 = chart(one, mp.mpf(100))
    print("chart(1,100) c        =", mp.nstr(c, 17))
    print("chart(1,100) alpha    =", mp.nstr(a, 17))
    gap = u(one, mp.mpf(100), 2 * c) - a
    print("u(2c)-alpha (1,100)   =", mp.nstr(gap, 17))
    print("  gap rhs tau=2       =", mp.nstr(mp.mpf(5) / 32 * 2 / (3 * c), 17))
    v = 4 * mp.pi / 3 * mp.mpf(10) ** 9
    print("radius_for_volume(1, 4pi/3 1e9) =", mp.nstr(radius_for_volume(one, v), 17))
    print("profile_area(1, volume_to(1,10)) =", mp.nstr(area(one, mp.mpf(10)), 17))
    print("iso ratio(1,10)       =", mp.nstr(area(one, 10) / ((36 * mp.pi) ** (one / 3) * volume(one, mp.mpf(10)) ** (mp.mpf(2) / 3)), 17))
    # Exterior radial integral 4 pi int_{r0}^inf r^{-6/(3-a)} r^2 dr
    for al, r0 in [(2, 2), (2, 1), (mp.mpf('1.5'), 1)]:
        al = mp.mpf(al)
        val = 4 * mp.pi * mp.quad(lambda t: t ** (-6 / (3 - al)) * t ** 2, [r0, mp.inf])
        print(f"exterior_integral(alpha={al}, r0={r0}) =", mp.nstr(val, 17))
    # plane integrals
    print("plane gamma=3 r0=1    =", mp.nstr(2 * mp.pi * mp.quad(lambda t: t ** (1 - 3), [1, mp.inf]), 17))
    print("plane gamma=4 r0=2    =", mp.nstr(2 * mp.pi * mp.quad(lambda t: t ** (1 - 4), [2, mp.inf]), 17))
    # annulus beta check, R=10
    for R in [10, 100]:
        lhs = 2 * mp.pi * mp.quad(lambda t: t ** -1, [1, R])
        A = mp.pi * (R ** 2 - 1)
        rhs = A ** 0.5 * (2 * mp.pi) ** 0.5
        theta = mp.pi * (1 - mp.mpf(1) / R ** 2)  # sup of area(B_sigma)/sigma^2, attained at sigma = R
        rhs_sharp = A ** 0.5 * (2 * theta) ** 0.5
        print(f"annulus R={R}: lhs={mp.nstr(lhs, 17)} rhs(Theta=pi)={mp.nstr(rhs, 17)} "
              f"rhs(sharp Theta)={mp.nstr(rhs_sharp, 17)}")
    # ball of radius rho centered at distance d (disjoint from the horizon), Schwarzschild m = 1
    for d, rho in [(40, 10), (4, 1)]:
        d, rho = mp.mpf(d), mp.mpf(rho)
        cap = lambda t: 2 * mp.pi * t ** 2 * (1 - (t ** 2 + d ** 2 - rho ** 2) / (2 * t * d))
        vol = mp.quad(lambda t: phi(one, t) ** 6 * cap(t), [d - rho, d + rho])
        ar = mp.quad(lambda p: phi(one, mp.sqrt(d ** 2 + rho ** 2 + 2 * d * rho * mp.cos(p))) ** 4
                     * 2 * mp.pi * rho ** 2 * mp.sin(p), [0, mp.pi])
        print(f"offset ball d={d} rho={rho}: volume={mp.nstr(vol, 17)} area={mp.nstr(ar, 17)}")
    # horizon area and w-ODE exact solution value for (1,10): power-law solution
    c, a, v0 = chart(one, mp.mpf(10))
    k = (1 - a ** 3) / (4 * a ** 3)
    pp = (-1 + mp.sqrt(1 + 4 * k)) / 2
    pm = (-1 - mp.sqrt(1 + 4 * k)) / 2
    w = lambda s: (pp * (s / c) ** pm - pm * (s / c) ** pp) / (pp - pm)
    A = lambda s: 4 * mp.pi * w(s) ** 4 * a * s ** 2
    smin = mp.findroot(lambda s: mp.diff(A, s), (c / 20, c * mp.mpf('0.99')), solver='illinois')
    print("w-ODE exact: s_horizon=", mp.nstr(smin, 17), " area_min=", mp.nstr(A(smin), 17),
          " 16pi=", mp.nstr(16 * mp.pi, 17))


if __name__ == "__main__":
    main()
