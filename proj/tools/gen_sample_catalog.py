#!/usr/bin/env python3
"""Writes data/sample_catalog.tle: a deterministic synthetic LEO catalog (no network needed)."""
import math
import random
import sys

MU = 398600.8  # km^3/s^2
RE = 6378.135  # km


def checksum(line):
    s = 0
    for ch in line[:68]:
        if ch.isdigit():
            s += int(ch)
        elif ch == "-":
            s += 1
    return s % 10


def implied(v):
    if v == 0:
        return " 00000+0"
    sign = "-" if v < 0 else " "
    e = math.floor(math.log10(abs(v))) + 1
    m = round(abs(v) / 10 ** e * 1e5)
    if m >= 100000:
        m //= 10
        e += 1
    return f"{sign}{m:05d}{'-' if e < 0 else '+'}{abs(e) % 10}"


def tle(norad, doy, incl, raan, ecc, argp, ma, alt_km, bstar):
    a = RE + alt_km
    n = math.sqrt(MU / a ** 3) * 86400 / (2 * math.pi)
    l1 = f"1 {norad:05d}U 24001A   24{doy:012.8f}  .00000000  00000+0 {implied(bstar)} 0  999"
    l2 = f"2 {norad:05d} {incl:8.4f} {raan:8.4f} {round(ecc * 1e7):07d} {argp:8.4f} {ma:8.4f} {n:11.8f}    1"
    l1 = l1[:68].ljust(68)
    l2 = l2[:68].ljust(68)
    return l1 + str(checksum(l1)), l2 + str(checksum(l2))


def main(path):
    rng = random.Random(20240910)
    families = [(97.6, 450, 650), (53.0, 500, 570), (51.6, 400, 430), (98.2, 700, 820),
                (87.9, 1100, 1250), (45.0, 500, 600), (70.0, 560, 600), (86.4, 770, 790)]
    out = []
    norad = 90001
    for k in range(64):
        incl, lo, hi = families[k % len(families)]
        alt = rng.uniform(lo, hi)
        doy = 254.0 + rng.uniform(0.0, 0.99)
        bstar = rng.uniform(1e-5, 8e-5)
        l1, l2 = tle(norad, doy, incl + rng.uniform(-0.3, 0.3), rng.uniform(0, 359.99),
                     rng.uniform(0.0001, 0.002), rng.uniform(0, 359.99), rng.uniform(0, 359.99),
                     alt, bstar)
        out += [f"SAMPLE-{k + 1:03d}", l1, l2]
        norad += 1
    # Objects outside the 300-1000 km band.
    for name, alt, incl in [("LOW-ORBIT", 220.0, 51.6), ("HIGH-LEO", 1400.0, 52.0)]:
        l1, l2 = tle(norad, 254.5, incl, 10.0, 0.001, 0.0, 0.0, alt, 1e-5)
        out += [name, l1, l2]
        norad += 1
    with open(path, "w") as f:
        f.write("\n".join(out) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/sample_catalog.tle")
