"""Effective-temperature anisotropy for a slowly moving blackbody observer.

Evaluates the Legendre multipoles of T_eff(mu') at the solar-system speed
through the microwave background and prints them next to the small-beta
expectations: a monopole shifted at second order, a dipole of magnitude
beta T at leading order, and a quadrupole down by another factor of beta.

    python3 scripts/cmb_dipole.py
    python3 scripts/cmb_dipole.py --speed-kms 600 --lmax 6 --map 9
"""

import argparse
import math

import numpy as np

from relplanck import effective_temperature_mu, make_boost, temperature_multipoles

C_KMS = 299792.458


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--temperature", type=float, default=2.72548,
                    help="rest-frame temperature in kelvin (default 2.72548)")
    ap.add_argument("--speed-kms", type=float, default=369.82,
                    help="observer speed in km/s (default 369.82)")
    ap.add_argument("--lmax", type=int, default=4)
    ap.add_argument("--map", type=int, default=0, metavar="N",
                    help="also tabulate T_eff on N cosines")
    args = ap.parse_args()

    beta = args.speed_kms / C_KMS
    t = args.temperature
    v = make_boost([0.0, 0.0, beta])
    coeffs = temperature_multipoles(v, t, args.lmax)

    print(f"T = {t} K, v = {args.speed_kms} km/s, beta = {beta:.6e}, "
          f"gamma = {v.gamma:.12f}")
    print(f"convention: {coeffs.convention}")
    print()
    print(f"{'l':>3s}  {'a_l [K]':>24s}  {'a_l / T':>14s}")
    for l, a in enumerate(coeffs.a):
        print(f"{l:>3d}  {a:24.16e}  {a / t:14.6e}")
    print()

    dipole_uk = abs(coeffs.a[1]) * 1e6
    print(f"dipole magnitude |a_1|      = {dipole_uk:10.3f} microK")
    print(f"leading-order beta T        = {beta * t * 1e6:10.3f} microK")
    if args.lmax >= 2:
        quad_uk = abs(coeffs.a[2]) * 1e6
        print(f"quadrupole magnitude |a_2|  = {quad_uk:10.4f} microK "
              f"(2 beta^2 T / 3 ~ {2.0 * beta**2 * t / 3.0 * 1e6:.4f})")
    shift = coeffs.a[0] - t
    print(f"monopole shift a_0 - T      = {shift * 1e6:10.4f} microK "
          f"(-beta^2 T / 6 ~ {-(beta**2) * t / 6.0 * 1e6:.4f})")

    if args.map > 1:
        print()
        print(f"{'mu_prime':>10s}  {'T_eff [K]':>18s}  {'delta T [microK]':>18s}")
        for mu in np.linspace(-1.0, 1.0, args.map):
            teff = effective_temperature_mu(mu, v, t)
            print(f"{mu:>10.4f}  {teff:18.12f}  {(teff - t) * 1e6:>18.3f}")


if __name__ == "__main__":
    main()
