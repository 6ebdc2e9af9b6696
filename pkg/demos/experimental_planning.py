"""Planning chain for europium- and praseodymium-doped crystals.

Walks the cgs parameter chain — cross-section from the absorption
coefficient, atom number from the geometry, photon number from the
phi*N ~ 1 condition, and the required detuning — for the two shipped
material presets, each evaluated at its optimal scattering probability.

Run:  python3 demos/experimental_planning.py
"""

from spinsq import table1


def main():
    print(f"{'material':>14} {'d':>4} {'eta':>6} {'sigma [cm^2]':>12} "
          f"{'N':>10} {'I0':>10} {'dw/G':>6} {'xi^2':>7} {'dB':>6}")
    for r in table1():
        print(
            f"{r.name:>14} {r.optical_depth:4.0f} {r.eta:6.3f} "
            f"{r.sigma:12.3e} {r.n_atoms:10.2e} {r.i0:10.2e} "
            f"{r.detuning_over_gamma:6.1f} {r.xi_prime_sq:7.4f} "
            f"{r.xi_prime_db:6.2f}"
        )
    print("\nBoth presets land in the 3-8 dB range at experimentally")
    print("accessible photon numbers and detunings.")


if __name__ == "__main__":
    main()
