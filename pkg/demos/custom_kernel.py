"""Define a model by its Bernstein measure instead of a named family.

Any kernel whose radial derivative is completely monotone is admissible;
the spectral coefficients are then integrals of the universal functions
against the measure.  Here the flat measure (which reconstructs the
logarithmic kernel) and a truncated measure with no closed form are run
through the same dispersion machinery.
"""

from vstates import cmkernel, dispersion, models


def main():
    print("flat measure: quadrature route vs the logarithmic closed forms")
    custom = models.custom_convolution(cmkernel.euler_flat())
    closed = models.euler_plane()
    print(f"{'n':>3} {'quadrature':>14} {'closed':>14} {'diff':>10}")
    for n in (1, 2, 4, 8):
        rq = dispersion.spectral_row(custom, n, 0.5)
        rc = dispersion.spectral_row(closed, n, 0.5)
        print(f"{n:>3} {rq.lam_nb:>14.10f} {rc.lam_nb:>14.10f} "
              f"{abs(rq.lam_nb - rc.lam_nb):>10.2e}")

    print("\ntruncated measure (density 1 on (0, 2), nothing closed-form):")
    mu = cmkernel.truncated_low(None, 2.0)
    model = models.custom_convolution(mu)
    for n in (1, 2, 3, 4):
        p = dispersion.dispersion_point(model, n, 0.5)
        print(f"  n = {n}: Delta = {p.delta:.6e}  ({p.classification})")
    v1, v2 = dispersion.v_constants(model, 0.5)
    print(f"  velocity constants: V1 = {v1:.8f}, V2 = {v2:.8f}")
    print(f"  large-n discriminant limit: "
          f"{dispersion.delta_inf(model, 0.5):.8f}")


if __name__ == "__main__":
    main()
