# %% [markdown]
# Microwave refrigeration through a second avoided crossing.
#
# A third level sits above the qubit doublet.  Driving the flux through
# the upper crossover pumps population out of the upper doublet state
# into the third level, which decays preferentially into the lower
# doublet state.  The driven steady state is therefore much more
# polarized than thermal equilibrium: the effective temperature of the
# doublet drops by an order of magnitude.  Below a minimum drive
# frequency the pump can no longer beat intrinsic relaxation.

# %%
import math

from lzs_lab import (
    RawThreeLevel,
    angular_to_mk,
    build_three_level,
    cool_steady,
    eps_from_flux,
    equilibrium_rho00,
    ghz,
    mhz,
    min_cooling_frequency,
)

T1_NS = 1.0 / (2.0 * math.pi * 5.0e-5)


def scheme(omega_mhz, phi_rf=10.0):
    return build_three_level(RawThreeLevel(
        delta01=ghz(0.013),
        delta20=ghz(0.09),
        m0=ghz(1.44),
        m1=ghz(1.44),
        m2=ghz(1.09),
        phi20=8.4,
        phi_dc=0.05,
        phi_rf=phi_rf,
        omega=mhz(omega_mhz),
        gamma2=ghz(0.06),
        gamma21=ghz(0.1),
        t1_ns=T1_NS,
        temperature_mk=50.0,
    ))


def effective_mk(p3, rho00, rho11):
    # Doublet splitting at the dc bias sets the Boltzmann thermometer.
    split = abs(eps_from_flux(p3, p3.phi_dc).eps01)
    return angular_to_mk(split / math.log(max(rho11, 1e-300) / rho00))


# %% Thermal baseline, then the driven steady state at 5 MHz.
# At this flux bias the diabatic 0 state is the upper doublet state, so
# cooling shows up as rho00 dropping below its equilibrium value while
# the lower state fills up.
p3 = scheme(5.0)
base = equilibrium_rho00(p3)
print(f"thermal upper-state population: {base:.4f} (bath at 50 mK)")

for method in ("NCA", "APA"):
    res = cool_steady(p3, method)
    s = res.state
    print(f"{method}: rho00 {s.rho00:.4f}  rho11 {s.rho11:.4f}  rho22 {s.rho22:.2e}"
          f"  ({res.n_periods} periods, converged {res.converged})")
    print(f"  cooling depth {base - s.rho00:.4f},"
          f" effective doublet temperature {effective_mk(p3, s.rho00, s.rho11):.1f} mK")

# %% Slowing the drive kills the refrigerator.
print("upper-state population as the drive slows down:")
for f in (5.0, 1.0, 0.2, 0.04, 0.01):
    res = cool_steady(scheme(f))
    s = res.state
    print(f"  {f:6.2f} MHz: rho00 {s.rho00:.4f}"
          f"  depth {base - s.rho00:.4f}"
          f"  T_eff {effective_mk(p3, s.rho00, s.rho11):5.1f} mK")

# %% The threshold frequency below which the cooling depth falls under 0.02.
bracket = (mhz(0.01).to_angular(), mhz(1.0).to_angular())
threshold = min_cooling_frequency(p3, 10.0, bracket, 0.02)
print(f"minimum cooling frequency: {threshold / (2.0 * math.pi * 1e-3):.3f} MHz")
