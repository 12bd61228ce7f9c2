"""
How deep the entanglement reaches, and how warm it runs
=======================================================

Sweeps the squeezing rate at fixed coupling and reports, for each
point, the deepest chain node still entangled with the source and the
mean occupation of that node.  The occupation is then converted to an
effective temperature for a microwave-frequency realization, which is
the number an experiment would need to cool below.
"""

from dataclasses import replace

from entflow import (
    DEFAULT_CONFIG,
    MICROWAVE,
    Direction,
    effective_temperature,
    run_point,
    validate_config,
)

J = 0.5
R_VALUES = [0.02, 0.05, 0.1, 0.2, 0.3, 0.5]

print(f"forward chain of {DEFAULT_CONFIG.M} nodes at j = {J}")
print()
print("   r    deepest node    nbar there    T_eff (mK)")
for r in R_VALUES:
    net = validate_config(
        replace(DEFAULT_CONFIG, r=r, j=J, direction=Direction.FORWARD)
    )
    point = run_point(net)
    if not point.stable:
        print(f"{r:5.2f}   unstable")
        continue
    if point.m_max == 0:
        print(f"{r:5.2f}   none")
        continue
    # scale the dimensionless occupation result to a 5 GHz circuit
    t_mk = (
        effective_temperature(point.nbar_at_mmax, MICROWAVE.omega_cavity)
        * 1e3
    )
    print(
        f"{r:5.2f}   {point.m_max:12d}   {point.nbar_at_mmax:10.3e}"
        f"   {t_mk:11.2f}"
    )
print()
print("weak squeezing reaches furthest; the price of depth is that the")
print("far node must be colder than the printed temperature to begin with")
