"""
Symmetry-breaking deviation
===========================

eps(m) = (active cells of Rule 30) - (active cells of Rule 22), both counted
over the full row, and its log-log power-law fit over m <= 128.
"""

from ecasym.statistics import deviation, fit_power_law

points = deviation(128)
print("first points:", points[:10])

fit = fit_power_law(points)
print(f"b = {fit.slope:.4f}   intercept = {fit.intercept:.4f}   r^2 = {fit.r_squared:.3f}")
print(fit.filter_note)

# the right-half reading of the same quantity
alt = fit_power_law(deviation(128, view="right"))
print(f"right-half counts instead: b = {alt.slope:.4f}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np

    m = np.array([p[0] for p in points if p[1] > 0])
    e = np.array([p[1] for p in points if p[1] > 0])
    plt.loglog(m, e, ".", label="eps(m)")
    plt.loglog(m, np.exp(fit.intercept) * m ** fit.slope, label=f"m^{fit.slope:.2f}")
    plt.xlabel("m")
    plt.legend()
    plt.savefig("deviation.png", dpi=120)
    print("wrote deviation.png")
except ImportError:
    pass
