"""Figure rendering for the command line scenarios.

Every helper takes precomputed arrays and a target path, draws one figure
with the non-interactive Agg backend, and closes it. Nothing in here does
physics; the numbers are produced by the library and written to CSV by the
same scenarios that call these renderers.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_DPI = 150


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def render_report_figure(report, path) -> None:
    """Horizontal bar chart of measured errors against their tolerances."""
    checks = sorted(report.checks, key=lambda c: c.check_id)
    ids = [c.check_id for c in checks]
    floor = 1e-17
    errors = np.array([max(c.max_error, floor) for c in checks])
    tolerances = np.array([max(c.tolerance, floor) for c in checks])
    colors = ["#2a7e43" if c.passed else "#b2313c" for c in checks]
    y = np.arange(len(checks))
    fig, ax = plt.subplots(figsize=(9.0, 0.32 * len(checks) + 1.6))
    ax.barh(y, errors, color=colors, height=0.6, label="measured error")
    ax.scatter(tolerances, y, marker="|", s=120, color="black", zorder=3, label="tolerance")
    ax.set_xscale("log")
    ax.set_xlim(floor, 10.0)
    ax.set_yticks(y)
    ax.set_yticklabels(ids, fontsize=7)
    ax.invert_yaxis()
    ax.set_xlabel("max error")
    ax.set_title(f"{report.engine}: {report.total - report.failed}/{report.total} checks passed")
    ax.legend(loc="lower right", fontsize=7)
    ax.grid(axis="x", alpha=0.3)
    _finish(fig, path)


def render_kernel_figure(displacements, kernels, path, delta_x=None) -> None:
    """Kernel modulus against displacement for the named weight pairs.

    ``kernels`` maps a legend label to a complex array over the given
    displacements.
    """
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    for label, values in kernels.items():
        ax.semilogy(displacements, np.abs(values) + 1e-300, marker=".", lw=1.0, label=label)
    if delta_x is not None:
        ax.axhline(1.0 / delta_x, color="gray", lw=0.8, ls="--", label="lattice delta height")
    ax.set_xlabel("displacement y")
    ax.set_ylabel("|K(y)|")
    ax.set_title("equal-time commutator kernels")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    _finish(fig, path)


def render_propagation_figure(x, profiles, path) -> None:
    """|phi|^2 profiles at a sequence of times.

    ``profiles`` is a list of (time, array) pairs over positions ``x``.
    """
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    for t, values in profiles:
        ax.plot(x, np.abs(values) ** 2, lw=1.2, label=f"t = {t:g}")
    ax.set_xlabel("x")
    ax.set_ylabel(r"$|\varphi(x)|^2$")
    ax.set_title("packet propagation")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    _finish(fig, path)


def render_field_profile_figure(x, profile, path, x0=None) -> None:
    """Real part and modulus of a field matrix-element profile."""
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    ax.plot(x, np.real(profile), lw=1.2, label="Re")
    ax.plot(x, np.abs(profile), lw=1.0, ls="--", label="modulus")
    if x0 is not None:
        ax.axvline(x0, color="gray", lw=0.8, ls=":")
    ax.set_xlabel("x")
    ax.set_ylabel("field amplitude")
    ax.set_title("field profile of one broadband excitation")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    _finish(fig, path)


def render_energy_figure(k, density, path) -> None:
    """Spectral energy density over the wavenumber grid."""
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    ax.plot(k, density, lw=1.2)
    ax.fill_between(k, density, alpha=0.25)
    ax.set_xlabel("k")
    ax.set_ylabel("energy density")
    ax.set_title("spectral energy density")
    ax.grid(alpha=0.3)
    _finish(fig, path)


def render_mixing_figure(b2_values, distances, closed_form, path) -> None:
    """Mixing distance sweep with its closed-form prediction."""
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    ax.plot(b2_values, distances, marker="o", ms=4, lw=1.0, label="measured")
    ax.plot(b2_values, closed_form, lw=1.0, ls="--", label="closed form")
    ax.set_xlabel(r"$b_2$")
    ax.set_ylabel("operator distance")
    ax.set_title("mode-mixing correspondence gap")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    _finish(fig, path)
