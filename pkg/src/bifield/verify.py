"""The verification suite: one numerical check per core relation.

Each check measures a residual against an explicit tolerance and records the
anchor of the relation it exercises. Inequality-style checks ("this quantity
must stay above a threshold") are encoded as a shortfall: the reported error
is max(0, threshold - observed) with tolerance zero, so the same pass rule
applies to every row.

All randomness flows from a single seed, and the resulting report serializes
byte-identically across reruns.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from . import biortho
from .dynamics import (
    BogoliubovBlock,
    apply_diagonal_hamiltonian,
    apply_position_hamiltonian,
    bogoliubov_counterexample,
    closed_form_mixing_distance,
    dispersion_free_check,
    expectation_consistency,
    heisenberg_evolve,
)
from .errors import ConfigError
from .grid import (
    DEFAULT_CONTEXT,
    FieldContext,
    Grid,
    discrete_delta_k,
    discrete_delta_x,
    inv_sqrt_abs_k,
    make_grid,
    sqrt_abs_k,
    to_momentum,
    to_position,
    unit_weight,
)
from .operators import (
    bio_expectation,
    blip_field_profile,
    coefficient_norm,
    coherent_field_expectation,
    commutator,
    commutator_kernel,
    electric_field,
    energy_expectation,
    hamiltonian_expectation,
    kernel_quadrature_oracle,
    magnetic_field,
    mode_annihilation,
    mode_creation,
    positional_annihilation,
    positional_creation,
    vacuum_matrix_element,
)
from .report import CheckResult, VerificationReport
from .states import (
    BIO_LOCAL_TAG,
    BLIP_TAG,
    LOCAL_TAG,
    PHOTON_TAG,
    ModeLabel,
    bio_associate,
    bio_inner,
    eta_apply,
    eta_inner,
    eta_inv_apply,
    eta_inv_inner,
    gaussian_position_packet,
    make_state,
    superpose,
)

ENGINE = "bifield 0.1.0"

DEFAULT_N_MODES = 256
DEFAULT_DELTA_K = 0.0625


def default_grid() -> Grid:
    return make_grid(DEFAULT_N_MODES, DEFAULT_DELTA_K)


def _complex_normal(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def _grid_checks(rng, grid: Grid) -> list:
    checks = []
    worst = 0.0
    for weight in (unit_weight, sqrt_abs_k, inv_sqrt_abs_k):
        for s in (1, -1):
            psi = _complex_normal(rng, grid.n_modes)
            phi = to_position(psi, weight, s, grid)
            back = to_momentum(phi, weight, s, grid)
            worst = max(worst, float(np.max(np.abs(back - psi)) / np.max(np.abs(psi))))
    checks.append(
        CheckResult(
            "grid.transform_roundtrip",
            "position and momentum transforms invert each other in every weight family",
            "App. A",
            worst,
            1e-12,
        )
    )

    psi = _complex_normal(rng, grid.n_modes)
    phi = to_position(psi, unit_weight, 1, grid)
    norm_k = grid.delta_k * float(np.sum(np.abs(psi) ** 2))
    norm_x = grid.delta_x * float(np.sum(np.abs(phi) ** 2))
    checks.append(
        CheckResult(
            "grid.parseval",
            "the unit-weight transform preserves the L2 norm",
            "App. A",
            abs(norm_x - norm_k) / norm_k,
            1e-12,
        )
    )

    worst = 0.0
    for s in (1, -1):
        psi = _complex_normal(rng, grid.n_modes)
        slow = to_position(psi, sqrt_abs_k, s, grid)
        fast = to_position(psi, sqrt_abs_k, s, grid, fast=True)
        worst = max(worst, float(np.max(np.abs(fast - slow)) / np.max(np.abs(slow))))
        back_slow = to_momentum(slow, sqrt_abs_k, s, grid)
        back_fast = to_momentum(slow, sqrt_abs_k, s, grid, fast=True)
        worst = max(worst, float(np.max(np.abs(back_fast - back_slow)) / np.max(np.abs(back_slow))))
    checks.append(
        CheckResult(
            "grid.fast_transform",
            "the FFT fast path reproduces the direct-sum transform",
            "App. A",
            worst,
            1e-11,
        )
    )
    return checks


def _biortho_checks(rng) -> list:
    checks = []
    worst_ortho = 0.0
    worst_ident = 0.0
    worst_metric = 0.0
    trials = 0
    while trials < 20:
        n = int(rng.integers(2, 17))
        matrix = _complex_normal(rng, (n, n))
        basis = biortho.FiniteBasis(matrix)
        if basis.condition_number > 1e6:
            continue
        trials += 1
        dual = biortho.dual_basis(basis)
        overlap = biortho.overlap_matrix(dual, basis)
        worst_ortho = max(worst_ortho, float(np.max(np.abs(overlap - np.eye(n)))))
        worst_ident = max(worst_ident, biortho.identity_resolution_residual(basis, dual))
        metric = biortho.metric_from_dual(dual)
        mapped = metric.matrix @ basis.matrix
        worst_metric = max(
            worst_metric,
            float(np.max(np.abs(mapped - dual.matrix)) / np.max(np.abs(dual.matrix))),
        )
    checks.append(
        CheckResult(
            "biortho.dual_orthonormality",
            "dual vectors built from the inverse basis satisfy <beta_i|alpha_j> = delta_ij",
            "Eq. (13)",
            worst_ortho,
            1e-9,
        )
    )
    checks.append(
        CheckResult(
            "biortho.identity_resolution",
            "sum_n |alpha_n><beta_n| resolves the identity",
            "Eq. (13)",
            worst_ident,
            1e-9,
        )
    )
    checks.append(
        CheckResult(
            "biortho.metric_maps_basis",
            "the metric built from the dual family sends every alpha_n to beta_n",
            "Eqs. (18)-(21)",
            worst_metric,
            1e-10,
        )
    )

    basis = biortho.FiniteBasis([np.array([1.0, 0.0]), np.array([1.0, 1.0])])
    dual = biortho.dual_basis(basis)
    metric = biortho.metric_from_dual(dual)
    expected_dual = np.array([[1.0, 0.0], [-1.0, 1.0]])
    expected_eta = np.array([[1.0, -1.0], [-1.0, 2.0]])
    plane_error = max(
        float(np.max(np.abs(dual.matrix - expected_dual))),
        float(np.max(np.abs(metric.matrix - expected_eta))),
    )
    checks.append(
        CheckResult(
            "biortho.plane_example",
            "the two-vector worked example gives duals (1,-1), (0,1) and metric [[1,-1],[-1,2]]",
            "Eqs. (18)-(21)",
            plane_error,
            1e-12,
        )
    )

    n = 6
    while True:
        matrix = _complex_normal(rng, (n, n))
        basis = biortho.FiniteBasis(matrix)
        if basis.condition_number < 1e3:
            break
    dual = biortho.dual_basis(basis)
    metric = biortho.metric_from_dual(dual)
    spectrum = np.sort(rng.standard_normal(n) * 2.0)
    spectrum += np.arange(n) * 0.5  # keep the eigenvalues comfortably apart
    hamiltonian = basis.matrix @ np.diag(spectrum) @ np.linalg.inv(basis.matrix)
    check = biortho.is_pseudo_hermitian(hamiltonian, metric)
    scale = float(np.max(np.abs(hamiltonian)))
    checks.append(
        CheckResult(
            "biortho.pseudo_hermitian",
            "a similarity generator with real spectrum satisfies Hdag = eta H eta^-1",
            "Eq. (15)",
            check.residual / scale,
            1e-10,
        )
    )

    psi0 = _complex_normal(rng, n)
    n0 = biortho.eta_inner(psi0, psi0, metric)
    worst = 0.0
    for t in (0.5, 2.0, 10.0):
        psi_t, _ = biortho.evolve_pair(psi0, psi0, hamiltonian, t)
        drift = abs(biortho.eta_inner(psi_t, psi_t, metric) - n0) / abs(n0)
        worst = max(worst, drift)
    checks.append(
        CheckResult(
            "biortho.eta_norm_conserved",
            "the eta-norm of a state is constant under pseudo-Hermitian evolution",
            "Eq. (15)",
            worst,
            1e-9,
        )
    )

    psitilde0 = _complex_normal(rng, n)
    o0 = biortho.pair_overlap(psi0, psitilde0)
    psi_t, psitilde_t = biortho.evolve_pair(psi0, psitilde0, hamiltonian, 3.0)
    checks.append(
        CheckResult(
            "biortho.pair_overlap_conserved",
            "the overlap of a state with its dual-picture partner is constant",
            "Eq. (15)",
            abs(biortho.pair_overlap(psi_t, psitilde_t) - o0) / abs(o0),
            1e-9,
        )
    )

    pade = biortho.evolve_pair(psi0, psitilde0, hamiltonian, 3.0, method="pade")
    eig = biortho.evolve_pair(psi0, psitilde0, hamiltonian, 3.0, method="eig")
    route_error = max(
        float(np.max(np.abs(pade[0] - eig[0])) / np.max(np.abs(pade[0]))),
        float(np.max(np.abs(pade[1] - eig[1])) / np.max(np.abs(pade[1]))),
    )
    checks.append(
        CheckResult(
            "biortho.propagator_routes",
            "Pade and eigendecomposition propagators agree",
            "Eq. (15)",
            route_error,
            1e-9,
        )
    )
    return checks


def _kernel_checks(grid: Grid, images: int) -> list:
    checks = []
    delta = discrete_delta_x(grid, 0).astype(complex)

    blip_kernel = commutator_kernel(unit_weight, unit_weight, 1, grid)
    checks.append(
        CheckResult(
            "kernel.blip_delta",
            "the broadband pair commutes to the lattice delta",
            "Eq. (28)",
            float(np.max(np.abs(blip_kernel - delta)) * grid.delta_x),
            1e-10,
        )
    )

    worst = 0.0
    for w1, w2 in ((sqrt_abs_k, inv_sqrt_abs_k), (inv_sqrt_abs_k, sqrt_abs_k)):
        for s in (1, -1):
            kernel = commutator_kernel(w1, w2, s, grid)
            worst = max(worst, float(np.max(np.abs(kernel - delta)) * grid.delta_x))
    checks.append(
        CheckResult(
            "kernel.reciprocal_pair_delta",
            "the field operator and its dual partner commute to the lattice delta",
            "Eqs. (30)-(31)",
            worst,
            1e-10,
        )
    )

    field_kernel = commutator_kernel(sqrt_abs_k, sqrt_abs_k, 1, grid)
    neighbor = float(np.abs(field_kernel[1]) * grid.delta_x)
    threshold = 1e-3
    checks.append(
        CheckResult(
            "kernel.field_smearing",
            "the equal-weight field commutator stays finite one lattice site away",
            "Eqs. (30)-(31)",
            max(0.0, threshold - neighbor),
            0.0,
        )
    )

    displacements = (1, 2)
    oracle = kernel_quadrature_oracle(
        sqrt_abs_k, sqrt_abs_k, 1, grid, displacements, images=images
    )
    lattice = field_kernel[list(displacements)]
    scale = float(np.max(np.abs(field_kernel)))
    checks.append(
        CheckResult(
            "kernel.smearing_quadrature",
            "the lattice field kernel matches the periodized continuum integral",
            "App. B",
            float(np.max(np.abs(lattice - oracle))) / scale,
            1e-8,
        )
    )
    return checks


def _states_checks(rng, grid: Grid) -> list:
    checks = []
    n = grid.n_modes
    dk = grid.delta_k
    dx = grid.delta_x
    mode = ModeLabel(1, 1)

    pairs = [(0, 0), (3, 3), (3, 7), (n - 1, n - 1), (n - 1, 2)]
    pairs.append(tuple(int(v) for v in rng.integers(0, n, size=2)))
    worst = 0.0
    for i, j in pairs:
        photon_i = make_state(grid, PHOTON_TAG, {mode: discrete_delta_k(grid, i)})
        photon_j = make_state(grid, PHOTON_TAG, {mode: discrete_delta_k(grid, j)})
        expected = (1.0 if i == j else 0.0) / dk
        worst = max(worst, abs(bio_inner(photon_i, photon_j) - expected) * dk)
        local_i = make_state(grid, LOCAL_TAG, {mode: discrete_delta_x(grid, i)})
        local_j = make_state(grid, LOCAL_TAG, {mode: discrete_delta_x(grid, j)})
        expected = (1.0 if i == j else 0.0) / dx
        worst = max(worst, abs(eta_inner(local_i, local_j) - expected) * dx)
        bio_i = make_state(grid, BIO_LOCAL_TAG, {mode: discrete_delta_x(grid, i)})
        bio_j = make_state(grid, BIO_LOCAL_TAG, {mode: discrete_delta_x(grid, j)})
        worst = max(worst, abs(eta_inv_inner(bio_i, bio_j) - expected) * dx)
    checks.append(
        CheckResult(
            "states.triple_orthonormality",
            "photon, local, and bio-local families are each orthonormal in their own product",
            "Eq. (40)",
            worst,
            1e-10,
        )
    )

    worst = 0.0
    for j in (0, 1, n // 2, n - 1):
        photon_j = make_state(grid, PHOTON_TAG, {mode: discrete_delta_k(grid, j)})
        value = eta_inv_inner(photon_j, photon_j)
        expected = abs(grid.k_values[j]) / dk
        worst = max(worst, abs(value - expected) / expected)
    checks.append(
        CheckResult(
            "states.photon_metric_deviation",
            "the dual-product norm of a photon mode carries the factor |k|",
            "Eq. (41)",
            worst,
            1e-12,
        )
    )

    worst = 0.0
    for tag in (PHOTON_TAG, LOCAL_TAG, BIO_LOCAL_TAG, BLIP_TAG):
        amplitudes = _complex_normal(rng, n)
        vacuum = complex(*rng.standard_normal(2))
        state = make_state(grid, tag, {mode: amplitudes}, vacuum_amplitude=vacuum)
        back = bio_associate(bio_associate(state))
        scale = float(np.max(np.abs(state.canonical[mode])))
        worst = max(
            worst,
            float(np.max(np.abs(back.canonical[mode] - state.canonical[mode]))) / scale,
        )
        worst = max(worst, abs(back.vacuum_amplitude - vacuum))
    checks.append(
        CheckResult(
            "states.association_involution",
            "applying the association map twice returns the original state",
            "Eq. (33)",
            worst,
            1e-12,
        )
    )

    worst = 0.0
    for _ in range(5):
        state = make_state(
            grid,
            PHOTON_TAG,
            {mode: _complex_normal(rng, n)},
            vacuum_amplitude=complex(*rng.standard_normal(2)),
        )
        back = eta_inv_apply(eta_apply(state))
        scale = float(np.max(np.abs(state.canonical[mode])))
        worst = max(
            worst,
            float(np.max(np.abs(back.canonical[mode] - state.canonical[mode]))) / scale,
        )
        worst = max(worst, abs(back.vacuum_amplitude - state.vacuum_amplitude))
    checks.append(
        CheckResult(
            "states.metric_roundtrip",
            "the metric followed by its inverse returns the state",
            "Eqs. (38)-(39)",
            worst,
            1e-12,
        )
    )

    site = n // 3
    local = make_state(grid, LOCAL_TAG, {mode: discrete_delta_x(grid, site)})
    mapped = eta_apply(local)
    target = make_state(grid, BIO_LOCAL_TAG, {mode: discrete_delta_x(grid, site)})
    family_error = float(
        np.max(np.abs(mapped.canonical[mode] - target.canonical[mode]))
        / np.max(np.abs(target.canonical[mode]))
    )
    if any(comp.tag != BIO_LOCAL_TAG for comp in mapped.components):
        family_error = 1.0
    checks.append(
        CheckResult(
            "states.eta_maps_families",
            "the metric sends the local delta state to the bio-local delta state",
            "Eqs. (38)-(39)",
            family_error,
            1e-12,
        )
    )
    return checks


def _operator_checks(rng, grid: Grid, context: FieldContext) -> list:
    checks = []
    n = grid.n_modes
    dk = grid.delta_k
    mode = ModeLabel(1, 1)

    worst = 0.0
    for i, j in ((2, 2), (2, 5), (n - 1, n - 1)):
        value = commutator(mode_annihilation(grid, mode, i), mode_creation(grid, mode, j))
        expected = (1.0 if i == j else 0.0) / dk
        worst = max(worst, abs(value - expected) * dk)
    checks.append(
        CheckResult(
            "operators.discrete_ccr",
            "mode ladder operators obey the density-normalized commutator",
            "App. A",
            worst,
            1e-12,
        )
    )

    x_site = float(grid.x_values[n // 4])
    worst = 0.0
    for observable in (electric_field(grid, x_site, context), magnetic_field(grid, x_site, context)):
        for pol in (1, 2):
            op = observable.component(pol)
            worst = max(worst, coefficient_norm(op - op.adjoint()) / coefficient_norm(op))
    checks.append(
        CheckResult(
            "operators.field_hermitian",
            "electric and magnetic field components are self-adjoint",
            "Eq. (26)",
            worst,
            1e-12,
        )
    )

    x0 = n // 3
    profile = blip_field_profile(grid, x0, 1, 1, context)
    creator = positional_creation(grid, mode, x0, unit_weight)
    direct = np.zeros(n, dtype=complex)
    for m in range(n):
        field = electric_field(grid, float(grid.x_values[m]), context)
        direct[m] = vacuum_matrix_element(field.component(1), creator)
    checks.append(
        CheckResult(
            "operators.blip_field_profile",
            "the field matrix element of one broadband excitation equals the smeared kernel",
            "Eq. (28)",
            float(np.max(np.abs(direct - profile)) / np.max(np.abs(profile))),
            1e-12,
        )
    )

    j0 = n // 2 + n // 8
    k0 = float(grid.k_values[j0])
    alpha0 = 0.8
    alphas = {mode: alpha0 * discrete_delta_k(grid, j0)}
    worst = 0.0
    for t in (0.0, 1.7):
        E, B = coherent_field_expectation(grid, alphas, grid.x_values, t, context)
        expected = (
            2.0
            * context.field_prefactor
            / np.sqrt(2.0 * np.pi)
            * np.sqrt(abs(k0))
            * alpha0
            * np.cos(k0 * (grid.x_values - context.c * t))
        )
        scale = float(np.max(np.abs(expected)))
        worst = max(worst, float(np.max(np.abs(E[1] - expected))) / scale)
        worst = max(worst, float(np.max(np.abs(B[2] - expected / context.c))) / scale)
        worst = max(worst, float(np.max(np.abs(E[0]))) / scale)
        worst = max(worst, float(np.max(np.abs(E[2]))) / scale)
    checks.append(
        CheckResult(
            "operators.coherent_closed_form",
            "a single-mode coherent mean field is the rigidly translating cosine",
            "Eq. (26)",
            worst,
            1e-12,
        )
    )

    worst_signed = 0.0
    worst_magnitude = 0.0
    for j in (2, n // 2 + 3, n - 1):
        psi = discrete_delta_k(grid, j).astype(complex) * np.sqrt(dk)
        state = make_state(grid, PHOTON_TAG, {mode: psi})
        k_j = float(grid.k_values[j])
        h = hamiltonian_expectation(state, context)
        e = energy_expectation(state, context)
        scale = context.hbar * context.c * abs(k_j)
        worst_signed = max(worst_signed, abs(h - context.hbar * context.c * k_j) / scale)
        worst_magnitude = max(worst_magnitude, abs(e - scale) / scale)
    checks.append(
        CheckResult(
            "operators.hamiltonian_signed",
            "a single photon mode has generator expectation hbar c k, sign included",
            "Eq. (44)",
            worst_signed,
            1e-12,
        )
    )
    checks.append(
        CheckResult(
            "operators.energy_magnitude",
            "a single photon mode has energy expectation hbar c |k|",
            "Eq. (46)",
            worst_magnitude,
            1e-12,
        )
    )
    return checks


def _dynamics_checks(rng, grid: Grid, context: FieldContext) -> list:
    checks = []
    n = grid.n_modes
    mode = ModeLabel(1, 1)

    worst = 0.0
    for tag in (LOCAL_TAG, BIO_LOCAL_TAG, BLIP_TAG):
        state = make_state(grid, tag, {mode: _complex_normal(rng, n)})
        kernel_route = apply_position_hamiltonian(state, context)
        diagonal_route = apply_diagonal_hamiltonian(state, context)
        scale = float(np.max(np.abs(diagonal_route.canonical[mode])))
        worst = max(
            worst,
            float(
                np.max(np.abs(kernel_route.canonical[mode] - diagonal_route.canonical[mode]))
            )
            / scale,
        )
    checks.append(
        CheckResult(
            "dynamics.position_kernel",
            "the position-space generator kernel reproduces the diagonal dispersion",
            "Eq. (44)",
            worst,
            1e-10,
        )
    )

    responses = {}
    for tag in (BLIP_TAG, LOCAL_TAG, BIO_LOCAL_TAG):
        matrix = np.zeros((n, n), dtype=complex)
        for column in range(n):
            unit = np.zeros(n, dtype=complex)
            unit[column] = 1.0
            state = make_state(grid, tag, {mode: unit})
            evolved = apply_diagonal_hamiltonian(state, context)
            matrix[:, column] = evolved.components[0].amplitudes[mode]
        responses[tag] = matrix
    base = responses[BLIP_TAG]
    worst = max(
        float(np.max(np.abs(responses[LOCAL_TAG] - base))),
        float(np.max(np.abs(responses[BIO_LOCAL_TAG] - base))),
    ) / float(np.max(np.abs(base)))
    checks.append(
        CheckResult(
            "dynamics.kernel_weight_independent",
            "the empirical position-space generator is identical in every weight family",
            "Eq. (44)",
            worst,
            1e-12,
        )
    )

    L = grid.domain_length
    shift_sites = 17
    t = shift_sites * grid.delta_x / context.c
    worst = 0.0
    cases = (
        (LOCAL_TAG, ModeLabel(1, 1)),
        (BIO_LOCAL_TAG, ModeLabel(-1, 2)),
        (BLIP_TAG, ModeLabel(1, 2)),
    )
    for tag, packet_mode in cases:
        packet = gaussian_position_packet(grid, tag, packet_mode, center=L / 2.0, width=L / 40.0)
        result = dispersion_free_check(packet, t, context)
        worst = max(worst, result.max_branch_error)
    checks.append(
        CheckResult(
            "dynamics.rigid_translation",
            "single-branch packets translate without any change of shape",
            "Eq. (61)",
            worst,
            1e-10,
        )
    )

    two_branch = superpose(
        [
            gaussian_position_packet(grid, BLIP_TAG, ModeLabel(1, 1), L / 2.0, L / 40.0),
            gaussian_position_packet(grid, BLIP_TAG, ModeLabel(-1, 1), L / 2.0, L / 40.0),
        ],
        [0.5, 0.5],
    )
    result = dispersion_free_check(two_branch, t, context)
    threshold = 1e-2
    checks.append(
        CheckResult(
            "dynamics.two_branch_distortion",
            "a packet split over both propagation branches visibly changes shape",
            "Eq. (61)",
            max(0.0, threshold - result.combined_error),
            0.0,
        )
    )

    field = electric_field(grid, float(grid.x_values[n // 4]), context)
    op = field.component(1)
    worst = 0.0
    worst_imag = 0.0
    for _ in range(5):
        state = make_state(
            grid,
            PHOTON_TAG,
            {
                ModeLabel(1, 1): _complex_normal(rng, n),
                ModeLabel(-1, 1): _complex_normal(rng, n),
            },
            vacuum_amplitude=complex(*rng.standard_normal(2)),
        )
        comparison = expectation_consistency(op, state, 0.9, context)
        scale = abs(comparison.schrodinger) + 1.0
        worst = max(worst, abs(comparison.schrodinger - comparison.heisenberg) / scale)
        value = bio_expectation(op, state)
        worst_imag = max(worst_imag, abs(value.imag) / (abs(value) + 1.0))
    checks.append(
        CheckResult(
            "dynamics.picture_consistency",
            "Schrodinger and Heisenberg field expectations coincide",
            "Eq. (60)",
            worst,
            1e-10,
        )
    )
    checks.append(
        CheckResult(
            "dynamics.hermitian_real_expectation",
            "expectations of self-adjoint field observables are real",
            "Eq. (60)",
            worst_imag,
            1e-12,
        )
    )

    x0 = n // 2
    shift_sites = 9
    t = shift_sites * grid.delta_x / context.c
    worst = 0.0
    for s in (1, -1):
        packet_mode = ModeLabel(s, 1)
        op0 = positional_annihilation(grid, packet_mode, x0, unit_weight)
        evolved = heisenberg_evolve(op0, t, None, context)
        target = positional_annihilation(grid, packet_mode, x0 - s * shift_sites, unit_weight)
        worst = max(worst, coefficient_norm(evolved - target) / coefficient_norm(target))
    checks.append(
        CheckResult(
            "dynamics.heisenberg_translation",
            "evolved broadband operators are the same operators translated by c t",
            "Eqs. (50)-(51)",
            worst,
            1e-10,
        )
    )

    unmixed = BogoliubovBlock(1.0, 0.0, (n - 1,))
    result = bogoliubov_counterexample(grid, unmixed, 0.3, mode=mode, x_index=0, context=context)
    checks.append(
        CheckResult(
            "dynamics.mixing_unmixed_zero",
            "with no creation/annihilation mixing the two operator routes agree exactly",
            "App. C",
            result.norm,
            1e-12,
        )
    )

    b1, b2 = float(np.cosh(1.0)), float(np.sinh(1.0))
    mixed = BogoliubovBlock(b1, b2, (n - 1,))
    result = bogoliubov_counterexample(grid, mixed, 0.3, mode=mode, x_index=0, context=context)
    expected = closed_form_mixing_distance(b2, float(grid.k_values[n - 1]))
    checks.append(
        CheckResult(
            "dynamics.mixing_closed_form",
            "the single-mode mixing distance equals b2 |sqrt|k| - 1/sqrt|k||",
            "App. C",
            abs(result.norm - expected) / expected,
            1e-12,
        )
    )
    threshold = 0.1
    checks.append(
        CheckResult(
            "dynamics.mixing_nonvanishing",
            "a hyperbolic mixing leaves a finite gap between the two operator routes",
            "App. C",
            max(0.0, threshold - result.norm),
            0.0,
        )
    )
    return checks


def run_verification(
    grid: Grid | None = None,
    context: FieldContext = DEFAULT_CONTEXT,
    seed: int = 0,
    images: int = 120,
    tolerance_overrides=None,
) -> VerificationReport:
    """Run every check on one grid and collect the results into a report.

    ``tolerance_overrides`` maps check ids to replacement tolerances; unknown
    ids raise ConfigError. The default grid keeps the suite comfortably under
    a minute while leaving every tolerance a wide margin.
    """
    if grid is None:
        grid = default_grid()
    rng = np.random.default_rng(seed)
    checks = []
    checks.extend(_grid_checks(rng, grid))
    checks.extend(_biortho_checks(rng))
    checks.extend(_kernel_checks(grid, images))
    checks.extend(_states_checks(rng, grid))
    checks.extend(_operator_checks(rng, grid, context))
    checks.extend(_dynamics_checks(rng, grid, context))
    if tolerance_overrides:
        known = {c.check_id for c in checks}
        unknown = sorted(set(tolerance_overrides) - known)
        if unknown:
            raise ConfigError(f"unknown check ids in tolerance overrides: {unknown}")
        checks = [
            dataclasses.replace(c, tolerance=float(tolerance_overrides.get(c.check_id, c.tolerance)))
            for c in checks
        ]
    return VerificationReport(engine=ENGINE, grid=grid, seed=int(seed), checks=tuple(checks))
