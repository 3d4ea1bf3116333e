"""Tagged single-excitation states, the association map, and inner products."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bifield.errors import GridMismatchError
from bifield.grid import (
    custom_weight,
    discrete_delta_k,
    discrete_delta_x,
    make_grid,
    sqrt_abs_k,
    to_momentum,
    unit_weight,
)
from bifield.states import (
    BIO_LOCAL_TAG,
    BLIP_TAG,
    LOCAL_TAG,
    PHOTON_TAG,
    BasisTag,
    ModeLabel,
    bio_associate,
    bio_inner,
    eta_apply,
    eta_inner,
    eta_inv_apply,
    eta_inv_inner,
    gaussian_momentum_packet,
    gaussian_position_packet,
    make_state,
    norm,
    normalized,
    positional_tag,
    standard_inner,
    state_from_records,
    state_to_records,
    superpose,
)
from tests.conftest import complex_array

MODE = ModeLabel(1, 1)

seed_strategy = st.integers(min_value=0, max_value=2**32 - 1)
tag_strategy = st.sampled_from([PHOTON_TAG, LOCAL_TAG, BIO_LOCAL_TAG, BLIP_TAG])


class TestLabelsAndTags:
    @pytest.mark.parametrize("s", [0, 2, -2])
    def test_branch_sign_validated(self, s):
        with pytest.raises(ValueError):
            ModeLabel(s, 1)

    @pytest.mark.parametrize("pol", [0, 3, -1])
    def test_polarization_validated(self, pol):
        with pytest.raises(ValueError):
            ModeLabel(1, pol)

    def test_tag_validation(self):
        with pytest.raises(ValueError):
            BasisTag("plane_wave")
        with pytest.raises(ValueError):
            BasisTag("positional")
        with pytest.raises(ValueError):
            BasisTag("photon", weight=unit_weight)
        assert positional_tag(sqrt_abs_k) == LOCAL_TAG


class TestCanonicalAmplitudes:
    def test_photon_amplitudes_pass_through(self, grid8):
        psi = complex_array(0, 8)
        state = make_state(grid8, PHOTON_TAG, {MODE: psi})
        assert np.array_equal(state.canonical[MODE], psi)

    def test_positional_amplitudes_transform(self, grid8):
        phi = complex_array(1, 8)
        state = make_state(grid8, LOCAL_TAG, {MODE: phi})
        expected = to_momentum(phi, sqrt_abs_k, MODE.s, grid8)
        assert np.max(np.abs(state.canonical[MODE] - expected)) < 1e-14

    def test_components_sum_per_branch(self, grid8):
        psi = complex_array(2, 8)
        one = make_state(grid8, PHOTON_TAG, {MODE: psi})
        two = superpose([one, one], [1.0, 1.0])
        assert np.max(np.abs(two.canonical[MODE] - 2.0 * psi)) < 1e-14

    def test_key_and_shape_validation(self, grid8):
        with pytest.raises(TypeError):
            make_state(grid8, PHOTON_TAG, {"mode": np.zeros(8)})
        with pytest.raises(ValueError):
            make_state(grid8, PHOTON_TAG, {MODE: np.zeros(5)})

    def test_canonical_for_missing_branch_is_zero(self, grid8):
        state = make_state(grid8, PHOTON_TAG, {MODE: complex_array(3, 8)})
        assert np.all(state.canonical_for(ModeLabel(-1, 2)) == 0.0)


class TestSuperpose:
    @given(seed=seed_strategy)
    @settings(max_examples=40, deadline=None)
    def test_canonical_is_linear(self, seed):
        grid = make_grid(8, 0.5)
        rng = np.random.default_rng(seed)
        c1, c2 = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        a = make_state(grid, PHOTON_TAG, {MODE: complex_array(seed, 8)}, vacuum_amplitude=0.3)
        b = make_state(grid, LOCAL_TAG, {MODE: complex_array(seed + 1, 8)})
        combo = superpose([a, b], [c1, c2])
        expected = c1 * a.canonical[MODE] + c2 * b.canonical[MODE]
        assert np.max(np.abs(combo.canonical[MODE] - expected)) < 1e-12 * np.max(
            np.abs(expected)
        )
        assert combo.vacuum_amplitude == pytest.approx(c1 * 0.3)

    def test_mixed_provenance_flag(self, grid8):
        local = make_state(grid8, LOCAL_TAG, {MODE: complex_array(4, 8)})
        blip = make_state(grid8, BLIP_TAG, {MODE: complex_array(5, 8)})
        assert not local.is_mixed_provenance
        assert superpose([local, blip], [1.0, 1.0]).is_mixed_provenance
        assert not superpose([local, local], [1.0, 1.0]).is_mixed_provenance

    def test_input_validation(self, grid8):
        state = make_state(grid8, PHOTON_TAG, {MODE: complex_array(6, 8)})
        with pytest.raises(ValueError):
            superpose([state], [1.0, 2.0])
        with pytest.raises(ValueError):
            superpose([], [])
        other = make_state(make_grid(16, 0.5), PHOTON_TAG, {MODE: complex_array(6, 16)})
        with pytest.raises(GridMismatchError):
            superpose([state, other], [1.0, 1.0])


class TestAssociation:
    def test_photon_states_are_fixed_points(self, grid8):
        state = make_state(grid8, PHOTON_TAG, {MODE: complex_array(7, 8)}, vacuum_amplitude=1j)
        assoc = bio_associate(state)
        assert assoc.components[0].tag == PHOTON_TAG
        assert np.array_equal(assoc.canonical[MODE], state.canonical[MODE])
        assert assoc.vacuum_amplitude == 1j

    def test_positional_weight_swaps_amplitudes_stay(self, grid8):
        phi = complex_array(8, 8)
        local = make_state(grid8, LOCAL_TAG, {MODE: phi})
        assoc = bio_associate(local)
        assert assoc.components[0].tag == BIO_LOCAL_TAG
        assert np.array_equal(assoc.components[0].amplitudes[MODE], phi)

    @given(seed=seed_strategy, tag=tag_strategy)
    @settings(max_examples=60, deadline=None)
    def test_involution(self, seed, tag):
        grid = make_grid(8, 0.5)
        state = make_state(grid, tag, {MODE: complex_array(seed, 8)}, vacuum_amplitude=0.5j)
        back = bio_associate(bio_associate(state))
        assert back.components[0].tag == tag
        scale = np.max(np.abs(state.canonical[MODE]))
        assert np.max(np.abs(back.canonical[MODE] - state.canonical[MODE])) < 1e-13 * scale

    def test_acts_per_component_on_mixed_states(self, grid8):
        local = make_state(grid8, LOCAL_TAG, {MODE: complex_array(9, 8)})
        blip = make_state(grid8, BLIP_TAG, {MODE: complex_array(10, 8)})
        assoc = bio_associate(superpose([local, blip], [1.0, 1.0]))
        tags = {c.tag for c in assoc.components}
        assert tags == {BIO_LOCAL_TAG, BLIP_TAG}


class TestInnerProducts:
    def test_photon_modes_orthonormal(self, grid8):
        states = [
            make_state(grid8, PHOTON_TAG, {MODE: discrete_delta_k(grid8, j)}) for j in range(8)
        ]
        for i in range(8):
            for j in range(8):
                expected = (1.0 if i == j else 0.0) / grid8.delta_k
                assert abs(bio_inner(states[i], states[j]) - expected) < 1e-12 / grid8.delta_k

    @pytest.mark.parametrize("tag", [LOCAL_TAG, BIO_LOCAL_TAG, BLIP_TAG])
    def test_positional_deltas_orthonormal_in_bio_product(self, grid8, tag):
        """Each positional delta family is orthonormal under the bio product."""
        states = [
            make_state(grid8, tag, {MODE: discrete_delta_x(grid8, m)}) for m in range(8)
        ]
        for i in range(8):
            for j in range(8):
                expected = (1.0 if i == j else 0.0) / grid8.delta_x
                assert abs(bio_inner(states[i], states[j]) - expected) < 1e-10 / grid8.delta_x

    def test_bio_product_on_photon_states_is_standard(self, grid8):
        a = make_state(grid8, PHOTON_TAG, {MODE: complex_array(11, 8)}, vacuum_amplitude=0.2)
        b = make_state(grid8, PHOTON_TAG, {MODE: complex_array(12, 8)}, vacuum_amplitude=1j)
        assert bio_inner(a, b) == pytest.approx(standard_inner(a, b))

    def test_eta_products_weight_by_inverse_k(self, grid8):
        psi = complex_array(13, 8)
        state = make_state(grid8, PHOTON_TAG, {MODE: psi})
        absk = np.abs(grid8.k_values)
        expected = grid8.delta_k * np.sum(np.abs(psi) ** 2 / absk)
        assert eta_inner(state, state) == pytest.approx(expected)
        expected = grid8.delta_k * np.sum(np.abs(psi) ** 2 * absk)
        assert eta_inv_inner(state, state) == pytest.approx(expected)

    def test_vacuum_blocks_contract(self, grid8):
        a = make_state(grid8, PHOTON_TAG, {}, vacuum_amplitude=2.0 + 1j)
        b = make_state(grid8, PHOTON_TAG, {}, vacuum_amplitude=1.0 - 1j)
        assert bio_inner(a, b) == (1.0 + 1j) * (2.0 + 1j)

    def test_grid_mismatch_rejected(self, grid8):
        a = make_state(grid8, PHOTON_TAG, {MODE: complex_array(14, 8)})
        b = make_state(make_grid(16, 0.5), PHOTON_TAG, {MODE: complex_array(14, 16)})
        with pytest.raises(GridMismatchError):
            bio_inner(a, b)


class TestMetricMaps:
    def test_eta_sends_local_delta_to_bio_local_delta(self, grid8):
        site = 3
        local = make_state(grid8, LOCAL_TAG, {MODE: discrete_delta_x(grid8, site)})
        mapped = eta_apply(local)
        target = make_state(grid8, BIO_LOCAL_TAG, {MODE: discrete_delta_x(grid8, site)})
        assert all(c.tag == BIO_LOCAL_TAG for c in mapped.components)
        scale = np.max(np.abs(target.canonical[MODE]))
        assert np.max(np.abs(mapped.canonical[MODE] - target.canonical[MODE])) < 1e-12 * scale

    @given(seed=seed_strategy, tag=tag_strategy)
    @settings(max_examples=40, deadline=None)
    def test_roundtrip_restores_canonical_content(self, seed, tag):
        grid = make_grid(8, 0.5)
        state = make_state(grid, tag, {MODE: complex_array(seed, 8)}, vacuum_amplitude=0.7)
        back = eta_inv_apply(eta_apply(state))
        scale = np.max(np.abs(state.canonical[MODE]))
        assert np.max(np.abs(back.canonical[MODE] - state.canonical[MODE])) < 1e-12 * scale
        assert back.vacuum_amplitude == pytest.approx(0.7)


class TestNorms:
    def test_auto_product_follows_the_family(self, grid8):
        local = make_state(grid8, LOCAL_TAG, {MODE: discrete_delta_x(grid8, 2)})
        expected = 1.0 / np.sqrt(grid8.delta_x)
        assert norm(local) == pytest.approx(expected)
        assert norm(local, "eta") == pytest.approx(expected)
        bio = make_state(grid8, BIO_LOCAL_TAG, {MODE: discrete_delta_x(grid8, 2)})
        assert norm(bio) == pytest.approx(expected)
        assert norm(bio, "eta_inv") == pytest.approx(expected)

    def test_normalized_has_unit_norm(self, grid8):
        state = make_state(grid8, PHOTON_TAG, {MODE: complex_array(15, 8)})
        unit = normalized(state, product="bio")
        assert norm(unit, "bio") == pytest.approx(1.0)

    def test_normalizing_zero_state_raises(self, grid8):
        zero = make_state(grid8, PHOTON_TAG, {MODE: np.zeros(8, dtype=complex)})
        with pytest.raises(ValueError):
            normalized(zero)

    def test_unknown_product_rejected(self, grid8):
        state = make_state(grid8, PHOTON_TAG, {MODE: complex_array(16, 8)})
        with pytest.raises(ValueError):
            norm(state, "euclid")


class TestRecords:
    @given(seed=seed_strategy, tag=tag_strategy)
    @settings(max_examples=40, deadline=None)
    def test_roundtrip(self, seed, tag):
        grid = make_grid(8, 0.5)
        state = make_state(grid, tag, {MODE: complex_array(seed, 8)})
        rebuilt = state_from_records(grid, state_to_records(state))
        assert rebuilt.components[0].tag == tag
        scale = max(float(np.max(np.abs(state.canonical[MODE]))), 1e-300)
        assert np.max(np.abs(rebuilt.canonical[MODE] - state.canonical[MODE])) < 1e-13 * scale

    def test_vacuum_amplitude_has_no_record_form(self, grid8):
        state = make_state(grid8, PHOTON_TAG, {MODE: complex_array(17, 8)}, vacuum_amplitude=1.0)
        with pytest.raises(ValueError):
            state_to_records(state)

    def test_custom_weight_tag_has_no_name(self, grid8):
        tag = positional_tag(custom_weight(lambda k: 1.0 + np.abs(k)))
        state = make_state(grid8, tag, {MODE: complex_array(18, 8)})
        with pytest.raises(ValueError):
            state_to_records(state)

    def test_malformed_records_rejected(self, grid8):
        with pytest.raises(ValueError):
            state_from_records(grid8, [{"tag": "photon"}])
        record = {
            "tag": "photon",
            "s": 1,
            "lambda": 1,
            "basis": "x",
            "re": [0.0] * 8,
            "im": [0.0] * 8,
        }
        with pytest.raises(ValueError):
            state_from_records(grid8, [record])


class TestPackets:
    def test_position_packet_peaks_at_center(self, grid64):
        L = grid64.domain_length
        packet = gaussian_position_packet(grid64, BLIP_TAG, MODE, center=L / 2, width=L / 40)
        phi = packet.components[0].amplitudes[MODE]
        peak = int(np.argmax(np.abs(phi)))
        assert abs(grid64.x_values[peak] - L / 2) <= grid64.delta_x / 2

    def test_position_packet_wraps_periodically(self, grid64):
        packet = gaussian_position_packet(
            grid64, BLIP_TAG, MODE, center=0.0, width=grid64.domain_length / 40
        )
        phi = packet.components[0].amplitudes[MODE]
        # the envelope is symmetric about x = 0 across the periodic seam
        assert abs(phi[1]) == pytest.approx(abs(phi[-1]))

    def test_position_packet_validation(self, grid8):
        with pytest.raises(ValueError):
            gaussian_position_packet(grid8, PHOTON_TAG, MODE, 1.0, 1.0)
        with pytest.raises(ValueError):
            gaussian_position_packet(grid8, BLIP_TAG, MODE, 1.0, 0.0)

    def test_momentum_packet_is_photon_tagged(self, grid8):
        packet = gaussian_momentum_packet(grid8, MODE, center_k=1.0, width_k=0.5)
        assert packet.is_photon_tagged
        psi = packet.canonical[MODE]
        expected = np.exp(-((grid8.k_values - 1.0) ** 2) / (2.0 * 0.5**2))
        assert np.max(np.abs(psi - expected)) < 1e-14
        with pytest.raises(ValueError):
            gaussian_momentum_packet(grid8, MODE, 1.0, -1.0)
