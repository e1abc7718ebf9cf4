"""Register simulation, polynomial verification, brute-force counting oracles."""

import random
from fractions import Fraction

import pytest

from balancegate import (
    GeneratorInstance,
    LfsrConfig,
    PRIMITIVE_POLYNOMIALS,
    RegisterLayout,
    ResourceLimitError,
    UnverifiedPolynomialError,
    ValidationError,
    count_ones_simulated,
    count_ones_truthtable,
    expand_minterm,
    generate_output,
    iter_output_chunks,
    lfsr_step,
    monobit_statistic,
    parse_function,
    state_cycle,
    verify_maximum_length,
)
from conftest import (
    COPRIME_SHAPES,
    geffe_layout,
    naive_ones_count,
    random_function,
)

# the worked three-stage register: P = x^3 + x^2 + 1, seed 110 (stage 0 first)
WORKED = LfsrConfig(3, frozenset({3, 2, 0}), 0b011)


def single_register_generator(text, config):
    layout = RegisterLayout.single(config.length)
    return GeneratorInstance(layout, (config,), parse_function(text, layout))


def minterm_generator(mask, config):
    layout = RegisterLayout.single(config.length)
    f = expand_minterm(mask, config.length)
    return GeneratorInstance(layout, (config,), f)


class TestLfsrConfig:
    def test_defaults_to_all_ones_seed(self):
        cfg = LfsrConfig(4, frozenset({4, 1, 0}))
        assert cfg.initial_state == 0b1111

    def test_standard_uses_table(self):
        cfg = LfsrConfig.standard(5)
        assert cfg.polynomial == frozenset({5, 2, 0})
        with pytest.raises(ValidationError):
            LfsrConfig.standard(17)

    def test_tap_mask_is_reciprocal(self):
        # x^3 taps stage 0, x^2 taps stage 1, constant term is no tap
        assert WORKED.tap_mask == 0b011
        assert LfsrConfig(4, frozenset({4, 1, 0})).tap_mask == 0b1001

    def test_polynomial_as_int(self):
        assert WORKED.polynomial_as_int == 0b1101

    @pytest.mark.parametrize(
        "length, poly, state",
        [
            (0, {1, 0}, None),
            (3, {3, 2}, None),  # no constant term
            (3, {2, 0}, None),  # no degree term
            (3, {4, 0}, None),  # exponent out of range
            (3, {3, -1, 0}, None),
            (3, {3, 2, 0}, 0),  # zero seed
            (3, {3, 2, 0}, 8),  # seed too wide
            (3, {3, 2, 0}, -1),
        ],
    )
    def test_rejects_bad_configs(self, length, poly, state):
        with pytest.raises(ValidationError):
            LfsrConfig(length, frozenset(poly), state)


class TestStepAndCycle:
    def test_worked_example_cycle(self):
        assert state_cycle(WORKED) == [3, 1, 4, 2, 5, 6, 7]

    def test_step_emits_stage_zero(self):
        out, nxt = lfsr_step(0b011, WORKED)
        assert out == 1
        assert nxt == 0b001

    def test_step_rejects_bad_states(self):
        with pytest.raises(ValidationError):
            lfsr_step(0, WORKED)
        with pytest.raises(ValidationError):
            lfsr_step(8, WORKED)

    def test_cycle_visits_every_nonzero_state(self):
        for length in range(2, 11):
            cfg = LfsrConfig.standard(length)
            states = state_cycle(cfg)
            assert len(states) == (1 << length) - 1
            assert set(states) == set(range(1, 1 << length))

    def test_degenerate_single_stage(self):
        cfg = LfsrConfig(1, frozenset({1, 0}))
        assert state_cycle(cfg) == [1]

    def test_short_cycle_polynomial_rejected(self):
        # x^3 + x^2 + x + 1 = (x + 1)^3 never sustains the 7-step period
        cfg = LfsrConfig(3, frozenset({3, 2, 1, 0}), 0b011)
        with pytest.raises(ValidationError):
            state_cycle(cfg)

    def test_seed_only_rotates_the_cycle(self):
        reference = state_cycle(WORKED)
        for seed in range(1, 8):
            cycle = state_cycle(LfsrConfig(3, frozenset({3, 2, 0}), seed))
            k = reference.index(seed)
            assert cycle == reference[k:] + reference[:k]


class TestGeneratorOutput:
    def test_minterm_functions_emit_one_hot_sequences(self):
        # each minterm fires exactly at its own state visit
        cycle = state_cycle(WORKED)
        for mask in range(1, 8):
            g = minterm_generator(mask, WORKED)
            expected = [1 if s == mask else 0 for s in cycle]
            assert generate_output(g, 7) == expected
            assert sum(expected) == 1

    def test_weight_one_minterm_mix(self):
        # XOR of the three single-bit-state minterms: fires at states 1, 2, 4
        layout = RegisterLayout.single(3)
        f = parse_function("m2*m1*m0 ^ m2 ^ m1 ^ m0", layout)
        g = GeneratorInstance(layout, (WORKED,), f)
        assert generate_output(g, 7) == [0, 1, 1, 1, 0, 0, 0]

    def test_stage_output_function(self):
        g = single_register_generator("m0", WORKED)
        assert generate_output(g, 7) == [s & 1 for s in state_cycle(WORKED)]

    def test_output_repeats_with_the_period(self):
        g = single_register_generator("m1*m0 ^ m2", WORKED)
        bits = generate_output(g, 21)
        assert bits[:7] == bits[7:14] == bits[14:]

    def test_rejects_negative_steps(self):
        g = single_register_generator("m0", WORKED)
        with pytest.raises(ValidationError):
            generate_output(g, -1)

    def test_chunked_path_matches_stepwise(self):
        rng = random.Random(3001)
        for lengths in [(("m", 5),), (("a", 3), ("b", 4)), (("a", 2), ("b", 3), ("c", 5))]:
            layout = RegisterLayout.from_lengths(list(lengths))
            f = random_function(rng, layout, max_terms=5)
            if not f.terms:
                continue
            configs = tuple(LfsrConfig.standard(r.length) for r in layout.registers)
            g = GeneratorInstance(layout, configs, f)
            steps = layout.period() + 3
            for chunk in (1, 7, 64, 10**6):
                chunks = list(iter_output_chunks(g, steps, chunk=chunk))
                flat = [int(b) for arr in chunks for b in arr]
                assert flat == generate_output(g, steps)

    def test_instance_validation(self):
        layout = geffe_layout()
        f = parse_function("a0*b0 ^ b0*c0 ^ c0", layout)
        good = (LfsrConfig.standard(2), LfsrConfig.standard(3), LfsrConfig.standard(5))
        with pytest.raises(ValidationError):
            GeneratorInstance(layout, good[:2], f)
        with pytest.raises(ValidationError):
            GeneratorInstance(layout, (good[0], good[1], LfsrConfig.standard(4)), f)
        other = parse_function("m0", RegisterLayout.single(3))
        with pytest.raises(ValidationError):
            GeneratorInstance(layout, good, other)


class TestVerifyMaximumLength:
    def test_known_answers(self):
        assert verify_maximum_length(LfsrConfig(3, frozenset({3, 2, 0}))) is True
        assert verify_maximum_length(LfsrConfig(2, frozenset({2, 1, 0}))) is True
        # irreducible but of order 5, not 15
        assert (
            verify_maximum_length(LfsrConfig(4, frozenset({4, 3, 2, 1, 0}))) is False
        )
        # reducible
        assert verify_maximum_length(LfsrConfig(3, frozenset({3, 2, 1, 0}))) is False

    def test_bound_forces_explicit_trust(self):
        cfg = LfsrConfig(25, frozenset({25, 3, 0}))
        with pytest.raises(UnverifiedPolynomialError) as info:
            verify_maximum_length(cfg)
        assert info.value.exit_code == 2
        assert verify_maximum_length(cfg, bound=25) is True

    def test_table_entries_are_maximum_length(self):
        for length, entries in PRIMITIVE_POLYNOMIALS.items():
            assert len(entries) == (1 if length == 2 else 2)
            for exponents in entries:
                cfg = LfsrConfig(length, frozenset(exponents))
                assert verify_maximum_length(cfg) is True

    @pytest.mark.parametrize("degree", range(2, 10))
    def test_agrees_with_cycle_enumeration(self, degree):
        # every polynomial of this degree with a constant term
        period = (1 << degree) - 1
        for middle in range(1 << (degree - 1)):
            poly = (1 << degree) | (middle << 1) | 1
            exponents = frozenset(
                e for e in range(degree + 1) if (poly >> e) & 1
            )
            cfg = LfsrConfig(degree, frozenset(exponents), 1)
            s = 1
            steps = 0
            while True:
                _, s = lfsr_step(s, cfg)
                steps += 1
                if s == 1 or steps > period:
                    break
            assert verify_maximum_length(cfg) is (steps == period)


class TestCountingOracles:
    def test_truthtable_matches_naive_walk(self):
        rng = random.Random(3002)
        shapes = [(("m", 4),), (("m", 7),)] + list(COPRIME_SHAPES[:4])
        for shape in shapes:
            layout = RegisterLayout.from_lengths(list(shape))
            for _ in range(5):
                f = random_function(rng, layout, max_terms=6)
                assert count_ones_truthtable(f) == naive_ones_count(f)

    def test_truthtable_guard(self):
        f = parse_function("m0", RegisterLayout.single(24))
        with pytest.raises(ResourceLimitError):
            count_ones_truthtable(f)
        assert count_ones_truthtable(f, max_bits=24) == 1 << 23
        with pytest.raises(ValidationError):
            count_ones_truthtable(f, max_bits=0)

    def test_simulated_known_count(self):
        layout = geffe_layout()
        f = parse_function("a0*b0 ^ b0*c0 ^ c0", layout)
        configs = tuple(LfsrConfig.standard(r.length) for r in layout.registers)
        g = GeneratorInstance(layout, configs, f)
        assert count_ones_simulated(g) == 392

    def test_simulated_count_ignores_seed_and_polynomial_choice(self):
        layout = geffe_layout()
        f = parse_function("a0*b0 ^ b0*c0 ^ c0", layout)
        rng = random.Random(3003)
        for _ in range(4):
            configs = []
            for reg in layout.registers:
                exponents = PRIMITIVE_POLYNOMIALS[reg.length][
                    rng.randrange(len(PRIMITIVE_POLYNOMIALS[reg.length]))
                ]
                seed = rng.randrange(1, 1 << reg.length)
                configs.append(LfsrConfig(reg.length, frozenset(exponents), seed))
            g = GeneratorInstance(layout, tuple(configs), f)
            assert count_ones_simulated(g) == 392

    def test_simulated_budget(self):
        g = single_register_generator("m0", LfsrConfig.standard(5))
        with pytest.raises(ResourceLimitError):
            count_ones_simulated(g, max_steps=30)

    def test_simulated_rejects_short_cycle_polynomial(self):
        cfg = LfsrConfig(4, frozenset({4, 3, 2, 1, 0}))
        g = single_register_generator("m0", cfg)
        with pytest.raises(ValidationError):
            count_ones_simulated(g)
        # trusting skips verification; the walk then covers three laps of the
        # order-5 cycle and simply reports what the sequence does
        trusted = count_ones_simulated(g, verify_polynomials=False)
        assert trusted == sum(generate_output(g, 15))

    def test_simulated_agrees_with_truthtable(self):
        rng = random.Random(3004)
        layout = RegisterLayout.from_lengths([("a", 3), ("b", 4)])
        configs = (LfsrConfig.standard(3), LfsrConfig.standard(4))
        for _ in range(10):
            f = random_function(rng, layout, max_terms=6)
            g = GeneratorInstance(layout, configs, f)
            assert count_ones_simulated(g) == count_ones_truthtable(f)


class TestMonobit:
    def test_worked_sequence(self):
        assert monobit_statistic([0, 1, 1, 1, 0, 0, 0]) == (3, Fraction(3, 7))

    def test_balanced_sequence(self):
        ones, share = monobit_statistic([0, 1] * 8)
        assert ones == 8
        assert share == Fraction(1, 2)

    def test_rejects_empty_and_non_bits(self):
        with pytest.raises(ValidationError):
            monobit_statistic([])
        with pytest.raises(ValidationError):
            monobit_statistic([0, 1, 2])
