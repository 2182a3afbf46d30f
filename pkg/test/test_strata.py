import unittest

import numpy as np

from survmed.composite import (DEATH, ScoreDistribution, median_in_survivors,
                               survived)
from survmed.examples import figure3_scenario
from survmed.exceptions import ScenarioError
from survmed.strata import (ARM0_ONLY, ARM1_ONLY, STRATA, Assignment,
                            Population, ScenarioSpec, StratumLabel,
                            SubjectRecord, always_survivor_fraction_identified,
                            always_survivor_mean_oracle,
                            always_survivor_median_oracle, generate_population,
                            observed_distribution, observed_marginals,
                            require_valid, validate_scenario)

TESTSEED = 271828

AS = StratumLabel.ALWAYS_SURVIVOR
PROTECTED = StratumLabel.PROTECTED
HARMED = StratumLabel.HARMED
NEVER = StratumLabel.NEVER_SURVIVOR


def random_monotone_spec(rng):
    """
    A random valid scenario without harmed subjects, scores on 0..4.
    """
    weights = rng.random(3) + 0.05
    weights /= weights.sum()
    proportions = {AS: weights[0], PROTECTED: weights[1], NEVER: weights[2]}
    proportions[NEVER] = 1.0 - proportions[AS] - proportions[PROTECTED]

    def dist():
        p = rng.random(5) + 0.01
        return ScoreDistribution(range(5), p / p.sum())

    scores = {(AS, 0): dist(), (AS, 1): dist(), (PROTECTED, 1): dist()}
    return ScenarioSpec(proportions, scores, monotonicity=True)


class TestStratumLabel(unittest.TestCase):
    def test_survival(self):
        self.assertEqual((1, 1), AS.survival)
        self.assertEqual((0, 1), PROTECTED.survival)
        self.assertEqual((1, 0), HARMED.survival)
        self.assertEqual((0, 0), NEVER.survival)
        for label in STRATA:
            self.assertEqual(label, StratumLabel.from_survival(*label.survival))

    def test_survives(self):
        self.assertTrue(PROTECTED.survives(1))
        self.assertFalse(PROTECTED.survives(0))
        with self.assertRaises(ValueError):
            AS.survives(2)

    def test_canonical_order(self):
        self.assertEqual(['always_survivor', 'protected', 'harmed',
                          'never_survivor'], [s.value for s in STRATA])


class TestSubjectRecord(unittest.TestCase):
    def test_consistent(self):
        record = SubjectRecord('s1', 1, survived(3), 'protected')
        self.assertEqual(PROTECTED, record.stratum)
        self.assertEqual('s1', record.id)
        record = SubjectRecord(7, 0, DEATH)
        self.assertEqual('7', record.id)
        self.assertIsNone(record.stratum)

    def test_inconsistent(self):
        with self.assertRaises(ValueError):
            SubjectRecord('s1', 1, DEATH, PROTECTED)
        with self.assertRaises(ValueError):
            SubjectRecord('s1', 0, survived(1), NEVER)
        with self.assertRaises(ValueError):
            SubjectRecord('s1', 2, DEATH)
        with self.assertRaises(TypeError):
            SubjectRecord('s1', 0, None)


class TestScenarioSpec(unittest.TestCase):
    """
    Unit tests for scenario construction and validation
    """

    def test_construction(self):
        spec = figure3_scenario()
        self.assertEqual(0.56, spec.proportion(AS))
        self.assertEqual(0.0, spec.proportion('harmed'))
        self.assertTrue(spec.monotonicity_asserted)
        self.assertIsNone(spec.score_distribution(PROTECTED, 0))
        self.assertEqual(set(STRATA), set(spec.proportions))

    def test_unknown_names(self):
        with self.assertRaises(ValueError):
            ScenarioSpec({'sometimes_survivor': 1.0})
        with self.assertRaises(ValueError):
            ScenarioSpec({AS: 1.0}, {(AS, 2): {0: 1.0}})

    def test_equality(self):
        self.assertEqual(figure3_scenario(), figure3_scenario())
        other = ScenarioSpec(figure3_scenario().proportions,
                             figure3_scenario().scores, monotonicity=False)
        self.assertNotEqual(figure3_scenario(), other)

    def test_valid(self):
        self.assertEqual([], validate_scenario(figure3_scenario()))
        require_valid(figure3_scenario())

    def test_proportion_range(self):
        spec = ScenarioSpec({AS: 1.5, NEVER: -0.5},
                            {(AS, 0): {0: 1.0}, (AS, 1): {0: 1.0}})
        violations = validate_scenario(spec)
        self.assertIn("proportion of always_survivor outside [0, 1]",
                      violations)
        self.assertIn("proportion of never_survivor outside [0, 1]",
                      violations)

    def test_proportion_sum(self):
        spec = ScenarioSpec({NEVER: 0.9})
        self.assertEqual(["proportions do not sum to 1"],
                         validate_scenario(spec))

    def test_scores_for_the_dead(self):
        spec = ScenarioSpec({NEVER: 1.0}, {(NEVER, 0): {0: 1.0}})
        self.assertEqual(["scores given for never_survivor/0, which dies "
                          "under arm 0"], validate_scenario(spec))

    def test_scores_missing(self):
        spec = ScenarioSpec({AS: 0.5, PROTECTED: 0.5}, {(AS, 0): {0: 1.0},
                                                         (AS, 1): {0: 1.0}})
        self.assertEqual(["scores missing for protected/1"],
                         validate_scenario(spec))

    def test_scores_optional_for_empty_strata(self):
        spec = ScenarioSpec({AS: 1.0}, {(AS, 0): {0: 1.0},
                                        (AS, 1): {0: 1.0}})
        self.assertEqual([], validate_scenario(spec))

    def test_scores_not_normalized(self):
        spec = ScenarioSpec({AS: 1.0}, {(AS, 0): {0: 0.5, 1: 0.4},
                                        (AS, 1): {0: 1.0}})
        self.assertEqual(["scores for always_survivor/0 do not sum to 1"],
                         validate_scenario(spec))

    def test_monotonicity_violated(self):
        spec = ScenarioSpec({AS: 0.45, HARMED: 0.05, NEVER: 0.5},
                            {(AS, 0): {1: 1.0}, (AS, 1): {1: 1.0},
                             (HARMED, 0): {0: 1.0}}, monotonicity=True)
        self.assertEqual(["monotonicity violated"], validate_scenario(spec))
        with self.assertRaises(ScenarioError) as context:
            require_valid(spec)
        self.assertEqual(["monotonicity violated"],
                         context.exception.violations)
        self.assertIsInstance(context.exception, ValueError)

    def test_validate_requires_spec(self):
        with self.assertRaises(TypeError):
            validate_scenario({'always_survivor': 1.0})


class TestObservedMarginals(unittest.TestCase):
    def test_figure3_arm0(self):
        p_death, survivors = observed_marginals(figure3_scenario(), 0)
        self.assertAlmostEqual(0.44, p_death)
        self.assertAlmostEqual(26 / 56.0, survivors.as_dict()[0.0])
        self.assertAlmostEqual(30 / 56.0, survivors.as_dict()[1.0])

    def test_figure3_arm1_recomposes(self):
        """
        The observed arm-1 outcomes recompose to 20% death, 45% bad and 35%
        good
        """
        dist = observed_distribution(figure3_scenario(), 1)
        self.assertAlmostEqual(0.2, dist.p_death)
        self.assertAlmostEqual(0.35, dist.prob_alive_above(0.5))
        self.assertAlmostEqual(0.45, dist.survival_probability() -
                               dist.prob_alive_above(0.5))

    def test_everybody_dies(self):
        spec = ScenarioSpec({PROTECTED: 0.5, NEVER: 0.5},
                            {(PROTECTED, 1): {0: 1.0}})
        self.assertEqual((1.0, None), observed_marginals(spec, 0))

    def test_invalid_scenario(self):
        with self.assertRaises(ScenarioError):
            observed_marginals(ScenarioSpec({NEVER: 0.5}), 0)


class TestAlwaysSurvivors(unittest.TestCase):
    def test_figure3_oracle(self):
        spec = figure3_scenario()
        self.assertEqual(1.0, always_survivor_median_oracle(spec, 0))
        self.assertEqual(0.0, always_survivor_median_oracle(spec, 1))
        self.assertAlmostEqual(30 / 56.0, always_survivor_mean_oracle(spec, 0))
        self.assertAlmostEqual(24 / 56.0, always_survivor_mean_oracle(spec, 1))

    def test_no_always_survivors(self):
        spec = ScenarioSpec({PROTECTED: 0.5, NEVER: 0.5},
                            {(PROTECTED, 1): {0: 1.0}})
        with self.assertRaises(ValueError):
            always_survivor_median_oracle(spec, 1)
        with self.assertRaises(ValueError):
            always_survivor_mean_oracle(spec, 1)

    def test_oracle_matches_control_survivors(self):
        """
        Under monotonicity the control-arm survivors are exactly the
        always-survivors
        """
        rng = np.random.default_rng(TESTSEED)
        for _ in range(200):
            spec = random_monotone_spec(rng)
            dist = observed_distribution(spec, 0)
            self.assertEqual(always_survivor_median_oracle(spec, 0),
                             dist.median_in_survivors())

    def test_identified_fraction(self):
        self.assertEqual(0.56, always_survivor_fraction_identified(0.56,
                                                                   True))
        with self.assertRaises(ValueError):
            always_survivor_fraction_identified(0.56, False)
        with self.assertRaises(ValueError):
            always_survivor_fraction_identified(1.2, True)


class TestAssignment(unittest.TestCase):
    def test_fixed_arms(self):
        u = np.linspace(0, 0.99, 10)
        self.assertTrue(np.all(ARM0_ONLY.arms(u) == 0))
        self.assertTrue(np.all(ARM1_ONLY.arms(u) == 1))

    def test_randomized(self):
        u = np.array([0.1, 0.4, 0.6, 0.9])
        self.assertEqual([1, 1, 0, 0], list(Assignment.randomized().arms(u)))
        self.assertEqual([0, 0, 0, 0], list(Assignment.randomized(0).arms(u)))
        self.assertEqual(0.5, Assignment.randomized().p_treat)

    def test_invalid(self):
        with self.assertRaises(ValueError):
            Assignment.randomized(1.5)
        with self.assertRaises(ValueError):
            Assignment('stratified')


class TestGeneratePopulation(unittest.TestCase):
    """
    Unit tests for ``generate_population``
    """

    def test_invalid_arguments(self):
        with self.assertRaises(ScenarioError):
            generate_population(ScenarioSpec({NEVER: 0.5}), 10, seed=1)
        with self.assertRaises(ValueError):
            generate_population(figure3_scenario(), 0, seed=1)
        with self.assertRaises(ValueError):
            generate_population(figure3_scenario(), 10, seed=-1)
        with self.assertRaises(TypeError):
            generate_population(figure3_scenario(), 10, seed=1,
                                assignment='arm0_only')

    def test_deterministic(self):
        spec = figure3_scenario()
        a = generate_population(spec, 5000, seed=9)
        b = generate_population(spec, 5000, seed=9)
        c = generate_population(spec, 5000, seed=10)
        self.assertEqual(a, b)
        self.assertNotEqual(a, c)

    def test_prefix(self):
        """
        A smaller population is a prefix of a larger one with the same seed
        """
        spec = figure3_scenario()
        small = generate_population(spec, 300, seed=4)
        large = generate_population(spec, 1000, seed=4)
        self.assertEqual(list(small), list(large)[:300])

    def test_workers(self):
        """
        The output does not depend on the number of worker processes
        """
        spec = figure3_scenario()
        one = generate_population(spec, 150000, seed=12, workers=1)
        two = generate_population(spec, 150000, seed=12, workers=2)
        self.assertEqual(one, two)

    def test_records(self):
        population = generate_population(figure3_scenario(), 2000, seed=3)
        self.assertEqual(2000, len(population))
        ids = [record.id for record in population]
        self.assertEqual(['s{}'.format(i + 1) for i in range(2000)], ids)
        for record in population:
            self.assertEqual(record.stratum.survives(record.arm),
                             not record.outcome.is_death)
        self.assertEqual(population[1999], population[-1])
        with self.assertRaises(IndexError):
            population[2000]

    def test_arm_samples_partition(self):
        population = generate_population(figure3_scenario(), 2000, seed=3)
        arm0 = population.arm_sample(0)
        arm1 = population.arm_sample(1)
        self.assertEqual(2000, arm0.n + arm1.n)
        self.assertEqual(int(np.sum(population.alive)),
                         arm0.n_survivors + arm1.n_survivors)
        with self.assertRaises(ValueError):
            generate_population(figure3_scenario(), 10, seed=3,
                                assignment=ARM1_ONLY).arm_sample(0)

    def test_to_frame(self):
        population = generate_population(figure3_scenario(), 50, seed=3)
        frame = population.to_frame()
        self.assertEqual(['subject_id', 'arm', 'survived', 'outcome',
                          'stratum'], list(frame.columns))
        self.assertEqual(50, len(frame))
        self.assertEqual('s1', frame['subject_id'][0])

    def test_marginals(self):
        """
        At 100,000 subjects every observed cell lies within three standard
        errors of the scenario's marginals
        """
        spec = figure3_scenario()
        n = 100000
        for arm, assignment in ((0, ARM0_ONLY), (1, ARM1_ONLY)):
            population = generate_population(spec, n, seed=TESTSEED + arm,
                                             assignment=assignment)
            dist = observed_distribution(spec, arm)
            p_good = dist.prob_alive_above(0.5)
            expected = {'death': dist.p_death,
                        'bad': dist.survival_probability() - p_good,
                        'good': p_good}
            alive = population.alive
            scores = population.scores
            observed = {'death': np.mean(~alive),
                        'bad': np.mean(alive & (scores == 0.0)),
                        'good': np.mean(alive & (scores == 1.0))}
            for cell, p in expected.items():
                se = np.sqrt(p * (1 - p) / n)
                self.assertLess(abs(observed[cell] - p), 3 * se,
                                msg='arm {} {}'.format(arm, cell))

            for code, label in enumerate(STRATA):
                p = spec.proportion(label)
                share = np.mean(population.strata == code)
                if p == 0:
                    self.assertEqual(0.0, share)
                else:
                    se = np.sqrt(p * (1 - p) / n)
                    self.assertLess(abs(share - p), 3 * se)

    def test_survivor_median_of_generated_arm(self):
        population = generate_population(figure3_scenario(), 20000, seed=5,
                                         assignment=ARM0_ONLY)
        self.assertEqual(1.0, median_in_survivors(population.arm_sample(0)))

    def test_population_is_immutable(self):
        population = generate_population(figure3_scenario(), 10, seed=5)
        self.assertIsInstance(population, Population)
        with self.assertRaises(ValueError):
            population.alive[0] = False
