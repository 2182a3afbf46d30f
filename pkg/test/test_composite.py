import unittest
from fractions import Fraction

import numpy as np

from survmed.composite import (DEATH, ArmSample, CompositeDistribution,
                               Ordering, Outcome, ScoreDistribution,
                               check_level, compare, mean_in_survivors,
                               median_in_survivors, order_index,
                               prob_alive_above, recommended_quantile,
                               sentinel_encode, survival_incorporated_median,
                               survival_incorporated_quantile,
                               survival_probability, survived,
                               threshold_quantile_level, type1_quantile)
from survmed.examples import (figure1_sample, figure2_samples,
                              high_mortality_sample)

TESTSEED = 314159

LEVELS = (0.1, 0.25, 0.5, 0.75, 0.9)


def random_sample(rng, max_n=12):
    n = int(rng.integers(1, max_n + 1))
    alive = rng.random(n) < rng.random()
    scores = rng.integers(-3, 4, n).astype(float)
    return ArmSample.from_arrays(alive, scores)


def random_outcome(rng):
    if rng.random() < 0.3:
        return DEATH
    return survived(int(rng.integers(-3, 4)))


def naive_quantile(sample, q):
    """
    Sort the outcomes and take the first index whose cumulative fraction
    reaches ``q``.
    """
    ranked = sorted(sample)
    n = len(ranked)
    target = Fraction(str(q))
    for k in range(1, n + 1):
        if Fraction(k, n) >= target:
            return ranked[k - 1]
    return ranked[-1]


class TestOutcome(unittest.TestCase):
    """
    Unit tests for the composite ranking
    """

    def test_death_below_every_survivor(self):
        """
        Death ranks below any survivor, however low the score
        """
        for score in (-1e9, -500, 0, 26, 1e9):
            self.assertLess(DEATH, survived(score))
            self.assertEqual(Ordering.LESS, compare(DEATH, survived(score)))
            self.assertEqual(Ordering.GREATER,
                             compare(survived(score), DEATH))

    def test_survivors_ranked_by_score(self):
        self.assertEqual(Ordering.LESS, compare(survived(26), survived(30)))
        self.assertEqual(Ordering.EQUAL, compare(survived(30), survived(30.0)))
        self.assertEqual(Ordering.EQUAL, compare(DEATH, Outcome()))

    def test_sorting(self):
        outcomes = [survived(1), DEATH, survived(-2), DEATH, survived(0)]
        self.assertEqual([DEATH, DEATH, survived(-2), survived(0),
                          survived(1)], sorted(outcomes))

    def test_invalid_scores(self):
        """
        ``Outcome`` should reject non-real and non-finite scores
        """
        with self.assertRaises(TypeError):
            survived('12')
        with self.assertRaises(TypeError):
            survived(True)
        with self.assertRaises(ValueError):
            survived(float('nan'))
        with self.assertRaises(ValueError):
            survived(float('inf'))

    def test_compare_requires_outcomes(self):
        with self.assertRaises(TypeError):
            compare(DEATH, 3)

    def test_repr_and_hash(self):
        self.assertEqual('Death', repr(DEATH))
        self.assertEqual('Survived(26.5)', repr(survived(26.5)))
        self.assertEqual(2, len(set([DEATH, Outcome(), survived(1),
                                     survived(1.0)])))

    def test_order_axioms(self):
        """
        ``compare`` should be a total order with death as its unique minimum
        """
        rng = np.random.default_rng(TESTSEED + 4)
        for _ in range(2000):
            a, b, c = (random_outcome(rng) for _ in range(3))
            ab, ba = compare(a, b), compare(b, a)
            self.assertIn(ab, tuple(Ordering))
            self.assertEqual(-int(ab), int(ba))
            if ab <= 0 and ba <= 0:
                self.assertEqual(a, b)
            if ab <= 0 and compare(b, c) <= 0:
                self.assertLessEqual(compare(a, c), 0)
            for x in (a, b, c):
                if x.is_death:
                    self.assertEqual(Ordering.EQUAL, compare(x, DEATH))
                else:
                    self.assertEqual(Ordering.LESS, compare(DEATH, x))


class TestArmSample(unittest.TestCase):
    def test_empty_sample(self):
        with self.assertRaises(ValueError):
            ArmSample([])
        with self.assertRaises(ValueError):
            ArmSample.from_arrays([], [])

    def test_not_outcomes(self):
        with self.assertRaises(TypeError):
            ArmSample([DEATH, 3])

    def test_from_arrays(self):
        sample = ArmSample.from_arrays([0, 1, 1], [12.5, 30.0, 26.0])
        self.assertEqual(3, sample.n)
        self.assertEqual(1, sample.n_deaths)
        self.assertEqual(2, sample.n_survivors)
        self.assertEqual([DEATH, survived(30), survived(26)], list(sample))
        self.assertEqual([26.0, 30.0], list(sample.survivor_scores))
        self.assertTrue(np.isnan(sample.scores[0]))

    def test_from_arrays_invalid(self):
        with self.assertRaises(ValueError):
            ArmSample.from_arrays([1, 1], [1.0])
        with self.assertRaises(ValueError):
            ArmSample.from_arrays([1, 0], [np.nan, 1.0])

    def test_from_counts(self):
        sample = ArmSample.from_counts(2, {1: 1, 0: 2})
        self.assertEqual([DEATH, DEATH, survived(0), survived(0),
                          survived(1)], list(sample))
        with self.assertRaises(ValueError):
            ArmSample.from_counts(-1, {})

    def test_immutable(self):
        sample = ArmSample.from_counts(1, {0: 1})
        with self.assertRaises(ValueError):
            sample.alive[0] = True
        with self.assertRaises(ValueError):
            sample.scores[1] = 5.0

    def test_equality(self):
        a = ArmSample([DEATH, survived(1)])
        b = ArmSample.from_arrays([False, True], [7.0, 1.0])
        self.assertEqual(a, b)
        self.assertNotEqual(a, ArmSample([survived(1), DEATH]))

    def test_indexing(self):
        sample = ArmSample([DEATH, survived(4)])
        self.assertEqual(DEATH, sample[0])
        self.assertEqual(survived(4), sample[1])
        self.assertEqual(2, len(sample))

    def test_slicing(self):
        sample = ArmSample([DEATH, survived(0), survived(1)])
        self.assertEqual(ArmSample([survived(0), survived(1)]), sample[1:])
        self.assertEqual(ArmSample([DEATH, survived(1)]), sample[::2])
        with self.assertRaises(ValueError):
            sample[3:]
        with self.assertRaises(TypeError):
            sample['0']
        with self.assertRaises(TypeError):
            sample[1.0]


class TestQuantiles(unittest.TestCase):
    """
    Unit tests for survival-incorporated quantiles
    """

    def test_check_level(self):
        for q in (0, 1, -0.1, 1.5):
            with self.assertRaises(ValueError):
                check_level(q)
        with self.assertRaises(TypeError):
            check_level('0.5')
        self.assertEqual(0.25, check_level(0.25))

    def test_order_index(self):
        self.assertEqual(50, order_index(0.5, 100))
        self.assertEqual(70, order_index(0.7, 100))
        self.assertEqual(2, order_index(0.5, 3))
        self.assertEqual(1, order_index(0.01, 3))
        self.assertEqual(1, order_index(0.5, 1))

    def test_type1_quantile(self):
        self.assertEqual(2.0, type1_quantile([3, 1, 2], 0.5))
        self.assertEqual(1.0, type1_quantile([4, 3, 2, 1], 0.25))
        self.assertEqual(2.0, type1_quantile([4, 3, 2, 1], 0.5))
        with self.assertRaises(ValueError):
            type1_quantile([], 0.5)

    def test_matches_naive_oracle(self):
        """
        ``survival_incorporated_quantile`` agrees with a naive sort-and-index
        oracle on many small random samples
        """
        rng = np.random.default_rng(TESTSEED)
        for _ in range(10000):
            sample = random_sample(rng)
            for q in LEVELS:
                self.assertEqual(naive_quantile(sample, q),
                                 survival_incorporated_quantile(sample, q))

    def test_sentinel_equivalence(self):
        """
        Encoding deaths below every survivor score and taking the ordinary
        quantile gives the composite quantile
        """
        rng = np.random.default_rng(TESTSEED + 1)
        for _ in range(1000):
            sample = random_sample(rng)
            sentinel = -4.0 - float(rng.integers(0, 100))
            encoded = sentinel_encode(sample, sentinel)
            for q in LEVELS:
                expected = survival_incorporated_quantile(sample, q)
                got = type1_quantile(encoded, q)
                if expected.is_death:
                    self.assertEqual(sentinel, got)
                else:
                    self.assertEqual(expected.score, got)

    def test_equivariance(self):
        """
        Quantiles commute with strictly increasing transformations of the
        scores, and deaths stay deaths
        """
        transforms = [lambda x: 3.0 * x + 1.0, lambda x: x * x * x,
                      lambda x: -1.0 / (x + 10.0)]
        rng = np.random.default_rng(TESTSEED + 2)
        for i in range(1000):
            sample = random_sample(rng)
            f = transforms[i % len(transforms)]
            moved = ArmSample.from_arrays(
                sample.alive, np.where(sample.alive, f(sample.scores), 0.0))
            for q in LEVELS:
                before = survival_incorporated_quantile(sample, q)
                after = survival_incorporated_quantile(moved, q)
                if before.is_death:
                    self.assertEqual(DEATH, after)
                else:
                    self.assertEqual(survived(f(before.score)), after)
            if sample.n_survivors > 0:
                self.assertEqual(f(median_in_survivors(sample)),
                                 median_in_survivors(moved))

    def test_median_defining_property(self):
        """
        At least ceil(n/2) outcomes lie at or below the median and at least
        n - ceil(n/2) + 1 at or above it
        """
        rng = np.random.default_rng(TESTSEED + 5)
        for _ in range(2000):
            sample = random_sample(rng)
            n = sample.n
            median = survival_incorporated_median(sample)
            below = sum(1 for o in sample if compare(o, median) <= 0)
            above = sum(1 for o in sample if compare(o, median) >= 0)
            half = order_index(0.5, n)
            self.assertGreaterEqual(below, half)
            self.assertGreaterEqual(above, n - half + 1)

    def test_monotone_in_level(self):
        rng = np.random.default_rng(TESTSEED + 6)
        for _ in range(2000):
            sample = random_sample(rng)
            values = [survival_incorporated_quantile(sample, q)
                      for q in LEVELS]
            for lower, upper in zip(values[:-1], values[1:]):
                self.assertLessEqual(compare(lower, upper), 0)

    def test_survivor_when_survival_exceeds_complement(self):
        """
        When more than a 1 - q share survives, the q-th quantile is a
        survivor's score
        """
        rng = np.random.default_rng(TESTSEED + 7)
        checked = 0
        for _ in range(2000):
            sample = random_sample(rng)
            survival = Fraction(sample.n_survivors, sample.n)
            for q in LEVELS:
                if survival > 1 - Fraction(str(q)):
                    checked += 1
                    self.assertFalse(
                        survival_incorporated_quantile(sample, q).is_death)
        self.assertGreater(checked, 0)

    def test_population_matches_sample(self):
        """
        The empirical distribution of a sample has the same quantiles as the
        sample
        """
        rng = np.random.default_rng(TESTSEED + 3)
        for _ in range(1000):
            sample = random_sample(rng)
            dist = sample.distribution()
            for q in LEVELS:
                self.assertEqual(survival_incorporated_quantile(sample, q),
                                 dist.quantile(q))

    def test_exact_half_dead(self):
        """
        Exactly half dead gives a death median; one death fewer gives the
        lowest survivor
        """
        self.assertEqual(DEATH, survival_incorporated_median(
            ArmSample.from_counts(50, {1: 50})))
        self.assertEqual(survived(0), survival_incorporated_median(
            ArmSample.from_counts(49, {0: 1, 1: 50})))
        self.assertEqual(survived(0), survival_incorporated_median(
            ArmSample.from_counts(49, {0: 20, 1: 31})))

    def test_level_out_of_range(self):
        sample = figure1_sample()
        for q in (0, 1, 1.2):
            with self.assertRaises(ValueError):
                survival_incorporated_quantile(sample, q)


class TestIllustrations(unittest.TestCase):
    """
    Values of the illustrative populations
    """

    def test_figure1(self):
        sample = figure1_sample()
        self.assertEqual(survived(0), survival_incorporated_median(sample))
        self.assertEqual(0.8, survival_probability(sample))
        self.assertEqual(0.35, prob_alive_above(sample, 0.5))
        self.assertEqual(0.0, median_in_survivors(sample))

    def test_figure2(self):
        arm0, arm1 = figure2_samples()
        self.assertEqual(survived(0), survival_incorporated_median(arm0))
        self.assertEqual(survived(0), survival_incorporated_median(arm1))
        self.assertEqual(1.0, median_in_survivors(arm0))
        self.assertEqual(0.0, median_in_survivors(arm1))
        self.assertEqual(0.56, survival_probability(arm0))
        self.assertEqual(0.8, survival_probability(arm1))
        self.assertEqual(0.3, prob_alive_above(arm0, 0.5))
        self.assertEqual(0.35, prob_alive_above(arm1, 0.5))
        self.assertEqual(0.7, threshold_quantile_level(arm0, 0.5))
        self.assertEqual(0.65, threshold_quantile_level(arm1, 0.5))
        self.assertAlmostEqual(30 / 56.0, mean_in_survivors(arm0))
        self.assertAlmostEqual(35 / 80.0, mean_in_survivors(arm1))

    def test_high_mortality(self):
        sample = high_mortality_sample()
        self.assertEqual(DEATH, survival_incorporated_median(sample))
        self.assertEqual(survived(1), survival_incorporated_quantile(sample,
                                                                     0.75))
        self.assertEqual(survived(1), survival_incorporated_quantile(sample,
                                                                     0.9))
        self.assertEqual(0.75, recommended_quantile(sample))

    def test_recommended_quantile(self):
        self.assertEqual(0.5, recommended_quantile(figure1_sample()))
        self.assertIsNone(recommended_quantile(
            ArmSample.from_counts(95, {1: 5})))


class TestSurvivorSummaries(unittest.TestCase):
    def test_no_survivors(self):
        sample = ArmSample.from_counts(4, {})
        with self.assertRaises(ValueError):
            median_in_survivors(sample)
        with self.assertRaises(ValueError):
            mean_in_survivors(sample)
        self.assertEqual(0.0, survival_probability(sample))
        self.assertEqual(0.0, prob_alive_above(sample, 0))
        self.assertEqual(1.0, threshold_quantile_level(sample, 0))

    def test_survivor_median_type1(self):
        sample = ArmSample.from_counts(3, {1: 2, 5: 2})
        self.assertEqual(1.0, median_in_survivors(sample))

    def test_prob_alive_above_strict(self):
        sample = ArmSample.from_counts(1, {0: 1, 1: 2})
        self.assertEqual(0.5, prob_alive_above(sample, 0))
        self.assertEqual(0.0, prob_alive_above(sample, 1))
        with self.assertRaises(ValueError):
            prob_alive_above(sample, float('nan'))
        with self.assertRaises(TypeError):
            prob_alive_above([DEATH], 0)

    def test_sentinel_encode(self):
        sample = ArmSample([DEATH, survived(0), survived(1)])
        self.assertEqual([-1.0, 0.0, 1.0],
                         list(sentinel_encode(sample, -1)))
        with self.assertRaises(ValueError):
            sentinel_encode(sample, 0)
        everyone_dies = ArmSample([DEATH, DEATH])
        self.assertEqual([7.0, 7.0], list(sentinel_encode(everyone_dies, 7)))


class TestScoreDistribution(unittest.TestCase):
    def test_merges_and_sorts(self):
        dist = ScoreDistribution([2, 1, 2], [0.25, 0.5, 0.25])
        self.assertEqual((1.0, 2.0), dist.support)
        self.assertEqual((0.5, 0.5), dist.probabilities)
        self.assertTrue(dist.is_normalized)

    def test_invalid(self):
        with self.assertRaises(ValueError):
            ScoreDistribution({})
        with self.assertRaises(ValueError):
            ScoreDistribution({1: -0.5, 2: 1.5})
        with self.assertRaises(ValueError):
            ScoreDistribution({float('inf'): 1.0})
        with self.assertRaises(TypeError):
            ScoreDistribution([1, 2])

    def test_quantile_boundary(self):
        """
        A cumulative probability equal to the level reaches it
        """
        dist = ScoreDistribution({0: 0.5, 1: 0.5})
        self.assertEqual(0.0, dist.quantile(0.5))
        self.assertEqual(1.0, dist.quantile(0.5000001))
        dist = ScoreDistribution({0: 26 / 56.0, 1: 30 / 56.0})
        self.assertEqual(1.0, dist.quantile(0.5))

    def test_summaries(self):
        dist = ScoreDistribution({0: 0.25, 2: 0.75})
        self.assertEqual(1.5, dist.mean())
        self.assertEqual(0.25, dist.cdf(1))
        self.assertEqual(0.0, dist.cdf(-1))
        self.assertEqual(0.75, dist.prob_above(0))
        self.assertEqual({0.0: 0.25, 2.0: 0.75}, dist.as_dict())

    def test_mixture(self):
        a = ScoreDistribution({0: 1.0})
        b = ScoreDistribution({1: 1.0})
        mix = ScoreDistribution.mixture([(0.75, a), (0.25, b), (0.0, a)])
        self.assertEqual({0.0: 0.75, 1.0: 0.25}, mix.as_dict())
        with self.assertRaises(ValueError):
            ScoreDistribution.mixture([(0.0, a)])

    def test_equality(self):
        self.assertEqual(ScoreDistribution({1: 0.5, 0: 0.5}),
                         ScoreDistribution([0, 1], [0.5, 0.5]))
        self.assertNotEqual(ScoreDistribution({1: 1.0}),
                            ScoreDistribution({2: 1.0}))


class TestCompositeDistribution(unittest.TestCase):
    def test_boundary(self):
        survivors = ScoreDistribution({0: 0.5, 1: 0.5})
        self.assertEqual(DEATH, CompositeDistribution(0.5, survivors).median())
        self.assertEqual(survived(0),
                         CompositeDistribution(0.49, survivors).median())

    def test_figure2_arms(self):
        arm0 = CompositeDistribution(0.44, ScoreDistribution({0: 26 / 56.0,
                                                              1: 30 / 56.0}))
        arm1 = CompositeDistribution(0.2, ScoreDistribution({0: 45 / 80.0,
                                                             1: 35 / 80.0}))
        self.assertEqual(survived(0), arm0.median())
        self.assertEqual(survived(0), arm1.median())
        self.assertEqual(1.0, arm0.median_in_survivors())
        self.assertEqual(0.0, arm1.median_in_survivors())
        self.assertAlmostEqual(0.3, arm0.prob_alive_above(0.5))
        self.assertAlmostEqual(0.65, arm1.threshold_quantile_level(0.5))
        self.assertEqual(survived(1), arm0.quantile(0.75))

    def test_everybody_dies(self):
        dist = CompositeDistribution(1.0)
        self.assertIsNone(dist.survivors)
        self.assertEqual(DEATH, dist.quantile(0.99))
        self.assertEqual(0.0, dist.prob_alive_above(0))
        with self.assertRaises(ValueError):
            dist.median_in_survivors()
        with self.assertRaises(ValueError):
            dist.mean_in_survivors()

    def test_invalid(self):
        with self.assertRaises(ValueError):
            CompositeDistribution(1.5)
        with self.assertRaises(ValueError):
            CompositeDistribution(0.5)
        with self.assertRaises(TypeError):
            CompositeDistribution(0.5, {0: 1.0})
