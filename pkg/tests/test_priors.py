import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from falsikit.priors import (EnsembleSpec, ModelClassSpec, PriorSpec,
                             draw_sample, generate_ensemble, sample_prior,
                             sample_rng, theta_matrix)

_SQRT3 = np.sqrt(3.0)


def _nl_class(class_id="bw"):
    return ModelClassSpec(
        class_id=class_id,
        parameter_names=("k_post", "c_b", "r_k", "Q_y"),
        priors=(PriorSpec("lognormal", 4.5, 0.25), PriorSpec("lognormal", 20.0, 4.0),
                PriorSpec("uniform", 0.16, 0.0058), PriorSpec("uniform", 4.75, 0.2887)),
        physics_binding="boucwen",
    )


class TestPriorSpec:
    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError, match="unknown prior kind"):
            PriorSpec("gamma", 1.0, 1.0)

    def test_nonpositive_std_rejected(self):
        with pytest.raises(ValueError, match="std_dev"):
            PriorSpec("normal", 0.0, 0.0)

    def test_lognormal_needs_positive_mean(self):
        with pytest.raises(ValueError, match="mean"):
            PriorSpec("lognormal", -1.0, 1.0)

    def test_positive_only_limited_to_normal(self):
        with pytest.raises(ValueError, match="positive_only"):
            PriorSpec("uniform", 1.0, 1.0, positive_only=True)

    def test_uniform_support_endpoints(self):
        spec = PriorSpec("uniform", 10.0, 2.0)
        lo, hi = spec.support
        assert lo == pytest.approx(10.0 - 2.0 * _SQRT3)
        assert hi == pytest.approx(10.0 + 2.0 * _SQRT3)
        assert spec.contains(lo) and spec.contains(hi)
        assert not spec.contains(hi + 1e-9)

    def test_uniform_log_pdf(self):
        spec = PriorSpec("uniform", 0.0, 1.0)
        width = 2.0 * _SQRT3
        assert spec.log_pdf(0.0) == pytest.approx(-np.log(width))
        assert spec.log_pdf(100.0) == -np.inf

    def test_lognormal_log_pdf_matches_scipy(self):
        from scipy.stats import lognorm
        spec = PriorSpec("lognormal", 4.5, 0.25)
        sig2 = np.log1p((0.25 / 4.5) ** 2)
        dist = lognorm(s=np.sqrt(sig2), scale=np.exp(np.log(4.5) - sig2 / 2))
        for x in (3.5, 4.5, 6.0):
            assert spec.log_pdf(x) == pytest.approx(dist.logpdf(x), rel=1e-12)
        assert spec.log_pdf(-1.0) == -np.inf

    def test_normal_log_pdf_matches_scipy(self):
        from scipy.stats import norm
        spec = PriorSpec("normal", 2.0, 0.5)
        assert spec.log_pdf(1.3) == pytest.approx(norm(2.0, 0.5).logpdf(1.3), rel=1e-12)


class TestSamplePrior:
    def test_moment_recovery(self):
        # sample mean and std within 3 standard errors of the requested moments
        n = 200_000
        for spec in (PriorSpec("normal", 2.0, 0.7), PriorSpec("lognormal", 4.5, 0.25),
                     PriorSpec("uniform", 0.16, 0.0058)):
            rng = np.random.default_rng(9)
            draws = np.array([sample_prior(spec, rng) for _ in range(n)])
            se_mean = spec.std_dev / np.sqrt(n)
            assert abs(draws.mean() - spec.mean) < 3.0 * se_mean
            # std of the sample std is roughly s / sqrt(2n) for these families
            assert abs(draws.std(ddof=1) - spec.std_dev) < 5.0 * spec.std_dev / np.sqrt(2 * n)

    def test_lognormal_support(self):
        spec = PriorSpec("lognormal", 0.01, 0.05)
        rng = np.random.default_rng(3)
        assert all(sample_prior(spec, rng) > 0.0 for _ in range(5000))

    def test_uniform_support(self):
        spec = PriorSpec("uniform", 5.0, 1.0)
        lo, hi = spec.support
        rng = np.random.default_rng(4)
        draws = [sample_prior(spec, rng) for _ in range(5000)]
        assert min(draws) >= lo and max(draws) <= hi

    def test_positive_only_redraws(self):
        # mean below zero forces frequent redraws; all results must be positive
        spec = PriorSpec("normal", 0.1, 1.0, positive_only=True)
        rng = np.random.default_rng(5)
        draws = [sample_prior(spec, rng) for _ in range(2000)]
        assert min(draws) > 0.0


class TestEnsemble:
    def test_sample_counts(self):
        spec = EnsembleSpec((_nl_class("a"), _nl_class("b")), samples_per_class=3,
                            master_seed=1)
        ens = generate_ensemble(spec)
        assert sorted(ens) == ["a", "b"]
        for cid in ens:
            assert [s.sample_index for s in ens[cid]] == [0, 1, 2]

    def test_determinism(self):
        spec = EnsembleSpec((_nl_class(),), samples_per_class=50, master_seed=77)
        a = theta_matrix(generate_ensemble(spec)["bw"])
        b = theta_matrix(generate_ensemble(spec)["bw"])
        assert np.array_equal(a, b)

    def test_order_independent_sampling(self):
        # drawing one sample in isolation matches its slot in the full ensemble
        cls = _nl_class()
        spec = EnsembleSpec((cls,), samples_per_class=20, master_seed=123)
        ens = generate_ensemble(spec)["bw"]
        for i in (0, 7, 19):
            assert draw_sample(cls, 123, i).theta == ens[i].theta

    def test_class_id_decorrelates_streams(self):
        a = theta_matrix(generate_ensemble(
            EnsembleSpec((_nl_class("a"),), 10, 1))["a"])
        b = theta_matrix(generate_ensemble(
            EnsembleSpec((_nl_class("b"),), 10, 1))["b"])
        assert not np.array_equal(a, b)

    def test_duplicate_class_ids_rejected(self):
        with pytest.raises(ValueError, match="duplicate class_id"):
            EnsembleSpec((_nl_class("x"), _nl_class("x")), 2, 1)

    def test_mismatched_priors_rejected(self):
        with pytest.raises(ValueError, match="priors"):
            ModelClassSpec("c", ("a", "b"), (PriorSpec("normal", 0, 1),), "boucwen")

    def test_duplicate_parameter_names_rejected(self):
        with pytest.raises(ValueError, match="duplicate parameter"):
            ModelClassSpec("c", ("a", "a"),
                           (PriorSpec("normal", 0, 1), PriorSpec("normal", 0, 1)), "boucwen")

    def test_log_prior_sums_marginals(self):
        cls = _nl_class()
        theta = (4.5, 20.0, 0.16, 4.75)
        expected = sum(float(p.log_pdf(t)) for p, t in zip(cls.priors, theta))
        assert cls.log_prior(theta) == pytest.approx(expected, rel=1e-14)


@settings(max_examples=50, deadline=None)
@given(master=st.integers(0, 2**31 - 1), index=st.integers(0, 10_000),
       cid=st.text(min_size=1, max_size=20))
def test_sample_rng_is_pure(master, index, cid):
    a = sample_rng(master, cid, index).standard_normal(4)
    b = sample_rng(master, cid, index).standard_normal(4)
    assert np.array_equal(a, b)


@settings(max_examples=100, deadline=None)
@given(mean=st.floats(0.01, 1e6), rel=st.floats(0.01, 2.0), seed=st.integers(0, 2**31))
def test_lognormal_draws_positive(mean, rel, seed):
    spec = PriorSpec("lognormal", mean, rel * mean)
    value = sample_prior(spec, np.random.default_rng(seed))
    assert value > 0.0 and np.isfinite(value)


@settings(max_examples=100, deadline=None)
@given(mean=st.floats(-1e6, 1e6), std=st.floats(1e-6, 1e6), seed=st.integers(0, 2**31))
def test_uniform_draws_in_support(mean, std, seed):
    spec = PriorSpec("uniform", mean, std)
    lo, hi = spec.support
    value = sample_prior(spec, np.random.default_rng(seed))
    assert lo <= value <= hi
