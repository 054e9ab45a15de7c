import pytest

from cn_duality.verify import run_verify


class TestRunVerify:
    def test_minimal_n_still_nonempty(self):
        report = run_verify(seed=7, n_max=1, draws=3)
        assert len(report.checks) >= 18
        assert report.overall_pass

    def test_thread_pool_matches_sequential(self):
        seq = run_verify(seed=8, n_max=2, draws=4, threads=1)
        par = run_verify(seed=8, n_max=2, draws=4, threads=4)
        assert seq.to_dict() == par.to_dict()

    def test_env_var_controls_threads(self, monkeypatch):
        monkeypatch.setenv("CN_DUALITY_THREADS", "2")
        report = run_verify(seed=9, n_max=1, draws=2)
        assert report.overall_pass

    def test_records_sorted_by_name(self):
        report = run_verify(seed=10, n_max=1, draws=2)
        names = [rec.name for rec in report.checks]
        assert names == sorted(names)

    def test_tolerance_override(self):
        report = run_verify(seed=7, n_max=1, draws=2, tolerances={"duality_roundtrip": 1e-30})
        failing = [rec.name for rec in report.checks if not rec.passed]
        assert failing == ["duality_roundtrip"]
        assert not report.overall_pass

    def test_unknown_override_rejected(self):
        with pytest.raises(ValueError):
            run_verify(seed=7, n_max=1, draws=2, tolerances={"bogus": 1.0})

    def test_bad_parameters_rejected(self):
        with pytest.raises(ValueError):
            run_verify(n_max=0)
        with pytest.raises(ValueError):
            run_verify(draws=0)
