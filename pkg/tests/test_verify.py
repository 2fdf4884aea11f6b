import numpy as np
import pytest

from twomode import fock
from twomode import measures as ms
from twomode import states
from twomode import verify
from twomode.errors import CutoffTooSmallError


class TestCheck:
    def test_gap_and_ok(self):
        c = verify.Check("entropy", 1.0, 1.0005, 1e-3)
        assert c.gap == pytest.approx(5e-4)
        assert c.ok
        assert not verify.Check("entropy", 1.0, 1.1, 1e-3).ok

    def test_untoleranced_is_informational(self):
        assert verify.Check("covariance", 0.0, 5.0, None).ok


class TestVerifyState:
    def test_thermal_product_high_cutoff(self):
        rec = verify.verify_state(states.thermal(1.0, 1.0), cutoff=60)
        assert rec.path == "product"
        assert rec.check("entropy").gap <= 1e-8
        assert rec.check("purity").gap <= 1e-8
        assert rec.ok

    def test_squeezed_product(self):
        sigma = states.make(states.StateSpec("squeezed_thermal", nbar1=0.4, nbar2=0.2, r1=0.3, r2=-0.2))
        rec = verify.verify_state(sigma, cutoff=40)
        assert rec.path == "product" and rec.ok
        assert rec.check("mutual_information").oracle == 0.0

    def test_correlated_state(self):
        sigma = states.random_valid(11, max_thermal=0.3, max_squeeze=0.3)[0]
        rec = verify.verify_state(sigma, cutoff=20)
        assert rec.path == "two-mode"
        assert rec.ok
        assert rec.trace_deficit < 1e-6
        assert {c.quantity for c in rec.checks} == {
            "entropy",
            "purity",
            "mutual_information",
            "ppt_verdict",
            "covariance",
        }

    def test_entangled_verdict(self):
        rec = verify.verify_state(states.tmsv(0.3), cutoff=20)
        ppt = rec.check("ppt_verdict")
        assert ppt.closed_form == ppt.oracle == 1.0

    def test_tolerance_override(self):
        rec = verify.verify_state(states.thermal(1.0, 0.5), cutoff=30, tolerances={"entropy": 1e-12})
        assert not rec.check("entropy").ok
        assert not rec.ok

    def test_cutoff_too_small(self):
        with pytest.raises(CutoffTooSmallError):
            verify.verify_state(states.thermal(2.0, 2.0), cutoff=10)


class TestCorpusTools:
    def test_mode_photons(self):
        assert verify.mode_photons(states.thermal(1.0, 2.0)) == pytest.approx((1.0, 2.0))

    @pytest.mark.parametrize("nbars", [(0.3, 1.2), (1.0, 1.0), (0.0, 0.7)])
    def test_tail_equals_thermal_deficit(self, nbars):
        N = 24
        tail = verify.construction_tail(states.thermal(*nbars), N)
        deficit = max(fock.thermal_dm(n, N, np.inf).trace_deficit for n in nbars)
        assert tail == pytest.approx(deficit, rel=1e-9)

    def test_tail_grows_with_squeezing(self):
        tails = [verify.construction_tail(states.tmsv(r), 24) for r in (0.2, 0.5, 1.0)]
        assert tails[0] < tails[1] < tails[2]

    def test_corpus_deterministic_and_filtered(self):
        a = verify.oracle_corpus(size=3)
        b = verify.oracle_corpus(size=3)
        for x, y in zip(a, b):
            np.testing.assert_array_equal(x.sigma.matrix, y.sigma.matrix)
        for s in a:
            assert verify.construction_tail(s.sigma, 24) <= 1e-6
            assert abs(ms.pt_spectrum(s.sigma).n_minus - 0.5) >= 0.05
            assert np.all(np.diag(s.nu) <= 2.0)
        assert [s.index for s in a] == [0, 1, 2]

    def test_corpus_prefix_stable(self):
        short = verify.oracle_corpus(size=2)
        longer = verify.oracle_corpus(size=4)
        for x, y in zip(short, longer):
            np.testing.assert_array_equal(x.sigma.matrix, y.sigma.matrix)

    def test_impossible_filter(self):
        with pytest.raises(RuntimeError):
            verify.oracle_corpus(size=1, max_tail=0.0)
