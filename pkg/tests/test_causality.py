import math
import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from lsiverify.causality import (ContourError, ContourSpec, DualizationError, DualizationTask,
                                 ResponseExponents, ResponseSingularity, causality_report,
                                 collapse_residual, contour_independence, dualize_pointwise,
                                 integral_I, log_rotated, response_scaling, scaling_function,
                                 scaling_samples)

XS = (0.3, 0.7, 1.0, 1.5, 2.5)
ABOVE = ContourSpec(half_plane="above")

# I_+^(n)(x) from an mpmath keyhole (radius 1/4, 30 digits), computed before the
# contour module existed and frozen here
FROZEN_I_PLUS = {
    (0, 0.3): complex(1.8713789066615843, -0.95351517859113646),
    (0, 0.7): complex(2.1975229913693811, -4.3128817089506518),
    (0, 1.0): complex(0.0, -6.2831853071795865),
    (0, 1.5): complex(-5.013256549262001, -5.013256549262001),
    (0, 2.5): complex(-3.342171032841334, 3.342171032841334),
    (1, 0.3): complex(-5.0567718094224637, 6.2792651218764074),
    (1, 0.7): complex(4.0936289370571921, 8.7136783121231527),
    (1, 1.0): complex(9.8696044010893586, 3.626752984783207),
    (1, 1.5): complex(7.6918713718307111, -8.0577385738917086),
    (1, 2.5): complex(-7.5999397378220284, -2.8998002259929181),
}


def mp_keyhole(n, x, rho="0.25"):
    """Independent cut-wrapping oracle at 30 digits."""
    with mp.workdps(30):
        rho, x = mp.mpf(rho), mp.mpf(x)

        def g(s, phi):
            lz = mp.log(s) + 1j * phi
            val = mp.exp(-1j * s * mp.expj(phi) - x * lz)
            return val * lz if n else val
        up, down = 3 * mp.pi / 2, -mp.pi / 2
        left = 1j * mp.quad(lambda s: g(s, up), [rho, 1, 10, mp.inf])
        circ = -mp.quad(lambda p: g(rho, p) * 1j * rho * mp.expj(p), [down, 0, mp.pi / 2, mp.pi, up])
        right = -1j * mp.quad(lambda s: g(s, down), [rho, 1, 10, mp.inf])
        return complex(left + circ + right)


# -- I_pm ------------------------------------------------------------------------------

@pytest.mark.parametrize("n", [0, 1])
@pytest.mark.parametrize("x", XS)
def test_lower_integral_vanishes(n, x):
    r = integral_I(n, x)
    assert abs(r.value) <= 1e-8
    assert r.total_error <= 1e-10


@pytest.mark.parametrize("n", [0, 1])
@pytest.mark.parametrize("x", XS)
def test_upper_integral_matches_frozen_oracle(n, x):
    want = FROZEN_I_PLUS[(n, x)]
    for scheme in ("keyhole", "staple"):
        got = integral_I(n, x, ABOVE, scheme=scheme).value
        assert abs(got - want) <= 1e-8 * abs(want)


@pytest.mark.parametrize("n,x", [(0, 0.7), (1, 1.5)])
def test_live_mpmath_oracle(n, x):
    want = mp_keyhole(n, x, rho="0.4")
    got = integral_I(n, x, ABOVE, scheme="staple").value
    assert abs(got - want) <= 1e-8 * abs(want)


def test_upper_integral_gamma_identity():
    # supplementary: the Fourier transform of (z + i0)^(-x) is 2 pi e^{-i pi x/2} / Gamma(x)
    for x in XS:
        want = 2 * math.pi * complex(math.cos(-math.pi * x / 2), math.sin(-math.pi * x / 2)) / math.gamma(x)
        assert abs(integral_I(0, x, ABOVE).value - want) <= 1e-10 * abs(want)


@pytest.mark.parametrize("half_plane", ["above", "below"])
def test_contour_independence(half_plane):
    spec = ContourSpec(half_plane=half_plane)
    for n in (0, 1):
        for x in (0.7, 1.5):
            changes = contour_independence(n, x, spec)
            assert max(changes.values()) <= 1e-8, changes


@pytest.mark.filterwarnings("ignore::lsiverify.causality.ConvergenceWarning")
def test_tail_estimate_decreases_with_depth():
    tails = [integral_I(0, 1.5, ContourSpec(tail_depth=D)).tail for D in (5, 10, 20, 40)]
    assert all(a > b for a, b in zip(tails, tails[1:]))


def test_shallow_contour_warns():
    with pytest.warns(RuntimeWarning):
        integral_I(0, 0.3, ContourSpec(tail_depth=2.0))


def test_domain_errors():
    with pytest.raises(ContourError):
        integral_I(0, 0.0)
    with pytest.raises(ContourError):
        integral_I(2, 1.0)
    with pytest.raises(ContourError):
        ContourSpec(epsilon=1.5)
    with pytest.raises(ContourError):
        ContourSpec(L=5)


@given(st.floats(-10, 10), st.floats(-10, 10))
def test_rotated_log_agrees_with_principal_above_axis(a, b):
    z = complex(a, abs(b) + 1e-3)
    assert abs(log_rotated(z) - complex(__import__("cmath").log(z))) <= 1e-12


# -- dualization --------------------------------------------------------------------------

TASK = DualizationTask.symmetric(0.8, 0.3, 0.4)


def test_negative_time_is_suppressed():
    neg = abs(dualize_pointwise(TASK, -1.0, 1.0).value)
    pos = abs(dualize_pointwise(TASK, 1.0, 1.0).value)
    assert neg <= 1e-6 * pos


def test_gaussian_ratio_is_constant():
    def ratio(t, r):
        return dualize_pointwise(TASK, t, r).value / (t ** -TASK.x * math.exp(-TASK.M * r * r / (2 * t)))
    a, b = ratio(2.0, 1.0), ratio(1.0, 0.5)
    assert abs(a - b) <= 1e-6 * abs(b)


def test_g0_identity():
    g0 = dualize_pointwise(TASK, 1.0, 0.0).value
    k = TASK.kappa
    want = 2 ** -k * TASK.M ** (k - 1) * TASK.g0 * integral_I(0, k, ABOVE).value
    assert abs(g0 - want) <= 1e-8 * abs(want)


def test_mass_dependence_of_g0():
    task = DualizationTask.symmetric(0.8, 0.3, M=2.5)
    k = task.kappa
    want = 2 ** -k * 2.5 ** (k - 1) * integral_I(0, k, ABOVE).value
    assert abs(dualize_pointwise(task, 1.0, 0.0).value - want) <= 1e-8 * abs(want)


@pytest.mark.parametrize("x,xi", [(0.8, 0.3), (1.5, 0.0), (0.5, 1.0)])
def test_causality_report_symmetric_and_asymmetric(x, xi):
    for task, slope in ((DualizationTask.symmetric(x, xi, 0.4), -1.0),
                        (DualizationTask.asymmetric(x, xi, 0.3), 0.0)):
        c = causality_report(task)
        a = c.aggregates
        assert a["suppression_ratio"] <= 1e-6
        assert a["gaussian_spread"] <= 1e-6
        assert abs(a["slope_ratio"] - slope) <= 1e-4
        assert a["g0_identity_rel_err"] <= 1e-8
        assert c.to_report().ok


def test_parallel_report_is_identical():
    small = DualizationTask.symmetric(0.8, 0.3, grid=((1.0, 0.0), (2.0, 1.0), (-1.0, 1.0), (0.5, 0.5)))
    a = causality_report(small).to_dict()
    b = causality_report(small, workers=2).to_dict()
    assert a == b


def test_dualization_domain_errors():
    with pytest.raises(DualizationError):
        dualize_pointwise(TASK, 0.0, 1.0)
    with pytest.raises(DualizationError):
        DualizationTask(x=0.5, xi_sum=-0.6)
    with pytest.raises(DualizationError):
        DualizationTask(x=0.5, xi_sum=0.1, M=-1)
    with pytest.raises(DualizationError):
        causality_report(DualizationTask(0.5, 0.1, grid=((1.0, 0.0),)))


# -- response form --------------------------------------------------------------------------

def test_response_examples():
    assert response_scaling(2.0, 1.0) == 1.0
    assert response_scaling(4.0, 2.0) == 0.5
    assert response_scaling(0.5, 1.0) == 0.0


@given(st.floats(0.0, 0.999), st.floats(0.1, 10), st.floats(-0.9, 2), st.floats(-0.9, 2))
def test_response_vanishes_before_waiting_time(y, s, a, ap):
    assert response_scaling(y * s, s, a, ap, 1.3, 2.0, 1.7) == 0.0


def test_response_singularity_is_signalled():
    with pytest.warns(ResponseSingularity):
        assert math.isinf(scaling_function(1.0, ResponseExponents(ap=0.2)))


def test_collapse_is_exact_on_scaling_data():
    e = ResponseExponents()
    assert collapse_residual(scaling_samples([(3 * s, s) for s in (1, 2, 4)], e), e) == 0.0


def test_collapse_detects_wrong_exponent():
    e = ResponseExponents(a=0.2)
    data = scaling_samples([(3 * s, s) for s in (1, 2, 4)], ResponseExponents(a=0.5))
    assert collapse_residual(data, e) > 1e-3


def test_response_rejects_nonpositive_waiting_time():
    with pytest.raises(ValueError):
        response_scaling(1.0, 0.0)
