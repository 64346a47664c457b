import numpy as np
import pytest

from isobessel.bessel_core import RadialGrid
from isobessel.errors import DomainError
from isobessel.isospectral import find_zeros
from isobessel import verify
from isobessel.verify import (
    Identity,
    check_bessel_ode,
    check_fd_crosscheck,
    check_form_equivalence,
    check_ladder,
    check_limits,
    check_partner_ode,
    check_recursion,
    check_scaled_ode,
    default_grid,
    run_suite,
)

from oracles import bisect_zero, series_j

DENSE = RadialGrid.arange(0.1, 40.0, 0.1)


def test_default_grid():
    g = default_grid()
    assert len(g) == 600
    assert g.points[0] == pytest.approx(0.05) and g.points[-1] == pytest.approx(30.0)


@pytest.mark.parametrize("n", [0, 10])
def test_bessel_ode_examples(n):
    assert check_bessel_ode(n, DENSE).max_abs <= 1e-8


def test_bessel_ode_at_a_zero():
    r_star = bisect_zero(lambda x: series_j(0, x), 2.0, 3.0)
    rep = check_bessel_ode(0, [r_star])
    assert rep.n_points == 1 and rep.max_abs <= 1e-8


def test_grid_with_origin_rejected():
    with pytest.raises(DomainError):
        check_bessel_ode(0, [0.0, 1.0])
    with pytest.raises(DomainError):
        check_partner_ode(1, 1.0, [0.5, 31.0])


@pytest.mark.parametrize("n", [0, 5])
def test_ladder_examples(n):
    up, down = check_ladder(n, DENSE)
    assert up.max_abs <= 1e-10 and down.max_abs <= 1e-10


def test_ladder_at_zero_of_image():
    z = bisect_zero(lambda x: series_j(2, x), 5.0, 5.5)
    up, _ = check_ladder(1, [z])
    assert up.max_abs <= 1e-10


def test_recursion_examples():
    assert check_recursion(1, RadialGrid.arange(0.01, 40.0, 0.01)).max_abs <= 1e-10
    direct = abs(4 * series_j(2, 1.0) - series_j(3, 1.0) - series_j(1, 1.0))
    assert direct <= 1e-15
    assert check_recursion(2, [1.0]).max_abs <= 1e-10
    assert check_recursion(10, RadialGrid.arange(38.0, 40.0, 0.01)).max_abs <= 1e-9
    with pytest.raises(DomainError):
        check_recursion(0, [1.0])


@pytest.mark.parametrize("n, gamma", [(1, 0.0), (1, "inf"), (3, 1.0)])
def test_partner_ode_examples(n, gamma):
    assert check_partner_ode(n, gamma, default_grid()).max_abs <= 1e-8


def test_partner_ode_detects_sign_flip():
    rep = check_partner_ode(1, 1.0, default_grid(), damping_scale=-1.0)
    assert rep.max_abs > 1.0


def test_partner_ode_gamma0_absorbs_damping():
    # with the -4n/r^2 term absorbed, the residual is the Bessel residual of J_{n-1}
    g = default_grid()
    a = check_partner_ode(2, 0.0, g)
    b = check_bessel_ode(1, g)
    assert a.max_abs <= 1e-8 and b.max_abs <= 1e-8


def test_scaled_ode_k1_is_r2_times_partner_residual():
    g = default_grid()
    r = g.points
    rep_scaled = check_scaled_ode(2, 1.0, 1.0, g)
    res_partner = np.abs(verify.partner_ode_residual(2, 1.0, r))
    assert rep_scaled.max_abs <= 1e-8 * np.max(r**2)
    assert rep_scaled.max_abs == pytest.approx(np.max(r**2 * res_partner), abs=1e-10)


def test_scaled_ode_examples():
    assert check_scaled_ode(1, 1.0, 2.0, RadialGrid.arange(0.05, 15.0, 0.05)).max_abs <= 1e-7
    for gamma in (0.0, 3.0, "inf"):
        assert check_scaled_ode(0, gamma, 3.0, RadialGrid.arange(0.05, 16.0, 0.05)).max_abs <= 1e-7


def test_scaled_ode_rejects_reach_and_bad_k():
    with pytest.raises(DomainError):
        check_scaled_ode(1, 1.0, 2.0, default_grid())
    with pytest.raises(DomainError):
        check_scaled_ode(1, 1.0, 0.0, [1.0])


@pytest.mark.parametrize("n, gamma", [(1, 1.0), (4, 100.0), (1, 0.0)])
def test_form_equivalence_examples(n, gamma):
    assert check_form_equivalence(n, gamma, default_grid()).max_abs <= 1e-12


def test_form_equivalence_gamma0_both_forms_are_j0():
    r = default_grid().points
    j0 = verify.bessel_table(0, r)[0]
    spec = verify.PartnerSpec(1, 0.0)
    assert np.max(np.abs(verify.partner_j(spec, r) - j0)) == 0.0
    # the direct form reaches J_0 through the recursion, so rounding enters
    assert np.max(np.abs(verify.partner_j_direct(spec, r) - j0)) <= 1e-13


def test_form_equivalence_rejects_infinite_gamma():
    with pytest.raises(DomainError):
        check_form_equivalence(1, "inf", default_grid())


def test_limits_examples():
    zero, conv = check_limits(1, default_grid())
    assert zero.max_abs <= 1e-15
    assert conv.infinite.max_abs <= 1e-15
    _, conv2 = check_limits(2, RadialGrid.arange(1.0, 30.0, 0.05))
    assert 8.0 <= conv2.ratio <= 12.0
    _, conv1 = check_limits(1, RadialGrid.arange(1.0, 30.0, 0.05))
    assert conv1.sup_deviation[1] <= 2e-4 * np.max(np.abs(series_j(0, 0.0)))


def test_fd_crosscheck_moderate_gamma():
    first, second = check_fd_crosscheck(2, 1.0, default_grid())
    assert first.max_abs <= 1e-7
    assert second.max_abs <= 1e-5
    assert first.n_points == 599  # r = 0.05 excluded


def test_fd_crosscheck_matrix():
    """Analytic partner derivatives vs h=1e-4 / h=1e-3 central differences over the standard matrix."""
    bad = []
    for n in range(6):
        for gamma in ["0", "0.1", "1", "10", "100", "inf"]:
            first, second = check_fd_crosscheck(n, gamma, default_grid())
            if first.max_abs > verify.FD_FIRST_TOL:
                bad.append(("first", n, gamma, first.max_abs, first.argmax_point))
            if second.max_abs > verify.FD_SECOND_TOL:
                bad.append(("second", n, gamma, second.max_abs, second.argmax_point))
    assert not bad, bad


def test_fd_second_gap_is_oracle_truncation():
    # the three-point stencil error falls as h^2 where the weights are steep
    spec_args = (1, 100.0)
    r = np.arange(0.1, 1.0, 0.05)
    f = lambda x: verify.partner_j(verify.PartnerSpec(*spec_args), x)  # noqa: E731
    d2 = verify.partner_derivatives(verify.PartnerSpec(*spec_args), r)[2]
    errs = [np.max(np.abs(d2 - (f(r + h) - 2 * f(r) + f(r - h)) / h**2)) for h in (1e-3, 1e-4)]
    assert errs[0] / errs[1] == pytest.approx(100.0, rel=0.05)


def test_suite_default_passes_and_is_ordered():
    suite = run_suite()
    assert suite.passed, [c.as_dict() for c in suite.failures]
    order = [c.identity for c in suite.cases]
    ranks = [list(Identity).index(i) for i in order]
    assert ranks == sorted(ranks)
    kinds = {c.identity for c in suite.cases}
    assert kinds == set(Identity) - {Identity.FD_CROSSCHECK}


def test_suite_is_deterministic():
    a = run_suite(orders=(0, 2), gammas=("1", "inf"), wavenumbers=(1.0,))
    b = run_suite(orders=(0, 2), gammas=("1", "inf"), wavenumbers=(1.0,))
    assert a.as_dict() == b.as_dict()


def test_suite_fails_on_injected_fault():
    suite = run_suite(orders=(1,), gammas=("1",), wavenumbers=(1.0,), damping_scale=-1.0)
    assert not suite.passed
    failed = {c.identity for c in suite.failures}
    assert failed == {Identity.PARTNER_ODE, Identity.SCALED_ODE}


def test_zeros_feed_dirichlet_checks():
    # a partner zero is a point where the partner equation still holds
    z = find_zeros(1, 10.0, gamma=1.0)
    assert check_partner_ode(1, 1.0, z).max_abs <= 1e-8
