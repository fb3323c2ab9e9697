"""Bound constants and right-hand sides of the Lieb-Thirring type inequalities for Delta_D^sigma - b,
Delta_D^sigma - 4^sigma + b and W_sigma, and the LHS <= RHS verification against computed spectra.

    thm2:  sum_j |e_j|^gamma <= eta(sigma, gamma) * sum_n b_n^(gamma + 1/2sigma)          (Delta_D^sigma - b, b >= 0)
    cor3:  sum_j e_j^gamma   <= eta(sigma, gamma) * sum_n b_n^(gamma + 1/2sigma)          (Delta_D^sigma - 4^sigma + b)
    thm4:  sum_j |E_j^- + C|^gamma + sum_j |E_j^+ - 4^sigma + C|^gamma
               <= nu(sigma, gamma) * (sum_n |b_n|^p + 4 sum_n sum_k |a_n^k - omega_k|^p)   (W_sigma)
"""

from collections import namedtuple
import hashlib
import logging
import math

import numpy as np
import scipy.integrate
import scipy.special
import simplejson as json

from polyjacobi_analysis.utils.operator_core import check_sigma, sandwich_potentials
from polyjacobi_analysis.utils.spectral_engine import (
    DEFAULT_MAX_DOUBLINGS, DEFAULT_TOLERANCE, discrete_spectrum, riesz_mean)

"""A report passes when lhs / rhs <= 1 + RATIO_SLACK."""
RATIO_SLACK = 1e-9

THEOREMS = ("thm2", "cor3", "thm4")

THEOREM_OPERATORS = {
    "thm2": "h_sigma",
    "cor3": "h_sigma_shifted",
    "thm4": "w_sigma",
}

BOUND_STATUSES = ("pass", "fail", "indeterminate", "domain_error")


class DomainError(ValueError):
    pass


class BoundReport(namedtuple("BoundReport", [
        "theorem", "sigma", "gamma", "lhs", "rhs", "ratio", "constant", "instance_digest", "converged", "status"])):
    """Result of one LHS <= RHS comparison.

    status is "pass" or "fail" for converged spectra, "indeterminate" when the outside eigenvalues did not
    converge, and "domain_error" when the instance violates the hypothesis of the theorem.
    """

    __slots__ = ()

    @property
    def passed(self):
        return self.status == "pass"

    def to_dict(self):
        return self._asdict()


def check_gamma(gamma):
    if not np.isfinite(gamma) or gamma < 1:
        raise DomainError(f"gamma must be >= 1, got {gamma}")
    return float(gamma)


def potential_exponent(sigma, gamma):
    """gamma + 1/(2 sigma)"""
    return gamma + 1.0 / (2 * sigma)


def _log_gamma_ratio(sigma, gamma):
    """log of Gamma((4 sigma + 1)/2 sigma) * Gamma(gamma + 1) / Gamma(gamma + (2 sigma + 1)/2 sigma)"""
    return (scipy.special.gammaln((4 * sigma + 1) / (2 * sigma))
            + scipy.special.gammaln(gamma + 1)
            - scipy.special.gammaln(gamma + (2 * sigma + 1) / (2 * sigma)))


def eta(sigma, gamma):
    """Constant of the bound on the negative eigenvalues of Delta_D^sigma - b.

        eta = 2 sigma / (2 sigma + 1)^((2 sigma + 1)/2 sigma) * Gamma((4 sigma + 1)/2 sigma) Gamma(gamma + 1)
                / Gamma(gamma + (2 sigma + 1)/2 sigma)

    Args:
        sigma (int): order of the Laplacian power
        gamma (float): Riesz mean exponent, >= 1
    Return:
        float: the constant
    """
    sigma = check_sigma(sigma)
    gamma = check_gamma(gamma)
    log_value = (math.log(2 * sigma)
                 - (2 * sigma + 1) / (2 * sigma) * math.log(2 * sigma + 1)
                 + _log_gamma_ratio(sigma, gamma))
    return float(np.exp(log_value))


def nu(sigma, gamma):
    """Constant of the bound for W_sigma: 2 sigma (2 sigma + 1)^(gamma - 2) times the same Gamma ratio as eta."""
    sigma = check_sigma(sigma)
    gamma = check_gamma(gamma)
    log_value = math.log(2 * sigma) + (gamma - 2) * math.log(2 * sigma + 1) + _log_gamma_ratio(sigma, gamma)
    return float(np.exp(log_value))


def gamma1_constant(sigma):
    """2 sigma / (2 sigma + 1)^((2 sigma + 1)/2 sigma), the constant of the gamma = 1 bound."""
    sigma = check_sigma(sigma)
    return 2 * sigma / (2 * sigma + 1) ** ((2 * sigma + 1) / (2 * sigma))


def lifted_constant_by_quadrature(sigma, gamma):
    """Obtain eta(sigma, gamma) by lifting the gamma = 1 bound, with both Beta integrals done by quadrature:

        |e|^gamma = 1/B(gamma - 1, 2) * int_0^inf tau^(gamma - 2) (|e| - tau)_+ dtau

    applied to each eigenvalue and the gamma = 1 bound for the potential (b - tau)_+ give the factor
        int_0^1 tau^(gamma - 2) (1 - tau)^p1 dtau / int_0^1 tau^(gamma - 2) (1 - tau) dtau,  p1 = (2 sigma + 1)/2 sigma.
    """
    sigma = check_sigma(sigma)
    gamma = check_gamma(gamma)
    if gamma == 1:
        return gamma1_constant(sigma)

    p1 = (2 * sigma + 1) / (2 * sigma)
    numerator, _ = scipy.integrate.quad(lambda tau: 1.0, 0, 1, weight="alg", wvar=(gamma - 2, p1))
    denominator, _ = scipy.integrate.quad(lambda tau: 1.0, 0, 1, weight="alg", wvar=(gamma - 2, 1))
    return gamma1_constant(sigma) * numerator / denominator


def _check_nonnegative(b, theorem):
    if not b.is_zero and np.min(b.values) < 0:
        n = b.offset + int(np.argmin(b.values))
        raise DomainError(f"{theorem} requires b_n >= 0, but b_{n} = {b[n]}")


def _power_sum(values, exponent):
    values = np.abs(np.asarray(values, dtype=np.float64))
    return float(np.sum(values ** exponent)) if len(values) else 0.0


def optimal_density_level(b, sigma):
    """Minimise chi^(2 sigma + 1) - s chi over chi >= 0 where s = (sum_n b_n^p1)^(1/p1), p1 = (2 sigma + 1)/2 sigma.

    Args:
        b (Sequence): nonnegative potential
        sigma (int): order
    Return:
        tuple: (chi*, minimum), where minimum = -gamma1_constant(sigma) * sum_n b_n^p1
    """
    sigma = check_sigma(sigma)
    _check_nonnegative(b, "optimal_density_level")
    p1 = (2 * sigma + 1) / (2 * sigma)
    s = _power_sum(b.values, p1) ** (1 / p1)
    chi = (s / (2 * sigma + 1)) ** (1 / (2 * sigma))
    return chi, chi ** (2 * sigma + 1) - s * chi


def rhs_thm2(sigma, gamma, b):
    """eta(sigma, gamma) * sum_n b_n^(gamma + 1/2sigma). Raises DomainError if some b_n < 0."""
    _check_nonnegative(b, "thm2")
    return eta(sigma, gamma) * _power_sum(b.values, potential_exponent(sigma, gamma))


def rhs_cor3(sigma, gamma, b):
    """The bound on the positive eigenvalues of Delta_D^sigma - 4^sigma + b has the same form as rhs_thm2."""
    _check_nonnegative(b, "cor3")
    return eta(sigma, gamma) * _power_sum(b.values, potential_exponent(sigma, gamma))


def rhs_thm4(sigma, gamma, coeffs):
    """nu(sigma, gamma) * (sum_n |b_n|^p + 4 sum_n sum_k |a_n^k - omega_k|^p), p = gamma + 1/2sigma"""
    p = potential_exponent(sigma, gamma)
    total = _power_sum(coeffs.b.values, p)
    total += 4 * sum(_power_sum(deviation.values, p) for deviation in coeffs.deviations)
    return nu(sigma, gamma) * total


def rhs_thm4_split(sigma, gamma, coeffs):
    """Bounds for the two edges of W_sigma before the Jensen step.

    The eigenvalues below -C are bounded through W_sigma(omega, b_minus) and those above 4^sigma - C through
    W_sigma(omega, b_plus), where (b_minus, b_plus) are the sandwich potentials.

    Return:
        tuple: (eta * sum_n (b_minus)_-^p, eta * sum_n (b_plus)_+^p)
    """
    p = potential_exponent(sigma, gamma)
    constant = eta(sigma, gamma)
    b_minus, b_plus = sandwich_potentials(coeffs)
    below = constant * _power_sum(np.clip(-b_minus.values, 0, None), p)
    above = constant * _power_sum(np.clip(b_plus.values, 0, None), p)
    return below, above


def instance_digest(coeffs):
    """First 16 hex digits of the sha256 of the canonical JSON form of the coefficients."""
    canonical = json.dumps(coeffs.to_dict(), sort_keys=True)
    return hashlib.sha256(canonical.encode("UTF-8")).hexdigest()[:16]


def check_hypotheses(theorem, gamma, coeffs):
    """Raise DomainError if the instance violates the hypothesis of the theorem."""
    if theorem not in THEOREMS:
        raise ValueError(f"Unexpected theorem: {theorem}. Expected one of {', '.join(THEOREMS)}")

    check_gamma(gamma)
    if theorem in ("thm2", "cor3"):
        if coeffs.has_deviations:
            raise DomainError(f"{theorem} applies to diagonal perturbations only, but band deviations were given")
        _check_nonnegative(coeffs.b, theorem)


def compute_lhs(theorem, gamma, spectral_report):
    """Riesz mean of the outside eigenvalues at the essential spectrum edge(s) the theorem bounds."""
    lo_edge, hi_edge = spectral_report.essential_interval
    if theorem == "thm2":
        return riesz_mean(spectral_report.eigenvalues_below, lo_edge, gamma, "below")
    elif theorem == "cor3":
        return riesz_mean(spectral_report.eigenvalues_above, hi_edge, gamma, "above")
    else:
        return (riesz_mean(spectral_report.eigenvalues_below, lo_edge, gamma, "below")
                + riesz_mean(spectral_report.eigenvalues_above, hi_edge, gamma, "above"))


def compute_rhs(theorem, gamma, coeffs):
    """Return (rhs, constant) of the theorem for this instance."""
    sigma = coeffs.sigma
    if theorem == "thm2":
        return rhs_thm2(sigma, gamma, coeffs.b), eta(sigma, gamma)
    elif theorem == "cor3":
        return rhs_cor3(sigma, gamma, coeffs.b), eta(sigma, gamma)
    else:
        return rhs_thm4(sigma, gamma, coeffs), nu(sigma, gamma)


def bound_ratio(lhs, rhs):
    if rhs > 0:
        return lhs / rhs
    return 0.0 if lhs == 0 else math.inf


def compute_spectrum_for_theorem(theorem, coeffs, tolerance=DEFAULT_TOLERANCE, edge_margin=None, padding=None,
                                 max_doublings=DEFAULT_MAX_DOUBLINGS):
    return discrete_spectrum(
        coeffs, THEOREM_OPERATORS[theorem], tolerance=tolerance, edge_margin=edge_margin, padding=padding,
        max_doublings=max_doublings)


def verify_bound(theorem, sigma, gamma, coeffs, spectral_report=None, **spectrum_kwargs):
    """Compute LHS and RHS of the theorem for one instance and compare them.

    Args:
        theorem (str): "thm2", "cor3" or "thm4"
        sigma (int): order, must match coeffs.sigma
        gamma (float): Riesz mean exponent
        coeffs (PolyJacobiCoefficients): the instance
        spectral_report (SpectralReport): precomputed spectrum of the operator the theorem is about. Computed if
            not given.
        spectrum_kwargs: passed to discrete_spectrum (tolerance, edge_margin, padding, max_doublings)
    Return:
        BoundReport
    """
    if check_sigma(sigma) != coeffs.sigma:
        raise ValueError(f"sigma = {sigma} does not match the coefficients (sigma = {coeffs.sigma})")

    check_hypotheses(theorem, gamma, coeffs)
    gamma = float(gamma)
    if spectral_report is None:
        spectral_report = compute_spectrum_for_theorem(theorem, coeffs, **spectrum_kwargs)
    elif spectral_report.operator != THEOREM_OPERATORS[theorem]:
        raise ValueError(f"{theorem} needs the spectrum of {THEOREM_OPERATORS[theorem]}, "
                         f"got {spectral_report.operator}")

    lhs = compute_lhs(theorem, gamma, spectral_report)
    rhs, constant = compute_rhs(theorem, gamma, coeffs)
    ratio = bound_ratio(lhs, rhs)

    if not spectral_report.converged:
        status = "indeterminate"
    elif ratio <= 1 + RATIO_SLACK:
        status = "pass"
    else:
        status = "fail"
        logging.warning(f"{theorem} failed for sigma = {sigma}, gamma = {gamma}: lhs = {lhs!r}, rhs = {rhs!r}")

    return BoundReport(
        theorem=theorem,
        sigma=sigma,
        gamma=gamma,
        lhs=lhs,
        rhs=rhs,
        ratio=ratio,
        constant=constant,
        instance_digest=instance_digest(coeffs),
        converged=spectral_report.converged,
        status=status)


def domain_error_report(theorem, sigma, gamma, coeffs):
    return BoundReport(
        theorem=theorem,
        sigma=sigma,
        gamma=float(gamma),
        lhs=math.nan,
        rhs=math.nan,
        ratio=math.nan,
        constant=math.nan,
        instance_digest=instance_digest(coeffs),
        converged=False,
        status="domain_error")


def verify_bounds(theorems, gammas, coeffs, **spectrum_kwargs):
    """Verify every (theorem, gamma) pair for one instance. The spectrum of each operator is computed once and
    reused across gammas. Hypothesis violations produce "domain_error" reports instead of raising.

    Return:
        list: BoundReports ordered by theorem, then gamma, in the order given
    """
    reports = []
    for theorem in theorems:
        spectral_report = None
        for gamma in gammas:
            try:
                check_hypotheses(theorem, gamma, coeffs)
            except DomainError as e:
                logging.warning(f"{theorem}, gamma = {gamma}: {e}")
                reports.append(domain_error_report(theorem, coeffs.sigma, gamma, coeffs))
                continue

            if spectral_report is None:
                spectral_report = compute_spectrum_for_theorem(theorem, coeffs, **spectrum_kwargs)
            reports.append(verify_bound(theorem, coeffs.sigma, gamma, coeffs, spectral_report=spectral_report))

    return reports

