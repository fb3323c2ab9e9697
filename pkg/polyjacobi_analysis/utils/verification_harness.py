"""Seeded randomized checks of the auxiliary inequalities and identities behind the eigenvalue bounds, each
against an independent brute-force evaluation, plus end-to-end bound verifications on random instances.

Every suite item draws its instance from numpy.random.default_rng([seed, check id, instance index]), so any
single item can be reproduced without running the rest of the suite.
"""

from collections import namedtuple
import hashlib
import logging
import math

import numpy as np
import scipy.integrate
import scipy.special
import simplejson as json
import tqdm

from polyjacobi_analysis.utils.bounds_engine import (
    RATIO_SLACK, eta, gamma1_constant, instance_digest, nu, optimal_density_level, verify_bound)
from polyjacobi_analysis.utils.misc_utils import format_float
from polyjacobi_analysis.utils.operator_core import (
    PolyJacobiCoefficients, Sequence, assemble_w_sigma, binomial, check_sigma, difference_power, l2_norm,
    sandwich_potentials, sup_norm)
from polyjacobi_analysis.utils.spectral_engine import eigenpairs_symmetric, eigenvalues_symmetric

INEQUALITY_SLACK = 1e-12
EIGEN_SLACK = 1e-10
GRAM_TOLERANCE = 1e-12
REJECTION_THRESHOLD = 1e-8
LIFT_TOLERANCE = 1e-6
MAX_ORTHONORMALIZATION_ATTEMPTS = 10

KOLMOGOROV_ORDERS = ((1, 2), (1, 3), (2, 3), (2, 5))
LIFT_GAMMAS = (1.5, 2, 3)
CONSTANT_GAMMAS = (1, 1.5, 2, 3)
THM2_GAMMAS = (1, 1.5, 2)
THM4_GAMMAS = (1, 2)

"""Stable ids mixed into the per-item random seeds. Never renumber."""
CHECK_IDS = {
    "kolmogorov": 1,
    "agmon": 2,
    "dgsi": 3,
    "sandwich": 4,
    "sandwich_eigenvalues": 5,
    "jensen_split": 6,
    "aizenman_lieb_lift": 7,
    "truncated_potential": 8,
    "density_functional": 9,
    "constants": 10,
    "thm2": 11,
    "cor3": 12,
    "thm4": 13,
}


class HarnessError(ValueError):
    pass


RandomInstanceSpec = namedtuple(
    "RandomInstanceSpec", ["seed", "support_radius", "amplitude", "sigma_range", "count"],
    defaults=(0, 15, 1.0, (1, 3), 0))

"""One suite item. status is "pass" iff margin >= -tolerance, except for the bound checks which carry the
BoundReport status ("indeterminate" when the spectrum did not converge).
"""
SuiteEntry = namedtuple("SuiteEntry", ["check", "index", "sigma", "margin", "tolerance", "status", "instance_digest"])

DensityFunctionalReport = namedtuple("DensityFunctionalReport", [
    "num_negative", "eigenvalue_sum", "kinetic_energy", "potential_energy", "identity_residual", "dgsi_margin",
    "holder_margin", "bound_margin"])


def _check_nonzero(phi):
    if phi.is_zero:
        raise HarnessError("The sequence is identically zero")


def kolmogorov_sides(phi, k, n):
    """(||D^k phi||, ||phi||^(1 - k/n) ||D^n phi||^(k/n))"""
    if not 1 <= k < n:
        raise HarnessError(f"Expected n > k >= 1, got k = {k}, n = {n}")
    _check_nonzero(phi)

    lhs = l2_norm(difference_power(phi, k))
    rhs = l2_norm(phi) ** (1 - k / n) * l2_norm(difference_power(phi, n)) ** (k / n)
    return lhs, rhs


def check_kolmogorov(phi, k, n):
    """Return RHS - LHS of ||D^k phi|| <= ||phi||^(1 - k/n) ||D^n phi||^(k/n)."""
    lhs, rhs = kolmogorov_sides(phi, k, n)
    return rhs - lhs


def agmon_sides(phi, sigma):
    """(||phi||_inf, ||phi||^(1 - 1/2sigma) ||D^sigma phi||^(1/2sigma))"""
    sigma = check_sigma(sigma)
    _check_nonzero(phi)

    exponent = 1 / (2 * sigma)
    return sup_norm(phi), l2_norm(phi) ** (1 - exponent) * l2_norm(difference_power(phi, sigma)) ** exponent


def check_agmon(phi, sigma):
    """Return RHS - LHS of ||phi||_inf <= ||phi||^(1 - 1/2sigma) ||D^sigma phi||^(1/2sigma)."""
    lhs, rhs = agmon_sides(phi, sigma)
    return rhs - lhs


class OrthonormalSystem:
    """Finitely supported sequences psi_1..psi_N with |<psi_j, psi_k> - delta_jk| <= gram_tolerance."""

    def __init__(self, sequences, gram_tolerance=GRAM_TOLERANCE):
        if not sequences:
            raise HarnessError("An orthonormal system needs at least one sequence")

        self.sequences = list(sequences)
        self.gram_tolerance = gram_tolerance

        deviation = np.max(np.abs(self.gram_matrix() - np.eye(self.size)))
        if deviation > gram_tolerance:
            raise HarnessError(f"Gram matrix deviates from the identity by {deviation} > {gram_tolerance}")

    @property
    def size(self):
        return len(self.sequences)

    def _common_window(self):
        lo = min(s.offset for s in self.sequences if not s.is_zero)
        hi = max(s.end for s in self.sequences if not s.is_zero)
        return lo, hi

    def gram_matrix(self):
        if all(s.is_zero for s in self.sequences):
            return np.zeros((self.size, self.size))
        lo, hi = self._common_window()
        vectors = np.array([s.window(lo, hi) for s in self.sequences])
        return vectors @ vectors.T

    def density(self):
        """rho(n) = sum_j |psi_j(n)|^2"""
        lo, hi = self._common_window()
        return Sequence(lo, np.sum(np.array([s.window(lo, hi) for s in self.sequences]) ** 2, axis=0))


def orthonormalize(sequences, gram_tolerance=GRAM_TOLERANCE):
    """Modified Gram-Schmidt with a second orthogonalization pass. Raises HarnessError when a sequence is
    numerically dependent on the previous ones (residual norm below REJECTION_THRESHOLD relative to its norm).
    """
    if not sequences or all(s.is_zero for s in sequences):
        raise HarnessError("Nothing to orthonormalize")

    lo = min(s.offset for s in sequences if not s.is_zero)
    hi = max(s.end for s in sequences if not s.is_zero)
    basis = []
    for i, s in enumerate(sequences):
        v = s.window(lo, hi)
        norm_before = np.linalg.norm(v)
        for _ in range(2):
            for q in basis:
                v -= np.dot(q, v) * q

        residual = np.linalg.norm(v)
        if norm_before == 0 or residual < REJECTION_THRESHOLD * norm_before:
            raise HarnessError(f"Sequence {i} is numerically dependent on the previous ones (residual {residual})")
        basis.append(v / residual)

    return OrthonormalSystem([Sequence(lo, q) for q in basis], gram_tolerance=gram_tolerance)


def instance_rng(spec, check, index):
    return np.random.default_rng([spec.seed, CHECK_IDS[check], index])


def make_orthonormal_system(spec, N, index=0, rng=None):
    """Orthonormalize N random sequences supported on [-spec.support_radius, spec.support_radius].

    Args:
        spec (RandomInstanceSpec): seed, radius and amplitude of the random sequences
        N (int): number of sequences
        index (int): instance index, mixed into the random seed
        rng (numpy.random.Generator): draw from this generator instead of the seeded one
    Return:
        OrthonormalSystem
    """
    radius = spec.support_radius
    if N < 1 or N > 2 * radius + 1:
        raise HarnessError(f"Cannot build {N} orthonormal sequences on a window of {2 * radius + 1} sites")

    if rng is None:
        rng = instance_rng(spec, "dgsi", index)
    for attempt in range(MAX_ORTHONORMALIZATION_ATTEMPTS):
        sequences = [random_sequence(rng, radius, spec.amplitude) for _ in range(N)]
        try:
            return orthonormalize(sequences)
        except HarnessError as e:
            logging.warning(f"Orthonormalization attempt {attempt + 1} rejected: {e}")

    raise HarnessError(f"Unable to orthonormalize {N} random sequences after {MAX_ORTHONORMALIZATION_ATTEMPTS} attempts")


def dgsi_sides(system, sigma):
    """(sum_n rho(n)^(2 sigma + 1), sum_j ||D^sigma psi_j||^2)"""
    sigma = check_sigma(sigma)
    if not isinstance(system, OrthonormalSystem):
        raise HarnessError(f"Expected an OrthonormalSystem, got {type(system).__name__}")

    lhs = float(np.sum(system.density().values ** (2 * sigma + 1)))
    rhs = sum(l2_norm(difference_power(psi, sigma)) ** 2 for psi in system.sequences)
    return lhs, rhs


def check_dgsi(system, sigma):
    """Return RHS - LHS of sum_n rho(n)^(2 sigma + 1) <= sum_j sum_n |D^sigma psi_j(n)|^2."""
    lhs, rhs = dgsi_sides(system, sigma)
    return rhs - lhs


def _sandwich_sections(coeffs, window):
    b_minus, b_plus = sandwich_potentials(coeffs)
    w = assemble_w_sigma(coeffs, window)
    w_minus = assemble_w_sigma(PolyJacobiCoefficients(coeffs.sigma, b=b_minus), window)
    w_plus = assemble_w_sigma(PolyJacobiCoefficients(coeffs.sigma, b=b_plus), window)
    return w_minus, w, w_plus


def check_sandwich(coeffs, window):
    """Smallest eigenvalues of W(omega, b_plus) - W and of W - W(omega, b_minus) on the window.

    Return:
        tuple: (min_eig_plus, min_eig_minus), both >= 0 up to rounding
    """
    w_minus, w, w_plus = _sandwich_sections(coeffs, window)
    min_eig_plus = float(eigenvalues_symmetric(w_plus - w)[0])
    min_eig_minus = float(eigenvalues_symmetric(w - w_minus)[0])
    return min_eig_plus, min_eig_minus


def check_sandwich_eigenvalues(coeffs, window):
    """min_j of lambda_j(W) - lambda_j(W(omega, b_minus)) and lambda_j(W(omega, b_plus)) - lambda_j(W), with
    eigenvalues in ascending order.
    """
    w_minus, w, w_plus = _sandwich_sections(coeffs, window)
    e_minus, e, e_plus = (eigenvalues_symmetric(m) for m in (w_minus, w, w_plus))
    return float(min(np.min(e - e_minus), np.min(e_plus - e)))


def check_jensen_split(alphas, q):
    """Return RHS - LHS of (sum_i alpha_i)^q <= m^(q - 1) sum_i alpha_i^q for m nonnegative alphas."""
    alphas = np.asarray(alphas, dtype=np.float64)
    if len(alphas) == 0 or np.any(alphas < 0):
        raise HarnessError(f"Expected a nonempty list of nonnegative numbers, got {alphas.tolist()}")
    if q < 1:
        raise HarnessError(f"Expected q >= 1, got {q}")

    return float(len(alphas) ** (q - 1) * np.sum(alphas ** q) - np.sum(alphas) ** q)


def check_aizenman_lieb_lift(e, gamma):
    """Relative error of 1/B(gamma - 1, 2) * int_0^e tau^(gamma - 2) (e - tau) dtau = e^gamma, with the integral
    done by adaptive quadrature.
    """
    if e <= 0:
        raise HarnessError(f"Expected e > 0, got {e}")
    if gamma <= 1:
        raise HarnessError(f"The lift needs gamma > 1, got {gamma}")

    integral, _ = scipy.integrate.quad(lambda tau: tau ** (gamma - 2) * (e - tau), 0, e, limit=200)
    lifted = integral / scipy.special.beta(gamma - 1, 2)
    return abs(lifted - e ** gamma) / e ** gamma


def _padded_window(b, sigma):
    lo, hi = (b.offset, b.end) if not b.is_zero else (0, 0)
    return lo - 2 * sigma - 8, hi + 2 * sigma + 8


def _laplacian_minus_potential(b, sigma, window):
    """Finite section of Delta_D^sigma - b"""
    return assemble_w_sigma(
        PolyJacobiCoefficients(sigma, b=-b), window, diagonal_shift=binomial(2 * sigma, sigma))


def check_truncated_potential(b, sigma, tau, window=None):
    """Finite-section check of |e_j(tau)| >= (|e_j| - tau)_+ where e_j are the eigenvalues of Delta_D^sigma - b and
    e_j(tau) those of Delta_D^sigma - (b - tau)_+, both in ascending order and with |.| the negative part.

    Return:
        float: min_j of the difference, >= 0 up to rounding
    """
    sigma = check_sigma(sigma)
    if tau < 0:
        raise HarnessError(f"Expected tau >= 0, got {tau}")

    window = window or _padded_window(b, sigma)
    truncated = Sequence(b.offset, np.clip(b.values - tau, 0, None))
    e = eigenvalues_symmetric(_laplacian_minus_potential(b, sigma, window))
    e_tau = eigenvalues_symmetric(_laplacian_minus_potential(truncated, sigma, window))
    return float(np.min(np.maximum(-e_tau, 0) - np.maximum(np.maximum(-e, 0) - tau, 0)))


def check_density_functional(b, sigma, window=None):
    """Follow the gamma = 1 bound step by step on the negative eigenvectors psi_j of a finite section of
    Delta_D^sigma - b, b >= 0, with rho = sum_j |psi_j|^2:

        sum_j e_j  =  sum_j ||D^sigma psi_j||^2 - sum_n b_n rho(n)
                   >= sum_n rho^(2 sigma + 1) - sum_n b_n rho(n)
                   >= chi^(2 sigma + 1) - s chi
                   >= -gamma1_constant(sigma) * sum_n b_n^((2 sigma + 1)/2 sigma)

    where chi^(2 sigma + 1) = sum_n rho^(2 sigma + 1) and s = ||b||_((2 sigma + 1)/2 sigma).

    Return:
        DensityFunctionalReport: the identity residual and the margin of each inequality
    """
    sigma = check_sigma(sigma)
    window = window or _padded_window(b, sigma)
    chi_star, minimum = optimal_density_level(b, sigma)

    eigenvalues, eigenvectors = eigenpairs_symmetric(_laplacian_minus_potential(b, sigma, window))
    negative = eigenvalues < 0
    eigenvalue_sum = float(np.sum(eigenvalues[negative]))

    lo, hi = window
    psis = [Sequence(lo, eigenvectors[:, j]) for j in np.flatnonzero(negative)]
    kinetic_energy = sum(l2_norm(difference_power(psi, sigma)) ** 2 for psi in psis)
    rho = np.sum(eigenvectors[:, negative] ** 2, axis=1)
    potential_energy = float(np.dot(b.window(lo, hi), rho))

    rho_power_sum = float(np.sum(rho ** (2 * sigma + 1)))
    chi = rho_power_sum ** (1 / (2 * sigma + 1))
    p1 = (2 * sigma + 1) / (2 * sigma)
    s = float(np.sum(np.abs(b.values) ** p1)) ** (1 / p1) if not b.is_zero else 0.0
    holder_lower_bound = chi ** (2 * sigma + 1) - s * chi

    return DensityFunctionalReport(
        num_negative=int(np.sum(negative)),
        eigenvalue_sum=eigenvalue_sum,
        kinetic_energy=kinetic_energy,
        potential_energy=potential_energy,
        identity_residual=eigenvalue_sum - (kinetic_energy - potential_energy),
        dgsi_margin=kinetic_energy - rho_power_sum,
        holder_margin=eigenvalue_sum - holder_lower_bound,
        bound_margin=holder_lower_bound - minimum)


def random_sequence(rng, radius, amplitude=1.0):
    """Entries uniform in [-amplitude, amplitude] on [-radius, radius]"""
    return Sequence(-radius, rng.uniform(-amplitude, amplitude, size=2 * radius + 1))


def random_wave_packet(rng, radius, amplitude=1.0):
    """amplitude * cos(theta n + phase) * exp(-(n/w)^2) on [-radius, radius]: a sequence whose Fourier transform is
    concentrated near +-theta, which nearly saturates the Holder step of the Kolmogorov inequality.
    """
    n = np.arange(-radius, radius + 1)
    theta = rng.uniform(0.1, math.pi - 0.1)
    phase = rng.uniform(0, 2 * math.pi)
    width = rng.uniform(radius / 4, radius / 2) + 1
    return Sequence(-radius, amplitude * np.cos(theta * n + phase) * np.exp(-(n / width) ** 2))


def random_potential(rng, radius, amplitude=1.0):
    """Nonnegative entries uniform in [0, amplitude] on a random window inside [-radius, radius]"""
    r = int(rng.integers(0, radius + 1))
    return Sequence(-r, rng.uniform(0, amplitude, size=2 * r + 1))


def random_coefficients(rng, sigma, radius, amplitude=1.0):
    """b and every band deviation uniform in [-amplitude, amplitude] on random windows inside [-radius, radius]"""
    r = int(rng.integers(0, radius + 1))
    b = Sequence(-r, rng.uniform(-amplitude, amplitude, size=2 * r + 1))
    deviations = []
    for _ in range(sigma):
        r = int(rng.integers(0, radius + 1))
        deviations.append(Sequence(-r, rng.uniform(-amplitude, amplitude, size=2 * r + 1)))
    return PolyJacobiCoefficients(sigma, b=b, deviations=deviations)


def sequence_digest(*sequences):
    data = [[s.offset, s.values.tolist()] for s in sequences]
    return hashlib.sha256(json.dumps(data).encode("UTF-8")).hexdigest()[:16]


def _sigmas(spec):
    lo, hi = spec.sigma_range
    return list(range(check_sigma(lo), check_sigma(hi) + 1))


def _entry(check, index, sigma, margin, tolerance, digest):
    status = "pass" if margin >= -tolerance else "fail"
    return SuiteEntry(check, index, sigma, float(margin), float(tolerance), status, digest)


def kolmogorov_case(index):
    """Generator and (k, n) orders of Kolmogorov item index. Consecutive runs of 2 * len(KOLMOGOROV_ORDERS)
    items cover every pair.
    """
    generate = random_wave_packet if index % 2 else random_sequence
    return generate, KOLMOGOROV_ORDERS[(index // 2) % len(KOLMOGOROV_ORDERS)]


def agmon_generator(spec, index):
    """Item index runs at the order _sigmas(spec)[index % L]; the generator flips every L items, so every
    (order, generator) pair occurs within 2 L items.
    """
    return random_wave_packet if (index // len(_sigmas(spec))) % 2 else random_sequence


def _suite_kolmogorov(spec, index, sigma):
    rng = instance_rng(spec, "kolmogorov", index)
    radius = int(rng.integers(0, spec.support_radius + 1))
    generate, (k, n) = kolmogorov_case(index)
    phi = generate(rng, radius, spec.amplitude)
    lhs, rhs = kolmogorov_sides(phi, k, n)
    return _entry("kolmogorov", index, sigma, rhs - lhs, INEQUALITY_SLACK * rhs, sequence_digest(phi))


def _suite_agmon(spec, index, sigma):
    rng = instance_rng(spec, "agmon", index)
    radius = int(rng.integers(0, spec.support_radius + 1))
    generate = agmon_generator(spec, index)
    phi = generate(rng, radius, spec.amplitude)
    lhs, rhs = agmon_sides(phi, sigma)
    return _entry("agmon", index, sigma, rhs - lhs, INEQUALITY_SLACK * rhs, sequence_digest(phi))


def _suite_dgsi(spec, index, sigma):
    rng = instance_rng(spec, "dgsi", index)
    N = min(int(rng.integers(1, 7)), 2 * spec.support_radius + 1)
    system = make_orthonormal_system(spec, N, rng=rng)
    lhs, rhs = dgsi_sides(system, sigma)
    return _entry("dgsi", index, sigma, rhs - lhs, EIGEN_SLACK * rhs, sequence_digest(*system.sequences))


def _suite_sandwich(spec, index, sigma):
    rng = instance_rng(spec, "sandwich", index)
    coeffs = random_coefficients(rng, sigma, min(spec.support_radius, 10), spec.amplitude)
    lo, hi = coeffs.matrix_support() or (0, 0)
    window = (lo - sigma, max(hi, lo + 2 * sigma) + sigma)
    margin = min(check_sandwich(coeffs, window))
    scale = max(1.0, assemble_w_sigma(coeffs, window).norm_bound())
    return _entry("sandwich", index, sigma, margin, EIGEN_SLACK * scale, instance_digest(coeffs))


def _suite_sandwich_eigenvalues(spec, index, sigma):
    rng = instance_rng(spec, "sandwich_eigenvalues", index)
    coeffs = random_coefficients(rng, sigma, min(spec.support_radius, 10), spec.amplitude)
    lo, hi = coeffs.matrix_support() or (0, 0)
    window = (lo - 2 * sigma, max(hi, lo + 2 * sigma) + 2 * sigma)
    margin = check_sandwich_eigenvalues(coeffs, window)
    scale = max(1.0, assemble_w_sigma(coeffs, window).norm_bound())
    return _entry("sandwich_eigenvalues", index, sigma, margin, EIGEN_SLACK * scale, instance_digest(coeffs))


def _suite_jensen_split(spec, index, sigma):
    rng = instance_rng(spec, "jensen_split", index)
    alphas = rng.uniform(0, spec.amplitude, size=2 * sigma + 1)
    q = float(rng.uniform(1, 3))
    rhs = (2 * sigma + 1) ** (q - 1) * float(np.sum(alphas ** q))
    margin = check_jensen_split(alphas, q)
    return _entry("jensen_split", index, sigma, margin, INEQUALITY_SLACK * rhs, sequence_digest(Sequence(0, alphas)))


def _suite_aizenman_lieb_lift(spec, index, sigma):
    rng = instance_rng(spec, "aizenman_lieb_lift", index)
    e = float(rng.uniform(0.1, 5.0)) * spec.amplitude
    gamma = LIFT_GAMMAS[index % len(LIFT_GAMMAS)]
    margin = -check_aizenman_lieb_lift(e, gamma)
    return _entry("aizenman_lieb_lift", index, sigma, margin, LIFT_TOLERANCE, sequence_digest(Sequence(0, [e])))


def _suite_constants(spec, index, sigma):
    gamma = CONSTANT_GAMMAS[index % len(CONSTANT_GAMMAS)]
    endpoint_error = abs(eta(sigma, 1) / gamma1_constant(sigma) - 1)
    ratio = nu(sigma, gamma) / eta(sigma, gamma)
    ratio_error = abs(ratio / (2 * sigma + 1) ** (gamma - (2 * sigma - 1) / (2 * sigma)) - 1)
    digest = sequence_digest(Sequence(0, [sigma, gamma]))
    return _entry("constants", index, sigma, -max(endpoint_error, ratio_error), INEQUALITY_SLACK, digest)


def _suite_truncated_potential(spec, index, sigma):
    rng = instance_rng(spec, "truncated_potential", index)
    b = random_potential(rng, min(spec.support_radius, 10), 5 * spec.amplitude)
    tau = float(rng.uniform(0, 5 * spec.amplitude))
    margin = check_truncated_potential(b, sigma, tau)
    scale = 4 ** sigma + float(np.max(b.values, initial=0))
    return _entry("truncated_potential", index, sigma, margin, EIGEN_SLACK * scale, sequence_digest(b))


def _suite_density_functional(spec, index, sigma):
    rng = instance_rng(spec, "density_functional", index)
    b = random_potential(rng, min(spec.support_radius, 6), 5 * spec.amplitude)
    report = check_density_functional(b, sigma)
    margin = min(-abs(report.identity_residual), report.dgsi_margin, report.holder_margin, report.bound_margin)
    scale = max(1.0, report.kinetic_energy + report.potential_energy)
    return _entry("density_functional", index, sigma, margin, EIGEN_SLACK * scale, sequence_digest(b))


def _bound_entry(check, index, report):
    return SuiteEntry(
        check, index, report.sigma, float(report.rhs - report.lhs), float(RATIO_SLACK * report.rhs), report.status,
        report.instance_digest)


def _suite_thm2(spec, index, sigma):
    rng = instance_rng(spec, "thm2", index)
    b = random_potential(rng, spec.support_radius, 5 * spec.amplitude)
    gamma = THM2_GAMMAS[index % len(THM2_GAMMAS)]
    report = verify_bound("thm2", sigma, gamma, PolyJacobiCoefficients(sigma, b=b))
    return _bound_entry("thm2", index, report)


def _suite_cor3(spec, index, sigma):
    rng = instance_rng(spec, "cor3", index)
    b = random_potential(rng, spec.support_radius, 5 * spec.amplitude)
    gamma = THM2_GAMMAS[index % len(THM2_GAMMAS)]
    report = verify_bound("cor3", sigma, gamma, PolyJacobiCoefficients(sigma, b=b))
    return _bound_entry("cor3", index, report)


def _suite_thm4(spec, index, sigma):
    rng = instance_rng(spec, "thm4", index)
    sigma = min(sigma, 2)
    coeffs = random_coefficients(rng, sigma, min(spec.support_radius, 10), 2 * spec.amplitude)
    gamma = THM4_GAMMAS[index % len(THM4_GAMMAS)]
    report = verify_bound("thm4", sigma, gamma, coeffs)
    return _bound_entry("thm4", index, report)


SUITE_CHECKS = {
    "kolmogorov": _suite_kolmogorov,
    "agmon": _suite_agmon,
    "dgsi": _suite_dgsi,
    "sandwich": _suite_sandwich,
    "sandwich_eigenvalues": _suite_sandwich_eigenvalues,
    "jensen_split": _suite_jensen_split,
    "aizenman_lieb_lift": _suite_aizenman_lieb_lift,
    "constants": _suite_constants,
    "truncated_potential": _suite_truncated_potential,
    "density_functional": _suite_density_functional,
    "thm2": _suite_thm2,
    "cor3": _suite_cor3,
    "thm4": _suite_thm4,
}


class SuiteReport:
    """Suite entries ordered by (check name, instance index), with pass/fail counts and worst margins."""

    def __init__(self, spec, entries):
        self.spec = spec
        self.entries = sorted(entries, key=lambda entry: (entry.check, entry.index))

    @property
    def num_checks(self):
        return len(self.entries)

    @property
    def num_failed(self):
        return sum(1 for entry in self.entries if entry.status == "fail")

    @property
    def num_indeterminate(self):
        return sum(1 for entry in self.entries if entry.status == "indeterminate")

    @property
    def passed(self):
        return self.num_failed == 0

    def worst_margins(self):
        """check name -> (smallest margin, its instance index)"""
        worst = {}
        for entry in self.entries:
            if entry.check not in worst or entry.margin < worst[entry.check][0]:
                worst[entry.check] = (entry.margin, entry.index)
        return worst

    def summary_text(self):
        lines = [
            f"seed {self.spec.seed}, {self.spec.count} instances: {self.num_checks} checks, {self.num_failed} failed, "
            f"{self.num_indeterminate} indeterminate",
        ]
        worst = self.worst_margins()
        for check in sorted(worst):
            entries = [entry for entry in self.entries if entry.check == check]
            failed = sum(1 for entry in entries if entry.status == "fail")
            margin, index = worst[check]
            lines.append(f"{check}: {len(entries)} checks, {failed} failed, worst margin {format_float(margin)} "
                         f"(instance {index})")
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines) + "\n"

    def to_rows(self):
        return [entry._asdict() for entry in self.entries]

    def digest(self):
        return hashlib.sha256(json.dumps(self.to_rows()).encode("UTF-8")).hexdigest()[:16]


def run_suite(spec, inject_fault=False, show_progress_bar=False):
    """Run every check on spec.count seeded instances. The sigma of instance i cycles through spec.sigma_range.

    Args:
        spec (RandomInstanceSpec): the corpus
        inject_fault (bool): flip the margin of the first entry to a failure. Used to test the exit status wiring.
        show_progress_bar (bool): show a tqdm progress bar over the instances
    Return:
        SuiteReport
    """
    sigmas = _sigmas(spec)
    indices = range(spec.count)
    if show_progress_bar:
        indices = tqdm.tqdm(indices, unit=" instances", unit_scale=True)

    entries = []
    for index in indices:
        sigma = sigmas[index % len(sigmas)]
        for check, run_check in SUITE_CHECKS.items():
            entries.append(run_check(spec, index, sigma))

    report = SuiteReport(spec, entries)
    if inject_fault and report.entries:
        entry = report.entries[0]
        report.entries[0] = entry._replace(margin=-abs(entry.margin) - 1.0, status="fail")
        logging.warning(f"Injected a failure into {entry.check} instance {entry.index}")

    return report
