"""Discrete spectra of the higher order discrete Schrodinger operators and of W_sigma from finite sections.

The eigenvalues outside the essential interval are computed on two nested windows and only reported as
converged when they agree, which filters the spectral pollution that truncation produces near the edges.
"""

from collections import namedtuple
import logging

import numpy as np
import scipy.linalg

from polyjacobi_analysis.utils.operator_core import (
    PolyJacobiCoefficients, assemble_w_sigma, binomial, essential_spectrum)

DEFAULT_TOLERANCE = 1e-8
DEFAULT_MAX_DOUBLINGS = 4

"""Operator kinds and the essential spectrum kind each one maps to.

    h_sigma:          Delta_D^sigma - b
    h_sigma_shifted:  Delta_D^sigma - 4^sigma + b
    w_sigma:          W_sigma(a^1, ..., a^sigma, b)
"""
OPERATOR_KINDS = {
    "h_sigma": "laplacian_power",
    "h_sigma_shifted": "shifted_laplacian_power",
    "w_sigma": "w_sigma",
}


class SpectralError(ValueError):
    pass


class SpectralReport(namedtuple("SpectralReport", [
        "sigma", "operator", "window", "eigenvalues_below", "eigenvalues_above", "essential_interval",
        "edge_margin", "converged", "window_pair", "max_shift"])):
    """Outside eigenvalues of one operator. eigenvalues_below is ascending (E_1^- first) and eigenvalues_above is
    descending (E_1^+ first). window is the largest window used and window_pair holds the dimensions of the two
    finite sections that were compared.
    """

    __slots__ = ()

    @property
    def num_eigenvalues(self):
        return len(self.eigenvalues_below) + len(self.eigenvalues_above)

    def to_dict(self):
        return {
            "sigma": self.sigma,
            "operator": self.operator,
            "window": list(self.window),
            "essential_interval": list(self.essential_interval),
            "eigenvalues_below": list(self.eigenvalues_below),
            "eigenvalues_above": list(self.eigenvalues_above),
            "edge_margin": self.edge_margin,
            "converged": self.converged,
            "window_pair": list(self.window_pair),
            "max_shift": self.max_shift,
        }


def default_edge_margin(sigma):
    return max(1e-6, 1e-6 * 4 ** sigma)


def default_padding(sigma):
    return 8 * sigma + 40


def _check_finite(m):
    for band in m.bands:
        if not np.all(np.isfinite(band)):
            raise SpectralError(f"{m} has non-finite entries")


def eigenvalues_symmetric(m):
    """Return all eigenvalues of the banded symmetric matrix m in ascending order.

    Args:
        m (BandedSymmetricMatrix): the matrix
    Return:
        numpy.ndarray: eigenvalues, ascending
    """
    _check_finite(m)
    eigenvalues = scipy.linalg.eigvals_banded(m.to_upper_band_storage(), lower=False, check_finite=False)
    return np.sort(eigenvalues)


def eigenpairs_symmetric(m):
    """Eigenvalues (ascending) and orthonormal eigenvectors (as columns) of the banded symmetric matrix m."""
    _check_finite(m)
    eigenvalues, eigenvectors = scipy.linalg.eig_banded(m.to_upper_band_storage(), lower=False, check_finite=False)
    order = np.argsort(eigenvalues)
    return eigenvalues[order], eigenvectors[:, order]


def operator_support(coeffs):
    """Index interval outside of which the operator coincides with its free counterpart."""
    return coeffs.matrix_support() or (0, 0)


def operator_matrix(coeffs, operator, window):
    """Finite section of the requested operator kind on the window, and its essential interval.

    Delta_D^sigma - b and Delta_D^sigma - 4^sigma + b are realised as W_sigma(omega, -+b) plus a constant
    diagonal shift, since W_sigma^0 = Delta_D^sigma - C(2 sigma, sigma).
    """
    if operator not in OPERATOR_KINDS:
        raise ValueError(f"Unexpected operator: {operator}. Expected one of {', '.join(OPERATOR_KINDS)}")

    sigma = coeffs.sigma
    center = binomial(2 * sigma, sigma)
    if operator == "h_sigma":
        m = assemble_w_sigma(PolyJacobiCoefficients(sigma, b=-coeffs.b), window, diagonal_shift=center)
    elif operator == "h_sigma_shifted":
        m = assemble_w_sigma(PolyJacobiCoefficients(sigma, b=coeffs.b), window, diagonal_shift=center - 4 ** sigma)
    else:
        m = assemble_w_sigma(coeffs, window)

    return m, essential_spectrum(OPERATOR_KINDS[operator], sigma)


def _outside_eigenvalues(coeffs, operator, window, edge_margin):
    m, (lo_edge, hi_edge) = operator_matrix(coeffs, operator, window)
    eigenvalues = eigenvalues_symmetric(m)
    below = eigenvalues[eigenvalues < lo_edge - edge_margin]
    above = eigenvalues[eigenvalues > hi_edge + edge_margin][::-1]
    return m.dim, below, above


def _max_shift(previous, current):
    """Largest eigenvalue movement between two windows, or None if the counts differ."""
    (_, below1, above1), (_, below2, above2) = previous, current
    if len(below1) != len(below2) or len(above1) != len(above2):
        return None
    shifts = np.concatenate((np.abs(below1 - below2), np.abs(above1 - above2)))
    return float(np.max(shifts)) if len(shifts) else 0.0


def discrete_spectrum(coeffs, operator="h_sigma", tolerance=DEFAULT_TOLERANCE, edge_margin=None, padding=None,
                      max_doublings=DEFAULT_MAX_DOUBLINGS):
    """Compute the eigenvalues of the operator that lie outside its essential interval.

    The finite section is taken on [lo - P, hi + P] and [lo - 2P, hi + 2P], where [lo, hi] is the support of the
    perturbation and P the padding. If some outside eigenvalue moved by tolerance or more, or the number of outside
    eigenvalues changed, P doubles, for at most max_doublings rounds.

    Args:
        coeffs (PolyJacobiCoefficients): operator coefficients. Only coeffs.b is used for h_sigma and h_sigma_shifted.
        operator (str): "h_sigma", "h_sigma_shifted" or "w_sigma"
        tolerance (float): convergence tolerance on eigenvalue movement between windows
        edge_margin (float): eigenvalues within this distance of the essential interval are discarded
        padding (int): initial padding P (default: 8 sigma + 40)
        max_doublings (int): maximum number of window comparisons
    Return:
        SpectralReport: eigenvalues from the larger window of the last comparison; converged is False if the
            doubling cap was reached without agreement.
    """
    if tolerance <= 0:
        raise ValueError(f"tolerance must be positive: {tolerance}")

    sigma = coeffs.sigma
    edge_margin = default_edge_margin(sigma) if edge_margin is None else edge_margin
    padding = default_padding(sigma) if padding is None else int(padding)
    lo, hi = operator_support(coeffs)

    previous = _outside_eigenvalues(coeffs, operator, (lo - padding, hi + padding), edge_margin)
    converged = False
    max_shift = None
    for _ in range(max(max_doublings, 1)):
        window = (lo - 2 * padding, hi + 2 * padding)
        current = _outside_eigenvalues(coeffs, operator, window, edge_margin)
        max_shift = _max_shift(previous, current)
        window_pair = (previous[0], current[0])
        if max_shift is not None and max_shift < tolerance:
            converged = True
            break

        padding *= 2
        previous = current

    if not converged:
        logging.warning(f"Outside eigenvalues of {operator} (sigma = {sigma}) did not converge to within {tolerance} "
                        f"by window [{window[0]}, {window[1]}]. Last shift: {max_shift}")

    return SpectralReport(
        sigma=sigma,
        operator=operator,
        window=window,
        eigenvalues_below=[float(e) for e in current[1]],
        eigenvalues_above=[float(e) for e in current[2]],
        essential_interval=essential_spectrum(OPERATOR_KINDS[operator], sigma),
        edge_margin=edge_margin,
        converged=converged,
        window_pair=window_pair,
        max_shift=max_shift)


def riesz_mean(eigenvalues, edge, gamma, side):
    """Sum_j |E_j - edge|^gamma over eigenvalues that lie strictly below (side="below") or above (side="above")
    the edge.
    """
    eigenvalues = np.asarray(eigenvalues, dtype=np.float64)
    if side == "below":
        wrong_side = eigenvalues[eigenvalues >= edge]
    elif side == "above":
        wrong_side = eigenvalues[eigenvalues <= edge]
    else:
        raise ValueError(f"Unexpected side: {side}")

    if len(wrong_side):
        raise SpectralError(f"Eigenvalue {wrong_side[0]} is not {side} the edge {edge}")

    return float(np.sum(np.abs(eigenvalues - edge) ** gamma))
