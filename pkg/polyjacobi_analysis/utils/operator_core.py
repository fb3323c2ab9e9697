"""Exact construction of the higher order discrete Laplacian, its symbol, the polydiagonal Jacobi-type
matrix W_sigma, the free operator W_sigma^0 and the sandwich comparison potentials.

Sequences are finitely supported, so every operator here acts on a dense window plus an offset and all
integer-valued inputs stay exact (int64) through the stencil arithmetic.
"""

from collections import namedtuple
import functools

import numpy as np

"""Largest supported order. C(28, 14) = 40116600 keeps every stencil entry exact in 64-bit integers."""
SIGMA_CAP = 14

"""Binomial rows are precomputed up to this row, which covers identity (iii) at a = 2 * SIGMA_CAP."""
MAX_BINOMIAL_ROW = 2 * SIGMA_CAP + 2

ESSENTIAL_SPECTRUM_KINDS = ("laplacian_power", "shifted_laplacian_power", "w_sigma")

StencilCoefficients = namedtuple("StencilCoefficients", ["sigma", "coeffs"])


class SigmaCapError(ValueError):
    pass


class WindowError(ValueError):
    pass


def check_sigma(sigma):
    """Raise SigmaCapError unless sigma is an integer in [1, SIGMA_CAP]."""
    if isinstance(sigma, bool) or not isinstance(sigma, (int, np.integer)):
        raise SigmaCapError(f"sigma must be an integer, got {sigma!r}")
    if sigma < 1 or sigma > SIGMA_CAP:
        raise SigmaCapError(f"sigma = {sigma} is outside the supported range [1, {SIGMA_CAP}] (sigma cap = {SIGMA_CAP})")
    return int(sigma)


class Sequence:
    """A finitely supported real sequence {phi(n)}, n in Z, stored as the dense window of values starting at
    index `offset`. Entries outside the window are exactly zero. Leading and trailing zeros are trimmed on
    construction, so two sequences are equal iff their canonical (offset, values) pairs are equal. The empty
    window is the zero sequence.
    """

    def __init__(self, offset=0, values=()):
        values = np.asarray(values)
        if values.dtype.kind in "biu":
            values = values.astype(np.int64)
        else:
            values = values.astype(np.float64)

        if values.ndim != 1:
            raise ValueError(f"Sequence values must be 1-dimensional, got shape {values.shape}")

        nonzero = np.flatnonzero(values)
        if len(nonzero) == 0:
            offset = 0
            values = values[:0]
        else:
            offset = int(offset) + int(nonzero[0])
            values = values[nonzero[0]:nonzero[-1] + 1]

        values = values.copy()
        values.flags.writeable = False
        self.offset = int(offset)
        self.values = values

    @classmethod
    def impulse(cls, n=0, value=1):
        """The sequence value * delta_n"""
        return cls(n, [value])

    @classmethod
    def from_entries(cls, entries):
        """Build a sequence from (index, value) pairs. Repeated indices are summed."""
        entries = [(int(n), v) for n, v in entries]
        if not entries:
            return cls()

        lo = min(n for n, _ in entries)
        hi = max(n for n, _ in entries)
        is_integer = all(isinstance(v, (int, np.integer)) and not isinstance(v, bool) for _, v in entries)
        values = np.zeros(hi - lo + 1, dtype=np.int64 if is_integer else np.float64)
        for n, v in entries:
            values[n - lo] += v

        return cls(lo, values)

    @property
    def end(self):
        """Index of the last stored entry (offset - 1 for the zero sequence)."""
        return self.offset + len(self.values) - 1

    @property
    def is_zero(self):
        return len(self.values) == 0

    def __len__(self):
        return len(self.values)

    def __getitem__(self, n):
        i = n - self.offset
        if 0 <= i < len(self.values):
            return self.values[i].item()
        return 0

    def window(self, lo, hi):
        """Return the values at indices lo..hi (inclusive) as a new float array, zero outside the support."""
        result = np.zeros(max(hi - lo + 1, 0), dtype=np.float64)
        if self.is_zero:
            return result

        start = max(lo, self.offset)
        stop = min(hi, self.end)
        if start <= stop:
            result[start - lo:stop - lo + 1] = self.values[start - self.offset:stop - self.offset + 1]
        return result

    def to_entries(self):
        """Return the nonzero entries as a list of (index, value) pairs with python scalars."""
        return [(self.offset + i, v.item()) for i, v in enumerate(self.values) if v != 0]

    def scaled(self, factor):
        return Sequence(self.offset, self.values * factor)

    def _combine(self, other, sign):
        if self.is_zero:
            return Sequence(other.offset, sign * other.values)
        if other.is_zero:
            return self

        lo = min(self.offset, other.offset)
        hi = max(self.end, other.end)
        dtype = np.result_type(self.values.dtype, other.values.dtype)
        values = np.zeros(hi - lo + 1, dtype=dtype)
        values[self.offset - lo:self.end - lo + 1] += self.values
        values[other.offset - lo:other.end - lo + 1] += sign * other.values
        return Sequence(lo, values)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return Sequence(self.offset, -self.values)

    def __eq__(self, other):
        if not isinstance(other, Sequence):
            return NotImplemented
        return self.offset == other.offset and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.offset, tuple(self.values.tolist())))

    def __repr__(self):
        return f"Sequence(offset={self.offset}, values={self.values.tolist()})"


def inner_product(phi, psi):
    """<phi, psi> for real finitely supported sequences."""
    if phi.is_zero or psi.is_zero:
        return 0.0
    lo = max(phi.offset, psi.offset)
    hi = min(phi.end, psi.end)
    if lo > hi:
        return 0.0
    return float(np.dot(phi.window(lo, hi), psi.window(lo, hi)))


def l2_norm(phi):
    return float(np.linalg.norm(phi.values.astype(np.float64)))


def sup_norm(phi):
    return float(np.max(np.abs(phi.values))) if not phi.is_zero else 0.0


@functools.lru_cache(maxsize=None)
def _pascal_row(a):
    if a == 0:
        return (1,)
    previous = _pascal_row(a - 1)
    return tuple(x + y for x, y in zip((0,) + previous, previous + (0,)))


def binomial(a, b):
    """Exact binomial coefficient C(a, b) from Pascal's recurrence. Returns 0 when b < 0 or b > a.

    Args:
        a (int): row, 0 <= a <= MAX_BINOMIAL_ROW
        b (int): column
    Return:
        int: C(a, b)
    """
    if a < 0:
        raise ValueError(f"binomial row must be nonnegative, got {a}")
    if a > MAX_BINOMIAL_ROW:
        raise SigmaCapError(f"binomial row {a} exceeds {MAX_BINOMIAL_ROW} (2 * sigma cap + 2, sigma cap = {SIGMA_CAP})")
    if b < 0 or b > a:
        return 0
    return _pascal_row(a)[b]


def combinatorial_identities(a, b=0):
    """Evaluate both sides of the three binomial identities used to derive the closed stencil:

        (i)   C(a, b) + C(a, b+1) = C(a+1, b+1)
        (ii)  2 C(a, 0) + C(a, 1) = C(a+2, 1)
        (iii) 2 C(a, a) + C(a, a-1) = C(a+2, a+1)

    Return:
        dict: identity name -> (lhs, rhs)
    """
    return {
        "i": (binomial(a, b) + binomial(a, b + 1), binomial(a + 1, b + 1)),
        "ii": (2 * binomial(a, 0) + binomial(a, 1), binomial(a + 2, 1)),
        "iii": (2 * binomial(a, a) + binomial(a, a - 1), binomial(a + 2, a + 1)),
    }


def laplacian_stencil(sigma):
    """Return the 2 sigma + 1 exact coefficients C(2 sigma, k) (-1)^(k + sigma), k = 0..2 sigma, of the
    sigma-th power of the discrete Laplacian.
    """
    sigma = check_sigma(sigma)
    coeffs = tuple(binomial(2 * sigma, k) * (-1) ** (k + sigma) for k in range(2 * sigma + 1))
    return StencilCoefficients(sigma, coeffs)


def omegas(sigma):
    """Off-diagonal coefficients omega_i = C(2 sigma, sigma + i) (-1)^i, i = 1..sigma, of the free operator."""
    sigma = check_sigma(sigma)
    return tuple(binomial(2 * sigma, sigma + i) * (-1) ** i for i in range(1, sigma + 1))


def difference(phi):
    """(D phi)(n) = phi(n+1) - phi(n)"""
    if phi.is_zero:
        return Sequence()
    padded = np.concatenate(([0], phi.values, [0]))
    return Sequence(phi.offset - 1, np.diff(padded))


def difference_adjoint(phi):
    """(D* phi)(n) = phi(n-1) - phi(n)"""
    if phi.is_zero:
        return Sequence()
    padded = np.concatenate(([0], phi.values, [0]))
    return Sequence(phi.offset, -np.diff(padded))


def difference_power(phi, k):
    """D^k phi"""
    for _ in range(k):
        phi = difference(phi)
    return phi


def apply_laplacian_power(sigma, phi, mode="closed_form"):
    """Apply the sigma-th power of the discrete Laplacian to phi.

    Args:
        sigma (int): order
        phi (Sequence): input sequence
        mode (str): "closed_form" convolves with the binomial stencil, "recursive" applies D* D sigma times
    Return:
        Sequence: the result, whose support grows by sigma on each side
    """
    sigma = check_sigma(sigma)
    if phi.is_zero:
        return Sequence()

    if mode == "closed_form":
        coeffs = np.array(laplacian_stencil(sigma).coeffs, dtype=np.int64)
        if phi.values.dtype.kind == "f":
            coeffs = coeffs.astype(np.float64)
        # the stencil is symmetric, so the convolution equals sum_k c_k phi(n - sigma + k)
        return Sequence(phi.offset - sigma, np.convolve(phi.values, coeffs))
    elif mode == "recursive":
        for _ in range(sigma):
            phi = difference_adjoint(difference(phi))
        return phi
    else:
        raise ValueError(f"Unexpected mode: {mode}")


def symbol(sigma, x):
    """Fourier symbol C(2 sigma, sigma) + 2 sum_{k<sigma} C(2 sigma, k) (-1)^(k + sigma) cos((sigma - k) x).
    Accepts a scalar or an array of frequencies.
    """
    coeffs = laplacian_stencil(sigma).coeffs
    x = np.asarray(x, dtype=np.float64)
    value = np.full(x.shape, float(coeffs[sigma]))
    for k in range(sigma):
        value += 2.0 * coeffs[k] * np.cos((sigma - k) * x)

    return float(value) if value.ndim == 0 else value


def symbol_closed_form(sigma, x):
    """(4 sin^2(x/2))^sigma"""
    x = np.asarray(x, dtype=np.float64)
    value = (4.0 * np.sin(x / 2.0) ** 2) ** sigma
    return float(value) if value.ndim == 0 else value


def essential_spectrum(kind, sigma):
    """Return the essential spectrum (lo, hi) of

        laplacian_power:          Delta_D^sigma                  -> [0, 4^sigma]
        shifted_laplacian_power:  Delta_D^sigma - 4^sigma        -> [-4^sigma, 0]
        w_sigma:                  W_sigma = Delta_D^sigma - C    -> [-C, 4^sigma - C],  C = C(2 sigma, sigma)
    """
    sigma = check_sigma(sigma)
    center = binomial(2 * sigma, sigma)
    if kind == "laplacian_power":
        return 0, 4 ** sigma
    elif kind == "shifted_laplacian_power":
        return -4 ** sigma, 0
    elif kind == "w_sigma":
        return -center, 4 ** sigma - center
    else:
        raise ValueError(f"Unexpected kind: {kind}. Expected one of {', '.join(ESSENTIAL_SPECTRUM_KINDS)}")


class PolyJacobiCoefficients:
    """Coefficients ({a_n^1}, ..., {a_n^sigma}, {b_n}) of W_sigma, stored as the diagonal b and the deviations
    a_n^i - omega_i of each band from the free operator. deviations[i - 1] holds band i.
    """

    def __init__(self, sigma, b=None, deviations=None):
        self.sigma = check_sigma(sigma)
        self.b = b if b is not None else Sequence()

        deviations = list(deviations or [])
        if len(deviations) > self.sigma:
            raise ValueError(f"Got {len(deviations)} deviation bands for sigma = {self.sigma}")
        deviations += [Sequence()] * (self.sigma - len(deviations))
        self.deviations = tuple(deviations)
        self.omegas = omegas(self.sigma)

    @classmethod
    def from_entries(cls, sigma, b_entries=(), deviation_entries=()):
        """Build coefficients from (index, value) diagonal entries and (band, index, value) deviation entries."""
        sigma = check_sigma(sigma)
        entries_by_band = [[] for _ in range(sigma)]
        for band, n, value in deviation_entries:
            if not 1 <= band <= sigma:
                raise ValueError(f"Deviation band {band} is outside 1..{sigma}")
            entries_by_band[band - 1].append((n, value))

        return cls(
            sigma,
            b=Sequence.from_entries(b_entries),
            deviations=[Sequence.from_entries(entries) for entries in entries_by_band])

    def coefficient(self, band, n):
        """a_n^band = omega_band + deviation"""
        return self.omegas[band - 1] + self.deviations[band - 1][n]

    @property
    def has_deviations(self):
        return any(not d.is_zero for d in self.deviations)

    def matrix_support(self):
        """Return the smallest index interval (lo, hi) containing every matrix entry that differs from W_sigma^0,
        or None for the free operator. A deviation at (n, band i) touches rows n and n + i.
        """
        intervals = []
        if not self.b.is_zero:
            intervals.append((self.b.offset, self.b.end))
        for band, deviation in enumerate(self.deviations, start=1):
            if not deviation.is_zero:
                intervals.append((deviation.offset, deviation.end + band))

        if not intervals:
            return None
        return min(lo for lo, _ in intervals), max(hi for _, hi in intervals)

    def scaled(self, factor):
        """Scale the diagonal and every deviation by factor."""
        return PolyJacobiCoefficients(
            self.sigma, b=self.b.scaled(factor), deviations=[d.scaled(factor) for d in self.deviations])

    def to_dict(self):
        return {
            "sigma": self.sigma,
            "b": [[n, v] for n, v in self.b.to_entries()],
            "deviations": [
                [band, n, v] for band, deviation in enumerate(self.deviations, start=1) for n, v in deviation.to_entries()
            ],
        }

    def __repr__(self):
        return f"PolyJacobiCoefficients({self.to_dict()})"


class BandedSymmetricMatrix:
    """Real symmetric matrix stored as its upper bands: bands[d][i] is the entry (i, i + d)."""

    def __init__(self, bands):
        bands = [np.array(band, dtype=np.float64) for band in bands]
        if not bands or len(bands[0]) == 0:
            raise ValueError("BandedSymmetricMatrix needs a nonempty diagonal")

        dim = len(bands[0])
        for d, band in enumerate(bands):
            if len(band) != max(dim - d, 0):
                raise ValueError(f"Band {d} has length {len(band)}, expected {max(dim - d, 0)}")
            band.flags.writeable = False

        self.dim = dim
        self.bandwidth = len(bands) - 1
        self.bands = tuple(bands)

    @classmethod
    def from_dense(cls, matrix, bandwidth):
        matrix = np.asarray(matrix, dtype=np.float64)
        return cls([np.diagonal(matrix, offset=d).copy() for d in range(bandwidth + 1)])

    def to_dense(self):
        matrix = np.diag(self.bands[0])
        for d in range(1, self.bandwidth + 1):
            if len(self.bands[d]):
                matrix += np.diag(self.bands[d], k=d) + np.diag(self.bands[d], k=-d)
        return matrix

    def to_upper_band_storage(self):
        """LAPACK upper band storage: ab[bandwidth + i - j, j] == a[i, j] for i <= j."""
        ab = np.zeros((self.bandwidth + 1, self.dim), dtype=np.float64)
        for d, band in enumerate(self.bands):
            ab[self.bandwidth - d, d:] = band
        return ab

    def diagonal_shifted(self, shift):
        return BandedSymmetricMatrix([self.bands[0] + shift] + list(self.bands[1:]))

    def __sub__(self, other):
        if self.dim != other.dim:
            raise ValueError(f"Dimension mismatch: {self.dim} vs {other.dim}")
        bandwidth = max(self.bandwidth, other.bandwidth)
        bands = []
        for d in range(bandwidth + 1):
            length = max(self.dim - d, 0)
            left = self.bands[d] if d <= self.bandwidth else np.zeros(length)
            right = other.bands[d] if d <= other.bandwidth else np.zeros(length)
            bands.append(left - right)
        return BandedSymmetricMatrix(bands)

    def norm_bound(self):
        """Maximum absolute row sum. This bounds the spectral norm from above."""
        return float(np.max(np.sum(np.abs(self.to_dense()), axis=1)))

    def __repr__(self):
        return f"BandedSymmetricMatrix(dim={self.dim}, bandwidth={self.bandwidth})"


def minimal_window(coeffs):
    """Smallest window that holds the perturbation's matrix support and at least 2 sigma + 1 rows."""
    support = coeffs.matrix_support() or (0, 0)
    lo, hi = support
    return lo, max(hi, lo + 2 * coeffs.sigma)


def assemble_w_sigma(coeffs, window, diagonal_shift=0.0):
    """Dirichlet finite section of W_sigma(a^1, ..., a^sigma, b) + diagonal_shift on the index window [lo, hi].

    Row/column k of the result corresponds to the lattice index lo + k. Entry (n, n + i) is
    a_n^i = omega_i + deviation, the diagonal is b_n + diagonal_shift, and entries outside the window are dropped.

    Args:
        coeffs (PolyJacobiCoefficients): the operator coefficients
        window (tuple): (lo, hi) inclusive lattice indices
        diagonal_shift (float): constant added to the whole diagonal
    Return:
        BandedSymmetricMatrix
    """
    lo, hi = window
    sigma = coeffs.sigma
    dim = hi - lo + 1
    support = coeffs.matrix_support()
    if dim < 2 * sigma + 1 or (support is not None and (support[0] < lo or support[1] > hi)):
        min_lo, min_hi = minimal_window(coeffs)
        raise WindowError(f"Window [{lo}, {hi}] is too small for sigma = {sigma} and perturbation support "
                          f"{list(support) if support else 'empty'}. Minimal window: [{min_lo}, {min_hi}]")

    bands = [coeffs.b.window(lo, hi) + diagonal_shift]
    for band in range(1, sigma + 1):
        bands.append(coeffs.omegas[band - 1] + coeffs.deviations[band - 1].window(lo, hi - band))

    return BandedSymmetricMatrix(bands)


def laplacian_section(sigma, dim):
    """Finite section of Delta_D^sigma of the given dimension, built directly from the stencil."""
    coeffs = laplacian_stencil(sigma).coeffs
    return BandedSymmetricMatrix([np.full(max(dim - d, 0), float(coeffs[sigma + d])) for d in range(sigma + 1)])


def sandwich_potentials(coeffs):
    """Return the diagonals (b_minus, b_plus) of the free-plus-diagonal operators that sandwich W_sigma:

        b_n^(+-) = b_n +- sum_{k=1}^{sigma} (|a_{n-k}^k - omega_k| + |a_n^k - omega_k|)

    so that W_sigma(omega, b_minus) <= W_sigma(a, b) <= W_sigma(omega, b_plus).
    """
    support = coeffs.matrix_support()
    if support is None:
        return coeffs.b, coeffs.b

    lo, hi = support
    total = np.zeros(hi - lo + 1)
    for band, deviation in enumerate(coeffs.deviations, start=1):
        total += np.abs(deviation.window(lo - band, hi - band)) + np.abs(deviation.window(lo, hi))

    b_values = coeffs.b.window(lo, hi)
    return Sequence(lo, b_values - total), Sequence(lo, b_values + total)
