#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "smqc/randomness.h"

namespace smqc {

using Complex = std::complex<double>;

/// Tolerance for algebraic identities (unitarity, norms, Hermiticity).
inline constexpr double kAlgebraTolerance = 1e-12;
/// Tolerance for outputs of composed protocol runs.
inline constexpr double kProtocolTolerance = 1e-10;

/// Dense N x N complex matrix, row major.
template <std::size_t N>
struct Matrix {
    std::array<Complex, N * N> entries{};

    Complex &operator()(std::size_t row, std::size_t col) {
        return entries[row * N + col];
    }
    const Complex &operator()(std::size_t row, std::size_t col) const {
        return entries[row * N + col];
    }

    static Matrix identity() {
        Matrix m;
        for (std::size_t k = 0; k < N; k++) {
            m(k, k) = 1;
        }
        return m;
    }

    Matrix adjoint() const {
        Matrix m;
        for (std::size_t r = 0; r < N; r++) {
            for (std::size_t c = 0; c < N; c++) {
                m(r, c) = std::conj((*this)(c, r));
            }
        }
        return m;
    }

    Complex trace() const {
        Complex t = 0;
        for (std::size_t k = 0; k < N; k++) {
            t += (*this)(k, k);
        }
        return t;
    }

    /// Largest entrywise modulus of the difference.
    double max_abs_diff(const Matrix &other) const {
        double d = 0;
        for (std::size_t k = 0; k < N * N; k++) {
            d = std::max(d, std::abs(entries[k] - other.entries[k]));
        }
        return d;
    }

    /// U^dagger U == I within `tol` entrywise.
    bool is_unitary(double tol = kAlgebraTolerance) const {
        return (adjoint() * (*this)).max_abs_diff(identity()) <= tol;
    }

    friend Matrix operator*(const Matrix &a, const Matrix &b) {
        Matrix m;
        for (std::size_t r = 0; r < N; r++) {
            for (std::size_t k = 0; k < N; k++) {
                Complex v = a(r, k);
                if (v == Complex{0}) {
                    continue;
                }
                for (std::size_t c = 0; c < N; c++) {
                    m(r, c) += v * b(k, c);
                }
            }
        }
        return m;
    }

    friend Matrix operator*(Complex s, const Matrix &a) {
        Matrix m = a;
        for (auto &e : m.entries) {
            e *= s;
        }
        return m;
    }

    friend bool operator==(const Matrix &, const Matrix &) = default;
};

using Unitary2 = Matrix<2>;
using Unitary4 = Matrix<4>;

/// a (x) b, with `a` acting on the more significant qubit.
Unitary4 kron(const Unitary2 &a, const Unitary2 &b);

/// a^k for k in {0, 1}.
Unitary2 power(const Unitary2 &a, int k);

namespace gates {
const Unitary2 &I();
const Unitary2 &X();
const Unitary2 &Y();
const Unitary2 &Z();
const Unitary2 &H();
const Unitary2 &S();
const Unitary2 &S_DAG();
const Unitary2 &T();
const Unitary2 &T_DAG();
/// Control is the first tensor factor.
const Unitary4 &CNOT();
/// Looks up a named single-qubit gate ("i", "x", "y", "z", "h", "s", "sdg", "t", "tdg").
/// Case insensitive. Throws std::invalid_argument for unknown names.
Unitary2 by_name(std::string_view name);
}  // namespace gates

/// Outcome of a Bell measurement: projection onto |B_xz> = (|0x> + (-1)^z |1 x̄>)/√2.
struct BellOutcome {
    int x = 0;
    int z = 0;

    std::size_t index() const {
        return static_cast<std::size_t>(2 * x + z);
    }
    static BellOutcome from_index(std::size_t index) {
        return {static_cast<int>(index >> 1) & 1, static_cast<int>(index) & 1};
    }
    friend bool operator==(const BellOutcome &, const BellOutcome &) = default;
};

/// Pure state over `num_qubits` qubits. Qubit 0 is the leftmost tensor factor and
/// the most significant bit of the amplitude index.
class StateVector {
   public:
    /// |0...0>.
    explicit StateVector(std::size_t num_qubits = 0);

    static StateVector basis(std::size_t num_qubits, std::uint64_t index);
    /// Length must be a power of two and the norm nonzero; the result is normalized.
    static StateVector from_amplitudes(std::vector<Complex> amplitudes);

    std::size_t num_qubits() const {
        return num_qubits_;
    }
    std::size_t dimension() const {
        return amplitudes_.size();
    }
    std::span<const Complex> amplitudes() const {
        return amplitudes_;
    }
    const Complex &operator[](std::size_t index) const {
        return amplitudes_[index];
    }
    double norm_squared() const;

    /// Applies `u` to `qubit`. Throws std::invalid_argument for a bad index or a
    /// non-unitary matrix.
    void apply(const Unitary2 &u, std::size_t qubit);
    /// Applies `u` with `q1` as its first tensor factor.
    void apply(const Unitary4 &u, std::size_t q1, std::size_t q2);
    void apply_cnot(std::size_t control, std::size_t target);

    /// Born probabilities of the four Bell outcomes on (q1, q2), indexed by BellOutcome::index().
    std::array<double, 4> bell_probabilities(std::size_t q1, std::size_t q2) const;
    /// Measures (q1, q2) in the Bell basis. The measured pair is left collapsed to |B_xz>.
    /// Labels are such that teleporting |psi> through B00 leaves X^x Z^z |psi>.
    BellOutcome measure_bell(std::size_t q1, std::size_t q2, OutcomeSource &outcomes);
    /// Computational basis measurement; the qubit is left collapsed.
    int measure_z(std::size_t qubit, OutcomeSource &outcomes);

    /// this (x) other.
    StateVector tensor(const StateVector &other) const;
    /// Removes `qubits`, which must be in the product state `known` (ordered as listed).
    /// Remaining qubits keep their relative order. Throws std::logic_error if the
    /// qubits are not (within 1e-9) in that state.
    StateVector discard(std::span<const std::size_t> qubits, const StateVector &known) const;
    /// New qubit k is old qubit order[k].
    StateVector permuted(std::span<const std::size_t> order) const;

    /// <this|other>.
    Complex inner(const StateVector &other) const;

   private:
    void check_qubit(std::size_t q) const;
    std::uint64_t mask(std::size_t q) const {
        return std::uint64_t{1} << (num_qubits_ - 1 - q);
    }
    void renormalize();

    std::size_t num_qubits_;
    std::vector<Complex> amplitudes_;
};

StateVector basis_state(std::size_t num_qubits, std::uint64_t index);
StateVector bell_state(int x, int z);
/// (I (x) CNOT (x) I)(B00 (x) B00): Bell pairs on (0,1) and (2,3), CNOT from 1 onto 2.
StateVector chi_state();
/// Single-qubit |0>, |1>, |+>, |->.
StateVector plus_state();
StateVector minus_state();

struct PhaseComparison {
    bool equal;
    double overlap;
};
/// Equal up to global phase: |<a|b>| >= 1 - 1e-10. Throws on dimension mismatch.
PhaseComparison phase_equal(const StateVector &a, const StateVector &b);

/// Haar-random pure state.
StateVector random_state(std::size_t num_qubits, Rng &rng);
/// Haar-random single-qubit unitary.
Unitary2 random_unitary2(Rng &rng);

class DensityMatrix {
   public:
    DensityMatrix(std::size_t dimension, std::vector<Complex> entries);
    static DensityMatrix pure(const StateVector &state);

    std::size_t dimension() const {
        return dimension_;
    }
    const Complex &operator()(std::size_t row, std::size_t col) const {
        return entries_[row * dimension_ + col];
    }
    Complex trace() const;
    bool is_hermitian(double tol = kAlgebraTolerance) const;
    /// Ascending eigenvalues; requires a Hermitian matrix.
    std::vector<double> eigenvalues() const;
    /// Hermitian, unit trace, and no eigenvalue below -tol.
    bool is_valid(double tol = kAlgebraTolerance) const;
    double max_abs_diff(const DensityMatrix &other) const;

    DensityMatrix operator-(const DensityMatrix &other) const;

   private:
    std::size_t dimension_;
    std::vector<Complex> entries_;
};

/// Half the trace norm of a - b.
double trace_distance(const DensityMatrix &a, const DensityMatrix &b);

/// Reduced state on `keep` (sorted ascending, duplicates rejected); the kept qubits
/// keep their relative order. Throws std::invalid_argument for an empty or bad set.
DensityMatrix partial_trace(const StateVector &state, std::span<const std::size_t> keep);

/// psi = sum_k coefficients[k] |left[k]> (x) |right[k]>.
struct SchmidtDecomposition {
    std::array<double, 2> coefficients;
    std::array<StateVector, 2> left;
    std::array<StateVector, 2> right;

    StateVector reconstruct() const;
};

/// Schmidt form of a two-qubit pure state across the cut after qubit `cut_after`
/// (only 0 is meaningful for two qubits). Coefficients are descending. Phases are
/// fixed so the first non-negligible component of every left vector is real and
/// positive; with equal coefficients the right vectors start from the computational
/// basis.
SchmidtDecomposition schmidt_decompose(const StateVector &state, std::size_t cut_after = 0);

/// Unit vector orthogonal to a single-qubit state: (a, b) -> (-b*, a*).
StateVector orthogonal_complement(const StateVector &qubit);

}  // namespace smqc
