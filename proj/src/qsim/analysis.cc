#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "smqc/qsim.h"

namespace smqc {

DensityMatrix::DensityMatrix(std::size_t dimension, std::vector<Complex> entries)
    : dimension_(dimension), entries_(std::move(entries)) {
    if (entries_.size() != dimension_ * dimension_) {
        throw std::invalid_argument("DensityMatrix: entry count does not match dimension");
    }
}

DensityMatrix DensityMatrix::pure(const StateVector &state) {
    std::size_t d = state.dimension();
    std::vector<Complex> e(d * d);
    for (std::size_t r = 0; r < d; r++) {
        for (std::size_t c = 0; c < d; c++) {
            e[r * d + c] = state[r] * std::conj(state[c]);
        }
    }
    return DensityMatrix(d, std::move(e));
}

Complex DensityMatrix::trace() const {
    Complex t = 0;
    for (std::size_t k = 0; k < dimension_; k++) {
        t += (*this)(k, k);
    }
    return t;
}

bool DensityMatrix::is_hermitian(double tol) const {
    for (std::size_t r = 0; r < dimension_; r++) {
        for (std::size_t c = r; c < dimension_; c++) {
            if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) {
                return false;
            }
        }
    }
    return true;
}

std::vector<double> DensityMatrix::eigenvalues() const {
    Eigen::MatrixXcd m(dimension_, dimension_);
    for (std::size_t r = 0; r < dimension_; r++) {
        for (std::size_t c = 0; c < dimension_; c++) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = (*this)(r, c);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    const auto &ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

bool DensityMatrix::is_valid(double tol) const {
    if (!is_hermitian(tol) || std::abs(trace() - Complex{1}) > tol) {
        return false;
    }
    auto ev = eigenvalues();
    return std::all_of(ev.begin(), ev.end(), [&](double v) { return v >= -tol; });
}

double DensityMatrix::max_abs_diff(const DensityMatrix &other) const {
    if (other.dimension_ != dimension_) {
        throw std::invalid_argument("DensityMatrix: dimension mismatch");
    }
    double d = 0;
    for (std::size_t k = 0; k < entries_.size(); k++) {
        d = std::max(d, std::abs(entries_[k] - other.entries_[k]));
    }
    return d;
}

DensityMatrix DensityMatrix::operator-(const DensityMatrix &other) const {
    if (other.dimension_ != dimension_) {
        throw std::invalid_argument("DensityMatrix: dimension mismatch");
    }
    std::vector<Complex> e(entries_.size());
    for (std::size_t k = 0; k < e.size(); k++) {
        e[k] = entries_[k] - other.entries_[k];
    }
    return DensityMatrix(dimension_, std::move(e));
}

double trace_distance(const DensityMatrix &a, const DensityMatrix &b) {
    double total = 0;
    for (double v : (a - b).eigenvalues()) {
        total += std::abs(v);
    }
    return total / 2;
}

DensityMatrix partial_trace(const StateVector &state, std::span<const std::size_t> keep) {
    if (keep.empty()) {
        throw std::invalid_argument("partial_trace: keep set is empty");
    }
    std::vector<std::size_t> kept(keep.begin(), keep.end());
    std::sort(kept.begin(), kept.end());
    if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
        throw std::invalid_argument("partial_trace: duplicate qubit in keep set");
    }
    const std::size_t n = state.num_qubits();
    if (kept.back() >= n) {
        throw std::invalid_argument("partial_trace: qubit " + std::to_string(kept.back()) + " out of range");
    }
    auto bit_of = [n](std::size_t q) { return std::uint64_t{1} << (n - 1 - q); };
    std::vector<std::uint64_t> traced_masks;
    for (std::size_t q = 0, j = 0; q < n; q++) {
        if (j < kept.size() && kept[j] == q) {
            j++;
        } else {
            traced_masks.push_back(bit_of(q));
        }
    }
    auto spread = [](std::uint64_t idx, const std::vector<std::uint64_t> &masks) {
        std::uint64_t out = 0;
        const std::size_t w = masks.size();
        for (std::size_t b = 0; b < w; b++) {
            if (idx & (std::uint64_t{1} << (w - 1 - b))) {
                out |= masks[b];
            }
        }
        return out;
    };
    std::vector<std::uint64_t> kept_masks;
    for (auto q : kept) {
        kept_masks.push_back(bit_of(q));
    }

    const std::size_t d = std::size_t{1} << kept.size();
    const std::size_t e = std::size_t{1} << traced_masks.size();
    std::vector<std::uint64_t> row_base(d), env(e);
    for (std::size_t r = 0; r < d; r++) {
        row_base[r] = spread(r, kept_masks);
    }
    for (std::size_t k = 0; k < e; k++) {
        env[k] = spread(k, traced_masks);
    }
    std::vector<Complex> entries(d * d, 0);
    for (std::size_t r = 0; r < d; r++) {
        for (std::size_t c = r; c < d; c++) {
            Complex acc = 0;
            for (std::size_t k = 0; k < e; k++) {
                acc += state[row_base[r] | env[k]] * std::conj(state[row_base[c] | env[k]]);
            }
            entries[r * d + c] = acc;
            entries[c * d + r] = std::conj(acc);
        }
    }
    return DensityMatrix(d, std::move(entries));
}

StateVector SchmidtDecomposition::reconstruct() const {
    std::vector<Complex> a(4, 0);
    for (std::size_t k = 0; k < 2; k++) {
        for (std::size_t i = 0; i < 2; i++) {
            for (std::size_t j = 0; j < 2; j++) {
                a[2 * i + j] += coefficients[k] * left[k][i] * right[k][j];
            }
        }
    }
    return StateVector::from_amplitudes(std::move(a));
}

namespace {

using Vec2 = std::array<Complex, 2>;

double norm(const Vec2 &v) {
    return std::sqrt(std::norm(v[0]) + std::norm(v[1]));
}

Vec2 complement(const Vec2 &v) {
    return {-std::conj(v[1]), std::conj(v[0])};
}

}  // namespace

SchmidtDecomposition schmidt_decompose(const StateVector &state, std::size_t cut_after) {
    if (state.num_qubits() != 2 || cut_after != 0) {
        throw std::invalid_argument("schmidt_decompose: expected a two-qubit state cut after qubit 0");
    }
    // Coefficient matrix M(i, j) = <ij|psi>; its SVD M = sum_k s_k u_k v_k^dagger gives
    // left vectors u_k and right vectors conj(v_k).
    const Complex m00 = state[0], m01 = state[1], m10 = state[2], m11 = state[3];
    auto apply_m = [&](const Vec2 &v) -> Vec2 { return {m00 * v[0] + m01 * v[1], m10 * v[0] + m11 * v[1]}; };

    // A = M^dagger M.
    const double a = std::norm(m00) + std::norm(m10);
    const double d = std::norm(m01) + std::norm(m11);
    const Complex b = std::conj(m00) * m01 + std::conj(m10) * m11;
    const double half_gap = std::sqrt((a - d) * (a - d) / 4 + std::norm(b));
    const double top = (a + d) / 2 + half_gap;

    Vec2 v0;
    Vec2 c1{b, top - a};
    Vec2 c2{top - d, std::conj(b)};
    const Vec2 &pick = norm(c1) >= norm(c2) ? c1 : c2;
    if (norm(pick) < 1e-14) {
        v0 = {1, 0};
    } else {
        double n = norm(pick);
        v0 = {pick[0] / n, pick[1] / n};
    }
    Vec2 v1 = complement(v0);

    Vec2 u0 = apply_m(v0);
    double s0 = norm(u0);
    u0 = {u0[0] / s0, u0[1] / s0};
    Vec2 u1 = complement(u0);
    Vec2 mv1 = apply_m(v1);
    Complex t = std::conj(u1[0]) * mv1[0] + std::conj(u1[1]) * mv1[1];
    double s1 = std::abs(t);
    if (s1 > 1e-15) {
        Complex phase = t / s1;
        u1 = {u1[0] * phase, u1[1] * phase};
    }

    std::array<Vec2, 2> us{u0, u1};
    std::array<Vec2, 2> vs{v0, v1};
    SchmidtDecomposition out{{s0, s1}, {StateVector(1), StateVector(1)}, {StateVector(1), StateVector(1)}};
    for (std::size_t k = 0; k < 2; k++) {
        std::size_t lead = std::abs(us[k][0]) > 1e-12 ? 0 : 1;
        Complex gauge = std::conj(us[k][lead]) / std::abs(us[k][lead]);
        Vec2 u = {us[k][0] * gauge, us[k][1] * gauge};
        Vec2 v = {vs[k][0] * gauge, vs[k][1] * gauge};
        out.left[k] = StateVector::from_amplitudes({u[0], u[1]});
        out.right[k] = StateVector::from_amplitudes({std::conj(v[0]), std::conj(v[1])});
    }
    return out;
}

}  // namespace smqc
