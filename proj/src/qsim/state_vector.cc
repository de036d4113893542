#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "smqc/qsim.h"

namespace smqc {

namespace {

constexpr std::size_t kMaxQubits = 24;

bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

}  // namespace

StateVector::StateVector(std::size_t num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits > kMaxQubits) {
        throw std::invalid_argument("StateVector: too many qubits (" + std::to_string(num_qubits) + ")");
    }
    amplitudes_.assign(std::size_t{1} << num_qubits, Complex{0});
    amplitudes_[0] = 1;
}

StateVector StateVector::basis(std::size_t num_qubits, std::uint64_t index) {
    StateVector s(num_qubits);
    if (index >= s.dimension()) {
        throw std::invalid_argument("basis index " + std::to_string(index) + " out of range for " +
                                    std::to_string(num_qubits) + " qubits");
    }
    s.amplitudes_[0] = 0;
    s.amplitudes_[index] = 1;
    return s;
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes) {
    if (!is_power_of_two(amplitudes.size())) {
        throw std::invalid_argument("amplitude count " + std::to_string(amplitudes.size()) +
                                    " is not a power of two");
    }
    StateVector s(static_cast<std::size_t>(std::countr_zero(amplitudes.size())));
    s.amplitudes_ = std::move(amplitudes);
    double n = s.norm_squared();
    if (!(n > 1e-24) || !std::isfinite(n)) {
        throw std::invalid_argument("amplitudes have zero or non-finite norm");
    }
    s.renormalize();
    return s;
}

double StateVector::norm_squared() const {
    double n = 0;
    for (const auto &a : amplitudes_) {
        n += std::norm(a);
    }
    return n;
}

void StateVector::renormalize() {
    double scale = 1.0 / std::sqrt(norm_squared());
    for (auto &a : amplitudes_) {
        a *= scale;
    }
}

void StateVector::check_qubit(std::size_t q) const {
    if (q >= num_qubits_) {
        throw std::invalid_argument("qubit " + std::to_string(q) + " out of range for " +
                                    std::to_string(num_qubits_) + " qubits");
    }
}

void StateVector::apply(const Unitary2 &u, std::size_t qubit) {
    check_qubit(qubit);
    if (!u.is_unitary()) {
        throw std::invalid_argument("apply: matrix is not unitary");
    }
    const std::uint64_t m = mask(qubit);
    const std::uint64_t n = amplitudes_.size();
    const Complex u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
    if (u01 == Complex{0} && u10 == Complex{0}) {
        for (std::uint64_t base = 0; base < n; base += 2 * m) {
            for (std::uint64_t i = base; i < base + m; i++) {
                amplitudes_[i] *= u00;
                amplitudes_[i | m] *= u11;
            }
        }
        return;
    }
    if (u00 == Complex{0} && u11 == Complex{0}) {
        for (std::uint64_t base = 0; base < n; base += 2 * m) {
            for (std::uint64_t i = base; i < base + m; i++) {
                Complex a0 = amplitudes_[i];
                amplitudes_[i] = u01 * amplitudes_[i | m];
                amplitudes_[i | m] = u10 * a0;
            }
        }
        return;
    }
    for (std::uint64_t base = 0; base < n; base += 2 * m) {
        for (std::uint64_t i = base; i < base + m; i++) {
            Complex a0 = amplitudes_[i];
            Complex a1 = amplitudes_[i | m];
            amplitudes_[i] = u00 * a0 + u01 * a1;
            amplitudes_[i | m] = u10 * a0 + u11 * a1;
        }
    }
}

void StateVector::apply(const Unitary4 &u, std::size_t q1, std::size_t q2) {
    check_qubit(q1);
    check_qubit(q2);
    if (q1 == q2) {
        throw std::invalid_argument("apply: two-qubit gate on a single qubit " + std::to_string(q1));
    }
    if (!u.is_unitary()) {
        throw std::invalid_argument("apply: matrix is not unitary");
    }
    const std::uint64_t m1 = mask(q1);
    const std::uint64_t m2 = mask(q2);
    for (std::uint64_t i = 0; i < amplitudes_.size(); i++) {
        if (i & (m1 | m2)) {
            continue;
        }
        const std::uint64_t idx[4] = {i, i | m2, i | m1, i | m1 | m2};
        Complex in[4];
        for (int k = 0; k < 4; k++) {
            in[k] = amplitudes_[idx[k]];
        }
        for (std::size_t r = 0; r < 4; r++) {
            Complex acc = 0;
            for (std::size_t c = 0; c < 4; c++) {
                acc += u(r, c) * in[c];
            }
            amplitudes_[idx[r]] = acc;
        }
    }
}

void StateVector::apply_cnot(std::size_t control, std::size_t target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) {
        throw std::invalid_argument("cnot: control equals target");
    }
    const std::uint64_t mc = mask(control);
    const std::uint64_t mt = mask(target);
    for (std::uint64_t i = 0; i < amplitudes_.size(); i++) {
        if ((i & mc) && !(i & mt)) {
            std::swap(amplitudes_[i], amplitudes_[i | mt]);
        }
    }
}

std::array<double, 4> StateVector::bell_probabilities(std::size_t q1, std::size_t q2) const {
    check_qubit(q1);
    check_qubit(q2);
    if (q1 == q2) {
        throw std::invalid_argument("bell measurement needs two distinct qubits");
    }
    const std::uint64_t m1 = mask(q1);
    const std::uint64_t m2 = mask(q2);
    std::array<double, 4> p{};
    for (std::uint64_t i = 0; i < amplitudes_.size(); i++) {
        if (i & (m1 | m2)) {
            continue;
        }
        Complex a00 = amplitudes_[i];
        Complex a01 = amplitudes_[i | m2];
        Complex a10 = amplitudes_[i | m1];
        Complex a11 = amplitudes_[i | m1 | m2];
        p[0] += std::norm(a00 + a11);
        p[1] += std::norm(a00 - a11);
        p[2] += std::norm(a01 + a10);
        p[3] += std::norm(a01 - a10);
    }
    for (auto &v : p) {
        v *= 0.5;
    }
    return p;
}

BellOutcome StateVector::measure_bell(std::size_t q1, std::size_t q2, OutcomeSource &outcomes) {
    auto probs = bell_probabilities(q1, q2);
    BellOutcome outcome = BellOutcome::from_index(outcomes.choose(probs));
    const double scale = 1.0 / std::sqrt(probs[outcome.index()]);
    const double sign = outcome.z ? -1.0 : 1.0;
    const std::uint64_t m1 = mask(q1);
    const std::uint64_t m2 = mask(q2);
    // |B_xz> has weight 1/√2 on |0 x> and (-1)^z/√2 on |1 x̄>.
    const std::uint64_t first = outcome.x ? m2 : 0;
    const std::uint64_t second = outcome.x ? m1 : (m1 | m2);
    for (std::uint64_t i = 0; i < amplitudes_.size(); i++) {
        if (i & (m1 | m2)) {
            continue;
        }
        Complex r = (amplitudes_[i | first] + sign * amplitudes_[i | second]) * (0.5 * scale);
        amplitudes_[i] = amplitudes_[i | m1] = amplitudes_[i | m2] = amplitudes_[i | m1 | m2] = 0;
        amplitudes_[i | first] = r;
        amplitudes_[i | second] = sign * r;
    }
    return outcome;
}

int StateVector::measure_z(std::size_t qubit, OutcomeSource &outcomes) {
    check_qubit(qubit);
    const std::uint64_t m = mask(qubit);
    std::array<double, 2> p{};
    for (std::uint64_t i = 0; i < amplitudes_.size(); i++) {
        p[(i & m) ? 1 : 0] += std::norm(amplitudes_[i]);
    }
    int bit = static_cast<int>(outcomes.choose(p));
    for (std::uint64_t i = 0; i < amplitudes_.size(); i++) {
        if (((i & m) != 0) != (bit == 1)) {
            amplitudes_[i] = 0;
        }
    }
    renormalize();
    return bit;
}

StateVector StateVector::tensor(const StateVector &other) const {
    StateVector out(num_qubits_ + other.num_qubits_);
    out.amplitudes_[0] = 0;
    for (std::size_t i = 0; i < amplitudes_.size(); i++) {
        for (std::size_t j = 0; j < other.amplitudes_.size(); j++) {
            if (other.amplitudes_[j] != Complex{0}) {
                out.amplitudes_[i * other.amplitudes_.size() + j] = amplitudes_[i] * other.amplitudes_[j];
            }
        }
    }
    return out;
}

StateVector StateVector::discard(std::span<const std::size_t> qubits, const StateVector &known) const {
    if (known.num_qubits() != qubits.size()) {
        throw std::invalid_argument("discard: known state size does not match qubit count");
    }
    std::vector<bool> removed(num_qubits_, false);
    for (auto q : qubits) {
        check_qubit(q);
        if (removed[q]) {
            throw std::invalid_argument("discard: duplicate qubit " + std::to_string(q));
        }
        removed[q] = true;
    }
    const std::size_t k = qubits.size();
    std::vector<std::uint64_t> offsets(std::size_t{1} << k, 0);
    for (std::size_t j = 0; j < offsets.size(); j++) {
        for (std::size_t b = 0; b < k; b++) {
            if (j & (std::size_t{1} << (k - 1 - b))) {
                offsets[j] |= mask(qubits[b]);
            }
        }
    }
    std::vector<std::uint64_t> remaining_masks;
    for (std::size_t q = 0; q < num_qubits_; q++) {
        if (!removed[q]) {
            remaining_masks.push_back(mask(q));
        }
    }
    StateVector out(num_qubits_ - k);
    const std::size_t r = remaining_masks.size();
    for (std::uint64_t idx = 0; idx < out.dimension(); idx++) {
        std::uint64_t base = 0;
        for (std::size_t b = 0; b < r; b++) {
            if (idx & (std::uint64_t{1} << (r - 1 - b))) {
                base |= remaining_masks[b];
            }
        }
        Complex acc = 0;
        for (std::size_t j = 0; j < offsets.size(); j++) {
            acc += std::conj(known.amplitudes_[j]) * amplitudes_[base | offsets[j]];
        }
        out.amplitudes_[idx] = acc;
    }
    double n = out.norm_squared();
    if (std::abs(n - 1) > 1e-9) {
        throw std::logic_error("discard: qubits are not in the given state (retained weight " + std::to_string(n) +
                               ")");
    }
    out.renormalize();
    return out;
}

StateVector StateVector::permuted(std::span<const std::size_t> order) const {
    if (order.size() != num_qubits_) {
        throw std::invalid_argument("permuted: order has wrong length");
    }
    std::vector<bool> seen(num_qubits_, false);
    for (auto q : order) {
        check_qubit(q);
        if (seen[q]) {
            throw std::invalid_argument("permuted: order is not a permutation");
        }
        seen[q] = true;
    }
    StateVector out(num_qubits_);
    for (std::uint64_t i = 0; i < amplitudes_.size(); i++) {
        std::uint64_t j = 0;
        for (std::size_t k = 0; k < num_qubits_; k++) {
            if (i & mask(order[k])) {
                j |= mask(k);
            }
        }
        out.amplitudes_[j] = amplitudes_[i];
    }
    return out;
}

Complex StateVector::inner(const StateVector &other) const {
    if (dimension() != other.dimension()) {
        throw std::invalid_argument("inner: dimension mismatch");
    }
    Complex acc = 0;
    for (std::size_t i = 0; i < amplitudes_.size(); i++) {
        acc += std::conj(amplitudes_[i]) * other.amplitudes_[i];
    }
    return acc;
}

StateVector basis_state(std::size_t num_qubits, std::uint64_t index) {
    return StateVector::basis(num_qubits, index);
}

StateVector bell_state(int x, int z) {
    if ((x != 0 && x != 1) || (z != 0 && z != 1)) {
        throw std::invalid_argument("bell_state: bits must be 0 or 1");
    }
    std::vector<Complex> a(4, 0);
    a[static_cast<std::size_t>(x)] = 1;
    a[static_cast<std::size_t>(2 + (1 - x))] = z ? -1 : 1;
    return StateVector::from_amplitudes(std::move(a));
}

StateVector chi_state() {
    StateVector s = bell_state(0, 0).tensor(bell_state(0, 0));
    s.apply_cnot(1, 2);
    return s;
}

StateVector plus_state() {
    return StateVector::from_amplitudes({1, 1});
}

StateVector minus_state() {
    return StateVector::from_amplitudes({1, -1});
}

PhaseComparison phase_equal(const StateVector &a, const StateVector &b) {
    if (a.dimension() != b.dimension()) {
        throw std::invalid_argument("phase_equal: dimension mismatch");
    }
    double overlap = std::abs(a.inner(b));
    return {overlap >= 1 - kProtocolTolerance, overlap};
}

StateVector random_state(std::size_t num_qubits, Rng &rng) {
    std::normal_distribution<double> gauss;
    std::vector<Complex> a(std::size_t{1} << num_qubits);
    for (auto &v : a) {
        double re = gauss(rng);
        double im = gauss(rng);
        v = {re, im};
    }
    return StateVector::from_amplitudes(std::move(a));
}

Unitary2 random_unitary2(Rng &rng) {
    StateVector col = random_state(1, rng);
    Complex phase = std::polar(1.0, 2 * std::numbers::pi * uniform01(rng));
    Unitary2 u;
    u(0, 0) = phase * col[0];
    u(1, 0) = phase * col[1];
    u(0, 1) = -phase * std::conj(col[1]);
    u(1, 1) = phase * std::conj(col[0]);
    return u;
}

StateVector orthogonal_complement(const StateVector &qubit) {
    if (qubit.num_qubits() != 1) {
        throw std::invalid_argument("orthogonal_complement: expected a single qubit");
    }
    return StateVector::from_amplitudes({-std::conj(qubit[1]), std::conj(qubit[0])});
}

}  // namespace smqc
