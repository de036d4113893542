#pragma once

// Reference computations for the tests. Everything here works on dense 2^n x 2^n
// matrices built from Kronecker products of literal 2x2 matrices, so it shares no
// code path with the simulator it checks.

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "smqc/circuit.h"
#include "smqc/qsim.h"

namespace oracle {

using C = std::complex<double>;
using Vec = std::vector<C>;

struct Dense {
    std::size_t dim = 0;
    std::vector<C> a;  // row major

    C &at(std::size_t r, std::size_t c) {
        return a[r * dim + c];
    }
    C at(std::size_t r, std::size_t c) const {
        return a[r * dim + c];
    }
};

inline Dense identity(std::size_t dim) {
    Dense m{dim, std::vector<C>(dim * dim)};
    for (std::size_t k = 0; k < dim; k++) {
        m.at(k, k) = 1;
    }
    return m;
}

inline Dense mat2(C a, C b, C c, C d) {
    return Dense{2, {a, b, c, d}};
}

inline const double kS = 1 / std::sqrt(2.0);

inline Dense I2() {
    return mat2(1, 0, 0, 1);
}
inline Dense X2() {
    return mat2(0, 1, 1, 0);
}
inline Dense Y2() {
    return mat2(0, C(0, -1), C(0, 1), 0);
}
inline Dense Z2() {
    return mat2(1, 0, 0, -1);
}
inline Dense H2() {
    return mat2(kS, kS, kS, -kS);
}

inline Dense from(const smqc::Unitary2 &u) {
    return mat2(u(0, 0), u(0, 1), u(1, 0), u(1, 1));
}

inline Dense kron(const Dense &x, const Dense &y) {
    Dense m{x.dim * y.dim, std::vector<C>(x.dim * y.dim * x.dim * y.dim)};
    for (std::size_t r1 = 0; r1 < x.dim; r1++) {
        for (std::size_t c1 = 0; c1 < x.dim; c1++) {
            for (std::size_t r2 = 0; r2 < y.dim; r2++) {
                for (std::size_t c2 = 0; c2 < y.dim; c2++) {
                    m.at(r1 * y.dim + r2, c1 * y.dim + c2) = x.at(r1, c1) * y.at(r2, c2);
                }
            }
        }
    }
    return m;
}

inline Dense mul(const Dense &x, const Dense &y) {
    Dense m{x.dim, std::vector<C>(x.dim * x.dim)};
    for (std::size_t r = 0; r < x.dim; r++) {
        for (std::size_t k = 0; k < x.dim; k++) {
            for (std::size_t c = 0; c < x.dim; c++) {
                m.at(r, c) += x.at(r, k) * y.at(k, c);
            }
        }
    }
    return m;
}

inline Vec act(const Dense &m, const Vec &v) {
    Vec out(m.dim);
    for (std::size_t r = 0; r < m.dim; r++) {
        for (std::size_t c = 0; c < m.dim; c++) {
            out[r] += m.at(r, c) * v[c];
        }
    }
    return out;
}

/// I x ... x u x ... x I with u on qubit q of n (qubit 0 leftmost).
inline Dense on_qubit(const Dense &u, std::size_t q, std::size_t n) {
    Dense m = q == 0 ? u : I2();
    for (std::size_t k = 1; k < n; k++) {
        m = kron(m, k == q ? u : I2());
    }
    return m;
}

/// Permutation matrix sending |..c..t..> to |..c..(t xor c)..>.
inline Dense cnot(std::size_t c, std::size_t t, std::size_t n) {
    const std::size_t dim = std::size_t{1} << n;
    const std::size_t mc = dim >> (c + 1), mt = dim >> (t + 1);
    Dense m{dim, std::vector<C>(dim * dim)};
    for (std::size_t i = 0; i < dim; i++) {
        m.at((i & mc) ? i ^ mt : i, i) = 1;
    }
    return m;
}

inline Vec vec(const smqc::StateVector &s) {
    return Vec(s.amplitudes().begin(), s.amplitudes().end());
}

inline Vec kron(const Vec &x, const Vec &y) {
    Vec out;
    for (auto a : x) {
        for (auto b : y) {
            out.push_back(a * b);
        }
    }
    return out;
}

/// |<a|b>| / (|a| |b|).
inline double overlap(const Vec &x, const Vec &y) {
    C ip = 0;
    double nx = 0, ny = 0;
    for (std::size_t k = 0; k < x.size(); k++) {
        ip += std::conj(x[k]) * y[k];
        nx += std::norm(x[k]);
        ny += std::norm(y[k]);
    }
    return std::abs(ip) / std::sqrt(nx * ny);
}

inline double overlap(const smqc::StateVector &x, const Vec &y) {
    return overlap(vec(x), y);
}

/// CNOT(a (x) b) for single-qubit a, b.
inline Vec cnot_of(const Vec &a, const Vec &b) {
    return act(cnot(0, 1, 2), kron(a, b));
}

/// (|0x> + (-1)^z |1 (1-x)>) / sqrt 2.
inline Vec bell(int x, int z) {
    Vec v(4);
    v[x] = kS;
    v[2 + (1 - x)] = (z ? -1.0 : 1.0) * kS;
    return v;
}

/// Output of a measurement-free circuit, one dense matrix-vector product per gate.
inline Vec circuit_output(const smqc::Circuit &circuit, Vec v) {
    const std::size_t n = circuit.ownership.num_qubits();
    for (const auto &op : circuit.ops) {
        if (const auto *g = std::get_if<smqc::SingleQubitGate>(&op.gate)) {
            v = act(on_qubit(from(g->matrix), g->qubit, n), v);
        } else if (const auto *c = std::get_if<smqc::CnotGate>(&op.gate)) {
            v = act(cnot(c->control, c->target, n), v);
        }
    }
    return v;
}

/// Reduced 2x2 state of qubit `keep` of a two-qubit vector, by explicit summation.
inline Dense reduced(const Vec &v, std::size_t keep) {
    Dense rho{2, std::vector<C>(4)};
    for (std::size_t i = 0; i < 2; i++) {
        for (std::size_t j = 0; j < 2; j++) {
            for (std::size_t o = 0; o < 2; o++) {
                std::size_t a = keep == 0 ? (i << 1 | o) : (o << 1 | i);
                std::size_t b = keep == 0 ? (j << 1 | o) : (o << 1 | j);
                rho.at(i, j) += v[a] * std::conj(v[b]);
            }
        }
    }
    return rho;
}

/// Trace distance of two single-qubit density matrices: for the traceless Hermitian
/// difference [[a, b], [b*, -a]] the eigenvalues are +-sqrt(a^2 + |b|^2).
inline double trace_distance2(const Dense &r, const Dense &s) {
    C a = r.at(0, 0) - s.at(0, 0);
    C b = r.at(0, 1) - s.at(0, 1);
    return std::sqrt(std::norm(a) + std::norm(b));
}

/// Largest entrywise |x - phase * y| after fitting the phase.
inline double phase_diff(const Dense &x, const Dense &y) {
    C ip = 0;
    for (std::size_t k = 0; k < x.a.size(); k++) {
        ip += std::conj(y.a[k]) * x.a[k];
    }
    C phase = std::abs(ip) > 0 ? ip / std::abs(ip) : C(1);
    double d = 0;
    for (std::size_t k = 0; k < x.a.size(); k++) {
        d = std::max(d, std::abs(x.a[k] - phase * y.a[k]));
    }
    return d;
}

}  // namespace oracle
