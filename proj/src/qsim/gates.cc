#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "smqc/qsim.h"

namespace smqc {

Unitary4 kron(const Unitary2 &a, const Unitary2 &b) {
    Unitary4 m;
    for (std::size_t r = 0; r < 4; r++) {
        for (std::size_t c = 0; c < 4; c++) {
            m(r, c) = a(r >> 1, c >> 1) * b(r & 1, c & 1);
        }
    }
    return m;
}

Unitary2 power(const Unitary2 &a, int k) {
    return k & 1 ? a : Unitary2::identity();
}

namespace gates {
namespace {

Unitary2 make2(Complex a, Complex b, Complex c, Complex d) {
    Unitary2 u;
    u.entries = {a, b, c, d};
    return u;
}

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

}  // namespace

const Unitary2 &I() {
    static const Unitary2 u = Unitary2::identity();
    return u;
}
const Unitary2 &X() {
    static const Unitary2 u = make2(0, 1, 1, 0);
    return u;
}
const Unitary2 &Y() {
    static const Unitary2 u = make2(0, Complex(0, -1), Complex(0, 1), 0);
    return u;
}
const Unitary2 &Z() {
    static const Unitary2 u = make2(1, 0, 0, -1);
    return u;
}
const Unitary2 &H() {
    static const Unitary2 u = make2(kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2);
    return u;
}
const Unitary2 &S() {
    static const Unitary2 u = make2(1, 0, 0, Complex(0, 1));
    return u;
}
const Unitary2 &S_DAG() {
    static const Unitary2 u = make2(1, 0, 0, Complex(0, -1));
    return u;
}
const Unitary2 &T() {
    static const Unitary2 u = make2(1, 0, 0, std::polar(1.0, std::numbers::pi / 4));
    return u;
}
const Unitary2 &T_DAG() {
    static const Unitary2 u = make2(1, 0, 0, std::polar(1.0, -std::numbers::pi / 4));
    return u;
}
const Unitary4 &CNOT() {
    static const Unitary4 u = [] {
        Unitary4 m;
        m(0, 0) = 1;
        m(1, 1) = 1;
        m(2, 3) = 1;
        m(3, 2) = 1;
        return m;
    }();
    return u;
}

Unitary2 by_name(std::string_view name) {
    std::string key(name);
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
    if (key == "i") return I();
    if (key == "x") return X();
    if (key == "y") return Y();
    if (key == "z") return Z();
    if (key == "h") return H();
    if (key == "s") return S();
    if (key == "sdg") return S_DAG();
    if (key == "t") return T();
    if (key == "tdg") return T_DAG();
    throw std::invalid_argument("unknown gate '" + std::string(name) + "'");
}

}  // namespace gates
}  // namespace smqc
