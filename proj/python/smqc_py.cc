#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "smqc/adversary.h"
#include "smqc/cli.h"
#include "smqc/commitment.h"
#include "smqc/protocol.h"
#include "smqc/verify.h"

namespace py = pybind11;
using namespace smqc;

namespace {

using CArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

StateVector to_state(const CArray &a) {
    if (a.ndim() != 1) {
        throw std::invalid_argument("state must be a 1-d array of amplitudes");
    }
    return StateVector::from_amplitudes(std::vector<Complex>(a.data(), a.data() + a.size()));
}

CArray from_state(const StateVector &s) {
    return CArray(static_cast<py::ssize_t>(s.dimension()), s.amplitudes().data());
}

Unitary2 to_unitary(const py::object &o) {
    if (py::isinstance<py::str>(o)) {
        return gates::by_name(o.cast<std::string>());
    }
    auto a = o.cast<CArray>();
    if (a.ndim() != 2 || a.shape(0) != 2 || a.shape(1) != 2) {
        throw std::invalid_argument("expected a gate name or a 2x2 matrix");
    }
    Unitary2 u;
    std::copy(a.data(), a.data() + 4, u.entries.begin());
    return u;
}

CArray from_unitary(const Unitary2 &u) {
    CArray out({2, 2});
    std::copy(u.entries.begin(), u.entries.end(), out.mutable_data());
    return out;
}

Side to_side(const std::string &s) {
    if (s == "alice") {
        return Side::kAlice;
    }
    if (s == "bob") {
        return Side::kBob;
    }
    throw std::invalid_argument("side must be 'alice' or 'bob'");
}

std::map<PartyId, AdversaryStrategy> to_strategies(const std::map<int, std::string> &spec, std::size_t parties) {
    std::vector<std::string> items;
    for (const auto &[p, s] : spec) {
        items.push_back(std::to_string(p) + "=" + s);
    }
    return cli::parse_strategies(items, parties);
}

py::dict report_dict(const AttackReport &r) {
    py::dict d;
    d["strategy"] = r.strategy;
    d["params"] = r.params;
    d["branches_checked"] = r.branches_checked;
    d["max_deviation"] = r.max_deviation;
    d["verdict"] = r.verdict;
    return d;
}

py::list measurement_list(const std::vector<MeasurementRecord> &ms) {
    py::list out;
    for (const auto &m : ms) {
        out.append(py::make_tuple(m.party.value, m.qubit, m.bit));
    }
    return out;
}

py::list run_circuit(const Circuit &circuit, const std::map<int, CArray> &inputs, const std::string &backend,
                     const std::map<int, std::string> &strategies, std::optional<std::uint64_t> seed) {
    std::map<PartyId, StateVector> in;
    for (const auto &[p, a] : inputs) {
        in.emplace(PartyId{static_cast<std::uint16_t>(p)}, to_state(a));
    }
    SmqcOptions options;
    if (backend == "ttp") {
        options.backend = Backend::kTtp;
    } else if (backend != "peer") {
        throw std::invalid_argument("backend must be 'peer' or 'ttp'");
    }
    options.strategies = to_strategies(strategies, circuit.ownership.party_count());
    options.seed = seed.value_or(0);
    const Schedule schedule = build_schedule(circuit);
    const StateVector input = assemble_input(circuit.ownership, in);

    py::list out;
    auto add = [&](double probability, const SmqcResult &r) {
        py::dict d;
        d["probability"] = probability;
        d["output"] = from_state(r.output);
        d["measurements"] = measurement_list(r.measurements);
        d["transcript"] = r.transcript.to_json();
        out.append(d);
    };
    if (seed) {
        auto src = OutcomeSource::sampled(*seed);
        SmqcResult r = run_smqc(schedule, circuit.ownership, input, src, options);
        add(src.branch_probability(), r);
    } else {
        for (const auto &b : run_smqc_exhaustive(schedule, circuit.ownership, input, options)) {
            add(b.probability, b.result);
        }
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_smqc, m) {
    m.doc() = "Simulator for two-party and multiparty CNOT protocols";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<InvalidCircuit>(m, "InvalidCircuit", PyExc_ValueError);
    py::register_exception<SwapError>(m, "SwapError", PyExc_RuntimeError);

    // States and gates.
    m.def("gate", [](const std::string &name) { return from_unitary(gates::by_name(name)); }, py::arg("name"));
    m.def("basis_state", [](std::size_t n, std::uint64_t i) { return from_state(basis_state(n, i)); },
          py::arg("num_qubits"), py::arg("index"));
    m.def("bell_state", [](int x, int z) { return from_state(bell_state(x, z)); }, py::arg("x"), py::arg("z"));
    m.def("chi_state", [] { return from_state(chi_state()); });
    m.def("parse_state", [](const std::string &text) { return from_state(cli::parse_state(text)); },
          py::arg("text"), "Kets like '|0+>' or amplitude lists like '[0.6, 0.8i]'.");
    m.def("is_clifford", [](const py::object &u) { return is_clifford(to_unitary(u)); }, py::arg("u"));

    // Circuits.
    py::class_<Circuit>(m, "Circuit")
        .def_static("parse", &parse_circuit, py::arg("text"))
        .def_static("load",
                    [](const std::string &path) {
                        std::ifstream in(path);
                        if (!in) {
                            throw std::invalid_argument("cannot read " + path);
                        }
                        std::stringstream ss;
                        ss << in.rdbuf();
                        return parse_circuit(ss.str());
                    },
                    py::arg("path"))
        .def_property_readonly("num_qubits", [](const Circuit &c) { return c.ownership.num_qubits(); })
        .def_property_readonly("party_count", [](const Circuit &c) { return c.ownership.party_count(); })
        .def("owner", [](const Circuit &c, std::size_t q) { return c.ownership.owner(q).value; }, py::arg("qubit"))
        .def("nl_cnot_count", [](const Circuit &c) { return build_schedule(c).nl_cnot_count(); })
        .def("schedule", [](const Circuit &c) { return describe_schedule(build_schedule(c)); })
        .def("rejections",
             [](const Circuit &c) {
                 std::vector<std::string> out;
                 for (const auto &r : validate(c)) {
                     out.push_back(r.message);
                 }
                 return out;
             })
        .def("__str__", &format_circuit);

    m.def("run", &run_circuit, py::arg("circuit"), py::arg("inputs") = std::map<int, CArray>{},
          py::arg("backend") = "peer", py::arg("strategies") = std::map<int, std::string>{},
          py::arg("seed") = std::nullopt,
          "Runs the circuit through the protocol. Without a seed every measurement branch is\n"
          "returned; with one, a single sampled run. Each entry has probability, output\n"
          "(amplitudes in circuit qubit order), measurements and transcript (JSON).");

    m.def(
        "nl_cnot",
        [](const CArray &control, const CArray &target) {
            py::list out;
            for (const auto &r : run_two_party(to_state(control), to_state(target), {}, {})) {
                py::dict d;
                d["probability"] = r.probability;
                d["output"] = from_state(r.output);
                d["alice"] = py::make_tuple(r.record.alice.x, r.record.alice.z);
                d["bob"] = py::make_tuple(r.record.bob.x, r.record.bob.z);
                out.append(d);
            }
            return out;
        },
        py::arg("control"), py::arg("target"), "Every branch of one honest NL-CNOT on control (x) target.");

    // Attacks.
    m.def(
        "rotated_basis_attack",
        [](const py::object &u, const CArray &c, const CArray &t, const std::string &side) {
            return report_dict(run_rotated_basis_attack(to_unitary(u), to_state(c), to_state(t), to_side(side)).report);
        },
        py::arg("u"), py::arg("control"), py::arg("target"), py::arg("side") = "alice");
    m.def(
        "bit_flip_attack",
        [](const CArray &c, const CArray &t, const std::string &side) {
            return report_dict(run_bit_flip_attack(to_state(c), to_state(t), to_side(side)).report);
        },
        py::arg("control"), py::arg("target"), py::arg("side") = "alice");
    m.def(
        "chi_corruption",
        [](const py::object &cliff, int ancilla, const CArray &c, const CArray &t) {
            if (ancilla != 2 && ancilla != 3) {
                throw std::invalid_argument("ancilla must be 2 or 3");
            }
            return report_dict(
                run_chi_corruption(to_unitary(cliff), static_cast<ChiAncilla>(ancilla), to_state(c), to_state(t))
                    .report);
        },
        py::arg("c"), py::arg("ancilla"), py::arg("control"), py::arg("target"));
    m.def(
        "prop1_distance",
        [](const CArray &phi, const CArray &phi_prime, const CArray &target) {
            return prop1_check(to_state(phi), to_state(phi_prime), to_state(target)).trace_distance;
        },
        py::arg("phi"), py::arg("phi_prime"), py::arg("target"),
        "Trace distance between the target's reduced states after CNOT(phi, target) and CNOT(phi', target).");
    m.def(
        "recover_u1",
        [](const CArray &phi, const CArray &phi_prime, int sign) {
            U1Result r = recover_u1(to_state(phi), to_state(phi_prime), sign);
            return py::make_tuple(from_unitary(r.u1), r.overlap);
        },
        py::arg("phi"), py::arg("phi_prime"), py::arg("sign") = 1);

    // Commitments and pads.
    m.def(
        "commit",
        [](int bit, const py::bytes &nonce) {
            std::string n = nonce;
            if (n.size() != 16) {
                throw std::invalid_argument("nonce must be 16 bytes");
            }
            Nonce arr;
            std::copy(n.begin(), n.end(), arr.begin());
            auto d = commit(bit, arr).digest;
            return py::bytes(reinterpret_cast<const char *>(d.data()), d.size());
        },
        py::arg("bit"), py::arg("nonce"), "SHA-256 over the bit byte followed by the nonce.");
    m.def(
        "cnot_key_update",
        [](std::array<int, 2> control, std::array<int, 2> target) {
            KeyPair k = cnot_key_update({{control[0], control[1]}, {target[0], target[1]}});
            return py::make_tuple(py::make_tuple(k.control.x, k.control.z), py::make_tuple(k.target.x, k.target.z));
        },
        py::arg("control"), py::arg("target"), "Pads (x, z) after a CNOT on padded qubits.");

    m.def(
        "verify",
        [](std::uint64_t seed, bool disable_corrections) {
            return run_verify({seed, disable_corrections}).to_json();
        },
        py::arg("seed") = 0, py::arg("disable_corrections") = false, "Property suites; returns the JSON report.");
}
