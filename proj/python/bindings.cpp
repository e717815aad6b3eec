// Copyright 2026 The staterent Authors
// SPDX-License-Identifier: Apache-2.0

#include <staterent/config.hpp>
#include <staterent/errors.hpp>
#include <staterent/metrics.hpp>
#include <staterent/rent.hpp>
#include <staterent/scenario.hpp>
#include <staterent/state_trie.hpp>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace staterent;

namespace
{
NodeKind parse_kind(const std::string& name)
{
    for (const auto k : {NodeKind::account, NodeKind::code, NodeKind::storage_cell})
        if (kind_name(k) == name)
            return k;
    throw py::value_error{"unknown node kind '" + name + "'"};
}

Bytes to_bytes(const py::bytes& b)
{
    const std::string_view s = b;
    return Bytes(s.begin(), s.end());
}

py::object leaf_tuple(const LeafNode* leaf)
{
    if (leaf == nullptr)
        return py::none();
    return py::make_tuple(
        py::bytes(reinterpret_cast<const char*>(leaf->value.data()), leaf->value.size()),
        leaf->rent_paid_ts, std::string{kind_name(leaf->kind)});
}
}  // namespace

PYBIND11_MODULE(_staterent, m)
{
    m.doc() = "Storage-rent simulator core";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<SnapshotError>(m, "SnapshotError", PyExc_ValueError);
    py::register_exception<StructureError>(m, "StructureError", PyExc_ValueError);

    py::class_<RentParams>(m, "RentParams")
        .def(py::init<>())
        .def_readwrite("rate_denominator_log2", &RentParams::rate_denominator_log2)
        .def_readwrite("storage_overhead_bytes", &RentParams::storage_overhead_bytes)
        .def_readwrite("read_threshold_gas", &RentParams::read_threshold_gas)
        .def_readwrite("write_threshold_gas", &RentParams::write_threshold_gas)
        .def_readwrite("cap_gas_per_node", &RentParams::cap_gas_per_node)
        .def_readwrite("missing_key_penalty_gas", &RentParams::missing_key_penalty_gas)
        .def_readwrite("accrual_horizon_seconds", &RentParams::accrual_horizon_seconds)
        .def_property(
            "revert_fraction", [](const RentParams& p) { return py::make_tuple(p.revert_fraction.num, p.revert_fraction.den); },
            [](RentParams& p, std::pair<std::uint64_t, std::uint64_t> f) {
                p.revert_fraction = {f.first, f.second};
            })
        .def("validate", &RentParams::validate);

    py::class_<RentComputation>(m, "RentComputation")
        .def_readonly("effective_size", &RentComputation::effective_size)
        .def_readonly("duration_charged", &RentComputation::duration_charged)
        .def_readonly("due", &RentComputation::due)
        .def_readonly("collected", &RentComputation::collected)
        .def_readonly("new_ts", &RentComputation::new_ts)
        .def_property_readonly("reason", [](const RentComputation& c) { return std::string{reason_name(c.reason)}; });

    m.def("one_year_rent", &one_year_rent, py::arg("value_len"), py::arg("params") = RentParams{});
    m.def("missing_key_penalty", &missing_key_penalty, py::arg("params") = RentParams{});
    m.def("rent_due", &rent_due, py::arg("effective_size"), py::arg("last_paid_ts"), py::arg("now"),
        py::arg("params") = RentParams{});
    m.def(
        "compute_rent",
        [](std::uint64_t size, Timestamp last, Timestamp now, bool write, const RentParams& p) {
            return compute_rent(size, last, now, write ? AccessStrength::write : AccessStrength::read, p);
        },
        py::arg("effective_size"), py::arg("last_paid_ts"), py::arg("now"), py::arg("write"),
        py::arg("params") = RentParams{});

    py::class_<StateTrie>(m, "StateTrie")
        .def(py::init<>())
        .def(
            "put",
            [](StateTrie& t, std::string key, const py::bytes& value, Timestamp ts, const std::string& kind) {
                t.put(Key::from_logical(std::move(key)), to_bytes(value), ts, parse_kind(kind));
            },
            py::arg("key"), py::arg("value"), py::arg("rent_paid_ts"), py::arg("kind") = "storage_cell")
        .def("get", [](const StateTrie& t, std::string key) { return leaf_tuple(t.get(Key::from_logical(std::move(key)))); })
        .def("erase", [](StateTrie& t, std::string key) { return t.erase(Key::from_logical(std::move(key))); })
        .def("erase_prefix", &StateTrie::erase_prefix)
        .def("root_hash", [](const StateTrie& t) { return to_hex(t.root_hash()); })
        .def("check_invariants", &StateTrie::check_invariants)
        .def("to_snapshot", [](const StateTrie& t) {
            std::ostringstream out;
            write_snapshot(t, Hash256{}, out);
            return out.str();
        })
        .def_static("from_snapshot", [](const std::string& text) {
            std::istringstream in{text};
            return std::move(read_snapshot(in).trie);
        })
        .def("__len__", &StateTrie::size);

    m.def(
        "run_scenario_json",
        [](const std::string& yaml_text) {
            const auto config = parse_config(yaml_text);
            ScenarioResult result;
            {
                py::gil_scoped_release release;
                result = run_scenario(config);
            }
            return to_json(result.metrics);
        },
        py::arg("yaml_text"), "Runs a scenario given as YAML text and returns the JSON metrics document.");
}
