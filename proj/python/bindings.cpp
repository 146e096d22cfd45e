// Copyright 2026 The klpref Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "klpref/instances.hpp"
#include "klpref/invariants.hpp"
#include "klpref/io.hpp"
#include "klpref/model.hpp"
#include "klpref/offline.hpp"
#include "klpref/online.hpp"

namespace py = pybind11;
using namespace klpref;

namespace {

Grid grid_from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw std::invalid_argument("expected at least one row");
  const size_t actions = rows.front().size();
  Grid g(rows.size(), actions);
  for (size_t s = 0; s < rows.size(); ++s) {
    if (rows[s].size() != actions) throw std::invalid_argument("ragged rows");
    for (size_t a = 0; a < actions; ++a) g(s, a) = rows[s][a];
  }
  return g;
}

std::vector<std::vector<double>> grid_to_rows(const Grid& g) {
  std::vector<std::vector<double>> rows(g.states(), std::vector<double>(g.actions()));
  for (size_t s = 0; s < g.states(); ++s) {
    for (size_t a = 0; a < g.actions(); ++a) rows[s][a] = g(s, a);
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(klpref, m) {
  m.doc() = "Tabular KL-regularized preference learning under local label privacy";

  py::class_<RngStream>(m, "RngStream")
      .def(py::init<uint64_t>(), py::arg("seed"))
      .def("split", &RngStream::split, py::arg("child_id"))
      .def("next_u64", &RngStream::next_u64)
      .def("next_double", &RngStream::next_double)
      .def("bernoulli", &RngStream::bernoulli, py::arg("p"));

  py::class_<RewardTable>(m, "RewardTable")
      .def(py::init([](const std::vector<std::vector<double>>& rows, double bound) {
             return RewardTable(grid_from_rows(rows), bound);
           }),
           py::arg("rows"), py::arg("bound"))
      .def_property_readonly("rows",
                             [](const RewardTable& r) { return grid_to_rows(r.values); })
      .def_readonly("bound", &RewardTable::bound)
      .def("__call__", [](const RewardTable& r, size_t s, size_t a) { return r(s, a); });

  py::class_<PolicyTable>(m, "PolicyTable")
      .def(py::init([](const std::vector<std::vector<double>>& rows) {
             return PolicyTable(grid_from_rows(rows));
           }),
           py::arg("rows"))
      .def_property_readonly("rows",
                             [](const PolicyTable& p) { return grid_to_rows(p.probs); })
      .def("__call__", [](const PolicyTable& p, size_t s, size_t a) { return p(s, a); });

  py::class_<StateDistribution>(m, "StateDistribution")
      .def(py::init<std::vector<double>>(), py::arg("probs"))
      .def_static("uniform", &StateDistribution::uniform, py::arg("states"))
      .def_readonly("probs", &StateDistribution::probs);

  py::class_<FunctionClass>(m, "FunctionClass")
      .def(py::init<std::vector<RewardTable>>(), py::arg("members"))
      .def("__len__", &FunctionClass::size)
      .def("__getitem__",
           [](const FunctionClass& f, size_t i) {
             if (i >= f.size()) throw py::index_error();
             return f[i];
           })
      .def("index_of", &FunctionClass::index_of, py::arg("table"));

  py::class_<Instance>(m, "Instance")
      .def(py::init<StateDistribution, PolicyTable, RewardTable, FunctionClass, double>(),
           py::arg("d0"), py::arg("pi_ref"), py::arg("r_star"), py::arg("fclass"),
           py::arg("beta"))
      .def_readonly("d0", &Instance::d0)
      .def_readonly("pi_ref", &Instance::pi_ref)
      .def_readonly("r_star", &Instance::r_star)
      .def_readonly("fclass", &Instance::fclass)
      .def_readonly("beta", &Instance::beta)
      .def_property_readonly("states", &Instance::states)
      .def_property_readonly("actions", &Instance::actions)
      .def_property_readonly("bound", &Instance::bound)
      .def("realizable", &Instance::realizable);

  py::class_<PrivacyParams>(m, "PrivacyParams")
      .def(py::init<double>(), py::arg("epsilon"))
      .def_static("non_private", &PrivacyParams::non_private)
      .def_property_readonly("epsilon", &PrivacyParams::epsilon)
      .def_property_readonly("alpha", &PrivacyParams::alpha)
      .def_property_readonly("flip_prob", &PrivacyParams::flip_prob)
      .def("is_infinite", &PrivacyParams::is_infinite);

  py::class_<PrivateSample>(m, "PrivateSample")
      .def(py::init<>())
      .def_readwrite("s", &PrivateSample::s)
      .def_readwrite("a1", &PrivateSample::a1)
      .def_readwrite("a2", &PrivateSample::a2)
      .def_readwrite("z", &PrivateSample::z);

  m.def("sigmoid", &sigmoid, py::arg("x"));
  m.def("bt_preference_prob", &bt_preference_prob, py::arg("r"), py::arg("s"), py::arg("a1"),
        py::arg("a2"));
  m.def("sample_preference", &sample_preference, py::arg("rng"), py::arg("r"), py::arg("s"),
        py::arg("a1"), py::arg("a2"));
  m.def("rr_keep_prob", &rr_keep_prob, py::arg("epsilon"));
  m.def("privatize_label", &privatize_label, py::arg("rng"), py::arg("y"), py::arg("pp"));
  m.def("private_label_prob", &private_label_prob, py::arg("r"), py::arg("z"), py::arg("s"),
        py::arg("a1"), py::arg("a2"), py::arg("alpha"));
  m.def("debiased_mean", &debiased_mean, py::arg("alpha"), py::arg("delta_r"));
  m.def(
      "gibbs_policy",
      [](const RewardTable& r, const PolicyTable& ref, double beta) {
        return gibbs_policy(r, ref, beta);
      },
      py::arg("r"), py::arg("pi_ref"), py::arg("beta"));
  m.def("objective_value", &objective_value, py::arg("pi"), py::arg("instance"));
  m.def("suboptimality", &suboptimality, py::arg("pi"), py::arg("instance"));
  m.def("expected_kl", &expected_kl, py::arg("pi"), py::arg("ref"), py::arg("d0"));

  py::class_<HardInstanceSpec>(m, "HardInstanceSpec")
      .def(py::init<>())
      .def_readwrite("states", &HardInstanceSpec::states)
      .def_readwrite("skew", &HardInstanceSpec::skew)
      .def_readwrite("gap", &HardInstanceSpec::gap)
      .def_readwrite("beta", &HardInstanceSpec::beta)
      .def_readwrite("bound", &HardInstanceSpec::bound)
      .def_readwrite("signs", &HardInstanceSpec::signs)
      .def_readwrite("max_enumerated_states", &HardInstanceSpec::max_enumerated_states)
      .def_readwrite("extra_class_size", &HardInstanceSpec::extra_class_size)
      .def_readwrite("class_seed", &HardInstanceSpec::class_seed);

  m.def("hard_instance", &hard_instance, py::arg("spec"));
  m.def("hard_instance_bias", &hard_instance_bias, py::arg("spec"));
  m.def("theory_gap", &theory_gap, py::arg("states"), py::arg("skew"), py::arg("epsilon"),
        py::arg("n"));
  m.def("concentrability", &concentrability, py::arg("pi"), py::arg("pi_ref"));
  m.def("single_policy_d_sq", &single_policy_d_sq, py::arg("instance"));
  m.def("offline_dataset_gen", &offline_dataset_gen, py::arg("instance"), py::arg("n"),
        py::arg("pp"), py::arg("rng"));
  m.def("random_instance", &random_instance, py::arg("states"), py::arg("actions"),
        py::arg("class_size"), py::arg("bound"), py::arg("beta"), py::arg("rng"));

  py::module_ off = m.def_submodule("offline", "pessimistic offline fitting");
  py::enum_<offline::BonusMode>(off, "BonusMode")
      .value("theory", offline::BonusMode::kTheory)
      .value("calibrated", offline::BonusMode::kCalibrated);
  py::class_<offline::Params>(off, "Params")
      .def(py::init<>())
      .def_readwrite("delta", &offline::Params::delta)
      .def_readwrite("c_bonus", &offline::Params::c_bonus)
      .def_readwrite("tau", &offline::Params::tau)
      .def_readwrite("bonus_mode", &offline::Params::bonus_mode)
      .def_readwrite("bonus_cap", &offline::Params::bonus_cap)
      .def_readwrite("calib_replays", &offline::Params::calib_replays)
      .def_readwrite("calib_seed", &offline::Params::calib_seed)
      .def_readwrite("bonus_multiplier", &offline::Params::bonus_multiplier);
  py::class_<offline::Fit>(off, "Fit")
      .def_readonly("r_bar", &offline::Fit::r_bar)
      .def_property_readonly("gamma",
                             [](const offline::Fit& f) { return grid_to_rows(f.gamma); })
      .def_property_readonly("r_hat",
                             [](const offline::Fit& f) { return grid_to_rows(f.r_hat); })
      .def_readonly("pi_hat", &offline::Fit::pi_hat)
      .def_readonly("mle_index", &offline::Fit::mle_index)
      .def_readonly("log_liks", &offline::Fit::log_liks)
      .def_property_readonly("d_sq",
                             [](const offline::Fit& f) { return grid_to_rows(f.d_sq); })
      .def_readonly("d_pi_star_sq", &offline::Fit::d_pi_star_sq)
      .def_readonly("bonus_multiplier", &offline::Fit::bonus_multiplier);
  off.def(
      "private_mle",
      [](const FunctionClass& fclass, const std::vector<PrivateSample>& data, double alpha) {
        return offline::private_mle(fclass, data, alpha);
      },
      py::arg("fclass"), py::arg("data"), py::arg("alpha"));
  off.def("d_divergence_sq", &offline::d_divergence_sq, py::arg("fclass"), py::arg("s"),
          py::arg("a"), py::arg("pi"), py::arg("d0"));
  off.def("pessimism_bonus", &offline::pessimism_bonus, py::arg("d_sq"), py::arg("alpha"),
          py::arg("n"), py::arg("n_class"), py::arg("delta"), py::arg("c_bonus"), py::arg("tau"),
          py::arg("bound"), py::arg("cap") = -1.0);
  off.def("calibrate_bonus_multiplier", &offline::calibrate_bonus_multiplier,
          py::arg("instance"), py::arg("n"), py::arg("pp"), py::arg("params"));
  off.def(
      "fit",
      [](const Instance& inst, const std::vector<PrivateSample>& data, const PrivacyParams& pp,
         const offline::Params& params) { return offline::fit(inst, data, pp, params); },
      py::arg("instance"), py::arg("data"), py::arg("pp"), py::arg("params") = offline::Params());

  py::module_ on = m.def_submodule("online", "optimistic online loop");
  py::class_<online::Params>(on, "Params")
      .def(py::init<>())
      .def_readwrite("horizon", &online::Params::horizon)
      .def_readwrite("delta", &online::Params::delta)
      .def_readwrite("lambda_", &online::Params::lambda)
      .def_readwrite("gamma_scale", &online::Params::gamma_scale)
      .def_readwrite("restrict_to_confidence_set", &online::Params::restrict_to_confidence_set);
  py::class_<online::StepRecord>(on, "StepRecord")
      .def_readonly("t", &online::StepRecord::t)
      .def_readonly("s", &online::StepRecord::s)
      .def_readonly("a1", &online::StepRecord::a1)
      .def_readonly("a2", &online::StepRecord::a2)
      .def_readonly("z", &online::StepRecord::z)
      .def_readonly("rbar_index", &online::StepRecord::rbar_index)
      .def_readonly("fset_size", &online::StepRecord::fset_size)
      .def_readonly("regret_pi2", &online::StepRecord::regret_pi2)
      .def_readonly("regret_pi1", &online::StepRecord::regret_pi1)
      .def_readonly("u_played", &online::StepRecord::u_played)
      .def_readonly("cum_min1_u2", &online::StepRecord::cum_min1_u2)
      .def_readonly("bonus_max", &online::StepRecord::bonus_max)
      .def_readonly("bonus_mean", &online::StepRecord::bonus_mean)
      .def_readonly("insample_sq_true", &online::StepRecord::insample_sq_true)
      .def_readonly("optimism_ok", &online::StepRecord::optimism_ok);
  py::class_<online::RunTrace>(on, "RunTrace")
      .def_readonly("stream_key", &online::RunTrace::stream_key)
      .def_readonly("epsilon", &online::RunTrace::epsilon)
      .def_readonly("gamma_t", &online::RunTrace::gamma_t)
      .def_readonly("lambda_", &online::RunTrace::lambda)
      .def_readonly("steps", &online::RunTrace::steps)
      .def("cum_regret_pi2", &online::RunTrace::cum_regret_pi2, py::arg("upto"));
  on.def("confidence_radius", &online::confidence_radius, py::arg("bound"), py::arg("horizon"),
         py::arg("n_class"), py::arg("delta"), py::arg("alpha"), py::arg("gamma_scale") = 1.0);
  on.def(
      "private_least_squares",
      [](const FunctionClass& fclass, const std::vector<PrivateSample>& data, double alpha) {
        return online::private_least_squares(fclass, data, alpha);
      },
      py::arg("fclass"), py::arg("data"), py::arg("alpha"));
  on.def("exploration_bonus", &online::exploration_bonus, py::arg("gamma_t"), py::arg("u"));
  on.def(
      "run",
      [](const Instance& inst, const PrivacyParams& pp, const online::Params& params,
         uint64_t seed) { return online::run(inst, pp, params, RngStream(seed)); },
      py::arg("instance"), py::arg("pp"), py::arg("params"), py::arg("seed"));

  py::module_ io_mod = m.def_submodule("io", "text serialization");
  io_mod.def("write_instance_file",
             [](const std::string& path, const Instance& inst) {
               io::write_instance_file(path, inst);
             },
             py::arg("path"), py::arg("instance"));
  io_mod.def("read_instance_file", &io::read_instance_file, py::arg("path"));
}
