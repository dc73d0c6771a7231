#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "flspec/aggregation.hpp"
#include "flspec/attacks.hpp"
#include "flspec/cost.hpp"
#include "flspec/data.hpp"
#include "flspec/harness.hpp"
#include "flspec/model.hpp"
#include "flspec/synthesis.hpp"

namespace py = pybind11;
using namespace flspec;

PYBIND11_MODULE(_core, m) {
    m.doc() = "federated-learning poisoning testbed core";

    py::enum_<ModelKind>(m, "ModelKind")
        .value("LogisticRegression", ModelKind::LogisticRegression)
        .value("Mlp", ModelKind::Mlp);
    py::enum_<ClientRole>(m, "ClientRole")
        .value("Benign", ClientRole::Benign)
        .value("Compromised", ClientRole::Compromised)
        .value("Fake", ClientRole::Fake);
    py::enum_<AggKind>(m, "AggKind")
        .value("FedAvg", AggKind::FedAvg)
        .value("Median", AggKind::Median)
        .value("TrimmedMean", AggKind::TrimmedMean)
        .value("MultiKrum", AggKind::MultiKrum)
        .value("NormBounding", AggKind::NormBounding)
        .value("AdaptiveStolen", AggKind::AdaptiveStolen);
    py::enum_<PerturbKind>(m, "PerturbKind")
        .value("InverseUnit", PerturbKind::InverseUnit)
        .value("InverseSign", PerturbKind::InverseSign)
        .value("InverseStd", PerturbKind::InverseStd);

    py::class_<ModelSpec>(m, "ModelSpec")
        .def(py::init<>())
        .def_readwrite("kind", &ModelSpec::kind)
        .def_readwrite("input_dim", &ModelSpec::input_dim)
        .def_readwrite("num_classes", &ModelSpec::num_classes)
        .def_readwrite("hidden_units", &ModelSpec::hidden_units)
        .def("param_dim", &ModelSpec::param_dim);

    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("local_epochs", &TrainConfig::local_epochs)
        .def_readwrite("learning_rate", &TrainConfig::learning_rate)
        .def_readwrite("momentum", &TrainConfig::momentum)
        .def_readwrite("weight_decay", &TrainConfig::weight_decay)
        .def_readwrite("batch_size", &TrainConfig::batch_size);

    py::class_<ClientUpdate>(m, "ClientUpdate")
        .def(py::init<>())
        .def_readwrite("client_id", &ClientUpdate::client_id)
        .def_readwrite("role", &ClientUpdate::role)
        .def_readwrite("delta", &ClientUpdate::delta);

    py::class_<LabeledDataset>(m, "LabeledDataset")
        .def(py::init<>())
        .def_readwrite("features", &LabeledDataset::features)
        .def_readwrite("labels", &LabeledDataset::labels)
        .def_readwrite("num_classes", &LabeledDataset::num_classes)
        .def("__len__", &LabeledDataset::size);

    py::class_<SyntheticTaskConfig>(m, "SyntheticTaskConfig")
        .def(py::init<>())
        .def_readwrite("num_classes", &SyntheticTaskConfig::num_classes)
        .def_readwrite("input_dim", &SyntheticTaskConfig::input_dim)
        .def_readwrite("samples_per_class_train", &SyntheticTaskConfig::samples_per_class_train)
        .def_readwrite("samples_per_class_test", &SyntheticTaskConfig::samples_per_class_test)
        .def_readwrite("class_center_scale", &SyntheticTaskConfig::class_center_scale)
        .def_readwrite("noise_sigma", &SyntheticTaskConfig::noise_sigma);

    py::class_<PartitionPlan>(m, "PartitionPlan")
        .def_readonly("assignments", &PartitionPlan::assignments);

    py::class_<GammaSearchConfig>(m, "GammaSearchConfig")
        .def(py::init<>())
        .def_readwrite("gamma_init", &GammaSearchConfig::gamma_init)
        .def_readwrite("rel_precision", &GammaSearchConfig::rel_precision)
        .def_readwrite("grid_points", &GammaSearchConfig::grid_points)
        .def_readwrite("gamma_lo", &GammaSearchConfig::gamma_lo)
        .def_readwrite("gamma_hi", &GammaSearchConfig::gamma_hi);

    py::class_<GammaResult>(m, "GammaResult")
        .def_readonly("update", &GammaResult::update)
        .def_readonly("gamma_star", &GammaResult::gamma_star)
        .def_readonly("constraint_met", &GammaResult::constraint_met)
        .def_readonly("objective", &GammaResult::objective);

    py::class_<AdversaryCounts>(m, "AdversaryCounts")
        .def(py::init<>())
        .def_readwrite("n_benign", &AdversaryCounts::n_benign)
        .def_readwrite("n_compromised", &AdversaryCounts::n_compromised)
        .def_readwrite("n_fake", &AdversaryCounts::n_fake);

    py::class_<CostParams>(m, "CostParams")
        .def(py::init<>())
        .def_readwrite("device_price", &CostParams::device_price)
        .def_readwrite("app_prevalence", &CostParams::app_prevalence);

    // model
    m.def("init_model", &init_model);
    m.def("local_train", &local_train, py::arg("spec"), py::arg("global_params"),
          py::arg("data"), py::arg("cfg"), py::arg("seed"), py::arg("client_id") = 0,
          py::arg("role") = ClientRole::Benign);
    m.def("evaluate", &evaluate);
    m.def("l2_norm", &l2_norm);
    m.def("apply_update", &apply_update);

    // data
    m.def("generate_synthetic_task", &generate_synthetic_task);
    m.def("partition_dirichlet", &partition_dirichlet);

    // aggregation
    m.def("agg_fedavg", &agg_fedavg);
    m.def("agg_median", &agg_median);
    m.def("agg_trimmed_mean", &agg_trimmed_mean);
    m.def("multikrum_select", &multikrum_select);
    m.def("agg_multi_krum", &agg_multi_krum);
    m.def("scale_to_norm", &scale_to_norm);
    m.def("agg_norm_bounding", &agg_norm_bounding);

    // attacks
    m.def("craft_mpaf",
          [](const ParameterVector& global, const ParameterVector& base, double lambda) {
              return craft_mpaf(global, {base, lambda});
          },
          py::arg("global_params"), py::arg("base_model"), py::arg("lambda_") = 1e6);
    m.def("benign_reference", &benign_reference);
    m.def("perturbation_direction", &perturbation_direction);
    m.def("dyn_opt_fedavg", &dyn_opt_fedavg, py::arg("reference_updates"), py::arg("seed"),
          py::arg("fixed_gamma") = 1e6);
    m.def("dyn_opt_multikrum", &dyn_opt_multikrum);
    m.def("dyn_opt_trimmed_median", &dyn_opt_trimmed_median);
    m.def("dyn_opt_norm_bounding", &dyn_opt_norm_bounding);

    // cost
    m.def("attack_cost", &attack_cost);
    m.def("malicious_ratio", &malicious_ratio);
    m.def("solve_fake_count", &solve_fake_count);

    // harness (config and reports as JSON strings)
    m.def("run_experiment_json", [](const std::string& config_json, std::uint64_t seed) {
        ExperimentConfig cfg = config_from_json_string(config_json);
        return summary_json(run_experiment(cfg, seed));
    });
    m.def("run_seed_sweep_json", [](const std::string& config_json) {
        ExperimentConfig cfg = config_from_json_string(config_json);
        return summary_json(run_seed_sweep(cfg));
    });
}
