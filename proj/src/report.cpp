#include "odsym/report.hpp"

#include <ostream>

namespace odsym {

std::string_view to_string(Norm loss) { return loss == Norm::L1 ? "l1" : "l2"; }

std::string_view to_string(InitKind init) {
  switch (init) {
    case InitKind::Zero:
      return "zero";
    case InitKind::Random:
      return "random";
    case InitKind::Greedy:
      return "greedy";
  }
  return "?";
}

std::string_view to_string(SolverPath path) {
  return path == SolverPath::Residual ? "residual" : "free";
}

std::string_view to_string(Readout readout) {
  return readout == Readout::Raw ? "raw" : "hardened";
}

nlohmann::json to_json(const FitReport& report) {
  return {{"final_objective", report.final_objective},
          {"sweeps", report.sweeps},
          {"elapsed_seconds", report.elapsed_seconds},
          {"objective_trace", report.objective_trace}};
}

FitReport fit_report_from_json(const nlohmann::json& j) {
  FitReport r;
  r.final_objective = j.at("final_objective").get<double>();
  r.sweeps = j.at("sweeps").get<std::size_t>();
  r.elapsed_seconds = j.at("elapsed_seconds").get<double>();
  r.objective_trace = j.at("objective_trace").get<std::vector<double>>();
  return r;
}

nlohmann::json to_json(const ExperimentResult& result) {
  const auto& c = result.config;
  nlohmann::json config = {{"loss", to_string(c.loss)},
                           {"init", to_string(c.init)},
                           {"path", to_string(c.path)},
                           {"readout", to_string(c.effective_readout())},
                           {"max_sweeps", c.max_sweeps},
                           {"tol", c.tol},
                           {"trials", c.trials},
                           {"seed", c.seed}};
  if (c.kind == ExperimentConfig::Kind::Cliques) {
    config["benchmark"] = "cliques";
    config["sizes"] = c.cliques.sizes;
    config["delta"] = c.delta;
  } else {
    config["benchmark"] = "adversarial";
    config["clique_size"] = c.adversarial.clique_size;
    config["isolated"] = c.adversarial.isolated;
    config["level"] = c.adversarial.level;
  }
  nlohmann::json trials = nlohmann::json::array();
  for (std::size_t t = 0; t < result.trials.size(); ++t) {
    const auto& o = result.trials[t];
    trials.push_back({{"trial", t},
                      {"accuracy", o.accuracy},
                      {"final_objective", o.final_objective},
                      {"sweeps", o.sweeps},
                      {"elapsed_seconds", o.elapsed_seconds}});
  }
  return {{"config", config},
          {"trials", trials},
          {"summary", {{"mean", result.mean}, {"std", result.stddev}, {"trials", c.trials}}}};
}

void write_trials_csv(std::ostream& out, const ExperimentResult& result) {
  out << "trial,accuracy,final_objective,sweeps,elapsed_seconds\n";
  for (std::size_t t = 0; t < result.trials.size(); ++t) {
    const auto& o = result.trials[t];
    out << t << ',' << o.accuracy << ',' << o.final_objective << ',' << o.sweeps << ','
        << o.elapsed_seconds << '\n';
  }
}

void write_sweep_csv(std::ostream& out, std::string_view param,
                     const std::vector<ExperimentResult>& sweep) {
  out << param << ",mean,std,trials\n";
  for (const auto& r : sweep) {
    if (r.config.kind == ExperimentConfig::Kind::Cliques) {
      out << r.config.delta;
    } else {
      out << r.config.adversarial.level;
    }
    out << ',' << r.mean << ',' << r.stddev << ',' << r.trials.size() << '\n';
  }
}

}  // namespace odsym
