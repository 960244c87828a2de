#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "odsym/bench.hpp"
#include "odsym/matrix.hpp"

namespace odsym {

std::string_view to_string(Norm loss);
std::string_view to_string(InitKind init);
std::string_view to_string(SolverPath path);
std::string_view to_string(Readout readout);

/// {final_objective, sweeps, elapsed_seconds, objective_trace[]}
nlohmann::json to_json(const FitReport& report);
FitReport fit_report_from_json(const nlohmann::json& j);

/// {config{...}, trials[{trial, accuracy, final_objective, sweeps,
/// elapsed_seconds}], summary{mean, std, trials}}
nlohmann::json to_json(const ExperimentResult& result);

/// One row per trial: trial,accuracy,final_objective,sweeps,elapsed_seconds
void write_trials_csv(std::ostream& out, const ExperimentResult& result);

/// One row per swept value: <param>,mean,std,trials
void write_sweep_csv(std::ostream& out, std::string_view param,
                     const std::vector<ExperimentResult>& sweep);

}  // namespace odsym
