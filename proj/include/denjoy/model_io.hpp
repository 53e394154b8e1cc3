#pragma once

#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>

#include "denjoy/blowup.hpp"
#include "denjoy/verify.hpp"

#include <json.hpp>

namespace denjoy {

struct ModelCorrupt : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Versioned model document; the "created" timestamp is informational and
/// excluded from determinism comparisons.
nlohmann::json model_to_json(const BlowupModel& model);

/// Rebuilds the model from the stored parameters and cross-checks the stored
/// interval table. Throws ModelCorrupt on any mismatch.
std::shared_ptr<const BlowupModel> model_from_json(const nlohmann::json& j);

void write_model(const BlowupModel& model, const std::string& path);
std::shared_ptr<const BlowupModel> read_model(const std::string& path);

void write_interval_csv(const BlowupModel& model, std::ostream& out);

nlohmann::json report_to_json(const CheckReport& rep);
nlohmann::json reports_to_json(const std::vector<CheckReport>& reps);

}  // namespace denjoy
