#pragma once

#include <string>
#include <vector>

#include "twocap/capacity.hpp"
#include "twocap/degiorgi.hpp"
#include "twocap/harness.hpp"
#include "twocap/homogenize.hpp"
#include "twocap/profiles.hpp"

namespace twocap {

// JSON records with flat field names (pretty-printed, two-space indent).

std::string to_json(const CapacityResult& r);
std::string to_json(const EffectiveTensor& t);
std::string to_json(const UniformityReport& r);
std::string to_json(const ProfileSpec& spec, const ProfileResult& r);
std::string to_json(const UpperBoundReport& r);
std::string to_json(const RoundingResult& r);
std::string to_json(const std::vector<StudyRow>& rows);
std::string to_json(const SweepSummary& s, bool deterministic = false);
std::string to_json(const RunConfig& c);
std::string to_json(const Prediction& p);

/// {"error": kind, "message": message}
std::string error_json(const std::string& kind, const std::string& message);

/// S,N,instances,worst_ratio,min_ratio,implied_C
std::string study_csv(const std::vector<StudyRow>& rows);

}  // namespace twocap
