#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "supermix/certificate.hpp"
#include "supermix/measures.hpp"
#include "supermix/solver_cpgd.hpp"
#include "supermix/solver_sfw.hpp"

namespace supermix::io {

using nlohmann::json;

// Measures: JSON {dim, atoms:[{w, t:[...]}]} and CSV (weight, x1..xd)
json measure_to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const json& j);
void measure_to_csv(const DiscreteMeasure& mu, std::ostream& out);

// Samples: CSV, one point per row
void sample_to_csv(const Sample& sample, std::ostream& out);
Sample sample_from_csv(std::istream& in);

json solve_result_to_json(const SolveResult& result);
void objective_trace_to_csv(const SolveResult& result, std::ostream& out);

// Trajectory CSV: step, particle_id, mass, x1..xd
void trajectory_to_csv(const std::vector<ParticleState>& trajectory, std::ostream& out);

json audit_report_to_json(const AuditReport& report);

// FNV-1a over a canonical JSON dump, for output manifests
std::string config_hash(const json& config);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace supermix::io
