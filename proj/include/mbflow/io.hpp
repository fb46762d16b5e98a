#pragma once

// JSON and CSV representations of the model types, and the raw genome file
// format (8-byte little-endian length header followed by the bytes).

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "mbflow/core.hpp"
#include "mbflow/detection.hpp"
#include "mbflow/evolve.hpp"
#include "mbflow/genome.hpp"
#include "mbflow/groundtruth.hpp"
#include "mbflow/infoflow.hpp"
#include "mbflow/tasks.hpp"

namespace mbflow {

using json = nlohmann::json;

void to_json(json& j, const Gate& g);
void from_json(const json& j, Gate& g);
void to_json(json& j, const Brain& b);
void from_json(const json& j, Brain& b);
void to_json(json& j, const Genome& g);
void from_json(const json& j, Genome& g);
void to_json(json& j, const MutationRates& r);
void from_json(const json& j, MutationRates& r);
void to_json(json& j, const TaskSpec& t);
void to_json(json& j, const TEMatrix& m);
void from_json(const json& j, TEMatrix& m);
void to_json(json& j, const InfluenceMap& m);
void from_json(const json& j, InfluenceMap& m);
void to_json(json& j, const KnockoutReport& r);
void from_json(const json& j, KnockoutReport& r);
void to_json(json& j, const FlowBounds& b);
void from_json(const json& j, FlowBounds& b);
void to_json(json& j, const ConfusionCounts& c);
void from_json(const json& j, ConfusionCounts& c);
void to_json(json& j, const GaussianRocFit& f);
void from_json(const json& j, GaussianRocFit& f);
void to_json(json& j, const RocCurve& c);
void from_json(const json& j, RocCurve& c);
void to_json(json& j, const RunResult& r);

/// Fixed-point with six decimals.
std::string fixed6(double v);

std::string te_matrix_csv(const TEMatrix& m);
std::string influence_map_csv(const InfluenceMap& m);
std::string roc_csv(const RocCurve& c);
std::string trajectory_csv(const std::vector<GenerationStats>& trajectory);
std::string gate_catalog_csv();

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);

void write_genome(const std::filesystem::path& path, const Genome& genome);
Genome read_genome(const std::filesystem::path& path);

}  // namespace mbflow
