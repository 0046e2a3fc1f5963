#pragma once

#include <filesystem>

#include "json.hpp"
#include "tsalign/alignment.hpp"
#include "tsalign/model_selection.hpp"

namespace tsalign {

using ordered_json = nlohmann::ordered_json;

ordered_json to_json(const ScalerModel& model);
ScalerModel scaler_from_json(const ordered_json& doc);

ordered_json to_json(const PcaModel& model);
PcaModel pca_from_json(const ordered_json& doc);

ordered_json to_json(const KnnModel& model);
KnnModel knn_from_json(const ordered_json& doc);

ordered_json to_json(const ForestModel& model);
ForestModel forest_from_json(const ordered_json& doc);

ordered_json to_json(const AlignmentConfig& config);
AlignmentConfig alignment_from_json(const ordered_json& doc);

ordered_json to_json(const GridPoint& point);
GridPoint grid_point_from_json(const ordered_json& doc);

ordered_json to_json(const FittedPipeline& pipeline);
FittedPipeline pipeline_from_json(const ordered_json& doc);

ordered_json to_json(const GridSearchResult& result);
GridSearchResult grid_search_from_json(const ordered_json& doc);

/// Serializes with dump(2) and a trailing newline; deterministic bytes for
/// deterministic documents.
void write_json_file(const ordered_json& doc, const std::filesystem::path& path);
ordered_json read_json_file(const std::filesystem::path& path);

void save_pipeline(const FittedPipeline& pipeline, const std::filesystem::path& path);
FittedPipeline load_pipeline(const std::filesystem::path& path);

void save_grid_search(const GridSearchResult& result, const std::filesystem::path& path);
GridSearchResult load_grid_search(const std::filesystem::path& path);

}  // namespace tsalign
