#include "tsalign/serialization.hpp"

#include <fstream>
#include <sstream>

#include "tsalign/errors.hpp"

namespace tsalign {

namespace {

constexpr int kFormatVersion = 1;

ordered_json node_to_json(const DecisionTree& tree, std::int32_t index) {
  const TreeNode& node = tree.nodes.at(static_cast<std::size_t>(index));
  ordered_json doc;
  if (node.is_leaf()) {
    doc["counts"] = node.class_counts;
  } else {
    doc["feature"] = node.feature;
    doc["threshold"] = node.threshold;
    doc["left"] = node_to_json(tree, node.left);
    doc["right"] = node_to_json(tree, node.right);
  }
  return doc;
}

// Rebuilds nodes in the same pre-order the tree builder used, so a
// round-trip reproduces the exact node array.
std::int32_t node_from_json(const ordered_json& doc, DecisionTree& tree) {
  if (doc.contains("counts")) {
    TreeNode leaf;
    leaf.class_counts = doc.at("counts").get<std::vector<std::int64_t>>();
    tree.nodes.push_back(std::move(leaf));
    return static_cast<std::int32_t>(tree.nodes.size() - 1);
  }
  TreeNode node;
  node.feature = doc.at("feature").get<int>();
  node.threshold = doc.at("threshold").get<double>();
  if (node.feature < 0) {
    throw Error(ErrorCode::MalformedRow, "internal tree node with negative feature");
  }
  tree.nodes.push_back(std::move(node));
  const auto id = static_cast<std::int32_t>(tree.nodes.size() - 1);
  const std::int32_t left = node_from_json(doc.at("left"), tree);
  const std::int32_t right = node_from_json(doc.at("right"), tree);
  tree.nodes[static_cast<std::size_t>(id)].left = left;
  tree.nodes[static_cast<std::size_t>(id)].right = right;
  return id;
}

[[noreturn]] void bad_schema(const char* what, const nlohmann::json::exception& e) {
  throw Error(ErrorCode::MalformedRow, std::string("bad ") + what + " document: " + e.what());
}

}  // namespace

ordered_json to_json(const ScalerModel& model) {
  ordered_json doc;
  doc["mins"] = model.mins;
  doc["maxs"] = model.maxs;
  return doc;
}

ScalerModel scaler_from_json(const ordered_json& doc) {
  try {
    ScalerModel model;
    model.mins = doc.at("mins").get<std::vector<double>>();
    model.maxs = doc.at("maxs").get<std::vector<double>>();
    if (model.mins.size() != model.maxs.size()) {
      throw Error(ErrorCode::DimensionMismatch, "scaler mins/maxs length mismatch");
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    bad_schema("scaler", e);
  }
}

ordered_json to_json(const PcaModel& model) {
  ordered_json doc;
  doc["mean"] = model.mean;
  doc["components"] = model.components;
  doc["explained_variance"] = model.explained_variance;
  return doc;
}

PcaModel pca_from_json(const ordered_json& doc) {
  try {
    PcaModel model;
    model.mean = doc.at("mean").get<std::vector<double>>();
    model.components = doc.at("components").get<std::vector<std::vector<double>>>();
    for (const auto& row : model.components) {
      if (row.size() != model.mean.size()) {
        throw Error(ErrorCode::DimensionMismatch, "component length != mean length");
      }
    }
    model.explained_variance = doc.at("explained_variance").get<std::vector<double>>();
    if (model.explained_variance.size() != model.components.size()) {
      throw Error(ErrorCode::DimensionMismatch, "explained_variance length != component count");
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    bad_schema("pca", e);
  }
}

ordered_json to_json(const KnnModel& model) {
  ordered_json doc;
  doc["format_version"] = kFormatVersion;
  doc["k"] = model.k;
  doc["num_classes"] = model.num_classes;
  doc["labels"] = model.labels;
  ordered_json train = ordered_json::array();
  for (std::size_t r = 0; r < model.rows(); ++r) {
    train.push_back(std::vector<double>(model.train.begin() + static_cast<std::ptrdiff_t>(r * model.cols),
                                        model.train.begin() + static_cast<std::ptrdiff_t>((r + 1) * model.cols)));
  }
  doc["cols"] = model.cols;
  doc["train"] = std::move(train);
  return doc;
}

KnnModel knn_from_json(const ordered_json& doc) {
  try {
    KnnModel model;
    model.k = doc.at("k").get<std::size_t>();
    model.num_classes = doc.at("num_classes").get<int>();
    model.labels = doc.at("labels").get<std::vector<int>>();
    model.cols = doc.at("cols").get<std::size_t>();
    for (const auto& row : doc.at("train")) {
      const auto values = row.get<std::vector<double>>();
      if (values.size() != model.cols) {
        throw Error(ErrorCode::DimensionMismatch, "knn train row width != cols");
      }
      model.train.insert(model.train.end(), values.begin(), values.end());
    }
    if (model.rows() != model.labels.size()) {
      throw Error(ErrorCode::DimensionMismatch, "knn label count != train rows");
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    bad_schema("knn", e);
  }
}

ordered_json to_json(const ForestModel& model) {
  ordered_json doc;
  doc["format_version"] = kFormatVersion;
  doc["num_trees"] = model.num_trees;
  doc["seed"] = model.seed;
  doc["cols"] = model.cols;
  doc["num_classes"] = model.num_classes;
  ordered_json trees = ordered_json::array();
  for (const auto& tree : model.trees) {
    trees.push_back(node_to_json(tree, 0));
  }
  doc["trees"] = std::move(trees);
  return doc;
}

ForestModel forest_from_json(const ordered_json& doc) {
  try {
    ForestModel model;
    model.num_trees = doc.at("num_trees").get<std::size_t>();
    model.seed = doc.at("seed").get<std::uint64_t>();
    model.cols = doc.at("cols").get<std::size_t>();
    model.num_classes = doc.at("num_classes").get<int>();
    for (const auto& tree_doc : doc.at("trees")) {
      DecisionTree tree;
      node_from_json(tree_doc, tree);
      model.trees.push_back(std::move(tree));
    }
    if (model.trees.size() != model.num_trees) {
      throw Error(ErrorCode::DimensionMismatch, "forest tree count != num_trees");
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    bad_schema("forest", e);
  }
}

ordered_json to_json(const AlignmentConfig& config) {
  ordered_json doc;
  doc["method"] = to_string(config.method);
  doc["n"] = config.n;
  doc["seed"] = config.seed;
  return doc;
}

AlignmentConfig alignment_from_json(const ordered_json& doc) {
  try {
    AlignmentConfig config;
    config.method = parse_method(doc.at("method").get<std::string>());
    config.n = doc.at("n").get<std::size_t>();
    config.seed = doc.at("seed").get<std::uint64_t>();
    return config;
  } catch (const nlohmann::json::exception& e) {
    bad_schema("alignment", e);
  }
}

ordered_json to_json(const GridPoint& point) {
  ordered_json doc;
  doc["pca_k"] = point.pca_k;
  doc["classifier"] = to_string(point.classifier);
  doc["param"] = point.param;
  return doc;
}

GridPoint grid_point_from_json(const ordered_json& doc) {
  try {
    GridPoint point;
    point.pca_k = doc.at("pca_k").get<std::size_t>();
    const auto kind = doc.at("classifier").get<std::string>();
    if (kind == "knn") {
      point.classifier = ClassifierKind::Knn;
    } else if (kind == "rf") {
      point.classifier = ClassifierKind::RandomForest;
    } else {
      throw Error(ErrorCode::MalformedRow, "unknown classifier '" + kind + "'");
    }
    point.param = doc.at("param").get<std::size_t>();
    return point;
  } catch (const nlohmann::json::exception& e) {
    bad_schema("grid point", e);
  }
}

ordered_json to_json(const FittedPipeline& pipeline) {
  ordered_json doc;
  doc["format_version"] = kFormatVersion;
  doc["alignment"] = to_json(pipeline.alignment);
  doc["grid_point"] = to_json(pipeline.point);
  doc["scaler"] = to_json(pipeline.scaler);
  doc["pca"] = to_json(pipeline.pca);
  ordered_json classifier;
  if (const auto* knn = std::get_if<KnnModel>(&pipeline.classifier)) {
    classifier["kind"] = "knn";
    classifier["model"] = to_json(*knn);
  } else {
    classifier["kind"] = "rf";
    classifier["model"] = to_json(std::get<ForestModel>(pipeline.classifier));
  }
  doc["classifier"] = std::move(classifier);
  return doc;
}

FittedPipeline pipeline_from_json(const ordered_json& doc) {
  try {
    FittedPipeline pipeline;
    pipeline.alignment = alignment_from_json(doc.at("alignment"));
    pipeline.point = grid_point_from_json(doc.at("grid_point"));
    pipeline.scaler = scaler_from_json(doc.at("scaler"));
    pipeline.pca = pca_from_json(doc.at("pca"));
    const auto kind = doc.at("classifier").at("kind").get<std::string>();
    if (kind == "knn") {
      pipeline.classifier = knn_from_json(doc.at("classifier").at("model"));
    } else if (kind == "rf") {
      pipeline.classifier = forest_from_json(doc.at("classifier").at("model"));
    } else {
      throw Error(ErrorCode::MalformedRow, "unknown classifier kind '" + kind + "'");
    }
    return pipeline;
  } catch (const nlohmann::json::exception& e) {
    bad_schema("pipeline", e);
  }
}

ordered_json to_json(const GridSearchResult& result) {
  ordered_json doc;
  doc["format_version"] = kFormatVersion;
  doc["seed"] = result.seed;
  doc["folds"] = result.folds;
  ordered_json table = ordered_json::array();
  for (const auto& cell : result.table) {
    ordered_json entry;
    entry["point"] = to_json(cell.point);
    entry["fold_accuracies"] = cell.fold_accuracies;
    entry["mean_accuracy"] = cell.mean_accuracy;
    table.push_back(std::move(entry));
  }
  doc["table"] = std::move(table);
  ordered_json infeasible = ordered_json::array();
  for (const auto& point : result.infeasible) {
    infeasible.push_back(to_json(point));
  }
  doc["infeasible"] = std::move(infeasible);
  doc["best_index"] = result.best_index;
  doc["best_point"] = to_json(result.table.at(result.best_index).point);
  doc["pipeline"] = to_json(result.pipeline);
  return doc;
}

GridSearchResult grid_search_from_json(const ordered_json& doc) {
  try {
    GridSearchResult result;
    result.seed = doc.at("seed").get<std::uint64_t>();
    result.folds = doc.at("folds").get<std::size_t>();
    for (const auto& entry : doc.at("table")) {
      GridCell cell;
      cell.point = grid_point_from_json(entry.at("point"));
      cell.fold_accuracies = entry.at("fold_accuracies").get<std::vector<double>>();
      cell.mean_accuracy = entry.at("mean_accuracy").get<double>();
      result.table.push_back(std::move(cell));
    }
    for (const auto& point : doc.at("infeasible")) {
      result.infeasible.push_back(grid_point_from_json(point));
    }
    result.best_index = doc.at("best_index").get<std::size_t>();
    if (result.best_index >= result.table.size()) {
      throw Error(ErrorCode::MalformedRow, "best_index out of range");
    }
    result.pipeline = pipeline_from_json(doc.at("pipeline"));
    return result;
  } catch (const nlohmann::json::exception& e) {
    bad_schema("grid search", e);
  }
}

void write_json_file(const ordered_json& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  out << doc.dump(2) << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

ordered_json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  ordered_json doc = ordered_json::parse(buffer.str(), nullptr, false);
  if (doc.is_discarded()) {
    throw Error(ErrorCode::MalformedRow, "invalid JSON in " + path.string());
  }
  return doc;
}

void save_pipeline(const FittedPipeline& pipeline, const std::filesystem::path& path) {
  write_json_file(to_json(pipeline), path);
}

FittedPipeline load_pipeline(const std::filesystem::path& path) {
  const ordered_json doc = read_json_file(path);
  if (!doc.is_object() || doc.value("format_version", -1) != kFormatVersion) {
    throw Error(ErrorCode::MalformedRow, "unsupported format_version in " + path.string());
  }
  return pipeline_from_json(doc);
}

void save_grid_search(const GridSearchResult& result, const std::filesystem::path& path) {
  write_json_file(to_json(result), path);
}

GridSearchResult load_grid_search(const std::filesystem::path& path) {
  const ordered_json doc = read_json_file(path);
  if (!doc.is_object() || doc.value("format_version", -1) != kFormatVersion) {
    throw Error(ErrorCode::MalformedRow, "unsupported format_version in " + path.string());
  }
  return grid_search_from_json(doc);
}

}  // namespace tsalign
