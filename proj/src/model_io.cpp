#include "wmcen/model_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace wmcen {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty()) {
    throw std::runtime_error("expected a non-empty array of rows");
  }
  const Index r = static_cast<Index>(rows.size());
  const Index c = static_cast<Index>(rows.front().size());
  Matrix m(r, c);
  for (Index i = 0; i < r; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (static_cast<Index>(row.size()) != c) {
      throw std::runtime_error("ragged matrix in model file");
    }
    for (Index j = 0; j < c; ++j) {
      m(i, j) = row[static_cast<std::size_t>(j)].get<double>();
    }
  }
  return m;
}

}  // namespace

ModelFile make_model_file(const FitResult& fr, const Hyperparams& hp) {
  ModelFile model;
  model.hp = hp;
  model.b = fr.b;
  model.intercepts = fr.intercepts;
  model.assignments.reserve(static_cast<std::size_t>(fr.clusters.q()));
  for (Index s = 0; s < fr.clusters.q(); ++s) {
    model.assignments.push_back(fr.clusters.assignment(s));
  }
  model.centroids = fr.clusters.v();
  model.inner_iters = fr.inner_iters;
  model.outer_iters = fr.outer_iters;
  model.converged = fr.converged;
  model.objective =
      fr.objective_trace.empty() ? 0.0 : fr.objective_trace.back();
  return model;
}

void save_model(const std::string& path, const ModelFile& model) {
  json doc;
  doc["schema_version"] = model.schema_version;
  doc["p"] = model.b.rows();
  doc["q"] = model.b.cols();
  doc["k"] = model.hp.k;
  doc["hyperparams"] = {{"lambda", model.hp.lambda},
                        {"gamma", model.hp.gamma},
                        {"k", model.hp.k},
                        {"epsilon", model.hp.epsilon}};
  doc["coefficients"] = matrix_to_json(model.b);
  json intercepts = json::array();
  for (Index s = 0; s < model.intercepts.size(); ++s) {
    intercepts.push_back(model.intercepts[s]);
  }
  doc["intercepts"] = std::move(intercepts);
  doc["assignments"] = model.assignments;
  doc["centroids"] = matrix_to_json(model.centroids);
  doc["fit"] = {{"inner_iters", model.inner_iters},
                {"outer_iters", model.outer_iters},
                {"converged", model.converged},
                {"objective", model.objective}};

  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write model file: " + path);
  }
  out << doc.dump(2) << '\n';
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open model file: " + path);
  }
  json doc;
  in >> doc;

  ModelFile model;
  model.schema_version = doc.at("schema_version").get<int>();
  if (model.schema_version != 1) {
    throw std::runtime_error("unsupported model schema version");
  }
  const auto& hp = doc.at("hyperparams");
  model.hp.lambda = hp.at("lambda").get<double>();
  model.hp.gamma = hp.at("gamma").get<double>();
  model.hp.k = hp.at("k").get<int>();
  model.hp.epsilon = hp.at("epsilon").get<double>();
  model.b = matrix_from_json(doc.at("coefficients"));
  const auto& icpt = doc.at("intercepts");
  model.intercepts.resize(static_cast<Index>(icpt.size()));
  for (std::size_t s = 0; s < icpt.size(); ++s) {
    model.intercepts[static_cast<Index>(s)] = icpt[s].get<double>();
  }
  model.assignments = doc.at("assignments").get<std::vector<int>>();
  model.centroids = matrix_from_json(doc.at("centroids"));
  const auto& fitmeta = doc.at("fit");
  model.inner_iters = fitmeta.at("inner_iters").get<int>();
  model.outer_iters = fitmeta.at("outer_iters").get<int>();
  model.converged = fitmeta.at("converged").get<bool>();
  model.objective = fitmeta.at("objective").get<double>();

  if (model.b.rows() != doc.at("p").get<Index>() ||
      model.b.cols() != doc.at("q").get<Index>()) {
    throw std::runtime_error("model dimensions are inconsistent");
  }
  return model;
}

}  // namespace wmcen
