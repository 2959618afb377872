#pragma once

#include <string>
#include <vector>

#include "wmcen/types.hpp"

namespace wmcen {

/// Persisted model: everything needed to predict plus the fit metadata.
/// Serialized as schema-versioned JSON with round-trip-exact numbers.
struct ModelFile {
  int schema_version = 1;
  Hyperparams hp;
  Matrix b;                       // p x q
  Vector intercepts;              // q
  std::vector<int> assignments;   // q, cluster index per response
  Matrix centroids;               // p x k
  int inner_iters = 0;
  int outer_iters = 0;
  bool converged = false;
  double objective = 0.0;
};

ModelFile make_model_file(const FitResult& fr, const Hyperparams& hp);

void save_model(const std::string& path, const ModelFile& model);
ModelFile load_model(const std::string& path);

}  // namespace wmcen
