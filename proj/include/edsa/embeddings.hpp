#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace edsa::vectorize {

// Dense per-tweet vectors produced outside the pipeline (the transformer
// boundary). File format: one row per tweet, `id<TAB>f1 f2 ... fd`.
struct ExternalEmbeddings {
  size_t dim = 0;
  std::unordered_map<uint64_t, std::vector<double>> vectors;

  const std::vector<double>* find(uint64_t id) const {
    auto it = vectors.find(id);
    return it == vectors.end() ? nullptr : &it->second;
  }
};

ExternalEmbeddings load_embeddings(const std::string& path);
void save_embeddings(const ExternalEmbeddings& e, const std::string& path);

}  // namespace edsa::vectorize
