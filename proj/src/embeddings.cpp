#include "edsa/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "edsa/error.hpp"

namespace edsa::vectorize {

ExternalEmbeddings load_embeddings(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("embeddings.io", "cannot open " + path);
  ExternalEmbeddings e;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error("embeddings.bad_row",
                  "line " + std::to_string(lineno) + ": missing tab");
    uint64_t id = 0;
    {
      auto [p, ec] = std::from_chars(line.data(), line.data() + tab, id);
      if (ec != std::errc() || p != line.data() + tab)
        throw Error("embeddings.bad_row",
                    "line " + std::to_string(lineno) + ": bad id");
    }
    std::vector<double> vec;
    const char* p = line.data() + tab + 1;
    const char* end = line.data() + line.size();
    while (p < end) {
      while (p < end && *p == ' ') ++p;
      if (p >= end) break;
      char* after = nullptr;
      double v = std::strtod(p, &after);
      if (after == p || (after < end && *after != ' '))
        throw Error("embeddings.bad_row",
                    "line " + std::to_string(lineno) + ": non-numeric field");
      if (!std::isfinite(v))
        throw Error("embeddings.bad_row",
                    "line " + std::to_string(lineno) + ": non-finite entry");
      vec.push_back(v);
      p = after;
    }
    if (vec.empty())
      throw Error("embeddings.bad_row",
                  "line " + std::to_string(lineno) + ": empty vector");
    if (e.dim == 0) e.dim = vec.size();
    else if (vec.size() != e.dim)
      throw Error("embeddings.ragged",
                  "line " + std::to_string(lineno) + ": expected " +
                      std::to_string(e.dim) + " fields, got " +
                      std::to_string(vec.size()));
    if (!e.vectors.emplace(id, std::move(vec)).second)
      throw Error("embeddings.duplicate_id",
                  "line " + std::to_string(lineno) + ": duplicate id " +
                      std::to_string(id));
  }
  return e;
}

void save_embeddings(const ExternalEmbeddings& e, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("embeddings.io", "cannot write " + path);
  // Sorted by id so the artifact is reproducible; %.17g round-trips doubles.
  std::vector<uint64_t> ids;
  ids.reserve(e.vectors.size());
  for (const auto& [id, _] : e.vectors) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  char buf[64];
  for (uint64_t id : ids) {
    out << id << '\t';
    const auto& vec = e.vectors.at(id);
    for (size_t i = 0; i < vec.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", vec[i]);
      if (i) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace edsa::vectorize
