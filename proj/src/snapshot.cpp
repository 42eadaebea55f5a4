#include "fastbfgs/snapshot.hpp"

#include "json.hpp"

#include "fastbfgs/errors.hpp"

namespace fastbfgs {

std::string to_json(const SubspaceState& state) {
  nlohmann::json j;
  j["n"] = state.dim();
  j["m"] = state.memory();
  j["count"] = state.count();
  auto cols = nlohmann::json::array();
  for (int c = 0; c < state.size(); ++c) {
    const auto col = state.column(c);
    cols.push_back(std::vector<double>(col.data(), col.data() + col.size()));
  }
  j["columns"] = std::move(cols);
  std::vector<double> l;
  l.reserve(static_cast<std::size_t>(state.L().size()));
  for (Eigen::Index r = 0; r < state.L().rows(); ++r) {
    for (Eigen::Index c = 0; c < state.L().cols(); ++c) l.push_back(state.L()(r, c));
  }
  j["L"] = std::move(l);
  return j.dump();
}

SubspaceState state_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const auto n = j.at("n").get<Eigen::Index>();
    const auto m = j.at("m").get<int>();
    const auto count = j.at("count").get<long>();
    const auto& cols = j.at("columns");
    const auto k = static_cast<Eigen::Index>(cols.size());
    Matrix s(n, k);
    for (Eigen::Index c = 0; c < k; ++c) {
      const auto v = cols.at(static_cast<std::size_t>(c)).get<std::vector<double>>();
      if (static_cast<Eigen::Index>(v.size()) != n) throw DimensionError("snapshot column length != n");
      s.col(c) = Eigen::Map<const Vector>(v.data(), n);
    }
    const auto flat = j.at("L").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(flat.size()) != k * k) throw DimensionError("snapshot L has wrong size");
    Matrix l(k, k);
    for (Eigen::Index r = 0; r < k; ++r) {
      for (Eigen::Index c = 0; c < k; ++c) l(r, c) = flat[static_cast<std::size_t>(r * k + c)];
    }
    SubspaceState state(n, m);
    state.assign(s, l, count);
    return state;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed subspace snapshot: ") + e.what());
  }
}

}  // namespace fastbfgs
