#include "cvqite/dump.hpp"

#include <stdexcept>

namespace cvqite {
namespace {

nlohmann::json header(const char* kind, const TruncationSpec& spec) {
  return {{"kind", kind}, {"n_cutoff", spec.n_cutoff}, {"n_modes", spec.n_modes}};
}

TruncationSpec read_header(const nlohmann::json& j, const char* kind) {
  if (!j.is_object() || j.value("kind", "") != kind) {
    throw std::invalid_argument(std::string("dump: expected kind \"") + kind + "\"");
  }
  TruncationSpec spec{j.at("n_cutoff").get<int>(), j.at("n_modes").get<int>()};
  spec.validate();
  return spec;
}

cplx read_pair(const nlohmann::json& pair) {
  if (!pair.is_array() || pair.size() != 2) {
    throw std::invalid_argument("dump: every entry must be a [re, im] pair");
  }
  return {pair[0].get<double>(), pair[1].get<double>()};
}

}  // namespace

nlohmann::json dump_state(const TruncatedState& state) {
  auto j = header("state", state.spec);
  auto data = nlohmann::json::array();
  for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i) {
    data.push_back({state.amplitudes(i).real(), state.amplitudes(i).imag()});
  }
  j["data"] = std::move(data);
  return j;
}

nlohmann::json dump_operator(const ModeOperator& op) {
  auto j = header("operator", op.spec);
  j["hermitian"] = op.hermitian_hint;
  auto data = nlohmann::json::array();
  for (Eigen::Index r = 0; r < op.matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < op.matrix.cols(); ++c) {
      data.push_back({op.matrix(r, c).real(), op.matrix(r, c).imag()});
    }
  }
  j["data"] = std::move(data);
  return j;
}

TruncatedState load_state(const nlohmann::json& j) {
  const auto spec = read_header(j, "state");
  const auto& data = j.at("data");
  const auto d = spec.dimension();
  if (static_cast<Eigen::Index>(data.size()) != d) {
    throw std::invalid_argument("dump: state has " + std::to_string(data.size()) +
                                " entries, expected " + std::to_string(d));
  }
  TruncatedState s{VectorX<cplx>(d), spec};
  for (Eigen::Index i = 0; i < d; ++i) s.amplitudes(i) = read_pair(data[i]);
  return s;
}

ModeOperator load_operator(const nlohmann::json& j) {
  const auto spec = read_header(j, "operator");
  const auto& data = j.at("data");
  const auto d = spec.dimension();
  if (static_cast<Eigen::Index>(data.size()) != d * d) {
    throw std::invalid_argument("dump: operator has " + std::to_string(data.size()) +
                                " entries, expected " + std::to_string(d * d));
  }
  ModeOperator op{MatrixX<cplx>(d, d), spec, j.value("hermitian", false)};
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) op.matrix(r, c) = read_pair(data[r * d + c]);
  }
  return op;
}

}  // namespace cvqite
