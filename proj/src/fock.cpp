#include "cvqite/fock.hpp"

#include <algorithm>
#include <limits>

namespace cvqite {

void TruncationSpec::validate() const {
  if (n_cutoff < 2) {
    throw std::invalid_argument("TruncationSpec: n_cutoff must be >= 2, got " +
                                std::to_string(n_cutoff));
  }
  if (n_modes < 1) {
    throw std::invalid_argument("TruncationSpec: n_modes must be >= 1, got " +
                                std::to_string(n_modes));
  }
  // Dense storage; anything past ~2^31 amplitudes is not representable anyway.
  constexpr Eigen::Index limit = Eigen::Index(1) << 31;
  Eigen::Index d = 1;
  for (int k = 0; k < n_modes; ++k) {
    if (d > limit / n_cutoff) {
      throw std::overflow_error("TruncationSpec: dimension " + std::to_string(n_cutoff) + "^" +
                                std::to_string(n_modes) + " overflows");
    }
    d *= n_cutoff;
  }
}

Eigen::Index TruncationSpec::dimension() const {
  validate();
  Eigen::Index d = 1;
  for (int k = 0; k < n_modes; ++k) d *= n_cutoff;
  return d;
}

Eigen::Index TruncationSpec::stride(int mode) const {
  if (mode < 0 || mode >= n_modes) {
    throw std::out_of_range("TruncationSpec: mode index " + std::to_string(mode) +
                            " out of range for " + std::to_string(n_modes) + " modes");
  }
  Eigen::Index s = 1;
  for (int k = mode + 1; k < n_modes; ++k) s *= n_cutoff;
  return s;
}

LocalLayout local_layout(const TruncationSpec& spec, std::span<const int> modes) {
  spec.validate();
  if (modes.empty()) throw std::invalid_argument("local_layout: no modes given");
  std::vector<bool> used(spec.n_modes, false);
  for (const int m : modes) {
    if (m < 0 || m >= spec.n_modes) {
      throw std::out_of_range("mode index " + std::to_string(m) + " out of range for " +
                              std::to_string(spec.n_modes) + " modes");
    }
    if (used[m]) throw std::invalid_argument("mode " + std::to_string(m) + " listed twice");
    used[m] = true;
  }

  LocalLayout layout;
  const Eigen::Index nc = spec.n_cutoff;

  layout.offsets.assign(1, 0);
  for (const int m : modes) {
    const auto s = spec.stride(m);
    std::vector<Eigen::Index> next;
    next.reserve(layout.offsets.size() * nc);
    for (const auto off : layout.offsets) {
      for (Eigen::Index d = 0; d < nc; ++d) next.push_back(off + d * s);
    }
    layout.offsets = std::move(next);
  }

  layout.bases.assign(1, 0);
  for (int m = 0; m < spec.n_modes; ++m) {
    if (used[m]) continue;
    const auto s = spec.stride(m);
    std::vector<Eigen::Index> next;
    next.reserve(layout.bases.size() * nc);
    for (const auto base : layout.bases) {
      for (Eigen::Index d = 0; d < nc; ++d) next.push_back(base + d * s);
    }
    layout.bases = std::move(next);
  }
  std::sort(layout.bases.begin(), layout.bases.end());
  return layout;
}

}  // namespace cvqite
