#include "cvqite/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

#include "cvqite/qite.hpp"

namespace cvqite {
namespace {

constexpr unsigned total_parity_bit = 1u << 31;

std::vector<Eigen::Index> sector_indices(const TruncationSpec& spec, unsigned pattern, unsigned mask) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < spec.dimension(); ++i) {
    if ((parity_pattern(i, spec) & mask) == (pattern & mask)) idx.push_back(i);
  }
  return idx;
}

MatrixX<cplx> submatrix(const MatrixX<cplx>& m, const std::vector<Eigen::Index>& idx) {
  const auto n = static_cast<Eigen::Index>(idx.size());
  MatrixX<cplx> out(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) out(a, b) = m(idx[a], idx[b]);
  }
  return out;
}

void require_hermitian(const ModeOperator& h, const char* what) {
  if (!h.matrix.allFinite()) throw std::domain_error(std::string(what) + ": non-finite matrix entries");
  if (h.matrix.rows() != h.matrix.cols()) throw std::invalid_argument(std::string(what) + ": matrix not square");
  const double scale = std::max(1.0, h.matrix.cwiseAbs().maxCoeff());
  if (hermiticity_defect(h.matrix) > tolerance::algebraic * scale) {
    throw std::invalid_argument(std::string(what) + ": matrix is not Hermitian");
  }
}

// Max |H_ij| over pairs that `parity` separates.
template <typename F>
double mixing(const ModeOperator& h, F&& parity) {
  double worst = 0.0;
  const auto d = h.matrix.rows();
  for (Eigen::Index j = 0; j < d; ++j) {
    const auto pj = parity(j);
    for (Eigen::Index i = 0; i < d; ++i) {
      if (parity(i) != pj) worst = std::max(worst, std::abs(h.matrix(i, j)));
    }
  }
  return worst;
}

struct Level {
  double energy;
  unsigned key;
  VectorX<cplx> vector;
};

double golden_section(const std::function<double(double)>& f, double a, double b, double tol) {
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Bracketing scan on a log grid; returns the neighbours of the best point or
// nullopt if the best point is on the boundary.
std::optional<std::pair<double, double>> log_scan(const std::function<double(double)>& f, double lo, double hi) {
  constexpr int n = 121;
  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) {
    x[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
    y[i] = f(x[i]);
  }
  const auto best = std::min_element(y.begin(), y.end()) - y.begin();
  if (best == 0 || best == n - 1) return std::nullopt;
  return std::make_pair(x[best - 1], x[best + 1]);
}

}  // namespace

unsigned conserved_parity_mask(const ModeOperator& h) {
  const auto& spec = h.spec;
  unsigned mask = 0;
  const double scale = std::max(1.0, h.matrix.cwiseAbs().maxCoeff());
  for (int m = 0; m < spec.n_modes; ++m) {
    const unsigned bit = 1u << m;
    if (mixing(h, [&](Eigen::Index i) { return parity_pattern(i, spec) & bit; }) < tolerance::algebraic * scale) {
      mask |= bit;
    }
  }
  return mask;
}

int SpectrumReport::rank_of(double energy) const {
  if (eigenvalues.empty()) throw std::logic_error("SpectrumReport: no levels");
  int best = 0;
  for (int i = 1; i < static_cast<int>(eigenvalues.size()); ++i) {
    if (std::abs(eigenvalues[i] - energy) < std::abs(eigenvalues[best] - energy)) best = i;
  }
  return best;
}

std::optional<double> SpectrumReport::sector_minimum(unsigned pattern) const {
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    if (parity[i] == (pattern & conserved_mask)) return eigenvalues[i];
  }
  return std::nullopt;
}

SpectrumReport exact_spectrum(const ModeOperator& h, int n_levels) {
  require_hermitian(h, "exact_spectrum");
  if (n_levels < 1) throw std::invalid_argument("exact_spectrum: n_levels must be positive");
  const auto& spec = h.spec;
  const unsigned mask = conserved_parity_mask(h);
  const double scale = std::max(1.0, h.matrix.cwiseAbs().maxCoeff());
  const bool total_conserved =
      mixing(h, [&](Eigen::Index i) { return std::popcount(parity_pattern(i, spec)) % 2; }) <
      tolerance::algebraic * scale;

  auto key_of = [&](Eigen::Index i) {
    const unsigned p = parity_pattern(i, spec);
    unsigned key = p & mask;
    if (total_conserved && std::popcount(p) % 2) key |= total_parity_bit;
    return key;
  };
  std::map<unsigned, std::vector<Eigen::Index>> blocks;
  for (Eigen::Index i = 0; i < spec.dimension(); ++i) blocks[key_of(i)].push_back(i);

  std::vector<Level> levels;
  for (const auto& [key, idx] : blocks) {
    Eigen::SelfAdjointEigenSolver<MatrixX<cplx>> solver(submatrix(h.matrix, idx));
    if (solver.info() != Eigen::Success) throw std::runtime_error("exact_spectrum: eigensolver failed");
    const auto keep = std::min<Eigen::Index>(n_levels, static_cast<Eigen::Index>(idx.size()));
    for (Eigen::Index c = 0; c < keep; ++c) {
      VectorX<cplx> full = VectorX<cplx>::Zero(spec.dimension());
      for (std::size_t a = 0; a < idx.size(); ++a) full(idx[a]) = solver.eigenvectors()(a, c);
      levels.push_back({solver.eigenvalues()(c), key, std::move(full)});
    }
  }

  std::sort(levels.begin(), levels.end(), [](const Level& a, const Level& b) {
    if (std::abs(a.energy - b.energy) > tolerance::parity_tie) return a.energy < b.energy;
    return a.key < b.key;  // total-parity bit is the high bit, so even sorts first
  });
  levels.resize(std::min<std::size_t>(levels.size(), n_levels));

  SpectrumReport report;
  report.spec = spec;
  report.conserved_mask = mask;
  report.eigenvectors.resize(spec.dimension(), static_cast<Eigen::Index>(levels.size()));
  for (std::size_t i = 0; i < levels.size(); ++i) {
    auto& v = levels[i].vector;
    report.eigenvalues.push_back(levels[i].energy);
    report.parity.push_back(levels[i].key & ~total_parity_bit);
    if (total_conserved) {
      report.even.push_back(!(levels[i].key & total_parity_bit));
    } else {
      double p = 0.0;
      for (Eigen::Index j = 0; j < v.size(); ++j) {
        p += std::norm(v(j)) * (std::popcount(parity_pattern(j, spec)) % 2 ? -1.0 : 1.0);
      }
      report.even.push_back(p > 0.0);
    }
    report.eigenvectors.col(i) = v;
  }
  report.gap = report.eigenvalues.size() > 1 ? report.eigenvalues[1] - report.eigenvalues[0] : 0.0;
  return report;
}

std::vector<double> sector_spectrum(const ModeOperator& h, unsigned pattern, unsigned mask, int n_levels) {
  require_hermitian(h, "sector_spectrum");
  const auto idx = sector_indices(h.spec, pattern, mask);
  if (idx.empty()) return {};
  Eigen::SelfAdjointEigenSolver<MatrixX<cplx>> solver(submatrix(h.matrix, idx), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("sector_spectrum: eigensolver failed");
  std::vector<double> out;
  for (Eigen::Index i = 0; i < std::min<Eigen::Index>(n_levels, solver.eigenvalues().size()); ++i) {
    out.push_back(solver.eigenvalues()(i));
  }
  return out;
}

TruncatedState gaussian_family_state(const TruncationSpec& spec, std::span<const double> sigma_sq,
                                     std::optional<int> parity_mode) {
  if (static_cast<int>(sigma_sq.size()) != spec.n_modes) {
    throw std::invalid_argument("gaussian_family_state: one sigma^2 per mode expected");
  }
  auto state = parity_mode ? single_particle_state(*parity_mode, spec) : vacuum_state(spec);
  const auto q = quadratures(spec).q.matrix;
  const HermitianExponential<cplx> q2(q * q);
  for (int k = 0; k < spec.n_modes; ++k) {
    if (sigma_sq[k] != 1.0) state = apply_local(q2(cplx(-0.5 * (sigma_sq[k] - 1.0))), k, state);
  }
  return normalize(state);
}

VariationalOptimum gaussian_variational_optimum(const ModeOperator& h, std::optional<int> parity_mode,
                                                std::vector<int> active_modes) {
  require_hermitian(h, "gaussian_variational_optimum");
  const auto& spec = h.spec;
  if (parity_mode && (*parity_mode < 0 || *parity_mode >= spec.n_modes)) {
    throw std::out_of_range("gaussian_variational_optimum: parity mode out of range");
  }
  if (active_modes.empty()) {
    active_modes.resize(spec.n_modes);
    std::iota(active_modes.begin(), active_modes.end(), 0);
  }
  for (const int k : active_modes) {
    if (k < 0 || k >= spec.n_modes) throw std::out_of_range("gaussian_variational_optimum: mode out of range");
  }

  VariationalOptimum opt;
  opt.sigma_sq.assign(spec.n_modes, 1.0);
  auto energy = [&](const std::vector<double>& s) {
    const auto state = gaussian_family_state(spec, s, parity_mode);
    return std::real(state.amplitudes.dot(h.matrix * state.amplitudes));
  };
  opt.energy = energy(opt.sigma_sq);

  constexpr int max_sweeps = 200;
  for (opt.sweeps = 1; opt.sweeps <= max_sweeps; ++opt.sweeps) {
    const double before = opt.energy;
    for (const int k : active_modes) {
      auto trial = opt.sigma_sq;
      const std::function<double(double)> f = [&](double x) {
        trial[k] = x;
        return energy(trial);
      };
      auto bracket = log_scan(f, 0.05, 20.0);
      if (!bracket) bracket = log_scan(f, 0.01, 100.0);
      if (!bracket) {
        throw std::runtime_error("gaussian_variational_optimum: minimum in mode " + std::to_string(k) +
                                 " not bracketed in sigma^2 in [0.01, 100]");
      }
      const double x = golden_section(f, bracket->first, bracket->second, 1e-10);
      trial[k] = x;
      const double e = energy(trial);
      if (e <= opt.energy) {
        opt.sigma_sq[k] = x;
        opt.energy = e;
      }
    }
    if (active_modes.size() == 1 || before - opt.energy < 1e-14) break;
  }
  return opt;
}

InnerProducts direct_inner_products(std::span<const TruncatedState> states, const ModeOperator& h) {
  const auto n = static_cast<Eigen::Index>(states.size());
  InnerProducts out{Eigen::MatrixXd(n, n), Eigen::MatrixXd(n, n)};
  for (const auto& s : states) detail::require_same_spec(s.spec, h.spec, "direct_inner_products");
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out.T(i, j) = std::real(states[i].amplitudes.dot(states[j].amplitudes));
      out.H(i, j) = std::real(states[i].amplitudes.dot(h.matrix * states[j].amplitudes));
    }
  }
  return out;
}

}  // namespace cvqite
