#include "cvqite/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace cvqite {
namespace {

using nlohmann::json;

// Reads keys from one JSON object and rejects the ones nobody asked for.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail("", "expected an object");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError("config: " + dotted(key) + ": " + what);
  }

  std::string dotted(const std::string& key) const {
    if (path_.empty()) return key.empty() ? "<root>" : key;
    return key.empty() ? path_ : path_ + "." + key;
  }

  const json* find(const std::string& key) {
    used_.insert(key);
    const auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  std::optional<double> number(const std::string& key) {
    const auto* v = find(key);
    if (!v) return std::nullopt;
    if (!v->is_number()) fail(key, "expected a number");
    return v->get<double>();
  }

  std::optional<int> integer(const std::string& key) {
    const auto* v = find(key);
    if (!v) return std::nullopt;
    if (!v->is_number_integer()) fail(key, "expected an integer");
    return v->get<int>();
  }

  std::optional<bool> boolean(const std::string& key) {
    const auto* v = find(key);
    if (!v) return std::nullopt;
    if (!v->is_boolean()) fail(key, "expected true or false");
    return v->get<bool>();
  }

  std::optional<std::string> string(const std::string& key) {
    const auto* v = find(key);
    if (!v) return std::nullopt;
    if (!v->is_string()) fail(key, "expected a string");
    return v->get<std::string>();
  }

  template <typename T>
  std::optional<std::vector<T>> array(const std::string& key) {
    const auto* v = find(key);
    if (!v) return std::nullopt;
    if (!v->is_array()) fail(key, "expected an array");
    std::vector<T> out;
    for (const auto& e : *v) {
      if constexpr (std::is_same_v<T, int>) {
        if (!e.is_number_integer()) fail(key, "expected an array of integers");
      } else if constexpr (std::is_same_v<T, double>) {
        if (!e.is_number()) fail(key, "expected an array of numbers");
      } else {
        if (!e.is_string()) fail(key, "expected an array of strings");
      }
      out.push_back(e.get<T>());
    }
    return out;
  }

  std::optional<Section> child(const std::string& key) {
    const auto* v = find(key);
    if (!v) return std::nullopt;
    return Section(*v, dotted(key));
  }

  template <typename E>
  std::optional<E> choice(const std::string& key, std::initializer_list<std::pair<const char*, E>> options) {
    const auto s = string(key);
    if (!s) return std::nullopt;
    std::string names;
    for (const auto& [name, value] : options) {
      if (*s == name) return value;
      names += names.empty() ? name : std::string(", ") + name;
    }
    fail(key, "unknown value '" + *s + "' (expected one of " + names + ")");
  }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!used_.count(key)) fail(key, "unknown key");
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> used_;
};

template <typename T>
void assign(T& target, const std::optional<T>& value) {
  if (value) target = *value;
}

int line_of(const std::string& text, std::size_t byte) {
  const auto end = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(end), '\n'));
}

}  // namespace

void RunConfig::validate() const {
  auto check = [](auto&& fn) {
    try {
      fn();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: ") + e.what());
    } catch (const std::overflow_error& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  };
  check([&] { lattice.validate(); });
  check([&] { TruncationSpec{n_cutoff, lattice.L}.validate(); });
  check([&] { qite.validate(lattice.L); });
  if (initial.kind == InitialState::Kind::single_particle && (initial.k < 0 || initial.k >= lattice.L)) {
    throw ConfigError("config: initial_state.k = " + std::to_string(initial.k) + " is not a mode of L = " +
                      std::to_string(lattice.L));
  }
  for (const auto& s : qlanczos.selections) check([&] { s.validate(); });
  if (oracle.n_levels < 1) throw ConfigError("config: oracle.n_levels must be positive");
  if (oracle.reference_cutoff && *oracle.reference_cutoff < 2) {
    throw ConfigError("config: oracle.reference_cutoff must be >= 2");
  }
  for (const double d : sensitivity.delta_r) {
    if (!(d >= 0.0)) throw ConfigError("config: sensitivity.delta_r entries must be >= 0");
  }
  for (const double h : sensitivity.spacings) {
    if (!(h > 0.0)) throw ConfigError("config: sensitivity.spacings entries must be > 0");
  }
  if (sensitivity.n_cutoff < 2) throw ConfigError("config: sensitivity.n_cutoff must be >= 2");
  if (!(sensitivity.sigma_sq > 0.0)) throw ConfigError("config: sensitivity.sigma_sq must be > 0");
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: syntax error at line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }

  RunConfig cfg;
  Section root(doc, "");
  assign(cfg.tag, root.string("tag"));
  if (const auto out = root.string("outputs")) cfg.outputs = *out;
  assign(cfg.assumed, root.array<std::string>("assumed"));

  if (auto s = root.child("lattice")) {
    assign(cfg.lattice.L, s->integer("L"));
    assign(cfg.lattice.m0_sq, s->number("m0_sq"));
    assign(cfg.lattice.delta_m, s->number("delta_m"));
    assign(cfg.lattice.lambda, s->number("lambda"));
    assign(cfg.zero_point,
           s->choice<ZeroPoint>("zero_point", {{"subtracted", ZeroPoint::subtracted}, {"included", ZeroPoint::included}}));
    s->finish();
  } else {
    root.fail("lattice", "missing section");
  }

  if (auto s = root.child("truncation")) {
    assign(cfg.n_cutoff, s->integer("n_cutoff"));
    s->finish();
  }

  if (auto s = root.child("qite")) {
    auto& q = cfg.qite;
    assign(q.delta_tau, s->number("delta_tau"));
    assign(q.n_steps, s->integer("n_steps"));
    assign(q.estimator,
           s->choice<Estimator>("estimator", {{"exact", Estimator::exact}, {"measurement", Estimator::measurement}}));
    assign(q.eta_spacing, s->number("eta_spacing"));
    assign(q.stencil_extra_points, s->integer("stencil_extra_points"));
    assign(q.active_modes, s->array<int>("active_modes"));
    assign(q.convergence_tol, s->number("convergence_tol"));
    assign(q.truncation_guard, s->number("truncation_guard"));
    assign(q.stop_at_convergence, s->boolean("stop_at_convergence"));
    s->finish();
  }

  if (auto s = root.child("initial_state")) {
    assign(cfg.initial.kind, s->choice<InitialState::Kind>("kind", {{"vacuum", InitialState::Kind::vacuum},
                                                                   {"single_particle", InitialState::Kind::single_particle}}));
    assign(cfg.initial.k, s->integer("k"));
    s->finish();
  }

  if (auto s = root.child("qlanczos")) {
    auto& q = cfg.qlanczos;
    if (const auto* sel = s->find("selections")) {
      if (!sel->is_array()) s->fail("selections", "expected an array of step lists");
      for (const auto& e : *sel) {
        if (!e.is_array()) s->fail("selections", "expected an array of step lists");
        KrylovSelection k;
        for (const auto& v : e) {
          if (!v.is_number_integer()) s->fail("selections", "steps must be integers");
          k.steps.push_back(v.get<int>());
        }
        q.selections.push_back(std::move(k));
      }
    }
    assign(q.mode, s->choice<KrylovMode>("mode", {{"from_trace", KrylovMode::from_trace},
                                                  {"from_states", KrylovMode::from_states}}));
    assign(q.formula,
           s->choice<T12Formula>("t12_formula", {{"squared", T12Formula::squared}, {"printed", T12Formula::printed}}));
    assign(q.recursion, s->choice<CRecursion>("c_recursion", {{"exact", CRecursion::exact},
                                                               {"first_order", CRecursion::first_order}}));
    s->finish();
  }

  if (auto s = root.child("oracle")) {
    assign(cfg.oracle.n_levels, s->integer("n_levels"));
    if (const auto r = s->integer("reference_cutoff")) cfg.oracle.reference_cutoff = *r;
    s->finish();
  }

  if (auto s = root.child("sensitivity")) {
    auto& o = cfg.sensitivity;
    assign(o.delta_r, s->array<double>("delta_r"));
    assign(o.spacings, s->array<double>("spacings"));
    assign(o.n_cutoff, s->integer("n_cutoff"));
    assign(o.sigma_sq, s->number("sigma_sq"));
    s->finish();
  }

  root.finish();
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace cvqite
