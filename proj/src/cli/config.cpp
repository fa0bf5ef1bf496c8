#include "logsol/cli/config.hpp"

#include "logsol/errors.hpp"

#include <climits>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

namespace logsol::cli {

using nlohmann::json;

std::string to_string(RunMode m) {
  switch (m) {
  case RunMode::Solve:
    return "solve";
  case RunMode::Multistart:
    return "multistart";
  case RunMode::Gausson:
    return "gausson";
  case RunMode::CheckLogSob:
    return "check-logsob";
  case RunMode::PSolve:
    return "p-solve";
  }
  return "unknown";
}

std::optional<RunMode> parse_mode(std::string_view name) {
  for (RunMode m : {RunMode::Solve, RunMode::Multistart, RunMode::Gausson, RunMode::CheckLogSob, RunMode::PSolve})
    if (to_string(m) == name)
      return m;
  return std::nullopt;
}

ConfigError::ConfigError(int line, const std::string &what)
    : std::runtime_error(what), line_(line) {}

Grid ExperimentConfig::grid() const { return Grid(dim, cells, box, boundary, origin); }

namespace {

// Input iterator over the config text that counts consumed newlines, so the
// SAX pass below knows the line of every key as it is reported.
class CountingIterator {
public:
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char *;
  using reference = const char &;

  CountingIterator(const char *p, int *lines) : p_(p), lines_(lines) {}
  reference operator*() const { return *p_; }
  CountingIterator &operator++() {
    if (*p_ == '\n')
      ++*lines_;
    ++p_;
    return *this;
  }
  CountingIterator operator++(int) {
    CountingIterator old = *this;
    ++*this;
    return old;
  }
  bool operator==(const CountingIterator &o) const { return p_ == o.p_; }
  bool operator!=(const CountingIterator &o) const { return p_ != o.p_; }

private:
  const char *p_;
  int *lines_;
};

// Records "/a/b" -> line for every object key.
class KeyLineSax : public json::json_sax_t {
public:
  explicit KeyLineSax(const int *lines) : lines_(lines) {}
  std::map<std::string, int> key_lines;

  bool null() override { return value(); }
  bool boolean(bool) override { return value(); }
  bool number_integer(number_integer_t) override { return value(); }
  bool number_unsigned(number_unsigned_t) override { return value(); }
  bool number_float(number_float_t, const string_t &) override { return value(); }
  bool string(string_t &) override { return value(); }
  bool binary(binary_t &) override { return value(); }
  bool start_object(std::size_t) override {
    open(false);
    return true;
  }
  bool key(string_t &k) override {
    frames_.back().key = k;
    key_lines[path()] = *lines_ + 1;
    return true;
  }
  bool end_object() override {
    close();
    return true;
  }
  bool start_array(std::size_t) override {
    open(true);
    return true;
  }
  bool end_array() override {
    close();
    return true;
  }
  bool parse_error(std::size_t, const std::string &, const nlohmann::detail::exception &) override {
    return false;
  }

private:
  struct Frame {
    bool array;
    std::string key;
    std::size_t index = 0;
  };

  std::string path() const {
    std::string p;
    for (const Frame &f : frames_)
      p += "/" + (f.array ? std::to_string(f.index) : f.key);
    return p;
  }
  void open(bool array) { frames_.push_back({array, {}, 0}); }
  void close() {
    frames_.pop_back();
    value();
  }
  bool value() {
    if (!frames_.empty() && frames_.back().array)
      ++frames_.back().index;
    return true;
  }

  const int *lines_;
  std::vector<Frame> frames_;
};

// Typed access to one JSON object with line-aware errors.
class Node {
public:
  Node(const json &j, std::string path, const std::map<std::string, int> &lines)
      : j_(j), path_(std::move(path)), lines_(lines) {
    if (!j_.is_object())
      fail_here("expected an object");
  }

  [[noreturn]] void fail(const std::string &key, const std::string &what) const {
    const std::string p = path_ + "/" + key;
    auto it = lines_.find(p);
    const int line = it != lines_.end() ? it->second : own_line();
    throw ConfigError(line, display(p) + ": " + what);
  }
  [[noreturn]] void fail_here(const std::string &what) const {
    throw ConfigError(own_line(), display(path_.empty() ? "/" : path_) + ": " + what);
  }

  bool has(const std::string &key) const { return j_.contains(key); }

  void allow_only(std::initializer_list<const char *> keys) const {
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!allowed.count(it.key()))
        fail(it.key(), "unknown key");
  }

  Node child(const std::string &key) const {
    if (!has(key))
      fail_here("missing required key \"" + key + "\"");
    if (!j_.at(key).is_object())
      fail(key, "expected an object");
    return Node(j_.at(key), path_ + "/" + key, lines_);
  }

  const json &raw(const std::string &key) const {
    if (!has(key))
      fail_here("missing required key \"" + key + "\"");
    return j_.at(key);
  }

  double number(const std::string &key) const {
    const json &v = raw(key);
    if (!v.is_number())
      fail(key, "expected a number");
    return v.get<double>();
  }
  double number(const std::string &key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }
  long long wide_integer(const std::string &key, long long fallback) const {
    if (!has(key))
      return fallback;
    const json &v = raw(key);
    if (!v.is_number_integer())
      fail(key, "expected an integer");
    if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(LLONG_MAX))
      fail(key, "integer out of range");
    return v.get<long long>();
  }
  int integer(const std::string &key, int fallback) const {
    const long long v = wide_integer(key, fallback);
    if (v < INT_MIN || v > INT_MAX)
      fail(key, "integer out of range");
    return static_cast<int>(v);
  }
  bool boolean(const std::string &key, bool fallback) const {
    if (!has(key))
      return fallback;
    const json &v = raw(key);
    if (!v.is_boolean())
      fail(key, "expected true or false");
    return v.get<bool>();
  }
  std::string text(const std::string &key) const {
    const json &v = raw(key);
    if (!v.is_string())
      fail(key, "expected a string");
    return v.get<std::string>();
  }
  std::string text(const std::string &key, const std::string &fallback) const {
    return has(key) ? text(key) : fallback;
  }
  std::vector<double> numbers(const std::string &key) const {
    const json &v = raw(key);
    if (!v.is_array())
      fail(key, "expected an array of numbers");
    std::vector<double> out;
    for (const json &e : v) {
      if (!e.is_number())
        fail(key, "expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }
  std::vector<Node> objects(const std::string &key) const {
    const json &v = raw(key);
    if (!v.is_array())
      fail(key, "expected an array of objects");
    std::vector<Node> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_object())
        fail(key, "expected an array of objects");
      out.emplace_back(v[i], path_ + "/" + key + "/" + std::to_string(i), lines_);
    }
    return out;
  }

private:
  int own_line() const {
    auto it = lines_.find(path_);
    if (it != lines_.end())
      return it->second;
    // Array elements have no key of their own: fall back to the enclosing key.
    std::string p = path_;
    while (!p.empty()) {
      p = p.substr(0, p.rfind('/'));
      auto up = lines_.find(p);
      if (up != lines_.end())
        return up->second;
    }
    return 1;
  }
  static std::string display(const std::string &pointer) {
    std::string s = pointer.substr(pointer.empty() ? 0 : 1);
    for (char &ch : s)
      if (ch == '/')
        ch = '.';
    return s.empty() ? "<root>" : s;
  }

  const json &j_;
  std::string path_;
  const std::map<std::string, int> &lines_;
};

std::array<int, 2> int_pair(const Node &n, const std::string &key, int dim) {
  const std::vector<double> v = n.numbers(key);
  if (static_cast<int>(v.size()) != dim)
    n.fail(key, "expected " + std::to_string(dim) + " entries (one per axis)");
  std::array<int, 2> out{1, 1};
  for (int a = 0; a < dim; ++a) {
    if (v[a] != std::floor(v[a]) || std::abs(v[a]) > 1e9)
      n.fail(key, "expected integers of moderate size");
    out[a] = static_cast<int>(v[a]);
  }
  return out;
}

std::array<double, 2> real_pair(const Node &n, const std::string &key, int dim,
                                std::array<double, 2> fallback) {
  if (!n.has(key))
    return fallback;
  const std::vector<double> v = n.numbers(key);
  if (static_cast<int>(v.size()) != dim)
    n.fail(key, "expected " + std::to_string(dim) + " entries (one per axis)");
  std::array<double, 2> out = fallback;
  for (int a = 0; a < dim; ++a)
    out[a] = v[a];
  return out;
}

Profile parse_profile(const Node &n, int dim) {
  n.allow_only({"constant", "modes"});
  Profile p;
  p.constant = n.number("constant", 0.0);
  if (n.has("modes")) {
    for (const Node &m : n.objects("modes")) {
      m.allow_only({"kind", "amplitude", "frequency", "phase"});
      Mode mode;
      const std::string kind = m.text("kind", "cos");
      if (kind == "cos")
        mode.kind = Mode::Kind::Cos;
      else if (kind == "sin")
        mode.kind = Mode::Kind::Sin;
      else
        m.fail("kind", "expected \"cos\" or \"sin\"");
      mode.amplitude = m.number("amplitude");
      mode.frequency = real_pair(m, "frequency", dim, {0.0, 0.0});
      for (int a = 0; a < dim; ++a)
        if (mode.frequency[a] != std::floor(mode.frequency[a]))
          m.fail("frequency", "frequencies must be integers (coefficients are 1-periodic)");
      mode.phase = m.number("phase", 0.0);
      p.modes.push_back(mode);
    }
  }
  return p;
}

SolverConfig parse_solver(const Node &n) {
  n.allow_only({"max_iters", "tol_residual", "step_init", "armijo_c", "armijo_shrink", "seed",
                "n_starts", "dedup_tol", "preconditioner", "memory", "max_bumps", "jitter",
                "symmetric_starts"});
  SolverConfig s;
  s.max_iters = n.integer("max_iters", s.max_iters);
  s.tol_residual = n.number("tol_residual", s.tol_residual);
  s.step_init = n.number("step_init", s.step_init);
  s.armijo_c = n.number("armijo_c", s.armijo_c);
  s.armijo_shrink = n.number("armijo_shrink", s.armijo_shrink);
  const long long seed = n.wide_integer("seed", static_cast<long long>(s.seed));
  if (seed < 0)
    n.fail("seed", "must be non-negative");
  s.seed = static_cast<std::uint64_t>(seed);
  s.n_starts = n.integer("n_starts", s.n_starts);
  s.dedup_tol = n.number("dedup_tol", s.dedup_tol);
  const std::string pre = n.text("preconditioner", "h1");
  if (pre == "h1")
    s.preconditioner = Preconditioner::H1;
  else if (pre == "none")
    s.preconditioner = Preconditioner::None;
  else
    n.fail("preconditioner", "expected \"h1\" or \"none\"");
  s.memory = n.integer("memory", s.memory);
  s.max_bumps = n.integer("max_bumps", s.max_bumps);
  s.jitter = n.number("jitter", s.jitter);
  s.symmetric_starts = n.boolean("symmetric_starts", s.symmetric_starts);
  try {
    s.validate();
  } catch (const InvalidArgument &e) {
    n.fail_here(e.what());
  }
  return s;
}

ExperimentConfig build(const json &root, const std::map<std::string, int> &lines, RunMode mode) {
  const Node top(root, "", lines);
  top.allow_only({"mode", "grid", "coefficients", "split_delta", "solver", "initial", "p",
                  "logsob"});
  ExperimentConfig c;
  c.mode = mode;
  if (top.has("mode")) {
    const auto m = parse_mode(top.text("mode"));
    if (!m)
      top.fail("mode", "unknown mode");
    if (*m != mode)
      top.fail("mode", "config is for \"" + to_string(*m) + "\" but subcommand is \"" +
                           to_string(mode) + "\"");
  }

  const Node grid = top.child("grid");
  grid.allow_only({"dim", "cells", "box", "boundary", "origin"});
  c.dim = grid.integer("dim", 1);
  if (c.dim != 1 && c.dim != 2)
    grid.fail("dim", "must be 1 or 2");
  c.cells = int_pair(grid, "cells", c.dim);
  const std::vector<double> box = grid.numbers("box");
  if (static_cast<int>(box.size()) != c.dim)
    grid.fail("box", "expected one length per axis");
  for (int a = 0; a < c.dim; ++a)
    c.box[a] = box[a];
  const std::string boundary = grid.text("boundary", "periodic");
  if (boundary == "periodic")
    c.boundary = Boundary::Periodic;
  else if (boundary == "dirichlet")
    c.boundary = Boundary::Dirichlet;
  else
    grid.fail("boundary", "expected \"periodic\" or \"dirichlet\"");
  c.origin = real_pair(grid, "origin", c.dim, {0.0, 0.0});
  try {
    (void)c.grid();
  } catch (const Error &e) {
    grid.fail_here(e.what());
  }

  const Node coeffs = top.child("coefficients");
  coeffs.allow_only({"name", "V", "Q"});
  c.coefficients.name = coeffs.text("name", "custom");
  c.coefficients.V = parse_profile(coeffs.child("V"), c.dim);
  c.coefficients.Q = parse_profile(coeffs.child("Q"), c.dim);
  try {
    (void)make_coefficients(c.coefficients, c.grid());
  } catch (const Error &e) {
    coeffs.fail_here(e.what());
  }

  c.split_delta = top.number("split_delta", c.split_delta);
  try {
    (void)SplitParams(c.split_delta);
  } catch (const Error &e) {
    top.fail("split_delta", e.what());
  }

  if (top.has("solver"))
    c.solver = parse_solver(top.child("solver"));

  if (top.has("initial")) {
    const Node init = top.child("initial");
    init.allow_only({"kind", "center", "amplitude", "sigma", "perturbation"});
    const std::string kind = init.text("kind", "random");
    if (kind == "random")
      c.initial.kind = InitialSpec::Kind::Random;
    else if (kind == "bump")
      c.initial.kind = InitialSpec::Kind::Bump;
    else if (kind == "gausson")
      c.initial.kind = InitialSpec::Kind::Gausson;
    else
      init.fail("kind", "expected \"random\", \"bump\" or \"gausson\"");
    c.initial.center = real_pair(init, "center", c.dim, {0.0, 0.0});
    c.initial.amplitude = init.number("amplitude", 1.0);
    c.initial.sigma = init.number("sigma", 1.0);
    if (!(c.initial.sigma > 0.0))
      init.fail("sigma", "must be positive");
    c.initial.perturbation = init.number("perturbation", 0.0);
    if (c.initial.kind == InitialSpec::Kind::Gausson && !c.coefficients.is_constant())
      init.fail("kind", "a Gausson start needs constant coefficients");
  }

  if (mode == RunMode::Gausson && !top.has("initial")) {
    // Default oracle start: a unit bump at the box centre, where the analytic
    // Gausson sits (J is translation invariant for constant coefficients).
    c.initial.kind = InitialSpec::Kind::Bump;
    for (int a = 0; a < c.dim; ++a)
      c.initial.center[a] = c.origin[a] + 0.5 * c.box[a];
  }

  if (top.has("p")) {
    c.p = top.number("p");
    try {
      (void)PLapParams(*c.p);
    } catch (const Error &e) {
      top.fail("p", e.what());
    }
  }
  if (mode == RunMode::PSolve && !c.p)
    top.fail_here("p-solve needs the exponent \"p\"");

  if (top.has("logsob")) {
    const Node ls = top.child("logsob");
    ls.allow_only({"fields", "a", "weighted_a", "tolerance"});
    c.logsob.fields = ls.integer("fields", c.logsob.fields);
    if (c.logsob.fields <= 0)
      ls.fail("fields", "must be positive");
    if (ls.has("a")) {
      c.logsob.a = ls.numbers("a");
      if (c.logsob.a.empty())
        ls.fail("a", "needs at least one value");
      for (double a : c.logsob.a)
        if (!(a > 0.0))
          ls.fail("a", "values must be positive");
    }
    if (ls.has("weighted_a")) {
      c.logsob.weighted_a = ls.number("weighted_a");
      if (!(*c.logsob.weighted_a > 0.0))
        ls.fail("weighted_a", "must be positive");
    }
    c.logsob.tolerance = ls.number("tolerance", c.logsob.tolerance);
  }

  if (mode == RunMode::Gausson && !c.coefficients.is_constant())
    coeffs.fail_here("gausson mode needs constant V and Q");
  if (mode == RunMode::Gausson) {
    try {
      (void)gausson(c.coefficients.V.constant, c.coefficients.Q.constant, c.grid());
    } catch (const Error &e) {
      grid.fail_here(e.what());
    }
  }
  return c;
}

int line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

} // namespace

ExperimentConfig parse_config(std::string_view text, RunMode mode) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error &e) {
    // e.byte is 1-based and points just past the offending character.
    throw ConfigError(line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0), e.what());
  }
  int lines = 0;
  KeyLineSax sax(&lines);
  json::sax_parse(CountingIterator(text.data(), &lines),
                  CountingIterator(text.data() + text.size(), &lines), &sax);
  return build(root, sax.key_lines, mode);
}

ExperimentConfig load_config(const std::string &path, RunMode mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ConfigError(0, "cannot open config file " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config(text, mode);
}

namespace {

json profile_json(const Profile &p, int dim) {
  json modes = json::array();
  for (const Mode &m : p.modes) {
    json freq = json::array();
    for (int a = 0; a < dim; ++a)
      freq.push_back(m.frequency[a]);
    modes.push_back({{"kind", m.kind == Mode::Kind::Cos ? "cos" : "sin"},
                     {"amplitude", m.amplitude},
                     {"frequency", freq},
                     {"phase", m.phase}});
  }
  return {{"constant", p.constant}, {"modes", modes}};
}

template <typename T> json axes(const std::array<T, 2> &v, int dim) {
  json out = json::array();
  for (int a = 0; a < dim; ++a)
    out.push_back(v[a]);
  return out;
}

} // namespace

json to_json(const ExperimentConfig &c) {
  json j;
  j["mode"] = to_string(c.mode);
  j["grid"] = {{"dim", c.dim},
               {"cells", axes(c.cells, c.dim)},
               {"box", axes(c.box, c.dim)},
               {"boundary", c.boundary == Boundary::Periodic ? "periodic" : "dirichlet"},
               {"origin", axes(c.origin, c.dim)}};
  j["coefficients"] = {{"name", c.coefficients.name},
                       {"V", profile_json(c.coefficients.V, c.dim)},
                       {"Q", profile_json(c.coefficients.Q, c.dim)}};
  j["split_delta"] = c.split_delta;
  const SolverConfig &s = c.solver;
  j["solver"] = {{"max_iters", s.max_iters},
                 {"tol_residual", s.tol_residual},
                 {"step_init", s.step_init},
                 {"armijo_c", s.armijo_c},
                 {"armijo_shrink", s.armijo_shrink},
                 {"seed", s.seed},
                 {"n_starts", s.n_starts},
                 {"dedup_tol", s.dedup_tol},
                 {"preconditioner", s.preconditioner == Preconditioner::H1 ? "h1" : "none"},
                 {"memory", s.memory},
                 {"max_bumps", s.max_bumps},
                 {"jitter", s.jitter},
                 {"symmetric_starts", s.symmetric_starts}};
  const char *kinds[] = {"random", "bump", "gausson"};
  j["initial"] = {{"kind", kinds[static_cast<int>(c.initial.kind)]},
                  {"center", axes(c.initial.center, c.dim)},
                  {"amplitude", c.initial.amplitude},
                  {"sigma", c.initial.sigma},
                  {"perturbation", c.initial.perturbation}};
  if (c.p)
    j["p"] = *c.p;
  json ls = {{"fields", c.logsob.fields}, {"a", c.logsob.a}, {"tolerance", c.logsob.tolerance}};
  if (c.logsob.weighted_a)
    ls["weighted_a"] = *c.logsob.weighted_a;
  j["logsob"] = ls;
  return j;
}

} // namespace logsol::cli
