#include "ors_lab/config.hpp"

#include <charconv>
#include <limits>
#include <fstream>
#include <map>
#include <sstream>
#include <type_traits>
#include <variant>

#include "ors/common/error.hpp"
#include "ors_lab/manifest.hpp"

namespace ors::lab {

namespace {

template <class C, class F>
void for_each_field(C& c, F&& f) {
  f("run", "seed", c.run.seed);
  f("run", "out", c.run.out);

  f("env", "maze", c.env.maze);
  f("env", "gamma", c.env.gamma);
  f("env", "goal", c.env.goal);

  f("dataset", "policy", c.dataset.policy);
  f("dataset", "epsilon", c.dataset.epsilon);
  f("dataset", "n_trajectories", c.dataset.n_trajectories);
  f("dataset", "horizon", c.dataset.horizon);
  f("dataset", "seed", c.dataset.seed);

  f("occupancy", "hidden", c.occupancy.hidden);
  f("occupancy", "layer_norm", c.occupancy.layer_norm);
  f("occupancy", "pretrain_steps", c.occupancy.pretrain_steps);
  f("occupancy", "flow_loss_steps", c.occupancy.flow_loss_steps);
  f("occupancy", "flow_steps_train", c.occupancy.flow_steps_train);
  f("occupancy", "flow_steps_sample", c.occupancy.flow_steps_sample);
  f("occupancy", "batch", c.occupancy.batch);
  f("occupancy", "lr", c.occupancy.lr);
  f("occupancy", "final_lr_ratio", c.occupancy.final_lr_ratio);
  f("occupancy", "target_rate", c.occupancy.target_rate);
  f("occupancy", "future_target_mode", c.occupancy.future_target_mode);

  f("reward", "hidden", c.reward.hidden);
  f("reward", "layer_norm", c.reward.layer_norm);
  f("reward", "steps", c.reward.steps);
  f("reward", "batch", c.reward.batch);
  f("reward", "mc_draws", c.reward.mc_draws);
  f("reward", "lr", c.reward.lr);
  f("reward", "scale", c.reward.scale);
  f("reward", "p_cur", c.reward.p_cur);
  f("reward", "p_traj", c.reward.p_traj);
  f("reward", "p_rand", c.reward.p_rand);

  f("gcrl", "reward", c.gcrl.reward);
  f("gcrl", "kappa", c.gcrl.kappa);
  f("gcrl", "alpha", c.gcrl.alpha);
  f("gcrl", "steps", c.gcrl.steps);
  f("gcrl", "batch", c.gcrl.batch);
  f("gcrl", "table_lr", c.gcrl.table_lr);
  f("gcrl", "target_rate", c.gcrl.target_rate);
  f("gcrl", "critic_p_cur", c.gcrl.critic_p_cur);
  f("gcrl", "critic_p_traj", c.gcrl.critic_p_traj);
  f("gcrl", "critic_p_rand", c.gcrl.critic_p_rand);
  f("gcrl", "actor_p_cur", c.gcrl.actor_p_cur);
  f("gcrl", "actor_p_traj", c.gcrl.actor_p_traj);
  f("gcrl", "actor_p_rand", c.gcrl.actor_p_rand);
  f("gcrl", "eval_episodes", c.gcrl.eval_episodes);
  f("gcrl", "eval_horizon", c.gcrl.eval_horizon);

  f("analysis", "sigmas", c.analysis.sigmas);
  f("analysis", "seeds", c.analysis.seeds);
  f("analysis", "modes", c.analysis.modes);

  f("verify", "tol", c.verify.tol);
  f("verify", "goals", c.verify.goals);
  f("verify", "family_mazes", c.verify.family_mazes);
  f("verify", "goals_per_maze", c.verify.goals_per_maze);
  f("verify", "gammas", c.verify.gammas);
  f("verify", "prop2_draws", c.verify.prop2_draws);
}

// ---- formatting ----

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, res.ptr);
  if (s == "inf") return "inf";
  if (s == "-inf") return "-inf";
  if (s == "nan" || s == "-nan") return "nan";
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += ch;
    }
  }
  return out + "\"";
}

std::string format(std::int64_t v) { return std::to_string(v); }
std::string format(double v) { return format_double(v); }
std::string format(bool v) { return v ? "true" : "false"; }
std::string format(const std::string& v) { return quote(v); }
template <class T>
std::string format(const std::vector<T>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format(v[i]);
  }
  return out + "]";
}

// ---- parsing ----

struct Scalar {
  enum class Kind { integer, floating, boolean, string } kind;
  std::int64_t i = 0;
  double d = 0.0;
  bool b = false;
  std::string s;
};

using Value = std::variant<Scalar, std::vector<Scalar>>;

class LineParser {
 public:
  LineParser(std::string_view text, int line) : text_(text), line_(line) {}

  Value value() {
    skip_ws();
    if (peek() == '[') {
      ++pos_;
      std::vector<Scalar> items;
      skip_ws();
      if (peek() == ']') {
        ++pos_;
      } else {
        while (true) {
          items.push_back(scalar());
          skip_ws();
          if (peek() == ',') {
            ++pos_;
            skip_ws();
            if (peek() == ']') {
              ++pos_;
              break;
            }
            continue;
          }
          if (peek() == ']') {
            ++pos_;
            break;
          }
          fail("expected ',' or ']' in array");
        }
      }
      finish();
      return items;
    }
    Scalar s = scalar();
    finish();
    return s;
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_); }

  void finish() {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] != '#') fail("unexpected trailing characters");
  }

  Scalar scalar() {
    skip_ws();
    const char c = peek();
    if (c == '"') return string();
    std::size_t end = pos_;
    while (end < text_.size() && text_[end] != ',' && text_[end] != ']' && text_[end] != ' ' && text_[end] != '\t' &&
           text_[end] != '#')
      ++end;
    std::string tok(text_.substr(pos_, end - pos_));
    pos_ = end;
    if (tok.empty()) fail("missing value");
    Scalar out{};
    if (tok == "true" || tok == "false") {
      out.kind = Scalar::Kind::boolean;
      out.b = tok == "true";
      return out;
    }
    std::string clean;
    for (char ch : tok)
      if (ch != '_') clean += ch;
    if (clean == "inf" || clean == "+inf" || clean == "-inf" || clean == "nan" || clean == "+nan" || clean == "-nan") {
      out.kind = Scalar::Kind::floating;
      out.d = clean.find("nan") != std::string::npos ? std::numeric_limits<double>::quiet_NaN()
              : clean[0] == '-'                      ? -std::numeric_limits<double>::infinity()
                                                     : std::numeric_limits<double>::infinity();
      return out;
    }
    const char* first = clean.data() + (clean[0] == '+' ? 1 : 0);
    const char* last = clean.data() + clean.size();
    if (clean.find_first_of(".eE") == std::string::npos) {
      out.kind = Scalar::Kind::integer;
      const auto res = std::from_chars(first, last, out.i);
      if (res.ec != std::errc() || res.ptr != last) fail("bad integer '" + tok + "'");
      return out;
    }
    out.kind = Scalar::Kind::floating;
    const auto res = std::from_chars(first, last, out.d);
    if (res.ec != std::errc() || res.ptr != last) fail("bad number '" + tok + "'");
    return out;
  }

  Scalar string() {
    ++pos_;
    Scalar out{};
    out.kind = Scalar::Kind::string;
    while (true) {
      if (pos_ >= text_.size()) fail("unterminated string");
      const char ch = text_[pos_++];
      if (ch == '"') break;
      if (ch == '\\') {
        if (pos_ >= text_.size()) fail("unterminated escape");
        const char e = text_[pos_++];
        switch (e) {
          case '"': out.s += '"'; break;
          case '\\': out.s += '\\'; break;
          case 'n': out.s += '\n'; break;
          case 't': out.s += '\t'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      } else {
        out.s += ch;
      }
    }
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_;
};

template <class T>
T convert(const Scalar& s, int line, const std::string& key) {
  if constexpr (std::is_same_v<T, bool>) {
    if (s.kind != Scalar::Kind::boolean) throw ParseError(key + " expects true or false", line);
    return s.b;
  } else if constexpr (std::is_same_v<T, std::int64_t>) {
    if (s.kind != Scalar::Kind::integer) throw ParseError(key + " expects an integer", line);
    return s.i;
  } else if constexpr (std::is_same_v<T, double>) {
    if (s.kind == Scalar::Kind::integer) return static_cast<double>(s.i);
    if (s.kind != Scalar::Kind::floating) throw ParseError(key + " expects a number", line);
    return s.d;
  } else {
    if (s.kind != Scalar::Kind::string) throw ParseError(key + " expects a string", line);
    return s.s;
  }
}

template <class T>
struct IsVector : std::false_type {};
template <class T>
struct IsVector<std::vector<T>> : std::true_type {};

template <class T>
void assign(T& field, const Value& v, int line, const std::string& key) {
  if constexpr (IsVector<T>::value) {
    const auto* items = std::get_if<std::vector<Scalar>>(&v);
    if (!items) throw ParseError(key + " expects an array", line);
    T out;
    for (const auto& s : *items) out.push_back(convert<typename T::value_type>(s, line, key));
    field = std::move(out);
  } else {
    const auto* s = std::get_if<Scalar>(&v);
    if (!s) throw ParseError(key + " does not take an array", line);
    field = convert<T>(*s, line, key);
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  std::map<std::string, bool> sections;
  for_each_field(config, [&](const char* section, const char*, auto&) { sections[section] = true; });

  std::string section;
  std::map<std::string, int> seen;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    const std::string_view raw = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      const std::size_t close = line.find(']');
      if (close == std::string_view::npos) throw ParseError("unterminated section header", line_no);
      const std::string_view rest = trim(line.substr(close + 1));
      if (!rest.empty() && rest.front() != '#') throw ParseError("unexpected text after section header", line_no);
      section = std::string(trim(line.substr(1, close - 1)));
      if (!sections.count(section)) throw ParseError("unknown section [" + section + "]", line_no);
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key = value", line_no);
    const std::string key(trim(line.substr(0, eq)));
    if (section.empty()) throw ParseError("key '" + key + "' outside any section", line_no);
    const std::string full = section + "." + key;
    if (seen.count(full)) throw ParseError("duplicate key " + full, line_no);
    seen[full] = line_no;
    LineParser parser(line.substr(eq + 1), line_no);
    const Value value = parser.value();
    bool matched = false;
    for_each_field(config, [&](const char* sec, const char* k, auto& field) {
      if (matched || section != sec || key != k) return;
      assign(field, value, line_no, full);
      matched = true;
    });
    if (!matched) throw ParseError("unknown key " + full, line_no);
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_toml(const RunConfig& config) {
  std::string out;
  std::string section;
  for_each_field(config, [&](const char* sec, const char* key, const auto& field) {
    if (section != sec) {
      if (!section.empty()) out += "\n";
      section = sec;
      out += "[" + section + "]\n";
    }
    out += std::string(key) + " = " + format(field) + "\n";
  });
  return out;
}

std::string config_hash(const RunConfig& config) { return sha256_hex(to_toml(config)); }

}  // namespace ors::lab
