#include "amc/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "amc/errors.hpp"

namespace amc {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

struct Context {
  int line;
  std::string key;

  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError(line, key, "line " + std::to_string(line) + ": key '" + key + "': " + why);
  }

  double number(std::string_view v) const {
    const auto d = to_double(v);
    if (!d) fail("expected a number, got '" + std::string(v) + "'");
    return *d;
  }

  // Accepts 1e6-style values as long as they are integral.
  std::uint64_t count(std::string_view v) const {
    const double d = number(v);
    if (d < 0.0 || d != std::floor(d) || d > 9.0e18) fail("expected a non-negative integer");
    return static_cast<std::uint64_t>(d);
  }

  int integer(std::string_view v) const {
    const auto c = count(v);
    if (c > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) fail("integer too large");
    return static_cast<int>(c);
  }

  bool flag(std::string_view v) const {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail("expected true or false");
  }
};

using Setter = std::function<void(RunConfig&, std::string_view, const Context&)>;

struct Key {
  std::string_view section;
  std::string_view name;
  Setter set;
};

std::string join_archs(const std::vector<Architecture>& archs) {
  std::string out;
  for (const auto a : archs) {
    if (!out.empty()) out += ", ";
    out += to_string(a);
  }
  return out;
}

std::string oracle_mode_text(const std::vector<OracleMode>& modes) {
  if (modes.size() == 2) return "both";
  return std::string(to_string(modes.front()));
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      {"channel", "D_um2_per_s",
       [](RunConfig& c, std::string_view v, const Context& x) { c.setup.channel.diffusion = x.number(v); }},
      {"channel", "distance_um",
       [](RunConfig& c, std::string_view v, const Context& x) { c.setup.channel.distance = x.number(v); }},
      {"channel", "N1",
       [](RunConfig& c, std::string_view v, const Context& x) {
         const double ratio = c.setup.channel.n1 / c.setup.channel.n0;
         c.setup.channel.n1 = x.number(v);
         c.setup.channel.n0 = c.setup.channel.n1 / ratio;
       }},
      {"channel", "N0_ratio",
       [](RunConfig& c, std::string_view v, const Context& x) {
         const double ratio = x.number(v);
         if (!(ratio > 0.0)) throw ValidationError("N0_ratio > 0");
         c.setup.channel.n0 = c.setup.channel.n1 / ratio;
       }},
      {"channel", "p1",
       [](RunConfig& c, std::string_view v, const Context& x) { c.setup.channel.p1 = x.number(v); }},
      {"channel", "c_int_const",
       [](RunConfig& c, std::string_view v, const Context& x) { c.setup.channel.c_int_const = x.number(v); }},
      {"channel", "beta_per_s",
       [](RunConfig& c, std::string_view v, const Context& x) { c.setup.channel.beta = x.number(v); }},
      {"channel", "sampling_time_s",
       [](RunConfig& c, std::string_view v, const Context& x) {
         if (v == "peak") {
           c.setup.channel.sampling_time.reset();
         } else {
           c.setup.channel.sampling_time = x.number(v);
         }
       }},
      {"receptor", "N_R",
       [](RunConfig& c, std::string_view v, const Context& x) { c.setup.receptor_count = x.integer(v); }},
      {"receptor", "alpha",
       [](RunConfig& c, std::string_view v, const Context& x) { c.setup.alpha = x.number(v); }},
      {"isi", "I",
       [](RunConfig& c, std::string_view v, const Context& x) { c.setup.channel.memory_length = x.integer(v); }},
      {"isi", "memory_M",
       [](RunConfig& c, std::string_view v, const Context& x) { c.setup.memory = x.integer(v); }},
      {"isi", "Ts_factor",
       [](RunConfig& c, std::string_view v, const Context& x) { c.setup.channel.ts_factor = x.number(v); }},
      {"isi", "patterns",
       [](RunConfig& c, std::string_view v, const Context& x) { c.setup.sampled_patterns = x.integer(v); }},
      {"interference", "mean_over_Kstar",
       [](RunConfig& c, std::string_view v, const Context& x) {
         c.setup.interference_mean_over_kstar = x.number(v);
       }},
      {"interference", "std_fraction",
       [](RunConfig& c, std::string_view v, const Context& x) {
         c.setup.interference_std_fraction = x.number(v);
       }},
      {"scenario", "kind",
       [](RunConfig& c, std::string_view v, const Context& x) {
         const auto k = parse_scenario_kind(v);
         if (!k) x.fail("unknown scenario '" + std::string(v) + "'");
         c.scenario.kind = *k;
       }},
      {"scenario", "grid",
       [](RunConfig& c, std::string_view v, const Context& x) {
         if (v == "default") {
           c.scenario.grid.clear();
           return;
         }
         try {
           c.scenario.grid = parse_grid(v);
         } catch (const ConfigError& e) {
           x.fail(e.what());
         }
       }},
      {"scenario", "architectures",
       [](RunConfig& c, std::string_view v, const Context& x) {
         c.scenario.architectures.clear();
         for (const auto part : split(v, ',')) {
           const auto a = parse_architecture(part);
           if (!a) x.fail("unknown architecture '" + std::string(part) + "'");
           c.scenario.architectures.push_back(*a);
         }
       }},
      {"scenario", "knowledge",
       [](RunConfig& c, std::string_view v, const Context& x) {
         c.scenario.knowledge.clear();
         for (const auto part : split(v, ',')) {
           const auto k = parse_knowledge(part);
           if (!k) x.fail("unknown knowledge '" + std::string(part) + "'");
           c.scenario.knowledge.push_back(*k);
         }
       }},
      {"scenario", "shift_over_Kstar",
       [](RunConfig& c, std::string_view v, const Context& x) {
         c.setup.ratio_shift_over_kstar = x.number(v);
       }},
      {"oracle", "trials",
       [](RunConfig& c, std::string_view v, const Context& x) { c.setup.oracle.trials = x.count(v); }},
      {"oracle", "seed",
       [](RunConfig& c, std::string_view v, const Context& x) {
         std::uint64_t seed = 0;
         const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), seed);
         if (ec != std::errc() || ptr != v.data() + v.size()) x.fail("expected an unsigned 64-bit seed");
         c.setup.oracle.seed = seed;
       }},
      {"oracle", "mode",
       [](RunConfig& c, std::string_view v, const Context& x) {
         if (v == "genie") {
           c.setup.isi_oracle_modes = {OracleMode::Genie};
         } else if (v == "decision-feedback") {
           c.setup.isi_oracle_modes = {OracleMode::DecisionFeedback};
         } else if (v == "both") {
           c.setup.isi_oracle_modes = {OracleMode::Genie, OracleMode::DecisionFeedback};
         } else {
           x.fail("expected genie, decision-feedback or both");
         }
       }},
      {"oracle", "exact_binomial",
       [](RunConfig& c, std::string_view v, const Context& x) { c.setup.oracle.exact_binomial = x.flag(v); }},
      {"oracle", "chunk_size",
       [](RunConfig& c, std::string_view v, const Context& x) { c.setup.oracle.chunk_size = x.count(v); }},
      {"oracle", "threads",
       [](RunConfig& c, std::string_view v, const Context& x) {
         c.setup.oracle.threads = static_cast<unsigned>(x.integer(v));
       }},
      {"output", "csv_path",
       [](RunConfig& c, std::string_view v, const Context&) { c.output.csv_path = std::string(v); }},
      {"output", "svg_path",
       [](RunConfig& c, std::string_view v, const Context&) { c.output.svg_path = std::string(v); }},
      {"output", "precision",
       [](RunConfig& c, std::string_view v, const Context& x) { c.output.precision = x.integer(v); }},
  };
  return table;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string grid_text(const std::vector<double>& grid) {
  if (grid.empty()) return "default";
  std::string out;
  for (const double v : grid) {
    if (!out.empty()) out += ", ";
    out += format_shortest(v);
  }
  return out;
}

}  // namespace

void RunConfig::validate() const {
  setup.validate();
  scenario.validate(setup);
  if (output.precision < 1 || output.precision > 17) throw ValidationError("precision in [1,17]");
}

std::string format_shortest(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::vector<double> parse_grid(std::string_view text) {
  text = trim(text);
  const bool log = text.starts_with("log:");
  const bool lin = text.starts_with("lin:");
  if (log || lin) {
    const auto parts = split(text.substr(4), ':');
    if (parts.size() != 3) throw ConfigError("grid range needs lo:hi:n");
    const auto lo = to_double(parts[0]);
    const auto hi = to_double(parts[1]);
    const auto n = to_double(parts[2]);
    if (!lo || !hi || !n || *n < 1 || *n != std::floor(*n)) {
      throw ConfigError("bad grid range '" + std::string(text) + "'");
    }
    const int count = static_cast<int>(*n);
    if (log) {
      if (!(*lo > 0.0 && *hi > 0.0)) throw ConfigError("log grid needs positive bounds");
      return log_grid(*lo, *hi, count);
    }
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      out[static_cast<std::size_t>(i)] =
          count == 1 ? *lo : (*lo * (count - 1 - i) + *hi * i) / (count - 1);
    }
    return out;
  }
  std::vector<double> out;
  for (const auto part : split(text, ',')) {
    const auto v = to_double(part);
    if (!v) throw ConfigError("bad grid value '" + std::string(part) + "'");
    out.push_back(*v);
  }
  return out;
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? end : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;

    const auto hash = line.find_first_of("#;");
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, std::string(line), "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      bool known = false;
      for (const auto& k : keys()) known = known || k.section == section;
      if (!known) {
        throw ParseError(line_no, section,
                         "line " + std::to_string(line_no) + ": unknown section '" + section + "'");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(line_no, std::string(line),
                       "line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string name(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (section.empty()) {
      throw ParseError(line_no, name,
                       "line " + std::to_string(line_no) + ": key '" + name + "' outside a section");
    }
    const Key* match = nullptr;
    for (const auto& k : keys()) {
      if (k.section == section && k.name == name) match = &k;
    }
    if (!match) {
      throw ParseError(line_no, name,
                       "line " + std::to_string(line_no) + ": unknown key '" + name +
                           "' in [" + section + "]");
    }
    match->set(cfg, value, Context{line_no, name});
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string canonical_config(const RunConfig& cfg) {
  const auto& s = cfg.setup;
  const auto& ch = s.channel;
  std::ostringstream out;
  out << "[channel]\n"
      << "D_um2_per_s = " << format_shortest(ch.diffusion) << '\n'
      << "distance_um = " << format_shortest(ch.distance) << '\n'
      << "N1 = " << format_shortest(ch.n1) << '\n'
      << "N0_ratio = " << format_shortest(ch.n1 / ch.n0) << '\n'
      << "p1 = " << format_shortest(ch.p1) << '\n'
      << "c_int_const = " << format_shortest(ch.c_int_const) << '\n'
      << "beta_per_s = " << format_shortest(ch.beta) << '\n'
      << "sampling_time_s = "
      << (ch.sampling_time ? format_shortest(*ch.sampling_time) : std::string("peak")) << '\n'
      << "\n[receptor]\n"
      << "N_R = " << s.receptor_count << '\n'
      << "alpha = " << format_shortest(s.alpha) << '\n'
      << "\n[isi]\n"
      << "I = " << ch.memory_length << '\n'
      << "memory_M = " << s.memory << '\n'
      << "Ts_factor = " << format_shortest(ch.ts_factor) << '\n'
      << "patterns = " << s.sampled_patterns << '\n'
      << "\n[interference]\n"
      << "mean_over_Kstar = " << format_shortest(s.interference_mean_over_kstar) << '\n'
      << "std_fraction = " << format_shortest(s.interference_std_fraction) << '\n'
      << "\n[scenario]\n"
      << "kind = " << to_string(cfg.scenario.kind) << '\n'
      << "grid = " << grid_text(cfg.scenario.grid) << '\n'
      << "architectures = " << join_archs(cfg.scenario.architectures) << '\n'
      << "knowledge = ";
  for (std::size_t i = 0; i < cfg.scenario.knowledge.size(); ++i) {
    out << (i ? ", " : "") << to_string(cfg.scenario.knowledge[i]);
  }
  out << '\n'
      << "shift_over_Kstar = " << format_shortest(s.ratio_shift_over_kstar) << '\n'
      << "\n[oracle]\n"
      << "trials = " << s.oracle.trials << '\n'
      << "seed = " << s.oracle.seed << '\n'
      << "mode = " << oracle_mode_text(s.isi_oracle_modes) << '\n'
      << "exact_binomial = " << (s.oracle.exact_binomial ? "true" : "false") << '\n'
      << "chunk_size = " << s.oracle.chunk_size << '\n'
      << "\n[output]\n"
      << "precision = " << cfg.output.precision << '\n';
  return out.str();
}

std::string format_config(const RunConfig& cfg) {
  std::string text = canonical_config(cfg);
  text += "csv_path = " + cfg.output.csv_path + '\n';
  text += "svg_path = " + cfg.output.svg_path + '\n';
  return text;
}

std::uint64_t config_hash(const RunConfig& cfg) { return fnv1a(canonical_config(cfg)); }

}  // namespace amc
