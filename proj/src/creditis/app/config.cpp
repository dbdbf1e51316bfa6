// Copyright 2026 The creditis Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "creditis/app/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "creditis/common/error.hpp"

namespace creditis::app {

namespace {

template <typename F>
void for_each_field(ModelSection& s, F&& f) {
  f("preset", s.preset);
  f("structure", s.structure);
  f("n", s.n);
  f("d", s.d);
  f("loading", s.loading);
  f("sectors", s.sectors);
  f("global_loading", s.global_loading);
  f("sector_loading", s.sector_loading);
  f("threshold", s.threshold);
  f("threshold_scale", s.threshold_scale);
  f("exposures", s.exposures);
  f("sigma_eps", s.sigma_eps);
  f("factor_sigma", s.factor_sigma);
  f("factor_rho", s.factor_rho);
  f("direction", s.direction);
}

template <typename F>
void for_each_field(ShockSection& s, F&& f) {
  f("variant", s.variant);
  f("nu", s.nu);
  f("alpha", s.alpha);
  f("beta", s.beta);
  f("sharing", s.sharing);
}

template <typename F>
void for_each_field(ExperimentSection& s, F&& f) {
  f("id", s.id);
  f("b", s.b);
  f("tau", s.tau);
  f("B1", s.b1);
  f("B2", s.b2);
  f("eps", s.eps);
  f("max_iter", s.max_iter);
  f("seed", s.seed);
  f("tilt", s.tilt);
  f("mode", s.mode);
  f("threads", s.threads);
  f("crude_conditional", s.crude_conditional);
  f("crude_samples", s.crude_samples);
}

template <typename F>
void for_each_field(OutputSection& s, F&& f) {
  f("path", s.path);
  f("format", s.format);
}

template <typename F>
void for_each_section(RunConfig& c, F&& f) {
  f("model", c.model);
  f("shock", c.shock);
  f("experiment", c.experiment);
  f("output", c.output);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
bool parse_number(const std::string& text, T& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

void parse_value(const std::string& text, std::string& out, int) { out = text; }

void parse_value(const std::string& text, std::int64_t& out, int line) {
  if (!parse_number(text, out)) throw ConfigError("expected an integer, got '" + text + "'", line);
}

void parse_value(const std::string& text, std::uint64_t& out, int line) {
  if (!parse_number(text, out)) {
    throw ConfigError("expected a non-negative integer, got '" + text + "'", line);
  }
}

void parse_value(const std::string& text, double& out, int line) {
  if (!parse_number(text, out) || !std::isfinite(out)) {
    throw ConfigError("expected a finite number, got '" + text + "'", line);
  }
}

void parse_value(const std::string& text, bool& out, int line) {
  if (text == "true") {
    out = true;
  } else if (text == "false") {
    out = false;
  } else {
    throw ConfigError("expected true or false, got '" + text + "'", line);
  }
}

void parse_value(const std::string& text, std::vector<double>& out, int line) {
  out.clear();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    parse_value(trim(item), v, line);
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("expected a comma-separated list of numbers", line);
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_value(const std::string& v) { return v; }
std::string format_value(std::int64_t v) { return std::to_string(v); }
std::string format_value(std::uint64_t v) { return std::to_string(v); }
std::string format_value(double v) { return format_double(v); }
std::string format_value(bool v) { return v ? "true" : "false"; }
std::string format_value(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_double(v[i]);
  }
  return out;
}

int line_of(const RunConfig& c, const std::string& key) {
  const auto it = c.lines.find(key);
  return it == c.lines.end() ? 0 : it->second;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("unterminated section header", line);
      section = trim(s.substr(1, s.size() - 2));
      bool known = false;
      for_each_section(cfg, [&](const char* name, auto&) { known = known || section == name; });
      if (!known) throw ConfigError("unknown section [" + section + "]", line);
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", line);
    const std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    const auto hash = value.find(" #");
    if (hash != std::string::npos) value = trim(value.substr(0, hash));
    if (section.empty()) throw ConfigError("key '" + key + "' outside any section", line);
    if (value.empty()) throw ConfigError("key '" + key + "' has no value", line);
    bool found = false;
    for_each_section(cfg, [&](const char* name, auto& sec) {
      if (section != name) return;
      for_each_field(sec, [&](const char* field, auto& slot) {
        if (key != field) return;
        found = true;
        if (slot) throw ConfigError("duplicate key '" + key + "'", line);
        typename std::remove_reference_t<decltype(slot)>::value_type v{};
        parse_value(value, v, line);
        slot = std::move(v);
        cfg.lines[section + "." + key] = line;
      });
    });
    if (!found) throw ConfigError("unknown key '" + key + "' in [" + section + "]", line);
  }
  return cfg;
}

void set_config_value(RunConfig& cfg, const std::string& section, const std::string& key,
                      const std::string& value) {
  bool found = false;
  for_each_section(cfg, [&](const char* name, auto& sec) {
    if (section != name) return;
    for_each_field(sec, [&](const char* field, auto& slot) {
      if (key != field) return;
      found = true;
      typename std::remove_reference_t<decltype(slot)>::value_type v{};
      parse_value(trim(value), v, 0);
      slot = std::move(v);
      cfg.lines.erase(section + "." + key);
    });
  });
  if (!found) throw ConfigError("unknown key '" + key + "' in [" + section + "]");
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& config) {
  RunConfig c = config;
  std::string out;
  for_each_section(c, [&](const char* name, auto& sec) {
    std::string body;
    for_each_field(sec, [&](const char* field, auto& slot) {
      if (slot) body += std::string(field) + " = " + format_value(*slot) + "\n";
    });
    if (body.empty()) return;
    if (!out.empty()) out += "\n";
    out += "[" + std::string(name) + "]\n" + body;
  });
  return out;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const RunConfig& config) {
  RunConfig c = config;
  c.experiment.threads.reset();
  c.output = OutputSection{};
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(serialize_config(c))));
  return buf;
}

ResolvedRun resolve(const RunConfig& c) {
  ResolvedRun out;
  const ModelSection& m = c.model;
  const ShockSection& s = c.shock;
  const ExperimentSection& e = c.experiment;
  // Runs `body`, rewriting library exceptions as ConfigError at `key`.
  auto guarded = [&](const std::string& key, auto&& body) {
    try {
      body();
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& err) {
      throw ConfigError(key + ": " + err.what(), line_of(c, key));
    }
  };

  double b = 0.0;
  bool have_b = false;
  if (m.preset) {
    guarded("model.preset", [&] {
      const port::Preset p = port::preset(*m.preset);
      out.blueprint = p.blueprint;
      out.shock = p.shock;
      out.experiment.mask = p.mask;
      b = p.b;
      have_b = true;
    });
  } else {
    out.shock = port::ShockSpec::degenerate();
  }

  port::ModelBlueprint& bp = out.blueprint;
  auto positive_int = [&](const std::string& key, std::int64_t v) {
    if (v < 1 || v > 1000000) throw ConfigError(key + " must lie in [1, 1e6]", line_of(c, key));
    return static_cast<int>(v);
  };
  if (m.structure) bp.structure = *m.structure;
  if (m.n) bp.n = positive_int("model.n", *m.n);
  if (m.d) bp.d = positive_int("model.d", *m.d);
  if (m.sectors) bp.sectors = positive_int("model.sectors", *m.sectors);
  if (m.loading) bp.loading = *m.loading;
  if (m.global_loading) bp.global_loading = *m.global_loading;
  if (m.sector_loading) bp.sector_loading = *m.sector_loading;
  if (m.threshold_scale) {
    bp.threshold_scale = *m.threshold_scale;
    bp.threshold.reset();
  }
  if (m.threshold) bp.threshold = *m.threshold;
  if (m.exposures) {
    guarded("model.exposures", [&] { bp.exposures = port::parse_exposure_kind(*m.exposures); });
  }
  if (m.sigma_eps) {
    if (!(*m.sigma_eps > 0.0)) throw ConfigError("sigma_eps must be positive", line_of(c, "model.sigma_eps"));
    bp.sigma_eps = *m.sigma_eps;
  }
  if (m.factor_sigma) bp.factor_sigma = *m.factor_sigma;
  if (m.factor_rho) bp.factor_rho = *m.factor_rho;
  if (m.d && !m.factor_sigma && static_cast<int>(bp.factor_sigma.size()) != bp.d) {
    bp.factor_sigma.assign(bp.d, 1.0);
  }
  if (m.direction) {
    if (*m.direction == "above") {
      bp.direction = port::Direction::kAbove;
    } else if (*m.direction == "below") {
      bp.direction = port::Direction::kBelow;
    } else {
      throw ConfigError("direction must be above or below", line_of(c, "model.direction"));
    }
  }
  guarded(m.preset ? "model.preset" : "model.structure", [&] {
    out.model = bp.build();
    out.model.validate();
  });

  // Shock law: start from the preset, then apply overrides.
  if (s.variant) {
    if (*s.variant == "t_copula") {
      out.shock.kind = port::ShockKind::kTCopula;
    } else if (*s.variant == "gamma_direct") {
      out.shock.kind = port::ShockKind::kGammaDirect;
    } else if (*s.variant == "degenerate") {
      out.shock = port::ShockSpec::degenerate();
    } else {
      throw ConfigError("variant must be t_copula, gamma_direct or degenerate",
                        line_of(c, "shock.variant"));
    }
  }
  if (s.nu) out.shock.nu = *s.nu;
  if (s.alpha) out.shock.alpha = *s.alpha;
  if (s.beta) out.shock.beta = *s.beta;
  if (s.sharing) {
    if (*s.sharing == "shared") {
      out.shock.sharing = port::Sharing::kShared;
    } else if (*s.sharing == "independent") {
      out.shock.sharing = port::Sharing::kIndependent;
    } else {
      throw ConfigError("sharing must be shared or independent", line_of(c, "shock.sharing"));
    }
  }
  guarded(s.variant ? "shock.variant" : (s.nu ? "shock.nu" : "model.preset"),
          [&] { out.shock.validate(out.model.d()); });

  engine::ExperimentConfig& x = out.experiment;
  auto count = [&](const std::string& key, std::int64_t v) {
    if (v < 1) throw ConfigError(key + " must be at least 1", line_of(c, key));
    return static_cast<std::size_t>(v);
  };
  if (e.b) {
    b = *e.b;
    have_b = true;
  }
  if (e.tau) {
    if (*e.tau < 0 || *e.tau > out.model.total_exposure()) {
      throw ConfigError("tau must lie in [0, total exposure]", line_of(c, "experiment.tau"));
    }
    x.tau = *e.tau;
  } else if (!have_b) {
    throw ConfigError("[experiment] needs b or tau");
  } else if (!(b >= 0.0) ||
             port::tau_from_b(out.model.n(), b) > out.model.total_exposure()) {
    throw ConfigError("b puts tau beyond the total exposure", line_of(c, "experiment.b"));
  }
  x.b = b;
  if (e.b1) x.b1 = count("experiment.B1", *e.b1);
  if (e.b2) x.b2 = count("experiment.B2", *e.b2);
  if (e.eps) {
    if (!(*e.eps > 0.0)) throw ConfigError("eps must be positive", line_of(c, "experiment.eps"));
    x.eps = *e.eps;
  }
  if (e.max_iter) x.max_iter = static_cast<int>(count("experiment.max_iter", *e.max_iter));
  if (e.seed) x.seed = *e.seed;
  if (e.tilt) guarded("experiment.tilt", [&] { x.mask = port::TiltMask::parse(*e.tilt); });
  if (e.threads) x.threads = static_cast<int>(count("experiment.threads", *e.threads));
  if (e.crude_conditional) x.crude_conditional = *e.crude_conditional;
  if (e.crude_samples) x.crude_samples = count("experiment.crude_samples", *e.crude_samples);
  if (e.mode) guarded("experiment.mode", [&] { out.mode = engine::parse_mode(*e.mode); });
  guarded(e.tilt ? "experiment.tilt" : "experiment", [&] { x.validate(); });
  out.id = e.id ? *e.id : (m.preset ? *m.preset : std::string("run"));

  if (c.output.path && *c.output.path != "-") out.out_path = *c.output.path;
  if (c.output.format) {
    if (*c.output.format == "csv") {
      out.delimiter = ',';
    } else if (*c.output.format == "tsv") {
      out.delimiter = '\t';
    } else {
      throw ConfigError("format must be csv or tsv", line_of(c, "output.format"));
    }
  }
  return out;
}

}  // namespace creditis::app
