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

#include "creditis/creditis.h"

#include <cstring>
#include <exception>
#include <limits>
#include <new>
#include <string>
#include <vector>

#include "creditis/app/config.hpp"
#include "creditis/app/harness.hpp"
#include "creditis/app/report.hpp"
#include "creditis/common/error.hpp"
#include "creditis/lossdist/lossdist.hpp"

struct creditis_config {
  creditis::app::RunConfig config;
};

struct creditis_report {
  std::vector<creditis::app::ReportRow> rows;
  std::vector<std::string> notes;
  std::string out_path;
  char delimiter = ',';
};

namespace {

thread_local std::string g_error;
thread_local int g_error_line = 0;

creditis_status status_of(creditis::ErrorKind kind) {
  switch (kind) {
    case creditis::ErrorKind::kInvalidArgument:
      return CREDITIS_E_INVALID_ARGUMENT;
    case creditis::ErrorKind::kDomain:
      return CREDITIS_E_DOMAIN;
    case creditis::ErrorKind::kConfig:
      return CREDITIS_E_CONFIG;
    case creditis::ErrorKind::kNumerical:
      return CREDITIS_E_NUMERICAL;
    case creditis::ErrorKind::kDegeneratePilot:
      return CREDITIS_E_DEGENERATE_PILOT;
    case creditis::ErrorKind::kIo:
      return CREDITIS_E_IO;
  }
  return CREDITIS_E_INTERNAL;
}

creditis_status fail(creditis_status s, const std::string& what, int line = 0) {
  g_error = what;
  g_error_line = line;
  return s;
}

// Runs f, translating exceptions into status codes.
template <typename F>
creditis_status guard(F&& f) {
  g_error.clear();
  g_error_line = 0;
  try {
    f();
    return CREDITIS_OK;
  } catch (const creditis::ConfigError& e) {
    return fail(CREDITIS_E_CONFIG, e.what(), e.line());
  } catch (const creditis::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(CREDITIS_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CREDITIS_E_INTERNAL, e.what());
  } catch (...) {
    return fail(CREDITIS_E_INTERNAL, "unknown exception");
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool ok, const char* what) {
  if (!ok) throw creditis::InvalidArgument(what);
}

creditis_report* make_report(creditis::app::TableReport&& t) {
  auto* r = new creditis_report;
  r->rows = std::move(t.rows);
  r->notes = std::move(t.notes);
  if (!t.title.empty()) r->notes.insert(r->notes.begin(), t.title);
  return r;
}

}  // namespace

extern "C" {

const char* creditis_version(void) { return "0.1.0"; }

const char* creditis_status_name(creditis_status status) {
  switch (status) {
    case CREDITIS_OK:
      return "ok";
    case CREDITIS_E_INVALID_ARGUMENT:
      return "invalid argument";
    case CREDITIS_E_DOMAIN:
      return "domain error";
    case CREDITIS_E_CONFIG:
      return "configuration error";
    case CREDITIS_E_NUMERICAL:
      return "numerical failure";
    case CREDITIS_E_DEGENERATE_PILOT:
      return "degenerate pilot";
    case CREDITIS_E_IO:
      return "i/o error";
    case CREDITIS_E_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* creditis_last_error(void) { return g_error.c_str(); }
int creditis_last_error_line(void) { return g_error_line; }
void creditis_string_free(char* text) { delete[] text; }

creditis_status creditis_config_parse(const char* text, creditis_config** out) {
  return guard([&] {
    require(text && out, "creditis_config_parse: null argument");
    *out = nullptr;
    auto* c = new creditis_config{creditis::app::parse_config(text)};
    *out = c;
  });
}

creditis_status creditis_config_load(const char* path, creditis_config** out) {
  return guard([&] {
    require(path && out, "creditis_config_load: null argument");
    *out = nullptr;
    auto* c = new creditis_config{creditis::app::load_config(path)};
    *out = c;
  });
}

void creditis_config_free(creditis_config* config) { delete config; }

creditis_status creditis_config_set(creditis_config* config, const char* section,
                                    const char* key, const char* value) {
  return guard([&] {
    require(config && section && key && value, "creditis_config_set: null argument");
    creditis::app::set_config_value(config->config, section, key, value);
  });
}

creditis_status creditis_config_serialize(const creditis_config* config, char** text) {
  return guard([&] {
    require(config && text, "creditis_config_serialize: null argument");
    *text = dup_string(creditis::app::serialize_config(config->config));
  });
}

creditis_status creditis_config_hash(const creditis_config* config, char out[17]) {
  return guard([&] {
    require(config && out, "creditis_config_hash: null argument");
    const std::string h = creditis::app::config_hash(config->config);
    std::memcpy(out, h.c_str(), 17);
  });
}

creditis_status creditis_config_validate(const creditis_config* config) {
  return guard([&] {
    require(config, "creditis_config_validate: null argument");
    (void)creditis::app::resolve(config->config);
  });
}

size_t creditis_report_row_count(const creditis_report* report) {
  return report ? report->rows.size() : 0;
}

creditis_status creditis_report_row(const creditis_report* report, size_t index,
                                    creditis_row* out) {
  return guard([&] {
    require(report && out, "creditis_report_row: null argument");
    require(index < report->rows.size(), "creditis_report_row: index out of range");
    const auto& r = report->rows[index];
    out->experiment_id = r.experiment_id.c_str();
    out->mode = r.mode.c_str();
    out->estimate = r.estimate;
    out->variance = r.variance;
    out->std_error = r.std_error;
    out->vr_factor = r.vr_factor;
    out->iterations = r.iterations;
    out->converged = r.converged ? 1 : 0;
    out->search_time_s = r.search_time_s;
    out->estimate_time_s = r.estimate_time_s;
    out->seed = r.seed;
    out->config_hash = r.config_hash.c_str();
    out->has_ref_estimate = r.ref_estimate.has_value();
    out->ref_estimate = r.ref_estimate.value_or(0.0);
    out->has_ref_vr = r.ref_vr.has_value();
    out->ref_vr = r.ref_vr.value_or(0.0);
    out->note = r.note.c_str();
  });
}

creditis_status creditis_report_format(const creditis_report* report, char delimiter, int timed,
                                       char** text) {
  return guard([&] {
    require(report && text, "creditis_report_format: null argument");
    *text = dup_string(timed ? creditis::app::format_report(report->rows, delimiter, report->notes)
                             : creditis::app::format_report_untimed(report->rows, delimiter,
                                                                    report->notes));
  });
}

const char* creditis_report_output_path(const creditis_report* report) {
  return report ? report->out_path.c_str() : "";
}

char creditis_report_delimiter(const creditis_report* report) {
  return report ? report->delimiter : ',';
}

int creditis_report_all_converged(const creditis_report* report) {
  if (!report) return 0;
  for (const auto& r : report->rows) {
    if (!r.converged) return 0;
  }
  return 1;
}

void creditis_report_free(creditis_report* report) { delete report; }

creditis_status creditis_run(const creditis_config* config, creditis_report** out) {
  return guard([&] {
    require(config && out, "creditis_run: null argument");
    *out = nullptr;
    const creditis::app::ResolvedRun run = creditis::app::resolve(config->config);
    const std::string hash = creditis::app::config_hash(config->config);
    const auto res = creditis::engine::run_experiment(run.model, run.shock, run.experiment, run.mode);
    auto* r = new creditis_report;
    const std::uint64_t seed = run.experiment.seed;
    if (res.crude) r->rows.push_back(creditis::app::make_row(run.id, *res.crude, seed, hash));
    if (res.is) r->rows.push_back(creditis::app::make_row(run.id, *res.is, seed, hash));
    r->out_path = run.out_path;
    r->delimiter = run.delimiter;
    *out = r;
  });
}

void creditis_table_options_init(creditis_table_options* options) {
  if (!options) return;
  options->has_seed = 0;
  options->seed = 0;
  options->b1 = 0;
  options->b2 = 0;
  options->threads = 1;
}

creditis_status creditis_reproduce_table(int id, const creditis_table_options* options,
                                         creditis_report** out) {
  return guard([&] {
    require(out, "creditis_reproduce_table: null argument");
    *out = nullptr;
    creditis::app::TableOptions o;
    if (options) {
      if (options->has_seed) o.seed = options->seed;
      if (options->b1) o.b1 = static_cast<std::size_t>(options->b1);
      if (options->b2) o.b2 = static_cast<std::size_t>(options->b2);
      o.threads = options->threads < 1 ? 1 : options->threads;
    }
    *out = make_report(creditis::app::reproduce_table(id, o));
  });
}

void creditis_demo_options_init(creditis_demo_options* options) {
  if (!options) return;
  const creditis::fam::DemoOptions d;
  options->samples = d.samples;
  options->pilot = d.pilot;
  options->seed = d.seed;
}

creditis_status creditis_tilt_demo(const char* family, const char* event,
                                   const creditis_demo_options* options, creditis_report** out) {
  return guard([&] {
    require(family && event && out, "creditis_tilt_demo: null argument");
    *out = nullptr;
    creditis::fam::DemoOptions o;
    if (options) {
      require(options->samples > 0 && options->pilot > 0,
              "creditis_tilt_demo: samples and pilot must be positive");
      o.samples = static_cast<std::size_t>(options->samples);
      o.pilot = static_cast<std::size_t>(options->pilot);
      o.seed = options->seed;
    }
    *out = make_report(creditis::app::tilt_demo_report(family, event, o));
  });
}

creditis_status creditis_loss_pmf(const double* p, const int64_t* exposures, size_t n,
                                  double* pmf, size_t pmf_len) {
  return guard([&] {
    require(p && exposures && pmf, "creditis_loss_pmf: null argument");
    const std::vector<std::int64_t> c(exposures, exposures + n);
    const creditis::loss::LossLattice lattice(c);
    require(pmf_len == static_cast<size_t>(lattice.total()) + 1,
            "creditis_loss_pmf: pmf_len must equal sum(exposures) + 1");
    const Eigen::VectorXd pv = Eigen::Map<const Eigen::VectorXd>(p, static_cast<Eigen::Index>(n));
    const auto dist = creditis::loss::loss_pmf(pv, lattice);
    for (size_t k = 0; k < pmf_len; ++k) pmf[k] = dist.pmf[k];
  });
}

creditis_status creditis_loss_tail(const double* p, const int64_t* exposures, size_t n,
                                   int64_t tau, double* out) {
  return guard([&] {
    require(p && exposures && out, "creditis_loss_tail: null argument");
    const creditis::loss::LossLattice lattice(std::vector<std::int64_t>(exposures, exposures + n));
    const Eigen::VectorXd pv = Eigen::Map<const Eigen::VectorXd>(p, static_cast<Eigen::Index>(n));
    for (size_t k = 0; k < n; ++k) {
      require(p[k] >= 0.0 && p[k] <= 1.0, "creditis_loss_tail: probability outside [0, 1]");
    }
    if (tau >= lattice.total()) {
      *out = 0.0;
      return;
    }
    if (tau < 0) {
      *out = 1.0;
      return;
    }
    creditis::loss::TailEvaluator eval(lattice, tau);
    *out = eval(pv);
  });
}

}  // extern "C"
