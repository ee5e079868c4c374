#include "fermigas.h"

#include <cstring>
#include <new>
#include <string>

#include "../core/commands.hpp"
#include "../core/config.hpp"
#include "../core/correlation.hpp"
#include "../core/kernel.hpp"
#include "../core/plasmon.hpp"
#include "../core/riemann.hpp"
#include "../core/verify.hpp"

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = new (std::nothrow) char[s.size() + 1];
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class Fn>
fg_status guarded(Fn&& fn) {
  try {
    fn();
    return FG_OK;
  } catch (const fg::AdmissibilityError& e) {
    g_last_error = e.what();
    return FG_ERR_INADMISSIBLE;
  } catch (const fg::ConfigError& e) {
    g_last_error = e.what();
    return FG_ERR_CONFIG;
  } catch (const fg::Error& e) {
    g_last_error = e.what();
    return FG_ERR_INVALID;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FG_ERR_INTERNAL;
  }
}

fg::Momentum to_momentum(const int k[3]) { return fg::Momentum{k[0], k[1], k[2]}; }

}  // namespace

struct fg_system {
  fg::FermiSystem sys;
};
struct fg_lune {
  fg::Lune lune;
};
struct fg_bundle {
  fg::KernelBundle bundle;
};

extern "C" {

const char* fg_version(void) { return fg::kToolVersion; }

const char* fg_last_error(void) { return g_last_error.c_str(); }

void fg_string_free(char* s) { delete[] s; }

fg_status fg_system_create(const char* json, fg_system** out) {
  if (!json || !out) {
    g_last_error = "null argument";
    return FG_ERR_INVALID;
  }
  return guarded([&] {
    nlohmann::json doc;
    doc["system"] = nlohmann::json::parse(json);
    const fg::RunConfig cfg = fg::parse_config(doc);
    *out = new fg_system{cfg.system};
  });
}

void fg_system_free(fg_system* sys) { delete sys; }

fg_status fg_lune_create(int64_t kf2, const int k[3], fg_lune** out) {
  if (!k || !out) {
    g_last_error = "null argument";
    return FG_ERR_INVALID;
  }
  return guarded([&] { *out = new fg_lune{fg::enumerate_lune(kf2, to_momentum(k))}; });
}

void fg_lune_free(fg_lune* lune) { delete lune; }

int64_t fg_lune_size(const fg_lune* lune) { return lune ? int64_t(lune->lune.size()) : -1; }

fg_status fg_lune_lambda_range(const fg_lune* lune, double* min_out, double* max_out) {
  if (!lune || !min_out || !max_out) {
    g_last_error = "null argument";
    return FG_ERR_INVALID;
  }
  return guarded([&] {
    *min_out = lune->lune.lambda_min();
    *max_out = lune->lune.lambda_max();
  });
}

fg_status fg_ball_size(int64_t kf2, int64_t* out) {
  if (!out) {
    g_last_error = "null argument";
    return FG_ERR_INVALID;
  }
  return guarded([&] { *out = int64_t(fg::enumerate_fermi_ball(kf2).size()); });
}

fg_status fg_power_sum(const fg_lune* lune, double beta, double* out) {
  if (!lune || !out) {
    g_last_error = "null argument";
    return FG_ERR_INVALID;
  }
  return guarded([&] { *out = fg::power_sum(lune->lune, beta).value; });
}

fg_status fg_continuum_integral(double kf, double k_norm, double beta, double* out) {
  if (!out) {
    g_last_error = "null argument";
    return FG_ERR_INVALID;
  }
  return guarded([&] { *out = fg::continuum_integral(kf, k_norm, beta); });
}

fg_status fg_bundle_create(const fg_system* sys, const int k[3], fg_bundle** out) {
  if (!sys || !k || !out) {
    g_last_error = "null argument";
    return FG_ERR_INVALID;
  }
  return guarded([&] {
    *out = new fg_bundle{fg::build_kernel_bundle(sys->sys, to_momentum(k))};
  });
}

void fg_bundle_free(fg_bundle* b) { delete b; }

fg_status fg_bundle_trace_check(const fg_bundle* b, double* lhs, double* rhs) {
  if (!b || !lhs || !rhs) {
    g_last_error = "null argument";
    return FG_ERR_INVALID;
  }
  return guarded([&] {
    const fg::TraceCheck chk = fg::trace_formula_check(b->bundle);
    *lhs = chk.lhs;
    *rhs = chk.rhs;
  });
}

fg_status fg_bundle_diag_residual(const fg_bundle* b, double* out) {
  if (!b || !out) {
    g_last_error = "null argument";
    return FG_ERR_INVALID;
  }
  return guarded([&] { *out = fg::diagonalization_residual(b->bundle); });
}

fg_status fg_fermi_energy(const fg_system* sys, double* out) {
  if (!sys || !out) {
    g_last_error = "null argument";
    return FG_ERR_INVALID;
  }
  return guarded([&] { *out = fg::fermi_energy(sys->sys); });
}

fg_status fg_e_corr_bos(const fg_system* sys, int cutoff, int jobs, double* out) {
  if (!sys || !out) {
    g_last_error = "null argument";
    return FG_ERR_INVALID;
  }
  return guarded([&] { *out = fg::e_corr_bos(sys->sys, cutoff, jobs).total; });
}

fg_status fg_e_corr_ex(const fg_system* sys, int cutoff, int jobs, double* out) {
  if (!sys || !out) {
    g_last_error = "null argument";
    return FG_ERR_INVALID;
  }
  return guarded([&] { *out = fg::e_corr_ex(sys->sys, cutoff, jobs); });
}

fg_status fg_error_scale(const fg_system* sys, int cutoff, double* out) {
  if (!sys || !out) {
    g_last_error = "null argument";
    return FG_ERR_INVALID;
  }
  return guarded([&] { *out = fg::error_scale(sys->sys, cutoff); });
}

fg_status fg_plasmon_epsilon(const fg_system* sys, const int k[3], double* out) {
  if (!sys || !k || !out) {
    g_last_error = "null argument";
    return FG_ERR_INVALID;
  }
  return guarded([&] { *out = fg::compute_mode(sys->sys, to_momentum(k)).epsilon; });
}

namespace {

fg_status run_table(const char* config, char** out,
                    fg::ResultTable (*cmd)(const fg::RunConfig&)) {
  if (!config || !out) {
    g_last_error = "null argument";
    return FG_ERR_INVALID;
  }
  return guarded([&] {
    const fg::RunConfig cfg = fg::parse_config_text(config);
    const fg::ResultTable table = cmd(cfg);
    *out = dup_string(fg::render(table, cfg.format));
    if (!*out) throw std::bad_alloc();
  });
}

}  // namespace

fg_status fg_cmd_lune(const char* config, char** out) { return run_table(config, out, fg::cmd_lune); }
fg_status fg_cmd_riemann(const char* config, char** out) {
  return run_table(config, out, fg::cmd_riemann);
}
fg_status fg_cmd_corr(const char* config, char** out) { return run_table(config, out, fg::cmd_corr); }
fg_status fg_cmd_plasmon(const char* config, char** out) {
  return run_table(config, out, fg::cmd_plasmon);
}

fg_status fg_cmd_verify(const char* config, char** report, int* all_passed) {
  if (!config || !report || !all_passed) {
    g_last_error = "null argument";
    return FG_ERR_INVALID;
  }
  return guarded([&] {
    const fg::RunConfig cfg = fg::parse_config_text(config);
    const fg::VerifyReport rep = fg::run_verify(cfg);
    *report = dup_string(fg::render_verify(rep, cfg));
    if (!*report) throw std::bad_alloc();
    *all_passed = rep.all_passed ? 1 : 0;
  });
}

}  // extern "C"
