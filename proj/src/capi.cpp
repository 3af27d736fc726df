#include "hdnoma.h"

#include <fstream>
#include <sstream>
#include <string>

#include "sim.hpp"

struct hdnoma_sim {
  hdnoma::SimConfig cfg;
  std::string last_error;
};

namespace {

hdnoma_status fail(hdnoma_sim* sim, hdnoma_status code, const std::string& msg) {
  if (sim) sim->last_error = msg;
  return code;
}

template <typename Fn>
hdnoma_status guarded(hdnoma_sim* sim, Fn&& fn) {
  try {
    fn();
    if (sim) sim->last_error.clear();
    return HDNOMA_OK;
  } catch (const hdnoma::InfeasibleError& e) {
    return fail(sim, HDNOMA_ERR_INFEASIBLE, e.what());
  } catch (const hdnoma::BudgetError& e) {
    return fail(sim, HDNOMA_ERR_BUDGET, e.what());
  } catch (const hdnoma::CodebookError& e) {
    return fail(sim, HDNOMA_ERR_PARSE, e.what());
  } catch (const hdnoma::ConfigError& e) {
    return fail(sim, HDNOMA_ERR_PARSE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(sim, HDNOMA_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(sim, HDNOMA_ERR_INTERNAL, e.what());
  }
}

void emit_lines(const std::string& csv, hdnoma_line_cb on_line, void* user) {
  std::istringstream is(csv);
  std::string line;
  while (std::getline(is, line)) on_line(line.c_str(), user);
}

}  // namespace

extern "C" {

const char* hdnoma_version(void) { return "0.1.0"; }

hdnoma_sim* hdnoma_sim_create(void) { return new (std::nothrow) hdnoma_sim(); }

void hdnoma_sim_destroy(hdnoma_sim* sim) { delete sim; }

hdnoma_status hdnoma_sim_set(hdnoma_sim* sim, const char* key, const char* value) {
  if (!sim) return HDNOMA_ERR_INVALID_ARGUMENT;
  if (!key || !value)
    return fail(sim, HDNOMA_ERR_INVALID_ARGUMENT, "null key or value");
  return guarded(sim, [&] {
    try {
      hdnoma::apply_setting(sim->cfg, key, value);
    } catch (const hdnoma::ConfigError& e) {
      // unknown keys and bad values are argument errors at this surface
      throw std::invalid_argument(e.what());
    }
  });
}

hdnoma_status hdnoma_sim_load_config(hdnoma_sim* sim, const char* path) {
  if (!sim) return HDNOMA_ERR_INVALID_ARGUMENT;
  if (!path) return fail(sim, HDNOMA_ERR_INVALID_ARGUMENT, "null path");
  return guarded(sim, [&] { hdnoma::load_config_file(sim->cfg, path); });
}

hdnoma_status hdnoma_sim_run(hdnoma_sim* sim, const char* experiment,
                             const char* out_path, hdnoma_line_cb on_line, void* user) {
  if (!sim) return HDNOMA_ERR_INVALID_ARGUMENT;
  if (!experiment)
    return fail(sim, HDNOMA_ERR_INVALID_ARGUMENT, "null experiment name");
  if (!out_path && !on_line)
    return fail(sim, HDNOMA_ERR_INVALID_ARGUMENT, "need an output path or a callback");

  std::string csv;
  const std::string exp = experiment;
  hdnoma_status st = guarded(sim, [&] {
    if (exp == "ber") {
      csv = hdnoma::sweep_csv(hdnoma::run_ber_experiment(sim->cfg));
    } else if (exp == "sumrate") {
      csv = hdnoma::sweep_csv(hdnoma::run_sumrate_sweep(sim->cfg));
    } else if (exp == "converge") {
      csv = hdnoma::converge_csv(hdnoma::run_convergence_trace(sim->cfg));
    } else {
      throw std::invalid_argument("unknown experiment '" + exp +
                                  "' (want ber, sumrate, or converge)");
    }
  });
  if (st != HDNOMA_OK) return st;

  if (out_path) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
      return fail(sim, HDNOMA_ERR_IO, std::string("cannot open '") + out_path + "'");
    out << csv;
    if (!out.good())
      return fail(sim, HDNOMA_ERR_IO, std::string("write failed for '") + out_path + "'");
  }
  if (on_line) emit_lines(csv, on_line, user);
  return HDNOMA_OK;
}

const char* hdnoma_sim_last_error(const hdnoma_sim* sim) {
  return sim ? sim->last_error.c_str() : "";
}

hdnoma_status hdnoma_path_loss_db(double distance_km, double* out_db) {
  if (!out_db || !(distance_km > 0.0)) return HDNOMA_ERR_INVALID_ARGUMENT;
  *out_db = hdnoma::path_loss_db(distance_km);
  return HDNOMA_OK;
}

hdnoma_status hdnoma_noise_variance_w(double bandwidth_hz, int subcarriers,
                                      double* out_watts) {
  if (!out_watts || !(bandwidth_hz > 0.0) || subcarriers < 1)
    return HDNOMA_ERR_INVALID_ARGUMENT;
  *out_watts = hdnoma::noise_variance_w(bandwidth_hz, subcarriers);
  return HDNOMA_OK;
}

}  // extern "C"
