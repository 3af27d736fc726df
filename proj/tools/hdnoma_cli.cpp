// Experiment driver for the hybrid-domain NOMA simulator. Thin shell over the
// C API: flags become key/value settings, subcommands pick the experiment.
//
// Exit codes: 0 success, 2 configuration error, 3 infeasible allocation,
// 1 anything else.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hdnoma.h"

namespace {

struct Flag {
  std::string key;      // C API setting key (= flag name without dashes)
  std::string value;    // captured value
  CLI::Option* opt = nullptr;
};

int status_to_exit(hdnoma_status st) {
  switch (st) {
    case HDNOMA_OK: return 0;
    case HDNOMA_ERR_INVALID_ARGUMENT:
    case HDNOMA_ERR_PARSE:
    case HDNOMA_ERR_IO: return 2;
    case HDNOMA_ERR_INFEASIBLE: return 3;
    default: return 1;
  }
}

void print_line(const char* line, void*) { std::printf("%s\n", line); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hybrid-domain NOMA link simulator and resource allocator"};
  app.require_subcommand(1);

  struct SubSpec {
    CLI::App* cmd;
    std::vector<Flag> flags;
    std::string config_path;
    std::string out_path;
  };

  auto add_common = [](CLI::App* cmd, SubSpec& spec) {
    auto flag = [&](const std::string& name, const std::string& desc) {
      spec.flags.push_back({name, "", nullptr});
      Flag& f = spec.flags.back();
      f.opt = cmd->add_option("--" + name, f.value, desc);
    };
    flag("scheme", "hd-noma | scma6 | scma12 | pd-noma12");
    flag("power-dbm-min", "sweep start, dBm");
    flag("power-dbm-max", "sweep end, dBm");
    flag("power-dbm-step", "sweep step, dB");
    flag("power-dbm", "single power point, dBm");
    flag("trials", "channel draws per power point");
    flag("seed", "master seed");
    flag("threads", "worker threads (same results for any count)");
    flag("bw-hz", "system bandwidth, Hz");
    flag("d-strong-km", "strong-group distance, km");
    flag("d-weak-km", "weak-group distance, km");
    flag("noiseless", "disable thermal noise (true/false)");
    flag("genie-sic", "subtract the true strong codewords (true/false)");
    flag("mpa-iters", "message passing iterations");
    flag("mpa-variant", "sumprod | maxlog");
    flag("qos-bps-hz", "weak-group rate floor, bit/s/Hz (default: auto)");
    flag("penalty", "sparsity penalty weight (default: auto)");
    flag("epsilon", "reweighting offset");
    flag("tol", "relative convergence tolerance");
    flag("max-iters", "outer iteration cap");
    flag("oracle", "also run the exhaustive reference (true/false)");
    flag("p-grid", "oracle power grid points per axis");
    flag("codebook", "codebook file (default: built-in set)");
    cmd->add_option("--config", spec.config_path,
                    "flat key=value file; explicit flags override it");
    cmd->add_option("--out", spec.out_path, "output CSV path (default: stdout)");
  };

  SubSpec ber{app.add_subcommand("ber", "uncoded BER versus per-user transmit power")};
  add_common(ber.cmd, ber);
  SubSpec sumrate{app.add_subcommand(
      "sumrate", "sum rate versus per-user transmit power, optimized and baselines")};
  add_common(sumrate.cmd, sumrate);
  SubSpec converge{app.add_subcommand("converge", "allocator objective traces")};
  add_common(converge.cmd, converge);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  SubSpec* spec = nullptr;
  const char* experiment = nullptr;
  if (ber.cmd->parsed()) {
    spec = &ber;
    experiment = "ber";
  } else if (sumrate.cmd->parsed()) {
    spec = &sumrate;
    experiment = "sumrate";
  } else {
    spec = &converge;
    experiment = "converge";
  }

  hdnoma_sim* sim = hdnoma_sim_create();
  if (!sim) {
    std::fprintf(stderr, "error: out of memory\n");
    return 1;
  }

  hdnoma_status st = HDNOMA_OK;
  if (!spec->config_path.empty()) {
    st = hdnoma_sim_load_config(sim, spec->config_path.c_str());
    if (st != HDNOMA_OK) {
      std::fprintf(stderr, "error: %s\n", hdnoma_sim_last_error(sim));
      hdnoma_sim_destroy(sim);
      return status_to_exit(st);
    }
  }
  for (const Flag& f : spec->flags) {
    if (f.opt->count() == 0) continue;
    st = hdnoma_sim_set(sim, f.key.c_str(), f.value.c_str());
    if (st != HDNOMA_OK) {
      std::fprintf(stderr, "error: --%s: %s\n", f.key.c_str(),
                   hdnoma_sim_last_error(sim));
      hdnoma_sim_destroy(sim);
      return status_to_exit(st);
    }
  }

  st = hdnoma_sim_run(sim, experiment,
                      spec->out_path.empty() ? nullptr : spec->out_path.c_str(),
                      spec->out_path.empty() ? print_line : nullptr, nullptr);
  if (st != HDNOMA_OK)
    std::fprintf(stderr, "error: %s\n", hdnoma_sim_last_error(sim));
  int rc = status_to_exit(st);
  hdnoma_sim_destroy(sim);
  return rc;
}
