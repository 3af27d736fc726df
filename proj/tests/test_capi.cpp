#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hdnoma.h"

namespace {

std::string slurp(const char* path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Sim {
  hdnoma_sim* h;
  Sim() : h(hdnoma_sim_create()) {}
  ~Sim() { hdnoma_sim_destroy(h); }
};

}  // namespace

TEST_CASE("version and stateless helpers") {
  CHECK(std::string(hdnoma_version()) == "0.1.0");
  double v = 0.0;
  CHECK(hdnoma_path_loss_db(1.0, &v) == HDNOMA_OK);
  CHECK(v == doctest::Approx(145.4));
  CHECK(hdnoma_path_loss_db(-1.0, &v) == HDNOMA_ERR_INVALID_ARGUMENT);
  CHECK(hdnoma_noise_variance_w(1e6, 4, &v) == HDNOMA_OK);
  CHECK(v == doctest::Approx(9.95e-16).epsilon(0.01));
  CHECK(hdnoma_noise_variance_w(1e6, 0, &v) == HDNOMA_ERR_INVALID_ARGUMENT);
}

TEST_CASE("setting keys: good, bad, and error text") {
  Sim sim;
  REQUIRE(sim.h != nullptr);
  CHECK(hdnoma_sim_set(sim.h, "scheme", "scma6") == HDNOMA_OK);
  CHECK(hdnoma_sim_set(sim.h, "trials", "4") == HDNOMA_OK);
  CHECK(std::string(hdnoma_sim_last_error(sim.h)).empty());
  CHECK(hdnoma_sim_set(sim.h, "bogus", "1") == HDNOMA_ERR_INVALID_ARGUMENT);
  CHECK(std::string(hdnoma_sim_last_error(sim.h)).find("bogus") != std::string::npos);
  CHECK(hdnoma_sim_set(sim.h, nullptr, "1") == HDNOMA_ERR_INVALID_ARGUMENT);
  CHECK(hdnoma_sim_set(nullptr, "trials", "1") == HDNOMA_ERR_INVALID_ARGUMENT);
}

TEST_CASE("run ber to a file, rerun is byte-identical across thread counts") {
  Sim sim;
  CHECK(hdnoma_sim_set(sim.h, "trials", "12") == HDNOMA_OK);
  CHECK(hdnoma_sim_set(sim.h, "power-dbm", "38") == HDNOMA_OK);
  CHECK(hdnoma_sim_set(sim.h, "seed", "77") == HDNOMA_OK);
  const char* out1 = "capi_ber_1.csv";
  const char* out2 = "capi_ber_2.csv";
  REQUIRE(hdnoma_sim_run(sim.h, "ber", out1, nullptr, nullptr) == HDNOMA_OK);
  CHECK(hdnoma_sim_set(sim.h, "threads", "4") == HDNOMA_OK);
  REQUIRE(hdnoma_sim_run(sim.h, "ber", out2, nullptr, nullptr) == HDNOMA_OK);
  std::string a = slurp(out1), b = slurp(out2);
  CHECK(!a.empty());
  CHECK(a == b);
  CHECK(a.rfind("scheme,power_dbm,metric,value,trials,seed\n", 0) == 0);
  std::remove(out1);
  std::remove(out2);
}

TEST_CASE("line callback delivers the same rows") {
  Sim sim;
  CHECK(hdnoma_sim_set(sim.h, "trials", "5") == HDNOMA_OK);
  CHECK(hdnoma_sim_set(sim.h, "power-dbm", "36") == HDNOMA_OK);
  std::vector<std::string> lines;
  auto cb = [](const char* line, void* user) {
    static_cast<std::vector<std::string>*>(user)->push_back(line);
  };
  REQUIRE(hdnoma_sim_run(sim.h, "ber", nullptr, cb, &lines) == HDNOMA_OK);
  REQUIRE(lines.size() == 4);  // header + 3 metrics
  CHECK(lines[0] == "scheme,power_dbm,metric,value,trials,seed");
}

TEST_CASE("config file loading through the C surface") {
  const char* cfg_path = "capi_cfg.txt";
  {
    std::ofstream out(cfg_path);
    out << "trials 3\nscheme scma12\n";
  }
  Sim sim;
  CHECK(hdnoma_sim_load_config(sim.h, cfg_path) == HDNOMA_OK);
  CHECK(hdnoma_sim_load_config(sim.h, "/no/such/file") == HDNOMA_ERR_PARSE);
  std::remove(cfg_path);
}

TEST_CASE("errors map to statuses") {
  Sim sim;
  CHECK(hdnoma_sim_run(sim.h, "nonsense", "x.csv", nullptr, nullptr) ==
        HDNOMA_ERR_INVALID_ARGUMENT);
  CHECK(hdnoma_sim_run(sim.h, "ber", nullptr, nullptr, nullptr) ==
        HDNOMA_ERR_INVALID_ARGUMENT);

  // unattainable weak-group floor: infeasible allocation
  CHECK(hdnoma_sim_set(sim.h, "trials", "1") == HDNOMA_OK);
  CHECK(hdnoma_sim_set(sim.h, "power-dbm", "30") == HDNOMA_OK);
  CHECK(hdnoma_sim_set(sim.h, "qos-bps-hz", "1e5") == HDNOMA_OK);
  CHECK(hdnoma_sim_run(sim.h, "sumrate", "capi_never.csv", nullptr, nullptr) ==
        HDNOMA_ERR_INFEASIBLE);
  CHECK(std::string(hdnoma_sim_last_error(sim.h)).find("unattainable") !=
        std::string::npos);

  // bad codebook file: parse error
  const char* cb_path = "capi_bad_codebook.txt";
  {
    std::ofstream out(cb_path);
    out << "not a codebook";
  }
  CHECK(hdnoma_sim_set(sim.h, "qos-bps-hz", "0") == HDNOMA_OK);
  CHECK(hdnoma_sim_set(sim.h, "codebook", cb_path) == HDNOMA_OK);
  CHECK(hdnoma_sim_run(sim.h, "ber", "capi_never.csv", nullptr, nullptr) ==
        HDNOMA_ERR_PARSE);
  std::remove(cb_path);
  std::remove("capi_never.csv");
}
