// Batch experiment runner over the shared C API.  Subcommands mirror the
// pipeline stages; every artifact carries the config hash and version.
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "nodal/capi.h"

namespace {

int run(const std::string& cmd, const std::string& config_path,
        const std::string& out_dir, bool long_running) {
  std::ifstream f(config_path, std::ios::binary);
  if (!f) {
    std::fprintf(stderr, "error: cannot read config file %s\n",
                 config_path.c_str());
    return NODAL_ERR_CONFIG;
  }
  std::ostringstream ss;
  ss << f.rdbuf();
  char msg[512] = {0};
  const int rc = nodal_run_command(cmd.c_str(), ss.str().c_str(),
                                   out_dir.c_str(), long_running ? 1 : 0, msg,
                                   sizeof(msg));
  if (rc == 0) {
    std::printf("%s\n", msg);
  } else {
    std::fprintf(stderr, "error (%d): %s\n", rc, nodal_last_error());
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("nodal ") + nodal_version() +
               " - eigenfunction restriction experiments"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  int threads = 1;
  bool long_running = false;

  for (const char* name :
       {"solve", "count", "qer", "growth", "weight", "decay"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads,
                    "worker threads (accepted; runs sequentially)");
    sub->add_flag("--long-running", long_running,
                  "allow long experiments (stadium qer)");
  }

  CLI11_PARSE(app, argc, argv);
  return run(app.get_subcommands().front()->get_name(), config_path, out_dir,
             long_running);
}
