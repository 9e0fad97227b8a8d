// dicke-sim: scenario time series and oracle cross-checks from the command line.
//
// Exit codes: 0 success, 1 configuration error, 2 cross-check failure,
// 3 domain error.
#include "dicke/run.hpp"

#include <fstream>
#include <iostream>
#include <vector>

int main(int argc, char** argv) {
  using namespace dicke;
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    const auto cfg = parse_config(args, std::cout);
    if (!cfg) return 0;  // --help

    std::ofstream file;
    if (!cfg->out_path.empty()) {
      file.open(cfg->out_path);
      if (!file) throw Error(Errc::ConfigError, "cannot open output file '" + cfg->out_path + "'");
    }
    std::ostream& os = cfg->out_path.empty() ? std::cout : file;

    if (cfg->cross_check) {
      const auto summary = cross_check(*cfg, os);
      if (!summary.pass) {
        std::cerr << "cross-check failed: " << summary.worst_name << " deviation "
                  << format_number(summary.worst_value) << " at tau = "
                  << format_number(summary.worst_tau) << " (tolerance "
                  << format_number(summary.worst_tol) << ")\n";
        return 2;
      }
      return 0;
    }
    run_scenario(*cfg, os);
    return 0;
  } catch (const Error& e) {
    std::cerr << "dicke-sim: " << e.what() << "\n";
    return e.code() == Errc::ConfigError ? 1 : 3;
  } catch (const std::exception& e) {
    std::cerr << "dicke-sim: " << e.what() << "\n";
    return 3;
  }
}
